//! Cartan data of finite type (Bourbaki node numbering), symmetrization,
//! Gaussian factorials and binomials, nilpotency orders.
//!
//! Matrices use `a_ij = ⟨α_i^∨, α_j⟩`, so `c_ij = d_i a_ij = (α_i, α_j)` with
//! short roots of squared length 2.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::CycNum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl FromStr for LieType {
    type Err = Error;
    fn from_str(s: &str) -> Result<LieType> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(LieType::A),
            "B" => Ok(LieType::B),
            "C" => Ok(LieType::C),
            "D" => Ok(LieType::D),
            "E" | "E6" | "E7" | "E8" => Ok(LieType::E),
            "F" | "F4" => Ok(LieType::F),
            "G" | "G2" => Ok(LieType::G),
            other => Err(Error::UnknownType(other.to_string())),
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LieType::A => "A",
            LieType::B => "B",
            LieType::C => "C",
            LieType::D => "D",
            LieType::E => "E",
            LieType::F => "F",
            LieType::G => "G",
        };
        write!(f, "{}", s)
    }
}

/// Gram matrix (α_i, α_j) in Bourbaki numbering.
fn gram(lie_type: LieType, m: usize) -> Result<Vec<Vec<i64>>> {
    let bad = || Error::InvalidRank {
        lie_type: lie_type.to_string(),
        rank: m,
    };
    let mut g = vec![vec![0i64; m]; m];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match lie_type {
        LieType::A => {
            if m < 1 {
                return Err(bad());
            }
            for i in 0..m {
                g[i][i] = 2;
                if i + 1 < m {
                    link(&mut g, i, i + 1, -1);
                }
            }
        }
        LieType::B => {
            if m < 2 {
                return Err(bad());
            }
            for i in 0..m - 1 {
                g[i][i] = 4;
                link(&mut g, i, i + 1, -2);
            }
            g[m - 1][m - 1] = 2;
        }
        LieType::C => {
            if m < 2 {
                return Err(bad());
            }
            for i in 0..m - 1 {
                g[i][i] = 2;
                if i + 2 < m {
                    link(&mut g, i, i + 1, -1);
                }
            }
            g[m - 1][m - 1] = 4;
            link(&mut g, m - 2, m - 1, -2);
        }
        LieType::D => {
            if m < 4 {
                return Err(bad());
            }
            for i in 0..m {
                g[i][i] = 2;
            }
            for i in 0..m - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, m - 3, m - 1, -1);
        }
        LieType::E => {
            if !(6..=8).contains(&m) {
                return Err(bad());
            }
            for i in 0..m {
                g[i][i] = 2;
            }
            // 1-3-4-5-...-m with 2 attached to 4
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 2..m - 1 {
                link(&mut g, i, i + 1, -1);
            }
        }
        LieType::F => {
            if m != 4 {
                return Err(bad());
            }
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        LieType::G => {
            if m != 2 {
                return Err(bad());
            }
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    Ok(g)
}

/// Solve `d_i a_ij = d_j a_ji` along the Dynkin graph, smallest positive integers.
fn symmetrizers(a: &[Vec<i64>]) -> Vec<i64> {
    let m = a.len();
    // rational d_i as (num, den)
    let mut d: Vec<Option<(i64, i64)>> = vec![None; m];
    for start in 0..m {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some((1, 1));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (p, q) = d[i].unwrap();
            for j in 0..m {
                if i != j && a[i][j] != 0 && d[j].is_none() {
                    // d_j = d_i a_ij / a_ji
                    let (mut np, mut nq) = (p * a[i][j], q * a[j][i]);
                    if nq < 0 {
                        np = -np;
                        nq = -nq;
                    }
                    let g = np.gcd(&nq);
                    d[j] = Some((np / g, nq / g));
                    stack.push(j);
                }
            }
        }
    }
    let l = d.iter().fold(1i64, |acc, x| acc.lcm(&x.unwrap().1));
    let mut out: Vec<i64> = d.iter().map(|x| x.unwrap().0 * l / x.unwrap().1).collect();
    let g = out.iter().fold(0i64, |acc, x| acc.gcd(x));
    for x in out.iter_mut() {
        *x /= g;
    }
    out
}

/// Cartan datum together with the grid order `n` and `N = n²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanDatum {
    pub lie_type: LieType,
    pub m: usize,
    pub a: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    pub c: Vec<Vec<i64>>,
    pub n: u64,
    pub big_n: u64,
    pub l: Vec<u64>,
}

pub fn make_datum(lie_type: LieType, m: usize, n: u64) -> Result<CartanDatum> {
    if n < 2 {
        return Err(Error::GridTooSmall(n));
    }
    let g = gram(lie_type, m)?;
    let a: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| 2 * g[i][j] / g[i][i]).collect())
        .collect();
    let d = symmetrizers(&a);
    let c: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| d[i] * a[i][j]).collect())
        .collect();
    let big_n = n * n;
    let l = (0..m).map(|i| order_of(c[i][i], big_n)).collect();
    Ok(CartanDatum {
        lie_type,
        m,
        a,
        d,
        c,
        n,
        big_n,
        l,
    })
}

/// Multiplicative order of ζ_N^e.
pub fn order_of(e: i64, big_n: u64) -> u64 {
    let r = e.rem_euclid(big_n as i64) as u64;
    big_n / big_n.gcd(&r)
}

impl CartanDatum {
    pub fn nilpotency_order(&self, i: usize) -> u64 {
        self.l[i]
    }

    /// Label such as `A2` or `E6`.
    pub fn label(&self) -> String {
        format!("{}{}", self.lie_type, self.m)
    }

    /// ζ_N^e in the field of this datum.
    pub fn q(&self, e: i64) -> CycNum {
        CycNum::root(self.big_n, e)
    }

    /// 𝔮^e = q^{ne}.
    pub fn frak(&self, e: i64) -> CycNum {
        CycNum::root(self.big_n, e * self.n as i64)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.m).all(|i| (0..self.m).all(|j| self.c[i][j] == self.c[j][i]))
    }

    pub fn is_valid_cartan(&self) -> bool {
        (0..self.m).all(|i| {
            self.a[i][i] == 2
                && (0..self.m)
                    .all(|j| i == j || (self.a[i][j] <= 0 && ((self.a[i][j] == 0) == (self.a[j][i] == 0))))
        })
    }
}

/// `[Nn]_d^! = ∏_{h=1}^{Nn} (q^{dh} − q^{−dh})/(q^d − q^{−d})` in ℚ(ζ_order).
pub fn gauss_factorial(order: u64, nn: u64, d: i64) -> Result<CycNum> {
    let mut acc = CycNum::one(order);
    if nn == 0 {
        return Ok(acc);
    }
    let den = &CycNum::root(order, d) - &CycNum::root(order, -d);
    if den.is_zero() {
        return Err(Error::VanishingFactor(0));
    }
    let den_inv = den.cyc_inv()?;
    for h in 1..=nn as i64 {
        let f = &CycNum::root(order, d * h) - &CycNum::root(order, -d * h);
        acc = &(&acc * &f) * &den_inv;
    }
    Ok(acc)
}

/// Index of the first vanishing factor of `[nn]_d^!`, if any.
fn vanishing_factor(order: u64, nn: u64, d: i64) -> Option<u64> {
    (1..=nn).find(|&h| {
        let e = d * h as i64;
        (2 * e).rem_euclid(order as i64) == 0
    })
}

/// `[M+Nn choose Nn]_d = [M+Nn]_d^! / ([M]_d^! [Nn]_d^!)`.
pub fn gauss_binomial(order: u64, mm: u64, nn: u64, d: i64) -> Result<CycNum> {
    if nn == 0 || mm == 0 {
        return Ok(CycNum::one(order));
    }
    for k in [mm, nn] {
        if let Some(h) = vanishing_factor(order, k, d) {
            return Err(Error::VanishingFactor(h));
        }
    }
    let top = gauss_factorial(order, mm + nn, d)?;
    let bottom = &gauss_factorial(order, mm, d)? * &gauss_factorial(order, nn, d)?;
    Ok(&top * &bottom.cyc_inv()?)
}
