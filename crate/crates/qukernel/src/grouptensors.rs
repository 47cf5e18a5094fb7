//! Diagonal tensors over grids (ℤ_M)^m stored as exponent functions, and the
//! structure elements of the half quasi-quantum group built from them:
//! the twist J, the reassociator φ, α, b_i, and γ, f, χ, ω.
//!
//! Every closed form has a definitional recomputation that only uses the
//! group-part operations: pointwise product, Δ(1_a) = Σ_{b+c=a} 1_b ⊗ 1_c and
//! S(1_a) = 1_{−a}.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};
use crate::scalars::{fdiv, rem, CycNum};

pub type ExpFn = Arc<dyn Fn(&[i64]) -> i64 + Send + Sync>;

/// Σ ζ_N^{exponent(a¹,…,aᵏ)} 1_{a¹} ⊗ … ⊗ 1_{aᵏ} over (ℤ_M)^m.
///
/// Index tuples are passed flat: leg `l`, coordinate `i` sits at `l*m + i`.
#[derive(Clone)]
pub struct DiagTensor {
    pub arity: usize,
    pub m: usize,
    pub modulus: i64,
    pub order: i64,
    pub tag: Option<String>,
    f: ExpFn,
}

impl fmt::Debug for DiagTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiagTensor")
            .field("arity", &self.arity)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("order", &self.order)
            .field("tag", &self.tag)
            .finish()
    }
}

impl DiagTensor {
    pub fn new(
        arity: usize,
        m: usize,
        modulus: i64,
        order: i64,
        tag: Option<&str>,
        f: impl Fn(&[i64]) -> i64 + Send + Sync + 'static,
    ) -> DiagTensor {
        DiagTensor {
            arity,
            m,
            modulus,
            order,
            tag: tag.map(|s| s.to_string()),
            f: Arc::new(f),
        }
    }

    pub fn identity(arity: usize, m: usize, modulus: i64, order: i64) -> DiagTensor {
        DiagTensor::new(arity, m, modulus, order, Some("1"), |_| 0)
    }

    pub fn len(&self) -> usize {
        self.arity * self.m
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Exponent of ζ_N at an index tuple; entries are reduced into [0, M) first.
    pub fn exponent(&self, idx: &[i64]) -> i64 {
        debug_assert_eq!(idx.len(), self.len());
        let canon: Vec<i64> = idx.iter().map(|&x| rem(x, self.modulus)).collect();
        rem((self.f)(&canon), self.order)
    }

    pub fn value(&self, idx: &[i64]) -> CycNum {
        CycNum::root(self.order as u64, self.exponent(idx))
    }

    pub fn inverse(&self) -> DiagTensor {
        let f = self.f.clone();
        DiagTensor {
            tag: self.tag.as_ref().map(|t| format!("{}^-1", t)),
            f: Arc::new(move |x| -f(x)),
            ..self.clone()
        }
    }

    /// Product of equal-arity diagonal tensors (orthogonal idempotents).
    pub fn product(&self, other: &DiagTensor) -> Result<DiagTensor> {
        if self.arity != other.arity
            || self.m != other.m
            || self.modulus != other.modulus
            || self.order != other.order
        {
            return Err(Error::Precondition("diagonal tensor shapes differ".into()));
        }
        let (f, g) = (self.f.clone(), other.f.clone());
        Ok(DiagTensor {
            tag: None,
            f: Arc::new(move |x| f(x) + g(x)),
            ..self.clone()
        })
    }

    /// A copy whose exponent at one index tuple is shifted by `delta`.
    pub fn bumped(&self, at: &[i64], delta: i64) -> DiagTensor {
        let f = self.f.clone();
        let at: Vec<i64> = at.iter().map(|&x| rem(x, self.modulus)).collect();
        DiagTensor {
            tag: Some("bumped".into()),
            f: Arc::new(move |x| if x == at.as_slice() { f(x) + delta } else { f(x) }),
            ..self.clone()
        }
    }

    /// First index tuple (lexicographic) where two tensors differ, over the full grid.
    pub fn first_difference(&self, other: &DiagTensor) -> Option<Vec<i64>> {
        let len = self.len();
        first_failure(len, self.modulus, |x| {
            rem(self.exponent(x) - other.exponent(x), self.order) != 0
        })
    }
}

/// Calls `visit` on every tuple of length `len` over [0, modulus); stops at the
/// first tuple for which `visit` returns true and returns it.
pub fn find_tuple(len: usize, modulus: i64, mut visit: impl FnMut(&[i64]) -> bool) -> Option<Vec<i64>> {
    let mut x = vec![0i64; len];
    loop {
        if visit(&x) {
            return Some(x);
        }
        let mut k = len;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            x[k] += 1;
            if x[k] < modulus {
                break;
            }
            x[k] = 0;
        }
    }
}

/// Parallel exhaustive search split on the first coordinate; returns the
/// lexicographically first failing tuple, independent of scheduling.
pub fn first_failure(
    len: usize,
    modulus: i64,
    fails: impl Fn(&[i64]) -> bool + Sync,
) -> Option<Vec<i64>> {
    if len == 0 {
        return if fails(&[]) { Some(vec![]) } else { None };
    }
    (0..modulus).into_par_iter().find_map_first(|head| {
        find_tuple(len - 1, modulus, |rest| {
            let mut x = Vec::with_capacity(len);
            x.push(head);
            x.extend_from_slice(rest);
            fails(&x)
        })
        .map(|rest| {
            let mut x = vec![head];
            x.extend(rest);
            x
        })
    })
}

/// Uniform samples plus every tuple with entries in {0, 1, M−1}.
pub fn sample_tuples(len: usize, modulus: i64, samples: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut edge: Vec<i64> = vec![0, 1, modulus - 1];
    edge.dedup();
    edge.sort();
    edge.dedup();
    let b = edge.len() as i64;
    find_tuple(len, b, |x| {
        out.push(x.iter().map(|&i| edge[i as usize]).collect());
        false
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        out.push((0..len).map(|_| rng.gen_range(0..modulus)).collect());
    }
    out
}

fn leg(x: &[i64], m: usize, l: usize) -> &[i64] {
    &x[l * m..(l + 1) * m]
}

/// Σ_{i,j} c_ij u_i v_j.
fn bilinear(c: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    let mut s = 0;
    for (i, ui) in u.iter().enumerate() {
        if *ui == 0 {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            s += c[i][j] * ui * vj;
        }
    }
    s
}

fn floors(v: &[i64], n: i64) -> Vec<i64> {
    v.iter().map(|&x| fdiv(x, n)).collect()
}

fn add(u: &[i64], v: &[i64]) -> Vec<i64> {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

fn modv(u: &[i64], n: i64) -> Vec<i64> {
    u.iter().map(|&a| rem(a, n)).collect()
}

fn negv(u: &[i64], n: i64) -> Vec<i64> {
    u.iter().map(|&a| rem(-a, n)).collect()
}

struct Ctx {
    m: usize,
    n: i64,
    big_n: i64,
    c: Vec<Vec<i64>>,
}

fn ctx(d: &CartanDatum) -> Ctx {
    Ctx {
        m: d.m,
        n: d.n as i64,
        big_n: d.big_n as i64,
        c: d.c.clone(),
    }
}

/// J = Σ ∏ q^{−c_ij a_i (b_j − b_j′)} 1_a ⊗ 1_b over (ℤ_{n²})^m.
pub fn build_j(d: &CartanDatum) -> DiagTensor {
    let k = ctx(d);
    let (m, n) = (k.m, k.n);
    DiagTensor::new(2, m, k.big_n, k.big_n, Some("J"), move |x| {
        let (a, b) = (leg(x, m, 0), leg(x, m, 1));
        let t: Vec<i64> = b.iter().map(|&bj| bj - rem(bj, n)).collect();
        -bilinear(&k.c, a, &t)
    })
}

/// Exponent of the five-factor product (1⊗J)(id⊗Δ)(J)(Δ⊗id)(J⁻¹)(J⊗1)⁻¹ at
/// 1_a ⊗ 1_b ⊗ 1_c over (ℤ_{n²})^m.
pub fn dj_exponent(j: &DiagTensor, a: &[i64], b: &[i64], c: &[i64]) -> i64 {
    let cat = |u: &[i64], v: &[i64]| -> Vec<i64> { u.iter().chain(v).copied().collect() };
    let bc = add(b, c);
    let ab = add(a, b);
    rem(
        j.exponent(&cat(b, c)) + j.exponent(&cat(a, &bc)) - j.exponent(&cat(&ab, c)) - j.exponent(&cat(a, b)),
        j.order,
    )
}

/// Lift-independence samples drawn on top of the per-coordinate shifts.
pub const DESCENT_SAMPLES: usize = 20_000;

/// d(J), verified to descend from (ℤ_{n²})^m to (ℤ_n)^m. For m = 1 every lift
/// of every triple is checked; otherwise every single-coordinate lift of every
/// residue triple plus [`DESCENT_SAMPLES`] random full lifts.
pub fn differential_dj(d: &CartanDatum, j: &DiagTensor) -> Result<DiagTensor> {
    let m = d.m;
    let n = d.n as i64;
    let big_n = d.big_n as i64;
    let split = move |x: &[i64]| -> (Vec<i64>, Vec<i64>, Vec<i64>) {
        (leg(x, m, 0).to_vec(), leg(x, m, 1).to_vec(), leg(x, m, 2).to_vec())
    };
    let at = |x: &[i64]| {
        let (a, b, c) = split(x);
        dj_exponent(j, &a, &b, &c)
    };
    let bad = if m == 1 {
        first_failure(3, big_n, |x| {
            let base: Vec<i64> = x.iter().map(|&v| rem(v, n)).collect();
            at(x) != at(&base)
        })
    } else {
        let single = first_failure(3 * m, n, |x| {
            let base = at(x);
            (0..3 * m).any(|k| {
                (1..n).any(|s| {
                    let mut y = x.to_vec();
                    y[k] += s * n;
                    at(&y) != base
                })
            })
        });
        single.or_else(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..DESCENT_SAMPLES).find_map(|_| {
                let y: Vec<i64> = (0..3 * m).map(|_| rng.gen_range(0..big_n)).collect();
                let base: Vec<i64> = y.iter().map(|&v| rem(v, n)).collect();
                (at(&y) != at(&base)).then_some(y)
            })
        })
    };
    if let Some(x) = bad {
        return Err(Error::Descent(format!("{:?}", x)));
    }
    let j = j.clone();
    Ok(DiagTensor::new(3, m, n, big_n, Some("d(J)"), move |x| {
        let (a, b, c) = split(x);
        dj_exponent(&j, &a, &b, &c)
    }))
}

/// φ(a,b,c) = ∏ 𝔮^{−c_ij a_i ⌊(b_j+c_j)/n⌋} over (ℤ_n)^m.
pub fn closed_phi(d: &CartanDatum) -> DiagTensor {
    let k = ctx(d);
    let (m, n) = (k.m, k.n);
    DiagTensor::new(3, m, n, k.big_n, Some("phi"), move |x| {
        let (a, b, c) = (leg(x, m, 0), leg(x, m, 1), leg(x, m, 2));
        -n * bilinear(&k.c, a, &floors(&add(b, c), n))
    })
}

/// α = Σ ∏ 𝔮^{c_st a_s ⌊(n−1+a_t)/n⌋} 1_a.
pub fn build_alpha(d: &CartanDatum) -> DiagTensor {
    let k = ctx(d);
    let (m, n) = (k.m, k.n);
    DiagTensor::new(1, m, n, k.big_n, Some("alpha"), move |a| {
        let t: Vec<i64> = a.iter().map(|&x| fdiv(n - 1 + x, n)).collect();
        n * bilinear(&k.c, a, &t)
    })
}

/// β = 1.
pub fn build_beta(d: &CartanDatum) -> DiagTensor {
    DiagTensor::identity(1, d.m, d.n as i64, d.big_n as i64)
}

/// α_J = Σ S(J^{(−1)}) J^{(−2)} and β_J = Σ J^{(1)} S(J^{(2)}) over (ℤ_{n²})^m.
pub fn alpha_beta_from_twist(d: &CartanDatum) -> (DiagTensor, DiagTensor) {
    let j = build_j(d);
    let m = d.m;
    let big_n = d.big_n as i64;
    let j1 = j.clone();
    let alpha_j = DiagTensor::new(1, m, big_n, big_n, Some("alpha_J"), move |a| {
        let idx: Vec<i64> = negv(a, big_n).into_iter().chain(a.iter().copied()).collect();
        -j1.exponent(&idx)
    });
    let beta_j = DiagTensor::new(1, m, big_n, big_n, Some("beta_J"), move |a| {
        let idx: Vec<i64> = a.iter().copied().chain(negv(a, big_n)).collect();
        j.exponent(&idx)
    });
    (alpha_j, beta_j)
}

/// α_J β_J over (ℤ_{n²})^m compared with α at the residue; returns the first mismatch.
pub fn alpha_twist_mismatch(d: &CartanDatum) -> Option<Vec<i64>> {
    let (aj, bj) = alpha_beta_from_twist(d);
    let alpha = build_alpha(d);
    let n = d.n as i64;
    first_failure(d.m, d.big_n as i64, |a| {
        let lhs = aj.exponent(a) + bj.exponent(a);
        rem(lhs - alpha.exponent(&modv(a, n)), d.big_n as i64) != 0
    })
}

/// b_i = Σ ∏_j q^{−c_ij a_j} 1_a.
pub fn build_b(d: &CartanDatum, i: usize) -> DiagTensor {
    let k = ctx(d);
    let m = k.m;
    DiagTensor::new(1, m, k.n, k.big_n, Some("b"), move |a| {
        -(0..m).map(|j| k.c[i][j] * a[j]).sum::<i64>()
    })
}

/// Exponent vector of the group word H_i = ∏_j h_j^{c_ji}.
pub fn build_h(d: &CartanDatum, i: usize) -> Vec<i64> {
    (0..d.m).map(|j| d.c[j][i]).collect()
}

/// H_i as a diagonal tensor: 1_a H_i = 𝔮^{Σ_j c_ji a_j} 1_a.
pub fn h_tensor(d: &CartanDatum, i: usize, power: i64) -> DiagTensor {
    let k = ctx(d);
    let m = k.m;
    let n = k.n;
    DiagTensor::new(1, m, n, k.big_n, Some("H"), move |a| {
        power * n * (0..m).map(|j| k.c[j][i] * a[j]).sum::<i64>()
    })
}

/// γ as derived: exponent of 𝔮 is Σ c_ij(−(b_i+c_i)⌊(b_j+c_j)/n⌋ + c_i − c_i⌊(n−b_j)/n⌋
/// + b_i⌊(n−1+b_j)/n⌋ + c_i⌊(n−1+c_j)/n⌋).
pub fn build_gamma(d: &CartanDatum) -> DiagTensor {
    gamma_with_sign(d, -1, "gamma")
}

/// The variant with `(−b_i + c_i)` in the first term.
pub fn build_gamma_alternate(d: &CartanDatum) -> DiagTensor {
    gamma_with_sign(d, 1, "gamma-alt")
}

fn gamma_with_sign(d: &CartanDatum, c_sign: i64, tag: &str) -> DiagTensor {
    let k = ctx(d);
    let (m, n) = (k.m, k.n);
    DiagTensor::new(2, m, n, k.big_n, Some(tag), move |x| {
        let (b, c) = (leg(x, m, 0), leg(x, m, 1));
        let mut s = 0;
        for i in 0..m {
            for j in 0..m {
                let t = (-b[i] + c_sign * c[i]) * fdiv(b[j] + c[j], n) + c[i]
                    - c[i] * fdiv(n - b[j], n)
                    + b[i] * fdiv(n - 1 + b[j], n)
                    + c[i] * fdiv(n - 1 + c[j], n);
                s += k.c[i][j] * t;
            }
        }
        n * s
    })
}

/// f = Σ ∏ 𝔮^{c_ij(−e_i + (e_i+f_i)(⌊(n−(e_j+f_j)′)/n⌋ − ⌊(e_j+f_j)/n⌋) − f_i⌊(n−e_j)/n⌋
/// + e_i⌊(n−1+e_j)/n⌋ + f_i⌊(n−1+f_j)/n⌋)} 1_e ⊗ 1_f.
pub fn build_f(d: &CartanDatum) -> DiagTensor {
    let k = ctx(d);
    let (m, n) = (k.m, k.n);
    DiagTensor::new(2, m, n, k.big_n, Some("f"), move |x| {
        let (e, f) = (leg(x, m, 0), leg(x, m, 1));
        let mut s = 0;
        for i in 0..m {
            for j in 0..m {
                let ef = e[j] + f[j];
                let t = -e[i] + (e[i] + f[i]) * (fdiv(n - rem(ef, n), n) - fdiv(ef, n))
                    - f[i] * fdiv(n - e[j], n)
                    + e[i] * fdiv(n - 1 + e[j], n)
                    + f[i] * fdiv(n - 1 + f[j], n);
                s += k.c[i][j] * t;
            }
        }
        n * s
    })
}

/// χ = Σ ∏ 𝔮^{c_ij(−a_i⌊(b_j+c_j)/n⌋ + (a_i+b_i)⌊(c_j+d_j)/n⌋)} 1_a⊗1_b⊗1_c⊗1_d.
pub fn build_chi4(d: &CartanDatum) -> DiagTensor {
    let k = ctx(d);
    let (m, n) = (k.m, k.n);
    DiagTensor::new(4, m, n, k.big_n, Some("chi"), move |x| {
        let (a, b, c, dd) = (leg(x, m, 0), leg(x, m, 1), leg(x, m, 2), leg(x, m, 3));
        n * (-bilinear(&k.c, a, &floors(&add(b, c), n))
            + bilinear(&k.c, &add(a, b), &floors(&add(c, dd), n)))
    })
}

/// ω with legs indexed as 1_a ⊗ 1_b ⊗ 1_c ⊗ S(1_d) ⊗ S(1_e):
/// 𝔮^{c_ij(−a_i⌊(b_j+c_j+d_j)/n⌋ + (a_i+b_i+c_i+d_i+e_i)⌊(d_j+e_j)/n⌋ − e_i + e_i⌊(n−d_j)/n⌋)}.
pub fn build_omega(d: &CartanDatum) -> DiagTensor {
    let k = ctx(d);
    let (m, n) = (k.m, k.n);
    DiagTensor::new(5, m, n, k.big_n, Some("omega"), move |x| {
        let (a, b, c, dd, e) = (
            leg(x, m, 0),
            leg(x, m, 1),
            leg(x, m, 2),
            leg(x, m, 3),
            leg(x, m, 4),
        );
        let mut s = -bilinear(&k.c, a, &floors(&add(&add(b, c), dd), n));
        let total = add(&add(&add(a, b), &add(c, dd)), e);
        s += bilinear(&k.c, &total, &floors(&add(dd, e), n));
        for i in 0..m {
            for j in 0..m {
                s += k.c[i][j] * (-e[i] + e[i] * fdiv(n - dd[j], n));
            }
        }
        n * s
    })
}

/// ω re-indexed on plain idempotent legs 1_a⊗1_b⊗1_c⊗1_x⊗1_y (x = −d, y = −e).
pub fn omega_standard(omega: &DiagTensor) -> DiagTensor {
    let m = omega.m;
    let n = omega.modulus;
    let w = omega.clone();
    DiagTensor::new(5, m, n, omega.order, Some("omega-std"), move |x| {
        let mut y = x.to_vec();
        for v in y[3 * m..].iter_mut() {
            *v = rem(-*v, n);
        }
        w.exponent(&y)
    })
}

fn cat(parts: &[&[i64]]) -> Vec<i64> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// T⊗U⊗V⊗W = (1⊗φ⁻¹)(id⊗id⊗Δ)(φ).
pub fn tuvw_definitional(phi: &DiagTensor) -> DiagTensor {
    let m = phi.m;
    let n = phi.modulus;
    let p = phi.clone();
    DiagTensor::new(4, m, n, phi.order, Some("TUVW"), move |x| {
        let (t, u, v, w) = (leg(x, m, 0), leg(x, m, 1), leg(x, m, 2), leg(x, m, 3));
        -p.exponent(&cat(&[u, v, w])) + p.exponent(&cat(&[t, u, &add(v, w)]))
    })
}

/// γ = Σ (S(U)⊗S(T))(α⊗α)(V⊗W): the coefficient at 1_b⊗1_c collects the
/// single term with U = −b, T = −c.
pub fn gamma_definitional(phi: &DiagTensor, alpha: &DiagTensor) -> DiagTensor {
    let m = phi.m;
    let n = phi.modulus;
    let p = tuvw_definitional(phi);
    let al = alpha.clone();
    DiagTensor::new(2, m, n, phi.order, Some("gamma-def"), move |x| {
        let (b, c) = (leg(x, m, 0), leg(x, m, 1));
        p.exponent(&cat(&[&negv(c, n), &negv(b, n), b, c])) + al.exponent(b) + al.exponent(c)
    })
}

/// f = Σ (S⊗S)(Δ^op(X̄)) · γ · Δ(Ȳ β S(Z̄)) with β = 1.
pub fn f_definitional(phi: &DiagTensor, gamma: &DiagTensor) -> DiagTensor {
    let m = phi.m;
    let n = phi.modulus;
    let p = phi.clone();
    let g = gamma.clone();
    DiagTensor::new(2, m, n, phi.order, Some("f-def"), move |x| {
        let (e, f) = (leg(x, m, 0), leg(x, m, 1));
        let s = add(e, f);
        let xbar = negv(&s, n);
        -p.exponent(&cat(&[&xbar, &s, &xbar])) + g.exponent(x)
    })
}

/// χ = (φ⊗1)(Δ⊗id⊗id)(φ⁻¹).
pub fn chi_definitional(phi: &DiagTensor) -> DiagTensor {
    let m = phi.m;
    let n = phi.modulus;
    let p = phi.clone();
    DiagTensor::new(4, m, n, phi.order, Some("chi-def"), move |x| {
        let (a, b, c, dd) = (leg(x, m, 0), leg(x, m, 1), leg(x, m, 2), leg(x, m, 3));
        p.exponent(&cat(&[a, b, c])) - p.exponent(&cat(&[&add(a, b), c, dd]))
    })
}

/// ω = (1⊗1⊗1⊗τ(f⁻¹))(id⊗Δ⊗S⊗S)(χ)(φ⊗1⊗1), indexed like [`build_omega`]
/// (the last two legs carry S(1_d), S(1_e)).
pub fn omega_definitional(phi: &DiagTensor, f: &DiagTensor, chi: &DiagTensor) -> DiagTensor {
    let m = phi.m;
    let n = phi.modulus;
    let (p, ff, ch) = (phi.clone(), f.clone(), chi.clone());
    DiagTensor::new(5, m, n, phi.order, Some("omega-def"), move |x| {
        let (a, b, c, dd, e) = (
            leg(x, m, 0),
            leg(x, m, 1),
            leg(x, m, 2),
            leg(x, m, 3),
            leg(x, m, 4),
        );
        // standard legs x4 = −d, x5 = −e; τ(f⁻¹) at (x4, x5) is f⁻¹(x5, x4)
        -ff.exponent(&cat(&[&negv(e, n), &negv(dd, n)]))
            + ch.exponent(&cat(&[a, &add(b, c), dd, e]))
            + p.exponent(&cat(&[a, b, c]))
    })
}

/// Where the pentagon identity fails, if anywhere:
/// φ(a,b,c+d) φ(a+b,c,d) = φ(b,c,d) φ(a,b+c,d) φ(a,b,c).
pub fn pentagon_check(phi: &DiagTensor) -> Option<Vec<i64>> {
    let m = phi.m;
    first_failure(4 * m, phi.modulus, |x| {
        let (a, b, c, dd) = (leg(x, m, 0), leg(x, m, 1), leg(x, m, 2), leg(x, m, 3));
        let lhs = phi.exponent(&cat(&[a, b, &add(c, dd)])) + phi.exponent(&cat(&[&add(a, b), c, dd]));
        let rhs = phi.exponent(&cat(&[b, c, dd]))
            + phi.exponent(&cat(&[a, &add(b, c), dd]))
            + phi.exponent(&cat(&[a, b, c]));
        rem(lhs - rhs, phi.order) != 0
    })
}

/// Where (id⊗ε⊗id)(φ) = 1⊗1 fails, if anywhere.
pub fn counit_check(phi: &DiagTensor) -> Option<Vec<i64>> {
    let m = phi.m;
    first_failure(2 * m, phi.modulus, |x| {
        let zero = vec![0; m];
        phi.exponent(&cat(&[leg(x, m, 0), &zero, leg(x, m, 1)])) != 0
    })
}

/// Compare two tensors on the given tuples; returns the first mismatch.
pub fn mismatch_on(a: &DiagTensor, b: &DiagTensor, tuples: &[Vec<i64>]) -> Option<Vec<i64>> {
    tuples
        .par_iter()
        .position_first(|x| rem(a.exponent(x) - b.exponent(x), a.order) != 0)
        .map(|i| tuples[i].clone())
}

/// Closed forms of γ, f, χ, ω against their definitions through φ. For `samples = None` the
/// full grid is checked; otherwise boundary tuples plus that many random ones.
pub fn structure_mismatches(
    d: &CartanDatum,
    samples: Option<(usize, u64)>,
) -> Vec<(&'static str, Option<Vec<i64>>)> {
    let phi = closed_phi(d);
    let alpha = build_alpha(d);
    let gamma_def = gamma_definitional(&phi, &alpha);
    let f_def = f_definitional(&phi, &gamma_def);
    let chi_def = chi_definitional(&phi);
    let omega_def = omega_definitional(&phi, &f_def, &chi_def);
    let pairs: Vec<(&'static str, DiagTensor, DiagTensor)> = vec![
        ("gamma", build_gamma(d), gamma_def),
        ("f", build_f(d), f_def),
        ("chi", build_chi4(d), chi_def),
        ("omega", build_omega(d), omega_def),
    ];
    pairs
        .into_iter()
        .map(|(name, closed, def)| {
            let bad = match samples {
                None => closed.first_difference(&def),
                Some((k, seed)) => {
                    let tuples = sample_tuples(closed.len(), closed.modulus, k, seed);
                    mismatch_on(&closed, &def, &tuples)
                }
            };
            (name, bad)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{make_datum, LieType};

    fn a1(n: u64) -> CartanDatum {
        make_datum(LieType::A, 1, n).unwrap()
    }

    #[test]
    fn j_examples() {
        let d = a1(4);
        let j = build_j(&d);
        assert_eq!(j.exponent(&[1, 5]), 16 - 8);
        assert_eq!(j.exponent(&[7, 3]), 0);
        assert_eq!(j.exponent(&[0, 13]), 0);
    }

    #[test]
    fn phi_examples() {
        let d = a1(4);
        let phi = closed_phi(&d);
        assert_eq!(phi.value(&[1, 3, 2]), CycNum::from_int(16, -1));
        assert_eq!(phi.exponent(&[3, 1, 2]), 0);
        assert_eq!(phi.exponent(&[0, 3, 3]), 0);
        let dj = differential_dj(&d, &build_j(&d)).unwrap();
        assert_eq!(dj.first_difference(&phi), None);
    }

    #[test]
    fn alpha_example() {
        let d = a1(4);
        let alpha = build_alpha(&d);
        let vals: Vec<i64> = (0..4).map(|a| alpha.exponent(&[a])).collect();
        // 1, −1, 1, −1 as powers of ζ_16
        assert_eq!(vals, vec![0, 8, 0, 8]);
        assert_eq!(alpha_twist_mismatch(&d), None);
    }

    #[test]
    fn pentagon_and_counterexample() {
        let d = a1(4);
        let phi = closed_phi(&d);
        assert_eq!(pentagon_check(&phi), None);
        assert_eq!(counit_check(&phi), None);
        assert_eq!(pentagon_check(&DiagTensor::identity(3, 1, 4, 16)), None);
        assert!(pentagon_check(&phi.bumped(&[1, 3, 2], 1)).is_some());
    }

    #[test]
    fn b_and_h() {
        let d = a1(4);
        let b = build_b(&d, 0);
        assert_eq!(b.exponent(&[3]), 16 - 6);
        assert_eq!(b.exponent(&[0]), 0);
        assert_eq!(build_h(&d, 0), vec![2]);
        let h_inv = h_tensor(&d, 0, -1);
        for a in 0..4 {
            assert_eq!(rem(4 * b.exponent(&[a]) - h_inv.exponent(&[a]), 16), 0);
        }
    }

    #[test]
    fn structure_elements_rank_one() {
        let d = a1(4);
        for (name, bad) in structure_mismatches(&d, None) {
            assert_eq!(bad, None, "{}", name);
        }
        let f = build_f(&d);
        assert_eq!(f.exponent(&[0, 0]), 0);
        assert_eq!(build_gamma(&d).exponent(&[0, 0]), 0);
        let omega = build_omega(&d);
        let phi = closed_phi(&d);
        for (a, b, c) in [(1, 2, 3), (3, 3, 3), (2, 1, 0)] {
            assert_eq!(omega.exponent(&[a, b, c, 0, 0]), phi.exponent(&[a, b, c]));
        }
    }

    #[test]
    fn structure_elements_rank_two() {
        for (t, m) in [(LieType::A, 2), (LieType::B, 2)] {
            let d = make_datum(t, m, 4).unwrap();
            for (name, bad) in structure_mismatches(&d, Some((2000, 7))) {
                assert_eq!(bad, None, "{} {}", d.label(), name);
            }
            assert_eq!(pentagon_check(&closed_phi(&d)), None);
            assert_eq!(alpha_twist_mismatch(&d), None);
            differential_dj(&d, &build_j(&d)).unwrap();
        }
    }

    #[test]
    fn gamma_alternate_sign_disagrees() {
        // the two sign choices agree whenever every c_ij is even
        let d = a1(4);
        let def = gamma_definitional(&closed_phi(&d), &build_alpha(&d));
        assert_eq!(build_gamma_alternate(&d).first_difference(&def), None);
        let d = make_datum(LieType::A, 2, 4).unwrap();
        let alpha = build_alpha(&d);
        let def = gamma_definitional(&closed_phi(&d), &alpha);
        assert!(build_gamma_alternate(&d).first_difference(&def).is_some());
    }
}
