//! Exact arithmetic in the cyclotomic field of order `N = n²`, the exponent
//! fast path [`QExp`], and the floor/remainder helpers used by every
//! closed-form formula.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Canonical representative of `y` modulo `n`, in `[0, n)`.
pub fn remainder(y: i64, n: i64) -> Result<i64> {
    if n <= 0 {
        return Err(Error::ZeroModulus);
    }
    Ok(y.rem_euclid(n))
}

/// Largest integer not exceeding `a / b`.
pub fn floor_div(a: i64, b: i64) -> Result<i64> {
    if b <= 0 {
        return Err(Error::ZeroModulus);
    }
    Ok(a.div_euclid(b))
}

/// `⌊(i + j′)/n⌋ = ⌊(i + j)/n⌋ − ⌊j/n⌋` where `j′` is the remainder of `j`.
pub fn floor_identity_check(i: i64, j: i64, n: i64) -> Result<bool> {
    let lhs = floor_div(i + remainder(j, n)?, n)?;
    let rhs = floor_div(i + j, n)? - floor_div(j, n)?;
    Ok(lhs == rhs)
}

#[inline]
pub(crate) fn rem(y: i64, n: i64) -> i64 {
    y.rem_euclid(n)
}

#[inline]
pub(crate) fn fdiv(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// The field ℚ(ζ_N) in the power basis modulo the N-th cyclotomic polynomial.
#[derive(Debug)]
pub struct CycField {
    order: u64,
    degree: usize,
    modulus: Vec<i64>,
    // powers[j] = X^j mod Φ_N for 0 <= j < max(N, 2·deg)
    powers: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = &den[dd];
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / lead;
        if !c.is_zero() {
            for (t, d) in den.iter().enumerate() {
                rem[k + t] -= &c * d;
            }
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients (low degree first) of the cyclotomic polynomial Φ_N,
/// via Φ_N = (X^N − 1) / ∏_{d | N, d < N} Φ_d.
pub fn cyclotomic_polynomial(order: u64) -> Vec<BigInt> {
    assert!(order >= 1);
    let mut num = vec![BigInt::zero(); order as usize + 1];
    num[0] = BigInt::from(-1);
    num[order as usize] = BigInt::one();
    let mut den = vec![BigInt::one()];
    for d in 1..order {
        if order % d == 0 {
            den = poly_mul(&den, &cyclotomic_polynomial(d));
        }
    }
    poly_div_exact(&num, &den)
}

impl CycField {
    fn build(order: u64) -> CycField {
        let modulus: Vec<i64> = cyclotomic_polynomial(order)
            .iter()
            .map(|c| c.to_i64().expect("cyclotomic coefficient fits in i64"))
            .collect();
        let degree = modulus.len() - 1;
        let count = (order as usize).max(2 * degree);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![0i64; degree];
        if degree > 0 {
            cur[0] = 1;
        }
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by X and reduce with the monic modulus
            let top = cur[degree - 1];
            for t in (1..degree).rev() {
                cur[t] = cur[t - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for t in 0..degree {
                    cur[t] -= top * modulus[t];
                }
            }
        }
        CycField {
            order,
            degree,
            modulus,
            powers,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Euler φ(N), the dimension of the power basis.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }
}

/// Shared field context for order `N`; built once per process.
pub fn field(order: u64) -> Arc<CycField> {
    static REGISTRY: OnceLock<Mutex<HashMap<u64, Arc<CycField>>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = reg.lock().unwrap();
    map.entry(order)
        .or_insert_with(|| Arc::new(CycField::build(order)))
        .clone()
}

/// An exact element Σ c_k ζ_N^k of ℚ(ζ_N), stored as integer numerators over
/// a common positive denominator, always reduced.
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CycField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    pub fn zero(order: u64) -> CycNum {
        let f = field(order);
        let num = vec![BigInt::zero(); f.degree];
        CycNum {
            field: f,
            num,
            den: BigInt::one(),
        }
    }

    pub fn one(order: u64) -> CycNum {
        CycNum::from_int(order, 1)
    }

    pub fn from_int(order: u64, v: i64) -> CycNum {
        let mut z = CycNum::zero(order);
        z.num[0] = BigInt::from(v);
        z
    }

    pub fn from_rational(order: u64, v: &BigRational) -> CycNum {
        let mut z = CycNum::zero(order);
        z.num[0] = v.numer().clone();
        z.den = v.denom().clone();
        z.normalize();
        z
    }

    /// ζ_N^k for any integer k.
    pub fn root(order: u64, k: i64) -> CycNum {
        let f = field(order);
        let idx = rem(k, order as i64) as usize;
        let num = f.powers[idx].iter().map(|&c| BigInt::from(c)).collect();
        CycNum {
            field: f,
            num,
            den: BigInt::one(),
        }
    }

    /// Build from power-basis coefficients (length φ(N)).
    pub fn from_coeffs(order: u64, coeffs: &[BigRational]) -> Result<CycNum> {
        let f = field(order);
        if coeffs.len() != f.degree {
            return Err(Error::Precondition(format!(
                "expected {} coefficients, got {}",
                f.degree,
                coeffs.len()
            )));
        }
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut z = CycNum { field: f, num, den };
        z.normalize();
        Ok(z)
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if this element lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// The exponent k if this element equals ζ_N^k.
    pub fn as_root(&self) -> Option<u64> {
        if !self.den.is_one() {
            return None;
        }
        (0..self.field.order).find(|&k| {
            self.field.powers[k as usize]
                .iter()
                .zip(&self.num)
                .all(|(&p, c)| *c == BigInt::from(p))
        })
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in self.num.iter_mut() {
                *c /= &g;
            }
            self.den /= &g;
        }
    }

    fn check(&self, other: &CycNum) -> Result<()> {
        if self.field.order != other.field.order {
            Err(Error::MixedOrder(self.field.order, other.field.order))
        } else {
            Ok(())
        }
    }

    pub fn cyc_add(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn cyc_sub(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn cyc_mul(&self, other: &CycNum) -> Result<CycNum> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn cyc_eq(&self, other: &CycNum) -> Result<bool> {
        self.check(other)?;
        Ok(self.num == other.num && self.den == other.den)
    }

    fn add_unchecked(&self, other: &CycNum, negate: bool) -> CycNum {
        let mut out = self.clone();
        out.accumulate(other, negate);
        out
    }

    fn accumulate(&mut self, other: &CycNum, negate: bool) {
        if self.den == other.den {
            for (a, b) in self.num.iter_mut().zip(&other.num) {
                if negate {
                    *a -= b;
                } else {
                    *a += b;
                }
            }
        } else {
            let d1 = self.den.clone();
            for (a, b) in self.num.iter_mut().zip(&other.num) {
                *a *= &other.den;
                if negate {
                    *a -= b * &d1;
                } else {
                    *a += b * &d1;
                }
            }
            self.den *= &other.den;
        }
        self.normalize();
    }

    fn mul_unchecked(&self, other: &CycNum) -> CycNum {
        let f = &self.field;
        let d = f.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..d].to_vec();
        for (k, p) in prod.iter().enumerate().skip(d) {
            if p.is_zero() {
                continue;
            }
            for (t, &r) in f.powers[k].iter().enumerate() {
                if r != 0 {
                    num[t] += p * r;
                }
            }
        }
        let mut out = CycNum {
            field: f.clone(),
            num,
            den: &self.den * &other.den,
        };
        out.normalize();
        out
    }

    /// Multiply by ζ_N^k without a general product.
    pub fn mul_root(&self, k: i64) -> CycNum {
        let f = &self.field;
        let n = f.order as i64;
        let k = rem(k, n) as usize;
        if k == 0 {
            return self.clone();
        }
        let mut num = vec![BigInt::zero(); f.degree];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let idx = (i + k) % f.order as usize;
            for (t, &r) in f.powers[idx].iter().enumerate() {
                if r != 0 {
                    num[t] += a * r;
                }
            }
        }
        CycNum {
            field: f.clone(),
            num,
            den: self.den.clone(),
        }
    }

    pub fn scale_int(&self, v: i64) -> CycNum {
        let mut out = self.clone();
        for c in out.num.iter_mut() {
            *c *= v;
        }
        out.normalize();
        out
    }

    pub fn div_int(&self, v: i64) -> Result<CycNum> {
        if v == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut out = self.clone();
        out.den *= v;
        out.normalize();
        Ok(out)
    }

    /// Multiplicative inverse, by solving the linear system of multiplication by `self`.
    pub fn cyc_inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(k) = self.as_root() {
            return Ok(CycNum::root(self.order(), -(k as i64)));
        }
        let d = self.field.degree;
        let order = self.order();
        // column j of the matrix is self * X^j
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(d);
        for j in 0..d {
            cols.push(self.mul_root(j as i64).coeffs());
        }
        let mut mat: Vec<Vec<BigRational>> = (0..d)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..d).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| !mat[r][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            mat.swap(col, piv);
            let inv = mat[col][col].recip();
            for c in col..=d {
                mat[col][c] = &mat[col][c] * &inv;
            }
            for r in 0..d {
                if r != col && !mat[r][col].is_zero() {
                    let factor = mat[r][col].clone();
                    for c in col..=d {
                        let sub = &factor * &mat[col][c];
                        mat[r][c] -= sub;
                    }
                }
            }
        }
        let sol: Vec<BigRational> = mat.iter().map(|row| row[d].clone()).collect();
        CycNum::from_coeffs(order, &sol)
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let base = if e < 0 { self.cyc_inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one(self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul_unchecked(&sq);
            }
        }
        Ok(acc)
    }

    /// Complex approximation, used only by tests as an independent oracle.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.field.order as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let t = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &CycNum) -> bool {
        self.field.order == other.field.order && self.num == other.num && self.den == other.den
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Rational coefficient vector in the power basis.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Add<&CycNum> for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.cyc_add(rhs).expect("mixed cyclotomic orders")
    }
}

impl Sub<&CycNum> for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.cyc_sub(rhs).expect("mixed cyclotomic orders")
    }
}

impl Mul<&CycNum> for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.cyc_mul(rhs).expect("mixed cyclotomic orders")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        let mut out = self.clone();
        for c in out.num.iter_mut() {
            *c = -&*c;
        }
        out
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        assert_eq!(self.field.order, rhs.field.order, "mixed cyclotomic orders");
        self.accumulate(rhs, false);
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        assert_eq!(self.field.order, rhs.field.order, "mixed cyclotomic orders");
        self.accumulate(rhs, true);
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = &*self * rhs;
    }
}

/// An exponent of ζ_N, i.e. an element of ℤ_N written multiplicatively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QExp {
    e: u64,
    order: u64,
}

impl QExp {
    pub fn new(e: i64, order: u64) -> QExp {
        QExp {
            e: rem(e, order as i64) as u64,
            order,
        }
    }

    /// Embed a power of 𝔮 = q^n into ℤ_N (N = n²).
    pub fn from_frak(e: i64, n: u64) -> QExp {
        QExp::new(e * n as i64, n * n)
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn add(self, other: QExp) -> QExp {
        debug_assert_eq!(self.order, other.order);
        QExp::new(self.e as i64 + other.e as i64, self.order)
    }

    pub fn neg(self) -> QExp {
        QExp::new(-(self.e as i64), self.order)
    }

    pub fn is_one(&self) -> bool {
        self.e == 0
    }

    pub fn to_cyc(&self) -> CycNum {
        CycNum::root(self.order, self.e as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remainder_and_floor() {
        assert_eq!(remainder(5, 4).unwrap(), 1);
        assert_eq!(remainder(8, 4).unwrap(), 0);
        assert_eq!(remainder(-1, 4).unwrap(), 3);
        assert_eq!(remainder(3, 0), Err(Error::ZeroModulus));
        assert_eq!(floor_div(9, 4).unwrap(), 2);
        assert_eq!(floor_div(0, 7).unwrap(), 0);
        assert_eq!(floor_div(-1, 4).unwrap(), -1);
        assert!(floor_div(1, 0).is_err());
    }

    #[test]
    fn floor_identity_examples() {
        // (3, 6, 4): ⌊(3+2)/4⌋ = 1 and ⌊9/4⌋ − ⌊6/4⌋ = 2 − 1
        assert_eq!(floor_div(3 + 2, 4).unwrap(), 1);
        assert!(floor_identity_check(3, 6, 4).unwrap());
        assert!(floor_identity_check(7, 0, 5).unwrap());
        assert!(floor_identity_check(0, 11, 5).unwrap());
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i: Vec<i64> = cyclotomic_polynomial(16)
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect();
        assert_eq!(as_i, vec![1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let p12: Vec<i64> = cyclotomic_polynomial(12)
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect();
        assert_eq!(p12, vec![1, 0, -1, 0, 1]);
        assert_eq!(field(36).degree(), 12);
        assert_eq!(field(25).degree(), 20);
    }

    #[test]
    fn basic_identities() {
        let z4 = CycNum::root(4, 1);
        assert_eq!(&z4 * &z4, CycNum::from_int(4, -1));
        let s = &(&CycNum::one(3) + &CycNum::root(3, 1)) + &CycNum::root(3, 2);
        assert!(s.is_zero());
        for k in 0..16 {
            let z = CycNum::root(16, k);
            assert_eq!(z.cyc_inv().unwrap(), CycNum::root(16, 16 - k));
        }
        assert_eq!(CycNum::root(9, 9), CycNum::one(9));
    }

    #[test]
    fn errors() {
        assert_eq!(CycNum::zero(4).cyc_inv(), Err(Error::DivisionByZero));
        assert_eq!(
            CycNum::one(4).cyc_add(&CycNum::one(9)),
            Err(Error::MixedOrder(4, 9))
        );
    }

    #[test]
    fn inverse_of_general_element() {
        let x = &(&CycNum::root(16, 1) + &CycNum::from_int(16, 3)) - &CycNum::root(16, 5);
        let y = x.cyc_inv().unwrap();
        assert!((&x * &y).is_one());
        let x = CycNum::one(25).div_int(7).unwrap();
        assert_eq!((&x * &CycNum::from_int(25, 7)), CycNum::one(25));
    }

    #[test]
    fn qexp_embedding() {
        let a = QExp::from_frak(1, 4);
        assert_eq!(a.exponent(), 4);
        assert_eq!(a.add(a).to_cyc(), CycNum::from_int(16, -1));
        assert_eq!(CycNum::root(16, 3).as_root(), Some(3));
    }
}
