//! Genuineness detection: one-dimensional modules of the double, the 3-cocycle
//! obtained by restricting φ to their characters, and a three-valued verdict.
//!
//! A one-dimensional module is determined by ρ(K_i) = 𝔮^{r_i}. It extends to the
//! whole algebra with ρ(E_i) = ρ(F_i) = 0 and ρ(K̂_i) = ρ(H_i) exactly when every
//! ρ(H_i) = ∏_j 𝔮^{c_ji r_j} is ±1. The tensor category generated by such modules
//! is pointed with associator φ restricted to the realized characters; a fiber
//! functor on the whole category would make that restriction a coboundary.

use serde::{Deserialize, Serialize};

use crate::cartan::{make_datum, CartanDatum, LieType};
use crate::cohomology::{decide_bar_coboundary, AbelianGroup, BarCochain3, CoboundaryVerdict, PeriodicCochain3};
use crate::error::{Error, Result};
use crate::grouptensors::closed_phi;
use crate::scalars::CycNum;

/// Samples for the bar cocycle identity on groups above the exhaustive limit.
pub const COCYCLE_SAMPLES: usize = 10_000;
pub const COCYCLE_SEED: u64 = 0x6e75;

fn rem(x: i64, m: i64) -> i64 {
    x.rem_euclid(m)
}

/// ρ(K_i) = 𝔮^{r_i}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OneDimRep {
    pub r: Vec<i64>,
    pub case: String,
}

/// Which displayed table applies, or why none does.
pub fn rho_table(lie_type: LieType, m: usize, n: u64) -> Result<OneDimRep> {
    let n = n as i64;
    let refuse = |why: String| Err(Error::Precondition(why));
    let by_index = |case: &str, f: &dyn Fn(usize) -> i64| -> Result<OneDimRep> {
        Ok(OneDimRep { r: (1..=m).map(|i| rem(f(i), n)).collect(), case: case.into() })
    };
    let odd_quarter = |i: usize| if i % 2 == 1 { n / 4 } else { 0 };
    match lie_type {
        LieType::A if n % (m as i64 + 1) == 0 => {
            let d = n / (m as i64 + 1);
            by_index("type A, (m+1) | n", &|i| i as i64 * d)
        }
        LieType::A if m % 2 == 1 && n % 4 == 0 => by_index("type A, m odd, 4 | n", &odd_quarter),
        LieType::B if m % 2 == 0 && n % 4 == 0 => by_index("type B, m even, 4 | n", &odd_quarter),
        LieType::B if m % 2 == 1 && n % 8 == 0 => by_index("type B, m odd, 8 | n", &|i| {
            if i == m {
                n / 8
            } else {
                odd_quarter(i)
            }
        }),
        LieType::C if n % 4 == 0 => by_index("type C, 4 | n", &|i| if i == m { n / 4 } else { 0 }),
        LieType::D if n % 4 == 0 => by_index("type D, 4 | n", &|i| if i + 1 >= m { n / 4 } else { 0 }),
        LieType::E if m == 6 && n % 3 == 0 => by_index("type E6, 3 | n", &|i| match i {
            1 | 5 => n / 3,
            3 | 6 => 2 * n / 3,
            _ => 0,
        }),
        LieType::E if m == 7 && n % 4 == 0 => by_index("type E7, 4 | n", &|i| match i {
            2 | 5 | 7 => n / 4,
            _ => 0,
        }),
        LieType::E if m == 8 => refuse("no table for type E8".into()),
        LieType::F | LieType::G => refuse(format!("no table for type {}{}", lie_type, m)),
        _ => refuse(format!("divisibility hypothesis fails for {}{} at n = {}", lie_type, m, n)),
    }
}

/// The extension of ρ to the generators, as exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub k: Vec<CycNum>,
    pub k_hat: Vec<CycNum>,
    /// ρ(H_i) as an exponent of 𝔮.
    pub h: Vec<i64>,
}

/// Exponent of 𝔮 in ρ(H_i) = ∏_j 𝔮^{c_ji r_j}.
pub fn h_exponents(d: &CartanDatum, rho: &OneDimRep) -> Vec<i64> {
    (0..d.m)
        .map(|i| rem((0..d.m).map(|j| d.c[j][i] * rho.r[j]).sum(), d.n as i64))
        .collect()
}

/// ρ(H_i) ∈ {±1} for all i; on success the extension with ρ(K̂_i) = ρ(H_i).
pub fn extendability_check(d: &CartanDatum, rho: &OneDimRep) -> Option<Extension> {
    let n = d.n as i64;
    let h = h_exponents(d, rho);
    let sign = |e: i64| e == 0 || (n % 2 == 0 && e == n / 2);
    if !h.iter().all(|&e| sign(e)) {
        return None;
    }
    Some(Extension {
        k: rho.r.iter().map(|&r| d.frak(r)).collect(),
        k_hat: h.iter().map(|&e| d.frak(e)).collect(),
        h,
    })
}

impl Extension {
    /// K_i^n = 1, K̂_i^n = ∏_l K_l^{−2c_il} and 1 = ∏_l K_l^{−c_il} K̂_i, the relations
    /// left once E and F act by zero.
    pub fn relations_hold(&self, d: &CartanDatum) -> bool {
        let n = d.n as i64;
        let pow = |x: &CycNum, e: i64| x.pow(e).expect("roots of unity are invertible");
        let prod = |i: usize, scale: i64| -> CycNum {
            (0..d.m).fold(CycNum::one(d.big_n), |acc, l| &acc * &pow(&self.k[l], scale * d.c[i][l]))
        };
        (0..d.m).all(|i| {
            pow(&self.k[i], n).is_one()
                && pow(&self.k_hat[i], n) == prod(i, -2)
                && (&prod(i, -1) * &self.k_hat[i]).is_one()
        })
    }
}

// ---- support subgroup ----

/// Smith normal form of an integer matrix: returns the diagonal and the unimodular
/// column transform Q with P·M·Q diagonal.
pub fn smith_columns(mat: &[Vec<i64>]) -> (Vec<i64>, Vec<Vec<i64>>) {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut a: Vec<Vec<i64>> = mat.to_vec();
    let mut q: Vec<Vec<i64>> = (0..cols).map(|i| (0..cols).map(|j| (i == j) as i64).collect()).collect();
    let col_op = |a: &mut Vec<Vec<i64>>, q: &mut Vec<Vec<i64>>, dst: usize, src: usize, k: i64| {
        for row in a.iter_mut() {
            row[dst] -= k * row[src];
        }
        for row in q.iter_mut() {
            row[dst] -= k * row[src];
        }
    };
    let swap_cols = |a: &mut Vec<Vec<i64>>, q: &mut Vec<Vec<i64>>, x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        for row in q.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // pivot: smallest nonzero entry in the remaining block
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                break;
            };
            a.swap(t, pi);
            swap_cols(&mut a, &mut q, t, pj);
            let p = a[t][t];
            let mut clean = true;
            for j in t + 1..cols {
                let k = a[t][j].div_euclid(p);
                col_op(&mut a, &mut q, j, t, k);
                clean &= a[t][j] == 0;
            }
            for i in t + 1..rows {
                let k = a[i][t].div_euclid(p);
                let pivot_row = a[t].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= k * y;
                }
                clean &= a[i][t] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let row = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&row) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    (diag, q)
}

/// S = {a ∈ (ℤ_n)^m : ρ_a(H_i) = ±1 ∀i}, as cyclic factors with generators in (ℤ_n)^m.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportGroup {
    pub orders: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
    /// m, the rank of the ambient grid.
    pub ambient: usize,
}

impl SupportGroup {
    pub fn size(&self) -> u64 {
        self.orders.iter().map(|&o| o as u64).product()
    }

    pub fn embed(&self, x: &[i64], n: i64) -> Vec<i64> {
        (0..self.ambient)
            .map(|j| rem(x.iter().zip(&self.generators).map(|(c, g)| c * g[j]).sum(), n))
            .collect()
    }
}

pub fn support_group(d: &CartanDatum) -> SupportGroup {
    let n = d.n as i64;
    // 𝔮^x = ±1 iff x ≡ 0 mod n' where n' = n/2 for even n
    let np = if n % 2 == 0 { n / 2 } else { n };
    let ct: Vec<Vec<i64>> = (0..d.m).map(|i| (0..d.m).map(|j| d.c[j][i]).collect()).collect();
    let (diag, q) = smith_columns(&ct);
    let mut orders = Vec::new();
    let mut generators = Vec::new();
    for i in 0..d.m {
        let di = diag.get(i).copied().unwrap_or(0);
        let k = np / num_integer::gcd(di, np);
        let order = n / k;
        if order > 1 {
            orders.push(order);
            generators.push((0..d.m).map(|j| rem(k * q[j][i], n)).collect());
        }
    }
    SupportGroup { orders, generators, ambient: d.m }
}

/// φ restricted along the embedding of a subgroup, as a bar cochain over ζ_N.
pub fn restrict_phi(d: &CartanDatum, s: &SupportGroup) -> Result<BarCochain3> {
    let phi = closed_phi(d);
    let n = d.n as i64;
    let group = AbelianGroup::new(s.orders.clone())?;
    let emb = s.clone();
    BarCochain3::new(group, d.big_n as i64, move |a, b, c| {
        let mut idx = emb.embed(a, n);
        idx.extend(emb.embed(b, n));
        idx.extend(emb.embed(c, n));
        phi.exponent(&idx)
    })
}

/// φ restricted to the support subgroup.
pub fn restricted_cocycle_support(d: &CartanDatum) -> Result<(SupportGroup, BarCochain3)> {
    let s = support_group(d);
    let c = restrict_phi(d, &s)?;
    Ok((s, c))
}

/// The characters of the tensor powers of one module: the cyclic group generated by r.
pub fn powers_group(d: &CartanDatum, rho: &OneDimRep) -> SupportGroup {
    let n = d.n as i64;
    let g = rho.r.iter().fold(n, |acc, &x| num_integer::gcd(acc, x));
    SupportGroup {
        orders: vec![n / g],
        generators: vec![rho.r.iter().map(|&x| rem(x, n)).collect()],
        ambient: d.m,
    }
}

/// The grid elements whose k-th coordinate is a multiple of r_k: the literal reading
/// of "1_a X ≠ 0" for any table.
pub fn coordinate_group(d: &CartanDatum, rho: &OneDimRep) -> SupportGroup {
    let n = d.n as i64;
    let mut out = SupportGroup { orders: vec![], generators: vec![], ambient: d.m };
    for (k, &r) in rho.r.iter().enumerate() {
        let order = n / num_integer::gcd(n, r);
        if order > 1 {
            let mut g = vec![0; d.m];
            g[k] = rem(r, n);
            out.orders.push(order);
            out.generators.push(g);
        }
    }
    out
}

/// φ restricted to the characters realized by tensor powers of ρ.
pub fn restricted_cocycle_powers(d: &CartanDatum, rho: &OneDimRep) -> Result<(SupportGroup, BarCochain3)> {
    if extendability_check(d, rho).is_none() {
        return Err(Error::Precondition(format!("ρ = {:?} does not extend", rho.r)));
    }
    let s = powers_group(d, rho);
    let c = restrict_phi(d, &s)?;
    Ok((s, c))
}

/// The displayed exponent of the type A restriction, over ζ_{m+1}:
/// −Σ_{s,t} c_st s a_s ⌊(t b_t + t c_t)/(m+1)⌋ with t b_t, t c_t taken as written.
pub fn literal_exponent_displayed(d: &CartanDatum, a: &[i64], b: &[i64], c: &[i64]) -> i64 {
    let p = d.m as i64 + 1;
    let mut e = 0;
    for s in 0..d.m {
        for t in 0..d.m {
            let (sv, tv) = (s as i64 + 1, t as i64 + 1);
            e -= d.c[s][t] * sv * a[s] * (tv * b[t] + tv * c[t]).div_euclid(p);
        }
    }
    rem(e, p)
}

/// Type A with (m+1) | n: φ restricted along a ↦ (k d a_k), as a cochain on
/// (ℤ_{m+1})^m with values in ζ_{m+1}. The floor arguments t b_t, t c_t are reduced
/// mod m+1, which is what the restriction produces.
pub fn restricted_cocycle_literal(d: &CartanDatum) -> Result<BarCochain3> {
    let p = d.m as i64 + 1;
    if d.lie_type != LieType::A || d.n as i64 % p != 0 {
        return Err(Error::Precondition("the literal restriction needs type A with (m+1) | n".into()));
    }
    let dd = d.clone();
    let group = AbelianGroup::new(vec![p; d.m])?;
    BarCochain3::new(group, p, move |a, b, c| {
        let mut e = 0;
        for s in 0..dd.m {
            for t in 0..dd.m {
                let (sv, tv) = (s as i64 + 1, t as i64 + 1);
                e -= dd.c[s][t] * sv * a[s] * (rem(tv * b[t], p) + rem(tv * c[t], p)).div_euclid(p);
            }
        }
        e
    })
}

/// φ on the full grid (ℤ_n)^m as a bar cochain over ζ_N.
pub fn full_cocycle(d: &CartanDatum) -> Result<BarCochain3> {
    let phi = closed_phi(d);
    let group = AbelianGroup::new(vec![d.n as i64; d.m])?;
    BarCochain3::new(group, d.big_n as i64, move |a, b, c| {
        let idx: Vec<i64> = a.iter().chain(b).chain(c).copied().collect();
        phi.exponent(&idx)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Genuine,
    CoboundaryFound,
    Inconclusive,
}

/// Outcome of one restriction strategy.
#[derive(Clone, Debug, Serialize)]
pub struct StrategyOutcome {
    pub strategy: String,
    pub group_orders: Vec<i64>,
    pub pullback: String,
    pub verdict: CoboundaryVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenuinenessVerdict {
    pub case: String,
    pub status: Status,
    pub reason: String,
    pub rho: Option<OneDimRep>,
    pub outcomes: Vec<StrategyOutcome>,
    /// Strategies that could not run, with the reason.
    pub skipped: Vec<String>,
}

impl GenuinenessVerdict {
    /// The certifying outcome: a non-coboundary for Genuine, the witness for CoboundaryFound.
    pub fn certificate(&self) -> Option<&StrategyOutcome> {
        match self.status {
            Status::Genuine => self.outcomes.iter().find(|o| !o.verdict.is_coboundary()),
            Status::CoboundaryFound => self.outcomes.iter().find(|o| o.strategy == "full-grid"),
            Status::Inconclusive => None,
        }
    }
}

fn run(strategy: &str, c: &BarCochain3) -> Result<StrategyOutcome> {
    let v = decide_bar_coboundary(c, COCYCLE_SAMPLES, COCYCLE_SEED)?;
    Ok(StrategyOutcome {
        strategy: strategy.into(),
        group_orders: c.group.orders.clone(),
        pullback: pullback_text(&v.pullback),
        verdict: v.verdict,
    })
}

fn pullback_text(f: &PeriodicCochain3) -> String {
    f.to_text()
}

/// How the B and C tables are matched to Cartan data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableLabels {
    /// The table for type X is applied to the Bourbaki datum of type X.
    Bourbaki,
    /// The B table is applied to the datum whose last node is long, and the C table to
    /// the datum whose last node is short.
    SwapBC,
}

/// The Cartan datum a table for `lie_type` is evaluated on.
pub fn table_datum(lie_type: LieType, m: usize, n: u64, labels: TableLabels) -> Result<CartanDatum> {
    let t = match (labels, lie_type) {
        (TableLabels::SwapBC, LieType::B) => LieType::C,
        (TableLabels::SwapBC, LieType::C) => LieType::B,
        (_, t) => t,
    };
    make_datum(t, m, n)
}

/// Runs every applicable restriction with Bourbaki labels.
pub fn genuineness_verdict(lie_type: LieType, m: usize, n: u64) -> Result<GenuinenessVerdict> {
    genuineness_verdict_with(lie_type, m, n, TableLabels::Bourbaki)
}

/// Genuine iff some restriction of φ is not a coboundary; CoboundaryFound if φ itself
/// is a coboundary on the full grid; otherwise Inconclusive.
pub fn genuineness_verdict_with(lie_type: LieType, m: usize, n: u64, labels: TableLabels) -> Result<GenuinenessVerdict> {
    let d = table_datum(lie_type, m, n, labels)?;
    let datum_type = d.lie_type;
    let mut case = format!("{}{} n={}", lie_type, m, n);
    if datum_type != lie_type {
        case.push_str(&format!(" on the {} datum", d.label()));
    }
    let mut v = GenuinenessVerdict {
        case,
        status: Status::Inconclusive,
        reason: String::new(),
        rho: None,
        outcomes: vec![],
        skipped: vec![],
    };
    if matches!(lie_type, LieType::F | LieType::G) || (lie_type == LieType::E && m == 8) {
        v.reason = "no table".into();
        return Ok(v);
    }
    match rho_table(lie_type, m, n) {
        Ok(r) => v.rho = Some(r),
        Err(e) => v.skipped.push(format!("table: {}", e)),
    }
    if lie_type == LieType::A && n as i64 % (m as i64 + 1) == 0 {
        v.outcomes.push(run("literal", &restricted_cocycle_literal(&d)?)?);
    }
    if let Some(r) = v.rho.clone() {
        if extendability_check(&d, &r).is_none() {
            v.skipped.push(format!("powers: ρ = {:?} does not extend", r.r));
        } else {
            let g = powers_group(&d, &r);
            if g.size() > 1 {
                v.outcomes.push(run("powers", &restrict_phi(&d, &g)?)?);
            }
        }
        let g = coordinate_group(&d, &r);
        if g.size() > 1 && lie_type != LieType::A {
            v.outcomes.push(run("coordinate", &restrict_phi(&d, &g)?)?);
        }
    }
    let (support, c) = restricted_cocycle_support(&d)?;
    if support.size() > 1 {
        v.outcomes.push(run("support", &c)?);
    }
    if v.outcomes.iter().any(|o| !o.verdict.is_coboundary()) {
        v.status = Status::Genuine;
        v.reason = "restricted cocycle is not a coboundary".into();
        return Ok(v);
    }
    let full = run("full-grid", &full_cocycle(&d)?)?;
    if full.verdict.is_coboundary() {
        v.status = Status::CoboundaryFound;
        v.reason = "φ is a coboundary on the full grid".into();
    } else {
        v.reason = "every restriction is a coboundary".into();
    }
    v.outcomes.push(full);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{f3_pullback, Slot};

    fn datum(t: LieType, m: usize, n: u64) -> CartanDatum {
        make_datum(t, m, n).unwrap()
    }

    #[test]
    fn table_examples() {
        let a = rho_table(LieType::A, 2, 3).unwrap();
        assert_eq!(a.r, vec![1, 2]);
        let dd = rho_table(LieType::D, 4, 4).unwrap();
        assert_eq!(dd.r, vec![0, 0, 1, 1]);
        let b = rho_table(LieType::B, 3, 8).unwrap();
        assert_eq!(b.r, vec![2, 0, 1]);
        assert!(rho_table(LieType::E, 8, 12).is_err());
        assert!(rho_table(LieType::G, 2, 6).is_err());
        assert!(rho_table(LieType::C, 3, 6).is_err());
    }

    #[test]
    fn extendability_examples() {
        let d = datum(LieType::A, 2, 3);
        let ext = extendability_check(&d, &rho_table(LieType::A, 2, 3).unwrap()).unwrap();
        assert_eq!(ext.h, vec![0, 0]);
        assert!(ext.relations_hold(&d));
        let trivial = OneDimRep { r: vec![0, 0], case: "trivial".into() };
        assert!(extendability_check(&d, &trivial).is_some());
        let d1 = datum(LieType::A, 1, 4);
        let ext = extendability_check(&d1, &OneDimRep { r: vec![1], case: "".into() }).unwrap();
        assert_eq!(ext.h, vec![2]);
        assert!(ext.relations_hold(&d1));
        // 𝔮^1 on A2 at n = 3 gives ρ(H_1) = 𝔮^2
        assert!(extendability_check(&d, &OneDimRep { r: vec![1, 0], case: "".into() }).is_none());
    }

    /// Every listed case at its minimal n, plus twice that.
    fn cases() -> Vec<(LieType, usize, u64)> {
        let mut v = Vec::new();
        for m in 2..=5 {
            v.push((LieType::A, m, m as u64 + 1));
            if m % 2 == 1 {
                v.push((LieType::A, m, 4));
            }
        }
        v.extend([(LieType::B, 2, 4), (LieType::B, 4, 4), (LieType::C, 2, 4), (LieType::C, 3, 4)]);
        v.extend([(LieType::D, 4, 4), (LieType::D, 5, 4), (LieType::E, 6, 3), (LieType::E, 7, 4)]);
        v.into_iter().flat_map(|(t, m, n)| [(t, m, n), (t, m, 2 * n)]).collect()
    }

    #[test]
    fn tables_extend() {
        for (t, m, n) in cases() {
            let d = datum(t, m, n);
            let rho = rho_table(t, m, n).unwrap();
            let ext = extendability_check(&d, &rho).unwrap_or_else(|| panic!("{t}{m} n={n}"));
            assert!(ext.relations_hold(&d), "{t}{m} n={n}");
        }
    }

    #[test]
    fn odd_b_table_needs_long_last_node() {
        for (m, n) in [(3, 8), (5, 8), (3, 16)] {
            let rho = rho_table(LieType::B, m, n).unwrap();
            let h = h_exponents(&datum(LieType::B, m, n), &rho);
            assert_eq!(h[m - 2], rem(-3 * n as i64 / 4, n as i64), "B{m} n={n}");
            assert!(extendability_check(&datum(LieType::B, m, n), &rho).is_none());
            // the same table on the datum whose last node is long
            assert!(extendability_check(&datum(LieType::C, m, n), &rho).is_some());
        }
    }

    #[test]
    fn extendable_iff_relations_hold() {
        for (t, m, n) in [(LieType::A, 2, 6), (LieType::B, 2, 4), (LieType::A, 1, 8)] {
            let d = datum(t, m, n);
            let grid = AbelianGroup::new(vec![n as i64; m]).unwrap();
            for r in grid.elements() {
                let rho = OneDimRep { r: r.clone(), case: String::new() };
                let h = h_exponents(&d, &rho);
                let ext = Extension {
                    k: r.iter().map(|&x| d.frak(x)).collect(),
                    k_hat: h.iter().map(|&e| d.frak(e)).collect(),
                    h: h.clone(),
                };
                assert_eq!(extendability_check(&d, &rho).is_some(), ext.relations_hold(&d), "{r:?}");
            }
        }
    }

    #[test]
    fn support_matches_enumeration() {
        for (t, m, n) in [(LieType::A, 2, 3), (LieType::A, 1, 4), (LieType::A, 2, 6), (LieType::B, 2, 4), (LieType::A, 3, 4), (LieType::D, 4, 4), (LieType::G, 2, 6)] {
            let d = datum(t, m, n);
            let s = support_group(&d);
            let grid = AbelianGroup::new(vec![n as i64; m]).unwrap();
            let expect: std::collections::BTreeSet<Vec<i64>> = grid
                .elements()
                .into_iter()
                .filter(|a| {
                    extendability_check(&d, &OneDimRep { r: a.clone(), case: String::new() }).is_some()
                })
                .collect();
            let sub = AbelianGroup::new(s.orders.clone()).unwrap();
            let got: std::collections::BTreeSet<Vec<i64>> =
                sub.elements().iter().map(|x| s.embed(x, n as i64)).collect();
            assert_eq!(got, expect, "{t}{m} n={n}");
            assert_eq!(s.size() as usize, expect.len(), "{t}{m} n={n}");
        }
        let s = support_group(&datum(LieType::A, 2, 3));
        assert_eq!(s.orders, vec![3]);
        let g = &s.generators[0];
        assert_eq!(rem(2 * g[0], 3), g[1]);
        assert_eq!(support_group(&datum(LieType::A, 1, 4)).orders, vec![4]);
    }

    #[test]
    fn smith_diagonal() {
        let (diag, q) = smith_columns(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(diag, vec![1, 3]);
        let det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
        assert_eq!(det.abs(), 1);
        let (diag, _) = smith_columns(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(diag, vec![2, 6, 12]);
    }

    #[test]
    fn literal_cocycle_examples() {
        let d = datum(LieType::A, 2, 3);
        let c = restricted_cocycle_literal(&d).unwrap();
        let f = f3_pullback(&c);
        assert_eq!(f.get(Slot::Rrr(0)), rem(-2, 3));
        assert_eq!(c.exponent(&[0, 0], &[2, 1], &[1, 2]), 0);
        assert_eq!(c.exponent(&[1, 1], &[0, 0], &[0, 1]), 0);
        // the displayed exponent is not normalized: c = 0 still leaves ⌊t b_t/(m+1)⌋
        assert_ne!(literal_exponent_displayed(&d, &[0, 1], &[0, 2], &[0, 0]), 0);
        // both readings agree when t b_t and t c_t are below m+1
        for l in 0..3 {
            assert_eq!(literal_exponent_displayed(&d, &[1, 0], &[l, 0], &[1, 0]), c.exponent(&[1, 0], &[l, 0], &[1, 0]));
        }
    }

    #[test]
    fn literal_matches_restriction_of_phi() {
        for (m, n) in [(2, 3), (2, 6), (3, 4)] {
            let d = datum(LieType::A, m, n);
            let c = restricted_cocycle_literal(&d).unwrap();
            let phi = closed_phi(&d);
            let p = m as i64 + 1;
            let k = n as i64 / p;
            let grid = AbelianGroup::new(vec![p; m]).unwrap();
            let els = grid.elements();
            let lift = |a: &[i64]| -> Vec<i64> { (0..m).map(|i| rem((i as i64 + 1) * k * a[i], n as i64)).collect() };
            for a in &els {
                for b in &els {
                    for cc in &els {
                        let idx: Vec<i64> = [lift(a), lift(b), lift(cc)].concat();
                        // ζ_{m+1} = ζ_N^{N/(m+1)}
                        let scale = d.big_n as i64 / p;
                        assert_eq!(phi.exponent(&idx), rem(scale * c.exponent(a, b, cc), d.big_n as i64));
                    }
                }
            }
        }
    }

    #[test]
    fn verdict_examples() {
        let v = genuineness_verdict(LieType::A, 2, 3).unwrap();
        assert_eq!(v.status, Status::Genuine);
        let cert = v.certificate().unwrap();
        match &cert.verdict {
            CoboundaryVerdict::NotCoboundary(viol) => assert_eq!(viol.slot, "1,1,1"),
            other => panic!("{other:?}"),
        }
        let v = genuineness_verdict(LieType::A, 1, 2).unwrap();
        assert_eq!(v.status, Status::CoboundaryFound);
        assert!(v.certificate().is_some());
        let v = genuineness_verdict(LieType::E, 8, 4).unwrap();
        assert_eq!((v.status, v.reason.as_str()), (Status::Inconclusive, "no table"));
    }

    #[test]
    fn type_a_divisible_cases_are_genuine() {
        for m in 2..=3usize {
            for n in (m as u64 + 1..=8).filter(|n| n % (m as u64 + 1) == 0) {
                let v = genuineness_verdict(LieType::A, m, n).unwrap();
                assert_eq!(v.status, Status::Genuine, "A{m} n={n}");
                let lit = v.outcomes.iter().find(|o| o.strategy == "literal").unwrap();
                match &lit.verdict {
                    CoboundaryVerdict::NotCoboundary(viol) => assert_eq!(viol.slot, "1,1,1"),
                    other => panic!("A{m} n={n}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn table_cases() {
        for (t, m) in [(LieType::B, 2), (LieType::D, 4), (LieType::A, 1)] {
            let v = genuineness_verdict(t, m, 4).unwrap();
            assert_eq!(v.status, Status::Genuine, "{t}{m}");
            assert!(v.outcomes.iter().any(|o| o.strategy == "support"));
        }
        // on the Bourbaki C3 datum every one-dimensional restriction is a coboundary
        let v = genuineness_verdict(LieType::C, 3, 4).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        let w = genuineness_verdict_with(LieType::C, 3, 4, TableLabels::SwapBC).unwrap();
        assert_eq!(w.status, Status::Genuine);
        let powers = w.outcomes.iter().find(|o| o.strategy == "powers").unwrap();
        assert!(!powers.verdict.is_coboundary());
    }

    #[test]
    fn swapped_tables_extend() {
        for (t, m, n) in [(LieType::B, 2, 4), (LieType::B, 3, 8), (LieType::B, 4, 4), (LieType::B, 5, 8), (LieType::C, 2, 4), (LieType::C, 3, 4), (LieType::C, 4, 4)] {
            let d = table_datum(t, m, n, TableLabels::SwapBC).unwrap();
            let rho = rho_table(t, m, n).unwrap();
            assert!(extendability_check(&d, &rho).is_some_and(|e| e.relations_hold(&d)), "{t}{m} n={n}");
        }
    }
}
