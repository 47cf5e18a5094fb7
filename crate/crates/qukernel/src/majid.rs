//! The Majid dual M_q(𝔤) = A_q(𝔤)^* in two models.
//!
//! Quiver model: paths in the Hopf quiver with vertices χ_a, a ∈ (ℤ_n)^m, and
//! one arrow Γ^j_{χ_b}: χ_b → χ_{b+ε_j} per (j, b); product by thin splits.
//! Dual model: functionals on the basis 1_a w of A with convolution through Δ_J.
//! [`theta`] is the coalgebra embedding taking the second model into the first.

use std::collections::{BTreeMap, HashMap};

use crate::cartan::{gauss_binomial, CartanDatum};
use crate::error::Result;
use crate::grouptensors::{closed_phi, DiagTensor};
use crate::halfqg::{add_scaled, add_term, coproduct_j, scaled, Algebra, Elem, Key};
use crate::scalars::{fdiv, rem, CycNum};

/// (start vertex, arrow letters in traversal order).
pub type Path = (Vec<i64>, Vec<u8>);
pub type PathElem = BTreeMap<Path, CycNum>;

/// Which root of unity scales the right action Γ^j_{χ_b}·χ_a.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RightScale {
    /// ∏_i q^{c_ji a_i}.
    Q,
    /// ∏_i 𝔮^{c_ji a_i}.
    Frak,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    pub datum: CartanDatum,
    pub phi: DiagTensor,
    pub right_scale: RightScale,
}

impl Quiver {
    pub fn new(datum: &CartanDatum) -> Quiver {
        Quiver::with_right_scale(datum, RightScale::Q)
    }

    pub fn with_right_scale(datum: &CartanDatum, right_scale: RightScale) -> Quiver {
        Quiver {
            datum: datum.clone(),
            phi: closed_phi(datum),
            right_scale,
        }
    }

    fn n(&self) -> i64 {
        self.datum.n as i64
    }

    fn order(&self) -> u64 {
        self.datum.big_n
    }

    pub fn canon(&self, a: &[i64]) -> Vec<i64> {
        a.iter().map(|&x| rem(x, self.n())).collect()
    }

    pub fn vertex(&self, a: &[i64]) -> PathElem {
        PathElem::from([((self.canon(a), Vec::new()), CycNum::one(self.order()))])
    }

    pub fn unit(&self) -> PathElem {
        self.vertex(&vec![0; self.datum.m])
    }

    /// χ_i.
    pub fn chi(&self, i: usize) -> PathElem {
        let mut a = vec![0; self.datum.m];
        a[i] = 1;
        self.vertex(&a)
    }

    /// Γ^j_{χ_b}.
    pub fn arrow(&self, j: usize, b: &[i64]) -> PathElem {
        PathElem::from([((self.canon(b), vec![j as u8]), CycNum::one(self.order()))])
    }

    /// Γ^j = Γ^j_{χ_0}.
    pub fn gamma(&self, j: usize) -> PathElem {
        self.arrow(j, &vec![0; self.datum.m])
    }

    /// Exponent of ζ_N in χ_a · Γ^j_{χ_b} = ∏_i 𝔮^{−c_ij a_i ⌊(b_j+1)/n⌋} Γ^j_{χ_{a+b}}.
    pub fn left_exp(&self, a: &[i64], j: usize, b: &[i64]) -> i64 {
        let n = self.n();
        let fl = fdiv(b[j] + 1, n);
        -n * fl * (0..self.datum.m).map(|i| self.datum.c[i][j] * a[i]).sum::<i64>()
    }

    /// Exponent of ζ_N in Γ^j_{χ_b} · χ_a.
    pub fn right_exp(&self, j: usize, a: &[i64]) -> i64 {
        let s: i64 = (0..self.datum.m).map(|i| self.datum.c[j][i] * a[i]).sum();
        match self.right_scale {
            RightScale::Q => s,
            RightScale::Frak => self.n() * s,
        }
    }

    pub fn left_action(&self, a: &[i64], j: usize, b: &[i64]) -> (Vec<i64>, CycNum) {
        let t: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        (self.canon(&t), CycNum::root(self.order(), self.left_exp(a, j, b)))
    }

    pub fn right_action(&self, j: usize, b: &[i64], a: &[i64]) -> (Vec<i64>, CycNum) {
        let t: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        (self.canon(&t), CycNum::root(self.order(), self.right_exp(j, a)))
    }

    /// Vertices visited by a path, from its start.
    pub fn vertices(&self, p: &Path) -> Vec<Vec<i64>> {
        let mut v = vec![p.0.clone()];
        let mut cur = p.0.clone();
        for &j in &p.1 {
            cur[j as usize] += 1;
            cur = self.canon(&cur);
            v.push(cur.clone());
        }
        v
    }

    /// Thin-split product of two paths.
    pub fn product_paths(&self, p: &Path, q: &Path) -> PathElem {
        let order = self.order();
        let (lp, lq) = (p.1.len(), q.1.len());
        let total = lp + lq;
        let vp = self.vertices(p);
        let vq = self.vertices(q);
        let mut out = PathElem::new();
        if total == 0 {
            let s: Vec<i64> = p.0.iter().zip(&q.0).map(|(x, y)| x + y).collect();
            out.insert((self.canon(&s), Vec::new()), CycNum::one(order));
            return out;
        }
        // d_k = 1: position k takes the next arrow of p and a vertex of q
        for mask in 0u64..(1u64 << total) {
            if mask.count_ones() as usize != lp {
                continue;
            }
            let (mut ip, mut iq) = (0usize, 0usize);
            let mut exp = 0i64;
            let mut letters = Vec::with_capacity(total);
            let mut start = None;
            for k in 0..total {
                let (j, src) = if mask >> k & 1 == 1 {
                    let j = p.1[ip] as usize;
                    let (src, _) = self.right_action(j, &vp[ip], &vq[iq]);
                    exp += self.right_exp(j, &vq[iq]);
                    ip += 1;
                    (j, src)
                } else {
                    let j = q.1[iq] as usize;
                    let (src, _) = self.left_action(&vp[ip], j, &vq[iq]);
                    exp += self.left_exp(&vp[ip], j, &vq[iq]);
                    iq += 1;
                    (j, src)
                };
                if start.is_none() {
                    start = Some(src);
                }
                letters.push(j as u8);
            }
            add_term(&mut out, (start.unwrap(), letters), &CycNum::root(order, exp));
        }
        out
    }

    pub fn product(&self, x: &PathElem, y: &PathElem) -> PathElem {
        let mut out = PathElem::new();
        for (p, cp) in x {
            for (q, cq) in y {
                let t = self.product_paths(p, q);
                add_scaled(&mut out, &t, &(cp * cq));
            }
        }
        out
    }

    /// (Γ^i)^{→l} = ((Γ^i·Γ^i)·Γ^i)⋯ when `right_nested` is false, else Γ^i·(Γ^i·(⋯)).
    pub fn gamma_power(&self, i: usize, l: usize, right_nested: bool) -> PathElem {
        if l == 0 {
            return self.unit();
        }
        let g = self.gamma(i);
        let mut acc = g.clone();
        for _ in 1..l {
            acc = if right_nested {
                self.product(&g, &acc)
            } else {
                self.product(&acc, &g)
            };
        }
        acc
    }

    /// Σ_{r+s=1−a_ij} (−1)^s [1−a_ij choose s]_{d_i} ((Γ^i)^{→r}·Γ^j)·(Γ^i)^{→s}.
    pub fn serre_element(&self, i: usize, j: usize) -> Result<PathElem> {
        let d = &self.datum;
        let top = (1 - d.a[i][j]) as u64;
        let mut out = PathElem::new();
        for s in 0..=top {
            let r = top - s;
            let left = self.product(&self.gamma_power(i, r as usize, false), &self.gamma(j));
            let term = self.product(&left, &self.gamma_power(i, s as usize, false));
            let mut c = gauss_binomial(d.big_n, r, s, d.d[i])?;
            if s % 2 == 1 {
                c = -c;
            }
            add_scaled(&mut out, &term, &c);
        }
        Ok(out)
    }

    pub fn serre_check(&self, i: usize, j: usize) -> Result<bool> {
        Ok(self.serre_element(i, j)?.is_empty())
    }

    /// Deconcatenation coproduct of the path coalgebra.
    pub fn coproduct_path(&self, p: &Path) -> BTreeMap<(Path, Path), CycNum> {
        let vs = self.vertices(p);
        let mut out = BTreeMap::new();
        for k in 0..=p.1.len() {
            // right factor: first k arrows; left factor: the rest
            let right = (p.0.clone(), p.1[..k].to_vec());
            let left = (vs[k].clone(), p.1[k..].to_vec());
            out.insert((left, right), CycNum::one(self.order()));
        }
        out
    }

    pub fn coproduct(&self, x: &PathElem) -> BTreeMap<(Path, Path), CycNum> {
        let mut out = BTreeMap::new();
        for (p, c) in x {
            add_scaled(&mut out, &self.coproduct_path(p), c);
        }
        out
    }

    /// Path rendered as `1 → χ1 → χ1·χ2`.
    pub fn format_path(&self, p: &Path) -> String {
        self.vertices(p)
            .iter()
            .map(|v| vertex_name(v))
            .collect::<Vec<_>>()
            .join(" → ")
    }

    pub fn format(&self, x: &PathElem) -> String {
        let mut s = String::new();
        for (p, c) in x {
            let coeff = match c.as_root() {
                Some(k) => format!("q^{}", k),
                None => c.to_string(),
            };
            s.push_str(&format!("{}  {}\n", coeff, self.format_path(p)));
        }
        s
    }

    /// The three bimodule identities for all e, f ∈ G and all arrows; returns the
    /// first failure as (identity, e, f, arrow).
    pub fn bimodule_check(&self) -> Option<(usize, Vec<i64>, Vec<i64>, usize, Vec<i64>)> {
        let m = self.datum.m;
        let grid = crate::halfqg::grid(m, self.n());
        let order = self.order() as i64;
        let phi = |a: &[i64], b: &[i64], c: &[i64]| -> i64 {
            let idx: Vec<i64> = a.iter().chain(b).chain(c).copied().collect();
            self.phi.exponent(&idx)
        };
        let add = |a: &[i64], b: &[i64]| self.canon(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>());
        for j in 0..m {
            for b in &grid {
                let h = b.clone();
                let mut g = b.clone();
                g[j] += 1;
                let g = self.canon(&g);
                for e in &grid {
                    for f in &grid {
                        let ef = add(e, f);
                        // e·(f·m) vs Φ(e,f,g)/Φ(e,f,h) (ef)·m
                        let lhs = self.left_exp(f, j, b) + self.left_exp(e, j, &add(f, b));
                        let rhs = phi(e, f, &g) - phi(e, f, &h) + self.left_exp(&ef, j, b);
                        if rem(lhs - rhs, order) != 0 {
                            return Some((1, e.clone(), f.clone(), j, b.clone()));
                        }
                        // (m·e)·f vs Φ(h,e,f)/Φ(g,e,f) m·(ef)
                        let lhs = self.right_exp(j, e) + self.right_exp(j, f);
                        let rhs = phi(&h, e, f) - phi(&g, e, f) + self.right_exp(j, &ef);
                        if rem(lhs - rhs, order) != 0 {
                            return Some((2, e.clone(), f.clone(), j, b.clone()));
                        }
                        // (e·m)·f vs Φ(e,h,f)/Φ(e,g,f) e·(m·f)
                        let lhs = self.left_exp(e, j, b) + self.right_exp(j, f);
                        let rhs = phi(e, &h, f) - phi(e, &g, f)
                            + self.right_exp(j, f)
                            + self.left_exp(e, j, &add(b, f));
                        if rem(lhs - rhs, order) != 0 {
                            return Some((3, e.clone(), f.clone(), j, b.clone()));
                        }
                    }
                }
            }
        }
        None
    }
}

fn vertex_name(v: &[i64]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| if e == 1 { format!("χ{}", i + 1) } else { format!("χ{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

/// Functionals on A, as values on the basis 1_a w.
pub type Functional = BTreeMap<Key, CycNum>;

/// The literal dual of A with convolution product through Δ_J.
pub struct Dual<'a> {
    pub alg: &'a Algebra,
    cache: std::sync::Mutex<HashMap<Key, Vec<(Key, Key, CycNum)>>>,
}

impl<'a> Dual<'a> {
    pub fn new(alg: &'a Algebra) -> Dual<'a> {
        Dual {
            alg,
            cache: std::sync::Mutex::new(HashMap::new()),
        }
    }

    /// χ_a = (1_a)^*.
    pub fn chi_a(&self, a: &[i64]) -> Functional {
        Functional::from([((self.alg.canon(a), 0), self.alg.one_scalar())])
    }

    pub fn chi(&self, i: usize) -> Functional {
        let mut a = vec![0; self.alg.m()];
        a[i] = 1;
        self.chi_a(&a)
    }

    pub fn unit(&self) -> Functional {
        self.chi_a(&vec![0; self.alg.m()])
    }

    /// Γ^i = (1_{ε_i} e_i)^*.
    pub fn gamma(&self, i: usize) -> Functional {
        let mut a = vec![0; self.alg.m()];
        a[i] = 1;
        let id = self.alg.up.id_of(&[i as u8]).unwrap();
        Functional::from([((a, id), self.alg.one_scalar())])
    }

    fn delta_terms(&self, x: &Key) -> Vec<(Key, Key, CycNum)> {
        if let Some(v) = self.cache.lock().unwrap().get(x) {
            return v.clone();
        }
        let t = coproduct_j(self.alg, &Elem::from([(x.clone(), self.alg.one_scalar())]));
        let v: Vec<(Key, Key, CycNum)> = t.into_iter().map(|(k, c)| (k[0].clone(), k[1].clone(), c)).collect();
        self.cache.lock().unwrap().insert(x.clone(), v.clone());
        v
    }

    fn max_degree(&self, f: &Functional) -> usize {
        f.keys().map(|(_, w)| self.alg.up.degree_of(*w)).max().unwrap_or(0)
    }

    /// (ψ·φ)(x) = Σ ψ(x₁) φ(x₂) for every basis x up to the combined degree.
    pub fn convolution(&self, psi: &Functional, phi: &Functional) -> Functional {
        let deg = self.max_degree(psi) + self.max_degree(phi);
        let mut out = Functional::new();
        for id in 0..self.alg.up.dim() {
            if self.alg.up.degree_of(id) > deg {
                continue;
            }
            for a in self.alg.grid() {
                let x = (a, id);
                let mut val = CycNum::zero(self.alg.order);
                for (k1, k2, c) in self.delta_terms(&x) {
                    if let (Some(p), Some(f)) = (psi.get(&k1), phi.get(&k2)) {
                        val += &(&(p * f) * &c);
                    }
                }
                add_term(&mut out, x, &val);
            }
        }
        out
    }
}

/// Θ(ψ) = Σ_p ψ(1_{t(p)} e_{j_k}⋯e_{j_1}) p over paths up to the functional's degree.
pub fn theta(q: &Quiver, alg: &Algebra, psi: &Functional) -> PathElem {
    let m = alg.m();
    let deg = psi.keys().map(|(_, w)| alg.up.degree_of(*w)).max().unwrap_or(0);
    let mut out = PathElem::new();
    for start in alg.grid() {
        let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
        for len in 0..=deg {
            for letters in &layer {
                let path = (start.clone(), letters.clone());
                let target = q.vertices(&path).pop().unwrap();
                // e_{j_k}⋯e_{j_1}: reverse traversal order
                let rev: Vec<u8> = letters.iter().rev().copied().collect();
                let nf = alg.up.nf_word(&rev);
                let mut val = CycNum::zero(alg.order);
                for (w, c) in nf {
                    if let Some(v) = psi.get(&(target.clone(), w)) {
                        val += &(v * &c);
                    }
                }
                add_term(&mut out, path, &val);
            }
            if len < deg {
                layer = layer
                    .iter()
                    .flat_map(|l| {
                        (0..m as u8).map(move |j| {
                            let mut v = l.clone();
                            v.push(j);
                            v
                        })
                    })
                    .collect();
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct CrossMismatch {
    pub expression: String,
    pub quiver: String,
    pub dual: String,
}

/// Compares the quiver product with the convolution product on every product of
/// up to `max_factors` generators (χ_i, Γ^i), over all parenthesizations built
/// left- and right-nested.
pub fn cross_oracle(alg: &Algebra, max_factors: usize) -> std::result::Result<usize, CrossMismatch> {
    let q = Quiver::new(&alg.datum);
    let dual = Dual::new(alg);
    let mut gens: Vec<(String, Functional)> = Vec::new();
    for i in 0..alg.m() {
        gens.push((format!("χ{}", i + 1), dual.chi(i)));
        gens.push((format!("Γ{}", i + 1), dual.gamma(i)));
    }
    let mut level: Vec<(String, Functional)> = gens.clone();
    let mut checked = 0;
    for i in 0..gens.len() {
        let t = theta(&q, alg, &gens[i].1);
        let direct = if gens[i].0.starts_with('χ') { q.chi(i / 2) } else { q.gamma(i / 2) };
        if t != direct {
            return Err(CrossMismatch {
                expression: gens[i].0.clone(),
                quiver: q.format(&direct),
                dual: q.format(&t),
            });
        }
    }
    for _ in 1..max_factors {
        let mut next = Vec::new();
        for (nx, x) in &level {
            for (ng, g) in &gens {
                for (name, a, b) in [
                    (format!("({})·{}", nx, ng), x, g),
                    (format!("{}·({})", ng, nx), g, x),
                ] {
                    let conv = dual.convolution(a, b);
                    let quiv = q.product(&theta(&q, alg, a), &theta(&q, alg, b));
                    let t = theta(&q, alg, &conv);
                    checked += 1;
                    if t != quiv {
                        return Err(CrossMismatch {
                            expression: name,
                            quiver: q.format(&quiv),
                            dual: q.format(&t),
                        });
                    }
                    next.push((name, conv));
                }
            }
        }
        level = next;
    }
    Ok(checked)
}

/// Σ_{j<l} q^{jc}.
pub fn q_integer(order: u64, l: usize, c: i64) -> CycNum {
    let mut s = CycNum::zero(order);
    for j in 0..l as i64 {
        s += &CycNum::root(order, j * c);
    }
    s
}

/// ∏_{k=1}^{l} Σ_{j<k} q^{jc}.
pub fn q_factorial(order: u64, l: usize, c: i64) -> CycNum {
    let mut s = CycNum::one(order);
    for k in 1..=l {
        s = &s * &q_integer(order, k, c);
    }
    s
}

/// Coefficient of the unique length-l i-path from the unit vertex in (Γ^i)^{→l}.
pub fn power_coefficient(q: &Quiver, i: usize, l: usize, right_nested: bool) -> CycNum {
    let p = q.gamma_power(i, l, right_nested);
    let key = (vec![0; q.datum.m], vec![i as u8; l]);
    p.get(&key).cloned().unwrap_or_else(|| CycNum::zero(q.datum.big_n))
}

/// Scalar multiple of a functional.
pub fn scale_functional(f: &Functional, c: &CycNum) -> Functional {
    scaled(f, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{make_datum, LieType};
    use crate::rewrite::UPlus;
    use std::sync::Arc;

    fn quiver(t: LieType, m: usize, n: u64) -> Quiver {
        Quiver::new(&make_datum(t, m, n).unwrap())
    }

    #[test]
    fn actions() {
        let q = quiver(LieType::A, 2, 4);
        let (_, c) = q.right_action(1, &[0, 0], &[1, 0]);
        assert_eq!(c, q.datum.q(q.datum.c[1][0]));
        let (_, c) = q.left_action(&[0, 0], 0, &[3, 1]);
        assert!(c.is_one());
        let (_, c) = q.left_action(&[2, 1], 0, &[2, 0]);
        assert!(c.is_one());
        assert_eq!(q.bimodule_check(), None);
    }

    #[test]
    fn frak_right_action_breaks_bimodule() {
        let d = make_datum(LieType::A, 1, 4).unwrap();
        assert!(Quiver::with_right_scale(&d, RightScale::Frak).bimodule_check().is_some());
    }

    #[test]
    fn two_generator_product() {
        let q = quiver(LieType::A, 2, 4);
        let got = q.product(&q.gamma(0), &q.gamma(1));
        let mut want = PathElem::new();
        want.insert((vec![0, 0], vec![1, 0]), q.datum.q(q.datum.c[0][1]));
        want.insert((vec![0, 0], vec![0, 1]), CycNum::one(16));
        assert_eq!(got, want);
        assert_eq!(q.product(&q.chi(0), &q.chi(1)), q.vertex(&[1, 1]));
    }

    #[test]
    fn powers_follow_full_q_factorial() {
        for (t, m, n) in [(LieType::A, 1, 4), (LieType::A, 1, 5), (LieType::B, 2, 4)] {
            let q = quiver(t, m, n);
            let d = &q.datum;
            for i in 0..m {
                let cii = d.c[i][i];
                let li = d.l[i] as usize;
                for l in 1..li {
                    let c = power_coefficient(&q, i, l, false);
                    assert_eq!(c, q_factorial(d.big_n, l, cii), "{} i={} l={}", d.label(), i, l);
                    let r = power_coefficient(&q, i, l, true);
                    let (lp, fl) = (l as i64 % n as i64, l as i64 / n as i64);
                    assert_eq!(r, &c * &d.frak(-cii * lp * fl), "{} i={} l={}", d.label(), i, l);
                }
                assert!(q.gamma_power(i, li, false).is_empty());
                assert!(q.gamma_power(i, li, true).is_empty());
            }
        }
        let q = quiver(LieType::A, 1, 4);
        assert!(q.gamma_power(0, 8, false).is_empty());
        assert!(q.gamma_power(0, 8, true).is_empty());
        assert!(!q.gamma_power(0, 7, false).is_empty());
        assert_eq!(q.gamma_power(0, 1, false), q.gamma(0));
    }

    #[test]
    fn serre_rank_two() {
        for t in [LieType::A, LieType::B] {
            let q = quiver(t, 2, 4);
            assert!(q.serre_check(0, 1).unwrap());
            assert!(q.serre_check(1, 0).unwrap());
        }
        let q = quiver(LieType::D, 4, 4);
        // nodes 1 and 3 are not joined
        let g = q.product(&q.gamma(0), &q.gamma(2));
        assert_eq!(g, q.product(&q.gamma(2), &q.gamma(0)));
    }

    #[test]
    fn cubic_expansion_leading_coefficient() {
        let q = quiver(LieType::B, 2, 4);
        let d = &q.datum;
        let (i, j) = (1, 0);
        let x = q.product(&q.gamma_power(i, 3, false), &q.gamma(j));
        let key = (vec![0, 0], vec![j as u8, i as u8, i as u8, i as u8]);
        let cii = d.c[i][i];
        let want = &(&d.q(3 * d.c[i][j]) * &q_integer(16, 2, cii)) * &q_integer(16, 3, cii);
        assert_eq!(x[&key], want);
    }

    #[test]
    fn serre_rank_two_n5() {
        for t in [LieType::A, LieType::B] {
            let q = quiver(t, 2, 5);
            assert!(q.serre_check(0, 1).unwrap());
            assert!(q.serre_check(1, 0).unwrap());
        }
    }

    #[test]
    fn cross_oracle_a2_degree_two() {
        let d = make_datum(LieType::A, 2, 4).unwrap();
        let alg = Algebra::half(&d, Arc::new(UPlus::build(&d).unwrap()));
        assert!(cross_oracle(&alg, 2).is_ok());
    }

    #[test]
    fn product_respects_coproduct() {
        let q = quiver(LieType::A, 2, 4);
        let x = q.product(&q.gamma(0), &q.gamma(1));
        let y = q.product(&q.chi(1), &q.gamma(0));
        let lhs = q.coproduct(&q.product(&x, &y));
        let dx = q.coproduct(&x);
        let dy = q.coproduct(&y);
        let mut rhs = BTreeMap::new();
        for ((a1, a2), c1) in &dx {
            for ((b1, b2), c2) in &dy {
                let l = q.product_paths(a1, b1);
                let r = q.product_paths(a2, b2);
                for (p, cp) in &l {
                    for (s, cs) in &r {
                        add_term(&mut rhs, (p.clone(), s.clone()), &(&(c1 * c2) * &(cp * cs)));
                    }
                }
            }
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugated_gamma() {
        let d = make_datum(LieType::A, 2, 4).unwrap();
        let alg = Algebra::half(&d, Arc::new(UPlus::build(&d).unwrap()));
        let dual = Dual::new(&alg);
        let (i, j) = (0, 1);
        let mut inv = vec![0; 2];
        inv[i] = 3;
        let x = dual.convolution(&dual.convolution(&dual.chi(i), &dual.gamma(j)), &dual.chi_a(&inv));
        let c = &d.frak(d.c[j][i]) * &d.q(-d.c[j][i]);
        assert_eq!(x, scale_functional(&dual.gamma(j), &c));
    }

    #[test]
    fn cross_oracle_rank_one() {
        let d = make_datum(LieType::A, 1, 4).unwrap();
        let alg = Algebra::half(&d, Arc::new(UPlus::build(&d).unwrap()));
        let n = cross_oracle(&alg, 3).unwrap();
        assert_eq!(n, 8 + 32);
    }
}
