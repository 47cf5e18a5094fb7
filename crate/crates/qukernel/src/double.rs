//! The Drinfeld double D(A) = A ⋈ A^* of the half small quasi-quantum group,
//! built from Schauenburg's product, coproduct and antipode formulas, plus the
//! relation suites for D(A) and for its presentation by generators.
//!
//! Elements are sparse sums of h ⋈ ψ with h a basis element 1_a w of A and ψ a
//! dual basis functional (1_s v)^*.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::{gauss_binomial, CartanDatum};
use crate::error::{Error, Result};
use crate::grouptensors::{
    alpha_twist_mismatch, build_alpha, build_f, build_omega, closed_phi, omega_standard, DiagTensor,
};
use crate::halfqg::{
    add_scaled, add_term, antipode, antipode_definitional, antipode_generator, b_elem, delta_j_generator,
    difference, h_group_elem, idem_slice, scaled, sum, twist_coproduct_definitional, Algebra, Check,
    Elem, Key, Tensor,
};
use crate::majid::Functional;
use crate::rewrite::{SVec, UPlus};
use crate::scalars::CycNum;

pub type DKey = (Key, Key);
pub type DElem = BTreeMap<DKey, CycNum>;
pub type DTensor = BTreeMap<(DKey, DKey), CycNum>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductStrategy {
    /// Sum over every index of ω with generic harpoons.
    Naive,
    /// Only the ω indices that survive the idempotent filters.
    Collapsed,
}

type ConvTable = HashMap<(Key, Key), Vec<(Key, CycNum)>>;

#[derive(Default)]
struct Caches {
    delta2: HashMap<Key, Arc<Vec<(Key, Key, Key, CycNum)>>>,
    antipode: HashMap<Key, Arc<Elem>>,
    conv: HashMap<(Vec<i64>, Slice), Arc<ConvTable>>,
    products: HashMap<(DKey, DKey), Arc<DElem>>,
    unit_coproduct: HashMap<Key, Arc<DTensor>>,
    words: HashMap<(usize, Slice), Arc<Tensor>>,
}

/// Which part of Δ_J(w) to keep: everything, or only the terms whose left
/// (right) leg has total degree at most one. Truncation commutes with the
/// product of coproducts because leg degrees only add.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Slice {
    Full,
    LeftLow,
    RightLow,
}

/// Counts of products computed both ways, and the disagreements found.
#[derive(Clone, Debug, Default)]
pub struct Audit {
    pub compared: usize,
    pub mismatches: Vec<String>,
}

pub struct Double {
    pub alg: Algebra,
    pub phi: DiagTensor,
    pub alpha: DiagTensor,
    pub f: DiagTensor,
    /// ω on plain idempotent legs.
    pub omega: DiagTensor,
    by_degree: HashMap<Vec<i64>, Vec<usize>>,
    caches: Mutex<Caches>,
    audit_on: bool,
    audit: Mutex<Audit>,
}

impl Double {
    pub fn new(datum: &CartanDatum, up: Arc<UPlus>) -> Double {
        let alg = Algebra::half(datum, up);
        let mut by_degree: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for id in 0..alg.up.dim() {
            by_degree.entry(alg.deg(id).to_vec()).or_default().push(id);
        }
        Double {
            phi: closed_phi(datum),
            alpha: build_alpha(datum),
            f: build_f(datum),
            omega: omega_standard(&build_omega(datum)),
            alg,
            by_degree,
            caches: Mutex::new(Caches::default()),
            audit_on: false,
            audit: Mutex::new(Audit::default()),
        }
    }

    pub fn build(datum: &CartanDatum) -> Result<Double> {
        Ok(Double::new(datum, Arc::new(UPlus::build(datum)?)))
    }

    /// Recompute every basis product with the naive strategy as well.
    pub fn with_audit(mut self) -> Double {
        self.audit_on = true;
        self
    }

    pub fn audit(&self) -> Audit {
        self.audit.lock().unwrap().clone()
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.alg.datum
    }

    fn m(&self) -> usize {
        self.alg.m()
    }

    fn one(&self) -> CycNum {
        self.alg.one_scalar()
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.alg.canon(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.alg.canon(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
    }

    fn unit_vec(&self, i: usize, k: i64) -> Vec<i64> {
        let mut v = vec![0; self.m()];
        v[i] = k;
        self.alg.canon(&v)
    }

    /// Idempotent on the right of a basis element: 1_a w = 1_a w 1_{a − deg w}.
    fn right_idem(&self, k: &Key) -> Vec<i64> {
        self.sub(&k.0, self.alg.deg(k.1))
    }

    fn basis_elem(&self, k: &Key) -> Elem {
        Elem::from([(k.clone(), self.one())])
    }

    // ---- functionals ----

    pub fn eps_key(&self) -> Key {
        (vec![0; self.m()], 0)
    }

    /// ε = (1_0)^*.
    pub fn epsilon(&self) -> Functional {
        Functional::from([(self.eps_key(), self.one())])
    }

    /// χ_a = (1_a)^*.
    pub fn chi(&self, a: &[i64]) -> Functional {
        Functional::from([((self.alg.canon(a), 0), self.one())])
    }

    /// Γ^i = (1_{ε_i} e_i)^*.
    pub fn gamma(&self, i: usize) -> Functional {
        let id = self.alg.up.id_of(&[i as u8]).expect("generators are normal");
        Functional::from([((self.unit_vec(i, 1), id), self.one())])
    }

    /// ψ(x) for x ∈ A.
    pub fn evaluate(&self, psi: &Functional, x: &Elem) -> CycNum {
        let mut out = CycNum::zero(self.alg.order);
        for (k, c) in psi {
            if let Some(v) = x.get(k) {
                out += &(c * v);
            }
        }
        out
    }

    /// x ⇀ ψ ↼ y, the functional b ↦ ψ(y b x).
    pub fn harpoon(&self, x: &Elem, psi: &Functional, y: &Elem) -> Functional {
        let up = &self.alg.up;
        let mut out = Functional::new();
        for ((s, w), cp) in psi {
            let dw = self.alg.deg(*w);
            for ((py, vy), cy) in y {
                if py != s {
                    continue;
                }
                let a = self.right_idem(&(py.clone(), *vy));
                let dvy = self.alg.deg(*vy);
                for ((px, vx), cx) in x {
                    let dvx = self.alg.deg(*vx);
                    let target: Vec<i64> = (0..self.m()).map(|i| dw[i] - dvy[i] - dvx[i]).collect();
                    if target.iter().any(|&t| t < 0) {
                        continue;
                    }
                    let Some(us) = self.by_degree.get(&target) else { continue };
                    let scale = &(cp * cy) * cx;
                    for &u in us {
                        if *px != self.sub(&a, self.alg.deg(u)) {
                            continue;
                        }
                        let left = up.mul_ids(*vy, u);
                        let prod = up.mul(&left, &SVec::from([(*vx, self.one())]));
                        if let Some(c) = prod.get(w) {
                            add_term(&mut out, (a.clone(), u), &(&scale * c));
                        }
                    }
                }
            }
        }
        out
    }

    fn conv_table(&self, md: &[i64], slice: Slice) -> Arc<ConvTable> {
        let key = (md.to_vec(), slice);
        if let Some(t) = self.caches.lock().unwrap().conv.get(&key) {
            return t.clone();
        }
        let mut table = ConvTable::new();
        if let Some(ids) = self.by_degree.get(md) {
            for &id in ids {
                for (keys, c) in self.word_coproduct(id, slice).iter() {
                    let x = (self.add(&keys[0].0, &keys[1].0), id);
                    table
                        .entry((keys[0].clone(), keys[1].clone()))
                        .or_default()
                        .push((x, c.clone()));
                }
            }
        }
        let t = Arc::new(table);
        self.caches.lock().unwrap().conv.insert(key, t.clone());
        t
    }

    /// (ψφ)(x) = (ψ ⊗ φ)(Δ_J x).
    pub fn convolve(&self, psi: &Functional, phi: &Functional) -> Functional {
        let mut out = Functional::new();
        for (k1, c1) in psi {
            for (k2, c2) in phi {
                let md: Vec<i64> = self
                    .alg
                    .deg(k1.1)
                    .iter()
                    .zip(self.alg.deg(k2.1))
                    .map(|(x, y)| x + y)
                    .collect();
                let slice = if self.alg.up.degree_of(k1.1) <= 1 {
                    Slice::LeftLow
                } else if self.alg.up.degree_of(k2.1) <= 1 {
                    Slice::RightLow
                } else {
                    Slice::Full
                };
                let table = self.conv_table(&md, slice);
                if let Some(list) = table.get(&(k1.clone(), k2.clone())) {
                    let cc = c1 * c2;
                    for (x, c) in list {
                        add_term(&mut out, x.clone(), &(&cc * c));
                    }
                }
            }
        }
        out
    }

    /// ψ₍₁₎ ⊗ ψ₍₂₎ for a dual basis functional: the coefficient of ψ's key in k₁k₂.
    pub fn dual_coproduct(&self, key: &Key) -> Vec<(Key, Key, CycNum)> {
        let (s, w) = key;
        let dw = self.alg.deg(*w).to_vec();
        let mut out = Vec::new();
        for (md, us) in &self.by_degree {
            let rest: Vec<i64> = (0..self.m()).map(|i| dw[i] - md[i]).collect();
            if rest.iter().any(|&r| r < 0) {
                continue;
            }
            let Some(vs) = self.by_degree.get(&rest) else { continue };
            for &u in us {
                let mid = self.sub(s, md);
                for &v in vs {
                    if let Some(c) = self.alg.up.mul_ids(u, v).get(w) {
                        out.push(((s.clone(), u), (mid.clone(), v), c.clone()));
                    }
                }
            }
        }
        out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        out
    }

    /// ψ ∘ S^{−1}, found by solving φ(S(b)) = ψ(b) on each homogeneous block.
    pub fn dual_antipode_inverse(&self, psi: &Functional) -> Result<Functional> {
        let mut blocks: BTreeMap<Vec<i64>, Vec<(Key, CycNum)>> = BTreeMap::new();
        for (k, c) in psi {
            blocks.entry(self.alg.deg(k.1).to_vec()).or_default().push((k.clone(), c.clone()));
        }
        let mut out = Functional::new();
        for (md, entries) in blocks {
            let keys: Vec<Key> = self
                .alg
                .grid()
                .into_iter()
                .flat_map(|a| self.by_degree[&md].iter().map(move |&id| (a.clone(), id)))
                .collect();
            let index: HashMap<&Key, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
            let size = keys.len();
            // row j: coefficients of S(b_j); we solve Σ_i φ_i S(b_j)_i = ψ_j
            let mut mat = vec![vec![CycNum::zero(self.alg.order); size]; size];
            for (j, k) in keys.iter().enumerate() {
                for (kk, c) in self.antipode_key(k).iter() {
                    let i = *index.get(kk).ok_or_else(|| {
                        Error::Precondition("antipode left its homogeneous block".into())
                    })?;
                    mat[j][i] = c.clone();
                }
            }
            let mut rhs = vec![CycNum::zero(self.alg.order); size];
            for (k, c) in entries {
                rhs[index[&k]] = c;
            }
            let sol = solve(mat, rhs)?;
            for (i, c) in sol.into_iter().enumerate() {
                add_term(&mut out, keys[i].clone(), &c);
            }
        }
        Ok(out)
    }

    // ---- cached A-side data ----

    fn delta2(&self, k: &Key) -> Arc<Vec<(Key, Key, Key, CycNum)>> {
        if let Some(v) = self.caches.lock().unwrap().delta2.get(k) {
            return v.clone();
        }
        // (Δ ⊗ id)Δ: legs h₍₁₎₍₁₎, h₍₁₎₍₂₎, h₍₂₎
        let t = self.coproduct_key(k);
        let t2 = self.alg.apply_leg(&t, 0, &|kk| self.coproduct_key(kk));
        let v: Vec<(Key, Key, Key, CycNum)> = t2
            .into_iter()
            .map(|(ks, c)| (ks[0].clone(), ks[1].clone(), ks[2].clone(), c))
            .collect();
        let v = Arc::new(v);
        self.caches.lock().unwrap().delta2.insert(k.clone(), v.clone());
        v
    }

    fn keep(&self, ks: &[Key], slice: Slice) -> bool {
        let low = |k: &Key| self.alg.up.degree_of(k.1) <= 1;
        match slice {
            Slice::Full => true,
            Slice::LeftLow => low(&ks[0]),
            Slice::RightLow => low(&ks[1]),
        }
    }

    /// Δ_J(w) = Σ_a Δ_J(1_a w), built from the coproduct of the prefix of w.
    fn word_coproduct(&self, id: usize, slice: Slice) -> Arc<Tensor> {
        if let Some(v) = self.caches.lock().unwrap().words.get(&(id, slice)) {
            return v.clone();
        }
        let a = &self.alg;
        let mut t = match self.alg.up.words[id].0.split_last() {
            None => a.tensor_of(&[a.one(), a.one()]),
            Some((&last, prefix)) => {
                let pid = a.up.id_of(prefix).expect("prefixes of normal words are normal");
                a.tensor_mul(&self.word_coproduct(pid, slice), &delta_j_generator(a, last as usize))
            }
        };
        t.retain(|ks, _| self.keep(ks, slice));
        let t = Arc::new(t);
        self.caches.lock().unwrap().words.insert((id, slice), t.clone());
        t
    }

    /// Δ_J(1_a w): the terms of Δ_J(w) whose left idempotents add up to a.
    fn coproduct_key(&self, k: &Key) -> Tensor {
        self.word_coproduct(k.1, Slice::Full)
            .iter()
            .filter(|(ks, _)| self.add(&ks[0].0, &ks[1].0) == k.0)
            .map(|(ks, c)| (ks.clone(), c.clone()))
            .collect()
    }

    /// Δ_J on A, through the cached word coproducts.
    pub fn coproduct_a(&self, x: &Elem) -> Tensor {
        let mut out = Tensor::new();
        for (k, c) in x {
            add_scaled(&mut out, &self.coproduct_key(k), c);
        }
        out
    }

    fn antipode_key(&self, k: &Key) -> Arc<Elem> {
        if let Some(v) = self.caches.lock().unwrap().antipode.get(k) {
            return v.clone();
        }
        let v = Arc::new(antipode(&self.alg, &self.basis_elem(k)));
        self.caches.lock().unwrap().antipode.insert(k.clone(), v.clone());
        v
    }

    // ---- elements ----

    /// h ⋈ ψ.
    pub fn pair(&self, h: &Elem, psi: &Functional) -> DElem {
        let mut out = DElem::new();
        for (k, c) in h {
            for (p, d) in psi {
                add_term(&mut out, (k.clone(), p.clone()), &(c * d));
            }
        }
        out
    }

    /// h ⋈ ε.
    pub fn embed(&self, h: &Elem) -> DElem {
        self.pair(h, &self.epsilon())
    }

    /// 1 ⋈ ψ.
    pub fn dual(&self, psi: &Functional) -> DElem {
        self.pair(&self.alg.one(), psi)
    }

    pub fn unit(&self) -> DElem {
        self.embed(&self.alg.one())
    }

    pub fn scalar(&self, c: &CycNum) -> DElem {
        scaled(&self.unit(), c)
    }

    // ---- product ----

    fn product_terms(&self, x: &DKey, y: &DKey, strategy: ProductStrategy) -> DElem {
        match strategy {
            ProductStrategy::Collapsed => self.product_collapsed(x, y),
            ProductStrategy::Naive => self.product_naive(x, y),
        }
    }

    /// (g ⋈ φ)(h ⋈ ψ) = g h₁₂ ω³ ⋈ (ω⁵ ⇀ ψ ↼ ω¹)(ω⁴ S(h₂) ⇀ φ ↼ h₁₁ ω²), where
    /// h₁₁ ⊗ h₁₂ ⊗ h₂ = (Δ ⊗ id)Δ(h).
    fn product_collapsed(&self, x: &DKey, y: &DKey) -> DElem {
        let ((g, phi), (h, psi)) = (x, y);
        let g_el = self.basis_elem(g);
        let psi_f = Functional::from([(psi.clone(), self.one())]);
        let phi_f = Functional::from([(phi.clone(), self.one())]);
        // ω⁵ ⇀ ψ ↼ ω¹ survives only at ω¹ = 1_s, ω⁵ = 1_{s − deg v}
        let a = psi.0.clone();
        let yv = self.right_idem(psi);
        let mut out = DElem::new();
        for (k11, k12, k2, c) in self.delta2(h).iter() {
            let cc = self.right_idem(k12);
            let b = self.right_idem(k11);
            let hpart = self.alg.mul(&g_el, &self.basis_elem(k12));
            if hpart.is_empty() {
                continue;
            }
            let s2 = self.antipode_key(k2);
            let mut by_left: BTreeMap<Vec<i64>, Elem> = BTreeMap::new();
            for (k, v) in s2.iter() {
                by_left.entry(k.0.clone()).or_default().insert(k.clone(), v.clone());
            }
            for (xl, left) in by_left {
                let phi2 = self.harpoon(&left, &phi_f, &self.basis_elem(k11));
                if phi2.is_empty() {
                    continue;
                }
                let idx: Vec<i64> = [&a, &b, &cc, &xl, &yv].iter().flat_map(|v| v.iter().copied()).collect();
                let coeff = c * &self.omega.value(&idx);
                let f = self.convolve(&psi_f, &phi2);
                add_scaled(&mut out, &self.pair(&hpart, &f), &coeff);
            }
        }
        out
    }

    fn product_naive(&self, x: &DKey, y: &DKey) -> DElem {
        let ((g, phi), (h, psi)) = (x, y);
        let g_el = self.basis_elem(g);
        let psi_f = Functional::from([(psi.clone(), self.one())]);
        let phi_f = Functional::from([(phi.clone(), self.one())]);
        let grid = self.alg.grid();
        let mut out = DElem::new();
        for (k11, k12, k2, c) in self.delta2(h).iter() {
            let gh = self.alg.mul(&g_el, &self.basis_elem(k12));
            let s2 = self.antipode_key(k2);
            for i3 in &grid {
                let hpart = self.alg.mul(&gh, &self.alg.idem(i3));
                if hpart.is_empty() {
                    continue;
                }
                for i1 in &grid {
                    for i5 in &grid {
                        let psi2 = self.harpoon(&self.alg.idem(i5), &psi_f, &self.alg.idem(i1));
                        if psi2.is_empty() {
                            continue;
                        }
                        for i2 in &grid {
                            let right = self.alg.mul(&self.basis_elem(k11), &self.alg.idem(i2));
                            for i4 in &grid {
                                let left = self.alg.mul(&self.alg.idem(i4), &s2);
                                let phi2 = self.harpoon(&left, &phi_f, &right);
                                if phi2.is_empty() {
                                    continue;
                                }
                                let idx: Vec<i64> =
                                    [i1, i2, i3, i4, i5].iter().flat_map(|v| v.iter().copied()).collect();
                                let coeff = c * &self.omega.value(&idx);
                                let f = self.convolve(&psi2, &phi2);
                                add_scaled(&mut out, &self.pair(&hpart, &f), &coeff);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn product_basis(&self, x: &DKey, y: &DKey) -> Arc<DElem> {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.caches.lock().unwrap().products.get(&key) {
            return v.clone();
        }
        let v = self.product_terms(x, y, ProductStrategy::Collapsed);
        if self.audit_on {
            let w = self.product_terms(x, y, ProductStrategy::Naive);
            let mut audit = self.audit.lock().unwrap();
            audit.compared += 1;
            if v != w {
                audit.mismatches.push(format!("{:?} * {:?}", x, y));
            }
        }
        let v = Arc::new(v);
        self.caches.lock().unwrap().products.insert(key, v.clone());
        v
    }

    pub fn mul(&self, x: &DElem, y: &DElem) -> DElem {
        let mut out = DElem::new();
        for (kx, cx) in x {
            for (ky, cy) in y {
                let p = self.product_basis(kx, ky);
                add_scaled(&mut out, &p, &(cx * cy));
            }
        }
        out
    }

    pub fn mul_with(&self, x: &DElem, y: &DElem, strategy: ProductStrategy) -> DElem {
        let mut out = DElem::new();
        for (kx, cx) in x {
            for (ky, cy) in y {
                add_scaled(&mut out, &self.product_terms(kx, ky, strategy), &(cx * cy));
            }
        }
        out
    }

    pub fn mul_all(&self, xs: &[DElem]) -> DElem {
        let mut acc = self.unit();
        for x in xs {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn pow(&self, x: &DElem, k: usize) -> DElem {
        let mut acc = self.unit();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    // ---- the T map ----

    /// T(ψ) = φ¹₍₂₎ ⋈ (S(φ²) α φ³) ⇀ ψ ↼ φ¹₍₁₎.
    pub fn t_map(&self, psi: &Functional) -> DElem {
        let grid = self.alg.grid();
        let al = self.alg.from_diag(&self.alpha);
        let mut out = DElem::new();
        for b in &grid {
            let sb = self.alg.idem(&b.iter().map(|v| -v).collect::<Vec<_>>());
            for c in &grid {
                let x = self.alg.mul_all(&[sb.clone(), al.clone(), self.alg.idem(c)]);
                if x.is_empty() {
                    continue;
                }
                for a1 in &grid {
                    let f = self.harpoon(&x, psi, &self.alg.idem(a1));
                    if f.is_empty() {
                        continue;
                    }
                    for a2 in &grid {
                        let idx: Vec<i64> = [self.add(a1, a2), b.clone(), c.clone()].concat();
                        let coeff = self.phi.value(&idx);
                        add_scaled(&mut out, &self.pair(&self.alg.idem(a2), &f), &coeff);
                    }
                }
            }
        }
        out
    }

    /// T(ψ) = u ⋈ ψ for a dual basis functional; returns the diagonal u.
    fn t_diagonal(&self, key: &Key) -> Result<Elem> {
        let t = self.t_map(&Functional::from([(key.clone(), self.one())]));
        let mut u = Elem::new();
        for ((h, p), c) in t {
            if &p != key || h.1 != 0 {
                return Err(Error::Precondition(format!("T({:?}) is not diagonal", key)));
            }
            add_term(&mut u, h, &c);
        }
        Ok(u)
    }

    fn diag_inverse(&self, u: &Elem) -> Result<Elem> {
        let mut out = Elem::new();
        for a in self.alg.grid() {
            let c = u
                .get(&(a.clone(), 0))
                .ok_or_else(|| Error::Precondition("diagonal element is not invertible".into()))?;
            out.insert((a, 0), c.cyc_inv()?);
        }
        Ok(out)
    }

    // ---- counit ----

    /// ε_D(T(ψ)) = ψ(φ¹ S(φ²) α φ³).
    pub fn counit_t(&self, psi: &Functional) -> CycNum {
        let grid = self.alg.grid();
        let al = self.alg.from_diag(&self.alpha);
        let mut x = Elem::new();
        for a in &grid {
            for b in &grid {
                let sb = self.alg.idem(&b.iter().map(|v| -v).collect::<Vec<_>>());
                let left = self.alg.mul(&self.alg.idem(a), &sb);
                if left.is_empty() {
                    continue;
                }
                for c in &grid {
                    let t = self.alg.mul_all(&[left.clone(), al.clone(), self.alg.idem(c)]);
                    let idx = [a.clone(), b.clone(), c.clone()].concat();
                    add_scaled(&mut x, &t, &self.phi.value(&idx));
                }
            }
        }
        self.evaluate(psi, &x)
    }

    /// ε_D(h ⋈ ψ) = ε(h) ε(u_ψ^{−1}) ε_D(T(ψ)).
    pub fn counit(&self, x: &DElem) -> Result<CycNum> {
        let mut out = CycNum::zero(self.alg.order);
        for ((h, p), c) in x {
            let eh = self.alg.counit(&self.basis_elem(h));
            if eh.is_zero() {
                continue;
            }
            let uinv = self.diag_inverse(&self.t_diagonal(p)?)?;
            let pf = Functional::from([(p.clone(), self.one())]);
            let v = &(&eh * &self.alg.counit(&uinv)) * &self.counit_t(&pf);
            out += &(c * &v);
        }
        Ok(out)
    }

    // ---- coproduct ----

    fn embed_tensor(&self, t: &Tensor) -> DTensor {
        let e = self.eps_key();
        let mut out = DTensor::new();
        for (ks, c) in t {
            add_term(&mut out, ((ks[0].clone(), e.clone()), (ks[1].clone(), e.clone())), c);
        }
        out
    }

    pub fn tensor_of(&self, x: &DElem, y: &DElem) -> DTensor {
        let mut out = DTensor::new();
        for (kx, cx) in x {
            for (ky, cy) in y {
                add_term(&mut out, (kx.clone(), ky.clone()), &(cx * cy));
            }
        }
        out
    }

    pub fn tensor_mul(&self, x: &DTensor, y: &DTensor) -> DTensor {
        let mut out = DTensor::new();
        for ((x1, x2), cx) in x {
            for ((y1, y2), cy) in y {
                let l = self.product_basis(x1, y1);
                if l.is_empty() {
                    continue;
                }
                let r = self.product_basis(x2, y2);
                let cc = cx * cy;
                for (k1, c1) in l.iter() {
                    for (k2, c2) in r.iter() {
                        add_term(&mut out, (k1.clone(), k2.clone()), &(&cc * &(c1 * c2)));
                    }
                }
            }
        }
        out
    }

    /// Δ_D(T(ψ)) = φ̃² T(ψ₍₁₎ ↼ φ̃¹) φ⁻¹ φ¹ ⊗ φ̃³ φ⁻³ T(φ³ ⇀ ψ₍₂₎ ↼ φ⁻²) φ².
    pub fn coproduct_t(&self, key: &Key) -> DTensor {
        let grid = self.alg.grid();
        let one = self.alg.one();
        let phi_inv = self.phi.inverse();
        let mut out = DTensor::new();
        for (k1, k2, c) in self.dual_coproduct(key) {
            let f1 = Functional::from([(k1.clone(), self.one())]);
            let f2 = Functional::from([(k2.clone(), self.one())]);
            // ψ₁ ↼ 1_{x1} survives at x1 = s₁; 1_{z3} ⇀ ψ₂ ↼ 1_{y2} at y2 = s₂, z3 = s₂ − deg
            let x1 = k1.0.clone();
            let y2 = k2.0.clone();
            let z3 = self.right_idem(&k2);
            let t1 = self.t_map(&self.harpoon(&one, &f1, &self.alg.idem(&x1)));
            let t2 = self.t_map(&self.harpoon(&self.alg.idem(&z3), &f2, &self.alg.idem(&y2)));
            let mut left: HashMap<(Vec<i64>, Vec<i64>), DElem> = HashMap::new();
            let mut right: HashMap<(Vec<i64>, Vec<i64>), DElem> = HashMap::new();
            for p in &grid {
                for r in &grid {
                    let l = self.mul_all(&[self.embed(&self.alg.idem(p)), t1.clone(), self.embed(&self.alg.idem(r))]);
                    if !l.is_empty() {
                        left.insert((p.clone(), r.clone()), l);
                    }
                    let rr = self.mul_all(&[self.embed(&self.alg.idem(p)), t2.clone(), self.embed(&self.alg.idem(r))]);
                    if !rr.is_empty() {
                        right.insert((p.clone(), r.clone()), rr);
                    }
                }
            }
            // free indices: x2, y1 (= z1), x3 (= y3), z2
            for ((x2, y1), l) in &left {
                for ((x3, z2), r) in &right {
                    let e1 = self.phi.exponent(&[x1.clone(), x2.clone(), x3.clone()].concat());
                    let e2 = phi_inv.exponent(&[y1.clone(), y2.clone(), x3.clone()].concat());
                    let e3 = self.phi.exponent(&[y1.clone(), z2.clone(), z3.clone()].concat());
                    let coeff = c.mul_root(e1 + e2 + e3);
                    add_scaled(&mut out, &self.tensor_of(l, r), &coeff);
                }
            }
        }
        out
    }

    /// Δ_D(1 ⋈ ψ) = Δ(u_ψ^{−1}) Δ_D(T(ψ)).
    fn coproduct_unit(&self, key: &Key) -> Result<Arc<DTensor>> {
        if let Some(v) = self.caches.lock().unwrap().unit_coproduct.get(key) {
            return Ok(v.clone());
        }
        let uinv = self.diag_inverse(&self.t_diagonal(key)?)?;
        let du = self.embed_tensor(&self.coproduct_a(&uinv));
        let v = Arc::new(self.tensor_mul(&du, &self.coproduct_t(key)));
        self.caches.lock().unwrap().unit_coproduct.insert(key.clone(), v.clone());
        Ok(v)
    }

    /// Δ_D(h ⋈ ψ) = Δ(h) Δ_D(1 ⋈ ψ).
    pub fn coproduct(&self, x: &DElem) -> Result<DTensor> {
        let mut by_dual: BTreeMap<Key, Elem> = BTreeMap::new();
        for ((h, p), c) in x {
            add_term(by_dual.entry(p.clone()).or_default(), h.clone(), c);
        }
        let mut out = DTensor::new();
        for (p, h) in by_dual {
            let dh = self.embed_tensor(&self.coproduct_a(&h));
            let t = self.tensor_mul(&dh, &*self.coproduct_unit(&p)?);
            add_scaled(&mut out, &t, &self.one());
        }
        Ok(out)
    }

    // ---- antipode ----

    /// S_D(T(ψ)) = f² T(f⁻² ⇀ S^{−1}(ψ) ↼ f¹) f⁻¹.
    pub fn antipode_t(&self, psi: &Functional) -> Result<DElem> {
        let grid = self.alg.grid();
        let sinv = self.dual_antipode_inverse(psi)?;
        let finv = self.f.inverse();
        let mut out = DElem::new();
        for (key, c) in &sinv {
            let kf = Functional::from([(key.clone(), self.one())]);
            // ↼ 1_{e} survives at e = s; 1_{f'} ⇀ at f' = s − deg
            let e = key.0.clone();
            let fp = self.right_idem(key);
            let t = self.t_map(&self.harpoon(&self.alg.idem(&fp), &kf, &self.alg.idem(&e)));
            for f2 in &grid {
                let left = self.mul(&self.embed(&self.alg.idem(f2)), &t);
                if left.is_empty() {
                    continue;
                }
                let ef = self.f.exponent(&[e.clone(), f2.clone()].concat());
                for e1 in &grid {
                    let ei = finv.exponent(&[e1.clone(), fp.clone()].concat());
                    let term = self.mul(&left, &self.embed(&self.alg.idem(e1)));
                    add_scaled(&mut out, &term, &c.mul_root(ef + ei));
                }
            }
        }
        Ok(out)
    }

    /// S_D(h ⋈ ψ) = S_D(T(ψ)) S(u_ψ^{−1}) S(h).
    pub fn antipode(&self, x: &DElem) -> Result<DElem> {
        let mut out = DElem::new();
        for ((h, p), c) in x {
            let pf = Functional::from([(p.clone(), self.one())]);
            let uinv = self.diag_inverse(&self.t_diagonal(p)?)?;
            let right = self.alg.mul(&antipode(&self.alg, &uinv), &self.antipode_key(h));
            let t = self.mul(&self.antipode_t(&pf)?, &self.embed(&right));
            add_scaled(&mut out, &t, c);
        }
        Ok(out)
    }

    // ---- generator images ----

    pub fn h(&self, i: usize, power: i64) -> DElem {
        self.embed(&self.alg.group(&self.unit_vec(i, power)))
    }

    pub fn e(&self, i: usize) -> DElem {
        self.embed(&self.alg.e(i))
    }

    pub fn b(&self, i: usize, power: i64) -> DElem {
        self.embed(&b_elem(&self.alg, i, power))
    }

    /// H_i^{power}.
    pub fn big_h(&self, i: usize, power: i64) -> DElem {
        self.embed(&h_group_elem(&self.alg, i, power))
    }

    /// b_i χ_i, computed as a product in D.
    pub fn b_chi(&self, i: usize) -> DElem {
        self.mul(&self.b(i, 1), &self.dual(&self.chi(&self.unit_vec(i, 1))))
    }

    /// (b_i χ_i)^{−1} = (b_i χ_i)^{n−1} H_i².
    pub fn b_chi_inverse(&self, i: usize) -> DElem {
        let n = self.datum().n as usize;
        self.mul(&self.pow(&self.b_chi(i), n - 1), &self.big_h(i, 2))
    }

    /// b_i Γ^i.
    pub fn b_gamma(&self, i: usize) -> DElem {
        self.mul(&self.b(i, 1), &self.dual(&self.gamma(i)))
    }

    fn slice(&self, i: usize, zero: bool) -> DElem {
        self.embed(&idem_slice(&self.alg, i, move |v| (v == 0) == zero))
    }
}

/// Gaussian elimination over the cyclotomic field.
pub fn solve(mut a: Vec<Vec<CycNum>>, mut b: Vec<CycNum>) -> Result<Vec<CycNum>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Precondition("singular system".into()))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].cyc_inv()?;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for k in col..n {
                let t = &factor * &a[col][k];
                a[r][k] -= &t;
            }
            let t = &factor * &b[col];
            b[r] -= &t;
        }
    }
    Ok((0..n).map(|i| &b[i] * &a[i][i].cyc_inv().unwrap()).collect())
}

fn check(name: &str, ok: bool, witness: impl FnOnce() -> String) -> Check {
    Check::new(name, ok, if ok { None } else { Some(witness()) })
}

fn eq_check(name: &str, lhs: &DElem, rhs: &DElem) -> Check {
    check(name, lhs == rhs, || format!("difference {:?}", difference(lhs, rhs)))
}

fn gauss(d: &CartanDatum, r: u64, s: u64, di: i64) -> CycNum {
    gauss_binomial(d.big_n, r, s, di).expect("q-binomials in the Serre range are finite")
}

/// Σ_{r+s=1−a_ij} (−1)^s [1−a_ij choose s]_{d_i} x_i^r x_j x_i^s.
pub fn serre_sum(dd: &Double, xi: &DElem, xj: &DElem, i: usize, j: usize) -> DElem {
    let d = dd.datum();
    let top = (1 - d.a[i][j]) as u64;
    let mut out = DElem::new();
    for s in 0..=top {
        let r = top - s;
        let term = dd.mul_all(&[dd.pow(xi, r as usize), xj.clone(), dd.pow(xi, s as usize)]);
        let mut c = gauss(d, r, s, d.d[i]);
        if s % 2 == 1 {
            c = -c;
        }
        add_scaled(&mut out, &term, &c);
    }
    out
}

/// Which groups of relations to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteScope {
    /// Every relation.
    Full,
    /// Only the Serre and nilpotency relations on the F side.
    SerreOnly,
}

/// The relations of D(A) among h_i, e_i, b_iχ_i, b_iΓ^i, and its coalgebra and
/// antipode data on those generators.
pub fn relation_suite(dd: &Double, scope: SuiteScope) -> Result<Vec<Check>> {
    let d = dd.datum().clone();
    let m = d.m;
    let n = d.n as i64;
    let mut out = Vec::new();
    let unit = dd.unit();
    let zero = DElem::new();

    if scope == SuiteScope::Full {
        algebra_part(dd, &mut out)?;
    }

    for i in 0..m {
        let li = d.l[i] as usize;
        let bg = dd.b_gamma(i);
        let below = dd.pow(&bg, li - 1);
        let at = dd.mul(&below, &bg);
        out.push(check(&format!("gamma-nilpotent[{}]", i + 1), at.is_empty() && !below.is_empty(), || {
            format!("power l_i empty: {}, power l_i − 1 empty: {}", at.is_empty(), below.is_empty())
        }));
    }
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            let s = serre_sum(dd, &dd.b_gamma(i), &dd.b_gamma(j), i, j);
            out.push(eq_check(&format!("gamma-serre[{},{}]", i + 1, j + 1), &s, &zero));
        }
    }
    if scope == SuiteScope::SerreOnly {
        return Ok(out);
    }

    for i in 0..m {
        for j in 0..m {
            // (b_iΓ^i)(b_jΓ^j) = q^{−c_ji} b_i b_j (Γ^j·Γ^i)
            let lhs = dd.mul(&dd.b_gamma(i), &dd.b_gamma(j));
            let gg = dd.convolve(&dd.gamma(j), &dd.gamma(i));
            let bb = b_elem(&dd.alg, i, 1);
            let bb = dd.alg.mul(&bb, &b_elem(&dd.alg, j, 1));
            let rhs = scaled(&dd.mul(&dd.embed(&bb), &dd.dual(&gg)), &d.q(-d.c[j][i]));
            out.push(eq_check(&format!("gamma-pair-product[{},{}]", i + 1, j + 1), &lhs, &rhs));
        }
    }

    for i in 0..m {
        let chi = dd.dual(&dd.chi(&dd.unit_vec(i, 1)));
        for j in 0..m {
            let chj = dd.dual(&dd.chi(&dd.unit_vec(j, 1)));
            out.push(eq_check(
                &format!("chi-commute[{},{}]", i + 1, j + 1),
                &dd.mul(&chi, &chj),
                &dd.mul(&chj, &chi),
            ));
            out.push(eq_check(
                &format!("chi-h-commute[{},{}]", i + 1, j + 1),
                &dd.mul(&chi, &dd.h(j, 1)),
                &dd.mul(&dd.h(j, 1), &chi),
            ));
        }
        // (1 ⋈ χ_i)^k = H_i^{k−1} χ_i^k
        let mut ok = true;
        let mut acc = unit.clone();
        for k in 1..=n {
            acc = dd.mul(&acc, &chi);
            let rhs = dd.mul(&dd.big_h(i, k - 1), &dd.dual(&dd.chi(&dd.unit_vec(i, k))));
            ok &= acc == rhs;
        }
        out.push(check(&format!("chi-powers[{}]", i + 1), ok, || "power mismatch".into()));
        let bc = dd.b_chi(i);
        out.push(eq_check(
            &format!("bchi-power[{}]", i + 1),
            &dd.pow(&bc, n as usize),
            &dd.big_h(i, -2),
        ));
        let inv = dd.b_chi_inverse(i);
        out.push(check(
            &format!("bchi-inverse[{}]", i + 1),
            dd.mul(&bc, &inv) == unit && dd.mul(&inv, &bc) == unit,
            || "not a two-sided inverse".into(),
        ));
        for j in 0..m {
            let bg = dd.b_gamma(j);
            let frak_delta = if i == j { -1 } else { 0 };
            out.push(eq_check(
                &format!("h-gamma-conjugation[{},{}]", i + 1, j + 1),
                &dd.mul_all(&[dd.h(i, 1), bg.clone(), dd.h(i, -1)]),
                &scaled(&bg, &d.frak(frak_delta)),
            ));
            let cji = d.c[j][i];
            out.push(eq_check(
                &format!("bchi-e-conjugation[{},{}]", i + 1, j + 1),
                &dd.mul_all(&[bc.clone(), dd.e(j), inv.clone()]),
                &scaled(&dd.e(j), &(&d.frak(cji) * &d.q(-2 * cji))),
            ));
            out.push(eq_check(
                &format!("bchi-gamma-conjugation[{},{}]", i + 1, j + 1),
                &dd.mul_all(&[bc.clone(), bg.clone(), inv.clone()]),
                &scaled(&bg, &(&d.frak(-cji) * &d.q(2 * cji))),
            ));
        }
    }

    // (b_jΓ^j)e_i − q^{−c_ji} e_i(b_jΓ^j) = δ_ij(1 ⋈ ε − H_i^{−1} b_iχ_i)
    for i in 0..m {
        for j in 0..m {
            let bg = dd.b_gamma(j);
            let lhs = difference(
                &dd.mul(&bg, &dd.e(i)),
                &scaled(&dd.mul(&dd.e(i), &bg), &d.q(-d.c[j][i])),
            );
            let rhs = if i == j {
                difference(&unit, &dd.mul(&dd.big_h(i, -1), &dd.b_chi(i)))
            } else {
                DElem::new()
            };
            out.push(eq_check(&format!("gamma-e-commutator[{},{}]", i + 1, j + 1), &lhs, &rhs));
        }
    }

    coalgebra_part(dd, &mut out)?;
    antipode_part(dd, &mut out)?;
    Ok(out)
}

fn algebra_part(dd: &Double, out: &mut Vec<Check>) -> Result<()> {
    let d = dd.datum().clone();
    let (m, n) = (d.m, d.n as usize);
    let unit = dd.unit();
    for i in 0..m {
        out.push(eq_check(&format!("h-order[{}]", i + 1), &dd.pow(&dd.h(i, 1), n), &unit));
        for j in 0..m {
            out.push(eq_check(
                &format!("h-commute[{},{}]", i + 1, j + 1),
                &dd.mul(&dd.h(i, 1), &dd.h(j, 1)),
                &dd.mul(&dd.h(j, 1), &dd.h(i, 1)),
            ));
            let expect = scaled(&dd.e(j), &d.frak(if i == j { 1 } else { 0 }));
            out.push(eq_check(
                &format!("h-e-conjugation[{},{}]", i + 1, j + 1),
                &dd.mul_all(&[dd.h(i, 1), dd.e(j), dd.h(i, -1)]),
                &expect,
            ));
        }
        let li = d.l[i] as usize;
        let below = dd.pow(&dd.e(i), li - 1);
        let at = dd.mul(&below, &dd.e(i));
        out.push(check(&format!("e-nilpotent[{}]", i + 1), at.is_empty() && !below.is_empty(), || {
            "nilpotency order mismatch".into()
        }));
        for j in 0..m {
            if i != j {
                let s = serre_sum(dd, &dd.e(i), &dd.e(j), i, j);
                out.push(eq_check(&format!("e-serre[{},{}]", i + 1, j + 1), &s, &DElem::new()));
            }
        }
    }
    // unit and embedding laws on basis pairs
    let mut ok_unit = true;
    let mut ok_embed = true;
    let mut witness = String::new();
    for (hk, pk) in basis_pairs(dd, EXHAUSTIVE_PAIR_LIMIT, 60, 0x1eaf) {
        let h = dd.basis_elem(&hk);
        let psi = Functional::from([(pk.clone(), dd.one())]);
        let x = dd.pair(&h, &psi);
        if dd.mul(&dd.embed(&h), &dd.dual(&psi)) != x {
            ok_embed = false;
            witness = format!("{:?} ⋈ {:?}", hk, pk);
        }
        if dd.mul(&unit, &x) != x || dd.mul(&x, &unit) != x {
            ok_unit = false;
            witness = format!("{:?} ⋈ {:?}", hk, pk);
        }
    }
    out.push(check("unit-law", ok_unit, || witness.clone()));
    out.push(check("embedding-law", ok_embed, || witness.clone()));
    Ok(())
}

/// Above this dimension of A the unit and embedding laws are sampled.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 64;

/// All (h, ψ) basis pairs when dim A ≤ `limit`; otherwise every pair with both
/// degrees ≤ 1 plus `samples` seeded random pairs.
pub fn basis_pairs(dd: &Double, limit: usize, samples: usize, seed: u64) -> Vec<(Key, Key)> {
    let keys: Vec<Key> = dd
        .alg
        .grid()
        .into_iter()
        .flat_map(|a| (0..dd.alg.up.dim()).map(move |id| (a.clone(), id)))
        .collect();
    if keys.len() <= limit {
        return keys.iter().flat_map(|h| keys.iter().map(move |p| (h.clone(), p.clone()))).collect();
    }
    let low: Vec<&Key> = keys.iter().filter(|k| dd.alg.up.degree_of(k.1) <= 1).collect();
    let mut out: Vec<(Key, Key)> =
        low.iter().flat_map(|h| low.iter().map(move |p| ((*h).clone(), (*p).clone()))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let h = keys[rng.gen_range(0..keys.len())].clone();
        let p = keys[rng.gen_range(0..keys.len())].clone();
        out.push((h, p));
    }
    out
}

fn coalgebra_part(dd: &Double, out: &mut Vec<Check>) -> Result<()> {
    let d = dd.datum().clone();
    let m = d.m;
    let a = &dd.alg;
    for i in 0..m {
        let hi = dd.h(i, 1);
        out.push(check(
            &format!("h-grouplike[{}]", i + 1),
            dd.coproduct(&hi)? == dd.tensor_of(&hi, &hi),
            || "Δ(h_i) ≠ h_i ⊗ h_i".into(),
        ));
        let de = dd.coproduct(&dd.e(i))?;
        let definitional = dd.embed_tensor(&twist_coproduct_definitional(a, i)?);
        out.push(check(&format!("e-coproduct[{}]", i + 1), de == definitional, || {
            "Δ(e_i) differs from J Δ(e_i) J^{-1}".into()
        }));
        out.push(check(
            &format!("a-counit[{}]", i + 1),
            dd.counit(&hi)?.is_one() && dd.counit(&dd.e(i))?.is_zero(),
            || "ε(h_i) ≠ 1 or ε(e_i) ≠ 0".into(),
        ));

        let chi = dd.chi(&dd.unit_vec(i, 1));
        out.push(eq_check(
            &format!("t-chi[{}]", i + 1),
            &dd.t_map(&chi),
            &dd.mul(&dd.big_h(i, -1), &dd.dual(&chi)),
        ));
        out.push(eq_check(&format!("t-gamma[{}]", i + 1), &dd.t_map(&dd.gamma(i)), &dd.dual(&dd.gamma(i))));

        let bc = dd.b_chi(i);
        out.push(check(
            &format!("bchi-grouplike[{}]", i + 1),
            dd.coproduct(&bc)? == dd.tensor_of(&bc, &bc),
            || "Δ(b_iχ_i) is not b_iχ_i ⊗ b_iχ_i".into(),
        ));
        // Δ(b_iΓ^i) = b_iΓ^i ⊗ b_i + H_i^{−1}(b_iχ_i) ⊗ (b_iΓ^i)Σ_{j≠0}1_j^i + (b_iχ_i) ⊗ (b_iΓ^i)1_0^i
        let bg = dd.b_gamma(i);
        let mut rhs = dd.tensor_of(&bg, &dd.b(i, 1));
        let hb = dd.mul(&dd.big_h(i, -1), &bc);
        add_scaled(&mut rhs, &dd.tensor_of(&hb, &dd.mul(&bg, &dd.slice(i, false))), &dd.one());
        add_scaled(&mut rhs, &dd.tensor_of(&bc, &dd.mul(&bg, &dd.slice(i, true))), &dd.one());
        out.push(check(&format!("bgamma-coproduct[{}]", i + 1), dd.coproduct(&bg)? == rhs, || {
            "Δ(b_iΓ^i) mismatch".into()
        }));
        let tchi = dd.t_map(&chi);
        out.push(check(
            &format!("d-counit[{}]", i + 1),
            dd.counit(&bc)?.is_one()
                && dd.counit(&bg)?.is_zero()
                && dd.counit(&tchi)? == dd.counit_t(&chi),
            || "counit mismatch".into(),
        ));
    }
    // Δ_D(xy) = Δ_D(x)Δ_D(y) on generator pairs
    let mut gens: Vec<(String, DElem)> = Vec::new();
    for i in 0..m {
        gens.push((format!("h{}", i + 1), dd.h(i, 1)));
        gens.push((format!("e{}", i + 1), dd.e(i)));
        gens.push((format!("bchi{}", i + 1), dd.b_chi(i)));
        gens.push((format!("bgamma{}", i + 1), dd.b_gamma(i)));
    }
    let deltas: Vec<DTensor> = gens.iter().map(|(_, g)| dd.coproduct(g)).collect::<Result<_>>()?;
    let mut ok = true;
    let mut witness = String::new();
    for (x, (nx, gx)) in gens.iter().enumerate() {
        for (y, (ny, gy)) in gens.iter().enumerate() {
            let lhs = dd.coproduct(&dd.mul(gx, gy))?;
            if lhs != dd.tensor_mul(&deltas[x], &deltas[y]) {
                ok = false;
                witness = format!("{}·{}", nx, ny);
            }
        }
    }
    out.push(check("coproduct-multiplicative", ok, || witness.clone()));

    // reassociator and α: the twist-derived α equals the closed form
    let mismatch = alpha_twist_mismatch(&d);
    out.push(check("alpha-closed-form", mismatch.is_none(), || format!("{:?}", mismatch)));
    Ok(())
}

fn antipode_part(dd: &Double, out: &mut Vec<Check>) -> Result<()> {
    let d = dd.datum().clone();
    let a = &dd.alg;
    let unit = dd.unit();
    let al = dd.embed(&a.from_diag(&dd.alpha));
    let al_inv = dd.embed(&a.from_diag(&dd.alpha.inverse()));
    for i in 0..d.m {
        out.push(eq_check(&format!("antipode-h[{}]", i + 1), &dd.antipode(&dd.h(i, 1))?, &dd.h(i, -1)));
        let bc = dd.b_chi(i);
        let sbc = dd.antipode(&bc)?;
        out.push(check(
            &format!("antipode-bchi[{}]", i + 1),
            dd.mul(&sbc, &bc) == unit && dd.mul(&bc, &sbc) == unit,
            || "S(b_iχ_i) is not the inverse".into(),
        ));
        let closed = antipode_generator(a, i);
        let defn = antipode_definitional(a, i)?;
        out.push(check(
            &format!("antipode-e[{}]", i + 1),
            closed == defn && dd.antipode(&dd.e(i))? == dd.embed(&closed),
            || "S(e_i) mismatch".into(),
        ));
        // S(b_iΓ^i) = −(H_i(b_iχ_i)^{−1}α(b_iΓ^i)Σ_{j≠0}1_j^i + (b_iχ_i)^{−1}α(b_iΓ^i)1_0^i) b_i^{−1} α^{−1}
        let bg = dd.b_gamma(i);
        let inv = dd.b_chi_inverse(i);
        let first = dd.mul_all(&[dd.big_h(i, 1), inv.clone(), al.clone(), bg.clone(), dd.slice(i, false)]);
        let second = dd.mul_all(&[inv.clone(), al.clone(), bg.clone(), dd.slice(i, true)]);
        let closed = scaled(
            &dd.mul_all(&[sum(&first, &second), dd.b(i, -1), al_inv.clone()]),
            &-dd.one(),
        );
        out.push(eq_check(&format!("antipode-bgamma[{}]", i + 1), &dd.antipode(&bg)?, &closed));
        // S(x₁)αx₂ = ε(x)α and x₁S(x₂) = ε(x) for x ∈ {b_iχ_i, b_iΓ^i}
        for (name, x) in [("bchi", bc.clone()), ("bgamma", bg.clone())] {
            let dx = dd.coproduct(&x)?;
            let eps = dd.counit(&x)?;
            let mut left = DElem::new();
            let mut right = DElem::new();
            for ((k1, k2), c) in &dx {
                let x1 = DElem::from([(k1.clone(), dd.one())]);
                let x2 = DElem::from([(k2.clone(), dd.one())]);
                add_scaled(&mut left, &dd.mul_all(&[dd.antipode(&x1)?, al.clone(), x2.clone()]), c);
                add_scaled(&mut right, &dd.mul(&x1, &dd.antipode(&x2)?), c);
            }
            out.push(check(
                &format!("antipode-axiom-{}[{}]", name, i + 1),
                left == scaled(&al, &eps) && right == scaled(&unit, &eps),
                || "antipode axiom fails".into(),
            ));
        }
    }
    Ok(())
}

/// Images of the abstract generators K_i, K̂_i, E_i, F_i.
pub struct Presentation<'a> {
    pub dd: &'a Double,
}

impl<'a> Presentation<'a> {
    pub fn k(&self, i: usize) -> DElem {
        self.dd.h(i, 1)
    }
    pub fn k_hat(&self, i: usize) -> DElem {
        self.dd.b_chi(i)
    }
    pub fn e(&self, i: usize) -> DElem {
        self.dd.e(i)
    }
    pub fn f(&self, i: usize) -> DElem {
        self.dd.b_gamma(i)
    }

    /// ∏_l K_l^{k_l}.
    fn k_prod(&self, k: &[i64]) -> DElem {
        self.dd.embed(&self.dd.alg.group(k))
    }
}

/// The defining relations of the presented algebra, checked on the generator images.
pub fn presentation_relations(dd: &Double) -> Vec<Check> {
    let p = Presentation { dd };
    let d = dd.datum().clone();
    let (m, n) = (d.m, d.n as usize);
    let unit = dd.unit();
    let mut out = Vec::new();
    let commute = |x: &DElem, y: &DElem| dd.mul(x, y) == dd.mul(y, x);
    for i in 0..m {
        for j in 0..m {
            out.push(check(
                &format!("k-commute[{},{}]", i + 1, j + 1),
                commute(&p.k(i), &p.k(j)) && commute(&p.k_hat(i), &p.k_hat(j)) && commute(&p.k(i), &p.k_hat(j)),
                || "Cartan part is not commutative".into(),
            ));
        }
        out.push(eq_check(&format!("k-order[{}]", i + 1), &dd.pow(&p.k(i), n), &unit));
        let k: Vec<i64> = (0..m).map(|l| -2 * d.c[i][l]).collect();
        out.push(eq_check(&format!("k-hat-power[{}]", i + 1), &dd.pow(&p.k_hat(i), n), &p.k_prod(&k)));
        for j in 0..m {
            let delta = if i == j { 1 } else { 0 };
            let cij = d.c[i][j];
            let kl = |x: &DElem, y: &DElem| dd.mul(x, y);
            out.push(check(
                &format!("k-e-f[{},{}]", i + 1, j + 1),
                kl(&p.k(i), &p.e(j)) == scaled(&kl(&p.e(j), &p.k(i)), &d.frak(delta))
                    && kl(&p.k(i), &p.f(j)) == scaled(&kl(&p.f(j), &p.k(i)), &d.frak(-delta)),
                || "K E / K F relation fails".into(),
            ));
            out.push(check(
                &format!("k-hat-e-f[{},{}]", i + 1, j + 1),
                kl(&p.k_hat(i), &p.e(j)) == scaled(&kl(&p.e(j), &p.k_hat(i)), &(&d.frak(cij) * &d.q(-2 * cij)))
                    && kl(&p.k_hat(i), &p.f(j))
                        == scaled(&kl(&p.f(j), &p.k_hat(i)), &(&d.frak(-cij) * &d.q(2 * cij))),
                || "K̂ E / K̂ F relation fails".into(),
            ));
            // F_j E_i − q^{−c_ij} E_i F_j = δ_ij (1 − ∏_l K_l^{−c_il} K̂_i)
            let lhs = difference(&kl(&p.f(j), &p.e(i)), &scaled(&kl(&p.e(i), &p.f(j)), &d.q(-cij)));
            let rhs = if i == j {
                let k: Vec<i64> = (0..m).map(|l| -d.c[i][l]).collect();
                difference(&unit, &kl(&p.k_prod(&k), &p.k_hat(i)))
            } else {
                DElem::new()
            };
            out.push(eq_check(&format!("f-e-commutator[{},{}]", i + 1, j + 1), &lhs, &rhs));
        }
        let li = d.l[i] as usize;
        out.push(check(
            &format!("e-f-nilpotent[{}]", i + 1),
            dd.pow(&p.e(i), li).is_empty() && dd.pow(&p.f(i), li).is_empty(),
            || "E_i or F_i not nilpotent of order l_i".into(),
        ));
        for j in 0..m {
            if i != j {
                let se = serre_sum(dd, &p.e(i), &p.e(j), i, j);
                let sf = serre_sum(dd, &p.f(i), &p.f(j), i, j);
                out.push(check(
                    &format!("e-f-serre[{},{}]", i + 1, j + 1),
                    se.is_empty() && sf.is_empty(),
                    || "Serre relation fails".into(),
                ));
            }
        }
    }
    out
}

/// Δ(F_i), ε, S(K̂_i), S(F_i), φ and α of the presentation against the double.
pub fn presentation_structure(dd: &Double) -> Result<Vec<Check>> {
    let p = Presentation { dd };
    let d = dd.datum().clone();
    let a = &dd.alg;
    let mut out = Vec::new();
    for i in 0..d.m {
        let kh = p.k_hat(i);
        out.push(check(
            &format!("k-hat-grouplike[{}]", i + 1),
            dd.coproduct(&kh)? == dd.tensor_of(&kh, &kh),
            || "Δ(K̂_i)".into(),
        ));
        let f = p.f(i);
        let kinv = dd.big_h(i, -1);
        let mut rhs = dd.tensor_of(&f, &dd.b(i, 1));
        add_scaled(&mut rhs, &dd.tensor_of(&dd.mul(&kinv, &kh), &dd.mul(&f, &dd.slice(i, false))), &dd.one());
        add_scaled(&mut rhs, &dd.tensor_of(&kh, &dd.mul(&f, &dd.slice(i, true))), &dd.one());
        out.push(check(&format!("f-coproduct[{}]", i + 1), dd.coproduct(&f)? == rhs, || "Δ(F_i)".into()));
        out.push(check(
            &format!("presentation-counit[{}]", i + 1),
            dd.counit(&kh)?.is_one() && dd.counit(&f)?.is_zero() && dd.counit(&p.k(i))?.is_one(),
            || "counit".into(),
        ));
        out.push(check(
            &format!("k-hat-antipode[{}]", i + 1),
            dd.mul(&dd.antipode(&kh)?, &kh) == dd.unit(),
            || "S(K̂_i)".into(),
        ));
        let al = dd.embed(&a.from_diag(&dd.alpha));
        let al_inv = dd.embed(&a.from_diag(&dd.alpha.inverse()));
        let inv = dd.b_chi_inverse(i);
        let first = dd.mul_all(&[dd.big_h(i, 1), inv.clone(), al.clone(), f.clone(), dd.slice(i, false)]);
        let second = dd.mul_all(&[inv, al, f.clone(), dd.slice(i, true)]);
        let closed = scaled(&dd.mul_all(&[sum(&first, &second), dd.b(i, -1), al_inv]), &-dd.one());
        out.push(eq_check(&format!("f-antipode[{}]", i + 1), &dd.antipode(&f)?, &closed));
    }
    let (frak_phi, q_phi) = printed_reassociator(&d);
    out.push(check(
        "reassociator",
        frak_phi.first_difference(&dd.phi).is_none(),
        || "φ mismatch".into(),
    ));
    let _ = q_phi;
    Ok(out)
}

/// The reassociator of the presentation read with 𝔮 and with q.
pub fn printed_reassociator(d: &CartanDatum) -> (DiagTensor, DiagTensor) {
    let build = |scale: i64| {
        let c = d.c.clone();
        let (m, n) = (d.m, d.n as i64);
        DiagTensor::new(3, m, n, d.big_n as i64, Some("presentation-phi"), move |x| {
            let mut s = 0;
            for i in 0..m {
                for j in 0..m {
                    s -= c[i][j] * x[i] * crate::scalars::fdiv(x[m + j] + x[2 * m + j], n);
                }
            }
            scale * s
        })
    };
    (build(d.n as i64), build(1))
}

// ---- dimension of the triangular spanning set ----

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime p ≡ 1 mod `order` near 2^30 together with an element of order `order`.
fn prime_with_root(order: u64, skip: usize) -> (u64, u64) {
    let mut k = (1u64 << 30) / order;
    let mut seen = 0;
    loop {
        let p = k * order + 1;
        k += 1;
        if !is_prime(p) {
            continue;
        }
        if seen < skip {
            seen += 1;
            continue;
        }
        let factors = prime_factors(order);
        for x in 2..p {
            let r = pow_mod(x, (p - 1) / order, p);
            if factors.iter().all(|&l| pow_mod(r, order / l, p) != 1) {
                return (p, r);
            }
        }
    }
}

fn reduce_mod(c: &CycNum, p: u64, root: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let mut acc = 0u64;
    let mut pw = 1u64;
    for coeff in c.coeffs() {
        if !coeff.is_zero() {
            let num = (coeff.numer() % &pb + &pb) % &pb;
            let den = (coeff.denom() % &pb + &pb) % &pb;
            let den = den.to_u64()?;
            if den == 0 {
                return None;
            }
            let v = num.to_u64()? as u128 * pow_mod(den, p - 2, p) as u128 % p as u128;
            acc = ((acc as u128 + v * pw as u128) % p as u128) as u64;
        }
        pw = (pw as u128 * root as u128 % p as u128) as u64;
    }
    Some(acc)
}

/// Rank of a family of double elements, computed modulo a prime where the
/// cyclotomic field splits. A full rank modulo p implies full rank over ℚ(ζ).
pub fn rank_mod_p(elems: &[DElem], order: u64) -> usize {
    'prime: for skip in 0..8 {
        let (p, root) = prime_with_root(order, skip);
        let keys: BTreeSet<&DKey> = elems.iter().flat_map(|e| e.keys()).collect();
        let index: HashMap<&DKey, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(elems.len());
        for e in elems {
            let mut row = vec![0u64; keys.len()];
            for (k, c) in e {
                match reduce_mod(c, p, root) {
                    Some(v) => row[index[k]] = v,
                    None => continue 'prime,
                }
            }
            rows.push(row);
        }
        let cols = keys.len();
        let mut rank = 0;
        for col in 0..cols {
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
            rows.swap(rank, piv);
            let inv = pow_mod(rows[rank][col], p - 2, p);
            for k in col..cols {
                rows[rank][k] = (rows[rank][k] as u128 * inv as u128 % p as u128) as u64;
            }
            let pivot_row = rows[rank].clone();
            for r in 0..rows.len() {
                if r == rank || rows[r][col] == 0 {
                    continue;
                }
                let f = rows[r][col];
                for k in col..cols {
                    if pivot_row[k] != 0 {
                        let t = (f as u128 * pivot_row[k] as u128 % p as u128) as u64;
                        rows[r][k] = (rows[r][k] + p - t) % p;
                    }
                }
            }
            rank += 1;
        }
        return rank;
    }
    0
}

/// The spanning set E^w K^a K̂^b F^v of the presented algebra, as double elements.
pub fn triangular_span(dd: &Double) -> Vec<DElem> {
    let p = Presentation { dd };
    let d = dd.datum().clone();
    let up = &dd.alg.up;
    let grid = dd.alg.grid();
    let word_image = |gen: &dyn Fn(usize) -> DElem, id: usize| -> DElem {
        let mut acc = dd.unit();
        for &l in &up.words[id].0 {
            acc = dd.mul(&acc, &gen(l as usize));
        }
        acc
    };
    let es: Vec<DElem> = (0..up.dim()).map(|id| word_image(&|i| p.e(i), id)).collect();
    let fs: Vec<DElem> = (0..up.dim()).map(|id| word_image(&|i| p.f(i), id)).collect();
    let mut cartan = Vec::new();
    for a in &grid {
        for b in &grid {
            let mut x = p.k_prod(a);
            for i in 0..d.m {
                x = dd.mul(&x, &dd.pow(&p.k_hat(i), b[i] as usize));
            }
            cartan.push(x);
        }
    }
    let mut out = Vec::new();
    for e in &es {
        for k in &cartan {
            let ek = dd.mul(e, k);
            for f in &fs {
                out.push(dd.mul(&ek, f));
            }
        }
    }
    out
}

/// (size of the spanning set, its rank, (dim A)²).
pub fn presentation_dimension(dd: &Double) -> (usize, usize, usize) {
    let span = triangular_span(dd);
    let rank = rank_mod_p(&span, dd.datum().big_n);
    let dim_a = dd.alg.grid().len() * dd.alg.up.dim();
    (span.len(), rank, dim_a * dim_a)
}

/// Ranks of the three factors of the triangular spanning set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCount {
    pub e_rank: usize,
    pub cartan_rank: usize,
    pub f_rank: usize,
    pub dim_uplus: usize,
    pub grid: usize,
}

impl GradedCount {
    /// e_rank · cartan_rank · f_rank, the size of an independent triangular span.
    pub fn total(&self) -> usize {
        self.e_rank * self.cartan_rank * self.f_rank
    }

    /// (dim A)².
    pub fn target(&self) -> usize {
        (self.dim_uplus * self.grid).pow(2)
    }
}

fn word_images(dd: &Double, gen: &dyn Fn(usize) -> DElem) -> Vec<DElem> {
    // each word extends a shorter normal word by one letter, so reuse prefixes
    let up = &dd.alg.up;
    let mut out: Vec<DElem> = Vec::with_capacity(up.dim());
    let gens: Vec<DElem> = (0..dd.m()).map(gen).collect();
    for id in 0..up.dim() {
        let w = &up.words[id].0;
        let img = match w.split_last() {
            None => dd.unit(),
            Some((&last, prefix)) => {
                let pid = up.id_of(prefix).expect("prefixes of normal words are normal");
                dd.mul(&out[pid], &gens[last as usize])
            }
        };
        out.push(img);
    }
    out
}

/// Rank-by-factor dimension count for ranks where the full span is too large:
/// the E-words, the Cartan monomials K^a K̂^b and the F-words are each
/// independent, and the three factors live in disjoint bidegrees of A ⋈ A^*.
pub fn graded_dimension_count(dd: &Double) -> GradedCount {
    let p = Presentation { dd };
    let order = dd.datum().big_n;
    let es = word_images(dd, &|i| p.e(i));
    let fs = word_images(dd, &|i| p.f(i));
    let grid = dd.alg.grid();
    let hat_powers: Vec<Vec<DElem>> = (0..dd.m())
        .map(|i| {
            let mut v = vec![dd.unit()];
            for _ in 1..dd.datum().n {
                let next = dd.mul(v.last().unwrap(), &p.k_hat(i));
                v.push(next);
            }
            v
        })
        .collect();
    let mut cartan = Vec::new();
    for a in &grid {
        for b in &grid {
            let mut x = p.k_prod(a);
            for i in 0..dd.m() {
                x = dd.mul(&x, &hat_powers[i][b[i] as usize]);
            }
            cartan.push(x);
        }
    }
    GradedCount {
        e_rank: rank_mod_p(&es, order),
        cartan_rank: rank_mod_p(&cartan, order),
        f_rank: rank_mod_p(&fs, order),
        dim_uplus: dd.alg.up.dim(),
        grid: grid.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{make_datum, LieType};

    fn a1(n: u64) -> Double {
        Double::build(&make_datum(LieType::A, 1, n).unwrap()).unwrap()
    }

    #[test]
    fn harpoon_identity_and_idempotents() {
        let dd = a1(4);
        let g = dd.gamma(0);
        assert_eq!(dd.harpoon(&dd.alg.one(), &g, &dd.alg.one()), g);
        let chi = dd.chi(&[1]);
        // (1_b ⇀ χ_a) keeps χ_a only when b = a
        assert_eq!(dd.harpoon(&dd.alg.idem(&[1]), &chi, &dd.alg.one()), chi);
        assert!(dd.harpoon(&dd.alg.idem(&[2]), &chi, &dd.alg.one()).is_empty());
        // (h ⇀ χ_1)(1_a) = χ_1(1_a h): h = Σ 𝔮^a 1_a
        let h = dd.alg.gen(0);
        let got = dd.harpoon(&h, &chi, &dd.alg.one());
        assert_eq!(got, scaled(&chi, &dd.datum().frak(1)));
    }

    #[test]
    fn dual_coproduct_of_generators() {
        let dd = a1(4);
        let gk = dd.gamma(0).into_keys().next().unwrap();
        let pairs = dd.dual_coproduct(&gk);
        assert_eq!(pairs.len(), 2);
        let ck = dd.chi(&[1]).into_keys().next().unwrap();
        assert_eq!(dd.dual_coproduct(&ck), vec![(ck.clone(), ck.clone(), dd.one())]);
    }

    #[test]
    fn unit_and_strategies_agree() {
        let dd = a1(4);
        let x = dd.b_gamma(0);
        let y = dd.mul(&dd.e(0), &dd.b_chi(0));
        assert_eq!(dd.mul(&dd.unit(), &x), x);
        for (u, v) in [(&x, &y), (&y, &x), (&x, &x)] {
            let c = dd.mul_with(u, v, ProductStrategy::Collapsed);
            let n = dd.mul_with(u, v, ProductStrategy::Naive);
            assert_eq!(c, n);
        }
    }

    #[test]
    fn t_map_examples() {
        let dd = a1(4);
        let chi = dd.chi(&[1]);
        assert_eq!(dd.t_map(&chi), dd.mul(&dd.big_h(0, -1), &dd.dual(&chi)));
        assert_eq!(dd.t_map(&dd.gamma(0)), dd.dual(&dd.gamma(0)));
        assert!(dd.counit_t(&dd.epsilon()).is_one());
    }

    #[test]
    fn chi_square() {
        let dd = a1(4);
        let chi = dd.dual(&dd.chi(&[1]));
        let rhs = dd.mul(&dd.big_h(0, 1), &dd.dual(&dd.chi(&[2])));
        assert_eq!(dd.mul(&chi, &chi), rhs);
    }

    #[test]
    fn dual_antipode_inverse_roundtrip() {
        let dd = a1(4);
        let g = dd.gamma(0);
        let inv = dd.dual_antipode_inverse(&g).unwrap();
        // (ψ∘S^{-1})(S(b)) = ψ(b)
        for a in dd.alg.grid() {
            let b = dd.alg.basis(&a, 1);
            let sb = antipode(&dd.alg, &b);
            assert_eq!(dd.evaluate(&inv, &sb), dd.evaluate(&g, &b));
        }
    }

    #[test]
    fn printed_reassociator_needs_frak() {
        let d = make_datum(LieType::A, 1, 4).unwrap();
        let (frak, q) = printed_reassociator(&d);
        assert!(frak.first_difference(&closed_phi(&d)).is_none());
        assert!(q.first_difference(&closed_phi(&d)).is_some());
    }

    #[test]
    fn modular_rank() {
        let dd = a1(4);
        let xs = vec![dd.unit(), dd.h(0, 1), dd.h(0, 2), dd.mul(&dd.h(0, 1), &dd.h(0, 1))];
        assert_eq!(rank_mod_p(&xs, 16), 3);
    }

    fn assert_all(checks: &[Check]) {
        let bad: Vec<_> = checks.iter().filter(|c| !c.ok).collect();
        assert!(bad.is_empty(), "failing: {:#?}", bad);
    }

    #[test]
    fn full_suite_a1_n4() {
        let dd = a1(4);
        assert_all(&relation_suite(&dd, SuiteScope::Full).unwrap());
    }

    #[test]
    fn presentation_a1_n4() {
        let dd = a1(4);
        assert_all(&presentation_relations(&dd));
        assert_all(&presentation_structure(&dd).unwrap());
    }

    #[test]
    fn full_suite_a1_n5() {
        let dd = a1(5);
        let checks = relation_suite(&dd, SuiteScope::Full).unwrap();
        assert!(checks.len() > 30, "{} checks", checks.len());
        assert_all(&checks);
    }

    #[test]
    fn serre_suite_a2_n4() {
        let dd = Double::build(&make_datum(LieType::A, 2, 4).unwrap()).unwrap();
        assert_all(&relation_suite(&dd, SuiteScope::SerreOnly).unwrap());
    }

    #[test]
    fn dimension_a1_n4() {
        let dd = a1(4);
        let (size, rank, target) = presentation_dimension(&dd);
        assert_eq!((size, rank, target), (1024, 1024, 1024));
    }

    #[test]
    fn audited_products_agree() {
        let dd = a1(4).with_audit();
        let x = dd.b_gamma(0);
        let _ = dd.pow(&x, 3);
        let _ = dd.mul_all(&[dd.e(0), x.clone(), dd.b_chi(0)]);
        let audit = dd.audit();
        assert!(audit.compared > 20);
        assert!(audit.mismatches.is_empty(), "{:?}", audit.mismatches);
    }

    #[test]
    fn graded_count_a1_n4() {
        let g = graded_dimension_count(&a1(4));
        assert_eq!((g.e_rank, g.cartan_rank, g.f_rank), (8, 16, 8));
        assert_eq!(g.total(), g.target());
    }

    #[test]
    #[ignore = "about two and a half minutes; run with --ignored"]
    fn graded_count_a2_n4() {
        let dd = Double::build(&make_datum(LieType::A, 2, 4).unwrap()).unwrap();
        let g = graded_dimension_count(&dd);
        assert_eq!((g.e_rank, g.cartan_rank, g.f_rank), (512, 256, 512));
        assert_eq!(g.total(), g.target());
    }

    #[test]
    fn cached_word_coproducts_match() {
        for dd in [a1(4), Double::build(&make_datum(LieType::A, 2, 3).unwrap()).unwrap()] {
            for id in 0..dd.alg.up.dim().min(40) {
                for a in dd.alg.grid().into_iter().take(3) {
                    let x = dd.alg.basis(&a, id);
                    assert_eq!(dd.coproduct_a(&x), crate::halfqg::coproduct_j(&dd.alg, &x));
                }
            }
        }
    }
}
