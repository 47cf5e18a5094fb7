//! Degree-3 cohomology of finite abelian groups with coefficients in roots of
//! unity: the tensor-product resolution K_•, the cocycle and coboundary tests on
//! it, the chain map F_• into the bar resolution, and the resulting decision
//! procedure for bar 3-cocycles.
//!
//! Cochain values are roots of unity ζ_L^e stored by their exponent e mod L.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

fn rem(x: i64, m: i64) -> i64 {
    x.rem_euclid(m)
}

/// G ≅ ℤ_{m_1} × ⋯ × ℤ_{m_k} with fixed generators g_r = ε_r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroup {
    pub orders: Vec<i64>,
}

pub type GroupElem = Vec<i64>;

impl AbelianGroup {
    pub fn new(orders: Vec<i64>) -> Result<AbelianGroup> {
        if orders.iter().any(|&m| m < 1) {
            return Err(Error::Precondition("cyclic factor orders must be ≥ 1".into()));
        }
        Ok(AbelianGroup { orders })
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().map(|&m| m as u64).product()
    }

    pub fn identity(&self) -> GroupElem {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, g: &[i64]) -> GroupElem {
        g.iter().zip(&self.orders).map(|(&x, &m)| rem(x, m)).collect()
    }

    pub fn op(&self, g: &[i64], h: &[i64]) -> GroupElem {
        self.reduce(&g.iter().zip(h).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    /// g_r^l.
    pub fn gen_pow(&self, r: usize, l: i64) -> GroupElem {
        let mut g = self.identity();
        g[r] = rem(l, self.orders[r]);
        g
    }

    pub fn elements(&self) -> Vec<GroupElem> {
        let mut out = vec![vec![]];
        for &m in &self.orders {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..m).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

// ---- ℤG-modules ----

/// A free ℤG-module element: Σ coeff · h · basis.
pub type Chain<B> = BTreeMap<(GroupElem, B), i64>;

fn chain_add<B: Ord + Clone>(x: &mut Chain<B>, h: GroupElem, b: B, c: i64) {
    if c == 0 {
        return;
    }
    let e = x.entry((h, b)).or_insert(0);
    *e += c;
    if *e == 0 {
        let key = x.iter().find(|(_, v)| **v == 0).map(|(k, _)| k.clone()).unwrap();
        x.remove(&key);
    }
}

/// h · x.
fn chain_shift<B: Ord + Clone>(g: &AbelianGroup, x: &Chain<B>, h: &[i64]) -> Chain<B> {
    let mut out = Chain::new();
    for ((k, b), c) in x {
        chain_add(&mut out, g.op(h, k), b.clone(), *c);
    }
    out
}

fn chain_sum<B: Ord + Clone>(x: &mut Chain<B>, y: &Chain<B>, scale: i64) {
    for ((h, b), c) in y {
        chain_add(x, h.clone(), b.clone(), scale * c);
    }
}

/// Extends a map on free generators ℤG-linearly.
fn extend_linear<B: Ord + Clone, C: Ord + Clone>(
    g: &AbelianGroup,
    x: &Chain<B>,
    f: &dyn Fn(&B) -> Chain<C>,
) -> Chain<C> {
    let mut out = Chain::new();
    for ((h, b), c) in x {
        chain_sum(&mut out, &chain_shift(g, &f(b), h), *c);
    }
    out
}

// ---- the K-complex ----

/// Free generator Ψ(a_1, …, a_k) of degree Σ a_i.
pub type Psi = Vec<u32>;

/// The K-complex of G: tensor product of the periodic resolutions of the cyclic factors.
pub struct KComplex {
    pub group: AbelianGroup,
}

impl KComplex {
    pub fn new(group: AbelianGroup) -> KComplex {
        KComplex { group }
    }

    /// All Ψ(a) with Σ a_i = degree.
    pub fn generators(&self, degree: u32) -> Vec<Psi> {
        fn rec(k: usize, left: u32, cur: &mut Psi, out: &mut Vec<Psi>) {
            if cur.len() + 1 == k {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for a in (0..=left).rev() {
                cur.push(a);
                rec(k, left - a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if self.group.rank() == 0 {
            if degree == 0 {
                out.push(vec![]);
            }
            return out;
        }
        rec(self.group.rank(), degree, &mut Vec::new(), &mut out);
        out
    }

    /// T_i = g_i − 1 and N_i = Σ_j g_i^j as chains on a basis element.
    fn apply_group_ring<B: Ord + Clone>(&self, i: usize, even: bool, b: B) -> Chain<B> {
        let g = &self.group;
        let mut out = Chain::new();
        if even {
            for j in 0..g.orders[i] {
                chain_add(&mut out, g.gen_pow(i, j), b.clone(), 1);
            }
        } else {
            chain_add(&mut out, g.gen_pow(i, 1), b.clone(), 1);
            chain_add(&mut out, g.identity(), b, -1);
        }
        out
    }

    /// d = d_1 + ⋯ + d_k on a free generator.
    pub fn d_generator(&self, psi: &Psi) -> Chain<Psi> {
        let mut out = Chain::new();
        let mut sign_exp = 0u32;
        for i in 0..psi.len() {
            let a = psi[i];
            if a > 0 {
                let mut lower = psi.clone();
                lower[i] -= 1;
                let term = self.apply_group_ring(i, a % 2 == 0, lower);
                chain_sum(&mut out, &term, if sign_exp % 2 == 0 { 1 } else { -1 });
            }
            sign_exp += a;
        }
        out
    }

    pub fn d(&self, x: &Chain<Psi>) -> Chain<Psi> {
        extend_linear(&self.group, x, &|b| self.d_generator(b))
    }

    /// First generator (up to `max_degree`) where d∘d ≠ 0.
    pub fn d_squared_failure(&self, max_degree: u32) -> Option<Psi> {
        for deg in 2..=max_degree {
            for psi in self.generators(deg) {
                let once = self.d_generator(&psi);
                if !self.d(&once).is_empty() {
                    return Some(psi);
                }
            }
        }
        None
    }
}

/// Ψ with entries at positions (0-based) given by `idx`, each occurrence adding one.
pub fn psi_of(k: usize, idx: &[usize]) -> Psi {
    let mut p = vec![0; k];
    for &i in idx {
        p[i] += 1;
    }
    p
}

// ---- cochains on K_3 ----

/// Shape of a K_3 generator, 0-based with r < s < t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    Rrr(usize),
    Rrs(usize, usize),
    Rss(usize, usize),
    Rst(usize, usize, usize),
}

impl Slot {
    pub fn indices(&self) -> Vec<usize> {
        match *self {
            Slot::Rrr(r) => vec![r, r, r],
            Slot::Rrs(r, s) => vec![r, r, s],
            Slot::Rss(r, s) => vec![r, s, s],
            Slot::Rst(r, s, t) => vec![r, s, t],
        }
    }

    pub fn from_indices(idx: &[usize]) -> Result<Slot> {
        match idx {
            [r, s, t] if r == s && s == t => Ok(Slot::Rrr(*r)),
            [r, s, t] if r == s && s < t => Ok(Slot::Rrs(*r, *t)),
            [r, s, t] if r < s && s == t => Ok(Slot::Rss(*r, *s)),
            [r, s, t] if r < s && s < t => Ok(Slot::Rst(*r, *s, *t)),
            _ => Err(Error::Parse(format!("not an ordered index triple: {:?}", idx))),
        }
    }

    pub fn psi(&self, k: usize) -> Psi {
        psi_of(k, &self.indices())
    }

    pub fn all(k: usize) -> Vec<Slot> {
        let mut out = Vec::new();
        for r in 0..k {
            out.push(Slot::Rrr(r));
            for s in r + 1..k {
                out.push(Slot::Rrs(r, s));
                out.push(Slot::Rss(r, s));
                for t in s + 1..k {
                    out.push(Slot::Rst(r, s, t));
                }
            }
        }
        out
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}", idx.join(","))
    }
}

/// A 3-cochain on K_3 with values ζ_L^{e}: the exponents f_{r,s,t}, f_{r,s,s},
/// f_{r,r,s}, f_{r,r,r}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicCochain3 {
    pub order: i64,
    pub values: BTreeMap<Slot, i64>,
}

impl PeriodicCochain3 {
    pub fn trivial(k: usize, order: i64) -> PeriodicCochain3 {
        PeriodicCochain3 {
            order,
            values: Slot::all(k).into_iter().map(|s| (s, 0)).collect(),
        }
    }

    pub fn get(&self, s: Slot) -> i64 {
        rem(*self.values.get(&s).unwrap_or(&0), self.order)
    }

    pub fn set(&mut self, s: Slot, e: i64) {
        self.values.insert(s, rem(e, self.order));
    }

    /// The same cochain written over ζ_{order·k}.
    pub fn lift(&self, k: i64) -> PeriodicCochain3 {
        PeriodicCochain3 {
            order: self.order * k,
            values: self.values.iter().map(|(s, e)| (*s, e * k)).collect(),
        }
    }

    /// Pointwise product.
    pub fn product(&self, other: &PeriodicCochain3) -> PeriodicCochain3 {
        let l = self.order.lcm(&other.order);
        let (a, b) = (self.lift(l / self.order), other.lift(l / other.order));
        let mut out = a.clone();
        for (s, e) in &b.values {
            out.set(*s, a.get(*s) + e);
        }
        out
    }

    /// `indices : exponent` lines after a `mod L` header.
    pub fn to_text(&self) -> String {
        let mut s = format!("mod {}\n", self.order);
        for (slot, e) in &self.values {
            s.push_str(&format!("{} : {}\n", slot, rem(*e, self.order)));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<PeriodicCochain3> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty cochain table".into()))?;
        let order: i64 = header
            .strip_prefix("mod")
            .and_then(|r| r.trim().parse().ok())
            .filter(|&l| l > 0)
            .ok_or_else(|| Error::Parse(format!("bad header {:?}", header)))?;
        let mut out = PeriodicCochain3 { order, values: BTreeMap::new() };
        for line in lines {
            let (idx, e) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("missing ':' in {:?}", line)))?;
            let idx: Vec<usize> = idx
                .split(',')
                .map(|x| x.trim().parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("bad indices in {:?}", line)))?;
            let e: i64 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {:?}", line)))?;
            out.set(Slot::from_indices(&idx)?, e);
        }
        Ok(out)
    }
}

/// Which cocycle or coboundary condition failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub slot: String,
}

/// f_{r,r,r}^{m_r} = 1, f_{r,s,s}^{m_r} f_{r,r,s}^{m_s} = 1, f_{r,s,t}^{m_r} = f_{r,s,t}^{m_s} = f_{r,s,t}^{m_t} = 1.
pub fn cocycle_violation(f: &PeriodicCochain3, g: &AbelianGroup) -> Option<Violation> {
    let m = &g.orders;
    let l = f.order;
    let bad = |cond: &str, s: Slot| Some(Violation { condition: cond.into(), slot: s.to_string() });
    for s in Slot::all(g.rank()) {
        match s {
            Slot::Rrr(r) => {
                if rem(m[r] * f.get(s), l) != 0 {
                    return bad("f_rrr^m_r = 1", s);
                }
            }
            Slot::Rss(r, t) => {
                if rem(m[r] * f.get(s) + m[t] * f.get(Slot::Rrs(r, t)), l) != 0 {
                    return bad("f_rss^m_r · f_rrs^m_s = 1", s);
                }
            }
            Slot::Rrs(..) => {}
            Slot::Rst(r, u, t) => {
                for (name, mm) in [("m_r", m[r]), ("m_s", m[u]), ("m_t", m[t])] {
                    if rem(mm * f.get(s), l) != 0 {
                        return bad(&format!("f_rst^{} = 1", name), s);
                    }
                }
            }
        }
    }
    None
}

pub fn is_cocycle(f: &PeriodicCochain3, g: &AbelianGroup) -> bool {
    cocycle_violation(f, g).is_none()
}

/// Evaluation of a cochain with trivial action on a chain: Σ coeff · f(basis).
fn evaluate<B: Ord + Clone>(x: &Chain<B>, f: &dyn Fn(&B) -> i64) -> i64 {
    x.iter().map(|((_, b), c)| c * f(b)).sum()
}

impl KComplex {
    /// d^*f on every degree-4 generator, straight from the differential.
    pub fn coboundary_of_3cochain_vanishes(&self, f: &PeriodicCochain3) -> bool {
        let k = self.group.rank();
        let value = |psi: &Psi| -> i64 {
            let idx: Vec<usize> = (0..k).flat_map(|i| std::iter::repeat(i).take(psi[i] as usize)).collect();
            f.get(Slot::from_indices(&idx).expect("degree-3 generators are ordered"))
        };
        self.generators(4)
            .iter()
            .all(|p| rem(evaluate(&self.d_generator(p), &value), f.order) == 0)
    }

    /// d^*g for a 2-cochain given by exponents g_{i,j} (i ≤ j) over ζ_order.
    pub fn coboundary_of_2cochain(&self, g: &BTreeMap<(usize, usize), i64>, order: i64) -> PeriodicCochain3 {
        let k = self.group.rank();
        let value = |psi: &Psi| -> i64 {
            let idx: Vec<usize> = (0..k).flat_map(|i| std::iter::repeat(i).take(psi[i] as usize)).collect();
            *g.get(&(idx[0], idx[1])).unwrap_or(&0)
        };
        let mut out = PeriodicCochain3::trivial(k, order);
        for s in Slot::all(k) {
            out.set(s, evaluate(&self.d_generator(&s.psi(k)), &value));
        }
        out
    }
}

/// g_{i,j} = ζ_order^exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub order: i64,
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CoboundaryVerdict {
    Coboundary { witnesses: Vec<Witness> },
    NotCoboundary(Violation),
}

impl CoboundaryVerdict {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, CoboundaryVerdict::Coboundary { .. })
    }
}

/// x with x·a ≡ g (mod m) for g = gcd(a, m), by the extended Euclidean algorithm.
fn bezout(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// The coboundary criterion: f_{l,l,l} = 1, f_{r,s,t} = 1, and for all i < j some
/// g with g^{m_i} = f_{i,i,j} and g^{−m_j} = f_{i,j,j}.
pub fn is_coboundary(f: &PeriodicCochain3, g: &AbelianGroup) -> Result<CoboundaryVerdict> {
    if let Some(v) = cocycle_violation(f, g) {
        return Err(Error::NotCocycle(format!("{} at {}", v.condition, v.slot)));
    }
    let m = &g.orders;
    let l = f.order;
    let no = |cond: &str, s: Slot| {
        Ok(CoboundaryVerdict::NotCoboundary(Violation { condition: cond.into(), slot: s.to_string() }))
    };
    for s in Slot::all(g.rank()) {
        match s {
            Slot::Rrr(_) if f.get(s) != 0 => return no("f_lll = 1", s),
            Slot::Rst(..) if f.get(s) != 0 => return no("f_rst = 1", s),
            _ => {}
        }
    }
    let mut witnesses = Vec::new();
    for i in 0..g.rank() {
        for j in i + 1..g.rank() {
            let u = f.get(Slot::Rrs(i, j));
            let v = f.get(Slot::Rss(i, j));
            let (d, a, b) = bezout(m[i], m[j]);
            // g^{m_i} = ζ_L^u and g^{m_j} = ζ_L^{−v} are solvable iff u·m_j ≡ −v·m_i (mod L·d)
            if rem(u * m[j] + v * m[i], l * d) != 0 {
                return no("g^m_i = f_iij and g^-m_j = f_ijj solvable", Slot::Rrs(i, j));
            }
            // g^d = ζ_L^{a u − b v} gives g = ζ_{L d}^{a u − b v}; report the smallest exponent
            let ld = l * d;
            let fits = |x: i64| rem(x * m[i] - u * d, ld) == 0 && rem(x * m[j] + v * d, ld) == 0;
            debug_assert!(fits(a * u - b * v));
            let x = (0..ld).find(|&x| fits(x)).unwrap_or(rem(a * u - b * v, ld));
            witnesses.push(Witness { i, j, order: ld, exponent: x });
        }
    }
    Ok(CoboundaryVerdict::Coboundary { witnesses })
}

/// The cochain d^*g for the witnesses of a coboundary verdict, over a common order.
pub fn witness_coboundary(g: &AbelianGroup, witnesses: &[Witness], order: i64) -> PeriodicCochain3 {
    let common = witnesses.iter().fold(order, |acc, w| acc.lcm(&w.order));
    let table: BTreeMap<(usize, usize), i64> =
        witnesses.iter().map(|w| ((w.i, w.j), w.exponent * (common / w.order))).collect();
    KComplex::new(g.clone()).coboundary_of_2cochain(&table, common)
}

// ---- bar resolution ----

pub type BarCell = Vec<GroupElem>;

/// ∂[g_1|…|g_n] = g_1[g_2|…] + Σ (−1)^i [… |g_i g_{i+1}| …] + (−1)^n [g_1|…|g_{n−1}].
pub fn bar_boundary(g: &AbelianGroup, cell: &BarCell) -> Chain<BarCell> {
    let n = cell.len();
    let mut out = Chain::new();
    if n == 0 {
        return out;
    }
    chain_add(&mut out, cell[0].clone(), cell[1..].to_vec(), 1);
    for i in 0..n - 1 {
        let mut c: BarCell = cell[..i].to_vec();
        c.push(g.op(&cell[i], &cell[i + 1]));
        c.extend_from_slice(&cell[i + 2..]);
        chain_add(&mut out, g.identity(), c, if (i + 1) % 2 == 0 { 1 } else { -1 });
    }
    chain_add(&mut out, g.identity(), cell[..n - 1].to_vec(), if n % 2 == 0 { 1 } else { -1 });
    out
}

/// The chain map F_1, F_2, F_3 from K_• to the bar resolution on free generators.
pub fn chain_map(g: &AbelianGroup, psi: &Psi) -> Chain<BarCell> {
    let k = g.rank();
    let idx: Vec<usize> = (0..k).flat_map(|i| std::iter::repeat(i).take(psi[i] as usize)).collect();
    let e = g.identity();
    let gp = |r: usize, l: i64| g.gen_pow(r, l);
    let mut out = Chain::new();
    let mut add = |cell: Vec<GroupElem>, c: i64| chain_add(&mut out, e.clone(), cell, c);
    match idx.as_slice() {
        [] => add(vec![], 1),
        [r] => add(vec![gp(*r, 1)], 1),
        [r, s] if r == s => {
            for l in 0..g.orders[*r] {
                add(vec![gp(*r, l), gp(*r, 1)], 1);
            }
        }
        [r, s] => {
            add(vec![gp(*r, 1), gp(*s, 1)], 1);
            add(vec![gp(*s, 1), gp(*r, 1)], -1);
        }
        [r, s, t] if r == s && s == t => {
            for l in 0..g.orders[*r] {
                add(vec![gp(*r, 1), gp(*r, l), gp(*r, 1)], 1);
            }
        }
        [r, s, t] if r == s => {
            let (gr, gs) = (gp(*r, 1), gp(*t, 1));
            for l in 0..g.orders[*r] {
                let grl = gp(*r, l);
                add(vec![grl.clone(), gr.clone(), gs.clone()], 1);
                add(vec![grl.clone(), gs.clone(), gr.clone()], -1);
                add(vec![gs.clone(), grl, gr.clone()], 1);
            }
        }
        [r, s, t] if s == t => {
            let (gr, gs) = (gp(*r, 1), gp(*s, 1));
            for l in 0..g.orders[*s] {
                let gsl = gp(*s, l);
                add(vec![gr.clone(), gsl.clone(), gs.clone()], 1);
                add(vec![gsl.clone(), gr.clone(), gs.clone()], -1);
                add(vec![gsl, gs.clone(), gr.clone()], 1);
            }
        }
        [r, s, t] => {
            let (a, b, c) = (gp(*r, 1), gp(*s, 1), gp(*t, 1));
            // signed sum over the permutations of (g_r, g_s, g_t)
            add(vec![a.clone(), b.clone(), c.clone()], 1);
            add(vec![b.clone(), a.clone(), c.clone()], -1);
            add(vec![a.clone(), c.clone(), b.clone()], -1);
            add(vec![c.clone(), a.clone(), b.clone()], 1);
            add(vec![b.clone(), c.clone(), a.clone()], 1);
            add(vec![c, b, a], -1);
        }
        _ => panic!("the chain map is defined up to degree 3"),
    }
    out
}

/// First generator Ψ of degree ≤ 3 with F(dΨ) ≠ ∂F(Ψ).
pub fn chain_map_failure(g: &AbelianGroup) -> Option<Psi> {
    let kc = KComplex::new(g.clone());
    for deg in 1..=3 {
        for psi in kc.generators(deg) {
            let lhs = extend_linear(g, &kc.d_generator(&psi), &|b| chain_map(g, b));
            let rhs = extend_linear(g, &chain_map(g, &psi), &|c| bar_boundary(g, c));
            if lhs != rhs {
                return Some(psi);
            }
        }
    }
    None
}

/// A normalized bar 3-cochain with values ζ_L^{exponent(a,b,c)}.
#[derive(Clone)]
pub struct BarCochain3 {
    pub group: AbelianGroup,
    pub order: i64,
    f: Arc<dyn Fn(&[i64], &[i64], &[i64]) -> i64 + Send + Sync>,
}

impl fmt::Debug for BarCochain3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BarCochain3").field("group", &self.group).field("order", &self.order).finish()
    }
}

/// Above this group size the normalization check is sampled.
pub const EXHAUSTIVE_GROUP_LIMIT: u64 = 81;
/// Above this group size the 4-variable cocycle identity is sampled.
pub const EXHAUSTIVE_COCYCLE_LIMIT: u64 = 24;

impl BarCochain3 {
    /// Rejects cochains that are not normalized.
    pub fn new(
        group: AbelianGroup,
        order: i64,
        f: impl Fn(&[i64], &[i64], &[i64]) -> i64 + Send + Sync + 'static,
    ) -> Result<BarCochain3> {
        let c = BarCochain3 { group, order, f: Arc::new(f) };
        if let Some(t) = c.normalization_failure() {
            return Err(Error::Precondition(format!("bar cochain is not normalized at {:?}", t)));
        }
        Ok(c)
    }

    pub fn exponent(&self, a: &[i64], b: &[i64], c: &[i64]) -> i64 {
        let g = &self.group;
        rem((self.f)(&g.reduce(a), &g.reduce(b), &g.reduce(c)), self.order)
    }

    fn pairs(&self, samples: usize, seed: u64) -> Vec<(GroupElem, GroupElem)> {
        let g = &self.group;
        if g.size() * g.size() <= EXHAUSTIVE_GROUP_LIMIT.pow(2) {
            let els = g.elements();
            return els.iter().flat_map(|a| els.iter().map(move |b| (a.clone(), b.clone()))).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).map(|_| (random_elem(g, &mut rng), random_elem(g, &mut rng))).collect()
    }

    fn normalization_failure(&self) -> Option<Vec<GroupElem>> {
        let e = self.group.identity();
        for (a, b) in self.pairs(4096, 0x0a11) {
            for t in [[e.clone(), a.clone(), b.clone()], [a.clone(), e.clone(), b.clone()], [a.clone(), b.clone(), e.clone()]] {
                if self.exponent(&t[0], &t[1], &t[2]) != 0 {
                    return Some(t.to_vec());
                }
            }
        }
        None
    }

    /// δΦ(a,b,c,d) = Φ(b,c,d) Φ(ab,c,d)^{−1} Φ(a,bc,d) Φ(a,b,cd)^{−1} Φ(a,b,c).
    pub fn coboundary_exponent(&self, a: &[i64], b: &[i64], c: &[i64], d: &[i64]) -> i64 {
        let g = &self.group;
        rem(
            self.exponent(b, c, d) - self.exponent(&g.op(a, b), c, d) + self.exponent(a, &g.op(b, c), d)
                - self.exponent(a, b, &g.op(c, d))
                + self.exponent(a, b, c),
            self.order,
        )
    }

    /// The bar cocycle identity, exhaustively for |G| ≤ 24, else on `samples` seeded tuples.
    pub fn cocycle_failure(&self, samples: usize, seed: u64) -> Option<Vec<GroupElem>> {
        let g = &self.group;
        if g.size() <= EXHAUSTIVE_COCYCLE_LIMIT {
            let els = g.elements();
            for a in &els {
                for b in &els {
                    for c in &els {
                        for d in &els {
                            if self.coboundary_exponent(a, b, c, d) != 0 {
                                return Some(vec![a.clone(), b.clone(), c.clone(), d.clone()]);
                            }
                        }
                    }
                }
            }
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let t: Vec<GroupElem> = (0..4).map(|_| random_elem(g, &mut rng)).collect();
            if self.coboundary_exponent(&t[0], &t[1], &t[2], &t[3]) != 0 {
                return Some(t);
            }
        }
        None
    }

    /// Pointwise product, over the lcm of the two orders.
    pub fn product(&self, other: &BarCochain3) -> BarCochain3 {
        let l = self.order.lcm(&other.order);
        let (x, y) = (self.clone(), other.clone());
        let (sx, sy) = (l / self.order, l / other.order);
        BarCochain3 {
            group: self.group.clone(),
            order: l,
            f: Arc::new(move |a, b, c| sx * x.exponent(a, b, c) + sy * y.exponent(a, b, c)),
        }
    }

    /// The bar coboundary of a normalized 2-cochain γ with values ζ_L^{γ(a,b)}:
    /// (δγ)(a,b,c) = γ(b,c) γ(ab,c)^{−1} γ(a,bc) γ(a,b)^{−1}.
    pub fn from_2cochain(
        group: AbelianGroup,
        order: i64,
        gamma: impl Fn(&[i64], &[i64]) -> i64 + Send + Sync + 'static,
    ) -> Result<BarCochain3> {
        let g = group.clone();
        let gamma = Arc::new(gamma);
        let norm = move |a: &[i64], b: &[i64]| {
            if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
                0
            } else {
                gamma(a, b)
            }
        };
        BarCochain3::new(group, order, move |a, b, c| {
            norm(b, c) - norm(&g.op(a, b), c) + norm(a, &g.op(b, c)) - norm(a, b)
        })
    }
}

fn random_elem(g: &AbelianGroup, rng: &mut ChaCha8Rng) -> GroupElem {
    g.orders.iter().map(|&m| rng.gen_range(0..m)).collect()
}

/// F_3^*(Φ): evaluate Φ along the image of each K_3 generator.
pub fn f3_pullback(phi: &BarCochain3) -> PeriodicCochain3 {
    let g = &phi.group;
    let k = g.rank();
    let mut out = PeriodicCochain3::trivial(k, phi.order);
    for s in Slot::all(k) {
        let image = chain_map(g, &s.psi(k));
        let e = evaluate(&image, &|cell: &BarCell| phi.exponent(&cell[0], &cell[1], &cell[2]));
        out.set(s, e);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct BarVerdict {
    pub pullback: PeriodicCochain3,
    pub verdict: CoboundaryVerdict,
}

/// Decides whether a bar 3-cocycle is a coboundary through its F_3 pullback.
pub fn decide_bar_coboundary(phi: &BarCochain3, samples: usize, seed: u64) -> Result<BarVerdict> {
    if let Some(t) = phi.cocycle_failure(samples, seed) {
        return Err(Error::NotCocycle(format!("bar identity fails at {:?}", t)));
    }
    let pullback = f3_pullback(phi);
    let verdict = is_coboundary(&pullback, &phi.group)?;
    Ok(BarVerdict { pullback, verdict })
}

/// Generators of H^3(G, μ): for each r the cocycle ζ_{m_r}^{a_r⌊(b_r+c_r)/m_r⌋};
/// for r < s the cocycle ζ_{m_r}^{a_r⌊(b_s+c_s)/m_s⌋}; for r < s < t the cocycle
/// ζ_{gcd(m_r,m_s,m_t)}^{a_r b_s c_t}. Each is returned over ζ_{lcm of all m}.
pub fn standard_cocycles(g: &AbelianGroup) -> Vec<(String, BarCochain3)> {
    let k = g.rank();
    let big = g.orders.iter().fold(1i64, |acc, m| acc.lcm(m));
    let mut out = Vec::new();
    let m = g.orders.clone();
    for r in 0..k {
        for s in r..k {
            let (mr, ms) = (m[r], m[s]);
            let scale = big / mr;
            let c = BarCochain3::new(g.clone(), big, move |a, b, c| {
                scale * a[r] * ((b[s] + c[s]) / ms)
            })
            .expect("standard cocycles are normalized");
            out.push((format!("type-{}-{}", r + 1, s + 1), c));
        }
    }
    for r in 0..k {
        for s in r + 1..k {
            for t in s + 1..k {
                let d = m[r].gcd(&m[s]).gcd(&m[t]);
                let scale = big / d;
                let c = BarCochain3::new(g.clone(), big, move |a, b, c| scale * a[r] * b[s] * c[t])
                    .expect("standard cocycles are normalized");
                out.push((format!("type-{}-{}-{}", r + 1, s + 1, t + 1), c));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grp(v: &[i64]) -> AbelianGroup {
        AbelianGroup::new(v.to_vec()).unwrap()
    }

    #[test]
    fn low_differentials() {
        let g = grp(&[3, 2]);
        let kc = KComplex::new(g.clone());
        // d(Ψ_1) = (g_1 − 1)Ψ()
        let d1 = kc.d_generator(&vec![1, 0]);
        let mut expect = Chain::new();
        chain_add(&mut expect, vec![1, 0], vec![0, 0], 1);
        chain_add(&mut expect, vec![0, 0], vec![0, 0], -1);
        assert_eq!(d1, expect);
        // d(Ψ_{1,1}) = N_1 Ψ_1
        let d2 = kc.d_generator(&vec![2, 0]);
        assert_eq!(d2.len(), 3);
        assert!(d2.iter().all(|((_, b), c)| b == &vec![1, 0] && *c == 1));
    }

    #[test]
    fn d_squared_vanishes() {
        for orders in [vec![2, 2, 2], vec![4], vec![3, 3], vec![2, 4], vec![2, 3, 4], vec![4, 4, 2]] {
            let kc = KComplex::new(grp(&orders));
            assert_eq!(kc.d_squared_failure(4), None, "{:?}", orders);
        }
    }

    #[test]
    fn chain_map_commutes() {
        for orders in [vec![2], vec![3], vec![4], vec![2, 2], vec![2, 3], vec![2, 2, 2], vec![3, 2, 2]] {
            assert_eq!(chain_map_failure(&grp(&orders)), None, "{:?}", orders);
        }
    }

    #[test]
    fn cocycle_criterion_matches_complex() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for orders in [vec![2, 2, 2], vec![3, 6], vec![4, 2, 6], vec![5]] {
            let g = grp(&orders);
            let kc = KComplex::new(g.clone());
            for _ in 0..200 {
                let l = 12;
                let mut f = PeriodicCochain3::trivial(g.rank(), l);
                for s in Slot::all(g.rank()) {
                    // bias towards cocycles by using multiples of l / m
                    let e = if rng.gen_bool(0.7) { rng.gen_range(0..l) / 2 * 2 } else { rng.gen_range(0..l) };
                    f.set(s, e);
                }
                assert_eq!(is_cocycle(&f, &g), kc.coboundary_of_3cochain_vanishes(&f), "{:?}", f);
            }
        }
    }

    #[test]
    fn coboundary_examples() {
        let g = grp(&[3, 3]);
        let mut f = PeriodicCochain3::trivial(2, 3);
        f.set(Slot::Rrs(0, 1), 1);
        f.set(Slot::Rss(0, 1), -1);
        match is_coboundary(&f, &g).unwrap() {
            CoboundaryVerdict::Coboundary { witnesses } => {
                assert_eq!(witnesses, vec![Witness { i: 0, j: 1, order: 9, exponent: 1 }]);
                let back = witness_coboundary(&g, &witnesses, 3);
                assert_eq!(back, f.lift(3));
            }
            v => panic!("{:?}", v),
        }
        let trivial = PeriodicCochain3::trivial(2, 3);
        assert!(is_coboundary(&trivial, &g).unwrap().is_coboundary());
        let mut nonco = PeriodicCochain3::trivial(1, 3);
        nonco.set(Slot::Rrr(0), 1);
        assert!(!is_coboundary(&nonco, &grp(&[3])).unwrap().is_coboundary());
        let mut bad = PeriodicCochain3::trivial(3, 4);
        bad.set(Slot::Rst(0, 1, 2), 1);
        assert!(!is_cocycle(&bad, &grp(&[2, 2, 2])));
    }

    #[test]
    fn witnesses_reproduce_cochain() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for orders in [vec![2, 4], vec![3, 6, 4], vec![4, 4]] {
            let g = grp(&orders);
            let kc = KComplex::new(g.clone());
            for _ in 0..100 {
                let mut gam = BTreeMap::new();
                let l = 24;
                for i in 0..g.rank() {
                    for j in i..g.rank() {
                        gam.insert((i, j), rng.gen_range(0..l));
                    }
                }
                let f = kc.coboundary_of_2cochain(&gam, l);
                match is_coboundary(&f, &g).unwrap() {
                    CoboundaryVerdict::Coboundary { witnesses } => {
                        let back = witness_coboundary(&g, &witnesses, l);
                        assert_eq!(back, f.lift(back.order / l));
                    }
                    v => panic!("{:?}", v),
                }
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        let mut f = PeriodicCochain3::trivial(3, 8);
        f.set(Slot::Rst(0, 1, 2), 4);
        f.set(Slot::Rrs(1, 2), 3);
        let t = f.to_text();
        assert!(t.contains("1,2,3 : 4"));
        assert_eq!(PeriodicCochain3::from_text(&t).unwrap(), f);
        assert!(PeriodicCochain3::from_text("mod 3\n2,1,1 : 1").is_err());
    }

    #[test]
    fn pullback_of_standard_cocycles() {
        for orders in [vec![2], vec![3], vec![4], vec![2, 2]] {
            let g = grp(&orders);
            for (name, phi) in standard_cocycles(&g) {
                assert!(phi.cocycle_failure(0, 0).is_none(), "{}", name);
                let f = f3_pullback(&phi);
                assert!(is_cocycle(&f, &g), "{}", name);
                assert!(!is_coboundary(&f, &g).unwrap().is_coboundary(), "{} {:?}", name, f);
            }
        }
    }

    #[test]
    fn pullback_of_bar_coboundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for orders in [vec![3], vec![2, 2]] {
            let g = grp(&orders);
            for _ in 0..20 {
                let table: BTreeMap<(GroupElem, GroupElem), i64> = g
                    .elements()
                    .into_iter()
                    .flat_map(|a| g.elements().into_iter().map(move |b| (a.clone(), b)))
                    .map(|k| (k, rng.gen_range(0..6)))
                    .collect();
                let phi = BarCochain3::from_2cochain(g.clone(), 6, move |a, b| table[&(a.to_vec(), b.to_vec())])
                    .unwrap();
                let v = decide_bar_coboundary(&phi, 0, 0).unwrap();
                assert!(v.verdict.is_coboundary());
            }
        }
    }

    #[test]
    fn unnormalized_rejected() {
        let g = grp(&[2]);
        assert!(BarCochain3::new(g.clone(), 2, |a, _, _| 1 + a[0]).is_err());
        let random = BarCochain3::new(g, 2, |a, b, c| a[0] * b[0] * (1 - c[0]) * 0 + a[0] * b[0] * c[0] * 0 + (a[0] * b[0] * c[0]))
            .unwrap();
        // ζ_2^{abc} on ℤ_2 is a cocycle (it equals the standard generator)
        assert!(random.cocycle_failure(0, 0).is_none());
    }
}
