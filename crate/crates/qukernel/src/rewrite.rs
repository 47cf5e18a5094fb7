//! Noncommutative rewriting for u⁺.
//!
//! Two rule systems share one representation:
//! * [`serre_system`] + [`complete`]: the q-Serre and nilpotency relations,
//!   oriented by deg-lex and completed on critical pairs up to a degree cap.
//! * [`UPlus::build`]: the Nichols algebra of the diagonal braiding
//!   q_ij = q^{c_ij}, constructed degree by degree from skew derivations. Its
//!   rules form a reduced Gröbner basis, so the system is confluent and the
//!   normal words are a finite basis.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::fmt;

use crate::cartan::{gauss_binomial, CartanDatum};
use crate::error::{Error, Result};
use crate::scalars::CycNum;

/// A word in the letters 0..m (letter i stands for e_{i+1}); ordered deg-lex.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }
    pub fn letter(i: usize) -> Word {
        Word(vec![i as u8])
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
    pub fn multidegree(&self, m: usize) -> Vec<i64> {
        let mut d = vec![0; m];
        for &x in &self.0 {
            d[x as usize] += 1;
        }
        d
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            if !first {
                write!(f, "·")?;
            }
            first = false;
            write!(f, "e{}", self.0[i] + 1)?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Sparse polynomial in words.
pub type Poly = BTreeMap<Word, CycNum>;

pub fn poly_add_term(p: &mut Poly, w: Word, c: &CycNum) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&w) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                p.remove(&w);
            }
        }
        None => {
            p.insert(w, c.clone());
        }
    }
}

pub fn poly_add(p: &mut Poly, q: &Poly, scale: &CycNum) {
    for (w, c) in q {
        poly_add_term(p, w.clone(), &(c * scale));
    }
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Complete,
    Capped,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Leftmost occurrence, longest lhs first.
    Leftmost,
    /// Rightmost occurrence, longest lhs first.
    Rightmost,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub m: usize,
    pub order: u64,
    pub rules: Vec<Rule>,
    pub degree_cap: usize,
    pub status: Status,
    /// Overlap that could not be oriented, when `status` is `Failed`.
    pub failure: Option<(Word, Word)>,
    index: HashMap<Vec<u8>, usize>,
    lhs_lens: Vec<usize>,
}

impl RewriteSystem {
    pub fn new(m: usize, order: u64, rules: Vec<Rule>, degree_cap: usize) -> RewriteSystem {
        let mut s = RewriteSystem {
            m,
            order,
            rules: Vec::new(),
            degree_cap,
            status: Status::Complete,
            failure: None,
            index: HashMap::new(),
            lhs_lens: Vec::new(),
        };
        for r in rules {
            s.push_rule(r);
        }
        s
    }

    fn push_rule(&mut self, r: Rule) {
        self.index.insert(r.lhs.0.clone(), self.rules.len());
        self.rules.push(r);
        self.reindex_lens();
    }

    fn reindex_lens(&mut self) {
        let mut lens: Vec<usize> = self.index.keys().map(|k| k.len()).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens.dedup();
        self.lhs_lens = lens;
    }

    fn remove_rule(&mut self, idx: usize) -> Rule {
        let r = self.rules.swap_remove(idx);
        self.index.remove(&r.lhs.0);
        if idx < self.rules.len() {
            self.index.insert(self.rules[idx].lhs.0.clone(), idx);
        }
        self.reindex_lens();
        r
    }

    pub fn rule_for(&self, lhs: &[u8]) -> Option<&Rule> {
        self.index.get(lhs).map(|&i| &self.rules[i])
    }

    /// (position, rule index) of the occurrence chosen by `strategy`.
    fn find_redex(&self, w: &[u8], strategy: Strategy) -> Option<(usize, usize)> {
        let positions: Box<dyn Iterator<Item = usize>> = match strategy {
            Strategy::Leftmost => Box::new(0..w.len()),
            Strategy::Rightmost => Box::new((0..w.len()).rev()),
        };
        for p in positions {
            for &len in &self.lhs_lens {
                if p + len <= w.len() {
                    if let Some(&ri) = self.index.get(&w[p..p + len]) {
                        return Some((p, ri));
                    }
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.find_redex(w, Strategy::Leftmost).is_none()
    }

    /// Normal form. Every step replaces the largest reducible word by strictly
    /// smaller ones, which is asserted.
    pub fn normal_form(&self, p: &Poly, strategy: Strategy) -> Result<Poly> {
        let mut work = p.clone();
        let mut done = Poly::new();
        while let Some((w, c)) = work.pop_last() {
            if w.len() > self.degree_cap && self.status != Status::Complete {
                return Err(Error::DegreeCap(self.degree_cap));
            }
            match self.find_redex(&w.0, strategy) {
                None => poly_add_term(&mut done, w, &c),
                Some((pos, ri)) => {
                    let rule = &self.rules[ri];
                    let head = Word(w.0[..pos].to_vec());
                    let tail = Word(w.0[pos + rule.lhs.len()..].to_vec());
                    for (r, rc) in &rule.rhs {
                        let nw = head.concat(r).concat(&tail);
                        assert!(nw < w, "rewrite step must decrease the word");
                        poly_add_term(&mut work, nw, &(rc * &c));
                    }
                }
            }
        }
        Ok(done)
    }

    pub fn normal_form_word(&self, w: &Word) -> Result<Poly> {
        let mut p = Poly::new();
        p.insert(w.clone(), CycNum::one(self.order));
        self.normal_form(&p, Strategy::Leftmost)
    }

    /// Normal words by increasing degree up to `degree_cap`; the flag is set
    /// when normal words survive at the cap.
    pub fn enumerate_basis(&self) -> (Vec<Word>, bool) {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..self.degree_cap {
            let mut next = Vec::new();
            for w in &layer {
                for x in 0..self.m as u8 {
                    let mut v = w.0.clone();
                    v.push(x);
                    // the prefix is normal, so only suffixes can be redexes
                    let hit = self.lhs_lens.iter().any(|&len| {
                        len <= v.len() && self.index.contains_key(&v[v.len() - len..])
                    });
                    if !hit {
                        next.push(Word(v));
                    }
                }
            }
            if next.is_empty() {
                return (out, false);
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        (out, true)
    }

    /// One rule per line: `lhs -> coeff*word + ...`.
    pub fn dump(&self) -> String {
        let mut rules: Vec<&Rule> = self.rules.iter().collect();
        rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        let mut s = String::new();
        for r in rules {
            s.push_str(&format!("{} -> {}\n", r.lhs, format_poly(&r.rhs)));
        }
        s
    }
}

/// Coefficients as `q^k` when they are roots of unity, else rational vectors.
pub fn format_poly(p: &Poly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .iter()
        .rev()
        .map(|(w, c)| match c.as_root() {
            Some(k) => format!("q^{}*{}", k, w),
            None => match (-c).as_root() {
                Some(k) => format!("-q^{}*{}", k, w),
                None => format!("{}*{}", c, w),
            },
        })
        .collect();
    terms.join(" + ")
}

/// Σ_{r+s=1−a_ij} (−1)^s [1−a_ij choose s]_{d_i} e_i^r e_j e_i^s.
pub fn serre_relation(d: &CartanDatum, i: usize, j: usize) -> Result<Poly> {
    let order = d.big_n;
    let top = (1 - d.a[i][j]) as u64;
    let mut p = Poly::new();
    for s in 0..=top {
        let r = top - s;
        let mut w = vec![i as u8; r as usize];
        w.push(j as u8);
        w.extend(std::iter::repeat_n(i as u8, s as usize));
        let mut c = gauss_binomial(order, r, s, d.d[i])?;
        if s % 2 == 1 {
            c = -c;
        }
        poly_add_term(&mut p, Word(w), &c);
    }
    Ok(p)
}

pub fn nilpotency_relation(d: &CartanDatum, i: usize) -> Poly {
    let mut p = Poly::new();
    p.insert(Word(vec![i as u8; d.l[i] as usize]), CycNum::one(d.big_n));
    p
}

/// Σ_i (l_i − 1) + 2.
pub fn default_cap(d: &CartanDatum) -> usize {
    d.l.iter().map(|&l| l as usize - 1).sum::<usize>() + 2
}

/// Orient a nonzero polynomial: leading word → −(rest)/lead coefficient.
fn orient(p: &Poly) -> Result<Rule> {
    let (lead, lc) = p.last_key_value().ok_or(Error::Precondition("zero relation".into()))?;
    let inv = lc.cyc_inv()?;
    let mut rhs = Poly::new();
    for (w, c) in p.iter() {
        if w != lead {
            poly_add_term(&mut rhs, w.clone(), &-(c * &inv));
        }
    }
    Ok(Rule {
        lhs: lead.clone(),
        rhs,
    })
}

fn rule_poly(r: &Rule, order: u64) -> Poly {
    let mut p = Poly::new();
    p.insert(r.lhs.clone(), CycNum::one(order));
    poly_add(&mut p, &r.rhs, &-CycNum::one(order));
    p
}

/// The Serre and nilpotency relations as deg-lex oriented rules, not yet completed.
pub fn serre_system(d: &CartanDatum) -> Result<RewriteSystem> {
    let mut rules = Vec::new();
    for i in 0..d.m {
        rules.push(orient(&nilpotency_relation(d, i))?);
        for j in 0..d.m {
            if i != j && d.a[i][j] != 0 {
                rules.push(orient(&serre_relation(d, i, j)?)?);
            }
        }
    }
    Ok(RewriteSystem::new(d.m, d.big_n, rules, default_cap(d)))
}

/// Upper bound on the rule count during completion.
pub const MAX_RULES: usize = 4000;

#[derive(PartialEq, Eq)]
struct Pending(usize, u64, Poly);

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn poly_degree(p: &Poly) -> usize {
    p.keys().map(|w| w.len()).max().unwrap_or(0)
}

/// Overlap S-polynomials between rule `a` and rule `b` (suffix of a = prefix
/// of b, or b inside a), up to degree `cap`. Returns (degree, poly, overlap word).
fn critical_pairs(a: &Rule, b: &Rule, cap: usize, order: u64) -> (Vec<(usize, Poly)>, bool) {
    let (la, lb) = (&a.lhs.0, &b.lhs.0);
    let one = CycNum::one(order);
    let mut out = Vec::new();
    let mut truncated = false;
    for k in 1..la.len().min(lb.len()) {
        if la[la.len() - k..] == lb[..k] {
            let deg = la.len() + lb.len() - k;
            if deg > cap {
                truncated = true;
                continue;
            }
            let head = Word(la[..la.len() - k].to_vec());
            let tail = Word(lb[k..].to_vec());
            let mut p = Poly::new();
            for (w, c) in &a.rhs {
                poly_add_term(&mut p, w.concat(&tail), c);
            }
            for (w, c) in &b.rhs {
                poly_add_term(&mut p, head.concat(w), &-(c * &one));
            }
            out.push((deg, p));
        }
    }
    (out, truncated)
}

/// Critical-pair completion up to `system.degree_cap`.
///
/// Complete: every overlap up to the cap resolves and either no overlap was cut
/// off by the cap or no normal word reaches the cap (so longer overlaps are 0 = 0).
/// Capped: overlaps were cut off while normal words persist at the cap, or the
/// rule count limit was hit. Failed: a relation could not be oriented.
pub fn complete(system: &RewriteSystem) -> RewriteSystem {
    let mut sys = system.clone();
    let cap = sys.degree_cap;
    let order = sys.order;
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut truncated = false;
    for i in 0..sys.rules.len() {
        for j in 0..sys.rules.len() {
            let (pairs, t) = critical_pairs(&sys.rules[i], &sys.rules[j], cap, order);
            truncated |= t;
            for (deg, p) in pairs {
                heap.push(Pending(deg, seq, p));
                seq += 1;
            }
        }
    }
    // inclusions among the initial rules
    let initial: Vec<Rule> = sys.rules.clone();
    for r in &initial {
        if let Some(idx) = sys.index.get(&r.lhs.0).copied() {
            let others_inside = sys.rules.iter().enumerate().any(|(k, o)| {
                k != idx && o.lhs.len() < r.lhs.len() && contains(&r.lhs.0, &o.lhs.0)
            });
            if others_inside {
                let removed = sys.remove_rule(idx);
                heap.push(Pending(removed.lhs.len(), seq, rule_poly(&removed, order)));
                seq += 1;
            }
        }
    }
    while let Some(Pending(_, _, p)) = heap.pop() {
        let red = match sys.normal_form(&p, Strategy::Leftmost) {
            Ok(r) => r,
            Err(_) => {
                sys.status = Status::Failed;
                return sys;
            }
        };
        if red.is_empty() {
            continue;
        }
        let rule = match orient(&red) {
            Ok(r) => r,
            Err(_) => {
                sys.status = Status::Failed;
                sys.failure = red.keys().next_back().map(|w| (w.clone(), w.clone()));
                return sys;
            }
        };
        // existing rules whose lhs contains the new lhs are retired and re-queued
        let mut k = 0;
        while k < sys.rules.len() {
            if sys.rules[k].lhs.len() > rule.lhs.len() && contains(&sys.rules[k].lhs.0, &rule.lhs.0) {
                let removed = sys.remove_rule(k);
                heap.push(Pending(removed.lhs.len(), seq, rule_poly(&removed, order)));
                seq += 1;
            } else {
                k += 1;
            }
        }
        sys.push_rule(rule);
        if sys.rules.len() > MAX_RULES {
            sys.status = Status::Capped;
            return sys;
        }
        let new = sys.rules.len() - 1;
        for other in 0..sys.rules.len() {
            for (x, y) in [(new, other), (other, new)] {
                let (pairs, t) = critical_pairs(&sys.rules[x], &sys.rules[y], cap, order);
                truncated |= t;
                for (deg, p) in pairs {
                    heap.push(Pending(deg, seq, p));
                    seq += 1;
                }
            }
        }
        let _ = poly_degree(&red);
    }
    let (_, infinite) = sys.enumerate_basis();
    sys.status = if truncated && infinite {
        Status::Capped
    } else {
        Status::Complete
    };
    sys
}

fn contains(hay: &[u8], needle: &[u8]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Sparse vector over basis ids.
pub type SVec = BTreeMap<usize, CycNum>;

pub fn svec_add(v: &mut SVec, k: usize, c: &CycNum) {
    if c.is_zero() {
        return;
    }
    match v.get_mut(&k) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                v.remove(&k);
            }
        }
        None => {
            v.insert(k, c.clone());
        }
    }
}

pub fn svec_axpy(v: &mut SVec, a: &CycNum, x: &SVec) {
    for (k, c) in x {
        svec_add(v, *k, &(a * c));
    }
}

/// The Nichols algebra u⁺ with its normal-word basis, the rewrite system that
/// produces it, and right multiplication tables.
#[derive(Clone, Debug)]
pub struct UPlus {
    pub m: usize,
    pub order: u64,
    pub words: Vec<Word>,
    pub ids: HashMap<Vec<u8>, usize>,
    /// Per normal word, ∂_i of it in basis coordinates.
    pub derivs: Vec<Vec<SVec>>,
    /// right[j][id] = NF(word(id) · e_j).
    pub right: Vec<Vec<SVec>>,
    pub system: RewriteSystem,
    pub top_degree: usize,
}

impl UPlus {
    /// Build degree by degree. A word is a candidate when its prefix and suffix
    /// are normal; candidates are taken in deg-lex order and a candidate is a
    /// new normal word iff its derivative vector (∂_1 u, …, ∂_m u) is independent
    /// of those of smaller normal words. Dependent candidates become rules.
    pub fn build(d: &CartanDatum) -> Result<UPlus> {
        let m = d.m;
        let order = d.big_n;
        // braiding q_ij = q^{c_ij}
        let qij: Vec<Vec<CycNum>> = (0..m)
            .map(|i| (0..m).map(|j| CycNum::root(order, d.c[i][j])).collect())
            .collect();
        let mut up = UPlus {
            m,
            order,
            words: vec![Word::empty()],
            ids: HashMap::from([(Vec::new(), 0)]),
            derivs: vec![vec![SVec::new(); m]],
            right: vec![Vec::new(); m],
            system: RewriteSystem::new(m, order, Vec::new(), 0),
            top_degree: 0,
        };
        let mut by_degree: Vec<Vec<usize>> = vec![vec![0]];
        let hard_cap = d.l.iter().map(|&l| l as usize).product::<usize>().max(1) * 4 + 8;
        for k in 1.. {
            if k > hard_cap {
                return Err(Error::DegreeCap(hard_cap));
            }
            // right multiplication on degree k−2 words needs rules through k−1
            if k >= 2 {
                up.fill_right(&by_degree[k - 2])?;
            }
            let mut candidates: Vec<(Word, usize, usize)> = Vec::new();
            for &w in &by_degree[k - 1] {
                for x in 0..m {
                    let mut v = up.words[w].0.clone();
                    v.push(x as u8);
                    if k == 1 || up.ids.contains_key(&v[1..]) {
                        candidates.push((Word(v), w, x));
                    }
                }
            }
            candidates.sort_by(|a, b| a.0.cmp(&b.0));
            // group by multidegree; ∂ respects the grading
            let mut groups: BTreeMap<Vec<i64>, Vec<(Word, usize, usize)>> = BTreeMap::new();
            for c in candidates {
                groups.entry(c.0.multidegree(m)).or_default().push(c);
            }
            let mut layer = Vec::new();
            for (_, group) in groups {
                let mut rows: Vec<(usize, usize, SVec, SVec)> = Vec::new(); // pivot, word id, vec, combo
                for (word, w, x) in group {
                    // ∂_i(w e_x) = δ_ix w + q_ix NF(∂_i(w) e_x), columns (i, id) → i*BIG + id
                    let mut vec = SVec::new();
                    for i in 0..m {
                        let mut part = SVec::new();
                        if i == x {
                            svec_add(&mut part, w, &CycNum::one(order));
                        }
                        let dw = up.derivs[w][i].clone();
                        for (id, c) in &dw {
                            let r = up.right_of(*id, x);
                            svec_axpy(&mut part, &(c * &qij[i][x]), &r);
                        }
                        for (id, c) in part {
                            vec.insert(i * (1 << 32) + id, c);
                        }
                    }
                    let raw = vec.clone();
                    let mut combo = SVec::new();
                    let tmp_id = usize::MAX;
                    combo.insert(tmp_id, CycNum::one(order));
                    for (piv, _, rv, rc) in &rows {
                        if let Some(f) = vec.get(piv).cloned() {
                            let nf = -f;
                            svec_axpy(&mut vec, &nf, rv);
                            svec_axpy(&mut combo, &nf, rc);
                        }
                    }
                    if vec.is_empty() {
                        // word + Σ a_v v = 0 in u⁺
                        let mut rhs = Poly::new();
                        for (id, c) in &combo {
                            if *id != tmp_id {
                                poly_add_term(&mut rhs, up.words[*id].clone(), &-c.clone());
                            }
                        }
                        up.system.push_rule(Rule { lhs: word, rhs });
                    } else {
                        let id = up.words.len();
                        up.ids.insert(word.0.clone(), id);
                        up.words.push(word);
                        let mut dv = vec![SVec::new(); m];
                        for (col, c) in raw {
                            dv[col >> 32].insert(col & 0xffff_ffff, c);
                        }
                        up.derivs.push(dv);
                        let (&piv, pc) = vec.iter().next().unwrap();
                        let inv = pc.cyc_inv()?;
                        let mut rv = SVec::new();
                        svec_axpy(&mut rv, &inv, &vec);
                        let mut rc = SVec::new();
                        for (k2, c) in combo {
                            let key = if k2 == tmp_id { id } else { k2 };
                            svec_add(&mut rc, key, &(&c * &inv));
                        }
                        rows.push((piv, id, rv, rc));
                        layer.push(id);
                    }
                }
            }
            if layer.is_empty() {
                up.top_degree = k - 1;
                up.system.degree_cap = k;
                by_degree.push(layer);
                break;
            }
            by_degree.push(layer);
        }
        let tail: Vec<usize> = by_degree[by_degree.len().saturating_sub(3)..]
            .iter()
            .flatten()
            .copied()
            .collect();
        up.fill_right(&tail)?;
        Ok(up)
    }

    fn right_of(&self, id: usize, x: usize) -> SVec {
        self.right[x].get(id).cloned().unwrap_or_default()
    }

    /// NF(w · e_x) for the given normal words (all lower-degree entries must exist).
    fn fill_right(&mut self, ids: &[usize]) -> Result<()> {
        for &id in ids {
            for x in 0..self.m {
                if self.right[x].len() <= id {
                    self.right[x].resize(id + 1, SVec::new());
                }
                let v = self.compute_right(id, x)?;
                self.right[x][id] = v;
            }
        }
        Ok(())
    }

    fn compute_right(&self, id: usize, x: usize) -> Result<SVec> {
        let mut v = self.words[id].0.clone();
        v.push(x as u8);
        let mut out = SVec::new();
        if let Some(&nid) = self.ids.get(&v) {
            out.insert(nid, CycNum::one(self.order));
            return Ok(out);
        }
        // some suffix is a rule lhs
        let len = (1..=v.len())
            .find(|&len| self.system.rule_for(&v[v.len() - len..]).is_some());
        let Some(len) = len else {
            // beyond the top degree every word vanishes
            return Ok(out);
        };
        let rule = self.system.rule_for(&v[v.len() - len..]).unwrap();
        let head = &v[..v.len() - len];
        let head_id = *self.ids.get(head).ok_or(Error::Precondition("non-normal prefix".into()))?;
        for (r, c) in &rule.rhs {
            let mut acc = SVec::new();
            acc.insert(head_id, c.clone());
            for &y in &r.0 {
                acc = self.apply_right(&acc, y as usize)?;
            }
            for (k, cc) in acc {
                svec_add(&mut out, k, &cc);
            }
        }
        Ok(out)
    }

    fn apply_right(&self, v: &SVec, x: usize) -> Result<SVec> {
        let mut out = SVec::new();
        for (id, c) in v {
            let r = match self.right[x].get(*id) {
                Some(r) if !r.is_empty() || self.words[*id].len() + 1 > self.top_degree => r.clone(),
                _ => self.compute_right(*id, x)?,
            };
            svec_axpy(&mut out, c, &r);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn id_of(&self, w: &[u8]) -> Option<usize> {
        self.ids.get(w).copied()
    }

    /// NF(word(a) · word(b)).
    pub fn mul_ids(&self, a: usize, b: usize) -> SVec {
        let mut acc = SVec::new();
        acc.insert(a, CycNum::one(self.order));
        for &y in &self.words[b].0 {
            acc = self.mul_letter(&acc, y as usize);
        }
        acc
    }

    pub fn mul_letter(&self, v: &SVec, x: usize) -> SVec {
        let mut out = SVec::new();
        for (id, c) in v {
            svec_axpy(&mut out, c, &self.right[x][*id]);
        }
        out
    }

    pub fn mul(&self, a: &SVec, b: &SVec) -> SVec {
        let mut out = SVec::new();
        for (ia, ca) in a {
            for (ib, cb) in b {
                svec_axpy(&mut out, &(ca * cb), &self.mul_ids(*ia, *ib));
            }
        }
        out
    }

    /// Normal form of an arbitrary word via the multiplication tables.
    pub fn nf_word(&self, w: &[u8]) -> SVec {
        let mut acc = SVec::new();
        acc.insert(0, CycNum::one(self.order));
        for &y in w {
            acc = self.mul_letter(&acc, y as usize);
        }
        acc
    }

    pub fn to_poly(&self, v: &SVec) -> Poly {
        v.iter().map(|(k, c)| (self.words[*k].clone(), c.clone())).collect()
    }

    pub fn from_poly(&self, p: &Poly) -> SVec {
        let mut out = SVec::new();
        for (w, c) in p {
            svec_axpy(&mut out, c, &self.nf_word(&w.0));
        }
        out
    }

    pub fn degree_of(&self, id: usize) -> usize {
        self.words[id].len()
    }

    pub fn dims_by_multidegree(&self) -> BTreeMap<Vec<i64>, usize> {
        let mut out = BTreeMap::new();
        for w in &self.words {
            *out.entry(w.multidegree(self.m)).or_insert(0) += 1;
        }
        out
    }

    /// Ids of normal words with the given multidegree.
    pub fn ids_of_multidegree(&self, md: &[i64]) -> Vec<usize> {
        (0..self.words.len())
            .filter(|&k| self.words[k].multidegree(self.m) == md)
            .collect()
    }

    pub fn letters_used(&self) -> HashSet<u8> {
        self.words.iter().flat_map(|w| w.0.iter().copied()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{make_datum, LieType};

    fn word(s: &[u8]) -> Word {
        Word(s.to_vec())
    }

    #[test]
    fn deg_lex_order() {
        assert!(word(&[1]) < word(&[0, 0]));
        assert!(word(&[0, 1]) < word(&[1, 0]));
        assert_eq!(format!("{}", word(&[1, 0, 0])), "e2·e1^2");
    }

    #[test]
    fn a1_rule_set() {
        let d = make_datum(LieType::A, 1, 4).unwrap();
        let s = complete(&serre_system(&d).unwrap());
        assert_eq!(s.status, Status::Complete);
        assert_eq!(s.rules.len(), 1);
        assert!(s.normal_form_word(&word(&[0; 9])).unwrap().is_empty());
        let (basis, inf) = s.enumerate_basis();
        assert_eq!(basis.len(), 8);
        assert!(!inf);
    }

    #[test]
    fn a2_serre_orientation() {
        let d = make_datum(LieType::A, 2, 4).unwrap();
        let s = serre_system(&d).unwrap();
        let nf = s.normal_form_word(&word(&[1, 0, 0])).unwrap();
        let q2 = &d.q(1) + &d.q(-1);
        let mut expect = Poly::new();
        expect.insert(word(&[0, 1, 0]), q2);
        expect.insert(word(&[0, 0, 1]), CycNum::from_int(16, -1));
        assert_eq!(nf, expect);
    }

    #[test]
    fn empty_system_flags_infinite() {
        let s = complete(&RewriteSystem::new(2, 16, Vec::new(), 5));
        assert_eq!(s.status, Status::Complete);
        assert!(s.enumerate_basis().1);
    }

    #[test]
    fn nichols_dimensions() {
        let a1 = UPlus::build(&make_datum(LieType::A, 1, 4).unwrap()).unwrap();
        assert_eq!(a1.dim(), 8);
        let a1 = UPlus::build(&make_datum(LieType::A, 1, 5).unwrap()).unwrap();
        assert_eq!(a1.dim(), 25);
        let a2 = UPlus::build(&make_datum(LieType::A, 2, 3).unwrap()).unwrap();
        assert_eq!(a2.dim(), 729);
    }

    #[test]
    fn nichols_system_is_a_basis() {
        let d = make_datum(LieType::A, 2, 3).unwrap();
        let up = UPlus::build(&d).unwrap();
        let (basis, inf) = up.system.enumerate_basis();
        assert!(!inf);
        assert_eq!(basis.len(), up.dim());
        for (i, j) in [(0, 1), (1, 0)] {
            let p = up.from_poly(&serre_relation(&d, i, j).unwrap());
            assert!(p.is_empty());
        }
    }
}
