//! Batch verification: run configurations, per-suite check lists and the JSON report.

use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cartan::{make_datum, CartanDatum, LieType};
use crate::cohomology::{chain_map_failure, decide_bar_coboundary, AbelianGroup, KComplex};
use crate::double::{
    graded_dimension_count, presentation_dimension, presentation_relations, presentation_structure, relation_suite,
    Double, SuiteScope,
};
use crate::error::{Error, Result};
use crate::genuine::{full_cocycle, genuineness_verdict_with, Status as Verdict, TableLabels};
use crate::grouptensors::{
    alpha_twist_mismatch, build_j, closed_phi, differential_dj, mismatch_on, sample_tuples, structure_mismatches,
};
use crate::halfqg::{
    antipode_definitional, antipode_generator, axiom_suite, delta_j_generator, twist_coproduct_definitional, Algebra,
    Check,
};
use crate::majid::{cross_oracle, Quiver};
use crate::rewrite::UPlus;

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Grids with more index tuples than this are sampled instead of enumerated.
pub const EXHAUSTIVE_TUPLES: u64 = 2_000_000;
/// Largest dim A for which the double runs its full relation list.
pub const FULL_DOUBLE_LIMIT: usize = 125;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Half,
    Majid,
    Double,
    Presentation,
    Cohomology,
    Genuine,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Half,
        Suite::Majid,
        Suite::Double,
        Suite::Presentation,
        Suite::Cohomology,
        Suite::Genuine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Half => "half",
            Suite::Majid => "majid",
            Suite::Double => "double",
            Suite::Presentation => "presentation",
            Suite::Cohomology => "cohomology",
            Suite::Genuine => "genuine",
        }
    }

    /// Suites whose relations rely on the Serre argument, valid only for n ≥ 4.
    pub fn needs_serre(self) -> bool {
        matches!(self, Suite::Majid | Suite::Double | Suite::Presentation)
    }
}

/// Parses a suite name; `all` expands to every suite.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
            continue;
        }
        let suite = Suite::ALL
            .into_iter()
            .find(|x| x.name() == part)
            .ok_or_else(|| Error::Parse(format!("unknown suite {:?}", part)))?;
        out.push(suite);
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Parse("no suite selected".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    /// Closed forms and relations only.
    ClosedFormOnly,
    /// Also recompute from definitions and compare independent constructions.
    CrossCheck,
}

impl FromStr for OracleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<OracleMode> {
        match s {
            "closed-form-only" => Ok(OracleMode::ClosedFormOnly),
            "cross-check" => Ok(OracleMode::CrossCheck),
            other => Err(Error::Parse(format!("unknown oracle mode {:?}", other))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub lie_type: LieType,
    pub m: usize,
    pub n: u64,
    pub suites: Vec<Suite>,
    pub oracle: OracleMode,
    pub samples: usize,
    pub seed: u64,
    pub table_labels: TableLabels,
}

impl RunConfig {
    pub fn new(lie_type: LieType, m: usize, n: u64, suites: Vec<Suite>) -> RunConfig {
        RunConfig {
            lie_type,
            m,
            n,
            suites,
            oracle: OracleMode::CrossCheck,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            table_labels: TableLabels::Bourbaki,
        }
    }

    /// n ≥ 2, a valid Cartan type, and n ≥ 4 for Serre-dependent suites.
    pub fn validate(&self) -> Result<CartanDatum> {
        let d = make_datum(self.lie_type, self.m, self.n)?;
        if self.n < 4 {
            if let Some(s) = self.suites.iter().find(|s| s.needs_serre()) {
                return Err(Error::Precondition(format!(
                    "suite {} needs n ≥ 4 (the Serre relations are only established there), got n = {}",
                    s.name(),
                    self.n
                )));
            }
        }
        Ok(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// What the check asserts.
    pub statement: String,
    pub status: Status,
    pub runtime_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub conventions: Value,
    pub seed: u64,
    pub results: Vec<CheckResult>,
}

impl Report {
    /// 0 when every check passes, 1 on any failure, 2 when the rest are inconclusive.
    pub fn exit_code(&self) -> i32 {
        if self.results.iter().any(|r| r.status == Status::Fail) {
            1
        } else if self.results.iter().any(|r| r.status == Status::Inconclusive) {
            2
        } else {
            0
        }
    }

    /// Zeroes the runtimes so that reports for equal configurations are byte-identical.
    pub fn without_timings(mut self) -> Report {
        for r in &mut self.results {
            r.runtime_ms = 0;
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

struct Batch {
    suite: Suite,
    items: Vec<CheckResult>,
}

impl Batch {
    fn new(suite: Suite) -> Batch {
        Batch { suite, items: Vec::new() }
    }

    fn push(&mut self, id: &str, statement: &str, status: Status, ms: u64, certificate: Option<Value>) {
        self.items.push(CheckResult {
            id: format!("{}/{}", self.suite.name(), id),
            statement: statement.into(),
            status,
            runtime_ms: ms,
            certificate,
        });
    }

    fn check(&mut self, id: &str, statement: &str, ok: bool, ms: u64, witness: Option<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(id, statement, status, ms, witness.map(|w| json!({ "witness": w })));
    }

    fn checks(&mut self, statement: &str, checks: &[Check], ms: u64) {
        for c in checks {
            let id = c.name.replace(' ', "-");
            self.check(&id, statement, c.ok, ms, c.witness.clone());
        }
    }

    fn error(&mut self, id: &str, statement: &str, e: &Error) {
        self.push(id, statement, Status::Fail, 0, Some(json!({ "error": e.to_string() })));
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed().as_millis() as u64)
}

fn tuple_count(modulus: i64, len: usize) -> u64 {
    (modulus as u64).saturating_pow(len as u32)
}

fn half_suite(cfg: &RunConfig, d: &CartanDatum, up: &Arc<UPlus>) -> Batch {
    let mut b = Batch::new(Suite::Half);
    let phi = closed_phi(d);
    let (dj, ms) = timed(|| differential_dj(d, &build_j(d)));
    match dj {
        Ok(dj) => {
            let bad = if tuple_count(d.n as i64, 3 * d.m) <= EXHAUSTIVE_TUPLES {
                dj.first_difference(&phi)
            } else {
                mismatch_on(&dj, &phi, &sample_tuples(3 * d.m, d.n as i64, cfg.samples, cfg.seed))
            };
            b.check("reassociator-from-twist", "the differential of J equals the closed form of φ", bad.is_none(), ms, bad.map(|x| format!("{:?}", x)));
        }
        Err(e) => b.error("reassociator-from-twist", "the differential of J equals the closed form of φ", &e),
    }
    let a = Algebra::half(d, up.clone());
    let (checks, ms) = timed(|| axiom_suite(&a));
    b.checks("quasi-Hopf axiom of the half algebra", &checks, ms);
    if cfg.oracle == OracleMode::CrossCheck {
        for i in 0..d.m {
            let (r, ms) = timed(|| twist_coproduct_definitional(&a, i));
            let st = "the coproduct of e_i twisted by J matches its closed form";
            match r {
                Ok(t) => b.check(&format!("twisted-coproduct-e{}", i + 1), st, t == delta_j_generator(&a, i), ms, None),
                Err(e) => b.error(&format!("twisted-coproduct-e{}", i + 1), st, &e),
            }
            let (r, ms) = timed(|| antipode_definitional(&a, i));
            let st = "the antipode of e_i from the twisted data matches its closed form";
            match r {
                Ok(s) => b.check(&format!("antipode-e{}", i + 1), st, s == antipode_generator(&a, i), ms, None),
                Err(e) => b.error(&format!("antipode-e{}", i + 1), st, &e),
            }
        }
        let (bad, ms) = timed(|| alpha_twist_mismatch(d));
        b.check("alpha-from-twist", "α equals α_J β_J", bad.is_none(), ms, bad.map(|x| format!("{:?}", x)));
        let exhaustive = tuple_count(d.n as i64, 4 * d.m) <= EXHAUSTIVE_TUPLES;
        let samples = if exhaustive { None } else { Some((cfg.samples, cfg.seed)) };
        let (mm, ms) = timed(|| structure_mismatches(d, samples));
        for (name, bad) in mm {
            b.check(
                &format!("{}-closed-form", name),
                "closed form of a double structure element equals its definition through φ",
                bad.is_none(),
                ms,
                bad.map(|x| format!("{:?}", x)),
            );
        }
    }
    b
}

fn majid_suite(cfg: &RunConfig, d: &CartanDatum, up: &Arc<UPlus>) -> Batch {
    let mut b = Batch::new(Suite::Majid);
    let q = Quiver::new(d);
    let (bad, ms) = timed(|| q.bimodule_check());
    b.check("bimodule-axioms", "the arrow actions form a bimodule", bad.is_none(), ms, bad.map(|x| format!("{:?}", x)));
    for i in 0..d.m {
        let li = d.l[i] as usize;
        let ((top, below), ms) = timed(|| (q.gamma_power(i, li, false), q.gamma_power(i, li - 1, false)));
        b.check(
            &format!("gamma{}-nilpotent", i + 1),
            "the l_i-th power of Γ_i vanishes and the (l_i − 1)-th does not",
            top.is_empty() && !below.is_empty(),
            ms,
            None,
        );
    }
    for i in 0..d.m {
        for j in (0..d.m).filter(|&j| j != i) {
            let id = format!("serre-{}-{}", i + 1, j + 1);
            let (r, ms) = timed(|| q.serre_check(i, j));
            match r {
                Ok(ok) => b.check(&id, "quantum Serre relation among the Γ_i", ok, ms, None),
                Err(e) => b.error(&id, "quantum Serre relation among the Γ_i", &e),
            }
        }
    }
    if cfg.oracle == OracleMode::CrossCheck {
        let a = Algebra::half(d, up.clone());
        let factors = if d.m == 1 { 3 } else { 2 };
        let (r, ms) = timed(|| cross_oracle(&a, factors));
        let st = "quiver products agree with convolution in the dual of the half algebra";
        match r {
            Ok(count) => b.push("quiver-vs-convolution", st, Status::Pass, ms, Some(json!({ "compared": count, "factors": factors }))),
            Err(e) => b.push("quiver-vs-convolution", st, Status::Fail, ms, Some(json!({ "mismatch": format!("{:?}", e) }))),
        }
    }
    b
}

fn double_suite(cfg: &RunConfig, d: &CartanDatum, up: &Arc<UPlus>) -> Batch {
    let mut b = Batch::new(Suite::Double);
    let mut dd = Double::new(d, up.clone());
    if cfg.oracle == OracleMode::CrossCheck {
        dd = dd.with_audit();
    }
    let dim_a = dd.alg.grid().len() * up.dim();
    let scope = if dim_a <= FULL_DOUBLE_LIMIT { SuiteScope::Full } else { SuiteScope::SerreOnly };
    let (r, ms) = timed(|| relation_suite(&dd, scope));
    match r {
        Ok(checks) => b.checks("relation of the double", &checks, ms),
        Err(e) => b.error("relations", "relation of the double", &e),
    }
    if scope == SuiteScope::SerreOnly {
        b.push(
            "scope",
            "relation list restricted to the Serre and nilpotency relations",
            Status::Pass,
            0,
            Some(json!({ "dim_a": dim_a, "full_limit": FULL_DOUBLE_LIMIT })),
        );
    }
    if cfg.oracle == OracleMode::CrossCheck {
        let audit = dd.audit();
        b.check(
            "collapsed-vs-naive-product",
            "the collapsed product formula agrees with the direct ω-weighted sum",
            audit.mismatches.is_empty() && audit.compared > 0,
            0,
            Some(format!("{} products compared, {} mismatches", audit.compared, audit.mismatches.len())),
        );
    }
    b
}

fn presentation_suite(_cfg: &RunConfig, d: &CartanDatum, up: &Arc<UPlus>) -> Batch {
    let mut b = Batch::new(Suite::Presentation);
    let dd = Double::new(d, up.clone());
    let (checks, ms) = timed(|| presentation_relations(&dd));
    b.checks("defining relation of the presented algebra on the images in the double", &checks, ms);
    let (r, ms) = timed(|| presentation_structure(&dd));
    match r {
        Ok(checks) => b.checks("coalgebra structure of the presented algebra", &checks, ms),
        Err(e) => b.error("structure", "coalgebra structure of the presented algebra", &e),
    }
    let st = "the images of the triangular basis span a space of dimension (dim A)²";
    if d.m == 1 {
        let ((size, rank, target), ms) = timed(|| presentation_dimension(&dd));
        b.check("dimension", st, size == target && rank == target, ms, Some(format!("size {size}, rank {rank}, target {target}")));
    } else {
        let (g, ms) = timed(|| graded_dimension_count(&dd));
        b.check(
            "dimension",
            st,
            g.total() == g.target(),
            ms,
            Some(format!("{} · {} · {} = {}, target {}", g.e_rank, g.cartan_rank, g.f_rank, g.total(), g.target())),
        );
    }
    b
}

fn cohomology_suite(cfg: &RunConfig, d: &CartanDatum) -> Batch {
    let mut b = Batch::new(Suite::Cohomology);
    let g = AbelianGroup::new(vec![d.n as i64; d.m]).expect("grid orders are positive");
    let kc = KComplex::new(g.clone());
    let (bad, ms) = timed(|| kc.d_squared_failure(4));
    b.check("d-squared", "the differential of the K-complex squares to zero through degree 4", bad.is_none(), ms, bad.map(|x| format!("{:?}", x)));
    let (bad, ms) = timed(|| chain_map_failure(&g));
    b.check("chain-map", "F commutes with the differentials of K and the bar resolution through degree 3", bad.is_none(), ms, bad.map(|x| format!("{:?}", x)));
    let st = "class of φ through its pullback to the K-complex";
    let (r, ms) = timed(|| full_cocycle(d).and_then(|c| decide_bar_coboundary(&c, cfg.samples, cfg.seed)));
    match r {
        Ok(v) => b.push(
            "phi-class",
            st,
            Status::Pass,
            ms,
            Some(json!({
                "coboundary": v.verdict.is_coboundary(),
                "pullback": v.pullback.to_text(),
                "verdict": v.verdict,
            })),
        ),
        Err(e) => b.error("phi-class", st, &e),
    }
    b
}

fn genuine_suite(cfg: &RunConfig) -> Batch {
    let mut b = Batch::new(Suite::Genuine);
    let st = "restrictions of φ to one-dimensional modules decide genuineness";
    let (r, ms) = timed(|| genuineness_verdict_with(cfg.lie_type, cfg.m, cfg.n, cfg.table_labels));
    match r {
        Ok(v) => {
            let status = match v.status {
                Verdict::Genuine | Verdict::CoboundaryFound => Status::Pass,
                Verdict::Inconclusive => Status::Inconclusive,
            };
            let cert = serde_json::to_value(&v).expect("verdicts serialize");
            b.push("verdict", st, status, ms, Some(cert));
        }
        Err(e) => b.error("verdict", st, &e),
    }
    b
}

/// Runs the selected suites concurrently; results are ordered by suite.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    let d = cfg.validate()?;
    let needs_up = cfg.suites.iter().any(|s| !matches!(s, Suite::Cohomology | Suite::Genuine));
    let up = if needs_up { Some(Arc::new(UPlus::build(&d)?)) } else { None };
    let mut batches: Vec<Batch> = cfg
        .suites
        .par_iter()
        .map(|&s| match s {
            Suite::Half => half_suite(cfg, &d, up.as_ref().unwrap()),
            Suite::Majid => majid_suite(cfg, &d, up.as_ref().unwrap()),
            Suite::Double => double_suite(cfg, &d, up.as_ref().unwrap()),
            Suite::Presentation => presentation_suite(cfg, &d, up.as_ref().unwrap()),
            Suite::Cohomology => cohomology_suite(cfg, &d),
            Suite::Genuine => genuine_suite(cfg),
        })
        .collect();
    batches.sort_by_key(|b| b.suite);
    Ok(Report {
        config: cfg.clone(),
        conventions: json!({ "cartan": "Bourbaki", "table_labels": cfg.table_labels }),
        seed: cfg.seed,
        results: batches.into_iter().flat_map(|b| b.items).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        assert_eq!(parse_suites("all").unwrap().len(), 6);
        assert_eq!(parse_suites("genuine,half,half").unwrap(), vec![Suite::Half, Suite::Genuine]);
        assert!(parse_suites("bogus").is_err());
        let cfg = RunConfig::new(LieType::A, 2, 3, vec![Suite::Majid]);
        assert!(matches!(cfg.validate(), Err(Error::Precondition(_))));
        let cfg = RunConfig::new(LieType::A, 2, 3, vec![Suite::Genuine, Suite::Cohomology]);
        assert!(cfg.validate().is_ok());
        assert!(RunConfig::new(LieType::A, 1, 1, vec![Suite::Half]).validate().is_err());
    }

    #[test]
    fn small_run_is_deterministic() {
        let cfg = RunConfig::new(LieType::A, 1, 4, vec![Suite::Half, Suite::Cohomology, Suite::Genuine]);
        let r1 = run(&cfg).unwrap().without_timings();
        let r2 = run(&cfg).unwrap().without_timings();
        assert_eq!(r1.to_json(), r2.to_json());
        assert_eq!(r1.exit_code(), 0, "{}", r1.to_json());
        assert!(r1.results.iter().any(|r| r.id == "half/reassociator-from-twist"));
    }
}
