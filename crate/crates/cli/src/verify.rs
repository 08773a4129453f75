//! Desk-scale checks, one per `pcc verify` id.

use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use pcc_core::comm::{ass_pipeline, ceil_sqrt, CommMatrix};
use pcc_core::constructions::{gen_biclique_class, gen_hrd, verify_ld_le_2, HrdParams};
use pcc_core::dimensions::{dual_vc_check, ld_dim, ld_dim_by_oracle, vc_dim};
use pcc_core::disambiguation::{for_each_completion, min_vc_disambiguation, soa_disambiguate_limited, ssp_bound};
use pcc_core::graph::{
    biclique_partition_number, bp_spectral_lower_bound, chromatic_number, star_partition, validate_biclique_family,
    FamilyMode, LabeledGraph,
};
use pcc_core::model::is_disambiguation;
use pcc_core::{Cell, Error, Limits, PartialMatrix, Pattern};
use serde_json::{json, Value};

use crate::formats::{write_graph, write_pcc};
use crate::random::{self, STAR_DENSITY};
use crate::reports::{pipeline_report, soa_report};
use crate::CliError;

pub const CHECKS: &[&str] = &[
    "fig1",
    "hrd-ld",
    "hrd-soa-vc",
    "ssp-partial",
    "vc-le-ld",
    "ld-oracle",
    "biclique-ld2",
    "chi-columns",
    "lemma-ass",
    "dual-vc",
    "gp-bp",
];

/// Expected rows of `H_{1,2}`, in generation order.
pub const H12_ROWS: [&str; 12] = [
    "11000*", "1100*0", "10100*", "1010*1", "10011*", "1001*0", "01101*", "0110*1", "0101**", "0101**", "0011**",
    "0011**",
];
/// Values the SOA assigns to the single star of each of the first eight rows.
pub const H12_SOA_FILLS: [u8; 8] = [0, 0, 1, 0, 0, 1, 1, 1];

#[derive(Debug, Clone, Default)]
pub struct VerifyParams {
    pub seed: u64,
    pub trials: Option<usize>,
    pub points: Option<usize>,
    pub concepts: Option<usize>,
    pub limits: Limits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub check_id: String,
    pub status: Status,
    pub details: Value,
    pub runtime_ms: Option<u128>,
    pub artifact: Option<PathBuf>,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "check_id": self.check_id,
            "status": self.status.as_str(),
            "details": self.details,
        });
        if let Some(ms) = self.runtime_ms {
            v["runtime_ms"] = json!(ms);
        }
        if let Some(p) = &self.artifact {
            v["counterexample"] = json!(p.display().to_string());
        }
        v
    }
}

/// Result of one check before anything is written.
pub struct Outcome {
    pub passed: bool,
    pub details: Value,
    /// File extension and contents of a counterexample, on failure.
    pub counterexample: Option<(&'static str, String)>,
}

impl Outcome {
    fn new(passed: bool, details: Value) -> Self {
        Outcome {
            passed,
            details,
            counterexample: None,
        }
    }

    fn witness(mut self, ext: &'static str, body: Option<String>) -> Self {
        if !self.passed {
            self.counterexample = body.map(|b| (ext, b));
        }
        self
    }
}

pub fn run_check(id: &str, p: &VerifyParams) -> Result<Outcome, CliError> {
    match id {
        "fig1" => h12_check(p),
        "hrd-ld" => hrd_ld(p),
        "hrd-soa-vc" => hrd_soa_vc(p),
        "ssp-partial" => ssp_partial(p),
        "vc-le-ld" => vc_le_ld(p),
        "ld-oracle" => ld_oracle(p),
        "biclique-ld2" => biclique_ld2(p),
        "chi-columns" => chi_columns(p),
        "lemma-ass" => ass_check(p),
        "dual-vc" => dual_vc(p),
        "gp-bp" => gp_bp(p),
        other => Err(CliError::Usage(format!(
            "unknown check id {other:?}; known ids: {}",
            CHECKS.join(", ")
        ))),
    }
}

/// Runs a check and writes `<out>/<id>.json`, plus
/// `<out>/<id>-counterexample.<ext>` when it fails.
pub fn cmd_verify(id: &str, p: &VerifyParams, out: &Path, timing: bool) -> Result<VerifyReport, CliError> {
    let start = Instant::now();
    let outcome = run_check(id, p)?;
    let elapsed = start.elapsed().as_millis();
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let artifact = if outcome.passed {
        None
    } else {
        let (ext, body) = outcome
            .counterexample
            .clone()
            .unwrap_or(("json", crate::reports::render(&outcome.details)));
        let path = out.join(format!("{id}-counterexample.{ext}"));
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        Some(path)
    };
    let report = VerifyReport {
        check_id: id.to_string(),
        status: if outcome.passed { Status::Pass } else { Status::Fail },
        details: outcome.details,
        runtime_ms: timing.then_some(elapsed),
        artifact,
    };
    let path = out.join(format!("{id}.json"));
    std::fs::write(&path, crate::reports::render(&report.to_json())).map_err(|e| CliError::io(&path, e))?;
    Ok(report)
}

fn hrd_pairs() -> [(usize, usize); 4] {
    [(1, 1), (1, 2), (2, 1), (2, 2)]
}

fn h12_check(p: &VerifyParams) -> Result<Outcome, CliError> {
    let m = gen_hrd(HrdParams::new(1, 2)?, &p.limits)?;
    let expected = PartialMatrix::parse_rows(&H12_ROWS)?;
    let trace = soa_disambiguate_limited(&m, None, &p.limits)?;
    let mut filled = Vec::new();
    for row in 0..8 {
        let point = (0..m.n_points()).find(|&c| m.get(row, c) == Cell::Star);
        if let Some(point) = point {
            filled.push((row, point, trace.output.get(row, point) as u8));
        }
    }
    let values: Vec<u8> = filled.iter().map(|f| f.2).collect();
    let consistent = is_disambiguation(&m, &trace.output)?.is_none();
    let passed = m == expected && values == H12_SOA_FILLS && consistent;
    let details = json!({
        "matrix_matches": m == expected,
        "filled": filled.iter().map(|&(r, c, v)| json!({"row": r + 1, "point": c + 1, "value": v})).collect::<Vec<_>>(),
        "expected": H12_SOA_FILLS,
        "is_disambiguation": consistent,
        "output": write_pcc(trace.output.as_partial()),
    });
    Ok(Outcome::new(passed, details).witness("json", Some(crate::reports::render(&soa_report(&trace)))))
}

fn hrd_ld(p: &VerifyParams) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut bad = None;
    for (r, d) in hrd_pairs() {
        let m = gen_hrd(HrdParams::new(r, d)?, &p.limits)?;
        let ld = ld_dim(&m)?;
        let ok = ld >= d as i32 && ld <= d as i32 + 1;
        if !ok && bad.is_none() {
            bad = Some(write_pcc(&m));
        }
        rows.push(json!({"r": r, "d": d, "ld": ld, "ok": ok}));
    }
    Ok(Outcome::new(bad.is_none(), json!({"instances": rows})).witness("pcc", bad))
}

fn hrd_soa_vc(p: &VerifyParams) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut bad = None;
    for (r, d) in hrd_pairs() {
        let hp = HrdParams::new(r, d)?;
        let m = gen_hrd(hp, &p.limits)?;
        let out = soa_disambiguate_limited(&m, None, &p.limits)?.output;
        let width = d * r;
        let tail: Vec<usize> = (hp.n_points() - width..hp.n_points()).collect();
        let tail_shattered = out.as_partial().restrict(&tail)?.distinct_rows() == 1 << width;
        let (vc, _) = vc_dim(out.as_partial())?;
        let rows_ok = out.distinct_rows() >= 1 << width;
        let ok = tail_shattered && vc >= width && rows_ok;
        if !ok && bad.is_none() {
            bad = Some(write_pcc(out.as_partial()));
        }
        rows.push(json!({
            "r": r,
            "d": d,
            "vc": vc,
            "tail_points": tail.iter().map(|x| x + 1).collect::<Vec<_>>(),
            "tail_shattered": tail_shattered,
            "distinct_rows": out.distinct_rows(),
            "ok": ok,
        }));
    }
    Ok(Outcome::new(bad.is_none(), json!({"instances": rows})).witness("pcc", bad))
}

/// Runs `trial` on seeded random classes and stops at the first violation.
fn random_classes(
    p: &VerifyParams,
    defaults: (usize, usize, usize),
    mut trial: impl FnMut(&PartialMatrix) -> Result<Option<Value>, CliError>,
) -> Result<Outcome, CliError> {
    let trials = p.trials.unwrap_or(defaults.0);
    let points = p.points.unwrap_or(defaults.1);
    let concepts = p.concepts.unwrap_or(defaults.2);
    let mut rng = random::generator(p.seed);
    for i in 0..trials {
        let m = random::partial_class(&mut rng, points, concepts, STAR_DENSITY);
        if let Some(why) = trial(&m)? {
            let details = json!({
                "trials": trials, "max_points": points, "max_concepts": concepts, "seed": p.seed,
                "failed_trial": i + 1, "violation": why,
            });
            return Ok(Outcome::new(false, details).witness("pcc", Some(write_pcc(&m))));
        }
    }
    Ok(Outcome::new(
        true,
        json!({"trials": trials, "max_points": points, "max_concepts": concepts, "seed": p.seed, "violations": 0}),
    ))
}

fn ssp_partial(p: &VerifyParams) -> Result<Outcome, CliError> {
    random_classes(p, (50, 10, 30), |m| {
        let trace = match soa_disambiguate_limited(m, None, &p.limits) {
            Ok(t) => t,
            Err(Error::Invariant(msg)) => return Ok(Some(json!({"progress": msg}))),
            Err(e) => return Err(e.into()),
        };
        let ld = ld_dim(m)?;
        let (vc, _) = vc_dim(m)?;
        let rows = trace.output.distinct_rows();
        let bound = ssp_bound(m.n_points(), ld);
        if rows as u128 > bound {
            return Ok(Some(
                json!({"distinct_rows": rows, "bound": bound.to_string(), "ld": ld}),
            ));
        }
        if vc as i32 > ld {
            return Ok(Some(json!({"vc": vc, "ld": ld})));
        }
        Ok(None)
    })
}

fn vc_le_ld(p: &VerifyParams) -> Result<Outcome, CliError> {
    random_classes(p, (100, 6, 16), |m| {
        let (vc, _) = vc_dim(m)?;
        let ld = ld_dim(m)?;
        Ok((vc as i32 > ld).then(|| json!({"vc": vc, "ld": ld})))
    })
}

fn ld_oracle(p: &VerifyParams) -> Result<Outcome, CliError> {
    random_classes(p, (100, 6, 16), |m| {
        let ld = ld_dim(m)?;
        let oracle = ld_dim_by_oracle(m, &p.limits)?;
        Ok((ld != oracle).then(|| json!({"ld": ld, "oracle": oracle})))
    })
}

fn dual_vc(p: &VerifyParams) -> Result<Outcome, CliError> {
    random_classes(p, (30, 8, 16), |m| {
        let r = dual_vc_check(m)?;
        Ok((!r.bound_holds).then(|| json!({"vc": r.vc, "dual_vc": r.dual_vc})))
    })
}

fn star_class(n: usize) -> Result<PartialMatrix, CliError> {
    Ok(gen_biclique_class(&LabeledGraph::complete(n), &star_partition(n))?)
}

fn biclique_ld2(_: &VerifyParams) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut bad = None;
    for n in 3..=5 {
        let m = star_class(n)?;
        let check = verify_ld_le_2(&m);
        let pattern_absent = m.contains_pattern(&Pattern::ld3_witness()).is_none();
        let ld = ld_dim(&m)?;
        let ok = check.holds() && pattern_absent && ld <= 2;
        if !ok && bad.is_none() {
            bad = Some(write_pcc(&m));
        }
        rows.push(json!({
            "graph": format!("K{n}"),
            "stars": m.star_count(),
            "pattern_absent": pattern_absent,
            "tree_oracle": check.tree_oracle,
            "ld": ld,
            "ok": ok,
        }));
    }
    Ok(Outcome::new(bad.is_none(), json!({"instances": rows})).witness("pcc", bad))
}

fn chi_columns(p: &VerifyParams) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut bad = None;
    for n in 3..=5 {
        let m = star_class(n)?;
        let chi = chromatic_number(&LabeledGraph::complete(n), &p.limits)?.chi;
        let mut completions = 0u64;
        let mut min_cols = usize::MAX;
        for_each_completion(&m, &p.limits, |t| {
            completions += 1;
            min_cols = min_cols.min(t.distinct_cols());
            if t.distinct_cols() < chi && bad.is_none() {
                bad = Some(write_pcc(t.as_partial()));
            }
            ControlFlow::Continue(())
        })?;
        let (vc_min, _) = min_vc_disambiguation(&m, &p.limits)?;
        rows.push(json!({
            "graph": format!("K{n}"),
            "chi": chi,
            "stars": m.star_count(),
            "completions": completions,
            "min_distinct_cols": min_cols,
            "vc_min": vc_min,
            "ok": min_cols >= chi,
        }));
    }
    Ok(Outcome::new(bad.is_none(), json!({"instances": rows})).witness("pcc", bad))
}

fn ass_check(p: &VerifyParams) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    let mut bad = None;
    for (name, h) in [
        ("identity-2", CommMatrix::identity(2)),
        ("equality-4", CommMatrix::identity(4)),
    ] {
        match ass_pipeline(&h, &p.limits) {
            Ok(out) => {
                let r = &out.report;
                let exact = validate_biclique_family(&out.graph, &out.partition, FamilyMode::Partition).is_ok();
                let ok = exact && r.bp_size <= r.m * r.m && r.chi_out >= ceil_sqrt(r.c) && r.chi_initial >= r.c;
                if !ok && bad.is_none() {
                    bad = Some(write_graph(&out.graph));
                }
                let mut v = pipeline_report(r);
                v["matrix"] = json!(name);
                v["partition_exact"] = json!(exact);
                v["ok"] = json!(ok);
                rows.push(v);
            }
            Err(Error::Invariant(msg)) => {
                bad.get_or_insert_with(|| crate::formats::write_comm(&h));
                rows.push(json!({"matrix": name, "ok": false, "violation": msg}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let ext = if rows.iter().any(|r| r.get("violation").is_some()) {
        "comm"
    } else {
        "graph"
    };
    Ok(Outcome::new(bad.is_none(), json!({"instances": rows})).witness(ext, bad))
}

fn gp_bp(p: &VerifyParams) -> Result<Outcome, CliError> {
    let mut complete = Vec::new();
    let mut ok = true;
    let mut bad = None;
    for n in 1..=5 {
        let g = LabeledGraph::complete(n);
        let chi = chromatic_number(&g, &p.limits)?.chi;
        let (bp, _) = biclique_partition_number(&g, &p.limits)?;
        let good = chi == n && bp == n - 1;
        ok &= good;
        complete.push(json!({"n": n, "chi": chi, "bp": bp, "ok": good}));
    }
    let trials = p.trials.unwrap_or(30);
    let max_n = p.points.unwrap_or(8);
    let mut rng = random::generator(p.seed);
    let mut random_ok = 0;
    for _ in 0..trials {
        let g = random::graph(&mut rng, max_n, 0.5);
        let bound = bp_spectral_lower_bound(&g);
        let (bp, _) = biclique_partition_number(&g, &p.limits)?;
        if bound <= bp {
            random_ok += 1;
        } else if bad.is_none() {
            ok = false;
            bad = Some(write_graph(&g));
        }
    }
    let details = json!({
        "complete": complete,
        "random": {"trials": trials, "max_n": max_n, "seed": p.seed, "bound_holds": random_ok},
    });
    Ok(Outcome::new(ok, details).witness("graph", bad))
}
