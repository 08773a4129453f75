//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use pcc::verify::{run_check, VerifyParams};
use pcc_core::comm::{
    cert_complexity, certificates_to_partition, cover_number, gadgets, lift, uc_complexity, validate_rectangles,
    BoolFunction, CommMatrix, CoverMode, GadgetPartitions, Unambiguity,
};
use pcc_core::graph::{biclique_partition_number, chromatic_number, LabeledGraph};
use pcc_core::Limits;

const H12: &str = "pcc v1 6 12
11000*
1100*0
10100*
1010*1
10011*
1001*0
01101*
0110*1
0101**
0101**
0011**
0011**
";

type Check = fn() -> Result<(), String>;

fn params() -> VerifyParams {
    VerifyParams {
        seed: 0,
        trials: None,
        points: None,
        concepts: None,
        limits: Limits::new(),
    }
}

fn checks(ids: &[&str]) -> Result<(), String> {
    for id in ids {
        let o = run_check(id, &params()).map_err(|e| format!("{id}: {e}"))?;
        if !o.passed {
            return Err(format!("{id}: {}", o.details));
        }
    }
    Ok(())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_hrd_matrix_and_fills() -> Result<(), String> {
    let bin = env!("CARGO_BIN_EXE_pcc");
    let gen = Command::new(bin)
        .args(["gen", "hrd", "--r", "1", "--d", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&gen.stdout);
    ensure(gen.status.success() && text == H12, || {
        format!("gen hrd printed:\n{text}")
    })?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let v = Command::new(bin)
        .args(["verify", "fig1", "--out"])
        .arg(dir.path())
        .output()
        .map_err(|e| e.to_string())?;
    let out = String::from_utf8_lossy(&v.stdout);
    ensure(v.status.code() == Some(0) && out == "fig1: pass\n", || {
        format!("verify fig1: {out}")
    })?;
    let report = std::fs::read_to_string(dir.path().join("fig1.json")).map_err(|e| e.to_string())?;
    let report: serde_json::Value = serde_json::from_str(&report).map_err(|e| e.to_string())?;
    let values: Vec<u64> = report["details"]["filled"]
        .as_array()
        .ok_or("no filled cells in report")?
        .iter()
        .filter_map(|c| c["value"].as_u64())
        .collect();
    ensure(values == [0, 0, 1, 0, 0, 1, 1, 1], || format!("filled {values:?}"))
}

fn c2_hrd_bounds() -> Result<(), String> {
    checks(&["hrd-ld", "hrd-soa-vc"])
}

fn c3_ssp_partial() -> Result<(), String> {
    checks(&["ssp-partial"])
}

fn c4_ld_oracle() -> Result<(), String> {
    checks(&["ld-oracle"])
}

fn c5_biclique_classes() -> Result<(), String> {
    checks(&["biclique-ld2", "chi-columns"])
}

fn c6_ass_pipeline() -> Result<(), String> {
    checks(&["lemma-ass"])
}

fn c7_certificates_and_covers() -> Result<(), String> {
    let l = Limits::new();
    let e = |e: pcc_core::Error| e.to_string();
    let and2 = BoolFunction::and(2);
    let cer = |f: &BoolFunction, b| cert_complexity(f, b, &l).map(|c| c.0).map_err(e);
    ensure(cer(&and2, false)? == 1, || "Cer0(AND2) != 1".into())?;
    ensure(cer(&and2, true)? == 2, || "Cer1(AND2) != 2".into())?;
    let parity = BoolFunction::parity(3);
    ensure(cer(&parity, false)? == 3 && cer(&parity, true)? == 3, || {
        "Cer(parity3) != 3".into()
    })?;
    let (cov, _) = cover_number(&CommMatrix::identity(2), false, CoverMode::Cover, &l).map_err(e)?;
    ensure(cov == 2, || format!("Cov0(identity-2) = {cov}"))?;

    let g = gadgets::equality(1).map_err(e)?;
    let parts = GadgetPartitions::minimal(&g, &l).map_err(e)?;
    for f in [BoolFunction::and(2), BoolFunction::or(2)] {
        let (_, fam) = uc_complexity(&f, true, Unambiguity::Partition, &l).map_err(e)?;
        let rects = certificates_to_partition(&f, &g, &fam, &parts, &l).map_err(e)?;
        let h = lift(&f, &g, &l).map_err(e)?;
        validate_rectangles(&h, true, &rects, CoverMode::Partition).map_err(e)?;
        let bound: usize = fam
            .distinct()
            .iter()
            .map(|rho| {
                rho.iter()
                    .map(|c| c.bit().map_or(1, |b| parts.get(b).len()))
                    .product::<usize>()
            })
            .sum();
        ensure(rects.len() <= bound, || {
            format!("{} rectangles, bound {bound}", rects.len())
        })?;
    }
    Ok(())
}

fn c8_graph_solvers() -> Result<(), String> {
    let l = Limits::new();
    for n in 1..=5 {
        let g = LabeledGraph::complete(n);
        let chi = chromatic_number(&g, &l).map_err(|e| e.to_string())?.chi;
        let (bp, _) = biclique_partition_number(&g, &l).map_err(|e| e.to_string())?;
        ensure(chi == n && bp == n - 1, || format!("K{n}: chi {chi}, bp {bp}"))?;
    }
    checks(&["gp-bp"])
}

fn c9_dual_vc() -> Result<(), String> {
    checks(&["dual-vc"])
}

fn main() {
    let criteria: [(&str, Check, Duration); 9] = [
        (
            "1 hrd matrix and SOA fills",
            c1_hrd_matrix_and_fills,
            Duration::from_secs(1),
        ),
        ("2 hrd dimension bounds", c2_hrd_bounds, Duration::from_secs(300)),
        ("3 partial SSP bound", c3_ssp_partial, Duration::from_secs(600)),
        ("4 LD tree oracle", c4_ld_oracle, Duration::from_secs(600)),
        ("5 biclique classes", c5_biclique_classes, Duration::from_secs(120)),
        ("6 conflict-graph pipeline", c6_ass_pipeline, Duration::from_secs(60)),
        (
            "7 certificates and covers",
            c7_certificates_and_covers,
            Duration::from_secs(60),
        ),
        ("8 graph solvers", c8_graph_solvers, Duration::from_secs(300)),
        ("9 dual VC inequality", c9_dual_vc, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        match result {
            Ok(()) if took <= budget => println!("PASS criterion {name} ({} ms)", took.as_millis()),
            Ok(()) => {
                failed += 1;
                println!(
                    "FAIL criterion {name}: took {} ms, budget {} ms",
                    took.as_millis(),
                    budget.as_millis()
                );
            }
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
