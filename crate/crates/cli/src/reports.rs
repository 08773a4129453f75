//! JSON reports. Indices in reports are 1-based, matching the file formats.

use pcc_core::comm::{AssReport, CertificateFamily, Rectangle};
use pcc_core::dimensions::{ShatteredSetWitness, ShatteredTreeWitness};
use pcc_core::disambiguation::SoaTrace;
use pcc_core::Cell;
use serde_json::{json, Map, Value};

use crate::formats::write_pcc;

pub fn vc_report(d: usize, w: &ShatteredSetWitness) -> Value {
    let realizers: Map<String, Value> = w
        .realizers
        .iter()
        .enumerate()
        .map(|(p, &row)| (w.pattern_string(p), json!(row + 1)))
        .collect();
    json!({
        "dimension": d,
        "kind": "vc",
        "points": w.points.iter().map(|p| p + 1).collect::<Vec<_>>(),
        "realizers": realizers,
    })
}

/// `points` lists the node labels breadth first (root, then `0`, `1`,
/// `00`, ...); `nodes` gives the same map keyed by node.
pub fn ld_report(d: i32, w: Option<&ShatteredTreeWitness>) -> Value {
    let Some(w) = w else {
        return json!({"dimension": d, "kind": "ld", "points": [], "realizers": {}});
    };
    let mut nodes: Vec<(&String, &usize)> = w.node_labels.iter().collect();
    nodes.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
    json!({
        "dimension": d,
        "kind": "ld",
        "points": nodes.iter().map(|(_, &p)| p + 1).collect::<Vec<_>>(),
        "realizers": w.leaf_realizers.iter().map(|(k, &r)| (k.clone(), json!(r + 1))).collect::<Map<_, _>>(),
        "nodes": nodes.iter().map(|(k, &p)| ((*k).clone(), json!(p + 1))).collect::<Map<_, _>>(),
    })
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn soa_report(trace: &SoaTrace) -> Value {
    json!({
        "order": trace.order.iter().map(|p| p + 1).collect::<Vec<_>>(),
        "steps": trace.steps.iter().map(|s| json!({
            "point": s.point + 1,
            "prefix": bits(&s.prefix),
            "chosen": s.chosen as u8,
            "reason": s.reason.as_str(),
            "ld": [s.ld_zero, s.ld_one],
            "filled": s.filled.iter().map(|r| r + 1).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "output": write_pcc(trace.output.as_partial()),
    })
}

pub fn rectangles(rects: &[Rectangle]) -> Value {
    rects
        .iter()
        .map(|r| {
            json!({
                "rows": r.rows.iter().map(|x| x + 1).collect::<Vec<_>>(),
                "cols": r.cols.iter().map(|x| x + 1).collect::<Vec<_>>(),
            })
        })
        .collect()
}

pub fn certificate_string(rho: &[Cell]) -> String {
    rho.iter().map(|c| c.to_char()).collect()
}

pub fn family_report(fam: &CertificateFamily, n: usize) -> Value {
    fam.certs
        .iter()
        .map(|(&x, rho)| (pcc_core::comm::bit_string(x, n), json!(certificate_string(rho))))
        .collect::<Map<_, _>>()
        .into()
}

pub fn pipeline_report(r: &AssReport) -> Value {
    json!({
        "c": r.c,
        "m": r.m,
        "chi_out": r.chi_out,
        "bp_size": r.bp_size,
        "branch": r.branch.as_str(),
        "chi_initial": r.chi_initial,
        "chi_h2": r.chi_h2,
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
