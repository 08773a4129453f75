use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use pcc_core::comm::{
    ass_pipeline, cert_complexity, certificates_to_partition, cover_number, lift, uc_complexity, validate_family,
    BoolFunction, CertificateFamily, CommMatrix, CoverMode, GadgetPartitions, Unambiguity,
};
use pcc_core::constructions::{gen_biclique_class, gen_hrd, verify_ld_le_2, HrdParams};
use pcc_core::dimensions::{dual_vc_check, ld_dim_with_witness, vc_dim_limited, LdSolver};
use pcc_core::disambiguation::{growth_profile, min_vc_disambiguation, soa_disambiguate_limited};
use pcc_core::graph::{
    biclique_partition_number, bp_spectral_lower_bound, chromatic_number, validate_biclique_family, FamilyMode,
    LabeledGraph, OrientedBiclique,
};
use pcc_core::model::is_disambiguation;
use pcc_core::{Cell, Limits, PartialMatrix, Pattern};
use serde_json::{json, Value};

use crate::formats::{self, Document};
use crate::reports::{self, render};
use crate::verify::{self, Status, VerifyParams};
use crate::{random, CliError};

/// Environment variable capping search nodes per solver call.
pub const MAX_WORK_ENV: &str = "PCC_MAX_WORK";

#[derive(Debug, Parser)]
#[command(
    name = "pcc",
    version,
    about = "Exact tools for partial concept classes, biclique partitions and rectangle covers"
)]
struct Cli {
    /// Lift every size guard.
    #[arg(long, global = true)]
    force: bool,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Add `runtime_ms` to verify reports (makes them run-dependent).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate classes and instances
    #[command(subcommand)]
    Gen(Gen),
    /// VC and Littlestone dimension with witnesses
    Dim {
        #[arg(value_enum)]
        kind: DimKind,
        file: PathBuf,
    },
    /// SOA, minimum-VC disambiguation, growth profiles
    #[command(subcommand)]
    Disambiguate(Disambiguate),
    /// Restriction, duality, pattern search, disambiguation checks
    #[command(subcommand)]
    Matrix(MatrixCmd),
    /// Chromatic number, biclique partitions, family validation
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Certificates and rectangle covers
    #[command(subcommand)]
    Comm(CommCmd),
    /// Compose a Boolean function with a gadget
    Lift {
        #[arg(long = "f")]
        function: PathBuf,
        #[arg(long)]
        gadget: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Conflict-graph pipeline on a communication matrix
    #[command(subcommand)]
    Ass(AssCmd),
    /// Run desk-scale checks (all of them when no id is given)
    Verify(VerifyArgs),
    /// Convert between file formats
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// The class H_{r,d}
    Hrd {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        out: Output,
    },
    /// One concept per biclique of a partition
    BicliqueClass {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Random partial class
    Random {
        #[arg(long)]
        points: usize,
        #[arg(long)]
        concepts: usize,
        #[arg(long, default_value_t = random::STAR_DENSITY)]
        density: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Random graph G(n, p) with exactly n vertices
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DimKind {
    Vc,
    Ld,
    DualVc,
}

#[derive(Debug, Subcommand)]
enum Disambiguate {
    /// Standard Optimal Algorithm, with its trace
    Soa {
        file: PathBuf,
        /// Point order, 1-based and comma separated.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Also write the output matrix here.
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Minimum VC over all completions
    MinVc {
        file: PathBuf,
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Largest SOA output on k-point restrictions
    Growth {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum MatrixCmd {
    /// Transpose
    Dual {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Keep the listed points (1-based), in the given order
    Restrict {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        points: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Order-preserving submatrix search; pattern rows separated by commas
    Pattern {
        file: PathBuf,
        #[arg(long, default_value = "10,10")]
        rows: String,
    },
    /// Is TOTAL a disambiguation of FILE?
    Check {
        file: PathBuf,
        #[arg(long)]
        total: PathBuf,
    },
    /// Shape, stars, distinct rows and columns
    Stats { file: PathBuf },
    /// LD <= 2 certificate (pattern absence, tree oracle when small)
    LdLe2 { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum GraphCmd {
    Chi {
        file: PathBuf,
    },
    Bp {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    BpBound {
        file: PathBuf,
    },
    /// Check a bcp family against a graph
    Validate {
        file: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_enum, default_value = "partition")]
        mode: Mode,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Partition,
    Cover,
    CoverLe2,
}

#[derive(Debug, Subcommand)]
enum CommCmd {
    /// Cov_b, or UCov_b with --partition
    Cov {
        file: PathBuf,
        #[arg(long, value_parser = bit, action = ArgAction::Set)]
        b: bool,
        #[arg(long)]
        partition: bool,
    },
    /// Cer_b
    Cert {
        file: PathBuf,
        #[arg(long, value_parser = bit, action = ArgAction::Set)]
        b: bool,
    },
    /// UC_b, or validation of a given family
    Uc {
        file: PathBuf,
        #[arg(long, value_parser = bit, action = ArgAction::Set)]
        b: bool,
        /// Only require pairwise distinct certificates.
        #[arg(long)]
        distinct: bool,
        /// Validate this family (JSON with a `certificates` map) instead of searching.
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// b-partition of f o g^n from a certificate family
    LiftPartition {
        #[arg(long = "f")]
        function: PathBuf,
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long, value_parser = bit, action = ArgAction::Set)]
        b: bool,
        /// Certificate family (JSON); defaults to the one found by `uc`.
        #[arg(long)]
        family: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum AssCmd {
    Pipeline {
        file: PathBuf,
        #[arg(long)]
        graph_out: Option<PathBuf>,
        #[arg(long)]
        partition_out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct VerifyArgs {
    ids: Vec<String>,
    /// Directory for reports and counterexamples.
    #[arg(long, default_value = "pcc-verify")]
    out: PathBuf,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    concepts: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Pcc,
    Comm,
    Graph,
    Dot,
    Json,
}

fn bit(s: &str) -> Result<bool, String> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(format!("expected 0 or 1, got {s:?}")),
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pcc: {e}");
            e.exit_code()
        }
    }
}

fn limits(force: bool) -> Result<Limits, CliError> {
    let mut l = if force { Limits::forced() } else { Limits::new() };
    if let Ok(v) = std::env::var(MAX_WORK_ENV) {
        let cap = v
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("{MAX_WORK_ENV} must be a non-negative integer, got {v:?}")))?;
        l = l.with_max_work(cap);
    }
    Ok(l)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn parsed<T>(path: &Path, f: impl Fn(&str) -> Result<T, formats::FormatError>) -> Result<T, CliError> {
    f(&read(path)?).map_err(|source| CliError::Format {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn emit_json(v: &Value) -> Result<(), CliError> {
    emit(None, &render(v))
}

fn one_based(indices: &[usize], len: usize) -> Result<Vec<usize>, CliError> {
    indices
        .iter()
        .map(|&i| {
            if (1..=len).contains(&i) {
                Ok(i - 1)
            } else {
                Err(CliError::Usage(format!("index {i} out of range 1..={len}")))
            }
        })
        .collect()
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let l = limits(cli.force)?;
    match cli.command {
        Command::Gen(g) => gen(g, &l, cli.seed),
        Command::Dim { kind, file } => dim(kind, &file, &l),
        Command::Disambiguate(d) => disambiguate(d, &l, cli.seed),
        Command::Matrix(m) => matrix(m),
        Command::Graph(g) => graph(g, &l),
        Command::Comm(c) => comm(c, &l),
        Command::Lift { function, gadget, out } => {
            let f = parsed(&function, formats::parse_bf)?;
            let g = parsed(&gadget, formats::parse_comm)?;
            emit(out.output.as_deref(), &formats::write_comm(&lift(&f, &g, &l)?))?;
            Ok(0)
        }
        Command::Ass(AssCmd::Pipeline {
            file,
            graph_out,
            partition_out,
        }) => {
            let h = parsed(&file, formats::parse_comm)?;
            let out = ass_pipeline(&h, &l)?;
            if let Some(p) = graph_out {
                emit(Some(&p), &formats::write_graph(&out.graph))?;
            }
            if let Some(p) = partition_out {
                emit(Some(&p), &formats::write_bcp(out.graph.n(), &out.partition))?;
            }
            emit_json(&reports::pipeline_report(&out.report))?;
            Ok(0)
        }
        Command::Verify(v) => {
            let ids: Vec<String> = if v.ids.is_empty() {
                verify::CHECKS.iter().map(|s| s.to_string()).collect()
            } else {
                v.ids
            };
            let params = VerifyParams {
                seed: cli.seed,
                trials: v.trials,
                points: v.points,
                concepts: v.concepts,
                limits: l,
            };
            let mut failed = false;
            for id in &ids {
                let report = verify::cmd_verify(id, &params, &v.out, cli.timing)?;
                failed |= report.status == Status::Fail;
                let mut line = format!("{}: {}", report.check_id, report.status.as_str());
                if let Some(p) = &report.artifact {
                    line.push_str(&format!(" (counterexample: {})", p.display()));
                }
                emit(None, &format!("{line}\n"))?;
            }
            Ok(failed as i32)
        }
        Command::Convert { input, to, out } => {
            let doc = parsed(&input, formats::parse_any)?;
            let text = convert(doc, to)?;
            emit(out.output.as_deref(), &text)?;
            Ok(0)
        }
    }
}

fn gen(g: Gen, l: &Limits, seed: u64) -> Result<i32, CliError> {
    match g {
        Gen::Hrd { r, d, out } => {
            let m = gen_hrd(HrdParams::new(r, d)?, l)?;
            emit(out.output.as_deref(), &formats::write_pcc(&m))?;
        }
        Gen::BicliqueClass { graph, partition, out } => {
            let g = parsed(&graph, formats::parse_graph)?;
            let (n, family) = parsed(&partition, formats::parse_bcp)?;
            if n != g.n() {
                return Err(CliError::Usage(format!(
                    "partition is over {n} vertices, graph has {}",
                    g.n()
                )));
            }
            emit(
                out.output.as_deref(),
                &formats::write_pcc(&gen_biclique_class(&g, &family)?),
            )?;
        }
        Gen::Random {
            points,
            concepts,
            density,
            out,
        } => {
            if points == 0 || concepts == 0 || !(0.0..=1.0).contains(&density) {
                return Err(CliError::Usage(
                    "need points, concepts >= 1 and density in [0, 1]".into(),
                ));
            }
            let mut rng = random::generator(seed);
            let m = fixed_shape(points, concepts, &mut rng, density);
            emit(out.output.as_deref(), &formats::write_pcc(&m))?;
        }
        Gen::Graph { n, p, out } => {
            if n == 0 || !(0.0..=1.0).contains(&p) {
                return Err(CliError::Usage("need n >= 1 and p in [0, 1]".into()));
            }
            let mut rng = random::generator(seed);
            let mut g = LabeledGraph::new(n);
            use rand::Rng;
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v)?;
                    }
                }
            }
            emit(out.output.as_deref(), &formats::write_graph(&g))?;
        }
    }
    Ok(0)
}

/// A random class of exactly `points x concepts`.
fn fixed_shape(points: usize, concepts: usize, rng: &mut random::Generator, density: f64) -> PartialMatrix {
    use rand::Rng;
    let rows = (0..concepts)
        .map(|_| {
            (0..points)
                .map(|_| {
                    if rng.gen_bool(density) {
                        Cell::Star
                    } else {
                        Cell::from_bit(rng.gen_bool(0.5))
                    }
                })
                .collect()
        })
        .collect();
    PartialMatrix::new(points, rows).expect("rows have the requested width")
}

fn dim(kind: DimKind, file: &Path, l: &Limits) -> Result<i32, CliError> {
    let m = parsed(file, formats::parse_pcc)?;
    let v = match kind {
        DimKind::Vc => {
            let (d, w) = vc_dim_limited(&m, l)?;
            reports::vc_report(d, &w)
        }
        DimKind::Ld => {
            let (d, w) = if l.max_work.is_some() || l.force {
                LdSolver::new(l).witness(&m)?
            } else {
                ld_dim_with_witness(&m)?
            };
            reports::ld_report(d, w.as_ref())
        }
        DimKind::DualVc => {
            let r = dual_vc_check(&m)?;
            json!({"vc": r.vc, "dual_vc": r.dual_vc, "bound": (1u128 << (r.vc + 1)) - 1, "bound_holds": r.bound_holds})
        }
    };
    emit_json(&v)?;
    Ok(0)
}

fn disambiguate(d: Disambiguate, l: &Limits, seed: u64) -> Result<i32, CliError> {
    match d {
        Disambiguate::Soa { file, order, write } => {
            let m = parsed(&file, formats::parse_pcc)?;
            let order = order.map(|o| one_based(&o, m.n_points())).transpose()?;
            let trace = soa_disambiguate_limited(&m, order.as_deref(), l)?;
            if let Some(p) = write {
                emit(Some(&p), &formats::write_pcc(trace.output.as_partial()))?;
            }
            emit_json(&reports::soa_report(&trace))?;
        }
        Disambiguate::MinVc { file, write } => {
            let m = parsed(&file, formats::parse_pcc)?;
            let (vc, t) = min_vc_disambiguation(&m, l)?;
            if let Some(p) = write {
                emit(Some(&p), &formats::write_pcc(t.as_partial()))?;
            }
            emit_json(&json!({"vc_min": vc, "output": formats::write_pcc(t.as_partial())}))?;
        }
        Disambiguate::Growth { file, sizes } => {
            let m = parsed(&file, formats::parse_pcc)?;
            if let Some(&k) = sizes.iter().find(|&&k| k > m.n_points()) {
                return Err(CliError::Usage(format!("size {k} exceeds {} points", m.n_points())));
            }
            let profile = growth_profile(&m, &sizes, seed)?;
            let v: Vec<Value> = profile
                .iter()
                .map(|&(k, c)| json!({"k": k, "max_distinct_rows": c}))
                .collect();
            emit_json(&json!({"seed": seed, "profile": v}))?;
        }
    }
    Ok(0)
}

fn matrix(cmd: MatrixCmd) -> Result<i32, CliError> {
    match cmd {
        MatrixCmd::Dual { file, out } => {
            let m = parsed(&file, formats::parse_pcc)?;
            emit(out.output.as_deref(), &formats::write_pcc(&m.dual()))?;
        }
        MatrixCmd::Restrict { file, points, out } => {
            let m = parsed(&file, formats::parse_pcc)?;
            let pts = one_based(&points, m.n_points())?;
            emit(out.output.as_deref(), &formats::write_pcc(&m.restrict(&pts)?))?;
        }
        MatrixCmd::Pattern { file, rows } => {
            let m = parsed(&file, formats::parse_pcc)?;
            let cells = rows
                .split(',')
                .map(|r| r.chars().map(|c| bit(&c.to_string())).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::Usage)?;
            let p = Pattern::new(cells)?;
            let v = match m.contains_pattern(&p) {
                Some((r, c)) => json!({
                    "contains": true,
                    "rows": r.iter().map(|x| x + 1).collect::<Vec<_>>(),
                    "cols": c.iter().map(|x| x + 1).collect::<Vec<_>>(),
                }),
                None => json!({"contains": false}),
            };
            emit_json(&v)?;
        }
        MatrixCmd::Check { file, total } => {
            let m = parsed(&file, formats::parse_pcc)?;
            let t = parsed(&total, formats::parse_total)?;
            let v = is_disambiguation(&m, &t)?;
            let report = match v {
                None => json!({"is_disambiguation": true}),
                Some(v) => json!({"is_disambiguation": false, "concept": v.concept + 1, "point": v.point + 1}),
            };
            emit_json(&report)?;
            return Ok(v.is_some() as i32);
        }
        MatrixCmd::Stats { file } => {
            let m = parsed(&file, formats::parse_pcc)?;
            let mut v = json!({
                "points": m.n_points(),
                "concepts": m.n_concepts(),
                "stars": m.star_count(),
                "distinct_rows": m.distinct_rows(),
                "distinct_cols": m.distinct_cols(),
            });
            v["total"] = json!(m.is_total());
            emit_json(&v)?;
        }
        MatrixCmd::LdLe2 { file } => {
            let m = parsed(&file, formats::parse_pcc)?;
            let c = verify_ld_le_2(&m);
            emit_json(&json!({"pattern_free": c.pattern_free, "tree_oracle": c.tree_oracle, "holds": c.holds()}))?;
            return Ok(!c.holds() as i32);
        }
    }
    Ok(0)
}

fn graph(cmd: GraphCmd, l: &Limits) -> Result<i32, CliError> {
    match cmd {
        GraphCmd::Chi { file } => {
            let g = parsed(&file, formats::parse_graph)?;
            let c = chromatic_number(&g, l)?;
            emit_json(&json!({"chi": c.chi, "colors": c.colors.iter().map(|x| x + 1).collect::<Vec<_>>()}))?;
        }
        GraphCmd::Bp { file, out } => {
            let g = parsed(&file, formats::parse_graph)?;
            let (bp, family) = biclique_partition_number(&g, l)?;
            match out.output {
                Some(p) => {
                    emit(Some(&p), &formats::write_bcp(g.n(), &family))?;
                    emit_json(&json!({"bp": bp, "spectral_bound": bp_spectral_lower_bound(&g)}))?;
                }
                None => emit_json(&json!({
                    "bp": bp,
                    "spectral_bound": bp_spectral_lower_bound(&g),
                    "bicliques": family.iter().map(formats::biclique_json).collect::<Vec<_>>(),
                }))?,
            }
        }
        GraphCmd::BpBound { file } => {
            let g = parsed(&file, formats::parse_graph)?;
            emit_json(&json!({"spectral_bound": bp_spectral_lower_bound(&g)}))?;
        }
        GraphCmd::Validate { file, family, mode } => {
            let g = parsed(&file, formats::parse_graph)?;
            let (n, fam) = parsed(&family, formats::parse_bcp)?;
            if n != g.n() {
                return Err(CliError::Usage(format!(
                    "family is over {n} vertices, graph has {}",
                    g.n()
                )));
            }
            let mode = match mode {
                Mode::Partition => FamilyMode::Partition,
                Mode::Cover => FamilyMode::Cover,
                Mode::CoverLe2 => FamilyMode::CoverAtMostTwice,
            };
            return Ok(match validate_biclique_family(&g, &fam, mode) {
                Ok(()) => {
                    emit_json(&json!({"valid": true}))?;
                    0
                }
                Err(v) => {
                    emit_json(&json!({"valid": false, "violation": v.to_string()}))?;
                    1
                }
            });
        }
    }
    Ok(0)
}

fn read_family(path: &Path, f: &BoolFunction, b: bool) -> Result<CertificateFamily, CliError> {
    let bad = |msg: String| CliError::Format {
        path: path.display().to_string(),
        source: formats::FormatError { line: 1, message: msg },
    };
    let v: Value = serde_json::from_str(&read(path)?).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    let map = v
        .get("certificates")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing \"certificates\" object".into()))?;
    let mut certs = std::collections::BTreeMap::new();
    for (input, rho) in map {
        if input.len() != f.n() || !input.chars().all(|c| c == '0' || c == '1') {
            return Err(bad(format!("input {input:?} is not a {}-bit string", f.n())));
        }
        let x = usize::from_str_radix(input, 2).expect("checked digits");
        let rho: Vec<Cell> = rho
            .as_str()
            .ok_or_else(|| bad(format!("certificate for {input} is not a string")))?
            .chars()
            .map(|c| Cell::from_char(c).ok_or_else(|| bad(format!("bad certificate character {c:?}"))))
            .collect::<Result<_, _>>()?;
        certs.insert(x, rho);
    }
    Ok(CertificateFamily { b, certs })
}

fn comm(cmd: CommCmd, l: &Limits) -> Result<i32, CliError> {
    match cmd {
        CommCmd::Cov { file, b, partition } => {
            let h = parsed(&file, formats::parse_comm)?;
            let mode = if partition {
                CoverMode::Partition
            } else {
                CoverMode::Cover
            };
            let (k, rects) = cover_number(&h, b, mode, l)?;
            emit_json(&json!({
                "b": b as u8,
                "mode": if partition { "partition" } else { "cover" },
                "count": k,
                "rectangles": reports::rectangles(&rects),
            }))?;
        }
        CommCmd::Cert { file, b } => {
            let f = parsed(&file, formats::parse_bf)?;
            let (c, worst) = cert_complexity(&f, b, l)?;
            emit_json(&json!({
                "b": b as u8,
                "cer": c,
                "worst_input": worst.map(|x| pcc_core::comm::bit_string(x, f.n())),
            }))?;
        }
        CommCmd::Uc {
            file,
            b,
            distinct,
            family,
        } => {
            let f = parsed(&file, formats::parse_bf)?;
            let mode = if distinct {
                Unambiguity::Distinct
            } else {
                Unambiguity::Partition
            };
            let name = if distinct { "distinct" } else { "partition" };
            let (k, fam) = match family {
                Some(p) => {
                    let fam = read_family(&p, &f, b)?;
                    (validate_family(&f, &fam, mode)?, fam)
                }
                None => uc_complexity(&f, b, mode, l)?,
            };
            emit_json(&json!({
                "b": b as u8,
                "mode": name,
                "uc": k,
                "certificates": reports::family_report(&fam, f.n()),
            }))?;
        }
        CommCmd::LiftPartition {
            function,
            gadget,
            b,
            family,
        } => {
            let f = parsed(&function, formats::parse_bf)?;
            let g = parsed(&gadget, formats::parse_comm)?;
            let fam = match family {
                Some(p) => read_family(&p, &f, b)?,
                None => uc_complexity(&f, b, Unambiguity::Partition, l)?.1,
            };
            let parts = GadgetPartitions::minimal(&g, l)?;
            let rects = certificates_to_partition(&f, &g, &fam, &parts, l)?;
            let bound: usize = fam
                .distinct()
                .iter()
                .map(|rho| {
                    rho.iter()
                        .map(|c| c.bit().map_or(1, |v| parts.get(v).len()))
                        .product::<usize>()
                })
                .sum();
            emit_json(&json!({
                "b": b as u8,
                "count": rects.len(),
                "bound": bound,
                "rectangles": reports::rectangles(&rects),
            }))?;
        }
    }
    Ok(0)
}

fn convert(doc: Document, to: Target) -> Result<String, CliError> {
    let mismatch = |what: &str| CliError::Usage(format!("cannot convert {what}"));
    Ok(match (doc, to) {
        (doc, Target::Json) => render(&formats::to_json(&doc)),
        (Document::Pcc(m), Target::Pcc) => formats::write_pcc(&m),
        (Document::Comm(h), Target::Comm) => formats::write_comm(&h),
        (Document::Graph(g), Target::Graph) => formats::write_graph(&g),
        (Document::Graph(g), Target::Dot) => formats::write_dot(&g),
        (Document::Comm(h), Target::Pcc) => {
            let rows: Vec<String> = h.to_string().lines().map(String::from).collect();
            let mut m = PartialMatrix::parse_rows(&rows)?;
            if h.rows() == 0 {
                m = PartialMatrix::empty(h.cols());
            }
            formats::write_pcc(&m)
        }
        (Document::Pcc(m), Target::Comm) => {
            if !m.is_total() {
                return Err(mismatch("a matrix with stars to comm"));
            }
            let cells = m.rows().iter().flatten().map(|c| c.bit() == Some(true)).collect();
            formats::write_comm(&CommMatrix::new(m.n_concepts(), m.n_points(), cells)?)
        }
        (Document::Bcp(n, family), Target::Graph | Target::Dot) => {
            let g = union_graph(n, &family)?;
            if matches!(to, Target::Dot) {
                formats::write_dot(&g)
            } else {
                formats::write_graph(&g)
            }
        }
        (Document::Bf(f), Target::Pcc) => {
            let row: String = f.table().iter().map(|&b| if b { '1' } else { '0' }).collect();
            formats::write_pcc(&PartialMatrix::parse_rows(&[row])?)
        }
        (_, _) => return Err(mismatch("between these formats")),
    })
}

/// The graph whose edges are those of a partition.
fn union_graph(n: usize, family: &[OrientedBiclique]) -> Result<LabeledGraph, CliError> {
    let mut g = LabeledGraph::new(n);
    for b in family {
        for &u in &b.left {
            for &v in &b.right {
                if !g.add_edge(u, v)? {
                    return Err(CliError::Usage(format!("edge {{{}, {}}} appears twice", u + 1, v + 1)));
                }
            }
        }
    }
    Ok(g)
}
