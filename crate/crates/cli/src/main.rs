//! Command-line front end. Every command prints one JSON report on stdout.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 when two independent
//! computations disagree.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;
use trivector::acceptance::{run_criterion, CRITERIA};
use trivector::e8::{restricted_power, three_rank};
use trivector::flags::{chern_top_class, flag_compatible, flag_search, DEFAULT_FLAG_BUDGET};
use trivector::heisenberg::heisenberg_invariants;
use trivector::json as fmt;
use trivector::loci::{
    cubic_of_y, enumerate_rank_locus, reconstruct_from_pencil, verify_curve_embedding, DEFAULT_POINT_BUDGET,
};
use trivector::stability::{destabilizer_search, DEFAULT_BUDGET};
use trivector::trivector::{build_gamma_c, CurveCoeffs, Trivector};
use trivector::{AnyField, Error, Field, FieldSpec, Gf, Result};

#[derive(Parser)]
#[command(name = "trivector", version, about = "Exact computations with trivectors in 9 dimensions")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on enumeration sizes; each command has its own default.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads for the parallel kernels.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// Destabilizer search.
    Stability {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_ext: u32,
    },
    #[command(subcommand)]
    Loci(LociCmd),
    #[command(subcommand)]
    Char3(Char3Cmd),
    #[command(subcommand)]
    Flags(FlagsCmd),
    #[command(subcommand)]
    Heisenberg(HeisenbergCmd),
    /// Runs the acceptance suite.
    Selftest {
        /// Criteria to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of embedding it in the report.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GammaCmd {
    /// Builds the normal form from curve coefficients.
    Build {
        #[arg(long)]
        field: String,
        /// Coefficient assignments such as `c15=1`.
        #[arg(long = "set", value_name = "cK=V")]
        set: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Applies a matrix to a trivector.
    Act {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum LociCmd {
    /// Counts points of `P⁸(F_q)` by the rank of `Φ`.
    Count {
        #[arg(long)]
        gamma: PathBuf,
        /// Order of an extension of the trivector's field.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        max_rank: Option<usize>,
        /// Write the points of rank ≤ max-rank here.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Interpolates the cubic through the rank-≤6 locus.
    Cubic {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 3)]
        max_ext: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Checks the explicit embedding of the curve into the rank-4 locus.
    CheckEmbedding {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        q: Option<u64>,
    },
    /// Recovers a trivector from its pencil.
    Reconstruct {
        #[arg(long)]
        pencil: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum Char3Cmd {
    /// Restricted power of a trivector, as a 9×9 matrix mod scalars.
    Power {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long, value_parser = ["3", "9", "27"])]
        exp: String,
    },
    /// 3-rank of the Jacobian of a Weierstrass curve.
    Rank {
        #[arg(long)]
        curve: PathBuf,
    },
}

#[derive(Subcommand)]
enum FlagsCmd {
    /// Tests a flag for compatibility.
    Check {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        flag: PathBuf,
    },
    /// Searches compatible flags over extensions.
    Search {
        #[arg(long)]
        gamma: PathBuf,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 1)]
        max_ext: u32,
    },
    /// Top Chern class of the obstruction bundle.
    Chern,
}

#[derive(Subcommand)]
enum HeisenbergCmd {
    /// Basis of the Heisenberg-invariant trivectors.
    Invariants {
        #[arg(long)]
        field: String,
    },
}

macro_rules! with_field {
    ($any:expr, $f:ident => $body:expr) => {
        match $any {
            AnyField::Q($f) => $body,
            AnyField::Gf($f) => $body,
        }
    };
}

/// Collects input digests while reading files.
#[derive(Default)]
struct Inputs(BTreeMap<String, String>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String> {
        let text = std::fs::read_to_string(path)?;
        self.0.insert(path.display().to_string(), hex::encode(Sha256::digest(text.as_bytes())));
        Ok(text)
    }
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Writes `v` to the output file if one was given, otherwise returns it
/// for inclusion in the verdict.
fn emit(out: &Output, key: &str, v: Value, verdict: &mut Map<String, Value>) -> Result<()> {
    match &out.output {
        Some(p) => {
            write_json(p, &v)?;
            verdict.insert("output".into(), json!(p.display().to_string()));
        }
        None => {
            verdict.insert(key.into(), v);
        }
    }
    Ok(())
}

fn finite_trivector(text: &str) -> Result<Trivector<Gf>> {
    let field = fmt::field_of(text)?;
    fmt::trivector_from_json(field.as_finite()?, text)
}

fn finite_curve(text: &str) -> Result<CurveCoeffs<Gf>> {
    let field = fmt::field_of(text)?;
    fmt::curve_from_json(field.as_finite()?, text)
}

/// Moves `t` to `GF(q)`, which must contain its field.
fn extend_to(t: Trivector<Gf>, q: Option<u64>) -> Result<Trivector<Gf>> {
    let Some(q) = q else { return Ok(t) };
    let base = &t.field;
    let target = FieldSpec::finite(q)?;
    if target.p() != base.p() || target.degree() % base.degree() != 0 {
        return Err(Error::InvalidField(format!("GF({q}) does not contain {}", base.spec())));
    }
    if target.degree() == base.degree() {
        return Ok(t);
    }
    let (big, emb) = base.extension(target.degree() / base.degree())?;
    Ok(Trivector::from_dense(big, t.dense().iter().map(|&a| emb.apply(a)).collect()))
}

fn parse_assignment<F: Field>(field: &F, s: &str) -> Result<(u32, F::Elem)> {
    let bad = || Error::Parse(format!("expected cK=V, got {s:?}"));
    let (k, v) = s.split_once('=').ok_or_else(bad)?;
    let key: u32 = k.trim().strip_prefix('c').ok_or_else(bad)?.parse().map_err(|_| bad())?;
    Ok((key, field.parse_elem(v)?))
}

fn gamma_build<F: Field>(field: F, set: &[String], out: &Output, verdict: &mut Map<String, Value>) -> Result<()> {
    let mut c = CurveCoeffs::zero(field.clone());
    for s in set {
        let (k, v) = parse_assignment(&field, s)?;
        c.set(k, v)?;
    }
    let t = build_gamma_c(&c);
    verdict.insert("terms".into(), json!(t.num_terms()));
    emit(out, "gamma", fmt::trivector_to_json(&t), verdict)
}

fn gamma_act<F: Field>(field: F, gamma: &str, matrix: &str, out: &Output, verdict: &mut Map<String, Value>) -> Result<()> {
    let t = fmt::trivector_from_json(&field, gamma)?;
    let g = fmt::matrix_from_json(&field, matrix)?;
    let r = t.gl_act(&g)?;
    verdict.insert("terms".into(), json!(r.num_terms()));
    emit(out, "gamma", fmt::trivector_to_json(&r), verdict)
}

fn flags_check<F: Field>(field: F, gamma: &str, flag: &str, verdict: &mut Map<String, Value>) -> Result<()> {
    let t = fmt::trivector_from_json(&field, gamma)?;
    let flag = fmt::flag_from_json(&field, flag)?;
    let r = flag_compatible(&t, &flag)?;
    let violated: Vec<Value> = r
        .violated
        .iter()
        .map(|(ijk, c)| json!({"ijk": ijk, "c": field.format_elem(c)}))
        .collect();
    verdict.insert("compatible".into(), json!(r.compatible));
    verdict.insert("violated".into(), json!(violated));
    Ok(())
}

/// Runs a command; the boolean is false when the command completed but
/// reports a failure (selftest).
fn run(cli: &Cli, inputs: &mut Inputs) -> Result<(String, Value, bool)> {
    let mut v = Map::new();
    let mut ok = true;
    let name = match &cli.command {
        Command::Gamma(GammaCmd::Build { field, set, out }) => {
            with_field!(AnyField::parse(field)?, f => gamma_build(f, set, out, &mut v)?);
            "gamma build"
        }
        Command::Gamma(GammaCmd::Act { gamma, matrix, out }) => {
            let (gt, mt) = (inputs.read(gamma)?, inputs.read(matrix)?);
            with_field!(fmt::field_of(&gt)?, f => gamma_act(f, &gt, &mt, out, &mut v)?);
            "gamma act"
        }
        Command::Stability { gamma, max_ext } => {
            let t = finite_trivector(&inputs.read(gamma)?)?;
            let r = destabilizer_search(&t, *max_ext, cli.budget.unwrap_or(DEFAULT_BUDGET))?;
            v.insert("status".into(), json!(r.status));
            v.insert("certified".into(), json!(r.certified));
            v.insert("searched_ext_degree".into(), json!(r.searched_ext_degree));
            v.insert("subspaces_covered".into(), json!(r.subspaces_covered.map(|n| n.to_string())));
            let witness = r.witness.map(|w| json!({"U": fmt::matrix_to_json(&w.u), "U_perp": fmt::matrix_to_json(&w.w)}));
            v.insert("witness".into(), json!(witness));
            "stability"
        }
        Command::Loci(LociCmd::Count { gamma, q, max_rank, points }) => {
            let t = extend_to(finite_trivector(&inputs.read(gamma)?)?, *q)?;
            let want = if points.is_some() { Some(max_rank.unwrap_or(4)) } else { None };
            let r = enumerate_rank_locus(&t, want, cli.budget.unwrap_or(DEFAULT_POINT_BUDGET))?;
            v.insert("field".into(), json!(t.field.spec().to_string()));
            let by_rank: Map<String, Value> = [0, 2, 4, 6, 8].iter().zip(r.counts).map(|(k, n)| (k.to_string(), json!(n))).collect();
            v.insert("counts".into(), Value::Object(by_rank));
            if let Some(m) = max_rank {
                v.insert("at_most".into(), json!({"rank": m, "count": r.count_at_most(*m)}));
            }
            if let (Some(p), Some(pts)) = (points, r.points) {
                let f = &t.field;
                let rows: Vec<Vec<String>> = pts.iter().map(|x| x.iter().map(|a| f.format_elem(a)).collect()).collect();
                write_json(p, &json!({"field": f.spec().to_string(), "points": rows}))?;
                v.insert("points".into(), json!(p.display().to_string()));
            }
            "loci count"
        }
        Command::Loci(LociCmd::Cubic { gamma, q, max_ext, out }) => {
            let t = extend_to(finite_trivector(&inputs.read(gamma)?)?, *q)?;
            let s = cubic_of_y(&t, *max_ext, cli.budget.unwrap_or(DEFAULT_POINT_BUDGET))?;
            v.insert("kernel_dim".into(), json!(s.kernel_dim));
            v.insert("ext_degree".into(), json!(s.ext_degree));
            v.insert("sample_points".into(), json!(s.sample_points));
            emit(out, "cubic", fmt::cubic_to_json(&s.cubic), &mut v)?;
            "loci cubic"
        }
        Command::Loci(LociCmd::CheckEmbedding { curve, q }) => {
            let c = finite_curve(&inputs.read(curve)?)?;
            if let Some(q) = q {
                if *q != c.field.q() {
                    return Err(Error::FieldMismatch);
                }
            }
            let cert = verify_curve_embedding(&c)?;
            v.insert("passed".into(), json!(cert.passed()));
            v.insert("points_checked".into(), json!(cert.points_checked));
            v.insert("weierstrass_rank".into(), json!(cert.weierstrass_rank));
            let failure = cert.failure.map(|(x, z, check)| {
                json!({"x": c.field.format_elem(&x), "z": c.field.format_elem(&z), "check": check})
            });
            v.insert("failure".into(), json!(failure));
            "loci check-embedding"
        }
        Command::Loci(LociCmd::Reconstruct { pencil, out }) => {
            let text = inputs.read(pencil)?;
            let field = fmt::field_of(&text)?;
            let w = fmt::pencil_from_json(field.as_finite()?, &text)?;
            let t = reconstruct_from_pencil(&w, cli.seed)?;
            emit(out, "gamma", fmt::trivector_to_json(&t), &mut v)?;
            "loci reconstruct"
        }
        Command::Char3(Char3Cmd::Power { gamma, exp }) => {
            let t = finite_trivector(&inputs.read(gamma)?)?;
            let m = restricted_power(&t, exp.parse().expect("validated by clap"))?;
            v.insert("matrix".into(), fmt::matrix_to_json(&m));
            "char3 power"
        }
        Command::Char3(Char3Cmd::Rank { curve }) => {
            let c = finite_curve(&inputs.read(curve)?)?;
            let r = three_rank(&c)?;
            v.insert("lie".into(), json!(r.lie));
            v.insert("coeff".into(), json!(r.coeff));
            "char3 rank"
        }
        Command::Flags(FlagsCmd::Check { gamma, flag }) => {
            let (gt, ft) = (inputs.read(gamma)?, inputs.read(flag)?);
            with_field!(fmt::field_of(&gt)?, f => flags_check(f, &gt, &ft, &mut v)?);
            "flags check"
        }
        Command::Flags(FlagsCmd::Search { gamma, q, max_ext }) => {
            let t = extend_to(finite_trivector(&inputs.read(gamma)?)?, *q)?;
            let r = flag_search(&t, *max_ext, cli.budget.unwrap_or(DEFAULT_FLAG_BUDGET))?;
            let flags: Vec<Value> = r
                .flags
                .iter()
                .map(|g| json!({"degree": g.degree, "flag": fmt::flag_to_json(&g.flag)}))
                .collect();
            v.insert("weighted_count".into(), json!(r.weighted_count));
            v.insert("complete".into(), json!(r.complete));
            v.insert("searched_degree".into(), json!(r.searched_degree));
            v.insert("indeterminate".into(), json!(r.indeterminate));
            v.insert("budget_exhausted".into(), json!(r.budget_exhausted));
            v.insert("flags".into(), json!(flags));
            "flags search"
        }
        Command::Flags(FlagsCmd::Chern) => {
            let c = chern_top_class();
            let coefficient: Value = serde_json::from_str(&c.coefficient.to_string())?;
            v.insert("coefficient".into(), coefficient);
            v.insert("exponents".into(), json!(c.exponents));
            v.insert("degree".into(), json!(c.degree));
            "flags chern"
        }
        Command::Heisenberg(HeisenbergCmd::Invariants { field }) => {
            let basis: Vec<Value> = with_field!(AnyField::parse(field)?, f => {
                heisenberg_invariants(&f)?.iter().map(fmt::trivector_to_json).collect()
            });
            v.insert("dimension".into(), json!(basis.len()));
            v.insert("basis".into(), json!(basis));
            "heisenberg invariants"
        }
        Command::Selftest { only } => {
            let mut outcomes = Vec::new();
            for (id, _) in CRITERIA {
                if only.is_empty() || only.contains(&id) {
                    let o = run_criterion(id, cli.seed)?;
                    eprintln!("{}", o.line());
                    ok &= o.passed;
                    outcomes.push(o);
                }
            }
            v.insert("passed".into(), json!(ok));
            v.insert("criteria".into(), serde_json::to_value(outcomes)?);
            "selftest"
        }
    };
    Ok((name.to_string(), Value::Object(v), ok))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let mut inputs = Inputs::default();
    match run(&cli, &mut inputs) {
        Ok((command, verdict, ok)) => {
            let mut report = json!({
                "command": command,
                "inputs": inputs.0,
                "verdict": verdict,
                "seed": cli.seed,
            });
            if cli.timing {
                report["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            println!("{report}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Disagreement(_)) { 2 } else { 1 })
        }
    }
}
