//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failure, 2 unreadable or malformed input,
//! 3 tree outside the family, 4 geometric failure while realizing.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::algebraic::{emit_model, AlgebraicModelSpec};
use crate::error::Error;
use crate::format::{
    parse_params, parse_plan, parse_region, parse_tree, write_atomic, write_graph, write_params, write_plan,
    write_record, write_region, write_tree,
};
use crate::fuzz::{self, FuzzConfig};
use crate::geom::{Axis, Tolerance};
use crate::grammar::{generate, recognize, validate_params};
use crate::ops::{self, MbccOptions, OpRecord, Plan, SsccCase, SsccOptions};
use crate::planner::realize_with;
use crate::reeb::compute_pr_graph;
use crate::region::SSRegion;
use crate::svg::{render, RenderOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_IN_FAMILY: i32 = 3;
pub const EXIT_GEOMETRY: i32 = 4;

/// Environment variable holding `eps_abs` or `eps_abs,eps_angle`.
pub const TOLERANCE_VAR: &str = "PR_TOL";

#[derive(Parser, Debug)]
#[command(name = "circle-reeb", version, about = "Poincaré-Reeb graphs of regions bounded by circles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AxisArg {
    H,
    V,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OpArg {
    Mbcc,
    SsccA1,
    SsccA2,
    SsccB,
    Pair,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that a region file describes a valid region.
    Validate { region: PathBuf },
    /// Compute the graph of a region.
    Reeb {
        region: PathBuf,
        #[arg(long, value_enum, default_value = "h")]
        axis: AxisArg,
        /// Graph output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Add one circle (or a pair) on an edge of the horizontal graph.
    Op {
        region: PathBuf,
        #[arg(long, value_enum)]
        op: OpArg,
        /// Edge address as printed by `reeb`.
        #[arg(long)]
        edge: String,
        /// Region output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plan file the new step is appended to (created from the disk if missing).
        #[arg(long)]
        plan_append: Option<PathBuf>,
        /// Margin fraction used by `pair`.
        #[arg(long, default_value_t = 0.5)]
        epsilon_frac: f64,
    },
    /// Rebuild the final region of a plan.
    Replay {
        plan: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the tree described by a parameter file.
    GenTree {
        params: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide family membership and print the parameters of a member.
    Recognize {
        tree: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a region whose graph is the given tree.
    Realize {
        tree: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Random operation sequences from the disk, checked after every step.
    Fuzz {
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Directory for failing plans.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print the polynomial system of a region.
    EmitAlgebraic {
        region: PathBuf,
        /// Comma-separated 1-based label of each circle; identity when absent.
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<usize>>,
        /// Comma-separated sphere dimension per label; all 1 when absent.
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed command: exit code plus message for standard error.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::NotInFamily(_) => EXIT_NOT_IN_FAMILY,
            Error::GeometricSearchFailed { .. } | Error::VerificationFailed(_) => EXIT_GEOMETRY,
            _ => EXIT_FAILURE,
        };
        Failure(code, e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CmdResult {
    write_atomic(path, text).map_err(|e| Failure(EXIT_FAILURE, format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tolerance() -> Result<Tolerance, Failure> {
    let Ok(v) = std::env::var(TOLERANCE_VAR) else {
        return Ok(Tolerance::default());
    };
    let bad = |m: String| Failure(EXIT_PARSE, format!("{TOLERANCE_VAR}: {m}"));
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| s.parse::<f64>().map_err(|_| bad(format!("bad number {s:?}"))))
        .collect::<Result<_, _>>()?;
    let t = match nums[..] {
        [a] => Tolerance::with_abs(a),
        [a, b] => Tolerance::new(a, b),
        _ => return Err(bad("expected eps_abs or eps_abs,eps_angle".into())),
    };
    t.map_err(|e| bad(e.to_string()))
}

fn load_region(path: &Path, tol: Tolerance) -> Result<SSRegion, Failure> {
    Ok(parse_region(&read(path)?, tol)?)
}

fn validate(region: &Path, tol: Tolerance) -> CmdResult {
    let r = load_region(region, tol)?;
    let report = r.validate();
    print!("{report}");
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure(EXIT_FAILURE, "region is invalid".into()))
    }
}

fn reeb(region: &Path, axis: AxisArg, out: Option<&Path>, svg: Option<&Path>, tol: Tolerance) -> CmdResult {
    let r = load_region(region, tol)?;
    r.ensure_valid()?;
    let axis = match axis {
        AxisArg::H => Axis::Horizontal,
        AxisArg::V => Axis::Vertical,
    };
    let g = compute_pr_graph(&r, axis)?;
    emit(out, &write_graph(&g))?;
    if let Some(p) = svg {
        let opts = RenderOptions {
            axis,
            ..RenderOptions::default()
        };
        write(p, &render(&r, Some(&g), &opts))?;
    }
    Ok(())
}

fn apply_op(r: &SSRegion, op: OpArg, edge: &str, epsilon_frac: f64) -> crate::Result<(SSRegion, Vec<OpRecord>, String)> {
    let values = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let sscc = |case| {
        ops::sscc(r, edge, case, &SsccOptions::default())
            .map(|(n, rec, rep)| (n, vec![rec], format!("values {}", values(&rep.new_singular_values))))
    };
    match op {
        OpArg::Mbcc => ops::mbcc(r, edge, &MbccOptions::default())
            .map(|(n, rec, rep)| (n, vec![rec], format!("values {}", values(&rep.new_singular_values)))),
        OpArg::SsccA1 => sscc(SsccCase::A1),
        OpArg::SsccA2 => sscc(SsccCase::A2),
        OpArg::SsccB => sscc(SsccCase::B),
        OpArg::Pair => ops::mbssc_pair(r, edge, epsilon_frac).map(|(n, recs, rep)| {
            let msg = format!(
                "values {} | {}",
                values(&rep.sscc.new_singular_values),
                values(&rep.mbcc.new_singular_values)
            );
            (n, recs.to_vec(), msg)
        }),
    }
}

fn op(
    region: &Path,
    op: OpArg,
    edge: &str,
    out: Option<&Path>,
    plan_append: Option<&Path>,
    epsilon_frac: f64,
    tol: Tolerance,
) -> CmdResult {
    let r = load_region(region, tol)?;
    // Check the plan before doing any work so a mismatch leaves no output.
    let mut plan = match plan_append {
        Some(p) if p.exists() => {
            let plan = parse_plan(&read(p)?, tol)?;
            let end = ops::replay(&plan)?;
            if end.constraints != r.constraints {
                return Err(Failure(
                    EXIT_FAILURE,
                    format!("plan {} does not end at the input region", p.display()),
                ));
            }
            Some(plan)
        }
        Some(_) => {
            let base = SSRegion::unit_disk_with(r.tol);
            if base.constraints != r.constraints {
                return Err(Failure(
                    EXIT_FAILURE,
                    "a new plan must start from the unit disk".into(),
                ));
            }
            Some(Plan::new(base))
        }
        None => None,
    };
    let (next, records, msg) = apply_op(&r, op, edge, epsilon_frac)?;
    for rec in &records {
        eprintln!("{}", write_record(rec));
    }
    eprintln!("{msg}");
    emit(out, &write_region(&next))?;
    if let (Some(p), Some(plan)) = (plan_append, plan.as_mut()) {
        plan.steps.extend(records);
        write(p, &write_plan(plan))?;
    }
    Ok(())
}

fn replay(plan: &Path, out: Option<&Path>, tol: Tolerance) -> CmdResult {
    let plan = parse_plan(&read(plan)?, tol)?;
    let r = ops::replay(&plan)?;
    emit(out, &write_region(&r))
}

fn gen_tree(params: &Path, out: Option<&Path>) -> CmdResult {
    let p = parse_params(&read(params)?)?;
    let report = validate_params(&p);
    if !report.is_valid() {
        return Err(Failure(EXIT_FAILURE, format!("invalid parameters:\n{report}")));
    }
    emit(out, &write_tree(&generate(&p)?))
}

fn recognize_cmd(tree: &Path, out: Option<&Path>) -> CmdResult {
    let t = parse_tree(&read(tree)?)?;
    let cert = recognize(&t)?;
    emit(out, &write_params(&cert.params))
}

fn realize(tree: &Path, out_dir: &Path, tol: Tolerance) -> CmdResult {
    let t = parse_tree(&read(tree)?)?;
    let res = realize_with(&t, tol)?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Failure(EXIT_FAILURE, format!("cannot create {}: {e}", out_dir.display())))?;
    write(&out_dir.join("realization.plan"), &write_plan(&res.plan))?;
    write(&out_dir.join("realization.region"), &write_region(&res.region))?;
    write(&out_dir.join("realization.graph"), &write_graph(&res.graph))?;
    write(
        &out_dir.join("realization.svg"),
        &render(&res.region, Some(&res.graph), &RenderOptions::default()),
    )?;
    let mut record = String::new();
    let _ = writeln!(
        record,
        "{} {} circles={} steps={}",
        if res.verified { "verified" } else { "unverified" },
        t.canonical_code(),
        res.region.len(),
        res.plan.steps.len()
    );
    write(&out_dir.join("verification.txt"), &record)?;
    print!("{record}");
    if res.verified {
        Ok(())
    } else {
        Err(Failure(EXIT_GEOMETRY, "realized graph does not match the tree".into()))
    }
}

fn fuzz_cmd(steps: usize, seed: u64, count: usize, out_dir: PathBuf) -> CmdResult {
    let (summary, _) = fuzz::run(&FuzzConfig {
        steps,
        seed,
        count,
        out_dir: Some(out_dir),
    });
    print!("{summary}");
    if summary.passed() {
        Ok(())
    } else {
        let first = summary.failing_plans.first().cloned().unwrap_or_default();
        Err(Failure(EXIT_FAILURE, format!("fuzz found failures; first: {first}")))
    }
}

fn emit_algebraic(
    region: &Path,
    labels: Option<Vec<usize>>,
    degrees: Option<Vec<usize>>,
    out: Option<&Path>,
    tol: Tolerance,
) -> CmdResult {
    let r = load_region(region, tol)?;
    let id = AlgebraicModelSpec::identity(r.len());
    let spec = AlgebraicModelSpec {
        labeling: labels.unwrap_or(id.labeling),
        degrees: degrees.unwrap_or(id.degrees),
    };
    emit(out, &emit_model(&r, &spec)?)
}

fn dispatch(cmd: Command) -> CmdResult {
    let tol = tolerance()?;
    match cmd {
        Command::Validate { region } => validate(&region, tol),
        Command::Reeb { region, axis, out, svg } => reeb(&region, axis, out.as_deref(), svg.as_deref(), tol),
        Command::Op {
            region,
            op: kind,
            edge,
            out,
            plan_append,
            epsilon_frac,
        } => op(&region, kind, &edge, out.as_deref(), plan_append.as_deref(), epsilon_frac, tol),
        Command::Replay { plan, out } => replay(&plan, out.as_deref(), tol),
        Command::GenTree { params, out } => gen_tree(&params, out.as_deref()),
        Command::Recognize { tree, out } => recognize_cmd(&tree, out.as_deref()),
        Command::Realize { tree, out_dir } => realize(&tree, &out_dir, tol),
        Command::Fuzz {
            steps,
            seed,
            count,
            out_dir,
        } => fuzz_cmd(steps, seed, count, out_dir),
        Command::EmitAlgebraic {
            region,
            labels,
            degrees,
            out,
        } => emit_algebraic(&region, labels, degrees, out.as_deref(), tol),
    }
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}
