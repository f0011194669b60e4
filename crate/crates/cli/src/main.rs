//! Command-line front end: closed-form constants, the Picard solver with
//! CSV/JSON exports, and the verification suites.
//!
//! Exit codes: 0 all passes, 2 verification failure (or a non-converged
//! solve), 3 hypotheses-not-met or inconclusive in strict mode, 4 invalid
//! parameters.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use dbar_lab::dbar::{solve_picard, PicardConfig};
use dbar_lab::grid::PolarGrid;
use dbar_lab::params;
use dbar_lab::report::{CheckStatus, VerificationReport};
use dbar_lab::verify;

mod render;
mod suites;

use render::sig12;

#[derive(Parser)]
#[command(name = "dbar-lab", version, about = "Numerical laboratory for the nonlinear d-bar equation and its sup bounds", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print closed-form constants (sup bounds, ball ratios, inverse radii).
    Constants(ConstantsArgs),
    /// Solve df/dz̄ = |f|^alpha on the unit disk by Picard iteration.
    Solve(SolveArgs),
    /// Run a verification suite and report pass/fail margins.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ConstantsArgs {
    /// Sup lower bound S for the nonlinear d-bar equation.
    #[arg(long)]
    salpha: bool,
    /// Exponent choice gamma* = max(2, (2-alpha)/(2-2 alpha)).
    #[arg(long)]
    gamma_star: bool,
    /// Ball-volume ratio kappa_n = 1/(n(n+1)).
    #[arg(long)]
    kappa: bool,
    /// Comparison bound M for lap(u) >= B u^eps.
    #[arg(long)]
    m_comparison: bool,
    /// Divergence-theorem bound M = ((1-C) B kappa_n)^(1/(1-eps)).
    #[arg(long)]
    m_divergence: bool,
    /// One-dimensional ODE bound M = ((1-C) B / 2)^(1/(1-eps)).
    #[arg(long)]
    m_ode: bool,
    /// Inverse-construction radii eta = 3r/8, s = 3r^2/(64-12r^2).
    #[arg(long)]
    inverse_radii: bool,
    /// Certified coverage radius s = ((delta-eta)/(1-eta delta)) eta.
    #[arg(long)]
    schwarz_pick: bool,
    /// Euclidean center/radius of a pseudohyperbolic disk.
    #[arg(long)]
    pseudo_disk: bool,

    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long = "B", default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 0.0)]
    eps: f64,
    #[arg(long = "C", default_value_t = 0.0)]
    c: f64,
    #[arg(long, default_value_t = 1.9)]
    r: f64,
    #[arg(long, default_value_t = 0.95)]
    delta: f64,
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    #[arg(long, default_value_t = 0.0)]
    z0_re: f64,
    #[arg(long, default_value_t = 0.0)]
    z0_im: f64,

    /// Print a table over standard parameter grids instead of single values.
    #[arg(long)]
    sweep: bool,

    /// Emit JSON instead of the table.
    #[arg(long)]
    json: bool,
    /// Write the JSON report to a file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    alpha: f64,
    /// Real part of the pinned origin value.
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    b: f64,
    /// Imaginary part of the pinned origin value.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b_im: f64,
    #[arg(long, default_value_t = 128)]
    nr: usize,
    #[arg(long, default_value_t = 128)]
    nt: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// Output directory (defaults to $DBAR_LAB_OUT, then the working dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// chain | nss | maxprinciple | ode | kobayashi | inverse | all
    #[arg(long)]
    suite: String,
    /// Treat hypotheses-not-met and inconclusive reports as errors (exit 3).
    #[arg(long)]
    strict: bool,
    /// Seed for the randomized checks; identical seeds reproduce outputs.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write reports.json and summary.csv to this directory.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub b_im: f64,
    /// Chain exponent; defaults to gamma*(alpha).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 1.9)]
    pub r: f64,
    #[arg(long = "B", default_value_t = 2.0)]
    pub big_b: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub eps: f64,
    #[arg(long = "C", default_value_t = 0.0, allow_hyphen_values = true)]
    pub big_c: f64,
    #[arg(long, default_value_t = 0.2, allow_hyphen_values = true)]
    pub c1: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub c2: f64,
    /// example22 | example25 | radial (for the nss suite).
    #[arg(long, default_value = "example22")]
    pub family: String,
    #[arg(long, default_value_t = 0.01)]
    pub u0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub du0: f64,
    /// Polar grid size for solver-backed suites.
    #[arg(long, default_value_t = 96)]
    pub nr: usize,
    #[arg(long, default_value_t = 96)]
    pub nt: usize,
    /// Domain radius for the exact-profile chain field.
    #[arg(long, default_value_t = 0.35)]
    pub radius: f64,
    /// Zero-set floor for chain checks.
    #[arg(long, default_value_t = verify::DEFAULT_FIELD_FLOOR)]
    pub floor: f64,
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. piping into head).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not parameter errors.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Constants(args) => cmd_constants(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(4)
        }
    }
}

fn output_dir(requested: Option<PathBuf>) -> PathBuf {
    requested
        .or_else(|| std::env::var_os("DBAR_LAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn cmd_constants(args: ConstantsArgs) -> anyhow::Result<ExitCode> {
    let mut rows = Vec::new();
    if args.sweep {
        for k in 1..=9 {
            let alpha = k as f64 / 10.0;
            rows.push(params::ConstantsReport::new(
                "S_alpha",
                params::s_alpha(alpha)?,
                [("alpha".to_string(), alpha)].into(),
                "sup-bound.dbar",
            )?);
            rows.push(params::ConstantsReport::new(
                "gamma_star",
                params::gamma_star(alpha)?,
                [("alpha".to_string(), alpha)].into(),
                "exponent.star",
            )?);
        }
        for n in 1..=5u32 {
            rows.push(params::ConstantsReport::new(
                "kappa_n",
                params::kappa(n)?,
                [("n".to_string(), n as f64)].into(),
                "ball-ratio",
            )?);
            let p = params::InequalityParams::comparison(args.b, args.eps, n)?;
            rows.push(params::ConstantsReport::new(
                "M_comparison",
                params::comparison_bound(&p)?,
                [
                    ("B".to_string(), args.b),
                    ("eps".to_string(), args.eps),
                    ("n".to_string(), n as f64),
                ]
                .into(),
                "sup-bound.comparison",
            )?);
        }
        for r in [1.89, 1.9, 1.95, 2.0] {
            let ir = params::inverse_radii(r)?;
            rows.push(params::ConstantsReport::new(
                "eta",
                ir.eta,
                [("r".to_string(), r)].into(),
                "radii.inverse",
            )?);
            rows.push(params::ConstantsReport::new(
                "s",
                ir.s,
                [("r".to_string(), r)].into(),
                "radii.inverse",
            )?);
        }
        return render_constants(rows, args.json, args.out);
    }
    let any_selector = args.salpha
        || args.gamma_star
        || args.kappa
        || args.m_comparison
        || args.m_divergence
        || args.m_ode
        || args.inverse_radii
        || args.schwarz_pick
        || args.pseudo_disk;

    let mut push = |name: &str,
                    value: f64,
                    inputs: Vec<(&str, f64)>,
                    id: &str|
     -> anyhow::Result<()> {
        let map = inputs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        rows.push(params::ConstantsReport::new(name, value, map, id)?);
        Ok(())
    };

    if args.salpha || !any_selector {
        push(
            "S_alpha",
            params::s_alpha(args.alpha)?,
            vec![("alpha", args.alpha)],
            "sup-bound.dbar",
        )?;
    }
    if args.gamma_star || !any_selector {
        push(
            "gamma_star",
            params::gamma_star(args.alpha)?,
            vec![("alpha", args.alpha)],
            "exponent.star",
        )?;
    }
    if args.kappa || !any_selector {
        push("kappa_n", params::kappa(args.n)?, vec![("n", args.n as f64)], "ball-ratio")?;
    }
    if args.m_comparison || !any_selector {
        let p = params::InequalityParams::comparison(args.b, args.eps, args.n)?;
        push(
            "M_comparison",
            params::comparison_bound(&p)?,
            vec![("B", args.b), ("eps", args.eps), ("n", args.n as f64)],
            "sup-bound.comparison",
        )?;
    }
    if args.m_divergence {
        let p = params::InequalityParams::divergence(args.b, args.c, args.eps, args.n)?;
        push(
            "M_divergence",
            params::divergence_bound(&p)?,
            vec![
                ("B", args.b),
                ("C", args.c),
                ("eps", args.eps),
                ("n", args.n as f64),
            ],
            "sup-bound.divergence",
        )?;
    }
    if args.m_ode {
        let p = params::InequalityParams::divergence(args.b, args.c, args.eps, 1)?;
        push(
            "M_ode",
            params::ode_bound(&p)?,
            vec![("B", args.b), ("C", args.c), ("eps", args.eps)],
            "sup-bound.ode",
        )?;
    }
    if args.inverse_radii || !any_selector {
        let ir = params::inverse_radii(args.r)?;
        push("eta", ir.eta, vec![("r", args.r)], "radii.inverse")?;
        push("s", ir.s, vec![("r", args.r)], "radii.inverse")?;
    }
    if args.schwarz_pick {
        push(
            "s",
            params::schwarz_pick_radius(args.delta, args.eta)?,
            vec![("delta", args.delta), ("eta", args.eta)],
            "radii.schwarz-pick",
        )?;
    }
    if args.pseudo_disk {
        let (center, radius) =
            params::pseudo_disk(Complex64::new(args.z0_re, args.z0_im), args.r)?;
        // The center components may vanish or be negative, so they are
        // printed directly; the radius joins the constants table.
        println!(
            "pseudo_disk center = ({}, {})",
            sig12(center.re),
            sig12(center.im)
        );
        push(
            "pseudo_disk_radius",
            radius,
            vec![("z0_re", args.z0_re), ("z0_im", args.z0_im), ("r", args.r)],
            "disk.pseudohyperbolic",
        )?;
    }

    render_constants(rows, args.json, args.out)
}

fn render_constants(
    rows: Vec<params::ConstantsReport>,
    json: bool,
    out: Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    let text = serde_json::to_string_pretty(&rows)?;
    if let Some(path) = out {
        fs::write(&path, &text)?;
    }
    if json {
        println!("{text}");
    } else {
        for row in &rows {
            let inputs = row
                .inputs
                .iter()
                .map(|(k, v)| format!("{k}={}", sig12(*v)))
                .collect::<Vec<_>>()
                .join(", ");
            println!("{:<14} {}  [{}]", row.name, sig12(row.value), inputs);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    let grid = PolarGrid::new(args.radius, args.nr, args.nt)?;
    let cfg = PicardConfig::new(args.alpha, Complex64::new(args.b, args.b_im))?
        .with_grid(grid)
        .with_tol(args.tol)?
        .with_max_iter(args.max_iter)?;
    let sol = solve_picard(&cfg)?;

    let dir = output_dir(args.out);
    fs::create_dir_all(&dir)?;
    let mut csv = Vec::new();
    sol.field.write_csv(&mut csv)?;
    fs::write(dir.join("field.csv"), csv)?;
    let mut trace = String::new();
    for rec in &sol.trace {
        trace.push_str(&serde_json::to_string(rec)?);
        trace.push('\n');
    }
    fs::write(dir.join("trace.jsonl"), trace)?;
    let (sup, _) = sol.sup_abs();
    let s_bound = params::s_alpha(args.alpha)?;
    let summary = serde_json::json!({
        "alpha": args.alpha,
        "b_re": args.b,
        "b_im": args.b_im,
        "n_r": args.nr,
        "n_t": args.nt,
        "converged": sol.converged,
        "diverged": sol.diverged,
        "monotone_after_burn_in": sol.monotone_after_burn_in,
        "iterations": sol.iterations,
        "residual_sup": sol.residual_sup,
        "sup_abs": sup,
        "s_alpha": s_bound,
        "near_zero_nodes": sol.near_zero_nodes,
    });
    fs::write(
        dir.join("solution.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;

    println!(
        "solve alpha={} b={}+{}i: {} after {} iterations",
        sig12(args.alpha),
        sig12(args.b),
        sig12(args.b_im),
        if sol.converged { "converged" } else { "NOT converged" },
        sol.iterations
    );
    println!(
        "  residual_sup = {}  sup|f| = {}  S_alpha = {}  near-zero nodes = {}",
        sig12(sol.residual_sup),
        sig12(sup),
        sig12(s_bound),
        sol.near_zero_nodes
    );
    println!("  wrote field.csv, trace.jsonl, solution.json to {}", dir.display());
    Ok(if sol.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let reports = suites::run_suite(&args)?;
    for rep in &reports {
        let status = match rep.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::HypothesesNotMet => "HYPOTHESES-NOT-MET",
            CheckStatus::Inconclusive => "INCONCLUSIVE",
        };
        let margin = rep
            .margin
            .map(|m| format!(" margin={}", sig12(m)))
            .unwrap_or_default();
        println!("[{}] {}{} :: {}", rep.check_id, status, margin, rep.notes);
    }

    if let Some(dir) = args.out {
        fs::create_dir_all(&dir)?;
        fs::write(
            dir.join("reports.json"),
            serde_json::to_string_pretty(&reports)?,
        )?;
        let mut csv = String::from(VerificationReport::csv_header());
        csv.push('\n');
        for rep in &reports {
            csv.push_str(&rep.csv_row());
            csv.push('\n');
        }
        fs::write(dir.join("summary.csv"), csv)?;
    }

    let any_fail = reports.iter().any(|r| r.status == CheckStatus::Fail);
    let any_soft = reports.iter().any(|r| {
        matches!(
            r.status,
            CheckStatus::HypothesesNotMet | CheckStatus::Inconclusive
        )
    });
    Ok(if any_fail {
        ExitCode::from(2)
    } else if args.strict && any_soft {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}
