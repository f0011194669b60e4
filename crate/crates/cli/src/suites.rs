//! Verification suite composition for the CLI.

use std::collections::BTreeMap;

use anyhow::bail;
use num_complex::Complex64;

use dbar_lab::dbar::{check_eq9_equivalence, solve_picard, PicardConfig};
use dbar_lab::grid::{PolarGrid, ScalarFieldNd};
use dbar_lab::inverse::PowerSeries;
use dbar_lab::params::{gamma_star, ode_bound, InequalityParams};
use dbar_lab::report::{VerificationReport, Witness};
use dbar_lab::solutions::{
    first_order_family, profile_disk, radial_comparison, second_order_family,
};
use dbar_lab::verify;

use crate::VerifyArgs;

pub fn run_suite(args: &VerifyArgs) -> anyhow::Result<Vec<VerificationReport>> {
    let mut reports = Vec::new();
    match args.suite.as_str() {
        "chain" => suite_chain(args, &mut reports)?,
        "nss" => suite_nss(args, &mut reports)?,
        "maxprinciple" => suite_maxprinciple(args, &mut reports)?,
        "ode" => suite_ode(args, &mut reports)?,
        "kobayashi" => suite_kobayashi(args, &mut reports)?,
        "inverse" => suite_inverse(args, &mut reports)?,
        "all" => {
            suite_chain(args, &mut reports)?;
            suite_nss(args, &mut reports)?;
            suite_maxprinciple(args, &mut reports)?;
            suite_ode(args, &mut reports)?;
            suite_kobayashi(args, &mut reports)?;
            suite_inverse(args, &mut reports)?;
            let p = InequalityParams::divergence(args.big_b, args.big_c, args.eps.min(args.big_c), 2)?;
            reports.push(verify::adversarial_divergence_search(&p, 65, args.seed, 10)?);
        }
        other => bail!("unknown suite '{other}' (chain|nss|maxprinciple|ode|kobayashi|inverse|all)"),
    }
    Ok(reports)
}

/// Quasilinear chain and first-order system residuals on the exact profile
/// field, plus a solver-backed chain check when it converges.
fn suite_chain(args: &VerifyArgs, reports: &mut Vec<VerificationReport>) -> anyhow::Result<()> {
    let gamma = match args.gamma {
        Some(g) => g,
        None => gamma_star(args.alpha)?,
    };
    let disk = profile_disk(args.b, args.alpha, args.radius)?;
    let (_, z2) = disk.fields(64, 64)?;
    reports.extend(verify::check_chain(&z2, args.alpha, gamma, args.floor)?);
    reports.push(check_eq9_equivalence(&z2, args.alpha));

    // The first-order system check needs a nonvanishing field: restrict the
    // profile domain to stay right of the flat abscissa (and inside the
    // escape abscissa, which the rejection reports when it binds).
    let sys_radius = 0.8 * disk.flat_abscissa().abs();
    let sys_disk = match profile_disk(args.b, args.alpha, sys_radius) {
        Ok(d) => d,
        Err(dbar_lab::Error::Escapes { abscissa, .. }) => {
            profile_disk(args.b, args.alpha, 0.8 * abscissa)?
        }
        Err(e) => return Err(e.into()),
    };
    let (_, sys_z2) = sys_disk.fields(48, 48)?;
    reports.push(verify::check_polar_system(&sys_z2, args.alpha)?);

    // Solver-backed chain: the Picard field solves the equation to O(h), so
    // the chain tolerance carries the input residual.
    let grid = PolarGrid::new(1.0, args.nr.min(64), args.nt.min(64))?;
    let cfg = PicardConfig::new(args.alpha, Complex64::new(args.b, args.b_im))?.with_grid(grid);
    let sol = solve_picard(&cfg)?;
    if sol.converged {
        let mut solver_reports = verify::check_chain_with_input_residual(
            &sol.field,
            args.alpha,
            gamma,
            args.floor,
            sol.residual_sup,
        )?;
        for rep in &mut solver_reports {
            rep.check_id = format!("{}-picard", rep.check_id);
        }
        reports.extend(solver_reports);
    } else {
        reports.push(VerificationReport::inconclusive(
            "chain-picard",
            BTreeMap::from([("alpha".to_string(), args.alpha)]),
            format!("solver did not converge in {} iterations", sol.iterations),
        ));
    }
    Ok(())
}

/// No-small-solutions checks on the closed-form families.
fn suite_nss(args: &VerifyArgs, reports: &mut Vec<VerificationReport>) -> anyhow::Result<()> {
    match args.family.as_str() {
        "example22" => {
            let fam = second_order_family(args.big_b, args.eps, args.c1, args.c2)?;
            let u = ScalarFieldNd::sample(1, 513, |x| fam.eval(x[0]))?;
            let p = InequalityParams::comparison(args.big_b, args.eps, 1)?;
            reports.push(verify::check_no_small_solutions(&u, &p)?);
        }
        "example25" => {
            let fam = first_order_family(args.big_b, args.alpha, args.c1, args.c2)?;
            let u0 = fam.eval(0.0);
            let bound = ((1.0 - args.alpha) * args.big_b).powf(1.0 / (1.0 - args.alpha));
            let params = BTreeMap::from([
                ("B".to_string(), args.big_b),
                ("alpha".to_string(), args.alpha),
                ("c1".to_string(), args.c1),
                ("c2".to_string(), args.c2),
            ]);
            if u0 == 0.0 {
                reports.push(VerificationReport::vacuous_pass(
                    "nss-first-order",
                    params,
                    "vacuous: u(0) = 0, the bound does not apply",
                ));
            } else {
                let sup = fam.sup_abs_on(-1.0, 1.0);
                reports.push(VerificationReport::from_margin(
                    "nss-first-order",
                    sup - bound,
                    0.0,
                    params,
                    Some(Witness {
                        location: vec![if fam.eval(1.0).abs() >= fam.eval(-1.0).abs() {
                            1.0
                        } else {
                            -1.0
                        }],
                        value: sup,
                    }),
                    format!("sup |u| = {sup:.6e} vs bound {bound:.6e}; u(0) = {u0:.3e}"),
                ));
            }
        }
        "radial" => {
            let p = InequalityParams::comparison(args.big_b, args.eps, 2)?;
            let v = radial_comparison(&p)?;
            let u = ScalarFieldNd::sample(2, 129, |x| v.value(x))?;
            reports.push(verify::check_no_small_solutions(&u, &p)?);
        }
        other => bail!("unknown family '{other}' (example22|example25|radial)"),
    }
    Ok(())
}

fn suite_maxprinciple(
    args: &VerifyArgs,
    reports: &mut Vec<VerificationReport>,
) -> anyhow::Result<()> {
    // Radial comparison profile in the plane: equality case of the
    // quasilinear inequality with C = 0.
    let cp = InequalityParams::comparison(args.big_b, args.eps, 2)?;
    let v = radial_comparison(&cp)?;
    let u = ScalarFieldNd::sample(2, 65, |x| v.value(x))?;
    let p = InequalityParams::divergence(args.big_b, 0.0, args.eps.min(0.0), 2)?;
    let mut rep = verify::probe_maximum_principle(&u, &p)?;
    rep.check_id = "maximum-principle-radial".into();
    reports.push(rep);

    // Flat-strip family on the line; its maximum sits at an interval end.
    let fam = second_order_family(args.big_b, args.eps, args.c1, args.c2)?;
    let u = ScalarFieldNd::sample(1, 513, |x| fam.eval(x[0]))?;
    let p1 = InequalityParams::divergence(args.big_b, 0.0, args.eps.min(0.0), 1)?;
    let mut rep = verify::probe_maximum_principle(&u, &p1)?;
    rep.check_id = "maximum-principle-family".into();
    reports.push(rep);
    Ok(())
}

fn suite_ode(args: &VerifyArgs, reports: &mut Vec<VerificationReport>) -> anyhow::Result<()> {
    let (b, c, eps) = (args.big_b, args.big_c, args.eps);
    let traj = verify::integrate_ode_ineq(b, c, eps, args.u0, args.du0, verify::OdeMode::Equality, 8000)?;
    let p = InequalityParams::divergence(b, c, eps, 1)?;
    let bound = ode_bound(&p)?;
    let params = BTreeMap::from([
        ("B".to_string(), b),
        ("C".to_string(), c),
        ("eps".to_string(), eps),
        ("u0".to_string(), args.u0),
        ("du0".to_string(), args.du0),
    ]);
    reports.push(VerificationReport::from_margin(
        "ode-positivity",
        traj.min_u(),
        0.0,
        params.clone(),
        None,
        format!(
            "min u = {:.6e} over [0, {:.4}]; blow-up: {:?}, zero fault: {:?}",
            traj.min_u(),
            traj.end(),
            traj.blow_up,
            traj.zero_fault
        ),
    ));
    reports.push(VerificationReport::from_margin(
        "ode-sup-bound",
        traj.sup_u() - bound,
        0.0,
        params,
        None,
        format!("sup u = {:.6e} vs bound {bound:.6e}", traj.sup_u()),
    ));

    // Embed the trajectory as an even field and run the divergence-bound
    // check when the start is not stiff (the embedded lattice cannot
    // resolve curvature scales below its spacing).
    if args.du0 == 0.0 && traj.blow_up.is_none() && traj.zero_fault.is_none() && c >= 0.0 {
        let field = verify::trajectory_field(&traj, 513)?;
        reports.push(verify::check_divergence_bound(&field, &p)?);
    }
    Ok(())
}

fn suite_kobayashi(args: &VerifyArgs, reports: &mut Vec<VerificationReport>) -> anyhow::Result<()> {
    let grid = PolarGrid::new(1.0, args.nr, args.nt)?;
    let z1 = PowerSeries::from_real(&[0.0, 1.0], 2.0);
    let out = verify::kobayashi_experiment(
        args.alpha,
        Complex64::new(args.b, args.b_im),
        args.r,
        grid,
        &z1,
    )?;
    println!(
        "pseudonorm bound pair: lower {:.6} (displaced point), upper {:.1} (base point); sup|f| = {:.6} vs S = {:.6}",
        out.lower_bound, out.upper_bound_at_zero, out.sup_f, out.s_bound
    );
    reports.push(out.inverse_report);
    reports.push(out.report);
    Ok(())
}

fn suite_inverse(args: &VerifyArgs, reports: &mut Vec<VerificationReport>) -> anyhow::Result<()> {
    use dbar_lab::inverse::disk_right_inverse;
    for (label, coeffs) in [
        ("identity", vec![0.0, 1.0]),
        ("perturbed", vec![0.0, 1.0, 0.01]),
    ] {
        let z1 = PowerSeries::from_real(&coeffs, 2.0);
        let inv = disk_right_inverse(&z1, args.r)?;
        let mut rep = inv.round_trip_report(&z1, 256, 1e-10)?;
        rep.check_id = format!("inverse-round-trip-{label}");
        reports.push(rep);

        // Injectivity certificates on seeded targets.
        let mut ok = 0usize;
        let trials = 100usize;
        let mut worst_min_abs = f64::INFINITY;
        for k in 0..trials {
            // Low-discrepancy-ish deterministic targets in the unit disk.
            let rad = ((k as f64 + 0.5) / trials as f64).sqrt();
            let ang = std::f64::consts::TAU * ((k as f64 * 0.6180339887498949) % 1.0);
            let inv_out = inv.phi(Complex64::from_polar(rad, ang))?;
            if inv_out.certificate.count == 1 {
                ok += 1;
            }
            worst_min_abs = worst_min_abs.min(inv_out.certificate.min_abs_on_contour);
        }
        let margin = if ok == trials {
            1.0
        } else {
            ok as f64 - trials as f64
        };
        reports.push(VerificationReport::from_margin(
            format!("inverse-certificates-{label}"),
            margin,
            0.0,
            BTreeMap::from([("r".to_string(), args.r), ("trials".to_string(), trials as f64)]),
            None,
            format!(
                "{ok}/{trials} targets certified with a single root; min |f - w| on certificate contours {worst_min_abs:.3e}"
            ),
        ));
    }
    Ok(())
}
