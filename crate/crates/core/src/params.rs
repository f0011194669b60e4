//! Parameter bundles and every closed-form constant used by the harness.
//!
//! All constants are computed in double precision; fractional powers only
//! ever see strictly positive bases in-regime.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Threshold for the quantitative inverse construction: `4*sqrt(2)/3`.
pub const INVERSE_RADIUS_THRESHOLD: f64 = 1.8856180831641267; // 4*sqrt(2)/3

/// Scalar parameter bundle shared by the inequality bounds.
///
/// Construction enforces the regime common to all consumers; each operation
/// additionally enforces its own epsilon regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityParams {
    alpha: f64,
    gamma: f64,
    b: f64,
    c: f64,
    epsilon: f64,
    n: u32,
}

impl InequalityParams {
    pub fn new(alpha: f64, gamma: f64, b: f64, c: f64, epsilon: f64, n: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Param {
                name: "alpha",
                constraint: "0 < alpha < 1",
                got: alpha,
            });
        }
        if !(gamma > 0.0) {
            return Err(Error::Param {
                name: "gamma",
                constraint: "gamma > 0",
                got: gamma,
            });
        }
        if !(b > 0.0) {
            return Err(Error::Param {
                name: "B",
                constraint: "B > 0",
                got: b,
            });
        }
        if !(c < 1.0) {
            return Err(Error::Param {
                name: "C",
                constraint: "C < 1",
                got: c,
            });
        }
        if !epsilon.is_finite() {
            return Err(Error::Param {
                name: "epsilon",
                constraint: "epsilon finite",
                got: epsilon,
            });
        }
        if n < 1 {
            return Err(Error::Param {
                name: "n",
                constraint: "n >= 1",
                got: n as f64,
            });
        }
        Ok(Self {
            alpha,
            gamma,
            b,
            c,
            epsilon,
            n,
        })
    }

    /// Bundle for the comparison-bound regime (C unused, defaults to 0).
    pub fn comparison(b: f64, epsilon: f64, n: u32) -> Result<Self> {
        Self::new(0.5, 2.0, b, 0.0, epsilon, n)
    }

    /// Bundle for the divergence/ODE-bound regime (alpha, gamma unused).
    pub fn divergence(b: f64, c: f64, epsilon: f64, n: u32) -> Result<Self> {
        Self::new(0.5, 2.0, b, c, epsilon, n)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn as_map(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        m.insert("alpha".into(), self.alpha);
        m.insert("gamma".into(), self.gamma);
        m.insert("B".into(), self.b);
        m.insert("C".into(), self.c);
        m.insert("epsilon".into(), self.epsilon);
        m.insert("n".into(), self.n as f64);
        m
    }
}

/// One computed constant with the inputs that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub name: String,
    pub value: f64,
    pub inputs: BTreeMap<String, f64>,
    pub formula_id: String,
}

impl ConstantsReport {
    pub fn new(
        name: impl Into<String>,
        value: f64,
        inputs: BTreeMap<String, f64>,
        formula_id: impl Into<String>,
    ) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Param {
                name: "value",
                constraint: "constant must be finite and positive",
                got: value,
            });
        }
        Ok(Self {
            name: name.into(),
            value,
            inputs,
            formula_id: formula_id.into(),
        })
    }
}

fn pospow(base: f64, exponent: f64) -> f64 {
    debug_assert!(base > 0.0, "pospow requires a positive base, got {base}");
    base.powf(exponent)
}

/// Lower bound `M` for the supremum of nonnegative solutions of
/// `lap(u) >= B u^eps` on the unit ball that are nonzero at the origin:
/// `M = (B (1-eps)^2 / (2 (2 eps + n (1-eps))))^(1/(1-eps))`.
pub fn comparison_bound(p: &InequalityParams) -> Result<f64> {
    let (b, eps, n) = (p.b(), p.epsilon(), p.n() as f64);
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Param {
            name: "epsilon",
            constraint: "0 <= epsilon < 1",
            got: eps,
        });
    }
    let base = b * (1.0 - eps) * (1.0 - eps) / (2.0 * (2.0 * eps + n * (1.0 - eps)));
    Ok(pospow(base, 1.0 / (1.0 - eps)))
}

/// Sup lower bound for solutions of `df/dz̄ = |f|^alpha` with `f(0) != 0`.
///
/// Two branches that agree at `alpha = 2/3`:
/// `(alpha (1-alpha))^(1/(2-2 alpha))` for `alpha <= 2/3` and
/// `(4 alpha (1-alpha)^2 / (2-alpha))^(1/(2-2 alpha))` above.
///
/// The value underflows to 0 in double precision for alpha beyond roughly
/// 0.993; [`s_alpha_ln`] stays finite on the whole interval.
pub fn s_alpha(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let exponent = 1.0 / (2.0 - 2.0 * alpha);
    let base = if alpha <= 2.0 / 3.0 {
        alpha * (1.0 - alpha)
    } else {
        4.0 * alpha * (1.0 - alpha) * (1.0 - alpha) / (2.0 - alpha)
    };
    Ok(pospow(base, exponent))
}

/// Natural log of [`s_alpha`]; usable arbitrarily close to alpha = 1 where
/// the bound itself is below the smallest positive double.
pub fn s_alpha_ln(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let base = if alpha <= 2.0 / 3.0 {
        alpha * (1.0 - alpha)
    } else {
        4.0 * alpha * (1.0 - alpha) * (1.0 - alpha) / (2.0 - alpha)
    };
    Ok(base.ln() / (2.0 - 2.0 * alpha))
}

/// The exponent choice that turns the quasilinear chain into the sup bound:
/// `max(2, (2-alpha)/(2-2 alpha))`; equals 2 exactly when `alpha <= 2/3`.
pub fn gamma_star(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(2.0_f64.max((2.0 - alpha) / (2.0 - 2.0 * alpha)))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Param {
            name: "alpha",
            constraint: "0 < alpha < 1",
            got: alpha,
        });
    }
    Ok(())
}

/// Volume of the n-ball of radius 1. `V_0 = 1`, `V_1 = 2`,
/// `V_n = V_{n-2} * 2 pi / n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * std::f64::consts::PI / n as f64,
    }
}

/// Surface measure of the unit (n-1)-sphere: `n * V_n`.
pub fn unit_sphere_area(n: u32) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Ratio of the radially integrated ball volume to the unit sphere area:
/// `kappa_n = (int_0^1 beta_n(r) dr) / sigma_n(1) = 1/(n (n+1))`.
pub fn kappa(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::Param {
            name: "n",
            constraint: "n >= 1",
            got: n as f64,
        });
    }
    Ok(1.0 / (n as f64 * (n as f64 + 1.0)))
}

/// Sup lower bound for strictly positive solutions of
/// `u lap(u) >= B |u|^(1+eps) + C |grad u|^2` on the unit ball:
/// `M = ((1-C) B kappa_n)^(1/(1-eps))`.
pub fn divergence_bound(p: &InequalityParams) -> Result<f64> {
    let (b, c, eps, n) = (p.b(), p.c(), p.epsilon(), p.n());
    if eps > c {
        return Err(Error::Param {
            name: "epsilon",
            constraint: "epsilon <= C",
            got: eps,
        });
    }
    let base = (1.0 - c) * b * kappa(n)?;
    Ok(pospow(base, 1.0 / (1.0 - eps)))
}

/// One-dimensional sup bound under initial conditions `u(0) > 0`,
/// `u'(0) >= 0`: `M = ((1-C) B / 2)^(1/(1-eps))`. Coincides with
/// [`divergence_bound`] at `n = 1` since `kappa_1 = 1/2`.
pub fn ode_bound(p: &InequalityParams) -> Result<f64> {
    let (b, c, eps) = (p.b(), p.c(), p.epsilon());
    if c < -1.0 {
        return Err(Error::Param {
            name: "C",
            constraint: "-1 <= C < 1",
            got: c,
        });
    }
    if eps > c {
        return Err(Error::Param {
            name: "epsilon",
            constraint: "epsilon <= C",
            got: eps,
        });
    }
    let base = 0.5 * (1.0 - c) * b;
    Ok(pospow(base, 1.0 / (1.0 - eps)))
}

/// Output of [`inverse_radii`]: the inner radius `eta = 3r/8`, the certified
/// target radius `s = 3 r^2 / (64 - 12 r^2) > 1/2`, and the two roots of
/// `4 eta^2 - 3 r eta + 2` between which `eta` sits.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InverseRadii {
    pub eta: f64,
    pub s: f64,
    pub eta_root_lo: f64,
    pub eta_root_hi: f64,
}

/// Radii for the quantitative holomorphic inverse; requires
/// `4*sqrt(2)/3 < r <= 2`.
pub fn inverse_radii(r: f64) -> Result<InverseRadii> {
    if !(r > INVERSE_RADIUS_THRESHOLD) {
        return Err(Error::Param {
            name: "r",
            constraint: "r > 4*sqrt(2)/3 (approx. 1.8856)",
            got: r,
        });
    }
    if r > 2.0 {
        return Err(Error::Param {
            name: "r",
            constraint: "r <= 2",
            got: r,
        });
    }
    let eta = 3.0 * r / 8.0;
    let s = 3.0 * r * r / (64.0 - 12.0 * r * r);
    let disc = (9.0 * r * r - 32.0).sqrt();
    Ok(InverseRadii {
        eta,
        s,
        eta_root_lo: (3.0 * r - disc) / 8.0,
        eta_root_hi: (3.0 * r + disc) / 8.0,
    })
}

/// Radius of certified single coverage for a disk self-map with `f(0) = 0`
/// and `|f'(0)| = delta`: `s = ((delta - eta)/(1 - eta delta)) eta`.
pub fn schwarz_pick_radius(delta: f64, eta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Param {
            name: "delta",
            constraint: "0 < delta <= 1",
            got: delta,
        });
    }
    if !(eta > 0.0 && eta < delta) {
        return Err(Error::Param {
            name: "eta",
            constraint: "0 < eta < delta",
            got: eta,
        });
    }
    Ok((delta - eta) / (1.0 - eta * delta) * eta)
}

/// Euclidean center and radius of the pseudohyperbolic disk
/// `{ z : |z - z0| / |1 - conj(z0) z| < r }`.
pub fn pseudo_disk(z0: Complex64, r: f64) -> Result<(Complex64, f64)> {
    if !(z0.norm() < 1.0) {
        return Err(Error::Param {
            name: "z0",
            constraint: "|z0| < 1",
            got: z0.norm(),
        });
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Param {
            name: "r",
            constraint: "0 < r < 1",
            got: r,
        });
    }
    let a = z0.norm_sqr();
    let denom = 1.0 - r * r * a;
    Ok((z0 * ((1.0 - r * r) / denom), r * (1.0 - a) / denom))
}

/// Builds the table of constants the CLI prints for a parameter bundle.
pub fn constants_table(p: &InequalityParams, r: f64) -> Result<Vec<ConstantsReport>> {
    let mut rows = Vec::new();
    let mut add = |name: &str, value: f64, inputs: BTreeMap<String, f64>, id: &str| {
        ConstantsReport::new(name, value, inputs, id).map(|rep| rows.push(rep))
    };
    let alpha = p.alpha();
    add(
        "S_alpha",
        s_alpha(alpha)?,
        BTreeMap::from([("alpha".into(), alpha)]),
        "sup-bound.dbar",
    )?;
    add(
        "gamma_star",
        gamma_star(alpha)?,
        BTreeMap::from([("alpha".into(), alpha)]),
        "exponent.star",
    )?;
    add(
        "kappa_n",
        kappa(p.n())?,
        BTreeMap::from([("n".into(), p.n() as f64)]),
        "ball-ratio",
    )?;
    if (0.0..1.0).contains(&p.epsilon()) {
        add(
            "M_comparison",
            comparison_bound(p)?,
            p.as_map(),
            "sup-bound.comparison",
        )?;
    }
    if p.epsilon() <= p.c() {
        add(
            "M_divergence",
            divergence_bound(p)?,
            p.as_map(),
            "sup-bound.divergence",
        )?;
        if p.c() >= -1.0 {
            add("M_ode", ode_bound(p)?, p.as_map(), "sup-bound.ode")?;
        }
    }
    if r > INVERSE_RADIUS_THRESHOLD && r <= 2.0 {
        let ir = inverse_radii(r)?;
        add(
            "eta",
            ir.eta,
            BTreeMap::from([("r".into(), r)]),
            "radii.inverse",
        )?;
        add(
            "s",
            ir.s,
            BTreeMap::from([("r".into(), r)]),
            "radii.inverse",
        )?;
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TWO_THIRDS: f64 = 2.0 / 3.0;

    fn params(b: f64, eps: f64, n: u32) -> InequalityParams {
        InequalityParams::comparison(b, eps, n).unwrap()
    }

    #[test]
    fn comparison_bound_known_values() {
        // n=2, B=1, eps=0 gives the linear-inequality bound 1/4.
        let m = comparison_bound(&params(1.0, 0.0, 2)).unwrap();
        assert!((m - 0.25).abs() < 1e-15);
        // n=1 reduces to B(1-eps)^2/(2(1+eps)).
        let m1 = comparison_bound(&params(2.0, 0.0, 1)).unwrap();
        assert!((m1 - 1.0).abs() < 1e-15);
        for &(b, eps) in &[(2.0, 0.5), (1.0, 0.25), (3.0, 0.75), (0.5, 0.0)] {
            let general = comparison_bound(&params(b, eps, 1)).unwrap();
            let reduced = (b * (1.0 - eps) * (1.0 - eps) / (2.0 * (1.0 + eps)))
                .powf(1.0 / (1.0 - eps));
            assert!((general - reduced).abs() < 1e-14);
        }
    }

    #[test]
    fn comparison_bound_rejects_bad_epsilon() {
        assert!(InequalityParams::comparison(1.0, 1.0, 2)
            .map(|p| comparison_bound(&p))
            .unwrap()
            .is_err());
        assert!(InequalityParams::comparison(1.0, -0.1, 2)
            .map(|p| comparison_bound(&p))
            .unwrap()
            .is_err());
    }

    /// With v(x) = M |x|^k, k = 2/(1-eps), the radial Laplacian coefficient
    /// k(k+n-2) must satisfy M k (k+n-2) = B M^eps exactly.
    #[test]
    fn comparison_bound_coefficient_identity() {
        for n in 1..=5u32 {
            for &b in &[0.5, 1.0, 2.0, 7.5] {
                for &eps in &[0.0, 0.1, 0.35, 0.5, 0.85] {
                    let m = comparison_bound(&params(b, eps, n)).unwrap();
                    let k = 2.0 / (1.0 - eps);
                    let lhs = m * k * (k + n as f64 - 2.0);
                    let rhs = b * m.powf(eps);
                    assert!(
                        (lhs - rhs).abs() <= 1e-12 * rhs.max(1.0),
                        "identity fails n={n} B={b} eps={eps}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn s_alpha_branch_values() {
        // Branch-equality point: 2*sqrt(2)/27.
        let exact = 2.0 * 2.0_f64.sqrt() / 27.0;
        assert!((s_alpha(TWO_THIRDS).unwrap() - exact).abs() < 1e-12);
        assert!((s_alpha(TWO_THIRDS).unwrap() - 0.10475656).abs() < 1e-8);
        // Left branch at 1/2: (1/4)^1.
        assert!((s_alpha(0.5).unwrap() - 0.25).abs() < 1e-15);
        // Right branch at 3/4: (3/20)^2.
        assert!((s_alpha(0.75).unwrap() - 0.0225).abs() < 1e-15);
    }

    #[test]
    fn s_alpha_branches_agree_at_two_thirds() {
        let a = TWO_THIRDS;
        let left = (a * (1.0 - a)).powf(1.0 / (2.0 - 2.0 * a));
        let right =
            (4.0 * a * (1.0 - a) * (1.0 - a) / (2.0 - a)).powf(1.0 / (2.0 - 2.0 * a));
        assert!((left - right).abs() < 1e-12);
    }

    #[test]
    fn s_alpha_decays_near_one() {
        // The bound underflows double precision around alpha = 0.9935, so
        // the tail of the decay check runs in log scale.
        let mut prev = s_alpha_ln(0.9).unwrap();
        let mut a = 0.9;
        while a < 0.999 {
            a += 0.001;
            let cur = s_alpha_ln(a).unwrap();
            assert!(cur < prev, "S_alpha must decay on [0.9, 0.999] at {a}");
            prev = cur;
        }
        // Where the plain value is representable the two routes agree.
        for &a in &[0.9, 0.95, 0.98] {
            assert!((s_alpha(a).unwrap().ln() - s_alpha_ln(a).unwrap()).abs() < 1e-10);
        }
        assert!(s_alpha_ln(0.9999).unwrap().is_finite());
    }

    #[test]
    fn s_alpha_rejects_endpoints() {
        assert!(s_alpha(0.0).is_err());
        assert!(s_alpha(1.0).is_err());
        assert!(s_alpha(1.5).is_err());
    }

    #[test]
    fn gamma_star_values() {
        assert_eq!(gamma_star(0.5).unwrap(), 2.0);
        assert_eq!(gamma_star(TWO_THIRDS).unwrap(), 2.0);
        assert!((gamma_star(0.75).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn kappa_known_values() {
        assert!((kappa(1).unwrap() - 0.5).abs() < 1e-15);
        assert!((kappa(2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!((kappa(3).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert!(kappa(0).is_err());
    }

    /// Quadrature oracle for kappa: Simpson integration of beta_n(r) = V_n r^n
    /// over [0,1], divided by sigma_n(1), with the standard volume formula.
    #[test]
    fn kappa_matches_quadrature() {
        let simpson = |n: u32| -> f64 {
            let vn = unit_ball_volume(n);
            let cells = 400usize;
            let h = 1.0 / cells as f64;
            let f = |r: f64| vn * r.powi(n as i32);
            let mut acc = f(0.0) + f(1.0);
            for k in 1..cells {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * f(k as f64 * h);
            }
            acc * h / 3.0 / unit_sphere_area(n)
        };
        for n in 1..=5u32 {
            assert!(
                (kappa(n).unwrap() - simpson(n)).abs() < 1e-8,
                "kappa({n}) disagrees with quadrature"
            );
        }
    }

    #[test]
    fn divergence_bound_values() {
        let p = |b, c, eps, n| InequalityParams::divergence(b, c, eps, n).unwrap();
        assert!((divergence_bound(&p(2.0, 0.0, 0.0, 1)).unwrap() - 1.0).abs() < 1e-15);
        assert!((divergence_bound(&p(6.0, 0.0, 0.0, 2)).unwrap() - 1.0).abs() < 1e-15);
        assert!((divergence_bound(&p(2.0, 0.5, 0.5, 1)).unwrap() - 0.25).abs() < 1e-15);
        // eps > C is rejected.
        assert!(divergence_bound(&p(2.0, 0.0, 0.5, 1)).is_err());
    }

    #[test]
    fn ode_bound_values() {
        let p = |b, c, eps| InequalityParams::divergence(b, c, eps, 1).unwrap();
        assert!((ode_bound(&p(2.0, 0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (ode_bound(&p(8.0, -1.0, -1.0)).unwrap() - 8.0_f64.sqrt()).abs() < 1e-12
        );
        assert!(ode_bound(&p(2.0, -1.5, -1.5)).is_err());
        // n=1 coincidence with the divergence bound (kappa_1 = 1/2).
        for &(b, c, eps) in &[(2.0, 0.0, 0.0), (3.0, 0.5, 0.25), (1.0, -0.5, -0.75)] {
            let pp = p(b, c, eps);
            assert!(
                (ode_bound(&pp).unwrap() - divergence_bound(&pp).unwrap()).abs() < 1e-14
            );
        }
    }

    #[test]
    fn inverse_radii_values() {
        let ir = inverse_radii(2.0).unwrap();
        assert!((ir.eta - 0.75).abs() < 1e-15);
        assert!((ir.s - 0.75).abs() < 1e-15);
        let ir = inverse_radii(1.9).unwrap();
        assert!((ir.eta - 0.7125).abs() < 1e-15);
        assert!((ir.s - 10.83 / 20.68).abs() < 1e-12);
        // Just below the threshold.
        assert!(inverse_radii(1.885).is_err());
        assert!(inverse_radii(2.1).is_err());
    }

    #[test]
    fn inverse_radii_regime_sweep() {
        let mut r = INVERSE_RADIUS_THRESHOLD + 1e-6;
        while r <= 2.0 {
            let ir = inverse_radii(r).unwrap();
            assert!(ir.s > 0.5, "s must exceed 1/2 at r={r}");
            let q = 4.0 * ir.eta * ir.eta - 3.0 * r * ir.eta + 2.0;
            assert!(q < 0.0, "4 eta^2 - 3 r eta + 2 must be negative at r={r}");
            assert!(ir.eta_root_lo < ir.eta && ir.eta < ir.eta_root_hi);
            r += 0.001;
        }
    }

    #[test]
    fn schwarz_pick_radius_values() {
        // delta = 1 collapses to the identity scaling s = eta.
        for &t in &[0.1, 0.3, 0.6, 0.9] {
            assert!((schwarz_pick_radius(1.0, t).unwrap() - t).abs() < 1e-14);
        }
        assert!((schwarz_pick_radius(0.95, 0.5).unwrap() - 0.225 / 0.525).abs() < 1e-12);
        // Substitution consistency with inverse_radii.
        for &r in &[1.89, 1.93, 2.0] {
            let ir = inverse_radii(r).unwrap();
            let s = schwarz_pick_radius(r / 2.0, 3.0 * r / 8.0).unwrap();
            assert!((s - ir.s).abs() < 1e-13);
        }
        assert!(schwarz_pick_radius(0.5, 0.5).is_err());
        assert!(schwarz_pick_radius(1.1, 0.5).is_err());
    }

    #[test]
    fn pseudo_disk_values() {
        let (c, r) = pseudo_disk(Complex64::new(0.0, 0.0), 0.3).unwrap();
        assert!(c.norm() < 1e-15 && (r - 0.3).abs() < 1e-15);
        let (c, r) = pseudo_disk(Complex64::new(0.5, 0.0), 0.5).unwrap();
        assert!((c.re - 0.4).abs() < 1e-15 && c.im.abs() < 1e-15);
        assert!((r - 0.4).abs() < 1e-15);
        assert!(pseudo_disk(Complex64::new(1.0, 0.0), 0.5).is_err());
        assert!(pseudo_disk(Complex64::new(0.3, 0.0), 1.0).is_err());
    }

    /// Boundary-sampling oracle: points at pseudohyperbolic distance exactly r
    /// from z0 (images of |w| = r under the disk automorphism fixing z0) must
    /// lie on the returned Euclidean circle.
    #[test]
    fn pseudo_disk_boundary_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let rho: f64 = rng.gen_range(0.0..0.95);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let z0 = Complex64::from_polar(rho, phi);
            let r: f64 = rng.gen_range(0.05..0.95);
            let (center, radius) = pseudo_disk(z0, r).unwrap();
            for k in 0..64 {
                let t = std::f64::consts::TAU * k as f64 / 64.0;
                let w = Complex64::from_polar(r, t);
                // Automorphism sending 0 to z0 is an isometry of the
                // pseudohyperbolic distance, so this point is at distance r.
                let z = (w + z0) / (Complex64::new(1.0, 0.0) + z0.conj() * w);
                assert!(
                    ((z - center).norm() - radius).abs() < 1e-9,
                    "boundary point off circle for z0={z0}, r={r}"
                );
            }
        }
    }

    #[test]
    fn constants_report_rejects_nonpositive() {
        assert!(ConstantsReport::new("bad", -1.0, BTreeMap::new(), "x").is_err());
        assert!(ConstantsReport::new("bad", f64::NAN, BTreeMap::new(), "x").is_err());
    }

    #[test]
    fn constants_table_serializes() {
        let p = InequalityParams::new(0.5, 2.0, 2.0, 0.0, 0.0, 2).unwrap();
        let rows = constants_table(&p, 1.9).unwrap();
        assert!(rows.len() >= 6);
        let json = serde_json::to_string(&rows).unwrap();
        assert!(json.contains("\"formula_id\""));
        assert!(json.contains("\"inputs\""));
    }

    proptest! {
        #[test]
        fn s_alpha_positive_on_grid(a in 0.001f64..0.99) {
            let s = s_alpha(a).unwrap();
            prop_assert!(s > 0.0 && s.is_finite());
        }

        #[test]
        fn s_alpha_ln_finite_in_the_tail(a in 0.99f64..0.9999) {
            prop_assert!(s_alpha_ln(a).unwrap().is_finite());
        }

        #[test]
        fn gamma_star_branch(a in 0.001f64..0.999) {
            let g = gamma_star(a).unwrap();
            prop_assert!(g >= 2.0);
            if a < 2.0 / 3.0 {
                prop_assert_eq!(g, 2.0);
            } else if a > 2.0 / 3.0 + 1e-12 {
                prop_assert!(g > 2.0);
            }
        }

        #[test]
        fn schwarz_pick_monotone_in_delta(
            eta in 0.05f64..0.6,
            d1 in 0.61f64..0.9,
            bump in 0.01f64..0.09,
        ) {
            let s1 = schwarz_pick_radius(d1, eta).unwrap();
            let s2 = schwarz_pick_radius(d1 + bump, eta).unwrap();
            prop_assert!(s2 > s1);
        }
    }
}
