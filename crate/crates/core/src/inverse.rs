//! Quantitative holomorphic inverses: winding-number root counting on
//! contours, Schwarz-Pick lower bounds for disk self-maps, and certified
//! Newton inversion. The certificates operationalize the counting argument:
//! a delivered inverse value is backed by a winding count of exactly one
//! root of `f - w` inside the working disk.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{inverse_radii, schwarz_pick_radius};
use crate::report::{VerificationReport, Witness};

/// Minimum |f| on a contour below which root counting is refused.
const CONTOUR_FLOOR: f64 = 1e-9;
/// Newton target; comfortably under the 1e-12 round-trip guarantee.
const NEWTON_TOL: f64 = 1e-13;
/// Certificate contours sit at this fraction of the working radius,
/// keeping the counted root strictly interior.
const CERT_RADIUS_FACTOR: f64 = 0.999;

/// Polynomial (truncated power series) with complex coefficients and a
/// nominal domain radius.
#[derive(Debug, Clone)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
    pub radius: f64,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>, radius: f64) -> Self {
        let mut s = Self { coeffs, radius };
        s.trim();
        s
    }

    pub fn from_real(coeffs: &[f64], radius: f64) -> Self {
        Self::new(
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            radius,
        )
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&Complex64::default()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(Complex64::default());
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> PowerSeries {
        if self.coeffs.len() <= 1 {
            return PowerSeries::new(vec![Complex64::default()], self.radius);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        PowerSeries::new(coeffs, self.radius)
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        PowerSeries::new(coeffs, self.radius.min(other.radius))
    }

    pub fn scale(&self, c: Complex64) -> PowerSeries {
        PowerSeries::new(self.coeffs.iter().map(|&a| a * c).collect(), self.radius)
    }

    pub fn shift_constant(&self, c: Complex64) -> PowerSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += c;
        PowerSeries::new(coeffs, self.radius)
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let mut coeffs = vec![Complex64::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PowerSeries::new(coeffs, self.radius.min(other.radius))
    }

    /// Polynomial composition self(other(z)); degrees multiply.
    pub fn compose(&self, other: &PowerSeries) -> PowerSeries {
        let mut acc = PowerSeries::new(vec![Complex64::default()], other.radius);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(other).shift_constant(c);
        }
        acc
    }

    /// f(c z): coefficient k picks up c^k.
    pub fn scale_argument(&self, c: Complex64) -> PowerSeries {
        let mut factor = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let out = a * factor;
                factor *= c;
                out
            })
            .collect();
        PowerSeries::new(coeffs, self.radius)
    }

    /// Truncate to the given degree (inclusive).
    pub fn truncate(&self, degree: usize) -> PowerSeries {
        PowerSeries::new(
            self.coeffs.iter().copied().take(degree + 1).collect(),
            self.radius,
        )
    }
}

/// Circle contour with uniform samples.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContourSpec {
    pub center_re: f64,
    pub center_im: f64,
    pub radius: f64,
    pub n_samples: usize,
}

impl ContourSpec {
    pub fn circle(center: Complex64, radius: f64, n_samples: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Param {
                name: "radius",
                constraint: "radius > 0",
                got: radius,
            });
        }
        if n_samples < 64 {
            return Err(Error::Param {
                name: "n_samples",
                constraint: "n_samples >= 64",
                got: n_samples as f64,
            });
        }
        Ok(Self {
            center_re: center.re,
            center_im: center.im,
            radius,
            n_samples,
        })
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.center_re, self.center_im)
    }

    pub fn point(&self, k: usize) -> Complex64 {
        let t = std::f64::consts::TAU * k as f64 / self.n_samples as f64;
        self.center() + Complex64::from_polar(self.radius, t)
    }
}

/// Root count of f inside a contour with the evidence that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct WindingCertificate {
    pub contour: ContourSpec,
    pub count: i64,
    pub min_abs_on_contour: f64,
}

/// Zero count inside the contour from the trapezoid quadrature of the
/// logarithmic derivative, `(1/2 pi i) ∮ f'/f dz`. Rejects when f comes
/// within [`CONTOUR_FLOOR`] of zero on the samples (a root too close to the
/// contour) or when the quadrature lands further than 0.1 from an integer
/// (under-resolved; raise `n_samples`).
pub fn winding_zero_count(f: &PowerSeries, contour: &ContourSpec) -> Result<WindingCertificate> {
    let fp = f.derivative();
    let n = contour.n_samples;
    let mut acc = Complex64::default();
    let mut min_abs = f64::INFINITY;
    for k in 0..n {
        let z = contour.point(k);
        let fz = f.eval(z);
        min_abs = min_abs.min(fz.norm());
        // dz = i (z - center) dtheta for the circle.
        let dz = Complex64::i() * (z - contour.center());
        acc += fp.eval(z) / fz * dz;
    }
    if min_abs <= CONTOUR_FLOOR {
        return Err(Error::ContourNearZero {
            min_abs,
            threshold: CONTOUR_FLOOR,
        });
    }
    let winding = acc / (n as f64) / Complex64::i();
    let count = winding.re.round();
    if (winding - count).norm() > 0.1 {
        return Err(Error::WindingNotInteger {
            value_re: winding.re,
            value_im: winding.im,
        });
    }
    Ok(WindingCertificate {
        contour: *contour,
        count: count as i64,
        min_abs_on_contour: min_abs,
    })
}

/// Checks the disk self-map hypotheses `f(0) = 0`, `|f'(0)| = delta`,
/// `|f| <= 1` on a dense boundary sample.
fn check_disk_map_hypotheses(f: &PowerSeries, delta: f64) -> Result<()> {
    if f.coeff(0).norm() > 1e-12 {
        return Err(Error::Hypothesis(format!(
            "f(0) = {} is not zero",
            f.coeff(0)
        )));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Param {
            name: "delta",
            constraint: "0 < delta <= 1",
            got: delta,
        });
    }
    if (f.coeff(1).norm() - delta).abs() > 1e-10 {
        return Err(Error::Hypothesis(format!(
            "|f'(0)| = {} does not match delta = {delta}",
            f.coeff(1).norm()
        )));
    }
    for k in 0..1024 {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 1024.0);
        let v = f.eval(z).norm();
        if v > 1.0 + 1e-9 {
            return Err(Error::Hypothesis(format!(
                "|f| = {v} at a boundary sample; f does not map the disk into itself"
            )));
        }
    }
    Ok(())
}

/// Verifies the linear lower bound `|f(z)| > ((delta - eta)/(1 - eta delta)) |z|`
/// on sampled |z| < eta, and the sharper pointwise bound
/// `|f(z)| >= ((delta - |z|)/(1 - |z| delta)) |z|`, for a disk self-map
/// fixing the origin with |f'(0)| = delta. The sampled hypotheses are
/// recorded, not proven.
pub fn schwarz_pick_lower(f: &PowerSeries, delta: f64, eta: f64) -> Result<VerificationReport> {
    check_disk_map_hypotheses(f, delta)?;
    if !(eta > 0.0 && eta < delta) {
        return Err(Error::Param {
            name: "eta",
            constraint: "0 < eta < delta",
            got: eta,
        });
    }
    let linear = (delta - eta) / (1.0 - eta * delta);
    let mut margin_linear = f64::INFINITY;
    let mut margin_pointwise = f64::INFINITY;
    let mut violations = 0usize;
    let mut witness: Option<Witness> = None;
    for ir in 1..=24 {
        let r = eta * ir as f64 / 24.0 * (1.0 - 1e-9);
        for it in 0..64 {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * it as f64 / 64.0);
            let v = f.eval(z).norm();
            let m1 = v - linear * r;
            let m2 = v - (delta - r) / (1.0 - r * delta) * r;
            if m1 < margin_linear {
                margin_linear = m1;
                witness = Some(Witness {
                    location: vec![z.re, z.im],
                    value: v,
                });
            }
            margin_pointwise = margin_pointwise.min(m2);
            if m1 <= 0.0 || m2 < -1e-12 {
                violations += 1;
            }
        }
    }
    let margin = margin_linear.min(margin_pointwise + 1e-12);
    let mut report = VerificationReport::from_margin(
        "schwarz-pick-lower",
        margin,
        1e-12,
        BTreeMap::from([("delta".to_string(), delta), ("eta".to_string(), eta)]),
        witness,
        format!(
            "linear margin {margin_linear:.3e}, pointwise margin {margin_pointwise:.3e}, \
             {violations} violating samples; disk-map hypothesis sampled at 1024 boundary points"
        ),
    );
    if violations > 0 {
        report.passed = false;
        report.status = crate::report::CheckStatus::Fail;
    }
    Ok(report)
}

/// Certified inverse of a disk self-map on the radius guaranteed by the
/// Schwarz-Pick bound: each requested target is found by damped Newton and
/// certified by a winding count of exactly one root.
#[derive(Debug)]
pub struct InverseMap {
    f: PowerSeries,
    fprime: PowerSeries,
    eta: f64,
    s: f64,
    cert_radius: f64,
}

/// One certified inversion.
#[derive(Debug, Clone)]
pub struct Inversion {
    pub z: Complex64,
    pub newton_iterations: usize,
    pub certificate: WindingCertificate,
}

/// Builds the certified inverse map for targets in the disk of radius
/// `s = ((delta - eta)/(1 - eta delta)) eta`.
pub fn injective_inverse(f: &PowerSeries, delta: f64, eta: f64) -> Result<InverseMap> {
    check_disk_map_hypotheses(f, delta)?;
    let s = schwarz_pick_radius(delta, eta)?;
    Ok(InverseMap {
        fprime: f.derivative(),
        f: f.clone(),
        eta,
        s,
        cert_radius: CERT_RADIUS_FACTOR * eta,
    })
}

impl InverseMap {
    pub fn guaranteed_radius(&self) -> f64 {
        self.s
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The unique z in the eta-disk with f(z) = w, for |w| < s.
    pub fn invert(&self, w: Complex64) -> Result<Inversion> {
        if w.norm() >= self.s {
            return Err(Error::Param {
                name: "w",
                constraint: "|w| < s (guaranteed coverage radius)",
                got: w.norm(),
            });
        }
        let mut z = w / self.f.coeff(1);
        let mut residual = (self.f.eval(z) - w).norm();
        let mut iterations = 0;
        for _ in 0..64 {
            if residual <= NEWTON_TOL {
                break;
            }
            iterations += 1;
            let step = (self.f.eval(z) - w) / self.fprime.eval(z);
            // Damping: halve until the residual actually drops.
            let mut lambda = 1.0;
            let mut accepted = false;
            while lambda > 1e-6 {
                let cand = z - lambda * step;
                let r = (self.f.eval(cand) - w).norm();
                if r < residual {
                    z = cand;
                    residual = r;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if residual > NEWTON_TOL {
            return Err(Error::NewtonStalled {
                target_re: w.re,
                target_im: w.im,
                last_residual: residual,
                iterations,
            });
        }
        if z.norm() >= self.eta {
            // The certificate only counts roots inside the working disk; a
            // root found outside it is not the one being certified.
            return Err(Error::NewtonStalled {
                target_re: w.re,
                target_im: w.im,
                last_residual: z.norm(),
                iterations,
            });
        }
        let contour = ContourSpec::circle(Complex64::default(), self.cert_radius, 512)?;
        let shifted = self.f.shift_constant(-w);
        let certificate = winding_zero_count(&shifted, &contour)?;
        if certificate.count != 1 {
            return Err(Error::CertificateMismatch {
                expected: 1,
                found: certificate.count,
            });
        }
        Ok(Inversion {
            z,
            newton_iterations: iterations,
            certificate,
        })
    }
}

/// Right inverse `phi` on the closed unit disk for a holomorphic
/// `z1 : D_r -> D_2` with `z1(0) = 0`, `z1'(0) = 1`, built through the
/// rescaling `f(z) = z1(r z)/2` with `delta = r/2` and `eta = 3r/8`; then
/// `phi(z) = r psi(z/2)` satisfies `z1(phi(z)) = z`.
#[derive(Debug)]
pub struct DiskRightInverse {
    inner: InverseMap,
    r: f64,
}

pub fn disk_right_inverse(z1: &PowerSeries, r: f64) -> Result<DiskRightInverse> {
    let radii = inverse_radii(r)?; // enforces 4*sqrt(2)/3 < r <= 2
    if z1.coeff(0).norm() > 1e-12 {
        return Err(Error::Hypothesis(format!(
            "z1(0) = {} is not zero",
            z1.coeff(0)
        )));
    }
    if (z1.coeff(1) - 1.0).norm() > 1e-10 {
        return Err(Error::Hypothesis(format!(
            "z1'(0) = {} is not one",
            z1.coeff(1)
        )));
    }
    // Open-disk hypothesis sampled just inside the boundary circle.
    for k in 0..1024 {
        let z = Complex64::from_polar(r * (1.0 - 1e-6), std::f64::consts::TAU * k as f64 / 1024.0);
        let v = z1.eval(z).norm();
        if v >= 2.0 {
            return Err(Error::Hypothesis(format!(
                "|z1| = {v} at a sample near the radius-{r} circle; image leaves the target disk"
            )));
        }
    }
    let f = z1.scale_argument(Complex64::new(r, 0.0)).scale(0.5.into());
    let inner = injective_inverse(&f, r / 2.0, radii.eta)?;
    Ok(DiskRightInverse { inner, r })
}

impl DiskRightInverse {
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Certified coverage radius of the rescaled inverse; exceeds 1/2, so
    /// the unit disk in the original coordinates is covered.
    pub fn guaranteed_radius(&self) -> f64 {
        self.inner.guaranteed_radius()
    }

    /// phi(z) = r psi(z/2) for z in the closed unit disk.
    pub fn phi(&self, z: Complex64) -> Result<Inversion> {
        let mut out = self.inner.invert(z / 2.0)?;
        out.z *= self.r;
        Ok(out)
    }

    /// Round-trip certification on a boundary-inclusive sample of the
    /// closed unit disk: `z1(phi(z)) = z` to the stated tolerance, with
    /// `|phi| < r` and the normalization phi(0) = 0, phi'(0) = 1.
    pub fn round_trip_report(
        &self,
        z1: &PowerSeries,
        n_samples: usize,
        tolerance: f64,
    ) -> Result<VerificationReport> {
        let rings = 8usize.max(n_samples / 32);
        let per_ring = n_samples.div_ceil(rings);
        let mut worst = 0.0f64;
        let mut phi_sup = 0.0f64;
        let mut witness = None;
        for ir in 1..=rings {
            let rad = ir as f64 / rings as f64; // includes |z| = 1
            for it in 0..per_ring {
                let z = Complex64::from_polar(rad, std::f64::consts::TAU * it as f64 / per_ring as f64);
                let inv = self.phi(z)?;
                phi_sup = phi_sup.max(inv.z.norm());
                let err = (z1.eval(inv.z) - z).norm();
                if err > worst {
                    worst = err;
                    witness = Some(Witness {
                        location: vec![z.re, z.im],
                        value: err,
                    });
                }
            }
        }
        let phi0 = self.phi(Complex64::default())?.z;
        // phi'(0) from a centered difference at a small offset.
        let h = 1e-6;
        let dphi = (self.phi(Complex64::new(h, 0.0))?.z - self.phi(Complex64::new(-h, 0.0))?.z)
            / (2.0 * h);
        let normalization = phi0.norm().max((dphi - 1.0).norm());
        let mut margin = tolerance - worst;
        if phi_sup >= self.r {
            margin = margin.min(self.r - phi_sup);
        }
        Ok(VerificationReport::from_margin(
            "inverse-round-trip",
            margin,
            0.0,
            BTreeMap::from([
                ("r".to_string(), self.r),
                ("eta".to_string(), self.inner.eta),
                ("s".to_string(), self.inner.s),
            ]),
            witness,
            format!(
                "max |z1(phi(z)) - z| = {worst:.3e} on {n_samples} samples, sup|phi| = {phi_sup:.6}, \
                 |phi(0)| = {:.2e}, |phi'(0) - 1| = {:.2e}",
                phi0.norm(),
                (dphi - 1.0).norm()
            ),
        )
        .with_witness(Witness {
            location: vec![0.0, 0.0],
            value: normalization,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn series(re: &[f64]) -> PowerSeries {
        PowerSeries::from_real(re, 1.0)
    }

    #[test]
    fn winding_counts_known_roots() {
        let unit = ContourSpec::circle(Complex64::default(), 1.0, 256).unwrap();
        // z^3: triple root at 0.
        let f = series(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(winding_zero_count(&f, &unit).unwrap().count, 3);
        // z - 0.9 inside radius 1/2: no roots.
        let f = series(&[-0.9, 1.0]);
        let half = ContourSpec::circle(Complex64::default(), 0.5, 256).unwrap();
        assert_eq!(winding_zero_count(&f, &half).unwrap().count, 0);
        // z^2 - 1/4: both roots inside the unit circle.
        let f = series(&[-0.25, 0.0, 1.0]);
        assert_eq!(winding_zero_count(&f, &unit).unwrap().count, 2);
    }

    #[test]
    fn winding_rejects_roots_on_contour() {
        let unit = ContourSpec::circle(Complex64::default(), 1.0, 256).unwrap();
        // Root exactly on a sample point.
        let f = series(&[-1.0, 1.0]);
        match winding_zero_count(&f, &unit) {
            Err(Error::ContourNearZero { .. }) => {}
            other => panic!("expected contour rejection, got {other:?}"),
        }
    }

    /// Root-count additivity on products with roots off the contour.
    #[test]
    fn winding_additive_over_products() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        let unit = ContourSpec::circle(Complex64::default(), 1.0, 1024).unwrap();
        for _ in 0..30 {
            let roots_f: Vec<Complex64> = (0..rng.gen_range(1..4))
                .map(|_| Complex64::from_polar(rng.gen_range(0.05..1.8), rng.gen_range(0.0..6.28)))
                .collect();
            let roots_g: Vec<Complex64> = (0..rng.gen_range(1..4))
                .map(|_| Complex64::from_polar(rng.gen_range(0.05..1.8), rng.gen_range(0.0..6.28)))
                .collect();
            if roots_f
                .iter()
                .chain(&roots_g)
                .any(|r| (r.norm() - 1.0).abs() < 0.05)
            {
                continue;
            }
            let poly = |roots: &[Complex64]| {
                let mut p = PowerSeries::new(vec![Complex64::new(1.0, 0.0)], 2.0);
                for &r in roots {
                    p = p.mul(&PowerSeries::new(vec![-r, Complex64::new(1.0, 0.0)], 2.0));
                }
                p
            };
            let (pf, pg) = (poly(&roots_f), poly(&roots_g));
            let nf = winding_zero_count(&pf, &unit).unwrap().count;
            let ng = winding_zero_count(&pg, &unit).unwrap().count;
            let nfg = winding_zero_count(&pf.mul(&pg), &unit).unwrap().count;
            assert_eq!(nfg, nf + ng);
            let expected: i64 = roots_f
                .iter()
                .chain(&roots_g)
                .filter(|r| r.norm() < 1.0)
                .count() as i64;
            assert_eq!(nfg, expected);
        }
    }

    /// |g| < |f| on the contour leaves the count of f + g unchanged.
    #[test]
    fn dominated_perturbation_preserves_count() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(22);
        let unit = ContourSpec::circle(Complex64::default(), 1.0, 1024).unwrap();
        let mut tested = 0;
        while tested < 50 {
            let deg = rng.gen_range(1..5);
            let mut coeffs: Vec<Complex64> = (0..=deg)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            coeffs[deg] += Complex64::new(2.0, 0.0); // keep the degree honest
            let f = PowerSeries::new(coeffs, 2.0);
            let min_f = (0..1024)
                .map(|k| f.eval(unit.point(k)).norm())
                .fold(f64::INFINITY, f64::min);
            if min_f < 0.05 {
                continue;
            }
            // A perturbation strictly dominated on the contour.
            let g = PowerSeries::new(
                vec![
                    Complex64::new(rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)) * min_f,
                    Complex64::new(rng.gen_range(-0.2..0.2), 0.0) * min_f,
                ],
                2.0,
            );
            let max_g = (0..1024)
                .map(|k| g.eval(unit.point(k)).norm())
                .fold(0.0, f64::max);
            assert!(max_g < min_f);
            let nf = winding_zero_count(&f, &unit).unwrap().count;
            let nfg = winding_zero_count(&f.add(&g), &unit).unwrap().count;
            assert_eq!(nf, nfg, "perturbation changed the count");
            tested += 1;
        }
    }

    #[test]
    fn schwarz_pick_bounds_hold() {
        // f = delta z: both bounds hold with strict margin.
        let f = series(&[0.0, 0.6]);
        let rep = schwarz_pick_lower(&f, 0.6, 0.4).unwrap();
        assert!(rep.passed, "{}", rep.notes);

        // Blaschke-type extremal f = z (z + delta)/(1 + delta z): along the
        // negative real axis the pointwise bound is an equality, and at
        // |z| = eta the linear bound is attained exactly.
        let delta = 0.7;
        let eta = 0.5;
        let bound = (delta - eta) / (1.0 - eta * delta);
        let mut min_ratio = f64::INFINITY;
        for k in 1..=200 {
            let z = Complex64::new(-eta * k as f64 / 200.0, 0.0);
            let v = z * (z + delta) / (Complex64::new(1.0, 0.0) + delta * z);
            min_ratio = min_ratio.min(v.norm() / z.norm());
        }
        assert!((min_ratio - bound).abs() < 1e-12, "extremal case is tight");
    }

    #[test]
    fn schwarz_pick_rejects_bad_hypotheses() {
        // f(0) != 0.
        let f = series(&[0.1, 0.6]);
        assert!(matches!(
            schwarz_pick_lower(&f, 0.6, 0.3),
            Err(Error::Hypothesis(_))
        ));
        // Not a self-map of the disk.
        let f = series(&[0.0, 0.9, 0.9]);
        assert!(matches!(
            schwarz_pick_lower(&f, 0.9, 0.5),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn inverse_of_identity() {
        let f = series(&[0.0, 1.0]);
        let inv = injective_inverse(&f, 1.0, 0.8).unwrap();
        for &(re, im) in &[(0.1, 0.0), (-0.3, 0.2), (0.0, 0.5)] {
            let w = Complex64::new(re, im);
            if w.norm() >= inv.guaranteed_radius() {
                continue;
            }
            let out = inv.invert(w).unwrap();
            assert!((out.z - w).norm() < 1e-12);
            assert_eq!(out.certificate.count, 1);
        }
    }

    /// Series-reversion oracle: the compositional inverse of f computed
    /// order by order must agree with Newton inversion well inside the
    /// certified radius.
    fn revert_series(f: &PowerSeries, order: usize) -> PowerSeries {
        let a1 = f.coeff(1);
        assert!(a1.norm() > 0.0, "need a simple zero at the origin");
        let mut g = PowerSeries::new(vec![Complex64::default(), 1.0 / a1], f.radius);
        for n in 2..=order {
            // Composition g(f) truncated at degree n should be z; the
            // deviation fixes the next coefficient via the leading term
            // a1^n z^n it contributes.
            let comp = g.compose(&f.truncate(n)).truncate(n);
            let defect = comp.coeff(n);
            let mut coeffs = g.coeffs.clone();
            coeffs.resize(n + 1, Complex64::default());
            coeffs[n] = -defect / a1.powu(n as u32);
            g = PowerSeries::new(coeffs, f.radius);
        }
        g
    }

    #[test]
    fn newton_matches_series_reversion() {
        // z + 0.1 z^2 scaled by 1/1.1 so the unit disk maps into itself.
        let delta = 1.0 / 1.1;
        let f = series(&[0.0, delta, 0.1 / 1.1]);
        let rev = revert_series(&f, 16);
        let inv = injective_inverse(&f, delta, 0.6 * delta).unwrap();
        for k in 0..40 {
            let w = Complex64::from_polar(0.3 * (k % 8 + 1) as f64 / 8.0, 0.7 * k as f64);
            let newton = inv.invert(w).unwrap().z;
            let series_z = rev.eval(w);
            assert!(
                (newton - series_z).norm() < 1e-10,
                "mismatch at w={w}: {newton} vs {series_z}"
            );
        }
    }

    #[test]
    fn inverse_rejects_outside_guaranteed_radius() {
        let f = series(&[0.0, 0.9]);
        let inv = injective_inverse(&f, 0.9, 0.5).unwrap();
        let s = inv.guaranteed_radius();
        assert!(inv.invert(Complex64::new(s + 0.01, 0.0)).is_err());
    }

    /// Round trips both ways on random in-regime polynomials.
    #[test]
    fn inverse_round_trips() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        let mut tested = 0;
        while tested < 20 {
            let delta: f64 = rng.gen_range(0.6..0.95);
            let mut coeffs = vec![Complex64::default(), Complex64::new(delta, 0.0)];
            for _ in 2..=rng.gen_range(2..7) {
                coeffs.push(Complex64::new(
                    rng.gen_range(-0.02..0.02),
                    rng.gen_range(-0.02..0.02),
                ));
            }
            let f = PowerSeries::new(coeffs, 1.0);
            if check_disk_map_hypotheses(&f, delta).is_err() {
                continue;
            }
            let eta = 0.6 * delta;
            let inv = injective_inverse(&f, delta, eta).unwrap();
            let s = inv.guaranteed_radius();
            for k in 0..25 {
                let w = Complex64::from_polar(
                    s * rng.gen_range(0.01..0.999),
                    rng.gen_range(0.0..6.28),
                );
                let z = inv.invert(w).unwrap().z;
                assert!((f.eval(z) - w).norm() < 1e-12, "f(psi(w)) != w at {k}");
            }
            // psi(f(z)) = z for z in a safe sub-disk of the eta-disk.
            for _ in 0..25 {
                let z = Complex64::from_polar(
                    rng.gen_range(0.0..0.5 * eta),
                    rng.gen_range(0.0..6.28),
                );
                let w = f.eval(z);
                if w.norm() >= s {
                    continue;
                }
                let back = inv.invert(w).unwrap().z;
                assert!((back - z).norm() < 1e-10, "psi(f(z)) != z");
            }
            tested += 1;
        }
    }

    #[test]
    fn disk_right_inverse_identity_and_perturbed() {
        // z1 = z with r = 1.9: phi is the identity.
        let z1 = PowerSeries::from_real(&[0.0, 1.0], 2.0);
        let inv = disk_right_inverse(&z1, 1.9).unwrap();
        assert!(inv.guaranteed_radius() > 0.5);
        for k in 0..16 {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 16.0);
            let out = inv.phi(z).unwrap();
            assert!((out.z - z).norm() < 1e-12);
        }
        let rep = inv.round_trip_report(&z1, 256, 1e-10).unwrap();
        assert!(rep.passed, "{}", rep.notes);

        // Perturbed map.
        let z1 = PowerSeries::from_real(&[0.0, 1.0, 0.01], 2.0);
        let inv = disk_right_inverse(&z1, 1.9).unwrap();
        let rep = inv.round_trip_report(&z1, 256, 1e-10).unwrap();
        assert!(rep.passed, "{}", rep.notes);
        assert!(rep.witness.is_some());
    }

    /// Certified coverage exceeds 1/2 across the admissible radius range,
    /// so the rescaled inverse always reaches the whole unit disk.
    #[test]
    fn coverage_exceeds_half_across_radii() {
        let z1 = PowerSeries::from_real(&[0.0, 1.0], 2.0);
        for &r in &[1.886, 1.91, 1.95, 2.0] {
            let inv = disk_right_inverse(&z1, r).unwrap();
            assert!(inv.guaranteed_radius() > 0.5, "s <= 1/2 at r={r}");
            let z = Complex64::new(-1.0, 0.0);
            assert!((z1.eval(inv.phi(z).unwrap().z) - z).norm() < 1e-11);
        }
    }

    #[test]
    fn disk_right_inverse_rejects_small_radius() {
        let z1 = PowerSeries::from_real(&[0.0, 1.0], 2.0);
        match disk_right_inverse(&z1, 1.5) {
            Err(Error::Param { constraint, .. }) => {
                assert!(constraint.contains("4*sqrt(2)/3"));
            }
            other => panic!("expected threshold rejection, got {other:?}"),
        }
    }

    /// Injectivity certificates for the perturbed map: 100 random targets,
    /// each counted exactly once.
    #[test]
    fn injectivity_certificates() {
        let z1 = PowerSeries::from_real(&[0.0, 1.0, 0.01], 2.0);
        let inv = disk_right_inverse(&z1, 1.9).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(24);
        for _ in 0..100 {
            let z = Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.28));
            let out = inv.phi(z).unwrap();
            assert_eq!(out.certificate.count, 1);
            assert!(out.certificate.min_abs_on_contour > 0.0);
        }
    }

    #[test]
    fn certificates_serialize() {
        let unit = ContourSpec::circle(Complex64::default(), 1.0, 256).unwrap();
        let f = series(&[0.0, 0.0, 1.0]);
        let cert = winding_zero_count(&f, &unit).unwrap();
        let json = serde_json::to_string(&cert).unwrap();
        assert!(json.contains("\"count\":2"));
        assert!(json.contains("min_abs_on_contour"));
    }
}
