//! Closed-form solution families with exact derivatives.
//!
//! Two piecewise-power families: the C^2 family solving `u'' = B |u|^eps`
//! (flat between the breakpoints, power growth outside) and the C^1 family
//! solving `u' = B |u|^alpha` (flat strip, positive branch to the right,
//! negative branch to the left). Both carry closed-form derivatives so
//! residual checks need no quadrature. A radial comparison profile
//! `v = M |x|^(2/(1-eps))` and the translation-invariant J-disk profile
//! built from the first-order family round out the set.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, PolarGrid};
use crate::params::{comparison_bound, s_alpha, InequalityParams};

/// Piecewise power function: zero on `[x_lo, x_hi]`, a power branch on each
/// side. Supports derivatives up to order 2 in closed form.
#[derive(Debug, Clone)]
pub struct PiecewisePower {
    x_lo: f64,
    x_hi: f64,
    amplitude: f64,
    exponent: f64,
    arg_scale: f64,
    c1: f64,
    c2: f64,
    left_sign: f64,
}

impl PiecewisePower {
    /// Breakpoints in the argument variable.
    pub fn breakpoints(&self) -> (f64, f64) {
        (self.x_lo, self.x_hi)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.deriv(x, 0)
    }

    /// Derivative of the given order (0, 1 or 2) at x, via the closed form.
    /// At the breakpoints the flat-piece value (zero) is returned.
    pub fn deriv(&self, x: f64, order: u32) -> f64 {
        assert!(order <= 2, "derivatives supported up to order 2");
        let (a, k, amp) = (self.arg_scale, self.exponent, self.amplitude);
        if x > self.x_hi {
            let t = a * x - self.c2;
            let mut factor = amp;
            for i in 0..order {
                factor *= (k - i as f64) * a;
            }
            factor * t.powf(k - order as f64)
        } else if x < self.x_lo {
            let t = self.c1 - a * x;
            let mut factor = self.left_sign * amp;
            for i in 0..order {
                factor *= -(k - i as f64) * a;
            }
            factor * t.powf(k - order as f64)
        } else {
            0.0
        }
    }

    /// One-sided derivative mismatch against the flat piece at the nearest
    /// breakpoint: the limit of the outer branch as the argument reaches 0.
    /// Zero when the exponent exceeds the order, the branch coefficient at
    /// equality, unbounded below.
    pub fn matching_defect(&self, order: u32) -> f64 {
        let (a, k) = (self.arg_scale, self.exponent);
        let mut factor = self.amplitude;
        for i in 0..order {
            factor *= (k - i as f64) * a;
        }
        let p = k - order as f64;
        if p > 0.0 {
            0.0
        } else if p == 0.0 {
            factor.abs()
        } else {
            f64::INFINITY
        }
    }

    /// Supremum of |u| over a closed interval, from the closed form: the
    /// branches are monotone away from the flat strip, so it is attained at
    /// an endpoint.
    pub fn sup_abs_on(&self, lo: f64, hi: f64) -> f64 {
        [lo, hi]
            .iter()
            .map(|&x| self.eval(x).abs())
            .fold(0.0, f64::max)
    }
}

/// C^2 family solving `u'' = B |u|^eps` away from the flat strip `[c1, c2]`:
/// `u = M (x - c2)^(2/(1-eps))` to the right, mirrored on the left, with the
/// one-dimensional comparison amplitude `M = (B(1-eps)^2/(2(1+eps)))^(1/(1-eps))`.
pub fn second_order_family(b: f64, epsilon: f64, c1: f64, c2: f64) -> Result<PiecewisePower> {
    if !(b > 0.0) {
        return Err(Error::Param {
            name: "B",
            constraint: "B > 0",
            got: b,
        });
    }
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::Param {
            name: "epsilon",
            constraint: "0 <= epsilon < 1",
            got: epsilon,
        });
    }
    if !(c1 < c2) {
        return Err(Error::Param {
            name: "c1",
            constraint: "c1 < c2",
            got: c1,
        });
    }
    let amp = (b * (1.0 - epsilon) * (1.0 - epsilon) / (2.0 * (1.0 + epsilon)))
        .powf(1.0 / (1.0 - epsilon));
    Ok(PiecewisePower {
        x_lo: c1,
        x_hi: c2,
        amplitude: amp,
        exponent: 2.0 / (1.0 - epsilon),
        arg_scale: 1.0,
        c1,
        c2,
        left_sign: 1.0,
    })
}

/// C^1 family solving `u' = B |u|^alpha`: flat on `[c1/B, c2/B]`,
/// `((1-alpha)(B x - c2))^(1/(1-alpha))` to the right and the negative
/// mirror branch to the left. The breakpoints sit where the stated
/// arguments vanish.
pub fn first_order_family(b: f64, alpha: f64, c1: f64, c2: f64) -> Result<PiecewisePower> {
    if !(b > 0.0) {
        return Err(Error::Param {
            name: "B",
            constraint: "B > 0",
            got: b,
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Param {
            name: "alpha",
            constraint: "0 < alpha < 1",
            got: alpha,
        });
    }
    if !(c1 < c2) {
        return Err(Error::Param {
            name: "c1",
            constraint: "c1 < c2",
            got: c1,
        });
    }
    let k = 1.0 / (1.0 - alpha);
    Ok(PiecewisePower {
        x_lo: c1 / b,
        x_hi: c2 / b,
        amplitude: (1.0 - alpha).powf(k),
        exponent: k,
        arg_scale: b,
        c1,
        c2,
        left_sign: -1.0,
    })
}

/// The radial profile `v(x) = M |x|^(2/(1-eps))` solving `lap v = B v^eps`
/// exactly in n dimensions, with `M` the comparison bound of the bundle.
#[derive(Debug, Clone, Copy)]
pub struct RadialComparison {
    m_bound: f64,
    exponent: f64,
    dim: u32,
    b: f64,
    epsilon: f64,
}

pub fn radial_comparison(p: &InequalityParams) -> Result<RadialComparison> {
    let m_bound = comparison_bound(p)?;
    Ok(RadialComparison {
        m_bound,
        exponent: 2.0 / (1.0 - p.epsilon()),
        dim: p.n(),
        b: p.b(),
        epsilon: p.epsilon(),
    })
}

impl RadialComparison {
    pub fn bound(&self) -> f64 {
        self.m_bound
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn value_radial(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        self.m_bound * r.powf(self.exponent)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.value_radial(x.iter().map(|v| v * v).sum::<f64>().sqrt())
    }

    /// Laplacian `M k (k + n - 2) r^(k-2)` with `k = 2/(1-eps)`.
    pub fn laplacian_radial(&self, r: f64) -> f64 {
        let k = self.exponent;
        if r == 0.0 {
            // k = 2 exactly when eps = 0; otherwise the power vanishes.
            return if (k - 2.0).abs() < 1e-15 {
                self.m_bound * k * (k + self.dim as f64 - 2.0)
            } else {
                0.0
            };
        }
        self.m_bound * k * (k + self.dim as f64 - 2.0) * r.powf(k - 2.0)
    }

    pub fn gradient_sq_radial(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        let g = self.m_bound * self.exponent * r.powf(self.exponent - 1.0);
        g * g
    }

    /// `lap v - B v^eps`; identically zero by construction.
    pub fn residual_radial(&self, r: f64) -> f64 {
        let v = self.value_radial(r);
        let veps = if v == 0.0 { 0.0 } else { v.powf(self.epsilon) };
        self.laplacian_radial(r) - self.b * veps
    }
}

/// J-holomorphic disk profile: the map `z -> (z, u(Re z))` where u solves
/// `u' = 2 |u|^alpha` with `u(0) = b > 0`. This is the right-hand branch of
/// the first-order family normalized by a `b^(1-alpha)` shift so the origin
/// value is exact; with the second component real and independent of y the
/// nonlinear Cauchy-Riemann system reduces to that ODE.
#[derive(Debug, Clone, Copy)]
pub struct ProfileDisk {
    alpha: f64,
    b: f64,
    radius: f64,
    x_flat: f64,
}

/// Builds the profile disk, rejecting configurations whose second component
/// leaves the target disk of radius `S_alpha` before the domain boundary.
pub fn profile_disk(b: f64, alpha: f64, domain_radius: f64) -> Result<ProfileDisk> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Param {
            name: "alpha",
            constraint: "0 < alpha < 1",
            got: alpha,
        });
    }
    if !(b > 0.0) {
        return Err(Error::Param {
            name: "b",
            constraint: "b > 0",
            got: b,
        });
    }
    if !(domain_radius > 0.0) {
        return Err(Error::Param {
            name: "domain_radius",
            constraint: "domain_radius > 0",
            got: domain_radius,
        });
    }
    let s = s_alpha(alpha)?;
    let one_m = 1.0 - alpha;
    let disk = ProfileDisk {
        alpha,
        b,
        radius: domain_radius,
        x_flat: -b.powf(one_m) / (2.0 * one_m),
    };
    if disk.u(domain_radius) >= s {
        let abscissa = (s.powf(one_m) - b.powf(one_m)) / (2.0 * one_m);
        return Err(Error::Escapes { abscissa, bound: s });
    }
    Ok(disk)
}

impl ProfileDisk {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn origin_value(&self) -> f64 {
        self.b
    }
    pub fn domain_radius(&self) -> f64 {
        self.radius
    }
    pub fn flat_abscissa(&self) -> f64 {
        self.x_flat
    }

    /// `u(x) = (2 (1-alpha) (x - x_flat))^(1/(1-alpha))` for `x >= x_flat`,
    /// zero to the left.
    pub fn u(&self, x: f64) -> f64 {
        if x <= self.x_flat {
            return 0.0;
        }
        let one_m = 1.0 - self.alpha;
        (2.0 * one_m * (x - self.x_flat)).powf(1.0 / one_m)
    }

    /// `u' = 2 |u|^alpha` exactly.
    pub fn u_prime(&self, x: f64) -> f64 {
        2.0 * self.u(x).powf(self.alpha)
    }

    /// Samples the two components `(z, u(Re z))` on a polar grid over the
    /// domain disk.
    pub fn fields(&self, n_r: usize, n_t: usize) -> Result<(ComplexField, ComplexField)> {
        let grid = PolarGrid::new(self.radius, n_r, n_t)?;
        let z1 = ComplexField::from_fn(grid.clone(), |z| z);
        let z2 = ComplexField::from_fn(grid, |z| Complex64::new(self.u(z.re), 0.0));
        Ok((z1, z2))
    }
}
