//! Discrete fields on disks and balls.
//!
//! Complex fields live on a polar grid over a disk: one origin node plus an
//! `n_r x n_t` lattice with cell-centered rings at `r_i = (i - 1/2) dr`, so
//! every node owns a full annular sector with the node at its (r, theta)
//! midpoint and the cells tile the disk exactly. Scalar fields in n
//! dimensions live on a uniform Cartesian lattice over the unit ball with
//! outside nodes masked.
//!
//! Radial derivatives use central differences (non-uniform three-point
//! weights on the first ring against the origin node, second-order
//! one-sided on the outermost ring, an averaged ring stencil at the
//! origin). Angular derivatives use a five-point stencil whose weights
//! reproduce the first and second angular harmonics exactly, so every
//! derivative operator here is exact on polynomials in (x, y) of
//! degree <= 2.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Polar grid over the disk of a given radius.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    radius: f64,
    n_r: usize,
    n_t: usize,
    dr: f64,
    dt: f64,
    // Angular stencil weights: first derivative a1*(f[j+1]-f[j-1]) +
    // b1*(f[j+2]-f[j-2]); second derivative a2, b2 on the symmetric sums.
    a1: f64,
    b1: f64,
    a2: f64,
    b2: f64,
}

impl PolarGrid {
    pub fn new(radius: f64, n_r: usize, n_t: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Param {
                name: "radius",
                constraint: "radius > 0",
                got: radius,
            });
        }
        if n_r < 8 {
            return Err(Error::Grid(format!("n_r = {n_r} below the minimum of 8")));
        }
        if n_t < 16 {
            return Err(Error::Grid(format!("n_t = {n_t} below the minimum of 16")));
        }
        if n_r * n_t > 1 << 26 {
            return Err(Error::Grid(format!(
                "grid {n_r} x {n_t} exceeds the node budget"
            )));
        }
        let dt = TAU / n_t as f64;
        // Solve the 2x2 systems making the angular stencils exact on the
        // harmonics k = 1, 2 (and hence on quadratics in x, y).
        let solve2 = |m11: f64, m12: f64, m21: f64, m22: f64, r1: f64, r2: f64| {
            let det = m11 * m22 - m12 * m21;
            ((r1 * m22 - r2 * m12) / det, (m11 * r2 - m21 * r1) / det)
        };
        let (a1, b1) = solve2(
            2.0 * dt.sin(),
            2.0 * (2.0 * dt).sin(),
            2.0 * (2.0 * dt).sin(),
            2.0 * (4.0 * dt).sin(),
            1.0,
            2.0,
        );
        let c = |k: f64| 2.0 * ((k * dt).cos() - 1.0);
        let (a2, b2) = solve2(c(1.0), c(2.0), c(2.0), c(4.0), -1.0, -4.0);
        Ok(Self {
            radius,
            n_r,
            n_t,
            dr: radius / n_r as f64,
            dt,
            a1,
            b1,
            a2,
            b2,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn n_r(&self) -> usize {
        self.n_r
    }
    pub fn n_t(&self) -> usize {
        self.n_t
    }
    pub fn dr(&self) -> f64 {
        self.dr
    }
    pub fn dtheta(&self) -> f64 {
        self.dt
    }

    /// Mesh size used for O(h) tolerance scaling.
    pub fn h(&self) -> f64 {
        self.dr.max(self.radius * self.dt)
    }

    /// Lattice nodes plus the single origin node.
    pub fn node_count(&self) -> usize {
        1 + self.n_r * self.n_t
    }

    #[inline]
    pub fn index(&self, ring: usize, j: usize) -> usize {
        debug_assert!(ring >= 1 && ring <= self.n_r);
        1 + (ring - 1) * self.n_t + (j % self.n_t)
    }

    /// (ring, angular index) of a node; the origin is ring 0.
    #[inline]
    pub fn ring_of(&self, idx: usize) -> (usize, usize) {
        if idx == 0 {
            (0, 0)
        } else {
            ((idx - 1) / self.n_t + 1, (idx - 1) % self.n_t)
        }
    }

    /// Radius of a ring (cell-centered: `(i - 1/2) dr`).
    pub fn ring_radius(&self, ring: usize) -> f64 {
        if ring == 0 {
            0.0
        } else {
            (ring as f64 - 0.5) * self.dr
        }
    }

    pub fn polar(&self, idx: usize) -> (f64, f64) {
        let (i, j) = self.ring_of(idx);
        (self.ring_radius(i), j as f64 * self.dt)
    }

    pub fn point(&self, idx: usize) -> Complex64 {
        let (r, t) = self.polar(idx);
        Complex64::from_polar(r, t)
    }

    /// True for nodes off the outermost ring.
    pub fn is_interior(&self, idx: usize) -> bool {
        self.ring_of(idx).0 < self.n_r
    }

    /// Radial extent of the annular cell owned by a ring; the rings tile
    /// the disk and the origin node is a pure evaluation point (empty cell).
    pub fn cell_radial_extent(&self, ring: usize) -> (f64, f64) {
        if ring == 0 {
            (0.0, 0.0)
        } else {
            ((ring - 1) as f64 * self.dr, ring as f64 * self.dr)
        }
    }

    /// Area of the cell owned by a node; cells tile the disk exactly.
    pub fn cell_area(&self, idx: usize) -> f64 {
        let (ring, _) = self.ring_of(idx);
        let (lo, hi) = self.cell_radial_extent(ring);
        0.5 * (hi * hi - lo * lo) * self.dt
    }
}

/// Complex-valued samples on a [`PolarGrid`].
#[derive(Debug, Clone)]
pub struct ComplexField {
    grid: PolarGrid,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn from_fn(grid: PolarGrid, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = (0..grid.node_count()).map(|i| f(grid.point(i))).collect();
        Self { grid, values }
    }

    pub fn constant(grid: PolarGrid, v: Complex64) -> Self {
        let values = vec![v; grid.node_count()];
        Self { grid, values }
    }

    pub fn from_values(grid: PolarGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Grid(format!(
                "value count {} does not match node count {}",
                values.len(),
                grid.node_count()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Grid("field contains non-finite values".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn value(&self, idx: usize) -> Complex64 {
        self.values[idx]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> ComplexField {
        ComplexField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip(&self, other: &ComplexField, f: impl Fn(Complex64, Complex64) -> Complex64) -> ComplexField {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        ComplexField {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn g(&self, ring: usize, j: usize) -> Complex64 {
        if ring == 0 {
            self.values[0]
        } else {
            self.values[self.grid.index(ring, j.rem_euclid(self.grid.n_t))]
        }
    }

    /// Radial derivative at a lattice node (ring >= 1). Ring 1 sits at
    /// dr/2 with the origin at distance dr/2 and ring 2 at distance dr, so
    /// it takes non-uniform three-point weights; both special stencils stay
    /// exact on quadratics.
    fn d_r(&self, ring: usize, j: usize) -> Complex64 {
        let dr = self.grid.dr;
        let n_r = self.grid.n_r;
        if ring == 1 {
            (-4.0 / 3.0 * self.g(0, j) + self.g(1, j) + self.g(2, j) / 3.0) / dr
        } else if ring < n_r {
            (self.g(ring + 1, j) - self.g(ring - 1, j)) / (2.0 * dr)
        } else {
            (3.0 * self.g(ring, j) - 4.0 * self.g(ring - 1, j) + self.g(ring - 2, j))
                / (2.0 * dr)
        }
    }

    fn d_rr(&self, ring: usize, j: usize) -> Complex64 {
        let dr2 = self.grid.dr * self.grid.dr;
        let n_r = self.grid.n_r;
        if ring == 1 {
            (8.0 / 3.0 * self.g(0, j) - 4.0 * self.g(1, j) + 4.0 / 3.0 * self.g(2, j)) / dr2
        } else if ring < n_r {
            (self.g(ring + 1, j) - 2.0 * self.g(ring, j) + self.g(ring - 1, j)) / dr2
        } else {
            (2.0 * self.g(ring, j) - 5.0 * self.g(ring - 1, j) + 4.0 * self.g(ring - 2, j)
                - self.g(ring - 3, j))
                / dr2
        }
    }

    fn d_t(&self, ring: usize, j: usize) -> Complex64 {
        let n_t = self.grid.n_t as isize;
        let at = |dj: isize| {
            let jj = (j as isize + dj).rem_euclid(n_t) as usize;
            self.values[self.grid.index(ring, jj)]
        };
        self.grid.a1 * (at(1) - at(-1)) + self.grid.b1 * (at(2) - at(-2))
    }

    fn d_tt(&self, ring: usize, j: usize) -> Complex64 {
        let n_t = self.grid.n_t as isize;
        let at = |dj: isize| {
            let jj = (j as isize + dj).rem_euclid(n_t) as usize;
            self.values[self.grid.index(ring, jj)]
        };
        let f0 = at(0);
        self.grid.a2 * (at(1) + at(-1) - 2.0 * f0) + self.grid.b2 * (at(2) + at(-2) - 2.0 * f0)
    }

    /// First-ring averaged stencils for the origin node.
    fn origin_dxy(&self) -> (Complex64, Complex64) {
        let n_t = self.grid.n_t;
        let r1 = self.grid.ring_radius(1);
        let mut sx = Complex64::default();
        let mut sy = Complex64::default();
        for j in 0..n_t {
            let t = j as f64 * self.grid.dt;
            let v = self.values[self.grid.index(1, j)];
            sx += t.cos() * v;
            sy += t.sin() * v;
        }
        let scale = 2.0 / (n_t as f64 * r1);
        (scale * sx, scale * sy)
    }

    fn derivative_field(&self, f: impl Fn(usize, usize) -> Complex64 + Sync, origin: Complex64) -> ComplexField {
        let n_t = self.grid.n_t;
        let mut values = vec![Complex64::default(); self.grid.node_count()];
        values[0] = origin;
        let lattice: Vec<Complex64> = (0..self.grid.n_r * n_t)
            .into_par_iter()
            .map(|k| f(k / n_t + 1, k % n_t))
            .collect();
        values[1..].copy_from_slice(&lattice);
        ComplexField {
            grid: self.grid.clone(),
            values,
        }
    }

    /// d/dx by the chain rule `cos(t) d_r - sin(t)/r d_t`.
    pub fn dx(&self) -> ComplexField {
        let (ox, _) = self.origin_dxy();
        self.derivative_field(
            |ring, j| {
                let r = self.grid.ring_radius(ring);
                let t = j as f64 * self.grid.dt;
                t.cos() * self.d_r(ring, j) - t.sin() / r * self.d_t(ring, j)
            },
            ox,
        )
    }

    /// d/dy by the chain rule `sin(t) d_r + cos(t)/r d_t`.
    pub fn dy(&self) -> ComplexField {
        let (_, oy) = self.origin_dxy();
        self.derivative_field(
            |ring, j| {
                let r = self.grid.ring_radius(ring);
                let t = j as f64 * self.grid.dt;
                t.sin() * self.d_r(ring, j) + t.cos() / r * self.d_t(ring, j)
            },
            oy,
        )
    }

    /// Wirtinger derivative d/dz̄ = (d/dx + i d/dy)/2; zero on holomorphic
    /// fields.
    pub fn dbar(&self) -> ComplexField {
        let (ox, oy) = self.origin_dxy();
        let i = Complex64::i();
        self.derivative_field(
            |ring, j| {
                let r = self.grid.ring_radius(ring);
                let t = j as f64 * self.grid.dt;
                let dxv = t.cos() * self.d_r(ring, j) - t.sin() / r * self.d_t(ring, j);
                let dyv = t.sin() * self.d_r(ring, j) + t.cos() / r * self.d_t(ring, j);
                0.5 * (dxv + i * dyv)
            },
            0.5 * (ox + i * oy),
        )
    }

    /// Wirtinger derivative d/dz = (d/dx - i d/dy)/2.
    pub fn dz(&self) -> ComplexField {
        let (ox, oy) = self.origin_dxy();
        let i = Complex64::i();
        self.derivative_field(
            |ring, j| {
                let r = self.grid.ring_radius(ring);
                let t = j as f64 * self.grid.dt;
                let dxv = t.cos() * self.d_r(ring, j) - t.sin() / r * self.d_t(ring, j);
                let dyv = t.sin() * self.d_r(ring, j) + t.cos() / r * self.d_t(ring, j);
                0.5 * (dxv - i * dyv)
            },
            0.5 * (ox - i * oy),
        )
    }

    /// Componentwise Laplacian `d_rr + d_r / r + d_tt / r^2`, with the
    /// averaged ring stencil `4 (mean - f(0)) / dr^2` at the origin.
    pub fn laplacian(&self) -> ComplexField {
        let n_t = self.grid.n_t;
        let mean1 = (0..n_t)
            .map(|j| self.values[self.grid.index(1, j)])
            .sum::<Complex64>()
            / n_t as f64;
        let r1 = self.grid.ring_radius(1);
        let origin = 4.0 / (r1 * r1) * (mean1 - self.values[0]);
        self.derivative_field(
            |ring, j| {
                let r = self.grid.ring_radius(ring);
                self.d_rr(ring, j) + self.d_r(ring, j) / r + self.d_tt(ring, j) / (r * r)
            },
            origin,
        )
    }

    /// Maximum of |value| with an argmax witness; ties break toward the
    /// lowest node index.
    pub fn sup_abs(&self) -> (f64, usize) {
        let mut best = (self.values[0].norm(), 0usize);
        for (i, v) in self.values.iter().enumerate().skip(1) {
            let a = v.norm();
            if a > best.0 {
                best = (a, i);
            }
        }
        best
    }

    /// Same maximum restricted to interior nodes.
    pub fn sup_abs_interior(&self) -> (f64, usize) {
        let mut best = (self.values[0].norm(), 0usize);
        for i in 1..self.values.len() {
            if !self.grid.is_interior(i) {
                continue;
            }
            let a = self.values[i].norm();
            if a > best.0 {
                best = (a, i);
            }
        }
        best
    }

    /// Cell-weighted quadrature over the sub-disk of the given radius; cells
    /// straddling the sub-disk boundary are clipped so constants integrate
    /// exactly.
    pub fn integrate(&self, region: f64) -> Result<Complex64> {
        if !(region > 0.0 && region <= self.grid.radius + 1e-12) {
            return Err(Error::Param {
                name: "region",
                constraint: "0 < region <= grid radius",
                got: region,
            });
        }
        let mut acc = Complex64::default();
        for idx in 0..self.grid.node_count() {
            let (ring, _) = self.grid.ring_of(idx);
            let (lo, hi) = self.grid.cell_radial_extent(ring);
            if lo >= region {
                continue;
            }
            let hi = hi.min(region);
            let area = if ring == 0 {
                std::f64::consts::PI * hi * hi
            } else {
                0.5 * (hi * hi - lo * lo) * self.grid.dt
            };
            acc += self.values[idx] * area;
        }
        Ok(acc)
    }

    /// CSV rows `r,theta,x,y,re,im` in node order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "r,theta,x,y,re,im")?;
        for idx in 0..self.grid.node_count() {
            let (r, t) = self.grid.polar(idx);
            let z = self.grid.point(idx);
            let v = self.values[idx];
            writeln!(
                w,
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                r, t, z.re, z.im, v.re, v.im
            )?;
        }
        Ok(())
    }
}

/// Real-valued samples on a uniform Cartesian lattice over the unit ball in
/// n dimensions. Nodes outside the closed ball are masked; the lattice is
/// odd-sized per axis so the origin is a node.
#[derive(Debug, Clone)]
pub struct ScalarFieldNd {
    dim: usize,
    m: usize,
    h: f64,
    values: Vec<f64>,
    inside: Vec<bool>,
}

impl ScalarFieldNd {
    pub fn sample(dim: usize, m: usize, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::sample_with_radius(dim, m, 1.0, f)
    }

    /// Samples on the lattice over [-1, 1]^n keeping nodes inside the ball
    /// of the given radius (at most 1).
    pub fn sample_with_radius(
        dim: usize,
        m: usize,
        radius: f64,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        if !(1..=5).contains(&dim) {
            return Err(Error::Grid(format!("dimension {dim} outside 1..=5")));
        }
        if m < 5 || m % 2 == 0 {
            return Err(Error::Grid(format!(
                "need an odd lattice size >= 5 per axis, got {m}"
            )));
        }
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::Param {
                name: "radius",
                constraint: "0 < radius <= 1",
                got: radius,
            });
        }
        let total = (m as u64).pow(dim as u32);
        if total > 40_000_000 {
            return Err(Error::Grid(format!(
                "lattice with {total} nodes exceeds the budget"
            )));
        }
        let total = total as usize;
        let h = 2.0 / (m as f64 - 1.0);
        let mut values = vec![0.0; total];
        let mut inside = vec![false; total];
        let mut coords = vec![0.0f64; dim];
        let mut idxs = vec![0usize; dim];
        for flat in 0..total {
            let mut rem = flat;
            let mut norm2 = 0.0;
            for d in (0..dim).rev() {
                idxs[d] = rem % m;
                rem /= m;
                coords[d] = -1.0 + idxs[d] as f64 * h;
                norm2 += coords[d] * coords[d];
            }
            if norm2 <= radius * radius + 1e-12 {
                inside[flat] = true;
                values[flat] = f(&coords);
            }
        }
        Ok(Self {
            dim,
            m,
            h,
            values,
            inside,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn nodes_per_axis(&self) -> usize {
        self.m
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn is_inside(&self, idx: usize) -> bool {
        self.inside[idx]
    }
    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        let mut rem = flat;
        let mut out = vec![0.0; self.dim];
        for d in (0..self.dim).rev() {
            out[d] = -1.0 + (rem % self.m) as f64 * self.h;
            rem /= self.m;
        }
        out
    }

    pub fn origin_index(&self) -> usize {
        let mut flat = 0usize;
        for _ in 0..self.dim {
            flat = flat * self.m + (self.m - 1) / 2;
        }
        flat
    }

    pub fn value_at_origin(&self) -> f64 {
        self.values[self.origin_index()]
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.dim];
        for d in (0..self.dim.saturating_sub(1)).rev() {
            s[d] = s[d + 1] * self.m;
        }
        s
    }

    fn axis_index(&self, flat: usize, d: usize, strides: &[usize]) -> usize {
        (flat / strides[d]) % self.m
    }

    /// Nodes whose full (2n+1)-point stencil stays inside the ball.
    pub fn stencil_interior(&self) -> Vec<bool> {
        let strides = self.strides();
        (0..self.values.len())
            .map(|flat| {
                if !self.inside[flat] {
                    return false;
                }
                (0..self.dim).all(|d| {
                    let k = self.axis_index(flat, d, &strides);
                    k > 0
                        && k + 1 < self.m
                        && self.inside[flat - strides[d]]
                        && self.inside[flat + strides[d]]
                })
            })
            .collect()
    }

    /// Inside nodes with at least one stencil neighbor off the ball.
    pub fn boundary_ring(&self) -> Vec<bool> {
        let interior = self.stencil_interior();
        (0..self.values.len())
            .map(|i| self.inside[i] && !interior[i])
            .collect()
    }

    /// Standard (2n+1)-point Laplacian; the result is meaningful (and marked
    /// inside) only on stencil-interior nodes.
    pub fn laplacian(&self) -> ScalarFieldNd {
        let strides = self.strides();
        let interior = self.stencil_interior();
        let h2 = self.h * self.h;
        let values = (0..self.values.len())
            .map(|flat| {
                if !interior[flat] {
                    return 0.0;
                }
                let mut acc = -2.0 * self.dim as f64 * self.values[flat];
                for d in 0..self.dim {
                    acc += self.values[flat - strides[d]] + self.values[flat + strides[d]];
                }
                acc / h2
            })
            .collect();
        ScalarFieldNd {
            dim: self.dim,
            m: self.m,
            h: self.h,
            values,
            inside: interior,
        }
    }

    /// Squared gradient magnitude from central differences; stencil-interior
    /// nodes only.
    pub fn gradient_sq(&self) -> ScalarFieldNd {
        let strides = self.strides();
        let interior = self.stencil_interior();
        let values = (0..self.values.len())
            .map(|flat| {
                if !interior[flat] {
                    return 0.0;
                }
                (0..self.dim)
                    .map(|d| {
                        let g = (self.values[flat + strides[d]] - self.values[flat - strides[d]])
                            / (2.0 * self.h);
                        g * g
                    })
                    .sum()
            })
            .collect();
        ScalarFieldNd {
            dim: self.dim,
            m: self.m,
            h: self.h,
            values,
            inside: interior,
        }
    }

    /// Maximum of |value| over unmasked nodes with an argmax witness; ties
    /// break toward the lowest node index.
    pub fn sup_abs(&self) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for (i, (&v, &ok)) in self.values.iter().zip(&self.inside).enumerate() {
            if ok && v.abs() > best.0 {
                best = (v.abs(), i);
            }
        }
        best
    }

    pub fn max(&self) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for (i, (&v, &ok)) in self.values.iter().zip(&self.inside).enumerate() {
            if ok && v > best.0 {
                best = (v, i);
            }
        }
        best
    }

    pub fn min(&self) -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, (&v, &ok)) in self.values.iter().zip(&self.inside).enumerate() {
            if ok && v < best.0 {
                best = (v, i);
            }
        }
        best
    }

    /// Midpoint quadrature over the sub-ball of the given radius.
    pub fn integrate(&self, region: f64) -> Result<f64> {
        if !(region > 0.0 && region <= 1.0 + 1e-12) {
            return Err(Error::Param {
                name: "region",
                constraint: "0 < region <= 1",
                got: region,
            });
        }
        let cell = self.h.powi(self.dim as i32);
        let mut acc = 0.0;
        for flat in 0..self.values.len() {
            if !self.inside[flat] {
                continue;
            }
            let norm2: f64 = self.coords(flat).iter().map(|x| x * x).sum();
            if norm2 <= region * region {
                acc += self.values[flat] * cell;
            }
        }
        Ok(acc)
    }

    /// CSV rows `x1,...,xn,value` over unmasked nodes.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let header: Vec<String> = (1..=self.dim).map(|d| format!("x{d}")).collect();
        writeln!(w, "{},value", header.join(","))?;
        for flat in 0..self.values.len() {
            if !self.inside[flat] {
                continue;
            }
            let coords = self.coords(flat);
            let cs: Vec<String> = coords.iter().map(|x| format!("{x:.12e}")).collect();
            writeln!(w, "{},{:.12e}", cs.join(","), self.values[flat])?;
        }
        Ok(())
    }
}
