//! Periodic space-time tensor fields on `T^2 = [-pi, pi]^2`.
//!
//! A [`GridField`] stores complex samples of a scalar, vector or 2x2-matrix
//! valued field on a uniform `N x N` grid, one sample array per time node.
//! Spatial derivatives are spectral (exact for band-limited data), time
//! derivatives are 4th-order finite differences, and integrals are the
//! periodic trapezoid rule, which is spectrally accurate on the torus.

use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Tensor rank of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Scalar,
    Vector,
    Matrix,
}

impl Rank {
    pub fn components(self) -> usize {
        match self {
            Rank::Scalar => 1,
            Rank::Vector => 2,
            Rank::Matrix => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rank::Scalar => "scalar",
            Rank::Vector => "vector",
            Rank::Matrix => "matrix",
        }
    }
}

/// Spatial axis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

/// Uniform time grid `t_start, t_start + dt, ..., t_end`.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !(t_end > t_start) || steps == 0 {
            return Err(Error::InvalidParameter(format!(
                "time grid [{t_start}, {t_end}] with {steps} steps"
            )));
        }
        Ok(Self { t_start, t_end, steps })
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / self.steps as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..=self.steps).map(|i| self.t_start + dt * i as f64).collect()
    }
}

/// Grid coordinate of node `i` on an `n`-point axis of `[-pi, pi]`.
#[inline]
pub fn grid_coord(i: usize, n: usize) -> f64 {
    -PI + 2.0 * PI * i as f64 / n as f64
}

/// Integer wavenumber of FFT bin `j` on an `n`-point axis.
#[inline]
pub fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Complex tensor field sampled on `[-pi,pi]^2`, one slice per time node.
#[derive(Debug, Clone)]
pub struct GridField {
    rank: Rank,
    n: usize,
    times: Vec<f64>,
    vals: Vec<Complex64>,
}

impl GridField {
    pub fn zeros(rank: Rank, n: usize, times: Vec<f64>) -> Self {
        let len = times.len() * n * n * rank.components();
        Self { rank, n, times, vals: vec![Complex64::new(0.0, 0.0); len] }
    }

    /// Single-slice zero field at time `t`.
    pub fn zeros_slice(rank: Rank, n: usize, t: f64) -> Self {
        Self::zeros(rank, n, vec![t])
    }

    /// Samples `f(t, x1, x2, comp)` on the grid.
    pub fn from_fn<F>(rank: Rank, n: usize, times: Vec<f64>, mut f: F) -> Self
    where
        F: FnMut(f64, f64, f64, usize) -> Complex64,
    {
        let mut out = Self::zeros(rank, n, times);
        let nc = rank.components();
        for it in 0..out.times.len() {
            let t = out.times[it];
            for ix in 0..n {
                let x1 = grid_coord(ix, n);
                for iy in 0..n {
                    let x2 = grid_coord(iy, n);
                    for c in 0..nc {
                        let v = f(t, x1, x2, c);
                        out.set(it, ix, iy, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_slices(&self) -> usize {
        self.times.len()
    }

    #[inline]
    fn idx(&self, it: usize, ix: usize, iy: usize, c: usize) -> usize {
        debug_assert!(c < self.rank.components());
        ((it * self.n + ix) * self.n + iy) * self.rank.components() + c
    }

    /// Periodic accessor: indices wrap modulo `n`.
    #[inline]
    pub fn at(&self, it: usize, ix: i64, iy: i64, c: usize) -> Complex64 {
        let n = self.n as i64;
        let ix = ix.rem_euclid(n) as usize;
        let iy = iy.rem_euclid(n) as usize;
        self.vals[self.idx(it, ix, iy, c)]
    }

    #[inline]
    pub fn get(&self, it: usize, ix: usize, iy: usize, c: usize) -> Complex64 {
        self.vals[self.idx(it, ix, iy, c)]
    }

    #[inline]
    pub fn set(&mut self, it: usize, ix: usize, iy: usize, c: usize, v: Complex64) {
        let i = self.idx(it, ix, iy, c);
        self.vals[i] = v;
    }

    pub fn vals(&self) -> &[Complex64] {
        &self.vals
    }

    pub fn vals_mut(&mut self) -> &mut [Complex64] {
        &mut self.vals
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.times.len() != other.times.len() || self.rank != other.rank {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.times.len() != other.times.len() {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.vals.iter_mut().zip(&other.vals) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.vals.iter_mut().zip(&other.vals) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.vals.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for a in out.vals.iter_mut() {
            *a = a.conj();
        }
        out
    }

    /// Pointwise product with a scalar field (any rank on the left).
    pub fn mul_scalar_field(&self, s: &Self) -> Result<Self> {
        if s.rank != Rank::Scalar {
            return Err(Error::RankMismatch { expected: "scalar", got: s.rank.name() });
        }
        self.same_grid(s)?;
        let mut out = self.clone();
        let nc = self.rank.components();
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    let w = s.get(it, ix, iy, 0);
                    for c in 0..nc {
                        let i = out.idx(it, ix, iy, c);
                        out.vals[i] *= w;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Pointwise matrix product of two matrix fields.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.expect_rank(Rank::Matrix)?;
        other.expect_rank(Rank::Matrix)?;
        self.same_grid(other)?;
        let mut out = Self::zeros(Rank::Matrix, self.n, self.times.clone());
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    for r in 0..2 {
                        for col in 0..2 {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for k in 0..2 {
                                acc += self.get(it, ix, iy, 2 * r + k)
                                    * other.get(it, ix, iy, 2 * k + col);
                            }
                            out.set(it, ix, iy, 2 * r + col, acc);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Pointwise matrix-vector product.
    pub fn mat_vec(&self, v: &Self) -> Result<Self> {
        self.expect_rank(Rank::Matrix)?;
        v.expect_rank(Rank::Vector)?;
        self.same_grid(v)?;
        let mut out = Self::zeros(Rank::Vector, self.n, self.times.clone());
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    for r in 0..2 {
                        let acc = self.get(it, ix, iy, 2 * r) * v.get(it, ix, iy, 0)
                            + self.get(it, ix, iy, 2 * r + 1) * v.get(it, ix, iy, 1);
                        out.set(it, ix, iy, r, acc);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Result<Self> {
        self.expect_rank(Rank::Matrix)?;
        let mut out = self.clone();
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    let a = self.get(it, ix, iy, 1);
                    let b = self.get(it, ix, iy, 2);
                    out.set(it, ix, iy, 1, b);
                    out.set(it, ix, iy, 2, a);
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<Self> {
        self.expect_rank(Rank::Matrix)?;
        let mut out = Self::zeros(Rank::Scalar, self.n, self.times.clone());
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    let v = self.get(it, ix, iy, 0) + self.get(it, ix, iy, 3);
                    out.set(it, ix, iy, 0, v);
                }
            }
        }
        Ok(out)
    }

    pub fn det(&self) -> Result<Self> {
        self.expect_rank(Rank::Matrix)?;
        let mut out = Self::zeros(Rank::Scalar, self.n, self.times.clone());
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    let v = self.get(it, ix, iy, 0) * self.get(it, ix, iy, 3)
                        - self.get(it, ix, iy, 1) * self.get(it, ix, iy, 2);
                    out.set(it, ix, iy, 0, v);
                }
            }
        }
        Ok(out)
    }

    /// Extracts one component as a scalar field.
    pub fn component(&self, c: usize) -> Self {
        assert!(c < self.rank.components());
        let mut out = Self::zeros(Rank::Scalar, self.n, self.times.clone());
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    out.set(it, ix, iy, 0, self.get(it, ix, iy, c));
                }
            }
        }
        out
    }

    pub fn expect_rank(&self, rank: Rank) -> Result<()> {
        if self.rank != rank {
            return Err(Error::RankMismatch { expected: rank.name(), got: self.rank.name() });
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.vals.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Checks the `real` flag invariant: max imaginary part is at most
    /// `tol` times the max absolute value.
    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol * self.max_abs().max(f64::MIN_POSITIVE)
    }

    pub fn max_asymmetry(&self) -> Result<f64> {
        self.expect_rank(Rank::Matrix)?;
        let mut worst = 0.0f64;
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    let d = (self.get(it, ix, iy, 1) - self.get(it, ix, iy, 2)).norm();
                    worst = worst.max(d);
                }
            }
        }
        Ok(worst)
    }

    /// `(2 pi / N)^2` times the sample sum: the periodic trapezoid rule.
    pub fn integrate(&self, it: usize) -> Result<Complex64> {
        self.expect_rank(Rank::Scalar)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for ix in 0..self.n {
            for iy in 0..self.n {
                acc += self.get(it, ix, iy, 0);
            }
        }
        let h = 2.0 * PI / self.n as f64;
        Ok(acc * (h * h))
    }

    /// Mean over the slice (the `P_{=0}` projection for one component).
    pub fn mean(&self, it: usize, c: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ix in 0..self.n {
            for iy in 0..self.n {
                acc += self.get(it, ix, iy, c);
            }
        }
        acc / (self.n * self.n) as f64
    }

    /// Spectral derivative along `axis`, applied slice by slice.
    ///
    /// Exact for band-limited data with max frequency below `N/2`; the
    /// Nyquist bin gets a zero multiplier.
    pub fn diff(&self, axis: Axis) -> Self {
        let n = self.n;
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut out = self.clone();
        let nc = self.rank.components();
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for it in 0..self.times.len() {
            for c in 0..nc {
                for fixed in 0..n {
                    for j in 0..n {
                        line[j] = match axis {
                            Axis::X1 => self.get(it, j, fixed, c),
                            Axis::X2 => self.get(it, fixed, j, c),
                        };
                    }
                    fwd.process(&mut line);
                    for (j, v) in line.iter_mut().enumerate() {
                        let k = wavenumber(j, n);
                        let mult = if n % 2 == 0 && j == n / 2 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            Complex64::new(0.0, k as f64)
                        };
                        *v *= mult;
                    }
                    inv.process(&mut line);
                    let scale = 1.0 / n as f64;
                    for j in 0..n {
                        let v = line[j] * scale;
                        match axis {
                            Axis::X1 => out.set(it, j, fixed, c, v),
                            Axis::X2 => out.set(it, fixed, j, c, v),
                        }
                    }
                }
            }
        }
        out
    }

    /// Gradient of a vector field: `(grad u)_{kc} = d u_k / d x_c`.
    pub fn jacobian(&self) -> Result<Self> {
        self.expect_rank(Rank::Vector)?;
        let d1 = self.diff(Axis::X1);
        let d2 = self.diff(Axis::X2);
        let mut out = Self::zeros(Rank::Matrix, self.n, self.times.clone());
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    out.set(it, ix, iy, 0, d1.get(it, ix, iy, 0));
                    out.set(it, ix, iy, 1, d2.get(it, ix, iy, 0));
                    out.set(it, ix, iy, 2, d1.get(it, ix, iy, 1));
                    out.set(it, ix, iy, 3, d2.get(it, ix, iy, 1));
                }
            }
        }
        Ok(out)
    }

    /// Row-wise divergence of a matrix field: `(Div M)_k = d M_{kj} / d x_j`.
    pub fn divergence(&self) -> Result<Self> {
        self.expect_rank(Rank::Matrix)?;
        let d1 = self.diff(Axis::X1);
        let d2 = self.diff(Axis::X2);
        let mut out = Self::zeros(Rank::Vector, self.n, self.times.clone());
        for it in 0..self.times.len() {
            for ix in 0..self.n {
                for iy in 0..self.n {
                    for k in 0..2 {
                        let v = d1.get(it, ix, iy, 2 * k) + d2.get(it, ix, iy, 2 * k + 1);
                        out.set(it, ix, iy, k, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// 4th-order finite-difference time derivative of order 1 or 2.
    ///
    /// Centered stencils in the interior, one-sided at the ends. Needs a
    /// uniform time grid with at least 5 (order 1) or 6 (order 2) nodes.
    pub fn time_derivative(&self, order: usize) -> Result<Self> {
        let m = self.times.len();
        let need = match order {
            1 => 5,
            2 => 6,
            _ => return Err(Error::InvalidParameter(format!("time derivative order {order}"))),
        };
        if m < need {
            return Err(Error::TooFewTimeNodes { need, have: m });
        }
        let dt = self.times[1] - self.times[0];
        for w in self.times.windows(2) {
            if ((w[1] - w[0]) - dt).abs() > 1e-9 * dt.abs().max(1e-300) {
                return Err(Error::InvalidParameter("nonuniform time grid".into()));
            }
        }
        let mut out = self.clone();
        let npt = self.n * self.n * self.rank.components();
        // one-sided rows at the first two nodes, centered in the interior;
        // the last two nodes use the mirrored one-sided rows
        let (end0, end1, center, one_sided_len, scale): ([f64; 6], [f64; 6], [f64; 6], usize, f64) =
            match order {
                1 => (
                    [-25.0, 48.0, -36.0, 16.0, -3.0, 0.0],
                    [-3.0, -10.0, 18.0, -6.0, 1.0, 0.0],
                    [1.0, -8.0, 0.0, 8.0, -1.0, 0.0],
                    5,
                    12.0 * dt,
                ),
                _ => (
                    [45.0, -154.0, 214.0, -156.0, 61.0, -10.0],
                    [10.0, -15.0, -4.0, 14.0, -6.0, 1.0],
                    [-1.0, 16.0, -30.0, 16.0, -1.0, 0.0],
                    6,
                    12.0 * dt * dt,
                ),
            };
        let mirror = |w: &[f64; 6]| -> [f64; 6] {
            let sign = if order == 1 { -1.0 } else { 1.0 };
            let mut rev = [0.0; 6];
            for j in 0..one_sided_len {
                rev[j] = sign * w[one_sided_len - 1 - j];
            }
            rev
        };
        for it in 0..m {
            let (base, weights) = if it >= 2 && it + 2 < m {
                (it - 2, center)
            } else if it == 0 {
                (0, end0)
            } else if it == 1 {
                (0, end1)
            } else if it == m - 1 {
                (m - one_sided_len, mirror(&end0))
            } else {
                (m - one_sided_len, mirror(&end1))
            };
            for p in 0..npt {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, w) in weights.iter().enumerate() {
                    if *w != 0.0 {
                        acc += self.vals[(base + j) * npt + p] * *w;
                    }
                }
                out.vals[it * npt + p] = acc / scale;
            }
        }
        Ok(out)
    }

    /// Discrete Hoelder norm `sum_{j<=n_ord} max_{|k|=j} sup |D^k f|`,
    /// maximised over time slices. Derivatives are spectral.
    pub fn holder_norm(&self, n_ord: usize) -> Result<f64> {
        if n_ord > 3 {
            return Err(Error::InvalidParameter(format!("holder order {n_ord} > 3")));
        }
        let mut total = 0.0;
        // derivatives of the current order, indexed by (a, b), a + b = j
        let mut level: Vec<((usize, usize), GridField)> = vec![((0, 0), self.clone())];
        for j in 0..=n_ord {
            let semi = level.iter().map(|(_, f)| f.max_abs()).fold(0.0, f64::max);
            total += semi;
            if j < n_ord {
                let mut next: Vec<((usize, usize), GridField)> = Vec::new();
                for (key, f) in &level {
                    let (a, b) = *key;
                    // extend by an x1-derivative; the x2 extension of the
                    // previous entry covers the rest without duplicates
                    next.push(((a + 1, b), f.diff(Axis::X1)));
                    if a == 0 {
                        next.push(((0, b + 1), f.diff(Axis::X2)));
                    }
                }
                level = next;
            }
        }
        Ok(total)
    }

    /// Normalized Fourier coefficients of one slice/component:
    /// entry `(jx, jy)` multiplies `exp(i (k(jx) x1 + k(jy) x2))`.
    pub fn spectrum(&self, it: usize, c: usize) -> Vec<Complex64> {
        let n = self.n;
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(n);
        let mut grid: Vec<Complex64> = (0..n * n)
            .map(|p| self.get(it, p / n, p % n, c))
            .collect();
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        // rows (x2 direction)
        for ix in 0..n {
            line.copy_from_slice(&grid[ix * n..(ix + 1) * n]);
            fwd.process(&mut line);
            grid[ix * n..(ix + 1) * n].copy_from_slice(&line);
        }
        // columns (x1 direction)
        for iy in 0..n {
            for ix in 0..n {
                line[ix] = grid[ix * n + iy];
            }
            fwd.process(&mut line);
            for ix in 0..n {
                grid[ix * n + iy] = line[ix];
            }
        }
        // FFT convention: X_j = sum_m x_m exp(-2 pi i j m / n) with
        // x_m sampled at x = -pi + 2 pi m / n, so the coefficient of
        // exp(i k x) is X_k / n * exp(-i k pi) per axis.
        let norm = 1.0 / (n * n) as f64;
        for jx in 0..n {
            let kx = wavenumber(jx, n);
            for jy in 0..n {
                let ky = wavenumber(jy, n);
                let phase = Complex64::new(0.0, -(kx + ky) as f64 * PI).exp();
                grid[jx * n + jy] *= phase * norm;
            }
        }
        grid
    }

    /// Evaluates the trigonometric interpolant of one slice at `(x1, x2)`.
    ///
    /// O(N^2) per call; intended for probing, not bulk resampling.
    pub fn eval_trig(&self, spectrum: &[Complex64], x1: f64, x2: f64) -> Complex64 {
        let n = self.n;
        let mut acc = Complex64::new(0.0, 0.0);
        for jx in 0..n {
            let kx = wavenumber(jx, n) as f64;
            for jy in 0..n {
                let ky = wavenumber(jy, n) as f64;
                acc += spectrum[jx * n + jy] * Complex64::new(0.0, kx * x1 + ky * x2).exp();
            }
        }
        acc
    }

    /// Sum of |coefficients|^2 over the spectrum times `4 pi^2`
    /// (Parseval partner of `integrate(|f|^2)`).
    pub fn parseval_sum(&self, it: usize, c: usize) -> f64 {
        let spec = self.spectrum(it, c);
        let s: f64 = spec.iter().map(|v| v.norm_sqr()).sum();
        4.0 * PI * PI * s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn integrate_constant_is_torus_measure() {
        let f = GridField::from_fn(Rank::Scalar, 32, vec![0.0], |_, _, _, _| c(1.0));
        let v = f.integrate(0).unwrap();
        assert!((v.re - 4.0 * PI * PI).abs() < 1e-12);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn integrate_odd_and_wave_modes_vanish() {
        let f = GridField::from_fn(Rank::Scalar, 32, vec![0.0], |_, x1, _, _| c(x1.sin()));
        assert!(f.integrate(0).unwrap().norm() <= 1e-12);
        let g = GridField::from_fn(Rank::Scalar, 64, vec![0.0], |_, x1, x2, _| {
            Complex64::new(0.0, 4.0 * x1 + 3.0 * x2).exp()
        });
        assert!(g.integrate(0).unwrap().norm() <= 1e-12);
    }

    #[test]
    fn integrate_rejects_nonscalar() {
        let f = GridField::zeros(Rank::Vector, 16, vec![0.0]);
        assert!(matches!(f.integrate(0), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn diff_sin_matches_cos() {
        let f = GridField::from_fn(Rank::Scalar, 64, vec![0.0], |_, x1, _, _| c(x1.sin()));
        let d = f.diff(Axis::X1);
        let mut worst = 0.0f64;
        for ix in 0..64 {
            for iy in 0..64 {
                let x1 = grid_coord(ix, 64);
                worst = worst.max((d.get(0, ix, iy, 0) - c(x1.cos())).norm());
            }
        }
        assert!(worst <= 1e-10, "max error {worst}");
    }

    #[test]
    fn diff_constant_is_zero() {
        let f = GridField::from_fn(Rank::Scalar, 16, vec![0.0], |_, _, _, _| c(3.5));
        let d = f.diff(Axis::X1);
        assert!(d.max_abs() <= 1e-13);
    }

    #[test]
    fn diff_complex_mode_exact() {
        let f = GridField::from_fn(Rank::Scalar, 64, vec![0.0], |_, _, x2, _| {
            Complex64::new(0.0, 5.0 * x2).exp()
        });
        let d = f.diff(Axis::X2);
        let mut worst = 0.0f64;
        for ix in 0..64 {
            for iy in 0..64 {
                let x2 = grid_coord(iy, 64);
                let want = Complex64::new(0.0, 5.0) * Complex64::new(0.0, 5.0 * x2).exp();
                worst = worst.max((d.get(0, ix, iy, 0) - want).norm() / want.norm());
            }
        }
        assert!(worst <= 1e-10, "max rel error {worst}");
    }

    #[test]
    fn diff_is_linear_to_machine_precision() {
        let f = GridField::from_fn(Rank::Scalar, 32, vec![0.0], |_, x1, x2, _| {
            c((2.0 * x1).sin() + (3.0 * x2).cos())
        });
        let g = GridField::from_fn(Rank::Scalar, 32, vec![0.0], |_, x1, x2, _| {
            c((x1 + 2.0 * x2).cos())
        });
        let lhs = f.add(&g).unwrap().diff(Axis::X1);
        let rhs = f.diff(Axis::X1).add(&g.diff(Axis::X1)).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-13);
        let lhs2 = f.scale_re(2.5).diff(Axis::X2);
        let rhs2 = f.diff(Axis::X2).scale_re(2.5);
        assert!(lhs2.sub(&rhs2).unwrap().max_abs() <= 1e-13);
    }

    #[test]
    fn divergence_theorem_on_grid() {
        let f = GridField::from_fn(Rank::Scalar, 32, vec![0.0], |_, x1, x2, _| {
            c((x1.sin() + (2.0 * x2).cos()).exp().sin())
        });
        let v = f.diff(Axis::X1).integrate(0).unwrap();
        assert!(v.norm() <= 1e-10);
    }

    #[test]
    fn time_derivative_of_constant_is_zero() {
        let times: Vec<f64> = (0..8).map(|i| i as f64 * 0.1).collect();
        let f = GridField::from_fn(Rank::Scalar, 8, times, |_, _, _, _| c(2.0));
        let d = f.time_derivative(1).unwrap();
        assert_eq!(d.max_abs(), 0.0);
    }

    #[test]
    fn second_time_derivative_of_quadratic() {
        let times: Vec<f64> = (0..9).map(|i| i as f64 * 0.05).collect();
        let f = GridField::from_fn(Rank::Scalar, 4, times, |t, _, _, _| c(t * t));
        let d = f.time_derivative(2).unwrap();
        for it in 0..9 {
            assert!((d.get(it, 0, 0, 0) - c(2.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn time_derivative_convergence_order() {
        let err_at = |steps: usize| -> f64 {
            let dt = 1.0 / steps as f64;
            let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
            let f = GridField::from_fn(Rank::Scalar, 4, times.clone(), |t, _, _, _| c(t.sin()));
            let d = f.time_derivative(1).unwrap();
            let mut worst = 0.0f64;
            for (it, t) in times.iter().enumerate() {
                worst = worst.max((d.get(it, 0, 0, 0) - c(t.cos())).norm());
            }
            worst
        };
        let e1 = err_at(40);
        let e2 = err_at(80);
        let order = (e1 / e2).log2();
        assert!(order >= 3.5, "measured order {order}");
    }

    #[test]
    fn time_derivative_needs_enough_nodes() {
        let f = GridField::zeros(Rank::Scalar, 4, vec![0.0, 0.1, 0.2]);
        assert!(matches!(f.time_derivative(1), Err(Error::TooFewTimeNodes { .. })));
    }

    #[test]
    fn holder_norms_of_sine() {
        let f = GridField::from_fn(Rank::Scalar, 64, vec![0.0], |_, x1, _, _| c(x1.sin()));
        let h0 = f.holder_norm(0).unwrap();
        assert!((h0 - 1.0).abs() <= 1e-10);
        // |f|_1 = [f]_0 + [f]_1 = 1 + 1
        let h1 = f.holder_norm(1).unwrap();
        assert!((h1 - 2.0).abs() <= 1e-10);
        let z = GridField::zeros(Rank::Scalar, 16, vec![0.0]);
        assert_eq!(z.holder_norm(3).unwrap(), 0.0);
    }

    #[test]
    fn parseval_identity() {
        let f = GridField::from_fn(Rank::Scalar, 32, vec![0.0], |_, x1, x2, _| {
            c((2.0 * x1).sin() * (x2).cos() + 0.3)
        });
        let sq = GridField::from_fn(Rank::Scalar, 32, vec![0.0], |_, x1, x2, _| {
            let v = (2.0 * x1).sin() * (x2).cos() + 0.3;
            c(v * v)
        });
        let lhs = sq.integrate(0).unwrap().re;
        let rhs = f.parseval_sum(0, 0);
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn spectrum_picks_out_modes() {
        let f = GridField::from_fn(Rank::Scalar, 16, vec![0.0], |_, x1, x2, _| {
            Complex64::new(0.0, 3.0 * x1 - 2.0 * x2).exp() * 2.0
        });
        let spec = f.spectrum(0, 0);
        let n = 16usize;
        let coef = spec[3 * n + (n - 2)];
        assert!((coef - c(2.0)).norm() < 1e-12);
        let v = f.eval_trig(&spec, 0.4, -1.1);
        let want = Complex64::new(0.0, 3.0 * 0.4 - 2.0 * (-1.1)).exp() * 2.0;
        assert!((v - want).norm() < 1e-11);
    }

    #[test]
    fn periodic_indexing_wraps() {
        let f = GridField::from_fn(Rank::Scalar, 8, vec![0.0], |_, x1, _, _| c(x1));
        assert_eq!(f.at(0, -1, 0, 0), f.at(0, 7, 0, 0));
        assert_eq!(f.at(0, 8, 3, 0), f.at(0, 0, 3, 0));
    }
}
