//! Uniform-grid functions on ℝ^d and their Fourier transforms.
//!
//! The transform is fixed to `f̂(ξ) = ∫ f(x) exp(-2πi x·ξ) dx`, approximated by
//! the cell-volume weighted Riemann sum on the grid and evaluated on the
//! DFT-dual frequency grid. With `n` samples of spacing `h` along an axis the
//! dual grid has spacing `1/(n h)` and runs over `k - ⌊n/2⌋`, `k = 0..n`, so
//! the pair of transforms is an exact inverse pair on sampled data.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tag carried by every spectrum; there is one convention in the library.
pub const CONVENTION: &str = "exp(-2*pi*i*x*xi)";

/// Largest number of samples a single grid may hold.
pub const MAX_SAMPLES: usize = 1 << 25;

/// Relative threshold (of the peak magnitude) below which a sample counts as zero.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// `exp(2πi·turns)` with the integer part of `turns` removed first.
pub(crate) fn cis_turns(turns: f64) -> Complex64 {
    let r = turns - turns.round();
    let (s, c) = (2.0 * std::f64::consts::PI * r).sin_cos();
    Complex64::new(c, s)
}

/// `exp(2πi·num/den)` reduced exactly in integers.
fn cis_ratio(num: i64, den: i64) -> Complex64 {
    let r = num.rem_euclid(den);
    cis_turns(r as f64 / den as f64)
}

/// Axis-aligned uniform sampling lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub shape: Vec<usize>,
}

impl Geometry {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, shape: Vec<usize>) -> Result<Self> {
        let d = shape.len();
        if d == 0 {
            return Err(Error::Input("grid must have at least one axis".into()));
        }
        if origin.len() != d || spacing.len() != d {
            return Err(Error::Input(format!(
                "grid axis mismatch: {} origins, {} spacings, {} extents",
                origin.len(),
                spacing.len(),
                d
            )));
        }
        if let Some(h) = spacing.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
            return Err(Error::Input(format!("grid spacing must be positive, got {h}")));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::Input("grid origin must be finite".into()));
        }
        if shape.iter().any(|&n| n == 0) {
            return Err(Error::Input("grid extents must be positive".into()));
        }
        let requested = shape
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .unwrap_or(usize::MAX);
        if requested > MAX_SAMPLES {
            return Err(Error::Capacity {
                requested,
                budget: MAX_SAMPLES,
            });
        }
        Ok(Self {
            origin,
            spacing,
            shape,
        })
    }

    /// `n` points on `[-half, half)`; contains 0 when `n` is even.
    pub fn symmetric(half: f64, n: usize) -> Result<Self> {
        Self::new(vec![-half], vec![2.0 * half / n as f64], vec![n])
    }

    /// The same 1-d lattice on every one of `d` axes.
    pub fn cube(half: f64, n: usize, d: usize) -> Result<Self> {
        let h = 2.0 * half / n as f64;
        Self::new(vec![-half; d], vec![h; d], vec![n; d])
    }

    pub fn dims(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.spacing[axis]
    }

    pub fn coords(&self, axis: usize) -> Vec<f64> {
        (0..self.shape[axis]).map(|i| self.coord(axis, i)).collect()
    }

    /// Row-major strides (last axis fastest).
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims()];
        for a in (0..self.dims().saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.shape[a + 1];
        }
        s
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims()];
        for a in (0..self.dims()).rev() {
            idx[a] = flat % self.shape[a];
            flat /= self.shape[a];
        }
        idx
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| self.coord(a, i))
            .collect()
    }

    /// Upper corner of the sampled box (last sample, not one past it).
    pub fn upper(&self) -> Vec<f64> {
        (0..self.dims())
            .map(|a| self.coord(a, self.shape[a] - 1))
            .collect()
    }

    pub fn dual_spacing(&self, axis: usize) -> f64 {
        1.0 / (self.shape[axis] as f64 * self.spacing[axis])
    }

    pub fn dual_origin(&self, axis: usize) -> f64 {
        -((self.shape[axis] / 2) as f64) * self.dual_spacing(axis)
    }

    pub fn frequency(&self, axis: usize, k: usize) -> f64 {
        (k as f64 - (self.shape[axis] / 2) as f64) * self.dual_spacing(axis)
    }

    pub fn dual_cell_volume(&self) -> f64 {
        (0..self.dims()).map(|a| self.dual_spacing(a)).product()
    }

    fn same_spacing(&self, other: &Geometry) -> bool {
        self.dims() == other.dims()
            && self
                .spacing
                .iter()
                .zip(&other.spacing)
                .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()))
    }
}

/// Complex samples of a function on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    geom: Geometry,
    values: Vec<Complex64>,
    label: String,
}

impl SampledFunction {
    pub fn new(geom: Geometry, values: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != geom.len() {
            return Err(Error::Input(format!(
                "{} values for a grid of {} samples",
                values.len(),
                geom.len()
            )));
        }
        Ok(Self {
            geom,
            values,
            label: label.into(),
        })
    }

    pub fn zeros(geom: Geometry, label: impl Into<String>) -> Self {
        let n = geom.len();
        Self {
            geom,
            values: vec![Complex64::new(0.0, 0.0); n],
            label: label.into(),
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn<F>(geom: Geometry, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let mut x = vec![0.0; geom.dims()];
        let values = (0..geom.len())
            .map(|flat| {
                let idx = geom.unravel(flat);
                for (a, &i) in idx.iter().enumerate() {
                    x[a] = geom.coord(a, i);
                }
                f(&x)
            })
            .collect();
        Self {
            geom,
            values,
            label: label.into(),
        }
    }

    pub fn from_real_fn<F>(geom: Geometry, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64,
    {
        Self::from_fn(geom, label, |x| Complex64::new(f(x), 0.0))
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn dims(&self) -> usize {
        self.geom.dims()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::new(0.0, 0.0))
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            geom: self.geom.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            label: self.label.clone(),
        }
    }

    /// `αf + βg` on a shared grid.
    pub fn linear_combination(
        &self,
        alpha: Complex64,
        other: &SampledFunction,
        beta: Complex64,
    ) -> Result<Self> {
        if self.geom != other.geom {
            return Err(Error::Input("linear combination of functions on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Self {
            geom: self.geom.clone(),
            values,
            label: self.label.clone(),
        })
    }

    /// Copies the samples onto a larger lattice with the same spacing whose
    /// nodes include every node of `self`; everything else is zero.
    pub fn embed(&self, target: &Geometry) -> Result<Self> {
        if !self.geom.same_spacing(target) {
            return Err(Error::Input("embedding requires identical spacing".into()));
        }
        let d = self.dims();
        let mut offset = vec![0usize; d];
        for a in 0..d {
            let shift = (self.geom.origin[a] - target.origin[a]) / self.geom.spacing[a];
            let rounded = shift.round();
            if (shift - rounded).abs() > 1e-6 || rounded < 0.0 {
                return Err(Error::Input("target lattice is not aligned with the source".into()));
            }
            offset[a] = rounded as usize;
            if offset[a] + self.geom.shape[a] > target.shape[a] {
                return Err(Error::Input("target lattice does not contain the source".into()));
            }
        }
        let mut out = SampledFunction::zeros(target.clone(), self.label.clone());
        let tstrides = target.strides();
        for (flat, v) in self.values.iter().enumerate() {
            let idx = self.geom.unravel(flat);
            let t: usize = (0..d).map(|a| (idx[a] + offset[a]) * tstrides[a]).sum();
            out.values[t] = *v;
        }
        Ok(out)
    }

    fn check_finite(&self) -> Result<()> {
        if let Some(p) = self.values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Input(format!(
                "non-finite sample at {:?} in '{}'",
                self.geom.unravel(p),
                self.label
            )));
        }
        Ok(())
    }
}

/// Sampled Fourier transform on the dual grid of a spatial lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    space: Geometry,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(space: Geometry, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::Input(format!(
                "{} spectral values for a dual grid of {} samples",
                values.len(),
                space.len()
            )));
        }
        Ok(Self { space, values })
    }

    /// Samples `F(ξ)` on the dual grid of `space`.
    pub fn from_fn<F>(space: Geometry, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let mut xi = vec![0.0; space.dims()];
        let values = (0..space.len())
            .map(|flat| {
                let idx = space.unravel(flat);
                for (a, &k) in idx.iter().enumerate() {
                    xi[a] = space.frequency(a, k);
                }
                f(&xi)
            })
            .collect();
        Self { space, values }
    }

    pub fn convention(&self) -> &'static str {
        CONVENTION
    }

    /// The spatial lattice this spectrum is dual to.
    pub fn space(&self) -> &Geometry {
        &self.space
    }

    pub fn dims(&self) -> usize {
        self.space.dims()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn frequencies(&self, axis: usize) -> Vec<f64> {
        (0..self.space.shape[axis])
            .map(|k| self.space.frequency(axis, k))
            .collect()
    }

    pub fn frequency_point(&self, flat: usize) -> Vec<f64> {
        self.space
            .unravel(flat)
            .iter()
            .enumerate()
            .map(|(a, &k)| self.space.frequency(a, k))
            .collect()
    }

    pub fn dual_cell_volume(&self) -> f64 {
        self.space.dual_cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s * self.dual_cell_volume()).sqrt()
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

struct AxisTransform {
    fft: Arc<dyn Fft<f64>>,
    /// Per-sample pre-twiddle.
    pre: Vec<Complex64>,
    /// Per-output post-twiddle including the quadrature weight.
    post: Vec<Complex64>,
}

impl AxisTransform {
    fn forward(geom: &Geometry, axis: usize, planner: &mut FftPlanner<f64>) -> Self {
        let n = geom.shape[axis];
        let h = geom.spacing[axis];
        let m = (n / 2) as i64;
        let ni = n as i64;
        // origin = c·h + r with c integral, |r| ≤ h/2
        let c = (geom.origin[axis] / h).round();
        let r = geom.origin[axis] - c * h;
        let ci = c as i64;
        let pre = (0..ni).map(|j| cis_ratio(j * m, ni)).collect();
        let post = (0..ni)
            .map(|k| {
                // exp(-2πi x0 ξ_k) with x0 ξ_k = -c·m/n + c·k/n + r ξ_k
                let xi = geom.frequency(axis, k as usize);
                let int_part = cis_ratio(ci * m - ci * k, ni);
                int_part * cis_turns(-r * xi) * h
            })
            .collect();
        Self {
            fft: planner.plan_fft_forward(n),
            pre,
            post,
        }
    }

    fn inverse(geom: &Geometry, axis: usize, planner: &mut FftPlanner<f64>) -> Self {
        let n = geom.shape[axis];
        let h = geom.spacing[axis];
        let delta = geom.dual_spacing(axis);
        let m = (n / 2) as i64;
        let ni = n as i64;
        let c = (geom.origin[axis] / h).round();
        let r = geom.origin[axis] - c * h;
        let ci = c as i64;
        // exp(2πi x0 k Δ) = exp(2πi c k/n) exp(2πi r k Δ)
        let pre = (0..ni)
            .map(|k| cis_ratio(ci * k, ni) * cis_turns(r * k as f64 * delta))
            .collect();
        // Δ exp(2πi x_j ξ0), x_j ξ0 = (c + j)(-m/n) + r ξ0
        let xi0 = geom.dual_origin(axis);
        let post = (0..ni)
            .map(|j| cis_ratio(-(ci + j) * m, ni) * cis_turns(r * xi0) * delta)
            .collect();
        Self {
            fft: planner.plan_fft_inverse(n),
            pre,
            post,
        }
    }
}

fn transform_axes(geom: &Geometry, values: &mut [Complex64], axes: &[usize], inverse: bool) {
    let mut planner = FftPlanner::new();
    let strides = geom.strides();
    for &axis in axes {
        let plan = if inverse {
            AxisTransform::inverse(geom, axis, &mut planner)
        } else {
            AxisTransform::forward(geom, axis, &mut planner)
        };
        let n = geom.shape[axis];
        let stride = strides[axis];
        let outer = geom.len() / (n * stride);
        let mut lane = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.fft.get_inplace_scratch_len()];
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for j in 0..n {
                    lane[j] = values[base + j * stride] * plan.pre[j];
                }
                plan.fft.process_with_scratch(&mut lane, &mut scratch);
                for k in 0..n {
                    values[base + k * stride] = lane[k] * plan.post[k];
                }
            }
        }
    }
}

/// Riemann-sum Fourier transform of `f` on its dual grid.
pub fn forward_transform(f: &SampledFunction) -> Result<Spectrum> {
    f.check_finite()?;
    let mut values = f.values.clone();
    let axes: Vec<usize> = (0..f.dims()).collect();
    transform_axes(&f.geom, &mut values, &axes, false);
    Ok(Spectrum {
        space: f.geom.clone(),
        values,
    })
}

/// Exact inverse of [`forward_transform`] on the same lattice.
pub fn inverse_transform(spectrum: &Spectrum) -> Result<SampledFunction> {
    if let Some(p) = spectrum
        .values
        .iter()
        .position(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::Input(format!("non-finite spectral value at index {p}")));
    }
    let mut values = spectrum.values.clone();
    let axes: Vec<usize> = (0..spectrum.dims()).collect();
    transform_axes(&spectrum.space, &mut values, &axes, true);
    Ok(SampledFunction {
        geom: spectrum.space.clone(),
        values,
        label: "inverse transform".into(),
    })
}

/// Inverse transform onto an explicitly given lattice, which must match the
/// spectrum's dual geometry.
pub fn inverse_transform_onto(spectrum: &Spectrum, geom: &Geometry) -> Result<SampledFunction> {
    if spectrum.space.shape != geom.shape || !spectrum.space.same_spacing(geom) {
        return Err(Error::Input("spectrum is not dual to the requested grid".into()));
    }
    let aligned = Spectrum {
        space: geom.clone(),
        values: spectrum.values.clone(),
    };
    inverse_transform(&aligned)
}

pub fn l2_norm(f: &SampledFunction) -> f64 {
    let s: f64 = f.values.iter().map(|v| v.norm_sqr()).sum();
    (s * f.geom.cell_volume()).sqrt()
}

fn next_fast_len(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Linear convolution `(f∗g)(x) = ∫ f(y) g(x−y) dy` on the Minkowski-sum lattice.
///
/// Computed spectrally with zero padding, so no wrap-around occurs.
pub fn convolve(f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    if f.dims() != g.dims() {
        return Err(Error::Input("convolution of functions of different dimension".into()));
    }
    if !f.geom.same_spacing(&g.geom) {
        return Err(Error::Input(format!(
            "convolution needs equal spacing, got {:?} and {:?}",
            f.geom.spacing, g.geom.spacing
        )));
    }
    f.check_finite()?;
    g.check_finite()?;
    let d = f.dims();
    let out_shape: Vec<usize> = (0..d).map(|a| f.geom.shape[a] + g.geom.shape[a] - 1).collect();
    let out_geom = Geometry::new(
        (0..d).map(|a| f.geom.origin[a] + g.geom.origin[a]).collect(),
        f.geom.spacing.clone(),
        out_shape.clone(),
    )?;
    let pad_shape: Vec<usize> = out_shape.iter().map(|&n| next_fast_len(n)).collect();
    let pad_geom = Geometry::new(vec![0.0; d], f.geom.spacing.clone(), pad_shape.clone())?;
    let place = |src: &SampledFunction| -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); pad_geom.len()];
        let ps = pad_geom.strides();
        for (flat, v) in src.values.iter().enumerate() {
            let idx = src.geom.unravel(flat);
            let t: usize = idx.iter().zip(&ps).map(|(i, s)| i * s).sum();
            buf[t] = *v;
        }
        buf
    };
    let mut a = place(f);
    let mut b = place(g);
    plain_dft(&pad_geom, &mut a, false);
    plain_dft(&pad_geom, &mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    plain_dft(&pad_geom, &mut a, true);
    let scale = f.geom.cell_volume() / pad_geom.len() as f64;
    let ps = pad_geom.strides();
    let values = (0..out_geom.len())
        .map(|flat| {
            let idx = out_geom.unravel(flat);
            let t: usize = idx.iter().zip(&ps).map(|(i, s)| i * s).sum();
            a[t] * scale
        })
        .collect();
    SampledFunction::new(out_geom, values, format!("{} * {}", f.label, g.label))
}

/// Unnormalised index-space DFT over every axis.
fn plain_dft(geom: &Geometry, values: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let strides = geom.strides();
    for axis in 0..geom.dims() {
        let n = geom.shape[axis];
        let fft = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let stride = strides[axis];
        let outer = geom.len() / (n * stride);
        let mut lane = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * n * stride + inner;
                for j in 0..n {
                    lane[j] = values[base + j * stride];
                }
                fft.process_with_scratch(&mut lane, &mut scratch);
                for j in 0..n {
                    values[base + j * stride] = lane[j];
                }
            }
        }
    }
}

/// The family `y ↦ g_y` of one-dimensional functions obtained by transforming
/// every axis except the first.
#[derive(Clone, Debug)]
pub struct SliceFamily {
    /// Lattice of the transformed axes (frequencies are its dual grid).
    pub transverse: Geometry,
    /// One function of the first coordinate per transverse frequency, row-major.
    pub slices: Vec<SampledFunction>,
}

impl SliceFamily {
    pub fn frequency(&self, slice: usize) -> Vec<f64> {
        self.transverse
            .unravel(slice)
            .iter()
            .enumerate()
            .map(|(a, &k)| self.transverse.frequency(a, k))
            .collect()
    }

    /// `Σ_y ‖g_y‖² Δy`, which equals `‖f‖²` by Parseval.
    pub fn energy(&self) -> f64 {
        let dv = self.transverse.dual_cell_volume();
        self.slices.iter().map(|s| l2_norm(s).powi(2)).sum::<f64>() * dv
    }
}

/// Partial transform of `f` in its last `d − 1` variables.
pub fn slice_transform(f: &SampledFunction) -> Result<SliceFamily> {
    let d = f.dims();
    if d < 2 {
        return Err(Error::Input("slice transform needs at least two dimensions".into()));
    }
    f.check_finite()?;
    let mut values = f.values.clone();
    let axes: Vec<usize> = (1..d).collect();
    transform_axes(&f.geom, &mut values, &axes, false);
    let transverse = Geometry::new(
        f.geom.origin[1..].to_vec(),
        f.geom.spacing[1..].to_vec(),
        f.geom.shape[1..].to_vec(),
    )?;
    let line = Geometry::new(
        vec![f.geom.origin[0]],
        vec![f.geom.spacing[0]],
        vec![f.geom.shape[0]],
    )?;
    let n0 = f.geom.shape[0];
    let m = transverse.len();
    let slices = (0..m)
        .map(|y| {
            let lane = (0..n0).map(|j| values[j * m + y]).collect();
            SampledFunction {
                geom: line.clone(),
                values: lane,
                label: format!("{} slice {y}", f.label),
            }
        })
        .collect();
    Ok(SliceFamily { transverse, slices })
}

/// Discrete-time Fourier transform of a 1-d function at an arbitrary frequency.
pub fn transform_at(f: &SampledFunction, xi: f64) -> Complex64 {
    debug_assert_eq!(f.dims(), 1);
    let g = &f.geom;
    let h = g.spacing[0];
    let step = cis_turns(-h * xi);
    let mut phase = cis_turns(-g.origin[0] * xi);
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, v) in f.values.iter().enumerate() {
        if j % 64 == 0 {
            phase = cis_turns(-g.coord(0, j) * xi);
        }
        acc += v * phase;
        phase *= step;
    }
    acc * h
}
