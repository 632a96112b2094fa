//! Ingham products of sinc factors, mollification by a smooth bump and the
//! weighted-`L^q` convolution reduction.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{convolve, forward_transform, Geometry, SampledFunction, Spectrum, SUPPORT_THRESHOLD};
use crate::piecewise::Piecewise;
use crate::weights::{criterion, Classification, DecayProfile, Monotonicity};

/// Finest dyadic scale used by [`gaps_from_profile`] unless told otherwise.
pub const DEFAULT_TOP_INDEX: usize = 15;

/// Largest dyadic index accepted; larger requests are truncated.
pub const MAX_TOP_INDEX: usize = 48;

/// Minimum number of sinc factors in a profile-driven sequence, so the
/// spectrum is negligible at the band edge of a grid resolving the finest gap.
pub const MIN_FACTORS: usize = 16;

/// Width of the dyadic scale `2^{-i}` before normalisation: `(e/π)·2^{-i}`.
const BASE_WIDTH: f64 = E / PI;

/// Most factors the exact spatial evaluation is used for.
const MAX_SPATIAL_FACTORS: usize = 24;

/// One width `a` repeated `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scale {
    pub width: f64,
    pub multiplicity: usize,
}

/// Nonincreasing half-widths `a₁ ≥ a₂ ≥ …` with `Σ a_k ≤ l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapSequence {
    pub scales: Vec<Scale>,
    pub halfwidth: f64,
    /// Coarsest and finest dyadic indices, for profile-driven sequences.
    pub start_index: Option<usize>,
    pub top_index: Option<usize>,
}

fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-8 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

impl GapSequence {
    /// Explicit gaps, which must be positive and nonincreasing with sum ≤ `halfwidth`.
    pub fn new(gaps: &[f64], halfwidth: f64) -> Result<Self> {
        if !(halfwidth.is_finite() && halfwidth > 0.0) {
            return Err(Error::Input(format!("halfwidth must be positive, got {halfwidth}")));
        }
        if gaps.is_empty() {
            return Err(Error::Input("gap sequence is empty".into()));
        }
        if gaps.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::Input("gaps must be positive".into()));
        }
        if gaps.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Input("gaps must be nonincreasing".into()));
        }
        let sum: f64 = gaps.iter().sum();
        if sum > halfwidth * (1.0 + 1e-12) {
            return Err(Error::Input(format!("gaps sum to {sum}, more than the halfwidth {halfwidth}")));
        }
        let mut scales: Vec<Scale> = Vec::new();
        for &a in gaps {
            match scales.last_mut() {
                Some(s) if s.width == a => s.multiplicity += 1,
                _ => scales.push(Scale {
                    width: a,
                    multiplicity: 1,
                }),
            }
        }
        Ok(Self {
            scales,
            halfwidth,
            start_index: None,
            top_index: None,
        })
    }

    /// Every gap, with repetition.
    pub fn gaps(&self) -> Vec<f64> {
        self.scales
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.width, s.multiplicity))
            .collect()
    }

    /// Number of sinc factors `K`.
    pub fn truncation_index(&self) -> usize {
        self.scales.iter().map(|s| s.multiplicity).sum()
    }

    pub fn total_width(&self) -> f64 {
        self.scales.iter().map(|s| s.width * s.multiplicity as f64).sum()
    }

    pub fn smallest(&self) -> f64 {
        self.scales.iter().map(|s| s.width).fold(f64::INFINITY, f64::min)
    }

    pub fn largest(&self) -> f64 {
        self.scales.iter().map(|s| s.width).fold(0.0, f64::max)
    }

    /// `∏ sin(2πa_kξ)/(2πa_kξ)`.
    pub fn spectrum_at(&self, xi: f64) -> f64 {
        self.scales
            .iter()
            .map(|s| sinc(2.0 * PI * s.width * xi).powi(s.multiplicity as i32))
            .product()
    }

    /// `log |∏ sinc(2πa_kξ)|`, finite away from zeros of the product.
    pub fn log_spectrum_at(&self, xi: f64) -> f64 {
        self.scales
            .iter()
            .map(|s| s.multiplicity as f64 * sinc(2.0 * PI * s.width * xi).abs().ln())
            .sum()
    }

    /// Upper bound on `log |F(ξ)|` from `|sinc z| ≤ min(1, 1/|z|)`.
    fn log_bound_at(&self, xi: f64) -> f64 {
        self.scales
            .iter()
            .map(|s| s.multiplicity as f64 * (1.0 / (2.0 * PI * s.width * xi.abs())).min(1.0).ln())
            .sum()
    }
}

fn dyadic_multiplicities(p: &DecayProfile, s0: usize, top: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut running = 0.0f64;
    let mut prev_ceil = 0.0;
    for i in s0..=top {
        running = running.max(p.value(2f64.powi(i as i32)));
        let c = running.ceil();
        let m = (c - prev_ceil) as usize;
        prev_ceil = c;
        if m > 0 {
            out.push((i, m));
        }
    }
    let total: usize = out.iter().map(|(_, m)| m).sum();
    if total < MIN_FACTORS {
        match out.last_mut() {
            Some((i, m)) if *i == top => *m += MIN_FACTORS - total,
            _ => out.push((top, MIN_FACTORS - total)),
        }
    }
    out
}

/// Gap sequence whose sinc product decays like `e^{-ψ}` on `[1, 2^top]`.
///
/// Scale `i` has width `∝ 2^{-i}` and multiplicity `⌈ψ(2^i)⌉ − ⌈ψ(2^{i-1})⌉`,
/// so the factors that are already small at `ξ ≈ 2^i` number about `ψ(2^i)`.
/// The coarsest index is the smallest one whose total width fits in
/// `l(1 − 2^{-top})`; widths are then stretched to fill that budget.
pub fn gaps_from_profile(p: &DecayProfile, l: f64, top: usize) -> Result<GapSequence> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::Input(format!("halfwidth must be positive, got {l}")));
    }
    if top == 0 {
        return Err(Error::Input("top dyadic index must be positive".into()));
    }
    let top = if top > MAX_TOP_INDEX {
        log::warn!("top index {top} truncated to {MAX_TOP_INDEX}");
        MAX_TOP_INDEX
    } else {
        top
    };
    p.validate()?;
    if p.monotonicity() == Monotonicity::None {
        return Err(Error::Input(format!(
            "profile '{p}' is neither nondecreasing nor of product form"
        )));
    }
    let report = criterion(p)?;
    if report.classification != Classification::Convergent {
        return Err(Error::Contract(format!(
            "criterion integral for '{p}' is {}; no compactly supported function has this decay",
            report.classification
        )));
    }
    let budget = l * (1.0 - 2f64.powi(-(top as i32)));
    for s0 in 0..=top {
        let mult = dyadic_multiplicities(p, s0, top);
        let mass: f64 = mult
            .iter()
            .map(|&(i, m)| m as f64 * BASE_WIDTH * 2f64.powi(-(i as i32)))
            .sum();
        if mass <= budget {
            let stretch = budget / mass;
            let scales = mult
                .iter()
                .map(|&(i, m)| Scale {
                    width: stretch * BASE_WIDTH * 2f64.powi(-(i as i32)),
                    multiplicity: m,
                })
                .collect();
            return Ok(GapSequence {
                scales,
                halfwidth: l,
                start_index: Some(s0),
                top_index: Some(top),
            });
        }
    }
    Err(Error::Contract(format!(
        "halfwidth {l} is too small to fit the decay of '{p}' up to 2^{top}"
    )))
}

/// Symmetric sampling lattice `x_j = (j − n/2)·h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisGrid {
    pub spacing: f64,
    pub points: usize,
}

fn next_smooth_even(n: usize) -> usize {
    let mut m = n.max(2);
    loop {
        if m % 2 == 0 {
            let mut r = m;
            for p in [2, 3] {
                while r % p == 0 {
                    r /= p;
                }
            }
            if r == 1 {
                return m;
            }
        }
        m += 1;
    }
}

impl SynthesisGrid {
    /// Spacing a quarter of the finest gap, extent 1.25 times the halfwidth.
    pub fn for_gaps(g: &GapSequence) -> Self {
        let h = g.smallest() / 4.0;
        let half = 1.25 * g.halfwidth.max(g.total_width());
        let n = next_smooth_even(2 * (half / h).ceil() as usize);
        Self { spacing: h, points: n }
    }

    pub fn geometry(&self) -> Result<Geometry> {
        let n = self.points;
        Geometry::new(vec![-((n / 2) as f64) * self.spacing], vec![self.spacing], vec![n])
    }

    pub fn half_extent(&self) -> f64 {
        (self.points / 2) as f64 * self.spacing
    }
}

/// How the samples of an Ingham function were produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthesisMode {
    /// Inverse transform of the analytic product.
    Spectral,
    /// Exact piecewise-polynomial box convolutions.
    Spatial,
}

/// Samples of `f = ∗_k (1/2a_k)·1_{[-a_k, a_k]}` and of its analytic transform.
pub fn ingham_function(g: &GapSequence, grid: &SynthesisGrid) -> Result<(SampledFunction, Spectrum)> {
    ingham_function_with_mode(g, grid).map(|(f, s, _)| (f, s))
}

pub fn ingham_function_with_mode(
    g: &GapSequence,
    grid: &SynthesisGrid,
) -> Result<(SampledFunction, Spectrum, SynthesisMode)> {
    let h = grid.spacing;
    let amin = g.smallest();
    if h > amin / 4.0 {
        return Err(Error::Resolution(format!(
            "spacing {h:e} exceeds a quarter of the smallest gap {amin:e}"
        )));
    }
    if grid.half_extent() < g.total_width() {
        return Err(Error::Input(format!(
            "grid half-extent {} does not contain the support radius {}",
            grid.half_extent(),
            g.total_width()
        )));
    }
    let geom = grid.geometry()?;
    let dual: Vec<f64> = (0..geom.shape[0]).map(|k| geom.frequency(0, k)).collect();
    let values: Vec<Complex64> = dual
        .par_iter()
        .map(|&xi| Complex64::new(g.spectrum_at(xi), 0.0))
        .collect();
    let spectrum = Spectrum::new(geom.clone(), values)?;
    let edge = 0.5 / h;
    let negligible = g.log_bound_at(edge) + edge.ln() < (1e-16f64).ln();
    let label = format!("ingham K={} l={}", g.truncation_index(), g.halfwidth);
    let (f, mode) = if negligible {
        let f = crate::grid::inverse_transform(&spectrum)?.with_label(label);
        (f, SynthesisMode::Spectral)
    } else if g.truncation_index() <= MAX_SPATIAL_FACTORS {
        let mut pw = Piecewise::unit_box(g.gaps()[0]);
        for &a in &g.gaps()[1..] {
            pw = pw.convolve_box(a);
        }
        let f = SampledFunction::from_real_fn(geom, label, |x| pw.eval(x[0]));
        (f, SynthesisMode::Spatial)
    } else {
        return Err(Error::Resolution(format!(
            "spectrum bound {:e} at the band edge {edge:e} is not negligible",
            g.log_bound_at(edge).exp()
        )));
    };
    Ok((f, spectrum, mode))
}

/// Largest `|f(x)|/peak` over samples with `‖x‖ > radius` (0 for `f ≡ 0`).
pub fn support_excess(f: &SampledFunction, radius: f64) -> f64 {
    let peak = f.peak();
    if peak == 0.0 {
        return 0.0;
    }
    let geom = f.geometry();
    let mut worst = 0.0f64;
    for (i, v) in f.values().iter().enumerate() {
        let x = geom.point(i);
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if r > radius {
            worst = worst.max(v.norm() / peak);
        }
    }
    worst
}

/// Largest `|f(x)|/peak` over samples with `‖x‖ < radius`; samples within
/// rounding of the sphere count as outside.
pub fn interior_level(f: &SampledFunction, radius: f64) -> f64 {
    let peak = f.peak();
    if peak == 0.0 {
        return 0.0;
    }
    let geom = f.geometry();
    let inner = radius * (1.0 - 1e-12);
    let mut worst = 0.0f64;
    for (i, v) in f.values().iter().enumerate() {
        let x = geom.point(i);
        if x.iter().map(|c| c * c).sum::<f64>().sqrt() < inner {
            worst = worst.max(v.norm() / peak);
        }
    }
    worst
}

/// Smallest `‖x‖` with `|f(x)| ≥ 1e-12·peak`; infinite for `f ≡ 0`.
pub fn vanishing_radius(f: &SampledFunction) -> f64 {
    let peak = f.peak();
    if peak == 0.0 {
        return f64::INFINITY;
    }
    let geom = f.geometry();
    f.values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() >= SUPPORT_THRESHOLD * peak)
        .map(|(i, _)| geom.point(i).iter().map(|c| c * c).sum::<f64>().sqrt())
        .fold(f64::INFINITY, f64::min)
}

/// `max_j |f(x_j) − f(−x_j)|/peak` on a symmetric 1-d grid.
pub fn evenness_defect(f: &SampledFunction) -> f64 {
    let n = f.values().len();
    let peak = f.peak();
    if peak == 0.0 {
        return 0.0;
    }
    (1..n)
        .map(|j| (f.values()[j] - f.values()[n - j]).norm() / peak)
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub lo: f64,
    pub hi: f64,
    /// `max log(|F(ξ)| e^{ψ(ξ)})` over the scan.
    pub log_max: f64,
    pub max: f64,
    pub argmax: f64,
    pub points: usize,
}

fn scan_step(g: &GapSequence) -> f64 {
    (1.0 / (32.0 * g.largest())).min(0.05)
}

/// `sup |F(ξ)| e^{ψ(ξ)}` over a uniform scan of `[lo, hi]`, evaluated in log space.
pub fn envelope(g: &GapSequence, p: &DecayProfile, lo: f64, hi: f64) -> Envelope {
    let step = scan_step(g);
    let n = ((hi - lo) / step).ceil() as usize + 1;
    let (log_max, argmax) = (0..n)
        .into_par_iter()
        .map(|k| {
            let xi = (lo + k as f64 * step).min(hi);
            (g.log_spectrum_at(xi) + p.value(xi), xi)
        })
        .reduce(
            || (f64::NEG_INFINITY, lo),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    Envelope {
        lo,
        hi,
        log_max,
        max: log_max.exp(),
        argmax,
        points: n,
    }
}

/// Thresholds used by [`verify_decay`].
pub const SUPPORT_TOL: f64 = 1e-12;
pub const SPECTRAL_TOL: f64 = 1e-8;
pub const ENVELOPE_TOL: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    pub halfwidth: f64,
    pub factors: usize,
    pub support_excess: f64,
    pub support_ok: bool,
    /// `max |F_grid(ξ) − F(ξ)|` over the dual grid.
    pub spectral_error: f64,
    pub spectral_ok: bool,
    pub envelope: Envelope,
    pub envelope_doubled: Envelope,
    pub envelope_change: f64,
    pub envelope_ok: bool,
    pub evenness_defect: f64,
    pub passed: bool,
}

/// Support, spectrum and envelope checks of samples `f` against the gap sequence `g`.
pub fn verify_decay(f: &SampledFunction, g: &GapSequence, p: &DecayProfile) -> Result<DecayCheck> {
    if f.dims() != 1 {
        return Err(Error::Input("decay verification needs a function of one variable".into()));
    }
    let l = g.halfwidth;
    let excess = support_excess(f, l);
    let spec = forward_transform(f)?;
    let geom = f.geometry();
    let spectral_error = spec
        .values()
        .par_iter()
        .enumerate()
        .map(|(k, v)| (v - Complex64::new(g.spectrum_at(geom.frequency(0, k)), 0.0)).norm())
        .reduce(|| 0.0, f64::max);
    let env = envelope(g, p, 1.0, 1e4);
    let env2 = envelope(g, p, 1.0, 2e4);
    let change = if env.max > 0.0 {
        (env2.max - env.max).abs() / env.max
    } else {
        0.0
    };
    let envelope_ok = env.log_max.is_finite() && env2.log_max.is_finite() && change < ENVELOPE_TOL;
    let support_ok = excess < SUPPORT_TOL;
    let spectral_ok = spectral_error < SPECTRAL_TOL;
    Ok(DecayCheck {
        halfwidth: l,
        factors: g.truncation_index(),
        support_excess: excess,
        support_ok,
        spectral_error,
        spectral_ok,
        envelope: env,
        envelope_doubled: env2,
        envelope_change: change,
        envelope_ok,
        evenness_defect: evenness_defect(f),
        passed: support_ok && spectral_ok && envelope_ok,
    })
}

/// `e^{-1/(1-‖2x/l‖²)}` on `B(0, l/2)`, normalised to unit discrete integral.
pub fn bump(l: f64, spacing: &[f64]) -> Result<SampledFunction> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::Input(format!("bump radius must be positive, got {l}")));
    }
    let d = spacing.len();
    let m: Vec<usize> = spacing.iter().map(|h| (0.5 * l / h).ceil() as usize).collect();
    let geom = Geometry::new(
        (0..d).map(|a| -(m[a] as f64) * spacing[a]).collect(),
        spacing.to_vec(),
        m.iter().map(|k| 2 * k + 1).collect(),
    )?;
    let f = SampledFunction::from_real_fn(geom, "bump", |x| {
        let r2 = x.iter().map(|c| (2.0 * c / l).powi(2)).sum::<f64>();
        if r2 < 1.0 {
            (-1.0 / (1.0 - r2)).exp()
        } else {
            0.0
        }
    });
    let mass: f64 = f.values().iter().map(|v| v.re).sum::<f64>() * f.geometry().cell_volume();
    if mass <= 0.0 {
        return Err(Error::Resolution(format!(
            "grid spacing {spacing:?} does not resolve a bump of radius {}",
            0.5 * l
        )));
    }
    Ok(f.map(|v| v / mass))
}

/// `f₀ ∗ φ₁` with `φ₁` the unit bump supported in `B(0, l/2)`.
pub fn mollify(f0: &SampledFunction, l: f64) -> Result<SampledFunction> {
    let excess = support_excess(f0, 0.5 * l * (1.0 + 1e-12));
    if excess >= SUPPORT_THRESHOLD {
        return Err(Error::Input(format!(
            "input is not supported in B(0, {}): level {excess:e} of peak outside",
            0.5 * l
        )));
    }
    let phi = bump(l, &f0.geometry().spacing)?;
    Ok(convolve(f0, &phi)?.with_label(format!("{} mollified", f0.label())))
}

/// Sum of `|F|^q e^{qψ(‖ξ‖)} (1+‖ξ‖)^{-N}` over the dual grid, in log form.
fn log_weighted_sum(s: &Spectrum, p: &DecayProfile, q: f64, n: f64) -> f64 {
    let dv = s.dual_cell_volume().ln();
    let terms: Vec<f64> = (0..s.values().len())
        .into_par_iter()
        .map(|k| {
            let xi = s.frequency_point(k);
            let r = xi.iter().map(|c| c * c).sum::<f64>().sqrt();
            let a = s.values()[k].norm();
            if a == 0.0 {
                return f64::NEG_INFINITY;
            }
            if q.is_infinite() {
                a.ln() + p.value(r) - n * (1.0 + r).ln()
            } else {
                q * (a.ln() + p.value(r)) - n * (1.0 + r).ln()
            }
        })
        .collect();
    if q.is_infinite() {
        terms.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        log_sum_exp(&terms) + dv
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m.is_nan() {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `∫ |f̂|^q e^{qψ(‖ξ‖)} (1+‖ξ‖)^{-N} dξ` on the dual grid (`q = ∞`: the essential sup
/// of `|f̂| e^{ψ}(1+‖ξ‖)^{-N}`), returned as a logarithm.
pub fn log_weighted_mass(f: &SampledFunction, p: &DecayProfile, q: f64, n: f64) -> Result<f64> {
    check_exponents(q, n)?;
    let s = forward_transform(f)?;
    Ok(log_weighted_sum(&s, p, q, n))
}

fn check_exponents(q: f64, n: f64) -> Result<()> {
    if !(q >= 1.0) {
        return Err(Error::Input(format!("q must be at least 1, got {q}")));
    }
    if !(n.is_finite() && n >= 0.0) {
        return Err(Error::Input(format!("N must be finite and nonnegative, got {n}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub l: f64,
    pub q: f64,
    pub n: f64,
    /// Smallest `‖x‖` where `f ∗ φ` is above threshold.
    pub measured_radius: f64,
    /// Largest `|f∗φ|/peak` inside `B(0, l/2)`.
    pub interior_level: f64,
    pub vanishes_on_half_ball: bool,
    pub grid_cell: f64,
    /// `log ∫ |f̂|^q e^{qψ} (1+‖ξ‖)^{-N}`.
    pub log_lq_mass: f64,
    /// `log ∫ |(f∗φ)^| e^{ψ}`.
    pub log_l1_mass: f64,
    /// `log ‖(1+‖ξ‖)^{N/q} φ̂‖_{q'}`.
    pub log_dual_factor: f64,
    /// `log ‖(1+‖ξ‖)^{N} φ̂‖_{q'}`, the cruder factor.
    pub log_dual_factor_loose: f64,
    /// `log_lq_mass/q + log_dual_factor`.
    pub log_holder_bound: f64,
    pub holder_holds: bool,
}

fn pad(f: &SampledFunction, shape: &[usize]) -> Result<SampledFunction> {
    let g = f.geometry();
    let target = Geometry::new(g.origin.clone(), g.spacing.clone(), shape.to_vec())?;
    f.embed(&target)
}

/// Convolves `f` (vanishing on `B(0, l)`) with the bump of radius `l/2` and
/// evaluates both sides of the Hölder estimate on a common dual grid.
pub fn reduce_weighted(
    f: &SampledFunction,
    p: &DecayProfile,
    q: f64,
    n: f64,
    l: f64,
) -> Result<(SampledFunction, ReductionReport)> {
    check_exponents(q, n)?;
    p.validate()?;
    let inside = interior_level(f, l);
    if inside >= SUPPORT_THRESHOLD {
        return Err(Error::Contract(format!(
            "input does not vanish on B(0, {l}): level {inside:e} of peak inside"
        )));
    }
    let phi = bump(l, &f.geometry().spacing)?;
    let g = convolve(f, &phi)?.with_label(format!("{} reduced", f.label()));
    let shape = g.geometry().shape.clone();
    let fs = forward_transform(&pad(f, &shape)?)?;
    let ps = forward_transform(&pad(&phi, &shape)?)?;
    let gs = Spectrum::new(
        fs.space().clone(),
        fs.values().iter().zip(ps.values()).map(|(a, b)| a * b).collect(),
    )?;
    let log_lq = log_weighted_sum(&fs, p, q, n);
    let log_l1 = log_weighted_sum(&gs, p, 1.0, 0.0);
    let qd = if q == 1.0 {
        f64::INFINITY
    } else if q.is_infinite() {
        1.0
    } else {
        q / (q - 1.0)
    };
    let zero = DecayProfile::zero();
    // ‖(1+‖ξ‖)^{e} φ̂‖_{q'} as the weighted sum with exponent q' and N = −e q'
    let dual = |e: f64| -> f64 {
        if qd.is_infinite() {
            log_weighted_sum(&ps, &zero, f64::INFINITY, -e)
        } else {
            log_weighted_sum(&ps, &zero, qd, -e * qd) / qd
        }
    };
    let e = if q.is_infinite() { 0.0 } else { n / q };
    let log_dual = dual(if q.is_infinite() { n } else { e });
    let log_dual_loose = dual(n);
    let lq_root = if q.is_infinite() { log_lq } else { log_lq / q };
    let bound = lq_root + log_dual;
    let holds = log_l1 == f64::NEG_INFINITY || log_l1 <= bound + 1e-8;
    let radius = vanishing_radius(&g);
    let interior = interior_level(&g, 0.5 * l);
    let cell = g.geometry().spacing.iter().fold(0.0f64, |a, b| a.max(*b));
    let report = ReductionReport {
        l,
        q,
        n,
        measured_radius: radius,
        interior_level: interior,
        vanishes_on_half_ball: interior < SUPPORT_THRESHOLD,
        grid_cell: cell,
        log_lq_mass: log_lq,
        log_l1_mass: log_l1,
        log_dual_factor: log_dual,
        log_dual_factor_loose: log_dual_loose,
        log_holder_bound: bound,
        holder_holds: holds,
    };
    Ok((g, report))
}

/// `f(x) = ∏_a f_a(x_a)` on the product lattice.
pub fn tensor_product(factors: &[SampledFunction]) -> Result<SampledFunction> {
    if factors.is_empty() || factors.iter().any(|f| f.dims() != 1) {
        return Err(Error::Input("tensor product needs one-dimensional factors".into()));
    }
    let geom = Geometry::new(
        factors.iter().map(|f| f.geometry().origin[0]).collect(),
        factors.iter().map(|f| f.geometry().spacing[0]).collect(),
        factors.iter().map(|f| f.geometry().shape[0]).collect(),
    )?;
    let values = (0..geom.len())
        .map(|flat| {
            geom.unravel(flat)
                .iter()
                .zip(factors)
                .map(|(&i, f)| f.values()[i])
                .product()
        })
        .collect();
    SampledFunction::new(geom, values, "tensor product")
}
