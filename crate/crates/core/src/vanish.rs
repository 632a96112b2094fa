//! Vanishing tests for functions supported in a half-space: support detection,
//! rigid normalisation to `{x₁ ≤ 0}`, the log⁺/log⁻ split of the Paley-Wiener
//! log-integral, and the slice-by-slice pipeline.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    forward_transform, l2_norm, slice_transform, Geometry, SampledFunction, Spectrum, SUPPORT_THRESHOLD,
};
use crate::weights::{criterion, Classification, DecayProfile};

/// Magnitudes below this are floored before taking logarithms.
pub const MAGNITUDE_FLOOR: f64 = 1e-300;

/// Floored fraction above which a log-integral classification is inconclusive.
pub const MAX_FLOORED_FRACTION: f64 = 0.1;

/// Slices with norm below this fraction of the largest slice norm are skipped.
pub const SLICE_SKIP: f64 = 1e-10;

const UNIT_TOL: f64 = 1e-12;

/// `{x ∈ ℝ^d | x·η ≤ s}` with `‖η‖ = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub eta: Vec<f64>,
    pub s: f64,
}

impl HalfSpace {
    pub fn new(eta: Vec<f64>, s: f64) -> Result<Self> {
        let norm = eta.iter().map(|e| e * e).sum::<f64>().sqrt();
        if eta.is_empty() || (norm - 1.0).abs() > UNIT_TOL || !s.is_finite() {
            return Err(Error::Input(format!("half-space normal {eta:?} is not a unit vector")));
        }
        Ok(Self { eta, s })
    }

    /// Rescales `eta` to unit length.
    pub fn normalized(eta: Vec<f64>, s: f64) -> Result<Self> {
        let norm = eta.iter().map(|e| e * e).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Input("half-space normal must be a nonzero vector".into()));
        }
        Self::new(eta.iter().map(|e| e / norm).collect(), s)
    }

    /// `x·η ≤ 0`, η = e₁.
    pub fn lower_first_axis(d: usize) -> Self {
        let mut eta = vec![0.0; d];
        eta[0] = 1.0;
        Self { eta, s: 0.0 }
    }

    pub fn dims(&self) -> usize {
        self.eta.len()
    }

    pub fn project(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.eta).map(|(a, b)| a * b).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    pub contained: bool,
    /// Largest `x·η − s` over samples above the threshold (0 when contained).
    pub margin: f64,
    pub violations: usize,
    pub threshold: f64,
}

pub fn halfspace_support(f: &SampledFunction, h: &HalfSpace) -> Result<SupportReport> {
    if f.dims() != h.dims() {
        return Err(Error::Input(format!(
            "half-space in dimension {} for a function in dimension {}",
            h.dims(),
            f.dims()
        )));
    }
    let threshold = SUPPORT_THRESHOLD * f.peak();
    let geom = f.geometry();
    let mut margin = 0.0f64;
    let mut violations = 0;
    for (i, v) in f.values().iter().enumerate() {
        let excess = h.project(&geom.point(i)) - h.s;
        if excess > 0.0 && v.norm() >= threshold && v.norm() > 0.0 {
            violations += 1;
            margin = margin.max(excess);
        }
    }
    Ok(SupportReport {
        contained: violations == 0,
        margin,
        violations,
        threshold,
    })
}

/// Proper rotation (a reflection when `d = 1`) with `Rη = e₁`.
pub fn alignment_rotation(eta: &[f64]) -> DMatrix<f64> {
    let d = eta.len();
    let mut v = nalgebra::DVector::from_column_slice(eta);
    v[0] -= 1.0;
    let vv = v.norm_squared();
    if vv < 1e-30 {
        return DMatrix::identity(d, d);
    }
    let mut r = DMatrix::identity(d, d) - (&v * v.transpose()) * (2.0 / vv);
    if d >= 2 {
        let last = d - 1;
        for j in 0..d {
            r[(last, j)] = -r[(last, j)];
        }
    }
    r
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub function: SampledFunction,
    pub rotation: DMatrix<f64>,
    pub l2_before: f64,
    pub l2_after: f64,
    /// `|‖g‖₂ − ‖f‖₂| / ‖f‖₂`; zero for motions that permute grid axes.
    pub resample_error: f64,
    /// Whether the motion was carried out by an exact index permutation.
    pub exact: bool,
}

/// `g(y) = f(Rᵀy + sη)`, which is supported in `{y₁ ≤ 0}`.
pub fn normalize_halfspace(f: &SampledFunction, h: &HalfSpace) -> Result<Normalized> {
    let support = halfspace_support(f, h)?;
    if !support.contained {
        return Err(Error::Contract(format!(
            "function is not supported in the half-space (margin {:.3e}, {} samples)",
            support.margin, support.violations
        )));
    }
    let rotation = alignment_rotation(&h.eta);
    let l2_before = l2_norm(f);
    let (function, exact) = match signed_permutation(&rotation) {
        Some(perm) => (permute(f, &perm, h.s)?, true),
        None => (resample(f, &rotation, h)?, false),
    };
    let l2_after = l2_norm(&function);
    let resample_error = if l2_before > 0.0 {
        (l2_after - l2_before).abs() / l2_before
    } else {
        l2_after
    };
    Ok(Normalized {
        function,
        rotation,
        l2_before,
        l2_after,
        resample_error,
        exact,
    })
}

/// Row `a` of `r` as `(column, sign)` when `r` is a signed permutation.
fn signed_permutation(r: &DMatrix<f64>) -> Option<Vec<(usize, f64)>> {
    let d = r.nrows();
    let mut out = Vec::with_capacity(d);
    for a in 0..d {
        let mut hit = None;
        for j in 0..d {
            let v = r[(a, j)];
            if (v.abs() - 1.0).abs() < 1e-14 {
                if hit.is_some() {
                    return None;
                }
                hit = Some((j, v.signum()));
            } else if v.abs() > 1e-14 {
                return None;
            }
        }
        out.push(hit?);
    }
    Some(out)
}

fn permute(f: &SampledFunction, perm: &[(usize, f64)], s: f64) -> Result<SampledFunction> {
    let src = f.geometry();
    let d = src.dims();
    let mut origin = vec![0.0; d];
    let mut spacing = vec![0.0; d];
    let mut shape = vec![0; d];
    for (a, &(j, sign)) in perm.iter().enumerate() {
        let n = src.shape[j];
        let shift = if a == 0 { s } else { 0.0 };
        spacing[a] = src.spacing[j];
        shape[a] = n;
        origin[a] = if sign > 0.0 {
            src.origin[j] - shift
        } else {
            -(src.origin[j] + (n - 1) as f64 * src.spacing[j]) - shift
        };
    }
    let geom = Geometry::new(origin, spacing, shape)?;
    let src_strides = src.strides();
    let values = (0..geom.len())
        .map(|flat| {
            let idx = geom.unravel(flat);
            let mut t = 0;
            for (a, &(j, sign)) in perm.iter().enumerate() {
                let i = if sign > 0.0 { idx[a] } else { src.shape[j] - 1 - idx[a] };
                t += i * src_strides[j];
            }
            f.values()[t]
        })
        .collect();
    SampledFunction::new(geom, values, format!("{} normalised", f.label()))
}

fn keys(x: f64) -> f64 {
    let x = x.abs();
    if x <= 1.0 {
        (1.5 * x - 2.5) * x * x + 1.0
    } else if x < 2.0 {
        ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0
    } else {
        0.0
    }
}

/// Separable cubic convolution interpolation, zero outside the grid.
fn interpolate(f: &SampledFunction, x: &[f64]) -> Complex64 {
    let geom = f.geometry();
    let d = geom.dims();
    let strides = geom.strides();
    let mut base = vec![0i64; d];
    let mut w = vec![[0.0f64; 4]; d];
    for a in 0..d {
        let u = (x[a] - geom.origin[a]) / geom.spacing[a];
        let i0 = u.floor();
        base[a] = i0 as i64 - 1;
        for (m, wm) in w[a].iter_mut().enumerate() {
            *wm = keys(u - (i0 - 1.0 + m as f64));
        }
    }
    let mut acc = Complex64::new(0.0, 0.0);
    'outer: for combo in 0..4usize.pow(d as u32) {
        let mut c = combo;
        let mut weight = 1.0;
        let mut t = 0usize;
        for a in 0..d {
            let m = c % 4;
            c /= 4;
            let i = base[a] + m as i64;
            if i < 0 || i >= geom.shape[a] as i64 {
                continue 'outer;
            }
            weight *= w[a][m];
            t += i as usize * strides[a];
        }
        acc += f.values()[t] * weight;
    }
    acc
}

fn resample(f: &SampledFunction, r: &DMatrix<f64>, hs: &HalfSpace) -> Result<SampledFunction> {
    let src = f.geometry();
    let d = src.dims();
    let h = src.spacing.iter().cloned().fold(f64::INFINITY, f64::min);
    let upper = src.upper();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for corner in 0..(1usize << d) {
        let x: Vec<f64> = (0..d)
            .map(|a| if corner >> a & 1 == 1 { upper[a] } else { src.origin[a] })
            .collect();
        for a in 0..d {
            let mut y: f64 = (0..d).map(|j| r[(a, j)] * x[j]).sum();
            if a == 0 {
                y -= hs.s;
            }
            lo[a] = lo[a].min(y);
            hi[a] = hi[a].max(y);
        }
    }
    let origin: Vec<f64> = lo.iter().map(|l| ((l / h).floor() - 1.0) * h).collect();
    let shape: Vec<usize> = (0..d)
        .map(|a| ((hi[a] - origin[a]) / h).ceil() as usize + 2)
        .collect();
    let geom = Geometry::new(origin, vec![h; d], shape)?;
    let values = (0..geom.len())
        .into_par_iter()
        .map(|flat| {
            let y = geom.point(flat);
            let x: Vec<f64> = (0..d)
                .map(|j| (0..d).map(|a| r[(a, j)] * y[a]).sum::<f64>() + hs.s * hs.eta[j])
                .collect();
            interpolate(f, &x)
        })
        .collect();
    SampledFunction::new(geom, values, format!("{} normalised", f.label()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogClass {
    DivergentTrend,
    Convergent,
    Inconclusive,
    /// Identically zero spectrum: the function vanishes trivially.
    Degenerate,
}

impl std::fmt::Display for LogClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LogClass::DivergentTrend => "divergent-trend",
            LogClass::Convergent => "convergent",
            LogClass::Inconclusive => "inconclusive",
            LogClass::Degenerate => "degenerate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogIntegralReport {
    pub samples: usize,
    pub floored_fraction: f64,
    /// `∫ log⁺(|F|e^ψ)/(1+t²)`.
    pub plus_part: f64,
    /// `∫ log⁺|F|/(1+t²)`.
    pub plus_part_unweighted: f64,
    /// `∫ |F|e^ψ/(1+t²)`, the upper bound for `plus_part`.
    pub plus_bound: f64,
    /// `(T, ∫_{|t|≤T} log⁻|F|/(1+t²))` at doubling `T`.
    pub minus_part: Vec<(f64, f64)>,
    /// Same table for `log⁻(|F|e^ψ)`.
    pub minus_part_weighted: Vec<(f64, f64)>,
    /// `(T, ∫_{|t|≤T} ψ/(1+t²))`.
    pub psi_part: Vec<(f64, f64)>,
    pub classification: LogClass,
    /// Largest `| |log|F|| − log⁺|F| − log⁻|F| |` over non-floored samples.
    pub identity_defect: f64,
    /// Samples with `|F|e^ψ ≤ 1` on which `log⁻|F| < log⁻(|F|e^ψ)`.
    pub comparison_violations: usize,
    pub comparison_samples: usize,
}

impl LogIntegralReport {
    pub fn minus_total(&self) -> f64 {
        self.minus_part.last().map_or(0.0, |p| p.1)
    }

    pub fn plus_bound_holds(&self) -> bool {
        self.plus_part <= self.plus_bound * (1.0 + 1e-12)
    }
}

/// One row per frequency sample: `t, log⁺(|F|), log⁻(|F|), log⁺(|F|e^ψ), log⁻(|F|e^ψ), floored`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogSample {
    pub t: f64,
    pub log_plus: f64,
    pub log_minus: f64,
    pub weighted_log_plus: f64,
    pub weighted_log_minus: f64,
    pub floored: bool,
}

pub fn log_integrand_samples(spec: &Spectrum, p: &DecayProfile) -> Result<Vec<LogSample>> {
    if spec.dims() != 1 {
        return Err(Error::Input("log-integral needs a one-dimensional spectrum".into()));
    }
    let ts = spec.frequencies(0);
    Ok(ts
        .iter()
        .zip(spec.values())
        .map(|(&t, v)| {
            let m = v.norm();
            let floored = m < MAGNITUDE_FLOOR;
            let l = m.max(MAGNITUDE_FLOOR).ln();
            let lw = l + p.value(t.abs());
            LogSample {
                t,
                log_plus: l.max(0.0),
                log_minus: -l.min(0.0),
                weighted_log_plus: lw.max(0.0),
                weighted_log_minus: -lw.min(0.0),
                floored,
            }
        })
        .collect())
}

fn doubling_levels(edge: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = 1.0;
    while t < edge {
        out.push(t);
        t *= 2.0;
    }
    out.push(edge);
    out
}

fn partial_table<F: Fn(&LogSample) -> f64>(samples: &[LogSample], dt: f64, levels: &[f64], g: F) -> Vec<(f64, f64)> {
    let mut order: Vec<&LogSample> = samples.iter().collect();
    order.sort_by(|a, b| a.t.abs().total_cmp(&b.t.abs()));
    let mut out = Vec::with_capacity(levels.len());
    let mut acc = 0.0;
    let mut it = order.into_iter().peekable();
    for &lv in levels {
        while let Some(s) = it.peek() {
            if s.t.abs() > lv {
                break;
            }
            acc += g(s) / (1.0 + s.t * s.t) * dt;
            it.next();
        }
        out.push((lv, acc));
    }
    out
}

/// Growth of a partial-integral table at doubling levels.
fn classify_growth(table: &[(f64, f64)]) -> LogClass {
    let inc: Vec<f64> = table.windows(2).map(|w| w[1].1 - w[0].1).collect();
    if inc.len() < 4 {
        return LogClass::Inconclusive;
    }
    // the last level is the band edge, not a full doubling
    let last = &inc[inc.len() - 4..inc.len() - 1];
    let total = table.last().map_or(0.0, |p| p.1).abs().max(1e-300);
    if last.iter().all(|&d| d <= 1e-12 * total) {
        return LogClass::Convergent;
    }
    if last.iter().any(|&d| d <= 0.0) {
        return LogClass::Inconclusive;
    }
    let ratio = ((last[1] / last[0]) * (last[2] / last[1])).sqrt();
    if ratio <= 0.75 {
        LogClass::Convergent
    } else if ratio >= 0.95 && last[2] > 1e-6 * total {
        LogClass::DivergentTrend
    } else {
        LogClass::Inconclusive
    }
}

pub fn log_integral(spec: &Spectrum, p: &DecayProfile) -> Result<LogIntegralReport> {
    let samples = log_integrand_samples(spec, p)?;
    let dt = spec.dual_cell_volume();
    let n = samples.len();
    let edge = samples.iter().map(|s| s.t.abs()).fold(0.0, f64::max);
    let levels = doubling_levels(edge);
    let floored = samples.iter().filter(|s| s.floored).count();
    let floored_fraction = floored as f64 / n as f64;
    let degenerate = spec.values().iter().all(|v| v.norm() == 0.0);
    let mut identity_defect = 0.0f64;
    let mut comparison_violations = 0;
    let mut comparison_samples = 0;
    let mut plus_part = 0.0;
    let mut plus_part_unweighted = 0.0;
    let mut plus_bound = 0.0;
    for (s, v) in samples.iter().zip(spec.values()) {
        let w = dt / (1.0 + s.t * s.t);
        plus_part += s.weighted_log_plus * w;
        plus_part_unweighted += s.log_plus * w;
        plus_bound += (v.norm().max(MAGNITUDE_FLOOR).ln() + p.value(s.t.abs())).exp() * w;
        if !s.floored {
            let l = v.norm().ln();
            identity_defect = identity_defect.max((l.abs() - (s.log_plus + s.log_minus)).abs());
        }
        if s.weighted_log_plus == 0.0 {
            comparison_samples += 1;
            if s.log_minus < s.weighted_log_minus {
                comparison_violations += 1;
            }
        }
    }
    let minus_part = partial_table(&samples, dt, &levels, |s| s.log_minus);
    let minus_part_weighted = partial_table(&samples, dt, &levels, |s| s.weighted_log_minus);
    let psi_part = partial_table(&samples, dt, &levels, |s| p.value(s.t.abs()));
    let classification = if degenerate {
        LogClass::Degenerate
    } else if floored_fraction > MAX_FLOORED_FRACTION {
        LogClass::Inconclusive
    } else {
        classify_growth(&minus_part)
    };
    Ok(LogIntegralReport {
        samples: n,
        floored_fraction,
        plus_part,
        plus_part_unweighted,
        plus_bound,
        minus_part,
        minus_part_weighted,
        psi_part,
        classification,
        identity_defect,
        comparison_violations,
        comparison_samples,
    })
}

/// `log ∫ |f̂|^q e^{qψ(|ξ₁|)} (1+‖ξ‖)^{−N} dξ` (or the log-sup for `q = ∞`) for a
/// function already normalised to `η = e₁`.
pub fn log_directional_mass(spec: &Spectrum, p: &DecayProfile, q: f64, n: f64) -> Result<f64> {
    if !(q >= 1.0) || !(n >= 0.0) {
        return Err(Error::Input(format!("need q ≥ 1 and N ≥ 0, got q = {q}, N = {n}")));
    }
    let terms: Vec<f64> = spec
        .values()
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let xi = spec.frequency_point(i);
            let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
            let m = v.norm();
            if m == 0.0 {
                return f64::NEG_INFINITY;
            }
            let e = m.ln() + p.value(xi[0].abs());
            if q.is_infinite() {
                e - n * (1.0 + r).ln()
            } else {
                q * e - n * (1.0 + r).ln()
            }
        })
        .collect();
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if q.is_infinite() || top == f64::NEG_INFINITY {
        return Ok(top);
    }
    let s: f64 = terms.iter().map(|t| (t - top).exp()).sum();
    Ok(top + (s * spec.dual_cell_volume()).ln())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    TriviallyZero,
    /// Divergent criterion: the criterion forces `f = 0`. `consistent` records
    /// whether every retained slice shows the divergent log-integral trend.
    MustVanish { consistent: bool },
    NotForced,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceReport {
    pub index: usize,
    pub frequency: Vec<f64>,
    pub l2_norm: f64,
    pub log_integral: LogIntegralReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub profile: String,
    pub criterion: Classification,
    pub q: f64,
    pub n: f64,
    pub l2_norm: f64,
    pub peak: f64,
    pub support: SupportReport,
    pub resample_error: f64,
    pub log_weighted_mass: Option<f64>,
    pub slices: Vec<SliceReport>,
    pub skipped_slices: usize,
    pub diagnostics: Vec<String>,
}

pub fn halfspace_verdict(
    f: &SampledFunction,
    h: &HalfSpace,
    p: &DecayProfile,
    q: f64,
    n: f64,
) -> Result<VerdictReport> {
    let crit = criterion(p)?;
    let support = halfspace_support(f, h)?;
    let mut report = VerdictReport {
        verdict: Verdict::TriviallyZero,
        profile: p.to_string(),
        criterion: crit.classification,
        q,
        n,
        l2_norm: l2_norm(f),
        peak: f.peak(),
        support: support.clone(),
        resample_error: 0.0,
        log_weighted_mass: None,
        slices: vec![],
        skipped_slices: 0,
        diagnostics: vec![],
    };
    if f.is_zero() {
        return Ok(report);
    }
    let norm = normalize_halfspace(f, h)?;
    report.resample_error = norm.resample_error;
    let g = norm.function;
    let spec = forward_transform(&g)?;
    let mass = log_directional_mass(&spec, p, q, n)?;
    report.log_weighted_mass = Some(mass);
    if !mass.is_finite() {
        report
            .diagnostics
            .push("weighted spectral mass is not finite on the grid".to_string());
    }
    let slices: Vec<(Vec<f64>, SampledFunction)> = if g.dims() == 1 {
        vec![(vec![], g.clone())]
    } else {
        let fam = slice_transform(&g)?;
        (0..fam.slices.len())
            .map(|i| (fam.frequency(i), fam.slices[i].clone()))
            .collect()
    };
    let norms: Vec<f64> = slices.iter().map(|(_, s)| l2_norm(s)).collect();
    let top = norms.iter().cloned().fold(0.0, f64::max);
    let kept: Vec<usize> = (0..slices.len()).filter(|&i| norms[i] >= SLICE_SKIP * top).collect();
    report.skipped_slices = slices.len() - kept.len();
    report.slices = kept
        .par_iter()
        .map(|&i| {
            let spec = forward_transform(&slices[i].1)?;
            Ok(SliceReport {
                index: i,
                frequency: slices[i].0.clone(),
                l2_norm: norms[i],
                log_integral: log_integral(&spec, p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    report.verdict = match crit.classification {
        Classification::Divergent => {
            let diverging = report
                .slices
                .iter()
                .filter(|s| s.log_integral.classification == LogClass::DivergentTrend)
                .count();
            let consistent = diverging == report.slices.len();
            if !consistent {
                report.diagnostics.push(format!(
                    "divergent profile with finite weighted mass {mass:.6e} on the grid, yet {} of {} nonzero slices show a bounded log-integral: the sampled f is not a genuine solution of the estimate",
                    report.slices.len() - diverging,
                    report.slices.len()
                ));
            }
            Verdict::MustVanish { consistent }
        }
        _ => Verdict::NotForced,
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::{gaps_from_profile, ingham_function, mollify, GapSequence, SynthesisGrid};

    fn box_1d(lo: f64, hi: f64) -> SampledFunction {
        let geom = Geometry::symmetric(2.0, 256).unwrap();
        SampledFunction::from_real_fn(geom, "box", |x| if x[0] >= lo && x[0] <= hi { 1.0 } else { 0.0 })
    }

    #[test]
    fn support_on_half_line() {
        let f = box_1d(-1.0, 0.0);
        let h = HalfSpace::new(vec![1.0], 0.0).unwrap();
        assert!(halfspace_support(&f, &h).unwrap().contained);
        let r = halfspace_support(&f, &HalfSpace::new(vec![1.0], -0.5).unwrap()).unwrap();
        assert!(!r.contained);
        assert!((r.margin - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rotated_indicator_matches_pointwise_scan() {
        let geom = Geometry::cube(2.0, 64, 2).unwrap();
        let f = SampledFunction::from_real_fn(geom.clone(), "sq", |x| {
            if x[0].abs() <= 1.0 && x[1].abs() <= 1.0 {
                1.0
            } else {
                0.0
            }
        });
        let eta = vec![0.5f64.sqrt(), 0.5f64.sqrt()];
        for s in [-0.5, 0.0, 1.0, 2.0f64.sqrt(), 1.5] {
            let h = HalfSpace::new(eta.clone(), s).unwrap();
            let r = halfspace_support(&f, &h).unwrap();
            let mut margin = 0.0f64;
            for i in 0..geom.len() {
                let x = geom.point(i);
                let e = (x[0] + x[1]) * eta[0] - s;
                if f.values()[i].re != 0.0 && e > 0.0 {
                    margin = margin.max(e);
                }
            }
            assert_eq!(r.contained, margin == 0.0, "s={s}");
            assert!((r.margin - margin).abs() < 1e-12);
        }
    }

    #[test]
    fn non_unit_normal_rejected() {
        assert!(HalfSpace::new(vec![1.0, 1.0], 0.0).is_err());
        assert!(HalfSpace::normalized(vec![1.0, 1.0], 0.0).is_ok());
    }

    #[test]
    fn identity_motion() {
        let f = box_1d(-1.0, 0.0);
        let n = normalize_halfspace(&f, &HalfSpace::new(vec![1.0], 0.0).unwrap()).unwrap();
        assert!(n.exact);
        assert_eq!(n.function.values(), f.values());
        assert_eq!(n.function.geometry(), f.geometry());
    }

    #[test]
    fn reflection_flips_support() {
        let f = box_1d(0.25, 1.0);
        let h = HalfSpace::new(vec![-1.0], 0.0).unwrap();
        let n = normalize_halfspace(&f, &h).unwrap();
        assert!(halfspace_support(&n.function, &HalfSpace::lower_first_axis(1)).unwrap().contained);
        let g = &n.function;
        for i in 0..g.geometry().len() {
            let y = g.geometry().coord(0, i);
            let expect = if (0.25..=1.0).contains(&-y) { 1.0 } else { 0.0 };
            assert_eq!(g.values()[i].re, expect, "y={y}");
        }
        assert_eq!(n.resample_error, 0.0);
    }

    #[test]
    fn rotation_and_translation_in_the_plane() {
        let geom = Geometry::cube(2.0, 64, 2).unwrap();
        let f = SampledFunction::from_real_fn(geom, "g", |x| {
            if x[1] <= 1.0 {
                (-4.0 * (x[0] * x[0] + (x[1] - 0.2).powi(2))).exp() * (1.0 - x[1]).min(1.0)
            } else {
                0.0
            }
        });
        let h = HalfSpace::new(vec![0.0, 1.0], 1.0).unwrap();
        let n = normalize_halfspace(&f, &h).unwrap();
        assert!(n.exact);
        assert!(halfspace_support(&n.function, &HalfSpace::lower_first_axis(2)).unwrap().contained);
        assert!(n.resample_error < 1e-14);
        // g(y) = f(Rᵀy + sη) spot check
        let g = &n.function;
        let r = &n.rotation;
        for flat in (0..g.geometry().len()).step_by(173) {
            let y = g.geometry().point(flat);
            let x0 = r[(0, 0)] * y[0] + r[(1, 0)] * y[1];
            let x1 = r[(0, 1)] * y[0] + r[(1, 1)] * y[1] + 1.0;
            let fx = if x1 <= 1.0 {
                (-4.0 * (x0 * x0 + (x1 - 0.2f64).powi(2))).exp() * (1.0 - x1).min(1.0)
            } else {
                0.0
            };
            assert!((g.values()[flat].re - fx).abs() < 1e-12);
        }
        assert!((r.determinant() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn oblique_rotation_resamples_smooth_functions() {
        let geom = Geometry::cube(3.0, 192, 2).unwrap();
        let bumpy = |x: &[f64]| {
            let r2 = (x[0] + 0.8).powi(2) + (x[1] + 0.8).powi(2);
            if r2 < 1.0 {
                (-1.0 / (1.0 - r2)).exp()
            } else {
                0.0
            }
        };
        let f = SampledFunction::from_real_fn(geom, "b", bumpy);
        let eta = vec![0.5f64.sqrt(), 0.5f64.sqrt()];
        let h = HalfSpace::new(eta, 0.0).unwrap();
        let n = normalize_halfspace(&f, &h).unwrap();
        assert!(!n.exact);
        assert!(n.resample_error < 1e-4, "{}", n.resample_error);
        let s = halfspace_support(&n.function, &HalfSpace::lower_first_axis(2)).unwrap();
        assert!(s.contained || s.margin <= 2.0 * 3.0 / 96.0);
    }

    #[test]
    fn violated_support_is_a_contract_error() {
        let f = box_1d(-1.0, 0.5);
        assert!(matches!(
            normalize_halfspace(&f, &HalfSpace::new(vec![1.0], 0.0).unwrap()),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn gaussian_log_minus_diverges() {
        let geom = Geometry::symmetric(8.0, 384).unwrap();
        let spec = Spectrum::from_fn(geom, |xi| Complex64::new((-std::f64::consts::PI * xi[0] * xi[0]).exp(), 0.0));
        let r = log_integral(&spec, &DecayProfile::zero()).unwrap();
        assert_eq!(r.floored_fraction, 0.0);
        assert_eq!(r.classification, LogClass::DivergentTrend);
        // closed form: ∫_{|t|≤T} πt²/(1+t²) = 2π(T − atan T); the two end
        // samples contribute at most πΔ each
        let dt = spec.dual_cell_volume();
        for &(t, v) in &r.minus_part {
            let exact = 2.0 * std::f64::consts::PI * (t - t.atan());
            assert!((v - exact).abs() <= 2.0 * std::f64::consts::PI * dt, "T={t}: {v} vs {exact}");
        }
        assert!(r.plus_part < 1e-15);
    }

    #[test]
    fn unit_spectrum_has_zero_parts() {
        let geom = Geometry::symmetric(4.0, 128).unwrap();
        let spec = Spectrum::from_fn(geom, |_| Complex64::new(1.0, 0.0));
        let r = log_integral(&spec, &DecayProfile::zero()).unwrap();
        assert_eq!(r.plus_part, 0.0);
        assert_eq!(r.minus_total(), 0.0);
    }

    #[test]
    fn zero_spectrum_is_degenerate() {
        let geom = Geometry::symmetric(4.0, 128).unwrap();
        let spec = Spectrum::from_fn(geom, |_| Complex64::new(0.0, 0.0));
        let r = log_integral(&spec, &DecayProfile::zero()).unwrap();
        assert_eq!(r.classification, LogClass::Degenerate);
        assert_eq!(r.floored_fraction, 1.0);
    }

    #[test]
    fn sinc_product_plus_part_is_bounded() {
        let p = DecayProfile::power(0.5);
        let g = gaps_from_profile(&p, 1.0, 10).unwrap();
        let (_, spec) = ingham_function(&g, &SynthesisGrid::for_gaps(&g)).unwrap();
        let r = log_integral(&spec, &p).unwrap();
        assert!(r.plus_part.is_finite() && r.plus_bound.is_finite());
        assert!(r.plus_part <= r.plus_bound + 1e-8);
        assert_eq!(r.identity_defect, 0.0);
        assert_eq!(r.comparison_violations, 0);
        assert!(r.comparison_samples > 0);
    }

    #[test]
    fn zero_function_is_trivially_zero() {
        let f = SampledFunction::zeros(Geometry::cube(1.0, 16, 2).unwrap(), "0");
        let r = halfspace_verdict(&f, &HalfSpace::lower_first_axis(2), &DecayProfile::linear(1.0), 1.0, 0.0).unwrap();
        assert_eq!(r.verdict, Verdict::TriviallyZero);
        assert_eq!(r.l2_norm, 0.0);
    }

    #[test]
    fn mollified_ingham_function_is_not_forced() {
        let p = DecayProfile::power(0.5);
        let g = GapSequence::new(&[0.2, 0.1, 0.1, 0.05], 0.5).unwrap();
        let grid = SynthesisGrid {
            spacing: 1.0 / 256.0,
            points: 1024,
        };
        let (f0, _) = ingham_function(&g, &grid).unwrap();
        let f = mollify(&f0, 1.0).unwrap();
        let h = HalfSpace::new(vec![1.0], 1.0).unwrap();
        let r = halfspace_verdict(&f, &h, &p, 1.0, 0.0).unwrap();
        assert_eq!(r.verdict, Verdict::NotForced);
        assert_eq!(r.criterion, Classification::Convergent);
        assert!(r.log_weighted_mass.unwrap().is_finite());
    }

    #[test]
    fn forced_divergent_weight_reports_the_contradiction() {
        let geom = Geometry::cube(2.0, 64, 2).unwrap();
        let f = SampledFunction::from_real_fn(geom, "half", |x| {
            if x[0] <= 0.0 && x[0] >= -1.0 {
                (-x[1] * x[1] * 4.0).exp()
            } else {
                0.0
            }
        });
        let r = halfspace_verdict(&f, &HalfSpace::lower_first_axis(2), &DecayProfile::linear(1.0), 1.0, 0.0).unwrap();
        assert_eq!(r.verdict, Verdict::MustVanish { consistent: false });
        assert!(r.l2_norm > 0.1);
        assert!(!r.diagnostics.is_empty());
        assert!(r.skipped_slices < 64);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn decomposition_and_comparison(vals in proptest::collection::vec(-40.0f64..10.0, 64), c in 0.0f64..3.0) {
                let geom = Geometry::symmetric(4.0, 64).unwrap();
                let v: Vec<Complex64> = vals.iter().map(|l| Complex64::new(l.exp(), 0.0)).collect();
                let spec = Spectrum::new(geom, v).unwrap();
                let p = DecayProfile::power(0.5).scaled(c);
                let r = log_integral(&spec, &p).unwrap();
                prop_assert_eq!(r.identity_defect, 0.0);
                prop_assert_eq!(r.comparison_violations, 0);
                prop_assert!(r.plus_bound_holds());
            }

            #[test]
            fn axis_motions_preserve_norm(axis in 0usize..2, sign in prop::bool::ANY, s in -4i32..4) {
                let geom = Geometry::cube(2.0, 32, 2).unwrap();
                let sh = s as f64 / 8.0;
                let mut eta = vec![0.0; 2];
                eta[axis] = if sign { 1.0 } else { -1.0 };
                let h = HalfSpace::new(eta.clone(), sh).unwrap();
                let f = SampledFunction::from_real_fn(geom, "f", |x| {
                    let proj = x[0] * eta[0] + x[1] * eta[1];
                    if proj <= sh { (-(x[0] * x[0] + 2.0 * x[1] * x[1])).exp() } else { 0.0 }
                });
                let n = normalize_halfspace(&f, &h).unwrap();
                prop_assert!(n.resample_error < 1e-8);
                prop_assert!(halfspace_support(&n.function, &HalfSpace::lower_first_axis(2)).unwrap().contained);
            }
        }
    }
}
