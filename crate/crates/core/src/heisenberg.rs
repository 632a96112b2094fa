//! Group Fourier analysis on the Heisenberg groups `H_n` in exponential
//! coordinates `(t, x, y) ∈ ℝ × ℝⁿ × ℝⁿ`, `t` central.
//!
//! The Schrödinger representation is
//! `π_λ(t, x, y)φ(u) = e^{2πiλ(t + y·u + x·y/2)} φ(u + x)` and the operator
//! Fourier transform is `π_λ(f) = ∫ f(g) π_λ(g⁻¹) dg`. Its kernel is
//! `K(u, w) = F₁₂(λ, u − w, λ(u + w)/2)` where `F₁₂` transforms `f` in `t` and
//! `y`, so `‖π_λ(f)‖²_HS = |λ|^{−n} ∫ |F₁(λ, x, y)|² dx dy`.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{cis_turns, forward_transform, l2_norm, transform_at, Geometry, SampledFunction, SUPPORT_THRESHOLD};
use crate::nilpotent::{jump_indices, pfaffian_abs, LieAlgebraSpec};
use crate::quadrature::composite_gauss_legendre;
use crate::vanish::{log_integral, LogIntegralReport};
use crate::weights::{criterion, Classification, DecayProfile};

/// Central frequencies closer to 0 than this are rejected.
pub const MIN_LAMBDA: f64 = 1e-6;
/// Half-width of the excluded interval around `λ = 0`.
pub const DELTA: f64 = 1e-3;
pub const DEFAULT_LAMBDA_MAX: f64 = 8.0;
/// Total panels over both half-lines.
pub const DEFAULT_PANELS: usize = 16;
pub const GAUSS_ORDER: usize = 4;

/// A sampled function on `H_n`; axis 0 is `t`, then `x₁…x_n`, then `y₁…y_n`.
#[derive(Clone, Debug)]
pub struct GroupFunction {
    algebra: LieAlgebraSpec,
    n: usize,
    samples: SampledFunction,
}

fn is_heisenberg(spec: &LieAlgebraSpec) -> Option<usize> {
    let d = spec.dim();
    if d % 2 == 0 {
        return None;
    }
    let n = (d - 1) / 2;
    let h = LieAlgebraSpec::heisenberg(n);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if (spec.c(i, j, k) - h.c(i, j, k)).abs() > 1e-12 {
                    return None;
                }
            }
        }
    }
    Some(n)
}

impl GroupFunction {
    pub fn new(algebra: LieAlgebraSpec, samples: SampledFunction) -> Result<Self> {
        let n = is_heisenberg(&algebra).ok_or_else(|| {
            Error::Domain(
                "representations are realised only for Heisenberg algebras in the basis Z, X₁…X_n, Y₁…Y_n".into(),
            )
        })?;
        if samples.dims() != algebra.dim() {
            return Err(Error::Input(format!(
                "grid of dimension {} for an algebra of dimension {}",
                samples.dims(),
                algebra.dim()
            )));
        }
        let edge = boundary_level(&samples);
        if edge > SUPPORT_THRESHOLD {
            return Err(Error::Input(format!(
                "function does not vanish on the boundary of its grid (level {edge:.3e} of the peak)"
            )));
        }
        Ok(Self { algebra, n, samples })
    }

    pub fn from_fn<F>(n: usize, geom: Geometry, label: &str, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        Self::new(LieAlgebraSpec::heisenberg(n), SampledFunction::from_real_fn(geom, label, f))
    }

    pub fn algebra(&self) -> &LieAlgebraSpec {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &SampledFunction {
        &self.samples
    }

    pub fn l2_norm(&self) -> f64 {
        l2_norm(&self.samples)
    }

    fn t_len(&self) -> usize {
        self.samples.geometry().shape[0]
    }

    /// Number of samples per `t` value.
    fn lane(&self) -> usize {
        self.samples.geometry().len() / self.t_len()
    }

    fn transverse(&self, from: usize, to: usize) -> Geometry {
        let g = self.samples.geometry();
        Geometry {
            origin: g.origin[from..to].to_vec(),
            spacing: g.spacing[from..to].to_vec(),
            shape: g.shape[from..to].to_vec(),
        }
    }

    /// `F₁(λ, x, y) = ∫ f(t, x, y) e^{−2πiλt} dt` over the `(x, y)` lattice.
    fn central_transform(&self, lambda: f64) -> Vec<Complex64> {
        let g = self.samples.geometry();
        let ht = g.spacing[0];
        let m = self.lane();
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..self.t_len() {
            let e = cis_turns(-lambda * g.coord(0, j)) * ht;
            let row = &self.samples.values()[j * m..(j + 1) * m];
            for (o, v) in out.iter_mut().zip(row) {
                *o += v * e;
            }
        }
        out
    }

    fn nyquist(&self) -> f64 {
        0.5 / self.samples.geometry().spacing[0]
    }
}

/// Largest `|f|/peak` on the faces of the grid.
fn boundary_level(f: &SampledFunction) -> f64 {
    let peak = f.peak();
    if peak == 0.0 {
        return 0.0;
    }
    let geom = f.geometry();
    let mut worst = 0.0f64;
    for (i, v) in f.values().iter().enumerate() {
        let idx = geom.unravel(i);
        if idx.iter().zip(&geom.shape).any(|(&k, &n)| k == 0 || k + 1 == n) {
            worst = worst.max(v.norm() / peak);
        }
    }
    worst
}

/// Kernel of `π_λ(f)` sampled on the lattice `u − w = x`, `λ(u + w)/2 = s`,
/// with `x` on the grid of `f` and `s` on the dual grid of the `y` axes.
#[derive(Clone, Debug)]
pub struct HSOperator {
    pub lambda: f64,
    pub n: usize,
    /// Lattice of the `x` variables.
    pub x_grid: Geometry,
    /// Lattice of the `y` variables; `s` runs over its dual grid.
    pub y_grid: Geometry,
    /// Row-major over `(x, s)`.
    pub kernel: Vec<Complex64>,
    /// Area of `du dw` carried by one kernel sample.
    pub cellvol: f64,
}

impl HSOperator {
    pub fn hs_norm_squared(&self) -> f64 {
        self.kernel.iter().map(|k| k.norm_sqr()).sum::<f64>() * self.cellvol
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_norm_squared().sqrt()
    }

    /// `(u, w)` of the kernel sample at `flat`.
    pub fn point(&self, flat: usize) -> (Vec<f64>, Vec<f64>) {
        let ms = self.y_grid.len();
        let x = self.x_grid.point(flat / ms);
        let sk = self.y_grid.unravel(flat % ms);
        let mut u = vec![0.0; self.n];
        let mut w = vec![0.0; self.n];
        for a in 0..self.n {
            let sigma = 2.0 * self.y_grid.frequency(a, sk[a]) / self.lambda;
            u[a] = 0.5 * (sigma + x[a]);
            w[a] = 0.5 * (sigma - x[a]);
        }
        (u, w)
    }
}

fn check_lambda(f: &GroupFunction, lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda.abs() < MIN_LAMBDA {
        return Err(Error::NearSingular(lambda));
    }
    if lambda.abs() > f.nyquist() {
        return Err(Error::Resolution(format!(
            "|λ| = {} exceeds the central Nyquist frequency {}",
            lambda.abs(),
            f.nyquist()
        )));
    }
    Ok(())
}

pub fn schrodinger_kernel(f: &GroupFunction, lambda: f64) -> Result<HSOperator> {
    check_lambda(f, lambda)?;
    let n = f.n;
    let x_grid = f.transverse(1, n + 1);
    let y_grid = f.transverse(n + 1, 2 * n + 1);
    let f1 = f.central_transform(lambda);
    let my = y_grid.len();
    let mut kernel = Vec::with_capacity(f1.len());
    for chunk in f1.chunks(my) {
        let slice = SampledFunction::new(y_grid.clone(), chunk.to_vec(), "")?;
        kernel.extend_from_slice(forward_transform(&slice)?.values());
    }
    let cellvol = x_grid.cell_volume() * y_grid.dual_cell_volume() / lambda.abs().powi(n as i32);
    Ok(HSOperator {
        lambda,
        n,
        x_grid,
        y_grid,
        kernel,
        cellvol,
    })
}

/// `|Pf(ν)|` at `ν = λ Z*`, from the coadjoint form.
pub fn plancherel_density(f: &GroupFunction, lambda: f64) -> Result<f64> {
    let mut nu = vec![0.0; f.algebra.dim()];
    nu[0] = lambda;
    let p = jump_indices(&f.algebra, &nu)?;
    pfaffian_abs(&f.algebra, &nu, &p)
}

/// `g(t) = ∫ (f_y ∗ f_y*)(t) dy` with `f_y*(t) = conj f_y(−t)`, on lags `t = jh`, `|j| < n_t`.
pub fn slice_autocorrelation(f: &GroupFunction) -> Result<SampledFunction> {
    let geom = f.samples.geometry();
    let nt = f.t_len();
    let m = f.lane();
    let ht = geom.spacing[0];
    let cell = geom.cell_volume() / ht;
    let npad = (2 * nt - 1).next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(npad);
    let inv = planner.plan_fft_inverse(npad);
    let power = (0..m)
        .into_par_iter()
        .fold(
            || vec![0.0f64; npad],
            |mut acc, r| {
                let mut lane = vec![Complex64::new(0.0, 0.0); npad];
                for j in 0..nt {
                    lane[j] = f.samples.values()[j * m + r];
                }
                fwd.process(&mut lane);
                for (a, v) in acc.iter_mut().zip(&lane) {
                    *a += v.norm_sqr();
                }
                acc
            },
        )
        .reduce(
            || vec![0.0f64; npad],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                a
            },
        );
    let mut buf: Vec<Complex64> = power.iter().map(|&p| Complex64::new(p, 0.0)).collect();
    inv.process(&mut buf);
    let scale = ht * cell / npad as f64;
    let values = (0..2 * nt - 1)
        .map(|i| {
            let lag = i as i64 - (nt as i64 - 1);
            let k = lag.rem_euclid(npad as i64) as usize;
            buf[k] * scale
        })
        .collect();
    let out = Geometry::new(vec![-((nt - 1) as f64) * ht], vec![ht], vec![2 * nt - 1])?;
    SampledFunction::new(out, values, format!("{} autocorrelation", f.samples.label()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub lambda: f64,
    pub hs_squared: f64,
    pub density: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinementLevel {
    pub panels: usize,
    pub integral: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlancherelReport {
    pub lambda_max: f64,
    pub delta: f64,
    pub panels: usize,
    pub order: usize,
    pub integral: f64,
    pub l2_squared: f64,
    pub relative_error: f64,
    /// `2δ·ĝ(0)`, the mass of the excluded interval to first order.
    pub gap_estimate: f64,
    /// Mass above `lambda_max`: `‖f‖² − ∫_{|λ|≤Λ} ĝ`, from the slice autocorrelation.
    pub band_tail: f64,
    pub table: Vec<LambdaRow>,
    pub refinement: Vec<RefinementLevel>,
    pub observed_order: Option<f64>,
}

/// Nodes and weights on `[−Λ, −δ] ∪ [δ, Λ]` with `panels` panels in total.
pub fn lambda_nodes(lambda_max: f64, panels: usize) -> Result<Vec<(f64, f64)>> {
    if panels < 2 || panels % 2 == 1 {
        return Err(Error::Input(format!("panel count {panels} must be even and at least 2")));
    }
    if !(lambda_max > DELTA) {
        return Err(Error::Input(format!("λ band {lambda_max} must exceed {DELTA}")));
    }
    let half = composite_gauss_legendre(DELTA, lambda_max, panels / 2, GAUSS_ORDER);
    let mut out: Vec<(f64, f64)> = half.iter().rev().map(|&(x, w)| (-x, w)).collect();
    out.extend(half);
    Ok(out)
}

fn weighted_rows(f: &GroupFunction, nodes: &[(f64, f64)]) -> Result<Vec<LambdaRow>> {
    nodes
        .par_iter()
        .map(|&(lambda, weight)| {
            let k = schrodinger_kernel(f, lambda)?;
            Ok(LambdaRow {
                lambda,
                hs_squared: k.hs_norm_squared(),
                density: plancherel_density(f, lambda)?,
                weight,
            })
        })
        .collect()
}

fn integrate(rows: &[LambdaRow]) -> f64 {
    rows.iter().map(|r| r.hs_squared * r.density * r.weight).sum()
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// `∫_𝒲 ‖π_ν(f)‖²_HS |Pf(ν)| dν` against `‖f‖₂²`, with a panel-doubling study
/// from `panels/8` up to `panels`.
pub fn plancherel_check(f: &GroupFunction, lambda_max: f64, panels: usize) -> Result<PlancherelReport> {
    check_lambda(f, lambda_max)?;
    let l2_squared = f.l2_norm().powi(2);
    let g = slice_autocorrelation(f)?;
    let gap_estimate = 2.0 * DELTA * transform_at(&g, 0.0).re;
    let band_tail = l2_squared - band_mass(&g, lambda_max);
    let mut levels: Vec<usize> = [panels / 8, panels / 4, panels / 2]
        .into_iter()
        .filter(|&p| p >= 2 && p % 2 == 0)
        .collect();
    levels.dedup();
    levels.push(panels);
    let mut refinement = Vec::new();
    let mut table = vec![];
    let mut integral = 0.0;
    for &p in &levels {
        let rows = weighted_rows(f, &lambda_nodes(lambda_max, p)?)?;
        let value = integrate(&rows);
        if !value.is_finite() {
            return Err(Error::Numeric {
                message: format!("Plancherel quadrature is not finite with {p} panels"),
                diagnostics: refinement
                    .iter()
                    .map(|l: &RefinementLevel| format!("panels {} integral {:e}", l.panels, l.integral))
                    .collect(),
            });
        }
        refinement.push(RefinementLevel {
            panels: p,
            integral: value,
            relative_error: relative(value, l2_squared),
        });
        if p == panels {
            table = rows;
            integral = value;
        }
    }
    Ok(PlancherelReport {
        lambda_max,
        delta: DELTA,
        panels,
        order: GAUSS_ORDER,
        integral,
        l2_squared,
        relative_error: relative(integral, l2_squared),
        gap_estimate,
        band_tail,
        table,
        observed_order: observed_order(&refinement),
        refinement,
    })
}

/// `∫_{|λ|≤Λ} ĝ(λ) dλ` for the autocorrelation `g`, by the same composite rule
/// on a fine panel set (with the excluded interval included).
fn band_mass(g: &SampledFunction, lambda_max: f64) -> f64 {
    composite_gauss_legendre(-lambda_max, lambda_max, 128, GAUSS_ORDER)
        .iter()
        .map(|&(x, w)| transform_at(g, x).re * w)
        .sum()
}

/// `log₂(e_k/e_{k+1})` from the two coarsest levels whose errors sit above rounding.
fn observed_order(levels: &[RefinementLevel]) -> Option<f64> {
    let floor = 1e-13;
    levels
        .windows(2)
        .find(|w| w[1].relative_error > floor && w[0].relative_error > w[1].relative_error)
        .map(|w| (w[0].relative_error / w[1].relative_error).log2())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceIdentityRow {
    pub lambda: f64,
    /// `ĝ(λ)` from the slice autocorrelation.
    pub g_hat: f64,
    /// `‖π_λ(f)‖²_HS |λ|ⁿ` from the Schrödinger kernel.
    pub hs_side: f64,
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceIdentityReport {
    pub rows: Vec<SliceIdentityRow>,
    pub max_relative: f64,
    /// `min ĝ / max |ĝ|` over the table (0 when `ĝ ≡ 0`).
    pub min_g_hat_ratio: f64,
}

pub fn slice_identity(f: &GroupFunction, lambdas: &[f64]) -> Result<SliceIdentityReport> {
    let g = slice_autocorrelation(f)?;
    let rows = lambdas
        .par_iter()
        .map(|&lambda| {
            let hs = schrodinger_kernel(f, lambda)?.hs_norm_squared() * plancherel_density(f, lambda)?;
            let gh = transform_at(&g, lambda).re;
            Ok(SliceIdentityRow {
                lambda,
                g_hat: gh,
                hs_side: hs,
                relative: relative(gh, hs),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_relative = rows.iter().map(|r| r.relative).fold(0.0, f64::max);
    let top = rows.iter().map(|r| r.g_hat.abs()).fold(0.0, f64::max);
    let low = rows.iter().map(|r| r.g_hat).fold(f64::INFINITY, f64::min);
    Ok(SliceIdentityReport {
        rows,
        max_relative,
        min_g_hat_ratio: if top > 0.0 { low / top } else { 0.0 },
    })
}

/// `log ∫_{δ≤|λ|≤Λ} ‖π_λ(f)‖²_HS e^{2ψ(|λ|)} |λ|ⁿ dλ`, `None` when the mass is zero.
pub fn log_weighted_plancherel_mass(
    f: &GroupFunction,
    p: &DecayProfile,
    lambda_max: f64,
    panels: usize,
) -> Result<Option<f64>> {
    check_lambda(f, lambda_max)?;
    let rows = weighted_rows(f, &lambda_nodes(lambda_max, panels)?)?;
    let terms: Vec<f64> = rows
        .iter()
        .filter(|r| r.hs_squared > 0.0)
        .map(|r| (r.hs_squared * r.density * r.weight).ln() + 2.0 * p.value(r.lambda.abs()))
        .collect();
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Ok(None);
    }
    Ok(Some(top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupVerdict {
    Consistent,
    InconsistentAtGridScale,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupVerdictReport {
    pub verdict: GroupVerdict,
    pub profile: String,
    pub criterion: Classification,
    pub l2_norm: f64,
    /// `(Λ, log weighted mass)` at successive band doublings.
    pub growth: Vec<(f64, Option<f64>)>,
    pub reduction: Option<LogIntegralReport>,
    pub diagnostics: Vec<String>,
}

pub fn ingham_nilpotent_check(
    f: &GroupFunction,
    p: &DecayProfile,
    lambda_max: f64,
    panels: usize,
) -> Result<GroupVerdictReport> {
    let crit = criterion(p)?;
    let l2 = f.l2_norm();
    let mut report = GroupVerdictReport {
        verdict: GroupVerdict::Consistent,
        profile: p.to_string(),
        criterion: crit.classification,
        l2_norm: l2,
        growth: vec![],
        reduction: None,
        diagnostics: vec![],
    };
    for band in [lambda_max / 4.0, lambda_max / 2.0, lambda_max] {
        if band > DELTA {
            report
                .growth
                .push((band, log_weighted_plancherel_mass(f, p, band, panels)?));
        }
    }
    if f.samples.is_zero() {
        return Ok(report);
    }
    let g = slice_autocorrelation(f)?;
    report.reduction = Some(log_integral(&forward_transform(&g)?, p)?);
    let finite = report.growth.iter().all(|(_, m)| m.is_none_or(f64::is_finite));
    if crit.classification == Classification::Divergent && finite && l2 > 0.0 {
        report.verdict = GroupVerdict::InconsistentAtGridScale;
        let growth: Vec<String> = report
            .growth
            .windows(2)
            .map(|w| match (w[0].1, w[1].1) {
                (Some(a), Some(b)) => format!("{:.3e}", b - a),
                _ => "n/a".into(),
            })
            .collect();
        report.diagnostics.push(format!(
            "divergent criterion, nonzero f (‖f‖₂ = {l2:.6e}) and finite weighted mass in every band; log-mass growth per band doubling: {}",
            growth.join(", ")
        ));
    }
    Ok(report)
}

/// `f(t, x, y) = ∫ g(s) h(t − s, x, y) ds`, the convolution along the centre.
pub fn central_construction(g: &SampledFunction, h: &GroupFunction) -> Result<GroupFunction> {
    if g.dims() != 1 {
        return Err(Error::Input("central factor must be a function of one variable".into()));
    }
    let hg = h.samples.geometry();
    let ht = hg.spacing[0];
    let gs = g.geometry().spacing[0];
    if (gs - ht).abs() > 1e-12 * ht {
        return Err(Error::Input(format!(
            "central factor spacing {gs} differs from the t-spacing {ht} of h"
        )));
    }
    let edge = boundary_level(g);
    if edge > SUPPORT_THRESHOLD {
        return Err(Error::Input(format!(
            "central factor is not compactly supported in its grid (boundary level {edge:.3e})"
        )));
    }
    let nt = h.t_len();
    let ng = g.geometry().shape[0];
    let nout = nt + ng - 1;
    let m = h.lane();
    let npad = nout.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(npad);
    let inv = planner.plan_fft_inverse(npad);
    let mut gk = vec![Complex64::new(0.0, 0.0); npad];
    gk[..ng].copy_from_slice(g.values());
    fwd.process(&mut gk);
    let scale = ht / npad as f64;
    let lanes: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|r| {
            let mut lane = vec![Complex64::new(0.0, 0.0); npad];
            for j in 0..nt {
                lane[j] = h.samples.values()[j * m + r];
            }
            fwd.process(&mut lane);
            for (a, b) in lane.iter_mut().zip(&gk) {
                *a *= b * scale;
            }
            inv.process(&mut lane);
            lane.truncate(nout);
            lane
        })
        .collect();
    let mut values = vec![Complex64::new(0.0, 0.0); nout * m];
    for (r, lane) in lanes.iter().enumerate() {
        for (j, v) in lane.iter().enumerate() {
            values[j * m + r] = *v;
        }
    }
    let mut origin = hg.origin.clone();
    origin[0] += g.geometry().origin[0];
    let mut shape = hg.shape.clone();
    shape[0] = nout;
    let geom = Geometry::new(origin, hg.spacing.clone(), shape)?;
    let samples = SampledFunction::new(geom, values, format!("{} *_Z {}", g.label(), h.samples.label()))?;
    GroupFunction::new(h.algebra.clone(), samples)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorRow {
    pub lambda: f64,
    pub hs_f: f64,
    pub g_hat_sq_hs_h: f64,
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralReport {
    pub rows: Vec<FactorRow>,
    pub max_relative: f64,
    /// `∫ ‖π_λ(f)‖²_HS e^{2ψ(|λ|)} |λ|ⁿ dλ` over the band.
    pub weighted_mass: f64,
    /// `C = sup |ĝ(λ)|² e^{2ψ(|λ|)}` over the quadrature nodes.
    pub constant: f64,
    pub h_l2_squared: f64,
    /// `∫ ‖π_λ(h)‖²_HS |λ|ⁿ dλ` over the band.
    pub h_plancherel: f64,
    pub bound_holds: bool,
}

/// Factorisation `‖π_λ(f)‖²_HS = |ĝ(λ)|²‖π_λ(h)‖²_HS` on `lambdas`, and the
/// weighted-mass chain `∫‖π(f)‖² e^{2ψ} ≤ C ∫‖π(h)‖² ≤ C‖h‖²` on the band.
pub fn central_report(
    g: &SampledFunction,
    h: &GroupFunction,
    f: &GroupFunction,
    p: &DecayProfile,
    lambdas: &[f64],
    lambda_max: f64,
    panels: usize,
) -> Result<CentralReport> {
    let rows = lambdas
        .par_iter()
        .map(|&lambda| {
            let hf = schrodinger_kernel(f, lambda)?.hs_norm_squared();
            let hh = schrodinger_kernel(h, lambda)?.hs_norm_squared();
            let gh = transform_at(g, lambda).norm_sqr();
            Ok(FactorRow {
                lambda,
                hs_f: hf,
                g_hat_sq_hs_h: gh * hh,
                relative: relative(hf, gh * hh),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let nodes = lambda_nodes(lambda_max, panels)?;
    let rows_f = weighted_rows(f, &nodes)?;
    let rows_h = weighted_rows(h, &nodes)?;
    let weighted_mass = rows_f
        .iter()
        .map(|r| r.hs_squared * r.density * r.weight * (2.0 * p.value(r.lambda.abs())).exp())
        .sum();
    let constant = nodes
        .iter()
        .map(|&(l, _)| transform_at(g, l).norm_sqr() * (2.0 * p.value(l.abs())).exp())
        .fold(0.0, f64::max);
    let h_plancherel = integrate(&rows_h);
    let h_l2_squared = h.l2_norm().powi(2);
    let bound_holds = weighted_mass <= constant * h_plancherel * (1.0 + 1e-10)
        && h_plancherel <= h_l2_squared * (1.0 + 1e-3);
    Ok(CentralReport {
        max_relative: rows.iter().map(|r| r.relative).fold(0.0, f64::max),
        rows,
        weighted_mass,
        constant,
        h_l2_squared,
        h_plancherel,
        bound_holds,
    })
}

/// `t ∈ [−1, 1)` with 32 samples, each `x_i, y_i ∈ [−4, 4)` with 32 samples.
pub fn reference_geometry(n: usize) -> Result<Geometry> {
    let d = 2 * n + 1;
    let mut origin = vec![-4.0; d];
    let mut spacing = vec![0.25; d];
    origin[0] = -1.0;
    spacing[0] = 1.0 / 16.0;
    Geometry::new(origin, spacing, vec![32; d])
}

/// `t e^{−πt²/σ²} e^{−π(‖x‖² + ‖y‖²)}`.
pub fn odd_gaussian(n: usize, geom: Geometry, sigma: f64) -> Result<GroupFunction> {
    GroupFunction::from_fn(n, geom, "odd gaussian", |z| {
        let r2: f64 = z[1..].iter().map(|v| v * v).sum();
        z[0] * (-std::f64::consts::PI * (z[0] * z[0] / (sigma * sigma) + r2)).exp()
    })
}

/// `e^{−1/(1−(t/r)²)} e^{−π(‖x‖² + ‖y‖²)}` with `r = 0.4`, on `t ∈ [−1/2, 1/2)`
/// with 256 samples and `x_i, y_i ∈ [−4, 4)` with 32 samples.
pub fn reference_bump(n: usize) -> Result<GroupFunction> {
    let d = 2 * n + 1;
    let mut origin = vec![-4.0; d];
    let mut spacing = vec![0.25; d];
    let mut shape = vec![32; d];
    origin[0] = -0.5;
    spacing[0] = 1.0 / 256.0;
    shape[0] = 256;
    let geom = Geometry::new(origin, spacing, shape)?;
    GroupFunction::from_fn(n, geom, "bump", |z| {
        let s = z[0] / 0.4;
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let r2: f64 = z[1..].iter().map(|v| v * v).sum();
        (-1.0 / (1.0 - s * s) - std::f64::consts::PI * r2).exp()
    })
}
