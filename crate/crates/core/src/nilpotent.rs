//! Nilpotent Lie algebras given by structure constants in a Jordan-Hölder
//! basis `X₁, …, X_d` (`X₁` central, `[X_i, X_j] ∈ span{X_k : k < min(i, j)}`).
//!
//! Indices are 0-based in the API except where noted: jump sets, `P`/`Q`
//! splits and bracket triples are reported 1-based, as they are written.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative singular-value threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-10;

/// Tolerance on Jacobi and antisymmetry residuals.
pub const IDENTITY_TOL: f64 = 1e-12;

pub const DEFAULT_SAMPLES: usize = 64;
pub const DEFAULT_SEED: u64 = 0x1A6_4A3E;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Antisymmetry,
    Jacobi,
    Flag,
    Centrality,
    NotNilpotent,
}

/// A failed structural identity, indices 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: (usize, usize, usize),
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j, k) = self.indices;
        match self.kind {
            ViolationKind::Antisymmetry => write!(f, "antisymmetry c[{i}][{j}][{k}] + c[{j}][{i}][{k}] = {:e}", self.residual),
            ViolationKind::Jacobi => write!(f, "Jacobi identity on (X{i}, X{j}, X{k}) has residual {:e}", self.residual),
            ViolationKind::Flag => write!(f, "flag property: c[{i}][{j}][{k}] = {:e} but {k} >= min({i}, {j})", self.residual),
            ViolationKind::Centrality => write!(f, "X1 not central: c[{i}][1][{k}] = {:e}", self.residual),
            ViolationKind::NotNilpotent => write!(f, "lower central series stalls at dimension {i}"),
        }
    }
}

/// Structure constants `[X_i, X_j] = Σ_k c[i][j][k] X_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraSpec {
    dim: usize,
    labels: Vec<String>,
    c: Vec<f64>,
}

impl LieAlgebraSpec {
    /// Builds an algebra from 1-based triples `(i, j, k, value)` with `i < j`;
    /// the `(j, i, k)` entries are filled in by antisymmetry.
    pub fn new(dim: usize, labels: Vec<String>, brackets: &[(usize, usize, usize, f64)]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("algebra dimension must be positive".into()));
        }
        let labels = if labels.is_empty() {
            (1..=dim).map(|i| format!("X{i}")).collect()
        } else {
            labels
        };
        if labels.len() != dim {
            return Err(Error::Input(format!("{} labels for an algebra of dimension {dim}", labels.len())));
        }
        let mut c = vec![0.0; dim * dim * dim];
        for &(i, j, k, v) in brackets {
            if !(1..=dim).contains(&i) || !(1..=dim).contains(&j) || !(1..=dim).contains(&k) {
                return Err(Error::Input(format!("bracket index ({i}, {j}, {k}) outside 1..={dim}")));
            }
            if i >= j {
                return Err(Error::Input(format!("bracket triple ({i}, {j}, {k}) must have i < j")));
            }
            if !v.is_finite() {
                return Err(Error::Input(format!("non-finite structure constant at ({i}, {j}, {k})")));
            }
            let (i, j, k) = (i - 1, j - 1, k - 1);
            c[(i * dim + j) * dim + k] += v;
            c[(j * dim + i) * dim + k] -= v;
        }
        Ok(Self { dim, labels, c })
    }

    /// Uses a dense `d×d×d` array as given, without completion.
    pub fn from_dense(dim: usize, labels: Vec<String>, c: Vec<f64>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::Input("dense structure constants have the wrong length".into()));
        }
        let labels = if labels.is_empty() {
            (1..=dim).map(|i| format!("X{i}")).collect()
        } else {
            labels
        };
        Ok(Self { dim, labels, c })
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(dim, vec![], &[]).expect("valid")
    }

    /// `H_n` with basis `(Z, X₁…X_n, Y₁…Y_n)` and `[X_i, Y_i] = Z`.
    pub fn heisenberg(n: usize) -> Self {
        let mut labels = vec!["Z".to_string()];
        if n == 1 {
            labels.push("X".into());
            labels.push("Y".into());
        } else {
            labels.extend((1..=n).map(|i| format!("X{i}")));
            labels.extend((1..=n).map(|i| format!("Y{i}")));
        }
        let br: Vec<_> = (0..n).map(|i| (2 + i, 2 + n + i, 1, 1.0)).collect();
        Self::new(2 * n + 1, labels, &br).expect("valid")
    }

    /// Four-dimensional filiform algebra `[X₄, X₃] = X₂`, `[X₄, X₂] = X₁`.
    pub fn filiform4() -> Self {
        Self::new(4, vec![], &[(3, 4, 2, -1.0), (2, 4, 1, -1.0)]).expect("valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `c[i][j][k]`, 0-based.
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero constants as 1-based triples with `i < j`.
    pub fn brackets(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    let v = self.c(i, j, k);
                    if v != 0.0 {
                        out.push((i + 1, j + 1, k + 1, v));
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut z = vec![0.0; d];
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                let base = (i * d + j) * d;
                for k in 0..d {
                    z[k] += w * self.c[base + k];
                }
            }
        }
        z
    }

    fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Dimensions of the lower central series `𝔤 ⊇ [𝔤,𝔤] ⊇ …` down to 0, or
    /// `None` if it stalls before reaching 0.
    pub fn lower_central_series(&self) -> (Vec<usize>, bool) {
        let d = self.dim;
        let mut basis = DMatrix::<f64>::identity(d, d);
        let mut dims = vec![d];
        for _ in 0..=d {
            let mut cols = Vec::new();
            for i in 0..d {
                let mut e = vec![0.0; d];
                e[i] = 1.0;
                for c in 0..basis.ncols() {
                    let v: Vec<f64> = basis.column(c).iter().copied().collect();
                    cols.push(self.bracket(&e, &v));
                }
            }
            let next = orthonormal_span(d, &cols);
            let r = next.ncols();
            dims.push(r);
            if r == 0 {
                return (dims, true);
            }
            if r == basis.ncols() {
                return (dims, false);
            }
            basis = next;
        }
        (dims, false)
    }

    /// Nilpotency step (1 for abelian), if nilpotent.
    pub fn step(&self) -> Option<usize> {
        let (dims, nilpotent) = self.lower_central_series();
        if !nilpotent {
            return None;
        }
        Some(dims.iter().filter(|&&n| n > 0).count().max(1))
    }
}

/// Orthonormal basis (as columns) of the span of `vectors` in ℝ^d.
fn orthonormal_span(d: usize, vectors: &[Vec<f64>]) -> DMatrix<f64> {
    if vectors.is_empty() {
        return DMatrix::zeros(d, 0);
    }
    let m = DMatrix::from_fn(d, vectors.len(), |r, c| vectors[c][r]);
    let svd = m.svd(true, false);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return DMatrix::zeros(d, 0);
    }
    let u = svd.u.expect("requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > RANK_TOL * smax)
        .collect();
    DMatrix::from_fn(d, keep.len(), |r, c| u[(r, keep[c])])
}

/// Numerical rank with the library's singular-value threshold.
pub fn rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().singular_values();
    let smax = s.max();
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > RANK_TOL * smax).count()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub dim: usize,
    pub step: usize,
    /// Dimensions of the lower central series.
    pub central_series: Vec<usize>,
}

/// Checks antisymmetry, Jacobi, the flag property, centrality of `X₁` and nilpotency.
pub fn validate_algebra(spec: &LieAlgebraSpec) -> Result<ValidationReport> {
    let d = spec.dim;
    let scale = spec.max_abs().max(1.0);
    let mut v = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let a = spec.c(i, j, k) + spec.c(j, i, k);
                if a.abs() > IDENTITY_TOL * scale {
                    if i <= j {
                        v.push(Violation {
                            kind: ViolationKind::Antisymmetry,
                            indices: (i + 1, j + 1, k + 1),
                            residual: a,
                        });
                    }
                }
            }
        }
    }
    let e = |i: usize| {
        let mut x = vec![0.0; d];
        x[i] = 1.0;
        x
    };
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let (xi, xj, xk) = (e(i), e(j), e(k));
                let a = spec.bracket(&spec.bracket(&xi, &xj), &xk);
                let b = spec.bracket(&spec.bracket(&xj, &xk), &xi);
                let c = spec.bracket(&spec.bracket(&xk, &xi), &xj);
                let r = (0..d).map(|m| (a[m] + b[m] + c[m]).abs()).fold(0.0, f64::max);
                if r > IDENTITY_TOL * scale * scale {
                    v.push(Violation {
                        kind: ViolationKind::Jacobi,
                        indices: (i + 1, j + 1, k + 1),
                        residual: r,
                    });
                }
            }
        }
    }
    for i in 0..d {
        for j in 0..d {
            for k in i.min(j)..d {
                let c = spec.c(i, j, k);
                if c != 0.0 && i < j {
                    v.push(Violation {
                        kind: ViolationKind::Flag,
                        indices: (i + 1, j + 1, k + 1),
                        residual: c,
                    });
                }
            }
        }
    }
    for i in 0..d {
        for k in 0..d {
            let c = spec.c(i, 0, k);
            if c != 0.0 {
                v.push(Violation {
                    kind: ViolationKind::Centrality,
                    indices: (i + 1, 1, k + 1),
                    residual: c,
                });
            }
        }
    }
    let (dims, nilpotent) = spec.lower_central_series();
    if !nilpotent {
        v.push(Violation {
            kind: ViolationKind::NotNilpotent,
            indices: (*dims.last().unwrap_or(&d), 0, 0),
            residual: 0.0,
        });
    }
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }
    let step = dims.iter().filter(|&&n| n > 0).count().max(1);
    Ok(ValidationReport {
        dim: d,
        step,
        central_series: dims,
    })
}

/// Group product in exponential coordinates via the BCH series through
/// fourth-order brackets.
pub fn bch_multiply(spec: &LieAlgebraSpec, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let d = spec.dim;
    if x.len() != d || y.len() != d {
        return Err(Error::Input(format!("coordinates must have length {d}")));
    }
    match spec.step() {
        None => return Err(Error::Input("algebra is not nilpotent".into())),
        Some(s) if s > 4 => return Err(Error::UnsupportedStep(s)),
        Some(_) => {}
    }
    Ok(bch_series(spec, x, y))
}

fn bch_series(spec: &LieAlgebraSpec, x: &[f64], y: &[f64]) -> Vec<f64> {
    let xy = spec.bracket(x, y);
    let xxy = spec.bracket(x, &xy);
    let yxy = spec.bracket(y, &xy);
    let yxxy = spec.bracket(y, &xxy);
    let xyxy = spec.bracket(x, &yxy);
    (0..spec.dim)
        .map(|k| {
            x[k] + y[k] + 0.5 * xy[k] + (xxy[k] - yxy[k]) / 12.0 - (yxxy[k] + xyxy[k]) / 48.0
        })
        .collect()
}

/// Orbit data for a functional ν.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitData {
    pub nu: Vec<f64>,
    /// `B[i][j] = ν([X_i, X_j])`, row-major.
    pub b: Vec<Vec<f64>>,
    pub rank: usize,
    /// Orthonormal basis of the radical `r_ν`.
    pub radical_basis: Vec<Vec<f64>>,
    /// 1-based jump indices.
    pub jump_set: Vec<usize>,
}

fn form_matrix(spec: &LieAlgebraSpec, nu: &[f64]) -> DMatrix<f64> {
    let d = spec.dim;
    DMatrix::from_fn(d, d, |i, j| (0..d).map(|k| spec.c(i, j, k) * nu[k]).sum())
}

fn radical(b: &DMatrix<f64>) -> (usize, Vec<Vec<f64>>) {
    let d = b.nrows();
    let svd = b.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    let smax = svd.singular_values.max();
    let mut basis = Vec::new();
    let mut r = 0;
    for i in 0..d {
        if smax > 0.0 && svd.singular_values[i] > RANK_TOL * smax {
            r += 1;
        } else {
            basis.push(vt.row(i).iter().copied().collect());
        }
    }
    (r, basis)
}

/// Skew form `B_ν`, its rank and radical, and the jump set.
pub fn coadjoint_form(spec: &LieAlgebraSpec, nu: &[f64]) -> Result<OrbitData> {
    let d = spec.dim;
    if nu.len() != d {
        return Err(Error::Input(format!("functional must have length {d}")));
    }
    if nu.iter().any(|v| !v.is_finite()) {
        return Err(Error::Input("functional has non-finite entries".into()));
    }
    let b = form_matrix(spec, nu);
    let (rank, radical_basis) = radical(&b);
    let jump_set = jumps_from_radical(d, &radical_basis);
    Ok(OrbitData {
        nu: nu.to_vec(),
        b: (0..d).map(|i| b.row(i).iter().copied().collect()).collect(),
        rank,
        radical_basis,
        jump_set,
    })
}

/// Incremental Gram-Schmidt: `j` jumps when `X_j ∉ r_ν + 𝔤_{j-1}`.
fn jumps_from_radical(d: usize, radical: &[Vec<f64>]) -> Vec<usize> {
    let mut basis: Vec<DVector<f64>> = radical.iter().map(|v| DVector::from_column_slice(v)).collect();
    let mut jumps = Vec::new();
    for j in 0..d {
        let mut v = DVector::zeros(d);
        v[j] = 1.0;
        for _ in 0..2 {
            for q in &basis {
                let p = q.dot(&v);
                v.axpy(-p, q, 1.0);
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            basis.push(v / n);
            jumps.push(j + 1);
        }
    }
    jumps
}

/// Jump set `e(ν)`, 1-based.
pub fn jump_indices(spec: &LieAlgebraSpec, nu: &[f64]) -> Result<Vec<usize>> {
    Ok(coadjoint_form(spec, nu)?.jump_set)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericStratum {
    /// 1-based generic jump set.
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    /// Fraction of sampled functionals whose jump set equals `P`.
    pub fraction: f64,
    pub samples: usize,
    pub seed: u64,
    pub orbit_dim: usize,
}

/// Samples standard-normal functionals and returns the jump set of maximal
/// orbit dimension.
pub fn generic_stratum(spec: &LieAlgebraSpec, samples: usize, seed: u64) -> Result<GenericStratum> {
    if samples == 0 {
        return Err(Error::Input("sample count must be positive".into()));
    }
    let d = spec.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let nu: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        sets.push(jump_indices(spec, &nu)?);
    }
    let max = sets.iter().map(|s| s.len()).max().unwrap_or(0);
    if max == 0 && spec.max_abs() > 0.0 {
        return Err(Error::Numeric {
            message: "every sampled functional has a trivial orbit on a nonabelian algebra".into(),
            diagnostics: vec![format!("seed {seed:#x}, {samples} samples; reseed")],
        });
    }
    let mut candidates: Vec<&Vec<usize>> = sets.iter().filter(|s| s.len() == max).collect();
    candidates.sort();
    candidates.dedup();
    let p = candidates
        .iter()
        .max_by(|a, b| {
            let ca = sets.iter().filter(|s| s == *a).count();
            let cb = sets.iter().filter(|s| s == *b).count();
            ca.cmp(&cb).then_with(|| b.cmp(a))
        })
        .map(|s| (*s).clone())
        .unwrap_or_default();
    let hits = sets.iter().filter(|s| **s == p).count();
    let q = (1..=d).filter(|i| !p.contains(i)).collect();
    Ok(GenericStratum {
        p,
        q,
        fraction: hits as f64 / samples as f64,
        samples,
        seed,
        orbit_dim: max,
    })
}

/// `B_ν` restricted to the 1-based index set `P`.
pub fn restricted_form(spec: &LieAlgebraSpec, nu: &[f64], p: &[usize]) -> Result<DMatrix<f64>> {
    let d = spec.dim;
    if nu.len() != d {
        return Err(Error::Input(format!("functional must have length {d}")));
    }
    if p.iter().any(|&i| i == 0 || i > d) {
        return Err(Error::Input(format!("index set {p:?} outside 1..={d}")));
    }
    let b = form_matrix(spec, nu);
    Ok(DMatrix::from_fn(p.len(), p.len(), |r, c| b[(p[r] - 1, p[c] - 1)]))
}

/// `|Pf(A)|` of a real skew matrix by Householder reduction to tridiagonal form.
pub fn skew_pfaffian_abs(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut m = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: DVector<f64> = m.view((k + 1, k), (n - k - 1, 1)).column(0).into_owned();
        let alpha = x.norm();
        if alpha == 0.0 {
            continue;
        }
        let mut v = x.clone();
        v[0] += alpha.copysign(if x[0] == 0.0 { 1.0 } else { x[0] });
        let vn = v.norm_squared();
        if vn == 0.0 {
            continue;
        }
        let mut h = DMatrix::<f64>::identity(n, n);
        for r in 0..v.len() {
            for c in 0..v.len() {
                h[(k + 1 + r, k + 1 + c)] -= 2.0 * v[r] * v[c] / vn;
            }
        }
        m = &h * &m * h.transpose();
    }
    (0..n / 2).map(|i| m[(2 * i, 2 * i + 1)].abs()).product()
}

/// `|Pf(ν)| = sqrt(det B_{ν,P})` for ν in the stratum with jump set `P`.
pub fn pfaffian_abs(spec: &LieAlgebraSpec, nu: &[f64], p: &[usize]) -> Result<f64> {
    if p.len() % 2 == 1 {
        return Err(Error::Domain(format!("index set of odd size {} has no Pfaffian", p.len())));
    }
    let bp = restricted_form(spec, nu, p)?;
    if p.is_empty() {
        return Ok(1.0);
    }
    let det = bp.clone().lu().determinant();
    if det < -1e-12 {
        return Err(Error::Domain(format!("det B_P = {det:e} is negative")));
    }
    if rank(&bp) < p.len() {
        return Err(Error::Domain(format!(
            "B restricted to {p:?} is singular; functional is not generic"
        )));
    }
    Ok(skew_pfaffian_abs(&bp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dimension of `r_ν + 𝔤_j` for every `j`, each computed from scratch.
    fn brute_force_jumps(spec: &LieAlgebraSpec, nu: &[f64]) -> Vec<usize> {
        let d = spec.dim();
        let b = form_matrix(spec, nu);
        let (_, rad) = radical(&b);
        let dim_with = |j: usize| {
            let mut cols: Vec<Vec<f64>> = rad.clone();
            for i in 0..j {
                let mut e = vec![0.0; d];
                e[i] = 1.0;
                cols.push(e);
            }
            if cols.is_empty() {
                return 0;
            }
            rank(&DMatrix::from_fn(d, cols.len(), |r, c| cols[c][r]))
        };
        (1..=d).filter(|&j| dim_with(j) > dim_with(j - 1)).collect()
    }

    fn model_algebras() -> Vec<LieAlgebraSpec> {
        vec![
            LieAlgebraSpec::abelian(3),
            LieAlgebraSpec::heisenberg(1),
            LieAlgebraSpec::heisenberg(2),
            LieAlgebraSpec::filiform4(),
        ]
    }

    #[test]
    fn heisenberg_is_valid_step_two() {
        let h = LieAlgebraSpec::heisenberg(1);
        assert_eq!(h.c(1, 2, 0), 1.0);
        let r = validate_algebra(&h).unwrap();
        assert_eq!(r.step, 2);
        assert_eq!(validate_algebra(&LieAlgebraSpec::abelian(3)).unwrap().step, 1);
        assert_eq!(validate_algebra(&LieAlgebraSpec::filiform4()).unwrap().step, 3);
    }

    #[test]
    fn flag_violation_is_named() {
        let bad = LieAlgebraSpec::new(3, vec![], &[(2, 3, 3, 1.0)]).unwrap();
        match validate_algebra(&bad) {
            Err(Error::Validation(v)) => {
                assert!(v.iter().any(|x| x.kind == ViolationKind::Flag && x.indices == (2, 3, 3)));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn antisymmetry_and_jacobi_violations() {
        let mut c = vec![0.0; 27];
        c[(1 * 3 + 2) * 3] = 1.0;
        let bad = LieAlgebraSpec::from_dense(3, vec![], c).unwrap();
        let Err(Error::Validation(v)) = validate_algebra(&bad) else { panic!() };
        assert!(v.iter().any(|x| x.kind == ViolationKind::Antisymmetry));
        // sl(2)-like brackets break nilpotency and the flag
        let sl2 = LieAlgebraSpec::new(3, vec![], &[(1, 2, 2, 2.0), (1, 3, 3, -2.0), (2, 3, 1, 1.0)]).unwrap();
        let Err(Error::Validation(v)) = validate_algebra(&sl2) else { panic!() };
        assert!(v.iter().any(|x| x.kind == ViolationKind::NotNilpotent));
    }

    #[test]
    fn heisenberg_product_by_hand() {
        let h = LieAlgebraSpec::heisenberg(1);
        let a = [0.3, 1.5, -0.7];
        let b = [-1.1, 0.4, 2.0];
        let z = bch_multiply(&h, &a, &b).unwrap();
        let expect = [a[0] + b[0] + 0.5 * (a[1] * b[2] - a[2] * b[1]), a[1] + b[1], a[2] + b[2]];
        for k in 0..3 {
            assert!((z[k] - expect[k]).abs() < 1e-15);
        }
        let ab = LieAlgebraSpec::abelian(3);
        assert_eq!(bch_multiply(&ab, &a, &b).unwrap(), vec![a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    }

    #[test]
    fn coadjoint_examples() {
        let h = LieAlgebraSpec::heisenberg(1);
        let o = coadjoint_form(&h, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(o.b, vec![vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.0, -1.0, 0.0]]);
        assert_eq!(o.rank, 2);
        assert_eq!(o.radical_basis.len(), 1);
        assert!((o.radical_basis[0][0].abs() - 1.0).abs() < 1e-14);
        assert_eq!(o.jump_set, vec![2, 3]);
        let o = coadjoint_form(&h, &[0.0, 2.0, -3.0]).unwrap();
        assert_eq!(o.rank, 0);
        assert_eq!(o.radical_basis.len(), 3);
        let o = coadjoint_form(&LieAlgebraSpec::abelian(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(o.rank, 0);
        assert!(o.jump_set.is_empty());
        let f = LieAlgebraSpec::filiform4();
        assert_eq!(jump_indices(&f, &[0.7, -0.2, 1.3, 0.4]).unwrap(), vec![2, 4]);
    }

    #[test]
    fn generic_strata() {
        let s = generic_stratum(&LieAlgebraSpec::heisenberg(1), DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        assert_eq!((s.p.clone(), s.q.clone()), (vec![2, 3], vec![1]));
        assert_eq!(s.fraction, 1.0);
        let s = generic_stratum(&LieAlgebraSpec::heisenberg(2), DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        assert_eq!(s.p, vec![2, 3, 4, 5]);
        let s = generic_stratum(&LieAlgebraSpec::abelian(3), DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        assert!(s.p.is_empty());
        assert_eq!(s.q, vec![1, 2, 3]);
        let s = generic_stratum(&LieAlgebraSpec::filiform4(), DEFAULT_SAMPLES, DEFAULT_SEED).unwrap();
        assert_eq!((s.p, s.q), (vec![2, 4], vec![1, 3]));
    }

    #[test]
    fn pfaffian_examples() {
        let h1 = LieAlgebraSpec::heisenberg(1);
        assert!((pfaffian_abs(&h1, &[-2.5, 1.0, 4.0], &[2, 3]).unwrap() - 2.5).abs() < 1e-14);
        let h2 = LieAlgebraSpec::heisenberg(2);
        let v = pfaffian_abs(&h2, &[-1.7, 0.3, 0.1, -0.9, 2.0], &[2, 3, 4, 5]).unwrap();
        assert!((v - 1.7 * 1.7).abs() < 1e-13);
        assert!(matches!(pfaffian_abs(&h1, &[0.0, 1.0, 1.0], &[2, 3]), Err(Error::Domain(_))));
        assert!(matches!(pfaffian_abs(&h1, &[1.0, 1.0, 1.0], &[1, 2, 3]), Err(Error::Domain(_))));
    }

    #[test]
    fn pfaffian_of_dense_skew_matrices() {
        // 4×4: Pf = a12 a34 − a13 a24 + a14 a23
        let a = [[0.0, 1.3, -0.4, 2.2], [-1.3, 0.0, 0.7, -1.1], [0.4, -0.7, 0.0, 0.5], [-2.2, 1.1, -0.5, 0.0]];
        let m = DMatrix::from_fn(4, 4, |r, c| a[r][c]);
        let pf = a[0][1] * a[2][3] - a[0][2] * a[1][3] + a[0][3] * a[1][2];
        assert!((skew_pfaffian_abs(&m) - pf.abs()).abs() < 1e-14);
    }

    #[test]
    fn step_five_is_rejected() {
        // filiform of dimension 6: [X6, X_i] = X_{i-1}
        let br: Vec<_> = (2..=5).map(|i| (i, 6, i - 1, -1.0)).collect();
        let f6 = LieAlgebraSpec::new(6, vec![], &br).unwrap();
        assert_eq!(f6.step(), Some(5));
        assert!(matches!(bch_multiply(&f6, &[0.0; 6], &[0.0; 6]), Err(Error::UnsupportedStep(5))));
    }

    /// Strictly upper-triangular `n×n` matrices with basis `E_{ij}` ordered by
    /// height `j − i` descending, so the basis is Jordan-Hölder.
    fn strictly_upper(n: usize) -> (LieAlgebraSpec, Vec<(usize, usize)>) {
        let mut basis = Vec::new();
        for h in (1..n).rev() {
            for i in 0..n - h {
                basis.push((i, i + h));
            }
        }
        let d = basis.len();
        let idx = |p: (usize, usize)| basis.iter().position(|&q| q == p).unwrap();
        let mut br = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let (i, j) = basis[a];
                let (k, l) = basis[b];
                // [E_ij, E_kl] = δ_jk E_il − δ_li E_kj
                if j == k {
                    br.push((a + 1, b + 1, idx((i, l)) + 1, 1.0));
                }
                if l == i {
                    br.push((a + 1, b + 1, idx((k, j)) + 1, -1.0));
                }
            }
        }
        (LieAlgebraSpec::new(d, vec![], &br).unwrap(), basis)
    }

    fn to_matrix(n: usize, basis: &[(usize, usize)], x: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(n, n);
        for (c, &(i, j)) in x.iter().zip(basis) {
            m[(i, j)] = *c;
        }
        m
    }

    fn nil_exp(m: &DMatrix<f64>) -> DMatrix<f64> {
        let n = m.nrows();
        let mut out = DMatrix::identity(n, n);
        let mut p = DMatrix::identity(n, n);
        for k in 1..n {
            p = &p * m / k as f64;
            out += &p;
        }
        out
    }

    fn nil_log(u: &DMatrix<f64>) -> DMatrix<f64> {
        let n = u.nrows();
        let a = u - DMatrix::identity(n, n);
        let mut out = DMatrix::zeros(n, n);
        let mut p = DMatrix::identity(n, n);
        for k in 1..n {
            p = &p * &a;
            let s = if k % 2 == 1 { 1.0 } else { -1.0 };
            out += &p * (s / k as f64);
        }
        out
    }

    #[test]
    fn bch_matches_matrix_logarithm() {
        for n in [4usize, 5] {
            let (spec, basis) = strictly_upper(n);
            assert!(validate_algebra(&spec).is_ok());
            assert_eq!(spec.step(), Some(n - 1));
            let d = spec.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..50 {
                let x: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                let y: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                let z = bch_multiply(&spec, &x, &y).unwrap();
                let zm = nil_log(&(nil_exp(&to_matrix(n, &basis, &x)) * nil_exp(&to_matrix(n, &basis, &y))));
                let err = (to_matrix(n, &basis, &z) - zm).abs().max();
                assert!(err < 1e-12, "n={n} err={err:e}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn jump_sets_match_brute_force(which in 0usize..4, nu in prop::collection::vec(-3.0f64..3.0, 5), zero in 0usize..6) {
            let spec = &model_algebras()[which];
            let d = spec.dim();
            let mut nu: Vec<f64> = nu[..d].to_vec();
            if zero < d {
                nu[zero] = 0.0;
            }
            let o = coadjoint_form(spec, &nu).unwrap();
            prop_assert_eq!(&o.jump_set, &brute_force_jumps(spec, &nu));
            prop_assert_eq!(o.jump_set.len(), o.rank);
            prop_assert_eq!(o.rank % 2, 0);
            prop_assert_eq!(o.rank + o.radical_basis.len(), d);
        }

        #[test]
        fn pfaffian_squared_is_determinant(which in 1usize..4, nu in prop::collection::vec(-3.0f64..3.0, 5), t in 0.1f64..10.0) {
            let spec = &model_algebras()[which];
            let d = spec.dim();
            let nu: Vec<f64> = nu[..d].to_vec();
            prop_assume!(nu[0].abs() > 1e-3);
            let p = jump_indices(spec, &nu).unwrap();
            let pf = pfaffian_abs(spec, &nu, &p).unwrap();
            let det = restricted_form(spec, &nu, &p).unwrap().lu().determinant();
            prop_assert!((pf * pf - det).abs() <= 1e-10 * det.abs());
            let scaled: Vec<f64> = nu.iter().map(|v| v * t).collect();
            let pft = pfaffian_abs(spec, &scaled, &p).unwrap();
            prop_assert!((pft - t.powf(p.len() as f64 / 2.0) * pf).abs() <= 1e-10 * pft);
        }

        #[test]
        fn group_laws(which in 0usize..4, x in prop::collection::vec(-2.0f64..2.0, 5),
                      y in prop::collection::vec(-2.0f64..2.0, 5), z in prop::collection::vec(-2.0f64..2.0, 5)) {
            let spec = &model_algebras()[which];
            let d = spec.dim();
            let (x, y, z) = (&x[..d], &y[..d], &z[..d]);
            let a = bch_multiply(spec, &bch_multiply(spec, x, y).unwrap(), z).unwrap();
            let b = bch_multiply(spec, x, &bch_multiply(spec, y, z).unwrap()).unwrap();
            for k in 0..d {
                prop_assert!((a[k] - b[k]).abs() < 1e-10);
            }
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            prop_assert!(bch_multiply(spec, x, &neg).unwrap().iter().all(|v| v.abs() < 1e-15));
            prop_assert_eq!(bch_multiply(spec, x, &vec![0.0; d]).unwrap(), x.to_vec());
        }
    }
}
