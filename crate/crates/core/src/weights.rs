//! Decay profiles ψ and the criterion integral `I = ∫₁^∞ ψ(t)/t² dt`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive, ABS_TOL, REL_TOL};

/// Upper end of the substituted variable `u = log t` covered by quadrature;
/// the remainder is added in closed form.
const TAIL_START: f64 = 40.0;

/// Decades at which partial integrals are tabulated.
pub const DECADES: [f64; 8] = [1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8];

/// Slope threshold (per decade of `T`) separating divergent tables from inconclusive ones.
pub const SLOPE_THRESHOLD: f64 = 0.05;

/// Piecewise-linear profile through `(t, value)` samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

impl Table {
    pub fn new(t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if t.len() != values.len() || t.len() < 2 {
            return Err(Error::Input("profile table needs at least two (t, value) rows".into()));
        }
        if t.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::Input("profile table has non-finite entries".into()));
        }
        if t[0] < 0.0 || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Input("profile table abscissae must be nonnegative and increasing".into()));
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(Error::Input("profile table has negative values".into()));
        }
        Ok(Self { t, values })
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.values[0];
        }
        let seg = match self.t.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return self.values[i],
            Err(i) => (i - 1).min(n - 2),
        };
        let (t0, t1) = (self.t[seg], self.t[seg + 1]);
        let (v0, v1) = (self.values[seg], self.values[seg + 1]);
        (v0 + (v1 - v0) * (t - t0) / (t1 - t0)).max(0.0)
    }

    fn nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Shape {
    Zero,
    /// `t^α`; `α = 0` is a constant, `α = 1` is linear.
    Power { alpha: f64 },
    /// `t / log(e+t)^β`.
    LogQuotient { beta: f64 },
    /// `t (1+t)^{-γ}`.
    InversePower { gamma: f64 },
    Table(Table),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    Increasing,
    /// `ψ(t) = t·θ(t)` with θ nonincreasing.
    ProductForm,
    None,
}

/// `ψ(t) = scale · shape(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub scale: f64,
    pub shape: Shape,
}

impl DecayProfile {
    pub fn zero() -> Self {
        Self {
            scale: 1.0,
            shape: Shape::Zero,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            scale: c,
            shape: Shape::Power { alpha: 0.0 },
        }
    }

    pub fn power(alpha: f64) -> Self {
        Self {
            scale: 1.0,
            shape: Shape::Power { alpha },
        }
    }

    pub fn linear(a: f64) -> Self {
        Self {
            scale: a,
            shape: Shape::Power { alpha: 1.0 },
        }
    }

    pub fn log_quotient(beta: f64) -> Self {
        Self {
            scale: 1.0,
            shape: Shape::LogQuotient { beta },
        }
    }

    pub fn inverse_power(gamma: f64) -> Self {
        Self {
            scale: 1.0,
            shape: Shape::InversePower { gamma },
        }
    }

    pub fn tabulated(t: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Self {
            scale: 1.0,
            shape: Shape::Table(Table::new(t, values)?),
        })
    }

    pub fn scaled(mut self, c: f64) -> Self {
        self.scale *= c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale >= 0.0) {
            return Err(Error::Input(format!("profile multiplier must be nonnegative, got {}", self.scale)));
        }
        let bad = |name: &str, v: f64| Error::Input(format!("profile parameter {name} must be finite and nonnegative, got {v}"));
        match &self.shape {
            Shape::Power { alpha } if !(alpha.is_finite() && *alpha >= 0.0) => Err(bad("alpha", *alpha)),
            Shape::LogQuotient { beta } if !(beta.is_finite() && *beta >= 0.0) => Err(bad("beta", *beta)),
            Shape::InversePower { gamma } if !(gamma.is_finite() && *gamma >= 0.0) => Err(bad("gamma", *gamma)),
            _ => Ok(()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0.0 || matches!(self.shape, Shape::Zero)
    }

    pub fn monotonicity(&self) -> Monotonicity {
        match &self.shape {
            Shape::Power { .. } => Monotonicity::Increasing,
            Shape::Zero | Shape::LogQuotient { .. } | Shape::InversePower { .. } => Monotonicity::ProductForm,
            Shape::Table(t) if t.nondecreasing() => Monotonicity::Increasing,
            Shape::Table(_) => Monotonicity::None,
        }
    }

    /// Catalog profiles are all of the form `t·θ(t)` with θ nonincreasing on `[1, ∞)`.
    pub fn is_product_form(&self) -> bool {
        !matches!(self.shape, Shape::Table(_))
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.shape, Shape::Table(_))
    }

    /// ψ(t) for `t ≥ 0`, without argument checks.
    pub fn value(&self, t: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        let s = match &self.shape {
            Shape::Zero => 0.0,
            Shape::Power { alpha } => {
                if *alpha == 0.0 {
                    1.0
                } else {
                    t.powf(*alpha)
                }
            }
            Shape::LogQuotient { beta } => t / (std::f64::consts::E + t).ln().powf(*beta),
            Shape::InversePower { gamma } => t * (1.0 + t).powf(-gamma),
            Shape::Table(tab) => tab.eval(t),
        };
        self.scale * s
    }

    /// θ(t) = ψ(t)/t for `t > 0`.
    pub fn theta(&self, t: f64) -> f64 {
        self.value(t) / t
    }

    /// `ψ(e^u) e^{-u}`, the criterion integrand after `t = e^u`.
    fn log_integrand(&self, u: f64) -> f64 {
        if self.scale == 0.0 {
            return 0.0;
        }
        let s = match &self.shape {
            Shape::Zero => 0.0,
            Shape::Power { alpha } => ((alpha - 1.0) * u).exp(),
            Shape::LogQuotient { beta } => {
                let l = u + (1.0 + (1.0 - u).exp()).ln();
                l.powf(-beta)
            }
            Shape::InversePower { gamma } => {
                // (1 + e^u)^{-γ} = e^{-γu} (1 + e^{-u})^{-γ}
                (-gamma * u).exp() * (1.0 + (-u).exp()).powf(-gamma)
            }
            Shape::Table(tab) => return self.scale * tab.eval(u.exp()) * (-u).exp(),
        };
        self.scale * s
    }

    /// Exponents `(p, q)` of the asymptotic form `ψ(t) ~ C t^p (log t)^{-q}`.
    fn tail_exponents(&self) -> Option<(f64, f64)> {
        if self.is_zero() {
            return None;
        }
        match &self.shape {
            Shape::Zero => None,
            Shape::Power { alpha } => Some((*alpha, 0.0)),
            Shape::LogQuotient { beta } => Some((1.0, *beta)),
            Shape::InversePower { gamma } => Some((1.0 - gamma, 0.0)),
            Shape::Table(_) => None,
        }
    }

    /// `∫_U^∞ ψ(e^u) e^{-u} du` in closed form for convergent catalog profiles.
    fn tail_from(&self, u0: f64) -> f64 {
        let s = self.scale;
        match &self.shape {
            Shape::Zero => 0.0,
            Shape::Power { alpha } => s * ((alpha - 1.0) * u0).exp() / (1.0 - alpha),
            // log(e + e^u) = u to within e^{1-u}
            Shape::LogQuotient { beta } => s * u0.powf(1.0 - beta) / (beta - 1.0),
            Shape::InversePower { gamma } => s * (-gamma * u0).exp() / gamma,
            Shape::Table(_) => 0.0,
        }
    }
}

impl fmt::Display for DecayProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match &self.shape {
            Shape::Zero => return f.write_str("0"),
            Shape::Power { alpha } if *alpha == 0.0 => return write!(f, "{}", self.scale),
            Shape::Power { alpha } if *alpha == 1.0 => "t".to_string(),
            Shape::Power { alpha } => format!("t^{alpha}"),
            Shape::LogQuotient { beta } if *beta == 1.0 => "t/log(e+t)".to_string(),
            Shape::LogQuotient { beta } => format!("t/log(e+t)^{beta}"),
            Shape::InversePower { gamma } => format!("t*invpow({gamma})"),
            Shape::Table(t) => format!("table[{} rows]", t.t.len()),
        };
        if self.scale == 1.0 {
            f.write_str(&body)
        } else {
            write!(f, "{}*{}", self.scale, body)
        }
    }
}

fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Input(format!("expected a number, found '{s}'")))
}

impl FromStr for DecayProfile {
    type Err = Error;

    /// Grammar: `0 | zero | <c> | t | t^<α> | t/log(e+t) | t/log(e+t)^<β>
    /// | t*invlog(<β>) | t*invpow(<γ>)`, each optionally prefixed by `<c>*`.
    /// Tables are loaded with `table:<path>` through [`crate::io`].
    fn from_str(spec: &str) -> Result<Self> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Input("empty profile".into()));
        }
        if s == "0" || s.eq_ignore_ascii_case("zero") {
            return Ok(Self::zero());
        }
        if let Ok(c) = s.parse::<f64>() {
            let p = Self::constant(c);
            p.validate()?;
            return Ok(p);
        }
        if let Some((head, rest)) = s.split_once('*') {
            if let Ok(c) = head.parse::<f64>() {
                let p = rest.parse::<Self>()?.scaled(c);
                p.validate()?;
                return Ok(p);
            }
        }
        let p = if s == "t" {
            Self::linear(1.0)
        } else if let Some(a) = s.strip_prefix("t^") {
            Self::power(parse_num(a)?)
        } else if let Some(rest) = s
            .strip_prefix("t/log(e+t)")
            .or_else(|| s.strip_prefix("t/(log(e+t))"))
        {
            if rest.is_empty() {
                Self::log_quotient(1.0)
            } else if let Some(b) = rest.strip_prefix('^') {
                Self::log_quotient(parse_num(b)?)
            } else {
                return Err(Error::Input(format!("unrecognised profile '{spec}'")));
            }
        } else if let Some(b) = s.strip_prefix("t*invlog(").and_then(|r| r.strip_suffix(')')) {
            Self::log_quotient(parse_num(b)?)
        } else if let Some(g) = s.strip_prefix("t*invpow(").and_then(|r| r.strip_suffix(')')) {
            Self::inverse_power(parse_num(g)?)
        } else {
            return Err(Error::Input(format!("unrecognised profile '{spec}'")));
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Divergent,
    Convergent,
    Inconclusive,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Divergent => "divergent",
            Classification::Convergent => "convergent",
            Classification::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SymbolicTail,
    NumericExtrapolation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub profile: String,
    pub classification: Classification,
    /// `(T, ∫₁^T ψ(t)/t² dt)`.
    pub partial_integrals: Vec<(f64, f64)>,
    pub value: Option<f64>,
    pub method: Method,
    /// Set for radial criteria: dimension and `|S^{d-1}|`.
    pub dimension: Option<usize>,
    pub sphere_area: Option<f64>,
}

fn partial_integrals(p: &DecayProfile) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(DECADES.len());
    let mut acc = 0.0;
    let mut u0 = 0.0;
    for &t in &DECADES {
        let u1 = t.ln();
        acc += adaptive(|u| p.log_integrand(u), u0, u1, ABS_TOL, REL_TOL)?.value;
        out.push((t, acc));
        u0 = u1;
    }
    Ok(out)
}

/// Evaluates and classifies `I = ∫₁^∞ ψ(t)/t² dt`.
pub fn criterion(p: &DecayProfile) -> Result<CriterionReport> {
    p.validate()?;
    let partial = partial_integrals(p)?;
    let profile = p.to_string();
    if p.is_zero() {
        return Ok(CriterionReport {
            profile,
            classification: Classification::Convergent,
            partial_integrals: partial,
            value: Some(0.0),
            method: Method::SymbolicTail,
            dimension: None,
            sphere_area: None,
        });
    }
    if p.is_tabulated() {
        return Ok(extrapolate(profile, partial));
    }
    let (pw, q) = p.tail_exponents().expect("catalog profile");
    let convergent = pw < 1.0 || (pw == 1.0 && q > 1.0);
    let value = if convergent {
        let body = adaptive(|u| p.log_integrand(u), 0.0, TAIL_START, ABS_TOL, REL_TOL)?.value;
        Some(body + p.tail_from(TAIL_START))
    } else {
        None
    };
    Ok(CriterionReport {
        profile,
        classification: if convergent {
            Classification::Convergent
        } else {
            Classification::Divergent
        },
        partial_integrals: partial,
        value,
        method: Method::SymbolicTail,
        dimension: None,
        sphere_area: None,
    })
}

fn extrapolate(profile: String, partial: Vec<(f64, f64)>) -> CriterionReport {
    let n = partial.len();
    let inc: Vec<f64> = (n - 4..n).map(|i| partial[i].1 - partial[i - 1].1).collect();
    let last = partial[n - 1].1;
    let (classification, value) = if inc.iter().all(|d| d.abs() < 1e-12) {
        (Classification::Convergent, Some(last))
    } else {
        let ratios: Vec<f64> = inc.windows(2).filter(|w| w[0] > 0.0).map(|w| w[1] / w[0]).collect();
        let r = if ratios.len() == inc.len() - 1 && ratios.iter().all(|r| *r > 0.0) {
            ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64
        } else {
            f64::NAN
        }
        .exp();
        if r.is_finite() && r <= 0.5 {
            (Classification::Convergent, Some(last + inc[3] * r / (1.0 - r)))
        } else {
            // least-squares slope of I against log10 T over the last four decades
            let xs: Vec<f64> = (n - 4..n).map(|i| partial[i].0.log10()).collect();
            let ys: Vec<f64> = (n - 4..n).map(|i| partial[i].1).collect();
            let mx = xs.iter().sum::<f64>() / 4.0;
            let my = ys.iter().sum::<f64>() / 4.0;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            if sxy / sxx >= SLOPE_THRESHOLD {
                (Classification::Divergent, None)
            } else {
                (Classification::Inconclusive, None)
            }
        }
    };
    CriterionReport {
        profile,
        classification,
        partial_integrals: partial,
        value,
        method: Method::NumericExtrapolation,
        dimension: None,
        sphere_area: None,
    }
}

/// `Γ(d/2)` for a positive integer `d`.
fn gamma_half(d: usize) -> f64 {
    let (mut g, mut x) = if d % 2 == 0 {
        (1.0, 1.0)
    } else {
        (std::f64::consts::PI.sqrt(), 0.5)
    };
    while x + 0.5 < d as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Surface area `2π^{d/2}/Γ(d/2)` of the unit sphere in ℝ^d.
pub fn sphere_area(d: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) / gamma_half(d)
}

/// `∫_{‖ξ‖≥1} θ(‖ξ‖)/‖ξ‖^d dξ = |S^{d-1}| ∫₁^∞ θ(t)/t dt` for `ψ = tθ`.
pub fn radial_criterion_d(p: &DecayProfile, d: usize) -> Result<CriterionReport> {
    if d == 0 {
        return Err(Error::Input("dimension must be positive".into()));
    }
    if !p.is_product_form() {
        return Err(Error::Input(format!("profile '{p}' is not of the product form t·θ(t)")));
    }
    let mut r = criterion(p)?;
    let area = sphere_area(d);
    for (_, v) in r.partial_integrals.iter_mut() {
        *v *= area;
    }
    r.value = r.value.map(|v| v * area);
    r.dimension = Some(d);
    r.sphere_area = Some(area);
    Ok(r)
}

/// ψ(t) with the `t ≥ 0` precondition checked.
pub fn evaluate_profile(p: &DecayProfile, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Input(format!("profile argument must be nonnegative, got {t}")));
    }
    Ok(p.value(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: trapezoid rule on a fine log grid plus tail.
    fn log_trapezoid(p: &DecayProfile, u_max: f64, n: usize) -> f64 {
        let h = u_max / n as f64;
        let f = |u: f64| p.value(u.exp()) * (-u).exp();
        let mut s = 0.5 * (f(0.0) + f(u_max));
        for i in 1..n {
            s += f(i as f64 * h);
        }
        s * h
    }

    #[test]
    fn spot_values() {
        let e = std::f64::consts::E;
        let t = e * (e - 1.0);
        let p: DecayProfile = "t/log(e+t)".parse().unwrap();
        assert!((evaluate_profile(&p, t).unwrap() - t / (e + t).ln()).abs() < 1e-15);
        assert_eq!(evaluate_profile(&DecayProfile::zero(), 7.0).unwrap(), 0.0);
        let tab = DecayProfile::tabulated(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 5.0]).unwrap();
        assert_eq!(evaluate_profile(&tab, 1.0).unwrap(), 2.0);
        assert_eq!(evaluate_profile(&tab, 3.0).unwrap(), 5.0);
        assert!(evaluate_profile(&p, -1.0).is_err());
    }

    #[test]
    fn parser_round_trip() {
        for s in ["0", "3", "t", "t^0.5", "t/log(e+t)", "t/log(e+t)^2", "2*t", "t*invpow(0.5)", "2.5*t^0.25"] {
            let p: DecayProfile = s.parse().unwrap();
            let q: DecayProfile = p.to_string().parse().unwrap();
            assert_eq!(p, q, "{s}");
        }
        assert_eq!("t*invlog(2)".parse::<DecayProfile>().unwrap(), DecayProfile::log_quotient(2.0));
        assert!("sin(t)".parse::<DecayProfile>().is_err());
        assert!("-1*t".parse::<DecayProfile>().is_err());
    }

    #[test]
    fn square_root_profile_integrates_to_two() {
        let r = criterion(&DecayProfile::power(0.5)).unwrap();
        assert_eq!(r.classification, Classification::Convergent);
        assert!((r.value.unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn logarithmic_quotient_diverges() {
        let r = criterion(&"t/log(e+t)".parse().unwrap()).unwrap();
        assert_eq!(r.classification, Classification::Divergent);
        assert!(r.value.is_none());
    }

    #[test]
    fn squared_log_quotient_value() {
        let p = DecayProfile::log_quotient(2.0);
        let r = criterion(&p).unwrap();
        assert_eq!(r.classification, Classification::Convergent);
        // trapezoid on [0, 60] with Richardson, then the 1/u tail beyond
        let a = log_trapezoid(&p, 60.0, 60_000);
        let b = log_trapezoid(&p, 60.0, 120_000);
        let oracle = b + (b - a) / 3.0 + 1.0 / 60.0;
        assert!((r.value.unwrap() - oracle).abs() < 1e-8, "{} vs {oracle}", r.value.unwrap());
    }

    #[test]
    fn constant_profile_value_is_the_constant() {
        let r = criterion(&DecayProfile::constant(5.0)).unwrap();
        assert!((r.value.unwrap() - 5.0).abs() < 1e-10);
    }

    #[test]
    fn radial_reduction() {
        let r = radial_criterion_d(&DecayProfile::log_quotient(1.0), 4).unwrap();
        assert_eq!(r.classification, Classification::Divergent);
        let z = radial_criterion_d(&DecayProfile::zero(), 3).unwrap();
        assert_eq!(z.value, Some(0.0));
        let p = DecayProfile::log_quotient(2.0);
        let one = criterion(&p).unwrap().value.unwrap();
        let three = radial_criterion_d(&p, 3).unwrap().value.unwrap();
        assert!((three - 4.0 * std::f64::consts::PI * one).abs() < 1e-8);
        let tab = DecayProfile::tabulated(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(radial_criterion_d(&tab, 2).is_err());
    }

    #[test]
    fn sphere_areas() {
        use std::f64::consts::PI;
        assert_eq!(sphere_area(1), 2.0);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tabulated_classification() {
        let ts: Vec<f64> = (0..=160).map(|k| 10f64.powf(k as f64 / 20.0)).collect();
        let sq = DecayProfile::tabulated(ts.clone(), ts.iter().map(|t| t.sqrt()).collect()).unwrap();
        let r = criterion(&sq).unwrap();
        assert_eq!(r.classification, Classification::Convergent);
        assert!((r.value.unwrap() - 2.0).abs() < 1e-2);
        let lin = DecayProfile::tabulated(ts.clone(), ts.clone()).unwrap();
        assert_eq!(criterion(&lin).unwrap().classification, Classification::Divergent);
        let lq = DecayProfile::tabulated(ts.clone(), ts.iter().map(|t| t / (std::f64::consts::E + t).ln().powi(2)).collect()).unwrap();
        assert_eq!(criterion(&lq).unwrap().classification, Classification::Inconclusive);
    }

    proptest! {
        #[test]
        fn classification_is_scale_invariant(c in 0.01f64..100.0, which in 0usize..5, par in 0.05f64..3.0) {
            let p = match which {
                0 => DecayProfile::power(par.min(0.99)),
                1 => DecayProfile::log_quotient(par),
                2 => DecayProfile::inverse_power(par),
                3 => DecayProfile::constant(par),
                _ => DecayProfile::linear(par),
            };
            let a = criterion(&p).unwrap().classification;
            let b = criterion(&p.clone().scaled(c)).unwrap().classification;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn partial_integrals_nondecreasing(which in 0usize..4, par in 0.05f64..3.0) {
            let p = match which {
                0 => DecayProfile::power(par),
                1 => DecayProfile::log_quotient(par),
                2 => DecayProfile::inverse_power(par),
                _ => DecayProfile::constant(par),
            };
            let r = criterion(&p).unwrap();
            prop_assert!(r.partial_integrals.windows(2).all(|w| w[1].1 >= w[0].1));
        }

        #[test]
        fn radial_agrees_with_one_dimensional(d in 1usize..=8, which in 0usize..3, par in 0.05f64..3.0) {
            let p = match which {
                0 => DecayProfile::power(par.min(1.5)),
                1 => DecayProfile::log_quotient(par),
                _ => DecayProfile::inverse_power(par),
            };
            prop_assert_eq!(
                criterion(&p).unwrap().classification,
                radial_criterion_d(&p, d).unwrap().classification
            );
        }

        #[test]
        fn directional_weight_is_dominated(x in -50.0f64..50.0, y in -50.0f64..50.0, ang in 0.0f64..6.3, which in 0usize..3) {
            let p = match which {
                0 => DecayProfile::power(0.5),
                1 => DecayProfile::log_quotient(1.0),
                _ => DecayProfile::linear(2.0),
            };
            let eta = (ang.cos(), ang.sin());
            let dot = (x * eta.0 + y * eta.1).abs();
            let norm = x.hypot(y);
            prop_assert!(p.value(dot) <= p.value(norm) * (1.0 + 1e-15));
        }
    }
}
