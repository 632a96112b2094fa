//! The `ingham` command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, ErrorKind, Result};
use crate::grid::SampledFunction;
use crate::heisenberg::{
    central_construction, central_report, ingham_nilpotent_check, slice_identity, odd_gaussian,
    plancherel_check, reference_bump, reference_geometry, GroupFunction, GroupVerdict, DEFAULT_LAMBDA_MAX,
    DEFAULT_PANELS,
};
use crate::io::{parse_profile, read_grid, render_report, write_grid};
use crate::nilpotent::{
    coadjoint_form, generic_stratum, pfaffian_abs, validate_algebra, GenericStratum, LieAlgebraSpec,
    ValidationReport, DEFAULT_SEED,
};
use crate::synthesis::{
    gaps_from_profile, ingham_function_with_mode, support_excess, verify_decay, GapSequence, SynthesisGrid,
    SynthesisMode, DEFAULT_TOP_INDEX,
};
use crate::vanish::{halfspace_verdict, HalfSpace, Verdict};
use crate::weights::{criterion, radial_criterion_d};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_CONTRACT: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

pub const OUT_DIR_ENV: &str = "INGHAM_OUT_DIR";

const EXIT_HELP: &str = "\
Exit status:
  0  success
  1  i/o error (unreadable or unwritable file)
  2  usage error (unknown command or flag, malformed value)
  3  input error (malformed grid, profile or algebra; capacity or resolution limits)
  4  contract error (violated precondition, failed verification)
  5  numeric error (quadrature or classification failure)

Relative --out paths are resolved against --out-dir, which defaults to $INGHAM_OUT_DIR.";

#[derive(Debug, Parser)]
#[command(name = "ingham", version, about = "Decay criteria, Ingham synthesis and Heisenberg Plancherel checks", after_help = EXIT_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report file; for synthesize and central-construct, the grid file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Directory for relative output paths.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the integral of ψ(t)/t² over [1, ∞).
    Criterion {
        #[arg(long)]
        profile: String,
        /// Radial criterion in this dimension.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Build an Ingham function supported in [−l, l] and write it as a grid.
    Synthesize {
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 1.0)]
        halfwidth: f64,
        /// Finest dyadic index of the gap sequence.
        #[arg(long, default_value_t = DEFAULT_TOP_INDEX)]
        top: usize,
    },
    /// Check support, spectrum and envelope of a synthesized grid.
    VerifyDecay {
        /// Grid file (alternative to --grid).
        path: Option<PathBuf>,
        #[command(flatten)]
        input: GridInput,
        /// Defaults to the value recorded by synthesize.
        #[arg(long)]
        profile: Option<String>,
        #[arg(long)]
        halfwidth: Option<f64>,
        #[arg(long)]
        top: Option<usize>,
    },
    /// Half-space support, normalisation and log-integral verdict.
    VanishTest {
        #[command(flatten)]
        input: GridInput,
        /// Comma-separated half-space normal; defaults to e₁.
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        s: f64,
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long = "N", default_value_t = 0.0)]
        n: f64,
    },
    /// Validate an algebra and tabulate jump sets and Pfaffians.
    LieAnalyze {
        /// Algebra file or built-in name.
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        rows: usize,
    },
    /// Compare the Plancherel integral with the L² norm on H_n.
    Plancherel {
        #[command(flatten)]
        input: GroupInput,
        #[command(flatten)]
        band: Band,
    },
    /// Compare the slice autocorrelation transform with Hilbert-Schmidt norms.
    LemmaSlice {
        #[command(flatten)]
        input: GroupInput,
        /// Upper end of the λ range starting at 1/2.
        #[arg(long, default_value_t = 4.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 15)]
        points: usize,
    },
    /// Weighted Plancherel mass and verdict on H_n.
    NilpotentCheck {
        #[command(flatten)]
        input: GroupInput,
        #[command(flatten)]
        band: Band,
        #[arg(long)]
        profile: String,
    },
    /// Convolve an Ingham function along the centre with h and check the factorisation.
    CentralConstruct {
        #[command(flatten)]
        input: GroupInput,
        #[command(flatten)]
        band: Band,
        #[arg(long, default_value = "t^0.5")]
        profile: String,
        /// Support halfwidth of the central factor.
        #[arg(long, default_value_t = 0.5)]
        halfwidth: f64,
    },
}

#[derive(Debug, Args)]
pub struct GridInput {
    #[arg(long)]
    pub grid: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroupInput {
    /// Grid file; defaults to a built-in H₁ fixture.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Overrides the algebra recorded in the grid file.
    #[arg(long)]
    pub algebra: Option<String>,
}

#[derive(Debug, Args)]
pub struct Band {
    #[arg(long, default_value_t = DEFAULT_LAMBDA_MAX)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = DEFAULT_PANELS)]
    pub panels: usize,
}

/// A rendered report, an optional grid to write and the exit status.
pub struct Outcome {
    pub report: String,
    pub grid: Option<(PathBuf, SampledFunction, Option<String>)>,
    pub status: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Input => EXIT_INPUT,
        ErrorKind::Contract => EXIT_CONTRACT,
        ErrorKind::Numeric => EXIT_NUMERIC,
        ErrorKind::Io => EXIT_IO,
    }
}

fn resolve(cli: &Cli, path: &Path) -> PathBuf {
    match &cli.out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// Runs the command, writes its outputs and returns the exit status.
pub fn main_with(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(status) => status,
        Err(e) => {
            eprintln!("ingham: {e}");
            if let Error::Numeric { diagnostics, .. } = &e {
                for d in diagnostics {
                    eprintln!("  {d}");
                }
            }
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let outcome = run(cli)?;
    let report_path = match &outcome.grid {
        Some((path, f, algebra)) => {
            write_grid(&resolve(cli, path), f, algebra.as_deref())?;
            None
        }
        None => cli.out.as_ref().map(|p| resolve(cli, p)),
    };
    match report_path {
        Some(path) => fs::write(path, &outcome.report)?,
        None => print!("{}", outcome.report),
    }
    Ok(outcome.status)
}

fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

fn ok(report: String) -> Outcome {
    Outcome {
        report,
        grid: None,
        status: EXIT_OK,
    }
}

fn render<T: Serialize>(cli: &Cli, command: &str, summary: &str, result: &T, table: impl FnOnce() -> String) -> Result<String> {
    match cli.format {
        Format::Json => render_report(command, summary, result),
        Format::Csv => {
            let mut s = table();
            let _ = writeln!(s, "# {summary}");
            Ok(s)
        }
    }
}

/// Runs the command without touching the file system beyond reading inputs.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Criterion { profile, dim } => {
            let p = parse_profile(profile)?;
            let r = match dim {
                Some(d) => radial_criterion_d(&p, *d)?,
                None => criterion(&p)?,
            };
            let summary = match r.value {
                Some(v) => format!("{}: {} (integral {v:.6e})", r.profile, r.classification),
                None => format!("{}: {}", r.profile, r.classification),
            };
            let table = || {
                csv(
                    &["T", "partial_integral"],
                    r.partial_integrals.iter().map(|(t, v)| vec![num(*t), num(*v)]),
                )
            };
            Ok(ok(render(cli, "criterion", &summary, &r, table)?))
        }
        Command::Synthesize { profile, halfwidth, top } => synthesize(cli, profile, *halfwidth, *top),
        Command::VerifyDecay {
            path,
            input,
            profile,
            halfwidth,
            top,
        } => {
            let path = path
                .as_ref()
                .or(input.grid.as_ref())
                .ok_or_else(|| Error::Input("verify-decay needs a grid file".into()))?;
            let (f, _) = read_grid(path)?;
            let recorded = parse_label(f.label());
            let pick = |given: &Option<String>, rec: Option<String>, name: &str| {
                given
                    .clone()
                    .or(rec)
                    .ok_or_else(|| Error::Input(format!("grid does not record {name}; pass --{name}")))
            };
            let profile = pick(profile, recorded.as_ref().map(|r| r.0.clone()), "profile")?;
            let l: f64 = match halfwidth {
                Some(l) => *l,
                None => pick(&None, recorded.as_ref().map(|r| r.1.clone()), "halfwidth")?
                    .parse()
                    .map_err(|_| Error::Input("recorded halfwidth is not a number".into()))?,
            };
            let top: usize = match top {
                Some(k) => *k,
                None => recorded
                    .as_ref()
                    .and_then(|r| r.2.parse().ok())
                    .unwrap_or(DEFAULT_TOP_INDEX),
            };
            let p = parse_profile(&profile)?;
            let g = gaps_from_profile(&p, l, top)?;
            let c = verify_decay(&f, &g, &p)?;
            let mut failed = vec![];
            if !c.support_ok {
                failed.push("support");
            }
            if !c.spectral_ok {
                failed.push("spectrum");
            }
            if !c.envelope_ok {
                failed.push("envelope");
            }
            let summary = if failed.is_empty() {
                format!(
                    "all checks pass: support excess {:.1e}, spectral error {:.1e}, envelope change {:.1e}",
                    c.support_excess, c.spectral_error, c.envelope_change
                )
            } else {
                format!("failed: {}", failed.join(", "))
            };
            let table = || {
                csv(
                    &["check", "value", "pass"],
                    [
                        ("support_excess", c.support_excess, c.support_ok),
                        ("spectral_error", c.spectral_error, c.spectral_ok),
                        ("envelope_change", c.envelope_change, c.envelope_ok),
                        ("envelope_max", c.envelope.max, c.envelope_ok),
                    ]
                    .iter()
                    .map(|(n, v, p)| vec![n.to_string(), num(*v), p.to_string()]),
                )
            };
            let report = render(cli, "verify-decay", &summary, &c, table)?;
            Ok(Outcome {
                report,
                grid: None,
                status: if c.passed { EXIT_OK } else { EXIT_CONTRACT },
            })
        }
        Command::VanishTest {
            input,
            eta,
            s,
            profile,
            q,
            n,
        } => {
            let path = input
                .grid
                .as_ref()
                .ok_or_else(|| Error::Input("vanish-test needs --grid".into()))?;
            let (f, _) = read_grid(path)?;
            let h = match eta {
                Some(text) => HalfSpace::normalized(parse_vector(text)?, *s)?,
                None => {
                    let mut h = HalfSpace::lower_first_axis(f.dims());
                    h.s = *s;
                    h
                }
            };
            if h.dims() != f.dims() {
                return Err(Error::Input(format!(
                    "normal has {} components, grid has {} dimensions",
                    h.dims(),
                    f.dims()
                )));
            }
            let p = parse_profile(profile)?;
            let r = halfspace_verdict(&f, &h, &p, *q, *n)?;
            let verdict = match r.verdict {
                Verdict::TriviallyZero => "trivially zero".to_string(),
                Verdict::MustVanish { consistent: true } => {
                    "criterion diverges; every slice shows the divergent trend".to_string()
                }
                Verdict::MustVanish { consistent: false } => {
                    "criterion diverges but the function is nonzero: inconsistent at grid scale".to_string()
                }
                Verdict::NotForced => "criterion converges; no vanishing is forced".to_string(),
            };
            let summary = format!("{verdict} ({} slices, {} skipped)", r.slices.len(), r.skipped_slices);
            let table = || {
                csv(
                    &["slice", "l2_norm", "classification", "minus_total", "floored_fraction"],
                    r.slices.iter().map(|s| {
                        vec![
                            s.index.to_string(),
                            num(s.l2_norm),
                            s.log_integral.classification.to_string(),
                            num(s.log_integral.minus_total()),
                            num(s.log_integral.floored_fraction),
                        ]
                    }),
                )
            };
            Ok(ok(render(cli, "vanish-test", &summary, &r, table)?))
        }
        Command::LieAnalyze {
            algebra,
            seed,
            samples,
            rows,
        } => lie_analyze(cli, algebra, *seed, *samples, *rows),
        Command::Plancherel { input, band } => {
            let f = group_input(input, default_gaussian)?;
            let r = plancherel_check(&f, band.lambda_max, band.panels)?;
            let summary = format!(
                "Plancherel integral {:e} vs squared L2 norm {:e}: relative error {:.2e}, observed order {}",
                r.integral,
                r.l2_squared,
                r.relative_error,
                r.observed_order.map_or("n/a".into(), |o| format!("{o:.2}"))
            );
            let table = || {
                csv(
                    &["lambda", "hs_squared", "density", "weight"],
                    r.table
                        .iter()
                        .map(|row| vec![num(row.lambda), num(row.hs_squared), num(row.density), num(row.weight)]),
                )
            };
            Ok(ok(render(cli, "plancherel", &summary, &r, table)?))
        }
        Command::LemmaSlice {
            input,
            lambda_max,
            points,
        } => {
            if !(*lambda_max > 0.5) || *points < 2 {
                return Err(Error::Input("need --lambda-max > 1/2 and at least two points".into()));
            }
            let f = group_input(input, default_gaussian)?;
            let lambdas: Vec<f64> = (0..*points)
                .map(|i| 0.5 + (lambda_max - 0.5) * i as f64 / (*points - 1) as f64)
                .collect();
            let r = slice_identity(&f, &lambdas)?;
            let summary = format!("slice identity: max relative deviation {:.2e}", r.max_relative);
            let table = || {
                csv(
                    &["lambda", "g_hat", "hs_side", "relative"],
                    r.rows
                        .iter()
                        .map(|row| vec![num(row.lambda), num(row.g_hat), num(row.hs_side), num(row.relative)]),
                )
            };
            Ok(ok(render(cli, "lemma-slice", &summary, &r, table)?))
        }
        Command::NilpotentCheck { input, band, profile } => {
            let f = group_input(input, default_gaussian)?;
            let p = parse_profile(profile)?;
            let r = ingham_nilpotent_check(&f, &p, band.lambda_max, band.panels)?;
            let summary = match r.verdict {
                GroupVerdict::Consistent => format!("consistent ({} criterion)", r.criterion),
                GroupVerdict::InconsistentAtGridScale => {
                    "divergent criterion with finite weighted mass: inconsistent at grid scale".to_string()
                }
            };
            let table = || {
                csv(
                    &["lambda_max", "log_weighted_mass"],
                    r.growth
                        .iter()
                        .map(|(b, m)| vec![num(*b), m.map_or("inf".into(), num)]),
                )
            };
            Ok(ok(render(cli, "nilpotent-check", &summary, &r, table)?))
        }
        Command::CentralConstruct {
            input,
            band,
            profile,
            halfwidth,
        } => central(cli, input, band, profile, *halfwidth),
    }
}

const LABEL_PREFIX: &str = "ingham psi=";

fn synthesis_label(profile: &str, l: f64, top: usize) -> String {
    format!("{LABEL_PREFIX}{profile} l={l} K={top}")
}

/// `(profile, halfwidth, top)` recorded by synthesize.
fn parse_label(label: &str) -> Option<(String, String, String)> {
    let rest = label.strip_prefix(LABEL_PREFIX)?;
    let (rest, top) = rest.rsplit_once(" K=")?;
    let (profile, l) = rest.rsplit_once(" l=")?;
    Some((profile.into(), l.into(), top.into()))
}

#[derive(Serialize)]
struct SynthesisReport<'a> {
    profile: String,
    halfwidth: f64,
    top: usize,
    gaps: &'a GapSequence,
    spacing: f64,
    points: usize,
    mode: SynthesisMode,
    support_excess: f64,
}

fn synthesize(cli: &Cli, profile: &str, l: f64, top: usize) -> Result<Outcome> {
    let p = parse_profile(profile)?;
    let g = gaps_from_profile(&p, l, top)?;
    let grid = SynthesisGrid::for_gaps(&g);
    let (f, _, mode) = ingham_function_with_mode(&g, &grid)?;
    let f = f.with_label(synthesis_label(profile, l, top));
    let r = SynthesisReport {
        profile: p.to_string(),
        halfwidth: l,
        top,
        gaps: &g,
        spacing: grid.spacing,
        points: grid.points,
        mode,
        support_excess: support_excess(&f, l),
    };
    let summary = format!(
        "{} factors on {} samples, support excess {:.1e}",
        g.truncation_index(),
        grid.points,
        r.support_excess
    );
    let table = || {
        csv(
            &["width", "multiplicity"],
            g.scales.iter().map(|s| vec![num(s.width), s.multiplicity.to_string()]),
        )
    };
    let report = render(cli, "synthesize", &summary, &r, table)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("synthesized.grid"));
    Ok(Outcome {
        report,
        grid: Some((out, f, None)),
        status: EXIT_OK,
    })
}

fn parse_vector(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|_| Error::Input(format!("{c:?} is not a number in {text:?}")))
        })
        .collect()
}

#[derive(Serialize)]
struct PfaffianRow {
    nu: Vec<f64>,
    jump_set: Vec<usize>,
    generic: bool,
    pfaffian: Option<f64>,
    /// `|ν₁|^{#P/2}`, the Pfaffian on Heisenberg algebras.
    nu1_power: f64,
}

#[derive(Serialize)]
struct LieReport {
    dim: usize,
    labels: Vec<String>,
    validation: ValidationReport,
    stratum: GenericStratum,
    rows: Vec<PfaffianRow>,
}

fn lie_analyze(cli: &Cli, algebra: &str, seed: u64, samples: usize, rows: usize) -> Result<Outcome> {
    let spec = crate::io::load_algebra(algebra)?;
    let validation = validate_algebra(&spec)?;
    let stratum = generic_stratum(&spec, samples, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    let half = stratum.p.len() as i32 / 2;
    let table_rows = (0..rows)
        .map(|_| {
            let nu: Vec<f64> = (0..spec.dim()).map(|_| StandardNormal.sample(&mut rng)).collect();
            let jump_set = coadjoint_form(&spec, &nu)?.jump_set;
            let generic = jump_set == stratum.p;
            let pfaffian = if generic {
                Some(pfaffian_abs(&spec, &nu, &stratum.p)?)
            } else {
                None
            };
            Ok(PfaffianRow {
                nu1_power: nu[0].abs().powi(half),
                nu,
                jump_set,
                generic,
                pfaffian,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let r = LieReport {
        dim: spec.dim(),
        labels: spec.labels().to_vec(),
        validation,
        stratum,
        rows: table_rows,
    };
    let summary = format!(
        "dim {}, step {}, P = {{{}}}, Q = {{{}}}, generic fraction {:.3}",
        r.dim,
        r.validation.step,
        list(&r.stratum.p).replace(';', ","),
        list(&r.stratum.q).replace(';', ","),
        r.stratum.fraction
    );
    let table = || {
        csv(
            &["nu", "jump_set", "generic", "pfaffian", "nu1_power"],
            r.rows.iter().map(|row| {
                vec![
                    list(&row.nu.iter().map(|v| num(*v)).collect::<Vec<_>>()),
                    list(&row.jump_set),
                    row.generic.to_string(),
                    row.pfaffian.map_or(String::new(), num),
                    num(row.nu1_power),
                ]
            }),
        )
    };
    Ok(ok(render(cli, "lie-analyze", &summary, &r, table)?))
}

fn default_gaussian() -> Result<GroupFunction> {
    odd_gaussian(1, reference_geometry(1)?, 0.25)
}

fn group_input(input: &GroupInput, default: fn() -> Result<GroupFunction>) -> Result<GroupFunction> {
    let Some(path) = &input.grid else {
        return default();
    };
    let (f, tag) = read_grid(path)?;
    let name = input
        .algebra
        .clone()
        .or(tag)
        .ok_or_else(|| Error::Input("grid carries no algebra; pass --algebra".into()))?;
    GroupFunction::new(crate::io::load_algebra(&name)?, f)
}

fn algebra_name(spec: &LieAlgebraSpec) -> Option<String> {
    (1..=2)
        .find(|&n| *spec == LieAlgebraSpec::heisenberg(n))
        .map(|n| format!("heisenberg{n}"))
}

/// Largest top index whose finest gap is at least four grid steps.
fn central_gaps(p: &crate::weights::DecayProfile, l: f64, ht: f64) -> Result<GapSequence> {
    let mut last = None;
    for top in (1..=DEFAULT_TOP_INDEX).rev() {
        match gaps_from_profile(p, l, top) {
            Ok(g) if g.smallest() >= 4.0 * ht => return Ok(g),
            Ok(_) => {}
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| {
        Error::Resolution(format!("t-spacing {ht} is too coarse for a central factor of halfwidth {l}"))
    }))
}

fn central(cli: &Cli, input: &GroupInput, band: &Band, profile: &str, l: f64) -> Result<Outcome> {
    let h = group_input(input, || reference_bump(1))?;
    let p = parse_profile(profile)?;
    let ht = h.samples().geometry().spacing[0];
    let gaps = central_gaps(&p, l, ht)?;
    let half = 1.25 * l;
    let points = 2 * (half / ht).ceil() as usize;
    let grid = SynthesisGrid { spacing: ht, points };
    let (g, _, _) = ingham_function_with_mode(&gaps, &grid)?;
    let f = central_construction(&g, &h)?;
    let lambdas: Vec<f64> = (0..8).map(|i| 0.5 + 0.5 * i as f64).collect();
    let r = central_report(&g, &h, &f, &p, &lambdas, band.lambda_max, band.panels)?;
    let summary = format!(
        "factorisation max relative deviation {:.2e}; weighted mass {:e} {} C·|h|² = {:e}",
        r.max_relative,
        r.weighted_mass,
        if r.bound_holds { "<=" } else { ">" },
        r.constant * r.h_l2_squared
    );
    let table = || {
        csv(
            &["lambda", "hs_f", "g_hat_sq_hs_h", "relative"],
            r.rows
                .iter()
                .map(|row| vec![num(row.lambda), num(row.hs_f), num(row.g_hat_sq_hs_h), num(row.relative)]),
        )
    };
    let report = render(cli, "central-construct", &summary, &r, table)?;
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("central.grid"));
    let tag = algebra_name(f.algebra());
    let status = if r.max_relative < 1e-3 && r.bound_holds {
        EXIT_OK
    } else {
        EXIT_CONTRACT
    };
    Ok(Outcome {
        report,
        grid: Some((out, f.samples().clone().with_label("central construction"), tag)),
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("ingham").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn labels_round_trip() {
        let l = synthesis_label("t/log(e+t)^2", 0.5, 12);
        assert_eq!(
            parse_label(&l),
            Some(("t/log(e+t)^2".into(), "0.5".into(), "12".into()))
        );
        assert_eq!(parse_label("other"), None);
    }

    #[test]
    fn flags_parse() {
        let c = parse(&["vanish-test", "--grid", "f.grid", "--eta", "-1,0", "--s", "-0.5", "--profile", "t", "--N", "1"]);
        match c.command {
            Command::VanishTest { eta, s, n, q, .. } => {
                assert_eq!(eta.as_deref(), Some("-1,0"));
                assert_eq!((s, n, q), (-0.5, 1.0, 2.0));
            }
            _ => panic!(),
        }
        assert!(Cli::try_parse_from(["ingham", "frobnicate"]).is_err());
        assert_eq!(parse_vector("1, 0,-2").unwrap(), vec![1.0, 0.0, -2.0]);
        assert!(parse_vector("1,x").is_err());
    }

    #[test]
    fn criterion_reports() {
        let c = parse(&["criterion", "--profile", "t/log(e+t)"]);
        let out = run(&c).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["result"]["classification"], "divergent");
        let c = parse(&["criterion", "--profile", "t^0.5", "--format", "csv"]);
        let out = run(&c).unwrap();
        assert!(out.report.starts_with("T,partial_integral\n"));
        assert!(out.report.trim_end().ends_with("convergent (integral 2.000000e0)"));
    }

    #[test]
    fn lie_analyze_heisenberg() {
        let c = parse(&["lie-analyze", "--algebra", "heisenberg1.alg"]);
        let out = run(&c).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.report).unwrap();
        assert_eq!(v["result"]["stratum"]["p"], serde_json::json!([2, 3]));
        assert_eq!(v["result"]["stratum"]["q"], serde_json::json!([1]));
        for row in v["result"]["rows"].as_array().unwrap() {
            let pf = row["pfaffian"].as_f64().unwrap();
            let nu1 = row["nu"][0].as_f64().unwrap().abs();
            assert!((pf - nu1).abs() < 1e-12 * nu1.max(1.0));
        }
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::Input("x".into())), EXIT_INPUT);
        assert_eq!(exit_code(&Error::Contract("x".into())), EXIT_CONTRACT);
        assert_eq!(exit_code(&Error::numeric("x")), EXIT_NUMERIC);
        let c = parse(&["synthesize", "--profile", "t"]);
        assert_eq!(exit_code(&run(&c).err().unwrap()), EXIT_CONTRACT);
        let c = parse(&["criterion", "--profile", "nonsense("]);
        assert_eq!(exit_code(&run(&c).err().unwrap()), EXIT_INPUT);
    }
}
