//! `pgt`: one subcommand per computed object, JSON-lines or CSV on output.
//!
//! Exit codes: 0 success, 2 invalid parameters or unreadable input, 3 a
//! verification subcommand missed its tolerance.

pub mod cache;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pgt_core::bessel_transforms::{default_grid, omega0_grid, quick_grid, verify_bessel_moment_detailed};
use pgt_core::gaussian_ring::DivisorConvention;
use pgt_core::geodesic_oracle::{conjugacy_classes_up_to, psi_lower_report};
use pgt_core::kloosterman::{round_sig, weil_audit, weil_bound, KloostermanSource};
use pgt_core::special_functions::WeightParams;
use pgt_core::spectral_sums::{
    balanced_t, explicit_e, h_approximation_budget, h_weighted_sum, load_spectrum, second_moment_e, second_moment_s,
    second_moment_s_closed, sharp_sum, smooth_sum_report, synth_spectrum, write_spectrum, EigenvalueList,
};
use pgt_core::trace_sums::{
    ddagger_from_terms, ddagger_terms, k0_pair_integral_with, second_moment_from_terms, AggregateSpec,
    DdaggerNormalization,
};
use pgt_core::GaussianInt;

use crate::cache::{KloostermanCache, LoadOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("tolerance check failed: {0}")]
    Tolerance(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Tolerance(_) => EXIT_TOLERANCE,
            CliError::Invalid(_) | CliError::Io(_) => EXIT_INVALID,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn real(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("not a finite number: {s}")),
    }
}

// integer flags accept scientific notation as long as the value is integral
fn count(s: &str) -> Result<u64, String> {
    let v = real(s)?;
    if v < 0.0 || v.fract() != 0.0 || v > 9.007_199_254_740_992e15 {
        return Err(format!("not a non-negative integer: {s}"));
    }
    Ok(v as u64)
}

fn gaussian(s: &str) -> Result<GaussianInt, String> {
    s.parse::<GaussianInt>().map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "pgt", version, about = "Numerical workbench for the Picard group PSL(2, Z[i])")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Kloosterman cache file; PGT_CACHE takes precedence.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value = "0", value_parser = count)]
    pub threads: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Normalization {
    Printed,
    Consistent,
}

impl From<Normalization> for DdaggerNormalization {
    fn from(n: Normalization) -> Self {
        match n {
            Normalization::Printed => DdaggerNormalization::Printed,
            Normalization::Consistent => DdaggerNormalization::Consistent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Default,
    Quick,
}

#[derive(Debug, Args)]
pub struct Window {
    #[arg(long, value_parser = gaussian, default_value = "1")]
    pub n: GaussianInt,
    #[arg(long, value_parser = real)]
    pub v: f64,
    #[arg(long, value_parser = real)]
    pub y: f64,
    #[arg(long, value_parser = real)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Spectrum file; a synthetic spectrum is drawn when absent.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    #[arg(long, value_parser = real, default_value = "0.1")]
    pub c0: f64,
    #[arg(long, value_parser = count, default_value = "0")]
    pub seed: u64,
    /// Upper end of the synthetic spectrum; defaults to the truncation in use.
    #[arg(long, value_parser = real)]
    pub t_max: Option<f64>,
}

impl SpectrumArgs {
    fn load(&self, t_default: f64) -> Result<EigenvalueList, CliError> {
        match &self.spectrum {
            Some(path) => load_spectrum(path).map_err(invalid),
            None => synth_spectrum(self.t_max.unwrap_or(t_default).max(1.0), self.c0, self.seed).map_err(invalid),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One Kloosterman sum S(n, m, c).
    Kloosterman {
        #[arg(long, value_parser = gaussian)]
        n: GaussianInt,
        #[arg(long, value_parser = gaussian)]
        m: GaussianInt,
        #[arg(long, value_parser = gaussian)]
        c: GaussianInt,
    },
    /// Weil-bound ratios over all canonical moduli up to a norm.
    WeilScan {
        #[arg(long, value_parser = gaussian)]
        n: GaussianInt,
        #[arg(long, value_parser = gaussian)]
        m: GaussianInt,
        #[arg(long, value_parser = count)]
        norm_bound: u64,
        #[arg(long, value_parser = real, default_value = "1e-9")]
        tolerance: f64,
    },
    /// Quadrature against closed form for omega_0 on a grid.
    OmegaCheck {
        #[arg(long, value_enum, default_value = "default")]
        grid: Grid,
        #[arg(long, value_parser = real, default_value = "1e-6")]
        tolerance: f64,
    },
    /// Both sides of the Bessel-moment identity.
    BesselMomentCheck {
        #[arg(long, value_delimiter = ',', value_parser = real, default_values = ["1", "5"])]
        a: Vec<f64>,
        #[arg(long, value_delimiter = ',', value_parser = real, default_values = ["10", "100"])]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',', value_parser = real, default_values = ["5", "10"])]
        t: Vec<f64>,
        #[arg(long, value_parser = real, default_value = "1e-4")]
        tolerance: f64,
    },
    /// The K0-kernel aggregate at one X.
    Aggregate {
        #[command(flatten)]
        window: Window,
        /// Evaluation point; defaults to V.
        #[arg(long, value_parser = real)]
        x: Option<f64>,
        #[arg(long, value_enum, default_value = "printed")]
        normalization: Normalization,
    },
    /// Second moment of the K0-kernel aggregate over the window.
    MomentDdagger {
        #[command(flatten)]
        window: Window,
        #[arg(long, value_parser = count, default_value = "32")]
        nodes: u64,
        #[arg(long, value_enum, default_value = "printed")]
        normalization: Normalization,
    },
    /// The paired K0 integral and its envelope ratio.
    K0Pair {
        #[arg(long, value_parser = real)]
        x1: f64,
        #[arg(long, value_parser = real)]
        x2: f64,
        #[arg(long, value_parser = real)]
        v: f64,
        #[arg(long, value_parser = real)]
        y: f64,
        #[arg(long, value_parser = real)]
        t: f64,
        #[arg(long, value_parser = real, default_value = "1e-10")]
        rel: f64,
    },
    /// Sharp, smoothed and h-weighted spectral sums.
    Ssum {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long, value_parser = real)]
        t: f64,
        #[arg(long, value_parser = real)]
        x: f64,
    },
    /// Main sum of the explicit formula.
    ExplicitE {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long, value_parser = real)]
        t: f64,
        #[arg(long, value_parser = real)]
        x: f64,
    },
    /// Windowed second moment of S(T, X).
    MomentS {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long, value_parser = real)]
        t: f64,
        #[arg(long, value_parser = real)]
        v: f64,
        #[arg(long, value_parser = real)]
        y: f64,
        #[arg(long, value_parser = count, default_value = "16")]
        nodes: u64,
        /// Also evaluate the pairwise closed form.
        #[arg(long)]
        closed: bool,
    },
    /// Windowed second moment of the explicit-formula main sum.
    MomentE {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long, value_parser = real)]
        v: f64,
        #[arg(long, value_parser = real)]
        y: f64,
        /// Truncation; defaults to V^(1/6) Y^(1/3).
        #[arg(long, value_parser = real)]
        t: Option<f64>,
        #[arg(long, value_parser = count, default_value = "16")]
        nodes: u64,
    },
    /// Writes a synthetic Weyl-law spectrum.
    SpectrumGen {
        #[arg(long, value_parser = real)]
        t: f64,
        #[arg(long, value_parser = real, default_value = "0.1")]
        c0: f64,
        #[arg(long, value_parser = count, default_value = "0")]
        seed: u64,
    },
    /// Class table of loxodromic conjugacy classes as CSV.
    Geodesics {
        #[arg(long, value_parser = count, default_value = "2")]
        h_rep: u64,
        #[arg(long, value_parser = count, default_value = "4")]
        h_orbit: u64,
        #[arg(long, value_parser = real)]
        max_norm: Option<f64>,
    },
    /// Lower approximation of the hyperbolic Chebyshev function.
    PsiLower {
        #[arg(long, value_delimiter = ',', value_parser = real, required = true)]
        x: Vec<f64>,
        #[arg(long, value_parser = count, default_value = "3")]
        h_rep: u64,
        #[arg(long, value_parser = count, default_value = "6")]
        h_orbit: u64,
    },
}

#[derive(Serialize)]
struct Cx {
    re: f64,
    im: f64,
}

fn cx(re: f64, im: f64) -> Cx {
    Cx {
        re: round_sig(re, 15),
        im: round_sig(im, 15),
    }
}

fn sig(x: f64) -> f64 {
    round_sig(x, 15)
}

#[derive(Default)]
struct Output {
    text: String,
}

impl Output {
    fn record<T: Serialize>(&mut self, value: &T) -> Result<(), CliError> {
        let line = serde_json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
        self.text.push_str(&line);
        self.text.push('\n');
        Ok(())
    }
}

/// Parses `argv` (program name first), runs one subcommand and returns its exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run_captured(argv) {
        Ok((text, out)) => match write_output(&text, out.as_deref()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("pgt: {e}");
                e.exit_code()
            }
        },
        Err((e, text, out)) => {
            let _ = write_output(&text, out.as_deref());
            if !e.to_string().is_empty() {
                eprintln!("pgt: {e}");
            }
            e.exit_code()
        }
    }
}

type Captured = (String, Option<PathBuf>);

/// Like [`run`] but returns the output text instead of writing it.
///
/// On failure the partial output is returned too, so verification records stay visible.
pub fn run_captured<I, T>(argv: I) -> Result<Captured, (CliError, String, Option<PathBuf>)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                return Ok((text, None));
            }
            return Err((CliError::Invalid(text.trim_end().to_string()), String::new(), None));
        }
    };
    let out_path = cli.out.clone();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build()
        .map_err(|e| (invalid(e), String::new(), out_path.clone()))?;
    let mut out = Output::default();
    let result = pool.install(|| execute(&cli, &mut out));
    match result {
        Ok(()) => Ok((out.text, out_path)),
        Err(e) => Err((e, out.text, out_path)),
    }
}

fn write_output(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn open_cache(cli: &Cli) -> KloostermanCache {
    let path = std::env::var_os("PGT_CACHE").map(PathBuf::from).or_else(|| cli.cache.clone());
    let cache = match path {
        Some(p) => KloostermanCache::open(&p),
        None => KloostermanCache::in_memory(),
    };
    match cache.outcome() {
        LoadOutcome::VersionMismatch(found) => eprintln!("pgt: warning: cache version {found} ignored, recomputing"),
        LoadOutcome::Corrupt { line } => eprintln!("pgt: warning: cache corrupt at line {line}, rebuilding"),
        _ => {}
    }
    cache
}

fn close_cache(cache: &KloostermanCache) -> Result<(), CliError> {
    eprintln!("pgt: cache hits {} misses {}", cache.hits(), cache.misses());
    cache.save().map_err(|e| CliError::Io(format!("cache: {e}")))
}

fn spec_of(w: &Window) -> Result<AggregateSpec, CliError> {
    AggregateSpec::new(w.n, w.v, w.y, w.t).map_err(invalid)
}

fn execute(cli: &Cli, out: &mut Output) -> Result<(), CliError> {
    match &cli.command {
        Command::Kloosterman { n, m, c } => {
            if c.is_zero() {
                return Err(invalid("c must be nonzero"));
            }
            let cache = open_cache(cli);
            let value = cache.value(*n, *m, *c).map_err(invalid)?;
            let bound = weil_bound(*n, *m, *c, DivisorConvention::UpToUnits).map_err(invalid)?;
            #[derive(Serialize)]
            struct Rec {
                n: GaussianInt,
                m: GaussianInt,
                c: GaussianInt,
                value: f64,
                weil_ratio: Option<f64>,
            }
            out.record(&Rec {
                n: *n,
                m: *m,
                c: *c,
                value: sig(value),
                weil_ratio: bound.map(|b| sig(value.abs() / b)),
            })?;
            close_cache(&cache)
        }
        Command::WeilScan {
            n,
            m,
            norm_bound,
            tolerance,
        } => {
            let records = weil_audit(*n, *m, *norm_bound as i64).map_err(invalid)?;
            let mut max_ratio: f64 = 0.0;
            let mut worst_imag: f64 = 0.0;
            for r in &records {
                out.record(r)?;
                if let Some(q) = r.weil_ratio {
                    max_ratio = max_ratio.max(q);
                }
                worst_imag = worst_imag.max(r.imag.abs() / r.c.norm() as f64);
            }
            out.record(&serde_json::json!({
                "summary": "weil-scan",
                "count": records.len(),
                "max_ratio": sig(max_ratio),
                "max_imag_over_norm": sig(worst_imag),
            }))?;
            if max_ratio > 1.0 + tolerance || worst_imag > 1e-8 {
                return Err(CliError::Tolerance(format!("max ratio {max_ratio}, imaginary part {worst_imag}")));
            }
            Ok(())
        }
        Command::OmegaCheck { grid, tolerance } => {
            let points = match grid {
                Grid::Default => default_grid(),
                Grid::Quick => quick_grid(),
            };
            let rows = omega0_grid(&points).map_err(invalid)?;
            let mut worst: f64 = 0.0;
            for g in &rows {
                let dev = g.relative_deviation();
                worst = worst.max(dev);
                out.record(&serde_json::json!({
                    "abs_z": sig(g.abs_z),
                    "X": sig(g.x),
                    "T": sig(g.t),
                    "quadrature": cx(g.quadrature.value.re, g.quadrature.value.im),
                    "closed": cx(g.closed.value.re, g.closed.value.im),
                    "rel_deviation": sig(dev),
                }))?;
            }
            out.record(&serde_json::json!({"summary": "omega-check", "points": rows.len(), "max_rel_deviation": sig(worst)}))?;
            if worst > *tolerance {
                return Err(CliError::Tolerance(format!("max relative deviation {worst}")));
            }
            Ok(())
        }
        Command::BesselMomentCheck { a, x, t, tolerance } => {
            let mut cases = Vec::new();
            for &ai in a {
                for &xi in x {
                    for &ti in t {
                        cases.push((ai, WeightParams::new(xi, ti).map_err(invalid)?));
                    }
                }
            }
            let checks: Vec<_> = {
                use rayon::prelude::*;
                cases
                    .par_iter()
                    .map(|(ai, p)| verify_bessel_moment_detailed(*ai, p))
                    .collect::<Result<_, _>>()
                    .map_err(invalid)?
            };
            let mut worst: f64 = 0.0;
            for ((ai, p), c) in cases.iter().zip(&checks) {
                worst = worst.max(c.rel_deviation);
                out.record(&serde_json::json!({
                    "a": sig(*ai), "X": sig(p.x), "T": sig(p.t),
                    "lhs": cx(c.lhs.re, c.lhs.im),
                    "rhs": cx(c.rhs.re, c.rhs.im),
                    "rel_deviation": sig(c.rel_deviation),
                }))?;
            }
            out.record(&serde_json::json!({"summary": "bessel-moment-check", "cases": checks.len(), "max_rel_deviation": sig(worst)}))?;
            if worst > *tolerance {
                return Err(CliError::Tolerance(format!("max relative deviation {worst}")));
            }
            Ok(())
        }
        Command::Aggregate { window, x, normalization } => {
            let spec = spec_of(window)?;
            let x = x.unwrap_or(spec.v);
            if x < spec.v || x > spec.v + spec.y {
                return Err(invalid(format!("X = {x} lies outside the window [V, V+Y]")));
            }
            let cache = open_cache(cli);
            let terms = ddagger_terms(&spec, &cache).map_err(invalid)?;
            let v = ddagger_from_terms(&spec, &terms, x, (*normalization).into()).map_err(invalid)?;
            out.record(&serde_json::json!({
                "n": spec.n, "V": sig(spec.v), "Y": sig(spec.y), "T": sig(spec.t), "X": sig(x),
                "C1": sig(spec.c1), "C2": sig(spec.c2), "moduli": terms.len(),
                "normalization": format!("{normalization:?}").to_lowercase(),
                "value": cx(v.re, v.im),
            }))?;
            close_cache(&cache)
        }
        Command::MomentDdagger {
            window,
            nodes,
            normalization,
        } => {
            let spec = spec_of(window)?;
            let cache = open_cache(cli);
            let terms = ddagger_terms(&spec, &cache).map_err(invalid)?;
            let mut report = second_moment_from_terms(&spec, &terms, *nodes as usize, (*normalization).into()).map_err(invalid)?;
            for f in [&mut report.integral, &mut report.envelope, &mut report.ratio, &mut report.c1, &mut report.c2] {
                *f = sig(*f);
            }
            out.record(&report)?;
            close_cache(&cache)
        }
        Command::K0Pair { x1, x2, v, y, t, rel } => {
            let r = k0_pair_integral_with(*x1, *x2, *v, *y, *t, *rel).map_err(invalid)?;
            out.record(&serde_json::json!({
                "x1": sig(*x1), "x2": sig(*x2), "V": sig(*v), "Y": sig(*y), "T": sig(*t),
                "integral": cx(r.integral.re, r.integral.im),
                "error": sig(r.error), "envelope": sig(r.envelope), "ratio": sig(r.ratio),
            }))
        }
        Command::Ssum { spectrum, t, x } => {
            let p = WeightParams::new(*x, *t).map_err(invalid)?;
            let spec = spectrum.load(20.0 * t * std::f64::consts::LN_10)?;
            let sharp = sharp_sum(&spec, *t, *x);
            let smooth = smooth_sum_report(&spec, *t, *x);
            let h = h_weighted_sum(&spec, &p);
            if !smooth.complete {
                eprintln!("pgt: warning: spectrum ends before the smoothing weight decays; residual bound {:e}", smooth.residual_bound);
            }
            out.record(&serde_json::json!({
                "T": sig(*t), "X": sig(*x), "eigenvalues": spec.len(),
                "sharp": cx(sharp.re, sharp.im),
                "smooth": cx(smooth.value.re, smooth.value.im),
                "h_weighted": cx(h.re, h.im),
                "h_budget": sig(h_approximation_budget(&spec)),
                "complete": smooth.complete,
                "residual_bound": sig(smooth.residual_bound),
            }))
        }
        Command::ExplicitE { spectrum, t, x } => {
            let spec = spectrum.load(*t)?;
            let e = explicit_e(&spec, *t, *x).map_err(invalid)?;
            out.record(&serde_json::json!({"T": sig(*t), "X": sig(*x), "eigenvalues": spec.len(), "value": sig(e)}))
        }
        Command::MomentS {
            spectrum,
            t,
            v,
            y,
            nodes,
            closed,
        } => {
            let spec = spectrum.load(*t)?;
            let q = second_moment_s(&spec, *t, *v, *y, *nodes as usize).map_err(invalid)?;
            let c = if *closed {
                Some(sig(second_moment_s_closed(&spec, *t, *v, *y).map_err(invalid)?))
            } else {
                None
            };
            out.record(&serde_json::json!({
                "T": sig(*t), "V": sig(*v), "Y": sig(*y), "nodes": nodes, "eigenvalues": spec.len(),
                "moment": sig(q), "closed": c,
            }))
        }
        Command::MomentE {
            spectrum,
            v,
            y,
            t,
            nodes,
        } => {
            let t_used = t.unwrap_or_else(|| balanced_t(*v, *y));
            let spec = spectrum.load(t_used)?;
            let m = second_moment_e(&spec, Some(t_used), *v, *y, *nodes as usize).map_err(invalid)?;
            out.record(&serde_json::json!({
                "T": sig(t_used), "V": sig(*v), "Y": sig(*y), "nodes": nodes, "eigenvalues": spec.len(), "moment": sig(m),
            }))
        }
        Command::SpectrumGen { t, c0, seed } => {
            let spec = synth_spectrum(*t, *c0, *seed).map_err(invalid)?;
            out.text.push_str(&write_spectrum(&spec, &format!("synthetic t_max={t} c0={c0} seed={seed}")));
            Ok(())
        }
        Command::Geodesics { h_rep, h_orbit, max_norm } => {
            let (hr, ho) = heights(*h_rep, *h_orbit)?;
            let table = conjugacy_classes_up_to(hr, ho, max_norm.unwrap_or(f64::INFINITY));
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in table.rows() {
                w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
            if table.classes.is_empty() {
                let _ = writeln!(out.text, "trace_re,trace_im,norm,primitive,power_index,class_size_observed,representative");
            }
            out.text.push_str(&String::from_utf8_lossy(&bytes));
            Ok(())
        }
        Command::PsiLower { x, h_rep, h_orbit } => {
            let (hr, ho) = heights(*h_rep, *h_orbit)?;
            if x.iter().any(|&xi| xi < 1.0) {
                return Err(invalid("X must be at least 1"));
            }
            let x_max = x.iter().copied().fold(1.0, f64::max);
            let table = if x_max > 1.0 {
                Some(conjugacy_classes_up_to(hr, ho, x_max))
            } else {
                None
            };
            for &xi in x {
                let r = match &table {
                    Some(t) if xi > 1.0 => t.psi(xi),
                    _ => psi_lower_report(xi, hr, ho),
                };
                out.record(&serde_json::json!({
                    "X": sig(xi), "h_rep": hr, "h_orbit": ho, "value": sig(r.value), "raw_value": sig(r.raw_value),
                    "raw_count": r.raw_count, "merged_count": r.merged_count, "may_over_split": true,
                }))?;
            }
            Ok(())
        }
    }
}

fn heights(h_rep: u64, h_orbit: u64) -> Result<(i64, i64), CliError> {
    if h_rep < 1 || h_orbit < h_rep || h_orbit > 127 {
        return Err(invalid(format!("need 1 <= h_rep <= h_orbit <= 127, got {h_rep}, {h_orbit}")));
    }
    Ok((h_rep as i64, h_orbit as i64))
}
