//! Batch runs over a range of `n`: approximants, witness vectors and the
//! product `Π`, plus the cross-module invariant suite.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::diophantine::{
    place_set, product_over_places, subspace_product, witness_vector, SubspaceProduct,
};
use crate::enclosure::{format_sci, integer, RationalEnclosure, Rounding};
use crate::error::{Error, Result};
use crate::logs::LogInterval;
use crate::series::{
    alpha_n_exact, alpha_n_oracle, approximants, build_p_n, error_bound, error_enclosure,
    Approximant, ArraySpec, ErrorBound,
};
use crate::spec::load_spec;

/// Refinements of the `α` enclosure before giving up on one `n`.
pub const MAX_RETRIES: u32 = 64;

/// Significant digits of rational report fields.
const DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub spec_path: PathBuf,
    pub n_min: u32,
    pub n_max: u32,
    pub alpha_width: BigRational,
    pub epsilon: BigRational,
    pub format: OutputFormat,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(spec_path: impl Into<PathBuf>, n_min: u32, n_max: u32) -> Self {
        Self {
            spec_path: spec_path.into(),
            n_min,
            n_max,
            alpha_width: BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 40)),
            epsilon: BigRational::new(BigInt::one(), BigInt::from(1000)),
            format: OutputFormat::Csv,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::Configuration(format!(
                "n range [{}, {}] must be nonempty and start at 1 or later",
                self.n_min, self.n_max
            )));
        }
        if !self.alpha_width.is_positive() {
            return Err(Error::Configuration("alpha width must be positive".into()));
        }
        if !self.epsilon.is_positive() {
            return Err(Error::Configuration("epsilon must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::Configuration("need at least one worker".into()));
        }
        Ok(())
    }

    fn ns(&self) -> Vec<u32> {
        (self.n_min..=self.n_max).collect()
    }
}

/// Where the measured exponent sits relative to `−(m + ε)`, `m = 2^r + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// `Π = 0`: `α_n = α` exactly or `P_n(a) = 0`.
    ExactlyPeriodic,
    /// Certified `Π < H^{−m−ε}`.
    BelowThreshold,
    /// Certified `Π > H^{−m−ε}`.
    AboveThreshold,
    Undecided,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::ExactlyPeriodic => "exactly_periodic",
            Status::BelowThreshold => "below_threshold",
            Status::AboveThreshold => "above_threshold",
            Status::Undecided => "undecided",
        }
    }
}

/// One report line. Rationals are printed in scientific notation rounded
/// outward; logarithms are natural and already outward-rounded.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub n: u32,
    pub preperiods: Vec<usize>,
    pub periods: Vec<usize>,
    pub height_lo: String,
    pub height_hi: String,
    pub log_height_lo: f64,
    pub log_height_hi: f64,
    pub log_pi_lo: Option<f64>,
    pub log_pi_hi: Option<f64>,
    pub exponent_lo: Option<f64>,
    pub exponent_hi: Option<f64>,
    pub error_hi: String,
    pub rigorous_bound: String,
    pub nominal_bound_lo: String,
    pub nominal_bound_hi: String,
    pub status: Status,
}

/// Everything computed for one `n`.
#[derive(Clone, Debug)]
pub struct Measurement {
    pub approx: Approximant,
    pub alpha: RationalEnclosure,
    pub alpha_n: BigRational,
    pub bound: ErrorBound,
    pub product: SubspaceProduct,
}

impl Measurement {
    pub fn row(&self, threshold: f64) -> ReportRow {
        let sp = &self.product;
        let status = match sp.exponent {
            None => Status::ExactlyPeriodic,
            Some(e) if e.hi < threshold => Status::BelowThreshold,
            Some(e) if e.lo > threshold => Status::AboveThreshold,
            Some(_) => Status::Undecided,
        };
        let err = error_enclosure(&self.alpha, &self.alpha_n);
        ReportRow {
            n: self.approx.n,
            preperiods: self.approx.dims.iter().map(|d| d.preperiod()).collect(),
            periods: self.approx.dims.iter().map(|d| d.period()).collect(),
            height_lo: format_sci(sp.height.lo(), DIGITS, Rounding::Down),
            height_hi: format_sci(sp.height.hi(), DIGITS, Rounding::Up),
            log_height_lo: sp.log_height.lo,
            log_height_hi: sp.log_height.hi,
            log_pi_lo: sp.log_pi.map(|l| l.lo),
            log_pi_hi: sp.log_pi.map(|l| l.hi),
            exponent_lo: sp.exponent.map(|l| l.lo),
            exponent_hi: sp.exponent.map(|l| l.hi),
            error_hi: format_sci(err.hi(), DIGITS, Rounding::Up),
            rigorous_bound: format_sci(&self.bound.rigorous, DIGITS, Rounding::Up),
            nominal_bound_lo: format_sci(self.bound.nominal.lo(), DIGITS, Rounding::Down),
            nominal_bound_hi: format_sci(self.bound.nominal.hi(), DIGITS, Rounding::Up),
            status,
        }
    }
}

fn bases_point(spec: &ArraySpec) -> Vec<BigInt> {
    (0..spec.dimension()).map(|i| spec.base(i)).collect()
}

/// Runs the pipeline for one `n`. The `α` enclosure starts at
/// `min(alpha_width, rigorous · 2^-32)` and is halved on each
/// precision failure, at most [`MAX_RETRIES`] times.
pub fn measure(spec: &ArraySpec, n: u32, alpha_width: &BigRational) -> Result<Measurement> {
    let approx = approximants(spec, n)?;
    let alpha_n = alpha_n_exact(spec, &approx)?;
    let bound = error_bound(spec, &approx)?;
    let p_value = build_p_n(spec, &approx).evaluate(&bases_point(spec));
    let witness = witness_vector(spec, &approx, &p_value)?;
    let places = place_set(spec.bases());
    let scaled = &bound.rigorous / integer(1u64 << 32);
    let mut width = if scaled.is_positive() && scaled < *alpha_width {
        scaled
    } else {
        alpha_width.clone()
    };
    let mut retries = 0;
    loop {
        let alpha = spec.evaluate_alpha(&width)?;
        match subspace_product(&witness, &alpha, &places) {
            Ok(product) => {
                return Ok(Measurement {
                    approx,
                    alpha,
                    alpha_n,
                    bound,
                    product,
                })
            }
            Err(Error::PrecisionInsufficient(_)) if retries < MAX_RETRIES => {
                retries += 1;
                // the enclosure may already be far narrower than requested
                width = alpha.width().min(width) / integer(2);
                if width.is_zero() {
                    return Err(Error::PrecisionExhausted { n, retries });
                }
            }
            Err(Error::PrecisionInsufficient(_)) => {
                return Err(Error::PrecisionExhausted { n, retries })
            }
            Err(e) => return Err(e),
        }
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Configuration(format!("thread pool: {e}")))
}

/// `-(2^r + 1 + ε)` as a float, for classifying exponent enclosures.
fn threshold(spec: &ArraySpec, epsilon: &BigRational) -> f64 {
    let m = (1u64 << spec.dimension()) + 1;
    let eps = num_traits::ToPrimitive::to_f64(epsilon).unwrap_or(0.0);
    -(m as f64 + eps)
}

/// One row per `n`, in increasing `n` whatever the worker count.
pub fn run_experiment_on(spec: &ArraySpec, cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    cfg.validate()?;
    let ns = cfg.ns();
    let results: Vec<Result<Measurement>> = pool(cfg.workers)?.install(|| {
        use rayon::prelude::*;
        ns.par_iter()
            .map(|&n| measure(spec, n, &cfg.alpha_width))
            .collect()
    });
    let t = threshold(spec, &cfg.epsilon);
    results
        .into_iter()
        .map(|r| r.map(|m| m.row(t)))
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let spec = load_spec(&cfg.spec_path)?;
    run_experiment_on(&spec, cfg)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-inf".to_string(), |v| v.to_string())
}

pub fn render_csv(rows: &[ReportRow]) -> String {
    let r = rows.first().map_or(0, |row| row.periods.len());
    let mut out = String::from("n");
    for i in 1..=r {
        write!(out, ",r_{i},s_{i}").unwrap();
    }
    out.push_str(
        ",height_lo,height_hi,log_height_lo,log_height_hi,log_pi_lo,log_pi_hi,\
         exponent_lo,exponent_hi,error_hi,rigorous_bound,nominal_bound_lo,nominal_bound_hi,status\n",
    );
    for row in rows {
        write!(out, "{}", row.n).unwrap();
        for (p, s) in row.preperiods.iter().zip(&row.periods) {
            write!(out, ",{p},{s}").unwrap();
        }
        writeln!(
            out,
            ",{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.height_lo,
            row.height_hi,
            row.log_height_lo,
            row.log_height_hi,
            opt(row.log_pi_lo),
            opt(row.log_pi_hi),
            opt(row.exponent_lo),
            opt(row.exponent_hi),
            row.error_hi,
            row.rigorous_bound,
            row.nominal_bound_lo,
            row.nominal_bound_hi,
            row.status.label()
        )
        .unwrap();
    }
    out
}

pub fn render_json(rows: &[ReportRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn render(rows: &[ReportRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => render_csv(rows),
        OutputFormat::Json => render_json(rows),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Reproducer or short confirmation.
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct CheckSummary {
    pub results: Vec<CheckResult>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    fn record(&mut self, name: &str, outcome: std::result::Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.results.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let tag = if r.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {}: {}", r.name, r.detail).unwrap();
        }
        let failed = self.results.iter().filter(|r| !r.passed).count();
        writeln!(out, "{} checks, {failed} failed", self.results.len()).unwrap();
        out
    }
}

/// Box side for comparing `coefficient` with the product automaton.
fn check_side(r: usize) -> u64 {
    match r {
        2 => 32,
        3 => 8,
        _ => 4,
    }
}

fn check_generators(spec: &ArraySpec) -> std::result::Result<String, String> {
    let prod = spec.product_dfao().map_err(|e| match e {
        Error::Precondition {
            message,
            witness: Some(w),
        } => format!("product automaton: {message}; witness {w}"),
        e => format!("product automaton: {e}"),
    })?;
    let r = spec.dimension();
    let side = check_side(r);
    let total = side.pow(r as u32);
    for flat in 0..total {
        let mut ns = vec![0u64; r];
        let mut x = flat;
        for n in ns.iter_mut() {
            *n = x % side;
            x /= side;
        }
        let c = spec.coefficient(&ns).map_err(|e| format!("c{ns:?}: {e}"))?;
        let p = prod.array_term(&ns).map_err(|e| format!("c{ns:?}: {e}"))?;
        if c != p || c.abs() > spec.m() {
            return Err(format!("c{ns:?} = {c} but the product automaton gives {p}"));
        }
    }
    Ok(format!("{} states, agrees on [0,{side})^{r}", prod.num_states()))
}

fn check_n(spec: &ArraySpec, n: u32, summary: &mut CheckSummary) -> Result<()> {
    let approx = approximants(spec, n)?;
    let exact = alpha_n_exact(spec, &approx)?;
    let oracle = alpha_n_oracle(spec, &approx)?;
    summary.record(
        &format!("n={n} alpha_n exact = oracle"),
        if exact == oracle {
            Ok(format!("alpha_n = {}", format_sci(&exact, DIGITS, Rounding::Down)))
        } else {
            Err(format!("exact {exact} != oracle {oracle}"))
        },
    );

    let poly = build_p_n(spec, &approx);
    let stats = poly.stats();
    let coeff_bound = (1u128 << spec.dimension()) * spec.m() as u128;
    let mut bad = Vec::new();
    for (i, d) in stats.degrees.iter().enumerate() {
        if let Some(d) = d {
            if *d > poly.degree_bound(i) {
                bad.push(format!("deg_X{} = {d} > {}", i + 1, poly.degree_bound(i)));
            }
        }
    }
    if stats.max_abs > coeff_bound {
        bad.push(format!("max |coeff| = {} > {coeff_bound}", stats.max_abs));
    }
    summary.record(
        &format!("n={n} P_n bounds"),
        if bad.is_empty() {
            Ok(format!("max |coeff| = {}, degrees {:?}", stats.max_abs, stats.degrees))
        } else {
            Err(bad.join("; "))
        },
    );

    let p_value = poly.evaluate(&bases_point(spec));
    let witness = witness_vector(spec, &approx, &p_value);
    summary.record(
        &format!("n={n} witness sum identity"),
        witness
            .as_ref()
            .map(|w| format!("{} coordinates", w.len()))
            .map_err(|e| e.to_string()),
    );

    let bound = error_bound(spec, &approx)?;
    let width = if bound.rigorous.is_positive() {
        &bound.rigorous / integer(1u64 << 20)
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 30))
    };
    let alpha = spec.evaluate_alpha(&width)?;
    let err = error_enclosure(&alpha, &exact);
    summary.record(
        &format!("n={n} error bound inclusion"),
        if err.hi() <= &bound.rigorous {
            Ok(format!(
                "|alpha - alpha_n| <= {} <= {}",
                format_sci(err.hi(), 6, Rounding::Up),
                format_sci(&bound.rigorous, 6, Rounding::Up)
            ))
        } else {
            Err(format!(
                "|alpha - alpha_n| enclosure {err} exceeds {}",
                format_sci(&bound.rigorous, DIGITS, Rounding::Up)
            ))
        },
    );

    // S-unit coordinates and their quotients factor over the base primes;
    // α_n itself has numerators too large to factor
    let mut samples: Vec<BigRational> = approx
        .dims
        .iter()
        .map(|d| BigRational::new(BigInt::from(d.preperiod() as u64 + 1), BigInt::from(d.period() as u64)))
        .collect();
    if let Ok(w) = &witness {
        let units = w.subset_coords();
        samples.extend(units.iter().cloned().map(BigRational::from_integer));
        samples.extend(
            units
                .windows(2)
                .map(|p| BigRational::new(p[0].clone(), p[1].clone())),
        );
    }
    let mut failures = Vec::new();
    for x in samples.iter().filter(|x| !x.is_zero()) {
        match product_over_places(x) {
            Ok(p) if p.is_one() => {}
            Ok(p) => failures.push(format!("∏_v |{x}|_v = {p}")),
            Err(e) => failures.push(e.to_string()),
        }
    }
    summary.record(
        &format!("n={n} product formula"),
        if failures.is_empty() {
            Ok(format!("{} samples", samples.len()))
        } else {
            Err(failures.join("; "))
        },
    );
    Ok(())
}

/// The invariant suite for every `n` in the configured range.
pub fn check_on(spec: &ArraySpec, cfg: &ExperimentConfig) -> Result<CheckSummary> {
    cfg.validate()?;
    let mut summary = CheckSummary::default();
    summary.record("generators and product automaton", check_generators(spec));
    let ns = cfg.ns();
    let per_n: Vec<Result<CheckSummary>> = pool(cfg.workers)?.install(|| {
        use rayon::prelude::*;
        ns.par_iter()
            .map(|&n| {
                let mut s = CheckSummary::default();
                match check_n(spec, n, &mut s) {
                    Ok(()) => Ok(s),
                    Err(e) => {
                        s.record(&format!("n={n} pipeline"), Err(e.to_string()));
                        Ok(s)
                    }
                }
            })
            .collect()
    });
    for s in per_n {
        summary.results.extend(s?.results);
    }
    Ok(summary)
}

pub fn check(cfg: &ExperimentConfig) -> Result<CheckSummary> {
    let spec = load_spec(&cfg.spec_path)?;
    check_on(&spec, cfg)
}

/// Natural-log interval of a rational enclosure of positive numbers; a
/// convenience for reports and tests.
pub fn log_of(x: &RationalEnclosure) -> Result<LogInterval> {
    crate::logs::ln_enclosure(x)
}
