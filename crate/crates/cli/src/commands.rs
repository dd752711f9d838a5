use rss_entropy::dataset;
use rss_entropy::distributions::{fit_inverse_gaussian, fit_inverse_gaussian_mle, fit_normal, ig_cdf, sample, STANDARD_NORMAL};
use rss_entropy::monte_carlo::{
    critical_value, empirical_power_real_data, estimator_error_table, mc_p_value, mse_trend,
    observation_from_data, power, WindowRule,
};
use rss_entropy::normality::{ad_statistic, ks_statistic, testing_window};
use rss_entropy::report::RunHeader;
use rss_entropy::rng::derive_seed;
use rss_entropy::smoothing::moving_average_smooth;
use rss_entropy::{
    default_window, estimate, test_statistic, EntropyError, McConfig, McReport, SamplingMode, SeededStream,
    SortedSample, TestKind,
};
use serde::Serialize;

use crate::args::*;
use crate::input::{jitter, read_values};

/// Seed used by `real-data` when `--seed` is not given.
pub const REAL_DATA_SEED: u64 = 20_141_015;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(EntropyError),
    Io(String),
}

impl From<EntropyError> for CliError {
    fn from(e: EntropyError) -> Self {
        CliError::Compute(e)
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Serialize)]
pub struct SmoothRow {
    pub index: usize,
    pub raw: f64,
    pub smoothed: f64,
}

pub enum Body {
    Reports(Vec<McReport>),
    Smooth(Vec<SmoothRow>),
}

pub struct Output {
    pub header: RunHeader,
    pub body: Body,
    pub format: OutputArgs,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require_seed(seed: Option<u64>, what: &str) -> CliResult<u64> {
    seed.ok_or_else(|| usage(format!("--seed is required for {what}")))
}

fn check_width(w: usize) -> CliResult<()> {
    if w < 3 || w.is_multiple_of(2) {
        return Err(usage(format!("--w must be an odd integer >= 3, got {w}")));
    }
    Ok(())
}

fn check_mc(alpha: f64, reps: usize, w: usize) -> CliResult<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(usage(format!("--alpha must lie in (0,1), got {alpha}")));
    }
    if reps < 100 {
        return Err(usage(format!("--reps must be >= 100, got {reps}")));
    }
    check_width(w)
}

fn valid_window(kind: TestKind, n: usize, m: usize) -> bool {
    match kind {
        TestKind::Ks | TestKind::Ad => true,
        TestKind::Tve | TestKind::TveR => m >= 1 && m < n,
        _ => m >= 1 && 2 * m < n,
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn mc_config(n: usize, m: usize, mc: &McArgs, seed: u64) -> McConfig {
    McConfig::new(n, m, seed)
        .with_alpha(mc.alpha)
        .with_replicates(mc.reps)
        .with_width(mc.w)
        .with_mode(mc.mode.into())
}

/// Size implied by the data: `sqrt(len)` for a full grid, `len` otherwise.
fn data_size(len: usize, rss: bool, mode: SamplingMode) -> CliResult<usize> {
    if rss && mode == SamplingMode::FullGrid {
        let n = (len as f64).sqrt().round() as usize;
        if n * n != len {
            return Err(usage(format!(
                "--mode full needs n*n input values (one grid), got {len}; use --mode bootstrap for a single sample"
            )));
        }
        Ok(n)
    } else {
        Ok(len)
    }
}

pub fn run(cmd: Command) -> CliResult<Output> {
    match cmd {
        Command::Estimate(a) => cmd_estimate(a),
        Command::CriticalValues(a) => cmd_critical(a),
        Command::Power(a) => cmd_power(a),
        Command::RmseTable(a) => cmd_rmse(a),
        Command::MseTrend(a) => cmd_trend(a),
        Command::NormalityTest(a) => cmd_normality(a),
        Command::RealData(a) => cmd_real_data(a),
        Command::SmoothDemo(a) => cmd_smooth(a),
    }
}

fn reports(header: RunHeader, rows: Vec<McReport>, format: OutputArgs) -> CliResult<Output> {
    Ok(Output { header, body: Body::Reports(rows), format })
}

fn cmd_estimate(a: EstimateArgs) -> CliResult<Output> {
    check_width(a.w)?;
    let mut values = read_values(&a.input).map_err(CliError::Io)?;
    let rss = a.estimator.uses_rss();
    let mode: SamplingMode = a.mode.into();
    let randomized = a.jitter || (rss && mode == SamplingMode::Bootstrap);
    let seed = if randomized {
        Some(require_seed(a.seed, "bootstrap RSS estimates and --jitter")?)
    } else {
        a.seed
    };
    let mut header = RunHeader::new().field("seed", seed.map_or("none".into(), |s| s.to_string()));
    let jitter_scale = if a.jitter { Some(jitter(&mut values, seed.unwrap_or(0))) } else { None };
    let n = data_size(values.len(), rss, mode)?;
    if let Some(expected) = a.n {
        if expected != n {
            return Err(usage(format!("--n {expected} does not match the data (n = {n})")));
        }
    }
    let m = match a.m {
        Some(m) => m,
        None => default_window(n)?,
    };
    header = header
        .field("n", n)
        .field("m", m)
        .field("w", a.w)
        .field("mode", if rss { mode.as_str() } else { "plain" })
        .field("estimator", a.estimator);
    if let Some(s) = jitter_scale {
        header = header.field("jitter", s);
    }
    let obs = observation_from_data(&values, rss, a.w, mode, seed.unwrap_or(0))?;
    let h = estimate(a.estimator, &obs, m)?;
    let row = McReport::point(a.estimator.as_str(), n, m, a.w, seed.unwrap_or(0), h);
    reports(header, vec![row], a.out)
}

fn cmd_critical(a: CriticalArgs) -> CliResult<Output> {
    check_mc(a.mc.alpha, a.mc.reps, a.mc.w)?;
    let seed = require_seed(a.mc.seed, "critical-values")?;
    let mut cells = Vec::new();
    for &n in &a.n {
        let ms: Vec<usize> = if !a.stat.uses_window() {
            vec![0]
        } else if a.m.is_empty() {
            vec![testing_window(n)?.m]
        } else {
            a.m.clone()
        };
        for m in ms {
            cells.push((n, m));
        }
    }
    let valid: Vec<(usize, usize)> = cells.iter().copied().filter(|&(n, m)| valid_window(a.stat, n, m)).collect();
    if valid.is_empty() || (cells.len() == 1 && valid.len() != 1) {
        return Err(usage(format!(
            "--m: no valid window for {} at n = {} (need m < n/2, or m < n for tve and tve_r)",
            a.stat,
            join(&a.n)
        )));
    }
    let mut rows = Vec::new();
    for (n, m) in &valid {
        rows.push(critical_value(a.stat, &mc_config(*n, *m, &a.mc, seed))?);
    }
    let header = RunHeader::new()
        .field("seed", seed)
        .field("n", join(&a.n))
        .field("m", join(&valid.iter().map(|c| c.1).collect::<Vec<_>>()))
        .field("w", a.mc.w)
        .field("mode", SamplingMode::from(a.mc.mode))
        .field("stat", a.stat)
        .field("quantile", "order_stat_ceil_alpha_reps")
        .field("sigma", if a.stat.uses_rss() { "diagonal" } else { "sample" });
    reports(header, rows, a.out)
}

fn cmd_power(a: PowerArgs) -> CliResult<Output> {
    check_mc(a.mc.alpha, a.mc.reps, a.mc.w)?;
    let seed = require_seed(a.mc.seed, "power")?;
    let mut rows = Vec::new();
    let mut ms = Vec::new();
    for &n in &a.n {
        let m = if !a.stat.uses_window() {
            0
        } else {
            match a.m {
                Some(m) => m,
                None => testing_window(n)?.m,
            }
        };
        if !valid_window(a.stat, n, m) {
            return Err(usage(format!("--m {m} is not a valid window for {} at n = {n}", a.stat)));
        }
        ms.push(m);
        let cfg = mc_config(n, m, &a.mc, seed);
        let crit = critical_value(a.stat, &cfg)?;
        let mut p = power(a.stat, &a.alt, &cfg, crit.value)?;
        let mut c = crit;
        c.kind = format!("{}:critical", a.stat);
        rows.push(c);
        p.kind = a.stat.as_str().to_string();
        rows.push(p);
    }
    let header = RunHeader::new()
        .field("seed", seed)
        .field("n", join(&a.n))
        .field("m", join(&ms))
        .field("w", a.mc.w)
        .field("mode", SamplingMode::from(a.mc.mode))
        .field("stat", a.stat)
        .field("alt", a.alt);
    reports(header, rows, a.out)
}

fn cmd_rmse(a: RmseArgs) -> CliResult<Output> {
    check_mc(a.mc.alpha, a.mc.reps, a.mc.w)?;
    let seed = require_seed(a.mc.seed, "rmse-table")?;
    if a.alt.true_entropy().is_none() {
        return Err(usage(format!("--alt {} has no analytic entropy (use exp, normal or unif)", a.alt)));
    }
    let mut rows = Vec::new();
    let mut ms = Vec::new();
    for &n in &a.n {
        let m = match a.m {
            Some(m) => m,
            None => default_window(n)?,
        };
        ms.push(m);
        for &est in &a.estimator {
            rows.push(estimator_error_table(est, &a.alt, &mc_config(n, m, &a.mc, seed))?);
        }
    }
    let header = RunHeader::new()
        .field("seed", seed)
        .field("n", join(&a.n))
        .field("m", join(&ms))
        .field("w", a.mc.w)
        .field("mode", SamplingMode::from(a.mc.mode))
        .field("estimator", join(&a.estimator))
        .field("dist", a.alt);
    reports(header, rows, a.out)
}

fn cmd_trend(a: TrendArgs) -> CliResult<Output> {
    check_mc(a.mc.alpha, a.mc.reps, a.mc.w)?;
    let seed = require_seed(a.mc.seed, "mse-trend")?;
    if a.alt.true_entropy().is_none() {
        return Err(usage(format!("--alt {} has no analytic entropy (use exp, normal or unif)", a.alt)));
    }
    if !a.b.is_finite() {
        return Err(usage("--b must be finite"));
    }
    let rule = a.m.map_or(WindowRule::Heuristic, WindowRule::Fixed);
    let cfg = mc_config(a.n[0], 1, &a.mc, seed);
    let points = mse_trend(a.estimator, &a.alt, &a.n, a.b, rule, &cfg)?;
    let rows: Vec<McReport> = points
        .iter()
        .map(|p| {
            let mut r = McReport::point(a.estimator.as_str(), p.n, p.m, a.mc.w, seed, p.scaled);
            r.replicates = a.mc.reps;
            r.std_error = p.std_error;
            r.rmse = Some(p.mse.sqrt());
            r
        })
        .collect();
    let header = RunHeader::new()
        .field("seed", seed)
        .field("n", join(&a.n))
        .field("m", join(&points.iter().map(|p| p.m).collect::<Vec<_>>()))
        .field("w", a.mc.w)
        .field("mode", SamplingMode::from(a.mc.mode))
        .field("estimator", a.estimator)
        .field("dist", a.alt)
        .field("b", a.b)
        .field("value", "mse*n^b");
    reports(header, rows, a.out)
}

fn cmd_normality(a: NormalityArgs) -> CliResult<Output> {
    check_mc(a.alpha, a.reps, a.w)?;
    let seed = require_seed(a.seed, "normality-test")?;
    let mut values = read_values(&a.input).map_err(CliError::Io)?;
    let jitter_scale = if a.jitter { Some(jitter(&mut values, seed)) } else { None };
    let rss = a.stat.uses_rss();
    let mode: SamplingMode = a.mode.into();
    let n = data_size(values.len(), rss, mode)?;
    let window = testing_window(n)?;
    let m = if !a.stat.uses_window() { 0 } else { a.m.unwrap_or(window.m) };
    if !valid_window(a.stat, n, m) {
        return Err(usage(format!("--m {m} is not a valid window for {} at n = {n}", a.stat)));
    }
    let obs = observation_from_data(&values, rss, a.w, mode, seed)?;
    let observed = test_statistic(a.stat, &obs, m)?;
    let cfg = McConfig::new(n, m, seed)
        .with_alpha(a.alpha)
        .with_replicates(a.reps)
        .with_width(a.w)
        .with_mode(mode);
    let mut crit = critical_value(a.stat, &cfg)?;
    let mut p = mc_p_value(a.stat, observed, &cfg)?;
    let reject = a.stat.rejects(observed, crit.value);
    let name = a.stat.as_str();
    let mut stat_row = McReport::point(format!("{name}:statistic"), n, m, a.w, seed, observed);
    stat_row.alpha = Some(a.alpha);
    crit.kind = format!("{name}:critical");
    p.kind = format!("{name}:p_value");
    let mut reject_row = McReport::point(format!("{name}:reject"), n, m, a.w, seed, if reject { 1.0 } else { 0.0 });
    reject_row.alpha = Some(a.alpha);
    reject_row.replicates = a.reps;
    let mut header = RunHeader::new()
        .field("seed", seed)
        .field("n", n)
        .field("m", m)
        .field("w", a.w)
        .field("mode", if rss { mode.as_str() } else { "plain" })
        .field("stat", a.stat)
        .field("null", "normal")
        .field("sigma", if rss { "diagonal" } else { "sample" });
    if window.extrapolated && a.m.is_none() {
        header = header.field("warning", "window_extrapolated_beyond_n100");
    }
    if let Some(s) = jitter_scale {
        header = header.field("jitter", s);
    }
    reports(header, vec![stat_row, crit, p, reject_row], a.out)
}

fn cmd_real_data(a: RealDataArgs) -> CliResult<Output> {
    check_mc(0.05, a.reps, a.w)?;
    let data = dataset::repair_times()?;
    let n = data.len();
    let seed = a.seed;
    let stats: Vec<TestKind> = match a.stat {
        Some(s) if s.uses_window() => vec![s],
        Some(s) => return Err(usage(format!("--stat {s} is not an entropy statistic"))),
        None => vec![TestKind::Tv, TestKind::Tve, TestKind::Tc, TestKind::TwR],
    };
    for &s in &stats {
        if !valid_window(s, n, a.m) {
            return Err(usage(format!("--m {} is not a valid window for {s} at n = {n}", a.m)));
        }
    }
    let (mu, sigma) = fit_normal(data)?;
    let (_, lambda) = fit_inverse_gaussian(data)?;
    let (mu_mle, lambda_mle) = fit_inverse_gaussian_mle(data)?;
    let point = |kind: &str, v: f64| McReport::point(kind, n, 0, a.w, seed, v);
    let mut rows = vec![
        point("fit:mu_hat", mu),
        point("fit:sigma_hat", sigma),
        point("fit:lambda_hat", lambda),
        point("fit:lambda_mle", lambda_mle),
    ];
    let cdf = |x: f64| ig_cdf(x, mu_mle, lambda_mle).unwrap_or(f64::NAN);
    rows.push(point("ks", ks_statistic(data, cdf)?));
    rows.push(point("ad", ad_statistic(data, cdf)?));
    for &kind in &stats {
        let mode = if kind.uses_rss() { SamplingMode::Bootstrap } else { SamplingMode::FullGrid };
        let obs = observation_from_data(data, kind.uses_rss(), a.w, SamplingMode::Bootstrap, seed)?;
        let observed = test_statistic(kind, &obs, a.m)?;
        let mut s = McReport::point(format!("{kind}:statistic"), n, a.m, a.w, seed, observed);
        s.alpha = None;
        rows.push(s);
        let cfg = McConfig::new(n, a.m, seed)
            .with_replicates(a.reps)
            .with_width(a.w)
            .with_mode(mode);
        let mut p = mc_p_value(kind, observed, &cfg)?;
        p.kind = format!("{kind}:p_value");
        p.alpha = None;
        rows.push(p);
        let sizes: Vec<usize> = if !a.n.is_empty() {
            a.n.clone()
        } else if kind == TestKind::TwR {
            vec![15]
        } else {
            vec![15, 45]
        };
        for n_fit in sizes {
            if !valid_window(kind, n_fit, a.m) {
                return Err(usage(format!("--n {n_fit} is too small for window m = {}", a.m)));
            }
            let cfg = McConfig { n: n_fit, ..cfg };
            let mut r = empirical_power_real_data(data, kind, &cfg)?.report;
            r.kind = format!("{kind}:power");
            r.alpha = None;
            rows.push(r);
        }
    }
    let header = RunHeader::new()
        .field("seed", seed)
        .field("n", n)
        .field("m", a.m)
        .field("w", a.w)
        .field("mode", "bootstrap")
        .field("stats", join(&stats))
        .field("ks_ad_fit", "ig_mle")
        .field("power_alt", "ig_moment_fit")
        .field("null", "normal");
    reports(header, rows, a.out)
}

fn cmd_smooth(a: SmoothArgs) -> CliResult<Output> {
    check_width(a.w)?;
    let seed = require_seed(a.seed, "smooth-demo")?;
    if a.n < 3 {
        return Err(usage(format!("--n must be >= 3, got {}", a.n)));
    }
    if a.w >= a.n {
        return Err(usage(format!("--w {} must be smaller than --n {}", a.w, a.n)));
    }
    let x = sample(&STANDARD_NORMAL, a.n, SeededStream::new(derive_seed(seed, "smooth-demo"), 0))?;
    let s = SortedSample::new(x)?;
    let path = moving_average_smooth(&s, a.w)?;
    let rows = s
        .values()
        .iter()
        .zip(path.values())
        .enumerate()
        .map(|(i, (&raw, &smoothed))| SmoothRow { index: i + 1, raw, smoothed })
        .collect();
    let header = RunHeader::new()
        .field("seed", seed)
        .field("n", a.n)
        .field("m", "none")
        .field("w", a.w)
        .field("mode", "plain");
    Ok(Output { header, body: Body::Smooth(rows), format: a.out })
}
