use std::path::Path;

use adopt::diagnostics::{
    estimate_gbm, estimate_sv, gbm_test, histogram, log_ratios, qq_pairs, PriceSeries, SvEstimate,
};
use adopt::fmt::num;
use adopt::gbm::{closed_form_price, convergence_report, lattice_price, write_convergence_csv, LatticeMethod};
use adopt::market::{
    read_market_path, revenue_analysis, run_scenario, simulate_options, simulate_rtb, write_ledger_csv,
    write_revenue_csv, MarketTrend, OptionTerms, RevenueReport, ScenarioConfig, SimulationLedger,
};
use adopt::mc::{mc_price, validation_sweep, McConfig, McResult, Scheme, SweepParam, SweepRow, Verdict};
use adopt::sv::sv_lattice_price;
use adopt::{GbmParams, OptionContract, SvParams};
use anyhow::{anyhow, Context};
use serde::Serialize;

use crate::args::{
    Basis, ContractArgs, ConvergeArgs, DiagnoseArgs, Method, PriceArgs, SimulateArgs, ValidateArgs,
};
use crate::output::{csv_file, emit, in_dir, json};
use crate::{usage, Failure};

type CmdResult = Result<(), Failure>;

fn contract_from(c: &ContractArgs, steps: usize) -> Result<OptionContract, Failure> {
    usage(match c.basis {
        Basis::PerClick => OptionContract::per_click(c.strike, c.ctr, c.expiry, c.rate, steps),
        Basis::PerMille => OptionContract::per_mille(c.strike, c.ctr, c.expiry, c.rate, steps),
    })
}

fn check_lambda(lambda: Option<f64>) -> Result<(), Failure> {
    match lambda {
        Some(l) if !(l.is_finite() && l >= 1.0) => Err(Failure::Usage(format!("lambda must be >= 1, got {l}"))),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct PriceReport {
    method: &'static str,
    contract: OptionContract,
    spot: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sv: Option<SvParams>,
    price: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    monte_carlo: Option<McReport>,
}

#[derive(Serialize)]
struct McReport {
    scheme: Scheme,
    n_paths: usize,
    seed: u64,
    std_error: f64,
    ci_low: f64,
    ci_high: f64,
}

impl McReport {
    fn new(r: &McResult, seed: u64) -> Self {
        McReport {
            scheme: r.scheme,
            n_paths: r.n_paths,
            seed,
            std_error: r.std_error,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
        }
    }
}

pub fn price(a: PriceArgs) -> CmdResult {
    check_lambda(a.lambda)?;
    let contract = contract_from(&a.contract, a.steps)?;
    let c = &a.contract;
    let is_sv = matches!(a.method, Method::SvLattice | Method::McEuler | Method::McMilstein);
    let mut report = PriceReport {
        method: a.method.name(),
        contract,
        spot: c.spot,
        sigma: None,
        lambda: None,
        sv: None,
        price: f64::NAN,
        monte_carlo: None,
    };

    if is_sv {
        let sigma0 = a.sigma0.unwrap_or(c.sigma);
        let sv = usage(SvParams::new(c.spot, sigma0, a.kappa, a.theta.unwrap_or(sigma0), a.delta))?;
        report.sv = Some(sv);
        let scheme = match a.method {
            Method::McEuler => Some(Scheme::Euler),
            Method::McMilstein => Some(Scheme::Milstein),
            _ => None,
        };
        match scheme {
            Some(scheme) => {
                let cfg = usage(McConfig::new(scheme, a.paths, a.seed, a.steps))?;
                let r = mc_price(&sv, &contract, &cfg)?;
                report.price = r.price;
                report.monte_carlo = Some(McReport::new(&r, a.seed));
            }
            None => report.price = sv_lattice_price(&sv, &contract)?,
        }
    } else {
        let params = usage(GbmParams::new(c.spot, c.sigma))?;
        report.sigma = Some(c.sigma);
        report.price = if a.method == Method::Closed {
            closed_form_price(&params, &contract)?
        } else {
            let mut m: LatticeMethod = usage(a.method.name().parse())?;
            if let Some(l) = a.lambda {
                m = m.with_stretch(l);
            }
            if let LatticeMethod::BoyleTrin { lambda } | LatticeMethod::KrTrin { lambda } = m {
                report.lambda = Some(lambda);
            }
            lattice_price(&params, &contract, m)?
        };
    }
    emit(a.out.as_deref(), json(&report)?.as_bytes())?;
    Ok(())
}

pub fn converge(a: ConvergeArgs) -> CmdResult {
    check_lambda(a.lambda)?;
    let methods: Vec<LatticeMethod> = match &a.methods {
        None => LatticeMethod::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(|s| usage(s.parse::<LatticeMethod>()))
            .collect::<Result<_, _>>()?,
    };
    if methods.is_empty() {
        return Err(Failure::Usage("empty method list".into()));
    }
    let methods: Vec<LatticeMethod> = match a.lambda {
        Some(l) => methods.into_iter().map(|m| m.with_stretch(l)).collect(),
        None => methods,
    };
    if a.n.is_empty() || a.n[0] == 0 || a.n.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::Usage("--n must list positive, strictly ascending step counts".into()));
    }
    let contract = contract_from(&a.contract, a.n[0])?;
    let params = usage(GbmParams::new(a.contract.spot, a.contract.sigma))?;
    let rows = convergence_report(&params, &contract, &methods, &a.n)?;
    let mut buf = Vec::new();
    write_convergence_csv(&rows, &mut buf)?;
    emit(a.out.as_deref(), &buf)?;
    Ok(())
}

#[derive(Serialize)]
struct DiagnoseReport {
    observations: usize,
    dt: f64,
    shapiro_w: f64,
    shapiro_p: f64,
    ljung_q: f64,
    ljung_p: f64,
    lags: usize,
    alpha: f64,
    is_gbm: bool,
    /// `None` when the series is too short to estimate.
    gbm_estimate: Option<GbmParams>,
    sv_estimate: Option<SvEstimate>,
}

pub fn diagnose(a: DiagnoseArgs) -> CmdResult {
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(Failure::Usage(format!("alpha must lie in (0, 1), got {}", a.alpha)));
    }
    if a.lags == Some(0) || a.bins == Some(0) {
        return Err(Failure::Usage("--lags and --bins must be >= 1".into()));
    }
    let series = PriceSeries::from_path(&a.input)?;
    let verdict = gbm_test(&series, a.alpha, a.lags)?;
    let ratios = log_ratios(&series);

    let acf_path = in_dir(&a.out_dir, "acf.csv")?;
    csv_file(&acf_path, |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["lag", "acf", "band"])?;
        for p in &verdict.acf {
            w.write_record([p.lag.to_string(), num(p.value), num(p.band)])?;
        }
        w.flush()?;
        Ok(())
    })?;
    csv_file(&in_dir(&a.out_dir, "qq.csv")?, |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["theoretical", "sample"])?;
        for (t, s) in qq_pairs(&ratios) {
            w.write_record([num(t), num(s)])?;
        }
        w.flush()?;
        Ok(())
    })?;
    let bins = histogram(&ratios, a.bins)?;
    csv_file(&in_dir(&a.out_dir, "hist.csv")?, |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["lo", "hi", "count"])?;
        for b in &bins {
            w.write_record([num(b.lo), num(b.hi), b.count.to_string()])?;
        }
        w.flush()?;
        Ok(())
    })?;

    let report = DiagnoseReport {
        observations: series.len(),
        dt: series.dt(),
        shapiro_w: verdict.shapiro_w,
        shapiro_p: verdict.shapiro_p,
        ljung_q: verdict.ljung_q,
        ljung_p: verdict.ljung_p,
        lags: verdict.lags,
        alpha: verdict.alpha,
        is_gbm: verdict.is_gbm,
        gbm_estimate: estimate_gbm(&series).ok(),
        sv_estimate: estimate_sv(&series, a.vol_window).ok(),
    };
    emit(None, json(&report)?.as_bytes())?;
    Ok(())
}

/// Default sweep ranges around the baseline, five points each.
const DEFAULT_SWEEPS: [(SweepParam, f64, f64); 4] = [
    (SweepParam::Sigma0, 0.3, 0.7),
    (SweepParam::Kappa, 1.0, 6.0),
    (SweepParam::Theta, 0.4, 1.1),
    (SweepParam::Delta, 0.1, 0.7),
];

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

/// Parses `param=lo:hi:points`.
fn parse_sweep(spec: &str) -> Result<(SweepParam, Vec<f64>), Failure> {
    let bad = || Failure::Usage(format!("sweep `{spec}` is not of the form param=lo:hi:points"));
    let (name, range) = spec.split_once('=').ok_or_else(bad)?;
    let param: SweepParam = usage(name.trim().parse())?;
    let parts: Vec<&str> = range.split(':').map(str::trim).collect();
    let [lo, hi, points] = parts[..] else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let points: usize = points.parse().map_err(|_| bad())?;
    if points == 0 {
        return Err(Failure::Usage(format!("sweep `{spec}` has zero points")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Failure::Usage(format!("sweep `{spec}` needs finite lo <= hi")));
    }
    Ok((param, linspace(lo, hi, points)))
}

pub fn validate(a: ValidateArgs) -> CmdResult {
    let base = usage(SvParams::new(a.spot, a.sigma0, a.kappa, a.theta, a.delta))?;
    let contract = usage(OptionContract::per_click(a.strike, a.ctr, a.expiry, a.rate, a.steps))?;
    let schemes = match a.scheme.to_ascii_lowercase().as_str() {
        "both" => vec![Scheme::Euler, Scheme::Milstein],
        s => vec![usage(s.parse::<Scheme>())?],
    };
    let grid: Vec<(SweepParam, Vec<f64>)> = if a.sweep.is_empty() {
        DEFAULT_SWEEPS
            .iter()
            .map(|&(p, lo, hi)| (p, linspace(lo, hi, 5)))
            .collect()
    } else {
        a.sweep.iter().map(|s| parse_sweep(s)).collect::<Result<_, _>>()?
    };
    for (param, values) in &grid {
        for &v in values {
            usage(param.apply(&base, v).validate())?;
        }
    }

    let mut rows: Vec<(Scheme, SweepRow)> = Vec::new();
    for scheme in schemes {
        let cfg = usage(McConfig::new(scheme, a.paths, a.seed, a.mc_steps))?;
        rows.extend(validation_sweep(&base, &contract, &cfg, &grid)?.into_iter().map(|r| (scheme, r)));
    }

    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["scheme", "param", "value", "lattice_price", "mc_price", "ci_low", "ci_high", "verdict"])
            .context("writing sweep")?;
        for (scheme, r) in &rows {
            w.write_record([
                scheme.to_string(),
                r.param.name().to_string(),
                num(r.value),
                num(r.lattice_price),
                num(r.mc.price),
                num(r.mc.ci_low),
                num(r.mc.ci_high),
                r.verdict.to_string(),
            ])
            .context("writing sweep")?;
        }
        w.flush().context("writing sweep")?;
    }
    emit(a.out.as_deref(), &buf)?;

    let outside = rows.iter().filter(|(_, r)| r.verdict != Verdict::Contained).count();
    if outside > 0 {
        return Err(Failure::Compute(anyhow!(
            "{outside} of {} grid points lie outside the Monte Carlo confidence interval",
            rows.len()
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct LedgerSummary {
    clicks: u64,
    impressions: u64,
    spend: f64,
    cost_per_click: f64,
}

impl From<&SimulationLedger> for LedgerSummary {
    fn from(l: &SimulationLedger) -> Self {
        LedgerSummary {
            clicks: l.totals.clicks,
            impressions: l.totals.impressions,
            spend: l.totals.spend,
            cost_per_click: l.cost_per_click(),
        }
    }
}

#[derive(Serialize)]
struct RevenueSummary {
    sell_ratio: f64,
    mean: f64,
    std: f64,
    days_used: usize,
}

impl From<&RevenueReport> for RevenueSummary {
    fn from(r: &RevenueReport) -> Self {
        RevenueSummary {
            sell_ratio: r.sell_ratio,
            mean: r.mean,
            std: r.std,
            days_used: r.days_used,
        }
    }
}

#[derive(Serialize)]
struct SimulateSummary {
    days: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    trend: Option<MarketTrend>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spot: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimated: Option<GbmParams>,
    strike_cpc: f64,
    premiums: Vec<f64>,
    rtb: LedgerSummary,
    options: LedgerSummary,
    revenue_without_options: RevenueSummary,
    revenue: RevenueSummary,
}

fn positive(name: &str, v: Option<f64>) -> Result<(), Failure> {
    match v {
        Some(x) if !(x.is_finite() && x >= 0.0) => Err(Failure::Usage(format!("--{name} must be >= 0, got {x}"))),
        _ => Ok(()),
    }
}

fn write_outputs(
    dir: &Path,
    rtb: &SimulationLedger,
    options: &SimulationLedger,
    revenue: &RevenueReport,
) -> anyhow::Result<()> {
    csv_file(&in_dir(dir, "rtb.csv")?, |b| write_ledger_csv(rtb, b))?;
    csv_file(&in_dir(dir, "options.csv")?, |b| write_ledger_csv(options, b))?;
    csv_file(&in_dir(dir, "revenue.csv")?, |b| write_revenue_csv(revenue, b))
}

pub fn simulate(a: SimulateArgs) -> CmdResult {
    positive("budget", a.budget)?;
    positive("premium", a.premium)?;
    positive("strike", a.strike)?;
    if let Some(r) = a.sell_ratio {
        if !(0.0..=1.0).contains(&r) {
            return Err(Failure::Usage(format!("--sell-ratio must lie in [0, 1], got {r}")));
        }
    }
    if let Some(h) = a.ctr {
        if !(h > 0.0 && h <= 1.0) {
            return Err(Failure::Usage(format!("--ctr must lie in (0, 1], got {h}")));
        }
    }
    if a.clicks_per_option == Some(0) {
        return Err(Failure::Usage("--clicks-per-option must be >= 1".into()));
    }

    let summary = if let Some(path) = &a.market {
        let (Some(premium), Some(strike)) = (a.premium, a.strike) else {
            return Err(Failure::Usage("--market needs --premium and --strike".into()));
        };
        let days = read_market_path(path)?;
        let budget = a.budget.unwrap_or(5.0);
        let ctr = a.ctr.unwrap_or(0.03);
        let terms = OptionTerms {
            clicks_per_option: a.clicks_per_option.unwrap_or(1),
            ..OptionTerms::uniform(premium, days.len(), strike)
        };
        let rtb = simulate_rtb(budget, &days, ctr)?;
        let options = simulate_options(budget, &days, ctr, &terms)?;
        let base = revenue_analysis(&days, ctr, 0.0, &terms)?;
        let revenue = revenue_analysis(&days, ctr, a.sell_ratio.unwrap_or(0.2), &terms)?;
        write_outputs(&a.out_dir, &rtb, &options, &revenue)?;
        SimulateSummary {
            days: days.len(),
            trend: None,
            spot: None,
            estimated: None,
            strike_cpc: terms.strike_cpc,
            premiums: terms.premiums.clone(),
            rtb: (&rtb).into(),
            options: (&options).into(),
            revenue_without_options: (&base).into(),
            revenue: (&revenue).into(),
        }
    } else {
        let path = a.scenario.as_ref().expect("clap requires --market or --scenario");
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: ScenarioConfig =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        cfg.seed = a.seed.unwrap_or(cfg.seed);
        cfg.budget = a.budget.unwrap_or(cfg.budget);
        cfg.ctr = a.ctr.unwrap_or(cfg.ctr);
        cfg.sell_ratio = a.sell_ratio.unwrap_or(cfg.sell_ratio);
        cfg.clicks_per_option = a.clicks_per_option.unwrap_or(cfg.clicks_per_option);
        let out = run_scenario(&cfg)?;
        write_outputs(&a.out_dir, &out.rtb, &out.options, &out.revenue)?;
        SimulateSummary {
            days: out.days.len(),
            trend: Some(out.trend),
            spot: Some(out.spot),
            estimated: Some(out.estimated),
            strike_cpc: out.strike_cpc,
            premiums: out.terms.premiums.clone(),
            rtb: (&out.rtb).into(),
            options: (&out.options).into(),
            revenue_without_options: (&out.revenue_base).into(),
            revenue: (&out.revenue).into(),
        }
    };
    emit(None, json(&summary)?.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_specs() {
        let (p, v) = parse_sweep("kappa=1:6:5").unwrap();
        assert_eq!(p, SweepParam::Kappa);
        assert_eq!(v, vec![1.0, 2.25, 3.5, 4.75, 6.0]);
        assert!(matches!(parse_sweep("kappa=1:6:0"), Err(Failure::Usage(_))));
        assert!(matches!(parse_sweep("rho=1:6:3"), Err(Failure::Usage(_))));
        assert!(matches!(parse_sweep("kappa=1:6"), Err(Failure::Usage(_))));
        assert_eq!(parse_sweep("delta=0.2:0.2:1").unwrap().1, vec![0.2]);
    }
}
