use adopt::market::{
    read_market_csv, revenue_analysis, run_scenario, simulate_options, simulate_rtb, write_ledger_csv, MarketModel,
    OptionTerms, ScenarioConfig,
};

const MARKET: &str = "date,avg_cpm,supply\n2013-02-08,0.9585,8298\n2013-02-09,0.8211,8277\n2013-02-10,1.2,8100\n";

#[test]
fn rtb_spends_within_budget() {
    let days = read_market_csv(MARKET.as_bytes()).unwrap();
    let ledger = simulate_rtb(5.0, &days, 0.03).unwrap();
    for (r, d) in ledger.rows.iter().zip(&days) {
        assert!(r.spend <= 5.0 + 1e-12);
        assert_eq!(r.impressions, ((5.0 / (d.avg_cpm / 1000.0)) as u64).min(d.supply));
        assert_eq!(r.clicks, (r.impressions as f64 * 0.03 + 1e-9) as u64);
    }
    let mut buf = Vec::new();
    write_ledger_csv(&ledger, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 5);
}

#[test]
fn options_dominate_when_in_the_money() {
    let days = read_market_csv(MARKET.as_bytes()).unwrap();
    // Every day's click value exceeds the strike.
    let terms = OptionTerms::uniform(0.001, days.len(), 0.02);
    let rtb = simulate_rtb(5.0, &days, 0.03).unwrap();
    let opt = simulate_options(5.0, &days, 0.03, &terms).unwrap();
    assert!(opt.totals.clicks >= rtb.totals.clicks);
    assert!(opt.cost_per_click() <= rtb.cost_per_click());
    assert!(opt.rows.iter().all(|r| r.options_exercised <= r.options_held));
}

#[test]
fn zero_sell_ratio_is_pure_auction() {
    let days = read_market_csv(MARKET.as_bytes()).unwrap();
    let r = revenue_analysis(&days, 0.03, 0.0, &OptionTerms::uniform(0.001, 3, 0.02)).unwrap();
    for (row, d) in r.series.iter().zip(&days) {
        assert!((row.revenue - d.supply as f64 * d.avg_cpm / 1000.0).abs() < 1e-12);
    }
}

#[test]
fn scenarios_are_reproducible() {
    let mut cfg = ScenarioConfig::new(MarketModel::Sv {
        sigma0: 0.5,
        kappa: 3.0,
        theta: 0.75,
        delta: 0.35,
        mu: 0.5,
    });
    cfg.seed = 21;
    let a = run_scenario(&cfg).unwrap();
    assert_eq!(a, run_scenario(&cfg).unwrap());
    cfg.seed = 22;
    assert_ne!(a.days, run_scenario(&cfg).unwrap().days);
}
