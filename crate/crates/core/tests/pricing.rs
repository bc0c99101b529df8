use adopt::gbm::{closed_form_price, convergence_report, lattice_price, LatticeMethod};
use adopt::mc::{mc_price, McConfig, Scheme};
use adopt::sv::sv_lattice_price;
use adopt::{GbmParams, OptionContract, SvParams};
use proptest::prelude::*;

// 50-digit evaluations of the closed form.
const ITM: f64 = 0.001_694_902_675_223_563_3;
const OTM: f64 = 9.262_484_095_210_14e-66;

fn contract(strike: f64, n: usize) -> OptionContract {
    OptionContract::per_click(strike, 0.3, 31.0 / 365.0, 0.05, n).unwrap()
}

#[test]
fn closed_form_golden_values() {
    let p = GbmParams::new(2.0, 0.5).unwrap();
    assert!((closed_form_price(&p, &contract(0.005, 1)).unwrap() / ITM - 1.0).abs() < 1e-12);
    assert!((closed_form_price(&p, &contract(0.075, 1)).unwrap() / OTM - 1.0).abs() < 1e-9);
}

#[test]
fn convergence_report_covers_every_cell() {
    let p = GbmParams::new(2.0, 0.5).unwrap();
    let rows = convergence_report(&p, &contract(0.005, 1), &LatticeMethod::ALL, &[10, 100, 1000]).unwrap();
    assert_eq!(rows.len(), 18);
    for r in &rows {
        let err = r.abs_error.unwrap();
        if r.n == 1000 {
            assert!(err / ITM < 5e-3, "{} {}", r.method, err);
        }
    }
}

#[test]
fn sv_lattice_and_mc_agree_at_constant_vol() {
    let sv = SvParams::new(2.0, 0.5, 0.0, 0.5, 0.0).unwrap();
    let c = contract(0.005, 300);
    let lattice = sv_lattice_price(&sv, &c).unwrap();
    assert!((lattice / ITM - 1.0).abs() < 1e-2);
    let mc = mc_price(&sv, &c, &McConfig::new(Scheme::Milstein, 40_000, 3, 30).unwrap()).unwrap();
    assert!((mc.price - ITM).abs() < 4.0 * mc.std_error);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_prices_within_bounds(
        sigma in 0.05f64..1.5,
        moneyness in 0.5f64..1.5,
        n in 1usize..300,
        idx in 0usize..6,
    ) {
        let p = GbmParams::new(2.0, sigma).unwrap();
        let value = 2.0 / 300.0;
        let c = contract(value * moneyness, n);
        let method = LatticeMethod::ALL[idx];
        if let Ok(price) = lattice_price(&p, &c, method) {
            prop_assert!((0.0..=value + 1e-12).contains(&price), "{price} vs {value}");
            // The forward-intrinsic floor holds only when the lattice mean is risk-neutral.
            if method.matches_first_moment() {
                let lower = (value - c.strike * (-c.rate * c.expiry).exp()).max(0.0);
                prop_assert!(price >= lower - 1e-12, "{price} below {lower}");
            }
        }
    }

    #[test]
    fn sv_price_bounded_by_spot_value(
        sigma0 in 0.05f64..1.5,
        kappa in 0.0f64..50.0,
        theta in 0.05f64..1.5,
        n in 1usize..100,
    ) {
        let sv = SvParams::new(2.0, sigma0, kappa, theta, 0.3).unwrap();
        let price = sv_lattice_price(&sv, &contract(0.006, n)).unwrap();
        prop_assert!((0.0..=2.0 / 300.0 + 1e-12).contains(&price));
    }
}
