//! Shapiro-Wilk normality test with Royston's (1995, AS R94) coefficient and
//! p-value approximations.

use crate::error::{Error, Result};
use crate::normal;

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &k| acc * x + k)
}

/// Coefficients for the upper half of the ordered sample, largest first.
fn half_coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let an = n as f64;
    let m: Vec<f64> = (1..=half)
        .map(|i| -normal::quantile((i as f64 - 0.375) / (an + 0.25)))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();
    let a1 = poly(&C1, rsn) + m[0] / ssumm2;

    let mut a = vec![0.0; half];
    let (first, fac) = if n > 5 {
        let a2 = poly(&C2, rsn) + m[1] / ssumm2;
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2)).sqrt();
        a[1] = a2;
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    a[0] = a1;
    for i in first..half {
        a[i] = m[i] / fac;
    }
    a
}

/// Shapiro-Wilk `(W, p)` for `3 <= n <= 5000` observations.
pub fn shapiro_wilk(sample: &[f64]) -> Result<(f64, f64)> {
    let n = sample.len();
    if n < 3 {
        return Err(Error::TooShort { required: 3, got: n });
    }
    if n > 5000 {
        return Err(Error::Domain(format!("Shapiro-Wilk supports at most 5000 observations, got {n}")));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("sample contains non-finite values".into()));
    }
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if !(range > f64::EPSILON * x[n - 1].abs().max(x[0].abs())) {
        return Err(Error::Degenerate("Shapiro-Wilk needs a non-constant sample".into()));
    }

    let half = half_coefficients(n);
    let mean = x.iter().sum::<f64>() / n as f64;
    let ss: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    let b: f64 = half
        .iter()
        .enumerate()
        .map(|(i, a)| a * (x[n - 1 - i] - x[i]))
        .sum();
    let w = (b * b / ss).min(1.0);
    Ok((w, p_value(w, n)))
}

fn p_value(w: f64, n: usize) -> f64 {
    let an = n as f64;
    if n == 3 {
        let p = 6.0 / std::f64::consts::PI * (w.sqrt().asin() - (0.75f64).sqrt().asin());
        return p.clamp(0.0, 1.0);
    }
    let w1 = 1.0 - w;
    if w1 <= 0.0 {
        return 1.0;
    }
    let mut y = w1.ln();
    let (m, s) = if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return 0.0;
        }
        y = -(gamma - y).ln();
        (poly(&C3, an), poly(&C4, an).exp())
    } else {
        let ln_n = an.ln();
        (poly(&C5, ln_n), poly(&C6, ln_n).exp())
    };
    normal::sf((y - m) / s)
}

#[cfg(test)]
mod tests {
    use super::*;

    // (sample, W, p) from an independent reference implementation.
    fn reference() -> Vec<(Vec<f64>, f64, f64)> {
        vec![
            (vec![1.0, 2.0, 4.0], 0.964_285_714_285_714_2, 0.636_886_845_028_968_9),
            (vec![2.1, 3.4, 1.9, 5.6, 4.4], 0.932_084_939_195_386_3, 0.610_655_902_260_484_5),
            (
                vec![148.0, 154.0, 158.0, 160.0, 161.0, 162.0, 166.0, 170.0, 182.0, 195.0, 236.0],
                0.788_814_694_863_171_6,
                0.006_703_814_061_898_823,
            ),
            (
                vec![
                    0.139, 0.157, 0.175, 0.256, 0.344, 0.413, 0.503, 0.577, 0.614, 0.655, 0.954, 1.392, 1.557, 1.648,
                    1.690, 1.994, 2.174, 2.206, 3.245, 3.510,
                ],
                0.882_705_495_990_219_5,
                0.019_796_560_366_237_93,
            ),
        ]
    }

    #[test]
    fn matches_reference_vectors() {
        for (x, w, p) in reference() {
            let (gw, gp) = shapiro_wilk(&x).unwrap();
            assert!((gw - w).abs() < 1e-6, "n = {}: W {gw} vs {w}", x.len());
            assert!((gp - p).abs() < 1e-5, "n = {}: p {gp} vs {p}", x.len());
        }
    }

    #[test]
    fn affine_invariance() {
        let x = &reference()[3].0;
        let (w, _) = shapiro_wilk(x).unwrap();
        let y: Vec<f64> = x.iter().map(|v| 3.5 * v - 100.0).collect();
        assert!((shapiro_wilk(&y).unwrap().0 - w).abs() < 1e-10);
    }

    #[test]
    fn rejects_degenerate() {
        assert!(matches!(shapiro_wilk(&[1.0; 10]), Err(Error::Degenerate(_))));
        assert!(shapiro_wilk(&[1.0, 2.0]).is_err());
        assert!(shapiro_wilk(&vec![0.5; 5001]).is_err());
    }

    #[test]
    fn coefficients_are_unit_norm() {
        for n in [4, 5, 6, 11, 12, 30, 200] {
            let a = half_coefficients(n);
            let norm: f64 = 2.0 * a.iter().map(|v| v * v).sum::<f64>();
            assert!((norm - 1.0).abs() < 1e-12, "n = {n}: {norm}");
            assert!(a.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
