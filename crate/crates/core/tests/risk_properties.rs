use proptest::prelude::*;
use sts_core::{evaluate_risk, worst_case_reweighting, EmpiricalDistribution, RiskParams};

fn losses_and_weights() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..30).prop_flat_map(|n| {
        (
            prop::collection::vec(-10.0f64..10.0, n),
            prop::collection::vec(0.01f64..1.0, n),
        )
    })
}

fn dist(losses: Vec<f64>, raw: &[f64]) -> EmpiricalDistribution {
    let total: f64 = raw.iter().sum();
    EmpiricalDistribution::new(losses, raw.iter().map(|w| w / total).collect()).unwrap()
}

fn rho(losses: &[f64], raw: &[f64], kappa: f64) -> f64 {
    evaluate_risk(
        &dist(losses.to_vec(), raw),
        &RiskParams::new(kappa).unwrap(),
    )
}

proptest! {
    #[test]
    fn monotone((z, w) in losses_and_weights(), kappa in 0.0f64..=1.0, bump in prop::collection::vec(0.0f64..3.0, 30)) {
        let bigger: Vec<f64> = z.iter().zip(&bump).map(|(a, b)| a + b).collect();
        prop_assert!(rho(&z, &w, kappa) <= rho(&bigger, &w, kappa) + 1e-12);
    }

    #[test]
    fn translation_equivariant((z, w) in losses_and_weights(), kappa in 0.0f64..=1.0, c in -5.0f64..5.0) {
        let shifted: Vec<f64> = z.iter().map(|v| v + c).collect();
        prop_assert!((rho(&shifted, &w, kappa) - rho(&z, &w, kappa) - c).abs() < 1e-10);
    }

    #[test]
    fn positively_homogeneous((z, w) in losses_and_weights(), kappa in 0.0f64..=1.0, t in 0.0f64..5.0) {
        let scaled: Vec<f64> = z.iter().map(|v| v * t).collect();
        prop_assert!((rho(&scaled, &w, kappa) - t * rho(&z, &w, kappa)).abs() < 1e-10);
    }

    #[test]
    fn convex((z, w) in losses_and_weights(), other in prop::collection::vec(-10.0f64..10.0, 30),
              kappa in 0.0f64..=1.0, lam in 0.0f64..=1.0) {
        let y = &other[..z.len()];
        let mix: Vec<f64> = z.iter().zip(y).map(|(a, b)| lam * a + (1.0 - lam) * b).collect();
        let bound = lam * rho(&z, &w, kappa) + (1.0 - lam) * rho(y, &w, kappa);
        prop_assert!(rho(&mix, &w, kappa) <= bound + 1e-10);
    }

    #[test]
    fn between_mean_and_max((z, w) in losses_and_weights(), kappa in 0.0f64..=1.0) {
        let d = dist(z.clone(), &w);
        let r = evaluate_risk(&d, &RiskParams::new(kappa).unwrap());
        let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(r >= d.mean() - 1e-12);
        prop_assert!(r <= max + 1e-10);
        if kappa == 0.0 {
            prop_assert_eq!(r, d.mean());
        }
    }

    #[test]
    fn reweighting_is_an_admissible_density((z, w) in losses_and_weights(), kappa in 0.0f64..=1.0) {
        let d = dist(z.clone(), &w);
        let re = worst_case_reweighting(&d, &RiskParams::new(kappa).unwrap());
        let mass: f64 = re.density.iter().zip(d.weights()).map(|(m, p)| m * p).sum();
        prop_assert!((mass - 1.0).abs() < 1e-12);
        prop_assert!(re.density.iter().all(|&m| m >= 1.0 - kappa - 1e-12 && m <= 1.0 + kappa + 1e-12));
        let value: f64 = re.density.iter().zip(d.weights()).zip(&z).map(|((m, p), v)| m * p * v).sum();
        prop_assert!((value - re.value).abs() < 1e-10);
    }
}
