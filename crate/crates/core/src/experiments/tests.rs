use super::*;
use crate::fock::{ModeRegistry, PureState};
use crate::source::singlet_term;
use proptest::prelude::*;

fn deg(i: usize, grid: &[f64]) -> f64 {
    grid[i].to_degrees()
}

/// Closed form of the four-fold visibility of the two-component model.
fn v_model(alpha: f64) -> f64 {
    (3.0 + alpha) / (9.0 - 5.0 * alpha)
}

#[test]
fn fig2_minima_hv_and_pm() {
    let grid = fig2_grid();
    assert_eq!(grid.len(), 361);
    let psi = Ensemble::pure(singlet_term(2));
    for (basis, want) in [
        ("hv", vec![-67.5, -22.5, 22.5, 67.5]),
        ("pm", vec![-90.0, -45.0, 0.0, 45.0, 90.0]),
    ] {
        let s = visibility_scan(&psi, &fixed_basis(basis).unwrap(), &grid).unwrap();
        let four = s.series("fourfold").unwrap();
        let mins: Vec<f64> = four.argmin(1e-12).iter().map(|&i| deg(i, &grid)).collect();
        assert_eq!(mins, want, "{basis}");
        for &i in &four.argmin(1e-12) {
            assert!(four.values[i] <= 1e-12);
        }
        assert!((four.visibility() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn two_photons_never_fourfold() {
    let r = ModeRegistry::ab();
    let s = Ensemble::pure(PureState::basis(r, vec![1, 0, 1, 0]).unwrap());
    let scan = visibility_scan(&s, &fixed_basis("hv").unwrap(), &fig2_grid()).unwrap();
    assert!(scan.series("fourfold").unwrap().values.iter().all(|&p| p == 0.0));
    assert_eq!(scan.series("fourfold").unwrap().visibility(), 0.0);
}

#[test]
fn empty_or_unsorted_grid() {
    let psi = Ensemble::pure(singlet_term(2));
    let hv = fixed_basis("hv").unwrap();
    assert!(visibility_scan(&psi, &hv, &[]).is_err());
    assert!(visibility_scan(&psi, &hv, &[0.2, 0.1]).is_err());
    assert!(fixed_basis("xy").is_err());
}

#[test]
fn fringes_pm_max_rl_min() {
    let grid = fig3_grid();
    let src = fringe_source();
    let pm = fringe_scan(&src, NoonBasis::Pm, &grid).unwrap();
    let rl = fringe_scan(&src, NoonBasis::Rl, &grid).unwrap();
    let f_pm = pm.series("fourfold").unwrap();
    let f_rl = rl.series("fourfold").unwrap();
    assert!(f_pm.argmax(1e-15).contains(&0));
    assert!(f_rl.argmin(1e-15).contains(&0));
    // Quarter period of the doubled frequency: pm at theta equals rl at
    // theta + pi/2.
    for k in 0..grid.len() {
        let j = (k + 180) % grid.len();
        assert!((f_pm.values[k] - f_rl.values[j]).abs() < 1e-12);
    }
}

#[test]
fn fringe_periods() {
    let src = fringe_source();
    for basis in [NoonBasis::Pm, NoonBasis::Rl] {
        for k in 0..24 {
            let t = k as f64 * PI / 12.0;
            let (f0, g0) = fringe_point(&src, basis, t).unwrap();
            let (f1, _) = fringe_point(&src, basis, t + PI).unwrap();
            let (_, g2) = fringe_point(&src, basis, t + 2.0 * PI).unwrap();
            assert!((f0 - f1).abs() < 1e-10);
            assert!((g0 - g2).abs() < 1e-10);
        }
        // The two-fold series is not pi-periodic.
        let shift = (0..8)
            .map(|k| {
                let t = k as f64 * PI / 8.0;
                (fringe_point(&src, basis, t).unwrap().1 - fringe_point(&src, basis, t + PI).unwrap().1).abs()
            })
            .fold(0.0, f64::max);
        assert!(shift > 1e-4);
    }
}

#[test]
fn alpha_curve_matches_closed_form() {
    let curve = alpha_visibility_curve(&alpha_grid(11)).unwrap();
    for &(a, v) in &curve {
        assert!((v - v_model(a)).abs() < 1e-10, "alpha {a}: {v} vs {}", v_model(a));
    }
    assert!((curve[10].1 - 1.0).abs() < 1e-10);
    assert!(curve.windows(2).all(|w| w[1].1 > w[0].1));
}

#[test]
fn alpha_inversion() {
    let curve = alpha_visibility_curve(&alpha_grid(ALPHA_GRID_POINTS)).unwrap();
    assert!((alpha_from_visibility(1.0, &curve).unwrap() - 1.0).abs() < 1e-12);
    let a = alpha_from_visibility(0.79, &curve).unwrap();
    // Exact inverse of the closed form: alpha = (9V - 3) / (1 + 5V).
    assert!((a - (9.0 * 0.79 - 3.0) / (1.0 + 5.0 * 0.79)).abs() < 1e-3);
    match alpha_from_visibility(0.2, &curve) {
        Err(Error::OutOfModelRange { lo, hi, .. }) => {
            assert!((lo - 1.0 / 3.0).abs() < 1e-10);
            assert!((hi - 1.0).abs() < 1e-10);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn pair_ratio_values() {
    for tau in [0.1f64, 0.2] {
        let r = pair_ratio_report(tau).unwrap();
        assert!((r.ratio - 4.0 / 3.0 * tau.tanh().powi(2)).abs() < 1e-12);
    }
    assert!(pair_ratio_report(0.1).unwrap().ratio < 0.02);
    assert!(pair_ratio_report(1e-4).unwrap().ratio < 1e-7);
    assert!(pair_ratio_report(0.0).is_err());
}

#[test]
fn grids() {
    assert_eq!(uniform_grid(0.0, 1.0, 5, true), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    assert_eq!(uniform_grid(0.0, 1.0, 4, false), vec![0.0, 0.25, 0.5, 0.75]);
    assert_eq!(fig3_grid().len(), 720);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn scan_probabilities_bounded(alpha in 0.0..=1.0f64, t in -PI..PI) {
        let e = partially_distinguishable_two_pairs(DistinguishabilityModel::new(alpha).unwrap()).unwrap();
        let (four, two) = visibility_point(&e, &fixed_basis("pm").unwrap(), t).unwrap();
        prop_assert!((0.0..=1.0).contains(&four));
        prop_assert!((0.0..=1.0).contains(&two));
        prop_assert!(four <= two + 1e-15);
    }

    #[test]
    fn fourfold_below_herald(t in 0.0..2.0 * PI) {
        let src = fringe_source();
        for basis in [NoonBasis::Pm, NoonBasis::Rl] {
            let herald = crate::herald::herald_noon2(&src, basis).unwrap().probability;
            let (four, _) = fringe_point(&src, basis, t).unwrap();
            prop_assert!(four <= herald + 1e-15);
            prop_assert!(four.is_sign_positive());
        }
    }
}
