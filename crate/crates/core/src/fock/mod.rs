//! Sparse multimode Fock states and ladder-operator actions.

mod ensemble;
pub mod json;
pub mod mode;
mod state;

pub use ensemble::Ensemble;
pub use mode::{ModeLabel, ModeRegistry, Polarization};
pub use state::{OccupationVector, PureState, PRUNE_TOL};

pub(crate) use state::{falling_factorial_sqrt, strip};

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    pub fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn one_mode() -> ModeRegistry {
        ModeRegistry::new([ModeLabel::h("a")]).unwrap()
    }

    pub fn two_modes() -> ModeRegistry {
        ModeRegistry::polarization_pairs(&["a"])
    }

    pub fn ket(reg: &ModeRegistry, occ: &[u16]) -> PureState {
        PureState::basis(reg.clone(), occ.to_vec()).unwrap()
    }

    /// Random unnormalized states on `a_h, a_v, b_h` with at most
    /// `max_photons` photons per mode.
    pub fn arb_state(max_photons: u16) -> impl Strategy<Value = PureState> {
        let reg = ModeRegistry::new([ModeLabel::h("a"), ModeLabel::v("a"), ModeLabel::h("b")])
            .unwrap();
        prop::collection::vec(
            (
                prop::collection::vec(0..=max_photons, 3),
                -1.0f64..1.0,
                -1.0f64..1.0,
            ),
            1..6,
        )
        .prop_map(move |terms| {
            PureState::from_terms(
                reg.clone(),
                terms
                    .into_iter()
                    .map(|(o, re, im)| (OccupationVector::new(o), c(re, im))),
            )
            .unwrap()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;
    use crate::error::Error;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn annihilation_ladder() {
        let r = one_mode();
        let a = ModeLabel::h("a");
        assert!(ket(&r, &[1])
            .apply_annihilation(&a)
            .unwrap()
            .approx_eq(&ket(&r, &[0]), 1e-15));
        let two = ket(&r, &[2]).apply_annihilation(&a).unwrap();
        assert!(two.approx_eq(&ket(&r, &[1]).scale(c(2f64.sqrt(), 0.0)), 1e-15));
        assert!(ket(&r, &[0]).apply_annihilation(&a).unwrap().is_zero());
    }

    #[test]
    fn creation_ladder() {
        let r = one_mode();
        let a = ModeLabel::h("a");
        let vac = ket(&r, &[0]);
        assert!(vac.apply_creation(&a).unwrap().approx_eq(&ket(&r, &[1]), 1e-15));
        let sqrt2 = c(2f64.sqrt(), 0.0);
        assert!(ket(&r, &[1])
            .apply_creation(&a)
            .unwrap()
            .approx_eq(&ket(&r, &[2]).scale(sqrt2), 1e-15));
        let twice = vac.apply_creation(&a).unwrap().apply_creation(&a).unwrap();
        assert!(twice.approx_eq(&ket(&r, &[2]).scale(sqrt2), 1e-15));
    }

    #[test]
    fn unknown_mode_is_registry_error() {
        let r = one_mode();
        let err = ket(&r, &[1]).apply_annihilation(&ModeLabel::h("z")).unwrap_err();
        assert!(matches!(err, Error::UnknownMode(_)));
        assert!(ket(&r, &[1]).apply_creation(&ModeLabel::v("a")).is_err());
    }

    #[test]
    fn inner_products() {
        let r = two_modes();
        assert_eq!(ket(&r, &[1, 0]).inner_product(&ket(&r, &[0, 1])).unwrap(), c(0.0, 0.0));
        let noon = ket(&r, &[2, 0])
            .add(&ket(&r, &[0, 2]))
            .unwrap()
            .normalize()
            .unwrap();
        let ip = ket(&r, &[2, 0]).inner_product(&noon).unwrap();
        assert!((ip - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((noon.inner_product(&noon).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(ket(&r, &[1, 0])
            .inner_product(&ket(&one_mode(), &[1]))
            .is_err());
    }

    #[test]
    fn normalization() {
        let r = two_modes();
        let s = ket(&r, &[2, 0]).add(&ket(&r, &[0, 2])).unwrap();
        let n = s.normalize().unwrap();
        assert!((n.amplitude(&[2, 0]).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((n.amplitude(&[0, 2]).re - FRAC_1_SQRT_2).abs() < 1e-15);

        let one = one_mode();
        let three = ket(&one, &[1]).scale(c(3.0, 0.0)).normalize().unwrap();
        assert!(three.approx_eq(&ket(&one, &[1]), 1e-15));

        assert!(matches!(
            PureState::zero(one).normalize(),
            Err(Error::ZeroState)
        ));
    }

    #[test]
    fn tensor_products() {
        let ra = ModeRegistry::new([ModeLabel::h("a")]).unwrap();
        let rb = ModeRegistry::new([ModeLabel::h("b")]).unwrap();
        let ab = ket(&ra, &[1]).tensor(&ket(&rb, &[1])).unwrap();
        assert_eq!(ab.registry().names(), ["a_h", "b_h"]);
        assert_eq!(ab.amplitude(&[1, 1]), c(1.0, 0.0));

        let vac = PureState::vacuum(ModeRegistry::empty());
        let s = vac.tensor(&ket(&rb, &[3])).unwrap();
        assert!(s.approx_eq(&ket(&rb, &[3]), 0.0));

        let sup = ket(&ra, &[1])
            .add(&ket(&ra, &[0]))
            .unwrap()
            .normalize()
            .unwrap();
        let t = sup.tensor(&ket(&rb, &[1])).unwrap();
        assert!((t.amplitude(&[1, 1]).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((t.amplitude(&[0, 1]).re - FRAC_1_SQRT_2).abs() < 1e-15);

        assert!(matches!(
            ket(&ra, &[1]).tensor(&ket(&ra, &[1])),
            Err(Error::OverlappingModes(_))
        ));
    }

    #[test]
    fn number_distribution() {
        let r = two_modes();
        let d = ket(&r, &[2, 0])
            .photon_number_distribution(r.labels())
            .unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), [(2, 1.0)]);

        let noon = ket(&r, &[2, 0])
            .add(&ket(&r, &[0, 2]))
            .unwrap()
            .normalize()
            .unwrap();
        let d = noon
            .photon_number_distribution(&[ModeLabel::h("a")])
            .unwrap();
        assert!((d[&0] - 0.5).abs() < 1e-15 && (d[&2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rename_and_extend() {
        let r = two_modes();
        let s = ket(&r, &[2, 1]).rename_spatial("a", "c").unwrap();
        assert_eq!(s.registry().names(), ["c_h", "c_v"]);
        let s = s.with_modes(&[ModeLabel::h("b")]).unwrap();
        assert_eq!(s.registry().names(), ["b_h", "c_h", "c_v"]);
        assert_eq!(s.amplitude(&[0, 2, 1]), c(1.0, 0.0));
        let back = s.drop_vacuum_modes(&[ModeLabel::h("b")]).unwrap();
        assert_eq!(back.registry().names(), ["c_h", "c_v"]);
        assert!(s.drop_vacuum_modes(&[ModeLabel::h("c")]).is_err());
    }

    #[test]
    fn state_json_round_trip_and_reordering() {
        let j = r#"{"modes":["a_v","a_h"],"terms":[{"occ":[0,2],"re":0.5,"im":-0.5}]}"#;
        let s = PureState::from_json_str(j).unwrap();
        assert_eq!(s.registry().names(), ["a_h", "a_v"]);
        assert_eq!(s.amplitude(&[2, 0]), c(0.5, -0.5));
        let back = PureState::from_json_str(&s.to_json().to_string()).unwrap();
        assert_eq!(back, s);

        for bad in [
            r#"{"modes":["a_h"],"terms":[{"occ":[1,1],"re":1,"im":0}]}"#,
            r#"{"modes":["a_h","a_h"],"terms":[]}"#,
            r#"{"modes":["a_q"],"terms":[]}"#,
            r#"{"modes":[],"terms":[],"extra":1}"#,
        ] {
            assert!(PureState::from_json_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ensemble_validation() {
        let r = one_mode();
        assert!(Ensemble::new(vec![(0.5, ket(&r, &[0])), (0.5, ket(&r, &[1]))]).is_ok());
        assert!(Ensemble::new(vec![(0.5, ket(&r, &[0]))]).is_err());
        assert!(Ensemble::new(vec![(0.5, ket(&r, &[0])), (0.5, ket(&two_modes(), &[1, 0]))]).is_err());
        assert!(Ensemble::new(vec![(1.5, ket(&r, &[0])), (-0.5, ket(&r, &[1]))]).is_err());
        let e = Ensemble::from_branches(vec![
            ket(&r, &[0]).scale(c(3f64.sqrt(), 0.0)),
            ket(&r, &[1]),
        ])
        .unwrap();
        assert!((e.components()[0].0 - 0.75).abs() < 1e-15);
        let j = e.to_json().to_string();
        assert_eq!(Ensemble::from_json_str(&j).unwrap(), e);
    }

    proptest! {
        #[test]
        fn canonical_commutator(s in arb_state(3), m in 0usize..3) {
            let mode = s.registry().labels()[m].clone();
            let ad_a = s.apply_annihilation(&mode).unwrap().apply_creation(&mode).unwrap();
            let a_ad = s.apply_creation(&mode).unwrap().apply_annihilation(&mode).unwrap();
            let diff = a_ad.add(&ad_a.scale(c(-1.0, 0.0))).unwrap();
            prop_assert!(diff.approx_eq(&s, 1e-12));
        }

        #[test]
        fn inner_product_is_hermitian(s1 in arb_state(2), s2 in arb_state(2)) {
            let a = s1.inner_product(&s2).unwrap();
            let b = s2.inner_product(&s1).unwrap();
            prop_assert!((a - b.conj()).norm() < 1e-14);
            prop_assert!(s1.inner_product(&s1).unwrap().im.abs() < 1e-14);
        }

        #[test]
        fn tensor_multiplies_norms(s1 in arb_state(2), s2 in arb_state(2)) {
            let s2 = s2.rename_spatial("a", "c").unwrap().rename_spatial("b", "d").unwrap();
            let t = s1.tensor(&s2).unwrap();
            prop_assert!((t.norm() - s1.norm() * s2.norm()).abs() < 1e-12);
        }

        #[test]
        fn json_round_trip(s in arb_state(4)) {
            let back = PureState::from_json_str(&s.to_json().to_string()).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
