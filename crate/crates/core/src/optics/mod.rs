//! Linear optical elements as mode unitaries and their lift to Fock space.

mod axis;
pub mod circuit;
pub mod elements;
mod unitary;

pub use axis::PolarizationAxis;
pub use circuit::{Circuit, Element};
pub use elements::{
    balanced_bs, beamsplitter, hwp, pbs, phase_plate, phase_shift, qwp, rotation, su2, LocalUnitary,
};
pub use unitary::{
    apply_unitary, compose, embed, embed_many, on_paths, on_polarization, pbs_on_paths,
    polarization_groups, ModeUnitary,
};


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::testutil::*;
    use crate::fock::{ModeLabel, ModeRegistry, OccupationVector, PureState};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    fn paths() -> ModeRegistry {
        ModeRegistry::new([ModeLabel::h("a1"), ModeLabel::h("a2")]).unwrap()
    }

    fn bs_full() -> ModeUnitary {
        let r = paths();
        embed(&balanced_bs(), r.labels(), &r).unwrap()
    }

    #[test]
    fn hong_ou_mandel_null() {
        let out = apply_unitary(&bs_full(), &ket(&paths(), &[1, 1])).unwrap();
        assert!(out.amplitude(&[1, 1]).norm() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-14);
        let a20 = out.amplitude(&[2, 0]);
        let a02 = out.amplitude(&[0, 2]);
        assert!((a20.norm_sqr() - 0.5).abs() < 1e-14);
        assert!((a20 - a02).norm() < 1e-15, "both i/sqrt2 with this convention");
    }

    #[test]
    fn hom_null_for_any_bs_phase() {
        for phi in [0.0, 0.4, 1.3, PI] {
            let r = paths();
            let bs = balanced_bs()
                .after(&embed_local_phase(phi))
                .unwrap();
            let out = apply_unitary(&embed(&bs, r.labels(), &r).unwrap(), &ket(&r, &[1, 1])).unwrap();
            assert!(out.amplitude(&[1, 1]).norm() < 1e-12);
        }
    }

    fn embed_local_phase(phi: f64) -> LocalUnitary {
        LocalUnitary::from_2x2([
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), num_complex::Complex64::from_polar(1.0, phi)],
        ])
        .unwrap()
    }

    #[test]
    fn reflectivity_zero_routes_straight_through() {
        let r = paths();
        let u = embed(&beamsplitter(0.0).unwrap(), r.labels(), &r).unwrap();
        let s = ket(&r, &[2, 1]);
        assert!(apply_unitary(&u, &s).unwrap().approx_eq(&s, 1e-15));
    }

    #[test]
    fn hwp_45_moves_photon_to_v() {
        let r = two_modes();
        let u = embed(&hwp(FRAC_PI_4), r.labels(), &r).unwrap();
        let out = apply_unitary(&u, &ket(&r, &[1, 0])).unwrap();
        assert!((out.amplitude(&[0, 1]).norm() - 1.0).abs() < 1e-15);
        assert!(out.amplitude(&[1, 0]).norm() < 1e-15);
    }

    #[test]
    fn identity_is_noop() {
        let r = ModeRegistry::ab();
        let s = ket(&r, &[1, 2, 0, 1]);
        let out = apply_unitary(&ModeUnitary::identity(r.clone()), &s).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn phase_plate_doubles_noon_phase() {
        let r = two_modes();
        let theta = 0.37;
        let u = embed(&phase_plate(theta), r.labels(), &r).unwrap();
        let noon = ket(&r, &[2, 0]).add(&ket(&r, &[0, 2])).unwrap();
        let out = apply_unitary(&u, &noon).unwrap();
        let rel = out.amplitude(&[0, 2]) / out.amplitude(&[2, 0]);
        assert!((rel.arg() - 2.0 * theta).abs() < 1e-14);

        let one = apply_unitary(&embed(&phase_plate(PI), r.labels(), &r).unwrap(), &ket(&r, &[0, 1]))
            .unwrap();
        assert!((one.amplitude(&[0, 1]) + c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pbs_routing() {
        let r = ModeRegistry::polarization_pairs(&["a", "c"]);
        let u = pbs_on_paths("a", "c", &r).unwrap();
        // registry order: a_h, a_v, c_h, c_v
        let h = apply_unitary(&u, &ket(&r, &[1, 0, 0, 0])).unwrap();
        assert_eq!(h.amplitude(&[1, 0, 0, 0]), c(1.0, 0.0));
        let v = apply_unitary(&u, &ket(&r, &[0, 1, 0, 0])).unwrap();
        assert_eq!(v.amplitude(&[0, 0, 0, 1]), c(1.0, 0.0));
        let hv = apply_unitary(&u, &ket(&r, &[1, 1, 0, 0])).unwrap();
        assert_eq!(hv.amplitude(&[1, 0, 0, 1]), c(1.0, 0.0));
    }

    #[test]
    fn embed_blocks() {
        let r = ModeRegistry::ab();
        let id = embed(&LocalUnitary::identity(2), &[ModeLabel::h("a"), ModeLabel::v("a")], &r).unwrap();
        assert_eq!(id, ModeUnitary::identity(r.clone()));

        let u = on_polarization(&hwp(FRAC_PI_4), "b", &r).unwrap();
        let s = ket(&r, &[2, 1, 1, 0]);
        let out = apply_unitary(&u, &s).unwrap();
        assert!((out.amplitude(&[2, 1, 0, 1]).norm() - 1.0).abs() < 1e-15);

        let r8 = ModeRegistry::polarization_pairs(&["a'", "a''", "b", "c"]);
        let bs = on_paths(&balanced_bs(), "a'", "a''", &r8).unwrap();
        assert_eq!(bs.active_modes(), [0, 1, 2, 3]);

        assert!(embed(&hwp(0.1), &[ModeLabel::h("a")], &r).is_err());
        assert!(embed(&hwp(0.1), &[ModeLabel::h("a"), ModeLabel::h("a")], &r).is_err());
        assert!(embed(&hwp(0.1), &[ModeLabel::h("a"), ModeLabel::h("z")], &r).is_err());
    }

    #[test]
    fn tagged_registry_gets_one_copy_per_tag() {
        let labels = ["a_h_I", "a_v_I", "a_h_II", "a_v_II"];
        let r = ModeRegistry::parse(&labels).unwrap();
        let u = on_polarization(&hwp(0.3), "a", &r).unwrap();
        assert_eq!(u.active_modes().len(), 4);
        let circuit = Circuit::new().push(Element::Hwp(0.3), &["a_h", "a_v"]).unwrap();
        assert_eq!(circuit.unitary(&r).unwrap(), u);
    }

    #[test]
    fn circuit_json() {
        let j = r#"[{"kind":"hwp","angle_deg":22.5,"targets":["a_h","a_v"]},
                    {"kind":"bs","r":0.5,"targets":["a1","a2"]},
                    {"kind":"pbs","targets":["a","c"]},
                    {"kind":"phase","theta_deg":90,"targets":["b"]},
                    {"kind":"qwp","angle_deg":45,"targets":["b"]}]"#;
        let c = Circuit::from_json_str(j).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.elements()[0].element, Element::Hwp(FRAC_PI_8));
        let back = Circuit::from_json(c.to_json()).unwrap();
        assert_eq!(back.len(), c.len());
        for (x, y) in back.elements().iter().zip(c.elements()) {
            assert_eq!(x.targets, y.targets);
        }
        for bad in [
            r#"[{"kind":"hwp","angle_deg":1,"targets":["a1","a2"]}]"#,
            r#"[{"kind":"bs","r":2,"targets":["a1","a2"]}]"#,
            r#"[{"kind":"pbs","targets":["a_h","a_v"]}]"#,
            r#"[{"kind":"laser","targets":[]}]"#,
            r#"[{"kind":"hwp","angle_deg":1,"targets":["a"],"x":1}]"#,
            r#"[{"kind":"bs","r":0.5,"targets":["a","a"]}]"#,
        ] {
            assert!(Circuit::from_json_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn missing_modes_for_vacuum_ports() {
        let c = Circuit::new().push(Element::Bs(0.5), &["a", "a2"]).unwrap();
        let missing = c.missing_modes(&ModeRegistry::ab()).unwrap();
        let names: Vec<String> = missing.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["a2_h", "a2_v"]);
        let tagged = ModeRegistry::parse(&["a_h_I", "a_v_I"]).unwrap();
        let names: Vec<String> = c.missing_modes(&tagged).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(names, ["a2_h_I", "a2_v_I"]);
    }

    fn arb_su2() -> impl Strategy<Value = LocalUnitary> {
        (0.0..2.0 * PI, 0.0..PI, 0.0..2.0 * PI).prop_map(|(a, b, g)| su2(a, b, g))
    }

    fn arb_ab_state() -> impl Strategy<Value = PureState> {
        let reg = ModeRegistry::ab();
        prop::collection::vec((prop::collection::vec(0u16..=1, 4), -1.0f64..1.0, -1.0f64..1.0), 1..5)
            .prop_map(move |terms| {
                PureState::from_terms(
                    reg.clone(),
                    terms.into_iter().map(|(o, re, im)| (OccupationVector::new(o), c(re, im))),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn lift_is_a_homomorphism(u in arb_su2(), v in arb_su2(), s in arb_ab_state()) {
            let r = s.registry().clone();
            let uu = on_polarization(&u, "a", &r).unwrap();
            // mix a and b paths too so both factors act on shared modes
            let vv = compose(&on_paths(&v, "a", "b", &r).unwrap(), &on_polarization(&v, "b", &r).unwrap()).unwrap();
            let lhs = apply_unitary(&compose(&uu, &vv).unwrap(), &s).unwrap();
            let rhs = apply_unitary(&uu, &apply_unitary(&vv, &s).unwrap()).unwrap();
            prop_assert!(lhs.approx_eq(&rhs, 1e-10));
        }

        #[test]
        fn lift_preserves_norm_and_photon_number(u in arb_su2(), s in arb_ab_state()) {
            let r = s.registry().clone();
            let w = compose(&on_paths(&u, "a", "b", &r).unwrap(), &on_polarization(&u, "a", &r).unwrap()).unwrap();
            let out = apply_unitary(&w, &s).unwrap();
            prop_assert!((out.norm() - s.norm()).abs() < 1e-12);
            let before = s.photon_number_distribution(r.labels()).unwrap();
            let after = out.photon_number_distribution(r.labels()).unwrap();
            for (n, p) in &before {
                prop_assert!((after.get(n).copied().unwrap_or(0.0) - p).abs() < 1e-12);
            }
        }
    }
}
