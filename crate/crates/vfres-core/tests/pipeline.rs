use proptest::prelude::*;
use vfres_core::blowup::{bl_directional, BlowupStep, Direction, DivisorState};
use vfres_core::classify::{classify_configuration, NewtonData};
use vfres_core::driver::{resolve, verify_decrease, ResolveOptions};
use vfres_core::field::{from_log_basis, lie_bracket, mu_omega, to_log_basis};
use vfres_core::gmap::{apply_all, apply_gmap, compose_all, GMap, GroupClass};
use vfres_core::invariant::newton_invariant;
use vfres_core::poly::Poly;
use vfres_core::prepare::{is_stable, stabilize};
use vfres_core::rat::{q, qf};
use vfres_core::PolyVectorField;

fn vf(ts: &[(usize, [i64; 3], i64)]) -> PolyVectorField {
    PolyVectorField::from_terms(ts.iter().map(|(i, e, c)| (*i, *e, q(*c))))
}

#[test]
fn stabilized_data_is_stable_and_classifies() {
    let f = vf(&[(0, [1, 1, 1], 2), (1, [0, 0, 4], 1), (1, [1, 0, 1], 1), (2, [0, 4, 0], 1)]);
    let d = NewtonData::from_field(&f, DivisorState::x_only(1)).unwrap();
    let (sd, maps) = stabilize(&d).unwrap();
    assert!(is_stable(&sd).unwrap());
    assert_eq!(apply_all(&f, &maps), sd.field());
    let c = classify_configuration(&sd).unwrap();
    assert_eq!(c.m, [0, -1, 4]);
    assert_eq!(newton_invariant(&sd).unwrap().v[0], 3);
}

#[test]
fn chart_then_resolution() {
    let f = vf(&[(1, [0, 2, 0], 1), (1, [1, 0, 3], 1), (2, [0, 0, 3], 1)]);
    let d = NewtonData::from_field(&f, DivisorState::x_only(1)).unwrap();
    let child = bl_directional(&d, &BlowupStep::new([1, 2, 1], 2, Direction::X, 1)).unwrap();
    let t = resolve(&child.field(), child.divisor.clone(), &ResolveOptions::default()).unwrap();
    assert!(t.is_resolved());
    verify_decrease(&t).unwrap();
}

#[test]
fn translation_on_divisor_keeps_tags() {
    let f = vf(&[(0, [2, 0, 0], 1), (1, [1, 0, 1], 1), (2, [0, 1, 0], 1), (2, [1, 0, 0], -1)]);
    let d = NewtonData::from_field(&f, DivisorState::x_only(1)).unwrap();
    let c = bl_directional(&d, &BlowupStep::new([1, 1, 1], 0, Direction::X, 1).at(q(1), q(1))).unwrap();
    assert_eq!(c.divisor.tags, [Some(2), None, None]);
}

fn field() -> impl Strategy<Value = PolyVectorField> {
    prop::collection::vec((0usize..3, 0i64..3, 0i64..3, 0i64..3, -4i64..5), 1..6)
        .prop_map(|ts| PolyVectorField::from_terms(ts.into_iter().map(|(i, a, b, c, k)| (i, [a, b, c], q(k)))))
}

fn map() -> impl Strategy<Value = GMap> {
    (0i64..3, 0i64..3, -3i64..4, 0i64..3, -2i64..3).prop_map(|(a, b, k, d, l)| {
        GMap::new(Poly::monomial([a, b, 0], q(k)), Poly::monomial([d, 0, 0], qf(l, 2)), GroupClass::G1)
    })
}

proptest! {
    #[test]
    fn log_basis_round_trip(f in field()) {
        prop_assume!(!f.is_zero());
        prop_assert_eq!(from_log_basis(&to_log_basis(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn maps_compose(f in field(), a in map(), b in map()) {
        let two = apply_gmap(&apply_gmap(&f, &a), &b);
        prop_assert_eq!(apply_gmap(&f, &compose_all(&[a, b])), two);
    }

    // pushforward preserves brackets
    #[test]
    fn maps_preserve_brackets(f in field(), g in field(), m in map()) {
        let lhs = apply_gmap(&lie_bracket(&f, &g), &m);
        let rhs = lie_bracket(&apply_gmap(&f, &m), &apply_gmap(&g, &m));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weight_order_is_a_minimum(f in field(), w in (0i64..4, 0i64..4, 0i64..4)) {
        prop_assume!(!f.is_zero());
        let w = [w.0, w.1, w.2];
        let t = to_log_basis(&f).unwrap();
        let mu = mu_omega(&t, &w).unwrap();
        prop_assert!(t.support().iter().all(|v| w[0] * v[0] + w[1] * v[1] + w[2] * v[2] >= mu));
    }
}
