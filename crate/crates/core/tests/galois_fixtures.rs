//! Fan automorphism groups, semilinear actions, orbit subfans and the
//! descent checks on the built-in instances.

use std::collections::BTreeMap;

use divfan_core::arith::{FiniteGroup, NumberField};
use divfan_core::base::{BasePoint, Plurifunction, SemilinearBaseMap};
use divfan_core::fan::CertificatePolicy;
use divfan_core::fixtures;
use divfan_core::galois::{
    enumerate_homs, fan_automorphism_group, orbit_subfan, toric_descent_check,
    transport_member, tvariety_descent_check, verify_galois_action,
    verify_semilinear_fan_morphism,
};
use divfan_core::rat::QMat;

#[test]
fn hirzebruch_automorphisms_are_order_two() {
    for r in [1i64, 2, 3] {
        let sigma = fixtures::hirzebruch_toric_fan(r).unwrap();
        let (autos, group) = fan_automorphism_group(&sigma).unwrap();
        assert_eq!(group.order(), 2, "r = {r}");
        assert!(group.verify_presentation().unwrap().valid);
        let expected = QMat::from_ints(&[vec![-1, 0], vec![r, 1]]);
        assert!(
            autos.iter().any(|a| a.matrix == expected),
            "missing the reflection for r = {r}"
        );
        assert!(autos.iter().any(|a| a.matrix == QMat::identity(2)));
    }
}

#[test]
fn projective_line_automorphisms_are_plus_minus_one() {
    let sigma = fixtures::p1_toric_fan().unwrap();
    let (autos, group) = fan_automorphism_group(&sigma).unwrap();
    assert_eq!(group.order(), 2);
    assert!(autos.iter().any(|a| a.matrix == QMat::from_ints(&[vec![-1]])));
}

#[test]
fn only_the_trivial_hom_from_odd_order_groups() {
    let sigma = fixtures::hirzebruch_toric_fan(2).unwrap();
    let (_, aut_group) = fan_automorphism_group(&sigma).unwrap();
    let c3 = FiniteGroup::cyclic(3);
    let homs = enumerate_homs(&c3, &aut_group).unwrap();
    assert_eq!(homs.len(), 1);
    assert!(homs[0].iter().all(|&img| img == aut_group.identity));
    // An even-order group reaches both automorphisms.
    let c2 = FiniteGroup::cyclic(2);
    let homs = enumerate_homs(&c2, &aut_group).unwrap();
    assert_eq!(homs.len(), 2);
}

#[test]
fn toric_descent_for_line_and_surface() {
    // Complete rank-1 fan with the sign flip.
    let sigma = fixtures::p1_toric_fan().unwrap();
    let (autos, group) = fan_automorphism_group(&sigma).unwrap();
    let flip = autos
        .iter()
        .find(|a| a.matrix != QMat::identity(1))
        .unwrap();
    let c2 = FiniteGroup::cyclic(2);
    let mut images = BTreeMap::new();
    images.insert("g0".to_string(), QMat::identity(1));
    images.insert("g1".to_string(), flip.matrix.clone());
    let _ = group;
    let report = toric_descent_check(&sigma, &c2, &images).unwrap();
    assert!(report.conclusion);

    // The surface fan with its reflection.
    let sigma = fixtures::hirzebruch_toric_fan(1).unwrap();
    let mut images = BTreeMap::new();
    images.insert("g0".to_string(), QMat::identity(2));
    images.insert("g1".to_string(), QMat::from_ints(&[vec![-1, 0], vec![1, 1]]));
    let report = toric_descent_check(&sigma, &c2, &images).unwrap();
    assert!(report.conclusion);

    // A non-homomorphism is rejected.
    let mut bad = BTreeMap::new();
    bad.insert("g0".to_string(), QMat::identity(2));
    bad.insert("g1".to_string(), QMat::identity(2));
    let mut c2_bad_images = bad.clone();
    c2_bad_images.insert(
        "g1".to_string(),
        QMat::from_ints(&[vec![0, 1], vec![1, 0]]),
    );
    assert!(toric_descent_check(&sigma, &c2, &c2_bad_images).is_err());
}

#[test]
fn p1_form_actions_verify_with_cocycles() {
    let fan = fixtures::p1_point_fan(2).unwrap();
    let actions = fixtures::p1_form_actions(&fan).unwrap();
    assert_eq!(actions.len(), 3);
    for (k, act) in actions.iter().enumerate() {
        let report = verify_galois_action(&fan, act).unwrap();
        assert!(report.valid, "action {k}: {:?}", report.witness);
    }
    // Twisting the third cocycle by the generator breaks the pair (g, g):
    // with the negation lattice map the composed twist is i^{-1} * conj(i) = -1.
    let mut broken = actions[2].clone();
    let field = NumberField::gaussian();
    let gen = divfan_core::base::RationalFunction::constant_fn(
        divfan_core::arith::FieldElement::generator(&field),
    )
    .unwrap();
    broken.morphisms.get_mut("g").unwrap().plurifn = Plurifunction { components: vec![gen] };
    let report = verify_galois_action(&fan, &broken).unwrap();
    assert!(!report.valid);
    assert!(report.witness.unwrap().contains("cocycle"));
}

#[test]
fn p3_action_verifies_and_descends() {
    let field = NumberField::gaussian();
    let fan = fixtures::p3_fan(&field, 4).unwrap();
    let act = fixtures::p3_action(&fan, &field).unwrap();
    let report = verify_galois_action(&fan, &act).unwrap();
    assert!(report.valid, "{:?}", report.witness);
    // The generator swaps D0 with D1 and D2 with D3.
    let g = act.morphism("g").unwrap();
    assert_eq!(g.assignment["D0"], "D1");
    assert_eq!(g.assignment["D1"], "D0");
    assert_eq!(g.assignment["D2"], "D3");
    assert_eq!(g.assignment["D3"], "D2");
    let (descent, _) = tvariety_descent_check(&fan, &act, 4).unwrap();
    assert!(descent.stable);
    assert!(descent.conclusion, "{:?}", descent.orbit_results);
}

#[test]
fn p3_literal_antidiagonal_twist_is_rejected() {
    // The anti-diagonal negation with trivial twist cannot swap all four
    // members: it fixes the two anti-diagonal quadrants, so the swap
    // assignment must fail verification.
    let field = NumberField::gaussian();
    let fan = fixtures::p3_fan(&field, 4).unwrap();
    let mut act = fixtures::p3_action(&fan, &field).unwrap();
    {
        let g = act.morphisms.get_mut("g").unwrap();
        g.f_matrix = QMat::from_ints(&[vec![0, -1], vec![-1, 0]]);
        g.plurifn = Plurifunction::one(2, &field);
    }
    let report = verify_galois_action(&fan, &act).unwrap();
    assert!(!report.valid);

    // With the assignment it actually induces (D0, D1 fixed, D2 and D3
    // swapped) the same triple verifies.
    let mut act2 = fixtures::p3_action(&fan, &field).unwrap();
    {
        let g = act2.morphisms.get_mut("g").unwrap();
        g.f_matrix = QMat::from_ints(&[vec![0, -1], vec![-1, 0]]);
        g.plurifn = Plurifunction::one(2, &field);
    }
    // Derive the honest assignment of the twisted triple structurally.
    let g = act2.morphisms.get("g").unwrap().clone();
    let fixed = fixtures::transport_assignment(&fan, &g).unwrap();
    act2.morphisms.get_mut("g").unwrap().assignment = fixed.clone();
    assert_eq!(fixed["D0"], "D0");
    assert_eq!(fixed["D2"], "D3");
    let report = verify_galois_action(&fan, &act2).unwrap();
    assert!(report.valid, "{:?}", report.witness);
}

#[test]
fn octahedral_mobius_group_has_order_24() {
    let field = NumberField::gaussian();
    let maps = fixtures::octahedral_mobius_group(&field).unwrap();
    assert_eq!(maps.len(), 24);
    // Certify the closure as a group table.
    let (elems, table) = divfan_core::arith::generate_group(
        &maps,
        |a: &SemilinearBaseMap, b: &SemilinearBaseMap| a.compose(b).unwrap(),
        48,
    )
    .unwrap();
    assert_eq!(elems.len(), 24);
    let labels = (0..24).map(|i| format!("m{i}")).collect();
    let group = FiniteGroup::from_table(labels, table).unwrap();
    assert!(group.verify_presentation().unwrap().valid);
    // The six special points are permuted.
    let pts = [
        BasePoint::zero(&field),
        BasePoint::Infinity,
        BasePoint::finite_i64(&field, 1),
        BasePoint::finite_i64(&field, -1),
        BasePoint::Finite(divfan_core::arith::FieldElement::generator(&field)),
        BasePoint::Finite(divfan_core::arith::FieldElement::generator(&field).neg()),
    ];
    for m in &maps {
        for p in &pts {
            let q = m.apply_point(p).unwrap();
            assert!(pts.contains(&q), "orbit point escaped: {q:?}");
        }
    }
}

#[test]
fn identity_morphism_is_valid_on_the_surface_fan() {
    let field = NumberField::rationals();
    let fan = fixtures::hirzebruch_fan(&field, 1, 4).unwrap();
    let id = fixtures::identity_fan_morphism(&fan, &field, "e").unwrap();
    let report = verify_semilinear_fan_morphism(&fan, &id).unwrap();
    assert!(report.valid, "{:?}", report.witness);
}

#[test]
fn trivial_orbit_is_the_closure_of_the_member() {
    let field = NumberField::rationals();
    let fan = fixtures::hirzebruch_fan(&field, 1, 4).unwrap();
    let id = fixtures::identity_fan_morphism(&fan, &field, "e").unwrap();
    let orbit = orbit_subfan(&fan, &[id], "D1", 4, CertificatePolicy::Require).unwrap();
    assert_eq!(orbit.members.len(), 1);
    assert_eq!(orbit.maximal_members().len(), 1);
}

#[test]
fn mobius_orbit_of_surface_charts() {
    // Transport the four maximal members by the 24 Mobius maps and close.
    let field = NumberField::gaussian();
    let members = fixtures::hirzebruch_members(&field, 1).unwrap();
    let maps = fixtures::octahedral_mobius_group(&field).unwrap();
    let morphisms = fixtures::mobius_transport_morphisms(&maps, 1);
    let fan = divfan_core::fan::closure_generate(&members, 4, CertificatePolicy::Skip).unwrap();

    // Per-member translate counts: the stabilizer of a special point has
    // order four, so each member has exactly six distinct translates.
    for name in ["D1", "D2", "D3", "D4"] {
        let d = fan.member(name).unwrap();
        let mut translates = Vec::new();
        for g in &morphisms {
            let t = transport_member(d, g, d.tail()).unwrap();
            if !translates.contains(&t) {
                translates.push(t);
            }
        }
        assert_eq!(translates.len(), 6, "member {name}");
    }

    // The union of all translates closed under intersection: 24 maximal.
    let mut seed = Vec::new();
    for (name, d) in [("D1", 0usize), ("D2", 1), ("D3", 2), ("D4", 3)] {
        let member = &members[d].1;
        for g in &morphisms {
            let t = transport_member(member, g, member.tail()).unwrap();
            if !seed.iter().any(|(_, e): &(String, _)| *e == t) {
                seed.push((format!("{name}@{}", g.gamma), t));
            }
        }
    }
    assert_eq!(seed.len(), 24);
    let closed =
        divfan_core::fan::closure_generate(&seed, 4, CertificatePolicy::Skip).unwrap();
    // Each segment-type translate is coefficientwise dominated by the
    // ray-type translate whose support sits at its empty point, so only the
    // twelve ray-type translates remain maximal.
    assert_eq!(closed.maximal_members().len(), 12);
}
