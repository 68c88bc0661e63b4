//! Closure, certificates, separatedness and quasi-projectivity on the
//! built-in fan fixtures.

use divfan_core::arith::NumberField;
use divfan_core::base::{BasePoint, RationalFunction};
use divfan_core::fan::{
    closure_generate, quasiprojectivity_check, separatedness_check, toric_quasiprojectivity,
    CertificatePolicy,
};
use divfan_core::fixtures;
use divfan_core::polyhedral::{Cone, Polyhedron};
use divfan_core::ppdiv::{search_face, verify_face, PpDivisor};
use divfan_core::rat::{rat, rint, QVec};

#[test]
fn hirzebruch_fan_closes_to_nine_members_with_certificates() {
    let field = NumberField::rationals();
    let fan = fixtures::hirzebruch_fan(&field, 1, 4).expect("closure with certificates");
    assert_eq!(fan.members.len(), 9, "four charts, four walls, one torus");
    assert_eq!(fan.maximal_members().len(), 4);
    // Every member proper.
    for (name, d) in &fan.members {
        let rep = d.check_proper().unwrap();
        assert!(rep.proper, "member {name} fails properness: {rep:?}");
    }
    // Tails form the expected rank-1 fan.
    let tails = fan.tail_fan().unwrap();
    assert_eq!(tails.len(), 3);
    // Separated and quasi-projective.
    let sep = separatedness_check(&fan).unwrap();
    assert!(sep.separated, "witness: {:?}", sep.witness);
    let qp = quasiprojectivity_check(&fan, None).unwrap();
    let h = qp.expect("projective surface has a strictly concave witness");
    assert!(num_traits::Signed::is_positive(&h.epsilon));
}

#[test]
fn hirzebruch_evaluation_matches_the_worked_values() {
    let field = NumberField::rationals();
    let members = fixtures::hirzebruch_members(&field, 1).unwrap();
    let d2 = &members[1].1;
    let ev = d2.evaluate(&QVec::from_ints(&[1])).unwrap();
    assert_eq!(ev.coeff_at(&BasePoint::Infinity), rat(-1, 2));
    assert_eq!(ev.terms.len(), 1);
    let d1 = &members[0].1;
    let ev = d1.evaluate(&QVec::from_ints(&[1])).unwrap();
    assert_eq!(ev.coeff_at(&BasePoint::zero(&field)), rint(1));
    // m = 0 evaluates to the zero divisor.
    assert!(d1.evaluate(&QVec::from_ints(&[0])).unwrap().terms.is_empty());
}

#[test]
fn hirzebruch_locus_and_fiber_polyhedra() {
    let field = NumberField::rationals();
    let members = fixtures::hirzebruch_members(&field, 1).unwrap();
    let d2 = &members[1].1;
    let locus = d2.locus();
    assert!(!locus.contains(&BasePoint::zero(&field)));
    assert!(locus.contains(&BasePoint::Infinity));
    let d1 = &members[0].1;
    let fiber = d1.fiber_polyhedron(&BasePoint::zero(&field)).unwrap();
    assert_eq!(fiber.vertices(), &[QVec::from_ints(&[1])]);
    assert!(d2.fiber_polyhedron(&BasePoint::zero(&field)).is_err());
}

#[test]
fn cylinder_fan_is_already_closed_and_separated() {
    let field = NumberField::rationals();
    let members = fixtures::cylinder_members(&field).unwrap();
    let fan = closure_generate(&members, 4, CertificatePolicy::Require).unwrap();
    assert_eq!(fan.members.len(), 3, "the seed is intersection-closed");
    let sep = separatedness_check(&fan).unwrap();
    assert!(sep.separated);
    let qp = quasiprojectivity_check(&fan, None).unwrap();
    assert!(qp.is_some());
}

#[test]
fn p3_fan_closes_and_its_tail_fan_is_complete() {
    let field = NumberField::gaussian();
    let fan = fixtures::p3_fan(&field, 4).expect("closure with certificates");
    assert_eq!(fan.maximal_members().len(), 4);
    for (name, d) in &fan.members {
        let rep = d.check_proper().unwrap();
        assert!(rep.proper, "member {name} fails properness");
    }
    let tails = fan.tail_fan().unwrap();
    // Four quadrants, four rays, origin.
    assert_eq!(tails.len(), 9);
    let maximal: Vec<_> = divfan_core::fan::maximal_cones(&tails);
    assert_eq!(maximal.len(), 4);
    let sep = separatedness_check(&fan).unwrap();
    assert!(sep.separated, "witness: {:?}", sep.witness);
    let qp = quasiprojectivity_check(&fan, None).unwrap();
    assert!(qp.is_some());
}

#[test]
fn synthetic_pair_fails_separatedness_with_the_stated_witness() {
    let field = NumberField::rationals();
    let (d, dp) = fixtures::separation_failure_pair(&field).unwrap();
    let meet = d.intersect(&dp).unwrap();
    let p = BasePoint::zero(&field);
    let q = BasePoint::finite_i64(&field, 1);
    let mu = vec![(p, rint(1)), (q, rint(1))];
    let lhs = meet.weighted_sum(&mu).unwrap();
    let rhs_a = d.weighted_sum(&mu).unwrap();
    let rhs_b = dp.weighted_sum(&mu).unwrap();
    // mu(D) = mu(D') = [0,2], mu(D ∩ D') = {1}.
    let seg02 = Polyhedron::from_vertices(
        1,
        &[QVec::from_ints(&[0]), QVec::from_ints(&[2])],
        &Cone::zero(1),
    )
    .unwrap();
    assert_eq!(rhs_a, seg02);
    assert_eq!(rhs_b, seg02);
    assert_eq!(lhs, Polyhedron::point(&QVec::from_ints(&[1])));
    // And the fan-level check reports the failure.
    let fan = closure_generate(
        &[("A".into(), d), ("B".into(), dp)],
        4,
        CertificatePolicy::Skip,
    )
    .unwrap();
    let rep = separatedness_check(&fan).unwrap();
    assert!(!rep.separated);
    let w = rep.witness.unwrap();
    assert_eq!(w.pair.0, "A");
}

#[test]
fn localization_of_toric_quadrant_is_the_cone_face() {
    // Over the point base: quadrant localized at m = (0,1) gives the ray.
    let quadrant = Cone::from_rays(2, &[QVec::from_ints(&[1, 0]), QVec::from_ints(&[0, 1])]).unwrap();
    let d = PpDivisor::toric(quadrant);
    let f = RationalFunction::one(&NumberField::rationals());
    let localized = d.localize(&QVec::from_ints(&[0, 1]), &f).unwrap();
    assert_eq!(
        localized.tail(),
        &Cone::from_rays(2, &[QVec::from_ints(&[1, 0])]).unwrap()
    );
    // m = 0 leaves the divisor unchanged.
    let same = d.localize(&QVec::from_ints(&[0, 0]), &f).unwrap();
    assert_eq!(same, d);
}

#[test]
fn localization_of_shifted_ray_member() {
    let field = NumberField::rationals();
    let members = fixtures::hirzebruch_members(&field, 1).unwrap();
    let d1 = &members[0].1; // [1, inf) at 0
    let t_inv = RationalFunction::coordinate(&field).inv().unwrap();
    // f = 1/t is a section of D1(1) = {0}: div(1/t) + {0} = {inf} >= 0.
    let localized = d1.localize(&QVec::from_ints(&[1]), &t_inv).unwrap();
    // The zero set is {inf}; the coefficient at 0 collapses to the endpoint.
    assert!(!localized.base().contains(&BasePoint::Infinity));
    assert_eq!(
        localized.coefficient_at(&BasePoint::zero(&field)),
        Polyhedron::point(&QVec::from_ints(&[1]))
    );
    // A non-section is rejected.
    let t = RationalFunction::coordinate(&field);
    assert!(matches!(
        d1.localize(&QVec::from_ints(&[1]), &t),
        Err(divfan_core::Error::NotASection)
    ));
}

#[test]
fn face_search_on_hirzebruch_edges_and_reflexivity() {
    let field = NumberField::rationals();
    let members = fixtures::hirzebruch_members(&field, 1).unwrap();
    let d1 = members[0].1.clone();
    let d2 = members[1].1.clone();
    // Reflexive certificate.
    let cert = search_face(&d1, &d1, 2).unwrap().expect("self face");
    assert!(verify_face(&d1, &d1, &cert).unwrap().valid);
    // The wall between the first two charts.
    let wall = d1.intersect(&d2).unwrap();
    let cert = search_face(&wall, &d1, 4).unwrap().expect("wall into D1");
    assert!(verify_face(&wall, &d1, &cert).unwrap().valid);
    let cert = search_face(&wall, &d2, 4).unwrap().expect("wall into D2");
    assert!(verify_face(&wall, &d2, &cert).unwrap().valid);
    // The torus chart needs a two-point zero set.
    let d3 = members[2].1.clone();
    let torus = d1.intersect(&d3).unwrap();
    assert_eq!(torus.empty_points().len(), 2);
    let cert = search_face(&torus, &d1, 4).unwrap().expect("torus into D1");
    assert!(verify_face(&torus, &d1, &cert).unwrap().valid);
}

#[test]
fn face_search_rejects_non_faces() {
    let field = NumberField::rationals();
    let line = divfan_core::base::BaseVariety::line(&field);
    // sub with a strictly smaller locus but equal (trivial) coefficients:
    // every evaluation of sup is the zero divisor, so its only sections are
    // constants and no zero set can cut the locus difference.
    let tail = Cone::from_rays(1, &[QVec::from_ints(&[1])]).unwrap();
    let sup = PpDivisor::new(line.clone(), 1, tail.clone(), vec![]).unwrap();
    let sub = PpDivisor::new(
        line.clone(),
        1,
        tail.clone(),
        vec![(
            BasePoint::finite_i64(&field, 1),
            Polyhedron::empty(1, tail.clone()),
        )],
    )
    .unwrap();
    assert!(search_face(&sub, &sup, 3).unwrap().is_none());
    // By contrast, shrinking the locus of a member with a degree-positive
    // evaluation is cut out by an actual section.
    let seg = Polyhedron::from_vertices(1, &[QVec::from_ints(&[1])], &tail).unwrap();
    let sup2 = PpDivisor::new(
        line.clone(),
        1,
        tail.clone(),
        vec![(BasePoint::zero(&field), seg.clone())],
    )
    .unwrap();
    let sub2 = PpDivisor::new(
        line,
        1,
        tail.clone(),
        vec![
            (BasePoint::zero(&field), seg),
            (BasePoint::finite_i64(&field, 1), Polyhedron::empty(1, tail)),
        ],
    )
    .unwrap();
    let cert = search_face(&sub2, &sup2, 3).unwrap().expect("cuttable");
    assert!(verify_face(&sub2, &sup2, &cert).unwrap().valid);
}

#[test]
fn nonprojective_toric_fixture_is_complete_and_infeasible() {
    let fan = fixtures::nonprojective_toric_fan().expect("valid fan");
    assert!(fixtures::toric_fan_is_complete(&fan).unwrap());
    let witness = toric_quasiprojectivity(3, &fan.cones).unwrap();
    assert!(
        witness.is_none(),
        "fixture unexpectedly admits a strictly concave support function"
    );
    // Sanity: the surface fan of the same flavor is projective.
    let hirz = fixtures::hirzebruch_toric_fan(1).unwrap();
    let witness = toric_quasiprojectivity(2, &hirz.cones).unwrap();
    assert!(witness.is_some());
}

/// Both fans again through the independent elimination oracle: the
/// strict-concavity system is homogeneous apart from the slack bound, so
/// strict feasibility is equivalent to feasibility with the slack pinned at
/// one. The two solver routes must agree.
#[test]
fn strictness_systems_cross_checked_by_elimination() {
    use divfan_core::base::BaseVariety;
    use divfan_core::lp::{fm_eliminate, reduce_equalities, LinearProgram, Relation};
    use divfan_core::ppdiv::PpDivisor as Pp;
    use divfan_core::rat::rint;

    let run = |rank: usize, cones: Vec<Cone>| -> (bool, bool) {
        let members: Vec<(String, Pp)> = divfan_core::fan::maximal_cones(&cones)
            .into_iter()
            .enumerate()
            .map(|(i, c)| (format!("c{i}"), Pp::toric(c)))
            .collect();
        let dfan = divfan_core::fan::DivisorialFan {
            base: BaseVariety::Point,
            rank,
            members,
            edges: Vec::new(),
        };
        let mut prog = LinearProgram::default();
        let by_simplex =
            divfan_core::fan::quasiprojectivity_check(&dfan, Some(&mut prog)).unwrap();
        // Pin the slack at >= 1 and project the equalities away.
        let eps = prog.num_vars() - 1;
        let mut row = vec![rint(0); prog.num_vars()];
        row[eps] = rint(1);
        prog.constrain(row, Relation::Ge, rint(1));
        let reduced = reduce_equalities(&prog).expect("no constant contradictions");
        assert!(
            reduced.program.num_vars() <= divfan_core::lp::FM_MAX_VARIABLES,
            "reduction must land within the elimination budget"
        );
        let by_elimination = fm_eliminate(&reduced.program).unwrap();
        (by_simplex.is_some(), by_elimination)
    };

    let twisted = fixtures::nonprojective_toric_fan().unwrap();
    let (s, e) = run(3, twisted.cones);
    assert!(!s && !e, "both routes must report infeasible");

    let hirz = fixtures::hirzebruch_toric_fan(1).unwrap();
    let (s, e) = run(2, hirz.cones);
    assert!(s && e, "both routes must report strictly feasible");
}

#[test]
fn point_base_line_fan_closes() {
    let fan = fixtures::p1_point_fan(2).unwrap();
    assert_eq!(fan.members.len(), 3);
    assert_eq!(fan.maximal_members().len(), 2);
}
