//! The acceptance battery: one test per criterion, each printing a verdict
//! line. Run with `cargo test -p divfan-core --test acceptance -- --nocapture`.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use divfan_core::arith::{FieldElement, FiniteGroup, NumberField};
use divfan_core::base::{section_dim, section_membership, BasePoint, QDivisor, RationalFunction};
use divfan_core::fan::{
    closure_generate, quasiprojectivity_check, separatedness_check,
    CertificatePolicy,
};
use divfan_core::fixtures;
use divfan_core::galois::{
    enumerate_homs, fan_automorphism_group, toric_descent_check, tvariety_descent_check,
    verify_galois_action,
};
use divfan_core::polyhedral::Polyhedron;
use divfan_core::rat::{rint, QMat, QVec};

fn verdict(criterion: u32, pass: bool, detail: &str, elapsed: Duration, budget: Duration) {
    let state = if pass && elapsed <= budget {
        "PASS"
    } else {
        "FAIL"
    };
    println!(
        "acceptance {criterion}: {state} — {detail} ({elapsed:.2?} of {budget:.2?} budget)"
    );
    assert!(pass, "criterion {criterion}: {detail}");
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its time budget: {elapsed:?} > {budget:?}"
    );
}

#[test]
fn criterion_1_surface_fan_automorphisms() {
    let t0 = Instant::now();
    let mut ok = true;
    for r in [1i64, 2, 3] {
        let sigma = fixtures::hirzebruch_toric_fan(r).unwrap();
        let (autos, group) = fan_automorphism_group(&sigma).unwrap();
        let expected = QMat::from_ints(&[vec![-1, 0], vec![r, 1]]);
        let has = autos.iter().any(|a| a.matrix == expected);
        ok &= group.order() == 2 && has && group.verify_presentation().unwrap().valid;
    }
    verdict(
        1,
        ok,
        "automorphism groups of order 2 generated by [[-1,0],[r,1]] for r in {1,2,3}",
        t0.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_surface_divisorial_fan() {
    let t0 = Instant::now();
    let field = NumberField::rationals();
    let fan = fixtures::hirzebruch_fan(&field, 1, 4).expect("closure with certificates");
    let mut ok = fan.members.len() == 9;
    for (_, d) in &fan.members {
        ok &= d.check_proper().unwrap().proper;
    }
    ok &= fan.edges.iter().count() > 0;
    let sep = separatedness_check(&fan).unwrap();
    ok &= sep.separated;
    let qp = quasiprojectivity_check(&fan, None).unwrap();
    let eps_pos = qp
        .as_ref()
        .map(|h| num_traits::Signed::is_positive(&h.epsilon))
        .unwrap_or(false);
    ok &= eps_pos;
    verdict(
        2,
        ok,
        "closure valid with certificates at bound 4, all members proper, separated, strictly concave witness found",
        t0.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_3_threefold_quotient_fan_descends() {
    let t0 = Instant::now();
    let field = NumberField::gaussian();
    let fan = fixtures::p3_fan(&field, 4).expect("closure with certificates");
    let mut ok = fan.maximal_members().len() == 4;
    let tails = fan.tail_fan().unwrap();
    ok &= divfan_core::fan::maximal_cones(&tails).len() == 4;
    // The literal anti-diagonal reflection with trivial twist cannot realize
    // the double swap; the verifier must reject it.
    let mut literal = fixtures::p3_action(&fan, &field).unwrap();
    {
        let g = literal.morphisms.get_mut("g").unwrap();
        g.f_matrix = QMat::from_ints(&[vec![0, -1], vec![-1, 0]]);
        g.plurifn = divfan_core::base::Plurifunction::one(2, &field);
    }
    ok &= !verify_galois_action(&fan, &literal).unwrap().valid;
    // The corrected involution (negation lattice map with the t^(1,-1)
    // twist) verifies with the stated chart pairing and descends.
    let act = fixtures::p3_action(&fan, &field).unwrap();
    let report = verify_galois_action(&fan, &act).unwrap();
    ok &= report.valid;
    let g = act.morphism("g").unwrap();
    ok &= g.assignment["D0"] == "D1"
        && g.assignment["D1"] == "D0"
        && g.assignment["D2"] == "D3"
        && g.assignment["D3"] == "D2";
    let (descent, _) = tvariety_descent_check(&fan, &act, 4).unwrap();
    ok &= descent.stable && descent.conclusion;
    verdict(
        3,
        ok,
        "four-member fan validates, tail fan complete, order-two action verifies with D0<->D1, D2<->D3 (lattice map corrected to -id with twist t^(1,-1); the stated (-b,-a) twist-free triple is rejected), descent concludes true",
        t0.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_4_line_forms() {
    let t0 = Instant::now();
    let fan = fixtures::p1_point_fan(2).unwrap();
    let actions = fixtures::p1_form_actions(&fan).unwrap();
    let mut ok = actions.len() == 3;
    for act in &actions {
        ok &= verify_galois_action(&fan, act).unwrap().valid;
    }
    // Toric descent for the corresponding homomorphisms into {±1}.
    let sigma = fixtures::p1_toric_fan().unwrap();
    let c2 = FiniteGroup::from_table(
        vec!["e".into(), "g".into()],
        vec![vec![0, 1], vec![1, 0]],
    )
    .unwrap();
    for flip in [false, true, true] {
        let mut images = BTreeMap::new();
        images.insert("e".to_string(), QMat::identity(1));
        images.insert(
            "g".to_string(),
            if flip {
                QMat::from_ints(&[vec![-1]])
            } else {
                QMat::identity(1)
            },
        );
        let report = toric_descent_check(&sigma, &c2, &images).unwrap();
        ok &= report.conclusion;
    }
    verdict(
        4,
        ok,
        "the three semilinear involutions verify with exact cocycles and their toric descents pass",
        t0.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_5_odd_order_obstruction() {
    let t0 = Instant::now();
    let mut ok = true;
    for r in [1i64, 2, 3] {
        let sigma = fixtures::hirzebruch_toric_fan(r).unwrap();
        let (_, aut) = fan_automorphism_group(&sigma).unwrap();
        let c3 = FiniteGroup::cyclic(3);
        let homs = enumerate_homs(&c3, &aut).unwrap();
        ok &= homs.len() == 1 && homs[0].iter().all(|&i| i == aut.identity);
    }
    verdict(
        5,
        ok,
        "the only homomorphism from the order-three group into the order-two automorphism group is trivial",
        t0.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_6_mobius_orbit_count() {
    let t0 = Instant::now();
    let field = NumberField::gaussian();
    let members = fixtures::hirzebruch_members(&field, 1).unwrap();
    let maps = fixtures::octahedral_mobius_group(&field).unwrap();
    // The group itself is certified order 24 by closure.
    let (elems, table) = divfan_core::arith::generate_group(
        &maps,
        |a: &divfan_core::base::SemilinearBaseMap, b: &divfan_core::base::SemilinearBaseMap| {
            a.compose(b).unwrap()
        },
        48,
    )
    .unwrap();
    let labels = (0..elems.len()).map(|i| format!("m{i}")).collect();
    let group = FiniteGroup::from_table(labels, table).unwrap();
    let group_ok = elems.len() == 24 && group.verify_presentation().unwrap().valid;

    let morphisms = fixtures::mobius_transport_morphisms(&maps, 1);
    let mut seed = Vec::new();
    for (name, d) in &members {
        for g in &morphisms {
            let t = divfan_core::galois::transport_member(d, g, d.tail()).unwrap();
            if !seed.iter().any(|(_, e): &(String, _)| *e == t) {
                seed.push((format!("{name}@{}", g.gamma), t));
            }
        }
    }
    let closed = closure_generate(&seed, 4, CertificatePolicy::Skip).unwrap();
    let maximal = closed.maximal_members().len();
    let elapsed = t0.elapsed();
    let pass = group_ok && maximal == 96;
    println!(
        "acceptance 6: {} — verified order-24 Mobius group; transport + closure yields {} maximal members where the plan states 96 \
         (exact recount: 24 distinct translates, stabilizers of order 4 leave 6 per member, and the 12 segment-type translates are \
         dominated by ray-type translates; see the notes ledger) ({elapsed:.2?} of 300s budget)",
        if pass { "PASS" } else { "FAIL" },
        maximal
    );
    assert!(group_ok, "Mobius group must certify as order 24");
    assert!(elapsed <= Duration::from_secs(300));
    assert_eq!(
        maximal, 96,
        "stated orbit count is 96; the exact computation yields {maximal}"
    );
}

#[test]
fn criterion_7_separatedness_witness() {
    let t0 = Instant::now();
    let field = NumberField::rationals();
    let (d, dp) = fixtures::separation_failure_pair(&field).unwrap();
    let meet = d.intersect(&dp).unwrap();
    let p = BasePoint::zero(&field);
    let q = BasePoint::finite_i64(&field, 1);
    let mu = vec![(p, rint(1)), (q, rint(1))];
    let seg02 = Polyhedron::from_vertices(
        1,
        &[QVec::from_ints(&[0]), QVec::from_ints(&[2])],
        &divfan_core::polyhedral::Cone::zero(1),
    )
    .unwrap();
    let lhs = meet.weighted_sum(&mu).unwrap();
    let rhs = d
        .weighted_sum(&mu)
        .unwrap()
        .intersect(&dp.weighted_sum(&mu).unwrap())
        .unwrap();
    let mut ok = rhs == seg02 && lhs == Polyhedron::point(&QVec::from_ints(&[1]));
    let fan = closure_generate(
        &[("A".into(), d), ("B".into(), dp)],
        4,
        CertificatePolicy::Skip,
    )
    .unwrap();
    let rep = separatedness_check(&fan).unwrap();
    ok &= !rep.separated && rep.witness.is_some();
    verdict(
        7,
        ok,
        "unit masses at the two points give [0,2] vs {1} and the check reports the witness",
        t0.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_8_property_suites() {
    let t0 = Instant::now();
    let reports = divfan_core::suites::run_all(100).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for r in &reports {
        ok &= r.passed();
        detail.push_str(&format!("{}={} ", r.name, r.cases));
    }
    verdict(
        8,
        ok,
        &format!("zero failures across {detail}"),
        t0.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_9_section_dimensions() {
    let t0 = Instant::now();
    let field = NumberField::rationals();
    let base = divfan_core::base::BaseVariety::line(&field);
    let pts = [
        BasePoint::zero(&field),
        BasePoint::finite_i64(&field, 1),
        BasePoint::Infinity,
    ];
    let mut ok = true;
    let mut checked = 0u32;
    for a in -2i64..=4 {
        for b in -2i64..=4 {
            for c in -2i64..=4 {
                if a + b + c > 10 {
                    continue;
                }
                let d = QDivisor::from_terms(vec![
                    (pts[0].clone(), rint(a)),
                    (pts[1].clone(), rint(b)),
                    (pts[2].clone(), rint(c)),
                ]);
                let dim = section_dim(&d, &base).unwrap();
                // Independent oracle: count the monomial basis
                // (t-5)^j * t^{-a} (t-1)^{-b}, j = 0, 1, ... while each stays
                // a section; distinct pole orders at infinity make them
                // independent.
                let base_fn = RationalFunction::new(
                    FieldElement::one(&field),
                    vec![
                        (FieldElement::from_rat(&field, rint(0)), -a),
                        (FieldElement::from_rat(&field, rint(1)), -b),
                    ],
                )
                .unwrap();
                let shift = RationalFunction::new(
                    FieldElement::one(&field),
                    vec![(FieldElement::from_rat(&field, rint(5)), 1)],
                )
                .unwrap();
                let mut count = 0u64;
                let mut f = base_fn;
                while count <= 16 && section_membership(&f, &d, &base).unwrap() {
                    count += 1;
                    f = f.mul(&shift).unwrap();
                }
                ok &= count == dim;
                checked += 1;
            }
        }
    }
    verdict(
        9,
        ok,
        &format!("section dimensions match the brute-force monomial count on {checked} integer divisors"),
        t0.elapsed(),
        Duration::from_secs(1),
    );
}
