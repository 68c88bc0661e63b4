//! Seeded randomized property suites over the polyhedral identities, the
//! localization identity, morphism composition, plurifunction evaluation, and
//! the two LP routes. The counts mirror the verification plan and the suites
//! are callable both from tests and from the command line.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::arith::{FieldElement, NumberField};
use crate::base::{BasePoint, BaseVariety, Plurifunction, RationalFunction, SemilinearBaseMap};
use crate::base::{divisor_of_function, section_candidates, MobiusMatrix};
use crate::error::Result;
use crate::polyhedral::{Cone, Polyhedron};
use crate::ppdiv::{compose_morphisms, verify_morphism, BaseMap, PpDivisor, PpdMorphism};
use crate::rat::{rint, QMat, QVec, Rat};

#[derive(Clone, Debug, serde::Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_cone(rng: &mut ChaCha8Rng, dim: usize) -> Cone {
    let k = rng.gen_range(0..=dim);
    let rays: Vec<QVec> = (0..k)
        .map(|_| {
            let mut v = vec![0i64; dim];
            while v.iter().all(|x| *x == 0) {
                for x in v.iter_mut() {
                    *x = rng.gen_range(-2..=2);
                }
            }
            QVec::from_ints(&v)
        })
        .collect();
    Cone::from_rays(dim, &rays).expect("random cone")
}

fn random_polyhedron(rng: &mut ChaCha8Rng, dim: usize) -> Polyhedron {
    let tail = random_cone(rng, dim);
    let k = rng.gen_range(1..=3);
    let pts: Vec<QVec> = (0..k)
        .map(|_| {
            let v: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            QVec::from_ints(&v)
        })
        .collect();
    Polyhedron::from_vertices(dim, &pts, &tail).expect("random polyhedron")
}

fn random_dual_functional(rng: &mut ChaCha8Rng, tail: &Cone) -> QVec {
    let dual = tail.dual_unchecked();
    let gens = dual.generators();
    let mut m = QVec::zero(tail.dim());
    if gens.is_empty() {
        return m;
    }
    for _ in 0..rng.gen_range(1..=2) {
        let g = &gens[rng.gen_range(0..gens.len())];
        let c = rint(rng.gen_range(0..=2));
        m = m.add(&g.scale(&c));
    }
    m
}

/// Parts 1 and 3 of the face identities, plus part 2 on convex splits.
pub fn face_identities_suite(cases: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut ran = 0usize;
    while ran < cases {
        let dim = rng.gen_range(1..=3);
        let delta = random_polyhedron(&mut rng, dim);
        // Part 1 on a sub-polyhedron: a face, or an intersection.
        let sub = if rng.gen_bool(0.5) {
            let m = random_dual_functional(&mut rng, delta.tail());
            delta.face_by(&m)?
        } else {
            let other = random_polyhedron(&mut rng, dim);
            delta.intersect(&other)?
        };
        if sub.is_empty() {
            continue;
        }
        ran += 1;
        let m = random_dual_functional(&mut rng, delta.tail());
        let face_big = delta.face_by(&m)?;
        if sub.tail().generators().iter().all(|r| {
            use num_traits::Signed;
            !m.dot(r).is_negative()
        }) {
            let lhs = sub.intersect(&face_big)?;
            let rhs = sub.face_by(&m)?;
            if !rhs.contains_poly(&lhs) {
                failures.push(format!("part 1: {lhs:?} not inside {rhs:?}"));
            }
        }
        // Part 3 when the two faces meet.
        let m2 = random_dual_functional(&mut rng, delta.tail());
        let f1 = delta.face_by(&m)?;
        let f2 = delta.face_by(&m2)?;
        let meet = f1.intersect(&f2)?;
        if !meet.is_empty() {
            let nested = f1.face_by(&m2)?;
            if nested != meet {
                failures.push(format!("part 3: {nested:?} vs {meet:?}"));
            }
            let nested_other = f2.face_by(&m)?;
            if nested_other != meet {
                failures.push(format!("part 3 (swapped): {nested_other:?} vs {meet:?}"));
            }
        }
        // Part 2 on a convex split of delta along a hyperplane.
        let a = random_dual_functional(&mut rng, &Cone::zero(dim));
        if !a.is_zero() {
            let c = rint(rng.gen_range(-2..=2));
            let mut hplus = a.0.clone();
            hplus.push(-c.clone());
            let mut hminus = a.neg().0.clone();
            hminus.push(c.clone());
            let left = Polyhedron::from_hrep(
                dim,
                [delta.hineqs().to_vec(), vec![QVec(hplus)]].concat(),
                delta.heqs().to_vec(),
                delta.tail(),
            );
            let right = Polyhedron::from_hrep(
                dim,
                [delta.hineqs().to_vec(), vec![QVec(hminus)]].concat(),
                delta.heqs().to_vec(),
                delta.tail(),
            );
            if !left.is_empty() && !right.is_empty() {
                let whole = delta.face_by(&m)?;
                let fl = if left
                    .tail()
                    .generators()
                    .iter()
                    .all(|r| !{
                        use num_traits::Signed;
                        m.dot(r).is_negative()
                    }) {
                    Some(left.face_by(&m)?)
                } else {
                    None
                };
                let fr = if right.tail().generators().iter().all(|r| !{
                    use num_traits::Signed;
                    m.dot(r).is_negative()
                }) {
                    Some(right.face_by(&m)?)
                } else {
                    None
                };
                for v in whole.vertices() {
                    let in_l = fl.as_ref().is_some_and(|f| f.contains_point(v));
                    let in_r = fr.as_ref().is_some_and(|f| f.contains_point(v));
                    if !in_l && !in_r {
                        failures.push(format!("part 2: vertex {v:?} escapes both faces"));
                    }
                }
            }
        }
        if failures.len() > 4 {
            break;
        }
    }
    Ok(SuiteReport {
        name: "face-identities".into(),
        cases: ran,
        failures,
    })
}

fn qq() -> Arc<NumberField> {
    NumberField::rationals()
}

fn random_ppdivisor(rng: &mut ChaCha8Rng, dim: usize) -> Result<PpDivisor> {
    let field = qq();
    let line = BaseVariety::line(&field);
    let tail = random_cone(rng, dim);
    let pts = [
        BasePoint::zero(&field),
        BasePoint::Infinity,
        BasePoint::finite_i64(&field, 1),
    ];
    let mut coeffs = Vec::new();
    let k = rng.gen_range(1..=3);
    for p in pts.iter().take(k) {
        // A random translate keeps the declared tail.
        let shift: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
        let mut verts = vec![QVec::from_ints(&shift)];
        if rng.gen_bool(0.5) {
            let other: Vec<i64> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
            verts.push(QVec::from_ints(&other));
        }
        let poly = Polyhedron::from_vertices(
            dim,
            &verts,
            &Cone::zero(dim),
        )?
        .minkowski_sum(&Polyhedron::cone_polyhedron(&tail))?;
        coeffs.push((p.clone(), poly));
    }
    PpDivisor::new(line, dim, tail, coeffs)
}

/// Superadditivity of evaluations: D(m) + D(m') <= D(m + m').
pub fn superadditivity_suite(cases: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut ran = 0usize;
    while ran < cases {
        let dim = rng.gen_range(1..=2);
        let d = random_ppdivisor(&mut rng, dim)?;
        let m1 = random_dual_functional(&mut rng, d.tail());
        let m2 = random_dual_functional(&mut rng, d.tail());
        ran += 1;
        let e1 = d.evaluate(&m1)?;
        let e2 = d.evaluate(&m2)?;
        let sum = d.evaluate(&m1.add(&m2))?;
        let lhs = e1.add(&e2);
        // lhs <= sum pointwise.
        let mut pts = lhs.support();
        pts.extend(sum.support());
        for p in pts {
            if lhs.coeff_at(&p) > sum.coeff_at(&p) {
                failures.push(format!(
                    "superadditivity fails at {p:?} for {m1:?}, {m2:?}"
                ));
                break;
            }
        }
        if failures.len() > 4 {
            break;
        }
    }
    Ok(SuiteReport {
        name: "evaluation-superadditivity".into(),
        cases: ran,
        failures,
    })
}

/// The localization identity with the minimal shift.
pub fn localization_identity_suite(cases: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut ran = 0usize;
    let mut guard = 0usize;
    while ran < cases && guard < cases * 40 {
        guard += 1;
        let dim = rng.gen_range(1..=2);
        let d = random_ppdivisor(&mut rng, dim)?;
        let m = random_dual_functional(&mut rng, d.tail());
        if !m.is_integral() {
            continue;
        }
        let ev = d.evaluate(&m)?;
        let pool: Vec<FieldElement> = d
            .support_points()
            .iter()
            .filter_map(|p| match p {
                BasePoint::Finite(a) => Some(a.clone()),
                BasePoint::Infinity => None,
            })
            .collect();
        let sections = section_candidates(&ev, &d.locus(), &pool, 2)?;
        if sections.is_empty() {
            continue;
        }
        let f = sections[rng.gen_range(0..sections.len())].clone();
        let localized_tail = d.tail().intersect_hyperplane(&m)?;
        let m_prime = random_dual_functional(&mut rng, &localized_tail);
        if !m_prime.is_integral() {
            continue;
        }
        ran += 1;
        match d.localization_identity_check(&m, &f, &m_prime) {
            Ok(report) => {
                if !report.holds {
                    failures.push(format!(
                        "identity fails: k={}, lhs={:?}, rhs={:?}",
                        crate::rat::format_rat(&report.k),
                        report.lhs,
                        report.rhs
                    ));
                }
            }
            Err(e) => failures.push(format!("identity errored: {e}")),
        }
        if failures.len() > 4 {
            break;
        }
    }
    Ok(SuiteReport {
        name: "localization-identity".into(),
        cases: ran,
        failures,
    })
}

fn random_mobius(rng: &mut ChaCha8Rng, field: &Arc<NumberField>) -> SemilinearBaseMap {
    loop {
        let m = [
            rng.gen_range(-3..=3),
            rng.gen_range(-3..=3),
            rng.gen_range(-3..=3),
            rng.gen_range(-3..=3),
        ];
        if m[0] * m[3] - m[1] * m[2] != 0 {
            let mat = MobiusMatrix::from_i64(field, m).expect("invertible");
            return SemilinearBaseMap::new(mat, crate::arith::FieldAutomorphism::identity(field))
                .expect("base map");
        }
    }
}

fn random_unimodular(rng: &mut ChaCha8Rng, dim: usize) -> QMat {
    let mut m = QMat::identity(dim);
    for _ in 0..4 {
        let i = rng.gen_range(0..dim);
        let mut j = rng.gen_range(0..dim);
        if dim > 1 {
            while j == i {
                j = rng.gen_range(0..dim);
            }
            let c = rint(rng.gen_range(-2..=2));
            let row = m.rows[j].scale(&c);
            m.rows[i] = m.rows[i].add(&row);
        } else if rng.gen_bool(0.5) {
            m.rows[0] = m.rows[0].neg();
        }
    }
    m
}

fn random_plurifunction(rng: &mut ChaCha8Rng, rank: usize, field: &Arc<NumberField>) -> Plurifunction {
    let roots = [0i64, 1, -1, 2];
    let mut components = Vec::new();
    for _ in 0..rank {
        let mut f = RationalFunction::one(field);
        for _ in 0..rng.gen_range(0..=2) {
            let root = FieldElement::from_rat(field, rint(roots[rng.gen_range(0..roots.len())]));
            let e = rng.gen_range(-2..=2);
            if e != 0 {
                f = f
                    .mul(&RationalFunction::new(FieldElement::one(field), vec![(root, e)]).unwrap())
                    .unwrap();
            }
        }
        components.push(f);
    }
    Plurifunction { components }
}

/// Transport of a divisor along a triple, yielding a valid isomorphism by
/// construction.
fn transport(
    d: &PpDivisor,
    psi: &SemilinearBaseMap,
    f: &QMat,
    pf: &Plurifunction,
) -> Result<(PpDivisor, PpdMorphism)> {
    let target_tail = d.tail().map(f)?;
    let moved = d
        .push_lattice(f, &target_tail)?
        .add_principal(pf)?
        .pull_base(&psi.inverse()?)?;
    let phi = PpdMorphism {
        psi: BaseMap::Map(psi.clone()),
        f_matrix: f.clone(),
        plurifn: pf.clone(),
    };
    Ok((moved, phi))
}

/// Composites of valid morphisms stay valid, and composition is associative.
pub fn morphism_composition_suite(cases: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = qq();
    let mut failures = Vec::new();
    let mut ran = 0usize;
    while ran < cases {
        let dim = rng.gen_range(1..=2);
        let d0 = random_ppdivisor(&mut rng, dim)?;
        let mut chain = Vec::new();
        let mut current = d0.clone();
        for _ in 0..3 {
            let psi = random_mobius(&mut rng, &field);
            let f = random_unimodular(&mut rng, dim);
            let pf = random_plurifunction(&mut rng, dim, &field);
            let (next, phi) = transport(&current, &psi, &f, &pf)?;
            chain.push((current.clone(), next.clone(), phi));
            current = next;
        }
        ran += 1;
        for (src, dst, phi) in &chain {
            let rep = verify_morphism(src, dst, phi)?;
            if !rep.valid {
                failures.push(format!("transported morphism invalid: {:?}", rep.witness));
            }
        }
        let ab = compose_morphisms(&chain[1].2, &chain[0].2)?;
        let rep = verify_morphism(&chain[0].0, &chain[1].1, &ab)?;
        if !rep.valid {
            failures.push(format!("composite invalid: {:?}", rep.witness));
        }
        let abc_left = compose_morphisms(&chain[2].2, &ab)?;
        let bc = compose_morphisms(&chain[2].2, &chain[1].2)?;
        let abc_right = compose_morphisms(&bc, &chain[0].2)?;
        if abc_left != abc_right {
            failures.push("composition is not associative".into());
        }
        if failures.len() > 4 {
            break;
        }
    }
    Ok(SuiteReport {
        name: "morphism-composition".into(),
        cases: ran,
        failures,
    })
}

/// Evaluation is a homomorphism in the functional, and the principal
/// polyhedral divisor is compatible with evaluation.
pub fn plurifunction_suite(cases: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = qq();
    let line = BaseVariety::line(&field);
    let mut failures = Vec::new();
    let mut ran = 0usize;
    while ran < cases {
        let dim = rng.gen_range(1..=2);
        let pf = random_plurifunction(&mut rng, dim, &field);
        let tail = random_cone(&mut rng, dim);
        let m1 = random_dual_functional(&mut rng, &tail);
        let m2 = random_dual_functional(&mut rng, &tail);
        ran += 1;
        let lhs = pf.eval(&m1.add(&m2))?;
        let rhs = pf.eval(&m1)?.mul(&pf.eval(&m2)?)?;
        if lhs != rhs {
            failures.push(format!("evaluation homomorphism fails at {m1:?}, {m2:?}"));
        }
        // div(f)(m) agrees with div(f(m)).
        let neutral = PpDivisor::new(line.clone(), dim, tail.clone(), vec![])?;
        let principal = neutral.add_principal(&pf)?;
        let ev = principal.evaluate(&m1)?;
        let direct = divisor_of_function(&pf.eval(&m1)?, &line)?;
        if ev != direct {
            failures.push(format!("principal divisor incompatible at {m1:?}"));
        }
        if failures.len() > 4 {
            break;
        }
    }
    Ok(SuiteReport {
        name: "plurifunction-evaluation".into(),
        cases: ran,
        failures,
    })
}

/// The exact simplex and Fourier-Motzkin elimination agree on random systems.
pub fn lp_agreement_suite(cases: usize, seed: u64) -> Result<SuiteReport> {
    use crate::lp::{fm_eliminate, solve, LinearProgram, LpStatus, Relation};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..cases {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=8);
        let mut p = LinearProgram::new((0..n).map(|i| format!("x{i}")).collect());
        p.objective = vec![Rat::zero(); n];
        for _ in 0..m {
            let coeffs: Vec<Rat> = (0..n).map(|_| rint(rng.gen_range(-3..=3))).collect();
            let rel = if rng.gen_bool(0.2) {
                Relation::Eq
            } else {
                Relation::Ge
            };
            p.constrain(coeffs, rel, rint(rng.gen_range(-4..=4)));
        }
        let s = solve(&p)?;
        let fm = fm_eliminate(&p)?;
        if (s.status != LpStatus::Infeasible) != fm {
            failures.push("solver and elimination disagree".into());
        }
        if s.status == LpStatus::Infeasible {
            if !p.is_farkas_witness(&s.farkas.unwrap()) {
                failures.push("invalid infeasibility certificate".into());
            }
        } else if !p.is_feasible_point(&s.assignment.unwrap()) {
            failures.push("optimal point infeasible".into());
        }
        if failures.len() > 4 {
            break;
        }
    }
    Ok(SuiteReport {
        name: "simplex-vs-elimination".into(),
        cases,
        failures,
    })
}

/// The full battery at the verification-plan counts.
pub fn run_all(scale: usize) -> Result<Vec<SuiteReport>> {
    let reports = vec![
        face_identities_suite(1000 * scale / 100, 101)?,
        superadditivity_suite(500 * scale / 100, 102)?,
        localization_identity_suite(500 * scale / 100, 103)?,
        morphism_composition_suite(200 * scale / 100, 104)?,
        plurifunction_suite(200 * scale / 100, 105)?,
        lp_agreement_suite(100 * scale / 100, 106)?,
    ];
    Ok(reports)
}
