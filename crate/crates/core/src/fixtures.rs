//! Built-in instances: the rational-surface divisorial fans, the quotient
//! fan of the three-fold projective space, the affine-line cylinder, the
//! toric line, the octahedral Mobius group, and a complete rank-3 toric fan
//! with no strictly concave support function.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::arith::{FieldAutomorphism, FieldElement, NumberField};
use crate::base::{
    BasePoint, BaseVariety, MobiusMatrix, Plurifunction, RationalFunction, SemilinearBaseMap,
};
use crate::error::Result;
use crate::fan::{closure_generate, CertificatePolicy, DivisorialFan};
use crate::galois::{GaloisFanAction, SemilinearFanMorphism, ToricFan};
use crate::polyhedral::{Cone, Polyhedron};
use crate::ppdiv::PpDivisor;
use crate::rat::{rat, rint, QMat, QVec, Rat};

fn ray1(dir: i64) -> Cone {
    Cone::from_rays(1, &[QVec::from_ints(&[dir])]).expect("rank-1 ray")
}

fn seg1(a: Rat, b: Rat) -> Polyhedron {
    Polyhedron::from_vertices(1, &[QVec(vec![a]), QVec(vec![b])], &Cone::zero(1)).expect("segment")
}

fn halfline(vertex: Rat, dir: i64) -> Polyhedron {
    Polyhedron::from_vertices(1, &[QVec(vec![vertex])], &ray1(dir)).expect("half line")
}

fn pt0(field: &Arc<NumberField>) -> BasePoint {
    BasePoint::zero(field)
}

/// The four maximal polyhedral divisors of the rank-2 rational surface with
/// self-intersection parameter `r`, as a complexity-one family over the line
/// with the diagonal one-parameter subgroup.
pub fn hirzebruch_members(field: &Arc<NumberField>, r: i64) -> Result<Vec<(String, PpDivisor)>> {
    assert!(r >= 1);
    let line = BaseVariety::line(field);
    let zero = pt0(field);
    let inf = BasePoint::Infinity;
    let declared = [zero.clone(), inf.clone()];
    let cusp = rat(-1, r + 1);

    let d1 = PpDivisor::new(
        line.clone(),
        1,
        ray1(1),
        vec![(zero.clone(), halfline(rint(1), 1))],
    )?
    .with_declared(&declared);
    let d2 = PpDivisor::new(
        line.clone(),
        1,
        Cone::zero(1),
        vec![
            (inf.clone(), seg1(cusp.clone(), rint(0))),
            (zero.clone(), Polyhedron::empty(1, Cone::zero(1))),
        ],
    )?
    .with_declared(&declared);
    let d3 = PpDivisor::new(
        line.clone(),
        1,
        ray1(-1),
        vec![(inf.clone(), halfline(cusp, -1))],
    )?
    .with_declared(&declared);
    let d4 = PpDivisor::new(
        line.clone(),
        1,
        Cone::zero(1),
        vec![
            (zero.clone(), seg1(rint(0), rint(1))),
            (inf.clone(), Polyhedron::empty(1, Cone::zero(1))),
        ],
    )?
    .with_declared(&declared);
    Ok(vec![
        ("D1".into(), d1),
        ("D2".into(), d2),
        ("D3".into(), d3),
        ("D4".into(), d4),
    ])
}

pub fn hirzebruch_fan(field: &Arc<NumberField>, r: i64, bound: u32) -> Result<DivisorialFan> {
    closure_generate(
        &hirzebruch_members(field, r)?,
        bound,
        CertificatePolicy::Require,
    )
}

/// The toric fan of the same surface: rays (1,0), (0,1), (-1,r), (0,-1) with
/// the four full cones between consecutive rays.
pub fn hirzebruch_toric_fan(r: i64) -> Result<ToricFan> {
    let u1 = QVec::from_ints(&[1, 0]);
    let u2 = QVec::from_ints(&[0, 1]);
    let u3 = QVec::from_ints(&[-1, r]);
    let u4 = QVec::from_ints(&[0, -1]);
    let cones = vec![
        Cone::from_rays(2, &[u1.clone(), u2.clone()])?,
        Cone::from_rays(2, &[u2, u3.clone()])?,
        Cone::from_rays(2, &[u3, u4.clone()])?,
        Cone::from_rays(2, &[u4, u1])?,
    ];
    ToricFan::new(2, &cones)
}

/// Quadrant cones of the plane.
fn quadrant(sx: i64, sy: i64) -> Cone {
    Cone::from_rays(2, &[QVec::from_ints(&[sx, 0]), QVec::from_ints(&[0, sy])]).expect("quadrant")
}

/// The four-member fan over the line for the three-fold projective space
/// with the two-torus action [x0:x1:x2:x3] -> [s x0 : t x1 : st x2 : x3] and
/// quotient coordinate x0 x1 / (x2 x3). Tails are the four quadrants.
pub fn p3_members(field: &Arc<NumberField>) -> Result<Vec<(String, PpDivisor)>> {
    let line = BaseVariety::line(field);
    let zero = pt0(field);
    let inf = BasePoint::Infinity;
    let declared = [zero.clone(), inf.clone()];
    let poly = |pts: &[[i64; 2]], tail: &Cone| -> Result<Polyhedron> {
        let vs: Vec<QVec> = pts.iter().map(|p| QVec::from_ints(p)).collect();
        Polyhedron::from_vertices(2, &vs, tail)
    };
    let ul = quadrant(-1, 1);
    let dr = quadrant(1, -1);
    let dl = quadrant(-1, -1);
    let ur = quadrant(1, 1);

    let d0 = PpDivisor::new(
        line.clone(),
        2,
        ul.clone(),
        vec![(inf.clone(), poly(&[[0, 1], [-1, 0]], &ul)?)],
    )?
    .with_declared(&declared);
    let d1 = PpDivisor::new(
        line.clone(),
        2,
        dr.clone(),
        vec![
            (zero.clone(), poly(&[[1, -1]], &dr)?),
            (inf.clone(), poly(&[[-1, 0], [0, 1]], &dr)?),
        ],
    )?
    .with_declared(&declared);
    let d2 = PpDivisor::new(
        line.clone(),
        2,
        dl.clone(),
        vec![
            (zero.clone(), poly(&[[0, 0], [1, -1]], &dl)?),
            (inf.clone(), poly(&[[-1, 0]], &dl)?),
        ],
    )?
    .with_declared(&declared);
    let d3 = PpDivisor::new(
        line.clone(),
        2,
        ur.clone(),
        vec![
            (zero.clone(), poly(&[[0, 0], [1, -1]], &ur)?),
            (inf.clone(), poly(&[[0, 1]], &ur)?),
        ],
    )?
    .with_declared(&declared);
    Ok(vec![
        ("D0".into(), d0),
        ("D1".into(), d1),
        ("D2".into(), d2),
        ("D3".into(), d3),
    ])
}

pub fn p3_fan(field: &Arc<NumberField>, bound: u32) -> Result<DivisorialFan> {
    closure_generate(&p3_members(field)?, bound, CertificatePolicy::Require)
}

/// The order-two action on the quotient fan: coordinatewise conjugation on
/// the base, the negation lattice map, and the twist t^(1,-1), swapping
/// D0 with D1 and D2 with D3.
pub fn p3_action(fan: &DivisorialFan, field: &Arc<NumberField>) -> Result<GaloisFanAction> {
    let conj = FieldAutomorphism::conjugation(field)?;
    let psi = SemilinearBaseMap::new(MobiusMatrix::identity(field), conj)?;
    let t = RationalFunction::coordinate(field);
    let plurifn = Plurifunction::from_terms(2, field, &[(QVec::from_ints(&[1, -1]), t)])?;
    let mut g = SemilinearFanMorphism {
        gamma: "g".into(),
        psi,
        f_matrix: QMat::from_ints(&[vec![-1, 0], vec![0, -1]]),
        plurifn,
        assignment: BTreeMap::new(),
    };
    g.assignment = transport_assignment(fan, &g)?;
    let group = crate::arith::FiniteGroup::from_table(
        vec!["e".into(), "g".into()],
        vec![vec![0, 1], vec![1, 0]],
    )?;
    let mut morphisms = BTreeMap::new();
    morphisms.insert("e".into(), identity_fan_morphism(fan, field, "e")?);
    morphisms.insert("g".into(), g);
    Ok(GaloisFanAction { group, morphisms })
}

/// Derives the member assignment structurally: each member is transported
/// along the triple and matched against the fan.
pub fn transport_assignment(
    fan: &DivisorialFan,
    g: &SemilinearFanMorphism,
) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (name, d) in &fan.members {
        let tail = d.tail().map(&g.f_matrix)?;
        let moved = crate::galois::transport_member(d, g, &tail)?;
        let target = fan
            .members
            .iter()
            .find(|(_, e)| *e == moved)
            .map(|(n, _)| n.clone())
            .ok_or_else(|| {
                crate::error::Error::Invalid(format!(
                    "transport of {name} does not land on a fan member"
                ))
            })?;
        out.insert(name.clone(), target);
    }
    Ok(out)
}

pub fn identity_fan_morphism(
    fan: &DivisorialFan,
    field: &Arc<NumberField>,
    label: &str,
) -> Result<SemilinearFanMorphism> {
    let mut assignment = BTreeMap::new();
    for name in fan.member_names() {
        assignment.insert(name.clone(), name);
    }
    Ok(SemilinearFanMorphism {
        gamma: label.into(),
        psi: SemilinearBaseMap::identity(field),
        f_matrix: QMat::identity(fan.rank),
        plurifn: Plurifunction::one(fan.rank, field),
        assignment,
    })
}

/// The three-member fan of the affine-line cylinder over the line: two
/// charts with one empty coefficient each, and their common torus chart.
pub fn cylinder_members(field: &Arc<NumberField>) -> Result<Vec<(String, PpDivisor)>> {
    let line = BaseVariety::line(field);
    let zero = pt0(field);
    let inf = BasePoint::Infinity;
    let tail = ray1(1);
    let delta = halfline(rint(1), 1);
    let m1 = PpDivisor::new(
        line.clone(),
        1,
        tail.clone(),
        vec![
            (zero.clone(), Polyhedron::empty(1, tail.clone())),
            (inf.clone(), delta.clone()),
        ],
    )?;
    let m2 = PpDivisor::new(
        line.clone(),
        1,
        tail.clone(),
        vec![
            (zero.clone(), delta),
            (inf.clone(), Polyhedron::empty(1, tail.clone())),
        ],
    )?;
    let m3 = PpDivisor::new(
        line.clone(),
        1,
        tail.clone(),
        vec![
            (zero, Polyhedron::empty(1, tail.clone())),
            (inf, Polyhedron::empty(1, tail.clone())),
        ],
    )?;
    Ok(vec![("M1".into(), m1), ("M2".into(), m2), ("M3".into(), m3)])
}

/// The toric line as a point-base fan: both rays and the origin.
pub fn p1_point_fan(bound: u32) -> Result<DivisorialFan> {
    let members = vec![
        ("Cplus".to_string(), PpDivisor::toric(ray1(1))),
        ("Cminus".to_string(), PpDivisor::toric(ray1(-1))),
        ("Corigin".to_string(), PpDivisor::toric(Cone::zero(1))),
    ];
    closure_generate(&members, bound, CertificatePolicy::Require)
}

pub fn p1_toric_fan() -> Result<ToricFan> {
    ToricFan::new(1, &[ray1(1), ray1(-1)])
}

/// The three semilinear involutions of the point-base line fan over the
/// Gaussian rationals: (twist, id, 1), (twist, -id, 1), (twist, -id, -1).
pub fn p1_form_actions(fan: &DivisorialFan) -> Result<Vec<GaloisFanAction>> {
    let field = NumberField::gaussian();
    let conj = FieldAutomorphism::conjugation(&field)?;
    let psi = SemilinearBaseMap::new(MobiusMatrix::identity(&field), conj)?;
    let group = crate::arith::FiniteGroup::from_table(
        vec!["e".into(), "g".into()],
        vec![vec![0, 1], vec![1, 0]],
    )?;
    let id_assignment: BTreeMap<String, String> = fan
        .member_names()
        .into_iter()
        .map(|n| (n.clone(), n))
        .collect();
    let swap_assignment: BTreeMap<String, String> = [
        ("Cplus", "Cminus"),
        ("Cminus", "Cplus"),
        ("Corigin", "Corigin"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    let minus_one = Plurifunction {
        components: vec![RationalFunction::constant_fn(FieldElement::from_rat(
            &field,
            rint(-1),
        ))?],
    };
    let mut actions = Vec::new();
    for (f_sign, pf, assignment) in [
        (1i64, Plurifunction::one(1, &field), id_assignment.clone()),
        (-1, Plurifunction::one(1, &field), swap_assignment.clone()),
        (-1, minus_one, swap_assignment),
    ] {
        let g = SemilinearFanMorphism {
            gamma: "g".into(),
            psi: psi.clone(),
            f_matrix: QMat::from_ints(&[vec![f_sign]]),
            plurifn: pf,
            assignment,
        };
        let mut morphisms = BTreeMap::new();
        morphisms.insert("e".into(), identity_fan_morphism(fan, &field, "e")?);
        morphisms.insert("g".into(), g);
        actions.push(GaloisFanAction {
            group: group.clone(),
            morphisms,
        });
    }
    Ok(actions)
}

/// A synthetic pair violating valuative separatedness: with unit masses at
/// both points the weighted sums are [0,2] on both sides while the
/// intersection sums to the single point {1}.
pub fn separation_failure_pair(field: &Arc<NumberField>) -> Result<(PpDivisor, PpDivisor)> {
    let line = BaseVariety::line(field);
    let p = pt0(field);
    let q = BasePoint::finite_i64(field, 1);
    let d = PpDivisor::new(
        line.clone(),
        1,
        Cone::zero(1),
        vec![
            (p.clone(), seg1(rint(0), rint(1))),
            (q.clone(), seg1(rint(0), rint(1))),
        ],
    )?;
    let d_prime = PpDivisor::new(
        line,
        1,
        Cone::zero(1),
        vec![(p, seg1(rint(1), rint(2))), (q, seg1(rint(-1), rint(0)))],
    )?;
    Ok((d, d_prime))
}

/// The 24 Mobius transformations permuting {0, inf, 1, -1, i, -i}, generated
/// over the Gaussian rationals by z -> iz and z -> (z+i)/(iz+1). Closure is
/// certified by the caller.
pub fn octahedral_mobius_group(field: &Arc<NumberField>) -> Result<Vec<SemilinearBaseMap>> {
    let i = FieldElement::generator(field);
    let one = FieldElement::one(field);
    let zero = FieldElement::zero(field);
    let a = MobiusMatrix::new([i.clone(), zero.clone(), zero.clone(), one.clone()])?;
    let c = MobiusMatrix::new([one.clone(), i.clone(), i, one])?;
    let idt = FieldAutomorphism::identity(field);
    let gens = vec![
        SemilinearBaseMap::new(a, idt.clone())?,
        SemilinearBaseMap::new(c, idt)?,
    ];
    let (elems, _) = crate::arith::generate_group(
        &gens,
        |x, y| x.compose(y).expect("group closure composition"),
        64,
    )?;
    Ok(elems)
}

/// The transport family for the orbit computation: each Mobius element as a
/// fan morphism with trivial lattice part and trivial twist.
pub fn mobius_transport_morphisms(
    maps: &[SemilinearBaseMap],
    rank: usize,
) -> Vec<SemilinearFanMorphism> {
    maps.iter()
        .enumerate()
        .map(|(k, psi)| SemilinearFanMorphism {
            gamma: format!("m{k}"),
            psi: psi.clone(),
            f_matrix: QMat::identity(rank),
            plurifn: Plurifunction::one(rank, psi.field()),
            assignment: BTreeMap::new(),
        })
        .collect()
}

/// A complete rank-3 fan with no strictly concave support function: the fan
/// over the boundary of the cube with each face triangulated, two of the six
/// diagonals chosen in the twisted orientation.
pub fn nonprojective_toric_fan() -> Result<ToricFan> {
    let v = |x: i64, y: i64, z: i64| QVec::from_ints(&[x, y, z]);
    let faces: Vec<[QVec; 4]> = vec![
        [v(1, -1, -1), v(1, 1, -1), v(1, 1, 1), v(1, -1, 1)],
        [v(-1, -1, -1), v(-1, 1, -1), v(-1, 1, 1), v(-1, -1, 1)],
        [v(-1, 1, -1), v(1, 1, -1), v(1, 1, 1), v(-1, 1, 1)],
        [v(-1, -1, -1), v(1, -1, -1), v(1, -1, 1), v(-1, -1, 1)],
        [v(-1, -1, 1), v(1, -1, 1), v(1, 1, 1), v(-1, 1, 1)],
        [v(-1, -1, -1), v(1, -1, -1), v(1, 1, -1), v(-1, 1, -1)],
    ];
    // Faces 1 and 2 take the other diagonal; the cycle this creates admits
    // no strictly concave support function.
    let twisted = [false, true, true, false, false, false];
    let mut cones = Vec::new();
    for (quad, flip) in faces.iter().zip(twisted) {
        let (t1, t2) = if flip {
            ([0usize, 1, 3], [1usize, 2, 3])
        } else {
            ([0usize, 1, 2], [0usize, 2, 3])
        };
        for tri in [t1, t2] {
            let gens: Vec<QVec> = tri.iter().map(|&i| quad[i].clone()).collect();
            cones.push(Cone::from_rays(3, &gens)?);
        }
    }
    ToricFan::new(3, &cones)
}

/// Completeness of a simplicial-or-not fan: every facet of a maximal cone is
/// shared by exactly one other maximal cone.
pub fn toric_fan_is_complete(fan: &ToricFan) -> Result<bool> {
    let maximal = fan.maximal();
    if maximal.iter().any(|c| c.span_dim() != fan.rank) {
        return Ok(false);
    }
    for c in &maximal {
        for f in c.faces() {
            if f.span_dim() + 1 != fan.rank {
                continue;
            }
            let mut sharers = 0;
            for d in &maximal {
                if d.contains_cone(&f) {
                    sharers += 1;
                }
            }
            if sharers != 2 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
