//! Semilinear morphisms and actions on divisorial fans, toric fan
//! automorphism groups, orbit subfans, and the descent checks.

use std::collections::BTreeMap;

use crate::arith::{generate_group, FiniteGroup};
use crate::base::{BasePoint, Plurifunction, SemilinearBaseMap};
use crate::error::{Error, Result};
use crate::fan::{
    closure_generate, maximal_cones, quasiprojectivity_check, toric_quasiprojectivity,
    CertificatePolicy, DivisorialFan, DivisorialSupportFunction,
};
use crate::polyhedral::Cone;
use crate::ppdiv::{
    compose_morphisms, verify_isomorphism, BaseMap, PpDivisor, PpdMorphism,
};
use crate::rat::{QMat, QVec};

pub const FAN_AUT_RANK_BUDGET: usize = 3;
pub const FAN_AUT_RAY_BUDGET: usize = 24;
pub const HOM_ENUM_BUDGET: usize = 24;

/// A set of cones stable under faces and pairwise intersections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricFan {
    pub rank: usize,
    pub cones: Vec<Cone>,
}

impl ToricFan {
    /// Builds the fan by closing the given cones under faces, then validates
    /// that pairwise intersections are common faces.
    pub fn new(rank: usize, cones: &[Cone]) -> Result<ToricFan> {
        let mut all: Vec<Cone> = Vec::new();
        for c in cones {
            if c.dim() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: c.dim(),
                });
            }
            for f in c.faces() {
                if !all.contains(&f) {
                    all.push(f);
                }
            }
        }
        all.sort();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                let meet = all[i].intersect(&all[j])?;
                if !all.contains(&meet)
                    || all[i].face_witness(&meet)?.is_none()
                    || all[j].face_witness(&meet)?.is_none()
                {
                    return Err(Error::NotAFan(format!("{:?}", all[i]), format!("{:?}", all[j])));
                }
            }
        }
        Ok(ToricFan { rank, cones: all })
    }

    pub fn maximal(&self) -> Vec<Cone> {
        maximal_cones(&self.cones)
    }

    /// Primitive generators of all rays of the fan.
    pub fn rays(&self) -> Vec<QVec> {
        let mut out: Vec<QVec> = Vec::new();
        for c in &self.cones {
            for r in c.rays() {
                if !out.contains(r) {
                    out.push(r.clone());
                }
            }
        }
        out.sort();
        out
    }

    pub fn contains_cone_of(&self, c: &Cone) -> bool {
        self.cones.contains(c)
    }
}

/// A lattice automorphism preserving the fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanAutomorphism {
    pub matrix: QMat,
}

fn is_fan_automorphism(sigma: &ToricFan, f: &QMat) -> bool {
    if !f.is_integral() {
        return false;
    }
    let det = f.det();
    if det != crate::rat::rint(1) && det != crate::rat::rint(-1) {
        return false;
    }
    // Rays must permute and every cone must map onto a cone of the fan.
    let rays = sigma.rays();
    let images: Vec<QVec> = rays.iter().map(|r| f.apply(r).primitive()).collect();
    for img in &images {
        if !rays.contains(img) {
            return false;
        }
    }
    for c in &sigma.cones {
        let mapped = match c.map(f) {
            Ok(m) => m,
            Err(_) => return false,
        };
        if !sigma.contains_cone_of(&mapped) {
            return false;
        }
    }
    true
}

/// Enumerates the finite group of lattice automorphisms preserving the fan:
/// candidate matrices come from mapping an independent ray basis to ray
/// tuples, filtered by determinant and cone preservation.
pub fn fan_automorphism_group(sigma: &ToricFan) -> Result<(Vec<FanAutomorphism>, FiniteGroup)> {
    if sigma.rank > FAN_AUT_RANK_BUDGET {
        return Err(Error::RankBudgetExceeded {
            op: "fan_automorphism_group",
            budget: FAN_AUT_RANK_BUDGET,
            got: sigma.rank,
        });
    }
    let rays = sigma.rays();
    if rays.len() > FAN_AUT_RAY_BUDGET {
        return Err(Error::SizeBudgetExceeded(format!(
            "{} rays exceed the {FAN_AUT_RAY_BUDGET}-ray budget",
            rays.len()
        )));
    }
    // A maximal independent subset of the rays.
    let mut basis: Vec<QVec> = Vec::new();
    for r in &rays {
        let mut probe = basis.clone();
        probe.push(r.clone());
        if crate::rat::rank_of(&probe) > basis.len() {
            basis.push(r.clone());
        }
    }
    if basis.len() < sigma.rank {
        return Err(Error::Invalid(
            "fan rays do not span the ambient lattice".into(),
        ));
    }
    let b_mat = QMat {
        rows: basis.clone(),
    }
    .transpose();
    let b_inv = b_mat.inverse().expect("independent basis");
    let mut autos: Vec<QMat> = Vec::new();
    let k = basis.len();
    let mut pick = vec![0usize; k];
    'enumerate: loop {
        let targets: Vec<QVec> = pick.iter().map(|&i| rays[i].clone()).collect();
        let t_mat = QMat { rows: targets }.transpose();
        let f = t_mat.mul(&b_inv);
        if is_fan_automorphism(sigma, &f) && !autos.contains(&f) {
            autos.push(f);
        }
        let mut j = 0;
        loop {
            if j == k {
                break 'enumerate;
            }
            pick[j] += 1;
            if pick[j] < rays.len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
    let (elems, table) = generate_group(&autos, |a, b| a.mul(b), 1 << 12)?;
    for e in &elems {
        debug_assert!(is_fan_automorphism(sigma, e), "closure left the group");
    }
    let labels: Vec<String> = (0..elems.len()).map(|i| format!("a{i}")).collect();
    let group = FiniteGroup::from_table(labels, table)?;
    let autos = elems.into_iter().map(|matrix| FanAutomorphism { matrix }).collect();
    Ok((autos, group))
}

/// One semilinear symmetry of a divisorial fan: a global triple plus the
/// member assignment it induces.
#[derive(Clone, Debug)]
pub struct SemilinearFanMorphism {
    pub gamma: String,
    pub psi: SemilinearBaseMap,
    pub f_matrix: QMat,
    pub plurifn: Plurifunction,
    pub assignment: BTreeMap<String, String>,
}

impl SemilinearFanMorphism {
    pub fn triple(&self) -> PpdMorphism {
        PpdMorphism {
            psi: BaseMap::Map(self.psi.clone()),
            f_matrix: self.f_matrix.clone(),
            plurifn: self.plurifn.clone(),
        }
    }

    /// The triple with the plurifunction restricted to the member's support.
    pub fn triple_for(&self, member: &PpDivisor) -> Result<PpdMorphism> {
        let mut allowed = member.support_points();
        allowed.push(BasePoint::Infinity);
        let restricted = self.plurifn.restrict_to_points(&allowed)?;
        Ok(PpdMorphism {
            psi: BaseMap::Map(self.psi.clone()),
            f_matrix: self.f_matrix.clone(),
            plurifn: restricted,
        })
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ActionReport {
    pub valid: bool,
    pub witness: Option<String>,
}

fn invalid(witness: String) -> ActionReport {
    ActionReport {
        valid: false,
        witness: Some(witness),
    }
}

/// Verifies one semilinear fan morphism: each member maps isomorphically to
/// its assigned target and the assignment respects the recorded face poset.
pub fn verify_semilinear_fan_morphism(
    fan: &DivisorialFan,
    g: &SemilinearFanMorphism,
) -> Result<ActionReport> {
    for (name, _) in &fan.members {
        if !g.assignment.contains_key(name) {
            return Ok(invalid(format!("assignment misses member {name}")));
        }
    }
    for (name, target_name) in &g.assignment {
        let Some(src) = fan.member(name) else {
            return Ok(invalid(format!("unknown member {name}")));
        };
        let Some(dst) = fan.member(target_name) else {
            return Ok(invalid(format!("unknown target {target_name}")));
        };
        let triple = g.triple_for(src)?;
        let report = verify_isomorphism(src, dst, &triple)?;
        if !report.valid {
            return Ok(invalid(format!(
                "member {name} -> {target_name}: {}",
                report.witness.unwrap_or_default()
            )));
        }
    }
    // Face compatibility against the recorded poset.
    let poset = fan.gluing_poset();
    for e in &fan.edges {
        let sub_name = &fan.members[e.sub].0;
        let sup_name = &fan.members[e.sup].0;
        let sub_img = &g.assignment[sub_name];
        let sup_img = &g.assignment[sup_name];
        let si = fan.member_index(sub_img).expect("assigned member exists");
        let pi = fan.member_index(sup_img).expect("assigned member exists");
        if !poset.is_face(si, pi) {
            return Ok(invalid(format!(
                "assignment breaks the face {sub_name} ⪯ {sup_name}"
            )));
        }
    }
    Ok(ActionReport {
        valid: true,
        witness: None,
    })
}

/// A group worth of semilinear fan morphisms.
#[derive(Clone, Debug)]
pub struct GaloisFanAction {
    pub group: FiniteGroup,
    pub morphisms: BTreeMap<String, SemilinearFanMorphism>,
}

impl GaloisFanAction {
    pub fn morphism(&self, label: &str) -> Option<&SemilinearFanMorphism> {
        self.morphisms.get(label)
    }
}

/// Verifies a semilinear group action on a fan: the group law, the identity
/// element, elementwise morphism validity, composition of assignments, and
/// the exact plurifunction cocycle.
pub fn verify_galois_action(fan: &DivisorialFan, act: &GaloisFanAction) -> Result<ActionReport> {
    let law = act.group.verify_presentation()?;
    if !law.valid {
        return Ok(invalid("group table fails the group laws".into()));
    }
    for label in &act.group.elements {
        if !act.morphisms.contains_key(label) {
            return Ok(invalid(format!("no morphism for element {label}")));
        }
    }
    let id_label = &act.group.elements[act.group.identity];
    let id = &act.morphisms[id_label];
    if !id.psi.is_identity()
        || id.f_matrix != QMat::identity(fan.rank)
        || !id.plurifn.is_one()
        || id.assignment.iter().any(|(k, v)| k != v)
    {
        return Ok(invalid("identity element does not act trivially".into()));
    }
    for (label, g) in &act.morphisms {
        if g.gamma != *label {
            return Ok(invalid(format!("morphism labeled {label} carries {}", g.gamma)));
        }
        let report = verify_semilinear_fan_morphism(fan, g)?;
        if !report.valid {
            return Ok(invalid(format!(
                "element {label}: {}",
                report.witness.unwrap_or_default()
            )));
        }
    }
    // Composition and cocycle over all pairs.
    let n = act.group.order();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            pairs.push((i, j));
        }
    }
    let results: Vec<Result<Option<String>>> = crate::par::map_collect(pairs, |(i, j)| {
        let gi = &act.morphisms[&act.group.elements[i]];
        let gj = &act.morphisms[&act.group.elements[j]];
        let k = act.group.mul(i, j);
        let gk = &act.morphisms[&act.group.elements[k]];
        // Assignments compose.
        for (name, _) in &fan.members {
            let via = &gi.assignment[&gj.assignment[name]];
            if *via != gk.assignment[name] {
                return Ok(Some(format!(
                    "assignment of pair ({}, {}) disagrees at {name}",
                    act.group.elements[i], act.group.elements[j]
                )));
            }
        }
        // Triples compose, including the plurifunction cocycle.
        let composed = compose_morphisms(&gi.triple(), &gj.triple())?;
        let stored = gk.triple();
        if composed.f_matrix != stored.f_matrix {
            return Ok(Some(format!(
                "lattice part of pair ({}, {})",
                act.group.elements[i], act.group.elements[j]
            )));
        }
        let (BaseMap::Map(cpsi), BaseMap::Map(spsi)) = (&composed.psi, &stored.psi) else {
            return Ok(Some("unexpected point collapse".into()));
        };
        if cpsi != spsi {
            return Ok(Some(format!(
                "base part of pair ({}, {})",
                act.group.elements[i], act.group.elements[j]
            )));
        }
        if composed.plurifn != stored.plurifn {
            return Ok(Some(format!(
                "plurifunction cocycle fails at pair ({}, {})",
                act.group.elements[i], act.group.elements[j]
            )));
        }
        Ok(None)
    });
    for r in results {
        if let Some(w) = r? {
            return Ok(invalid(w));
        }
    }
    Ok(ActionReport {
        valid: true,
        witness: None,
    })
}

/// Transport of a member along a semilinear morphism: the unique divisor D'
/// with psi^*(D') = F_*(D) + div(f restricted to D).
pub fn transport_member(d: &PpDivisor, g: &SemilinearFanMorphism, target_tail: &Cone) -> Result<PpDivisor> {
    let triple = g.triple_for(d)?;
    let pushed = d
        .push_lattice(&triple.f_matrix, target_tail)?
        .add_principal(&triple.plurifn)?;
    pushed.pull_base(&g.psi.inverse()?)
}

/// The smallest intersection-closed family containing all translates of the
/// member, with its maximal-member count.
pub fn orbit_subfan(
    fan: &DivisorialFan,
    morphisms: &[SemilinearFanMorphism],
    member_name: &str,
    bound: u32,
    policy: CertificatePolicy,
) -> Result<DivisorialFan> {
    let d = fan
        .member(member_name)
        .ok_or_else(|| Error::Invalid(format!("unknown member {member_name}")))?;
    let mut seed: Vec<(String, PpDivisor)> = Vec::new();
    for g in morphisms {
        let target_tail = d.tail().map(&g.f_matrix)?;
        let translate = transport_member(d, g, &target_tail)?;
        if !seed.iter().any(|(_, e)| *e == translate) {
            seed.push((format!("{}@{}", member_name, g.gamma), translate));
        }
    }
    closure_generate(&seed, bound, policy)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct OrbitResult {
    pub member: String,
    pub orbit_maximal_members: usize,
    pub quasi_projective: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct DescentReport {
    pub stable: bool,
    pub orbit_results: Vec<OrbitResult>,
    pub conclusion: bool,
}

/// Descent check for a fan with a verified semilinear action: every member's
/// orbit subfan must be quasi-projective.
pub fn tvariety_descent_check(
    fan: &DivisorialFan,
    act: &GaloisFanAction,
    bound: u32,
) -> Result<(DescentReport, Vec<Option<DivisorialSupportFunction>>)> {
    let verdict = verify_galois_action(fan, act)?;
    if !verdict.valid {
        return Ok((
            DescentReport {
                stable: false,
                orbit_results: Vec::new(),
                conclusion: false,
            },
            Vec::new(),
        ));
    }
    let morphisms: Vec<SemilinearFanMorphism> = act.morphisms.values().cloned().collect();
    let mut results = Vec::new();
    let mut witnesses = Vec::new();
    let mut conclusion = true;
    for (name, _) in &fan.members {
        let orbit = orbit_subfan(fan, &morphisms, name, bound, CertificatePolicy::Skip)?;
        let witness = quasiprojectivity_check(&orbit, None)?;
        let qp = witness.is_some();
        conclusion &= qp;
        results.push(OrbitResult {
            member: name.clone(),
            orbit_maximal_members: orbit.maximal_members().len(),
            quasi_projective: qp,
        });
        witnesses.push(witness);
    }
    Ok((
        DescentReport {
            stable: true,
            orbit_results: results,
            conclusion,
        },
        witnesses,
    ))
}

/// Checks that a labeled family of matrices is a group homomorphism into the
/// automorphisms of the fan.
pub fn verify_toric_hom(
    sigma: &ToricFan,
    group: &FiniteGroup,
    images: &BTreeMap<String, QMat>,
) -> Result<()> {
    for label in &group.elements {
        let m = images
            .get(label)
            .ok_or_else(|| Error::NotAHomomorphism(format!("no image for {label}")))?;
        if !is_fan_automorphism(sigma, m) {
            return Err(Error::NotAHomomorphism(format!(
                "image of {label} does not preserve the fan"
            )));
        }
    }
    for i in 0..group.order() {
        for j in 0..group.order() {
            let k = group.mul(i, j);
            let lhs = images[&group.elements[i]].mul(&images[&group.elements[j]]);
            if lhs != images[&group.elements[k]] {
                return Err(Error::NotAHomomorphism(format!(
                    "images of ({}, {}) do not compose",
                    group.elements[i], group.elements[j]
                )));
            }
        }
    }
    Ok(())
}

/// Toric descent: per cone, the orbit fan under the homomorphism must admit
/// a strictly concave support function.
pub fn toric_descent_check(
    sigma: &ToricFan,
    group: &FiniteGroup,
    images: &BTreeMap<String, QMat>,
) -> Result<DescentReport> {
    verify_toric_hom(sigma, group, images)?;
    let mut results = Vec::new();
    let mut conclusion = true;
    for (i, cone) in maximal_cones(&sigma.cones).iter().enumerate() {
        let mut orbit: Vec<Cone> = Vec::new();
        for m in images.values() {
            let img = cone.map(m)?;
            for f in img.faces() {
                if !orbit.contains(&f) {
                    orbit.push(f);
                }
            }
        }
        // Close under intersections.
        loop {
            let mut added = false;
            let snapshot = orbit.clone();
            for a in &snapshot {
                for b in &snapshot {
                    let meet = a.intersect(b)?;
                    if !orbit.contains(&meet) {
                        orbit.push(meet);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        let qp = toric_quasiprojectivity(sigma.rank, &orbit)?.is_some();
        conclusion &= qp;
        results.push(OrbitResult {
            member: format!("cone{i}"),
            orbit_maximal_members: maximal_cones(&orbit).len(),
            quasi_projective: qp,
        });
    }
    Ok(DescentReport {
        stable: true,
        orbit_results: results,
        conclusion,
    })
}

/// Exhaustively enumerates the group homomorphisms between two small finite
/// groups (by images of a generating sequence, then full-table check).
pub fn enumerate_homs(src: &FiniteGroup, dst: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    if src.order() > HOM_ENUM_BUDGET {
        return Err(Error::SizeBudgetExceeded(format!(
            "homomorphism enumeration supports order <= {HOM_ENUM_BUDGET}"
        )));
    }
    // Greedy generating sequence.
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![src.identity];
    while span.len() < src.order() {
        let next = (0..src.order()).find(|e| !span.contains(e)).unwrap();
        gens.push(next);
        // Regenerate the span.
        span = vec![src.identity];
        loop {
            let mut added = false;
            let snapshot = span.clone();
            for &a in &snapshot {
                for &g in &gens {
                    for x in [src.mul(a, g), src.mul(g, a)] {
                        if !span.contains(&x) {
                            span.push(x);
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut images = vec![0usize; gens.len()];
    'assign: loop {
        // Try to extend the generator images to a full homomorphism by
        // breadth-first search over words.
        let mut hom: Vec<Option<usize>> = vec![None; src.order()];
        hom[src.identity] = Some(dst.identity);
        let mut frontier = vec![src.identity];
        let mut consistent = true;
        while let Some(a) = frontier.pop() {
            let ha = hom[a].unwrap();
            for (gi, &g) in gens.iter().enumerate() {
                let b = src.mul(a, g);
                let hb = dst.mul(ha, images[gi]);
                match hom[b] {
                    None => {
                        hom[b] = Some(hb);
                        frontier.push(b);
                    }
                    Some(prev) if prev != hb => {
                        consistent = false;
                        break;
                    }
                    _ => {}
                }
            }
            if !consistent {
                break;
            }
        }
        if consistent && hom.iter().all(|h| h.is_some()) {
            let map: Vec<usize> = hom.into_iter().map(|h| h.unwrap()).collect();
            let is_hom = (0..src.order()).all(|i| {
                (0..src.order()).all(|j| map[src.mul(i, j)] == dst.mul(map[i], map[j]))
            });
            if is_hom && !out.contains(&map) {
                out.push(map);
            }
        }
        let mut j = 0;
        loop {
            if j == images.len() {
                break 'assign;
            }
            images[j] += 1;
            if images[j] < dst.order() {
                break;
            }
            images[j] = 0;
            j += 1;
        }
        if images.is_empty() {
            break;
        }
    }
    if gens.is_empty() {
        // Trivial source group.
        out.push(vec![dst.identity; src.order()]);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// A localized morphism: a projective modification leg (trivial on curve
/// bases) plus an inner triple. Nontrivial legs are stored as declared data
/// and only the inner triple is verified.
#[derive(Clone, Debug)]
pub struct LocalizedMorphism {
    pub kappa_is_identity: bool,
    pub inner: PpdMorphism,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct LocalizedMorphismReport {
    pub inner_valid: bool,
    pub kappa_verified: bool,
    pub flagged: bool,
}

pub fn verify_localized_morphism(
    src: &PpDivisor,
    dst: &PpDivisor,
    m: &LocalizedMorphism,
) -> Result<LocalizedMorphismReport> {
    let inner = crate::ppdiv::verify_morphism(src, dst, &m.inner)?;
    Ok(LocalizedMorphismReport {
        inner_valid: inner.valid,
        kappa_verified: m.kappa_is_identity,
        flagged: !m.kappa_is_identity,
    })
}
