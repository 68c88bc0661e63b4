//! Divisorial fans: validation, closure generation, tail fans, the gluing
//! poset, separatedness, and quasi-projectivity via divisorial support
//! functions solved as exact feasibility programs.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::base::{BasePoint, BaseVariety};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, Relation};
use crate::polyhedral::{Cone, Polyhedron};
use crate::ppdiv::{search_face, verify_face, FaceCertificate, PpDivisor};
use crate::rat::{QVec, Rat};

pub const CLOSURE_SEED_BUDGET: usize = 64;
pub const DEFAULT_FACE_BOUND: u32 = 4;
pub const QP_RANK_BUDGET: usize = 3;

#[derive(Clone, Debug)]
pub struct FaceEdge {
    pub sub: usize,
    pub sup: usize,
    pub cert: FaceCertificate,
}

/// A finite intersection-closed set of polyhedral divisors over one base,
/// with verified face certificates on the recorded edges.
#[derive(Clone, Debug)]
pub struct DivisorialFan {
    pub base: BaseVariety,
    pub rank: usize,
    pub members: Vec<(String, PpDivisor)>,
    pub edges: Vec<FaceEdge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificatePolicy {
    Require,
    Skip,
}

impl DivisorialFan {
    pub fn member(&self, name: &str) -> Option<&PpDivisor> {
        self.members
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d)
    }

    pub fn member_index(&self, name: &str) -> Option<usize> {
        self.members.iter().position(|(n, _)| n == name)
    }

    pub fn member_names(&self) -> Vec<String> {
        self.members.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Members that are not strictly contained in another member.
    pub fn maximal_members(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, (name, d)) in self.members.iter().enumerate() {
            let maximal = !self.members.iter().enumerate().any(|(j, (_, e))| {
                i != j && d != e && d.contained_in(e)
            });
            if maximal {
                out.push(name.clone());
            }
        }
        out
    }

    /// The set of tail cones closed under the recorded intersections, with
    /// the classical fan property validated pairwise.
    pub fn tail_fan(&self) -> Result<Vec<Cone>> {
        let mut cones: Vec<(String, Cone)> = Vec::new();
        for (name, d) in &self.members {
            if !cones.iter().any(|(_, c)| *c == *d.tail()) {
                cones.push((name.clone(), d.tail().clone()));
            }
        }
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                let meet = cones[i].1.intersect(&cones[j].1)?;
                if cones[i].1.face_witness(&meet)?.is_none()
                    || cones[j].1.face_witness(&meet)?.is_none()
                {
                    return Err(Error::NotAFan(cones[i].0.clone(), cones[j].0.clone()));
                }
            }
        }
        let mut out: Vec<Cone> = cones.into_iter().map(|(_, c)| c).collect();
        out.sort();
        Ok(out)
    }

    /// Reflexive-transitive closure of the certified face edges, with the
    /// intersection members as lower bounds.
    pub fn gluing_poset(&self) -> GluingPoset {
        let n = self.members.len();
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for e in &self.edges {
            rel[e.sub][e.sup] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        GluingPoset {
            nodes: self.member_names(),
            leq: rel,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GluingPoset {
    pub nodes: Vec<String>,
    /// `leq[i][j]` means member i is a face of member j.
    pub leq: Vec<Vec<bool>>,
}

impl GluingPoset {
    pub fn is_face(&self, sub: usize, sup: usize) -> bool {
        self.leq[sub][sup]
    }
}

/// Closes a seed under pairwise intersection and certifies every edge of the
/// result (unless skipped). Deterministic: members keep seed order, generated
/// intersections are named canonically and sorted in at the end.
pub fn closure_generate(
    seed: &[(String, PpDivisor)],
    bound: u32,
    policy: CertificatePolicy,
) -> Result<DivisorialFan> {
    if seed.is_empty() {
        return Err(Error::Invalid("empty seed".into()));
    }
    if seed.len() > CLOSURE_SEED_BUDGET {
        return Err(Error::SizeBudgetExceeded(format!(
            "closure seed of {} members exceeds {CLOSURE_SEED_BUDGET}",
            seed.len()
        )));
    }
    let base = seed[0].1.base().clone();
    let rank = seed[0].1.rank();
    for (_, d) in seed {
        if *d.base() != base {
            return Err(Error::BaseMismatch);
        }
        if d.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                got: d.rank(),
            });
        }
    }
    let mut members: Vec<(String, PpDivisor)> = Vec::new();
    for (name, d) in seed {
        if !members.iter().any(|(_, e)| e == d) {
            members.push((name.clone(), d.clone()));
        }
    }
    // Fixpoint under pairwise intersection: each round intersects only the
    // members added in the previous round against everything.
    let mut fresh_from = 0usize;
    loop {
        let lo = fresh_from;
        fresh_from = members.len();
        let mut pairs = Vec::new();
        for i in 0..members.len() {
            for j in i.max(lo)..members.len() {
                if i != j {
                    pairs.push((i, j));
                }
            }
        }
        if pairs.is_empty() {
            break;
        }
        let snapshot = members.clone();
        let fresh: Vec<Result<(String, PpDivisor)>> = crate::par::map_collect(pairs, |(i, j)| {
            let meet = snapshot[i].1.intersect(&snapshot[j].1)?;
            Ok((format!("({}&{})", snapshot[i].0, snapshot[j].0), meet))
        });
        for item in fresh {
            let (name, meet) = item?;
            if !members.iter().any(|(_, e)| *e == meet) {
                members.push((name, meet));
            }
        }
        if members.len() == fresh_from {
            break;
        }
    }

    let mut edges = Vec::new();
    if policy == CertificatePolicy::Require {
        // Certify: for every pair, the intersection is a face of both.
        let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
        for i in 0..members.len() {
            for j in 0..members.len() {
                if i == j {
                    continue;
                }
                let meet = members[i].1.intersect(&members[j].1)?;
                let k = members
                    .iter()
                    .position(|(_, e)| *e == meet)
                    .expect("closure is intersection-closed");
                edge_set.insert((k, i));
                edge_set.insert((k, j));
            }
        }
        let work: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let found: Vec<Result<Option<FaceEdge>>> =
            crate::par::map_collect(work.clone(), |(sub, sup)| {
                let cert = search_face(&members[sub].1, &members[sup].1, bound)?;
                Ok(cert.map(|cert| FaceEdge { sub, sup, cert }))
            });
        for (idx, item) in found.into_iter().enumerate() {
            match item? {
                Some(edge) => edges.push(edge),
                None => {
                    let (sub, sup) = work[idx];
                    return Err(Error::FaceCertificateNotFound {
                        sub: members[sub].0.clone(),
                        sup: members[sup].0.clone(),
                        bound,
                    });
                }
            }
        }
    }
    Ok(DivisorialFan {
        base,
        rank,
        members,
        edges,
    })
}

/// Revalidates the certificates recorded on a fan.
pub fn validate_fan(fan: &DivisorialFan) -> Result<Vec<(String, String, bool)>> {
    let mut out = Vec::new();
    for e in &fan.edges {
        let report = verify_face(&fan.members[e.sub].1, &fan.members[e.sup].1, &e.cert)?;
        out.push((
            fan.members[e.sub].0.clone(),
            fan.members[e.sup].0.clone(),
            report.valid,
        ));
    }
    Ok(out)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SeparatednessWitness {
    pub pair: (String, String),
    pub weights: Vec<(String, String)>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SeparatednessReport {
    pub separated: bool,
    pub witness: Option<SeparatednessWitness>,
}

/// Valuative separatedness on a curve base: for every unordered pair of
/// members, the weighted sums must satisfy mu(D ∩ D') = mu(D) ∩ mu(D') for
/// unit masses at support points and 0/1 combinations over two points.
pub fn separatedness_check(fan: &DivisorialFan) -> Result<SeparatednessReport> {
    if fan.base.is_point() {
        return Err(Error::UnsupportedBase);
    }
    let mut pairs = Vec::new();
    for i in 0..fan.members.len() {
        for j in i + 1..fan.members.len() {
            pairs.push((i, j));
        }
    }
    let results: Vec<Result<Option<SeparatednessWitness>>> =
        crate::par::map_collect(pairs, |(i, j)| {
            let a = &fan.members[i].1;
            let b = &fan.members[j].1;
            let meet = a.intersect(b)?;
            let mut points: BTreeSet<BasePoint> = BTreeSet::new();
            for p in a.support_points().into_iter().chain(b.support_points()) {
                points.insert(p);
            }
            let points: Vec<BasePoint> = points.into_iter().collect();
            let mut weightings: Vec<Vec<(BasePoint, Rat)>> = Vec::new();
            for p in &points {
                weightings.push(vec![(p.clone(), Rat::one())]);
            }
            for (x, p) in points.iter().enumerate() {
                for q in points.iter().skip(x + 1) {
                    weightings.push(vec![(p.clone(), Rat::one()), (q.clone(), Rat::one())]);
                }
            }
            for mu in &weightings {
                let lhs = meet.weighted_sum_with_empty(mu)?;
                let ra = a.weighted_sum_with_empty(mu)?;
                let rb = b.weighted_sum_with_empty(mu)?;
                let rhs = ra.intersect(&rb)?;
                let equal = if lhs.is_empty() || rhs.is_empty() {
                    lhs.is_empty() == rhs.is_empty()
                } else {
                    lhs == rhs
                };
                if !equal {
                    return Ok(Some(SeparatednessWitness {
                        pair: (fan.members[i].0.clone(), fan.members[j].0.clone()),
                        weights: mu
                            .iter()
                            .map(|(p, c)| (format!("{p:?}"), crate::rat::format_rat(c)))
                            .collect(),
                    }));
                }
            }
            Ok(None)
        });
    for r in results {
        if let Some(w) = r? {
            return Ok(SeparatednessReport {
                separated: false,
                witness: Some(w),
            });
        }
    }
    Ok(SeparatednessReport {
        separated: true,
        witness: None,
    })
}

/// One affine piece of a divisorial support function.
#[derive(Clone, Debug)]
pub struct SupportCell {
    /// `None` is the generic point (the tail fan itself).
    pub point: Option<BasePoint>,
    pub cell: Polyhedron,
    pub u: QVec,
    pub a: Rat,
}

#[derive(Clone, Debug)]
pub struct DivisorialSupportFunction {
    pub cells: Vec<SupportCell>,
    pub epsilon: Rat,
}

/// Sets up and solves the exact strict-concavity program. Returns a witness
/// support function when one exists (the fan is quasi-projective), `None`
/// when the program is infeasible.
pub fn quasiprojectivity_check(
    fan: &DivisorialFan,
    dump: Option<&mut LinearProgram>,
) -> Result<Option<DivisorialSupportFunction>> {
    if fan.rank > QP_RANK_BUDGET {
        return Err(Error::RankBudgetExceeded {
            op: "quasiprojectivity_check",
            budget: QP_RANK_BUDGET,
            got: fan.rank,
        });
    }
    let rank = fan.rank;

    // Slice cells per point: maximal nonempty coefficients under inclusion,
    // plus the generic slice formed by the tail polyhedra.
    let mut points: BTreeSet<BasePoint> = BTreeSet::new();
    for (_, d) in &fan.members {
        for (p, poly) in d.listed() {
            if !poly.is_empty() {
                points.insert(p.clone());
            }
        }
    }
    let mut slices: Vec<(Option<BasePoint>, Vec<Polyhedron>)> = Vec::new();
    let mut tail_polys: Vec<Polyhedron> = Vec::new();
    for (_, d) in &fan.members {
        let tp = d.tail_polyhedron();
        if !tail_polys.contains(&tp) {
            tail_polys.push(tp);
        }
    }
    let maximal_of = |polys: Vec<Polyhedron>| -> Vec<Polyhedron> {
        let mut out = Vec::new();
        for (i, p) in polys.iter().enumerate() {
            let dominated = polys
                .iter()
                .enumerate()
                .any(|(j, q)| i != j && p != q && q.contains_poly(p))
                || out.contains(p);
            if !dominated {
                out.push(p.clone());
            }
        }
        out
    };
    for p in &points {
        let mut coeffs = Vec::new();
        for (_, d) in &fan.members {
            let c = d.coefficient_at(p);
            if !c.is_empty() {
                coeffs.push(c);
            }
        }
        slices.push((Some(p.clone()), maximal_of(coeffs)));
    }
    slices.push((None, maximal_of(tail_polys)));

    // Variables: per cell, a linear form u (rank entries) and a constant a,
    // plus the global strictness slack as the last variable.
    let mut var_names: Vec<String> = Vec::new();
    let mut cell_vars: Vec<(Option<BasePoint>, Polyhedron, usize)> = Vec::new();
    for (p, cells) in &slices {
        for cell in cells {
            let idx = var_names.len();
            for k in 0..rank {
                var_names.push(format!("u[{}][{}]", cell_vars.len(), k));
            }
            var_names.push(format!("a[{}]", cell_vars.len()));
            cell_vars.push((p.clone(), cell.clone(), idx));
        }
    }
    let eps_var = var_names.len();
    var_names.push("eps".into());
    let nv = var_names.len();
    let mut prog = LinearProgram::new(var_names);
    prog.objective = vec![Rat::zero(); nv];
    prog.objective[eps_var] = Rat::one();
    // Keep the objective bounded: eps <= 1.
    {
        let mut row = vec![Rat::zero(); nv];
        row[eps_var] = -Rat::one();
        prog.constrain(row, Relation::Ge, -Rat::one());
    }

    let affine_row = |idx: usize, v: &QVec, with_const: bool, sign: i64, nv: usize| -> Vec<Rat> {
        let mut row = vec![Rat::zero(); nv];
        let s = crate::rat::rint(sign);
        for k in 0..v.dim() {
            row[idx + k] = &v.0[k] * &s;
        }
        if with_const {
            row[idx + v.dim()] = s;
        }
        row
    };

    // Generic cells carry constant 0.
    for (p, _, idx) in &cell_vars {
        if p.is_none() {
            let mut row = vec![Rat::zero(); nv];
            row[idx + rank] = Rat::one();
            prog.constrain(row, Relation::Eq, Rat::zero());
        }
    }

    // Common linear part: cells whose tails share directions agree there.
    for i in 0..cell_vars.len() {
        for j in i + 1..cell_vars.len() {
            let ti = cell_vars[i].1.tail().clone();
            let tj = cell_vars[j].1.tail().clone();
            let meet = ti.intersect(&tj)?;
            for r in meet.generators() {
                let mut row = affine_row(cell_vars[i].2, &r, false, 1, nv);
                let neg = affine_row(cell_vars[j].2, &r, false, -1, nv);
                for (x, y) in row.iter_mut().zip(neg) {
                    *x += y;
                }
                prog.constrain(row, Relation::Eq, Rat::zero());
            }
        }
    }

    // Within each slice: continuity on shared faces, concavity everywhere,
    // strictness off the shared face.
    for (p, cells) in &slices {
        let idx_of = |cell: &Polyhedron| -> usize {
            cell_vars
                .iter()
                .find(|(q, c, _)| q == p && c == cell)
                .map(|(_, _, i)| *i)
                .expect("cell variable exists")
        };
        for ci in cells {
            for cj in cells {
                if ci == cj {
                    continue;
                }
                let ii = idx_of(ci);
                let ij = idx_of(cj);
                let shared = ci.intersect(cj)?;
                // Continuity on the shared face.
                if !shared.is_empty() {
                    for v in shared.vertices() {
                        let mut row = affine_row(ii, v, true, 1, nv);
                        let neg = affine_row(ij, v, true, -1, nv);
                        for (x, y) in row.iter_mut().zip(neg) {
                            *x += y;
                        }
                        prog.constrain(row, Relation::Eq, Rat::zero());
                    }
                    for r in shared.tail().generators() {
                        let mut row = affine_row(ii, &r, false, 1, nv);
                        let neg = affine_row(ij, &r, false, -1, nv);
                        for (x, y) in row.iter_mut().zip(neg) {
                            *x += y;
                        }
                        prog.constrain(row, Relation::Eq, Rat::zero());
                    }
                }
                // Concavity with strict margin: the affine form of ci
                // dominates h on cj, strictly off the shared face.
                for v in cj.vertices() {
                    let strict = !shared.contains_point(v);
                    let mut row = affine_row(ii, v, true, 1, nv);
                    let neg = affine_row(ij, v, true, -1, nv);
                    for (x, y) in row.iter_mut().zip(neg) {
                        *x += y;
                    }
                    if strict {
                        row[eps_var] = -Rat::one();
                    }
                    prog.constrain(row, Relation::Ge, Rat::zero());
                }
                for r in cj.tail().generators() {
                    let strict = shared.is_empty() || !shared.tail().contains(&r);
                    let mut row = affine_row(ii, &r, false, 1, nv);
                    let neg = affine_row(ij, &r, false, -1, nv);
                    for (x, y) in row.iter_mut().zip(neg) {
                        *x += y;
                    }
                    if strict {
                        row[eps_var] = -Rat::one();
                    }
                    prog.constrain(row, Relation::Ge, Rat::zero());
                }
            }
        }
    }

    // Degree conditions: members with affine locus need sum_p a_p(omega) < 0
    // over the cells sharing the member's tail.
    for (_, d) in &fan.members {
        if !d.locus().is_affine_open() {
            continue;
        }
        let tail = d.tail();
        let mut row = vec![Rat::zero(); nv];
        let mut any = false;
        for (p, cell, idx) in &cell_vars {
            if p.is_none() {
                continue;
            }
            if cell.tail() == tail {
                row[idx + rank] = -Rat::one();
                any = true;
            }
        }
        if any {
            row[eps_var] = -Rat::one();
            prog.constrain(row, Relation::Ge, Rat::zero());
        }
    }

    prog.dedupe();
    if let Some(out) = dump {
        *out = prog.clone();
    }
    let sol = lp::solve_with_presolve(&prog)?;
    match sol.status {
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => unreachable!("eps is bounded above"),
        LpStatus::Optimal => {
            let x = sol.assignment.expect("optimal assignment");
            let eps = x[eps_var].clone();
            if !eps.is_positive() {
                return Ok(None);
            }
            // Re-verify the witness by direct substitution.
            debug_assert!(prog.is_feasible_point(&x));
            let cells = cell_vars
                .iter()
                .map(|(p, cell, idx)| SupportCell {
                    point: p.clone(),
                    cell: cell.clone(),
                    u: QVec(x[*idx..idx + rank].to_vec()),
                    a: x[idx + rank].clone(),
                })
                .collect();
            Ok(Some(DivisorialSupportFunction { cells, epsilon: eps }))
        }
    }
}

/// Toric specialization of the strict-concavity program for a plain set of
/// cones (no degree constraints): a strictly concave support function exists
/// iff the program has a solution with positive slack.
pub fn toric_quasiprojectivity(rank: usize, cones: &[Cone]) -> Result<Option<DivisorialSupportFunction>> {
    if rank > QP_RANK_BUDGET {
        return Err(Error::RankBudgetExceeded {
            op: "toric_quasiprojectivity",
            budget: QP_RANK_BUDGET,
            got: rank,
        });
    }
    let members: Vec<(String, PpDivisor)> = maximal_cones(cones)
        .into_iter()
        .enumerate()
        .map(|(i, c)| (format!("c{i}"), PpDivisor::toric(c)))
        .collect();
    let fan = DivisorialFan {
        base: BaseVariety::Point,
        rank,
        members,
        edges: Vec::new(),
    };
    quasiprojectivity_check(&fan, None)
}

/// Cones not strictly contained in another of the list.
pub fn maximal_cones(cones: &[Cone]) -> Vec<Cone> {
    let mut out = Vec::new();
    for (i, c) in cones.iter().enumerate() {
        let dominated = cones
            .iter()
            .enumerate()
            .any(|(j, d)| i != j && c != d && d.contains_cone(c))
            || out.contains(c);
        if !dominated {
            out.push(c.clone());
        }
    }
    out
}
