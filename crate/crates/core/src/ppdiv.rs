//! Proper polyhedral divisors: construction, properness, evaluation, locus,
//! localization, pullback/pushforward, morphisms with composition, and the
//! face relation with certificates.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::base::{
    classify_positivity, divisor_of_function, section_candidates, section_membership, BasePoint,
    BaseVariety, Plurifunction, QDivisor, RationalFunction, SemilinearBaseMap,
};
use crate::error::{Error, Result};
use crate::polyhedral::{hilbert_basis, normal_quasifan, Cone, Polyhedron, SupportValue};
use crate::rat::{QMat, QVec, Rat};

/// A polyhedral divisor over a symbolic base. Coefficients are kept in
/// canonical form: points sorted, trivial coefficients (the tail polyhedron)
/// pruned, empty coefficients kept. Equality ignores the declared-point set.
#[derive(Clone, Debug)]
pub struct PpDivisor {
    base: BaseVariety,
    rank: usize,
    tail: Cone,
    coeffs: Vec<(BasePoint, Polyhedron)>,
    /// Points named at construction even when their coefficient is trivial;
    /// they count as part of the support for plurifunction restriction.
    declared: BTreeSet<BasePoint>,
}

impl PartialEq for PpDivisor {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.rank == other.rank
            && self.tail == other.tail
            && self.coeffs == other.coeffs
    }
}

impl Eq for PpDivisor {}

impl PpDivisor {
    pub fn new(
        base: BaseVariety,
        rank: usize,
        tail: Cone,
        coefficients: Vec<(BasePoint, Polyhedron)>,
    ) -> Result<PpDivisor> {
        if tail.dim() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                got: tail.dim(),
            });
        }
        if base.is_point() {
            if coefficients.iter().any(|(_, p)| p.is_empty()) {
                return Err(Error::EmptyLocus);
            }
            if !coefficients.is_empty() {
                return Err(Error::Invalid(
                    "a point base carries no coefficient points".into(),
                ));
            }
        }
        let mut declared: BTreeSet<BasePoint> = BTreeSet::new();
        let mut canon: Vec<(BasePoint, Polyhedron)> = Vec::new();
        let mut seen: BTreeSet<BasePoint> = BTreeSet::new();
        for (p, poly) in coefficients {
            if !base.contains(&p) {
                return Err(Error::Invalid(
                    "coefficient at a point outside the base".into(),
                ));
            }
            if !seen.insert(p.clone()) {
                return Err(Error::Invalid("duplicate coefficient point".into()));
            }
            if poly.dim() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: poly.dim(),
                });
            }
            declared.insert(p.clone());
            if poly.is_empty() {
                canon.push((p, Polyhedron::empty(rank, tail.clone())));
            } else {
                if *poly.tail() != tail {
                    return Err(Error::Invalid(
                        "coefficient tail differs from the declared tail cone".into(),
                    ));
                }
                if poly.is_trivial_for(&tail) {
                    continue; // the default coefficient
                }
                canon.push((p, poly));
            }
        }
        canon.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(PpDivisor {
            base,
            rank,
            tail,
            coeffs: canon,
            declared,
        })
    }

    /// A cone over the point base (the toric case).
    pub fn toric(tail: Cone) -> PpDivisor {
        PpDivisor {
            base: BaseVariety::Point,
            rank: tail.dim(),
            tail,
            coeffs: Vec::new(),
            declared: BTreeSet::new(),
        }
    }

    pub fn base(&self) -> &BaseVariety {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn tail_polyhedron(&self) -> Polyhedron {
        Polyhedron::cone_polyhedron(&self.tail)
    }

    /// Nontrivial and empty coefficients, in canonical order.
    pub fn listed(&self) -> &[(BasePoint, Polyhedron)] {
        &self.coeffs
    }

    pub fn coefficient_at(&self, p: &BasePoint) -> Polyhedron {
        self.coeffs
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, poly)| poly.clone())
            .unwrap_or_else(|| self.tail_polyhedron())
    }

    pub fn empty_points(&self) -> Vec<BasePoint> {
        self.coeffs
            .iter()
            .filter(|(_, poly)| poly.is_empty())
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// Listed plus declared points: the support used for restriction.
    pub fn support_points(&self) -> Vec<BasePoint> {
        let mut pts: BTreeSet<BasePoint> = self.declared.clone();
        for (p, _) in &self.coeffs {
            pts.insert(p.clone());
        }
        pts.into_iter().collect()
    }

    pub fn with_declared(mut self, points: &[BasePoint]) -> PpDivisor {
        for p in points {
            if self.base.contains(p) {
                self.declared.insert(p.clone());
            }
        }
        self
    }

    /// The base with the empty-coefficient points removed.
    pub fn locus(&self) -> BaseVariety {
        if self.base.is_point() {
            return BaseVariety::Point;
        }
        self.base
            .remove(&self.empty_points())
            .expect("curve base shrinks")
    }

    /// Evaluation at a lattice functional in the dual of the tail.
    pub fn evaluate(&self, m: &QVec) -> Result<QDivisor> {
        if m.dim() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: m.dim(),
            });
        }
        if !self
            .tail
            .generators()
            .iter()
            .all(|r| !m.dot(r).is_negative())
        {
            return Err(Error::OutsideDualCone);
        }
        let mut terms = Vec::new();
        for (p, poly) in &self.coeffs {
            if poly.is_empty() {
                continue;
            }
            match poly.support_value(m)? {
                SupportValue::Finite(v) => terms.push((p.clone(), v)),
                SupportValue::MinusInfinity => unreachable!("tail pairs nonnegatively"),
            }
        }
        Ok(QDivisor::from_terms(terms))
    }

    /// Minkowski translate by the ord vectors of a plurifunction:
    /// `self + div(pf)`.
    pub fn add_principal(&self, pf: &Plurifunction) -> Result<PpDivisor> {
        if pf.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: pf.rank(),
            });
        }
        let mut points: BTreeSet<BasePoint> =
            self.coeffs.iter().map(|(p, _)| p.clone()).collect();
        for p in pf.support() {
            if self.base.contains(&p) {
                points.insert(p);
            }
        }
        let mut coeffs = Vec::new();
        for p in points {
            let v = pf.ord_vector_at(&p);
            let moved = self.coefficient_at(&p).translate(&v)?;
            coeffs.push((p, moved));
        }
        PpDivisor::new(self.base.clone(), self.rank, self.tail.clone(), coeffs)
            .map(|d| d.with_declared(&self.support_points()))
    }

    /// Pullback along a semilinear automorphism of the base: the coefficient
    /// at p becomes the coefficient of `self` at psi(p).
    pub fn pull_base(&self, psi: &SemilinearBaseMap) -> Result<PpDivisor> {
        if self.base.is_point() {
            return Ok(self.clone());
        }
        let inv = psi.inverse()?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(p, poly)| Ok((inv.apply_point(p)?, poly.clone())))
            .collect::<Result<Vec<_>>>()?;
        let declared = self
            .support_points()
            .iter()
            .map(|p| inv.apply_point(p))
            .collect::<Result<Vec<_>>>()?;
        let base = inv.push_base(&self.base)?;
        PpDivisor::new(base, self.rank, self.tail.clone(), coeffs)
            .map(|d| d.with_declared(&declared))
    }

    /// Pushforward along a lattice map: every coefficient is mapped and the
    /// target tail is Minkowski-added. The result need not be proper.
    pub fn push_lattice(&self, f: &QMat, target_tail: &Cone) -> Result<PpDivisor> {
        let mapped_tail = self.tail.map(f)?;
        if !target_tail.contains_cone(&mapped_tail) {
            return Err(Error::TailViolation);
        }
        let target_poly = Polyhedron::cone_polyhedron(target_tail);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(p, poly)| {
                let moved = poly.map(f)?.minkowski_sum(&target_poly)?;
                Ok((p.clone(), moved))
            })
            .collect::<Result<Vec<_>>>()?;
        PpDivisor::new(self.base.clone(), f.nrows(), target_tail.clone(), coeffs)
            .map(|d| d.with_declared(&self.support_points()))
    }

    /// Pointwise polyhedron intersection; missing coefficients default to
    /// the respective tails.
    pub fn intersect(&self, other: &PpDivisor) -> Result<PpDivisor> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        let tail = self.tail.intersect(&other.tail)?;
        let mut points: BTreeSet<BasePoint> = BTreeSet::new();
        for (p, _) in self.coeffs.iter().chain(other.coeffs.iter()) {
            points.insert(p.clone());
        }
        let mut coeffs = Vec::new();
        for p in points {
            let meet = self
                .coefficient_at(&p)
                .intersect(&other.coefficient_at(&p))?;
            coeffs.push((p, meet));
        }
        let declared: Vec<BasePoint> = self
            .support_points()
            .into_iter()
            .chain(other.support_points())
            .collect();
        PpDivisor::new(self.base.clone(), self.rank, tail, coeffs)
            .map(|d| d.with_declared(&declared))
    }

    /// Coefficientwise containment of `self` in `other`.
    pub fn contained_in(&self, other: &PpDivisor) -> bool {
        if self.base != other.base || self.rank != other.rank {
            return false;
        }
        if !other.tail.contains_cone(&self.tail) {
            return false;
        }
        let mut points: BTreeSet<BasePoint> = BTreeSet::new();
        for (p, _) in self.coeffs.iter().chain(other.coeffs.iter()) {
            points.insert(p.clone());
        }
        points
            .iter()
            .all(|p| other.coefficient_at(p).contains_poly(&self.coefficient_at(p)))
    }

    /// The fiber polyhedron over a point of the locus.
    pub fn fiber_polyhedron(&self, y: &BasePoint) -> Result<Polyhedron> {
        if !self.locus().contains(y) {
            return Err(Error::OutsideLocus);
        }
        Ok(self.coefficient_at(y))
    }

    /// Weighted Minkowski combination of coefficients with nonnegative
    /// weights supported on the locus.
    pub fn weighted_sum(&self, weights: &[(BasePoint, Rat)]) -> Result<Polyhedron> {
        for (p, c) in weights {
            if c.is_negative() {
                return Err(Error::Invalid("negative valuation weight".into()));
            }
            if c.is_positive() && !self.locus().contains(p) {
                return Err(Error::OutsideLocus);
            }
        }
        self.weighted_sum_with_empty(weights)
    }

    /// As `weighted_sum`, with the empty conventions: a positive weight at an
    /// empty coefficient absorbs the sum, a zero weight contributes the tail.
    pub(crate) fn weighted_sum_with_empty(
        &self,
        weights: &[(BasePoint, Rat)],
    ) -> Result<Polyhedron> {
        let mut acc = self.tail_polyhedron();
        for (p, c) in weights {
            if c.is_zero() || !self.base.contains(p) {
                continue;
            }
            let term = self.coefficient_at(p).dilate(c)?;
            acc = acc.minkowski_sum(&term)?;
        }
        Ok(acc)
    }

    /// Integer functionals sampling the dual of the tail: generators (a
    /// Hilbert basis where pointed) plus their pairwise sums.
    pub fn dual_samples(&self) -> Result<Vec<QVec>> {
        let dual = self.tail.dual_unchecked();
        let mut gens: Vec<QVec> = Vec::new();
        if dual.is_pointed() && dual.dim() <= 3 {
            gens.extend(hilbert_basis(&dual)?);
        } else {
            gens.extend(dual.generators());
        }
        let mut out = gens.clone();
        for a in &gens {
            for b in &gens {
                out.push(a.add(b));
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Properness verdict: evaluations at interior samples must be big on the
    /// locus, at boundary samples semiample.
    pub fn check_proper(&self) -> Result<PropernessReport> {
        let locus = self.locus();
        let dual = self.tail.dual_unchecked();
        let mut failures = Vec::new();
        for m in self.dual_samples()? {
            let ev = self.evaluate(&m)?;
            let pos = classify_positivity(&ev, &locus);
            let interior = dual.relint_contains(&m);
            if interior && !pos.big {
                failures.push(PropernessFailure {
                    m: m.clone(),
                    needed: "big".into(),
                });
            }
            if !pos.semiample {
                failures.push(PropernessFailure {
                    m,
                    needed: "semiample".into(),
                });
            }
        }
        Ok(PropernessReport {
            proper: failures.is_empty(),
            failures,
        })
    }

    /// Localization by a section `f` of the evaluation at `m`: coefficients
    /// become their `m`-faces, the base loses the zero set of `f`, the tail
    /// flattens to `tail ∩ m^⊥`.
    pub fn localize(&self, m: &QVec, f: &RationalFunction) -> Result<PpDivisor> {
        if !m.is_integral() {
            return Err(Error::NonIntegralPairing);
        }
        let ev = self.evaluate(m)?;
        if self.base.is_point() {
            let tail = self.tail.intersect_hyperplane(m)?;
            return Ok(PpDivisor::toric(tail));
        }
        let locus = self.locus();
        if !section_membership(f, &ev, &locus)? {
            return Err(Error::NotASection);
        }
        let zero_set: Vec<BasePoint> = divisor_of_function(f, &locus)?.add(&ev).support();
        let new_base = locus.remove(&zero_set)?;
        let new_tail = self.tail.intersect_hyperplane(m)?;
        let mut coeffs = Vec::new();
        for (p, poly) in &self.coeffs {
            if !new_base.contains(p) {
                continue;
            }
            if poly.is_empty() {
                coeffs.push((p.clone(), Polyhedron::empty(self.rank, new_tail.clone())));
            } else {
                coeffs.push((p.clone(), poly.face_by(m)?));
            }
        }
        PpDivisor::new(new_base, self.rank, new_tail, coeffs)
            .map(|d| d.with_declared(&self.support_points()))
    }

    /// Verifies `D_f(m') = D(m'+km)|_f - D(km)|_f` for the minimal shift k
    /// making `m' + km` land in the dual of the tail.
    pub fn localization_identity_check(
        &self,
        m: &QVec,
        f: &RationalFunction,
        m_prime: &QVec,
    ) -> Result<LocalizationIdentityReport> {
        let localized = self.localize(m, f)?;
        // The shift must put m' + km into the dual of the tail...
        let mut k = Rat::zero();
        for r in self.tail.generators() {
            let a = m.dot(&r);
            let b = m_prime.dot(&r);
            if b.is_negative() {
                if !a.is_positive() {
                    return Err(Error::OutsideDualCone);
                }
                let need = -&b / &a;
                if need > k {
                    k = need;
                }
            }
        }
        // ...and be large enough that every coefficient attains the shifted
        // minimum on its m-face.
        for (_, poly) in self.listed() {
            if poly.is_empty() {
                continue;
            }
            let face = poly.face_by(m)?;
            let m_prime_on_face = face
                .vertices()
                .iter()
                .map(|u| m_prime.dot(u))
                .min()
                .expect("face has vertices");
            let h = match poly.support_value(m)? {
                SupportValue::Finite(v) => v,
                SupportValue::MinusInfinity => unreachable!(),
            };
            for v in poly.vertices() {
                let gap = m.dot(v) - &h;
                if gap.is_positive() {
                    let need = (&m_prime_on_face - m_prime.dot(v)) / gap;
                    if need > k {
                        k = need;
                    }
                }
            }
        }
        let floor = crate::rat::rat_floor(&k);
        let k = if (&k - &floor).is_zero() {
            floor
        } else {
            floor + Rat::one()
        };
        let shifted = m_prime.add(&m.scale(&k));
        let base_f = localized.base().clone();
        let lhs = localized.evaluate(m_prime)?;
        let rhs = self
            .evaluate(&shifted)?
            .restrict_to(&base_f)
            .add(&self.evaluate(&m.scale(&k))?.restrict_to(&base_f).neg());
        Ok(LocalizationIdentityReport {
            k: k.clone(),
            holds: lhs == rhs,
            lhs,
            rhs,
        })
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct PropernessFailure {
    #[serde(serialize_with = "crate::ser::qvec")]
    pub m: QVec,
    pub needed: String,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct PropernessReport {
    pub proper: bool,
    pub failures: Vec<PropernessFailure>,
}

#[derive(Clone, Debug)]
pub struct LocalizationIdentityReport {
    pub k: Rat,
    pub holds: bool,
    pub lhs: QDivisor,
    pub rhs: QDivisor,
}

/// The base leg of a polyhedral-divisor morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseMap {
    /// Collapse of a curve base to the point base.
    PointCollapse,
    /// A semilinear automorphism of the line (also the carrier of the field
    /// twist for point bases).
    Map(SemilinearBaseMap),
}

/// A morphism triple: base map, lattice map (rows express target coordinates
/// of source basis vectors), and a plurifunction over the source base valued
/// in the target lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PpdMorphism {
    pub psi: BaseMap,
    pub f_matrix: QMat,
    pub plurifn: Plurifunction,
}

impl PpdMorphism {
    pub fn identity(d: &PpDivisor) -> PpdMorphism {
        let field = d
            .base()
            .field()
            .cloned()
            .unwrap_or_else(crate::arith::NumberField::rationals);
        PpdMorphism {
            psi: BaseMap::Map(SemilinearBaseMap::identity(&field)),
            f_matrix: QMat::identity(d.rank()),
            plurifn: Plurifunction::one(d.rank(), &field),
        }
    }

    /// The inverse triple of an isomorphism candidate.
    pub fn inverse(&self) -> Result<PpdMorphism> {
        let psi = match &self.psi {
            BaseMap::PointCollapse => {
                return Err(Error::ChainMismatch(
                    "a point collapse has no inverse".into(),
                ))
            }
            BaseMap::Map(m) => m.clone(),
        };
        let f_inv = self
            .f_matrix
            .inverse()
            .ok_or_else(|| Error::Invalid("lattice map is singular".into()))?;
        if !f_inv.is_integral() {
            return Err(Error::Invalid(
                "lattice map is not invertible over the lattice".into(),
            ));
        }
        // Solve (psi', F', f') ∘ (psi, F, f) = (id, id, 1) for f'.
        let transported = self.plurifn.map_lattice(&f_inv)?.inv()?;
        let plurifn = transported.push_base(&psi)?;
        Ok(PpdMorphism {
            psi: BaseMap::Map(psi.inverse()?),
            f_matrix: f_inv,
            plurifn,
        })
    }
}

/// `later ∘ earlier`: base maps compose, lattice maps multiply, and the
/// plurifunctions combine as `F_later_*(f_earlier) · psi_earlier^*(f_later)`.
pub fn compose_morphisms(later: &PpdMorphism, earlier: &PpdMorphism) -> Result<PpdMorphism> {
    if later.f_matrix.ncols() != earlier.f_matrix.nrows() {
        return Err(Error::ChainMismatch(format!(
            "lattice ranks {} vs {}",
            later.f_matrix.ncols(),
            earlier.f_matrix.nrows()
        )));
    }
    let psi = match (&later.psi, &earlier.psi) {
        (BaseMap::Map(a), BaseMap::Map(b)) => BaseMap::Map(a.compose(b)?),
        (BaseMap::PointCollapse, BaseMap::Map(_)) => BaseMap::PointCollapse,
        _ => {
            return Err(Error::ChainMismatch(
                "cannot compose through a point collapse".into(),
            ))
        }
    };
    let part1 = earlier.plurifn.map_lattice(&later.f_matrix)?;
    let part2 = match &earlier.psi {
        BaseMap::Map(m) => later.plurifn.pull_base(m)?,
        BaseMap::PointCollapse => later.plurifn.clone(),
    };
    Ok(PpdMorphism {
        psi,
        f_matrix: later.f_matrix.mul(&earlier.f_matrix),
        plurifn: part1.mul(&part2)?,
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct MorphismReport {
    pub valid: bool,
    pub witness: Option<String>,
}

/// Checks `psi^*(dst) <= F_*(src) + div(f)` coefficientwise over the source
/// base.
pub fn verify_morphism(
    src: &PpDivisor,
    dst: &PpDivisor,
    phi: &PpdMorphism,
) -> Result<MorphismReport> {
    if phi.f_matrix.ncols() != src.rank() || phi.f_matrix.nrows() != dst.rank() {
        return Err(Error::RankMismatch {
            expected: src.rank(),
            got: phi.f_matrix.ncols(),
        });
    }
    let mapped_tail = src.tail().map(&phi.f_matrix)?;
    if !dst.tail().contains_cone(&mapped_tail) {
        return Ok(MorphismReport {
            valid: false,
            witness: Some("tail cone is not carried into the target tail".into()),
        });
    }
    let rhs = src
        .push_lattice(&phi.f_matrix, dst.tail())?
        .add_principal(&phi.plurifn)?;

    if src.base().is_point() {
        return Ok(MorphismReport {
            valid: true,
            witness: None,
        });
    }
    if matches!(phi.psi, BaseMap::PointCollapse) {
        // Target over the point base: every coefficient of the right-hand
        // side must lie in the single target cone.
        let target = Polyhedron::cone_polyhedron(dst.tail());
        for (p, poly) in rhs.listed() {
            if !src.locus().contains(p) {
                continue;
            }
            if !target.contains_poly(poly) {
                return Ok(MorphismReport {
                    valid: false,
                    witness: Some(format!("violated at {p:?}")),
                });
            }
        }
        return Ok(MorphismReport {
            valid: true,
            witness: None,
        });
    }

    let psi = match &phi.psi {
        BaseMap::Map(m) => m,
        BaseMap::PointCollapse => unreachable!(),
    };
    let lhs = dst.pull_base(psi)?;
    let mut points: BTreeSet<BasePoint> = BTreeSet::new();
    for (p, _) in lhs.listed().iter().chain(rhs.listed().iter()) {
        points.insert(p.clone());
    }
    for p in points {
        if !src.locus().contains(&p) {
            continue; // outside the source locus: no condition
        }
        let rhs_c = rhs.coefficient_at(&p);
        let lhs_c = lhs.coefficient_at(&p);
        if lhs_c.is_empty() {
            return Ok(MorphismReport {
                valid: false,
                witness: Some(format!("source locus maps outside target locus at {p:?}")),
            });
        }
        if !lhs_c.contains_poly(&rhs_c) {
            return Ok(MorphismReport {
                valid: false,
                witness: Some(format!("coefficient inequality fails at {p:?}")),
            });
        }
    }
    Ok(MorphismReport {
        valid: true,
        witness: None,
    })
}

/// Checks that the triple is an isomorphism: the morphism inequality holds in
/// both directions (the reverse via the inverse triple).
pub fn verify_isomorphism(
    src: &PpDivisor,
    dst: &PpDivisor,
    phi: &PpdMorphism,
) -> Result<MorphismReport> {
    let fwd = verify_morphism(src, dst, phi)?;
    if !fwd.valid {
        return Ok(fwd);
    }
    let inv = match phi.inverse() {
        Ok(inv) => inv,
        Err(e) => {
            return Ok(MorphismReport {
                valid: false,
                witness: Some(format!("no inverse triple: {e}")),
            })
        }
    };
    let back = verify_morphism(dst, src, &inv)?;
    if !back.valid {
        return Ok(MorphismReport {
            valid: false,
            witness: back.witness.map(|w| format!("inverse direction: {w}")),
        });
    }
    Ok(MorphismReport {
        valid: true,
        witness: None,
    })
}

/// The data of the face criterion: functionals paired with sections of the
/// corresponding evaluations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCertificate {
    pub witnesses: Vec<(QVec, RationalFunction)>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FaceReport {
    pub valid: bool,
    pub witness: Option<String>,
}

fn fail(witness: String) -> FaceReport {
    FaceReport {
        valid: false,
        witness: Some(witness),
    }
}

/// Zero set of `div f + sup(m)` inside the locus of `sup`.
fn witness_zero_set(sup: &PpDivisor, m: &QVec, f: &RationalFunction) -> Result<Vec<BasePoint>> {
    if sup.base().is_point() {
        return Ok(Vec::new());
    }
    let locus = sup.locus();
    let ev = sup.evaluate(m)?;
    Ok(divisor_of_function(f, &locus)?.add(&ev).support())
}

/// Exact verification of the two clauses of the face criterion against a
/// certificate.
pub fn verify_face(sub: &PpDivisor, sup: &PpDivisor, cert: &FaceCertificate) -> Result<FaceReport> {
    if sub.base() != sup.base() {
        return Ok(fail("bases differ".into()));
    }
    if sub.rank() != sup.rank() {
        return Ok(fail("lattice ranks differ".into()));
    }
    if !sub.contained_in(sup) {
        return Ok(fail("coefficients are not contained".into()));
    }
    if cert.witnesses.is_empty() {
        return Ok(fail("empty certificate".into()));
    }

    let mut zero_sets: Vec<Vec<BasePoint>> = Vec::new();
    for (m, f) in &cert.witnesses {
        if !m.is_integral() {
            return Ok(fail(format!("functional {m:?} is not a lattice point")));
        }
        if !sup
            .tail()
            .generators()
            .iter()
            .all(|r| !m.dot(r).is_negative())
        {
            return Ok(fail(format!("functional {m:?} outside the dual tail")));
        }
        if !sup.base().is_point() {
            let ev = sup.evaluate(m)?;
            if !section_membership(f, &ev, &sup.locus())? {
                return Ok(fail(format!("witness for {m:?} is not a section")));
            }
        }
        zero_sets.push(witness_zero_set(sup, m, f)?);
    }

    // Clause (i): Loc(sub) = union of (Loc(sup) minus the zero sets), i.e.
    // the common zero set is exactly the locus difference.
    let target: BTreeSet<BasePoint> = sub
        .empty_points()
        .into_iter()
        .filter(|p| sup.locus().contains(p))
        .collect();
    let mut meet: Option<BTreeSet<BasePoint>> = None;
    for z in &zero_sets {
        let zs: BTreeSet<BasePoint> = z.iter().cloned().collect();
        meet = Some(match meet {
            None => zs,
            Some(acc) => acc.intersection(&zs).cloned().collect(),
        });
    }
    let meet = meet.unwrap_or_default();
    if meet != target {
        return Ok(fail(format!(
            "locus clause fails: common zero set {meet:?} vs removed {target:?}"
        )));
    }

    // Clause (ii): faces agree at every point off the zero set.
    let mut points: BTreeSet<BasePoint> = BTreeSet::new();
    for (p, _) in sub.listed().iter().chain(sup.listed().iter()) {
        points.insert(p.clone());
    }
    for ((m, _), zset) in cert.witnesses.iter().zip(&zero_sets) {
        let generic_sub = sub.tail_polyhedron().face_by(m)?;
        let generic_sup = sup.tail_polyhedron().face_by(m)?;
        if generic_sub != generic_sup {
            return Ok(fail(format!("tail faces differ for {m:?}")));
        }
        for p in &points {
            if zset.contains(p) || !sup.locus().contains(p) {
                continue;
            }
            let sup_c = sup.coefficient_at(p);
            let sub_c = sub.coefficient_at(p);
            if sub_c.is_empty() {
                return Ok(fail(format!(
                    "empty coefficient at {p:?} not excluded by the zero set of {m:?}"
                )));
            }
            if sub_c.face_by(m)? != sup_c.face_by(m)? {
                return Ok(fail(format!("faces differ at {p:?} for {m:?}")));
            }
        }
    }
    Ok(FaceReport {
        valid: true,
        witness: None,
    })
}

/// Candidate functionals for the face search: Hilbert-style generators of the
/// normal quasifan cells of every coefficient, combined up to the bound.
fn face_functional_candidates(sup: &PpDivisor, sub: &PpDivisor, bound: u32) -> Result<Vec<QVec>> {
    let rank = sup.rank();
    let mut gens: Vec<QVec> = Vec::new();
    let mut polys: Vec<Polyhedron> = vec![sup.tail_polyhedron()];
    for (_, poly) in sup.listed().iter().chain(sub.listed().iter()) {
        if !poly.is_empty() {
            polys.push(poly.clone());
        }
    }
    for poly in &polys {
        for cell in normal_quasifan(poly)? {
            if cell.cone.is_pointed() && rank <= 3 {
                gens.extend(hilbert_basis(&cell.cone)?);
            } else {
                gens.extend(cell.cone.generators());
            }
        }
    }
    gens.sort();
    gens.dedup();
    // All nonnegative integer combinations of total height <= bound.
    let mut out: Vec<QVec> = vec![QVec::zero(rank)];
    let mut frontier: Vec<QVec> = vec![QVec::zero(rank)];
    for _ in 0..bound {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let s = m.add(g);
                if !out.contains(&s) {
                    out.push(s.clone());
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    let tail_gens = sup.tail().generators();
    out.retain(|m| tail_gens.iter().all(|r| !m.dot(r).is_negative()));
    Ok(out)
}

/// Bounded certificate search: returns the first verifying certificate, or
/// `None` (not found within the bound; never a disproof).
pub fn search_face(sub: &PpDivisor, sup: &PpDivisor, bound: u32) -> Result<Option<FaceCertificate>> {
    if sub.base() != sup.base() || sub.rank() != sup.rank() || !sub.contained_in(sup) {
        return Ok(None);
    }
    let field = sup
        .base()
        .field()
        .cloned()
        .unwrap_or_else(crate::arith::NumberField::rationals);
    let target: BTreeSet<BasePoint> = sub
        .empty_points()
        .into_iter()
        .filter(|p| sup.locus().contains(p))
        .collect();
    let mut points: BTreeSet<BasePoint> = BTreeSet::new();
    for (p, _) in sub.listed().iter().chain(sup.listed().iter()) {
        points.insert(p.clone());
    }
    let pool: Vec<crate::arith::FieldElement> = points
        .iter()
        .filter_map(|p| match p {
            BasePoint::Finite(a) => Some(a.clone()),
            BasePoint::Infinity => None,
        })
        .collect();

    // Admissible pairs: zero set covers the locus difference, faces agree
    // off it.
    let mut admissible: Vec<((QVec, RationalFunction), BTreeSet<BasePoint>)> = Vec::new();
    for m in face_functional_candidates(sup, sub, bound)? {
        let fs: Vec<RationalFunction> = if sup.base().is_point() {
            vec![RationalFunction::one(&field)]
        } else {
            let ev = sup.evaluate(&m)?;
            section_candidates(&ev, &sup.locus(), &pool, bound as i64)?
        };
        'cands: for f in fs {
            let zset: BTreeSet<BasePoint> = witness_zero_set(sup, &m, &f)?.into_iter().collect();
            if !target.iter().all(|p| zset.contains(p)) {
                continue;
            }
            let g_sub = sub.tail_polyhedron().face_by(&m)?;
            let g_sup = sup.tail_polyhedron().face_by(&m)?;
            if g_sub != g_sup {
                continue;
            }
            for p in &points {
                if zset.contains(p) || !sup.locus().contains(p) {
                    continue;
                }
                let sub_c = sub.coefficient_at(p);
                if sub_c.is_empty() {
                    continue 'cands;
                }
                if sub_c.face_by(&m)? != sup.coefficient_at(p).face_by(&m)? {
                    continue 'cands;
                }
            }
            admissible.push(((m.clone(), f), zset));
        }
    }
    if admissible.is_empty() {
        return Ok(None);
    }
    // Choose witnesses so the common zero set shrinks to exactly the target.
    admissible.sort_by_key(|(_, z)| z.len());
    let all_points: BTreeSet<BasePoint> = admissible
        .iter()
        .flat_map(|(_, z)| z.iter().cloned())
        .collect();
    let (first, first_z) = admissible[0].clone();
    let mut chosen: Vec<(QVec, RationalFunction)> = vec![first];
    let mut meet = first_z;
    for p in &all_points {
        if target.contains(p) || !meet.contains(p) {
            continue;
        }
        let Some((pair, z)) = admissible.iter().find(|(_, z)| !z.contains(p)) else {
            return Ok(None);
        };
        chosen.push(pair.clone());
        meet = meet.intersection(z).cloned().collect();
    }
    if meet != target {
        return Ok(None);
    }
    let cert = FaceCertificate { witnesses: chosen };
    let report = verify_face(sub, sup, &cert)?;
    if report.valid {
        Ok(Some(cert))
    } else {
        Ok(None)
    }
}
