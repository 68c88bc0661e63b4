//! Symbolic base varieties: a point, the projective line over a number
//! field, or an open subset of it, together with Q-divisors, rational
//! functions in factored form, plurifunctions and semilinear base maps.

use num_traits::{Signed, Zero};
use std::sync::Arc;

use crate::arith::{FieldAutomorphism, FieldElement, NumberField};
use crate::error::{Error, Result};
use crate::rat::{rat_floor, QMat, QVec, Rat};

/// A closed point of the projective line: infinity or [a : 1].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BasePoint {
    Infinity,
    Finite(FieldElement),
}

impl BasePoint {
    pub fn finite_i64(field: &Arc<NumberField>, a: i64) -> BasePoint {
        BasePoint::Finite(FieldElement::from_rat(field, crate::rat::rint(a)))
    }

    pub fn zero(field: &Arc<NumberField>) -> BasePoint {
        BasePoint::finite_i64(field, 0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BaseVariety {
    Point,
    ProjectiveLine {
        field: Arc<NumberField>,
    },
    OpenOfProjectiveLine {
        field: Arc<NumberField>,
        removed: Vec<BasePoint>,
    },
}

impl BaseVariety {
    pub fn line(field: &Arc<NumberField>) -> BaseVariety {
        BaseVariety::ProjectiveLine {
            field: field.clone(),
        }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        match self {
            BaseVariety::Point => None,
            BaseVariety::ProjectiveLine { field } => Some(field),
            BaseVariety::OpenOfProjectiveLine { field, .. } => Some(field),
        }
    }

    pub fn removed(&self) -> &[BasePoint] {
        match self {
            BaseVariety::OpenOfProjectiveLine { removed, .. } => removed,
            _ => &[],
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, BaseVariety::Point)
    }

    /// Complete means the full projective line (or the point base).
    pub fn is_complete(&self) -> bool {
        !matches!(self, BaseVariety::OpenOfProjectiveLine { removed, .. } if !removed.is_empty())
    }

    pub fn is_affine_open(&self) -> bool {
        matches!(self, BaseVariety::OpenOfProjectiveLine { removed, .. } if !removed.is_empty())
    }

    pub fn contains(&self, p: &BasePoint) -> bool {
        match self {
            BaseVariety::Point => false,
            BaseVariety::ProjectiveLine { .. } => true,
            BaseVariety::OpenOfProjectiveLine { removed, .. } => !removed.contains(p),
        }
    }

    /// The open subset with further points removed; duplicates collapse.
    pub fn remove(&self, points: &[BasePoint]) -> Result<BaseVariety> {
        let field = self.field().ok_or(Error::UnsupportedBase)?.clone();
        let mut removed: Vec<BasePoint> = self.removed().to_vec();
        for p in points {
            if !removed.contains(p) {
                removed.push(p.clone());
            }
        }
        removed.sort();
        if removed.is_empty() {
            return Ok(BaseVariety::ProjectiveLine { field });
        }
        Ok(BaseVariety::OpenOfProjectiveLine { field, removed })
    }
}

/// A Q-divisor on (an open of) the line: distinct points with nonzero
/// rational coefficients, kept sorted.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QDivisor {
    pub terms: Vec<(BasePoint, Rat)>,
}

impl QDivisor {
    pub fn zero() -> QDivisor {
        QDivisor { terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<(BasePoint, Rat)>) -> QDivisor {
        let mut map: std::collections::BTreeMap<BasePoint, Rat> = Default::default();
        for (p, c) in terms {
            *map.entry(p).or_insert_with(Rat::zero) += c;
        }
        QDivisor {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn coeff_at(&self, p: &BasePoint) -> Rat {
        self.terms
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &QDivisor) -> QDivisor {
        QDivisor::from_terms([self.terms.clone(), other.terms.clone()].concat())
    }

    pub fn neg(&self) -> QDivisor {
        QDivisor {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> QDivisor {
        QDivisor::from_terms(
            self.terms
                .iter()
                .map(|(p, x)| (p.clone(), x * c))
                .collect(),
        )
    }

    pub fn degree(&self) -> Rat {
        self.terms.iter().map(|(_, c)| c.clone()).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }

    pub fn floor(&self) -> QDivisor {
        QDivisor::from_terms(
            self.terms
                .iter()
                .map(|(p, c)| (p.clone(), rat_floor(c)))
                .collect(),
        )
    }

    pub fn support(&self) -> Vec<BasePoint> {
        self.terms.iter().map(|(p, _)| p.clone()).collect()
    }

    /// Drops terms at points outside the base.
    pub fn restrict_to(&self, base: &BaseVariety) -> QDivisor {
        QDivisor {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| base.contains(p))
                .cloned()
                .collect(),
        }
    }
}

/// `c * prod (t - a_i)^{e_i}` on the projective line, kept factored so its
/// divisor is exact bookkeeping. Over the point base it is just the constant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RationalFunction {
    pub constant: FieldElement,
    pub factors: Vec<(FieldElement, i64)>,
}

impl RationalFunction {
    pub fn new(constant: FieldElement, factors: Vec<(FieldElement, i64)>) -> Result<Self> {
        if constant.is_zero() {
            return Err(Error::Invalid("rational function with zero constant".into()));
        }
        let mut map: std::collections::BTreeMap<FieldElement, i64> = Default::default();
        for (root, e) in factors {
            if *root.field != *constant.field {
                return Err(Error::FieldMismatch("function root".into()));
            }
            *map.entry(root).or_insert(0) += e;
        }
        Ok(RationalFunction {
            constant,
            factors: map.into_iter().filter(|(_, e)| *e != 0).collect(),
        })
    }

    pub fn one(field: &Arc<NumberField>) -> RationalFunction {
        RationalFunction {
            constant: FieldElement::one(field),
            factors: Vec::new(),
        }
    }

    pub fn constant_fn(c: FieldElement) -> Result<RationalFunction> {
        RationalFunction::new(c, Vec::new())
    }

    /// The coordinate function t (vanishing at 0, pole at infinity).
    pub fn coordinate(field: &Arc<NumberField>) -> RationalFunction {
        RationalFunction {
            constant: FieldElement::one(field),
            factors: vec![(FieldElement::zero(field), 1)],
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.constant.field
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.constant == FieldElement::one(self.field())
    }

    pub fn mul(&self, other: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::new(
            self.constant.mul(&other.constant)?,
            [self.factors.clone(), other.factors.clone()].concat(),
        )
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        RationalFunction::new(
            self.constant.inv()?,
            self.factors.iter().map(|(r, e)| (r.clone(), -e)).collect(),
        )
    }

    pub fn pow(&self, e: i64) -> Result<RationalFunction> {
        if e == 0 {
            return Ok(RationalFunction::one(self.field()));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as i64;
        RationalFunction::new(
            base.constant.pow(k)?,
            base.factors.iter().map(|(r, x)| (r.clone(), x * k)).collect(),
        )
    }

    /// Order of vanishing at a point of the line.
    pub fn ord_at(&self, p: &BasePoint) -> i64 {
        match p {
            BasePoint::Infinity => -self.factors.iter().map(|(_, e)| e).sum::<i64>(),
            BasePoint::Finite(a) => self
                .factors
                .iter()
                .find(|(r, _)| r == a)
                .map(|(_, e)| *e)
                .unwrap_or(0),
        }
    }

    /// The full principal divisor on the projective line.
    pub fn divisor_full(&self) -> QDivisor {
        let mut terms: Vec<(BasePoint, Rat)> = self
            .factors
            .iter()
            .map(|(r, e)| (BasePoint::Finite(r.clone()), crate::rat::rint(*e)))
            .collect();
        let total: i64 = self.factors.iter().map(|(_, e)| e).sum();
        if total != 0 {
            terms.push((BasePoint::Infinity, crate::rat::rint(-total)));
        }
        QDivisor::from_terms(terms)
    }

    /// Applies a field automorphism to the constant and all roots.
    pub fn twist_coefficients(&self, sigma: &FieldAutomorphism) -> Result<RationalFunction> {
        RationalFunction::new(
            sigma.apply(&self.constant)?,
            self.factors
                .iter()
                .map(|(r, e)| Ok((sigma.apply(r)?, *e)))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Substitutes `t := (a t + b) / (c t + d)` and recanonicalizes the
    /// factored form.
    pub fn substitute_mobius(&self, m: &MobiusMatrix) -> Result<RationalFunction> {
        let (a, b, c, d) = (&m.entries[0], &m.entries[1], &m.entries[2], &m.entries[3]);
        let mut constant = self.constant.clone();
        let mut factors: Vec<(FieldElement, i64)> = Vec::new();
        let mut denom_exp: i64 = 0;
        for (root, e) in &self.factors {
            // (a t + b) - root (c t + d) = (a - root c) t + (b - root d).
            let n = a.sub(&root.mul(c)?)?;
            let mcoef = b.sub(&root.mul(d)?)?;
            denom_exp += e;
            if n.is_zero() {
                // Constant numerator: invertibility keeps it nonzero.
                constant = constant.mul(&mcoef.pow(*e)?)?;
            } else {
                constant = constant.mul(&n.pow(*e)?)?;
                let new_root = mcoef.neg().div(&n)?;
                factors.push((new_root, *e));
            }
        }
        if denom_exp != 0 {
            if c.is_zero() {
                constant = constant.mul(&d.pow(-denom_exp)?)?;
            } else {
                constant = constant.mul(&c.pow(-denom_exp)?)?;
                let pole = d.neg().div(c)?;
                factors.push((pole, -denom_exp));
            }
        }
        RationalFunction::new(constant, factors)
    }
}

/// A 2x2 invertible matrix over the field, normalized so the first nonzero
/// entry is 1; acts on [z : w] by matrix multiplication.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MobiusMatrix {
    /// Row-major entries [a, b, c, d] for [z:w] -> [az+bw : cz+dw].
    pub entries: [FieldElement; 4],
}

impl MobiusMatrix {
    pub fn new(entries: [FieldElement; 4]) -> Result<MobiusMatrix> {
        let [a, b, c, d] = &entries;
        let det = a.mul(d)?.sub(&b.mul(c)?)?;
        if det.is_zero() {
            return Err(Error::Invalid("Mobius matrix is singular".into()));
        }
        let first = entries.iter().find(|e| !e.is_zero()).unwrap().clone();
        let inv = first.inv()?;
        let normalized: Vec<FieldElement> = entries
            .iter()
            .map(|e| e.mul(&inv))
            .collect::<Result<Vec<_>>>()?;
        Ok(MobiusMatrix {
            entries: normalized.try_into().unwrap(),
        })
    }

    pub fn identity(field: &Arc<NumberField>) -> MobiusMatrix {
        MobiusMatrix {
            entries: [
                FieldElement::one(field),
                FieldElement::zero(field),
                FieldElement::zero(field),
                FieldElement::one(field),
            ],
        }
    }

    pub fn from_i64(field: &Arc<NumberField>, m: [i64; 4]) -> Result<MobiusMatrix> {
        MobiusMatrix::new([
            FieldElement::from_rat(field, crate::rat::rint(m[0])),
            FieldElement::from_rat(field, crate::rat::rint(m[1])),
            FieldElement::from_rat(field, crate::rat::rint(m[2])),
            FieldElement::from_rat(field, crate::rat::rint(m[3])),
        ])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.entries[0].field
    }

    pub fn mul(&self, other: &MobiusMatrix) -> Result<MobiusMatrix> {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        MobiusMatrix::new([
            a.mul(e)?.add(&b.mul(g)?)?,
            a.mul(f)?.add(&b.mul(h)?)?,
            c.mul(e)?.add(&d.mul(g)?)?,
            c.mul(f)?.add(&d.mul(h)?)?,
        ])
    }

    pub fn inverse(&self) -> Result<MobiusMatrix> {
        let [a, b, c, d] = &self.entries;
        MobiusMatrix::new([d.clone(), b.neg(), c.neg(), a.clone()])
    }

    /// Applies a field automorphism entrywise.
    pub fn twist(&self, sigma: &FieldAutomorphism) -> Result<MobiusMatrix> {
        let entries: Vec<FieldElement> = self
            .entries
            .iter()
            .map(|e| sigma.apply(e))
            .collect::<Result<Vec<_>>>()?;
        MobiusMatrix::new(entries.try_into().unwrap())
    }

    pub fn apply_point(&self, p: &BasePoint) -> Result<BasePoint> {
        let [a, b, c, d] = &self.entries;
        let (num, den) = match p {
            BasePoint::Infinity => (a.clone(), c.clone()),
            BasePoint::Finite(x) => (a.mul(x)?.add(b)?, c.mul(x)?.add(d)?),
        };
        if den.is_zero() {
            Ok(BasePoint::Infinity)
        } else {
            Ok(BasePoint::Finite(num.div(&den)?))
        }
    }
}

/// A semilinear automorphism of the line: apply the field twist to the
/// coordinates, then the Mobius matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemilinearBaseMap {
    pub mobius: MobiusMatrix,
    pub twist: FieldAutomorphism,
}

impl SemilinearBaseMap {
    pub fn new(mobius: MobiusMatrix, twist: FieldAutomorphism) -> Result<SemilinearBaseMap> {
        if **mobius.field() != *twist.field {
            return Err(Error::FieldMismatch("base map".into()));
        }
        Ok(SemilinearBaseMap { mobius, twist })
    }

    pub fn identity(field: &Arc<NumberField>) -> SemilinearBaseMap {
        SemilinearBaseMap {
            mobius: MobiusMatrix::identity(field),
            twist: FieldAutomorphism::identity(field),
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.mobius.field()
    }

    pub fn is_identity(&self) -> bool {
        self.twist.is_identity() && self.mobius == MobiusMatrix::identity(self.field())
    }

    pub fn apply_point(&self, p: &BasePoint) -> Result<BasePoint> {
        let twisted = match p {
            BasePoint::Infinity => BasePoint::Infinity,
            BasePoint::Finite(x) => BasePoint::Finite(self.twist.apply(x)?),
        };
        self.mobius.apply_point(&twisted)
    }

    /// `self ∘ other` on points: x -> self(other(x)).
    pub fn compose(&self, other: &SemilinearBaseMap) -> Result<SemilinearBaseMap> {
        // self(other(x)) = M1 s1(M2 s2(x)) = (M1 s1(M2)) (s1 s2)(x).
        let mobius = self.mobius.mul(&other.mobius.twist(&self.twist)?)?;
        let twist = self.twist.compose(&other.twist)?;
        SemilinearBaseMap::new(mobius, twist)
    }

    pub fn inverse(&self) -> Result<SemilinearBaseMap> {
        let sigma_inv = self.twist.inverse()?;
        let mobius = self.mobius.inverse()?.twist(&sigma_inv)?;
        SemilinearBaseMap::new(mobius, sigma_inv)
    }

    /// Pushforward of a divisor: points map through the map itself.
    pub fn push_divisor(&self, d: &QDivisor) -> Result<QDivisor> {
        let terms = d
            .terms
            .iter()
            .map(|(p, c)| Ok((self.apply_point(p)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(QDivisor::from_terms(terms))
    }

    /// Pullback of a divisor: points map through the inverse.
    pub fn pull_divisor(&self, d: &QDivisor) -> Result<QDivisor> {
        self.inverse()?.push_divisor(d)
    }

    /// Pullback of a function: `(psi^* f)(x) = sigma^{-1}(f(psi(x)))` as an
    /// element of the function field, so `div(psi^* f) = psi^{-1}(div f)`.
    pub fn pull_function(&self, f: &RationalFunction) -> Result<RationalFunction> {
        let substituted = f.substitute_mobius(&self.mobius)?;
        substituted.twist_coefficients(&self.twist.inverse()?)
    }

    /// Pushforward of a function along the map (pullback along the inverse).
    pub fn push_function(&self, f: &RationalFunction) -> Result<RationalFunction> {
        self.inverse()?.pull_function(f)
    }

    pub fn push_base(&self, base: &BaseVariety) -> Result<BaseVariety> {
        match base {
            BaseVariety::Point => Ok(BaseVariety::Point),
            BaseVariety::ProjectiveLine { .. } => Ok(base.clone()),
            BaseVariety::OpenOfProjectiveLine { field, removed } => {
                let moved = removed
                    .iter()
                    .map(|p| self.apply_point(p))
                    .collect::<Result<Vec<_>>>()?;
                BaseVariety::OpenOfProjectiveLine {
                    field: field.clone(),
                    removed: Vec::new(),
                }
                .remove(&moved)
            }
        }
    }
}

/// div(f) restricted to the base. Terms at removed points are dropped.
pub fn divisor_of_function(f: &RationalFunction, base: &BaseVariety) -> Result<QDivisor> {
    if base.is_point() {
        return Err(Error::UnsupportedBase);
    }
    Ok(f.divisor_full().restrict_to(base))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Positivity {
    pub big: bool,
    pub semiample: bool,
}

/// Bigness/semiampleness of a Q-divisor on the supported bases.
pub fn classify_positivity(d: &QDivisor, base: &BaseVariety) -> Positivity {
    match base {
        BaseVariety::Point => {
            let zero = d.terms.is_empty();
            Positivity {
                big: zero,
                semiample: zero,
            }
        }
        BaseVariety::ProjectiveLine { .. } => {
            let deg = d.degree();
            Positivity {
                big: deg.is_positive(),
                semiample: !deg.is_negative(),
            }
        }
        BaseVariety::OpenOfProjectiveLine { removed, .. } => {
            if removed.is_empty() {
                let deg = d.degree();
                Positivity {
                    big: deg.is_positive(),
                    semiample: !deg.is_negative(),
                }
            } else {
                // Affine base: both conditions are vacuous.
                Positivity {
                    big: true,
                    semiample: true,
                }
            }
        }
    }
}

/// h^0 on the complete line: deg(floor d) + 1 clamped at 0.
pub fn section_dim(d: &QDivisor, base: &BaseVariety) -> Result<u64> {
    if !matches!(base, BaseVariety::ProjectiveLine { .. }) {
        return Err(Error::UnsupportedBase);
    }
    let deg = d.floor().degree();
    debug_assert!(deg.denom() == &num_bigint::BigInt::from(1));
    let n = deg.to_integer();
    if n.is_negative() {
        Ok(0)
    } else {
        Ok(u64::try_from(n + 1u32).unwrap_or(u64::MAX))
    }
}

/// Whether `div(f) + d >= 0` at every point of the base (removed points are
/// exempt).
pub fn section_membership(f: &RationalFunction, d: &QDivisor, base: &BaseVariety) -> Result<bool> {
    if base.is_point() {
        return Err(Error::UnsupportedBase);
    }
    let total = divisor_of_function(f, base)?.add(&d.restrict_to(base));
    Ok(total.is_effective())
}

/// All candidate sections of `d` with roots drawn from a finite pool and
/// exponents bounded, constant term 1. The constant function is included
/// when it is a section.
pub fn section_candidates(
    d: &QDivisor,
    base: &BaseVariety,
    pool: &[FieldElement],
    bound: i64,
) -> Result<Vec<RationalFunction>> {
    let field = base.field().ok_or(Error::UnsupportedBase)?;
    let mut pool: Vec<FieldElement> = pool.to_vec();
    pool.sort();
    pool.dedup();
    let mut out = Vec::new();
    let k = pool.len();
    let mut exps = vec![-bound; k];
    'outer: loop {
        let factors: Vec<(FieldElement, i64)> = pool
            .iter()
            .cloned()
            .zip(exps.iter().cloned())
            .filter(|(_, e)| *e != 0)
            .collect();
        let f = RationalFunction::new(FieldElement::one(field), factors)?;
        if section_membership(&f, d, base)? {
            out.push(f);
        }
        if k == 0 {
            break;
        }
        let mut j = 0;
        loop {
            if j == k {
                break 'outer;
            }
            exps[j] += 1;
            if exps[j] <= bound {
                break;
            }
            exps[j] = -bound;
            j += 1;
        }
    }
    Ok(out)
}

/// An element of N ⊗ k(Y)* in canonical form: one rational function per
/// lattice basis vector. `f(m) = prod f_j^{m_j}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Plurifunction {
    pub components: Vec<RationalFunction>,
}

impl Plurifunction {
    pub fn one(rank: usize, field: &Arc<NumberField>) -> Plurifunction {
        Plurifunction {
            components: vec![RationalFunction::one(field); rank],
        }
    }

    /// Folds a list of `vector ⊗ function` terms into components; vectors
    /// must be integral.
    pub fn from_terms(
        rank: usize,
        field: &Arc<NumberField>,
        terms: &[(QVec, RationalFunction)],
    ) -> Result<Plurifunction> {
        let mut components = vec![RationalFunction::one(field); rank];
        for (v, f) in terms {
            if v.dim() != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    got: v.dim(),
                });
            }
            if !v.is_integral() {
                return Err(Error::NonIntegralPairing);
            }
            for (j, c) in v.0.iter().enumerate() {
                let e = i64::try_from(c.to_integer())
                    .map_err(|_| Error::Invalid("plurifunction exponent overflow".into()))?;
                components[j] = components[j].mul(&f.pow(e)?)?;
            }
        }
        Ok(Plurifunction { components })
    }

    pub fn term(rank: usize, j: usize, f: RationalFunction) -> Plurifunction {
        let field = f.field().clone();
        let mut components = vec![RationalFunction::one(&field); rank];
        components[j] = f;
        Plurifunction { components }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.components[0].field()
    }

    pub fn is_one(&self) -> bool {
        self.components.iter().all(|f| f.is_one())
    }

    pub fn mul(&self, other: &Plurifunction) -> Result<Plurifunction> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: other.rank(),
            });
        }
        Ok(Plurifunction {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.mul(b))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    pub fn inv(&self) -> Result<Plurifunction> {
        Ok(Plurifunction {
            components: self
                .components
                .iter()
                .map(|f| f.inv())
                .collect::<Result<Vec<_>>>()?,
        })
    }

    /// Evaluation at a lattice functional: `prod f_j^{m_j}`.
    pub fn eval(&self, m: &QVec) -> Result<RationalFunction> {
        if m.dim() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: m.dim(),
            });
        }
        if !m.is_integral() {
            return Err(Error::NonIntegralPairing);
        }
        let mut acc = RationalFunction::one(self.field());
        for (f, c) in self.components.iter().zip(&m.0) {
            let e = i64::try_from(c.to_integer())
                .map_err(|_| Error::Invalid("evaluation exponent overflow".into()))?;
            acc = acc.mul(&f.pow(e)?)?;
        }
        Ok(acc)
    }

    /// Pushforward along an integral lattice map: `F_*(Σ v_i ⊗ f_i) =
    /// Σ F(v_i) ⊗ f_i`, computed on components.
    pub fn map_lattice(&self, f: &QMat) -> Result<Plurifunction> {
        if !f.is_integral() {
            return Err(Error::NonIntegralPairing);
        }
        if f.ncols() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: f.ncols(),
            });
        }
        let field = self.field();
        let target = f.nrows();
        let mut components = vec![RationalFunction::one(field); target];
        for (j, fj) in self.components.iter().enumerate() {
            for (k, comp) in components.iter_mut().enumerate() {
                let e = i64::try_from(f.rows[k].0[j].to_integer())
                    .map_err(|_| Error::Invalid("lattice map entry overflow".into()))?;
                if e != 0 {
                    *comp = comp.mul(&fj.pow(e)?)?;
                }
            }
        }
        Ok(Plurifunction { components })
    }

    /// Componentwise pullback along a semilinear base map.
    pub fn pull_base(&self, psi: &SemilinearBaseMap) -> Result<Plurifunction> {
        Ok(Plurifunction {
            components: self
                .components
                .iter()
                .map(|f| psi.pull_function(f))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    /// Componentwise pushforward along a semilinear base map.
    pub fn push_base(&self, psi: &SemilinearBaseMap) -> Result<Plurifunction> {
        Ok(Plurifunction {
            components: self
                .components
                .iter()
                .map(|f| psi.push_function(f))
                .collect::<Result<Vec<_>>>()?,
        })
    }

    /// The lattice vector of vanishing orders at a point.
    pub fn ord_vector_at(&self, p: &BasePoint) -> QVec {
        QVec(
            self.components
                .iter()
                .map(|f| crate::rat::rint(f.ord_at(p)))
                .collect(),
        )
    }

    /// Points of the line where some component has a zero or pole.
    pub fn support(&self) -> Vec<BasePoint> {
        let mut pts: Vec<BasePoint> = Vec::new();
        for f in &self.components {
            for (p, _) in f.divisor_full().terms {
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
        }
        pts.sort();
        pts
    }

    /// Keeps only the factors whose zero/pole locus lies in the given point
    /// set (the restriction used by fan morphisms).
    pub fn restrict_to_points(&self, allowed: &[BasePoint]) -> Result<Plurifunction> {
        let components = self
            .components
            .iter()
            .map(|f| {
                let factors: Vec<(FieldElement, i64)> = f
                    .factors
                    .iter()
                    .filter(|(root, _)| allowed.contains(&BasePoint::Finite(root.clone())))
                    .cloned()
                    .collect();
                RationalFunction::new(f.constant.clone(), factors)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Plurifunction { components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint, QVec};

    fn qq() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn t() -> RationalFunction {
        RationalFunction::coordinate(&qq())
    }

    fn pt(a: i64) -> BasePoint {
        BasePoint::finite_i64(&qq(), a)
    }

    #[test]
    fn divisor_of_coordinate_function() {
        let base = BaseVariety::line(&qq());
        let d = divisor_of_function(&t(), &base).unwrap();
        assert_eq!(d.coeff_at(&pt(0)), rint(1));
        assert_eq!(d.coeff_at(&BasePoint::Infinity), rint(-1));
        assert_eq!(d.degree(), rint(0));
    }

    #[test]
    fn divisor_with_exponent_bookkeeping() {
        // (t-1)^2 / t  ->  2{1} - {0} - {inf}.
        let f = RationalFunction::new(
            FieldElement::one(&qq()),
            vec![
                (FieldElement::from_rat(&qq(), rint(1)), 2),
                (FieldElement::zero(&qq()), -1),
            ],
        )
        .unwrap();
        let d = divisor_of_function(&f, &BaseVariety::line(&qq())).unwrap();
        assert_eq!(d.coeff_at(&pt(1)), rint(2));
        assert_eq!(d.coeff_at(&pt(0)), rint(-1));
        assert_eq!(d.coeff_at(&BasePoint::Infinity), rint(-1));
        assert_eq!(d.degree(), rint(0));
    }

    #[test]
    fn positivity_on_the_complete_line() {
        let base = BaseVariety::line(&qq());
        let d = QDivisor::from_terms(vec![(pt(0), rat(1, 2))]);
        let p = classify_positivity(&d, &base);
        assert!(p.big && p.semiample);
        let neg = QDivisor::from_terms(vec![(BasePoint::Infinity, rint(-1))]);
        let p = classify_positivity(&neg, &base);
        assert!(!p.big && !p.semiample);
        let affine = base.remove(&[pt(0)]).unwrap();
        let p = classify_positivity(&neg, &affine);
        assert!(p.big && p.semiample);
    }

    #[test]
    fn section_dimensions_on_the_line() {
        let base = BaseVariety::line(&qq());
        let d = QDivisor::from_terms(vec![(pt(0), rint(3))]);
        assert_eq!(section_dim(&d, &base).unwrap(), 4);
        let half = QDivisor::from_terms(vec![(pt(0), rat(1, 2))]);
        assert_eq!(section_dim(&half, &base).unwrap(), 1);
        let neg = QDivisor::from_terms(vec![(BasePoint::Infinity, rint(-1))]);
        assert_eq!(section_dim(&neg, &base).unwrap(), 0);
    }

    #[test]
    fn section_membership_examples() {
        let base = BaseVariety::line(&qq());
        // f = t against d = {inf}: div f + d = {0} >= 0.
        let d = QDivisor::from_terms(vec![(BasePoint::Infinity, rint(1))]);
        assert!(section_membership(&t(), &d, &base).unwrap());
        // f = 1 is a section of any effective divisor.
        let one = RationalFunction::one(&qq());
        assert!(section_membership(&one, &d, &base).unwrap());
        // f = 1/t has a pole at 0.
        let finv = t().inv().unwrap();
        assert!(!section_membership(&finv, &QDivisor::zero(), &base).unwrap());
    }

    #[test]
    fn plurifunction_evaluation() {
        let pf = Plurifunction::term(1, 0, t());
        let sq = pf.eval(&QVec::from_ints(&[2])).unwrap();
        assert_eq!(sq, t().pow(2).unwrap());
        assert!(pf.eval(&QVec::from_ints(&[0])).unwrap().is_one());
        // (1,0)⊗t + (0,1)⊗(t-1) at m = (1,1) -> t(t-1).
        let tm1 = RationalFunction::new(
            FieldElement::one(&qq()),
            vec![(FieldElement::from_rat(&qq(), rint(1)), 1)],
        )
        .unwrap();
        let pf = Plurifunction::from_terms(
            2,
            &qq(),
            &[
                (QVec::from_ints(&[1, 0]), t()),
                (QVec::from_ints(&[0, 1]), tm1.clone()),
            ],
        )
        .unwrap();
        let v = pf.eval(&QVec::from_ints(&[1, 1])).unwrap();
        assert_eq!(v, t().mul(&tm1).unwrap());
        assert!(matches!(
            pf.eval(&QVec(vec![rat(1, 2), rint(0)])),
            Err(Error::NonIntegralPairing)
        ));
    }

    #[test]
    fn plurifunction_eval_is_a_homomorphism() {
        let pf = Plurifunction::from_terms(
            2,
            &qq(),
            &[
                (QVec::from_ints(&[2, -1]), t()),
                (
                    QVec::from_ints(&[0, 3]),
                    RationalFunction::new(
                        FieldElement::from_rat(&qq(), rint(5)),
                        vec![(FieldElement::from_rat(&qq(), rint(2)), 1)],
                    )
                    .unwrap(),
                ),
            ],
        )
        .unwrap();
        let m1 = QVec::from_ints(&[1, 2]);
        let m2 = QVec::from_ints(&[-3, 1]);
        let lhs = pf.eval(&m1.add(&m2)).unwrap();
        let rhs = pf.eval(&m1).unwrap().mul(&pf.eval(&m2).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mobius_inversion_swaps_zero_and_infinity() {
        let inv = MobiusMatrix::from_i64(&qq(), [0, 1, 1, 0]).unwrap();
        let psi = SemilinearBaseMap::new(inv, FieldAutomorphism::identity(&qq())).unwrap();
        assert_eq!(psi.apply_point(&pt(0)).unwrap(), BasePoint::Infinity);
        assert_eq!(psi.apply_point(&BasePoint::Infinity).unwrap(), pt(0));
        assert_eq!(psi.apply_point(&pt(2)).unwrap(), {
            BasePoint::Finite(FieldElement::from_rat(&qq(), rat(1, 2)))
        });
    }

    #[test]
    fn conjugation_twist_moves_gaussian_points() {
        let f = NumberField::gaussian();
        let conj = FieldAutomorphism::conjugation(&f).unwrap();
        let psi = SemilinearBaseMap::new(MobiusMatrix::identity(&f), conj).unwrap();
        let i_pt = BasePoint::Finite(FieldElement::generator(&f));
        let minus_i = BasePoint::Finite(FieldElement::generator(&f).neg());
        assert_eq!(psi.apply_point(&i_pt).unwrap(), minus_i);
    }

    #[test]
    fn pullback_divisor_is_inverse_image() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let field = qq();
        for _ in 0..100 {
            let m = loop {
                let cand = [
                    rng.gen_range(-4..=4),
                    rng.gen_range(-4..=4),
                    rng.gen_range(-4..=4),
                    rng.gen_range(-4..=4),
                ];
                if cand[0] * cand[3] - cand[1] * cand[2] != 0 {
                    break MobiusMatrix::from_i64(&field, cand).unwrap();
                }
            };
            let psi =
                SemilinearBaseMap::new(m, FieldAutomorphism::identity(&field)).unwrap();
            let p = pt(rng.gen_range(-3..=3));
            let d = QDivisor::from_terms(vec![(p.clone(), rint(1))]);
            let pulled = psi.pull_divisor(&d).unwrap();
            assert_eq!(pulled.terms.len(), 1);
            let (q, c) = &pulled.terms[0];
            assert_eq!(*c, rint(1));
            assert_eq!(psi.apply_point(q).unwrap(), p);
        }
    }

    #[test]
    fn function_pullback_matches_divisor_pullback() {
        let field = qq();
        let m = MobiusMatrix::from_i64(&field, [0, 1, 1, 0]).unwrap(); // z -> 1/z
        let psi = SemilinearBaseMap::new(m, FieldAutomorphism::identity(&field)).unwrap();
        let f = t(); // div = {0} - {inf}
        let g = psi.pull_function(&f).unwrap();
        // psi^{-1}(0) = inf, psi^{-1}(inf) = 0.
        let dg = g.divisor_full();
        assert_eq!(dg.coeff_at(&BasePoint::Infinity), rint(1));
        assert_eq!(dg.coeff_at(&pt(0)), rint(-1));
        // And composition with the inverse is the identity on functions.
        let back = psi.inverse().unwrap().pull_function(&g).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn base_map_composition_respects_points() {
        let field = NumberField::gaussian();
        let conj = FieldAutomorphism::conjugation(&field).unwrap();
        let a = SemilinearBaseMap::new(
            MobiusMatrix::from_i64(&field, [0, 1, 1, 0]).unwrap(),
            conj.clone(),
        )
        .unwrap();
        let b = SemilinearBaseMap::new(
            MobiusMatrix::new([
                FieldElement::generator(&field),
                FieldElement::zero(&field),
                FieldElement::zero(&field),
                FieldElement::one(&field),
            ])
            .unwrap(),
            FieldAutomorphism::identity(&field),
        )
        .unwrap();
        let ab = a.compose(&b).unwrap();
        for p in [
            BasePoint::Infinity,
            BasePoint::zero(&field),
            BasePoint::Finite(FieldElement::generator(&field)),
            BasePoint::finite_i64(&field, 2),
        ] {
            assert_eq!(
                ab.apply_point(&p).unwrap(),
                a.apply_point(&b.apply_point(&p).unwrap()).unwrap()
            );
        }
        let inv = ab.inverse().unwrap();
        for p in [BasePoint::Infinity, BasePoint::finite_i64(&field, 3)] {
            assert_eq!(inv.apply_point(&ab.apply_point(&p).unwrap()).unwrap(), p);
        }
    }

    #[test]
    fn random_factored_divisors_have_degree_zero() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let base = BaseVariety::line(&qq());
        for _ in 0..200 {
            let k = rng.gen_range(1..=4);
            let factors: Vec<(FieldElement, i64)> = (0..k)
                .map(|_| {
                    (
                        FieldElement::from_rat(&qq(), rint(rng.gen_range(-5..=5))),
                        rng.gen_range(-3..=3),
                    )
                })
                .collect();
            let f = RationalFunction::new(FieldElement::one(&qq()), factors).unwrap();
            assert_eq!(divisor_of_function(&f, &base).unwrap().degree(), rint(0));
        }
    }
}
