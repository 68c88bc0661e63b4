//! Arithmetic over explicit number fields Q[x]/(p(x)) with a presented finite
//! automorphism group, plus finite multiplication tables with exhaustive law
//! verification.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rat::{format_rat, Rat};

/// A number field presented by a monic modulus, constant term first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NumberField {
    pub modulus: Vec<Rat>,
    pub generator: String,
    pub degree: usize,
    /// Irreducibility is decided by rational-root search up to degree 3;
    /// above that the modulus is accepted on trust and reports flag it.
    pub irreducibility_verified: bool,
}

impl NumberField {
    pub fn new(modulus: Vec<Rat>, generator: &str) -> Result<Arc<NumberField>> {
        if modulus.len() < 2 {
            return Err(Error::Invalid("modulus must have degree >= 1".into()));
        }
        if !modulus.last().unwrap().is_one() {
            return Err(Error::Invalid("modulus must be monic".into()));
        }
        let degree = modulus.len() - 1;
        let verified = match degree {
            1 => true,
            2 | 3 => match has_rational_root(&modulus) {
                Some(has) => {
                    if has {
                        return Err(Error::Invalid(
                            "modulus is reducible: it has a rational root".into(),
                        ));
                    }
                    true
                }
                None => false,
            },
            _ => false,
        };
        Ok(Arc::new(NumberField {
            modulus,
            generator: generator.to_string(),
            degree,
            irreducibility_verified: verified,
        }))
    }

    /// The rational field presented as Q[x]/(x).
    pub fn rationals() -> Arc<NumberField> {
        NumberField::new(vec![Rat::zero(), Rat::one()], "a").expect("rational field")
    }

    /// Q(i) = Q[x]/(x^2 + 1).
    pub fn gaussian() -> Arc<NumberField> {
        NumberField::new(vec![Rat::one(), Rat::zero(), Rat::one()], "i").expect("Q(i)")
    }

    /// Q(sqrt(2)) = Q[x]/(x^2 - 2).
    pub fn sqrt2() -> Arc<NumberField> {
        NumberField::new(vec![-crate::rat::rint(2), Rat::zero(), Rat::one()], "s").expect("Q(sqrt2)")
    }
}

/// Rational-root existence for a polynomial with rational coefficients,
/// constant term first. `None` when the coefficients are too large to factor
/// by trial division at desk scale.
fn has_rational_root(modulus: &[Rat]) -> Option<bool> {
    // Clear denominators to integer coefficients.
    let mut lcm = BigInt::one();
    for c in modulus {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = modulus
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    if ints[0].is_zero() {
        return Some(true); // x = 0 is a root
    }
    let c0 = ints[0].abs();
    let cn = ints.last().unwrap().abs();
    let bound = BigInt::from(1_000_000_000_000_i64);
    if c0 > bound || cn > bound {
        return None;
    }
    let eval = |r: &Rat| -> Rat {
        let mut acc = Rat::zero();
        for c in ints.iter().rev() {
            acc = acc * r + Rat::from_integer(c.clone());
        }
        acc
    };
    for p in divisors(&c0) {
        for q in divisors(&cn) {
            for sign in [1, -1] {
                let cand = Rat::new(BigInt::from(sign) * &p, q.clone());
                if eval(&cand).is_zero() {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::one();
    loop {
        if (&d * &d) > *n {
            break;
        }
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// An element of a number field, as coefficients of powers of the generator.
#[derive(Clone, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    pub field: Arc<NumberField>,
    pub coeffs: Vec<Rat>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.field.generator;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rat(c))?,
                1 => write!(f, "{}*{}", format_rat(c), g)?,
                _ => write!(f, "{}*{}^{}", format_rat(c), g, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, coeffs: Vec<Rat>) -> Result<FieldElement> {
        if coeffs.len() != field.degree {
            return Err(Error::Invalid(format!(
                "element needs {} coefficients, got {}",
                field.degree,
                coeffs.len()
            )));
        }
        Ok(FieldElement {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn zero(field: &Arc<NumberField>) -> FieldElement {
        FieldElement {
            field: field.clone(),
            coeffs: vec![Rat::zero(); field.degree],
        }
    }

    pub fn one(field: &Arc<NumberField>) -> FieldElement {
        FieldElement::from_rat(field, Rat::one())
    }

    pub fn from_rat(field: &Arc<NumberField>, r: Rat) -> FieldElement {
        let mut coeffs = vec![Rat::zero(); field.degree];
        coeffs[0] = r;
        FieldElement {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn generator(field: &Arc<NumberField>) -> FieldElement {
        let mut coeffs = vec![Rat::zero(); field.degree];
        if field.degree >= 2 {
            coeffs[1] = Rat::one();
        } else {
            // Q[x]/(x - a): the generator is the rational root a.
            coeffs[0] = -field.modulus[0].clone();
        }
        FieldElement {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> Option<&Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_same_field(&self, other: &FieldElement) -> Result<()> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field.generator, other.field.generator
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        let d = self.field.degree;
        let mut prod = vec![Rat::zero(); 2 * d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        // Reduce modulo the monic modulus.
        for k in (d..2 * d).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = prod[k].clone();
            prod[k] = Rat::zero();
            for (i, m) in self.field.modulus[..d].iter().enumerate() {
                let sub = &c * m;
                prod[k - d + i] -= sub;
            }
        }
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: prod[..d].to_vec(),
        })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Extended Euclid in Q[x] against the modulus.
        let d = self.field.degree;
        let mut r0: Vec<Rat> = self.field.modulus.clone();
        let mut r1: Vec<Rat> = self.coeffs.clone();
        trim(&mut r1);
        let mut s0: Vec<Rat> = vec![Rat::zero()];
        let mut s1: Vec<Rat> = vec![Rat::one()];
        while poly_deg(&r1) > 0 {
            let (q, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        if r1.is_empty() {
            return Err(Error::Invalid(
                "element is a zero divisor: modulus is reducible".into(),
            ));
        }
        let c = r1[0].clone();
        let mut coeffs: Vec<Rat> = s1.iter().map(|x| x / &c).collect();
        coeffs.resize(d, Rat::zero());
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = FieldElement::one(&self.field);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }
}

fn trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_deg(p: &[Rat]) -> i64 {
    p.len() as i64 - 1
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = poly_deg(b);
    debug_assert!(db >= 0);
    let lead = b.last().unwrap().clone();
    let mut quot = vec![Rat::zero(); rem.len().saturating_sub(b.len() - 1)];
    while poly_deg(&rem) >= db && !rem.is_empty() {
        let k = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        quot[k] = c.clone();
        for (i, x) in b.iter().enumerate() {
            let sub = &c * x;
            rem[k + i] -= sub;
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// A field automorphism given by the image of the generator.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct FieldAutomorphism {
    pub field: Arc<NumberField>,
    pub generator_image: FieldElement,
}

impl FieldAutomorphism {
    pub fn new(field: &Arc<NumberField>, generator_image: FieldElement) -> Result<Self> {
        if *generator_image.field != **field {
            return Err(Error::FieldMismatch("automorphism image".into()));
        }
        // The image must be a root of the modulus.
        let mut acc = FieldElement::zero(field);
        let mut power = FieldElement::one(field);
        for c in &field.modulus {
            let term = power.mul(&FieldElement::from_rat(field, c.clone()))?;
            acc = acc.add(&term)?;
            power = power.mul(&generator_image)?;
        }
        if !acc.is_zero() {
            return Err(Error::Invalid(
                "automorphism image is not a root of the modulus".into(),
            ));
        }
        Ok(FieldAutomorphism {
            field: field.clone(),
            generator_image,
        })
    }

    pub fn identity(field: &Arc<NumberField>) -> Self {
        FieldAutomorphism {
            field: field.clone(),
            generator_image: FieldElement::generator(field),
        }
    }

    /// The nontrivial automorphism of a quadratic field with modulus
    /// x^2 + bx + c: the generator maps to -b - x.
    pub fn conjugation(field: &Arc<NumberField>) -> Result<Self> {
        if field.degree != 2 {
            return Err(Error::Invalid("conjugation needs a quadratic field".into()));
        }
        let b = field.modulus[1].clone();
        let image = FieldElement::new(field, vec![-b, -Rat::one()])?;
        FieldAutomorphism::new(field, image)
    }

    pub fn is_identity(&self) -> bool {
        self.generator_image == FieldElement::generator(&self.field)
    }

    pub fn apply(&self, a: &FieldElement) -> Result<FieldElement> {
        if *a.field != *self.field {
            return Err(Error::FieldMismatch("automorphism application".into()));
        }
        let mut acc = FieldElement::zero(&self.field);
        let mut power = FieldElement::one(&self.field);
        for c in &a.coeffs {
            let term = power.mul(&FieldElement::from_rat(&self.field, c.clone()))?;
            acc = acc.add(&term)?;
            power = power.mul(&self.generator_image)?;
        }
        Ok(acc)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &FieldAutomorphism) -> Result<FieldAutomorphism> {
        let image = self.apply(&other.generator_image)?;
        FieldAutomorphism::new(&self.field, image)
    }

    pub fn inverse(&self) -> Result<FieldAutomorphism> {
        if self.is_identity() {
            return Ok(self.clone());
        }
        let mut prev = self.clone();
        let mut acc = self.compose(self)?;
        let mut guard = 0;
        while !acc.is_identity() {
            prev = acc.clone();
            acc = self.compose(&acc)?;
            guard += 1;
            if guard > 1000 {
                return Err(Error::Invalid("automorphism has unbounded order".into()));
            }
        }
        Ok(prev)
    }
}

pub const GROUP_LAW_BUDGET: usize = 48;

/// A finite group given by labels and a multiplication table of indices:
/// `table[i][j]` is the index of `elements[i] * elements[j]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteGroup {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GroupLawViolation {
    Closure { row: usize, col: usize },
    Identity { witness: usize },
    Inverse { witness: usize },
    Associativity { witness: (usize, usize, usize) },
    Shape(String),
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GroupLawReport {
    pub valid: bool,
    pub violations: Vec<GroupLawViolation>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse_of(&self, a: usize) -> Option<usize> {
        (0..self.order())
            .find(|&b| self.mul(a, b) == self.identity && self.mul(b, a) == self.identity)
    }

    /// Locates the identity from the table; errors when there is none.
    pub fn from_table(elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = elements.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("table must be {n}x{n}")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
            .ok_or_else(|| Error::Invalid("multiplication table has no identity".into()))?;
        Ok(FiniteGroup {
            elements,
            table,
            identity,
        })
    }

    /// Exhaustive group-law verification for orders up to 48.
    pub fn verify_presentation(&self) -> Result<GroupLawReport> {
        let n = self.order();
        if n > GROUP_LAW_BUDGET {
            return Err(Error::SizeBudgetExceeded(format!(
                "group law verification supports order <= {GROUP_LAW_BUDGET}, got {n}"
            )));
        }
        let mut violations = Vec::new();
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            violations.push(GroupLawViolation::Shape(format!("table must be {n}x{n}")));
            return Ok(GroupLawReport {
                valid: false,
                violations,
            });
        }
        for i in 0..n {
            for j in 0..n {
                if self.table[i][j] >= n {
                    violations.push(GroupLawViolation::Closure { row: i, col: j });
                }
            }
        }
        if !violations.is_empty() {
            return Ok(GroupLawReport {
                valid: false,
                violations,
            });
        }
        for i in 0..n {
            if self.mul(self.identity, i) != i || self.mul(i, self.identity) != i {
                violations.push(GroupLawViolation::Identity { witness: i });
            }
        }
        for i in 0..n {
            if self.inverse_of(i).is_none() {
                violations.push(GroupLawViolation::Inverse { witness: i });
            }
        }
        'assoc: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        violations.push(GroupLawViolation::Associativity { witness: (a, b, c) });
                        break 'assoc;
                    }
                }
            }
        }
        Ok(GroupLawReport {
            valid: violations.is_empty(),
            violations,
        })
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        let elements = (0..n).map(|i| format!("g{i}")).collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        FiniteGroup {
            elements,
            table,
            identity: 0,
        }
    }
}

/// Closure of a generating set under an associative product, up to a bound.
/// Returns the element list and the multiplication table.
pub fn generate_group<T, F>(gens: &[T], mul: F, bound: usize) -> Result<(Vec<T>, Vec<Vec<usize>>)>
where
    T: Clone + PartialEq,
    F: Fn(&T, &T) -> T,
{
    let mut elems: Vec<T> = Vec::new();
    for g in gens {
        if !elems.contains(g) {
            elems.push(g.clone());
        }
    }
    loop {
        let mut added = false;
        let snapshot = elems.clone();
        for a in &snapshot {
            for b in &snapshot {
                let c = mul(a, b);
                if !elems.contains(&c) {
                    elems.push(c);
                    added = true;
                    if elems.len() > bound {
                        return Err(Error::SizeBudgetExceeded(format!(
                            "group closure exceeded {bound} elements"
                        )));
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    let n = elems.len();
    let mut table = vec![vec![0usize; n]; n];
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            let c = mul(a, b);
            let k = elems
                .iter()
                .position(|e| *e == c)
                .ok_or_else(|| Error::Invalid("closure is not closed".into()))?;
            table[i][j] = k;
        }
    }
    Ok((elems, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn gauss_i() -> FieldElement {
        FieldElement::generator(&NumberField::gaussian())
    }

    #[test]
    fn defining_relation_of_gaussian_field() {
        let i = gauss_i();
        let sq = i.mul(&i).unwrap();
        assert_eq!(sq, FieldElement::from_rat(&i.field, rint(-1)));
    }

    #[test]
    fn additive_inverse_roundtrip() {
        let f = NumberField::gaussian();
        let a = FieldElement::new(&f, vec![rat(3, 7), rat(-2, 5)]).unwrap();
        assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn inverse_in_sqrt2() {
        // inv(1 + sqrt2) = -1 + sqrt2, checked by multiplying back to 1.
        let f = NumberField::sqrt2();
        let a = FieldElement::new(&f, vec![rint(1), rint(1)]).unwrap();
        let inv = a.inv().unwrap();
        assert_eq!(inv, FieldElement::new(&f, vec![rint(-1), rint(1)]).unwrap());
        assert_eq!(a.mul(&inv).unwrap(), FieldElement::one(&f));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = NumberField::gaussian();
        assert!(matches!(
            FieldElement::zero(&f).inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn field_mismatch_detected() {
        let a = FieldElement::one(&NumberField::gaussian());
        let b = FieldElement::one(&NumberField::sqrt2());
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn conjugation_on_gaussian_field() {
        let f = NumberField::gaussian();
        let sigma = FieldAutomorphism::conjugation(&f).unwrap();
        let a = FieldElement::new(&f, vec![rint(2), rint(3)]).unwrap(); // 2 + 3i
        let image = sigma.apply(&a).unwrap();
        assert_eq!(image, FieldElement::new(&f, vec![rint(2), rint(-3)]).unwrap());
        assert_eq!(
            sigma.apply(&FieldElement::one(&f)).unwrap(),
            FieldElement::one(&f)
        );
        let b = FieldElement::new(&f, vec![rat(1, 2), rat(-5, 3)]).unwrap();
        assert_eq!(
            sigma.apply(&a.mul(&b).unwrap()).unwrap(),
            sigma
                .apply(&a)
                .unwrap()
                .mul(&sigma.apply(&b).unwrap())
                .unwrap()
        );
    }

    #[test]
    fn order_two_automorphism_squares_to_identity() {
        let f = NumberField::sqrt2();
        let sigma = FieldAutomorphism::conjugation(&f).unwrap();
        let twice = sigma.compose(&sigma).unwrap();
        assert!(twice.is_identity());
        let a = FieldElement::new(&f, vec![rat(7, 3), rat(-1, 4)]).unwrap();
        assert_eq!(twice.apply(&a).unwrap(), a);
        assert_eq!(sigma.inverse().unwrap(), sigma);
    }

    #[test]
    fn rejects_non_root_automorphism_image() {
        let f = NumberField::gaussian();
        let img = FieldElement::new(&f, vec![rint(1), rint(1)]).unwrap();
        assert!(FieldAutomorphism::new(&f, img).is_err());
    }

    #[test]
    fn rejects_reducible_quadratic() {
        // x^2 - 1 has rational roots.
        let m = vec![rint(-1), rint(0), rint(1)];
        assert!(NumberField::new(m, "a").is_err());
    }

    #[test]
    fn cyclic_two_is_a_valid_group() {
        let g = FiniteGroup::cyclic(2);
        let report = g.verify_presentation().unwrap();
        assert!(report.valid, "{:?}", report.violations);
    }

    #[test]
    fn symmetric_group_from_permutation_generators() {
        // Generate the order-24 permutation group from a transposition and a
        // 4-cycle and verify its table.
        type Perm = Vec<usize>;
        let compose = |a: &Perm, b: &Perm| -> Perm { b.iter().map(|&i| a[i]).collect() };
        let gens: Vec<Perm> = vec![vec![1, 0, 2, 3], vec![1, 2, 3, 0]];
        let (elems, table) = generate_group(&gens, compose, 48).unwrap();
        assert_eq!(elems.len(), 24);
        let labels = (0..24).map(|i| format!("p{i}")).collect();
        let g = FiniteGroup::from_table(labels, table).unwrap();
        assert!(g.verify_presentation().unwrap().valid);
    }

    #[test]
    fn broken_associativity_is_reported_with_witness() {
        let mut g = FiniteGroup::cyclic(3);
        g.table[1][1] = 0; // break g1*g1
        let report = g.verify_presentation().unwrap();
        assert!(!report.valid);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, GroupLawViolation::Associativity { .. })
                || matches!(v, GroupLawViolation::Inverse { .. })));
    }

    #[test]
    fn group_budget_enforced() {
        let g = FiniteGroup::cyclic(49);
        assert!(matches!(
            g.verify_presentation(),
            Err(Error::SizeBudgetExceeded(_))
        ));
    }
}
