//! Rational polyhedral cones with canonical generator and halfspace data.

use num_traits::{Signed, Zero};

use super::dd::{polar_rays, reduce_mod, rref_basis};
use crate::error::{Error, Result};
use crate::rat::QVec;

pub const DUAL_RANK_BUDGET: usize = 6;

/// A rational polyhedral cone. Canonical form: `lineality` is the reduced row
/// echelon basis of the largest linear subspace, `rays` are the extreme rays
/// modulo lineality, reduced to canonical coset representatives and sorted.
/// Facet/equality normals are computed once at construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cone {
    dim: usize,
    lineality: Vec<QVec>,
    rays: Vec<QVec>,
    facets: Vec<QVec>,
    equalities: Vec<QVec>,
}

impl Cone {
    /// The cone generated by the given vectors (lines may be given as
    /// opposite pairs of generators).
    pub fn from_rays(dim: usize, gens: &[QVec]) -> Result<Cone> {
        for g in gens {
            if g.dim() != dim {
                return Err(Error::RankMismatch {
                    expected: dim,
                    got: g.dim(),
                });
            }
        }
        // Facet/equality description first, then minimal generators back.
        let gens: Vec<QVec> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.primitive())
            .collect();
        let (eq_lin, facet_rays) = polar_rays(&gens, dim);
        let equalities = rref_basis(&eq_lin, dim);
        let mut normals: Vec<QVec> = facet_rays.clone();
        for e in &equalities {
            normals.push(e.clone());
            normals.push(e.neg());
        }
        Ok(Self::from_normal_form(dim, &normals, facet_rays, equalities))
    }

    /// The cone `{ x : <n, x> >= 0 }` for the given normals.
    pub fn from_halfspaces(dim: usize, normals: &[QVec]) -> Result<Cone> {
        for n in normals {
            if n.dim() != dim {
                return Err(Error::RankMismatch {
                    expected: dim,
                    got: n.dim(),
                });
            }
        }
        let (lin, rays) = polar_rays(normals, dim);
        let mut gens: Vec<QVec> = rays;
        for l in &lin {
            gens.push(l.clone());
            gens.push(l.neg());
        }
        Self::from_rays(dim, &gens)
    }

    fn from_normal_form(
        dim: usize,
        normals: &[QVec],
        facets: Vec<QVec>,
        equalities: Vec<QVec>,
    ) -> Cone {
        let (lin, rays) = polar_rays(normals, dim);
        let lineality = rref_basis(&lin, dim);
        let mut rays: Vec<QVec> = rays
            .iter()
            .map(|r| reduce_mod(r, &lineality, dim))
            .filter(|r| !r.is_zero())
            .collect();
        rays.sort();
        rays.dedup();
        let mut facets = facets;
        facets.sort();
        Cone {
            dim,
            lineality,
            rays,
            facets,
            equalities,
        }
    }

    pub fn zero(dim: usize) -> Cone {
        Cone::from_rays(dim, &[]).expect("zero cone")
    }

    pub fn full(dim: usize) -> Cone {
        Cone::from_halfspaces(dim, &[]).expect("full cone")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[QVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[QVec] {
        &self.lineality
    }

    /// All generators, with lineality expanded into opposite pairs.
    pub fn generators(&self) -> Vec<QVec> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.neg());
        }
        g
    }

    pub fn facets(&self) -> &[QVec] {
        &self.facets
    }

    pub fn equalities(&self) -> &[QVec] {
        &self.equalities
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero_cone(&self) -> bool {
        self.lineality.is_empty() && self.rays.is_empty()
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        self.dim - self.equalities.len()
    }

    pub fn contains(&self, v: &QVec) -> bool {
        self.facets.iter().all(|f| !f.dot(v).is_negative())
            && self.equalities.iter().all(|e| e.dot(v).is_zero())
    }

    pub fn relint_contains(&self, v: &QVec) -> bool {
        self.facets.iter().all(|f| f.dot(v).is_positive())
            && self.equalities.iter().all(|e| e.dot(v).is_zero())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    pub fn set_eq(&self, other: &Cone) -> bool {
        self == other
    }

    /// Dual cone `{ m : <m, r> >= 0 for all r }`. Involutive on the nose for
    /// canonical forms. Subject to the rank budget of the public contract.
    pub fn dual(&self) -> Result<Cone> {
        if self.dim > DUAL_RANK_BUDGET {
            return Err(Error::RankBudgetExceeded {
                op: "dual_cone",
                budget: DUAL_RANK_BUDGET,
                got: self.dim,
            });
        }
        Ok(self.dual_unchecked())
    }

    pub(crate) fn dual_unchecked(&self) -> Cone {
        let mut gens = self.facets.clone();
        for e in &self.equalities {
            gens.push(e.clone());
            gens.push(e.neg());
        }
        Cone::from_rays(self.dim, &gens).expect("dual cone construction")
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.dim != other.dim {
            return Err(Error::RankMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if self == other {
            return Ok(self.clone());
        }
        let key = if self <= other {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        {
            let cache = cone_meet_cache().lock().expect("cone meet cache");
            if let Some(hit) = cache.get(&key) {
                return Ok(hit.clone());
            }
        }
        let result = self.intersect_uncached(other)?;
        let mut cache = cone_meet_cache().lock().expect("cone meet cache");
        if cache.len() < 1 << 16 {
            cache.insert(key, result.clone());
        }
        Ok(result)
    }

    fn intersect_uncached(&self, other: &Cone) -> Result<Cone> {
        let mut normals = Vec::new();
        normals.extend(self.facets.iter().cloned());
        normals.extend(other.facets.iter().cloned());
        for e in self.equalities.iter().chain(other.equalities.iter()) {
            normals.push(e.clone());
            normals.push(e.neg());
        }
        Cone::from_halfspaces(self.dim, &normals)
    }

    /// `self ∩ m^⊥`, used for tails of faces.
    pub fn intersect_hyperplane(&self, m: &QVec) -> Result<Cone> {
        let mut normals: Vec<QVec> = self.facets.clone();
        for e in &self.equalities {
            normals.push(e.clone());
            normals.push(e.neg());
        }
        normals.push(m.clone());
        normals.push(m.neg());
        Cone::from_halfspaces(self.dim, &normals)
    }

    /// Image under a linear map given by row-major matrix action.
    pub fn map(&self, f: &crate::rat::QMat) -> Result<Cone> {
        let gens: Vec<QVec> = self.generators().iter().map(|g| f.apply(g)).collect();
        Cone::from_rays(f.nrows(), &gens)
    }

    /// A functional exhibiting `sub` as a face of `self`, when one exists:
    /// some `m` in the dual with `self ∩ m^⊥ = sub`.
    pub fn face_witness(&self, sub: &Cone) -> Result<Option<QVec>> {
        if self.dim != sub.dim {
            return Err(Error::RankMismatch {
                expected: self.dim,
                got: sub.dim,
            });
        }
        if !self.contains_cone(sub) {
            return Ok(None);
        }
        let gens = sub.generators();
        let mut m = QVec::zero(self.dim);
        for f in &self.facets {
            if gens.iter().all(|g| f.dot(g).is_zero()) {
                m = m.add(f);
            }
        }
        let cut = self.intersect_hyperplane(&m)?;
        if cut == *sub {
            Ok(Some(m))
        } else {
            Ok(None)
        }
    }

    /// Enumerates all faces (as cones), including `self` and its minimal face.
    pub fn faces(&self) -> Vec<Cone> {
        let n = self.facets.len();
        let mut out: Vec<Cone> = Vec::new();
        for mask in 0..(1u32 << n) {
            let mut normals: Vec<QVec> = self.facets.clone();
            for e in &self.equalities {
                normals.push(e.clone());
                normals.push(e.neg());
            }
            for (i, f) in self.facets.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    normals.push(f.neg());
                }
            }
            let face = Cone::from_halfspaces(self.dim, &normals).expect("face");
            if !out.contains(&face) {
                out.push(face);
            }
        }
        out.sort();
        out
    }
}

type ConeMeetCache = std::sync::Mutex<std::collections::HashMap<(Cone, Cone), Cone>>;

fn cone_meet_cache() -> &'static ConeMeetCache {
    static CACHE: std::sync::OnceLock<ConeMeetCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| std::sync::Mutex::new(std::collections::HashMap::new()))
}

/// Membership of the lattice point grid: all coordinates integral.
pub fn is_lattice_point(v: &QVec) -> bool {
    v.is_integral()
}

/// Hilbert basis of a pointed cone of rank at most 3: the unique minimal
/// generating set of the monoid of lattice points.
pub fn hilbert_basis(c: &Cone) -> Result<Vec<QVec>> {
    if !c.is_pointed() {
        return Err(Error::NonPointed);
    }
    if c.dim() > 3 {
        return Err(Error::RankBudgetExceeded {
            op: "hilbert_basis",
            budget: 3,
            got: c.dim(),
        });
    }
    let rays = c.rays();
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    let dim = c.dim();
    // Lattice points of the zonotope sum of [0,1]-multiples of the primitive
    // rays generate the monoid; the irreducible ones form the Hilbert basis.
    let mut lo = vec![num_bigint::BigInt::from(0); dim];
    let mut hi = vec![num_bigint::BigInt::from(0); dim];
    for r in rays {
        for j in 0..dim {
            let x = r.0[j].to_integer();
            if x.is_negative() {
                lo[j] += x;
            } else {
                hi[j] += x;
            }
        }
    }
    // The zonotope as a polyhedron: convex hull of subset sums of the rays.
    let mut sums: Vec<QVec> = vec![QVec::zero(dim)];
    for r in rays {
        let mut next = sums.clone();
        for s in &sums {
            next.push(s.add(r));
        }
        sums = next;
        sums.sort();
        sums.dedup();
    }
    let zonotope = super::polyhedron::Polyhedron::from_vertices(
        dim,
        &sums,
        &Cone::zero(dim),
    )?;
    let mut candidates: Vec<QVec> = Vec::new();
    let mut cursor: Vec<num_bigint::BigInt> = lo.clone();
    'outer: loop {
        let v = QVec(
            cursor
                .iter()
                .map(|x| crate::rat::Rat::from_integer(x.clone()))
                .collect(),
        );
        if !v.is_zero() && c.contains(&v) && zonotope.contains_point(&v) {
            candidates.push(v);
        }
        let mut j = 0;
        loop {
            if j == dim {
                break 'outer;
            }
            cursor[j] += 1;
            if cursor[j] <= hi[j] {
                break;
            }
            cursor[j] = lo[j].clone();
            j += 1;
        }
    }
    candidates.sort();
    candidates.dedup();
    let mut basis: Vec<QVec> = Vec::new();
    for p in &candidates {
        let reducible = candidates.iter().any(|q| {
            if q == p || q.is_zero() {
                return false;
            }
            let diff = p.sub(q);
            !diff.is_zero() && c.contains(&diff) && is_lattice_point(&diff)
        });
        if !reducible {
            basis.push(p.clone());
        }
    }
    Ok(basis)
}
