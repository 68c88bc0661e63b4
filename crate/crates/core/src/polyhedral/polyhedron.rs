//! Tailed polyhedra in V-representation with a first-class empty variant and
//! a cached exact halfspace description.

use num_traits::{One, Signed, Zero};

use super::cone::Cone;
use super::dd::{polar_rays, reduce_mod, rref_basis};
use crate::error::{Error, Result};
use crate::rat::{QMat, QVec, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SupportValue {
    Finite(Rat),
    MinusInfinity,
}

impl SupportValue {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            SupportValue::Finite(r) => Some(r),
            SupportValue::MinusInfinity => None,
        }
    }
}

/// `conv(vertices) + tail`, or the empty polyhedron carrying its declared
/// ambient tail cone. Vertices are the canonical extreme points (reduced
/// modulo any lineality of the tail) in sorted order, so structural equality
/// decides set equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Polyhedron {
    dim: usize,
    empty: bool,
    vertices: Vec<QVec>,
    tail: Cone,
    // Homogenized halfspaces: <(a, c), (x, 1)> >= 0 resp. = 0.
    hineqs: Vec<QVec>,
    heqs: Vec<QVec>,
}

impl Polyhedron {
    pub fn empty(dim: usize, tail: Cone) -> Polyhedron {
        Polyhedron {
            dim,
            empty: true,
            vertices: Vec::new(),
            tail,
            hineqs: Vec::new(),
            heqs: Vec::new(),
        }
    }

    /// Canonicalizes `conv(points) + tail`. Redundant points are dropped; the
    /// stored tail is the recession cone (equal to the canonical form of the
    /// given tail whenever `points` is nonempty).
    pub fn from_vertices(dim: usize, points: &[QVec], tail: &Cone) -> Result<Polyhedron> {
        if tail.dim() != dim {
            return Err(Error::RankMismatch {
                expected: dim,
                got: tail.dim(),
            });
        }
        for p in points {
            if p.dim() != dim {
                return Err(Error::RankMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        if points.is_empty() {
            return Ok(Polyhedron::empty(dim, tail.clone()));
        }
        let mut gens: Vec<QVec> = Vec::new();
        for p in points {
            let mut v = p.0.clone();
            v.push(Rat::one());
            gens.push(QVec(v));
        }
        for r in tail.generators() {
            let mut v = r.0.clone();
            v.push(Rat::zero());
            gens.push(QVec(v));
        }
        let (eqlin, facets) = polar_rays(&gens, dim + 1);
        let heqs = rref_basis(&eqlin, dim + 1);
        Ok(Self::from_homogeneous(dim, facets, heqs, tail))
    }

    /// Builds from a homogenized halfspace description; `ambient_tail` is the
    /// tail recorded on an empty result.
    fn from_homogeneous(
        dim: usize,
        hineqs: Vec<QVec>,
        heqs: Vec<QVec>,
        ambient_tail: &Cone,
    ) -> Polyhedron {
        let mut normals: Vec<QVec> = hineqs.clone();
        for e in &heqs {
            normals.push(e.clone());
            normals.push(e.neg());
        }
        // The homogenization variable is implicitly nonnegative.
        let mut last = vec![Rat::zero(); dim + 1];
        last[dim] = Rat::one();
        normals.push(QVec(last));
        let (lin, rays) = polar_rays(&normals, dim + 1);
        let linb = rref_basis(&lin, dim + 1);
        let mut vertices: Vec<QVec> = Vec::new();
        let mut tail_gens: Vec<QVec> = Vec::new();
        for l in &linb {
            debug_assert!(l.0[dim].is_zero(), "lineality escapes the slice");
            tail_gens.push(QVec(l.0[..dim].to_vec()));
            tail_gens.push(QVec(l.0[..dim].to_vec()).neg());
        }
        for r in &rays {
            let red = reduce_mod(r, &linb, dim + 1);
            let lastc = red.0[dim].clone();
            if lastc.is_positive() {
                let v: Vec<Rat> = red.0[..dim].iter().map(|x| x / &lastc).collect();
                vertices.push(QVec(v));
            } else {
                tail_gens.push(QVec(red.0[..dim].to_vec()));
            }
        }
        if vertices.is_empty() {
            return Polyhedron::empty(dim, ambient_tail.clone());
        }
        vertices.sort();
        vertices.dedup();
        let tail = Cone::from_rays(dim, &tail_gens).expect("recession cone");
        // Re-derive the canonical facet description from the generators so
        // both directions are cross-validated forms of the same set.
        let mut gens: Vec<QVec> = Vec::new();
        for p in &vertices {
            let mut v = p.0.clone();
            v.push(Rat::one());
            gens.push(QVec(v));
        }
        for r in tail.generators() {
            let mut v = r.0.clone();
            v.push(Rat::zero());
            gens.push(QVec(v));
        }
        let (eqlin, facets) = polar_rays(&gens, dim + 1);
        let heqs = rref_basis(&eqlin, dim + 1);
        let mut hineqs = facets;
        hineqs.sort();
        Polyhedron {
            dim,
            empty: false,
            vertices,
            tail,
            hineqs,
            heqs,
        }
    }

    /// Intersection of exact halfspaces `a·x >= c` / `a·x = c`, given
    /// homogenized as `(a, -c)`.
    pub fn from_hrep(
        dim: usize,
        hineqs: Vec<QVec>,
        heqs: Vec<QVec>,
        ambient_tail: &Cone,
    ) -> Polyhedron {
        Self::from_homogeneous(dim, hineqs, heqs, ambient_tail)
    }

    /// The tail cone viewed as a polyhedron with vertex at the origin: the
    /// neutral element for Minkowski sums of that tail.
    pub fn cone_polyhedron(tail: &Cone) -> Polyhedron {
        {
            let cache = cone_poly_cache().lock().expect("cone polyhedron cache");
            if let Some(hit) = cache.get(tail) {
                return hit.clone();
            }
        }
        let poly = Polyhedron::from_vertices(tail.dim(), &[QVec::zero(tail.dim())], tail)
            .expect("cone as polyhedron");
        let mut cache = cone_poly_cache().lock().expect("cone polyhedron cache");
        if cache.len() < 1 << 16 {
            cache.insert(tail.clone(), poly.clone());
        }
        poly
    }

    pub fn point(v: &QVec) -> Polyhedron {
        Polyhedron::from_vertices(v.dim(), &[v.clone()], &Cone::zero(v.dim())).expect("point")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn hineqs(&self) -> &[QVec] {
        &self.hineqs
    }

    pub fn heqs(&self) -> &[QVec] {
        &self.heqs
    }

    /// Whether this is exactly the tail polyhedron (the neutral coefficient).
    pub fn is_trivial_for(&self, tail: &Cone) -> bool {
        !self.empty && self.tail == *tail && *self == Self::cone_polyhedron(tail)
    }

    pub fn contains_point(&self, v: &QVec) -> bool {
        if self.empty {
            return false;
        }
        let h = homog(v);
        self.hineqs.iter().all(|a| !a.dot(&h).is_negative())
            && self.heqs.iter().all(|e| e.dot(&h).is_zero())
    }

    /// Membership in the relative interior (strict on facets of the affine
    /// hull, equalities kept exact).
    pub fn relint_contains(&self, v: &QVec) -> bool {
        if self.empty {
            return false;
        }
        let h = homog(v);
        self.hineqs.iter().all(|a| {
            let val = a.dot(&h);
            // Facets that are constant in x (only the homogenization
            // inequality) are never strict tests.
            if a.0[..self.dim].iter().all(|c| c.is_zero()) {
                !val.is_negative()
            } else {
                val.is_positive()
            }
        }) && self.heqs.iter().all(|e| e.dot(&h).is_zero())
    }

    pub fn contains_poly(&self, other: &Polyhedron) -> bool {
        if other.empty {
            return true;
        }
        if self.empty {
            return false;
        }
        other.vertices.iter().all(|v| self.contains_point(v))
            && other.tail.generators().iter().all(|r| {
                let mut h = r.0.clone();
                h.push(Rat::zero());
                let h = QVec(h);
                self.hineqs.iter().all(|a| !a.dot(&h).is_negative())
                    && self.heqs.iter().all(|e| e.dot(&h).is_zero())
            })
    }

    pub fn set_eq(&self, other: &Polyhedron) -> bool {
        if self.empty || other.empty {
            return self.empty == other.empty;
        }
        self == other
    }

    /// Minkowski sum; the empty polyhedron is absorbing.
    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dim != other.dim {
            return Err(Error::RankMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let joined = Cone::from_rays(
            self.dim,
            &[self.tail.generators(), other.tail.generators()].concat(),
        )?;
        if self.empty || other.empty {
            return Ok(Polyhedron::empty(self.dim, joined));
        }
        let mut points = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                points.push(a.add(b));
            }
        }
        Polyhedron::from_vertices(self.dim, &points, &joined)
    }

    /// min <m, x> over the polyhedron: finite iff `m` pairs nonnegatively
    /// with the tail.
    pub fn support_value(&self, m: &QVec) -> Result<SupportValue> {
        if self.empty {
            return Err(Error::EmptyPolyhedron);
        }
        if m.dim() != self.dim {
            return Err(Error::RankMismatch {
                expected: self.dim,
                got: m.dim(),
            });
        }
        if !self.tail.generators().iter().all(|r| !m.dot(r).is_negative()) {
            return Ok(SupportValue::MinusInfinity);
        }
        let min = self
            .vertices
            .iter()
            .map(|v| m.dot(v))
            .min()
            .expect("nonempty polyhedron has vertices");
        Ok(SupportValue::Finite(min))
    }

    /// The face minimizing `m`; requires `m` in the dual of the tail.
    pub fn face_by(&self, m: &QVec) -> Result<Polyhedron> {
        if self.empty {
            return Err(Error::EmptyPolyhedron);
        }
        let value = match self.support_value(m)? {
            SupportValue::Finite(v) => v,
            SupportValue::MinusInfinity => return Err(Error::FaceUnbounded),
        };
        let face_vertices: Vec<QVec> = self
            .vertices
            .iter()
            .filter(|v| m.dot(v) == value)
            .cloned()
            .collect();
        let face_tail = self.tail.intersect_hyperplane(m)?;
        Polyhedron::from_vertices(self.dim, &face_vertices, &face_tail)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dim != other.dim {
            return Err(Error::RankMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if self == other {
            return Ok(self.clone());
        }
        // Closure computations intersect the same few polyhedra over and
        // over; a process-wide memo pays for itself immediately.
        let key = if self <= other {
            (self.clone(), other.clone())
        } else {
            (other.clone(), self.clone())
        };
        {
            let cache = intersect_cache().lock().expect("intersect cache");
            if let Some(hit) = cache.get(&key) {
                return Ok(hit.clone());
            }
        }
        let tail = self.tail.intersect(&other.tail)?;
        let result = if self.empty || other.empty {
            Polyhedron::empty(self.dim, tail)
        } else {
            let hineqs = [self.hineqs.clone(), other.hineqs.clone()].concat();
            let heqs = [self.heqs.clone(), other.heqs.clone()].concat();
            Polyhedron::from_homogeneous(self.dim, hineqs, heqs, &tail)
        };
        let mut cache = intersect_cache().lock().expect("intersect cache");
        if cache.len() < 1 << 20 {
            cache.insert(key, result.clone());
        }
        Ok(result)
    }

    pub fn translate(&self, v: &QVec) -> Result<Polyhedron> {
        if self.empty {
            return Ok(self.clone());
        }
        let points: Vec<QVec> = self.vertices.iter().map(|p| p.add(v)).collect();
        Polyhedron::from_vertices(self.dim, &points, &self.tail)
    }

    /// Scalar dilation: vertices scale, the tail stays; `0·Δ` is the tail
    /// polyhedron (including `0·∅`).
    pub fn dilate(&self, c: &Rat) -> Result<Polyhedron> {
        if c.is_negative() {
            return Err(Error::Invalid("dilation by a negative scalar".into()));
        }
        if c.is_zero() {
            return Ok(Polyhedron::cone_polyhedron(&self.tail));
        }
        if self.empty {
            return Ok(self.clone());
        }
        let points: Vec<QVec> = self.vertices.iter().map(|p| p.scale(c)).collect();
        Polyhedron::from_vertices(self.dim, &points, &self.tail)
    }

    /// Image under a linear map (vertices and tail mapped; no tail added).
    pub fn map(&self, f: &QMat) -> Result<Polyhedron> {
        let target_dim = f.nrows();
        let tail = self.tail.map(f)?;
        if self.empty {
            return Ok(Polyhedron::empty(target_dim, tail));
        }
        let points: Vec<QVec> = self.vertices.iter().map(|p| f.apply(p)).collect();
        Polyhedron::from_vertices(target_dim, &points, &tail)
    }

    /// A point in the relative interior.
    pub fn relative_interior_point(&self) -> Option<QVec> {
        if self.empty {
            return None;
        }
        let n = Rat::from_integer(num_bigint::BigInt::from(self.vertices.len() as i64));
        let mut p = QVec::zero(self.dim);
        for v in &self.vertices {
            p = p.add(v);
        }
        p = p.scale(&(Rat::one() / n));
        for r in self.tail.rays() {
            p = p.add(r);
        }
        Some(p)
    }
}

type IntersectCache = std::sync::Mutex<std::collections::HashMap<(Polyhedron, Polyhedron), Polyhedron>>;
type ConePolyCache = std::sync::Mutex<std::collections::HashMap<Cone, Polyhedron>>;

fn cone_poly_cache() -> &'static ConePolyCache {
    static CACHE: std::sync::OnceLock<ConePolyCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| std::sync::Mutex::new(std::collections::HashMap::new()))
}

fn intersect_cache() -> &'static IntersectCache {
    static CACHE: std::sync::OnceLock<IntersectCache> = std::sync::OnceLock::new();
    CACHE.get_or_init(|| std::sync::Mutex::new(std::collections::HashMap::new()))
}

fn homog(v: &QVec) -> QVec {
    let mut h = v.0.clone();
    h.push(Rat::one());
    QVec(h)
}
