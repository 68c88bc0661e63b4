//! Double description: minimal generators of a cone cut out by homogeneous
//! inequalities, with explicit lineality handling. Everything is exact; rays
//! are kept primitive integral.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::rat::{QVec, Rat};

#[derive(Clone, Debug)]
struct Ray {
    v: QVec,
    tight: BTreeSet<usize>,
}

/// Generators of `{ x : <n, x> >= 0 for all n in normals }`.
///
/// Returns `(lineality, rays)`: the cone is `span(lineality) + cone(rays)` and
/// the rays are extreme modulo the lineality space.
pub fn polar_rays(normals: &[QVec], dim: usize) -> (Vec<QVec>, Vec<QVec>) {
    let mut lineality: Vec<QVec> = (0..dim)
        .map(|i| {
            let mut v = vec![Rat::zero(); dim];
            v[i] = Rat::one();
            QVec(v)
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (ci, a) in normals.iter().enumerate() {
        if a.is_zero() {
            for r in rays.iter_mut() {
                r.tight.insert(ci);
            }
            continue;
        }
        // Does the constraint cut the lineality space?
        if let Some(pos) = lineality.iter().position(|b| !a.dot(b).is_zero()) {
            let mut b0 = lineality.remove(pos);
            if a.dot(&b0).is_negative() {
                b0 = b0.neg();
            }
            let ab0 = a.dot(&b0);
            for b in lineality.iter_mut() {
                let c = a.dot(b) / &ab0;
                if !c.is_zero() {
                    *b = b.sub(&b0.scale(&c)).primitive();
                }
            }
            for r in rays.iter_mut() {
                let c = a.dot(&r.v) / &ab0;
                if !c.is_zero() {
                    r.v = r.v.sub(&b0.scale(&c)).primitive();
                }
                r.tight.insert(ci);
            }
            // Previous constraints all vanish on the old lineality space, so
            // b0 is tight at every earlier index.
            let tight: BTreeSet<usize> = (0..ci).collect();
            rays.push(Ray {
                v: b0.primitive(),
                tight,
            });
            continue;
        }
        let mut pos: Vec<Ray> = Vec::new();
        let mut zero: Vec<Ray> = Vec::new();
        let mut neg: Vec<Ray> = Vec::new();
        for r in rays.drain(..) {
            let val = a.dot(&r.v);
            if val.is_zero() {
                let mut r = r;
                r.tight.insert(ci);
                zero.push(r);
            } else if val.is_positive() {
                pos.push(r);
            } else {
                neg.push(r);
            }
        }
        let mut next: Vec<Ray> = Vec::new();
        next.extend(pos.iter().cloned());
        next.extend(zero.iter().cloned());
        for rp in &pos {
            for rn in &neg {
                let common: BTreeSet<usize> =
                    rp.tight.intersection(&rn.tight).cloned().collect();
                // Algebraic adjacency: the common tight normals must cut out
                // a 2-dimensional face modulo lineality.
                let tights: Vec<QVec> = common.iter().map(|&i| normals[i].clone()).collect();
                let rank = crate::rat::rank_of(&tights);
                if dim < lineality.len() + 2 || rank != dim - lineality.len() - 2 {
                    continue;
                }
                let vp = a.dot(&rp.v);
                let vn = a.dot(&rn.v);
                // <a, v> = 0 with a positive combination.
                let v = rp.v.scale(&-vn.clone()).add(&rn.v.scale(&vp)).primitive();
                if v.is_zero() {
                    continue;
                }
                let mut tight = common;
                tight.insert(ci);
                next.push(Ray { v, tight });
            }
        }
        rays = next;
    }

    // Final minimality: a ray is extreme modulo lineality iff its tight
    // normals have corank exactly lineality_dim + 1.
    let lin_dim = lineality.len();
    let mut keep: Vec<QVec> = Vec::new();
    for r in &rays {
        let tights: Vec<QVec> = r
            .tight
            .iter()
            .map(|&i| normals[i].clone())
            .collect();
        let rank = crate::rat::rank_of(&tights);
        if dim - rank == lin_dim + 1 {
            keep.push(r.v.clone());
        }
    }
    keep.sort();
    keep.dedup();
    (lineality, keep)
}

/// Reduced row echelon form of a spanning set; rows are primitive and the
/// result is a canonical basis of the span.
pub fn rref_basis(vectors: &[QVec], dim: usize) -> Vec<QVec> {
    let mut rows: Vec<Vec<Rat>> = vectors.iter().map(|v| v.0.clone()).collect();
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for col in 0..dim {
        let Some(pos) = rows.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let mut pivot = rows.swap_remove(pos);
        let pv = pivot[col].clone();
        for x in pivot.iter_mut() {
            *x /= pv.clone();
        }
        for r in rows.iter_mut() {
            if !r[col].is_zero() {
                let f = r[col].clone();
                for (x, p) in r.iter_mut().zip(&pivot) {
                    let sub = &f * p;
                    *x -= sub;
                }
            }
        }
        for r in out.iter_mut() {
            if !r[col].is_zero() {
                let f = r[col].clone();
                for (x, p) in r.iter_mut().zip(&pivot) {
                    let sub = &f * p;
                    *x -= sub;
                }
            }
        }
        out.push(pivot);
    }
    out.iter().map(|r| QVec(r.clone()).primitive()).collect()
}

/// Reduces `v` modulo the span of an RREF basis (zeroes the pivot columns),
/// then normalizes to a primitive vector. Canonical coset representative.
pub fn reduce_mod(v: &QVec, rref: &[QVec], dim: usize) -> QVec {
    let mut w = v.clone();
    for b in rref {
        let pivot = (0..dim).find(|&c| !b.0[c].is_zero());
        if let Some(p) = pivot {
            if !w.0[p].is_zero() {
                let f = &w.0[p] / &b.0[p];
                w = w.sub(&b.scale(&f));
            }
        }
    }
    w.primitive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::QVec;

    fn iv(v: &[i64]) -> QVec {
        QVec::from_ints(v)
    }

    #[test]
    fn quadrant_is_self_polar() {
        let (lin, rays) = polar_rays(&[iv(&[1, 0]), iv(&[0, 1])], 2);
        assert!(lin.is_empty());
        assert_eq!(rays, vec![iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn no_constraints_gives_full_space() {
        let (lin, rays) = polar_rays(&[], 3);
        assert_eq!(lin.len(), 3);
        assert!(rays.is_empty());
    }

    #[test]
    fn halfplane_has_lineality() {
        let (lin, rays) = polar_rays(&[iv(&[1, 0])], 2);
        assert_eq!(lin.len(), 1);
        assert!(lin[0].0[0].is_zero());
        assert_eq!(rays.len(), 1);
        assert!(rays[0].0[0].is_positive());
    }

    #[test]
    fn skew_cone_dual_generators() {
        // dual of cone{(1,0),(1,2)} is cone{(0,1),(2,-1)}.
        let (lin, rays) = polar_rays(&[iv(&[1, 0]), iv(&[1, 2])], 2);
        assert!(lin.is_empty());
        let mut rays = rays;
        rays.sort();
        let mut expect = vec![iv(&[0, 1]), iv(&[2, -1])];
        expect.sort();
        assert_eq!(rays, expect);
    }

    #[test]
    fn origin_from_opposite_halfspaces() {
        let (lin, rays) = polar_rays(&[iv(&[1, 0]), iv(&[-1, 0]), iv(&[0, 1]), iv(&[0, -1])], 2);
        assert!(lin.is_empty());
        assert!(rays.is_empty());
    }

    #[test]
    fn rref_is_canonical() {
        let b1 = rref_basis(&[iv(&[2, 2, 0]), iv(&[1, 0, 1])], 3);
        let b2 = rref_basis(&[iv(&[1, 2, -1]), iv(&[0, 2, -2]), iv(&[4, 2, 2])], 3);
        assert_eq!(b1, b2);
    }
}
