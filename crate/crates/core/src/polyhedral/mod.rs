//! Exact geometry of pointed rational cones and tailed polyhedra: Minkowski
//! algebra, duals, faces, support functions, intersections, Hilbert bases.

mod cone;
mod dd;
mod polyhedron;

pub use cone::{hilbert_basis, Cone, DUAL_RANK_BUDGET};
pub use polyhedron::{Polyhedron, SupportValue};


use crate::error::{Error, Result};
use crate::rat::QVec;

pub const QUASIFAN_RANK_BUDGET: usize = 4;

/// One cell of the normal quasifan: the support function is linear on the
/// cell, realized by the recorded minimizing vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiFanCell {
    pub cone: Cone,
    pub minimizer: QVec,
}

/// Cells covering the dual of the tail, one per vertex, with disjoint
/// interiors.
pub fn normal_quasifan(d: &Polyhedron) -> Result<Vec<QuasiFanCell>> {
    if d.is_empty() {
        return Err(Error::EmptyPolyhedron);
    }
    if d.dim() > QUASIFAN_RANK_BUDGET {
        return Err(Error::RankBudgetExceeded {
            op: "normal_quasifan",
            budget: QUASIFAN_RANK_BUDGET,
            got: d.dim(),
        });
    }
    let dim = d.dim();
    let mut cells = Vec::new();
    for v in d.vertices() {
        let mut normals: Vec<QVec> = Vec::new();
        for w in d.vertices() {
            if w != v {
                normals.push(w.sub(v));
            }
        }
        for r in d.tail().generators() {
            normals.push(r.clone());
        }
        let cone = Cone::from_halfspaces(dim, &normals)?;
        cells.push(QuasiFanCell {
            cone,
            minimizer: v.clone(),
        });
    }
    cells.sort_by(|a, b| a.minimizer.cmp(&b.minimizer));
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint, QVec};

    fn iv(v: &[i64]) -> QVec {
        QVec::from_ints(v)
    }

    fn quadrant() -> Cone {
        Cone::from_rays(2, &[iv(&[1, 0]), iv(&[0, 1])]).unwrap()
    }

    /// conv{(1,0),(0,1)} + first quadrant: the halfplane-truncated region.
    fn truncated_region() -> Polyhedron {
        Polyhedron::from_vertices(2, &[iv(&[1, 0]), iv(&[0, 1])], &quadrant()).unwrap()
    }

    #[test]
    fn minkowski_sum_of_simplex_and_quadrant() {
        let pi = Polyhedron::from_vertices(2, &[iv(&[1, 0]), iv(&[0, 1])], &Cone::zero(2)).unwrap();
        let omega = Polyhedron::cone_polyhedron(&quadrant());
        let sum = pi.minkowski_sum(&omega).unwrap();
        assert_eq!(sum, truncated_region());
        // {x : x1 + x2 >= 1, x >= 0} grid oracle.
        for a in -2..=3_i64 {
            for b in -2..=3_i64 {
                let p = iv(&[a, b]);
                let inside = a + b >= 1 && a >= 0 && b >= 0;
                assert_eq!(sum.contains_point(&p), inside, "at ({a},{b})");
            }
        }
    }

    #[test]
    fn minkowski_identity_and_empty_conventions() {
        let d = truncated_region();
        let zero = Polyhedron::point(&iv(&[0, 0]));
        assert_eq!(d.minkowski_sum(&zero).unwrap(), d);
        let empty = Polyhedron::empty(2, quadrant());
        assert!(d.minkowski_sum(&empty).unwrap().is_empty());
    }

    #[test]
    fn support_values_on_truncated_region() {
        let d = truncated_region();
        assert_eq!(
            d.support_value(&iv(&[1, 1])).unwrap(),
            SupportValue::Finite(rint(1))
        );
        assert_eq!(
            d.support_value(&iv(&[1, 0])).unwrap(),
            SupportValue::Finite(rint(0))
        );
        assert_eq!(
            d.support_value(&iv(&[-1, 0])).unwrap(),
            SupportValue::MinusInfinity
        );
        let empty = Polyhedron::empty(2, quadrant());
        assert!(matches!(
            empty.support_value(&iv(&[1, 1])),
            Err(crate::error::Error::EmptyPolyhedron)
        ));
    }

    #[test]
    fn faces_of_truncated_region() {
        let d = truncated_region();
        let f = d.face_by(&iv(&[1, 1])).unwrap();
        let seg =
            Polyhedron::from_vertices(2, &[iv(&[1, 0]), iv(&[0, 1])], &Cone::zero(2)).unwrap();
        assert_eq!(f, seg);
        assert!(f.tail().is_zero_cone());
        assert_eq!(d.face_by(&iv(&[0, 0])).unwrap(), d);
        assert!(matches!(
            d.face_by(&iv(&[-1, 0])),
            Err(crate::error::Error::FaceUnbounded)
        ));
    }

    #[test]
    fn face_of_shifted_ray_is_its_endpoint() {
        // [1, +inf) in Q^1, functional m = 1.
        let ray = Cone::from_rays(1, &[iv(&[1])]).unwrap();
        let d = Polyhedron::from_vertices(1, &[iv(&[1])], &ray).unwrap();
        let f = d.face_by(&iv(&[1])).unwrap();
        assert_eq!(f, Polyhedron::point(&iv(&[1])));
    }

    #[test]
    fn interval_intersections() {
        let seg = |a: i64, b: i64| {
            Polyhedron::from_vertices(1, &[iv(&[a]), iv(&[b])], &Cone::zero(1)).unwrap()
        };
        let meet = seg(0, 1).intersect(&seg(1, 2)).unwrap();
        assert_eq!(meet, Polyhedron::point(&iv(&[1])));
        let d = seg(0, 1);
        assert_eq!(d.intersect(&d).unwrap(), d);
        let disjoint = seg(0, 1).intersect(&seg(2, 3)).unwrap();
        assert!(disjoint.is_empty());
    }

    #[test]
    fn quadrant_intersection_is_a_ray() {
        let q1 = Polyhedron::cone_polyhedron(&quadrant());
        let q2 = Polyhedron::cone_polyhedron(
            &Cone::from_rays(2, &[iv(&[-1, 0]), iv(&[0, 1])]).unwrap(),
        );
        let meet = q1.intersect(&q2).unwrap();
        let ray = Polyhedron::cone_polyhedron(&Cone::from_rays(2, &[iv(&[0, 1])]).unwrap());
        assert_eq!(meet, ray);
    }

    #[test]
    fn intersect_agrees_with_grid_membership_oracle() {
        // 21x21 rational grid over [-5,5]^2 against two rank-2 fixtures.
        let a = truncated_region();
        let b = Polyhedron::from_vertices(
            2,
            &[iv(&[-2, -2]), iv(&[3, -2]), iv(&[3, 3]), iv(&[-2, 3])],
            &Cone::zero(2),
        )
        .unwrap();
        let meet = a.intersect(&b).unwrap();
        for i in 0..21 {
            for j in 0..21 {
                let x = rat(-5, 1) + rat(i, 2);
                let y = rat(-5, 1) + rat(j, 2);
                let p = QVec(vec![x, y]);
                assert_eq!(
                    meet.contains_point(&p),
                    a.contains_point(&p) && b.contains_point(&p)
                );
            }
        }
    }

    #[test]
    fn dual_cone_examples() {
        let q = quadrant();
        assert_eq!(q.dual().unwrap(), q);
        let origin = Cone::zero(2);
        let full = origin.dual().unwrap();
        assert!(!full.is_pointed());
        assert_eq!(full, Cone::full(2));
        let skew = Cone::from_rays(2, &[iv(&[1, 0]), iv(&[1, 2])]).unwrap();
        let dual = skew.dual().unwrap();
        assert_eq!(
            dual,
            Cone::from_rays(2, &[iv(&[0, 1]), iv(&[2, -1])]).unwrap()
        );
        assert_eq!(dual.dual().unwrap(), skew);
    }

    #[test]
    fn dual_rank_budget_is_enforced() {
        let c = Cone::zero(7);
        assert!(matches!(
            c.dual(),
            Err(crate::error::Error::RankBudgetExceeded { .. })
        ));
    }

    #[test]
    fn membership_modes() {
        let q = quadrant();
        assert!(q.relint_contains(&iv(&[1, 1])));
        assert!(!q.relint_contains(&iv(&[1, 0])));
        assert!(q.contains(&iv(&[1, 0])));
        let d = truncated_region();
        assert!(d.contains_point(&QVec(vec![rat(1, 2), rat(1, 2)])));
    }

    #[test]
    fn cone_face_witness() {
        let q = quadrant();
        let sub = Cone::from_rays(2, &[iv(&[1, 0])]).unwrap();
        let m = q.face_witness(&sub).unwrap().unwrap();
        assert_eq!(m, iv(&[0, 1]));
        assert_eq!(q.face_witness(&q).unwrap().unwrap(), QVec::zero(2));
        let diag = Cone::from_rays(2, &[iv(&[1, 1])]).unwrap();
        assert!(q.face_witness(&diag).unwrap().is_none());
    }

    #[test]
    fn quasifan_of_truncated_region() {
        let d = truncated_region();
        let cells = normal_quasifan(&d).unwrap();
        assert_eq!(cells.len(), 2);
        // Cells split the dual quadrant along the ray (1,1).
        let c01 = cells.iter().find(|c| c.minimizer == iv(&[0, 1])).unwrap();
        let c10 = cells.iter().find(|c| c.minimizer == iv(&[1, 0])).unwrap();
        assert_eq!(
            c01.cone,
            Cone::from_rays(2, &[iv(&[1, 0]), iv(&[1, 1])]).unwrap()
        );
        assert_eq!(
            c10.cone,
            Cone::from_rays(2, &[iv(&[0, 1]), iv(&[1, 1])]).unwrap()
        );
    }

    #[test]
    fn quasifan_of_point_and_interval() {
        let p = Polyhedron::point(&iv(&[2, 3]));
        let cells = normal_quasifan(&p).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].cone, Cone::full(2));
        let seg = Polyhedron::from_vertices(1, &[iv(&[0]), iv(&[1])], &Cone::zero(1)).unwrap();
        let cells = normal_quasifan(&seg).unwrap();
        assert_eq!(cells.len(), 2);
        let at0 = cells.iter().find(|c| c.minimizer == iv(&[0])).unwrap();
        assert_eq!(at0.cone, Cone::from_rays(1, &[iv(&[1])]).unwrap());
        let at1 = cells.iter().find(|c| c.minimizer == iv(&[1])).unwrap();
        assert_eq!(at1.cone, Cone::from_rays(1, &[iv(&[-1])]).unwrap());
    }

    #[test]
    fn hilbert_bases() {
        let q = quadrant();
        let hb = hilbert_basis(&q).unwrap();
        assert_eq!(hb, vec![iv(&[0, 1]), iv(&[1, 0])]);
        let skew = Cone::from_rays(2, &[iv(&[1, 0]), iv(&[1, 2])]).unwrap();
        let hb = hilbert_basis(&skew).unwrap();
        assert_eq!(hb, vec![iv(&[1, 0]), iv(&[1, 1]), iv(&[1, 2])]);
        let ray = Cone::from_rays(1, &[iv(&[1])]).unwrap();
        assert_eq!(hilbert_basis(&ray).unwrap(), vec![iv(&[1])]);
        let line = Cone::from_rays(1, &[iv(&[1]), iv(&[-1])]).unwrap();
        assert!(matches!(
            hilbert_basis(&line),
            Err(crate::error::Error::NonPointed)
        ));
    }

    #[test]
    fn canonical_vertex_reduction_drops_redundant_points() {
        // An interior point and a point absorbed by the tail are not vertices.
        let d = Polyhedron::from_vertices(
            2,
            &[iv(&[1, 0]), iv(&[0, 1]), iv(&[2, 2]), iv(&[1, 1])],
            &quadrant(),
        )
        .unwrap();
        assert_eq!(d, truncated_region());
    }

    #[test]
    fn dilation_conventions() {
        let seg = Polyhedron::from_vertices(1, &[iv(&[1]), iv(&[2])], &Cone::zero(1)).unwrap();
        let doubled = seg.dilate(&rint(2)).unwrap();
        assert_eq!(
            doubled,
            Polyhedron::from_vertices(1, &[iv(&[2]), iv(&[4])], &Cone::zero(1)).unwrap()
        );
        let ray = Cone::from_rays(1, &[iv(&[1])]).unwrap();
        let empty = Polyhedron::empty(1, ray.clone());
        assert_eq!(
            empty.dilate(&rint(0)).unwrap(),
            Polyhedron::cone_polyhedron(&ray)
        );
        assert!(empty.dilate(&rint(2)).unwrap().is_empty());
    }
}
