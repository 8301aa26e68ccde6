use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{cross, lattice_indicator};
use crate::error::{Error, Result};
use crate::exact::Integer;
use crate::lattice::{
    closure_formula, interval_count, segment_quasipolynomial, AxisRightTriangle, Placement,
    RationalPoint, RationalRect, RightTriangleSpec,
};

/// An axis-aligned right triangle with its normalized counting parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightTrianglePiece {
    pub triangle: AxisRightTriangle,
    pub spec: RightTriangleSpec,
    pub placement: Placement,
}

impl RightTrianglePiece {
    pub fn new(triangle: AxisRightTriangle) -> Self {
        let (spec, placement) = triangle.normalize();
        Self {
            triangle,
            spec,
            placement,
        }
    }
}

/// Signed closed pieces whose counts add up to the count of one closed
/// triangle at every dilation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Decomposition {
    pub rectangles: Vec<(RationalRect, i64)>,
    pub right_triangles: Vec<(RightTrianglePiece, i64)>,
    pub segments: Vec<((RationalPoint, RationalPoint), i64)>,
    pub points: Vec<(RationalPoint, i64)>,
}

impl Decomposition {
    /// The signed sum of the pieces' counting quasipolynomials at `t`; for
    /// `t >= 1` the closed count of the decomposed triangle.
    pub fn value(&self, t: &Integer) -> Integer {
        let mut total = Integer::zero();
        for (rect, sign) in &self.rectangles {
            let n = interval_count(&rect.a1, &rect.b1, &rect.d, t)
                * interval_count(&rect.a2, &rect.b2, &rect.d, t);
            total += n * sign;
        }
        for (piece, sign) in &self.right_triangles {
            let n = closure_formula(&piece.spec, t).expect("normalized spec is valid");
            assert!(n.is_integer(), "right-triangle count {n} is not integral");
            total += n.to_integer() * sign;
        }
        for ((a, b), sign) in &self.segments {
            total += segment_quasipolynomial(a, b, t) * sign;
        }
        for (p, sign) in &self.points {
            total += lattice_indicator(p, t) * sign;
        }
        total
    }
}

enum Piece {
    Rect(RationalRect),
    RightTriangle(AxisRightTriangle),
}

fn ccw(mut pts: Vec<RationalPoint>) -> Vec<RationalPoint> {
    if pts.len() >= 3 && cross(&pts[0], &pts[1], &pts[2]).is_negative() {
        pts.reverse();
    }
    pts
}

fn right_triangle(corner: &RationalPoint, p: &RationalPoint, q: &RationalPoint) -> (Piece, Vec<RationalPoint>) {
    let tri = AxisRightTriangle::from_vertices(corner, p, q).expect("legs are axis-parallel and nonzero");
    (Piece::RightTriangle(tri), ccw(vec![p.clone(), corner.clone(), q.clone()]))
}

fn rectangle(a: &RationalPoint, b: &RationalPoint) -> (Piece, Vec<RationalPoint>) {
    let lo = RationalPoint::new(a.x.clone().min(b.x.clone()), a.y.clone().min(b.y.clone()));
    let hi = RationalPoint::new(a.x.clone().max(b.x.clone()), a.y.clone().max(b.y.clone()));
    let rect = RationalRect::from_corners(&lo, &hi).expect("rectangle has positive extent");
    let poly = vec![
        lo.clone(),
        RationalPoint::new(hi.x.clone(), lo.y.clone()),
        hi.clone(),
        RationalPoint::new(lo.x.clone(), hi.y.clone()),
    ];
    (Piece::Rect(rect), poly)
}

/// Sutherland-Hodgman against a counterclockwise convex polygon, with
/// boundary points kept. `subject` may itself be flat.
fn clip(subject: &[RationalPoint], window: &[RationalPoint]) -> Vec<RationalPoint> {
    let mut out = subject.to_vec();
    let m = window.len();
    for i in 0..m {
        if out.is_empty() {
            break;
        }
        let (a, b) = (&window[i], &window[(i + 1) % m]);
        let input = std::mem::take(&mut out);
        let len = input.len();
        for j in 0..len {
            let s = &input[(j + len - 1) % len];
            let e = &input[j];
            let cs = cross(a, b, s);
            let ce = cross(a, b, e);
            let crossing = || {
                let k = &cs / (&cs - &ce);
                RationalPoint::new(&s.x + (&e.x - &s.x) * &k, &s.y + (&e.y - &s.y) * &k)
            };
            if !ce.is_negative() {
                if cs.is_negative() {
                    out.push(crossing());
                }
                out.push(e.clone());
            } else if cs.is_positive() {
                out.push(crossing());
            }
        }
        let mut distinct: Vec<RationalPoint> = Vec::with_capacity(out.len());
        for p in out {
            if !distinct.contains(&p) {
                distinct.push(p);
            }
        }
        out = distinct;
    }
    out
}

enum Overlap {
    Empty,
    Point(RationalPoint),
    Segment(RationalPoint, RationalPoint),
}

fn classify(points: Vec<RationalPoint>) -> Overlap {
    match points.len() {
        0 => Overlap::Empty,
        1 => Overlap::Point(points[0].clone()),
        _ => {
            assert!(
                points.iter().all(|p| cross(&points[0], &points[1], p).is_zero()),
                "decomposition pieces overlap in a region of positive area"
            );
            let lo = points.iter().min().unwrap().clone();
            let hi = points.iter().max().unwrap().clone();
            Overlap::Segment(lo, hi)
        }
    }
}

/// Embeds the triangle in its bounding box `B` and writes
/// `L(T) = L(B) - sum L(Q_i) - (overlap corrections)` where the `Q_i` are the
/// closed pieces of `B` outside `T`.
///
/// If every vertex lies on the boundary of `B`, each slanted edge cuts off a
/// right triangle whose right angle is the box corner on its outer side.
/// Otherwise one vertex `V` is interior, the other two are opposite corners,
/// and `B` minus `T` splits into the far half of the box, the rectangle from
/// `V` to the near corner, and two right triangles under the edges through
/// `V`. The corrections are the inclusion-exclusion terms over all
/// intersections of two or more of `T, Q_1, ...`, each a segment or a point.
pub fn decompose_triangle(
    v1: &RationalPoint,
    v2: &RationalPoint,
    v3: &RationalPoint,
) -> Result<Decomposition> {
    if cross(v1, v2, v3).is_zero() {
        return Err(Error::DegenerateTriangle);
    }
    let tri = ccw(vec![v1.clone(), v2.clone(), v3.clone()]);
    let xmin = tri.iter().map(|p| &p.x).min().unwrap().clone();
    let xmax = tri.iter().map(|p| &p.x).max().unwrap().clone();
    let ymin = tri.iter().map(|p| &p.y).min().unwrap().clone();
    let ymax = tri.iter().map(|p| &p.y).max().unwrap().clone();
    let on_box = |p: &RationalPoint| p.x == xmin || p.x == xmax || p.y == ymin || p.y == ymax;

    let mut pieces: Vec<(Piece, Vec<RationalPoint>)> = Vec::new();
    match (0..3).find(|&i| !on_box(&tri[i])) {
        None => {
            for i in 0..3 {
                let (p, q) = (&tri[i], &tri[(i + 1) % 3]);
                if p.x == q.x || p.y == q.y {
                    continue;
                }
                let k1 = RationalPoint::new(p.x.clone(), q.y.clone());
                let k2 = RationalPoint::new(q.x.clone(), p.y.clone());
                let corner = if cross(p, q, &k1).is_negative() { k1 } else { k2 };
                pieces.push(right_triangle(&corner, p, q));
            }
        }
        Some(m) => {
            let v = &tri[m];
            let (a, c) = (&tri[(m + 1) % 3], &tri[(m + 2) % 3]);
            let k1 = RationalPoint::new(a.x.clone(), c.y.clone());
            let k2 = RationalPoint::new(c.x.clone(), a.y.clone());
            let v_side = cross(a, c, v).signum();
            let (near, far) = if cross(a, c, &k1).signum() == v_side { (k1, k2) } else { (k2, k1) };
            pieces.push(right_triangle(&far, a, c));
            pieces.push(rectangle(v, &near));
            for end in [a, c] {
                let foot = if end.x == near.x {
                    RationalPoint::new(near.x.clone(), v.y.clone())
                } else {
                    RationalPoint::new(v.x.clone(), near.y.clone())
                };
                pieces.push(right_triangle(&foot, end, v));
            }
        }
    }

    let mut out = Decomposition::default();
    let (bbox, _) = rectangle(
        &RationalPoint::new(xmin.clone(), ymin.clone()),
        &RationalPoint::new(xmax.clone(), ymax.clone()),
    );
    if let Piece::Rect(r) = bbox {
        out.rectangles.push((r, 1));
    }

    let mut sets: Vec<Vec<RationalPoint>> = vec![tri];
    for (piece, poly) in pieces {
        match piece {
            Piece::Rect(r) => out.rectangles.push((r, -1)),
            Piece::RightTriangle(t) => out.right_triangles.push((RightTrianglePiece::new(t), -1)),
        }
        sets.push(poly);
    }

    let mut segments: BTreeMap<(RationalPoint, RationalPoint), i64> = BTreeMap::new();
    let mut points: BTreeMap<RationalPoint, i64> = BTreeMap::new();
    for mask in 1u32..(1 << sets.len()) {
        let size = mask.count_ones();
        if size < 2 {
            continue;
        }
        let members: Vec<usize> = (0..sets.len()).filter(|i| mask & (1 << i) != 0).collect();
        let mut region = sets[members[0]].clone();
        for &i in &members[1..] {
            region = clip(&region, &sets[i]);
        }
        let sign = if size % 2 == 0 { 1 } else { -1 };
        match classify(region) {
            Overlap::Empty => {}
            Overlap::Point(p) => *points.entry(p).or_insert(0) += sign,
            Overlap::Segment(a, b) => *segments.entry((a, b)).or_insert(0) += sign,
        }
    }
    out.segments = segments.into_iter().filter(|(_, s)| *s != 0).collect();
    out.points = points.into_iter().filter(|(_, s)| *s != 0).collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{ipts, pts};
    use super::*;
    use crate::exact::int;
    use crate::lattice::{brute_force_count, CountMode};
    use proptest::prelude::*;

    fn check_against_oracle(v: &[RationalPoint], ts: std::ops::RangeInclusive<i64>) -> Decomposition {
        let d = decompose_triangle(&v[0], &v[1], &v[2]).unwrap();
        for t in ts {
            let t = int(t);
            assert_eq!(
                d.value(&t),
                brute_force_count(v, &t, CountMode::Closure).unwrap(),
                "{v:?} t={t}"
            );
        }
        d
    }

    #[test]
    fn right_triangle_case() {
        let d = check_against_oracle(&ipts(&[(0, 0), (1, 0), (0, 1)]), 1..=10);
        assert_eq!(d.rectangles.len(), 1);
        assert_eq!(d.right_triangles.len(), 1);
        assert_eq!(d.segments.len(), 1);
        assert!(d.points.is_empty());
    }

    #[test]
    fn interior_vertex_case_has_rectangle() {
        let d = check_against_oracle(&ipts(&[(0, 0), (3, 1), (1, 2)]), 1..=10);
        assert_eq!(d.rectangles.iter().filter(|(_, s)| *s == -1).count(), 0);
        let d = check_against_oracle(&ipts(&[(0, 0), (3, 3), (1, 2)]), 1..=10);
        assert_eq!(d.rectangles.iter().filter(|(_, s)| *s == -1).count(), 1);
        assert_eq!(d.right_triangles.len(), 3);
    }

    #[test]
    fn horizontal_edge_case() {
        let d = check_against_oracle(&ipts(&[(0, 0), (2, 0), (1, 1)]), 1..=10);
        assert_eq!(d.right_triangles.len(), 2);
    }

    #[test]
    fn figure_cases_with_rational_vertices() {
        check_against_oracle(&ipts(&[(0, 0), (2, 1), (1, 2)]), 1..=10);
        check_against_oracle(&pts(&[(1, 3, -1, 2), (7, 4, 5, 6), (-2, 5, 9, 4)]), 1..=12);
        check_against_oracle(&pts(&[(0, 1, 0, 1), (5, 2, 5, 3), (3, 4, 1, 5)]), 1..=12);
        check_against_oracle(&pts(&[(0, 1, 0, 1), (5, 2, 5, 3), (3, 4, 11, 5)]), 1..=12);
    }

    #[test]
    fn degenerate_rejected() {
        let v = ipts(&[(0, 0), (1, 1), (2, 2)]);
        assert_eq!(decompose_triangle(&v[0], &v[1], &v[2]), Err(Error::DegenerateTriangle));
    }

    fn coord() -> impl Strategy<Value = crate::exact::Rational> {
        (-6i64..=6, 1i64..=5).prop_map(|(n, d)| crate::exact::rat(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]
        #[test]
        fn random_triangles_match_oracle(
            c in proptest::collection::vec((coord(), coord()), 3),
            t in 1i64..=8,
        ) {
            let v: Vec<_> = c.into_iter().map(|(x, y)| RationalPoint::new(x, y)).collect();
            prop_assume!(!cross(&v[0], &v[1], &v[2]).is_zero());
            let d = decompose_triangle(&v[0], &v[1], &v[2]).unwrap();
            let t = int(t);
            prop_assert_eq!(d.value(&t), brute_force_count(&v, &t, CountMode::Closure).unwrap());
        }
    }
}
