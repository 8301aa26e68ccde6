use num_traits::Signed;

use super::{cross, RationalPolygon};
use crate::lattice::RationalPoint;

/// Indices into the polygon's vertex list, counterclockwise.
pub type Triangle = [usize; 3];

/// Fan from vertex 0 for convex polygons, ear clipping otherwise.
pub fn triangulate(polygon: &RationalPolygon) -> Vec<Triangle> {
    fan_triangulation(polygon).unwrap_or_else(|| ear_clipping(polygon))
}

/// `None` unless the polygon is convex.
pub fn fan_triangulation(polygon: &RationalPolygon) -> Option<Vec<Triangle>> {
    if !polygon.is_convex() {
        return None;
    }
    let n = polygon.vertices().len();
    Some((1..n - 1).map(|i| [0, i, i + 1]).collect())
}

fn in_closed_triangle(a: &RationalPoint, b: &RationalPoint, c: &RationalPoint, p: &RationalPoint) -> bool {
    !cross(a, b, p).is_negative() && !cross(b, c, p).is_negative() && !cross(c, a, p).is_negative()
}

/// Ear clipping on a counterclockwise simple polygon; O(n^3) worst case.
pub fn ear_clipping(polygon: &RationalPolygon) -> Vec<Triangle> {
    let v = polygon.vertices();
    let mut remaining: Vec<usize> = (0..v.len()).collect();
    let mut out = Vec::with_capacity(v.len() - 2);
    while remaining.len() > 3 {
        let m = remaining.len();
        let ear = (0..m)
            .find(|&k| {
                let (a, b, c) = (remaining[(k + m - 1) % m], remaining[k], remaining[(k + 1) % m]);
                cross(&v[a], &v[b], &v[c]).is_positive()
                    && remaining
                        .iter()
                        .filter(|&&j| j != a && j != b && j != c)
                        .all(|&j| !in_closed_triangle(&v[a], &v[b], &v[c], &v[j]))
            })
            .expect("a simple polygon always has an ear");
        out.push([remaining[(ear + m - 1) % m], remaining[ear], remaining[(ear + 1) % m]]);
        remaining.remove(ear);
    }
    out.push([remaining[0], remaining[1], remaining[2]]);
    out
}

#[cfg(test)]
mod tests {
    use super::super::tests::ipts;
    use super::super::{area, validate, CountingPlan};
    use super::*;
    use crate::exact::{int, rat, Rational};

    fn triangle_area(p: &RationalPolygon, t: &Triangle) -> Rational {
        let v = p.vertices();
        cross(&v[t[0]], &v[t[1]], &v[t[2]]) / rat(2, 1)
    }

    #[test]
    fn unit_square_fan() {
        let sq = validate(&ipts(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        assert_eq!(triangulate(&sq), vec![[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn triangle_is_itself() {
        let tri = validate(&ipts(&[(0, 0), (3, 1), (1, 2)])).unwrap();
        assert_eq!(triangulate(&tri), vec![[0, 1, 2]]);
        assert_eq!(ear_clipping(&tri), vec![[0, 1, 2]]);
    }

    #[test]
    fn l_shape_ears() {
        let ell = validate(&ipts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])).unwrap();
        assert!(fan_triangulation(&ell).is_none());
        let tris = triangulate(&ell);
        assert_eq!(tris.len(), 4);
        let total: Rational = tris.iter().map(|t| triangle_area(&ell, t)).sum();
        assert_eq!(total, area(&ell));
        assert!(tris.iter().all(|t| triangle_area(&ell, t).is_positive()));
    }

    #[test]
    fn fan_and_ears_agree_on_convex() {
        let hex = validate(&ipts(&[(0, 0), (3, -1), (5, 1), (4, 4), (1, 5), (-1, 2)])).unwrap();
        let fan = CountingPlan::with_triangles(&hex, &fan_triangulation(&hex).unwrap());
        let ears = CountingPlan::with_triangles(&hex, &ear_clipping(&hex));
        for t in 1..=10 {
            let t = int(t);
            assert_eq!(fan.closure(&t).unwrap(), ears.closure(&t).unwrap());
            assert_eq!(fan.interior(&t).unwrap(), ears.interior(&t).unwrap());
        }
    }
}
