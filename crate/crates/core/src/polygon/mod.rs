//! Rational polygons: validation, triangulation, decomposition into
//! closed-form pieces, and exact closure / interior / boundary counts.

mod decompose;
mod ehrhart;
mod triangulate;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, rat, Integer, Rational};
use crate::lattice::{segment_quasipolynomial, CountMode, CountPath, CountReport, RationalPoint};

pub use decompose::{decompose_triangle, Decomposition, RightTrianglePiece};
pub use ehrhart::{ehrhart, QuasiPolynomial2, MAX_EHRHART_PERIOD};
pub use triangulate::{ear_clipping, fan_triangulation, triangulate, Triangle};

/// A simple polygon with rational vertices in counterclockwise order, no
/// repeated vertices and no three consecutive collinear vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPolygon {
    vertices: Vec<RationalPoint>,
}

pub(crate) fn cross(o: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Rational {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

fn dot(o: &RationalPoint, a: &RationalPoint, b: &RationalPoint) -> Rational {
    (&a.x - &o.x) * (&b.x - &a.x) + (&a.y - &o.y) * (&b.y - &a.y)
}

pub(crate) fn on_segment(a: &RationalPoint, b: &RationalPoint, p: &RationalPoint) -> bool {
    cross(a, b, p).is_zero()
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

fn segments_touch(a: &RationalPoint, b: &RationalPoint, c: &RationalPoint, d: &RationalPoint) -> bool {
    let s1 = cross(c, d, a).signum() * cross(c, d, b).signum();
    let s2 = cross(a, b, c).signum() * cross(a, b, d).signum();
    (s1.is_negative() && s2.is_negative())
        || on_segment(c, d, a)
        || on_segment(c, d, b)
        || on_segment(a, b, c)
        || on_segment(a, b, d)
}

/// Twice the signed area.
fn doubled_area(vertices: &[RationalPoint]) -> Rational {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            &a.x * &b.y - &a.y * &b.x
        })
        .sum()
}

/// Checks simplicity, merges duplicate and straight-through collinear
/// vertices, and orients the result counterclockwise.
pub fn validate(vertices: &[RationalPoint]) -> Result<RationalPolygon> {
    if vertices.len() < 3 {
        return Err(Error::TooFewVertices(vertices.len()));
    }
    let mut pts: Vec<RationalPoint> = Vec::with_capacity(vertices.len());
    for v in vertices {
        if pts.last() != Some(v) {
            pts.push(v.clone());
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    if pts.len() < 3 || pts.iter().all(|p| cross(&pts[0], &pts[1], p).is_zero()) {
        return Err(Error::DegenerateArea);
    }

    let mut changed = true;
    while changed {
        changed = false;
        let n = pts.len();
        for i in 0..n {
            let (prev, cur, next) = (&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]);
            if cross(prev, cur, next).is_zero() {
                if !dot(prev, cur, next).is_positive() {
                    return Err(Error::SelfIntersecting(format!("boundary doubles back at {cur}")));
                }
                pts.remove(i);
                changed = true;
                break;
            }
        }
    }

    let n = pts.len();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = (&pts[i], &pts[(i + 1) % n]);
            let (c, d) = (&pts[j], &pts[(j + 1) % n]);
            if segments_touch(a, b, c, d) {
                return Err(Error::SelfIntersecting(format!(
                    "edge {a} - {b} meets edge {c} - {d}"
                )));
            }
        }
    }

    let area2 = doubled_area(&pts);
    if area2.is_zero() {
        return Err(Error::DegenerateArea);
    }
    if area2.is_negative() {
        pts.reverse();
    }
    Ok(RationalPolygon { vertices: pts })
}

impl RationalPolygon {
    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (&RationalPoint, &RationalPoint)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            cross(&self.vertices[i], &self.vertices[(i + 1) % n], &self.vertices[(i + 2) % n])
                .is_positive()
        })
    }

    /// lcm of all vertex coordinate denominators.
    pub fn denominator(&self) -> Integer {
        self.vertices
            .iter()
            .fold(Integer::one(), |acc, v| acc.lcm(v.x.denom()).lcm(v.y.denom()))
    }

    pub fn scaled(&self, k: &Integer) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::OutOfRange {
                what: "scale factor",
                detail: format!("{k} < 1"),
            });
        }
        Ok(Self {
            vertices: self.vertices.iter().map(|v| v.scaled(k)).collect(),
        })
    }
}

/// Shoelace formula.
pub fn area(polygon: &RationalPolygon) -> Rational {
    doubled_area(&polygon.vertices) / rat(2, 1)
}

/// Reads `<x> <y>` per line, skipping blank lines and `#` comments.
pub fn parse_polygon(text: &str) -> Result<Vec<RationalPoint>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!(
                "line {}: expected `<x> <y>`, got {:?}",
                lineno + 1,
                raw.trim()
            )));
        }
        let coord = |s: &str| {
            parse_rational(s).map_err(|e| match e {
                Error::Parse(msg) => Error::Parse(format!("line {}: {msg}", lineno + 1)),
                other => other,
            })
        };
        out.push(RationalPoint::new(coord(fields[0])?, coord(fields[1])?));
    }
    Ok(out)
}

/// Precomputed triangulation and decompositions of one polygon, evaluable
/// at any dilation.
#[derive(Debug, Clone)]
pub struct CountingPlan {
    polygon: RationalPolygon,
    pieces: Vec<Decomposition>,
    diagonals: Vec<(RationalPoint, RationalPoint)>,
}

impl CountingPlan {
    pub fn new(polygon: &RationalPolygon) -> Self {
        Self::with_triangles(polygon, &triangulate(polygon))
    }

    pub fn with_triangles(polygon: &RationalPolygon, triangles: &[Triangle]) -> Self {
        let v = polygon.vertices();
        let n = v.len();
        let mut diagonals = Vec::new();
        let mut pieces = Vec::with_capacity(triangles.len());
        for tri in triangles {
            let [i, j, k] = *tri;
            pieces.push(
                decompose_triangle(&v[i], &v[j], &v[k]).expect("triangulation produced a flat triangle"),
            );
            for (a, b) in [(i, j), (j, k), (k, i)] {
                let boundary = (a + 1) % n == b || (b + 1) % n == a;
                if !boundary && a < b {
                    diagonals.push((v[a].clone(), v[b].clone()));
                }
            }
        }
        Self {
            polygon: polygon.clone(),
            pieces,
            diagonals,
        }
    }

    pub fn polygon(&self) -> &RationalPolygon {
        &self.polygon
    }

    /// The closure counting quasipolynomial at any integer `t`:
    /// `sum_i L(T_i, t) - sum_{diagonals e} L(e, t)`. Every triangulation
    /// vertex is a polygon vertex, so no point correction is needed.
    pub fn closure_value(&self, t: &Integer) -> Integer {
        let triangles: Integer = self.pieces.iter().map(|d| d.value(t)).sum();
        let diagonals: Integer = self
            .diagonals
            .iter()
            .map(|(a, b)| segment_quasipolynomial(a, b, t))
            .sum();
        triangles - diagonals
    }

    pub fn closure(&self, t: &Integer) -> Result<Integer> {
        check_dilation(t)?;
        Ok(self.closure_value(t))
    }

    pub fn boundary(&self, t: &Integer) -> Result<Integer> {
        check_dilation(t)?;
        let edges: Integer = self
            .polygon
            .edges()
            .map(|(a, b)| segment_quasipolynomial(a, b, t))
            .sum();
        let lattice_vertices = self
            .polygon
            .vertices()
            .iter()
            .filter(|v| v.scaled(t).is_lattice())
            .count();
        Ok(edges - Integer::from(lattice_vertices))
    }

    /// Ehrhart-Macdonald reciprocity: the closure quasipolynomial at `-t`.
    pub fn interior_by_reciprocity(&self, t: &Integer) -> Result<Integer> {
        check_dilation(t)?;
        Ok(self.closure_value(&-t))
    }

    /// `closure - boundary`, cross-checked against the reciprocity value.
    pub fn interior(&self, t: &Integer) -> Result<Integer> {
        let direct = self.closure(t)? - self.boundary(t)?;
        let reciprocal = self.interior_by_reciprocity(t)?;
        assert_eq!(
            direct, reciprocal,
            "interior counts disagree at t = {t}: closure - boundary vs. reciprocity"
        );
        Ok(direct)
    }

    pub fn count(&self, t: &Integer, mode: CountMode) -> Result<CountReport> {
        let (count, path) = match mode {
            CountMode::Closure => (self.closure(t)?, CountPath::ClosedFormula),
            CountMode::Boundary => (self.boundary(t)?, CountPath::ClosedFormula),
            CountMode::Interior => (self.interior(t)?, CountPath::Reciprocity),
        };
        Ok(CountReport { count, path })
    }
}

fn check_dilation(t: &Integer) -> Result<()> {
    if *t < Integer::one() {
        Err(Error::OutOfRange {
            what: "dilation factor t",
            detail: format!("{t} < 1"),
        })
    } else {
        Ok(())
    }
}

pub fn count_closure(polygon: &RationalPolygon, t: &Integer) -> Result<Integer> {
    CountingPlan::new(polygon).closure(t)
}

pub fn count_boundary(polygon: &RationalPolygon, t: &Integer) -> Result<Integer> {
    CountingPlan::new(polygon).boundary(t)
}

pub fn count_interior(polygon: &RationalPolygon, t: &Integer) -> Result<Integer> {
    CountingPlan::new(polygon).interior(t)
}

pub fn count_interior_by_reciprocity(polygon: &RationalPolygon, t: &Integer) -> Result<Integer> {
    CountingPlan::new(polygon).interior_by_reciprocity(t)
}

/// Lattice indicator of `t p`.
pub(crate) fn lattice_indicator(p: &RationalPoint, t: &Integer) -> Integer {
    if p.scaled(t).is_lattice() {
        Integer::one()
    } else {
        Integer::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::lattice::brute_force_count;

    pub(crate) fn pts(raw: &[(i64, i64, i64, i64)]) -> Vec<RationalPoint> {
        raw.iter()
            .map(|&(xn, xd, yn, yd)| RationalPoint::new(rat(xn, xd), rat(yn, yd)))
            .collect()
    }

    pub(crate) fn ipts(raw: &[(i64, i64)]) -> Vec<RationalPoint> {
        raw.iter().map(|&(x, y)| RationalPoint::from_ints(x, y)).collect()
    }

    #[test]
    fn validate_examples() {
        let tri = validate(&ipts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(tri.vertices(), ipts(&[(0, 0), (1, 0), (0, 1)]).as_slice());
        let cw = validate(&ipts(&[(0, 0), (0, 1), (1, 1), (1, 0)])).unwrap();
        assert!(area(&cw).is_positive());
        assert_eq!(cw.vertices().len(), 4);
        assert_eq!(
            validate(&ipts(&[(0, 0), (2, 0), (1, 0)])),
            Err(Error::DegenerateArea)
        );
        assert_eq!(validate(&ipts(&[(0, 0), (1, 0)])), Err(Error::TooFewVertices(2)));
        assert!(matches!(
            validate(&ipts(&[(0, 0), (2, 2), (2, 0), (0, 2)])),
            Err(Error::SelfIntersecting(_))
        ));
        assert!(matches!(
            validate(&ipts(&[(0, 0), (2, 0), (2, 2), (1, 0), (0, 2)])),
            Err(Error::SelfIntersecting(_))
        ));
    }

    #[test]
    fn validate_merges_collinear_and_duplicates() {
        let p = validate(&ipts(&[(0, 0), (1, 0), (2, 0), (2, 0), (2, 2), (0, 2), (0, 1), (0, 0)])).unwrap();
        assert_eq!(p.vertices(), ipts(&[(0, 0), (2, 0), (2, 2), (0, 2)]).as_slice());
    }

    #[test]
    fn area_examples() {
        let sq = validate(&ipts(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        assert_eq!(area(&sq), rat(1, 1));
        let tri = validate(&ipts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        assert_eq!(area(&tri), rat(1, 2));
        let ell = validate(&ipts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])).unwrap();
        assert_eq!(area(&ell), rat(3, 1));
    }

    #[test]
    fn count_examples() {
        let sq = validate(&ipts(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        let tri = validate(&ipts(&[(0, 0), (1, 0), (0, 1)])).unwrap();
        let half = validate(&pts(&[(0, 1, 0, 1), (1, 2, 0, 1), (1, 2, 1, 2), (0, 1, 1, 2)])).unwrap();
        assert_eq!(count_closure(&sq, &int(3)).unwrap(), int(16));
        assert_eq!(count_closure(&tri, &int(2)).unwrap(), int(6));
        assert_eq!(count_closure(&half, &int(3)).unwrap(), int(4));
        assert_eq!(count_boundary(&sq, &int(2)).unwrap(), int(8));
        assert_eq!(count_boundary(&tri, &int(1)).unwrap(), int(3));
        // The corner (0, 0) is a lattice point on the boundary.
        assert_eq!(count_boundary(&half, &int(1)).unwrap(), int(1));
        assert_eq!(
            brute_force_count(half.vertices(), &int(1), CountMode::Boundary).unwrap(),
            int(1)
        );
        assert_eq!(count_boundary(&half, &int(3)).unwrap(), int(3));
        assert_eq!(count_interior(&sq, &int(2)).unwrap(), int(1));
        assert_eq!(count_interior(&tri, &int(3)).unwrap(), int(1));
        let t23 = validate(&pts(&[(0, 1, 0, 1), (1, 2, 0, 1), (0, 1, 1, 3)])).unwrap();
        for t in 1..=5 {
            assert_eq!(count_interior(&t23, &int(t)).unwrap(), int(0));
        }
        assert!(count_closure(&sq, &int(0)).is_err());
    }

    #[test]
    fn counts_match_oracle_on_fixed_polygons() {
        let polys = [
            ipts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]),
            pts(&[(-7, 3, 1, 2), (5, 2, -4, 5), (3, 1, 3, 1), (1, 6, 1, 1), (-2, 1, 7, 2)]),
            pts(&[(0, 1, 0, 1), (5, 1, 1, 3), (1, 1, 1, 1), (4, 1, 5, 2), (-1, 2, 3, 1)]),
        ];
        for raw in polys {
            let poly = validate(&raw).unwrap();
            let plan = CountingPlan::new(&poly);
            for t in 1..=8 {
                let t = int(t);
                for mode in [CountMode::Closure, CountMode::Interior, CountMode::Boundary] {
                    assert_eq!(
                        plan.count(&t, mode).unwrap().count,
                        brute_force_count(poly.vertices(), &t, mode).unwrap(),
                        "{poly:?} t={t} {mode:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn parse_polygon_format() {
        let text = "# unit square\n0 0\n1 0  # corner\n\n1/1 1\n  0   -0/3\n";
        let v = parse_polygon(text).unwrap();
        assert_eq!(v, ipts(&[(0, 0), (1, 0), (1, 1), (0, 0)]));
        assert!(parse_polygon("0 0 0\n").is_err());
        assert!(parse_polygon("0 x\n").is_err());
        assert!(parse_polygon("1/0 1\n").is_err());
    }
}
