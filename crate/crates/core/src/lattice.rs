//! Closed-form lattice point counts for the primitive regions: right
//! triangles with axis-parallel legs, rectangles, segments and points, plus
//! the brute-force enumeration every formula is checked against.

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dedekind;
use crate::error::{Error, Result};
use crate::exact::{
    extended_gcd, floor, int, rat, rat_from_int, sawtooth, Integer, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(rat(x, 1), rat(y, 1))
    }

    pub fn scaled(&self, t: &Integer) -> Self {
        let t = rat_from_int(t);
        Self::new(&self.x * &t, &self.y * &t)
    }

    pub fn is_lattice(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }
}

impl std::fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `{ x >= a/d, y >= b/d, c p x + c q y <= r }` with `gcd(p, q) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RightTriangleSpec {
    pub a: Integer,
    pub b: Integer,
    pub d: Integer,
    pub c: Integer,
    pub p: Integer,
    pub q: Integer,
    pub r: Integer,
}

impl RightTriangleSpec {
    pub fn new(
        a: Integer,
        b: Integer,
        d: Integer,
        c: Integer,
        p: Integer,
        q: Integer,
        r: Integer,
    ) -> Result<Self> {
        let spec = Self { a, b, d, c, p, q, r };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_i64(a: i64, b: i64, d: i64, c: i64, p: i64, q: i64, r: i64) -> Result<Self> {
        Self::new(int(a), int(b), int(d), int(c), int(p), int(q), int(r))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        let one = Integer::one();
        for (name, v) in [("d", &self.d), ("c", &self.c), ("p", &self.p), ("q", &self.q)] {
            if *v < one {
                return bad(format!("{name} = {v} must be >= 1"));
            }
        }
        if self.r.is_negative() {
            return bad(format!("r = {} must be >= 0", self.r));
        }
        for (name, v) in [("a", &self.a), ("b", &self.b)] {
            if v.is_negative() || *v >= self.d {
                return bad(format!("{name} = {v} must lie in [0, d)"));
            }
        }
        if !self.p.gcd(&self.q).is_one() {
            return bad(format!("gcd(p, q) = gcd({}, {}) != 1", self.p, self.q));
        }
        if self.hypotenuse_slack().is_negative() {
            return bad("triangle is empty (c p a + c q b > r d)".into());
        }
        Ok(())
    }

    /// `r d - c p a - c q b`; zero means the triangle is a single point.
    fn hypotenuse_slack(&self) -> Integer {
        &self.r * &self.d - &self.c * (&self.p * &self.a + &self.q * &self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.hypotenuse_slack().is_zero()
    }

    /// Right-angle corner first, then the vertex on the horizontal leg, then
    /// the one on the vertical leg.
    pub fn vertices(&self) -> [RationalPoint; 3] {
        let d = rat_from_int(&self.d);
        let (x0, y0) = (rat_from_int(&self.a) / &d, rat_from_int(&self.b) / &d);
        let (cp, cq) = (rat_from_int(&(&self.c * &self.p)), rat_from_int(&(&self.c * &self.q)));
        let r = rat_from_int(&self.r);
        let x1 = (&r - &cq * &y0) / &cp;
        let y1 = (&r - &cp * &x0) / &cq;
        [
            RationalPoint::new(x0.clone(), y0.clone()),
            RationalPoint::new(x1, y0),
            RationalPoint::new(x0, y1),
        ]
    }

    /// A period of the counting quasipolynomial.
    pub fn period(&self) -> Integer {
        &self.c * &self.p * &self.q * &self.d
    }
}

/// `u = ([(t a - 1)/d] + 1) c p`, `v = ([(t b - 1)/d] + 1) c q`, with `[.]`
/// the true floor so negative `t` behaves as a quasipolynomial argument.
pub fn uv_shift(spec: &RightTriangleSpec, t: &Integer) -> (Integer, Integer) {
    let first = |a: &Integer| (t * a - 1u32).div_floor(&spec.d) + 1u32;
    (
        first(&spec.a) * &spec.c * &spec.p,
        first(&spec.b) * &spec.c * &spec.q,
    )
}

/// The closed-triangle counting function evaluated at any integer `t`.
///
/// With `X = tr - u - v`:
///
/// ```text
/// L = X^2/(2c^2pq) + X (1/(2cp) + 1/(2cq) - ((tr/c))/(cpq))
///   + 1/4 + (p/q + q/p)/12 - 1/(24pq) + 1/(2c^2pq)
///   - (((tr-v)/(cp))) - (((tr-u)/(cq)))
///   + (((tr-1)/c))/(cpq) + (((tr-1)/c))^2/(2pq)
///   - sigma(q, p, (tr-v)/c) - sigma(p, q, (tr-u)/c)
/// ```
///
/// For `t >= 1` this is `#(tT ∩ Z^2)`.
pub fn closure_formula(spec: &RightTriangleSpec, t: &Integer) -> Result<Rational> {
    spec.validate()?;
    let (u, v) = uv_shift(spec, t);
    let tr = t * &spec.r;
    let x = rat_from_int(&(&tr - &u - &v));
    let c = rat_from_int(&spec.c);
    let p = rat_from_int(&spec.p);
    let q = rat_from_int(&spec.q);
    let pq = &p * &q;
    let cpq = &c * &pq;
    let c2pq = &c * &cpq;
    let cp = &c * &p;
    let cq = &c * &q;
    let two = rat(2, 1);

    let saw_tr = sawtooth(&(rat_from_int(&tr) / &c));
    let saw_tr1 = sawtooth(&(rat_from_int(&(&tr - 1u32)) / &c));
    let shifted_v = rat_from_int(&(&tr - &v));
    let shifted_u = rat_from_int(&(&tr - &u));

    let quadratic = &x * &x / (&two * &c2pq);
    let linear = &x * ((&two * &cp).recip() + (&two * &cq).recip() - &saw_tr / &cpq);
    let constant = rat(1, 4) + (&p / &q + &q / &p) / rat(12, 1) - (rat(24, 1) * &pq).recip()
        + (&two * &c2pq).recip();
    let saw_terms = -sawtooth(&(&shifted_v / &cp)) - sawtooth(&(&shifted_u / &cq))
        + &saw_tr1 / &cpq
        + &saw_tr1 * &saw_tr1 / (&two * &pq);
    let sums = dedekind::sigma_fast(&spec.q, &spec.p, &(&shifted_v / &c))?
        + dedekind::sigma_fast(&spec.p, &spec.q, &(&shifted_u / &c))?;

    Ok(quadratic + linear + constant + saw_terms - sums)
}

fn expect_integral(value: Rational, what: &str) -> Integer {
    assert!(
        value.is_integer(),
        "{what} produced the non-integral value {value}; counting invariant violated"
    );
    value.to_integer()
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

/// `#(t T̄ ∩ Z^2)`; for `t <= 0` the value of the counting quasipolynomial.
pub fn count_right_triangle_closure(spec: &RightTriangleSpec, t: &Integer) -> Result<Integer> {
    Ok(expect_integral(closure_formula(spec, t)?, "right-triangle closure formula"))
}

/// `#(t T° ∩ Z^2)` through Ehrhart-Macdonald reciprocity: the closure
/// function at `-t`. Zero-area triangles have empty interior and are not
/// covered by reciprocity, so they return 0 directly.
pub fn count_right_triangle_interior(spec: &RightTriangleSpec, t: &Integer) -> Result<Integer> {
    spec.validate()?;
    check_dilation(t)?;
    if spec.is_degenerate() {
        return Ok(Integer::zero());
    }
    Ok(expect_integral(closure_formula(spec, &-t)?, "right-triangle interior formula"))
}

fn check_coprime_pq(p: &Integer, q: &Integer) -> Result<()> {
    if *p < Integer::one() || *q < Integer::one() {
        return Err(Error::InvalidSpec(format!("p = {p}, q = {q} must be >= 1")));
    }
    let g = p.gcd(q);
    if g.is_one() {
        Ok(())
    } else {
        Err(Error::not_coprime(p, q, &g))
    }
}

/// Count in `{x, y >= 0, p x + q y <= t}`:
/// `t^2/(2pq) + (t/2)(1/p + 1/q + 1/(pq)) + 1/4 + (p/q + q/p + 1/(pq))/12
///  - sigma(q,p,t) - sigma(p,q,t) - ((t/p)) - ((t/q))`.
pub fn count_right_triangle_origin(p: &Integer, q: &Integer, t: &Integer) -> Result<Rational> {
    check_coprime_pq(p, q)?;
    let (pr, qr, tr) = (rat_from_int(p), rat_from_int(q), rat_from_int(t));
    let pq = &pr * &qr;
    Ok(&tr * &tr / (rat(2, 1) * &pq)
        + &tr / rat(2, 1) * (pr.recip() + qr.recip() + pq.recip())
        + rat(1, 4)
        + (&pr / &qr + &qr / &pr + pq.recip()) / rat(12, 1)
        - dedekind::sigma_fast(q, p, &tr)?
        - dedekind::sigma_fast(p, q, &tr)?
        - sawtooth(&(&tr / &pr))
        - sawtooth(&(&tr / &qr)))
}

/// Count in `{x, y > 0, p x + q y < t}`, the explicit interior formula with
/// its root-of-unity sums rewritten as Dedekind-Rademacher sums.
pub fn count_right_triangle_origin_interior(
    p: &Integer,
    q: &Integer,
    t: &Integer,
) -> Result<Rational> {
    check_coprime_pq(p, q)?;
    let (pr, qr, tr) = (rat_from_int(p), rat_from_int(q), rat_from_int(t));
    let pq = &pr * &qr;
    Ok(&tr * &tr / (rat(2, 1) * &pq)
        - &tr / rat(2, 1) * (pr.recip() + qr.recip() + pq.recip())
        + rat(1, 4)
        + (&pr / &qr + &qr / &pr + pq.recip()) / rat(12, 1)
        - dedekind::sigma_fast(q, p, &-&tr)?
        - dedekind::sigma_fast(p, q, &-&tr)?
        - sawtooth(&(-&tr / &pr))
        - sawtooth(&(-&tr / &qr)))
}

/// Rectangle with corners `(a1/d, a2/d)` and `(b1/d, b2/d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalRect {
    pub a1: Integer,
    pub a2: Integer,
    pub b1: Integer,
    pub b2: Integer,
    pub d: Integer,
}

impl RationalRect {
    pub fn new(a1: Integer, a2: Integer, b1: Integer, b2: Integer, d: Integer) -> Result<Self> {
        let rect = Self { a1, a2, b1, b2, d };
        rect.validate()?;
        Ok(rect)
    }

    pub fn from_i64(a1: i64, a2: i64, b1: i64, b2: i64, d: i64) -> Result<Self> {
        Self::new(int(a1), int(a2), int(b1), int(b2), int(d))
    }

    /// Smallest rectangle of this form with the given opposite corners.
    pub fn from_corners(lo: &RationalPoint, hi: &RationalPoint) -> Result<Self> {
        let d = [&lo.x, &lo.y, &hi.x, &hi.y]
            .iter()
            .fold(Integer::one(), |acc, v| acc.lcm(v.denom()));
        let dr = rat_from_int(&d);
        let scale = |v: &Rational| (v * &dr).to_integer();
        Self::new(scale(&lo.x), scale(&lo.y), scale(&hi.x), scale(&hi.y), d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < Integer::one() {
            return Err(Error::InvalidSpec(format!("rectangle d = {} must be >= 1", self.d)));
        }
        if self.a1 >= self.b1 || self.a2 >= self.b2 {
            return Err(Error::InvalidSpec(format!(
                "rectangle needs a1 < b1 and a2 < b2, got ({}, {}) - ({}, {})",
                self.a1, self.a2, self.b1, self.b2
            )));
        }
        Ok(())
    }

    pub fn vertices(&self) -> [RationalPoint; 4] {
        let d = &self.d;
        let p = |x: &Integer, y: &Integer| {
            RationalPoint::new(Rational::new(x.clone(), d.clone()), Rational::new(y.clone(), d.clone()))
        };
        [
            p(&self.a1, &self.a2),
            p(&self.b1, &self.a2),
            p(&self.b1, &self.b2),
            p(&self.a1, &self.b2),
        ]
    }
}

/// Integers in `[t a / d, t b / d]`: `[t b / d] - [(t a - 1)/d]`.
pub fn interval_count(a: &Integer, b: &Integer, d: &Integer, t: &Integer) -> Integer {
    (t * b).div_floor(d) - (t * a - 1u32).div_floor(d)
}

pub fn count_rectangle(rect: &RationalRect, t: &Integer) -> Result<Integer> {
    rect.validate()?;
    check_dilation(t)?;
    Ok(interval_count(&rect.a1, &rect.b1, &rect.d, t) * interval_count(&rect.a2, &rect.b2, &rect.d, t))
}

/// Lattice points on the closed segment from `t P1` to `t P2`.
pub fn count_segment_closed(p1: &RationalPoint, p2: &RationalPoint, t: &Integer) -> Result<Integer> {
    if p1 == p2 {
        return Err(Error::DegenerateSegment);
    }
    check_dilation(t)?;
    Ok(segment_quasipolynomial(p1, p2, t))
}

/// The segment counting quasipolynomial, valid at every integer `t`; for
/// `t >= 1` it is `#([t P1, t P2] ∩ Z^2)`.
///
/// The supporting line is `alpha x + beta y = gamma` with coprime integers
/// `alpha, beta`. At dilation `t` its integer points are
/// `(s G + k beta, u G - k alpha)` with `G = t gamma` and `s alpha + u beta = 1`,
/// and the segment bounds one coordinate, hence an interval of `k`.
///
/// Panics if `p1 == p2`.
pub fn segment_quasipolynomial(p1: &RationalPoint, p2: &RationalPoint, t: &Integer) -> Integer {
    assert!(p1 != p2, "segment endpoints coincide");
    let dx = &p2.x - &p1.x;
    let dy = &p2.y - &p1.y;
    let m = dx.denom().lcm(dy.denom());
    let mr = rat_from_int(&m);
    let alpha = (&dy * &mr).to_integer();
    let beta = (-&dx * &mr).to_integer();
    let g = alpha.gcd(&beta);
    let (alpha, beta) = (alpha / &g, beta / &g);
    let gamma = rat_from_int(&alpha) * &p1.x + rat_from_int(&beta) * &p1.y;
    let big_g = rat_from_int(t) * gamma;
    if !big_g.is_integer() {
        return Integer::zero();
    }
    let big_g = big_g.to_integer();
    let (_, s, u) = extended_gcd(&alpha, &beta);
    // Use whichever coordinate actually varies along the segment.
    let (base, step, lo, hi) = if !beta.is_zero() {
        (s * &big_g, beta, p1.x.clone().min(p2.x.clone()), p1.x.clone().max(p2.x.clone()))
    } else {
        (u * &big_g, -alpha, p1.y.clone().min(p2.y.clone()), p1.y.clone().max(p2.y.clone()))
    };
    let tr = rat_from_int(t);
    let base = rat_from_int(&base);
    let step = rat_from_int(&step);
    let k_at = |end: &Rational| (&tr * end - &base) / &step;
    let (k_lo, k_hi) = if step.is_positive() {
        (k_at(&lo), k_at(&hi))
    } else {
        (k_at(&hi), k_at(&lo))
    };
    floor(&k_hi) + floor(&-k_lo) + 1u32
}

/// How a count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountPath {
    ClosedFormula,
    Oracle,
    Reciprocity,
}

impl CountPath {
    pub fn as_str(self) -> &'static str {
        match self {
            CountPath::ClosedFormula => "closed-formula",
            CountPath::Oracle => "oracle",
            CountPath::Reciprocity => "reciprocity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub count: Integer,
    pub path: CountPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountMode {
    Closure,
    Interior,
    Boundary,
}

impl CountMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMode::Closure => "closure",
            CountMode::Interior => "interior",
            CountMode::Boundary => "boundary",
        }
    }
}

/// Exhaustive enumeration of the bounding box of `t P` with exact
/// membership tests. `vertices` is a simple polygon in either orientation, or
/// a set of collinear points / a single point standing for its convex hull.
pub fn brute_force_count(vertices: &[RationalPoint], t: &Integer, mode: CountMode) -> Result<Integer> {
    check_dilation(t)?;
    if vertices.is_empty() {
        return Err(Error::TooFewVertices(0));
    }
    let denom = vertices
        .iter()
        .fold(Integer::one(), |acc, v| acc.lcm(v.x.denom()).lcm(v.y.denom()));
    let dr = rat_from_int(&denom);
    let scaled: Vec<(Integer, Integer)> = vertices
        .iter()
        .map(|v| {
            let w = v.scaled(t);
            ((&w.x * &dr).to_integer(), (&w.y * &dr).to_integer())
        })
        .collect();

    // Lattice point (m, n) maps to (m D, n D) in the scaled frame.
    let fits = |v: &Integer| v.bits() < 56;
    let small = fits(&denom)
        && scaled.iter().all(|(x, y)| fits(x) && fits(y));
    if small {
        let pts: Vec<(i128, i128)> = scaled
            .iter()
            .map(|(x, y)| (x.to_i128().unwrap(), y.to_i128().unwrap()))
            .collect();
        enumerate(&pts, denom.to_i128().unwrap(), mode).map(Integer::from)
    } else {
        enumerate(&scaled, denom, mode).map(|n: u64| Integer::from(n))
    }
}

trait Coord:
    Clone
    + Ord
    + Zero
    + One
    + Signed
    + num_integer::Integer
    + for<'a> std::ops::Add<&'a Self, Output = Self>
    + for<'a> std::ops::Sub<&'a Self, Output = Self>
    + for<'a> std::ops::Mul<&'a Self, Output = Self>
{
}

impl<T> Coord for T where
    T: Clone
        + Ord
        + Zero
        + One
        + Signed
        + num_integer::Integer
        + for<'a> std::ops::Add<&'a T, Output = T>
        + for<'a> std::ops::Sub<&'a T, Output = T>
        + for<'a> std::ops::Mul<&'a T, Output = T>
{
}

fn cross<T: Coord>(o: &(T, T), a: &(T, T), b: &(T, T)) -> T {
    (a.0.clone() - &o.0) * &(b.1.clone() - &o.1) - (a.1.clone() - &o.1) * &(b.0.clone() - &o.0)
}

fn on_segment<T: Coord>(a: &(T, T), b: &(T, T), p: &(T, T)) -> bool {
    cross(a, b, p).is_zero()
        && p.0 >= a.0.clone().min(b.0.clone())
        && p.0 <= a.0.clone().max(b.0.clone())
        && p.1 >= a.1.clone().min(b.1.clone())
        && p.1 <= a.1.clone().max(b.1.clone())
}

fn segments_touch<T: Coord>(a: &(T, T), b: &(T, T), c: &(T, T), d: &(T, T)) -> bool {
    let d1 = cross(c, d, a).signum();
    let d2 = cross(c, d, b).signum();
    let d3 = cross(a, b, c).signum();
    let d4 = cross(a, b, d).signum();
    if d1.clone() * &d2 < T::zero() && d3.clone() * &d4 < T::zero() {
        return true;
    }
    on_segment(c, d, a) || on_segment(c, d, b) || on_segment(a, b, c) || on_segment(a, b, d)
}

fn check_simple<T: Coord>(pts: &[(T, T)]) -> Result<()> {
    let n = pts.len();
    for i in 0..n {
        if pts[i] == pts[(i + 1) % n] {
            return Err(Error::SelfIntersecting(format!("repeated vertex at index {i}")));
        }
    }
    for i in 0..n {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (&pts[j], &pts[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Adjacent edges may only share their common vertex.
                let (other_ab, other_cd) = if j == i + 1 { (a, d) } else { (b, c) };
                if on_segment(a, b, other_cd) || on_segment(c, d, other_ab) {
                    return Err(Error::SelfIntersecting(format!("edges {i} and {j} overlap")));
                }
            } else if segments_touch(a, b, c, d) {
                return Err(Error::SelfIntersecting(format!("edges {i} and {j} intersect")));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Location {
    Outside,
    Boundary,
    Inside,
}

fn locate<T: Coord>(pts: &[(T, T)], p: &(T, T)) -> Location {
    let n = pts.len();
    let mut winding = 0i64;
    for i in 0..n {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        if on_segment(a, b, p) {
            return Location::Boundary;
        }
        if a.1 <= p.1 {
            if b.1 > p.1 && cross(a, b, p).is_positive() {
                winding += 1;
            }
        } else if b.1 <= p.1 && cross(a, b, p).is_negative() {
            winding -= 1;
        }
    }
    if winding == 0 {
        Location::Outside
    } else {
        Location::Inside
    }
}

fn enumerate<T: Coord>(pts: &[(T, T)], denom: T, mode: CountMode) -> Result<u64> {
    let min_max = |sel: fn(&(T, T)) -> &T| {
        let lo = pts.iter().map(sel).min().unwrap().clone();
        let hi = pts.iter().map(sel).max().unwrap().clone();
        // Lattice range: ceil(lo / D) ..= floor(hi / D).
        (lo.div_ceil(&denom), hi.div_floor(&denom))
    };
    let (x_lo, x_hi) = min_max(|p| &p.0);
    let (y_lo, y_hi) = min_max(|p| &p.1);

    let mut distinct: Vec<(T, T)> = Vec::with_capacity(pts.len());
    for p in pts {
        if !distinct.contains(p) {
            distinct.push(p.clone());
        }
    }
    let area2 = (0..pts.len()).fold(T::zero(), |acc, i| {
        let (a, b) = (&pts[i], &pts[(i + 1) % pts.len()]);
        acc + &(a.0.clone() * &b.1 - a.1.clone() * &b.0)
    });
    let collinear = distinct.len() < 3
        || distinct
            .iter()
            .all(|p| cross(&distinct[0], &distinct[1], p).is_zero());

    if collinear {
        if mode == CountMode::Interior {
            return Ok(0);
        }
        // Hull of collinear points: the two extreme ones.
        let lo = distinct.iter().min().unwrap().clone();
        let hi = distinct.iter().max().unwrap().clone();
        return Ok(count_cells(&x_lo, &x_hi, &y_lo, &y_hi, &denom, |q| on_segment(&lo, &hi, q)));
    }
    check_simple(pts)?;
    if area2.is_zero() {
        return Err(Error::DegenerateArea);
    }
    Ok(count_cells(&x_lo, &x_hi, &y_lo, &y_hi, &denom, |q| {
        let loc = locate(pts, q);
        match mode {
            CountMode::Closure => loc != Location::Outside,
            CountMode::Interior => loc == Location::Inside,
            CountMode::Boundary => loc == Location::Boundary,
        }
    }))
}

fn count_cells<T: Coord>(
    x_lo: &T,
    x_hi: &T,
    y_lo: &T,
    y_hi: &T,
    denom: &T,
    mut member: impl FnMut(&(T, T)) -> bool,
) -> u64 {
    let mut count = 0u64;
    let mut m = x_lo.clone();
    while m <= *x_hi {
        let mut n = y_lo.clone();
        while n <= *y_hi {
            if member(&(m.clone() * denom, n.clone() * denom)) {
                count += 1;
            }
            n = n + &T::one();
        }
        m = m + &T::one();
    }
    count
}

/// An axis-aligned right triangle anywhere in the plane: right angle at
/// `corner`, legs `corner + (leg_x, 0)` and `corner + (0, leg_y)`. Leg lengths
/// are signed and nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AxisRightTriangle {
    pub corner: RationalPoint,
    pub leg_x: Rational,
    pub leg_y: Rational,
}

/// Maps the normalized triangle back: `x = sx (x' + shift_x)`,
/// `y = sy (y' + shift_y)` with `sx = -1` iff `flip_x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Placement {
    pub flip_x: bool,
    pub flip_y: bool,
    pub shift_x: Integer,
    pub shift_y: Integer,
}

impl Placement {
    pub fn to_original(&self, p: &RationalPoint) -> RationalPoint {
        let apply = |v: &Rational, shift: &Integer, flip: bool| {
            let w = v + rat_from_int(shift);
            if flip {
                -w
            } else {
                w
            }
        };
        RationalPoint::new(
            apply(&p.x, &self.shift_x, self.flip_x),
            apply(&p.y, &self.shift_y, self.flip_y),
        )
    }
}

impl AxisRightTriangle {
    pub fn new(corner: RationalPoint, leg_x: Rational, leg_y: Rational) -> Result<Self> {
        if leg_x.is_zero() || leg_y.is_zero() {
            return Err(Error::DegenerateTriangle);
        }
        Ok(Self { corner, leg_x, leg_y })
    }

    /// The triangle with its right angle at `corner` and the other two
    /// vertices `p`, `q` each sharing one coordinate with `corner`.
    pub fn from_vertices(corner: &RationalPoint, p: &RationalPoint, q: &RationalPoint) -> Result<Self> {
        let (horizontal, vertical) = if p.y == corner.y { (p, q) } else { (q, p) };
        if horizontal.y != corner.y || vertical.x != corner.x {
            return Err(Error::DegenerateTriangle);
        }
        Self::new(
            corner.clone(),
            &horizontal.x - &corner.x,
            &vertical.y - &corner.y,
        )
    }

    pub fn vertices(&self) -> [RationalPoint; 3] {
        [
            self.corner.clone(),
            RationalPoint::new(&self.corner.x + &self.leg_x, self.corner.y.clone()),
            RationalPoint::new(self.corner.x.clone(), &self.corner.y + &self.leg_y),
        ]
    }

    /// Normalizes by axis flips and an integer translation to the
    /// `{x >= a/d, y >= b/d, c p x + c q y <= r}` form, which has the same
    /// lattice point count for every dilation.
    pub fn normalize(&self) -> (RightTriangleSpec, Placement) {
        let flip_x = self.leg_x.is_negative();
        let flip_y = self.leg_y.is_negative();
        let x0 = if flip_x { -&self.corner.x } else { self.corner.x.clone() };
        let y0 = if flip_y { -&self.corner.y } else { self.corner.y.clone() };
        let w = self.leg_x.abs();
        let h = self.leg_y.abs();

        let shift_x = floor(&x0);
        let shift_y = floor(&y0);
        let fx = x0 - rat_from_int(&shift_x);
        let fy = y0 - rat_from_int(&shift_y);
        let d = fx.denom().lcm(fy.denom());
        let dr = rat_from_int(&d);
        let a = (&fx * &dr).to_integer();
        let b = (&fy * &dr).to_integer();

        // h x + w y <= h fx + w fy + w h, cleared to integers.
        let rhs = &h * &fx + &w * &fy + &w * &h;
        let m = [&h, &w, &rhs]
            .iter()
            .fold(Integer::one(), |acc, v| acc.lcm(v.denom()));
        let mr = rat_from_int(&m);
        let e = (&h * &mr).to_integer();
        let f = (&w * &mr).to_integer();
        let r = (&rhs * &mr).to_integer();
        let common = e.gcd(&f).gcd(&r);
        let (e, f, r) = (e / &common, f / &common, r / &common);
        let c = e.gcd(&f);
        let spec = RightTriangleSpec {
            p: &e / &c,
            q: &f / &c,
            a,
            b,
            d,
            c,
            r,
        };
        debug_assert!(spec.validate().is_ok());
        (
            spec,
            Placement {
                flip_x,
                flip_y,
                shift_x,
                shift_y,
            },
        )
    }
}
