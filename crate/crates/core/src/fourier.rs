//! Floating-point evaluation of the finite root-of-unity sums behind the
//! counting formulas, next to the exact closed forms they reduce to.
//!
//! Nothing here feeds an exact count. These sums exist so the analytic
//! identities can be checked numerically; each `roots_sum_*` function has a
//! matching `*_closed` function returning the exact rational value.
//! Summation always runs over increasing root index.

use num_complex::Complex64;
use num_integer::Integer as _;

use crate::dedekind;
use crate::error::{Error, Result};
use crate::exact::{int, rat, sawtooth, to_float_approx, Rational};
use crate::lattice::RightTriangleSpec;

pub type ComplexApprox = Complex64;

/// `exp(2 pi i k / n)`, with `k` reduced mod `n` first.
pub fn root_of_unity(n: i64, k: i64) -> ComplexApprox {
    let k = k.rem_euclid(n);
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

fn check_coprime(p: i64, q: i64) -> Result<()> {
    let g = p.gcd(&q);
    if g == 1 {
        Ok(())
    } else {
        Err(Error::not_coprime(&int(p), &int(q), &int(g)))
    }
}

fn check_positive(what: &'static str, v: i64) -> Result<()> {
    if v >= 1 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            detail: format!("{v} < 1"),
        })
    }
}

/// `(1/p) sum_{lambda^p = 1 != lambda} lambda^t / (lambda - 1)`.
pub fn roots_sum_simple(p: i64, t: i64) -> ComplexApprox {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..p {
        let lambda = root_of_unity(p, k);
        acc += root_of_unity(p, k * t.rem_euclid(p)) / (lambda - 1.0);
    }
    acc / p as f64
}

/// `((-t/p)) + 1/(2p)`.
pub fn roots_sum_simple_closed(p: i64, t: i64) -> Rational {
    sawtooth(&rat(-t, p)) + rat(1, 2 * p)
}

/// `(1/(cp)) sum_{lambda^{cp} = 1, lambda^c != 1} lambda^t / (1 - lambda^{cq})`.
pub fn roots_sum_keycor(c: i64, p: i64, q: i64, t: i64) -> Result<ComplexApprox> {
    check_positive("c", c)?;
    check_positive("p", p)?;
    check_positive("q", q)?;
    check_coprime(p, q)?;
    let n = c * p;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        if k % p == 0 {
            continue;
        }
        let num = root_of_unity(n, k * t.rem_euclid(n));
        let den = 1.0 - root_of_unity(n, k * c * q);
        acc += num / den;
    }
    Ok(acc / n as f64)
}

/// `-((-q' t/(cp))) - 1/(2p)` when `c | t`, else 0, where `q q' = 1 mod p`.
pub fn keycor_closed(c: i64, p: i64, q: i64, t: i64) -> Result<Rational> {
    check_positive("c", c)?;
    check_positive("p", p)?;
    check_positive("q", q)?;
    check_coprime(p, q)?;
    if t % c != 0 {
        return Ok(rat(0, 1));
    }
    let q_inv = crate::exact::mod_inverse(&int(q), &int(p))?;
    let arg = Rational::new(-(q_inv * int(t)), int(c * p));
    Ok(-sawtooth(&arg) - rat(1, 2 * p))
}

/// `(1/(cp)) sum_{lambda^{cp} = 1, lambda^c != 1}
///  lambda^{-t} / ((1 - lambda^{cq})(1 - lambda))`.
pub fn roots_sum_dedekind(c: i64, p: i64, q: i64, t: i64) -> Result<ComplexApprox> {
    check_positive("c", c)?;
    check_positive("p", p)?;
    check_positive("q", q)?;
    check_coprime(p, q)?;
    let n = c * p;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        if k % p == 0 {
            continue;
        }
        let lambda = root_of_unity(n, k);
        let num = root_of_unity(n, k * (-t).rem_euclid(n));
        let den = (1.0 - root_of_unity(n, k * c * q)) * (1.0 - lambda);
        acc += num / den;
    }
    Ok(acc / n as f64)
}

/// `-sigma(q, p, t/c) - ((t/(cp))) + ((t/c))/(2p)`.
pub fn dedekind_closed(c: i64, p: i64, q: i64, t: i64) -> Result<Rational> {
    check_positive("c", c)?;
    check_positive("p", p)?;
    check_positive("q", q)?;
    check_coprime(p, q)?;
    let s = dedekind::sigma(&int(q), &int(p), &rat(t, c))?;
    Ok(-s - sawtooth(&rat(t, c * p)) + sawtooth(&rat(t, c)) / rat(2 * p, 1))
}

/// Both sides of the convolution theorem for finite Fourier series with
/// coefficients indexed by `lambda_k = exp(2 pi i k / n)`:
/// `lhs = (1/n) sum a_k b_k lambda_k^t`, `rhs = sum_{m<n} f(t - m) g(m)`.
pub fn convolution_check(
    n: usize,
    coeffs_a: &[ComplexApprox],
    coeffs_b: &[ComplexApprox],
    t: i64,
) -> Result<(ComplexApprox, ComplexApprox)> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "N",
            detail: "0 < 1".into(),
        });
    }
    for len in [coeffs_a.len(), coeffs_b.len()] {
        if len != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: len,
            });
        }
    }
    let ni = n as i64;
    let series = |coeffs: &[ComplexApprox], s: i64| -> ComplexApprox {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * root_of_unity(ni, k as i64 * s.rem_euclid(ni)))
            .sum::<ComplexApprox>()
            / n as f64
    };
    let lhs = coeffs_a
        .iter()
        .zip(coeffs_b)
        .enumerate()
        .map(|(k, (a, b))| a * b * root_of_unity(ni, k as i64 * t.rem_euclid(ni)))
        .sum::<ComplexApprox>()
        / n as f64;
    let rhs = (0..ni)
        .map(|m| series(coeffs_a, t - m) * series(coeffs_b, m))
        .sum();
    Ok((lhs, rhs))
}

/// Order -1 and order 0 Laurent coefficients of `1/(1 - z^{ab})` at the
/// `a`-th root of unity `lambda = exp(2 pi i k / a)`:
/// `(-lambda/(ab), (ab - 1)/(2ab))`.
pub fn laurent_leading_pair(a: i64, b: i64, lambda_index: i64) -> (ComplexApprox, ComplexApprox) {
    let lambda = root_of_unity(a, lambda_index);
    let ab = (a * b) as f64;
    (-lambda / ab, Complex64::new((ab - 1.0) / (2.0 * ab), 0.0))
}

/// The same pair measured numerically. The residue is the mean of
/// `(z - lambda) f(z)` and the constant term the mean of
/// `f(z) + lambda/(ab (z - lambda))` over a small circle around `lambda`;
/// both integrands are analytic inside it, so the means converge to their
/// values at `lambda` geometrically in the number of samples.
pub fn laurent_leading_pair_numeric(
    a: i64,
    b: i64,
    lambda_index: i64,
) -> (ComplexApprox, ComplexApprox) {
    const SAMPLES: i64 = 64;
    let lambda = root_of_unity(a, lambda_index);
    let ab = a * b;
    // Nearest other pole sits at distance 2 sin(pi/ab) >= 4/ab.
    let radius = 0.5 / ab as f64;
    let f = |z: Complex64| 1.0 / (1.0 - z.powi(ab as i32));
    let mut residue = Complex64::new(0.0, 0.0);
    let mut constant = Complex64::new(0.0, 0.0);
    for j in 0..SAMPLES {
        let offset = root_of_unity(SAMPLES, j) * radius;
        let z = lambda + offset;
        residue += offset * f(z);
        constant += f(z) + lambda / (ab as f64 * offset);
    }
    (residue / SAMPLES as f64, constant / SAMPLES as f64)
}

/// Left side of Gessel's law: the two root-of-unity sums
/// `(1/p) sum lambda^t/((1-lambda^q)(1-lambda)) + (1/q) sum mu^t/((1-mu^p)(1-mu))`.
pub fn gessel_fourier_lhs(p: i64, q: i64, t: i64) -> Result<ComplexApprox> {
    // Each sum is roots_sum_dedekind with c = 1 evaluated at -t.
    Ok(roots_sum_dedekind(1, p, q, -t)? + roots_sum_dedekind(1, q, p, -t)?)
}

/// Right side of Gessel's law for integer `1 <= t <= p + q`.
pub fn gessel_fourier_rhs(p: i64, q: i64, t: i64) -> Result<Rational> {
    check_positive("p", p)?;
    check_positive("q", q)?;
    check_coprime(p, q)?;
    if t < 1 || t > p + q {
        return Err(Error::OutOfRange {
            what: "t",
            detail: format!("{t} not in [1, {}]", p + q),
        });
    }
    let (pr, qr) = (rat(p, 1), rat(q, 1));
    let pq = &pr * &qr;
    let tr = rat(t, 1);
    Ok(-&tr * &tr / (rat(2, 1) * &pq)
        + &tr / rat(2, 1) * (pr.recip() + qr.recip() + pq.recip())
        - (pr.recip() + qr.recip() + rat(1, 1)) / rat(4, 1)
        - (&pr / &qr + pq.recip() + &qr / &pr) / rat(12, 1))
}

/// The root-of-unity form of the closed-triangle count, evaluated in
/// floating point. Requires the spec's `c`, `p`, `q` to fit in `i64`.
pub fn closure_root_form(spec: &RightTriangleSpec, t: i64) -> Result<f64> {
    use num_traits::ToPrimitive;
    spec.validate()?;
    let small = |v: &crate::exact::Integer| {
        v.to_i64().ok_or_else(|| Error::OutOfRange {
            what: "parameter for numeric evaluation",
            detail: v.to_string(),
        })
    };
    let (c, p, q, r) = (small(&spec.c)?, small(&spec.p)?, small(&spec.q)?, small(&spec.r)?);
    let (u, v) = crate::lattice::uv_shift(spec, &int(t));
    let (u, v) = (small(&u)?, small(&v)?);
    let tr = t * r;
    let x = (tr - u - v) as f64;
    let (cf, pf, qf) = (c as f64, p as f64, q as f64);
    let c2pq = cf * cf * pf * qf;

    let mut total = x * x / (2.0 * c2pq)
        + 0.5 * x * (1.0 / (cf * pf) + 1.0 / (cf * qf) + 1.0 / c2pq)
        + 0.25 * (1.0 + 1.0 / (cf * pf) + 1.0 / (cf * qf))
        + (pf / qf + qf / pf + 1.0 / c2pq) / 12.0;

    let coeff = 1.0 / (2.0 * cf * pf) + 1.0 / (2.0 * cf * qf) + x / c2pq;
    let mut first = Complex64::new(0.0, 0.0);
    let mut second = Complex64::new(0.0, 0.0);
    for k in 1..c {
        let lambda = root_of_unity(c, k);
        let one_minus = 1.0 - lambda;
        first += root_of_unity(c, k * (-tr).rem_euclid(c)) / one_minus;
        second += root_of_unity(c, k * (1 - tr).rem_euclid(c)) / (one_minus * one_minus);
    }
    let mixed = roots_sum_dedekind(c, p, q, tr - v)? + roots_sum_dedekind(c, q, p, tr - u)?;
    let rest = coeff * first - second / c2pq + mixed;
    total += rest.re;
    Ok(total)
}

/// Convenience for tests and suites: `|z - exact|` with the imaginary part
/// folded in.
pub fn deviation(z: ComplexApprox, exact: &Rational) -> f64 {
    (z - Complex64::new(to_float_approx(exact), 0.0)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    fn close(z: ComplexApprox, exact: &Rational) -> bool {
        deviation(z, exact) < TOL
    }

    #[test]
    fn simple_sum_examples() {
        assert_eq!(roots_sum_simple(1, 5), Complex64::new(0.0, 0.0));
        assert!(close(roots_sum_simple(2, 0), &rat(-1, 4)));
        assert_eq!(roots_sum_simple_closed(2, 0), rat(-1, 4));
        assert!(close(roots_sum_simple(5, 3), &(sawtooth(&rat(-3, 5)) + rat(1, 10))));
    }

    #[test]
    fn keycor_examples() {
        assert_eq!(keycor_closed(1, 5, 3, 0).unwrap(), rat(2, 5));
        assert!(close(roots_sum_keycor(1, 5, 3, 0).unwrap(), &rat(2, 5)));
        assert_eq!(keycor_closed(2, 3, 1, 1).unwrap(), rat(0, 1));
        assert!(close(roots_sum_keycor(2, 3, 1, 1).unwrap(), &rat(0, 1)));
        let closed = keycor_closed(2, 3, 1, 4).unwrap();
        // q^{-1} = 1 mod 3: -((-4/6)) - 1/6 = -((1/3)) - 1/6 = 1/6 - 1/6 = 0
        assert_eq!(closed, rat(0, 1));
        assert!(close(roots_sum_keycor(2, 3, 1, 4).unwrap(), &closed));
        assert!(roots_sum_keycor(1, 4, 2, 0).is_err());
    }

    #[test]
    fn dedekind_sum_examples() {
        assert_eq!(roots_sum_dedekind(1, 1, 1, 0).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(dedekind_closed(1, 1, 1, 0).unwrap(), rat(0, 1));
        let closed = dedekind_closed(1, 5, 3, 0).unwrap();
        assert_eq!(closed, rat(-1, 4) + rat(1, 2) - rat(1, 20));
        assert!(close(roots_sum_dedekind(1, 5, 3, 0).unwrap(), &closed));
        let closed = dedekind_closed(2, 3, 5, 4).unwrap();
        assert!(close(roots_sum_dedekind(2, 3, 5, 4).unwrap(), &closed));
    }

    #[test]
    fn convolution_examples() {
        let one = Complex64::new(1.0, 0.0);
        let (l, r) = convolution_check(1, &[one], &[one], 0).unwrap();
        assert!((l - one).norm() < 1e-15 && (r - one).norm() < 1e-15);
        for t in -5..9 {
            let (l, r) = convolution_check(4, &[one; 4], &[one; 4], t).unwrap();
            assert!((l - r).norm() < 1e-12);
        }
        let a: Vec<_> = (0..6).map(|k| Complex64::new(k as f64 * 0.7 - 1.0, 0.3 * k as f64)).collect();
        let b: Vec<_> = (0..6).map(|k| Complex64::new(1.5 - k as f64, (k * k) as f64 * 0.1)).collect();
        let (l, r) = convolution_check(6, &a, &b, 3).unwrap();
        assert!((l - r).norm() < 1e-10);
        assert!(matches!(
            convolution_check(3, &a, &b, 0),
            Err(Error::LengthMismatch { expected: 3, got: 6 })
        ));
    }

    #[test]
    fn laurent_examples() {
        let (res, cst) = laurent_leading_pair(1, 1, 0);
        assert!((res - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!(cst.norm() < 1e-15);
        let (res, cst) = laurent_leading_pair(2, 3, 1);
        assert!((res - Complex64::new(1.0 / 6.0, 0.0)).norm() < 1e-15);
        assert!((cst - Complex64::new(5.0 / 12.0, 0.0)).norm() < 1e-15);
        let (res, cst) = laurent_leading_pair(4, 1, 1);
        assert!((res - Complex64::new(0.0, -0.25)).norm() < 1e-15);
        assert!((cst - Complex64::new(0.375, 0.0)).norm() < 1e-15);
        for (a, b, k) in [(1, 1, 0), (2, 3, 1), (4, 1, 1), (5, 4, 3)] {
            let (r0, c0) = laurent_leading_pair(a, b, k);
            let (r1, c1) = laurent_leading_pair_numeric(a, b, k);
            assert!((r0 - r1).norm() < TOL, "{a} {b} {k}");
            assert!((c0 - c1).norm() < TOL, "{a} {b} {k}");
        }
    }

    #[test]
    fn gessel_small() {
        for (p, q) in [(1, 1), (2, 3), (3, 5), (4, 7)] {
            for t in 1..=p + q {
                let lhs = gessel_fourier_lhs(p, q, t).unwrap();
                assert!(deviation(lhs, &gessel_fourier_rhs(p, q, t).unwrap()) < 1e-9);
            }
        }
    }
}
