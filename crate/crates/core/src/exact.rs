//! Exact scalars and the elementary number-theoretic functions everything
//! else is built from.
//!
//! [`Integer`] and [`Rational`] are arbitrary precision and always stored in
//! lowest terms with a positive denominator, so `==` is structural equality.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub fn int(n: i64) -> Integer {
    Integer::from(n)
}

/// `n / d`, reduced. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(int(n), int(d))
}

pub fn rat_from_int(n: &Integer) -> Rational {
    Rational::from_integer(n.clone())
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Greatest integer `<= x`.
pub fn floor(x: &Rational) -> Integer {
    x.numer().div_floor(x.denom())
}

/// `x - floor(x)`, always in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    Rational::new(x.numer().mod_floor(x.denom()), x.denom().clone())
}

/// The sawtooth `((x)) = x - floor(x) - 1/2`, which is `-1/2` at integers.
pub fn sawtooth(x: &Rational) -> Rational {
    frac(x) - rat(1, 2)
}

/// The starred sawtooth: `0` at integers, `sawtooth(x)` elsewhere.
pub fn sawtooth_star(x: &Rational) -> Rational {
    if is_integral(x) {
        Rational::zero()
    } else {
        sawtooth(x)
    }
}

/// Periodic second Bernoulli polynomial.
pub fn psi2(x: &Rational) -> Rational {
    let f = frac(x);
    &f * &f - &f + rat(1, 6)
}

/// Returns `(g, s, u)` with `g = gcd(a, b) >= 0` and `s*a + u*b = g`.
pub fn extended_gcd(a: &Integer, b: &Integer) -> (Integer, Integer, Integer) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (Integer::one(), Integer::zero());
    let (mut old_u, mut u) = (Integer::zero(), Integer::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_u = &old_u - &q * &u;
        old_u = std::mem::replace(&mut u, next_u);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_u)
    } else {
        (old_r, old_s, old_u)
    }
}

/// The residue `w` in `[0, p)` with `q*w = 1 (mod p)`. For `p = 1` this is 0.
pub fn mod_inverse(q: &Integer, p: &Integer) -> Result<Integer> {
    if *p < Integer::one() {
        return Err(Error::InvalidModulus(p.to_string()));
    }
    let (g, s, _) = extended_gcd(q, p);
    if !g.is_one() {
        return Err(Error::not_coprime(q, p, &g));
    }
    Ok(s.mod_floor(p))
}

/// Lossy conversion, only meant for comparisons against floating-point sums.
pub fn to_float_approx(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `[+-]digits[/digits]` with a nonzero denominator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix(['+', '-']).unwrap_or(num);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let numer = Integer::from_str(num.strip_prefix('+').unwrap_or(num)).map_err(|_| err())?;
    let denom = match den {
        None => Integer::one(),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let d = Integer::from_str(d).map_err(|_| err())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            d
        }
    };
    Ok(Rational::new(numer, denom))
}

pub fn parse_integer(s: &str) -> Result<Integer> {
    let r = parse_rational(s)?;
    if !s.contains('/') && is_integral(&r) {
        Ok(r.to_integer())
    } else {
        Err(Error::Parse(format!("not an integer: {:?}", s.trim())))
    }
}

/// Text form used by every command: `-3/4`, `5`.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}
