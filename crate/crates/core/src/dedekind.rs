//! Dedekind-type sums.
//!
//! The workhorse is the Dedekind-Rademacher sum
//!
//! ```text
//! sigma(a, b, t) = sum_{k=0}^{b-1} ((a k + t) / b)) ((k / b))
//! ```
//!
//! with the unstarred sawtooth. [`sigma_naive`] evaluates it by direct
//! summation in O(b); [`sigma_fast`] runs a Euclidean recursion on `(a, b)`
//! driven by the real-parameter reciprocity law and takes O(log b) steps.
//!
//! Rademacher's own sums are provided as well: [`rademacher_s`] uses the
//! starred sawtooth, [`frak_s`] the unstarred one. The classical Dedekind sum
//! is `rademacher_s(a, b, 0, 0)`.

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    floor, frac, int, is_integral, mod_inverse, psi2, rat, rat_from_int, sawtooth,
    sawtooth_star, Integer, Rational,
};

fn check_modulus(b: &Integer) -> Result<()> {
    if *b < Integer::one() {
        Err(Error::InvalidModulus(b.to_string()))
    } else {
        Ok(())
    }
}

fn check_coprime(a: &Integer, b: &Integer) -> Result<()> {
    let g = a.gcd(b);
    if g.is_one() {
        Ok(())
    } else {
        Err(Error::not_coprime(a, b, &g))
    }
}

fn check_positive(what: &'static str, v: &Integer) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            detail: format!("{v} < 1"),
        })
    }
}

fn summation_length(b: &Integer) -> Result<u64> {
    b.to_u64().ok_or_else(|| Error::OutOfRange {
        what: "modulus for direct summation",
        detail: b.to_string(),
    })
}

/// Direct summation of the defining sum.
///
/// Writing `t = n + f` with `0 <= f < 1` and `m_k = (a k + n) mod b`, each term
/// is `(2(m_k + f) - b)(2k - b) / (4 b^2)`. Summed over `k` the numerator is
/// `den(f) (4 sum m_k k - 2 b sum m_k + b^2) - 2 b num(f)`, so only the two
/// sums over `m_k` need the loop.
pub fn sigma_naive(a: &Integer, b: &Integer, t: &Rational) -> Result<Rational> {
    check_modulus(b)?;
    let len = summation_length(b)?;
    let n = floor(t);
    let f = frac(t);
    let a_red = a.mod_floor(b);
    let n_red = n.mod_floor(b);

    let (sum_mk, sum_m) = match (b.to_u64(), a_red.to_u64(), n_red.to_u64()) {
        (Some(bs), Some(a_s), Some(ns)) if bs < (1 << 32) => {
            // m_k k < 2^64 and b terms stay below 2^96.
            let (mut mk, mut ms): (u128, u128) = (0, 0);
            let mut m = ns;
            for k in 0..bs {
                mk += (m * k) as u128;
                ms += m as u128;
                m += a_s;
                if m >= bs {
                    m -= bs;
                }
            }
            (Integer::from(mk), Integer::from(ms))
        }
        _ => {
            let (mut mk, mut ms) = (Integer::zero(), Integer::zero());
            let mut m = n_red.clone();
            for k in 0..len {
                mk += &m * Integer::from(k);
                ms += &m;
                m += &a_red;
                if m >= *b {
                    m -= b;
                }
            }
            (mk, ms)
        }
    };
    let base = int(4) * sum_mk - int(2) * b * sum_m + b * b;
    let total = f.denom() * base - int(2) * b * f.numer();
    Ok(Rational::new(total, int(4) * b * b * f.denom()))
}

/// `sigma(1, p, t) = -p/24 + 1/(6p) + (p/2) ((t/p))^2`, valid for integer `t`.
pub fn sigma_one_closed(p: &Integer, t: &Rational) -> Result<Rational> {
    check_modulus(p)?;
    let pr = rat_from_int(p);
    let s = sawtooth(&(t / &pr));
    Ok(-&pr / rat(24, 1) + (rat(6, 1) * &pr).recip() + &pr / rat(2, 1) * &s * &s)
}

/// Result of a fast evaluation together with the number of reciprocity steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaTrace {
    pub value: Rational,
    pub reciprocity_steps: usize,
}

/// `sigma(a, b, t)` in O(log b) arithmetic steps.
///
/// Requires `a mod b` to be 0, 1, or coprime to `b`.
pub fn sigma_fast(a: &Integer, b: &Integer, t: &Rational) -> Result<Rational> {
    sigma_fast_traced(a, b, t).map(|tr| tr.value)
}

pub fn sigma_fast_traced(a: &Integer, b: &Integer, t: &Rational) -> Result<SigmaTrace> {
    check_modulus(b)?;
    let mut a = a.mod_floor(b);
    if !a.is_zero() && !a.is_one() {
        check_coprime(&a, b)?;
    }
    let mut b = b.clone();

    // sigma(a, b, t) = sigma(a, b, [t]) - {t} / (2b), then reduce [t] mod b.
    let shift = -frac(t) / rat_from_int(&(int(2) * &b));
    let mut n = floor(t).mod_floor(&b);

    // Level k evaluates sigma(a_k, b_k, n_k); reciprocity with p = b_k,
    // q = a_k gives sigma(a_k, b_k, n_k) = N_k / (12 b_k a_k) - sigma at
    // level k + 1, where b_{k+1} = a_k.
    let mut levels: Vec<(Integer, Integer)> = Vec::new();
    let base = loop {
        if a.is_zero() {
            break -sawtooth(&Rational::new(n.clone(), b.clone())) / rat(2, 1);
        }
        if a.is_one() {
            break sigma_one_closed(&b, &rat_from_int(&n))?;
        }
        // Representative t' in [1, b] with -t' = n (mod b).
        let mut t_rep = (-&n).mod_floor(&b);
        if t_rep.is_zero() {
            t_rep = b.clone();
        }
        let numer = gessel_rhs_numer(&b, &a, &t_rep);
        let next_b = a.clone();
        a = b.mod_floor(&next_b);
        n = (-t_rep).mod_floor(&next_b);
        levels.push((std::mem::replace(&mut b, next_b), numer));
    };

    // 12 b_k^2 sigma at level k is an integer V_k, and
    // V_k = (b_k b_{k+1} N_k - b_k^2 V_{k+1}) / b_{k+1}^2 exactly.
    let scaled = &base * rat_from_int(&(int(12) * &b * &b));
    debug_assert!(scaled.is_integer());
    let mut v = scaled.to_integer();
    let mut below = b;
    let steps = levels.len();
    for (bk, numer) in levels.into_iter().rev() {
        let bk2 = &bk * &bk;
        v = (&bk * &below * numer - &bk2 * v) / (&below * &below);
        below = bk;
    }
    Ok(SigmaTrace {
        value: Rational::new(v, int(12) * &below * &below) + shift,
        reciprocity_steps: steps,
    })
}

/// The Gessel right-hand side for integer `t`, assembled over the common
/// denominator `12 p q`.
#[cfg(test)]
fn gessel_rhs_integral(p: &Integer, q: &Integer, t: &Integer) -> Rational {
    Rational::new(gessel_rhs_numer(p, q, t), int(12) * p * q)
}

/// Numerator of [`gessel_rhs_integral`] over `12 p q`.
fn gessel_rhs_numer(p: &Integer, q: &Integer, t: &Integer) -> Integer {
    let six = int(6);
    let twelve = int(12);
    let pq = p * q;
    let mp = (-t).mod_floor(p);
    let mq = (-t).mod_floor(q);
    &six * t * t - &six * t * (p + q + 1u32) + int(15) * &pq + p * p + q * q + 1u32
        - &twelve * q * mp
        - &twelve * p * mq
}

/// Dispatches to [`sigma_fast`] when the arguments allow it, otherwise sums.
pub fn sigma(a: &Integer, b: &Integer, t: &Rational) -> Result<Rational> {
    check_modulus(b)?;
    let a_red = a.mod_floor(b);
    if a_red.is_zero() || a_red.is_one() || a_red.gcd(b).is_one() {
        sigma_fast(a, b, t)
    } else {
        sigma_naive(a, b, t)
    }
}

/// Rademacher's sum with the starred sawtooth:
/// `sum_{k=0}^{b-1} ((a(k+y)/b + x))* (((k+y)/b))*`.
pub fn rademacher_s(a: &Integer, b: &Integer, x: &Rational, y: &Rational) -> Result<Rational> {
    check_modulus(b)?;
    let len = summation_length(b)?;
    let (ar, br) = (rat_from_int(a), rat_from_int(b));
    Ok((0..len)
        .map(|k| {
            let ky = rat_from_int(&Integer::from(k)) + y;
            sawtooth_star(&(&ar * &ky / &br + x)) * sawtooth_star(&(&ky / &br))
        })
        .sum())
}

/// Classical Dedekind sum `s(a, b)`.
pub fn dedekind_s(a: &Integer, b: &Integer) -> Result<Rational> {
    rademacher_s(a, b, &Rational::zero(), &Rational::zero())
}

/// The same sum with the unstarred sawtooth.
pub fn frak_s(a: &Integer, b: &Integer, x: &Rational, y: &Rational) -> Result<Rational> {
    check_modulus(b)?;
    let len = summation_length(b)?;
    let (ar, br) = (rat_from_int(a), rat_from_int(b));
    Ok((0..len)
        .map(|k| {
            let ky = rat_from_int(&Integer::from(k)) + y;
            sawtooth(&(&ar * &ky / &br + x)) * sawtooth(&(&ky / &br))
        })
        .sum())
}

/// `frak_s` through `sigma`. The sum is 1-periodic in `y`; with `y' = {y}`,
/// `T = a y' + b x` and `g = gcd(a, b)` it equals
/// `sigma(a, b, T) + (y'/b) g ((T/g))`.
pub fn frak_s_via_sigma(
    a: &Integer,
    b: &Integer,
    x: &Rational,
    y: &Rational,
) -> Result<Rational> {
    check_modulus(b)?;
    let yf = frac(y);
    let big_t = rat_from_int(a) * &yf + rat_from_int(b) * x;
    let g = rat_from_int(&a.gcd(b));
    Ok(sigma(a, b, &big_t)? + &yf / rat_from_int(b) * &g * sawtooth(&(&big_t / &g)))
}

/// The terms where the starred and unstarred sawtooth differ in
/// `sigma(a, b, t)` versus `S(a, b; t/b, 0)`, excluding `k = 0`:
/// `-1/2 * sum_{0 < k < b, b | a k + t} ((k/b))`. Zero unless `t` is an integer.
pub fn conv_correction(a: &Integer, b: &Integer, t: &Rational) -> Result<Rational> {
    check_modulus(b)?;
    if !is_integral(t) {
        return Ok(Rational::zero());
    }
    let t = t.to_integer();
    let g = a.gcd(b);
    if !t.is_multiple_of(&g) {
        return Ok(Rational::zero());
    }
    let step = b / &g;
    let inv = mod_inverse(&(a / &g), &step)?;
    let k0 = (-(&t / &g) * inv).mod_floor(&step);
    let count = summation_length(&g)?;
    let br = rat_from_int(b);
    let mut acc = Rational::zero();
    let mut k = k0;
    for _ in 0..count {
        if !k.is_zero() {
            acc += sawtooth(&(rat_from_int(&k) / &br));
        }
        k += &step;
    }
    Ok(-acc / rat(2, 1))
}

/// `S(a, b; t/b, 0) - ((t/b))/2` plus the explicit [`conv_correction`].
pub fn sigma_from_s(a: &Integer, b: &Integer, t: &Rational) -> Result<Rational> {
    check_modulus(b)?;
    let tb = t / rat_from_int(b);
    Ok(rademacher_s(a, b, &tb, &Rational::zero())? - sawtooth(&tb) / rat(2, 1)
        + conv_correction(a, b, t)?)
}

/// `-1/4 + (a/b + 1/(ab) + b/a) / 12`.
pub fn dedekind_reciprocity_rhs(a: &Integer, b: &Integer) -> Result<Rational> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    check_coprime(a, b)?;
    Ok(integer_branch(a, b))
}

fn integer_branch(a: &Integer, b: &Integer) -> Rational {
    let (ar, br) = (rat_from_int(a), rat_from_int(b));
    rat(-1, 4) + (&ar / &br + (&ar * &br).recip() + &br / &ar) / rat(12, 1)
}

/// Right-hand side of `S(a,b;x,y) + S(b,a;y,x)`.
pub fn rademacher_reciprocity_rhs(
    a: &Integer,
    b: &Integer,
    x: &Rational,
    y: &Rational,
) -> Result<Rational> {
    check_positive("a", a)?;
    check_positive("b", b)?;
    check_coprime(a, b)?;
    if is_integral(x) && is_integral(y) {
        return Ok(integer_branch(a, b));
    }
    let (ar, br) = (rat_from_int(a), rat_from_int(b));
    let mixed = &ar * y + &br * x;
    Ok(sawtooth_star(x) * sawtooth_star(y)
        + (&ar / &br * psi2(y) + (&ar * &br).recip() * psi2(&mixed) + &br / &ar * psi2(x))
            / rat(2, 1))
}

fn check_t_window(p: &Integer, q: &Integer, t: &Rational) -> Result<()> {
    let upper = rat_from_int(&(p + q));
    if *t < Rational::one() || *t > upper {
        Err(Error::OutOfRange {
            what: "t",
            detail: format!("{t} not in [1, {upper}]"),
        })
    } else {
        Ok(())
    }
}

/// Right-hand side of `sigma(q, p, -t) + sigma(p, q, -t)` for rational
/// `1 <= t <= p + q`.
pub fn unified_reciprocity_rhs(p: &Integer, q: &Integer, t: &Rational) -> Result<Rational> {
    check_positive("p", p)?;
    check_positive("q", q)?;
    check_coprime(p, q)?;
    check_t_window(p, q, t)?;
    let (pr, qr) = (rat_from_int(p), rat_from_int(q));
    let pq = &pr * &qr;
    let fl = rat_from_int(&floor(&-t));
    let inv_sum = pr.recip() + qr.recip();
    Ok(&fl * &fl / (rat(2, 1) * &pq)
        + &fl / rat(2, 1) * (&inv_sum + pq.recip())
        + rat(1, 4)
        + (&pr / &qr + pq.recip() + &qr / &pr) / rat(12, 1)
        - sawtooth(&(&fl / &pr))
        - sawtooth(&(&fl / &qr))
        - sawtooth(&-t) / rat(2, 1) * &inv_sum
        - (rat(4, 1) * &pr).recip()
        - (rat(4, 1) * &qr).recip())
}

/// Right-hand side of `sigma(q, p, -t) + sigma(p, q, -t)` for integer
/// `1 <= t <= p + q`.
pub fn gessel_sigma_rhs(p: &Integer, q: &Integer, t: &Integer) -> Result<Rational> {
    check_positive("p", p)?;
    check_positive("q", q)?;
    check_coprime(p, q)?;
    let tr = rat_from_int(t);
    check_t_window(p, q, &tr)?;
    let (pr, qr) = (rat_from_int(p), rat_from_int(q));
    let pq = &pr * &qr;
    Ok(&tr * &tr / (rat(2, 1) * &pq) - &tr / rat(2, 1) * (pr.recip() + qr.recip() + pq.recip())
        + rat(1, 4)
        + (&pr / &qr + pq.recip() + &qr / &pr) / rat(12, 1)
        - sawtooth(&(-&tr / &pr))
        - sawtooth(&(-&tr / &qr)))
}
