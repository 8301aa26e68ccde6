use num_integer::Integer as _;
use num_traits::ToPrimitive;

use super::{area, CountingPlan, RationalPolygon};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_from_int, Integer, Rational};

/// Largest period `ehrhart` will interpolate; each residue class costs four
/// full counts.
pub const MAX_EHRHART_PERIOD: u64 = 100_000;

/// `L(t) = c2 t^2 + c1[t mod period] t + c0[t mod period]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiPolynomial2 {
    pub period: Integer,
    pub c2: Rational,
    pub c1: Vec<Rational>,
    pub c0: Vec<Rational>,
}

impl QuasiPolynomial2 {
    /// Any integer `t`, negative included.
    pub fn eval(&self, t: &Integer) -> Rational {
        let idx = t
            .mod_floor(&self.period)
            .to_usize()
            .expect("residue fits in usize");
        let tr = rat_from_int(t);
        &self.c2 * &tr * &tr + &self.c1[idx] * &tr + &self.c0[idx]
    }

    /// True when every coefficient list is constant.
    pub fn is_polynomial(&self) -> bool {
        self.c1.iter().all(|c| *c == self.c1[0]) && self.c0.iter().all(|c| *c == self.c0[0])
    }
}

/// Interpolates the closure counting function on each residue class modulo
/// the vertex denominator, from the three smallest `t >= 1` in the class,
/// and checks a fourth class member.
pub fn ehrhart(polygon: &RationalPolygon) -> Result<QuasiPolynomial2> {
    let period = polygon.denominator();
    let pi = match period.to_u64() {
        Some(p) if p <= MAX_EHRHART_PERIOD => p,
        _ => {
            return Err(Error::OutOfRange {
                what: "quasipolynomial period",
                detail: format!("{period} exceeds {MAX_EHRHART_PERIOD}"),
            })
        }
    };
    let plan = CountingPlan::new(polygon);
    let target = area(polygon);
    let h = rat_from_int(&period);
    let mut c1 = Vec::with_capacity(pi as usize);
    let mut c0 = Vec::with_capacity(pi as usize);
    for residue in 0..pi {
        let t0 = if residue == 0 { pi } else { residue };
        let ts: Vec<Integer> = (0..4).map(|k| Integer::from(t0 + k * pi)).collect();
        let ys: Vec<Rational> = ts.iter().map(|t| rat_from_int(&plan.closure_value(t))).collect();
        let x0 = rat_from_int(&ts[0]);
        let x1 = rat_from_int(&ts[1]);
        let a = (&ys[2] - &ys[1] * rat(2, 1) + &ys[0]) / (&h * &h * rat(2, 1));
        let b = (&ys[1] - &ys[0]) / &h - &a * (&x0 + &x1);
        let c = &ys[0] - &a * &x0 * &x0 - &b * &x0;
        let x3 = rat_from_int(&ts[3]);
        let predicted = &a * &x3 * &x3 + &b * &x3 + &c;
        if predicted != ys[3] || a != target {
            return Err(Error::FitMismatch {
                residue: residue as usize,
                t: ts[3].to_string(),
            });
        }
        c1.push(b);
        c0.push(c);
    }
    Ok(QuasiPolynomial2 {
        period,
        c2: target,
        c1,
        c0,
    })
}
