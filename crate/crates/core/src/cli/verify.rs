//! Seeded randomized verification suites. Trial `i` of a run draws all of
//! its parameters from `ChaCha8Rng::seed_from_u64(seed)` switched to stream
//! `i`, so reports do not depend on scheduling.

use std::fmt::Write as _;

use num_integer::Integer as _;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dedekind;
use crate::exact::{int, rat, rat_from_int, Integer, Rational};
use crate::fourier;
use crate::lattice::{
    brute_force_count, count_right_triangle_closure, count_right_triangle_interior, CountMode,
    RationalPoint, RightTriangleSpec,
};
use crate::polygon::{self, area, CountingPlan, RationalPolygon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Dedekind,
    Rademacher,
    Unified,
    Gessel,
    Fourier,
    OracleTriangle,
    OraclePolygon,
    Ehrhart,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Dedekind => "dedekind",
            Suite::Rademacher => "rademacher",
            Suite::Unified => "unified",
            Suite::Gessel => "gessel",
            Suite::Fourier => "fourier",
            Suite::OracleTriangle => "oracle-triangle",
            Suite::OraclePolygon => "oracle-polygon",
            Suite::Ehrhart => "ehrhart",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySuiteConfig {
    pub suite: Suite,
    pub trials: u64,
    pub seed: u64,
    pub max_size: u64,
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub passed: bool,
    pub instance: String,
    pub deviation: f64,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub passed: u64,
    pub total: u64,
    pub first_failure: Option<(u64, String)>,
    pub max_deviation: Option<f64>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    pub fn render(&self, config: &VerifySuiteConfig) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite: {}", config.suite.name());
        let _ = writeln!(s, "seed: {}", config.seed);
        let _ = writeln!(s, "max-size: {}", config.max_size);
        let _ = writeln!(s, "{}/{} pass", self.passed, self.total);
        if let Some(dev) = self.max_deviation {
            let _ = writeln!(s, "max deviation: {dev:.3e}");
        }
        if let Some((i, instance)) = &self.first_failure {
            let _ = writeln!(s, "first failure: trial {i}: {instance}");
            let _ = writeln!(
                s,
                "reproduce: ratlattice verify --suite {} --trials {} --seed {} --max-size {}",
                config.suite.name(),
                i + 1,
                config.seed,
                config.max_size
            );
        }
        s
    }
}

/// The generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn run_suite(config: &VerifySuiteConfig) -> SuiteReport {
    let trials: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(config.seed, i);
            run_trial(config.suite, &mut rng, config.max_size)
        })
        .collect();
    let passed = trials.iter().filter(|t| t.passed).count() as u64;
    let first_failure = trials
        .iter()
        .enumerate()
        .find(|(_, t)| !t.passed)
        .map(|(i, t)| (i as u64, t.instance.clone()));
    let max_deviation = (config.suite == Suite::Fourier)
        .then(|| trials.iter().map(|t| t.deviation).fold(0.0, f64::max));
    SuiteReport {
        passed,
        total: config.trials,
        first_failure,
        max_deviation,
    }
}

pub fn run_trial(suite: Suite, rng: &mut ChaCha8Rng, max_size: u64) -> Trial {
    let outcome = match suite {
        Suite::Dedekind => dedekind_trial(rng, max_size),
        Suite::Rademacher => rademacher_trial(rng, max_size),
        Suite::Unified => unified_trial(rng, max_size),
        Suite::Gessel => gessel_trial(rng, max_size),
        Suite::Fourier => fourier_trial(rng, max_size),
        Suite::OracleTriangle => oracle_triangle_trial(rng, max_size),
        Suite::OraclePolygon => oracle_polygon_trial(rng, max_size),
        Suite::Ehrhart => ehrhart_trial(rng, max_size),
    };
    match outcome {
        Ok(t) => t,
        Err((instance, e)) => Trial {
            passed: false,
            instance: format!("{instance}: {e}"),
            deviation: f64::INFINITY,
        },
    }
}

type TrialResult = std::result::Result<Trial, (String, crate::Error)>;

fn exact(passed: bool, instance: String) -> TrialResult {
    Ok(Trial {
        passed,
        instance,
        deviation: 0.0,
    })
}

/// Bound above which the term-by-term sums are skipped.
const NAIVE_LIMIT: u64 = 5_000;

/// Uniform coprime pair in `[1, max]^2`.
pub fn coprime_pair(rng: &mut impl Rng, max: u64) -> (u64, u64) {
    loop {
        let a = rng.random_range(1..=max);
        let b = rng.random_range(1..=max);
        if a.gcd(&b) == 1 {
            return (a, b);
        }
    }
}

/// `n / d` with `d` in `[1, max_den]` and the value in `[lo, hi]`.
pub fn random_rational(rng: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Rational {
    let d = rng.random_range(1..=max_den);
    let n = rng.random_range(lo.saturating_mul(d)..=hi.saturating_mul(d));
    rat(n, d)
}

fn big(n: u64) -> Integer {
    Integer::from(n)
}

fn dedekind_trial(rng: &mut ChaCha8Rng, m: u64) -> TrialResult {
    let (a, b) = coprime_pair(rng, m);
    let bound = b.min(1 << 40) as i64;
    let t = random_rational(rng, -2 * bound, 2 * bound, 12);
    let instance = format!("a={a} b={b} t={t}");
    let run = || -> crate::Result<bool> {
        let (ai, bi) = (big(a), big(b));
        let quarter = rat(1, 4);
        // s(a, b) = sigma(a, b, 0) - 1/4 for coprime a, b.
        let s_ab = dedekind::sigma_fast(&ai, &bi, &Rational::from_integer(int(0)))? - &quarter;
        let s_ba = dedekind::sigma_fast(&bi, &ai, &Rational::from_integer(int(0)))? - &quarter;
        let mut ok = &s_ab + &s_ba == dedekind::dedekind_reciprocity_rhs(&ai, &bi)?;
        if a.max(b) <= NAIVE_LIMIT {
            ok &= dedekind::dedekind_s(&ai, &bi)? == s_ab;
            ok &= dedekind::sigma_fast(&ai, &bi, &t)? == dedekind::sigma_naive(&ai, &bi, &t)?;
        }
        Ok(ok)
    };
    let ok = run().map_err(|e| (instance.clone(), e))?;
    exact(ok, instance)
}

fn rademacher_trial(rng: &mut ChaCha8Rng, m: u64) -> TrialResult {
    let (a, b) = coprime_pair(rng, m.min(200));
    let x = random_rational(rng, -2, 2, 6);
    let y = random_rational(rng, -2, 2, 6);
    let instance = format!("a={a} b={b} x={x} y={y}");
    let (ai, bi) = (big(a), big(b));
    let run = || -> crate::Result<bool> {
        let lhs = dedekind::rademacher_s(&ai, &bi, &x, &y)? + dedekind::rademacher_s(&bi, &ai, &y, &x)?;
        Ok(lhs == dedekind::rademacher_reciprocity_rhs(&ai, &bi, &x, &y)?)
    };
    let ok = run().map_err(|e| (instance.clone(), e))?;
    exact(ok, instance)
}

fn unified_trial(rng: &mut ChaCha8Rng, m: u64) -> TrialResult {
    let (p, q) = coprime_pair(rng, m);
    let den = rng.random_range(1..=12u64);
    let num = rng.random_range(den..=(p + q) * den);
    let t = Rational::new(big(num), big(den));
    let instance = format!("p={p} q={q} t={t}");
    let (pi, qi) = (big(p), big(q));
    let run = || -> crate::Result<bool> {
        let lhs = dedekind::sigma_fast(&qi, &pi, &-&t)? + dedekind::sigma_fast(&pi, &qi, &-&t)?;
        let mut ok = lhs == dedekind::unified_reciprocity_rhs(&pi, &qi, &t)?;
        if p.max(q) <= NAIVE_LIMIT {
            ok &= lhs == dedekind::sigma_naive(&qi, &pi, &-&t)? + dedekind::sigma_naive(&pi, &qi, &-&t)?;
        }
        Ok(ok)
    };
    let ok = run().map_err(|e| (instance.clone(), e))?;
    exact(ok, instance)
}

fn gessel_trial(rng: &mut ChaCha8Rng, m: u64) -> TrialResult {
    let (p, q) = coprime_pair(rng, m);
    let t = rng.random_range(1..=p + q);
    let instance = format!("p={p} q={q} t={t}");
    let (pi, qi, ti) = (big(p), big(q), big(t));
    let run = || -> crate::Result<bool> {
        let neg = -rat_from_int(&ti);
        let lhs = dedekind::sigma_fast(&qi, &pi, &neg)? + dedekind::sigma_fast(&pi, &qi, &neg)?;
        let mut ok = lhs == dedekind::gessel_sigma_rhs(&pi, &qi, &ti)?;
        if p.max(q) <= NAIVE_LIMIT {
            ok &= lhs == dedekind::sigma_naive(&qi, &pi, &neg)? + dedekind::sigma_naive(&pi, &qi, &neg)?;
        }
        Ok(ok)
    };
    let ok = run().map_err(|e| (instance.clone(), e))?;
    exact(ok, instance)
}

pub const FOURIER_TOL: f64 = 1e-10;
pub const GESSEL_FOURIER_TOL: f64 = 1e-9;
pub const ROOT_FORM_TOL: f64 = 1e-8;

fn fourier_trial(rng: &mut ChaCha8Rng, m: u64) -> TrialResult {
    let small = m.min(12) as i64;
    let c = rng.random_range(1..=small);
    let (p, q) = coprime_pair(rng, small as u64);
    let (p, q) = (p as i64, q as i64);
    let t_simple = rng.random_range(-2 * p..=2 * p);
    let t_key = rng.random_range(0..=2 * c * p);
    let t_ded = c * rng.random_range(0..=2 * p);
    let t_gessel = rng.random_range(1..=p + q);
    let n = rng.random_range(1..=small) as usize;
    let coeffs: Vec<fourier::ComplexApprox> = (0..2 * n)
        .map(|_| fourier::ComplexApprox::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let t_conv = rng.random_range(-2 * small..=2 * small);
    let lambda = rng.random_range(0..c);
    let r = rng.random_range(0..=2 * c * p.max(q));
    let t_root = rng.random_range(1..=5i64);
    let instance = format!(
        "c={c} p={p} q={q} t=({t_simple}, {t_key}, {t_ded}, {t_gessel}) N={n} t_conv={t_conv} lambda={lambda} r={r} t_root={t_root}"
    );

    let run = || -> crate::Result<(bool, f64)> {
        let mut worst: f64 = 0.0;
        let mut ok = true;
        let mut check = |dev: f64, tol: f64| {
            worst = worst.max(dev);
            ok &= dev < tol;
        };
        check(
            fourier::deviation(fourier::roots_sum_simple(p, t_simple), &fourier::roots_sum_simple_closed(p, t_simple)),
            FOURIER_TOL,
        );
        check(
            fourier::deviation(fourier::roots_sum_keycor(c, p, q, t_key)?, &fourier::keycor_closed(c, p, q, t_key)?),
            FOURIER_TOL,
        );
        check(
            fourier::deviation(fourier::roots_sum_dedekind(c, p, q, t_ded)?, &fourier::dedekind_closed(c, p, q, t_ded)?),
            FOURIER_TOL,
        );
        check(
            fourier::deviation(fourier::gessel_fourier_lhs(p, q, t_gessel)?, &fourier::gessel_fourier_rhs(p, q, t_gessel)?),
            GESSEL_FOURIER_TOL,
        );
        let (lhs, rhs) = fourier::convolution_check(n, &coeffs[..n], &coeffs[n..], t_conv)?;
        check((lhs - rhs).norm(), FOURIER_TOL);
        let (res, con) = fourier::laurent_leading_pair(c, p, lambda);
        let (res_n, con_n) = fourier::laurent_leading_pair_numeric(c, p, lambda);
        check((res - res_n).norm().max((con - con_n).norm()), FOURIER_TOL);
        let spec = RightTriangleSpec::from_i64(0, 0, 1, c, p, q, r)?;
        let numeric = fourier::closure_root_form(&spec, t_root)?;
        let count = count_right_triangle_closure(&spec, &int(t_root))?;
        check(
            fourier::deviation(fourier::ComplexApprox::new(numeric, 0.0), &rat_from_int(&count)),
            ROOT_FORM_TOL,
        );
        Ok((ok, worst))
    };
    let (passed, deviation) = run().map_err(|e| (instance.clone(), e))?;
    Ok(Trial {
        passed,
        instance,
        deviation,
    })
}

/// Random valid spec with every parameter at most `max` (and `r` at most
/// `max` above its smallest admissible value).
pub fn random_right_triangle_spec(rng: &mut impl Rng, max: u64) -> RightTriangleSpec {
    let d = rng.random_range(1..=max);
    let c = rng.random_range(1..=max);
    let (p, q) = coprime_pair(rng, max);
    let a = rng.random_range(0..d);
    let b = rng.random_range(0..d);
    let r_min = (c * (p * a + q * b)).div_ceil(d);
    let r = rng.random_range(r_min..=r_min + max);
    RightTriangleSpec::new(big(a), big(b), big(d), big(c), big(p), big(q), big(r))
        .expect("generated spec satisfies its invariants")
}

fn oracle_triangle_trial(rng: &mut ChaCha8Rng, m: u64) -> TrialResult {
    let spec = random_right_triangle_spec(rng, m);
    let t = big(rng.random_range(1..=m.min(20)));
    let instance = format!(
        "a={} b={} d={} c={} p={} q={} r={} t={t}",
        spec.a, spec.b, spec.d, spec.c, spec.p, spec.q, spec.r
    );
    let run = || -> crate::Result<bool> {
        let v = spec.vertices();
        let closure = count_right_triangle_closure(&spec, &t)? == brute_force_count(&v, &t, CountMode::Closure)?;
        let interior = count_right_triangle_interior(&spec, &t)? == brute_force_count(&v, &t, CountMode::Interior)?;
        Ok(closure && interior)
    };
    let ok = run().map_err(|e| (instance.clone(), e))?;
    exact(ok, instance)
}

/// A simple polygon with 3 to `max_vertices` vertices, coordinates
/// `n / d` with `|n| <= num_bound` and `1 <= d <= den_bound`. Points are
/// ordered by angle around their mean; unusable draws are redrawn.
pub fn random_polygon(rng: &mut impl Rng, max_vertices: usize, num_bound: i64, den_bound: i64) -> RationalPolygon {
    loop {
        let n = rng.random_range(3..=max_vertices);
        let mut pts: Vec<RationalPoint> = (0..n)
            .map(|_| {
                let mut coord = || rat(rng.random_range(-num_bound..=num_bound), rng.random_range(1..=den_bound));
                RationalPoint::new(coord(), coord())
            })
            .collect();
        let approx = |r: &Rational| crate::exact::to_float_approx(r);
        let cx = pts.iter().map(|p| approx(&p.x)).sum::<f64>() / n as f64;
        let cy = pts.iter().map(|p| approx(&p.y)).sum::<f64>() / n as f64;
        pts.sort_by(|a, b| {
            let angle = |p: &RationalPoint| (approx(&p.y) - cy).atan2(approx(&p.x) - cx);
            angle(a).total_cmp(&angle(b)).then_with(|| a.cmp(b))
        });
        if let Ok(poly) = polygon::validate(&pts) {
            return poly;
        }
    }
}

fn polygon_instance(poly: &RationalPolygon) -> String {
    let v: Vec<String> = poly.vertices().iter().map(|p| p.to_string()).collect();
    format!("[{}]", v.join(", "))
}

fn oracle_polygon_trial(rng: &mut ChaCha8Rng, m: u64) -> TrialResult {
    let bound = m.min(1 << 20) as i64;
    let poly = random_polygon(rng, 8, bound, bound);
    let t = big(rng.random_range(1..=12u64));
    let instance = format!("polygon={} t={t}", polygon_instance(&poly));
    let run = || -> crate::Result<bool> {
        let plan = CountingPlan::new(&poly);
        let mut ok = true;
        for mode in [CountMode::Closure, CountMode::Interior, CountMode::Boundary] {
            ok &= plan.count(&t, mode)?.count == brute_force_count(poly.vertices(), &t, mode)?;
        }
        Ok(ok)
    };
    let ok = run().map_err(|e| (instance.clone(), e))?;
    exact(ok, instance)
}

fn ehrhart_trial(rng: &mut ChaCha8Rng, m: u64) -> TrialResult {
    let lattice = rng.random_range(0..3) == 0;
    let den = if lattice { 1 } else { m.min(6) as i64 };
    let poly = random_polygon(rng, 8, m.min(1 << 20) as i64, den);
    let instance = format!("polygon={}", polygon_instance(&poly));
    let run = || -> crate::Result<bool> {
        let q = polygon::ehrhart(&poly)?;
        let plan = CountingPlan::new(&poly);
        let mut ok = q.c2 == area(&poly);
        for t in 1..=4i64 {
            let t = int(t);
            ok &= q.eval(&t) == rat_from_int(&plan.closure(&t)?);
            ok &= q.eval(&-&t) == rat_from_int(&plan.interior(&t)?);
        }
        if poly.denominator() == int(1) {
            ok &= q.c0[0] == rat(1, 1);
            let boundary = rat_from_int(&plan.boundary(&int(1))?);
            ok &= rat_from_int(&plan.closure(&int(1))?) == area(&poly) + boundary / rat(2, 1) + rat(1, 1);
        }
        Ok(ok)
    };
    let ok = run().map_err(|e| (instance.clone(), e))?;
    exact(ok, instance)
}
