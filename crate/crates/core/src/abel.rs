//! Closed-form solutions of coupled Abel integral equations with constant
//! coefficients  gamma1 * I^t_left + gamma2 * I^t_right.
//!
//! The algebraic heart is the exponent pair (p, q) in (-1,0)^2 fixed by
//!   p + q = -t   and   gamma1 sin(q pi) = gamma2 sin(p pi),
//! which governs the endpoint behavior of every solution here.

use crate::fraccalc::{Interval, PowerWeightedFunction, Side};
use crate::quad::{self, Singularity};
use crate::series::{self, TwoSidedForm};
use crate::specfun::gamma;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AbelError {
    #[error("parameters out of range: need gamma1, gamma2 > 0 and 0 < t < 1 (got {gamma1}, {gamma2}, {t})")]
    BadParameters { gamma1: f64, gamma2: f64, t: f64 },
    #[error("exponent bisection failed: residual {0:.3e}")]
    RootNotFound(f64),
    #[error("mass integral cross-check failed: quadrature {quadrature:.15e} vs Beta identity {beta:.15e}")]
    MassIntegralMismatch { quadrature: f64, beta: f64 },
    #[error(transparent)]
    FracCalc(#[from] crate::fraccalc::FracCalcError),
    #[error(transparent)]
    Quad(#[from] crate::quad::QuadError),
    #[error(transparent)]
    Series(#[from] crate::series::SeriesError),
}

/// The exponent pair (p, q) together with the coefficients that produced it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentPair {
    pub p: f64,
    pub q: f64,
    pub t: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl ExponentPair {
    /// Residuals of the two defining conditions.
    pub fn residuals(&self) -> (f64, f64) {
        let sum = self.p + self.q + self.t;
        let sine = self.gamma1 * (self.q * std::f64::consts::PI).sin()
            - self.gamma2 * (self.p * std::f64::consts::PI).sin();
        (sum, sine)
    }
}

/// Constants attached to the correction-term construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AbelConstants {
    /// Normalizer of the constant-right-hand-side solution.
    pub c: f64,
    /// Normalizer of the differentiated-equation solution.
    pub c1: f64,
    /// Total mass of the companion function v.
    pub s: f64,
    /// Weighted mass c * int (t-a)^p (b-t)^q dt.
    pub s1: f64,
}

fn check_params(gamma1: f64, gamma2: f64, t: f64) -> Result<(), AbelError> {
    if !(gamma1 > 0.0 && gamma2 > 0.0 && t > 0.0 && t < 1.0)
        || !gamma1.is_finite()
        || !gamma2.is_finite()
    {
        return Err(AbelError::BadParameters { gamma1, gamma2, t });
    }
    Ok(())
}

/// Solve the exponent system for (p, q).
///
/// The symmetric case returns p = q = -t/2 exactly. Otherwise
/// h(p) = gamma1 sin((-t-p) pi) - gamma2 sin(p pi) changes sign exactly once
/// on (-t, 0); bisection plus a Newton polish pins the root.
pub fn solve_exponents(gamma1: f64, gamma2: f64, t: f64) -> Result<ExponentPair, AbelError> {
    check_params(gamma1, gamma2, t)?;
    if gamma1 == gamma2 {
        return Ok(ExponentPair { p: -t / 2.0, q: -t / 2.0, t, gamma1, gamma2 });
    }
    let pi = std::f64::consts::PI;
    let h = |p: f64| gamma1 * ((-t - p) * pi).sin() - gamma2 * (p * pi).sin();
    let eps = 1e-9 * t;
    let (mut lo, mut hi) = (-t + eps, -eps);
    let (hlo, hhi) = (h(lo), h(hi));
    if !(hlo > 0.0 && hhi < 0.0) {
        return Err(AbelError::RootNotFound(hlo.abs().min(hhi.abs())));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 * t {
            break;
        }
    }
    let mut p = 0.5 * (lo + hi);
    // Newton polish
    for _ in 0..4 {
        let hp = -pi * gamma1 * ((-t - p) * pi).cos() - pi * gamma2 * (p * pi).cos();
        if hp.abs() > 1e-300 {
            p -= h(p) / hp;
        }
        p = p.clamp(-t + eps, -eps);
    }
    let q = -t - p;
    let pair = ExponentPair { p, q, t, gamma1, gamma2 };
    let (_, sine) = pair.residuals();
    if sine.abs() > 1e-12 * (gamma1 + gamma2) {
        return Err(AbelError::RootNotFound(sine.abs()));
    }
    Ok(pair)
}

/// Mass integral int_a^b (t-a)^(-q-1) (b-t)^(-p-1) dt evaluated both by
/// Gauss-Jacobi quadrature and the Beta identity; the two must agree.
fn mass_integral(pair: &ExponentPair, iv: Interval) -> Result<f64, AbelError> {
    let (p, q, t) = (pair.p, pair.q, pair.t);
    let beta = iv.length().powf(t - 1.0) * gamma(-q) * gamma(-p) / gamma(t);
    let (quadrature, _) =
        quad::integrate_jacobi_adaptive(iv.a, iv.b, -q - 1.0, -p - 1.0, |_| 1.0, 1e-12, 32)?;
    if (quadrature - beta).abs() > 1e-10 * beta.abs() {
        return Err(AbelError::MassIntegralMismatch { quadrature, beta });
    }
    Ok(beta)
}

/// Solution of  gamma1 I^t u + gamma2 I^t u = 1:  u = c (x-a)^p (b-x)^q.
#[derive(Debug, Clone)]
pub struct ConstantRhsSolution {
    pub profile: PowerWeightedFunction,
    pub pair: ExponentPair,
    pub normalizer: f64,
}

pub fn constant_rhs_solution(
    gamma1: f64,
    gamma2: f64,
    t: f64,
    iv: Interval,
) -> Result<ConstantRhsSolution, AbelError> {
    let pair = solve_exponents(gamma1, gamma2, t)?;
    let mass = mass_integral(&pair, iv)?;
    let c = gamma(-pair.q)
        / (gamma1 * iv.length().powf(1.0 + pair.p + pair.q) * gamma(pair.p + 1.0) * mass);
    let profile = PowerWeightedFunction::power_term(c, pair.p, pair.q, iv)?;
    Ok(ConstantRhsSolution { profile, pair, normalizer: c })
}

/// One solution of the differentiated equation
/// D (gamma1 I^t + gamma2 I^t) u = 1:  u = c1 * D[(x-a)^(p+1)(b-x)^(q+1)].
#[derive(Debug, Clone)]
pub struct DifferentiatedRhsSolution {
    /// u itself (a two-term power-weighted function with exponents (p, q)).
    pub profile: PowerWeightedFunction,
    /// The antiderivative c1 (x-a)^(p+1) (b-x)^(q+1).
    pub antiderivative: PowerWeightedFunction,
    pub pair: ExponentPair,
    pub normalizer: f64,
}

pub fn differentiated_rhs_solution(
    gamma1: f64,
    gamma2: f64,
    t: f64,
    iv: Interval,
) -> Result<DifferentiatedRhsSolution, AbelError> {
    let pair = solve_exponents(gamma1, gamma2, t)?;
    let c1 = diff_normalizer(&pair, gamma2, t);
    let len = iv.length();
    // D[(x-a)^(p+1)(b-x)^(q+1)] = (x-a)^p (b-x)^q [(p+1)(b-x) - (q+1)(x-a)]
    let smooth = vec![c1 * (pair.p + 1.0) * len, -c1 * (2.0 - t)];
    let profile = PowerWeightedFunction::new(smooth, pair.p, pair.q, iv)?;
    let antiderivative =
        PowerWeightedFunction::power_term(c1, pair.p + 1.0, pair.q + 1.0, iv)?;
    Ok(DifferentiatedRhsSolution { profile, antiderivative, pair, normalizer: c1 })
}

fn diff_normalizer(pair: &ExponentPair, gamma2: f64, t: f64) -> f64 {
    let p = pair.p;
    (-p - t) * (-p - t + 1.0) * gamma(t)
        / ((1.0 - t) * (2.0 - t) * gamma2 * gamma(t + p + 1.0) * gamma(pair.q + 2.0))
}

/// Apply the coupled operator gamma1 I^t_left + gamma2 I^t_right to a
/// power-weighted function, exactly.
pub fn coupled_operator_form(
    gamma1: f64,
    gamma2: f64,
    t: f64,
    f: &PowerWeightedFunction,
) -> Result<TwoSidedForm, AbelError> {
    let mut left = series::rl_integral_pwf(Side::Left, t, f)?.scale(gamma1);
    let right = series::rl_integral_pwf(Side::Right, t, f)?.scale(gamma2);
    left.add(&right);
    Ok(left)
}

/// The correction function Y built from a companion function v, linking the
/// derivative of one Abel solution to the solution with differentiated data:
///   Y = int_a^x v  -  (c S / S1) int_a^x (t-a)^p (b-t)^q dt
///       + (c1 S / S1) D[(x-a)^(p+1)(b-x)^(q+1)].
pub struct CorrectionTerm<'f> {
    v: &'f dyn Fn(f64) -> f64,
    v_exponents: (f64, f64),
    pub pair: ExponentPair,
    pub constants: AbelConstants,
    interval: Interval,
    weight_integral: TwoSidedForm,
}

pub fn correction_term<'f>(
    v: &'f dyn Fn(f64) -> f64,
    v_exponents: (f64, f64),
    gamma1: f64,
    gamma2: f64,
    sigma: f64,
    iv: Interval,
) -> Result<CorrectionTerm<'f>, AbelError> {
    let pair = solve_exponents(gamma1, gamma2, sigma)?;
    let mass = mass_integral(&pair, iv)?;
    let c = gamma(-pair.q)
        / (gamma1 * iv.length().powf(1.0 - sigma) * gamma(pair.p + 1.0) * mass);
    let c1 = diff_normalizer(&pair, gamma2, sigma);
    let weighted_mass = iv.length().powf(1.0 - sigma) * gamma(pair.p + 1.0) * gamma(pair.q + 1.0)
        / gamma(2.0 - sigma);
    let s1 = c * weighted_mass;
    let sing = [
        Singularity::known(iv.a, v_exponents.0),
        Singularity::known(iv.b, v_exponents.1),
    ];
    let grid = quad::panel_grid(iv.a, iv.b, &sing, 0.25 * iv.length());
    let s = grid.apply(v);
    // int_a^x (t-a)^p (b-t)^q dt as an exact closed form
    let unit = PowerWeightedFunction::power_term(1.0, pair.p, pair.q, iv)?;
    let weight_integral = series::rl_integral_pwf(Side::Left, 1.0, &unit)?;
    Ok(CorrectionTerm {
        v,
        v_exponents,
        pair,
        constants: AbelConstants { c, c1, s, s1 },
        interval: iv,
        weight_integral,
    })
}

impl<'f> CorrectionTerm<'f> {
    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// The final (derivative) term alone; it dominates near the endpoints.
    pub fn singular_part(&self, x: f64) -> f64 {
        let k = self.constants.c1 * self.constants.s / self.constants.s1;
        let iv = self.interval;
        let (p, q) = (self.pair.p, self.pair.q);
        let da = x - iv.a;
        let db = iv.b - x;
        k * da.powf(p) * db.powf(q) * ((p + 1.0) * db - (q + 1.0) * da)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let iv = self.interval;
        let sing = [
            Singularity::known(iv.a, self.v_exponents.0),
            Singularity::known(iv.b, self.v_exponents.1),
        ];
        let grid = quad::panel_grid(iv.a, x, &sing, 0.25 * iv.length());
        let int_v = grid.apply(|t| (self.v)(t));
        let k = self.constants.c * self.constants.s / self.constants.s1;
        int_v - k * self.weight_integral.eval(x) + self.singular_part(x)
    }
}
