//! Cauchy principal-value machinery: the dominant singular operator, its
//! weighted variants, the skew angle theta, closed-form solutions of the
//! dominant singular integral equation in the four solution spaces, and the
//! four equivalent representations of the regularity-lifting kernel J.
//!
//! For power-weighted functions the principal value is computed by
//! singularity subtraction: the polynomial difference quotient goes through
//! a Jacobi rule exactly and the remaining pure-weight transform is handled
//! by a dedicated graded scheme. Sampled (constructed) integrands go through
//! the layered panel engine.

use crate::fraccalc::{FracCalcError, Interval, PowerWeightedFunction};
use crate::quad::{self, Singularity};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SingularError {
    #[error("evaluation point {x} outside the open interval ({a}, {b})")]
    PointOutsideInterval { x: f64, a: f64, b: f64 },
    #[error("evaluation within the endpoint guard band ({0:.1e} of the interval length)")]
    TooCloseToEndpoint(f64),
    #[error("skew parameters out of range: alpha={alpha}, beta={beta}, mu={mu}")]
    BadSkew { alpha: f64, beta: f64, mu: f64 },
    #[error("theta bound violated: mu={mu}, theta/2pi={theta_frac}")]
    ThetaBound { mu: f64, theta_frac: f64 },
    #[error("coefficients c1 = c2 = 0 do not define an operator")]
    DegenerateCoefficients,
    #[error("solvability condition violated for {space:?}: need nu_a > {need_a:.6} and nu_b > {need_b:.6}, got ({nu_a:.6}, {nu_b:.6})")]
    Unsolvable { space: SolutionSpace, need_a: f64, need_b: f64, nu_a: f64, nu_b: f64 },
    #[error("right-hand side must be Hoelder on the closed interval (endpoint exponents >= 0)")]
    NotHoelder,
    #[error(transparent)]
    FracCalc(#[from] FracCalcError),
}

const ENDPOINT_GUARD: f64 = 1e-9;

fn check_interior(iv: Interval, x: f64) -> Result<(), SingularError> {
    if !iv.contains_interior(x) {
        return Err(SingularError::PointOutsideInterval { x, a: iv.a, b: iv.b });
    }
    let guard = ENDPOINT_GUARD * iv.length();
    if x - iv.a < guard || iv.b - x < guard {
        return Err(SingularError::TooCloseToEndpoint(ENDPOINT_GUARD));
    }
    Ok(())
}

/// Principal value of the pure Jacobi weight:
/// pv int (t-a)^ea (b-t)^eb / (t - x) dt.
fn pv_weight(ea: f64, eb: f64, iv: Interval, x: f64) -> f64 {
    let (a, b) = (iv.a, iv.b);
    if ea == 0.0 && eb == 0.0 {
        return ((b - x) / (x - a)).ln();
    }
    let ea_int = ea >= 0.0 && (ea - ea.round()).abs() < 1e-12;
    let eb_int = eb >= 0.0 && (eb - eb.round()).abs() < 1e-12;
    if ea_int && eb_int {
        // polynomial weight: subtract its value at x and divide exactly
        let w = |t: f64| (t - a).powi(ea as i32) * (b - t).powi(eb as i32);
        let wx = w(x);
        let n = (ea + eb) as usize + 4;
        let val = quad::integrate_jacobi(a, b, 0.0, 0.0, n.max(4), |t| {
            if (t - x).abs() < 1e-14 * iv.length() {
                let h = 1e-6 * iv.length();
                (w(x + h) - w(x - h)) / (2.0 * h)
            } else {
                (w(t) - wx) / (t - x)
            }
        });
        return val + wx * ((b - x) / (x - a)).ln();
    }
    pv_raw_fn(&|t| (t - a).powf(ea) * (b - t).powf(eb), ea, eb, false, iv, x)
}

/// Analytic tail integral over the closing sliver next to an endpoint of a
/// layered singular integrand: the smooth residue f * dist^(-e) is fitted
/// with a two-term algebraic model c0 + c1 dist^g from three geometric
/// samples, and the model integrates in closed form. This captures the
/// subdominant fractional corrections that a plain Jacobi sliver resolves
/// poorly.
fn layered_tail(f: &dyn Fn(f64) -> f64, endpoint: f64, inward: f64, delta: f64, e: f64) -> f64 {
    let ds = [0.9 * delta, 0.45 * delta, 0.225 * delta];
    let s: Vec<f64> = ds
        .iter()
        .map(|d| f(endpoint + inward * d) * d.powf(-e))
        .collect();
    let (c0, c1, g) = {
        let r = (s[0] - s[1]) / (s[1] - s[2]);
        if r.is_finite() && r > 1.0005 && r < 16.0 {
            let g = r.log2();
            let c1 = (s[1] - s[2]) / (ds[1].powf(g) - ds[2].powf(g));
            let c0 = s[2] - c1 * ds[2].powf(g);
            (c0, c1, g)
        } else {
            // profile indistinguishable from a pure power on this scale
            (s[2], 0.0, 1.0)
        }
    };
    let mut tail = c0 * delta.powf(1.0 + e) / (1.0 + e);
    if c1 != 0.0 {
        tail += c1 * delta.powf(1.0 + e + g) / (1.0 + e + g);
    }
    tail
}

/// Raw principal value  pv int f(t)/(t-x) dt  for a sampled integrand with
/// known endpoint exponents. `layered` selects the graded closing scheme
/// with model-fitted tails, for constructed singular integrands.
fn pv_raw_fn(
    f: &dyn Fn(f64) -> f64,
    exp_a: f64,
    exp_b: f64,
    layered: bool,
    iv: Interval,
    x: f64,
) -> f64 {
    let (a, b) = (iv.a, iv.b);
    let r = 0.5 * (x - a).min(b - x);

    // symmetric core: pv over (x-r, x+r) = int_0^r [f(x+s) - f(x-s)]/s ds
    let core_grid = quad::panel_grid(0.0, r, &[], 0.5 * r);
    let core = core_grid.apply(|s| (f(x + s) - f(x - s)) / s);

    // side pieces: kernel analytic, panels grade toward the far endpoint
    // singularity and toward the excluded x-neighborhood
    let delta = 1e-7 * iv.length();
    let left = if x - r > a {
        if layered {
            let sing = [Singularity::known(a, exp_a), Singularity::known(x, -1.0)];
            let grid = quad::panel_grid(a + delta, x - r, &sing, 0.25 * iv.length());
            grid.apply(|t| f(t) / (t - x))
                + layered_tail(&|t| f(t) / (t - x), a, 1.0, delta, exp_a)
        } else {
            let sing = [Singularity::known(a, exp_a), Singularity::known(x, -1.0)];
            let grid = quad::panel_grid(a, x - r, &sing, 0.25 * iv.length());
            grid.apply(|t| f(t) / (t - x))
        }
    } else {
        0.0
    };
    let right = if x + r < b {
        if layered {
            let sing = [Singularity::known(b, exp_b), Singularity::known(x, -1.0)];
            let grid = quad::panel_grid(x + r, b - delta, &sing, 0.25 * iv.length());
            grid.apply(|t| f(t) / (t - x))
                + layered_tail(&|t| f(t) / (t - x), b, -1.0, delta, exp_b)
        } else {
            let sing = [Singularity::known(b, exp_b), Singularity::known(x, -1.0)];
            let grid = quad::panel_grid(x + r, b, &sing, 0.25 * iv.length());
            grid.apply(|t| f(t) / (t - x))
        }
    } else {
        0.0
    };
    core + left + right
}

/// (1/pi) pv int f(t)/(t-x) dt for a power-weighted f: the polynomial
/// difference quotient integrates exactly against the Jacobi weight and the
/// pure-weight part is handled separately.
pub fn cauchy_pv(f: &PowerWeightedFunction, x: f64) -> Result<f64, SingularError> {
    check_interior(f.interval(), x)?;
    cauchy_pv_raw(f, x)
}

/// The transform without the endpoint guard band, for internal quadrature
/// sampling (accuracy degrades gracefully near the endpoints).
fn cauchy_pv_raw(f: &PowerWeightedFunction, x: f64) -> Result<f64, SingularError> {
    let iv = f.interval();
    if !iv.contains_interior(x) {
        return Err(SingularError::PointOutsideInterval { x, a: iv.a, b: iv.b });
    }
    let (a, b) = (iv.a, iv.b);
    let gx = f.smooth_eval(x);
    // h(t) = (g(t) - g(x)) / (t - x) by synthetic division in powers of (t-a)
    let g = f.smooth_coeffs();
    let cx = x - a;
    let mut h = vec![0.0; g.len().saturating_sub(1)];
    // h_i = sum_{j > i} g_j cx^(j-1-i)
    for (i, slot) in h.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in (i + 1..g.len()).rev() {
            acc = acc * cx + g[j];
        }
        *slot = acc;
    }
    let npt = g.len() / 2 + 6;
    let weighted_part = quad::integrate_jacobi(a, b, f.exp_a(), f.exp_b(), npt, |t| {
        let dt = t - a;
        let mut s = 0.0;
        for c in h.iter().rev() {
            s = s * dt + c;
        }
        s
    });
    let pure = pv_weight(f.exp_a(), f.exp_b(), iv, x);
    Ok((weighted_part + gx * pure) / std::f64::consts::PI)
}

/// Raw principal value (without the 1/pi) of a sampled integrand with known
/// leading endpoint exponents; used for forward-operator residuals.
pub fn pv_callable(
    f: &dyn Fn(f64) -> f64,
    exp_a: f64,
    exp_b: f64,
    iv: Interval,
    x: f64,
) -> Result<f64, SingularError> {
    check_interior(iv, x)?;
    Ok(pv_raw_fn(f, exp_a, exp_b, true, iv, x))
}

/// The weighted singular operator
/// (1/pi) int ((x-a)/(t-a))^nu_a ((b-x)/(b-t))^nu_b f(t)/(t-x) dt,
/// reduced to the plain transform of the re-weighted integrand.
pub fn weighted_singular(
    nu_a: f64,
    nu_b: f64,
    f: &PowerWeightedFunction,
    x: f64,
) -> Result<f64, SingularError> {
    check_interior(f.interval(), x)?;
    weighted_singular_raw(nu_a, nu_b, f, x)
}

fn weighted_singular_raw(
    nu_a: f64,
    nu_b: f64,
    f: &PowerWeightedFunction,
    x: f64,
) -> Result<f64, SingularError> {
    let iv = f.interval();
    if nu_a == 0.0 && nu_b == 0.0 {
        return cauchy_pv_raw(f, x);
    }
    let shifted = f.shift_exponents(-nu_a, -nu_b)?;
    let base = cauchy_pv_raw(&shifted, x)?;
    Ok((x - iv.a).powf(nu_a) * (iv.b - x).powf(nu_b) * base)
}

/// Skew data (alpha, beta, mu) and the derived coefficients
/// A = alpha - beta cos(mu pi), B = beta sin(mu pi), and the angle theta
/// with (A - iB)/(A + iB) = e^(i theta), 0 <= theta < 2 pi.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SkewCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub big_a: f64,
    pub big_b: f64,
    pub theta: f64,
}

/// Branch-safe angle of (c1 - i c2)/(c1 + i c2) in [0, 2 pi).
pub fn theta_from_coefficients(c1: f64, c2: f64) -> f64 {
    let re = c1 * c1 - c2 * c2;
    let im = -2.0 * c1 * c2;
    let mut theta = im.atan2(re);
    if theta < 0.0 {
        theta += 2.0 * std::f64::consts::PI;
    }
    theta
}

pub fn skew_coefficients(alpha: f64, beta: f64, mu: f64) -> Result<SkewCoefficients, SingularError> {
    let ok = alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0 && mu > 0.0 && mu < 1.0;
    if !ok || (alpha + beta - 1.0).abs() > 1e-12 {
        return Err(SingularError::BadSkew { alpha, beta, mu });
    }
    let pi = std::f64::consts::PI;
    let big_a = alpha - beta * (mu * pi).cos();
    let big_b = beta * (mu * pi).sin();
    let theta = theta_from_coefficients(big_a, big_b);
    let frac = theta / (2.0 * pi);
    if !(frac > mu && frac < 1.0) {
        return Err(SingularError::ThetaBound { mu, theta_frac: frac });
    }
    Ok(SkewCoefficients { alpha, beta, mu, big_a, big_b, theta })
}

impl SkewCoefficients {
    pub fn theta_frac(&self) -> f64 {
        self.theta / (2.0 * std::f64::consts::PI)
    }
}

/// Solution spaces for the dominant singular equation: all sit in the
/// Hoelder-with-integrable-singularities class, with continuity imposed at
/// neither, one, or both endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolutionSpace {
    X1,
    X2,
    X3,
    X4,
}

impl SolutionSpace {
    pub fn n_a(&self) -> f64 {
        match self {
            SolutionSpace::X1 | SolutionSpace::X2 => 1.0,
            SolutionSpace::X3 | SolutionSpace::X4 => 0.0,
        }
    }
    pub fn n_b(&self) -> f64 {
        match self {
            SolutionSpace::X1 | SolutionSpace::X3 => 1.0,
            SolutionSpace::X2 | SolutionSpace::X4 => 0.0,
        }
    }
}

/// A dominant singular equation  c1 psi + (c2/pi) pv int psi/(t-x) = f,
/// with f carried as a power-weighted function (nu = 1 + endpoint exponent)
/// and a selected solution space.
#[derive(Debug, Clone)]
pub struct SingularEquationSpec {
    pub c1: f64,
    pub c2: f64,
    pub rhs: PowerWeightedFunction,
    pub space: SolutionSpace,
    pub theta: f64,
}

impl SingularEquationSpec {
    pub fn new(
        c1: f64,
        c2: f64,
        rhs: PowerWeightedFunction,
        space: SolutionSpace,
    ) -> Result<Self, SingularError> {
        if c1 == 0.0 && c2 == 0.0 {
            return Err(SingularError::DegenerateCoefficients);
        }
        let theta = theta_from_coefficients(c1, c2);
        let spec = SingularEquationSpec { c1, c2, rhs, space, theta };
        spec.check_solvability()?;
        Ok(spec)
    }

    pub fn nu_a(&self) -> f64 {
        1.0 + self.rhs.exp_a()
    }
    pub fn nu_b(&self) -> f64 {
        1.0 + self.rhs.exp_b()
    }
    pub fn theta_frac(&self) -> f64 {
        self.theta / (2.0 * std::f64::consts::PI)
    }

    /// Exponents of the canonical weight attached to the space.
    pub fn weight_exponents(&self) -> (f64, f64) {
        let tf = self.theta_frac();
        (1.0 - self.space.n_a() - tf, tf - self.space.n_b())
    }

    fn check_solvability(&self) -> Result<(), SingularError> {
        if self.c2 == 0.0 {
            return Ok(());
        }
        // for X1..X3 these are the unconditional-solvability inequalities;
        // for X4 they are what the formula's integrals need to converge (the
        // full solvability criterion for X4 is deliberately not modeled and
        // such solutions are verify-after-construct).
        let (need_a, need_b) = self.weight_exponents();
        if self.nu_a() <= need_a || self.nu_b() <= need_b {
            return Err(SingularError::Unsolvable {
                space: self.space,
                need_a,
                need_b,
                nu_a: self.nu_a(),
                nu_b: self.nu_b(),
            });
        }
        Ok(())
    }
}

/// Closed-form solution of the dominant singular equation in the selected
/// space, evaluated at an interior point. `c_homog` scales the homogeneous
/// weight and is admissible only in the largest space; elsewhere the unique
/// solution is returned and the argument must be zero.
pub fn dominant_solution(
    spec: &SingularEquationSpec,
    x: f64,
    c_homog: f64,
) -> Result<f64, SingularError> {
    check_interior(spec.rhs.interval(), x)?;
    dominant_solution_raw(spec, x, c_homog)
}

/// The solution formula without the endpoint guard band, for internal
/// quadrature sampling in forward-residual checks.
pub fn dominant_solution_raw(
    spec: &SingularEquationSpec,
    x: f64,
    c_homog: f64,
) -> Result<f64, SingularError> {
    let iv = spec.rhs.interval();
    let d = spec.c1 * spec.c1 + spec.c2 * spec.c2;
    let fx = spec.rhs.eval(x);
    let mut val = spec.c1 * fx / d;
    if spec.c2 != 0.0 {
        let (ea, eb) = spec.weight_exponents();
        let ws = weighted_singular_raw(ea, eb, &spec.rhs, x)?;
        val -= spec.c2 * ws / d;
    }
    if c_homog != 0.0 && spec.space == SolutionSpace::X1 {
        let (ea, eb) = spec.weight_exponents();
        val += c_homog * (x - iv.a).powf(ea) * (iv.b - x).powf(eb);
    }
    Ok(val)
}

/// Forward application  c1 psi(x) + (c2/pi) pv int psi/(t-x) dt  to a
/// sampled candidate solution with known endpoint exponents.
pub fn apply_dominant_operator(
    c1: f64,
    c2: f64,
    psi: &dyn Fn(f64) -> f64,
    psi_exponents: (f64, f64),
    iv: Interval,
    x: f64,
) -> Result<f64, SingularError> {
    let pv = pv_callable(psi, psi_exponents.0, psi_exponents.1, iv, x)?;
    Ok(c1 * psi(x) + c2 * pv / std::f64::consts::PI)
}

/// Which of the four equivalent representations of J to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JRepresentation {
    First,
    Second,
    Third,
    Fourth,
}

impl JRepresentation {
    pub fn all() -> [JRepresentation; 4] {
        [
            JRepresentation::First,
            JRepresentation::Second,
            JRepresentation::Third,
            JRepresentation::Fourth,
        ]
    }

    fn exponents(&self, theta_frac: f64, mu: f64) -> (f64, f64) {
        match self {
            JRepresentation::First => (1.0 - theta_frac, theta_frac - mu),
            JRepresentation::Second => (1.0 - theta_frac, theta_frac - mu - 1.0),
            JRepresentation::Third => (-theta_frac, theta_frac - mu),
            JRepresentation::Fourth => (-theta_frac, theta_frac - mu - 1.0),
        }
    }
}

/// One of the four equivalent representations of the regularity-lifting
/// kernel J for a Hoelder right-hand side f:
///   J = [A f(x) - B * WS_e(x)] / (A^2 + B^2)
/// with the four weight-exponent choices. They coincide exactly on the
/// admissible class where the compatibility moment vanishes (see
/// [`j_compatibility_defect`]).
pub fn j_representation(
    f: &PowerWeightedFunction,
    coeffs: &SkewCoefficients,
    which: JRepresentation,
    x: f64,
) -> Result<f64, SingularError> {
    if f.exp_a() < 0.0 || f.exp_b() < 0.0 {
        return Err(SingularError::NotHoelder);
    }
    let (ea, eb) = which.exponents(coeffs.theta_frac(), coeffs.mu);
    let d = coeffs.big_a * coeffs.big_a + coeffs.big_b * coeffs.big_b;
    let ws = weighted_singular(ea, eb, f, x)?;
    Ok((coeffs.big_a * f.eval(x) - coeffs.big_b * ws) / d)
}

/// Compatibility moment of order k:
///   N_k[f] = int (t-a)^(theta/2pi - 1 + k) (b-t)^(mu - theta/2pi) f(t) dt.
/// Every pairwise difference of the four representations is a weighted
/// multiple of N_0[f] or N_1[f] (the mixed moment is the combination
/// (b-a) N_0 - N_1), so the four coincide exactly on the codimension-two
/// class N_0[f] = N_1[f] = 0. The regularity-lifting construction supplies
/// right-hand sides in that class.
pub fn j_moment(
    f: &PowerWeightedFunction,
    coeffs: &SkewCoefficients,
    k: u32,
) -> Result<f64, SingularError> {
    if f.exp_a() < 0.0 || f.exp_b() < 0.0 {
        return Err(SingularError::NotHoelder);
    }
    let iv = f.interval();
    let tf = coeffs.theta_frac();
    let npts = f.smooth_coeffs().len() / 2 + 8;
    Ok(quad::integrate_jacobi(
        iv.a,
        iv.b,
        tf - 1.0 + k as f64 + f.exp_a(),
        coeffs.mu - tf + f.exp_b(),
        npts,
        |t| f.smooth_eval(t),
    ))
}

/// Both compatibility moments (N_0, N_1).
pub fn j_compatibility_defect(
    f: &PowerWeightedFunction,
    coeffs: &SkewCoefficients,
) -> Result<(f64, f64), SingularError> {
    Ok((j_moment(f, coeffs, 0)?, j_moment(f, coeffs, 1)?))
}

/// Project a polynomial right-hand side onto the admissible class by
/// subtracting the affine part s0 + s1 (x-a) that zeroes both moments.
pub fn j_admissible_shift(
    f: &PowerWeightedFunction,
    coeffs: &SkewCoefficients,
) -> Result<PowerWeightedFunction, SingularError> {
    if f.exp_a() != 0.0 || f.exp_b() != 0.0 {
        return Err(SingularError::NotHoelder);
    }
    let iv = f.interval();
    let one = PowerWeightedFunction::power_term(1.0, 0.0, 0.0, iv)?;
    let ramp = PowerWeightedFunction::new(vec![0.0, 1.0], 0.0, 0.0, iv)?;
    let (nf0, nf1) = j_compatibility_defect(f, coeffs)?;
    let (m00, m10) = j_compatibility_defect(&one, coeffs)?;
    let (m01, m11) = j_compatibility_defect(&ramp, coeffs)?;
    let det = m00 * m11 - m01 * m10;
    let s0 = (nf0 * m11 - m01 * nf1) / det;
    let s1 = (m00 * nf1 - nf0 * m10) / det;
    let mut coeffs_new = f.smooth_coeffs().to_vec();
    if coeffs_new.len() < 2 {
        coeffs_new.resize(2, 0.0);
    }
    coeffs_new[0] -= s0;
    coeffs_new[1] -= s1;
    Ok(PowerWeightedFunction::new(coeffs_new, 0.0, 0.0, iv)?)
}
