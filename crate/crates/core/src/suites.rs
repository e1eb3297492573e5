//! Seeded verification sweeps over the admissible parameter ranges. The
//! command-line driver runs these and emits one record per property; the
//! acceptance tests assert on the same records.

use crate::abel;
use crate::fraccalc::{rl_integral_numeric, Interval, PowerWeightedFunction, Side};
use crate::singular::{
    self, dominant_solution_raw, j_representation, skew_coefficients, JRepresentation,
    SingularEquationSpec, SolutionSpace,
};
use crate::specfun::{gamma, hyp2f1};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// One verified property with its measured worst-case deviation.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub status: CheckStatus,
    pub measured: f64,
    pub tolerance: f64,
    #[serde(rename = "ref")]
    pub reference: String,
}

impl CheckRecord {
    fn new(check: &str, reference: &str, measured: f64, tolerance: f64) -> Self {
        let status = if measured.is_finite() && measured <= tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        CheckRecord { check: check.into(), status, measured, tolerance, reference: reference.into() }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

pub fn all_passed(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.passed())
}

/// Gamma and Gauss hypergeometric identities on seeded random draws:
/// reflection, argument symmetry, the Euler transform and the decomposition
/// at unit argument.
pub fn specfun_suite(seed: u64, draws: usize) -> Vec<CheckRecord> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let pi = std::f64::consts::PI;

    let mut worst_reflection = 0.0f64;
    let mut worst_symmetry = 0.0f64;
    let mut worst_euler = 0.0f64;
    let mut worst_decomp = 0.0f64;

    let far_from_nonpos_int = |x: f64| x > 0.05 || (x - x.round()).abs() > 0.05;

    for _ in 0..draws {
        let z: f64 = rng.random_range(0.01..0.99);
        let lhs = gamma(z) * gamma(1.0 - z);
        let rhs = pi / (pi * z).sin();
        worst_reflection = worst_reflection.max((lhs - rhs).abs() / rhs.abs());

        let a: f64 = rng.random_range(-1.5..2.5);
        let b: f64 = rng.random_range(-1.5..2.5);
        let c: f64 = rng.random_range(0.3..3.0);
        let x: f64 = rng.random_range(-0.9..0.9);
        if let (Ok(f1), Ok(f2)) = (hyp2f1(a, b, c, x), hyp2f1(b, a, c, x)) {
            worst_symmetry = worst_symmetry.max((f1 - f2).abs() / (1.0 + f1.abs()));
        }

        let xe: f64 = rng.random_range(0.0..0.9);
        let ce = a.max(b).max(0.0) + rng.random_range(0.4..2.5);
        if let (Ok(lhs), Ok(rhs)) = (
            hyp2f1(a, b, ce, xe),
            hyp2f1(ce - a, ce - b, ce, xe).map(|f| (1.0 - xe).powf(ce - a - b) * f),
        ) {
            worst_euler = worst_euler.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
        }

        // decomposition at unit argument, non-degenerate parameters only
        let s1: f64 = rng.random_range(-1.2..2.0);
        let s2: f64 = rng.random_range(-1.2..2.0);
        let s3: f64 = rng.random_range(0.3..2.5);
        let xd: f64 = rng.random_range(0.05..0.95);
        let csum = s1 + s2 + 1.0 - s3;
        let degenerate = !far_from_nonpos_int(csum)
            || !far_from_nonpos_int(1.0 - s3)
            || !far_from_nonpos_int(s3 - 1.0)
            || !far_from_nonpos_int(s1 + 1.0 - s3)
            || !far_from_nonpos_int(s2 + 1.0 - s3)
            || !far_from_nonpos_int(s1)
            || !far_from_nonpos_int(s2)
            || !far_from_nonpos_int(2.0 - s3)
            || (csum - csum.round()).abs() < 0.05;
        if !degenerate {
            let big_a =
                gamma(csum) * gamma(1.0 - s3) / (gamma(s1 + 1.0 - s3) * gamma(s2 + 1.0 - s3));
            let big_b = gamma(s3 - 1.0) * gamma(csum) / (gamma(s1) * gamma(s2));
            let lhs = hyp2f1(s1, s2, csum, 1.0 - xd);
            let r1 = hyp2f1(s1, s2, s3, xd);
            let r2 = hyp2f1(1.0 + s1 - s3, 1.0 + s2 - s3, 2.0 - s3, xd);
            if let (Ok(lhs), Ok(r1), Ok(r2)) = (lhs, r1, r2) {
                let rhs = big_a * r1 + big_b * xd.powf(1.0 - s3) * r2;
                worst_decomp = worst_decomp.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
            }
        }
    }

    vec![
        CheckRecord::new(
            "gamma reflection identity",
            "specfun/gamma-reflection",
            worst_reflection,
            1e-12,
        ),
        CheckRecord::new(
            "hypergeometric argument symmetry",
            "specfun/hyp2f1-symmetry",
            worst_symmetry,
            1e-11,
        ),
        CheckRecord::new(
            "hypergeometric Euler transform",
            "specfun/hyp2f1-euler",
            worst_euler,
            1e-9,
        ),
        CheckRecord::new(
            "hypergeometric unit-argument decomposition",
            "specfun/hyp2f1-decomposition",
            worst_decomp,
            1e-9,
        ),
    ]
}

fn coupled_residual(g1: f64, g2: f64, t: f64, profile: &PowerWeightedFunction, x: f64) -> f64 {
    let l = rl_integral_numeric(Side::Left, t, profile, x).unwrap();
    let r = rl_integral_numeric(Side::Right, t, profile, x).unwrap();
    g1 * l + g2 * r - 1.0
}

/// Coupled Abel equation sweeps: the exponent system, the constant
/// right-hand-side solution residual (via the independent quadrature path)
/// and the differentiated-equation residual (via the exact closed form).
pub fn abel_suite(seed: u64, draws: usize) -> Vec<CheckRecord> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst_sum = 0.0f64;
    let mut worst_sine = 0.0f64;
    let mut worst_sym = 0.0f64;
    let mut worst_res1 = 0.0f64;
    let mut worst_res2 = 0.0f64;

    for _ in 0..draws {
        let g1: f64 = rng.random_range(0.2..5.0);
        let g2: f64 = rng.random_range(0.2..5.0);
        let t: f64 = rng.random_range(0.1..0.9);
        let a: f64 = rng.random_range(-2.0..2.0);
        let len: f64 = rng.random_range(0.5..3.0);
        let iv = Interval::new(a, a + len).unwrap();

        let pair = abel::solve_exponents(g1, g2, t).unwrap();
        let (r_sum, r_sine) = pair.residuals();
        worst_sum = worst_sum.max(r_sum.abs());
        worst_sine = worst_sine.max(r_sine.abs() / (g1 + g2));

        // symmetric draws return the half-order exponent exactly
        let ts: f64 = rng.random_range(0.1..0.9);
        let gs: f64 = rng.random_range(0.2..5.0);
        let sym = abel::solve_exponents(gs, gs, ts).unwrap();
        worst_sym = worst_sym.max((sym.p + ts / 2.0).abs()).max((sym.q - sym.p).abs());

        // the profile carries the normalizer; the residual weights the two
        // one-sided integrals by the drawn coefficients
        let sol1 = abel::constant_rhs_solution(g1, g2, t, iv).unwrap();
        for x in iv.chebyshev_points(20) {
            worst_res1 = worst_res1.max(coupled_residual(g1, g2, t, &sol1.profile, x).abs());
        }

        let sol2 = abel::differentiated_rhs_solution(g1, g2, t, iv).unwrap();
        let form = abel::coupled_operator_form(g1, g2, t, &sol2.profile).unwrap();
        let dform = form.derivative();
        for x in iv.chebyshev_points(20) {
            worst_res2 = worst_res2.max((dform.eval(x) - 1.0).abs());
        }
    }

    vec![
        CheckRecord::new("exponent system: p + q = -t", "abel/exponent-sum", worst_sum, 1e-10),
        CheckRecord::new("exponent system: sine matching", "abel/exponent-sine", worst_sine, 1e-10),
        CheckRecord::new(
            "symmetric draws give p = q = -t/2 exactly",
            "abel/exponent-symmetric",
            worst_sym,
            1e-12,
        ),
        CheckRecord::new(
            "constant-rhs solution residual",
            "abel/constant-rhs-residual",
            worst_res1,
            1e-7,
        ),
        CheckRecord::new(
            "differentiated-rhs solution residual",
            "abel/differentiated-rhs-residual",
            worst_res2,
            1e-5,
        ),
    ]
}

/// Dominant singular equation sweeps: the angle bound, the four equivalent
/// representations on admissible right-hand sides, and forward residuals of
/// the closed-form solutions.
pub fn singular_suite(seed: u64) -> Vec<CheckRecord> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let iv = Interval::new(0.0, 1.0).unwrap();
    let pi = std::f64::consts::PI;

    // angle bound over 1000 draws (negative margin = satisfied)
    let mut worst_bound = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let alpha: f64 = rng.random_range(0.01..0.99);
        let mu: f64 = rng.random_range(0.01..0.99);
        let c = skew_coefficients(alpha, 1.0 - alpha, mu).unwrap();
        let tf = c.theta_frac();
        let violation = (mu - tf).max(tf - 1.0);
        worst_bound = worst_bound.max(violation);
    }
    let mut worst_sym_theta = 0.0f64;
    for _ in 0..50 {
        let mu: f64 = rng.random_range(0.01..0.99);
        let c = skew_coefficients(0.5, 0.5, mu).unwrap();
        worst_sym_theta = worst_sym_theta.max((c.theta_frac() - (1.0 + mu) / 2.0).abs());
    }

    // four equivalent representations on 20 admissible draws, 10 points each
    let mut worst_spread = 0.0f64;
    for _ in 0..20 {
        let alpha: f64 = rng.random_range(0.2..0.8);
        let mu: f64 = rng.random_range(0.15..0.85);
        let coeffs = skew_coefficients(alpha, 1.0 - alpha, mu).unwrap();
        let raw = PowerWeightedFunction::new(
            vec![
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-0.5..0.5),
                rng.random_range(-0.5..0.5),
            ],
            0.0,
            0.0,
            iv,
        )
        .unwrap();
        let f = singular::j_admissible_shift(&raw, &coeffs).unwrap();
        for x in iv.chebyshev_points(10) {
            let vals: Vec<f64> = JRepresentation::all()
                .iter()
                .map(|w| j_representation(&f, &coeffs, *w, x).unwrap())
                .collect();
            let spread = vals.iter().cloned().fold(f64::MIN, f64::max)
                - vals.iter().cloned().fold(f64::MAX, f64::min);
            worst_spread = worst_spread.max(spread);
        }
    }

    // forward residual of the dominant-equation solution formula; the
    // coefficients are drawn through the angle so the canonical weight
    // exponents stay away from -1, where the nested principal-value
    // quadrature of the constructed solution would dominate the residual
    let mut worst_forward = 0.0f64;
    for trial in 0..20usize {
        let tf_draw: f64 = rng.random_range(0.25..0.75);
        let rho: f64 = rng.random_range(0.5..2.0);
        let sgn: f64 = if rng.random_range(0.0..1.0) < 0.5 { 1.0 } else { -1.0 };
        let c1 = sgn * rho * (tf_draw * pi).cos();
        let c2 = -sgn * rho * (tf_draw * pi).sin();
        let space = [SolutionSpace::X1, SolutionSpace::X2, SolutionSpace::X3][trial % 3];
        let tf = singular::theta_from_coefficients(c1, c2) / (2.0 * pi);
        let (wa, wb) = (1.0 - space.n_a() - tf, tf - space.n_b());
        // exponents strictly inside the solvability region, kept mild so the
        // layered quadrature of the constructed solution stays sharp
        let ea = ((wa - 1.0) + rng.random_range(0.15..0.6)).max(-0.72);
        let eb = ((wb - 1.0) + rng.random_range(0.15..0.6)).max(-0.72);
        let rhs =
            PowerWeightedFunction::new(vec![1.0, rng.random_range(-0.5..0.5)], ea, eb, iv)
                .unwrap();
        let spec = SingularEquationSpec::new(c1, c2, rhs.clone(), space).unwrap();
        let psi = |t: f64| dominant_solution_raw(&spec, t, 0.0).unwrap();
        let (wa_w, wb_w) = spec.weight_exponents();
        let psi_ea = (spec.nu_a() - 1.0).min(wa_w);
        let psi_eb = (spec.nu_b() - 1.0).min(wb_w);
        for x in iv.chebyshev_points(10) {
            let lhs =
                singular::apply_dominant_operator(c1, c2, &psi, (psi_ea, psi_eb), iv, x).unwrap();
            let res = (lhs - rhs.eval(x)).abs() / (1.0 + rhs.eval(x).abs());
            worst_forward = worst_forward.max(res);
        }
    }

    vec![
        CheckRecord::new(
            "angle bound mu < theta/2pi < 1",
            "singular/theta-bound",
            worst_bound,
            0.0,
        ),
        CheckRecord::new(
            "symmetric angle theta/2pi = (1+mu)/2",
            "singular/theta-symmetric",
            worst_sym_theta,
            1e-12,
        ),
        CheckRecord::new(
            "four equivalent representations",
            "singular/j-representations",
            worst_spread,
            1e-6,
        ),
        CheckRecord::new(
            "dominant-equation forward residual",
            "singular/forward-residual",
            worst_forward,
            1e-5,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specfun_suite_passes_and_is_deterministic() {
        let r1 = specfun_suite(7, 50);
        let r2 = specfun_suite(7, 50);
        assert!(all_passed(&r1), "{r1:?}");
        for (a, b) in r1.iter().zip(r2.iter()) {
            assert_eq!(a.measured.to_bits(), b.measured.to_bits());
        }
    }

    #[test]
    fn abel_suite_small_sweep() {
        let r = abel_suite(3, 4);
        assert!(all_passed(&r), "{r:?}");
    }
}
