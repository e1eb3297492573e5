//! Cross-module consistency: the closed-form Abel machinery, the
//! fractional-derivative expansions, and the singular-equation
//! representations must describe the same objects.

use skewfrac::abel;
use skewfrac::analysis::ClosedFormSolution;
use skewfrac::fraccalc::{Interval, PowerWeightedFunction, Side};
use skewfrac::series;
use skewfrac::singular::{
    dominant_solution, j_compatibility_defect, j_representation, skew_coefficients,
    JRepresentation, SingularEquationSpec, SolutionSpace,
};

/// Effective Hoelder data of the pure-diffusion constant-source problem:
/// affine, with the additive constant fixed by the construction itself as
/// the endpoint value of the right-sided flux integral.
fn effective_data(
    alpha: f64,
    beta: f64,
    mu: f64,
    iv: Interval,
) -> (PowerWeightedFunction, ClosedFormSolution) {
    let cf = ClosedFormSolution::pure_diffusion(alpha, beta, mu, iv).unwrap();
    let du = abel::differentiated_rhs_solution(alpha, beta, 1.0 - mu, iv).unwrap();
    let int_right = series::rl_integral_pwf(Side::Right, 1.0 - mu, &du.profile).unwrap();
    let c0 = beta * int_right.eval(iv.a);
    let fhat = PowerWeightedFunction::new(vec![c0, 1.0], 0.0, 0.0, iv).unwrap();
    (fhat, cf)
}

/// The lifting route: u solves the coupled Abel equation with the affine
/// data above, so its kernel J = D^mu u must coincide with the
/// representation formulas. The construction zeroes the first compatibility
/// moment exactly; the first three representations then agree with the
/// exact kernel to machine precision, and the fourth (which carries a zero
/// homogeneous coefficient by convention) is offset by precisely the
/// predicted homogeneous multiple of the second moment.
#[test]
fn representations_match_the_fractional_derivative_of_the_closed_form() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    for (alpha, mu) in [(0.5, 0.5), (0.65, 0.4), (0.3, 0.7)] {
        let beta = 1.0 - alpha;
        let coeffs = skew_coefficients(alpha, beta, mu).unwrap();
        let (fhat, cf) = effective_data(alpha, beta, mu, iv);
        let j_exact = series::rl_derivative_pwf(Side::Left, mu, &cf.profile).unwrap();

        let (n0, n1) = j_compatibility_defect(&fhat, &coeffs).unwrap();
        assert!(n0.abs() < 1e-12, "first moment should vanish by construction: {n0:e}");
        assert!(n1.abs() > 1e-3, "second moment is genuinely nonzero here: {n1:e}");

        let d = coeffs.big_a * coeffs.big_a + coeffs.big_b * coeffs.big_b;
        let tf = coeffs.theta_frac();
        for &x in &[0.25, 0.5, 0.75] {
            let je = j_exact.eval(x);
            for rep in [JRepresentation::First, JRepresentation::Second, JRepresentation::Third]
            {
                let jr = j_representation(&fhat, &coeffs, rep, x).unwrap();
                assert!(
                    (jr - je).abs() <= 1e-10 * (1.0 + je.abs()),
                    "alpha={alpha} mu={mu} x={x} {rep:?}: {jr} vs {je}"
                );
            }
            let j4 = j_representation(&fhat, &coeffs, JRepresentation::Fourth, x).unwrap();
            let predicted = coeffs.big_b / d / std::f64::consts::PI
                * x.powf(-tf)
                * (1.0 - x).powf(tf - mu - 1.0)
                * n1;
            assert!(
                ((j4 - je) - predicted).abs() <= 1e-6 * predicted.abs(),
                "alpha={alpha} mu={mu} x={x}: offset {} vs predicted {predicted}",
                j4 - je
            );
        }
    }
}

/// The dominant-equation solutions picked in the two single-endpoint
/// continuity classes coincide for right-hand sides from the lifting
/// construction, and both equal the weighted kernel (b-x)^mu D^mu u.
#[test]
fn adjacent_space_solutions_coincide_and_match_the_kernel() {
    let iv = Interval::new(0.0, 1.0).unwrap();
    for (alpha, mu) in [(0.5, 0.5), (0.4, 0.6)] {
        let beta = 1.0 - alpha;
        let coeffs = skew_coefficients(alpha, beta, mu).unwrap();
        let (fhat, cf) = effective_data(alpha, beta, mu, iv);
        let j_exact = series::rl_derivative_pwf(Side::Left, mu, &cf.profile).unwrap();
        // F = (b-x)^mu * fhat
        let big_f = fhat.shift_exponents(0.0, mu).unwrap();
        let spec2 =
            SingularEquationSpec::new(coeffs.big_a, coeffs.big_b, big_f.clone(), SolutionSpace::X2)
                .unwrap();
        let spec3 =
            SingularEquationSpec::new(coeffs.big_a, coeffs.big_b, big_f, SolutionSpace::X3)
                .unwrap();
        for x in iv.chebyshev_points(10) {
            let psi2 = dominant_solution(&spec2, x, 0.0).unwrap();
            let psi3 = dominant_solution(&spec3, x, 0.0).unwrap();
            assert!(
                (psi2 - psi3).abs() <= 1e-6 * (1.0 + psi2.abs()),
                "alpha={alpha} mu={mu} x={x}: {psi2} vs {psi3}"
            );
            let kernel = (1.0 - x).powf(mu) * j_exact.eval(x);
            assert!(
                (psi2 - kernel).abs() <= 1e-9 * (1.0 + kernel.abs()),
                "alpha={alpha} mu={mu} x={x}: {psi2} vs weighted kernel {kernel}"
            );
        }
    }
}
