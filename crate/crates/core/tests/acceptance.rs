//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantity against its pinned tolerance. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use skewfrac::abel;
use skewfrac::analysis::{
    self, counterexample_check, endpoint_classification, verify_representation,
    ClosedFormSolution, ValueClass,
};
use skewfrac::fraccalc::{Interval, PowerWeightedFunction, Side};
use skewfrac::linalg;
use skewfrac::solver::{
    assemble_bilinear, seminorm_gram, solve_weak, CoefficientFunction, ProblemSpec,
};
use skewfrac::suites;
use std::time::Instant;

const SEED: u64 = 42;

fn iv01() -> Interval {
    Interval::new(0.0, 1.0).unwrap()
}

fn pure_problem(mu: f64, alpha: f64) -> ProblemSpec {
    ProblemSpec {
        interval: iv01(),
        mu,
        alpha,
        beta: 1.0 - alpha,
        k_coef: CoefficientFunction::constant(1.0),
        adv_coef: CoefficientFunction::constant(0.0),
        reac_coef: CoefficientFunction::constant(0.0),
        source: PowerWeightedFunction::power_term(-1.0, 0.0, 0.0, iv01()).unwrap(),
    }
}

fn find(records: &[suites::CheckRecord], reference: &str) -> suites::CheckRecord {
    records
        .iter()
        .find(|r| r.reference == reference)
        .unwrap_or_else(|| panic!("missing record {reference}"))
        .clone()
}

#[test]
fn criterion_01_constant_rhs_residual_sweep() {
    let t0 = Instant::now();
    let records = suites::abel_suite(SEED, 50);
    let rec = find(&records, "abel/constant-rhs-residual");
    let elapsed = t0.elapsed();
    assert!(rec.passed(), "{rec:?}");
    assert!(elapsed.as_secs_f64() <= 30.0, "sweep took {elapsed:?}");
    println!(
        "criterion 01 PASS: constant-rhs residual max {:.3e} <= {:.1e} over 50 draws x 20 points ({elapsed:?})",
        rec.measured, rec.tolerance
    );
}

#[test]
fn criterion_02_differentiated_rhs_residual_sweep() {
    let records = suites::abel_suite(SEED, 50);
    let rec = find(&records, "abel/differentiated-rhs-residual");
    assert!(rec.passed(), "{rec:?}");
    println!(
        "criterion 02 PASS: differentiated-rhs residual max {:.3e} <= {:.1e}",
        rec.measured, rec.tolerance
    );
}

#[test]
fn criterion_03_exponent_system() {
    let records = suites::abel_suite(SEED, 50);
    let sum = find(&records, "abel/exponent-sum");
    let sine = find(&records, "abel/exponent-sine");
    let sym = find(&records, "abel/exponent-symmetric");
    assert!(sum.passed() && sine.passed() && sym.passed(), "{records:?}");
    println!(
        "criterion 03 PASS: exponent residuals {:.3e}/{:.3e} <= 1e-10, symmetric exactness {:.3e} <= 1e-12",
        sum.measured, sine.measured, sym.measured
    );
}

#[test]
fn criterion_04_angle_bound() {
    let records = suites::singular_suite(SEED);
    let bound = find(&records, "singular/theta-bound");
    let sym = find(&records, "singular/theta-symmetric");
    assert!(bound.passed(), "{bound:?}");
    assert!(sym.passed(), "{sym:?}");
    println!(
        "criterion 04 PASS: 1000 draws satisfy mu < theta/2pi < 1 (worst margin violation {:.3e}), symmetric case exact to {:.3e}",
        bound.measured, sym.measured
    );
}

#[test]
fn criterion_05_four_representations() {
    let records = suites::singular_suite(SEED);
    let rec = find(&records, "singular/j-representations");
    assert!(rec.passed(), "{rec:?}");
    println!(
        "criterion 05 PASS: four-representation spread max {:.3e} <= {:.1e} over 20 draws x 10 points",
        rec.measured, rec.tolerance
    );
}

#[test]
fn criterion_06_dominant_forward_residual() {
    let records = suites::singular_suite(SEED);
    let rec = find(&records, "singular/forward-residual");
    assert!(rec.passed(), "{rec:?}");
    println!(
        "criterion 06 PASS: dominant-equation forward residual max {:.3e} <= {:.1e} over 20 specs x 10 points",
        rec.measured, rec.tolerance
    );
}

#[test]
fn criterion_07_galerkin_recovery_and_convergence() {
    let t0 = Instant::now();
    // exact recovery of the representable symmetric solution at N = 8
    let p = pure_problem(0.5, 0.5);
    let sol = solve_weak(&p, 8).unwrap();
    let exact = abel::differentiated_rhs_solution(0.5, 0.5, 0.5, p.interval).unwrap();
    let anti = exact.antiderivative.clone();
    let err = sol.l2_distance(&|x| anti.eval(x));
    assert!(err <= 1e-9, "recovery L2 error {err}");

    // self-convergence for two variable-coefficient problems
    let mut histories = Vec::new();
    for variant in 0..2 {
        let mut prob = pure_problem(0.5, 0.5);
        match variant {
            0 => {
                prob.k_coef = CoefficientFunction::Polynomial(vec![1.0, 0.0, 0.1]);
            }
            _ => {
                prob.mu = 0.7;
                prob.k_coef = CoefficientFunction::ExpPoly(vec![0.0, 0.3]);
                prob.reac_coef = CoefficientFunction::constant(0.5);
                prob.adv_coef = CoefficientFunction::Polynomial(vec![0.1, 0.1]);
                prob.source =
                    PowerWeightedFunction::new(vec![-1.0, 0.5], 0.0, 0.0, iv01()).unwrap();
            }
        }
        let reference = solve_weak(&prob, 48).unwrap();
        let mut errs = Vec::new();
        for n in [4usize, 8, 16, 32] {
            let s = solve_weak(&prob, n).unwrap();
            errs.push(s.l2_distance(&|x| reference.eval_u(x)));
        }
        assert!(
            errs.windows(2).all(|w| w[1] < w[0]),
            "variant {variant}: errors not strictly decreasing: {errs:?}"
        );
        histories.push(errs);
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() <= 60.0, "took {elapsed:?}");
    println!(
        "criterion 07 PASS: exact recovery L2 error {err:.3e} <= 1e-9; self-convergence {:?} and {:?} ({elapsed:?})",
        histories[0], histories[1]
    );
}

#[test]
fn criterion_08_coercivity_and_norm_stability() {
    // minimum symmetrized Rayleigh quotient in the energy metric, across a
    // set of admissible problems
    let mut problems = vec![pure_problem(0.5, 0.5), pure_problem(0.3, 0.6), pure_problem(0.7, 0.45)];
    let mut varied = pure_problem(0.5, 0.5);
    varied.k_coef = CoefficientFunction::Polynomial(vec![1.0, 0.2]);
    varied.reac_coef = CoefficientFunction::constant(0.3);
    problems.push(varied);
    let mut advective = pure_problem(0.6, 0.5);
    advective.adv_coef = CoefficientFunction::Polynomial(vec![0.1, 0.05]);
    advective.reac_coef = CoefficientFunction::constant(0.5);
    problems.push(advective);

    let mut min_rayleigh = f64::INFINITY;
    for prob in &problems {
        let n = 8;
        let b = assemble_bilinear(prob, n).unwrap();
        let g = seminorm_gram(prob, n).unwrap();
        let (lo, _) = linalg::generalized_sym_eigen_bounds(&b.symmetric_part(), &g).unwrap();
        assert!(lo > 0.0, "problem {prob:?}: minimum Rayleigh quotient {lo}");
        min_rayleigh = min_rayleigh.min(lo);
    }

    // norm-estimate constant stable within a factor of two across sources
    use rand::{RngExt, SeedableRng};
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(SEED);
    let base = pure_problem(0.5, 0.5);
    let s = base.s_order();
    let mut ratios = Vec::new();
    for _ in 0..10 {
        let mut prob = base.clone();
        prob.source = PowerWeightedFunction::new(
            vec![rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0)],
            0.0,
            0.0,
            iv01(),
        )
        .unwrap();
        if prob.source.smooth_coeffs().iter().all(|c| c.abs() < 0.1) {
            continue;
        }
        let sol = solve_weak(&prob, 10).unwrap();
        let norm_u = sol.hs_seminorm().unwrap();
        let fk = prob.source.clone();
        let int_s =
            |x: f64| skewfrac::fraccalc::rl_integral_numeric(Side::Left, s, &fk, x).unwrap();
        let denom = skewfrac::fraccalc::l2_norm_fn(&int_s, s, 0.0, iv01());
        ratios.push(norm_u / denom);
    }
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(max / min < 2.0, "norm-estimate ratios vary too much: {ratios:?}");
    println!(
        "criterion 08 PASS: min Rayleigh quotient {min_rayleigh:.4} > 0 on {} problems; norm-constant spread {:.3} < 2",
        problems.len(),
        max / min
    );
}

#[test]
fn criterion_09_endpoint_classification() {
    let mut problems = Vec::new();
    problems.push(pure_problem(0.55, 0.5));
    problems.push(pure_problem(0.7, 0.6));
    let mut p3 = pure_problem(0.3, 0.5);
    p3.reac_coef = CoefficientFunction::constant(1.0);
    problems.push(p3);
    let mut p4 = pure_problem(0.6, 0.55);
    p4.adv_coef = CoefficientFunction::Polynomial(vec![0.05, 0.05]);
    p4.reac_coef = CoefficientFunction::constant(0.5);
    problems.push(p4);
    let mut p5 = pure_problem(0.8, 0.4);
    p5.k_coef = CoefficientFunction::Polynomial(vec![1.0, 0.1]);
    problems.push(p5);

    for prob in &problems {
        let sol = solve_weak(prob, 10).unwrap();
        let rep = endpoint_classification(&sol).unwrap();
        assert!(
            rep.dmu_left.fitted_exponent > 0.0 && rep.dmu_left.class == ValueClass::Vanishes,
            "{rep:?}"
        );
        assert!(
            rep.dmu_right.fitted_exponent > 0.0 && rep.dmu_right.class == ValueClass::Vanishes,
            "{rep:?}"
        );
        assert_ne!(rep.du_left.class, ValueClass::FiniteNonzero, "{rep:?}");
        assert_ne!(rep.du_right.class, ValueClass::FiniteNonzero, "{rep:?}");
    }

    // analytic symmetric case: exact Du exponent (mu-1)/2 at both ends
    let mu = 0.5;
    let cf = ClosedFormSolution::pure_diffusion(0.5, 0.5, mu, iv01()).unwrap();
    let (pa, qb) = cf.du_exponents();
    assert!((pa - (mu - 1.0) / 2.0).abs() < 1e-14);
    assert!((qb - (mu - 1.0) / 2.0).abs() < 1e-14);
    println!(
        "criterion 09 PASS: {} problems classified (D^mu vanishing at both ends, Du never finite-nonzero); symmetric Du exponent exact",
        problems.len()
    );
}

#[test]
fn criterion_10_sharpness() {
    for &mu in &[0.3, 0.5, 0.7] {
        let t = 1.0 + mu + 0.1;
        let rep = counterexample_check(mu, t).unwrap();
        assert!(rep.beta_over_alpha_threshold > 0.0, "{rep:?}");
        assert!(rep.p_plus_one_minus_t < -1.0, "{rep:?}");
        assert!(rep.diverges, "mu={mu}: {rep:?}");
        let alpha = 1.0 / (1.0 + rep.beta_over_alpha);
        let cf = ClosedFormSolution::pure_diffusion(alpha, 1.0 - alpha, mu, iv01()).unwrap();
        let above = verify_representation(&cf, t).unwrap();
        assert!(!above.in_integrable_class, "mu={mu}: {above:?}");
        let below = verify_representation(&cf, 1.0 + mu - 0.1).unwrap();
        assert!(below.in_integrable_class, "mu={mu}: {below:?}");
    }
    println!(
        "criterion 10 PASS: sharpness confirmed for mu in {{0.3, 0.5, 0.7}} at t = 1+mu+0.1 (divergence + representation flags)"
    );
}

#[test]
fn criterion_11_operator_form_equivalence() {
    let mut prob = pure_problem(0.5, 0.5);
    prob.k_coef = CoefficientFunction::Polynomial(vec![1.0, 0.0, 0.1]);
    let sol = solve_weak(&prob, 16).unwrap();
    let iv = prob.interval;
    let xs: Vec<f64> = (0..50).map(|i| iv.a + iv.length() * (i as f64 + 0.5) / 50.0).collect();
    let mut max_r1 = 0.0f64;
    let mut max_diff = 0.0f64;
    for &x in &xs {
        let r1 = sol.residual_conservative(x).unwrap();
        let r2 = sol.residual_distributed(x).unwrap();
        max_r1 = max_r1.max(r1.abs());
        max_diff = max_diff.max((r1 - r2).abs());
    }
    let disc_err = max_r1.max(1e-8);
    assert!(
        max_diff <= 10.0 * disc_err,
        "orderings disagree: {max_diff:.3e} vs 10 x {disc_err:.3e}"
    );
    println!(
        "criterion 11 PASS: operator orderings agree to {max_diff:.3e} <= 10 x discretization error {disc_err:.3e} at 50 points"
    );
}

#[test]
fn criterion_12_special_function_suite() {
    let t0 = Instant::now();
    let records = suites::specfun_suite(SEED, 200);
    let elapsed = t0.elapsed();
    assert!(suites::all_passed(&records), "{records:?}");
    assert!(elapsed.as_secs_f64() <= 10.0, "took {elapsed:?}");
    for r in &records {
        assert!(r.passed(), "{r:?}");
    }
    println!(
        "criterion 12 PASS: gamma reflection {:.2e}, symmetry {:.2e}, Euler {:.2e}, decomposition {:.2e} over 200 draws ({elapsed:?})",
        records[0].measured, records[1].measured, records[2].measured, records[3].measured
    );
}
