//! Two-sided endpoint expansions of the closed forms produced by fractional
//! integration of power-weighted monomials.
//!
//! A fractional integral of (x-a)^ea (b-x)^eb is, by the hypergeometric
//! power rule, an algebraic prefactor times a 2F1 of the scaled coordinate.
//! Rather than evaluate that 2F1 near its convergence boundary, every form
//! here carries *two* expansions: one in w = (x-a)/(b-a) around the left
//! endpoint and one in w = (b-x)/(b-a) around the right endpoint, each a
//! finite sum of branches  w^rho * (ln w)^p * (power series in w).  The
//! evaluation point always picks the side with w <= 1/2, so every series
//! converges at geometric rate 1/2 or better, and endpoint exponents can be
//! read off exactly. Differentiation acts termwise, which is what makes
//! fractional *derivatives* of these closed forms cheap and noise-free.

use crate::fraccalc::{Interval, PowerWeightedFunction, Side};
use crate::specfun::{digamma, gamma, SpecFunError};
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum SeriesError {
    #[error("closed-form expansion limited to endpoint exponents in (-1, 20]; got {0}")]
    ExponentRange(f64),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

const TRUNC: usize = 150;

/// One branch of an endpoint expansion: sum_k c_k w^(rho+k) (ln w)^log_power.
#[derive(Debug, Clone)]
pub struct ExpBranch {
    pub rho: f64,
    pub log_power: u8,
    pub coeffs: Vec<f64>,
}

impl ExpBranch {
    fn eval(&self, w: f64) -> f64 {
        let mut s = 0.0;
        for c in self.coeffs.iter().rev() {
            s = s * w + c;
        }
        let mut v = s * w.powf(self.rho);
        if self.log_power == 1 {
            v *= w.ln();
        }
        v
    }
}

/// Endpoint expansion: a finite collection of branches.
#[derive(Debug, Clone, Default)]
pub struct Expansion {
    pub branches: Vec<ExpBranch>,
}

impl Expansion {
    pub fn single(rho: f64, coeffs: Vec<f64>) -> Self {
        Expansion { branches: vec![ExpBranch { rho, log_power: 0, coeffs }] }
    }

    pub fn eval(&self, w: f64) -> f64 {
        if w == 0.0 {
            return self.limit_at_zero();
        }
        self.branches.iter().map(|b| b.eval(w)).sum()
    }

    fn limit_at_zero(&self) -> f64 {
        // combine leading behavior of all branches
        let lead = self.leading();
        match lead {
            None => 0.0,
            Some((rho, lp, c)) => {
                if rho > 0.0 {
                    0.0
                } else if rho < 0.0 {
                    if lp == 1 {
                        -f64::INFINITY * c.signum()
                    } else {
                        f64::INFINITY * c.signum()
                    }
                } else if lp == 1 {
                    -f64::INFINITY * c.signum()
                } else {
                    // sum all rho=0, lp=0 constant terms
                    self.branches
                        .iter()
                        .filter(|b| b.log_power == 0)
                        .filter_map(|b| {
                            let k = (-b.rho).round();
                            if (b.rho + k).abs() < 1e-12 && k >= 0.0 {
                                b.coeffs.get(k as usize).copied()
                            } else {
                                None
                            }
                        })
                        .sum()
                }
            }
        }
    }

    /// Leading term (exponent, log power, coefficient) of the expansion.
    pub fn leading(&self) -> Option<(f64, u8, f64)> {
        let mut best: Option<(f64, u8, f64)> = None;
        for b in &self.branches {
            let scale = b.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            if scale == 0.0 {
                continue;
            }
            for (k, c) in b.coeffs.iter().enumerate() {
                if c.abs() > 1e-9 * scale {
                    let e = b.rho + k as f64;
                    let better = match best {
                        None => true,
                        Some((be, blp, _)) => {
                            e < be - 1e-12 || ((e - be).abs() <= 1e-12 && b.log_power > blp)
                        }
                    };
                    if better {
                        best = Some((e, b.log_power, *c));
                    }
                    break;
                }
            }
        }
        best
    }

    pub fn scale(mut self, s: f64) -> Self {
        for b in &mut self.branches {
            for c in &mut b.coeffs {
                *c *= s;
            }
        }
        self
    }

    pub fn add(&mut self, other: Expansion) {
        for ob in other.branches {
            // merge into an existing branch when exponents differ by an integer
            let mut merged = false;
            for b in &mut self.branches {
                if b.log_power != ob.log_power {
                    continue;
                }
                let d = ob.rho - b.rho;
                let dr = d.round();
                if (d - dr).abs() < 1e-10 && dr.abs() < TRUNC as f64 {
                    if dr >= 0.0 {
                        let off = dr as usize;
                        if b.coeffs.len() < off + ob.coeffs.len() {
                            b.coeffs.resize(off + ob.coeffs.len(), 0.0);
                        }
                        for (k, c) in ob.coeffs.iter().enumerate() {
                            b.coeffs[off + k] += c;
                        }
                    } else {
                        let off = (-dr) as usize;
                        let mut nc = vec![0.0; (b.coeffs.len() + off).max(ob.coeffs.len())];
                        nc[..ob.coeffs.len()].copy_from_slice(&ob.coeffs);
                        for (k, c) in b.coeffs.iter().enumerate() {
                            nc[off + k] += c;
                        }
                        b.rho = ob.rho;
                        b.coeffs = nc;
                    }
                    merged = true;
                    break;
                }
            }
            if !merged {
                self.branches.push(ob);
            }
        }
    }

    /// d/dw, exact termwise differentiation.
    pub fn differentiate(&self) -> Expansion {
        let mut out = Expansion::default();
        for b in &self.branches {
            let pow_coeffs: Vec<f64> = b
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * (b.rho + k as f64))
                .collect();
            out.add(Expansion {
                branches: vec![ExpBranch { rho: b.rho - 1.0, log_power: b.log_power, coeffs: pow_coeffs }],
            });
            if b.log_power == 1 {
                out.add(Expansion {
                    branches: vec![ExpBranch { rho: b.rho - 1.0, log_power: 0, coeffs: b.coeffs.clone() }],
                });
            }
        }
        out
    }

    /// Multiply by a plain power series in w (truncated convolution).
    pub fn mul_series(&self, g: &[f64]) -> Expansion {
        let branches = self
            .branches
            .iter()
            .map(|b| {
                let n = TRUNC.min(b.coeffs.len() + g.len());
                let mut c = vec![0.0; n];
                for (i, bi) in b.coeffs.iter().enumerate() {
                    if *bi == 0.0 {
                        continue;
                    }
                    for (j, gj) in g.iter().enumerate() {
                        if i + j < n {
                            c[i + j] += bi * gj;
                        }
                    }
                }
                ExpBranch { rho: b.rho, log_power: b.log_power, coeffs: c }
            })
            .collect();
        Expansion { branches }
    }

    pub fn shift_rho(mut self, d: f64) -> Expansion {
        for b in &mut self.branches {
            b.rho += d;
        }
        self
    }
}

/// Coefficients of (1 - w)^lambda as a power series in w, truncated.
pub fn binomial_series(lambda: f64, n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n];
    c[0] = 1.0;
    for j in 1..n {
        c[j] = c[j - 1] * (-(lambda - (j as f64 - 1.0)) / j as f64);
    }
    c
}

/// Power-series coefficients of 2F1(a, b; c; w), truncated. `c` must stay
/// away from non-positive integers over the first `n` indices.
fn hyp_series_coeffs(a: f64, b: f64, c: f64, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[0] = 1.0;
    for k in 1..n {
        let kf = (k - 1) as f64;
        v[k] = v[k - 1] * (a + kf) * (b + kf) / ((c + kf) * (k as f64));
    }
    v
}

fn is_nonpos_int(x: f64) -> Option<i64> {
    let r = x.round();
    if r <= 0.0 && (x - r).abs() < 1e-9 {
        Some(r as i64)
    } else {
        None
    }
}

/// Expansion of 2F1(a, b; c; z) around z = 1 in powers of w = 1 - z.
fn hyp_expansion_at_one(a: f64, b: f64, c: f64) -> Expansion {
    // terminating series: polynomial in z, rebase at w exactly
    if let Some(m) = is_nonpos_int(a).or_else(|| is_nonpos_int(b)) {
        let (a, b) = if is_nonpos_int(a).is_some() { (a, b) } else { (b, a) };
        let deg = (-m) as usize;
        let mut tcoef = vec![0.0; deg + 1];
        tcoef[0] = 1.0;
        for k in 1..=deg {
            let kf = (k - 1) as f64;
            tcoef[k] = tcoef[k - 1] * (a + kf) * (b + kf) / ((c + kf) * k as f64);
        }
        // P(z) = sum t_k z^k with z = 1 - w: Horner in (1 - w)
        let mut poly = vec![0.0; deg + 1]; // coefficients in w
        for k in (0..=deg).rev() {
            // poly = poly * (1 - w) + t_k
            let prev = poly.clone();
            for j in 0..=deg {
                let carry = if j > 0 { prev[j - 1] } else { 0.0 };
                poly[j] = prev[j] - carry;
            }
            // note: multiplication by (1 - w) then adding constant
            poly[0] += tcoef[k];
            // fix: the multiply above must happen before adding t_k, and
            // poly[j] = prev[j] - prev[j-1] implements exactly that.
        }
        return Expansion::single(0.0, poly);
    }

    let cab = c - a - b;
    let m_near = cab.round();
    if (cab - m_near).abs() < 1e-9 {
        if m_near >= 0.0 {
            hyp_expansion_at_one_log(a, b, m_near as usize)
        } else {
            // Euler flip makes the integer offset non-negative
            let flipped = hyp_expansion_at_one(c - a, c - b, c);
            flipped.shift_rho(cab)
        }
    } else {
        let g1 = gamma(c) * gamma(cab) / (gamma(c - a) * gamma(c - b));
        let g2 = gamma(c) * gamma(-cab) / (gamma(a) * gamma(b));
        let mut e = Expansion::single(0.0, hyp_series_coeffs(a, b, 1.0 - cab, TRUNC)).scale(g1);
        e.add(
            Expansion::single(cab, hyp_series_coeffs(c - a, c - b, 1.0 + cab, TRUNC)).scale(g2),
        );
        e
    }
}

/// Logarithmic connection: c = a + b + m with m a non-negative integer.
fn hyp_expansion_at_one_log(a: f64, b: f64, m: usize) -> Expansion {
    let mf = m as f64;
    let c = a + b + mf;
    let mut out = Expansion::default();

    if m > 0 {
        let pre = gamma(mf) * gamma(c) / (gamma(a + mf) * gamma(b + mf));
        let mut coeffs = vec![0.0; m];
        let mut term = 1.0;
        for (k, slot) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                let kf = k as f64;
                term *= (a + kf - 1.0) * (b + kf - 1.0) / ((kf - mf) * kf);
            }
            *slot = pre * term;
        }
        out.add(Expansion::single(0.0, coeffs));
    }

    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let pre2 = sign * gamma(c) / (gamma(a) * gamma(b));
    if pre2 != 0.0 && pre2.is_finite() {
        let mut cf = vec![0.0; TRUNC];
        let mut df = vec![0.0; TRUNC];
        let mut term = 1.0 / gamma(mf + 1.0);
        for k in 0..TRUNC {
            let kf = k as f64;
            if k > 0 {
                term *= (a + mf + kf - 1.0) * (b + mf + kf - 1.0) / (kf * (kf + mf));
            }
            cf[k] = -pre2 * term;
            let psi_part =
                -digamma(kf + 1.0) - digamma(kf + mf + 1.0) + digamma(a + kf + mf) + digamma(b + kf + mf);
            df[k] = -pre2 * term * psi_part;
        }
        out.add(Expansion { branches: vec![ExpBranch { rho: mf, log_power: 1, coeffs: cf }] });
        out.add(Expansion { branches: vec![ExpBranch { rho: mf, log_power: 0, coeffs: df }] });
    }
    out
}

/// A function on (a, b) carried as a pair of endpoint expansions.
#[derive(Debug, Clone)]
pub struct TwoSidedForm {
    pub interval: Interval,
    pub at_a: Expansion,
    pub at_b: Expansion,
}

impl TwoSidedForm {
    pub fn zero(interval: Interval) -> Self {
        TwoSidedForm { interval, at_a: Expansion::default(), at_b: Expansion::default() }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let len = self.interval.length();
        let wa = (x - self.interval.a) / len;
        let wb = (self.interval.b - x) / len;
        if wa <= wb {
            self.at_a.eval(wa)
        } else {
            self.at_b.eval(wb)
        }
    }

    /// d/dx, exact.
    pub fn derivative(&self) -> TwoSidedForm {
        let len = self.interval.length();
        TwoSidedForm {
            interval: self.interval,
            at_a: self.at_a.differentiate().scale(1.0 / len),
            at_b: self.at_b.differentiate().scale(-1.0 / len),
        }
    }

    pub fn nth_derivative(&self, n: usize) -> TwoSidedForm {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.derivative();
        }
        f
    }

    pub fn scale(mut self, s: f64) -> Self {
        self.at_a = self.at_a.scale(s);
        self.at_b = self.at_b.scale(s);
        self
    }

    pub fn add(&mut self, other: &TwoSidedForm) {
        self.at_a.add(other.at_a.clone());
        self.at_b.add(other.at_b.clone());
    }

    /// Swap the roles of the endpoints (the reflection x -> a + b - x).
    pub fn reflected(self) -> Self {
        TwoSidedForm { interval: self.interval, at_a: self.at_b, at_b: self.at_a }
    }

    /// Leading endpoint exponent (in the distance to the endpoint) and
    /// whether a logarithmic factor rides on it.
    pub fn exponent_at(&self, side: Side) -> Option<(f64, bool)> {
        let e = match side {
            Side::Left => self.at_a.leading(),
            Side::Right => self.at_b.leading(),
        };
        e.map(|(rho, lp, _)| (rho, lp == 1))
    }
}

fn check_exponent(e: f64) -> Result<(), SeriesError> {
    if e <= -1.0 || e > 20.0 {
        Err(SeriesError::ExponentRange(e))
    } else {
        Ok(())
    }
}

/// Closed form of the left Riemann-Liouville integral of order sigma > 0 of
/// the single power term (x-a)^ea (b-x)^eb, as a two-sided expansion.
///
/// Around the left endpoint this is the power rule series directly; around
/// the right endpoint the hypergeometric connection at unit argument is used
/// (with its logarithmic variant when sigma + eb is an integer).
pub fn rl_integral_power_term(
    side: Side,
    sigma: f64,
    ea: f64,
    eb: f64,
    interval: Interval,
) -> Result<TwoSidedForm, SeriesError> {
    assert!(sigma > 0.0, "integral order must be positive");
    check_exponent(ea)?;
    check_exponent(eb)?;
    match side {
        Side::Left => rl_left_power_term(sigma, ea, eb, interval),
        Side::Right => {
            Ok(rl_left_power_term(sigma, eb, ea, interval)?.reflected())
        }
    }
}

fn rl_left_power_term(
    sigma: f64,
    ea: f64,
    eb: f64,
    interval: Interval,
) -> Result<TwoSidedForm, SeriesError> {
    let len = interval.length();
    // power rule: prefactor * (x-a)^(sigma+ea) * 2F1(-eb, ea+1, sigma+ea+1; (x-a)/len)
    let (fa, fb, fc) = (-eb, ea + 1.0, sigma + ea + 1.0);
    let pre = len.powf(eb) * gamma(ea + 1.0) / gamma(sigma + ea + 1.0);
    let lead = sigma + ea;
    let scale = pre * len.powf(lead);

    // left side: single branch rho = sigma + ea
    let at_a = Expansion::single(lead, hyp_series_coeffs(fa, fb, fc, TRUNC)).scale(scale);

    // right side: connection at z = 1, then multiply by (1-w)^(sigma+ea)
    let conn = hyp_expansion_at_one(fa, fb, fc);
    let at_b = conn.mul_series(&binomial_series(lead, TRUNC)).scale(scale);

    Ok(TwoSidedForm { interval, at_a, at_b })
}

/// Closed form of I^sigma applied to a full power-weighted function.
pub fn rl_integral_pwf(
    side: Side,
    sigma: f64,
    f: &PowerWeightedFunction,
) -> Result<TwoSidedForm, SeriesError> {
    let iv = f.interval();
    let mut total = TwoSidedForm::zero(iv);
    for (j, &cj) in f.smooth_coeffs().iter().enumerate() {
        if cj == 0.0 {
            continue;
        }
        let term = rl_integral_power_term(side, sigma, f.exp_a() + j as f64, f.exp_b(), iv)?;
        total.add(&term.scale(cj));
    }
    Ok(total)
}

/// The power-weighted function itself as a two-sided expansion.
pub fn pwf_form(f: &PowerWeightedFunction) -> Result<TwoSidedForm, SeriesError> {
    let iv = f.interval();
    check_exponent(f.exp_a())?;
    check_exponent(f.exp_b())?;
    let len = iv.length();
    // around a: (x-a)^(ea+j) (b-x)^eb = len^(ea+eb+j) w^(ea+j) (1-w)^eb
    let mut at_a = Expansion::default();
    let bin_b = binomial_series(f.exp_b(), TRUNC);
    for (j, &cj) in f.smooth_coeffs().iter().enumerate() {
        if cj == 0.0 {
            continue;
        }
        let s = cj * len.powf(f.exp_a() + f.exp_b() + j as f64);
        at_a.add(
            Expansion::single(f.exp_a() + j as f64, bin_b.clone()).scale(s),
        );
    }
    // around b: symmetric, with the smooth part rebased via (x-a) = len(1-w)
    let mut at_b = Expansion::default();
    for (j, &cj) in f.smooth_coeffs().iter().enumerate() {
        if cj == 0.0 {
            continue;
        }
        let s = cj * len.powf(f.exp_a() + f.exp_b() + j as f64);
        // (1-w)^(ea+j)
        at_b.add(
            Expansion::single(f.exp_b(), binomial_series(f.exp_a() + j as f64, TRUNC)).scale(s),
        );
    }
    Ok(TwoSidedForm { interval: iv, at_a, at_b })
}

/// Closed form of the Riemann-Liouville derivative of order sigma in (0, 2)
/// of a power-weighted function: (-1)^n D^n I^(n-sigma) on the right side,
/// D^n I^(n-sigma) on the left, with termwise differentiation of the
/// expansions.
pub fn rl_derivative_pwf(
    side: Side,
    sigma: f64,
    f: &PowerWeightedFunction,
) -> Result<TwoSidedForm, SeriesError> {
    assert!(sigma > 0.0 && sigma < 2.0);
    let n = sigma.ceil() as usize;
    let n = if (sigma - sigma.round()).abs() < 1e-14 { sigma.round() as usize } else { n };
    let form = if n as f64 == sigma {
        pwf_form(f)?.nth_derivative(n)
    } else {
        rl_integral_pwf(side, n as f64 - sigma, f)?.nth_derivative(n)
    };
    Ok(match side {
        Side::Left => form,
        Side::Right => {
            if n % 2 == 1 {
                form.scale(-1.0)
            } else {
                form
            }
        }
    })
}
