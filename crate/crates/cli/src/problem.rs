//! Line-oriented problem-file format:
//!
//! ```text
//! # comment
//! interval = 0 1
//! mu = 0.5
//! alpha = 0.5
//! k = poly:1
//! adv = poly:0
//! reac = poly:0
//! source = power:-1/0/0
//! ```
//!
//! Coefficient functions: `poly:c0,c1,...` (powers of x-a),
//! `exp-poly:c0,c1,...` for exp(c0 + c1 (x-a) + ...), and
//! `trig:a0,a1,b1,a2,b2,...` for a cosine/sine sum on the interval.
//! The source is `power:c0,c1,.../ea/eb`; the `/ea/eb` suffix may be
//! omitted for a plain polynomial source.

use skewfrac::fraccalc::{Interval, PowerWeightedFunction};
use skewfrac::solver::{check_wellposedness, CoefficientFunction, ProblemSpec};
use std::fmt;

#[derive(Debug)]
pub enum ProblemFileError {
    Io(std::io::Error),
    Parse { line: usize, message: String },
    Condition(String),
}

impl fmt::Display for ProblemFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemFileError::Io(e) => write!(f, "cannot read problem file: {e}"),
            ProblemFileError::Parse { line, message } => {
                write!(f, "parse error at line {line}: {message}")
            }
            ProblemFileError::Condition(name) => {
                write!(f, "well-posedness condition violated: {name}")
            }
        }
    }
}

impl std::error::Error for ProblemFileError {}

fn parse_floats(s: &str, line: usize, what: &str) -> Result<Vec<f64>, ProblemFileError> {
    s.split(',')
        .map(|tok| {
            tok.trim().parse::<f64>().map_err(|_| ProblemFileError::Parse {
                line,
                message: format!("invalid number '{}' in {what}", tok.trim()),
            })
        })
        .collect()
}

fn parse_coefficient(
    value: &str,
    line: usize,
    what: &str,
) -> Result<CoefficientFunction, ProblemFileError> {
    let (kind, rest) = value.split_once(':').ok_or_else(|| ProblemFileError::Parse {
        line,
        message: format!("{what} must look like poly:..., exp-poly:... or trig:..."),
    })?;
    let coeffs = parse_floats(rest, line, what)?;
    match kind.trim() {
        "poly" => Ok(CoefficientFunction::Polynomial(coeffs)),
        "exp-poly" => Ok(CoefficientFunction::ExpPoly(coeffs)),
        "trig" => Ok(CoefficientFunction::TrigSum(coeffs)),
        other => Err(ProblemFileError::Parse {
            line,
            message: format!("unknown coefficient kind '{other}' in {what}"),
        }),
    }
}

fn parse_source(
    value: &str,
    line: usize,
    iv: Interval,
) -> Result<PowerWeightedFunction, ProblemFileError> {
    let rest = value.strip_prefix("power:").ok_or_else(|| ProblemFileError::Parse {
        line,
        message: "source must look like power:c0,c1,.../ea/eb".into(),
    })?;
    let mut parts = rest.split('/');
    let coeffs = parse_floats(parts.next().unwrap_or(""), line, "source coefficients")?;
    let ea = match parts.next() {
        Some(tok) => tok.trim().parse::<f64>().map_err(|_| ProblemFileError::Parse {
            line,
            message: format!("invalid left exponent '{}'", tok.trim()),
        })?,
        None => 0.0,
    };
    let eb = match parts.next() {
        Some(tok) => tok.trim().parse::<f64>().map_err(|_| ProblemFileError::Parse {
            line,
            message: format!("invalid right exponent '{}'", tok.trim()),
        })?,
        None => 0.0,
    };
    PowerWeightedFunction::new(coeffs, ea, eb, iv).map_err(|e| ProblemFileError::Parse {
        line,
        message: format!("invalid source: {e}"),
    })
}

/// Parse and validate a problem file; every well-posedness condition is
/// checked eagerly and failures name the violated condition.
pub fn parse_problem_file(path: &std::path::Path) -> Result<ProblemSpec, ProblemFileError> {
    let text = std::fs::read_to_string(path).map_err(ProblemFileError::Io)?;
    parse_problem_text(&text)
}

pub fn parse_problem_text(text: &str) -> Result<ProblemSpec, ProblemFileError> {
    let problem = parse_problem_text_unchecked(text)?;
    let report = check_wellposedness(&problem);
    if !report.pass {
        return Err(ProblemFileError::Condition(
            report.failing_condition.unwrap_or_else(|| "unknown".into()),
        ));
    }
    Ok(problem)
}

/// Parse without the well-posedness gate (the condition-report command
/// wants the full report even for ill-posed problems).
pub fn parse_problem_text_unchecked(text: &str) -> Result<ProblemSpec, ProblemFileError> {
    let mut interval = None;
    let mut mu = None;
    let mut alpha = None;
    let mut beta: Option<f64> = None;
    let mut k = None;
    let mut adv = None;
    let mut reac = None;
    let mut source_raw: Option<(String, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let (key, value) = stripped.split_once('=').ok_or_else(|| ProblemFileError::Parse {
            line,
            message: "expected key = value".into(),
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "interval" => {
                let toks: Vec<&str> = value
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .flat_map(|t| t.split(".."))
                    .filter(|t| !t.is_empty())
                    .collect();
                if toks.len() != 2 {
                    return Err(ProblemFileError::Parse {
                        line,
                        message: "interval needs two endpoints, e.g. 'interval = 0 1'".into(),
                    });
                }
                let a = toks[0].parse::<f64>().map_err(|_| ProblemFileError::Parse {
                    line,
                    message: format!("invalid interval endpoint '{}'", toks[0]),
                })?;
                let b = toks[1].parse::<f64>().map_err(|_| ProblemFileError::Parse {
                    line,
                    message: format!("invalid interval endpoint '{}'", toks[1]),
                })?;
                interval = Some(Interval::new(a, b).map_err(|e| ProblemFileError::Parse {
                    line,
                    message: e.to_string(),
                })?);
            }
            "mu" => {
                let v = value.parse::<f64>().map_err(|_| ProblemFileError::Parse {
                    line,
                    message: format!("invalid mu '{value}'"),
                })?;
                if !(v > 0.0 && v < 1.0) {
                    return Err(ProblemFileError::Parse {
                        line,
                        message: "mu must lie in (0,1)".into(),
                    });
                }
                mu = Some(v);
            }
            "alpha" => {
                let v = value.parse::<f64>().map_err(|_| ProblemFileError::Parse {
                    line,
                    message: format!("invalid alpha '{value}'"),
                })?;
                if !(v > 0.0 && v < 1.0) {
                    return Err(ProblemFileError::Parse {
                        line,
                        message: "alpha must lie in (0,1)".into(),
                    });
                }
                alpha = Some(v);
            }
            "beta" => {
                let v = value.parse::<f64>().map_err(|_| ProblemFileError::Parse {
                    line,
                    message: format!("invalid beta '{value}'"),
                })?;
                beta = Some(v);
            }
            "k" => k = Some(parse_coefficient(value, line, "k")?),
            "adv" => adv = Some(parse_coefficient(value, line, "adv")?),
            "reac" => reac = Some(parse_coefficient(value, line, "reac")?),
            "source" => source_raw = Some((value.to_string(), line)),
            other => {
                return Err(ProblemFileError::Parse {
                    line,
                    message: format!("unknown key '{other}'"),
                })
            }
        }
    }

    let missing = |what: &str| ProblemFileError::Parse {
        line: 0,
        message: format!("missing required key '{what}'"),
    };
    let interval = interval.ok_or_else(|| missing("interval"))?;
    let mu = mu.ok_or_else(|| missing("mu"))?;
    let alpha = alpha.ok_or_else(|| missing("alpha"))?;
    let beta = beta.unwrap_or(1.0 - alpha);
    if (alpha + beta - 1.0).abs() > 1e-12 {
        return Err(ProblemFileError::Parse {
            line: 0,
            message: "alpha + beta must equal 1".into(),
        });
    }
    let k = k.ok_or_else(|| missing("k"))?;
    let adv = adv.ok_or_else(|| missing("adv"))?;
    let reac = reac.ok_or_else(|| missing("reac"))?;
    let (source_text, source_line) = source_raw.ok_or_else(|| missing("source"))?;
    let source = parse_source(&source_text, source_line, interval)?;

    Ok(ProblemSpec {
        interval,
        mu,
        alpha,
        beta,
        k_coef: k,
        adv_coef: adv,
        reac_coef: reac,
        source,
    })
}
