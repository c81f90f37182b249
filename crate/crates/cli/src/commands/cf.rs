use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use poncelet_core::confrac::{
    balanced_pairs, expand_f64, expand_rational, remainder_series, remainder_series_exact, ContinuedFractionExpansion,
    Convergent, Rational, RemainderRecord,
};
use poncelet_core::FIBONACCI_RECIPROCAL_SUM;

use crate::args::{CfArgs, Common, Format};
use crate::error::{CliError, CliResult};
use crate::output::{emit, real, Output, RunConfig, Table};

#[derive(Debug, Clone, PartialEq)]
pub enum CfInput {
    Float(f64),
    Exact(Rational),
}

/// `golden`, `p/q` or a decimal.
pub fn parse_input(s: &str) -> CliResult<CfInput> {
    let s = s.trim();
    if s == "golden" {
        return Ok(CfInput::Float((5f64.sqrt() - 1.0) / 2.0));
    }
    if let Some((p, q)) = s.split_once('/') {
        let bad = || CliError::Config(format!("cannot read fraction {s:?}"));
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        return Ok(CfInput::Exact(Rational::from_integers(p, q)?));
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(CfInput::Float(x)),
        _ => Err(CliError::Config(format!("cannot read number {s:?}"))),
    }
}

/// Uniform 53-bit dyadics in `(0, 1)`.
pub fn random_dyadics(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        if x > 0.0 {
            out.push(x);
        }
    }
    out
}

#[derive(Debug, Serialize)]
struct ConvergentOut {
    p: String,
    q: String,
}

impl From<&Convergent> for ConvergentOut {
    fn from(c: &Convergent) -> Self {
        Self {
            p: c.p.to_string(),
            q: c.q.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
struct RemainderOut {
    n: usize,
    log_qn: f64,
    gauss_sum: f64,
    remainder: f64,
    within_bound: bool,
}

impl From<&RemainderRecord> for RemainderOut {
    fn from(r: &RemainderRecord) -> Self {
        Self {
            n: r.n,
            log_qn: r.log_qn,
            gauss_sum: r.gauss_sum,
            remainder: r.remainder,
            within_bound: r.within_bound(),
        }
    }
}

#[derive(Debug, Serialize)]
struct PairOut {
    epsilon: f64,
    index: usize,
    excess: String,
    defect: String,
    ratio: f64,
    gap_holds: bool,
}

#[derive(Debug, Serialize)]
struct XReport {
    input: String,
    value: f64,
    a0: Option<String>,
    quotients: Vec<String>,
    convergents: Vec<ConvergentOut>,
    complete: bool,
    reliable_terms: usize,
    remainders: Vec<RemainderOut>,
    pairs: Vec<PairOut>,
    error: Option<String>,
}

impl XReport {
    fn bound_violations(&self) -> usize {
        self.remainders.iter().filter(|r| !r.within_bound).count()
    }

    fn gap_failures(&self) -> usize {
        self.pairs.iter().filter(|p| !p.gap_holds).count()
    }
}

#[derive(Debug, Serialize)]
struct Verdict<'a> {
    config: RunConfig<'a, CfArgs>,
    fibonacci_constant: f64,
    inputs: usize,
    precision_errors: usize,
    bound_violations: usize,
    gap_failures: usize,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    #[serde(flatten)]
    verdict: Verdict<'a>,
    reports: Vec<XReport>,
}

fn analyse(label: String, input: &CfInput, args: &CfArgs) -> XReport {
    let (value, expansion, remainders) = match input {
        CfInput::Float(x) => (*x, expand_f64(*x, args.n_max), remainder_series(*x, args.n_max)),
        CfInput::Exact(r) => (
            r.to_f64(),
            Ok(expand_rational(r, args.n_max)),
            remainder_series_exact(r, args.n_max),
        ),
    };
    let mut report = XReport {
        input: label,
        value,
        a0: None,
        quotients: Vec::new(),
        convergents: Vec::new(),
        complete: false,
        reliable_terms: 0,
        remainders: Vec::new(),
        pairs: Vec::new(),
        error: None,
    };
    let exp: ContinuedFractionExpansion = match expansion {
        Ok(exp) => exp,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    report.a0 = Some(exp.a0.to_string());
    report.quotients = exp.partial_quotients.iter().map(|a| a.to_string()).collect();
    report.convergents = exp.convergents.iter().map(ConvergentOut::from).collect();
    report.complete = exp.complete;
    report.reliable_terms = exp.len();
    match remainders {
        Ok(recs) => report.remainders = recs.iter().map(RemainderOut::from).collect(),
        Err(e) => report.error = Some(e.to_string()),
    }
    for &eps in &args.eps {
        for pair in balanced_pairs(&exp, eps) {
            report.pairs.push(PairOut {
                epsilon: eps,
                index: pair.index,
                excess: format!("{}/{}", pair.excess.p, pair.excess.q),
                defect: format!("{}/{}", pair.defect.p, pair.defect.q),
                ratio: pair.ratio,
                gap_holds: pair.gap_holds,
            });
        }
    }
    report
}

pub fn run(common: &Common, args: &CfArgs) -> CliResult<bool> {
    if args.eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(CliError::Config("every --eps must lie in (0, 1)".into()));
    }
    let inputs: Vec<(String, CfInput)> = match (&args.x, args.random) {
        (Some(x), None) => vec![(x.clone(), parse_input(x)?)],
        (None, Some(n)) => random_dyadics(common.seed, n)
            .into_iter()
            .map(|x| (real(x), CfInput::Float(x)))
            .collect(),
        _ => return Err(CliError::Config("give exactly one of --x and --random".into())),
    };
    let reports: Vec<XReport> = inputs
        .into_par_iter()
        .map(|(label, input)| analyse(label, &input, args))
        .collect();

    let mut table = Table::new(&[
        "input", "n", "a_n", "p_n", "q_n", "log_qn", "gauss_sum", "remainder", "within_bound",
    ]);
    for r in &reports {
        for rec in &r.remainders {
            let conv = &r.convergents[rec.n];
            table.push(vec![
                r.input.clone(),
                rec.n.to_string(),
                r.quotients[rec.n - 1].clone(),
                conv.p.clone(),
                conv.q.clone(),
                real(rec.log_qn),
                real(rec.gauss_sum),
                real(rec.remainder),
                rec.within_bound.to_string(),
            ]);
        }
    }
    let precision_errors = reports.iter().filter(|r| r.error.is_some()).count();
    let bound_violations: usize = reports.iter().map(XReport::bound_violations).sum();
    let gap_failures: usize = reports.iter().map(XReport::gap_failures).sum();
    let pass = bound_violations == 0 && gap_failures == 0;
    let inputs = reports.len();
    let verdict = || Verdict {
        config: RunConfig {
            command: "cf",
            common,
            params: args,
        },
        fibonacci_constant: FIBONACCI_RECIPROCAL_SUM,
        inputs,
        precision_errors,
        bound_violations,
        gap_failures,
        pass,
    };
    let output = Output {
        report: Report {
            verdict: verdict(),
            reports,
        },
        table,
        verdict: verdict(),
        passed: pass,
    };
    emit(common, Format::Json, &output)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inputs() {
        assert_eq!(parse_input("355/113").unwrap(), CfInput::Exact(Rational::from_integers(355, 113).unwrap()));
        assert_eq!(parse_input("0.25").unwrap(), CfInput::Float(0.25));
        assert!(matches!(parse_input("golden").unwrap(), CfInput::Float(x) if (x - 0.618).abs() < 1e-3));
        assert!(parse_input("1/0").is_err());
        assert!(parse_input("abc").is_err());
        assert!(parse_input("inf").is_err());
    }

    #[test]
    fn dyadics_are_reproducible() {
        let a = random_dyadics(7, 5);
        assert_eq!(a, random_dyadics(7, 5));
        assert_ne!(a, random_dyadics(8, 5));
        assert!(a.iter().all(|x| *x > 0.0 && *x < 1.0 && (x * 2f64.powi(53)).fract() == 0.0));
    }
}
