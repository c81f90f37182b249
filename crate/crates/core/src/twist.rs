//! Increasing families `g_t`: twist margin, comparison with convergents,
//! monotonicity of `r(t)` and the second-order growth estimate at an
//! irrational rotation value.

use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::confrac::{expand_interval, second_order_bound, Convergent, Rational, FIBONACCI_RECIPROCAL_SUM};
use crate::error::{Error, Result};
use crate::family::{member, CircleFamily};
use crate::rotation::{rotation_number_with, CircleLift, RotationEstimate, RotationOptions};

/// `n` points from `a` to `b` inclusive.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` points of `[0, 1)`, one period of a lift.
pub fn period_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / n as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistMargin {
    /// Sampled infimum of `dg_t(x)/dt`.
    pub m: f64,
    pub t_samples: usize,
    pub x_samples: usize,
    /// Where the infimum was attained.
    pub t_min: f64,
    pub x_min: f64,
}

pub fn twist_margin<F: CircleFamily>(family: &F, t_grid: &[f64], x_grid: &[f64]) -> Result<TwistMargin> {
    if t_grid.is_empty() || x_grid.is_empty() {
        return Err(Error::InvalidConfig("grids must be nonempty"));
    }
    let mut best = TwistMargin {
        m: f64::INFINITY,
        t_samples: t_grid.len(),
        x_samples: x_grid.len(),
        t_min: f64::NAN,
        x_min: f64::NAN,
    };
    for &t in t_grid {
        for &x in x_grid {
            let derivative = family.parameter_derivative(t, x);
            if !(derivative > 0.0) {
                return Err(Error::TwistViolation { t, x, derivative });
            }
            if derivative < best.m {
                best.m = derivative;
                best.t_min = t;
                best.x_min = x;
            }
        }
    }
    Ok(best)
}

/// Margin on a 33 x 64 grid over the whole parameter interval.
pub fn default_twist_margin<F: CircleFamily>(family: &F) -> Result<TwistMargin> {
    let (a, b) = family.interval();
    twist_margin(family, &uniform_grid(a, b, 33), &period_grid(64))
}

/// Sampled `inf_x (g2(x) - g1(x))`.
pub fn separation_alpha<G1, G2>(g1: &G1, g2: &G2, x_grid: &[f64]) -> Result<f64>
where
    G1: CircleLift + ?Sized,
    G2: CircleLift + ?Sized,
{
    if x_grid.is_empty() {
        return Err(Error::InvalidConfig("grid must be nonempty"));
    }
    let mut alpha = f64::INFINITY;
    for &x in x_grid {
        let gap = g2.apply(x) - g1.apply(x);
        if !(gap > 0.0) {
            return Err(Error::OrderingViolation { x, gap });
        }
        alpha = alpha.min(gap);
    }
    Ok(alpha)
}

/// A convergent used as a witness between two rotation numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub index: usize,
    pub convergent: Convergent,
    pub value: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub r1: RotationEstimate,
    pub r2: RotationEstimate,
    pub alpha: f64,
    /// `r1 <= r2` within the summed radii.
    pub weak_holds: bool,
    /// `Some` when at least one estimate is lock-free: whether `r1 < r2` is
    /// certified by disjoint error intervals.
    pub strict_certified: Option<bool>,
    /// Excess convergent of `r1` with `q > 1/alpha`: `r1 < p/q <= r2`.
    pub excess: Option<Witness>,
    /// Defect convergent of `r2` with `q > 1/alpha`: `r1 <= p/q < r2`.
    pub defect: Option<Witness>,
    pub pass: bool,
}

/// Compare `r(g1)` and `r(g2)` for `g1 + alpha <= g2`.
///
/// Convergents are taken from the certified expansion of the whole error
/// interval, so one side of each witness inequality holds by construction
/// and the other is checked against the error radius.
pub fn comparison_check<G1, G2>(g1: &G1, g2: &G2, alpha: f64, opts: &RotationOptions) -> Result<ComparisonReport>
where
    G1: CircleLift + ?Sized,
    G2: CircleLift + ?Sized,
{
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidConfig("separation must be positive"));
    }
    let r1 = rotation_number_with(g1, opts)?;
    let r2 = rotation_number_with(g2, opts)?;
    let weak_holds = r1.value <= r2.value + r1.error_radius + r2.error_radius;
    let strict_certified = (!r1.is_locked() || !r2.is_locked()).then(|| r1.upper() < r2.lower());
    let q_min = 1.0 / alpha;

    let excess = if r1.is_locked() {
        None
    } else {
        witness(&r1, q_min, 1).map(|mut w| {
            w.holds = w.value <= r2.upper();
            w
        })
    };
    let defect = if r2.is_locked() {
        None
    } else {
        witness(&r2, q_min, 0).map(|mut w| {
            w.holds = w.value >= r1.lower();
            w
        })
    };
    let pass = weak_holds && excess.as_ref().is_none_or(|w| w.holds) && defect.as_ref().is_none_or(|w| w.holds);
    Ok(ComparisonReport {
        r1,
        r2,
        alpha,
        weak_holds,
        strict_certified,
        excess,
        defect,
        pass,
    })
}

/// First certified convergent of index parity `parity` with `q > q_min`.
fn witness(r: &RotationEstimate, q_min: f64, parity: usize) -> Option<Witness> {
    let lo = Rational::from_f64(r.lower())?;
    let hi = Rational::from_f64(r.upper())?;
    let exp = expand_interval(&lo, &hi, 64).ok()?;
    exp.convergents
        .iter()
        .enumerate()
        .find(|(i, c)| i % 2 == parity && c.q.to_f64().unwrap_or(f64::INFINITY) > q_min)
        .map(|(index, c)| Witness {
            index,
            convergent: c.clone(),
            value: c.to_f64(),
            holds: false,
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondOrderStatus {
    Pass,
    Fail,
    /// `r(tau)` locked to a rational: the estimate does not apply.
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    /// `[tau - delta, tau + delta]`.
    Symmetric,
    /// Sides `1/(m q')` and `1/(m q)` from consecutive convergents of `r(tau)`.
    Convergent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketRow {
    pub kind: BracketKind,
    pub delta: f64,
    pub t1: f64,
    pub t2: f64,
    pub r1: RotationEstimate,
    pub r2: RotationEstimate,
    /// `((v2 - e2) - (v1 + e1)) / (t2 - t1)^2`.
    pub ratio: f64,
    /// Running maximum of `ratio` up to this row.
    pub best_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderReport {
    pub tau: f64,
    pub r_tau: RotationEstimate,
    pub m: f64,
    /// `m^2 / (e^{2F} (1 + e^{2F})^2)`.
    pub bound: f64,
    pub best_ratio: f64,
    pub pass: bool,
    pub status: SecondOrderStatus,
    pub rows: Vec<BracketRow>,
}

/// `0.1 * 2^-k`, `k = 1..=12`.
pub fn default_deltas() -> Vec<f64> {
    (1..=12).map(|k| 0.1 * libm::ldexp(1.0, -k)).collect()
}

/// Lower estimate of `limsup (r(t2) - r(t1)) / (t2 - t1)^2` as `t1 < tau < t2`
/// close in on `tau`, against the bound `m^2 / (e^{2F} (1 + e^{2F})^2)`.
///
/// The family must be increasing. `m` is the sampled twist margin; brackets
/// leaving the parameter interval are skipped.
pub fn second_order_estimate<F: CircleFamily>(
    family: &F,
    tau: f64,
    deltas: &[f64],
    opts: &RotationOptions,
) -> Result<SecondOrderReport> {
    let (a, b) = family.interval();
    if !(tau > a && tau < b) {
        return Err(Error::InvalidConfig("tau must be interior to the parameter interval"));
    }
    if deltas.iter().any(|d| !(*d > 0.0)) || deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidConfig("deltas must be positive and decreasing"));
    }
    let m = default_twist_margin(family)?.m;
    let bound = second_order_bound(m, FIBONACCI_RECIPROCAL_SUM);
    let r_tau = rotation_number_with(&member(family, tau), opts)?;
    let mut report = SecondOrderReport {
        tau,
        r_tau,
        m,
        bound,
        best_ratio: f64::NEG_INFINITY,
        pass: false,
        status: SecondOrderStatus::Inapplicable,
        rows: Vec::new(),
    };
    if r_tau.is_locked() {
        return Ok(report);
    }

    let mut brackets: Vec<(BracketKind, f64, f64, f64)> =
        deltas.iter().map(|&d| (BracketKind::Symmetric, d, tau - d, tau + d)).collect();
    if let (Some(lo), Some(hi)) = (Rational::from_f64(r_tau.lower()), Rational::from_f64(r_tau.upper())) {
        if let Ok(exp) = expand_interval(&lo, &hi, 64) {
            for w in exp.convergents.windows(2) {
                let q = w[0].q.to_f64().unwrap_or(f64::INFINITY);
                let q_next = w[1].q.to_f64().unwrap_or(f64::INFINITY);
                let (left, right) = (1.0 / (m * q_next), 1.0 / (m * q));
                brackets.push((BracketKind::Convergent, left.max(right), tau - left, tau + right));
            }
        }
    }

    for (kind, delta, t1, t2) in brackets {
        if t1 < a || t2 > b || !(t1 < tau && tau < t2) {
            continue;
        }
        let r1 = rotation_number_with(&member(family, t1), opts)?;
        let r2 = rotation_number_with(&member(family, t2), opts)?;
        let width = t2 - t1;
        let ratio = (r2.lower() - r1.upper()) / (width * width);
        report.best_ratio = report.best_ratio.max(ratio);
        report.rows.push(BracketRow {
            kind,
            delta,
            t1,
            t2,
            r1,
            r2,
            ratio,
            best_ratio: report.best_ratio,
        });
    }
    report.pass = report.best_ratio >= bound;
    report.status = if report.pass {
        SecondOrderStatus::Pass
    } else {
        SecondOrderStatus::Fail
    };
    Ok(report)
}

/// A run of consecutive samples locked to the same rational.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub p: i64,
    pub q: u64,
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop1Report {
    pub samples: Vec<(f64, RotationEstimate)>,
    /// Indices `i` where `r(t_{i-1}) > r(t_i)` beyond the summed radii.
    pub decreases: Vec<usize>,
    /// Indices `i` with an unlocked endpoint whose increase is not certified
    /// by disjoint error intervals.
    pub uncertified_strict: Vec<usize>,
    pub plateaus: Vec<Plateau>,
    pub pass: bool,
}

/// `r(t)` must be nondecreasing along an increasing family.
pub fn proposition1_check<F: CircleFamily>(family: &F, t_grid: &[f64], opts: &RotationOptions) -> Result<Prop1Report> {
    if t_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidConfig("parameter grid must be strictly increasing"));
    }
    let samples = t_grid
        .iter()
        .map(|&t| rotation_number_with(&member(family, t), opts).map(|est| (t, est)))
        .collect::<Result<Vec<_>>>()?;
    let mut decreases = Vec::new();
    let mut uncertified_strict = Vec::new();
    for (i, w) in samples.windows(2).enumerate() {
        let (a, b) = (w[0].1, w[1].1);
        if a.value - b.value > a.error_radius + b.error_radius + 1e-12 {
            decreases.push(i + 1);
        }
        if (!a.is_locked() || !b.is_locked()) && !(b.lower() > a.upper()) {
            uncertified_strict.push(i + 1);
        }
    }
    let mut plateaus: Vec<Plateau> = Vec::new();
    for &(t, est) in &samples {
        let Some(lock) = est.lock else { continue };
        match plateaus.last_mut() {
            Some(pl) if pl.p == lock.p && pl.q == lock.q && pl.t_end == prev_t(&samples, t) => {
                pl.t_end = t;
                pl.samples += 1;
            }
            _ => plateaus.push(Plateau {
                p: lock.p,
                q: lock.q,
                t_start: t,
                t_end: t,
                samples: 1,
            }),
        }
    }
    let pass = decreases.is_empty();
    Ok(Prop1Report {
        samples,
        decreases,
        uncertified_strict,
        plateaus,
        pass,
    })
}

fn prev_t(samples: &[(f64, RotationEstimate)], t: f64) -> f64 {
    let i = samples.iter().position(|s| s.0 == t).unwrap_or(0);
    if i == 0 {
        f64::NAN
    } else {
        samples[i - 1].0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confrac::k_epsilon;
    use crate::family::{ArnoldFamily, FnFamily, PonceletFamily, Reversed, RigidFamily};
    use core::f64::consts::{PI, TAU};

    fn golden() -> f64 {
        (libm::sqrt(5.0) - 1.0) / 2.0
    }

    #[test]
    fn margins_of_simple_families() {
        let arnold = ArnoldFamily::new(0.6).unwrap();
        let m = default_twist_margin(&arnold).unwrap();
        assert_eq!(m.m, 1.0);
        let quad = FnFamily::new(0.0, 1.0, |t: f64, x: f64| x + t * t + t).unwrap();
        let m = default_twist_margin(&quad).unwrap();
        assert!((m.m - 1.0).abs() < 1e-8);
        assert!(m.t_min < 1e-12);
    }

    #[test]
    fn concentric_margin_matches_arccos() {
        let fam = Reversed(PonceletFamily::new(1.0, 0.0).unwrap());
        let grid = uniform_grid(-0.9, 0.0, 10);
        let m = twist_margin(&fam, &grid, &period_grid(8)).unwrap();
        // d/ds arccos(-s)/pi = 1/(pi sqrt(1 - s^2)), smallest at s = 0
        assert!((m.m - 1.0 / PI).abs() < 1e-8);
    }

    #[test]
    fn decreasing_family_violates_twist() {
        let fam = PonceletFamily::new(1.0, 0.2).unwrap();
        let err = twist_margin(&fam, &[0.3], &[0.0]).unwrap_err();
        assert!(matches!(err, Error::TwistViolation { .. }));
    }

    #[test]
    fn separation_values() {
        let g1 = |x: f64| x + 0.3;
        let g2 = |x: f64| x + 0.5;
        assert!((separation_alpha(&g1, &g2, &period_grid(16)).unwrap() - 0.2).abs() < 1e-15);
        assert!(separation_alpha(&g2, &g1, &period_grid(16)).is_err());

        let arnold = ArnoldFamily::new(0.5).unwrap();
        let a = separation_alpha(&member(arnold, 0.2), &member(arnold, 0.35), &period_grid(64)).unwrap();
        assert!((a - 0.15).abs() < 1e-14);
    }

    #[test]
    fn margin_separates_arnold_and_poncelet() {
        let arnold = ArnoldFamily::new(0.9).unwrap();
        let m = default_twist_margin(&arnold).unwrap().m;
        let fam = Reversed(PonceletFamily::new(1.0, 0.3).unwrap());
        let mp = twist_margin(&fam, &uniform_grid(-0.6, 0.0, 13), &period_grid(32)).unwrap().m;
        for (t1, t2) in [(0.1, 0.2), (0.4, 0.41), (0.0, 1.0)] {
            let a = separation_alpha(&member(arnold, t1), &member(arnold, t2), &period_grid(64)).unwrap();
            assert!(a >= m * (t2 - t1) - 1e-15);
        }
        for (s1, s2) in [(-0.6, -0.5), (-0.3, -0.05)] {
            let a = separation_alpha(&member(fam, s1), &member(fam, s2), &period_grid(64)).unwrap();
            assert!(a >= mp * (s2 - s1) * (1.0 - 1e-9));
        }
    }

    #[test]
    fn comparison_golden_shift() {
        let g1 = |x: f64| x + golden();
        let g2 = |x: f64| x + golden() + 0.01;
        let alpha = separation_alpha(&g1, &g2, &period_grid(16)).unwrap();
        let rep = comparison_check(&g1, &g2, alpha, &RotationOptions::default()).unwrap();
        assert!(rep.pass);
        let w = rep.excess.unwrap();
        assert!(w.convergent.q > num_bigint::BigInt::from(100));
        assert!(w.value > golden() && w.value <= golden() + 0.01);
        assert_eq!(rep.strict_certified, Some(true));
    }

    #[test]
    fn comparison_locked_rationals() {
        let g1 = |x: f64| x + 1.0 / 3.0;
        let g2 = |x: f64| x + 2.0 / 3.0;
        let rep = comparison_check(&g1, &g2, 1.0 / 3.0, &RotationOptions::default()).unwrap();
        assert!(rep.weak_holds && rep.pass);
        assert!(rep.excess.is_none() && rep.defect.is_none());
        assert_eq!(rep.strict_certified, None);
    }

    #[test]
    fn comparison_arnold() {
        let arnold = ArnoldFamily::new(0.3).unwrap();
        let (g1, g2) = (member(arnold, 0.37), member(arnold, 0.42));
        let alpha = separation_alpha(&g1, &g2, &period_grid(64)).unwrap();
        let rep = comparison_check(&g1, &g2, alpha, &RotationOptions::default()).unwrap();
        assert!(rep.weak_holds);
        assert!(rep.pass);
        if !rep.r1.is_locked() || !rep.r2.is_locked() {
            assert_eq!(rep.strict_certified, Some(true));
        }
    }

    #[test]
    fn rigid_second_order_diverges() {
        let rigid = RigidFamily::new(0.0, 1.0).unwrap();
        let rep = second_order_estimate(&rigid, golden(), &default_deltas(), &RotationOptions::default()).unwrap();
        assert_eq!(rep.status, SecondOrderStatus::Pass);
        assert_eq!(rep.m, 1.0);
        assert!(rep.best_ratio > 1.0);
        for w in rep.rows.windows(2) {
            assert!(w[1].best_ratio >= w[0].best_ratio);
        }
        assert!(rep.rows.iter().any(|r| r.kind == BracketKind::Convergent));
    }

    #[test]
    fn locked_tau_is_inapplicable() {
        let arnold = ArnoldFamily::new(0.7).unwrap();
        let rep = second_order_estimate(&arnold, 0.5, &default_deltas(), &RotationOptions::default()).unwrap();
        assert_eq!(rep.status, SecondOrderStatus::Inapplicable);
        assert!(!rep.pass);
        assert!(rep.rows.is_empty());
    }

    #[test]
    fn bound_is_k_epsilon_limit() {
        let f = FIBONACCI_RECIPROCAL_SUM;
        let bound = second_order_bound(1.0, f);
        assert!((bound - k_epsilon(1e-14, f)).abs() <= 1e-12 * bound);
    }

    #[test]
    fn second_order_rejects_bad_input() {
        let rigid = RigidFamily::new(0.0, 1.0).unwrap();
        let opts = RotationOptions::default();
        assert!(second_order_estimate(&rigid, 0.0, &default_deltas(), &opts).is_err());
        assert!(second_order_estimate(&rigid, 0.5, &[0.01, 0.02], &opts).is_err());
    }

    #[test]
    fn prop1_rigid_and_arnold() {
        let rigid = RigidFamily::new(0.0, 1.0).unwrap();
        let grid: Vec<f64> = (0..20).map(|i| 0.013 + i as f64 * 0.049).collect();
        let rep = proposition1_check(&rigid, &grid, &RotationOptions::with_tol(1e-5)).unwrap();
        assert!(rep.pass);
        assert!(rep.uncertified_strict.is_empty());

        let arnold = ArnoldFamily::new(0.9).unwrap();
        let grid = uniform_grid(0.45, 0.55, 11);
        let rep = proposition1_check(&arnold, &grid, &RotationOptions::with_tol(1e-5)).unwrap();
        assert!(rep.pass);
        let half = rep.plateaus.iter().find(|p| (p.p, p.q) == (1, 2)).unwrap();
        assert!(half.samples >= 3);
    }

    #[test]
    fn prop1_reversed_poncelet() {
        let fam = Reversed(PonceletFamily::new(1.0, 0.0).unwrap());
        let grid = uniform_grid(-1.0, 0.0, 9);
        let rep = proposition1_check(&fam, &grid, &RotationOptions::with_tol(1e-5)).unwrap();
        assert!(rep.pass);
        for (s, est) in &rep.samples {
            assert!((est.value - libm::acos(-s) / PI).abs() <= est.error_radius + 1e-9);
        }
    }

    #[test]
    fn prop1_flags_decreasing_family() {
        let fam = FnFamily::new(0.0, 1.0, |t: f64, x: f64| x - t + 0.01 * libm::sin(TAU * x)).unwrap();
        let rep = proposition1_check(&fam, &[0.1, 0.3], &RotationOptions::with_tol(1e-5)).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.decreases, [1]);
    }
}
