//! Parameter scans over a family: the rotation-number staircase and
//! bisection for a prescribed rotation value.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::family::{member, CircleFamily};
use crate::rotation::{lock_with, rotation_number_with, CircleLift, RationalLock, RotationEstimate, RotationOptions};

/// Slack added to the summed error radii before a reversal counts.
const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    /// Index of the second sample of the offending pair.
    pub index: usize,
    pub t: f64,
    /// How far the pair moves against `direction`, beyond zero.
    pub drop: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    pub samples: Vec<(f64, RotationEstimate)>,
    pub direction: Direction,
    pub violations: Vec<Violation>,
}

impl Staircase {
    /// Classify already computed samples; `t` must be sorted.
    pub fn from_samples(samples: Vec<(f64, RotationEstimate)>) -> Self {
        let direction = match (samples.first(), samples.last()) {
            (Some((_, a)), Some((_, b))) if b.value > a.value => Direction::Increasing,
            (Some((_, a)), Some((_, b))) if b.value < a.value => Direction::Decreasing,
            _ => Direction::Constant,
        };
        let sign = match direction {
            Direction::Decreasing => -1.0,
            _ => 1.0,
        };
        let violations = samples
            .windows(2)
            .enumerate()
            .filter_map(|(i, w)| {
                let (_, a) = w[0];
                let (t, b) = w[1];
                let drop = sign * (a.value - b.value);
                let allowed = a.error_radius + b.error_radius + MONOTONE_SLACK;
                (drop > allowed).then_some(Violation { index: i + 1, t, drop })
            })
            .collect();
        Self {
            samples,
            direction,
            violations,
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn ensure_monotone(&self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::MonotonicityViolation {
                index: v.index,
                t: v.t,
                drop: v.drop,
            }),
        }
    }
}

/// Rotation numbers of `g_t` over a sorted grid.
pub fn staircase<F: CircleFamily>(family: &F, t_grid: &[f64], opts: &RotationOptions) -> Result<Staircase> {
    if t_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidConfig("parameter grid must be strictly increasing"));
    }
    let samples = t_grid
        .iter()
        .map(|&t| rotation_number_with(&member(family, t), opts).map(|est| (t, est)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Staircase::from_samples(samples))
}

/// Parameter at which `g_t` has rotation number `p/q`, with its certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationSolution {
    pub t: f64,
    pub lock: RationalLock,
    /// Width of the final bisection bracket.
    pub bracket_width: f64,
}

/// Bisection on `t` for `r(g_t) = p/q`.
///
/// The decision function `h(t) = g_t^q(0) - p` is monotone along a monotone
/// family and vanishes only where `g_t` has a `p/q` periodic orbit, so its
/// sign tells on which side of the target `r(t)` lies. Bisection runs until
/// the bracket is narrower than `tol_t` and a lock certificate is found, or
/// until the bracket cannot be split any further in floating point.
pub fn solve_rotation<F: CircleFamily>(
    family: &F,
    p: i64,
    q: u64,
    bracket: (f64, f64),
    tol_t: f64,
    opts: &RotationOptions,
) -> Result<RotationSolution> {
    if q == 0 {
        return Err(Error::InvalidConfig("denominator must be positive"));
    }
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::InvalidConfig("bracket must satisfy lo < hi"));
    }
    let h = |t: f64| member(family, t).iterate(0.0, q) - p as f64;
    let certify = |t: f64, width: f64| {
        lock_with(&member(family, t), p, q, opts.lock_grid, opts.lock_tol).map(|lock| RotationSolution {
            t,
            lock,
            bracket_width: width,
        })
    };

    let mut h_lo = h(lo);
    let h_hi = h(hi);
    if !(h_lo.is_finite() && h_hi.is_finite()) {
        return Err(Error::ContractViolation {
            what: "non-finite value",
            x: 0.0,
        });
    }
    for (t, ht) in [(lo, h_lo), (hi, h_hi)] {
        if libm::fabs(ht) < opts.lock_tol {
            if let Some(sol) = certify(t, 0.0) {
                return Ok(sol);
            }
        }
    }
    if (h_lo > 0.0) == (h_hi > 0.0) {
        return Err(Error::NoSolution { p, q, lo, hi });
    }

    loop {
        let mid = 0.5 * (lo + hi);
        let collapsed = mid <= lo || mid >= hi;
        if !collapsed {
            let h_mid = h(mid);
            if h_mid == 0.0 {
                lo = mid;
                hi = mid;
            } else if (h_mid > 0.0) == (h_lo > 0.0) {
                lo = mid;
                h_lo = h_mid;
            } else {
                hi = mid;
            }
        }
        let width = hi - lo;
        if width < tol_t || collapsed {
            let t = 0.5 * (lo + hi);
            if let Some(sol) = certify(t, width) {
                return Ok(sol);
            }
            if collapsed || width == 0.0 {
                return Err(Error::ResidualFailure {
                    t,
                    residual: libm::fabs(h(t)),
                });
            }
        }
    }
}

/// Bisection on `t` for an arbitrary real rotation value.
///
/// Stops when the bracket is narrower than `tol_t` or when the estimate at
/// the midpoint can no longer be separated from `target` by its error radius.
pub fn locate_rotation_value<F: CircleFamily>(
    family: &F,
    target: f64,
    bracket: (f64, f64),
    tol_t: f64,
    opts: &RotationOptions,
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::InvalidConfig("bracket must satisfy lo < hi"));
    }
    let est = |t: f64| rotation_number_with(&member(family, t), opts);
    let r_lo = est(lo)?;
    let r_hi = est(hi)?;
    let increasing = r_hi.value >= r_lo.value;
    let (below, above) = if increasing { (r_lo, r_hi) } else { (r_hi, r_lo) };
    if target < below.lower() || target > above.upper() {
        return Err(Error::NoSolution { p: 0, q: 0, lo, hi });
    }
    while hi - lo > tol_t {
        let mid = 0.5 * (lo + hi);
        let r = est(mid)?;
        if r.lower() > target {
            if increasing {
                hi = mid
            } else {
                lo = mid
            }
        } else if r.upper() < target {
            if increasing {
                lo = mid
            } else {
                hi = mid
            }
        } else {
            return Ok(mid);
        }
    }
    Ok(0.5 * (lo + hi))
}
