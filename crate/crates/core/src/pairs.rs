//! `n`-Poncelet pairs: location by bisection on the inner radius, closure
//! verification and the totient count.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::{member, CircleFamily, PonceletFamily};
use crate::geometry::{circular_distance, poncelet_map_geometric, PonceletConfig};
use crate::rotation::{rotation_number_with, RotationOptions};
use crate::scan::solve_rotation;

/// A closed orbit after `n` steps is accepted below this angular distance.
pub const CLOSURE_TOL: f64 = 1e-8;
/// No intermediate step may come closer than this to the start.
pub const EARLY_RETURN_TOL: f64 = 1e-4;

/// Euler's totient by trial division.
pub fn euler_totient(n: u64) -> u64 {
    let mut m = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PonceletPair {
    /// Inner radius.
    pub t: f64,
    /// Period.
    pub n: u64,
    /// Winding: the orbit turns `p` times around `K` in `n` steps.
    pub p: u64,
    pub closure_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountOptions {
    pub tol_t: f64,
    pub starts: usize,
    pub seed: u64,
    pub rotation: RotationOptions,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            tol_t: 1e-12,
            starts: 20,
            seed: 0,
            rotation: RotationOptions::default(),
        }
    }
}

/// Seeded start angles, uniform in `[0, 2pi)`.
pub fn closure_starts(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.0..TAU)).collect()
}

/// Iterate the tangent construction `n` times from every start.
///
/// Returns the largest distance between the start and the `n`-th point.
/// Fails if some intermediate point returns within [`EARLY_RETURN_TOL`] or
/// some orbit does not close within [`CLOSURE_TOL`].
pub fn verify_closure(pair: &PonceletPair, base: &PonceletConfig, starts: &[f64]) -> Result<f64> {
    let cfg = base.with_inner_radius(pair.t)?;
    let mut worst: f64 = 0.0;
    for &start in starts {
        let mut theta = start;
        for step in 1..=pair.n {
            theta = poncelet_map_geometric(theta, &cfg)?.theta;
            let distance = circular_distance(theta, start, TAU);
            if step < pair.n && distance <= EARLY_RETURN_TOL {
                return Err(Error::PorismViolation {
                    n: pair.n,
                    step,
                    start,
                    distance,
                });
            }
            if step == pair.n {
                if !(distance < CLOSURE_TOL) {
                    return Err(Error::PorismViolation {
                        n: pair.n,
                        step,
                        start,
                        distance,
                    });
                }
                worst = worst.max(distance);
            }
        }
    }
    Ok(worst)
}

/// The pairs found for one period together with the predicted count.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCount {
    pub n: u64,
    pub pairs: Vec<PonceletPair>,
    /// `e(n) / 2`.
    pub expected: u64,
}

impl PairCount {
    pub fn is_consistent(&self) -> bool {
        self.pairs.len() as u64 == self.expected
    }

    pub fn verify(&self) -> Result<()> {
        if self.is_consistent() {
            Ok(())
        } else {
            Err(Error::CountMismatch {
                n: self.n,
                found: self.pairs.len(),
                expected: self.expected,
            })
        }
    }
}

/// The fractions `p/n` in lowest terms strictly inside the image of `r`.
///
/// The image is bounded by the rotation numbers of the end circles: `1/2`
/// for the degenerate circle `t = 0` and an integer at internal tangency.
pub fn candidate_windings(family: &PonceletFamily, n: u64, opts: &RotationOptions) -> Result<Vec<u64>> {
    let (a, b) = family.interval();
    let r_a = rotation_number_with(&member(family, a), opts)?;
    let r_b = rotation_number_with(&member(family, b), opts)?;
    let (lo, hi) = (r_a.value.min(r_b.value), r_a.value.max(r_b.value));
    Ok((0..=n)
        .filter(|p| p.gcd(&n) == 1)
        .filter(|&p| {
            let v = p as f64 / n as f64;
            v > lo && v < hi
        })
        .collect())
}

/// Locate every `n`-Poncelet pair of the family `(R, c, t)`, `t in (0, R - c]`.
pub fn count_poncelet_pairs(base: &PonceletConfig, n: u64, opts: &CountOptions) -> Result<PairCount> {
    if n < 3 {
        return Err(Error::InvalidConfig("period must be at least 3"));
    }
    let family = PonceletFamily::from_config(base);
    let bracket = family.interval();
    let starts = closure_starts(opts.seed ^ n, opts.starts);
    let mut pairs = Vec::new();
    for p in candidate_windings(&family, n, &opts.rotation)? {
        let sol = solve_rotation(&family, p as i64, n, bracket, opts.tol_t, &opts.rotation)?;
        if sol.t <= 0.0 {
            continue;
        }
        let mut pair = PonceletPair {
            t: sol.t,
            n,
            p,
            closure_residual: f64::NAN,
        };
        pair.closure_residual = verify_closure(&pair, base, &starts)?;
        pairs.push(pair);
    }
    Ok(PairCount {
        n,
        pairs,
        expected: euler_totient(n) / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn totient_values() {
        assert_eq!(euler_totient(1), 1);
        assert_eq!(euler_totient(3), 2);
        assert_eq!(euler_totient(12), 4);
        assert_eq!(euler_totient(97), 96);
        assert_eq!(euler_totient(36), 12);
    }

    #[test]
    fn totient_matches_gcd_count() {
        for n in 1..200u64 {
            let brute = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_totient(n), brute, "n = {n}");
        }
    }

    #[test]
    fn closure_for_triangle_and_diameter() {
        let base = PonceletConfig::concentric(1.0, 0.5).unwrap();
        let starts = closure_starts(1, 20);
        let pair = PonceletPair {
            t: 0.5,
            n: 3,
            p: 1,
            closure_residual: 0.0,
        };
        assert!(verify_closure(&pair, &base, &starts).unwrap() < 1e-10);
        let diam = PonceletPair {
            t: 0.0,
            n: 2,
            p: 1,
            closure_residual: 0.0,
        };
        assert!(verify_closure(&diam, &base, &starts).unwrap() < 1e-12);
    }

    #[test]
    fn early_return_is_rejected() {
        // t = 0.5 closes after 3 steps, so asking for 6 hits the start at step 3.
        let base = PonceletConfig::concentric(1.0, 0.5).unwrap();
        let pair = PonceletPair {
            t: 0.5,
            n: 6,
            p: 2,
            closure_residual: 0.0,
        };
        let err = verify_closure(&pair, &base, &closure_starts(0, 3)).unwrap_err();
        assert!(matches!(err, Error::PorismViolation { step: 3, .. }));
    }

    #[test]
    fn non_closure_is_rejected() {
        let base = PonceletConfig::concentric(1.0, 0.5).unwrap();
        let pair = PonceletPair {
            t: 0.45,
            n: 3,
            p: 1,
            closure_residual: 0.0,
        };
        assert!(verify_closure(&pair, &base, &closure_starts(0, 3)).is_err());
    }

    #[test]
    fn concentric_pentagons() {
        let base = PonceletConfig::concentric(1.0, 0.0).unwrap();
        let count = count_poncelet_pairs(&base, 5, &CountOptions::default()).unwrap();
        count.verify().unwrap();
        let mut radii: Vec<f64> = count.pairs.iter().map(|p| p.t).collect();
        radii.sort_by(f64::total_cmp);
        assert!((radii[0] - libm::cos(2.0 * PI / 5.0)).abs() < 1e-12);
        assert!((radii[1] - libm::cos(PI / 5.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_small_periods() {
        let base = PonceletConfig::concentric(1.0, 0.0).unwrap();
        assert!(count_poncelet_pairs(&base, 2, &CountOptions::default()).is_err());
    }
}
