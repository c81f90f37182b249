//! Rotation numbers of lifts of orientation-preserving circle homeomorphisms.

use num_integer::Integer;

use crate::error::{Error, Result};

/// A lift `g: R -> R` of a circle homeomorphism: continuous, increasing and
/// `g(x + 1) = g(x) + 1`.
pub trait CircleLift {
    fn apply(&self, x: f64) -> f64;

    /// `g^n(x)` without reduction.
    fn iterate(&self, mut x: f64, n: u64) -> f64 {
        for _ in 0..n {
            x = self.apply(x);
        }
        x
    }
}

impl<F: Fn(f64) -> f64> CircleLift for F {
    fn apply(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Certificate that `g^q(x0) = x0 + p` up to `residual`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalLock {
    pub p: i64,
    pub q: u64,
    pub x0: f64,
    pub residual: f64,
}

impl RationalLock {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// The rotation number lies in `[value - error_radius, value + error_radius]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationEstimate {
    pub value: f64,
    pub error_radius: f64,
    pub iterations: u64,
    pub lock: Option<RationalLock>,
}

impl RotationEstimate {
    pub fn lower(&self) -> f64 {
        self.value - self.error_radius
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_radius
    }

    pub fn is_locked(&self) -> bool {
        self.lock.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationOptions {
    /// Target error radius; the orbit is iterated `ceil(1/tol)` times.
    pub tol: f64,
    pub x0: f64,
    /// Largest denominator tried by the lock scan.
    pub q_max: u64,
    /// Number of grid points used by [`detect_rational_lock`].
    pub lock_grid: usize,
    /// Residual accepted for a periodic point.
    pub lock_tol: f64,
}

impl Default for RotationOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            x0: 0.0,
            q_max: 64,
            lock_grid: 512,
            lock_tol: 1e-12,
        }
    }
}

impl RotationOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

const CONTRACT_SAMPLES: usize = 64;
const PERIODICITY_TOL: f64 = 1e-12;

/// Sampled check of monotonicity and `g(x + 1) = g(x) + 1`.
pub fn check_lift<G: CircleLift + ?Sized>(g: &G) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=CONTRACT_SAMPLES {
        let x = i as f64 / CONTRACT_SAMPLES as f64;
        let gx = g.apply(x);
        if !gx.is_finite() {
            return Err(Error::ContractViolation { what: "non-finite value", x });
        }
        if gx <= prev {
            return Err(Error::ContractViolation { what: "not increasing", x });
        }
        prev = gx;
        let shifted = g.apply(x + 1.0);
        if libm::fabs(shifted - gx - 1.0) >= PERIODICITY_TOL {
            return Err(Error::ContractViolation { what: "g(x+1) != g(x) + 1", x });
        }
    }
    Ok(())
}

/// Orbit state: `x` in `[0, 1)` plus the integer part accumulated so far.
struct Orbit {
    x: f64,
    winding: i64,
    steps: u64,
}

impl Orbit {
    fn start(x0: f64) -> Self {
        let fl = libm::floor(x0);
        Self {
            x: x0 - fl,
            winding: fl as i64,
            steps: 0,
        }
    }

    fn advance<G: CircleLift + ?Sized>(&mut self, g: &G, n: u64) -> Result<()> {
        for _ in 0..n {
            let y = g.apply(self.x);
            if !y.is_finite() {
                return Err(Error::ContractViolation {
                    what: "non-finite value",
                    x: self.x,
                });
            }
            let fl = libm::floor(y);
            self.winding += fl as i64;
            self.x = y - fl;
            if self.x >= 1.0 {
                self.x -= 1.0;
                self.winding += 1;
            }
        }
        self.steps += n;
        Ok(())
    }

    fn displacement(&self, x0: f64) -> f64 {
        self.winding as f64 + (self.x - x0)
    }
}

/// `(g^n(x0) - x0) / n` with the rigorous radius `1/n`, preceded by a
/// rational-lock scan over denominators up to `q_max`.
///
/// A short prescan of `4 q_max^2` iterations bounds the rotation number to an
/// interval; only fractions `p/q` inside it are tested for a periodic orbit.
pub fn rotation_number_with<G: CircleLift + ?Sized>(g: &G, opts: &RotationOptions) -> Result<RotationEstimate> {
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::InvalidConfig("tolerance must be positive"));
    }
    check_lift(g)?;
    let total = libm::ceil(1.0 / opts.tol).max(1.0) as u64;
    let prescan = total.min(4 * opts.q_max * opts.q_max).max(1);

    let mut orbit = Orbit::start(opts.x0);
    orbit.advance(g, prescan)?;
    let start = opts.x0 - libm::floor(opts.x0);
    let rough = orbit.displacement(start) / prescan as f64;
    let radius = 1.0 / prescan as f64;

    if let Some(lock) = scan_locks(g, rough - radius, rough + radius, opts) {
        return Ok(RotationEstimate {
            value: lock.value(),
            error_radius: 0.0,
            iterations: prescan,
            lock: Some(lock),
        });
    }

    orbit.advance(g, total - prescan)?;
    Ok(RotationEstimate {
        value: orbit.displacement(start) / total as f64,
        error_radius: 1.0 / total as f64,
        iterations: total,
        lock: None,
    })
}

/// Convenience form with default lock settings.
pub fn rotation_number<G: CircleLift + ?Sized>(g: &G, x0: f64, tol: f64) -> Result<RotationEstimate> {
    rotation_number_with(
        g,
        &RotationOptions {
            tol,
            x0,
            ..RotationOptions::default()
        },
    )
}

fn scan_locks<G: CircleLift + ?Sized>(g: &G, lo: f64, hi: f64, opts: &RotationOptions) -> Option<RationalLock> {
    for q in 1..=opts.q_max {
        let qf = q as f64;
        let p_lo = libm::ceil(lo * qf) as i64;
        let p_hi = libm::floor(hi * qf) as i64;
        for p in p_lo..=p_hi {
            if p.gcd(&(q as i64)) != 1 {
                continue;
            }
            if let Some(lock) = lock_with(g, p, q, opts.lock_grid, opts.lock_tol) {
                return Some(lock);
            }
        }
    }
    None
}

/// Search for `x0` with `g^q(x0) = x0 + p`.
///
/// `d(x) = g^q(x) - x - p` is sampled on 512 points of `[0, 1)`; a sign
/// change is refined by bisection. `None` is not a proof that no periodic
/// orbit exists.
pub fn detect_rational_lock<G: CircleLift + ?Sized>(g: &G, p: i64, q: u64) -> Option<RationalLock> {
    let opts = RotationOptions::default();
    lock_with(g, p, q, opts.lock_grid, opts.lock_tol)
}

pub(crate) fn lock_with<G: CircleLift + ?Sized>(
    g: &G,
    p: i64,
    q: u64,
    grid: usize,
    tol: f64,
) -> Option<RationalLock> {
    if q == 0 || grid == 0 {
        return None;
    }
    let d = |x: f64| g.iterate(x, q) - x - p as f64;
    let found = |x0: f64, residual: f64| RationalLock { p, q, x0, residual };

    let mut prev_x = 0.0;
    let mut prev_d = d(0.0);
    if libm::fabs(prev_d) < tol {
        return Some(found(0.0, libm::fabs(prev_d)));
    }
    for i in 1..=grid {
        let x = i as f64 / grid as f64;
        let dx = d(x);
        if !dx.is_finite() {
            return None;
        }
        if libm::fabs(dx) < tol {
            return Some(found(x, libm::fabs(dx)));
        }
        if (dx > 0.0) != (prev_d > 0.0) {
            let (mut a, mut b, mut da) = (prev_x, x, prev_d);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let dm = d(m);
                if libm::fabs(dm) < tol {
                    return Some(found(m, libm::fabs(dm)));
                }
                if (dm > 0.0) == (da > 0.0) {
                    a = m;
                    da = dm;
                } else {
                    b = m;
                }
            }
        }
        prev_x = x;
        prev_d = dx;
    }
    None
}
