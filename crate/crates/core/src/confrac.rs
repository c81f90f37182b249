//! Continued fractions with unbounded-integer convergents, the Gauss map and
//! the constants of the second-order estimate.
//!
//! Floating-point inputs are expanded as intervals: both neighbours of `x`
//! are expanded exactly as dyadic rationals and only the common prefix of
//! partial quotients is kept, so every returned quotient is certified for
//! every real that rounds to `x`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `1/1 + 1/1 + 1/2 + 1/3 + 1/5 + 1/8 + ...` (reciprocal Fibonacci constant).
pub const FIBONACCI_RECIPROCAL_SUM: f64 = 3.359_885_666_243_177_6;

/// Exact rational number with positive denominator, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidConfig("zero denominator"));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Self { num, den })
    }

    pub fn from_integers(num: i64, den: i64) -> Result<Self> {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    /// The exact value of a finite double.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let mut num = BigInt::from(mantissa);
        if negative {
            num = -num;
        }
        let (num, den) = if e >= 0 {
            (num << (e as usize), BigInt::one())
        } else {
            (num, BigInt::one() << ((-e) as usize))
        };
        Self::new(num, den).ok()
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.num, &self.den)
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    fn minus_integer(&self, a: &BigInt) -> Self {
        Self {
            num: &self.num - a * &self.den,
            den: self.den.clone(),
        }
    }

    fn recip(&self) -> Self {
        if self.num.is_negative() {
            Self {
                num: -self.den.clone(),
                den: -self.num.clone(),
            }
        } else {
            Self {
                num: self.den.clone(),
                den: self.num.clone(),
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

/// `num / den` rounded to a double (relative error below `2^-62`).
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = 64 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 {
        (num << (shift as usize)) / den
    } else {
        num / (den << ((-shift) as usize))
    };
    libm::ldexp(q.to_f64().unwrap_or(f64::NAN), -(shift as i32))
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return libm::log(x.to_f64().unwrap_or(f64::NAN));
    }
    let drop = bits - 64;
    let top = x >> (drop as usize);
    libm::log(top.to_f64().unwrap_or(f64::NAN)) + drop as f64 * core::f64::consts::LN_2
}

/// `p_n / q_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.p, &self.q)
    }

    pub fn to_rational(&self) -> Rational {
        Rational {
            num: self.p.clone(),
            den: self.q.clone(),
        }
    }
}

/// `[a0; a1, a2, ...]` together with its convergents `p_n / q_n`, `n >= 0`.
///
/// Even-index convergents lie below the expanded value (defect), odd-index
/// ones above it (excess).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFractionExpansion {
    pub a0: BigInt,
    pub partial_quotients: Vec<BigInt>,
    pub convergents: Vec<Convergent>,
    /// The expansion terminated: the last convergent equals the input.
    pub complete: bool,
}

impl ContinuedFractionExpansion {
    fn from_quotients(a0: BigInt, partial_quotients: Vec<BigInt>, complete: bool) -> Self {
        let mut convergents = Vec::with_capacity(partial_quotients.len() + 1);
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let (mut p, mut q) = (a0.clone(), BigInt::one());
        convergents.push(Convergent { p: p.clone(), q: q.clone() });
        for a in &partial_quotients {
            let p_next = a * &p + &p_prev;
            let q_next = a * &q + &q_prev;
            p_prev = core::mem::replace(&mut p, p_next);
            q_prev = core::mem::replace(&mut q, q_next);
            convergents.push(Convergent { p: p.clone(), q: q.clone() });
        }
        Self {
            a0,
            partial_quotients,
            convergents,
            complete,
        }
    }

    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    pub fn is_excess(index: usize) -> bool {
        index % 2 == 1
    }
}

/// Common prefix of the expansions of every number in `[lo, hi]`.
///
/// Fails when not even the integer part is shared.
pub fn expand_interval(lo: &Rational, hi: &Rational, n_terms: usize) -> Result<ContinuedFractionExpansion> {
    if lo > hi {
        return Err(Error::InvalidConfig("interval must satisfy lo <= hi"));
    }
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let a0 = lo.floor();
    if hi.floor() != a0 {
        return Err(Error::PrecisionExhausted { reliable_terms: 0 });
    }
    let mut quotients = Vec::new();
    let mut a = a0.clone();
    loop {
        let (flo, fhi) = (lo.minus_integer(&a), hi.minus_integer(&a));
        if flo.is_zero() || fhi.is_zero() {
            let complete = flo.is_zero() && fhi.is_zero();
            return Ok(ContinuedFractionExpansion::from_quotients(a0, quotients, complete));
        }
        if quotients.len() == n_terms {
            return Ok(ContinuedFractionExpansion::from_quotients(a0, quotients, false));
        }
        // 1/x reverses the order.
        let (next_lo, next_hi) = (fhi.recip(), flo.recip());
        let (b_lo, b_hi) = (next_lo.floor(), next_hi.floor());
        if b_lo != b_hi {
            return Ok(ContinuedFractionExpansion::from_quotients(a0, quotients, false));
        }
        quotients.push(b_lo.clone());
        a = b_lo;
        lo = next_lo;
        hi = next_hi;
    }
}

/// Expansion of an exact rational, finite when it terminates within `n_terms`.
pub fn expand_rational(x: &Rational, n_terms: usize) -> ContinuedFractionExpansion {
    expand_interval(x, x, n_terms).expect("a degenerate interval shares its integer part")
}

/// Certified expansion of a double: at most `n_max` partial quotients.
pub fn expand_f64(x: f64, n_max: usize) -> Result<ContinuedFractionExpansion> {
    if !x.is_finite() {
        return Err(Error::InvalidConfig("input must be finite"));
    }
    let lo = Rational::from_f64(x.next_down()).ok_or(Error::InvalidConfig("input must be finite"))?;
    let hi = Rational::from_f64(x.next_up()).ok_or(Error::InvalidConfig("input must be finite"))?;
    expand_interval(&lo, &hi, n_max)
}

/// Like [`expand_f64`] but insists on exactly `n_terms` certified quotients.
pub fn cf_expand(x: f64, n_terms: usize) -> Result<ContinuedFractionExpansion> {
    let exp = expand_f64(x, n_terms)?;
    if exp.len() < n_terms {
        return Err(Error::PrecisionExhausted {
            reliable_terms: exp.len(),
        });
    }
    Ok(exp)
}

/// `T(x) = 1/x - floor(1/x)`, `T(0) = 0`, for `x in [0, 1)`.
pub fn gauss_map(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let inv = 1.0 / x;
    inv - libm::floor(inv)
}

pub fn gauss_map_exact(x: &Rational) -> Rational {
    if x.is_zero() {
        return x.clone();
    }
    let inv = x.recip();
    let a = inv.floor();
    inv.minus_integer(&a)
}

/// Sum of the first `terms` Fibonacci reciprocals `1/1 + 1/1 + 1/2 + ...`.
pub fn fibonacci_reciprocal_partial(terms: usize) -> f64 {
    compensated_sum(fibonacci_terms(terms, 0.0).iter().rev())
}

/// Reciprocal Fibonacci sum with the remaining tail below `tol`.
///
/// The tail after a term `1/F_k` is at most `3/F_{k+1}` because consecutive
/// ratios are at least `3/2`; terms are summed smallest first with
/// compensation.
pub fn fibonacci_reciprocal_sum(tol: f64) -> f64 {
    compensated_sum(fibonacci_terms(usize::MAX, tol).iter().rev())
}

// Neumaier summation.
fn compensated_sum<'a>(terms: impl Iterator<Item = &'a f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for &x in terms {
        let t = sum + x;
        if libm::fabs(sum) >= libm::fabs(x) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

fn fibonacci_terms(max_terms: usize, tol: f64) -> Vec<f64> {
    let mut terms = Vec::new();
    let (mut a, mut b) = (1u128, 1u128);
    while terms.len() < max_terms {
        terms.push(1.0 / a as f64);
        if 3.0 / (b as f64) < tol {
            break;
        }
        let Some(next) = a.checked_add(b) else { break };
        a = b;
        b = next;
    }
    terms
}

/// `R(n, x)` in `-log q_n = log x + log T(x) + ... + log T^{n-1}(x) + R(n, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderRecord {
    pub n: usize,
    pub log_qn: f64,
    pub gauss_sum: f64,
    pub remainder: f64,
}

impl RemainderRecord {
    pub fn within_bound(&self) -> bool {
        libm::fabs(self.remainder) <= FIBONACCI_RECIPROCAL_SUM
    }
}

/// Remainder records for the fractional part of `x`, for every certified
/// `n <= n_max`. The Gauss orbit is taken from the exact value of `x`.
pub fn remainder_series(x: f64, n_max: usize) -> Result<Vec<RemainderRecord>> {
    let frac = x - libm::floor(x);
    if frac == 0.0 {
        return Err(Error::InvalidConfig("input has zero fractional part"));
    }
    let exp = expand_f64(frac, n_max)?;
    if exp.is_empty() {
        return Err(Error::PrecisionExhausted { reliable_terms: 0 });
    }
    let exact = Rational::from_f64(frac).ok_or(Error::InvalidConfig("input must be finite"))?;
    Ok(records(&exact, &exp, n_max))
}

/// Remainder records of an exact rational in `(0, 1)` up to its length.
pub fn remainder_series_exact(x: &Rational, n_max: usize) -> Result<Vec<RemainderRecord>> {
    let frac = x.minus_integer(&x.floor());
    if frac.is_zero() {
        return Err(Error::InvalidConfig("input has zero fractional part"));
    }
    let exp = expand_rational(&frac, n_max);
    Ok(records(&frac, &exp, n_max))
}

fn records(x: &Rational, exp: &ContinuedFractionExpansion, n_max: usize) -> Vec<RemainderRecord> {
    let mut out = Vec::new();
    let mut tail = x.clone();
    let mut gauss_sum = 0.0;
    for n in 1..=n_max.min(exp.len()) {
        if tail.is_zero() {
            break;
        }
        gauss_sum += ln_big(tail.numer()) - ln_big(tail.denom());
        tail = gauss_map_exact(&tail);
        let log_qn = ln_big(&exp.convergents[n].q);
        out.push(RemainderRecord {
            n,
            log_qn,
            gauss_sum,
            remainder: -log_qn - gauss_sum,
        });
    }
    out
}

/// `K_eps = (1 - eps) / (e^{2F} (1 + (1 + eps) e^{2F})^2)`.
pub fn k_epsilon(eps: f64, f: f64) -> f64 {
    let e2f = libm::exp(2.0 * f);
    (1.0 - eps) / (e2f * (1.0 + (1.0 + eps) * e2f) * (1.0 + (1.0 + eps) * e2f))
}

/// `m^2 / (e^{2F} (1 + e^{2F})^2)`.
pub fn second_order_bound(m: f64, f: f64) -> f64 {
    let e2f = libm::exp(2.0 * f);
    m * m / (e2f * (1.0 + e2f) * (1.0 + e2f))
}

/// `(2 e^{-2F} / (1 + eps), 2 e^{2F} / (1 - eps))`.
pub fn ratio_window(eps: f64, f: f64) -> (f64, f64) {
    let e2f = libm::exp(2.0 * f);
    (2.0 / e2f / (1.0 + eps), 2.0 * e2f / (1.0 - eps))
}

/// An excess and a defect convergent with balanced denominators.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationPair {
    /// Index `n` of the consecutive convergents `n`, `n + 1`.
    pub index: usize,
    pub excess: Convergent,
    pub defect: Convergent,
    pub epsilon: f64,
    /// `q_{n+1} / q_n`.
    pub ratio: f64,
    /// `p/q - p'/q' >= K_eps (1/q + 1/q')^2`, decided exactly.
    pub gap_holds: bool,
}

/// Exact test of `p/q - p'/q' >= k (1/q + 1/q')^2` with `k` read as a dyadic rational.
pub fn gap_inequality_holds(excess: &Convergent, defect: &Convergent, k: f64) -> bool {
    let Some(k) = Rational::from_f64(k) else {
        return false;
    };
    let (p, q, pd, qd) = (&excess.p, &excess.q, &defect.p, &defect.q);
    // (p q' - p' q) / (q q') >= k (q + q')^2 / (q q')^2
    let lhs = (p * qd - pd * q) * q * qd * k.denom();
    let sum = q + qd;
    let rhs = k.numer() * &sum * &sum;
    lhs >= rhs
}

/// Consecutive convergents whose denominator ratio lies in [`ratio_window`].
///
/// The pair is oriented by parity: for odd `n` the `n`-th convergent is the
/// excess one, for even `n` the `(n+1)`-th.
pub fn balanced_pairs(exp: &ContinuedFractionExpansion, eps: f64) -> Vec<ApproximationPair> {
    let (lo, hi) = ratio_window(eps, FIBONACCI_RECIPROCAL_SUM);
    let k = k_epsilon(eps, FIBONACCI_RECIPROCAL_SUM);
    let mut out = Vec::new();
    for n in 0..exp.convergents.len().saturating_sub(1) {
        let (a, b) = (&exp.convergents[n], &exp.convergents[n + 1]);
        let ratio = ratio_to_f64(&b.q, &a.q);
        if !(ratio > lo && ratio < hi) {
            continue;
        }
        let (excess, defect) = if n % 2 == 1 { (a, b) } else { (b, a) };
        out.push(ApproximationPair {
            index: n,
            excess: excess.clone(),
            defect: defect.clone(),
            epsilon: eps,
            ratio,
            gap_holds: gap_inequality_holds(excess, defect, k),
        });
    }
    out
}

/// Balanced pairs among the certified convergents of `x`.
pub fn find_balanced_pairs(x: f64, eps: f64, n_max: usize) -> Result<Vec<ApproximationPair>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidConfig("epsilon must lie in (0, 1)"));
    }
    Ok(balanced_pairs(&expand_f64(x, n_max)?, eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> f64 {
        (libm::sqrt(5.0) - 1.0) / 2.0
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn golden_mean_is_all_ones() {
        let exp = cf_expand(golden(), 30).unwrap();
        assert_eq!(exp.a0, big(0));
        assert!(exp.partial_quotients.iter().all(|a| *a == big(1)));
        let fib = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89];
        for (n, f) in fib.iter().enumerate() {
            assert_eq!(exp.convergents[n].q, big(*f));
        }
        // the float runs out of certified terms somewhere in the high 30s
        let all = expand_f64(golden(), 200).unwrap();
        assert!(all.len() >= 35 && all.len() < 45, "{}", all.len());
        assert!(matches!(cf_expand(golden(), 200), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn rational_355_113() {
        let x = Rational::from_integers(355, 113).unwrap();
        let exp = expand_rational(&x, 10);
        assert!(exp.complete);
        assert_eq!(exp.a0, big(3));
        assert_eq!(exp.partial_quotients, [big(7), big(16)]);
        let conv: Vec<(BigInt, BigInt)> = exp.convergents.iter().map(|c| (c.p.clone(), c.q.clone())).collect();
        assert_eq!(conv, [(big(3), big(1)), (big(22), big(7)), (big(355), big(113))]);
    }

    #[test]
    fn negative_rational() {
        let x = Rational::from_integers(-7, 3).unwrap();
        let exp = expand_rational(&x, 10);
        // -7/3 = -3 + 2/3 = [-3; 1, 2]
        assert_eq!(exp.a0, big(-3));
        assert_eq!(exp.partial_quotients, [big(1), big(2)]);
        assert_eq!(exp.convergents.last().unwrap().to_rational(), x);
    }

    #[test]
    fn near_integer_float_cannot_certify() {
        assert!(matches!(expand_f64(1.0, 5), Err(Error::PrecisionExhausted { reliable_terms: 0 })));
    }

    #[test]
    fn gauss_map_values() {
        assert_eq!(gauss_map(0.0), 0.0);
        assert!((gauss_map(0.4) - 0.5).abs() < 1e-15);
        assert!((gauss_map(golden()) - golden()).abs() < 1e-15);
        let x = Rational::from_integers(2, 5).unwrap();
        assert_eq!(gauss_map_exact(&x), Rational::from_integers(1, 2).unwrap());
    }

    #[test]
    fn fibonacci_constant() {
        let six = fibonacci_reciprocal_partial(6);
        assert!((six - (1.0 + 1.0 + 0.5 + 1.0 / 3.0 + 0.2 + 0.125)).abs() < 1e-15);
        assert!((six - 3.158_333_333_333_333).abs() < 1e-15);
        let f15 = fibonacci_reciprocal_sum(1e-15);
        let f18 = fibonacci_reciprocal_sum(1e-18);
        assert!((f15 - f18).abs() < 1e-15);
        assert!((f18 - FIBONACCI_RECIPROCAL_SUM).abs() < 1e-15, "{f18:e}");
        assert!((f15 - FIBONACCI_RECIPROCAL_SUM).abs() < 1e-15, "{f15:e}");
        let partials: Vec<f64> = (1..40).map(fibonacci_reciprocal_partial).collect();
        assert!(partials.windows(2).all(|w| w[1] > w[0] || w[0] > 3.3598856662));
    }

    #[test]
    fn k_epsilon_limits() {
        let f = FIBONACCI_RECIPROCAL_SUM;
        let limit = second_order_bound(1.0, f);
        assert!((k_epsilon(1e-15, f) - limit).abs() < 1e-12 * limit.max(1e-300) + 1e-24);
        assert!(k_epsilon(0.1, f) > k_epsilon(0.2, f));
        assert!(k_epsilon(0.2, f) > k_epsilon(0.5, f));
        assert!(k_epsilon(0.5, f) < limit);
    }

    #[test]
    fn ratio_conversions() {
        let r = Rational::from_f64(0.1).unwrap();
        assert_eq!(r.to_f64(), 0.1);
        assert_eq!(ratio_to_f64(&big(1), &big(3)), 1.0 / 3.0);
        let huge = BigInt::one() << 300usize;
        assert!((ln_big(&huge) - 300.0 * core::f64::consts::LN_2).abs() < 1e-10);
        assert_eq!(Rational::from_f64(-2.5).unwrap(), Rational::from_integers(-5, 2).unwrap());
    }

    #[test]
    fn golden_remainders_and_q10() {
        let recs = remainder_series(golden(), 10).unwrap();
        assert_eq!(recs.len(), 10);
        let q10 = libm::exp(recs[9].log_qn);
        assert!((q10 - 89.0).abs() < 1e-9);
        assert!(recs.iter().all(RemainderRecord::within_bound));
    }

    #[test]
    fn exact_remainders_stop_at_length() {
        let x = Rational::from_integers(16, 113).unwrap();
        let recs = remainder_series_exact(&x, 10).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(recs.iter().all(RemainderRecord::within_bound));
    }

    #[test]
    fn golden_pairs_everywhere() {
        let pairs = find_balanced_pairs(golden(), 0.5, 30).unwrap();
        assert_eq!(pairs.len(), 30);
        let x = Rational::from_f64(golden()).unwrap();
        for pair in &pairs {
            assert!(pair.gap_holds);
            assert!(pair.defect.to_rational() <= x && x <= pair.excess.to_rational());
        }
    }

    #[test]
    fn bad_epsilon() {
        assert!(find_balanced_pairs(0.3, 0.0, 10).is_err());
        assert!(find_balanced_pairs(0.3, 1.0, 10).is_err());
    }
}
