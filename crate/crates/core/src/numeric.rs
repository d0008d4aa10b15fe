//! Scalar abstraction and exact-arithmetic helpers.
//!
//! Floating-point results throughout the crate are generic over [`Real`]
//! (`f32` or `f64`); the lattice-counting side works in exact integer and
//! rational arithmetic. Every finite float is a dyadic rational, so a float
//! threshold can always be converted losslessly via [`Real::to_exact`] and
//! strict comparisons against symbolic eigenvalues decided without rounding.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Small exact rational used for exponents, orders and abscissae.
pub type Rat = Ratio<i64>;

/// Floating-point scalar the numeric kernels are generic over.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + std::ops::AddAssign
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Lossless conversion to an exact rational. `None` for NaN/infinite.
    fn to_exact(self) -> Option<BigRational>;

    fn from_f64c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must convert")
    }

    fn from_rat(r: Rat) -> Self {
        Self::from_i64(*r.numer()).unwrap() / Self::from_i64(*r.denom()).unwrap()
    }
}

impl Real for f64 {
    fn to_exact(self) -> Option<BigRational> {
        BigRational::from_float(self)
    }
}

impl Real for f32 {
    fn to_exact(self) -> Option<BigRational> {
        BigRational::from_float(self)
    }
}

/// Neumaier-compensated accumulator; holds ~1e-16 relative error over
/// hundred-million-term sums where naive addition drifts.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<R: Real> {
    sum: R,
    compensation: R,
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        Self { sum: R::zero(), compensation: R::zero() }
    }
}

impl<R: Real> CompensatedSum<R> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: R) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - t) + term;
        } else {
            self.compensation += (term - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> R {
        self.sum + self.compensation
    }
}

/// Positive threshold treated as an exact rational. Constructed from a
/// float (exactly, since floats are dyadic) or from an integer ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct Tau {
    exact: BigRational,
    approx: f64,
}

impl Tau {
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidTau(format!("{x} is not finite")));
        }
        if x <= 0.0 {
            return Err(Error::InvalidTau(format!("{x} is not positive")));
        }
        Ok(Self { exact: BigRational::from_float(x).unwrap(), approx: x })
    }

    pub fn from_integer(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTau("0 is not positive".into()));
        }
        Ok(Self { exact: BigRational::from_integer(n.into()), approx: n as f64 })
    }

    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidTau("ratio must be positive".into()));
        }
        let exact = BigRational::new(num.into(), den.into());
        let approx = num as f64 / den as f64;
        Ok(Self { exact, approx })
    }

    pub fn from_real<R: Real>(x: R) -> Result<Self> {
        let exact = x.to_exact().ok_or_else(|| Error::InvalidTau("tau is not finite".into()))?;
        if !exact.is_positive() {
            return Err(Error::InvalidTau("tau is not positive".into()));
        }
        Ok(Self { exact, approx: x.to_f64().unwrap_or(f64::NAN) })
    }

    pub fn as_f64(&self) -> f64 {
        self.approx
    }

    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    /// Largest nonnegative integer strictly below tau (0 when tau <= 1);
    /// `None` only when it does not fit in u128.
    pub fn largest_integer_below(&self) -> Option<u128> {
        let one = BigRational::one();
        if self.exact <= one {
            return Some(0);
        }
        let fl = self.exact.floor();
        let n = if fl == self.exact { &self.exact - &one } else { fl };
        n.to_integer().to_u128()
    }
}

impl TryFrom<f64> for Tau {
    type Error = Error;
    fn try_from(x: f64) -> Result<Self> {
        Tau::from_f64(x)
    }
}

/// Nearest double to a small exact rational.
pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Geometrically spaced grid from start to stop inclusive.
pub fn geometric_grid<R: Real>(start: R, stop: R, points: usize) -> Result<Vec<R>> {
    if points < 2 {
        return Err(Error::InvalidInput(format!("grid needs at least 2 points, got {points}")));
    }
    if !(start > R::zero() && stop > start) {
        return Err(Error::InvalidInput("geometric grid needs 0 < start < stop".into()));
    }
    let ratio = (stop / start).ln() / R::from_usize(points - 1).unwrap();
    Ok((0..points).map(|i| start * (ratio * R::from_usize(i).unwrap()).exp()).collect())
}

/// Linearly spaced grid from start to stop inclusive.
pub fn linear_grid<R: Real>(start: R, stop: R, points: usize) -> Result<Vec<R>> {
    if points < 2 {
        return Err(Error::InvalidInput(format!("grid needs at least 2 points, got {points}")));
    }
    if stop <= start {
        return Err(Error::InvalidInput("linear grid needs start < stop".into()));
    }
    let step = (stop - start) / R::from_usize(points - 1).unwrap();
    Ok((0..points).map(|i| start + step * R::from_usize(i).unwrap()).collect())
}

/// Floor of the integer square root, Newton iteration with exact check.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u128;
    // float guess can be off by a few ulps at the top of the range
    while r > 0 && r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Floor of the k-th root of a nonnegative big integer, by bisection with
/// multiply-back verification. Never trusts a floating-point root.
pub fn ikth_root_big(n: &BigInt, k: u32) -> BigInt {
    assert!(k >= 1);
    assert!(!n.is_negative());
    if n.is_zero() || k == 1 {
        return n.clone();
    }
    let approx = n.to_f64().map(|x| x.powf(1.0 / k as f64)).unwrap_or(1.0);
    let mut lo = BigInt::from((approx.floor() as i64 - 2).max(0));
    let mut hi = BigInt::from(approx.ceil() as i64 + 2);
    while lo.pow(k) > *n {
        lo /= 2;
    }
    while hi.pow(k) <= *n {
        hi *= 2;
    }
    // invariant: lo^k <= n < hi^k
    while &lo + 1 < hi {
        let mid: BigInt = (&lo + &hi) / 2;
        if mid.pow(k) <= *n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Raise an exact rational to a (possibly negative) integer power.
pub fn bigrat_pow(base: &BigRational, exp: i64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    let mag = base.pow(exp.unsigned_abs() as u32 as i32);
    if exp < 0 {
        mag.recip()
    } else {
        mag
    }
}

/// Largest integer m >= 0 with m * factor < tau, in exact arithmetic.
pub fn count_multiples_below(factor: u128, tau: &Tau) -> u128 {
    debug_assert!(factor > 0);
    // m < tau/factor  <=>  m <= ceil(tau/factor) - 1
    let q = tau.exact() / BigRational::from_integer(factor.into());
    let one = BigRational::one();
    if q <= one {
        return 0;
    }
    let fl = q.floor();
    let m = if fl == q { q - one } else { fl };
    m.to_integer().to_u128().expect("quotient below tau fits u128")
}

pub fn checked_add(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b).ok_or(Error::CountOverflow)
}

pub fn checked_mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::CountOverflow)
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: u128, k: u128) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n-k+i+1) is divisible by (i+1)
        acc = checked_mul(acc, n - k + i + 1)? / (i + 1);
    }
    Ok(acc)
}
