//! Model spectra with explicitly known eigenvalues, and tensor products
//! thereof.
//!
//! Every distinct eigenvalue is represented symbolically as
//! `scale * base^power` with an integer `base`, a positive rational `power`
//! and an exact rational `scale` product. Strict comparisons against a
//! dyadic-rational threshold are therefore decidable in exact integer
//! arithmetic by raising both sides to the least common power; no counting
//! decision in this crate ever rests on a floating-point rounding.

mod parse;

pub use parse::{parse_operator, parse_operator_with, render, ParseOptions};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{bigrat_pow, binomial, checked_add, checked_mul, Rat};
use crate::poly::{binomial_poly, Coeff, Poly};

/// Which pseudodifferential calculus a model lives in; fixes how the zeta
/// abscissa is derived from dimension and order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Calculus {
    ClosedManifold,
    Shubin,
}

/// Multiplicity convention for the circle's zero mode. The model spectra
/// assign multiplicity 2 to every circle eigenvalue including n = 0; the
/// constant eigenfunction analytically has multiplicity 1. Both are exposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub enum S1ZeroMode {
    /// Multiplicity 2 at n = 0 (default; reproduces the model tables).
    #[default]
    DoubledZeroMode,
    /// Multiplicity 1 at n = 0 (the analytically correct count).
    SimpleZeroMode,
}

impl S1ZeroMode {
    pub fn multiplicity(self) -> u128 {
        match self {
            S1ZeroMode::DoubledZeroMode => 2,
            S1ZeroMode::SimpleZeroMode => 1,
        }
    }

    pub fn from_mult(m: u32) -> Result<Self> {
        match m {
            1 => Ok(S1ZeroMode::SimpleZeroMode),
            2 => Ok(S1ZeroMode::DoubledZeroMode),
            _ => Err(Error::InvalidInput(format!("zero mode multiplicity must be 1 or 2, got {m}"))),
        }
    }
}


/// Power-and-scale functional-calculus transform: eigenvalues map
/// `lambda -> scale * lambda^power`, multiplicities unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTransform {
    power: Rat,
    scale: BigRational,
}

impl SpectrumTransform {
    pub fn new(power: Rat, scale: f64) -> Result<Self> {
        if power <= Rat::zero() {
            return Err(Error::NonPositiveExponent(power.to_string()));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidInput(format!("scale must be positive and finite, got {scale}")));
        }
        Ok(Self { power, scale: BigRational::from_float(scale).unwrap() })
    }

    pub fn power_only(power: Rat) -> Result<Self> {
        Self::new(power, 1.0)
    }

    pub fn power(&self) -> Rat {
        self.power
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }
}

/// Canonical product of rational powers of positive rationals.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ScaleProduct {
    factors: Vec<(BigRational, Rat)>,
}

impl ScaleProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(BigRational, Rat)] {
        &self.factors
    }

    fn canonicalize(&mut self) {
        self.factors.retain(|(b, e)| !b.is_one() && !e.is_zero());
        self.factors.sort_by(|a, b| (a.0.numer(), a.0.denom()).cmp(&(b.0.numer(), b.0.denom())));
        let mut merged: Vec<(BigRational, Rat)> = Vec::with_capacity(self.factors.len());
        for (b, e) in self.factors.drain(..) {
            match merged.last_mut() {
                Some((lb, le)) if *lb == b => *le += e,
                _ => merged.push((b, e)),
            }
        }
        merged.retain(|(_, e)| !e.is_zero());
        self.factors = merged;
    }

    pub fn mul_factor(mut self, base: BigRational, exp: Rat) -> Self {
        debug_assert!(base.is_positive());
        self.factors.push((base, exp));
        self.canonicalize();
        self
    }

    pub fn pow(&self, e: Rat) -> Self {
        let mut out = Self { factors: self.factors.iter().map(|(b, f)| (b.clone(), f * e)).collect() };
        out.canonicalize();
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| b.to_f64().unwrap().powf(rat_f64(*e)))
            .product()
    }

    pub fn ln(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| rat_f64(*e) * b.to_f64().unwrap().ln())
            .sum()
    }
}

pub(crate) fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}


/// Exact strict comparison `prod_i base_i^{exp_i} < bound` for positive
/// rational bases and bound, by raising to the lcm of the exponent
/// denominators.
pub(crate) fn power_product_lt(factors: &[(BigRational, Rat)], bound: &BigRational) -> bool {
    let mut l: i64 = 1;
    for (_, e) in factors {
        l = l.lcm(e.denom());
    }
    let mut lhs = BigRational::one();
    for (b, e) in factors {
        let ie = e.numer() * (l / e.denom());
        lhs *= bigrat_pow(b, ie);
    }
    lhs < bigrat_pow(bound, l)
}

/// User-facing identity of a model spectrum, including its transform chain.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumKind {
    A1,
    A2,
    Hermite1D,
    SphereLaplacianShifted { dim: u32, shift: Rat },
    HarmonicOscillator { dim: u32 },
    Transformed { base: Box<SpectrumKind>, transform: SpectrumTransform },
}

/// Untransformed eigenvalue engine: integer base sequences, multiplicities
/// and their closed-form cumulative sums.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Family {
    /// Bases k^2 - k + 1 with multiplicity 2k + 1; the k = 0 and k = 1
    /// eigenvalues coincide and are pre-aggregated to (1, 4).
    A1,
    /// Sphere Laplacian plus `shift` on S^dim. Bases are
    /// q*k*(k + dim - 1) + p for shift = p/q, carrying an overall 1/q scale.
    Sphere { dim: u32, shift: Rat, zero_mode: S1ZeroMode },
    /// Isotropic harmonic oscillator, shifted so the bases are the integers
    /// m = dim, dim+1, ... with multiplicity binom(m - 1, dim - 1).
    Hermite { dim: u32 },
}

impl Family {
    fn head(&self) -> Option<(u128, u128)> {
        match self {
            Family::A1 => Some((1, 4)),
            Family::Sphere { dim: 1, shift, zero_mode } => {
                Some((*shift.numer() as u128, zero_mode.multiplicity()))
            }
            _ => None,
        }
    }

    fn head_len(&self) -> u64 {
        self.head().map_or(0, |_| 1)
    }

    /// Underlying k for the distinct index j (valid for j >= head_len).
    /// Saturating at the top of the index range; the base polynomial there
    /// overflows anyway and callers surface that as a count overflow.
    fn regular_k(&self, j: u64) -> u64 {
        match self {
            Family::A1 => j.saturating_add(1),
            Family::Sphere { dim: 1, .. } => j,
            Family::Sphere { .. } => j,
            Family::Hermite { dim } => (*dim as u64).saturating_add(j),
        }
    }

    /// First k of the regular (polynomial) tail.
    fn k_regular_start(&self) -> u64 {
        self.regular_k(self.head_len())
    }

    /// Integer coefficients (a2, a1, a0) of the base polynomial B(k).
    fn base_poly(&self) -> (i128, i128, i128) {
        match self {
            Family::A1 => (1, -1, 1),
            Family::Sphere { dim, shift, .. } => {
                let q = *shift.denom() as i128;
                let p = *shift.numer() as i128;
                (q, q * (*dim as i128 - 1), p)
            }
            Family::Hermite { .. } => (0, 1, 0),
        }
    }

    fn base_for_k(&self, k: u64) -> Result<u128> {
        let (a2, a1, a0) = self.base_poly();
        let k = k as i128;
        let v = a2
            .checked_mul(k)
            .and_then(|x| x.checked_mul(k))
            .and_then(|x| x.checked_add(a1 * k))
            .and_then(|x| x.checked_add(a0))
            .ok_or(Error::CountOverflow)?;
        debug_assert!(v >= 0);
        Ok(v as u128)
    }

    fn mult_for_k(&self, k: u64) -> Result<u128> {
        match self {
            Family::A1 => Ok(2 * k as u128 + 1),
            Family::Sphere { dim: 1, .. } => Ok(2),
            Family::Sphere { dim, .. } => {
                let d = *dim as u128;
                let k = k as u128;
                let hi = binomial(k + d, d)?;
                let lo = if k >= 2 { binomial(k + d - 2, d)? } else { 0 };
                Ok(hi - lo)
            }
            Family::Hermite { dim } => binomial(k as u128 - 1, *dim as u128 - 1),
        }
    }

    /// Multiplicity of regular entries as an exact polynomial in k.
    fn mult_poly(&self) -> Poly {
        match self {
            Family::A1 => Poly::from_coeffs(vec![Coeff::from_integer(1), Coeff::from_integer(2)]),
            Family::Sphere { dim: 1, .. } => Poly::constant(Coeff::from_integer(2)),
            Family::Sphere { dim, .. } => {
                let d = *dim;
                binomial_poly(d as i128, d).sub(&binomial_poly(d as i128 - 2, d))
            }
            Family::Hermite { dim } => binomial_poly(-1, *dim - 1),
        }
    }

    /// Total multiplicity of distinct entries 0..=j, in closed form.
    fn cum_mult_through(&self, j: u64) -> Result<u128> {
        match self {
            Family::A1 => {
                if j == 0 {
                    Ok(4)
                } else {
                    let t = j as u128 + 2;
                    checked_mul(t, t)
                }
            }
            Family::Sphere { dim: 1, zero_mode, .. } => {
                checked_add(2 * j as u128, zero_mode.multiplicity())
            }
            Family::Sphere { dim, .. } => {
                let d = *dim as u128;
                let j = j as u128;
                checked_add(binomial(j + d, d)?, binomial(j + d - 1, d)?)
            }
            Family::Hermite { dim } => binomial(*dim as u128 + j as u128, *dim as u128),
        }
    }

    /// Rational 1/q scale that makes sphere bases integral; one otherwise.
    fn scale_rat(&self) -> Rat {
        match self {
            Family::Sphere { shift, .. } => Rat::new(1, *shift.denom()),
            _ => Rat::one(),
        }
    }

    fn dimension(&self) -> u32 {
        match self {
            Family::A1 => 2,
            Family::Sphere { dim, .. } => *dim,
            Family::Hermite { dim } => *dim,
        }
    }

    fn calculus(&self) -> Calculus {
        match self {
            Family::Hermite { .. } => Calculus::Shubin,
            _ => Calculus::ClosedManifold,
        }
    }

    /// Leading Weyl coefficient of the untransformed model, exact.
    fn leading_rat(&self) -> Rat {
        match self {
            Family::A1 => Rat::one(),
            Family::Sphere { dim, .. } => {
                let mut fact: i64 = 1;
                for i in 2..=*dim as i64 {
                    fact *= i;
                }
                Rat::new(2, fact)
            }
            Family::Hermite { dim } => {
                let mut fact: i64 = 1;
                for i in 2..=*dim as i64 {
                    fact *= i;
                }
                Rat::new(1, fact)
            }
        }
    }
}

/// One distinct eigenvalue: `scale * base^power` with total multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub base: u128,
    pub mult: u128,
}

/// A model operator spectrum: strictly increasing distinct eigenvalues with
/// multiplicities, plus the calculus metadata the Weyl laws need.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpectrum {
    kind: SpectrumKind,
    family: Family,
    power: Rat,
    scale: ScaleProduct,
    order: Rat,
    zeta_abscissa: Rat,
}

impl ModelSpectrum {
    fn from_family(kind: SpectrumKind, family: Family) -> Self {
        let order = Rat::from_integer(2);
        let dim = Rat::from_integer(family.dimension() as i64);
        let abscissa = match family.calculus() {
            Calculus::ClosedManifold => dim / order,
            Calculus::Shubin => Rat::from_integer(2) * dim / order,
        };
        let scale_rat = family.scale_rat();
        let scale = if scale_rat.is_one() {
            ScaleProduct::one()
        } else {
            ScaleProduct::one().mul_factor(
                BigRational::new(BigInt::from(*scale_rat.numer()), BigInt::from(*scale_rat.denom())),
                Rat::one(),
            )
        };
        ModelSpectrum { kind, family, power: Rat::one(), scale, order, zeta_abscissa: abscissa }
    }

    pub fn kind(&self) -> &SpectrumKind {
        &self.kind
    }

    pub fn dimension(&self) -> u32 {
        self.family.dimension()
    }

    pub fn order(&self) -> Rat {
        self.order
    }

    pub fn calculus(&self) -> Calculus {
        self.family.calculus()
    }

    pub fn zeta_abscissa(&self) -> Rat {
        self.zeta_abscissa
    }

    pub(crate) fn power(&self) -> Rat {
        self.power
    }

    pub(crate) fn scale(&self) -> &ScaleProduct {
        &self.scale
    }

    pub(crate) fn family(&self) -> &Family {
        &self.family
    }

    /// Constant L with N(tau) = L tau^abscissa + lower order.
    pub fn leading_weyl_coefficient(&self) -> f64 {
        let l = rat_f64(self.family.leading_rat());
        // a scale c rescales the counting variable: N(tau) = N_base(tau/c),
        // so the constant picks up c^(-abscissa)
        l * self.scale.pow(-self.zeta_abscissa).to_f64()
    }

    /// Apply a functional-calculus transform.
    pub fn transform(&self, t: &SpectrumTransform) -> ModelSpectrum {
        let power = self.power * t.power;
        let scale = self.scale.pow(t.power).mul_factor(t.scale.clone(), Rat::one());
        ModelSpectrum {
            kind: SpectrumKind::Transformed { base: Box::new(self.kind.clone()), transform: t.clone() },
            family: self.family.clone(),
            power,
            scale,
            order: self.order * t.power,
            zeta_abscissa: self.zeta_abscissa / t.power,
        }
    }

    /// Integer base of the j-th distinct eigenvalue.
    pub fn base_at(&self, j: u64) -> Result<u128> {
        if j < self.family.head_len() {
            Ok(self.family.head().unwrap().0)
        } else {
            self.family.base_for_k(self.family.regular_k(j))
        }
    }

    pub fn mult_at(&self, j: u64) -> Result<u128> {
        if j < self.family.head_len() {
            Ok(self.family.head().unwrap().1)
        } else {
            self.family.mult_for_k(self.family.regular_k(j))
        }
    }

    pub fn entry_at(&self, j: u64) -> Result<SpectrumEntry> {
        Ok(SpectrumEntry { base: self.base_at(j)?, mult: self.mult_at(j)? })
    }

    /// Total multiplicity of the distinct entries 0..=j.
    pub fn cum_mult_through(&self, j: u64) -> Result<u128> {
        if j < self.family.head_len() {
            Ok(self.family.head().unwrap().1)
        } else {
            self.family.cum_mult_through(j)
        }
    }

    /// Iterator over distinct entries in strictly increasing eigenvalue order.
    pub fn entries(&self) -> impl Iterator<Item = Result<SpectrumEntry>> + '_ {
        (0u64..).map(move |j| self.entry_at(j))
    }

    /// Approximate eigenvalue of the j-th distinct entry.
    pub fn value_f64_at(&self, j: u64) -> Result<f64> {
        Ok(self.value_f64_of_base(self.base_at(j)?))
    }

    pub fn value_f64_of_base(&self, base: u128) -> f64 {
        self.scale.to_f64() * (base as f64).powf(rat_f64(self.power))
    }

    /// ln of the eigenvalue with the given base (base > 0).
    pub(crate) fn value_ln_of_base(&self, base: u128) -> f64 {
        self.scale.ln() + rat_f64(self.power) * (base as f64).ln()
    }

    /// Exact strict test `scale * base^power < bound`.
    pub fn value_lt(&self, base: u128, bound: &BigRational) -> bool {
        if base == 0 {
            return bound.is_positive();
        }
        if self.scale.is_one() {
            if let Some(v) = self.plain_integer_value(base) {
                return BigRational::from_integer(v.into()) < *bound;
            }
        }
        let mut factors: Vec<(BigRational, Rat)> = Vec::with_capacity(1 + self.scale.factors().len());
        factors.push((BigRational::from_integer(base.into()), self.power));
        factors.extend_from_slice(self.scale.factors());
        power_product_lt(&factors, bound)
    }

    /// `base^power` as an exact integer when the spectrum has unit scale and
    /// an integral power small enough to stay in u128.
    pub(crate) fn plain_integer_value(&self, base: u128) -> Option<u128> {
        if !self.scale.is_one() || !self.power.is_integer() {
            return None;
        }
        let p = self.power.to_integer();
        if !(0..=127).contains(&p) {
            return None;
        }
        base.checked_pow(p as u32)
    }

    /// Smallest eigenvalue is >= 1 (exactly).
    pub fn min_eigenvalue_at_least_one(&self) -> bool {
        let base = self.base_at(0).expect("first base fits");
        !self.value_lt(base, &BigRational::one())
    }

    /// Smallest eigenvalue is > 0.
    pub fn min_eigenvalue_positive(&self) -> bool {
        self.base_at(0).is_ok_and(|b| b > 0)
    }

    /// Float estimate of the largest distinct index with eigenvalue below
    /// `bound` — a search hint only, never trusted for the decision.
    pub(crate) fn index_estimate_below(&self, bound: f64) -> u64 {
        let s = rat_f64(self.power);
        let x = (bound / self.scale.to_f64()).powf(1.0 / s);
        self.index_estimate_below_base(x)
    }

    /// Float estimate of the largest distinct index with integer base at
    /// most `target`; same hint-only contract.
    pub(crate) fn index_estimate_below_base(&self, target: f64) -> u64 {
        let (a2, a1, a0) = self.family.base_poly();
        let (a2, a1, a0) = (a2 as f64, a1 as f64, a0 as f64);
        let k = if a2 == 0.0 {
            (target - a0) / a1
        } else {
            let disc = (a1 * a1 - 4.0 * a2 * (a0 - target)).max(0.0);
            (-a1 + disc.sqrt()) / (2.0 * a2)
        };
        let k = if k.is_finite() { k.max(0.0) } else { 0.0 };
        let k0 = self.family.k_regular_start() as f64;
        let j = k - k0 + self.family.head_len() as f64;
        j.max(0.0).min(u64::MAX as f64 / 2.0) as u64
    }

    /// Bases are exactly 1, 2, 3, ... with multiplicity one (possibly
    /// rescaled or powered), which admits closed-form weighted sums.
    pub(crate) fn family_is_simple_integers(&self) -> bool {
        matches!(self.family, Family::Hermite { dim: 1 })
    }

    /// Data the zeta tail machinery needs for the regular part of the
    /// spectrum: base polynomial, multiplicity polynomial and first k.
    pub(crate) fn tail_shape(&self) -> TailShape {
        let (a2, a1, a0) = self.family.base_poly();
        TailShape {
            a2,
            a1,
            a0,
            mult: self.family.mult_poly(),
            k_start: self.family.k_regular_start(),
            head_len: self.family.head_len(),
        }
    }


    /// Distinct eigenvalues below `limit`, as floats, up to `cap` of them.
    pub fn distinct_values_below(&self, limit: f64, cap: usize) -> Vec<f64> {
        let mut out = Vec::new();
        let bound = match BigRational::from_float(limit) {
            Some(b) if b.is_positive() => b,
            _ => return out,
        };
        for j in 0..cap as u64 {
            match self.base_at(j) {
                Ok(base) if self.value_lt(base, &bound) => {
                    out.push(self.value_f64_of_base(base));
                }
                _ => break,
            }
        }
        out
    }
}

pub(crate) struct TailShape {
    pub a2: i128,
    pub a1: i128,
    pub a0: i128,
    pub mult: Poly,
    pub k_start: u64,
    pub head_len: u64,
}

/// The shifted first-sphere model: bases k^2 - k + 1 with multiplicity
/// 2k + 1, aggregated to (1, 4) at the bottom. Counting law N(tau) = tau + R.
pub fn a1_spectrum() -> ModelSpectrum {
    ModelSpectrum::from_family(SpectrumKind::A1, Family::A1)
}

/// The shifted circle Laplacian: bases n^2 + 1 with multiplicity 2.
pub fn a2_spectrum() -> ModelSpectrum {
    a2_spectrum_with(S1ZeroMode::default())
}

pub fn a2_spectrum_with(zero_mode: S1ZeroMode) -> ModelSpectrum {
    ModelSpectrum::from_family(SpectrumKind::A2, Family::Sphere { dim: 1, shift: Rat::one(), zero_mode })
}

/// The shifted 1-d harmonic oscillator: eigenvalues 1, 2, 3, ... each simple.
pub fn hermite_spectrum() -> ModelSpectrum {
    ModelSpectrum::from_family(SpectrumKind::Hermite1D, Family::Hermite { dim: 1 })
}

/// Isotropic `dim`-dimensional harmonic oscillator, shifted so the
/// eigenvalues are the integers m >= dim with multiplicity binom(m-1, dim-1).
pub fn harmonic_oscillator(dim: u32) -> Result<ModelSpectrum> {
    if dim == 0 || dim > 24 {
        return Err(Error::InvalidInput(format!("harmonic oscillator dimension must be in 1..=24, got {dim}")));
    }
    Ok(ModelSpectrum::from_family(
        SpectrumKind::HarmonicOscillator { dim },
        Family::Hermite { dim },
    ))
}

/// Sphere Laplacian on S^dim plus a nonnegative shift, with the standard
/// spherical-harmonic multiplicities (the circle keeps the doubled zero mode
/// unless configured otherwise).
pub fn sphere_laplacian_shifted(dim: u32, shift: f64) -> Result<ModelSpectrum> {
    sphere_laplacian_shifted_with(dim, shift, S1ZeroMode::default())
}

pub fn sphere_laplacian_shifted_with(dim: u32, shift: f64, zero_mode: S1ZeroMode) -> Result<ModelSpectrum> {
    if shift < 0.0 || !shift.is_finite() {
        return Err(Error::NegativeShift(shift.to_string()));
    }
    let r = BigRational::from_float(shift).unwrap();
    let (n, d) = (r.numer().to_i64(), r.denom().to_i64());
    match (n, d) {
        (Some(n), Some(d)) => sphere_laplacian_shifted_rat(dim, Rat::new(n, d), zero_mode),
        _ => Err(Error::InvalidInput(format!("shift {shift} has no small exact rational form"))),
    }
}

pub fn sphere_laplacian_shifted_rat(dim: u32, shift: Rat, zero_mode: S1ZeroMode) -> Result<ModelSpectrum> {
    if shift < Rat::zero() {
        return Err(Error::NegativeShift(shift.to_string()));
    }
    if dim == 0 || dim > 24 {
        return Err(Error::InvalidInput(format!("sphere dimension must be in 1..=24, got {dim}")));
    }
    Ok(ModelSpectrum::from_family(
        SpectrumKind::SphereLaplacianShifted { dim, shift },
        Family::Sphere { dim, shift, zero_mode },
    ))
}

/// Ordered tensor product of model spectra. The product spectrum consists of
/// all products of factor eigenvalues, multiplicities multiplying.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator {
    factors: Vec<ModelSpectrum>,
}

impl TensorOperator {
    /// Build a tensor product. With two or more factors every factor must
    /// have its smallest eigenvalue >= 1, which is what makes the counting
    /// recursion over partial products valid; a single factor is
    /// unconstrained since counting it never forms products.
    pub fn new(factors: Vec<ModelSpectrum>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("tensor product needs at least one factor".into()));
        }
        if factors.len() >= 2 {
            for (index, f) in factors.iter().enumerate() {
                if !f.min_eigenvalue_at_least_one() {
                    return Err(Error::FactorBelowOne { index });
                }
            }
        }
        Ok(TensorOperator { factors })
    }

    pub fn single(spec: ModelSpectrum) -> Result<Self> {
        Self::new(vec![spec])
    }

    pub fn factors(&self) -> &[ModelSpectrum] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Tau;

    fn first_entries(s: &ModelSpectrum, n: usize) -> Vec<(u128, u128)> {
        (0..n as u64).map(|j| (s.base_at(j).unwrap(), s.mult_at(j).unwrap())).collect()
    }

    fn first_values(s: &ModelSpectrum, n: usize) -> Vec<f64> {
        (0..n as u64).map(|j| s.value_f64_at(j).unwrap()).collect()
    }

    #[test]
    fn a1_first_entries_aggregate_the_double_eigenvalue() {
        let a1 = a1_spectrum();
        assert_eq!(first_entries(&a1, 3), vec![(1, 4), (3, 5), (7, 7)]);
        assert_eq!(a1.zeta_abscissa(), Rat::one());
        assert_eq!(a1.dimension(), 2);
        assert_eq!(a1.order(), Rat::from_integer(2));
        assert_eq!(a1.calculus(), Calculus::ClosedManifold);
        assert_eq!(a1.leading_weyl_coefficient(), 1.0);
    }

    #[test]
    fn a1_cumulative_multiplicity_is_a_square() {
        let a1 = a1_spectrum();
        // through distinct index j the eigenvalues cover k = 0..=j+1
        for j in 0..50u64 {
            let kbar = j + 1;
            assert_eq!(a1.cum_mult_through(j).unwrap(), ((kbar + 1) * (kbar + 1)) as u128);
        }
    }

    #[test]
    fn a2_matches_model_table() {
        let a2 = a2_spectrum();
        assert_eq!(first_entries(&a2, 3), vec![(1, 2), (2, 2), (5, 2)]);
        assert_eq!(a2.zeta_abscissa(), Rat::new(1, 2));
        assert_eq!(a2.leading_weyl_coefficient(), 2.0);
    }

    #[test]
    fn hermite_is_the_positive_integers() {
        let h = hermite_spectrum();
        assert_eq!(first_entries(&h, 3), vec![(1, 1), (2, 1), (3, 1)]);
        assert_eq!(h.zeta_abscissa(), Rat::one());
        assert_eq!(h.calculus(), Calculus::Shubin);
        // eigenvalues below 10: the integers 1..9
        assert_eq!(h.cum_mult_through(8).unwrap(), 9);
    }

    #[test]
    fn sphere_two_has_simple_zero_mode() {
        let s = sphere_laplacian_shifted(2, 0.0).unwrap();
        assert_eq!(first_entries(&s, 3), vec![(0, 1), (2, 3), (6, 5)]);
    }

    #[test]
    fn simple_zero_mode_convention_drops_one_count() {
        let simple = a2_spectrum_with(S1ZeroMode::SimpleZeroMode);
        assert_eq!(simple.entry_at(0).unwrap(), SpectrumEntry { base: 1, mult: 1 });
        assert_eq!(simple.cum_mult_through(3).unwrap(), a2_spectrum().cum_mult_through(3).unwrap() - 1);
    }

    #[test]
    fn circle_with_unit_shift_equals_a2_stream() {
        let s = sphere_laplacian_shifted(1, 1.0).unwrap();
        let a2 = a2_spectrum();
        for j in 0..100 {
            assert_eq!(s.entry_at(j).unwrap(), a2.entry_at(j).unwrap());
            assert_eq!(s.value_f64_at(j).unwrap(), a2.value_f64_at(j).unwrap());
        }
        assert_eq!(s.zeta_abscissa(), a2.zeta_abscissa());
    }

    #[test]
    fn sphere_three_degree_one_multiplicity() {
        let s = sphere_laplacian_shifted(3, 0.0).unwrap();
        // degree 1 harmonics on S^3 span a 4-dimensional space
        assert_eq!(s.entry_at(1).unwrap(), SpectrumEntry { base: 3, mult: 4 });
    }

    #[test]
    fn sphere_rejects_negative_shift() {
        assert!(matches!(sphere_laplacian_shifted(2, -0.5), Err(Error::NegativeShift(_))));
    }

    #[test]
    fn harmonic_oscillator_reduces_to_hermite_in_1d() {
        let ho = harmonic_oscillator(1).unwrap();
        let h = hermite_spectrum();
        for j in 0..50 {
            assert_eq!(ho.entry_at(j).unwrap(), h.entry_at(j).unwrap());
        }
        let ho3 = harmonic_oscillator(3).unwrap();
        // eigenvalue m has multiplicity binom(m-1, 2)
        assert_eq!(first_entries(&ho3, 3), vec![(3, 1), (4, 3), (5, 6)]);
        assert_eq!(ho3.zeta_abscissa(), Rat::from_integer(3));
    }

    #[test]
    fn identity_transform_is_a_noop_on_values() {
        let a2 = a2_spectrum();
        let t = a2.transform(&SpectrumTransform::new(Rat::one(), 1.0).unwrap());
        for j in 0..100 {
            assert_eq!(t.value_f64_at(j).unwrap(), a2.value_f64_at(j).unwrap());
        }
        assert_eq!(t.zeta_abscissa(), a2.zeta_abscissa());
    }

    #[test]
    fn squared_a2_squares_each_eigenvalue() {
        let sq = a2_spectrum().transform(&SpectrumTransform::power_only(Rat::from_integer(2)).unwrap());
        assert_eq!(first_values(&sq, 3), vec![1.0, 4.0, 25.0]);
        assert_eq!(sq.zeta_abscissa(), Rat::new(1, 4));
        assert_eq!(sq.order(), Rat::from_integer(4));
    }

    #[test]
    fn three_quarter_power_divides_abscissa() {
        let d = a2_spectrum().transform(&SpectrumTransform::power_only(Rat::new(3, 4)).unwrap());
        assert_eq!(d.zeta_abscissa(), Rat::new(2, 3));
    }

    #[test]
    fn scaled_leading_coefficient_follows_the_counting_rescale() {
        // N_{cB}(tau) = N_B(tau/c): for A2, L = 2 becomes 2 c^{-1/2}
        let c = 3.0;
        let s = a2_spectrum().transform(&SpectrumTransform::new(Rat::one(), c).unwrap());
        let want = 2.0 * c.powf(-0.5);
        assert!((s.leading_weyl_coefficient() - want).abs() < 1e-14);
    }

    #[test]
    fn value_lt_decides_powers_exactly() {
        // (n^2+1)^(3/4) < tau exactly at the fourth-power comparison
        let d = a2_spectrum().transform(&SpectrumTransform::power_only(Rat::new(3, 4)).unwrap());
        let v = 5u128; // (5)^(3/4) = 5^(3/4); 5^3 = 125
        // tau with tau^4 just above / below 125
        let hi = Tau::from_f64(125.0f64.powf(0.25).next_up()).unwrap();
        let lo = Tau::from_f64(125.0f64.powf(0.25).next_down()).unwrap();
        assert!(d.value_lt(v, hi.exact()));
        assert!(!d.value_lt(v, lo.exact()));
    }

    #[test]
    fn tensor_operator_rejects_small_factors() {
        let zero_sphere = sphere_laplacian_shifted(2, 0.0).unwrap();
        assert!(matches!(
            TensorOperator::new(vec![a1_spectrum(), zero_sphere]),
            Err(Error::FactorBelowOne { index: 1 })
        ));
        assert!(TensorOperator::new(vec![a1_spectrum(), a2_spectrum()]).is_ok());
        assert!(TensorOperator::new(vec![]).is_err());
    }

    #[test]
    fn spectra_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<ModelSpectrum>();
        assert_send_sync::<TensorOperator>();
    }

    #[test]
    fn streams_strictly_increase_with_positive_multiplicities() {
        let specs = [
            a1_spectrum(),
            a2_spectrum(),
            hermite_spectrum(),
            sphere_laplacian_shifted(3, 0.5).unwrap(),
            harmonic_oscillator(2).unwrap(),
            a2_spectrum().transform(&SpectrumTransform::power_only(Rat::new(3, 4)).unwrap()),
        ];
        for s in &specs {
            let mut prev = f64::NEG_INFINITY;
            for j in 0..10_000u64 {
                let v = s.value_f64_at(j).unwrap();
                assert!(v > prev, "stream must strictly increase at j={j}");
                assert!(s.mult_at(j).unwrap() >= 1);
                prev = v;
            }
        }
    }
}
