//! Weyl-law asymptotics for tensor products: three-case remainder
//! classification, leading coefficients, remainder series over tau grids,
//! empirical exponent fits and the sharpness suites.
//!
//! With a unique dominant factor (strictly largest zeta abscissa) the
//! counting function obeys N(tau) = C tau^a + O(rem) where a is the
//! dominant abscissa, C multiplies the dominant factor's own Weyl constant
//! by the spectral zeta values of the other factors at a, and the remainder
//! order depends on how the runner-up abscissa p compares with the dominant
//! factor's sub-leading exponent.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::counting::{count_a1_closed, CountingSample};
use crate::error::{Error, Result};
use crate::numeric::{Rat, Real, Tau};
use crate::spectra::{
    a1_spectrum, a2_spectrum, rat_f64, Calculus, SpectrumTransform, TensorOperator,
};
use crate::zeta::spectral_zeta;

/// Position of the runner-up abscissa relative to the dominant factor's
/// sub-leading exponent; selects the remainder order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemainderCase {
    /// p < (n_l - 1)/m_l: remainder O(tau^((n_l-1)/m_l)).
    Below,
    /// p = (n_l - 1)/m_l: remainder O(tau^((n_l-1)/m_l) (log tau)^s).
    At,
    /// p > (n_l - 1)/m_l: remainder O(tau^p (log tau)^(s-1)).
    Above,
}

impl std::fmt::Display for RemainderCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RemainderCase::Below => "below",
            RemainderCase::At => "at",
            RemainderCase::Above => "above",
        })
    }
}

/// Which factor dominates and who is next in line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceData {
    /// Index of the factor with the strictly largest abscissa.
    pub dominant: usize,
    /// Largest abscissa among the remaining factors (None for one factor).
    pub runner_up: Option<Rat>,
    /// Indices attaining the runner-up abscissa.
    pub runner_up_set: Vec<usize>,
}

impl DominanceData {
    pub fn runner_up_count(&self) -> usize {
        self.runner_up_set.len()
    }
}

/// Leading term and remainder order of one Weyl law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticLaw<R: Real> {
    pub leading_coeff: Option<R>,
    pub leading_exp: Rat,
    pub case: RemainderCase,
    pub remainder_exp: Rat,
    pub remainder_log_power: u32,
}

/// Classify a tensor operator into the three remainder cases by exact
/// rational comparison of the runner-up abscissa with the dominant
/// factor's sub-leading exponent.
pub fn classify<R: Real>(op: &TensorOperator) -> Result<(DominanceData, AsymptoticLaw<R>)> {
    let factors = op.factors();
    let calculus = factors[0].calculus();
    if factors.iter().any(|f| f.calculus() != calculus) {
        return Err(Error::MixedCalculus);
    }
    let mut dominant = 0usize;
    for (i, f) in factors.iter().enumerate() {
        if f.zeta_abscissa() > factors[dominant].zeta_abscissa() {
            dominant = i;
        }
    }
    let top = factors[dominant].zeta_abscissa();
    if factors.iter().enumerate().any(|(i, f)| i != dominant && f.zeta_abscissa() == top) {
        return Err(Error::SymmetricCase);
    }
    let dim = factors[dominant].dimension() as i64;
    let sub_leading = match calculus {
        Calculus::ClosedManifold => Rat::from_integer(dim - 1) / factors[dominant].order(),
        Calculus::Shubin => Rat::from_integer(2 * dim - 1) / factors[dominant].order(),
    };
    let mut runner_up: Option<Rat> = None;
    let mut set = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        if i == dominant {
            continue;
        }
        let a = f.zeta_abscissa();
        match runner_up {
            Some(p) if a < p => {}
            Some(p) if a == p => set.push(i),
            _ => {
                runner_up = Some(a);
                set = vec![i];
            }
        }
    }
    let (case, remainder_exp, remainder_log_power) = match runner_up {
        None => (RemainderCase::Below, sub_leading, 0u32),
        Some(p) => {
            let s = set.len() as u32;
            if p < sub_leading {
                (RemainderCase::Below, sub_leading, 0)
            } else if p == sub_leading {
                (RemainderCase::At, sub_leading, s)
            } else {
                (RemainderCase::Above, p, s - 1)
            }
        }
    };
    let law = AsymptoticLaw {
        leading_coeff: None,
        leading_exp: top,
        case,
        remainder_exp,
        remainder_log_power,
    };
    Ok((DominanceData { dominant, runner_up, runner_up_set: set }, law))
}

/// Leading Weyl coefficient: the dominant factor's own constant times the
/// spectral zeta of every other factor at the dominant abscissa, each
/// evaluated within `tol`.
pub fn leading_coefficient<R: Real>(op: &TensorOperator, tol: R) -> Result<R> {
    let (dom, law) = classify::<R>(op)?;
    let mut coeff = R::from_f64c(op.factors()[dom.dominant].leading_weyl_coefficient());
    let a = R::from_f64c(rat_f64(law.leading_exp));
    for (i, f) in op.factors().iter().enumerate() {
        if i != dom.dominant {
            coeff = coeff * spectral_zeta(f, a, tol)?.value;
        }
    }
    Ok(coeff)
}

/// A classified law together with its sampled counting data.
#[derive(Clone, Debug)]
pub struct RemainderSeries<R: Real> {
    pub dominance: DominanceData,
    pub law: AsymptoticLaw<R>,
    pub samples: Vec<CountingSample<R>>,
}

/// Exact counts over the tau grid with leading term, remainder and
/// normalized remainder filled in from the classified law.
pub fn remainder_series<R: Real>(op: &TensorOperator, grid: &[R], tol: R) -> Result<RemainderSeries<R>> {
    let (dominance, mut law) = classify::<R>(op)?;
    let coeff = leading_coefficient(op, tol)?;
    law.leading_coeff = Some(coeff);
    let mut samples = Vec::with_capacity(grid.len());
    for &tau in grid {
        samples.push(evaluate_sample(op, &law, tau)?);
    }
    Ok(RemainderSeries { dominance, law, samples })
}

/// One grid row under an already-classified law (the law must carry its
/// leading coefficient). Pure, so rows can be computed concurrently.
pub fn evaluate_sample<R: Real>(op: &TensorOperator, law: &AsymptoticLaw<R>, tau: R) -> Result<CountingSample<R>> {
    evaluate_sample_with_budget(op, law, tau, crate::counting::DEFAULT_RECURSION_BUDGET)
}

pub fn evaluate_sample_with_budget<R: Real>(
    op: &TensorOperator,
    law: &AsymptoticLaw<R>,
    tau: R,
    budget: u64,
) -> Result<CountingSample<R>> {
    let count = crate::counting::count_tensor_recursive_with_budget(op, tau, budget)?;
    let coeff = law.leading_coeff.expect("law must carry its coefficient");
    let leading = coeff * tau.powf(R::from_f64c(rat_f64(law.leading_exp)));
    let remainder = R::from_u128(count).unwrap() - leading;
    let norm = tau.powf(R::from_f64c(rat_f64(law.remainder_exp)))
        * tau.ln().powi(law.remainder_log_power as i32);
    let normalized = remainder / norm;
    Ok(CountingSample {
        tau,
        count,
        leading: Some(leading),
        remainder: Some(remainder),
        normalized_remainder: normalized.is_finite().then_some(normalized),
    })
}

/// Least-squares slope of log |remainder| against log tau over the tail
/// fraction of the samples, with an R^2 confidence. Log factors are not
/// fitted; divide them out beforehand via the normalized remainder.
pub fn fit_exponent<R: Real>(samples: &[CountingSample<R>], tail_fraction: f64) -> Result<(R, R)> {
    if !(0.0..=1.0).contains(&tail_fraction) {
        return Err(Error::InvalidInput(format!("tail fraction {tail_fraction} outside [0, 1]")));
    }
    let mut points: Vec<(R, R)> = Vec::new();
    let start = ((samples.len() as f64) * (1.0 - tail_fraction)).floor() as usize;
    for s in &samples[start.min(samples.len())..] {
        if let Some(r) = s.remainder {
            if r != R::zero() {
                points.push((s.tau.ln(), r.abs().ln()));
            }
        }
    }
    const NEEDED: usize = 10;
    if points.len() < NEEDED {
        return Err(Error::InsufficientData { needed: NEEDED, got: points.len() });
    }
    let n = R::from_usize(points.len()).unwrap();
    let mean_x = points.iter().map(|p| p.0).fold(R::zero(), |a, b| a + b) / n;
    let mean_y = points.iter().map(|p| p.1).fold(R::zero(), |a, b| a + b) / n;
    let mut sxx = R::zero();
    let mut sxy = R::zero();
    for (x, y) in &points {
        sxx += (*x - mean_x) * (*x - mean_x);
        sxy += (*x - mean_x) * (*y - mean_y);
    }
    if sxx == R::zero() {
        return Err(Error::InvalidInput("degenerate grid: all tau equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = R::zero();
    let mut ss_tot = R::zero();
    for (x, y) in &points {
        let e = *y - (slope * *x + intercept);
        ss_res += e * e;
        ss_tot += (*y - mean_y) * (*y - mean_y);
    }
    let confidence = if ss_tot > R::zero() { R::one() - ss_res / ss_tot } else { R::one() };
    Ok((slope, confidence))
}

/// Result of the exact two-sided envelope check
/// 3 sqrt(tau)/4 <= N_1(tau) - tau <= 4 sqrt(tau) for tau > 16.
#[derive(Clone, Copy, Debug)]
pub struct EnvelopeCheck {
    pub points_checked: u64,
    pub ok: bool,
    /// min over checked points of 16 R^2 - 9 tau (>= 0 iff lower bound holds)
    pub worst_lower_margin: f64,
    /// min over checked points of 16 tau - R^2 (>= 0 iff upper bound holds)
    pub worst_upper_margin: f64,
}

/// Verify the two-sided remainder envelope of the first model spectrum at
/// the given thresholds, in exact rational arithmetic with zero tolerance.
/// Points with tau <= 16 are skipped (the envelope starts above 16).
pub fn a1_envelope_check(taus: &[f64]) -> Result<EnvelopeCheck> {
    let sixteen = BigRational::from_integer(16.into());
    let mut checked = 0u64;
    let mut ok = true;
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    for &tau in taus {
        let t = Tau::from_f64(tau)?;
        if *t.exact() <= sixteen {
            continue;
        }
        checked += 1;
        let n = count_a1_closed(tau)?;
        let r = BigRational::from_integer(n.into()) - t.exact();
        // R >= 0 and 9 tau <= 16 R^2 and R^2 <= 16 tau, all exact
        let r2_16 = BigRational::from_integer(16.into()) * &r * &r;
        let lower_ok = r.is_positive() && r2_16 >= BigRational::from_integer(9.into()) * t.exact();
        let upper_ok = &r * &r <= BigRational::from_integer(16.into()) * t.exact();
        if !(lower_ok && upper_ok) {
            ok = false;
        }
        let lower_margin = (&r2_16 - BigRational::from_integer(9.into()) * t.exact())
            .to_f64()
            .unwrap_or(f64::NEG_INFINITY);
        let upper_margin = (BigRational::from_integer(16.into()) * t.exact() - &r * &r)
            .to_f64()
            .unwrap_or(f64::NEG_INFINITY);
        worst_lower = worst_lower.min(lower_margin);
        worst_upper = worst_upper.min(upper_margin);
    }
    Ok(EnvelopeCheck { points_checked: checked, ok, worst_lower_margin: worst_lower, worst_upper_margin: worst_upper })
}

/// The tau values flanking the counting-function breakpoints of the first
/// model spectrum inside [lo, hi]: for each kbar, the bracket endpoints
/// kbar^2 - kbar + 1 and kbar^2 + kbar + 1 approached from inside, one
/// representable step away. The remainder attains its extremes there.
pub fn a1_breakpoint_taus(lo: f64, hi: f64, cap: usize) -> Vec<f64> {
    let k_lo = (lo.max(1.0).sqrt() - 1.0).max(1.0) as u64;
    let k_hi = (hi.sqrt() + 2.0) as u64;
    let mut ks: Vec<u64> = (k_lo..=k_hi).collect();
    if ks.len() > cap.max(2) / 2 {
        let take = cap.max(2) / 2;
        let step = ks.len() as f64 / take as f64;
        ks = (0..take).map(|i| ks[(i as f64 * step) as usize]).collect();
    }
    let mut out = Vec::new();
    for k in ks {
        let low_end = (k * k - k + 1) as f64;
        let high_end = (k * k + k + 1) as f64;
        for t in [low_end.next_up(), high_end.next_down()] {
            if t > lo && t <= hi {
                out.push(t);
            }
        }
    }
    out
}

/// The spectrum examples whose remainders realize the three cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SharpnessExample {
    /// First factor times the squared circle spectrum: Below.
    B,
    /// First factor times the circle spectrum: At.
    C,
    /// First factor times the 3/4 power of the circle spectrum: Above.
    D,
}

impl SharpnessExample {
    pub fn operator(self) -> TensorOperator {
        let second = match self {
            SharpnessExample::B => {
                a2_spectrum().transform(&SpectrumTransform::power_only(Rat::from_integer(2)).unwrap())
            }
            SharpnessExample::C => a2_spectrum(),
            SharpnessExample::D => {
                a2_spectrum().transform(&SpectrumTransform::power_only(Rat::new(3, 4)).unwrap())
            }
        };
        TensorOperator::new(vec![a1_spectrum(), second]).expect("model factors have eigenvalues >= 1")
    }

    pub fn name(self) -> &'static str {
        match self {
            SharpnessExample::B => "B",
            SharpnessExample::C => "C",
            SharpnessExample::D => "D",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        match s {
            "B" | "b" => Ok(SharpnessExample::B),
            "C" | "c" => Ok(SharpnessExample::C),
            "D" | "d" => Ok(SharpnessExample::D),
            _ => Err(Error::InvalidInput(format!("unknown sharpness example `{s}`; expected B, C or D"))),
        }
    }
}

/// Sharpness report: normalized remainder statistics with a tail-window
/// maximum as the finite-scale limsup proxy, plus the exact envelope check
/// on the dominant factor's breakpoints.
#[derive(Clone, Debug)]
pub struct SharpnessReport<R: Real> {
    pub example: SharpnessExample,
    pub dominance: DominanceData,
    pub law: AsymptoticLaw<R>,
    pub samples: Vec<CountingSample<R>>,
    pub max_normalized: R,
    pub min_normalized: R,
    pub max_abs_normalized: R,
    /// Tau at which the tail window starts.
    pub tail_start: R,
    /// Maximum normalized remainder over the tail window (limsup proxy).
    pub tail_max: R,
    pub envelope: EnvelopeCheck,
}

/// Default fraction of the grid treated as the tail window.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;

/// Evaluate a sharpness example over the grid, augmented with samples at
/// the dominant factor's counting breakpoints where the proofs locate the
/// remainder extremes.
pub fn sharpness_suite<R: Real>(
    example: SharpnessExample,
    grid: &[R],
    tol: R,
    tail_fraction: f64,
) -> Result<SharpnessReport<R>> {
    if grid.len() < 2 {
        return Err(Error::InvalidInput("sharpness needs a grid of at least 2 points".into()));
    }
    let op = example.operator();
    let lo = grid.iter().cloned().fold(R::infinity(), R::min);
    let hi = grid.iter().cloned().fold(R::neg_infinity(), R::max);
    let mut taus: Vec<R> = grid.to_vec();
    for b in a1_breakpoint_taus(lo.to_f64().unwrap(), hi.to_f64().unwrap(), 256) {
        taus.push(R::from_f64c(b));
    }
    taus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    taus.dedup();
    let series = remainder_series(&op, &taus, tol)?;
    let tail_start = lo + (hi - lo) * R::from_f64c(1.0 - tail_fraction.clamp(0.0, 1.0));
    let mut max_n = R::neg_infinity();
    let mut min_n = R::infinity();
    let mut max_abs = R::zero();
    let mut tail_max = R::neg_infinity();
    for s in &series.samples {
        let Some(n) = s.normalized_remainder else { continue };
        max_n = max_n.max(n);
        min_n = min_n.min(n);
        max_abs = max_abs.max(n.abs());
        if s.tau >= tail_start {
            tail_max = tail_max.max(n);
        }
    }
    let env_taus: Vec<f64> =
        a1_breakpoint_taus(lo.to_f64().unwrap().max(16.0), hi.to_f64().unwrap(), 2048)
            .into_iter()
            .collect();
    let envelope = a1_envelope_check(&env_taus)?;
    Ok(SharpnessReport {
        example,
        dominance: series.dominance,
        law: series.law,
        samples: series.samples,
        max_normalized: max_n,
        min_normalized: min_n,
        max_abs_normalized: max_abs,
        tail_start,
        tail_max,
        envelope,
    })
}
