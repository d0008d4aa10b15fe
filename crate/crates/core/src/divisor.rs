//! The Dirichlet divisor summatory function, its anisotropic
//! generalization, and their asymptotic main terms.
//!
//! Counts are over pairs of positive integers strictly below the threshold:
//! D(tau) = #{(n, m) : n m < tau}. The classical evaluator uses the
//! hyperbola split 2 sum_{n <= sqrt(T)} floor(T/n) - floor(sqrt(T))^2 with
//! T the largest integer below tau, which costs O(sqrt(T)) exact integer
//! operations. Known sharper remainder exponents for D (Hardy's lower
//! bound, Huxley's 131/416) are out of scope here: this module only
//! evaluates counts and the classical main terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::{checked_add, checked_mul, ikth_root_big, isqrt_u128, Rat, Real, Tau};
use crate::zeta::{euler_mascheroni, riemann_zeta};

/// Anisotropic divisor query: count pairs with n^alpha * m^beta < tau.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorQuery {
    pub tau: f64,
    pub alpha: Rat,
    pub beta: Rat,
}

impl DivisorQuery {
    pub fn new(tau: f64, alpha: Rat, beta: Rat) -> Result<Self> {
        if alpha <= Rat::from_integer(0) || beta <= Rat::from_integer(0) {
            return Err(Error::InvalidInput(format!("exponents must be positive, got {alpha}, {beta}")));
        }
        Tau::from_f64(tau)?;
        Ok(Self { tau, alpha, beta })
    }

    pub fn classical(tau: f64) -> Result<Self> {
        Self::new(tau, Rat::one(), Rat::one())
    }
}

/// Default cap on hyperbola-loop iterations (sqrt of the threshold),
/// i.e. thresholds up to 1e18 by default.
pub const DEFAULT_HYPERBOLA_BUDGET: u64 = 1_000_000_000;

/// Exact D(tau) by the Dirichlet hyperbola method, O(sqrt(tau)).
pub fn divisor_summatory<R: Real>(tau: R) -> Result<u128> {
    divisor_summatory_with_budget(tau, DEFAULT_HYPERBOLA_BUDGET)
}

pub fn divisor_summatory_with_budget<R: Real>(tau: R, budget: u64) -> Result<u128> {
    let t = Tau::from_real(tau)?;
    let tt = t.largest_integer_below().ok_or(Error::CountOverflow)?;
    divisor_summatory_integer(tt, budget)
}

/// D over products n m <= t, exact.
fn divisor_summatory_integer(t: u128, budget: u64) -> Result<u128> {
    if t == 0 {
        return Ok(0);
    }
    let r = isqrt_u128(t);
    if r > budget as u128 {
        return Err(Error::BudgetExceeded(budget));
    }
    let mut sum: u128 = 0;
    for n in 1..=r {
        sum = checked_add(sum, t / n)?;
    }
    let twice = checked_mul(sum, 2)?;
    Ok(twice - r * r)
}

/// Default inner-step budget for the brute-force oracle.
pub const DEFAULT_DIVISOR_BRUTE_BUDGET: u64 = 100_000_000;

/// Literal double-loop enumeration of pairs with n m < tau; the reference
/// oracle for the hyperbola method.
pub fn divisor_bruteforce<R: Real>(tau: R) -> Result<u128> {
    divisor_bruteforce_with_budget(tau, DEFAULT_DIVISOR_BRUTE_BUDGET)
}

pub fn divisor_bruteforce_with_budget<R: Real>(tau: R, budget: u64) -> Result<u128> {
    let t = Tau::from_real(tau)?;
    let tt = t.largest_integer_below().ok_or(Error::CountOverflow)?;
    let mut steps: u64 = 0;
    let mut count: u128 = 0;
    for n in 1..=tt {
        // walk m = 1, 2, ... while n*m <= T
        let mut product = n;
        while product <= tt {
            count += 1;
            steps += 1;
            if steps > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            product += n;
        }
    }
    Ok(count)
}

/// Dirichlet's main term tau log tau + (2 gamma - 1) tau.
pub fn dirichlet_main_term<R: Real>(tau: R) -> R {
    let g = euler_mascheroni::<R>();
    let two = R::from_f64c(2.0);
    tau * tau.ln() + (two * g - R::one()) * tau
}

/// Exact count of pairs (n, m) in (N*)^2 with n^alpha * m^beta < tau.
///
/// The loop runs over the variable with the larger exponent (fewer
/// iterations) and the inner count is an exact integer root extraction on
/// cross-powered integers.
pub fn anisotropic_count(q: &DivisorQuery) -> Result<u128> {
    anisotropic_count_with_budget(q, DEFAULT_DIVISOR_BRUTE_BUDGET)
}

pub fn anisotropic_count_with_budget(q: &DivisorQuery, budget: u64) -> Result<u128> {
    let tau = Tau::from_f64(q.tau)?;
    // loop over the variable with the larger exponent
    let (outer, inner) = if q.beta >= q.alpha { (q.beta, q.alpha) } else { (q.alpha, q.beta) };
    let mut total: u128 = 0;
    let mut steps: u64 = 0;
    for m in 1u128.. {
        steps += 1;
        if steps > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let inner_max = largest_power_complement(m, outer, inner, &tau)?;
        if inner_max == 0 {
            break;
        }
        total = checked_add(total, inner_max)?;
    }
    Ok(total)
}

/// Largest n >= 0 with n^inner * m^outer < tau, exactly.
///
/// With inner = a/b, outer = c/d and L = lcm(b, d), the condition
/// cross-powers to n^(aL/b) * m^(cL/d) < tau^L over integers.
fn largest_power_complement(m: u128, outer: Rat, inner: Rat, tau: &Tau) -> Result<u128> {
    use num_integer::Integer;
    let l = inner.denom().lcm(outer.denom());
    let pn = (inner.numer() * (l / inner.denom())) as u32;
    let pm = (outer.numer() * (l / outer.denom())) as u32;
    // n^pn < tau^L / m^pm
    let tau_l = {
        let num = tau.exact().numer().pow(l as u32);
        let den = tau.exact().denom().pow(l as u32);
        (num, den)
    };
    let m_pow = BigInt::from(m).pow(pm);
    // n^pn < num / (den * m_pow)  <=>  n^pn <= ceil(num / (den*m_pow)) - 1
    let denom = &tau_l.1 * &m_pow;
    let (q, r) = tau_l.0.div_rem(&denom);
    let bound = if r.is_zero() { q - BigInt::one() } else { q };
    if !bound.is_positive() {
        return Ok(0);
    }
    let root = ikth_root_big(&bound, pn);
    root.to_u128().ok_or(Error::CountOverflow)
}

/// Anisotropic count via the symmetric split at the crossing point
/// n^alpha ~ m^beta ~ tau^(1/(alpha+beta)), mirroring the hyperbola method:
/// both loops run ~tau^(1/(alpha+beta)) iterations instead of the direct
/// loop's tau^(1/max(alpha,beta)).
pub fn anisotropic_count_split(q: &DivisorQuery) -> Result<u128> {
    let tau = Tau::from_f64(q.tau)?;
    // any exact split value works; aim for the crossing point
    let bal = crate::spectra::rat_f64(q.beta) / (crate::spectra::rat_f64(q.alpha) + crate::spectra::rat_f64(q.beta));
    let split = Tau::from_f64(q.tau.powf(bal).max(1.0))?;
    // region 1: m^beta <= split, count n with n^alpha m^beta < tau
    let m0 = count_powers_at_most(q.beta, split.exact())?;
    let mut total: u128 = 0;
    for m in 1..=m0 {
        total = checked_add(total, largest_power_complement(m, q.beta, q.alpha, &tau)?)?;
    }
    // region 2: m^beta > split forces n^alpha < tau/split; for each such n
    // the admissible m are those with m^beta < tau/n^alpha minus the m0 low ones
    let ratio = tau.exact() / split.exact();
    let n0 = count_powers_below(q.alpha, &ratio)?;
    for n in 1..=n0 {
        let with_m = largest_power_complement(n, q.alpha, q.beta, &tau)?;
        debug_assert!(with_m >= m0);
        total = checked_add(total, with_m - m0)?;
    }
    Ok(total)
}

/// #{k >= 1 : k^e <= bound} for a positive rational bound, exact.
fn count_powers_at_most(e: Rat, bound: &BigRational) -> Result<u128> {
    use num_integer::Integer;
    // k^(p/q) <= bound  <=>  k^p <= floor(bound^q)
    let p = *e.numer() as u32;
    let qq = *e.denom() as u32;
    let num = bound.numer().pow(qq);
    let den = bound.denom().pow(qq);
    let x = num.div_floor(&den);
    if !x.is_positive() {
        return Ok(0);
    }
    ikth_root_big(&x, p).to_u128().ok_or(Error::CountOverflow)
}

/// #{k >= 1 : k^e < bound} for a positive rational bound, exact.
fn count_powers_below(e: Rat, bound: &BigRational) -> Result<u128> {
    use num_integer::Integer;
    let p = *e.numer() as u32;
    let qq = *e.denom() as u32;
    let num = bound.numer().pow(qq);
    let den = bound.denom().pow(qq);
    let (fl, rem) = num.div_rem(&den);
    let x = if rem.is_zero() { fl - BigInt::one() } else { fl };
    if !x.is_positive() {
        return Ok(0);
    }
    ikth_root_big(&x, p).to_u128().ok_or(Error::CountOverflow)
}

/// Brute-force oracle for the anisotropic count: double loop deciding each
/// pair by a direct cross-powered integer comparison, budget-guarded.
pub fn anisotropic_bruteforce(q: &DivisorQuery, budget: u64) -> Result<u128> {
    use num_integer::Integer;
    let tau = Tau::from_f64(q.tau)?;
    let l = q.alpha.denom().lcm(q.beta.denom());
    let pn = (q.alpha.numer() * (l / q.alpha.denom())) as u32;
    let pm = (q.beta.numer() * (l / q.beta.denom())) as u32;
    let tau_num = tau.exact().numer().pow(l as u32);
    let tau_den = tau.exact().denom().pow(l as u32);
    let fast = (tau_num.to_u128(), tau_den.to_u128());
    // n^alpha m^beta < tau  <=>  n^pn m^pm tau_den < tau_num
    let pair_below = |n: u128, m: u128| -> bool {
        if let (Some(tn), Some(td)) = fast {
            let small = n
                .checked_pow(pn)
                .and_then(|a| m.checked_pow(pm).and_then(|b| a.checked_mul(b)))
                .and_then(|ab| ab.checked_mul(td));
            if let Some(v) = small {
                return v < tn;
            }
        }
        BigInt::from(n).pow(pn) * BigInt::from(m).pow(pm) * &tau_den < tau_num
    };
    let mut total: u128 = 0;
    let mut steps: u64 = 0;
    for n in 1u128.. {
        if !pair_below(n, 1) {
            break;
        }
        let mut m = 1u128;
        while pair_below(n, m) {
            total = checked_add(total, 1)?;
            steps += 1;
            if steps > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            m += 1;
        }
    }
    Ok(total)
}

/// Main term of the anisotropic divisor count,
/// zeta(alpha/beta) tau^(1/beta) + zeta(beta/alpha) tau^(1/alpha),
/// with the Riemann zeta continuation supplying arguments below 1.
pub fn anisotropic_main_term<R: Real>(q: &DivisorQuery, tau: R) -> Result<R> {
    if q.alpha == q.beta {
        return Err(Error::Pole);
    }
    let ab = crate::spectra::rat_f64(q.alpha) / crate::spectra::rat_f64(q.beta);
    let z_ab: R = riemann_zeta(R::from_f64c(ab))?;
    let z_ba: R = riemann_zeta(R::from_f64c(1.0 / ab))?;
    let inv_beta = R::from_f64c(1.0 / crate::spectra::rat_f64(q.beta));
    let inv_alpha = R::from_f64c(1.0 / crate::spectra::rat_f64(q.alpha));
    Ok(z_ab * tau.powf(inv_beta) + z_ba * tau.powf(inv_alpha))
}

/// Whether the two-factor oscillator product count equals D(tau).
pub fn hermite_tensor_crosscheck(tau: f64) -> Result<bool> {
    let h = crate::spectra::hermite_spectrum();
    let op = crate::spectra::TensorOperator::new(vec![h.clone(), h])?;
    let lhs = crate::counting::count_tensor_recursive(&op, tau)?;
    let rhs = divisor_summatory(tau)?;
    Ok(lhs == rhs)
}
