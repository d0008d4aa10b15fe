//! Small exact polynomials over rationals, used to expand multiplicity
//! sequences when bounding spectral zeta tails.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub(crate) type Coeff = Ratio<i128>;

/// Dense polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Poly(Vec<Coeff>);

impl Poly {
    pub fn from_coeffs(mut c: Vec<Coeff>) -> Self {
        while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if c.is_empty() {
            c.push(Coeff::zero());
        }
        Poly(c)
    }

    pub fn constant(c: Coeff) -> Self {
        Poly(vec![c])
    }

    /// The monomial x + a.
    pub fn linear(a: Coeff) -> Self {
        Poly(vec![a, Coeff::one()])
    }


    pub fn coeffs(&self) -> &[Coeff] {
        &self.0
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Coeff::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Coeff::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] -= c;
        }
        Poly::from_coeffs(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Coeff::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, f: Coeff) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|c| c * f).collect())
    }

    /// Substitute x -> x + h.
    pub fn shift(&self, h: Coeff) -> Poly {
        let mut out = Poly::constant(Coeff::zero());
        let base = Poly::linear(h);
        let mut pow = Poly::constant(Coeff::one());
        for c in &self.0 {
            out = out.add(&pow.scale(*c));
            pow = pow.mul(&base);
        }
        out
    }

    #[cfg(test)]
    pub fn eval_rat(&self, x: Coeff) -> Coeff {
        let mut acc = Coeff::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// binom(x + off, d) as a polynomial in x: prod_{i=0}^{d-1} (x + off - i) / d!.
pub(crate) fn binomial_poly(off: i128, d: u32) -> Poly {
    let mut p = Poly::constant(Coeff::one());
    let mut fact: i128 = 1;
    for i in 0..d as i128 {
        p = p.mul(&Poly::linear(Coeff::from_integer(off - i)));
        fact *= i + 1;
    }
    p.scale(Coeff::new(1, fact))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_matches_direct_eval() {
        // p(x) = 2x^2 - 3x + 5 shifted by 1/2
        let p = Poly::from_coeffs(vec![
            Coeff::from_integer(5),
            Coeff::from_integer(-3),
            Coeff::from_integer(2),
        ]);
        let q = p.shift(Coeff::new(1, 2));
        for x in -4..=4 {
            let x = Coeff::from_integer(x);
            assert_eq!(q.eval_rat(x), p.eval_rat(x + Coeff::new(1, 2)));
        }
    }

    #[test]
    fn binomial_poly_hits_integer_values() {
        // binom(k+3, 3) - binom(k+1, 3) = (k+1)^2 is the S^3 multiplicity
        let m = binomial_poly(3, 3).sub(&binomial_poly(1, 3));
        for k in 0..8i128 {
            let want = (k + 1) * (k + 1);
            assert_eq!(m.eval_rat(Coeff::from_integer(k)), Coeff::from_integer(want));
        }
    }
}
