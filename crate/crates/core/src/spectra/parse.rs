//! Operator expression grammar:
//!
//! ```text
//! expr    := factor { "(x)" factor } ;
//! factor  := name [ "^" rational ] ;
//! name    := "a1" | "a2" | "hermite" | "sphere(" integer ["," real] ")" | "ho(" integer ")" ;
//! rational:= integer [ "/" integer ] ;
//! ```
//!
//! Whitespace is insignificant; `(x)` is the tensor product. Sphere shifts
//! accept decimals as well as `p/q` fractions, both kept exact.

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::Rat;

use super::{
    a1_spectrum, a2_spectrum_with, harmonic_oscillator, hermite_spectrum,
    sphere_laplacian_shifted_rat, ModelSpectrum, S1ZeroMode, SpectrumKind, SpectrumTransform,
    TensorOperator,
};

/// Configuration applied while building spectra from an expression.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    pub s1_zero_mode: S1ZeroMode,
}

pub fn parse_operator(expr: &str) -> Result<TensorOperator> {
    parse_operator_with(expr, &ParseOptions::default())
}

pub fn parse_operator_with(expr: &str, opts: &ParseOptions) -> Result<TensorOperator> {
    let mut p = Parser { chars: expr.chars().collect(), pos: 0, opts: *opts };
    let op = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(op)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    opts: ParseOptions,
}

impl Parser {
    fn syntax(&self, message: &str) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<TensorOperator> {
        let mut factors = vec![self.factor()?];
        while self.at_tensor_sign() {
            self.expect('(')?;
            self.expect('x')?;
            self.expect(')')?;
            factors.push(self.factor()?);
        }
        TensorOperator::new(factors)
    }

    fn at_tensor_sign(&mut self) -> bool {
        let save = self.pos;
        let found = self.peek() == Some('(') && {
            self.pos += 1;
            self.peek() == Some('x')
        };
        self.pos = save;
        found
    }

    fn factor(&mut self) -> Result<ModelSpectrum> {
        let base = self.name()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let s = self.rational()?;
            if s <= Rat::from_integer(0) {
                return Err(Error::NonPositiveExponent(s.to_string()));
            }
            return Ok(base.transform(&SpectrumTransform::power_only(s)?));
        }
        Ok(base)
    }

    fn name(&mut self) -> Result<ModelSpectrum> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected an operator name"));
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        match word.as_str() {
            "a1" => Ok(a1_spectrum()),
            "a2" => Ok(a2_spectrum_with(self.opts.s1_zero_mode)),
            "hermite" => Ok(hermite_spectrum()),
            "sphere" => {
                self.expect('(')?;
                let dim = self.integer()?;
                let shift = if self.peek() == Some(',') {
                    self.pos += 1;
                    self.signed_real()?
                } else {
                    Rat::from_integer(0)
                };
                self.expect(')')?;
                sphere_laplacian_shifted_rat(dim as u32, shift, self.opts.s1_zero_mode)
            }
            "ho" => {
                self.expect('(')?;
                let dim = self.integer()?;
                self.expect(')')?;
                harmonic_oscillator(dim as u32)
            }
            _ => Err(Error::UnknownOperator(word)),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected an integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| self.syntax("integer out of range"))
    }

    fn rational(&mut self) -> Result<Rat> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let num = self.integer()? as i64;
        let mut r = Rat::from_integer(num);
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.integer()? as i64;
            if den == 0 {
                return Err(self.syntax("zero denominator"));
            }
            r = Rat::new(num, den);
        }
        Ok(if neg { -r } else { r })
    }

    /// Decimal such as `0.25`, or a `p/q` fraction; kept exact either way.
    fn signed_real(&mut self) -> Result<Rat> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let int_part = self.integer()? as i64;
        let mut r = Rat::from_integer(int_part);
        match self.chars.get(self.pos) {
            Some('.') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if self.pos == start {
                    return Err(self.syntax("expected digits after decimal point"));
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let frac: i64 = digits.parse().map_err(|_| self.syntax("decimal out of range"))?;
                let den = 10i64.checked_pow(digits.len() as u32).ok_or_else(|| self.syntax("decimal out of range"))?;
                r += Rat::new(frac, den);
            }
            Some('/') => {
                self.pos += 1;
                let den = self.integer()? as i64;
                if den == 0 {
                    return Err(self.syntax("zero denominator"));
                }
                r = Rat::new(int_part, den);
            }
            _ => {}
        }
        Ok(if neg { -r } else { r })
    }
}

/// Inverse of [`parse_operator`] for grammar-expressible operators.
/// Transform chains are flattened to one power; scale factors other than 1
/// have no surface syntax and are rejected.
pub fn render(op: &TensorOperator) -> Result<String> {
    let mut parts = Vec::with_capacity(op.rank());
    for f in op.factors() {
        parts.push(render_factor(f)?);
    }
    Ok(parts.join(" (x) "))
}

fn render_factor(spec: &ModelSpectrum) -> Result<String> {
    // only the sphere's own 1/q base normalization may appear in the scale
    let q = *spec.family().scale_rat().denom();
    let expected = if q == 1 {
        super::ScaleProduct::one()
    } else {
        super::ScaleProduct::one().mul_factor(BigRational::new(1.into(), q.into()), spec.power())
    };
    if *spec.scale() != expected {
        return Err(Error::InvalidInput("operator carries a scale factor the grammar cannot express".into()));
    }
    let name = render_name(spec.kind())?;
    let s = spec.power();
    if s.is_one() {
        Ok(name)
    } else if s.is_integer() {
        Ok(format!("{name}^{}", s.numer()))
    } else {
        Ok(format!("{name}^{}/{}", s.numer(), s.denom()))
    }
}

fn render_name(kind: &SpectrumKind) -> Result<String> {
    match kind {
        SpectrumKind::A1 => Ok("a1".into()),
        SpectrumKind::A2 => Ok("a2".into()),
        SpectrumKind::Hermite1D => Ok("hermite".into()),
        SpectrumKind::HarmonicOscillator { dim } => Ok(format!("ho({dim})")),
        SpectrumKind::SphereLaplacianShifted { dim, shift } => {
            if shift.is_integer() && *shift.numer() == 0 {
                Ok(format!("sphere({dim})"))
            } else if shift.is_integer() {
                Ok(format!("sphere({dim},{})", shift.numer()))
            } else {
                Ok(format!("sphere({dim},{}/{})", shift.numer(), shift.denom()))
            }
        }
        SpectrumKind::Transformed { base, .. } => render_name(base),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{a2_spectrum, SpectrumTransform};

    #[test]
    fn parses_the_model_products() {
        let b = parse_operator("a1 (x) a2^2").unwrap();
        assert_eq!(b.rank(), 2);
        assert_eq!(b.factors()[0].kind(), &SpectrumKind::A1);
        assert_eq!(b.factors()[1].zeta_abscissa(), Rat::new(1, 4));

        let hh = parse_operator("hermite (x) hermite").unwrap();
        assert_eq!(hh.rank(), 2);
        assert_eq!(hh.factors()[0].kind(), &SpectrumKind::Hermite1D);
    }

    #[test]
    fn rejects_nonpositive_exponents() {
        assert!(matches!(parse_operator("a2^0"), Err(Error::NonPositiveExponent(_))));
        assert!(matches!(parse_operator("a2^-1"), Err(Error::NonPositiveExponent(_))));
    }

    #[test]
    fn reports_syntax_errors_with_positions() {
        match parse_operator("a1 (x)") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(parse_operator("a1 (x) a2 junk"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("frobenius"), Err(Error::UnknownOperator(_))));
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_operator("a1(x)a2 ^ 3/4").unwrap();
        let b = parse_operator("  a1 ( x )   a2^3/4 ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sphere_and_ho_arguments() {
        let s = parse_operator("sphere(3, 0.25)").unwrap();
        assert_eq!(
            s.factors()[0].kind(),
            &SpectrumKind::SphereLaplacianShifted { dim: 3, shift: Rat::new(1, 4) }
        );
        let h = parse_operator("ho(2)").unwrap();
        assert_eq!(h.factors()[0].kind(), &SpectrumKind::HarmonicOscillator { dim: 2 });
        assert!(matches!(parse_operator("sphere(2,-1)"), Err(Error::NegativeShift(_))));
    }

    #[test]
    fn render_round_trips() {
        for expr in [
            "a1",
            "a2^2",
            "a1 (x) a2",
            "a1 (x) a2^3/4",
            "hermite (x) hermite (x) hermite",
            "sphere(3,3/2) (x) ho(2)^2",
        ] {
            let op = parse_operator(expr).unwrap();
            let rendered = render(&op).unwrap();
            assert_eq!(parse_operator(&rendered).unwrap(), op, "round trip through `{rendered}`");
        }
    }

    #[test]
    fn render_rejects_scaled_operators() {
        let scaled = a2_spectrum().transform(&SpectrumTransform::new(Rat::one(), 2.0).unwrap());
        let op = TensorOperator::single(scaled).unwrap();
        assert!(render(&op).is_err());
    }
}
