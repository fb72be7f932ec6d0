//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// A polynomial with coefficients low to high; the last coefficient is
/// nonzero unless the polynomial is zero (empty coefficient vector).
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn from_elems(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Builds a polynomial from element indices, low degree first.
    pub fn from_indices(field: &Field, indices: &[u64]) -> Result<Poly> {
        let coeffs = indices
            .iter()
            .map(|&i| {
                field
                    .index_element(i)
                    .map_err(|_| Error::CoefficientOutOfRange {
                        value: i.to_string(),
                        order: field.order() as u64,
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_elems(field, coeffs))
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::from_elems(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Elem::ONE)
    }

    pub fn x(field: &Field) -> Poly {
        Poly::from_elems(field, vec![Elem::ZERO, Elem::ONE])
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::from_elems(field, vec![c])
    }

    /// `c * x^e`
    pub fn monomial(field: &Field, c: Elem, e: usize) -> Poly {
        let mut coeffs = vec![Elem::ZERO; e + 1];
        coeffs[e] = c;
        Poly::from_elems(field, coeffs)
    }

    /// `x - c`
    pub fn linear(field: &Field, c: Elem) -> Poly {
        Poly::from_elems(field, vec![field.neg(c), Elem::ONE])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// Degree, or `None` for the zero polynomial (degree minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Elem::ONE
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Elem::ONE)
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) if lc == Elem::ONE => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
                self.scale(inv)
            }
        }
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::from_elems(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Poly::from_elems(f, coeffs))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(self.coeff(i), other.coeff(i)))
            .collect();
        Ok(Poly::from_elems(f, coeffs))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(f));
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Ok(Poly::from_elems(f, out))
    }

    /// Euclidean division: `(quotient, remainder)` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(divisor)?;
        let f = &self.field;
        let Some(dd) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lc_inv = f.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![Elem::ZERO; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = f.mul(rem[top], lc_inv);
            if c.is_zero() {
                continue;
            }
            let shift = top - dd;
            quot[shift] = c;
            for (j, &dj) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = f.sub(rem[shift + j], f.mul(c, dj));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_elems(f, quot), Poly::from_elems(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Quotient of a division that must be exact.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "{divisor} does not divide {self}"
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Monic least common multiple; zero if either argument is zero.
    pub fn lcm(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let g = self.gcd(other)?;
        Ok(self.div_exact(&g)?.try_mul(other)?.monic())
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn powmod(&self, e: &BigUint, modulus: &Poly) -> Result<Poly> {
        self.same_field(modulus)?;
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut acc = Poly::one(&self.field).rem(modulus)?;
        if e.is_zero() {
            return Ok(acc);
        }
        let base = self.rem(modulus)?;
        for i in (0..e.bits()).rev() {
            acc = acc.try_mul(&acc)?.rem(modulus)?;
            if e.bit(i) {
                acc = acc.try_mul(&base)?.rem(modulus)?;
            }
        }
        Ok(acc)
    }

    pub fn powmod_u64(&self, e: u64, modulus: &Poly) -> Result<Poly> {
        self.powmod(&BigUint::from(e), modulus)
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::from_elems(f, coeffs)
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(other(x))`
    pub fn compose(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let f = &self.field;
        let mut acc = Poly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = acc.try_mul(other)?.try_add(&Poly::constant(f, c))?;
        }
        Ok(acc)
    }

    /// Parses the `c*x^e + ...` text format.
    pub fn parse(text: &str, field: &Field) -> Result<Poly> {
        parse_poly(text, field)
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Canonical order: by degree (zero first), then by the coefficient tuple
/// read low to high, comparing element indices.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$inner(rhs).expect("polynomials over different fields")
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_elems(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(&format_poly(self))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{} over {:?}", format_poly(self), self.field)
    }
}

/// Formats in descending powers, omitting zero terms and unit coefficients
/// on nonconstant terms. The zero polynomial is `"0"`.
pub fn format_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (e, &c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let coeff = c.index().to_string();
        let term = match (e, c == Elem::ONE) {
            (0, _) => coeff,
            (1, true) => "x".to_string(),
            (1, false) => format!("{coeff}*x"),
            (_, true) => format!("x^{e}"),
            (_, false) => format!("{coeff}*x^{e}"),
        };
        terms.push(term);
    }
    terms.join("+")
}

const MAX_PARSE_EXPONENT: u64 = 1 << 16;

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    field: &'a Field,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(i, _)| i)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn number(&mut self) -> Result<(usize, String)> {
        let start = self.offset();
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        Ok((start, digits))
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let (start, digits) = self.number()?;
        match digits.parse::<u64>() {
            Ok(e) if e <= MAX_PARSE_EXPONENT => Ok(e as usize),
            _ => Err(Error::Parse {
                position: start,
                message: format!("exponent {digits} too large"),
            }),
        }
    }

    fn expect_x(&mut self) -> Result<()> {
        if self.peek() == Some('x') {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error("expected 'x'"))
        }
    }

    /// One term: `c*x^e`, `c*x`, `x^e`, `x` or `c`.
    fn term(&mut self) -> Result<(Elem, usize)> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                Ok((Elem::ONE, self.exponent()?))
            }
            Some(c) if c.is_ascii_digit() => {
                let (start, digits) = self.number()?;
                let coeff = self.field.parse_element(&digits).map_err(|e| match e {
                    Error::Parse { message, .. } => Error::Parse {
                        position: start,
                        message,
                    },
                    other => other,
                })?;
                if self.peek() == Some('*') {
                    self.pos += 1;
                    self.expect_x()?;
                    Ok((coeff, self.exponent()?))
                } else {
                    Ok((coeff, 0))
                }
            }
            Some(c) => Err(self.error(format!("unexpected character {c:?}"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses the polynomial text format: terms `c*x^e`, `x^e`, `x`, `c` joined
/// by `+`, with `c` an element index. Whitespace is ignored and repeated
/// powers are summed.
pub fn parse_poly(text: &str, field: &Field) -> Result<Poly> {
    let mut parser = Parser {
        chars: text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect(),
        pos: 0,
        field,
        end: text.len(),
    };
    let mut coeffs: Vec<Elem> = Vec::new();
    loop {
        let (c, e) = parser.term()?;
        if coeffs.len() <= e {
            coeffs.resize(e + 1, Elem::ZERO);
        }
        coeffs[e] = field.add(coeffs[e], c);
        match parser.peek() {
            None => break,
            Some('+') => parser.pos += 1,
            Some(other) => return Err(parser.error(format!("unexpected character {other:?}"))),
        }
    }
    Ok(Poly::from_elems(field, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn gf(p: u64, k: u32) -> Field {
        make_field(p, k).unwrap()
    }

    fn poly(f: &Field, s: &str) -> Poly {
        parse_poly(s, f).unwrap()
    }

    #[test]
    fn char2_square() {
        let f = gf(2, 1);
        let a = poly(&f, "x+1");
        assert_eq!(&a * &a, poly(&f, "x^2+1"));
    }

    #[test]
    fn gcd_examples() {
        let f = gf(2, 1);
        assert_eq!(
            poly(&f, "x^2+x").gcd(&poly(&f, "x^2+1")).unwrap(),
            poly(&f, "x+1")
        );
        let g = gf(5, 1);
        let a = poly(&g, "3*x^2+2");
        let d = a.gcd(&Poly::zero(&g)).unwrap();
        assert!(d.is_monic());
        assert_eq!(d, a.monic());
        assert!(Poly::zero(&g).gcd(&Poly::zero(&g)).unwrap().is_zero());
    }

    #[test]
    fn divmod_by_zero_is_an_error() {
        let f = gf(3, 1);
        assert_eq!(
            poly(&f, "x").divmod(&Poly::zero(&f)).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = poly(&gf(2, 1), "x");
        let b = poly(&gf(3, 1), "x");
        assert_eq!(a.try_add(&b).unwrap_err(), Error::MixedFields);
        assert_eq!(a.gcd(&b).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn parse_examples() {
        let f2 = gf(2, 1);
        assert_eq!(
            poly(&f2, "x^2+x+1").coeffs(),
            &[Elem::ONE, Elem::ONE, Elem::ONE]
        );
        let f3 = gf(3, 1);
        let p = poly(&f3, "2*x^2+1");
        let idx: Vec<u32> = p.coeffs().iter().map(|c| c.index()).collect();
        assert_eq!(idx, vec![1, 0, 2]);
        assert_eq!(format_poly(&Poly::zero(&f3)), "0");
        assert_eq!(poly(&f3, " 2 * x ^ 3 + x + x ").to_string(), "2*x^3+2*x");
        assert_eq!(poly(&f3, "0").to_string(), "0");
        assert_eq!(poly(&f3, "x+2").to_string(), "x+2");
    }

    #[test]
    fn parse_errors_report_position() {
        let f = gf(3, 1);
        match parse_poly("x^2+-1", &f).unwrap_err() {
            Error::Parse { position, .. } => assert_eq!(position, 4),
            e => panic!("{e:?}"),
        }
        match parse_poly("x^2 + ", &f).unwrap_err() {
            Error::Parse { position, .. } => assert_eq!(position, 6),
            e => panic!("{e:?}"),
        }
        assert!(matches!(
            parse_poly("3*x", &f).unwrap_err(),
            Error::CoefficientOutOfRange { .. }
        ));
        let f9 = gf(3, 2);
        assert_eq!(poly(&f9, "8*x+5").coeffs()[1].index(), 8);
    }

    #[test]
    fn derivative_and_eval() {
        let f = gf(3, 1);
        let p = poly(&f, "x^3+2*x^2+x+1");
        assert_eq!(p.derivative(), poly(&f, "x+1"));
        assert_eq!(p.eval(Elem::ONE), f.from_int(5));
    }

    #[test]
    fn powmod_matches_repeated_multiplication() {
        let f = gf(5, 1);
        let m = poly(&f, "x^3+x+1");
        let a = poly(&f, "2*x+3");
        let mut acc = Poly::one(&f);
        for e in 0..30u64 {
            assert_eq!(a.powmod_u64(e, &m).unwrap(), acc.rem(&m).unwrap());
            assert_eq!(a.pow(e), acc);
            acc = &acc * &a;
        }
    }

    #[test]
    fn canonical_order() {
        let f = gf(2, 1);
        let mut v = [
            poly(&f, "x^2+1"),
            poly(&f, "x+1"),
            poly(&f, "x^2"),
            poly(&f, "x"),
        ];
        v.sort();
        let s: Vec<String> = v.iter().map(|p| p.to_string()).collect();
        assert_eq!(s, ["x", "x+1", "x^2", "x^2+1"]);
    }
}
