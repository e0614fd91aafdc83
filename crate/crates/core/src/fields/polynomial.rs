//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FieldError;

/// A polynomial in `nvars` variables, stored as a map from exponent tuples to
/// nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(nvars, c, vec![0; nvars])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// The coordinate function `x_k`.
    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Self::monomial(nvars, BigRational::one(), e)
    }

    pub fn monomial(nvars: usize, c: BigRational, exponents: Vec<u32>) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent tuple length must equal nvars");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Self { nvars, terms }
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// repeated exponent tuples and dropping zero coefficients.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = (BigRational, Vec<u32>)>,
    {
        let mut out = Self::zero(nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(FieldError::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            out.add_term(c, e);
        }
        Ok(out)
    }

    fn add_term(&mut self, c: BigRational, e: Vec<u32>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&p| p == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Partial derivative with respect to `x_k`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[k] -= 1;
            out.add_term(c * BigRational::from_integer(BigInt::from(e[k])), e2);
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        debug_assert_eq!(x.len(), self.nvars);
        let mut powers: Vec<Vec<BigRational>> = x.iter().map(|xi| vec![BigRational::one(), xi.clone()]).collect();
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let pw = &mut powers[k];
                while pw.len() <= p as usize {
                    let next = pw.last().unwrap() * &x[k];
                    pw.push(next);
                }
                t *= &pw[p as usize];
            }
            acc += t;
        }
        acc
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = rational_to_f64(c);
                for (k, &p) in e.iter().enumerate() {
                    if p > 0 {
                        t *= x[k].powi(p as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// A compiled copy for repeated floating-point evaluation.
    pub fn to_f64(&self) -> PolynomialF64 {
        PolynomialF64 {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (rational_to_f64(c), e.iter().map(|&p| p as i32).collect()))
                .collect(),
        }
    }
}

/// Polynomial with `f64` coefficients used on hot evaluation paths.
#[derive(Clone, Debug)]
pub struct PolynomialF64 {
    terms: Vec<(f64, Vec<i32>)>,
}

impl PolynomialF64 {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&p, &xi)| if p == 0 { acc } else { acc * xi.powi(p) })
            })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator out of f64 range; divide as big floats
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-0.75"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let s = s.trim();
    let bad = || FieldError::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Exact rational with the same shortest decimal representation as `x`.
pub fn rational_from_decimal_f64(x: f64) -> BigRational {
    parse_rational(&format!("{x:e}")).expect("finite f64 has a decimal representation")
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            let is_const = e.iter().all(|&p| p == 0);
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
            }
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "x{}", k + 1)?,
                    _ => write!(f, "x{}^{}", k + 1, p)?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(c.clone(), e.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(-c.clone(), e.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(c1 * c2, e);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = Polynomial::var(2, 0);
        let d = &x - &x;
        assert!(d.is_zero());
        assert_eq!(d.num_terms(), 0);
    }

    #[test]
    fn product_rule_on_monomials() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &(&x * &x) * &y; // x^2 y
        let dx = p.derivative(0);
        assert_eq!(dx, (&x * &y).scale(&q(2, 1)));
        assert!(p.derivative(1).derivative(1).is_zero());
    }

    #[test]
    fn exact_and_float_evaluation_agree() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let p = &(&x * &y).scale(&q(3, 7)) - &Polynomial::constant(2, q(1, 2));
        let v = p.eval(&[q(2, 3), q(-5, 4)]);
        assert_eq!(v, q(3, 7) * q(2, 3) * q(-5, 4) - q(1, 2));
        let f = p.eval_f64(&[2.0 / 3.0, -1.25]);
        assert!((f - rational_to_f64(&v)).abs() < 1e-15);
        assert!((p.to_f64().eval(&[2.0 / 3.0, -1.25]) - f).abs() < 1e-15);
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), q(-7, 1));
        assert_eq!(parse_rational("-0.7").unwrap(), q(-7, 10));
        assert_eq!(parse_rational("1.25e1").unwrap(), q(25, 2));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(rational_from_decimal_f64(0.3), q(3, 10));
        assert_eq!(rational_from_decimal_f64(-2.2), q(-11, 5));
    }
}
