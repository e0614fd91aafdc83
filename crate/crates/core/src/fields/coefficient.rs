//! Coefficient functions of vector fields.
//!
//! Almost every system of interest has polynomial coefficients and stays on
//! the exact [`Coefficient::Poly`] path. The remaining variants form a small
//! expression language for smooth non-polynomial coefficients built from
//! flat bump functions (`exp(-(log s)^2)` cut off where `s <= 0`). Values of
//! those coefficients are exact only where every gate is closed.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::polynomial::{rational_to_f64, Polynomial, PolynomialF64};

/// Value of a coefficient at a rational point.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => rational_to_f64(r),
            Value::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, Value::Exact(r) if r.is_zero())
    }
}

#[derive(Clone, PartialEq)]
pub enum Coefficient {
    Poly(Polynomial),
    Sum(Vec<Coefficient>),
    Product(Vec<Coefficient>),
    Exp(Box<Coefficient>),
    Ln(Box<Coefficient>),
    Sqrt(Box<Coefficient>),
    Recip(Box<Coefficient>),
    /// `body` where `support > 0`, zero elsewhere. The body must vanish to
    /// infinite order at the edge of the support, so differentiation
    /// commutes with the gate.
    Gate {
        support: Polynomial,
        body: Box<Coefficient>,
    },
}

impl From<Polynomial> for Coefficient {
    fn from(p: Polynomial) -> Self {
        Coefficient::Poly(p)
    }
}

impl Coefficient {
    pub fn zero(nvars: usize) -> Self {
        Coefficient::Poly(Polynomial::zero(nvars))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coefficient::Poly(p) if p.is_zero())
    }

    pub fn as_poly(&self) -> Option<&Polynomial> {
        match self {
            Coefficient::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.as_poly().is_some()
    }

    fn nvars_hint(&self) -> Option<usize> {
        match self {
            Coefficient::Poly(p) => Some(p.nvars()),
            Coefficient::Sum(v) | Coefficient::Product(v) => v.iter().find_map(|c| c.nvars_hint()),
            Coefficient::Exp(c) | Coefficient::Ln(c) | Coefficient::Sqrt(c) | Coefficient::Recip(c) => c.nvars_hint(),
            Coefficient::Gate { support, .. } => Some(support.nvars()),
        }
    }

    pub fn sum(a: Coefficient, b: Coefficient) -> Coefficient {
        match (a, b) {
            (Coefficient::Poly(p), Coefficient::Poly(q)) => Coefficient::Poly(&p + &q),
            (a, b) if a.is_zero() => b,
            (a, b) if b.is_zero() => a,
            (a, b) => {
                let mut parts = Vec::new();
                for c in [a, b] {
                    match c {
                        Coefficient::Sum(v) => parts.extend(v),
                        other => parts.push(other),
                    }
                }
                // fold polynomial summands together
                let mut poly: Option<Polynomial> = None;
                let mut rest = Vec::new();
                for c in parts {
                    match c {
                        Coefficient::Poly(p) => {
                            poly = Some(match poly {
                                Some(acc) => &acc + &p,
                                None => p,
                            })
                        }
                        other => rest.push(other),
                    }
                }
                if let Some(p) = poly.filter(|p| !p.is_zero()) {
                    rest.insert(0, Coefficient::Poly(p));
                }
                match rest.len() {
                    1 => rest.pop().unwrap(),
                    _ => Coefficient::Sum(rest),
                }
            }
        }
    }

    pub fn product(a: Coefficient, b: Coefficient) -> Coefficient {
        let nvars = a.nvars_hint().or(b.nvars_hint()).unwrap_or(0);
        match (a, b) {
            (Coefficient::Poly(p), Coefficient::Poly(q)) => Coefficient::Poly(&p * &q),
            (a, b) if a.is_zero() || b.is_zero() => Coefficient::zero(nvars),
            (a, b) => {
                let mut parts = Vec::new();
                for c in [a, b] {
                    match c {
                        Coefficient::Product(v) => parts.extend(v),
                        other => parts.push(other),
                    }
                }
                let mut poly = Polynomial::one(nvars);
                let mut rest = Vec::new();
                for c in parts {
                    match c {
                        Coefficient::Poly(p) => poly = &poly * &p,
                        other => rest.push(other),
                    }
                }
                if poly.is_zero() {
                    return Coefficient::zero(nvars);
                }
                if poly.as_constant().is_none_or(|c| !c.is_one()) {
                    rest.insert(0, Coefficient::Poly(poly));
                }
                match rest.len() {
                    1 => rest.pop().unwrap(),
                    _ => Coefficient::Product(rest),
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Coefficient {
        match self {
            Coefficient::Poly(p) => Coefficient::Poly(p.scale(c)),
            other => {
                let nvars = other.nvars_hint().unwrap_or(0);
                Coefficient::product(Coefficient::Poly(Polynomial::constant(nvars, c.clone())), other.clone())
            }
        }
    }

    pub fn neg(&self) -> Coefficient {
        self.scale(&-BigRational::one())
    }

    /// Partial derivative with respect to `x_k`.
    pub fn derivative(&self, k: usize) -> Coefficient {
        let nvars = self.nvars_hint().unwrap_or(0);
        match self {
            Coefficient::Poly(p) => Coefficient::Poly(p.derivative(k)),
            Coefficient::Sum(v) => v.iter().map(|c| c.derivative(k)).fold(Coefficient::zero(nvars), Coefficient::sum),
            Coefficient::Product(v) => {
                let mut acc = Coefficient::zero(nvars);
                for i in 0..v.len() {
                    let di = v[i].derivative(k);
                    if di.is_zero() {
                        continue;
                    }
                    let mut term = di;
                    for (j, c) in v.iter().enumerate() {
                        if j != i {
                            term = Coefficient::product(term, c.clone());
                        }
                    }
                    acc = Coefficient::sum(acc, term);
                }
                acc
            }
            Coefficient::Exp(e) => Coefficient::product(self.clone(), e.derivative(k)),
            Coefficient::Ln(e) => Coefficient::product(e.derivative(k), Coefficient::Recip(e.clone())),
            Coefficient::Sqrt(e) => {
                let half = Polynomial::constant(nvars, BigRational::new(1.into(), 2.into()));
                Coefficient::product(
                    Coefficient::product(Coefficient::Poly(half), e.derivative(k)),
                    Coefficient::Recip(Box::new(self.clone())),
                )
            }
            Coefficient::Recip(e) => {
                let r = Coefficient::Recip(e.clone());
                Coefficient::product(Coefficient::product(r.clone(), r), e.derivative(k)).neg()
            }
            Coefficient::Gate { support, body } => {
                let d = body.derivative(k);
                if d.is_zero() {
                    d
                } else {
                    Coefficient::Gate {
                        support: support.clone(),
                        body: Box::new(d),
                    }
                }
            }
        }
    }

    /// Evaluation at a rational point, exact whenever no transcendental
    /// operation is reached.
    pub fn eval(&self, x: &[BigRational]) -> Value {
        match self {
            Coefficient::Poly(p) => Value::Exact(p.eval(x)),
            Coefficient::Sum(v) => {
                let mut exact = BigRational::zero();
                let mut approx: Option<f64> = None;
                for c in v {
                    match c.eval(x) {
                        Value::Exact(r) => exact += r,
                        Value::Approx(a) => *approx.get_or_insert(0.0) += a,
                    }
                }
                match approx {
                    None => Value::Exact(exact),
                    Some(a) => Value::Approx(a + rational_to_f64(&exact)),
                }
            }
            Coefficient::Product(v) => {
                let vals: Vec<Value> = v.iter().map(|c| c.eval(x)).collect();
                if vals.iter().any(Value::is_exact_zero) {
                    return Value::Exact(BigRational::zero());
                }
                if vals.iter().all(Value::is_exact) {
                    let mut acc = BigRational::one();
                    for val in vals {
                        if let Value::Exact(r) = val {
                            acc *= r;
                        }
                    }
                    Value::Exact(acc)
                } else {
                    Value::Approx(vals.iter().map(Value::to_f64).product())
                }
            }
            Coefficient::Exp(e) => Value::Approx(e.eval(x).to_f64().exp()),
            Coefficient::Ln(e) => Value::Approx(e.eval(x).to_f64().ln()),
            Coefficient::Sqrt(e) => Value::Approx(e.eval(x).to_f64().sqrt()),
            Coefficient::Recip(e) => match e.eval(x) {
                Value::Exact(r) if !r.is_zero() => Value::Exact(r.recip()),
                v => Value::Approx(1.0 / v.to_f64()),
            },
            Coefficient::Gate { support, body } => {
                if support.eval(x).is_positive() {
                    body.eval(x)
                } else {
                    Value::Exact(BigRational::zero())
                }
            }
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            Coefficient::Poly(p) => p.eval_f64(x),
            Coefficient::Sum(v) => v.iter().map(|c| c.eval_f64(x)).sum(),
            Coefficient::Product(v) => v.iter().map(|c| c.eval_f64(x)).product(),
            Coefficient::Exp(e) => e.eval_f64(x).exp(),
            Coefficient::Ln(e) => e.eval_f64(x).ln(),
            Coefficient::Sqrt(e) => e.eval_f64(x).sqrt(),
            Coefficient::Recip(e) => 1.0 / e.eval_f64(x),
            Coefficient::Gate { support, body } => {
                if support.eval_f64(x) > 0.0 {
                    body.eval_f64(x)
                } else {
                    0.0
                }
            }
        }
    }

    /// `exp(-(log s)^2)` for `s > 0`, zero elsewhere: a flat bump whose zero
    /// set is exactly `{s <= 0}`.
    pub fn log_bump(s: &Polynomial) -> Coefficient {
        Self::log_bump_of(s.clone(), Coefficient::Poly(s.clone()))
    }

    /// Same bump with the argument of the logarithm given as an arbitrary
    /// coefficient that is positive exactly where `support > 0`.
    pub fn log_bump_of(support: Polynomial, arg: Coefficient) -> Coefficient {
        let nvars = support.nvars();
        let l = Coefficient::Ln(Box::new(arg));
        let minus_l2 = Coefficient::product(
            Coefficient::product(l.clone(), l),
            Coefficient::Poly(Polynomial::constant(nvars, -BigRational::one())),
        );
        Coefficient::Gate {
            support,
            body: Box::new(Coefficient::Exp(Box::new(minus_l2))),
        }
    }
}

/// Floating-point form of a coefficient for repeated evaluation.
#[derive(Clone, Debug)]
pub enum CompiledCoefficient {
    Zero,
    Poly(PolynomialF64),
    General(Coefficient),
}

impl CompiledCoefficient {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            CompiledCoefficient::Zero => 0.0,
            CompiledCoefficient::Poly(p) => p.eval(x),
            CompiledCoefficient::General(c) => c.eval_f64(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CompiledCoefficient::Zero)
    }
}

impl Coefficient {
    pub fn compile(&self) -> CompiledCoefficient {
        match self {
            c if c.is_zero() => CompiledCoefficient::Zero,
            Coefficient::Poly(p) => CompiledCoefficient::Poly(p.to_f64()),
            other => CompiledCoefficient::General(other.clone()),
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[Coefficient], sep: &str| -> fmt::Result {
            write!(f, "(")?;
            for (i, c) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, "{sep}")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        };
        match self {
            Coefficient::Poly(p) => write!(f, "{p}"),
            Coefficient::Sum(v) => join(f, v, " + "),
            Coefficient::Product(v) => join(f, v, " * "),
            Coefficient::Exp(e) => write!(f, "exp({e})"),
            Coefficient::Ln(e) => write!(f, "ln({e})"),
            Coefficient::Sqrt(e) => write!(f, "sqrt({e})"),
            Coefficient::Recip(e) => write!(f, "1/({e})"),
            Coefficient::Gate { support, body } => write!(f, "[{support} > 0]{body}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bump_is_exactly_zero_off_support() {
        let x = Polynomial::var(1, 0);
        let b = Coefficient::log_bump(&x);
        assert_eq!(b.eval(&[q(-1, 3)]), Value::Exact(q(0, 1)));
        assert_eq!(b.eval(&[q(0, 1)]), Value::Exact(q(0, 1)));
        let v = b.eval(&[q(1, 2)]).to_f64();
        assert!((v - (-(0.5f64.ln()).powi(2)).exp()).abs() < 1e-15);
    }

    #[test]
    fn bump_derivative_matches_finite_difference() {
        let x = Polynomial::var(1, 0);
        let b = Coefficient::log_bump(&x);
        let d = b.derivative(0);
        for &t in &[0.3, 0.8, 1.7, 3.0] {
            let h = 1e-6;
            let fd = (b.eval_f64(&[t + h]) - b.eval_f64(&[t - h])) / (2.0 * h);
            assert!((d.eval_f64(&[t]) - fd).abs() < 1e-7, "t={t}");
        }
        assert!(d.eval(&[q(-2, 1)]).is_exact_zero());
    }

    #[test]
    fn polynomial_arithmetic_stays_polynomial() {
        let x = Coefficient::Poly(Polynomial::var(2, 0));
        let y = Coefficient::Poly(Polynomial::var(2, 1));
        let p = Coefficient::product(Coefficient::sum(x.clone(), y), x);
        assert!(p.is_polynomial());
        assert!(p.derivative(1).derivative(1).is_zero());
    }
}
