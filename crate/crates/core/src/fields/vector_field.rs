use num_rational::BigRational;

use super::{Coefficient, CompiledCoefficient, FieldError, Polynomial, Value};

/// `Σ_k a_k(x) ∂_{x_k}`, stored as its coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    components: Vec<Coefficient>,
}

impl VectorField {
    pub fn new(components: Vec<Coefficient>) -> Self {
        Self { components }
    }

    pub fn from_polys(components: Vec<Polynomial>) -> Self {
        Self::new(components.into_iter().map(Coefficient::Poly).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new((0..dim).map(|_| Coefficient::zero(dim)).collect())
    }

    /// The coordinate field `∂_{x_k}`.
    pub fn coordinate(dim: usize, k: usize) -> Self {
        let mut v = Self::zero(dim);
        v.components[k] = Coefficient::Poly(Polynomial::one(dim));
        v
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Coefficient] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &Coefficient {
        &self.components[k]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Coefficient::is_zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(Coefficient::is_polynomial)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.components.iter().map(|a| a.scale(c)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.components.iter().map(Coefficient::neg).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| Coefficient::sum(a.clone(), b.clone()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &[BigRational]) -> Vec<Value> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval_f64(x)).collect()
    }

    pub fn compile(&self) -> Vec<CompiledCoefficient> {
        self.components.iter().map(Coefficient::compile).collect()
    }

    /// Applies the field to a scalar coefficient: `Σ_l a_l ∂_l f`.
    pub fn apply(&self, f: &Coefficient) -> Coefficient {
        let dim = self.dim();
        self.components.iter().enumerate().fold(Coefficient::zero(dim), |acc, (l, a)| {
            if a.is_zero() {
                return acc;
            }
            let d = f.derivative(l);
            if d.is_zero() {
                acc
            } else {
                Coefficient::sum(acc, Coefficient::product(a.clone(), d))
            }
        })
    }
}

/// Lie bracket `[v, w]_k = Σ_l (v_l ∂_l w_k − w_l ∂_l v_k)`.
pub fn bracket(v: &VectorField, w: &VectorField) -> Result<VectorField, FieldError> {
    if v.dim() != w.dim() {
        return Err(FieldError::DimensionMismatch {
            expected: v.dim(),
            found: w.dim(),
        });
    }
    let comps = (0..v.dim())
        .map(|k| Coefficient::sum(v.apply(w.component(k)), w.apply(v.component(k)).neg()))
        .collect();
    Ok(VectorField::new(comps))
}

/// `m` vector fields on `R^n` together with the declared bracket length `Q`
/// at which they are expected to span.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSystem {
    dim: usize,
    fields: Vec<VectorField>,
    hormander_bound: usize,
}

impl FieldSystem {
    pub fn new(dim: usize, fields: Vec<VectorField>, hormander_bound: usize) -> Result<Self, FieldError> {
        if fields.is_empty() {
            return Err(FieldError::Invalid("at least one field is required".into()));
        }
        if hormander_bound == 0 {
            return Err(FieldError::Invalid("Q must be at least 1".into()));
        }
        for f in &fields {
            if f.dim() != dim {
                return Err(FieldError::DimensionMismatch {
                    expected: dim,
                    found: f.dim(),
                });
            }
        }
        Ok(Self {
            dim,
            fields,
            hormander_bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn hormander_bound(&self) -> usize {
        self.hormander_bound
    }

    pub fn is_polynomial(&self) -> bool {
        self.fields.iter().all(VectorField::is_polynomial)
    }

    /// Same system with field `j` multiplied by `c`.
    pub fn with_scaled_field(&self, j: usize, c: &BigRational) -> Self {
        let mut out = self.clone();
        out.fields[j] = out.fields[j].scale(c);
        out
    }

    /// Same system with every field multiplied by `c`.
    pub fn scaled(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for f in &mut out.fields {
            *f = f.scale(c);
        }
        out
    }
}
