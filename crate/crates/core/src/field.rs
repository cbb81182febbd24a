//! Scalar fields on the computational domain.
//!
//! A [`ScalarField`] is anything that can be evaluated at a point: a
//! constant, a parsed expression, or an arbitrary closure (used heavily in
//! tests and examples). Evaluation reports non-finite values as errors that
//! name the offending point.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exprparse::{self, Expr};

/// Evaluation failure of a scalar field, naming the point.
#[derive(Debug, Error, Clone)]
#[error("field evaluation failed at {point:?}: {message}")]
pub struct FieldError {
    pub message: String,
    pub point: Vec<f64>,
}

/// A scalar function of the spatial point.
#[derive(Clone)]
pub enum ScalarField {
    Constant(f64),
    Expr(Expr),
    Func(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarField::Constant(c) => write!(f, "Constant({c})"),
            ScalarField::Expr(e) => write!(f, "Expr({e})"),
            ScalarField::Func(_) => write!(f, "Func(..)"),
        }
    }
}

impl ScalarField {
    /// Parse an expression string into a field.
    pub fn parse(text: &str) -> Result<Self, exprparse::ParseError> {
        Ok(ScalarField::Expr(exprparse::parse(text)?))
    }

    pub fn func(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ScalarField::Func(Arc::new(f))
    }

    /// Evaluate at `point`; non-finite results and expression domain errors
    /// become [`FieldError`]s.
    pub fn eval(&self, point: &[f64]) -> Result<f64, FieldError> {
        let v = match self {
            ScalarField::Constant(c) => *c,
            ScalarField::Expr(e) => e.eval(point).map_err(|err| FieldError {
                message: err.to_string(),
                point: point.to_vec(),
            })?,
            ScalarField::Func(f) => f(point),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(FieldError {
                message: format!("non-finite value {v}"),
                point: point.to_vec(),
            })
        }
    }

    /// Evaluate a 1D field at coordinate `x`.
    pub fn eval_1d(&self, x: f64) -> Result<f64, FieldError> {
        self.eval(&[x])
    }
}

impl From<f64> for ScalarField {
    fn from(c: f64) -> Self {
        ScalarField::Constant(c)
    }
}
