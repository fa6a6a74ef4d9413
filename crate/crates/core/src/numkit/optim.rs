use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub const ADAGRAD_EPSILON: f64 = 1e-8;

/// Sparse per-row gradients for an embedding table; ordered so that updates
/// are applied in a fixed sequence.
pub type RowGrads = BTreeMap<usize, Vec<f64>>;

/// Adagrad accumulator for one parameter tensor.
///
/// `acc += g²; p -= lr · g / (√acc + ε)`. Entries with zero gradient are left
/// untouched, so a sparse row update is identical to a dense one with zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct AdagradState {
    accumulator: Vec<f64>,
    epsilon: f64,
}

impl AdagradState {
    pub fn new(len: usize) -> Self {
        Self {
            accumulator: vec![0.0; len],
            epsilon: ADAGRAD_EPSILON,
        }
    }

    pub fn accumulator(&self) -> &[f64] {
        &self.accumulator
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64], lr: f64, name: &str) -> Result<()> {
        if params.len() != grads.len() || params.len() != self.accumulator.len() {
            return Err(Error::Shape(format!(
                "adagrad on {name}: params {}, grads {}, state {}",
                params.len(),
                grads.len(),
                self.accumulator.len()
            )));
        }
        if grads.iter().any(|g| !g.is_finite()) {
            return Err(Error::Training(format!("non-finite gradient for {name}")));
        }
        for ((p, &g), acc) in params.iter_mut().zip(grads).zip(&mut self.accumulator) {
            if g == 0.0 {
                continue;
            }
            *acc += g * g;
            *p -= lr * g / (acc.sqrt() + self.epsilon);
        }
        Ok(())
    }

    /// Row-sparse variant for embedding tables of width `width`.
    pub fn step_rows(
        &mut self,
        params: &mut [f64],
        width: usize,
        grads: &RowGrads,
        lr: f64,
        name: &str,
    ) -> Result<()> {
        if params.len() != self.accumulator.len() || width == 0 || params.len() % width != 0 {
            return Err(Error::Shape(format!(
                "adagrad on {name}: params {}, state {}, width {width}",
                params.len(),
                self.accumulator.len()
            )));
        }
        let rows = params.len() / width;
        for (&row, g) in grads {
            if row >= rows || g.len() != width {
                return Err(Error::Shape(format!(
                    "adagrad on {name}: row {row} (len {}) outside {rows}x{width}",
                    g.len()
                )));
            }
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::Training(format!(
                    "non-finite gradient for {name} row {row}"
                )));
            }
        }
        for (&row, g) in grads {
            let span = row * width..(row + 1) * width;
            let (p, acc) = (&mut params[span.clone()], &mut self.accumulator[span]);
            for ((p, &g), acc) in p.iter_mut().zip(g).zip(acc.iter_mut()) {
                if g == 0.0 {
                    continue;
                }
                *acc += g * g;
                *p -= lr * g / (acc.sqrt() + self.epsilon);
            }
        }
        Ok(())
    }
}

/// Clamp every entry into `[-c, c]`.
pub fn clip_params(params: &mut [f64], c: f64) -> Result<()> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!(
            "clip bound must be positive, got {c}"
        )));
    }
    for p in params {
        *p = p.clamp(-c, c);
    }
    Ok(())
}
