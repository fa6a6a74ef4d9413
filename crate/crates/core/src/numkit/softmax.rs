use crate::error::{Error, Result};
use crate::numkit::RngStream;

/// Uniform draws are clamped to `[ε, 1-ε]` before the double log.
pub const GUMBEL_UNIFORM_EPS: f64 = 1e-12;

/// `p_i = exp(o_i/τ) / Σ exp(o_a/τ)`, computed with max-subtraction.
pub fn softmax(logits: &[f64], temperature: f64) -> Result<Vec<f64>> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "softmax temperature must be positive, got {temperature}"
        )));
    }
    if logits.is_empty() {
        return Err(Error::Domain("softmax of an empty vector".into()));
    }
    if logits.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("softmax logits must be finite".into()));
    }
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = logits
        .iter()
        .map(|&o| ((o - max) / temperature).exp())
        .collect();
    let total: f64 = out.iter().sum();
    for p in &mut out {
        *p /= total;
    }
    // one more pass pulls the sum back to 1 after rounding
    let total: f64 = out.iter().sum();
    if total != 1.0 {
        for p in &mut out {
            *p /= total;
        }
    }
    Ok(out)
}

/// Gradient wrt the logits of `Σ upstream ⊙ softmax(logits, τ)`, given the
/// forward output `probs`.
pub fn softmax_backward(probs: &[f64], upstream: &[f64], temperature: f64) -> Vec<f64> {
    debug_assert_eq!(probs.len(), upstream.len());
    let dot: f64 = probs.iter().zip(upstream).map(|(p, u)| p * u).sum();
    probs
        .iter()
        .zip(upstream)
        .map(|(p, u)| p * (u - dot) / temperature)
        .collect()
}

/// Standard Gumbel quantile `-ln(-ln u)` with `u` clamped away from 0 and 1.
pub fn gumbel_from_uniform(u: f64) -> f64 {
    let u = u.clamp(GUMBEL_UNIFORM_EPS, 1.0 - GUMBEL_UNIFORM_EPS);
    -(-u.ln()).ln()
}

pub fn gumbel_noise(n: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..n).map(|_| gumbel_from_uniform(rng.uniform())).collect()
}
