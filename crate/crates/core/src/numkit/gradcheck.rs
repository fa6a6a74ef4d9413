use crate::error::{Error, Result};

pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Compares `analytic` against central differences of `f` at `x`.
///
/// Returns `max_i |fd_i − analytic_i| / max(1, |fd_i|, |analytic_i|)`.
pub fn finite_difference_check<F>(mut f: F, x: &[f64], analytic: &[f64], h: f64) -> Result<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    if x.len() != analytic.len() {
        return Err(Error::Oracle(format!(
            "{} parameters but {} analytic partials",
            x.len(),
            analytic.len()
        )));
    }
    if !(h > 0.0) {
        return Err(Error::Oracle(format!("step must be positive, got {h}")));
    }
    let mut probe = x.to_vec();
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = f(&probe);
        probe[i] = x[i] - h;
        let down = f(&probe);
        probe[i] = x[i];
        if !up.is_finite() || !down.is_finite() {
            return Err(Error::Oracle(format!(
                "objective not finite around coordinate {i}"
            )));
        }
        let fd = (up - down) / (2.0 * h);
        let scale = 1f64.max(fd.abs()).max(analytic[i].abs());
        worst = worst.max((fd - analytic[i]).abs() / scale);
    }
    Ok(worst)
}
