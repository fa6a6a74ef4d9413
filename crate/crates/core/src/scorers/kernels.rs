//! Row-level score kernels. Every scorer is written against raw storage rows
//! so that soft (convex-combination) entity rows go through the same code as
//! table lookups.

use super::{Norm, ScorerKind};

/// Score of one triplet given its three storage rows. `dim` is the logical
/// embedding dimension `d`.
pub fn score_rows(kind: ScorerKind, dim: usize, h: &[f64], r: &[f64], t: &[f64]) -> f64 {
    match kind {
        ScorerKind::TransE(norm) => {
            let diff = h.iter().zip(r).zip(t).map(|((h, r), t)| h + r - t);
            match norm {
                Norm::L1 => -diff.map(f64::abs).sum::<f64>(),
                Norm::L2 => -diff.map(|v| v * v).sum::<f64>().sqrt(),
            }
        }
        ScorerKind::DistMult => h.iter().zip(r).zip(t).map(|((h, r), t)| (h * t) * r).sum(),
        ScorerKind::ComplEx => {
            let (hre, him) = h.split_at(dim);
            let (rre, rim) = r.split_at(dim);
            let (tre, tim) = t.split_at(dim);
            let mut acc = 0.0;
            for i in 0..dim {
                let (a, b, c, d, e, f) = (hre[i], him[i], rre[i], rim[i], tre[i], tim[i]);
                // Re((a+ib)(c+id)(e-if))
                acc += (a * c - b * d) * e + (a * d + b * c) * f;
            }
            acc
        }
        ScorerKind::SimplE => {
            let (h_head, h_tail) = h.split_at(dim);
            let (r_fwd, r_inv) = r.split_at(dim);
            let (t_head, t_tail) = t.split_at(dim);
            0.5 * (cp(h_head, r_fwd, t_tail) + cp(t_head, r_inv, h_tail))
        }
        ScorerKind::RotatE => rotation_score(&phase_table(&r[..dim]), h, t),
    }
}

/// `(sin, cos)` of each relation phase.
pub fn phase_table(phases: &[f64]) -> Vec<(f64, f64)> {
    phases.iter().map(|p| p.sin_cos()).collect()
}

/// RotatE score with the relation's phases already turned into `(sin, cos)`.
pub fn rotation_score(rot: &[(f64, f64)], h: &[f64], t: &[f64]) -> f64 {
    let dim = rot.len();
    let (hre, him) = h.split_at(dim);
    let (tre, tim) = t.split_at(dim);
    let mut acc = 0.0;
    for (i, &(s, c)) in rot.iter().enumerate() {
        let ure = hre[i] * c - him[i] * s - tre[i];
        let uim = hre[i] * s + him[i] * c - tim[i];
        acc += (ure * ure + uim * uim).sqrt();
    }
    -acc
}

/// Trilinear product `Σ a_i b_i c_i`.
pub fn cp(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    a.iter().zip(b).zip(c).map(|((a, b), c)| a * b * c).sum()
}

/// Partial derivatives of [`score_rows`] with respect to each row. When the
/// head and tail are the same entity the caller must add the two partials.
pub fn grad_rows(
    kind: ScorerKind,
    dim: usize,
    h: &[f64],
    r: &[f64],
    t: &[f64],
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    match kind {
        ScorerKind::TransE(norm) => {
            let diff: Vec<f64> = h
                .iter()
                .zip(r)
                .zip(t)
                .map(|((h, r), t)| h + r - t)
                .collect();
            let gh: Vec<f64> = match norm {
                Norm::L1 => diff.iter().map(|&v| -sign(v)).collect(),
                Norm::L2 => {
                    let len = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if len == 0.0 {
                        vec![0.0; diff.len()]
                    } else {
                        diff.iter().map(|v| -v / len).collect()
                    }
                }
            };
            let gt = gh.iter().map(|v| -v).collect();
            (gh.clone(), gh, gt)
        }
        ScorerKind::DistMult => (
            r.iter().zip(t).map(|(r, t)| r * t).collect(),
            h.iter().zip(t).map(|(h, t)| h * t).collect(),
            h.iter().zip(r).map(|(h, r)| h * r).collect(),
        ),
        ScorerKind::ComplEx => {
            let (mut gh, mut gr, mut gt) =
                (vec![0.0; 2 * dim], vec![0.0; 2 * dim], vec![0.0; 2 * dim]);
            for i in 0..dim {
                let (a, b) = (h[i], h[dim + i]);
                let (c, d) = (r[i], r[dim + i]);
                let (e, f) = (t[i], t[dim + i]);
                gh[i] = c * e + d * f;
                gh[dim + i] = c * f - d * e;
                gr[i] = a * e + b * f;
                gr[dim + i] = a * f - b * e;
                gt[i] = a * c - b * d;
                gt[dim + i] = a * d + b * c;
            }
            (gh, gr, gt)
        }
        ScorerKind::SimplE => {
            let (h_head, h_tail) = h.split_at(dim);
            let (r_fwd, r_inv) = r.split_at(dim);
            let (t_head, t_tail) = t.split_at(dim);
            let half = |a: &[f64], b: &[f64]| -> Vec<f64> {
                a.iter().zip(b).map(|(a, b)| 0.5 * a * b).collect()
            };
            let gh = [half(r_fwd, t_tail), half(r_inv, t_head)].concat();
            let gr = [half(h_head, t_tail), half(t_head, h_tail)].concat();
            let gt = [half(r_inv, h_tail), half(h_head, r_fwd)].concat();
            (gh, gr, gt)
        }
        ScorerKind::RotatE => {
            let (mut gh, mut gr, mut gt) = (vec![0.0; 2 * dim], vec![0.0; dim], vec![0.0; 2 * dim]);
            for i in 0..dim {
                let (a, b) = (h[i], h[dim + i]);
                let (e, f) = (t[i], t[dim + i]);
                let (s, c) = r[i].sin_cos();
                let ure = a * c - b * s - e;
                let uim = a * s + b * c - f;
                let len = (ure * ure + uim * uim).sqrt();
                if len == 0.0 {
                    continue;
                }
                // d(-|u|)/du
                let (gre, gim) = (-ure / len, -uim / len);
                gh[i] = gre * c + gim * s;
                gh[dim + i] = -gre * s + gim * c;
                gt[i] = -gre;
                gt[dim + i] = -gim;
                gr[i] = gre * (-a * s - b * c) + gim * (a * c - b * s);
            }
            (gh, gr, gt)
        }
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Complex rotation `h ∘ e^{iθ}` of a `[re | im]` row.
pub fn rotate(h: &[f64], phases: &[f64]) -> Vec<f64> {
    let dim = phases.len();
    let mut out = vec![0.0; 2 * dim];
    for i in 0..dim {
        let (s, c) = phases[i].sin_cos();
        out[i] = h[i] * c - h[dim + i] * s;
        out[dim + i] = h[i] * s + h[dim + i] * c;
    }
    out
}
