use crate::error::{Error, Result};
use crate::numkit::{DenseMatrix, RngStream};

/// `count` filters of `kh × kw`, stored filter-major then row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBank {
    count: usize,
    kh: usize,
    kw: usize,
    data: Vec<f64>,
}

impl FilterBank {
    pub fn new(count: usize, kh: usize, kw: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != count * kh * kw {
            return Err(Error::Shape(format!(
                "filter bank {count}x{kh}x{kw} needs {} values, got {}",
                count * kh * kw,
                data.len()
            )));
        }
        Ok(Self {
            count,
            kh,
            kw,
            data,
        })
    }

    pub fn zeros(count: usize, kh: usize, kw: usize) -> Self {
        Self {
            count,
            kh,
            kw,
            data: vec![0.0; count * kh * kw],
        }
    }

    pub fn uniform(count: usize, kh: usize, kw: usize, rng: &mut RngStream) -> Self {
        let bound = 1.0 / ((kh * kw) as f64).sqrt();
        let data = (0..count * kh * kw)
            .map(|_| rng.uniform_in(-bound, bound))
            .collect();
        Self {
            count,
            kh,
            kw,
            data,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn kernel_shape(&self) -> (usize, usize) {
        (self.kh, self.kw)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn at(&self, f: usize, u: usize, v: usize) -> f64 {
        self.data[(f * self.kh + u) * self.kw + v]
    }
}

/// Output of a convolution: `count` maps of `rows × cols`, flattened in
/// filter-major, row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMaps {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl FeatureMaps {
    pub fn from_flat(count: usize, rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != count * rows * cols {
            return Err(Error::Shape(format!(
                "feature maps {count}x{rows}x{cols} need {} values, got {}",
                count * rows * cols,
                data.len()
            )));
        }
        Ok(Self {
            count,
            rows,
            cols,
            data,
        })
    }

    pub fn at(&self, f: usize, i: usize, j: usize) -> f64 {
        self.data[(f * self.rows + i) * self.cols + j]
    }
}

fn output_shape(input: &DenseMatrix, filters: &FilterBank) -> Result<(usize, usize)> {
    if filters.kh == 0 || filters.kw == 0 || filters.kh > input.rows() || filters.kw > input.cols()
    {
        return Err(Error::Shape(format!(
            "kernel {}x{} does not fit input {}x{}",
            filters.kh,
            filters.kw,
            input.rows(),
            input.cols()
        )));
    }
    Ok((input.rows() - filters.kh + 1, input.cols() - filters.kw + 1))
}

/// Valid-padding, stride-1 cross-correlation:
/// `T[f, i, j] = Σ_{u,v} input[i+u, j+v] · filter_f[u, v]`.
pub fn conv2d_forward(input: &DenseMatrix, filters: &FilterBank) -> Result<FeatureMaps> {
    let (m, n) = output_shape(input, filters)?;
    let mut data = Vec::with_capacity(filters.count * m * n);
    for f in 0..filters.count {
        for i in 0..m {
            for j in 0..n {
                let mut acc = 0.0;
                for u in 0..filters.kh {
                    for v in 0..filters.kw {
                        acc += input.get(i + u, j + v) * filters.at(f, u, v);
                    }
                }
                data.push(acc);
            }
        }
    }
    Ok(FeatureMaps {
        count: filters.count,
        rows: m,
        cols: n,
        data,
    })
}

/// Gradients of `Σ upstream ⊙ conv2d_forward(input, filters)`.
pub fn conv2d_backward(
    input: &DenseMatrix,
    filters: &FilterBank,
    upstream: &FeatureMaps,
) -> Result<(DenseMatrix, FilterBank)> {
    let (m, n) = output_shape(input, filters)?;
    if upstream.count != filters.count || upstream.rows != m || upstream.cols != n {
        return Err(Error::Shape(format!(
            "upstream {}x{}x{} does not match conv output {}x{m}x{n}",
            upstream.count, upstream.rows, upstream.cols, filters.count
        )));
    }
    let mut grad_input = DenseMatrix::zeros(input.rows(), input.cols());
    let mut grad_filters = FilterBank::zeros(filters.count, filters.kh, filters.kw);
    for f in 0..filters.count {
        for i in 0..m {
            for j in 0..n {
                let g = upstream.at(f, i, j);
                if g == 0.0 {
                    continue;
                }
                for u in 0..filters.kh {
                    for v in 0..filters.kw {
                        let gi = grad_input.get(i + u, j + v) + g * filters.at(f, u, v);
                        grad_input.set(i + u, j + v, gi);
                        grad_filters.data[(f * filters.kh + u) * filters.kw + v] +=
                            g * input.get(i + u, j + v);
                    }
                }
            }
        }
    }
    Ok((grad_input, grad_filters))
}
