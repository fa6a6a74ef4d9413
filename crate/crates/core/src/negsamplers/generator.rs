use crate::error::{Error, Result};
use crate::kgstore::{Side, Triplet};
use crate::numkit::{
    conv2d_backward, conv2d_forward, gumbel_noise, softmax_backward, AdagradState, DenseMatrix,
    FeatureMaps, FilterBank, RngStream, RowGrads,
};

use super::{argmax, gumbel_softmax_with_noise, NegativeSample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub dim: usize,
    pub n_filters: usize,
    pub kernel_h: usize,
    pub kernel_w: usize,
    pub tau: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            dim: 16,
            n_filters: 8,
            kernel_h: 2,
            kernel_w: 3,
            tau: 0.5,
        }
    }
}

/// Encoder half of the autoencoder.
///
/// The two known elements of a partial triplet are embedded with the
/// generator's own tables and stacked into a `2 × d` input in triplet order:
/// `[h; r]` when the tail is missing, `[r; t]` when the head is missing. A
/// valid stride-1 convolution yields `b × m × n` feature maps, which are
/// flattened and projected by `W` to `|E|` logits, then relaxed with
/// Gumbel-Softmax.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub entities: DenseMatrix,
    pub relations: DenseMatrix,
    pub filters: FilterBank,
    pub projection: DenseMatrix,
    tau: f64,
}

/// Everything the backward pass needs from one forward pass.
#[derive(Debug, Clone)]
pub struct GeneratorPass {
    pub query: Triplet,
    pub side: Side,
    pub input: DenseMatrix,
    pub features: Vec<f64>,
    pub logits: Vec<f64>,
    pub noise: Vec<f64>,
    pub y: Vec<f64>,
}

impl GeneratorPass {
    /// Hard replacement id (argmax of ŷ).
    pub fn choice(&self) -> usize {
        argmax(&self.y)
    }

    pub fn corrupted(&self) -> Triplet {
        self.query.with_entity(self.side, self.choice())
    }

    pub fn to_sample(&self) -> NegativeSample {
        NegativeSample {
            corrupted: self.corrupted(),
            soft_onehot: Some(self.y.clone()),
            corrupted_side: self.side,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorGrads {
    pub entities: RowGrads,
    pub relations: RowGrads,
    pub filters: Vec<f64>,
    pub projection: DenseMatrix,
}

impl GeneratorGrads {
    pub fn zeros_like(gen: &GeneratorParams) -> Self {
        Self {
            entities: RowGrads::new(),
            relations: RowGrads::new(),
            filters: vec![0.0; gen.filters.data().len()],
            projection: DenseMatrix::zeros(gen.projection.rows(), gen.projection.cols()),
        }
    }
}

fn add_row(grads: &mut RowGrads, row: usize, values: &[f64], scale: f64) {
    let slot = grads.entry(row).or_insert_with(|| vec![0.0; values.len()]);
    for (s, v) in slot.iter_mut().zip(values) {
        *s += scale * v;
    }
}

impl GeneratorParams {
    pub fn init(
        n_entities: usize,
        n_relations: usize,
        config: &GeneratorConfig,
        rng: &mut RngStream,
    ) -> Result<Self> {
        Self::validate(config)?;
        let d = config.dim;
        let bound = 6.0 / (d as f64).sqrt();
        let entities = DenseMatrix::uniform(n_entities, d, bound, rng);
        let relations = DenseMatrix::uniform(n_relations, d, bound, rng);
        let filters = FilterBank::uniform(config.n_filters, config.kernel_h, config.kernel_w, rng);
        let features = feature_len(config);
        let projection =
            DenseMatrix::uniform(features, n_entities, 1.0 / (features as f64).sqrt(), rng);
        Ok(Self {
            entities,
            relations,
            filters,
            projection,
            tau: config.tau,
        })
    }

    fn validate(config: &GeneratorConfig) -> Result<()> {
        if config.dim == 0 || config.n_filters == 0 {
            return Err(Error::Config(
                "generator needs d ≥ 1 and at least one filter".into(),
            ));
        }
        if config.kernel_h == 0
            || config.kernel_h > 2
            || config.kernel_w == 0
            || config.kernel_w > config.dim
        {
            return Err(Error::Config(format!(
                "kernel {}x{} does not fit the 2x{} generator input",
                config.kernel_h, config.kernel_w, config.dim
            )));
        }
        if !(config.tau > 0.0) {
            return Err(Error::Config(format!(
                "tau must be positive, got {}",
                config.tau
            )));
        }
        Ok(())
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn dim(&self) -> usize {
        self.entities.cols()
    }

    pub fn num_entities(&self) -> usize {
        self.projection.cols()
    }

    fn conv_output(&self) -> (usize, usize) {
        let (kh, kw) = self.filters.kernel_shape();
        (2 - kh + 1, self.dim() - kw + 1)
    }

    /// Stacked `2 × d` input for the known part of `query`.
    pub fn input_matrix(&self, query: &Triplet, side: Side) -> Result<DenseMatrix> {
        let ne = self.entities.rows();
        let given = query.entity(side.other());
        if given >= ne || query.relation >= self.relations.rows() {
            return Err(Error::Lookup(format!("{query:?} outside generator tables")));
        }
        let (e, r) = (self.entities.row(given), self.relations.row(query.relation));
        let data = match side {
            Side::Tail => [e, r].concat(),
            Side::Head => [r, e].concat(),
        };
        DenseMatrix::new(2, self.dim(), data)
    }

    /// Forward pass with an explicit noise vector (frozen-noise hook).
    pub fn forward_with_noise(
        &self,
        query: &Triplet,
        side: Side,
        noise: Vec<f64>,
    ) -> Result<GeneratorPass> {
        if noise.len() != self.num_entities() {
            return Err(Error::Config(format!(
                "noise of length {} for {} entities",
                noise.len(),
                self.num_entities()
            )));
        }
        let input = self.input_matrix(query, side)?;
        let maps = conv2d_forward(&input, &self.filters)?;
        let features = maps.data;
        let logits = self.projection.vec_mul(&features);
        let y = gumbel_softmax_with_noise(&logits, &noise, self.tau)?;
        Ok(GeneratorPass {
            query: *query,
            side,
            input,
            features,
            logits,
            noise,
            y,
        })
    }

    pub fn forward(
        &self,
        query: &Triplet,
        side: Side,
        rng: &mut RngStream,
    ) -> Result<GeneratorPass> {
        let noise = gumbel_noise(self.num_entities(), rng);
        self.forward_with_noise(query, side, noise)
    }

    /// Proposes a replacement for `side` of `query`; the other side is kept.
    pub fn sample(
        &self,
        query: &Triplet,
        side: Side,
        rng: &mut RngStream,
    ) -> Result<NegativeSample> {
        Ok(self.forward(query, side, rng)?.to_sample())
    }

    /// Accumulates `scale · ∂L/∂θ` into `acc`, given `grad_y = ∂L/∂ŷ`.
    pub fn backward_into(
        &self,
        pass: &GeneratorPass,
        grad_y: &[f64],
        scale: f64,
        acc: &mut GeneratorGrads,
    ) -> Result<()> {
        if grad_y.len() != pass.y.len() {
            return Err(Error::Shape(format!(
                "upstream gradient of length {} for {} outputs",
                grad_y.len(),
                pass.y.len()
            )));
        }
        let grad_logits = softmax_backward(&pass.y, grad_y, self.tau);
        for (k, &f) in pass.features.iter().enumerate() {
            if f == 0.0 {
                continue;
            }
            for (g, gl) in acc.projection.row_mut(k).iter_mut().zip(&grad_logits) {
                *g += scale * f * gl;
            }
        }
        let grad_features = self.projection.mul_vec(&grad_logits);
        let (m, n) = self.conv_output();
        let upstream = FeatureMaps::from_flat(self.filters.count(), m, n, grad_features)?;
        let (grad_input, grad_filters) = conv2d_backward(&pass.input, &self.filters, &upstream)?;
        for (a, g) in acc.filters.iter_mut().zip(grad_filters.data()) {
            *a += scale * g;
        }
        let given = pass.query.entity(pass.side.other());
        let (entity_row, relation_row) = match pass.side {
            Side::Tail => (grad_input.row(0), grad_input.row(1)),
            Side::Head => (grad_input.row(1), grad_input.row(0)),
        };
        add_row(&mut acc.entities, given, entity_row, scale);
        add_row(&mut acc.relations, pass.query.relation, relation_row, scale);
        Ok(())
    }

    /// Flat copy of every parameter, in a fixed order.
    pub fn flat_params(&self) -> Vec<f64> {
        [
            self.entities.data(),
            self.relations.data(),
            self.filters.data(),
            self.projection.data(),
        ]
        .concat()
    }
}

/// `b · m · n` for the flattened feature maps.
pub fn feature_len(config: &GeneratorConfig) -> usize {
    config.n_filters * (2 - config.kernel_h + 1) * (config.dim - config.kernel_w + 1)
}

/// One Adagrad accumulator per generator tensor.
#[derive(Debug, Clone)]
pub struct GeneratorOptimizer {
    entities: AdagradState,
    relations: AdagradState,
    filters: AdagradState,
    projection: AdagradState,
}

impl GeneratorOptimizer {
    pub fn new(gen: &GeneratorParams) -> Self {
        Self {
            entities: AdagradState::new(gen.entities.data().len()),
            relations: AdagradState::new(gen.relations.data().len()),
            filters: AdagradState::new(gen.filters.data().len()),
            projection: AdagradState::new(gen.projection.data().len()),
        }
    }

    pub fn apply(
        &mut self,
        gen: &mut GeneratorParams,
        grads: &GeneratorGrads,
        lr: f64,
    ) -> Result<()> {
        let d = gen.dim();
        self.entities.step_rows(
            gen.entities.data_mut(),
            d,
            &grads.entities,
            lr,
            "generator entities",
        )?;
        self.relations.step_rows(
            gen.relations.data_mut(),
            d,
            &grads.relations,
            lr,
            "generator relations",
        )?;
        self.filters.step(
            gen.filters.data_mut(),
            &grads.filters,
            lr,
            "generator filters",
        )?;
        self.projection.step(
            gen.projection.data_mut(),
            grads.projection.data(),
            lr,
            "generator projection",
        )
    }
}

impl Side {
    pub fn other(&self) -> Side {
        match self {
            Side::Head => Side::Tail,
            Side::Tail => Side::Head,
        }
    }
}
