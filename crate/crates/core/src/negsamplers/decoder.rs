use crate::error::{Error, Result};
use crate::numkit::{AdagradState, DenseMatrix, Linear, RngStream};

/// Decoder half of the autoencoder: `ŷ (|E|) → hidden → (|E| + |R|)`, two
/// affine layers, output split into an entity head and a relation head.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoderParams {
    pub hidden: Linear,
    pub output: Linear,
    n_entities: usize,
    n_relations: usize,
}

#[derive(Debug, Clone)]
pub struct DecoderPass {
    pub hidden: Vec<f64>,
    pub entity_recon: Vec<f64>,
    pub relation_recon: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderGrads {
    pub hidden_weight: DenseMatrix,
    pub hidden_bias: Vec<f64>,
    pub output_weight: DenseMatrix,
    pub output_bias: Vec<f64>,
}

impl DecoderGrads {
    pub fn zeros_like(dec: &DecoderParams) -> Self {
        Self {
            hidden_weight: DenseMatrix::zeros(dec.hidden.fan_in(), dec.hidden.fan_out()),
            hidden_bias: vec![0.0; dec.hidden.fan_out()],
            output_weight: DenseMatrix::zeros(dec.output.fan_in(), dec.output.fan_out()),
            output_bias: vec![0.0; dec.output.fan_out()],
        }
    }
}

fn axpy(acc: &mut [f64], x: &[f64], scale: f64) {
    for (a, v) in acc.iter_mut().zip(x) {
        *a += scale * v;
    }
}

impl DecoderParams {
    pub fn init(
        n_entities: usize,
        n_relations: usize,
        hidden: usize,
        rng: &mut RngStream,
    ) -> Result<Self> {
        if hidden == 0 {
            return Err(Error::Config(
                "decoder hidden width must be positive".into(),
            ));
        }
        Ok(Self {
            hidden: Linear::init(n_entities, hidden, rng),
            output: Linear::init(hidden, n_entities + n_relations, rng),
            n_entities,
            n_relations,
        })
    }

    pub fn zeros(n_entities: usize, n_relations: usize, hidden: usize) -> Self {
        Self {
            hidden: Linear::zeros(n_entities, hidden),
            output: Linear::zeros(hidden, n_entities + n_relations),
            n_entities,
            n_relations,
        }
    }

    pub fn num_entities(&self) -> usize {
        self.n_entities
    }

    pub fn num_relations(&self) -> usize {
        self.n_relations
    }

    pub fn forward(&self, y: &[f64]) -> Result<DecoderPass> {
        if y.len() != self.n_entities {
            return Err(Error::Config(format!(
                "decoder expects {} inputs, got {}",
                self.n_entities,
                y.len()
            )));
        }
        let hidden = self.hidden.forward(y)?;
        let mut out = self.output.forward(&hidden)?;
        let relation_recon = out.split_off(self.n_entities);
        Ok(DecoderPass {
            hidden,
            entity_recon: out,
            relation_recon,
        })
    }

    /// Accumulates `scale · ∂L/∂η` and returns `∂L/∂ŷ` (unscaled).
    pub fn backward_into(
        &self,
        y: &[f64],
        pass: &DecoderPass,
        grad_entity: &[f64],
        grad_relation: &[f64],
        scale: f64,
        acc: &mut DecoderGrads,
    ) -> Result<Vec<f64>> {
        let upstream = [grad_entity, grad_relation].concat();
        let out = self.output.backward(&pass.hidden, &upstream)?;
        axpy(acc.output_weight.data_mut(), out.weight.data(), scale);
        axpy(&mut acc.output_bias, &out.bias, scale);
        let hid = self.hidden.backward(y, &out.input)?;
        axpy(acc.hidden_weight.data_mut(), hid.weight.data(), scale);
        axpy(&mut acc.hidden_bias, &hid.bias, scale);
        Ok(hid.input)
    }

    pub fn flat_params(&self) -> Vec<f64> {
        [
            self.hidden.weight.data(),
            &self.hidden.bias,
            self.output.weight.data(),
            &self.output.bias,
        ]
        .concat()
    }
}

/// Squared reconstruction error against the concatenated one-hot target
/// `[onehot(entity) ‖ onehot(relation)]`. Returns the loss and its gradients
/// with respect to the two reconstruction heads.
pub fn reconstruction_loss(
    pass: &DecoderPass,
    entity: usize,
    relation: usize,
) -> (f64, Vec<f64>, Vec<f64>) {
    let mut loss = 0.0;
    let mut diff = |recon: &[f64], hot: usize| -> Vec<f64> {
        recon
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let d = v - if i == hot { 1.0 } else { 0.0 };
                loss += d * d;
                2.0 * d
            })
            .collect()
    };
    let ge = diff(&pass.entity_recon, entity);
    let gr = diff(&pass.relation_recon, relation);
    (loss, ge, gr)
}

#[derive(Debug, Clone)]
pub struct DecoderOptimizer {
    hidden_weight: AdagradState,
    hidden_bias: AdagradState,
    output_weight: AdagradState,
    output_bias: AdagradState,
}

impl DecoderOptimizer {
    pub fn new(dec: &DecoderParams) -> Self {
        Self {
            hidden_weight: AdagradState::new(dec.hidden.weight.data().len()),
            hidden_bias: AdagradState::new(dec.hidden.bias.len()),
            output_weight: AdagradState::new(dec.output.weight.data().len()),
            output_bias: AdagradState::new(dec.output.bias.len()),
        }
    }

    pub fn apply(&mut self, dec: &mut DecoderParams, grads: &DecoderGrads, lr: f64) -> Result<()> {
        self.hidden_weight.step(
            dec.hidden.weight.data_mut(),
            grads.hidden_weight.data(),
            lr,
            "decoder hidden weight",
        )?;
        self.hidden_bias.step(
            &mut dec.hidden.bias,
            &grads.hidden_bias,
            lr,
            "decoder hidden bias",
        )?;
        self.output_weight.step(
            dec.output.weight.data_mut(),
            grads.output_weight.data(),
            lr,
            "decoder output weight",
        )?;
        self.output_bias.step(
            &mut dec.output.bias,
            &grads.output_bias,
            lr,
            "decoder output bias",
        )
    }
}
