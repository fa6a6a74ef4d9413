use crate::error::{Error, Result};
use crate::kgstore::{Side, Triplet};
use crate::negsamplers::{
    reconstruction_loss, DecoderGrads, DecoderOptimizer, DecoderParams, GeneratorGrads,
    GeneratorOptimizer, GeneratorParams, GeneratorPass,
};
use crate::numkit::{clip_params, gumbel_noise, AdagradState, RngStream, RowGrads};
use crate::scorers::EmbeddingModel;

/// A positive triplet, the side the generator replaces, and the Gumbel noise
/// for that draw. Keeping the noise explicit makes every phase replayable.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchItem {
    pub triplet: Triplet,
    pub side: Side,
    pub noise: Vec<f64>,
}

impl BatchItem {
    /// Side chosen by a fair coin, fresh noise over `n_entities`.
    pub fn draw(triplet: Triplet, n_entities: usize, rng: &mut RngStream) -> Self {
        let side = if rng.coin() { Side::Head } else { Side::Tail };
        Self {
            triplet,
            side,
            noise: gumbel_noise(n_entities, rng),
        }
    }

    fn forward(&self, gen: &GeneratorParams) -> Result<GeneratorPass> {
        gen.forward_with_noise(&self.triplet, self.side, self.noise.clone())
    }
}

/// Sparse row gradients for the two embedding tables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelGrads {
    pub entities: RowGrads,
    pub relations: RowGrads,
}

pub(crate) fn add_row(rows: &mut RowGrads, index: usize, values: &[f64], scale: f64) {
    let acc = rows.entry(index).or_insert_with(|| vec![0.0; values.len()]);
    for (a, v) in acc.iter_mut().zip(values) {
        *a += scale * v;
    }
}

#[derive(Debug, Clone)]
pub struct ModelOptimizer {
    entities: AdagradState,
    relations: AdagradState,
}

impl ModelOptimizer {
    pub fn new(model: &EmbeddingModel) -> Self {
        Self {
            entities: AdagradState::new(model.entities.data().len()),
            relations: AdagradState::new(model.relations.data().len()),
        }
    }

    pub fn apply(&mut self, model: &mut EmbeddingModel, grads: &ModelGrads, lr: f64) -> Result<()> {
        let (ew, rw) = (model.entities.cols(), model.relations.cols());
        self.entities.step_rows(
            model.entities.data_mut(),
            ew,
            &grads.entities,
            lr,
            "critic entities",
        )?;
        self.relations.step_rows(
            model.relations.data_mut(),
            rw,
            &grads.relations,
            lr,
            "critic relations",
        )
    }
}

fn finite(loss: f64, phase: &str) -> Result<f64> {
    if loss.is_finite() {
        Ok(loss)
    } else {
        Err(Error::Training(format!("non-finite {phase} loss")))
    }
}

fn non_empty(batch: &[BatchItem]) -> Result<f64> {
    if batch.is_empty() {
        Err(Error::Training("empty batch".into()))
    } else {
        Ok(1.0 / batch.len() as f64)
    }
}

/// Critic score of the generated triplet, where the replaced entity is the
/// soft lookup `ŷᵀE`. Returns the score, the kept entity and the soft row.
fn soft_negative(model: &EmbeddingModel, pass: &GeneratorPass) -> (f64, usize, Vec<f64>) {
    let soft = model.entities.vec_mul(&pass.y);
    let kept = pass.query.entity(pass.side.other());
    let r = pass.query.relation;
    let score = match pass.side {
        Side::Tail => model.score_rows(model.entities.row(kept), r, &soft),
        Side::Head => model.score_rows(&soft, r, model.entities.row(kept)),
    };
    (score, kept, soft)
}

/// Gradients of the soft-negative score: (kept row, relation row, soft row).
fn soft_negative_grads(
    model: &EmbeddingModel,
    pass: &GeneratorPass,
    kept: usize,
    soft: &[f64],
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let r = pass.query.relation;
    match pass.side {
        Side::Tail => {
            let g = model.grad_rows(model.entities.row(kept), r, soft);
            (g.head, g.relation, g.tail)
        }
        Side::Head => {
            let g = model.grad_rows(soft, r, model.entities.row(kept));
            (g.tail, g.relation, g.head)
        }
    }
}

/// Mean `‖x − A(G(z))‖²` at the batch's frozen noise.
pub fn autoencoder_loss(
    gen: &GeneratorParams,
    dec: &DecoderParams,
    batch: &[BatchItem],
) -> Result<f64> {
    let scale = non_empty(batch)?;
    let mut total = 0.0;
    for item in batch {
        let pass = item.forward(gen)?;
        let out = dec.forward(&pass.y)?;
        let given = item.triplet.entity(item.side.other());
        total += reconstruction_loss(&out, given, item.triplet.relation).0;
    }
    finite(total * scale, "autoencoder")
}

/// Mean reconstruction loss and its gradients at the batch's frozen noise.
pub fn autoencoder_gradients(
    gen: &GeneratorParams,
    dec: &DecoderParams,
    batch: &[BatchItem],
) -> Result<(f64, GeneratorGrads, DecoderGrads)> {
    let scale = non_empty(batch)?;
    let mut gen_grads = GeneratorGrads::zeros_like(gen);
    let mut dec_grads = DecoderGrads::zeros_like(dec);
    let mut total = 0.0;
    for item in batch {
        let pass = item.forward(gen)?;
        let out = dec.forward(&pass.y)?;
        let given = item.triplet.entity(item.side.other());
        let (loss, ge, gr) = reconstruction_loss(&out, given, item.triplet.relation);
        total += loss;
        let grad_y = dec.backward_into(&pass.y, &out, &ge, &gr, scale, &mut dec_grads)?;
        gen.backward_into(&pass, &grad_y, scale, &mut gen_grads)?;
    }
    Ok((finite(total * scale, "autoencoder")?, gen_grads, dec_grads))
}

/// One Adagrad step on generator and decoder against the mean reconstruction
/// loss. Returns the loss before the step.
pub fn update_autoencoder(
    gen: &mut GeneratorParams,
    dec: &mut DecoderParams,
    batch: &[BatchItem],
    gen_opt: &mut GeneratorOptimizer,
    dec_opt: &mut DecoderOptimizer,
    lr: f64,
) -> Result<f64> {
    let (loss, gen_grads, dec_grads) = autoencoder_gradients(gen, dec, batch)?;
    dec_opt.apply(dec, &dec_grads, lr)?;
    gen_opt.apply(gen, &gen_grads, lr)?;
    Ok(loss)
}

/// Mean `−(D(x) − D(G(z)))` at the batch's frozen noise.
pub fn discriminator_loss(
    model: &EmbeddingModel,
    gen: &GeneratorParams,
    batch: &[BatchItem],
) -> Result<f64> {
    let scale = non_empty(batch)?;
    let mut total = 0.0;
    for item in batch {
        let pass = item.forward(gen)?;
        total += soft_negative(model, &pass).0 - model.score(&item.triplet)?;
    }
    finite(total * scale, "critic")
}

/// Mean critic loss and its sparse gradients at the batch's frozen noise.
pub fn discriminator_gradients(
    model: &EmbeddingModel,
    gen: &GeneratorParams,
    batch: &[BatchItem],
) -> Result<(f64, ModelGrads)> {
    let scale = non_empty(batch)?;
    let mut grads = ModelGrads::default();
    let mut total = 0.0;
    for item in batch {
        let t = &item.triplet;
        let positive = model.score(t)?;
        let pg = model.score_gradients(t)?;
        add_row(&mut grads.entities, t.head, &pg.head, -scale);
        add_row(&mut grads.entities, t.tail, &pg.tail, -scale);
        add_row(&mut grads.relations, t.relation, &pg.relation, -scale);

        let pass = item.forward(gen)?;
        let (negative, kept, soft) = soft_negative(model, &pass);
        let (g_kept, g_rel, g_soft) = soft_negative_grads(model, &pass, kept, &soft);
        add_row(&mut grads.entities, kept, &g_kept, scale);
        add_row(&mut grads.relations, t.relation, &g_rel, scale);
        for (e, &w) in pass.y.iter().enumerate() {
            if w != 0.0 {
                add_row(&mut grads.entities, e, &g_soft, scale * w);
            }
        }
        total += negative - positive;
    }
    Ok((finite(total * scale, "critic")?, grads))
}

/// One Adagrad step on the critic's embeddings, then clipping to `[−c, c]`
/// when `clip` is set. Returns the loss before the step.
pub fn update_discriminator(
    model: &mut EmbeddingModel,
    gen: &GeneratorParams,
    batch: &[BatchItem],
    opt: &mut ModelOptimizer,
    lr: f64,
    clip: Option<f64>,
) -> Result<f64> {
    let (loss, grads) = discriminator_gradients(model, gen, batch)?;
    opt.apply(model, &grads, lr)?;
    if let Some(c) = clip {
        clip_params(model.entities.data_mut(), c)?;
        clip_params(model.relations.data_mut(), c)?;
    }
    Ok(loss)
}

/// Mean `−D(G(z))` at the batch's frozen noise.
pub fn generator_loss(
    model: &EmbeddingModel,
    gen: &GeneratorParams,
    batch: &[BatchItem],
) -> Result<f64> {
    let scale = non_empty(batch)?;
    let mut total = 0.0;
    for item in batch {
        total -= soft_negative(model, &item.forward(gen)?).0;
    }
    finite(total * scale, "generator")
}

/// Mean generator loss and its gradients; the critic is read, never written.
pub fn generator_gradients(
    model: &EmbeddingModel,
    gen: &GeneratorParams,
    batch: &[BatchItem],
) -> Result<(f64, GeneratorGrads)> {
    let scale = non_empty(batch)?;
    let mut grads = GeneratorGrads::zeros_like(gen);
    let mut total = 0.0;
    for item in batch {
        let pass = item.forward(gen)?;
        let (negative, kept, soft) = soft_negative(model, &pass);
        let (_, _, g_soft) = soft_negative_grads(model, &pass, kept, &soft);
        // ∂(−score)/∂ŷ_e = −⟨E_e, ∂score/∂soft⟩
        let grad_y: Vec<f64> = model.entities.mul_vec(&g_soft).iter().map(|g| -g).collect();
        gen.backward_into(&pass, &grad_y, scale, &mut grads)?;
        total -= negative;
    }
    Ok((finite(total * scale, "generator")?, grads))
}

/// One Adagrad step on the generator only. Returns the loss before the step.
pub fn update_generator(
    model: &EmbeddingModel,
    gen: &mut GeneratorParams,
    batch: &[BatchItem],
    opt: &mut GeneratorOptimizer,
    lr: f64,
) -> Result<f64> {
    let (loss, grads) = generator_gradients(model, gen, batch)?;
    opt.apply(gen, &grads, lr)?;
    Ok(loss)
}
