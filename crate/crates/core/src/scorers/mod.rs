//! Triplet scoring functions.
//!
//! All scorers follow one convention: **higher is more plausible**. Distance
//! models (TransE, RotatE) therefore report the negated distance.
//!
//! | Scorer | Score | Entity row | Relation row |
//! |--------|-------|------------|--------------|
//! | TransE | −‖h + r − t‖ (L1 or L2) | `d` | `d` |
//! | DistMult | Σ hᵢ rᵢ tᵢ | `d` | `d` |
//! | ComplEx | Re(Σ hᵢ rᵢ conj(tᵢ)) | `[re ‖ im]`, `2d` | `[re ‖ im]`, `2d` |
//! | SimplE | ½(⟨h_head, r, t_tail⟩ + ⟨t_head, r⁻¹, h_tail⟩) | `[head-role ‖ tail-role]`, `2d` | `[forward ‖ inverse]`, `2d` |
//! | RotatE | −Σ \|hᵢ e^{iθᵢ} − tᵢ\| | `[re ‖ im]`, `2d` | phases θ, `d` |
//!
//! RotatE relations are stored as phase angles, so every relation is a
//! unit-modulus rotation by construction.

mod checkpoint;
pub mod kernels;

use std::fmt;
use std::str::FromStr;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_MAGIC, LAYOUT_VERSION};

use crate::error::{Error, Result};
use crate::kgstore::{Side, Triplet};
use crate::numkit::{DenseMatrix, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L1,
    L2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScorerKind {
    TransE(Norm),
    DistMult,
    ComplEx,
    SimplE,
    RotatE,
}

impl ScorerKind {
    pub const ALL: [ScorerKind; 6] = [
        ScorerKind::TransE(Norm::L1),
        ScorerKind::TransE(Norm::L2),
        ScorerKind::DistMult,
        ScorerKind::ComplEx,
        ScorerKind::SimplE,
        ScorerKind::RotatE,
    ];

    pub fn entity_width(&self, dim: usize) -> usize {
        match self {
            ScorerKind::TransE(_) | ScorerKind::DistMult => dim,
            ScorerKind::ComplEx | ScorerKind::SimplE | ScorerKind::RotatE => 2 * dim,
        }
    }

    pub fn relation_width(&self, dim: usize) -> usize {
        match self {
            ScorerKind::TransE(_) | ScorerKind::DistMult | ScorerKind::RotatE => dim,
            ScorerKind::ComplEx | ScorerKind::SimplE => 2 * dim,
        }
    }

    pub fn is_distance(&self) -> bool {
        matches!(self, ScorerKind::TransE(_) | ScorerKind::RotatE)
    }
}

impl fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScorerKind::TransE(Norm::L1) => "transe-l1",
            ScorerKind::TransE(Norm::L2) => "transe-l2",
            ScorerKind::DistMult => "distmult",
            ScorerKind::ComplEx => "complex",
            ScorerKind::SimplE => "simple",
            ScorerKind::RotatE => "rotate",
        })
    }
}

impl FromStr for ScorerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "transe" | "transe-l2" => ScorerKind::TransE(Norm::L2),
            "transe-l1" => ScorerKind::TransE(Norm::L1),
            "distmult" => ScorerKind::DistMult,
            "complex" => ScorerKind::ComplEx,
            "simple" => ScorerKind::SimplE,
            "rotate" => ScorerKind::RotatE,
            other => return Err(Error::Config(format!("unknown scorer `{other}`"))),
        })
    }
}

/// Partials of one triplet score with respect to its three rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreGrads {
    pub head: Vec<f64>,
    pub relation: Vec<f64>,
    pub tail: Vec<f64>,
}

/// Entity and relation tables plus the scorer that reads them.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    kind: ScorerKind,
    dim: usize,
    pub entities: DenseMatrix,
    pub relations: DenseMatrix,
}

impl EmbeddingModel {
    pub fn new(
        kind: ScorerKind,
        dim: usize,
        entities: DenseMatrix,
        relations: DenseMatrix,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        if entities.cols() != kind.entity_width(dim) || relations.cols() != kind.relation_width(dim)
        {
            return Err(Error::Shape(format!(
                "{kind} with d={dim} needs rows of {}/{}, got {}/{}",
                kind.entity_width(dim),
                kind.relation_width(dim),
                entities.cols(),
                relations.cols()
            )));
        }
        Ok(Self {
            kind,
            dim,
            entities,
            relations,
        })
    }

    /// Uniform init in ±6/√d; RotatE phases uniform in [−π, π].
    pub fn init(
        kind: ScorerKind,
        n_entities: usize,
        n_relations: usize,
        dim: usize,
        rng: &mut RngStream,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("embedding dimension must be positive".into()));
        }
        let bound = 6.0 / (dim as f64).sqrt();
        let entities = DenseMatrix::uniform(n_entities, kind.entity_width(dim), bound, rng);
        let relations = match kind {
            ScorerKind::RotatE => DenseMatrix::uniform(
                n_relations,
                kind.relation_width(dim),
                std::f64::consts::PI,
                rng,
            ),
            _ => DenseMatrix::uniform(n_relations, kind.relation_width(dim), bound, rng),
        };
        Self::new(kind, dim, entities, relations)
    }

    pub fn zeros(kind: ScorerKind, n_entities: usize, n_relations: usize, dim: usize) -> Self {
        Self {
            kind,
            dim,
            entities: DenseMatrix::zeros(n_entities, kind.entity_width(dim)),
            relations: DenseMatrix::zeros(n_relations, kind.relation_width(dim)),
        }
    }

    pub fn kind(&self) -> ScorerKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_entities(&self) -> usize {
        self.entities.rows()
    }

    pub fn num_relations(&self) -> usize {
        self.relations.rows()
    }

    pub fn entity_width(&self) -> usize {
        self.entities.cols()
    }

    pub fn check(&self, t: &Triplet) -> Result<()> {
        let ne = self.num_entities();
        if t.head >= ne || t.tail >= ne || t.relation >= self.num_relations() {
            return Err(Error::Lookup(format!(
                "{t:?} outside model with {ne} entities and {} relations",
                self.num_relations()
            )));
        }
        Ok(())
    }

    pub fn score(&self, t: &Triplet) -> Result<f64> {
        self.check(t)?;
        Ok(self.score_unchecked(t))
    }

    pub(crate) fn score_unchecked(&self, t: &Triplet) -> f64 {
        kernels::score_rows(
            self.kind,
            self.dim,
            self.entities.row(t.head),
            self.relations.row(t.relation),
            self.entities.row(t.tail),
        )
    }

    /// Score with explicit head/tail rows (e.g. a soft entity row).
    pub fn score_rows(&self, head: &[f64], relation: usize, tail: &[f64]) -> f64 {
        kernels::score_rows(
            self.kind,
            self.dim,
            head,
            self.relations.row(relation),
            tail,
        )
    }

    pub fn grad_rows(&self, head: &[f64], relation: usize, tail: &[f64]) -> ScoreGrads {
        let (head, relation, tail) = kernels::grad_rows(
            self.kind,
            self.dim,
            head,
            self.relations.row(relation),
            tail,
        );
        ScoreGrads {
            head,
            relation,
            tail,
        }
    }

    /// Scores of `query` with every entity substituted on `side`; entry `i`
    /// runs the same kernel as `score` on the substituted triplet.
    pub fn score_all_candidates(&self, query: &Triplet, side: Side) -> Result<Vec<f64>> {
        let probe = query.with_entity(side, 0);
        self.check(&probe)?;
        let r = self.relations.row(query.relation);
        if self.kind == ScorerKind::RotatE {
            let rot = kernels::phase_table(r);
            let fixed = self.entities.row(query.entity(side.other()));
            let scores = (0..self.num_entities()).map(|e| {
                let cand = self.entities.row(e);
                match side {
                    Side::Tail => kernels::rotation_score(&rot, fixed, cand),
                    Side::Head => kernels::rotation_score(&rot, cand, fixed),
                }
            });
            return Ok(scores.collect());
        }
        let scores = match side {
            Side::Tail => {
                let h = self.entities.row(query.head);
                (0..self.num_entities())
                    .map(|e| kernels::score_rows(self.kind, self.dim, h, r, self.entities.row(e)))
                    .collect()
            }
            Side::Head => {
                let t = self.entities.row(query.tail);
                (0..self.num_entities())
                    .map(|e| kernels::score_rows(self.kind, self.dim, self.entities.row(e), r, t))
                    .collect()
            }
        };
        Ok(scores)
    }

    pub fn score_gradients(&self, t: &Triplet) -> Result<ScoreGrads> {
        self.check(t)?;
        Ok(self.grad_rows(
            self.entities.row(t.head),
            t.relation,
            self.entities.row(t.tail),
        ))
    }

    /// All parameters, entities first.
    pub fn parameters(&self) -> impl Iterator<Item = &f64> {
        self.entities.data().iter().chain(self.relations.data())
    }

    pub fn is_finite(&self) -> bool {
        self.entities.is_finite() && self.relations.is_finite()
    }
}
