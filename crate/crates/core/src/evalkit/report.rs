use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkMetrics {
    pub mr: f64,
    pub mrr: f64,
    pub hits_at_1: f64,
    pub hits_at_3: f64,
    pub hits_at_10: f64,
    pub max_rank: f64,
    pub n_ranks: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationMetrics {
    pub roc_auc: f64,
    pub pr_auc: f64,
    pub p_at_1: f64,
    pub p_at_3: f64,
    pub p_at_5: f64,
    pub n_pairs: usize,
    pub n_decisions: usize,
    pub excluded_pairs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaskMetrics {
    LinkPrediction(LinkMetrics),
    Classification(ClassificationMetrics),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub metrics: TaskMetrics,
    pub config_hash: Option<String>,
}

impl MetricsReport {
    pub fn new(metrics: TaskMetrics) -> Self {
        Self {
            metrics,
            config_hash: None,
        }
    }

    pub fn with_config_hash(mut self, hash: impl Into<String>) -> Self {
        self.config_hash = Some(hash.into());
        self
    }

    pub fn task_name(&self) -> &'static str {
        match self.metrics {
            TaskMetrics::LinkPrediction(_) => "link_prediction",
            TaskMetrics::Classification(_) => "classification",
        }
    }

    /// Named values in display order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        match self.metrics {
            TaskMetrics::LinkPrediction(m) => vec![
                ("MR", format!("{:.4}", m.mr)),
                ("MRR", format!("{:.4}", m.mrr)),
                ("HITS@1", format!("{:.4}", m.hits_at_1)),
                ("HITS@3", format!("{:.4}", m.hits_at_3)),
                ("HITS@10", format!("{:.4}", m.hits_at_10)),
                ("ranks", m.n_ranks.to_string()),
            ],
            TaskMetrics::Classification(m) => vec![
                ("ROC-AUC", format!("{:.4}", m.roc_auc)),
                ("PR-AUC", format!("{:.4}", m.pr_auc)),
                ("P@1", format!("{:.4}", m.p_at_1)),
                ("P@3", format!("{:.4}", m.p_at_3)),
                ("P@5", format!("{:.4}", m.p_at_5)),
                ("pairs", m.n_pairs.to_string()),
                ("excluded_pairs", m.excluded_pairs.to_string()),
            ],
        }
    }

    pub fn to_table(&self) -> String {
        let fields = self.fields();
        let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = format!("{}\n", self.task_name());
        for (k, v) in &fields {
            let _ = writeln!(out, "  {k:<width$}  {v}");
        }
        if let Some(h) = &self.config_hash {
            let _ = writeln!(out, "  config {h}");
        }
        out
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["task"];
        cols.extend(self.fields().iter().map(|(k, _)| *k));
        cols.push("config_hash");
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![self.task_name().to_string()];
        cols.extend(self.fields().into_iter().map(|(_, v)| v));
        cols.push(self.config_hash.clone().unwrap_or_default());
        cols.join(",")
    }

    /// Range checks every valid report satisfies.
    pub fn check(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Evaluation(format!("{name} = {v} outside [0, 1]")))
            }
        };
        match self.metrics {
            TaskMetrics::LinkPrediction(m) => {
                unit("HITS@1", m.hits_at_1)?;
                unit("HITS@3", m.hits_at_3)?;
                unit("HITS@10", m.hits_at_10)?;
                if !(m.hits_at_1 <= m.hits_at_3 && m.hits_at_3 <= m.hits_at_10) {
                    return Err(Error::Evaluation("HITS@k not monotone in k".into()));
                }
                if m.mrr > 1.0 || m.mrr < 1.0 / m.max_rank {
                    return Err(Error::Evaluation(format!("MRR = {} out of range", m.mrr)));
                }
                if m.mr < 1.0 {
                    return Err(Error::Evaluation(format!("MR = {} below 1", m.mr)));
                }
            }
            TaskMetrics::Classification(m) => {
                unit("ROC-AUC", m.roc_auc)?;
                unit("PR-AUC", m.pr_auc.min(1.0))?;
                unit("P@1", m.p_at_1)?;
                unit("P@3", m.p_at_3)?;
                unit("P@5", m.p_at_5)?;
            }
        }
        Ok(())
    }
}
