//! Pairwise topic separation: KL divergence and cosine similarity over the
//! topic-word distributions of a trained model.
//!
//! KL divergence is asymmetric (the matrix records both directions) and
//! reported in nats. Cosine similarity is symmetric with a unit diagonal.
//! Both operate on the smoothed `phi` rows, so a full matrix is just the
//! scalar operation applied to every ordered pair.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::lda::LdaModel;
use crate::{Error, Result};

/// Smoothing constant folded into every distribution before KL: zeros in
/// either vector would otherwise produce infinities.
pub const KL_EPSILON: f64 = 1e-12;

/// Kullback–Leibler divergence `KL(p ‖ q)` in nats. Both vectors are
/// smoothed first — add `epsilon` to every entry and renormalize — so the
/// result is always finite, and identical vectors give exactly 0.
pub fn kl_divergence(p: &[f64], q: &[f64], epsilon: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::validation(format!(
            "distributions have different lengths ({} vs {})",
            p.len(),
            q.len()
        )));
    }
    if p.is_empty() {
        return Err(Error::validation("cannot compare empty distributions"));
    }
    let p = smooth(p, epsilon);
    let q = smooth(q, epsilon);
    Ok(p.iter()
        .zip(&q)
        .map(|(&pw, &qw)| {
            let ratio = pw / qw;
            if ratio == 1.0 {
                0.0
            } else {
                pw * ratio.ln()
            }
        })
        .sum())
}

fn smooth(v: &[f64], epsilon: f64) -> Vec<f64> {
    let total: f64 = v.iter().map(|x| x + epsilon).sum();
    v.iter().map(|x| (x + epsilon) / total).collect()
}

/// Cosine similarity `p·q / (‖p‖‖q‖)`. For non-negative inputs (probability
/// vectors) the result lies in `[0, 1]`.
pub fn cosine_similarity(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::validation(format!(
            "vectors have different lengths ({} vs {})",
            p.len(),
            q.len()
        )));
    }
    let dot: f64 = p.iter().zip(q).map(|(x, y)| x * y).sum();
    let norm_p: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_q: f64 = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_p == 0.0 || norm_q == 0.0 {
        return Err(Error::validation(
            "cosine similarity is undefined for zero vectors",
        ));
    }
    Ok(dot / (norm_p * norm_q))
}

/// Which pairwise measure a [`DistanceMatrix`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    /// KL divergence in nats; asymmetric, zero diagonal.
    Kl,
    /// Cosine similarity; symmetric, unit diagonal.
    Cosine,
}

impl DistanceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DistanceKind::Kl => "kl",
            DistanceKind::Cosine => "cosine",
        }
    }
}

/// K x K matrix where entry `(i, j)` relates topic `i` to topic `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    pub kind: DistanceKind,
    pub values: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn num_topics(&self) -> usize {
        self.values.len()
    }

    /// Check the measure's structural invariants: KL — zero diagonal,
    /// non-negative entries; cosine — unit diagonal and symmetry within 1e-9.
    pub fn validate(&self) -> Result<()> {
        let k = self.values.len();
        for (i, row) in self.values.iter().enumerate() {
            if row.len() != k {
                return Err(Error::validation(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
        }
        match self.kind {
            DistanceKind::Kl => {
                for (i, row) in self.values.iter().enumerate() {
                    if row[i] != 0.0 {
                        return Err(Error::validation(format!(
                            "KL diagonal entry ({i}, {i}) is {}, expected 0",
                            row[i]
                        )));
                    }
                    if let Some(j) = row.iter().position(|&v| v.is_nan() || v < 0.0) {
                        return Err(Error::validation(format!(
                            "KL entry ({i}, {j}) is {}, expected >= 0",
                            row[j]
                        )));
                    }
                }
            }
            DistanceKind::Cosine => {
                for i in 0..k {
                    if (self.values[i][i] - 1.0).abs() > 1e-9 {
                        return Err(Error::validation(format!(
                            "cosine diagonal entry ({i}, {i}) is {}, expected 1",
                            self.values[i][i]
                        )));
                    }
                    for j in 0..i {
                        if (self.values[i][j] - self.values[j][i]).abs() > 1e-9 {
                            return Err(Error::validation(format!(
                                "cosine entries ({i}, {j}) and ({j}, {i}) differ by more than 1e-9"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Render as CSV: a `#` metadata line recording the measure (and log
    /// base for KL), then a header of topic indices, then one row per topic
    /// with its index in the first column.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        match self.kind {
            DistanceKind::Kl => out.push_str("# kind=kl log_base=e\n"),
            DistanceKind::Cosine => out.push_str("# kind=cosine\n"),
        }
        out.push_str("topic");
        for j in 0..self.values.len() {
            let _ = write!(out, ",{j}");
        }
        out.push('\n');
        for (i, row) in self.values.iter().enumerate() {
            let _ = write!(out, "{i}");
            for value in row {
                let _ = write!(out, ",{value}");
            }
            out.push('\n');
        }
        out
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }
}

/// Compute the full pairwise matrix over a model's topic-word rows.
pub fn topic_distance_matrix(model: &LdaModel, kind: DistanceKind) -> Result<DistanceMatrix> {
    let k = model.num_topics();
    let mut values = vec![vec![0.0; k]; k];
    for (i, row) in values.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = match kind {
                DistanceKind::Kl => {
                    if i == j {
                        0.0
                    } else {
                        kl_divergence(&model.phi[i], &model.phi[j], KL_EPSILON)?
                    }
                }
                DistanceKind::Cosine => cosine_similarity(&model.phi[i], &model.phi[j])?,
            };
        }
    }
    Ok(DistanceMatrix { kind, values })
}

/// Sort direction for [`rank_pairs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankOrder {
    MostSimilar,
    MostDistinct,
}

/// Off-diagonal entries sorted by how alike the two topics are.
///
/// For cosine, similar means a *large* value and each unordered pair appears
/// once as `(i, j)` with `i < j`. For KL, similar means a *small* divergence
/// and both directions are listed, since the measure is asymmetric. Ties are
/// broken by `(i, j)` lexicographic order.
pub fn rank_pairs(matrix: &DistanceMatrix, order: RankOrder) -> Result<Vec<(usize, usize, f64)>> {
    let k = matrix.num_topics();
    if k < 2 {
        return Err(Error::validation(
            "ranking topic pairs needs at least 2 topics",
        ));
    }
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            if matrix.kind == DistanceKind::Cosine && i > j {
                continue;
            }
            pairs.push((i, j, matrix.values[i][j]));
        }
    }
    // With which sign does a large value mean "similar"?
    let descending = match (matrix.kind, order) {
        (DistanceKind::Cosine, RankOrder::MostSimilar) => true,
        (DistanceKind::Cosine, RankOrder::MostDistinct) => false,
        (DistanceKind::Kl, RankOrder::MostSimilar) => false,
        (DistanceKind::Kl, RankOrder::MostDistinct) => true,
    };
    pairs.sort_by(|a, b| {
        let value = if descending {
            b.2.total_cmp(&a.2)
        } else {
            a.2.total_cmp(&b.2)
        };
        value.then((a.0, a.1).cmp(&(b.0, b.1)))
    });
    Ok(pairs)
}
