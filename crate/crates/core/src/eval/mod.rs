//! Classification metrics and report rendering. The positive class is 1 (generated).

use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.tn + self.fp + self.fn_ + self.tp
    }
}

fn check_lengths(labels: &[u8], probs: &[f64]) -> Result<()> {
    if labels.len() != probs.len() {
        return Err(Error::InvalidInput(format!(
            "{} labels but {} probabilities",
            labels.len(),
            probs.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::InvalidInput("no predictions to evaluate".into()));
    }
    if let Some(l) = labels.iter().find(|&&l| l > 1) {
        return Err(Error::InvalidInput(format!("label {l} is not 0 or 1")));
    }
    Ok(())
}

/// Tallies predictions; a probability equal to the threshold counts as class 0.
pub fn confusion(labels: &[u8], probs: &[f64], threshold: f64) -> Result<Confusion> {
    check_lengths(labels, probs)?;
    let mut c = Confusion::default();
    for (&y, &p) in labels.iter().zip(probs) {
        match (y == 1, p > threshold) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

fn div(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Undefined ratios are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdMetrics {
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

pub fn threshold_metrics(c: &Confusion) -> ThresholdMetrics {
    let precision = div(c.tp, c.tp + c.fp);
    let recall = div(c.tp, c.tp + c.fn_);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        (Some(_), Some(_)) => Some(0.0),
        _ => None,
    };
    ThresholdMetrics {
        accuracy: div(c.tp + c.tn, c.total()),
        precision,
        recall,
        f1,
    }
}

/// Rank-statistic AUC with average ranks for ties, plus the ROC curve from
/// sweeping each distinct score as a threshold, highest first.
pub fn roc_auc(labels: &[u8], probs: &[f64]) -> Result<(f64, Vec<(f64, f64)>)> {
    check_lengths(labels, probs)?;
    if probs.iter().any(|p| p.is_nan()) {
        return Err(Error::InvalidInput("NaN probability".into()));
    }
    let pos = labels.iter().filter(|&&y| y == 1).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::InvalidInput(
            "ROC AUC needs both classes present".into(),
        ));
    }
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| probs[a].total_cmp(&probs[b]));

    let mut rank_sum = 0.0;
    // tie groups in ascending order, reused for the curve
    let mut groups = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && probs[order[j + 1]] == probs[order[i]] {
            j += 1;
        }
        let hits = order[i..=j].iter().filter(|&&k| labels[k] == 1).count();
        rank_sum += ((i + j) as f64 / 2.0 + 1.0) * hits as f64;
        groups.push((hits, j + 1 - i - hits));
        i = j + 1;
    }
    let (p, n) = (pos as f64, neg as f64);
    let auc = (rank_sum - p * (p + 1.0) / 2.0) / (p * n);

    let mut points = Vec::with_capacity(groups.len() + 1);
    points.push((0.0, 0.0));
    let (mut tp, mut fp) = (0usize, 0usize);
    for &(hits, misses) in groups.iter().rev() {
        tp += hits;
        fp += misses;
        points.push((fp as f64 / n, tp as f64 / p));
    }
    Ok((auc, points))
}

/// Area under a piecewise-linear curve.
pub fn trapezoid_area(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum()
}

const LOG_LOSS_CLIP: f64 = 1e-15;

pub fn log_loss(labels: &[u8], probs: &[f64]) -> Result<f64> {
    check_lengths(labels, probs)?;
    let sum: f64 = labels
        .iter()
        .zip(probs)
        .map(|(&y, &p)| {
            // probability given to the true class, clipped
            let q = if y == 1 { p } else { 1.0 - p };
            -q.clamp(LOG_LOSS_CLIP, 1.0 - LOG_LOSS_CLIP).ln()
        })
        .sum();
    Ok(sum / labels.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub matrix: Confusion,
    pub metrics: ThresholdMetrics,
    /// Missing when only one class is present.
    pub auc: Option<f64>,
    pub roc_points: Vec<(f64, f64)>,
    pub log_loss: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Structured,
}

impl EvalReport {
    pub fn compute(labels: &[u8], probs: &[f64], threshold: f64) -> Result<Self> {
        let matrix = confusion(labels, probs, threshold)?;
        let (auc, roc_points) = match roc_auc(labels, probs) {
            Ok((auc, points)) => (Some(auc), points),
            Err(_) => (None, Vec::new()),
        };
        Ok(EvalReport {
            matrix,
            metrics: threshold_metrics(&matrix),
            auc,
            roc_points,
            log_loss: log_loss(labels, probs)?,
            threshold,
        })
    }

    fn metric_lines(&self) -> [(&'static str, Option<f64>); 6] {
        let m = &self.metrics;
        [
            ("accuracy", m.accuracy),
            ("precision", m.precision),
            ("recall", m.recall),
            ("f1", m.f1),
            ("roc_auc", self.auc),
            ("log_loss", Some(self.log_loss)),
        ]
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.render_text(),
            ReportFormat::Structured => {
                serde_json::to_string_pretty(&self.to_json()).expect("report serializes") + "\n"
            }
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for (name, v) in self.metric_lines() {
            match v {
                Some(v) => out.push_str(&format!("{name}: {v:.4}\n")),
                None => out.push_str(&format!("{name}: undefined\n")),
            }
        }
        out.push_str(&format!("threshold: {:.4}\n", self.threshold));
        let c = &self.matrix;
        let w = [c.tn, c.fp, c.fn_, c.tp]
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap()
            .max(5);
        out.push_str("\nconfusion matrix (rows: true label, columns: predicted label)\n");
        out.push_str(&format!("{:<6} {:>w$} {:>w$}\n", "", "human", "ai"));
        out.push_str(&format!("{:<6} {:>w$} {:>w$}\n", "human", c.tn, c.fp));
        out.push_str(&format!("{:<6} {:>w$} {:>w$}\n", "ai", c.fn_, c.tp));
        out
    }

    pub fn to_json(&self) -> Value {
        let mut doc = serde_json::Map::new();
        for (name, v) in self.metric_lines() {
            doc.insert(name.into(), v.map_or(Value::Null, |v| json!(v)));
        }
        let c = &self.matrix;
        doc.insert("tp".into(), json!(c.tp));
        doc.insert("fp".into(), json!(c.fp));
        doc.insert("fn".into(), json!(c.fn_));
        doc.insert("tn".into(), json!(c.tn));
        doc.insert("threshold".into(), json!(self.threshold));
        doc.insert("roc_points".into(), json!(self.roc_points));
        Value::Object(doc)
    }
}
