use super::{data_err, ensure_dir};
use crate::{CliError, SummarizeArgs};
use bdc::io::{
    read_labels_csv, read_trace_jsonl, write_coclustering_csv, write_coclustering_pgm,
    write_label_matrix_csv, write_labels_csv,
};
use bdc::posterior::{adjusted_rand, coclustering, k_posterior, point_estimate, KPosterior};
use bdc::samplers::TraceSet;
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Serialize)]
pub struct LayerSummary {
    pub k_posterior: KPosterior,
    pub point_estimate_k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ari_vs_truth: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub retained_draws: usize,
    pub layers: Vec<LayerSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_median: Option<f64>,
    /// 1-based original ids of prefiltered singleton objects
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub singletons: Vec<usize>,
}

/// Map labels estimated on the kept objects back to the original index
/// space; each filtered singleton becomes its own fresh cluster.
pub fn expand_labels(est: &[usize], kept: &[usize], n_full: usize) -> Vec<usize> {
    let mut out = vec![usize::MAX; n_full];
    for (pos, &orig) in kept.iter().enumerate() {
        out[orig] = est[pos];
    }
    let mut next = est.iter().copied().max().map_or(0, |m| m + 1);
    for v in out.iter_mut() {
        if *v == usize::MAX {
            *v = next;
            next += 1;
        }
    }
    out
}

/// Write co-clustering exports, per-layer point estimates, the label
/// matrix, and the summary JSON for a (possibly merged) trace.
pub fn write_trace_summaries(
    trace: &TraceSet,
    out: &Path,
    truths: &[Option<Vec<usize>>],
    kept: Option<(&[usize], usize)>,
) -> Result<Summary, CliError> {
    ensure_dir(out)?;
    if trace.is_empty() {
        return Err(CliError::Data("trace contains no retained draws".into()));
    }
    let mut layers = Vec::new();
    for (layer, lt) in trace.layers.iter().enumerate() {
        let tag = layer + 1;
        let cc = coclustering(&lt.labels).map_err(|e| CliError::Numeric(e.to_string()))?;
        let cc_csv = out.join(format!("coclustering{tag}.csv"));
        write_coclustering_csv(&cc_csv, &cc).map_err(|e| data_err(&cc_csv, e))?;
        let cc_pgm = out.join(format!("coclustering{tag}.pgm"));
        write_coclustering_pgm(&cc_pgm, &cc).map_err(|e| data_err(&cc_pgm, e))?;
        let lm = out.join(format!("label_draws{tag}.csv"));
        write_label_matrix_csv(&lm, &lt.labels).map_err(|e| data_err(&lm, e))?;
        let est = point_estimate(&lt.labels).map_err(|e| CliError::Numeric(e.to_string()))?;
        let full_labels = match kept {
            Some((kept_idx, n_full)) => expand_labels(est.labels(), kept_idx, n_full),
            None => est.labels().to_vec(),
        };
        let lab = out.join(format!("labels{tag}.csv"));
        write_labels_csv(&lab, &full_labels).map_err(|e| data_err(&lab, e))?;
        let ari = match truths.get(layer).and_then(|t| t.as_ref()) {
            Some(truth) => Some(
                adjusted_rand(&full_labels, truth)
                    .map_err(|e| CliError::Data(format!("layer {tag} truth: {e}")))?,
            ),
            None => None,
        };
        layers.push(LayerSummary {
            k_posterior: k_posterior(&lt.labels).map_err(|e| CliError::Numeric(e.to_string()))?,
            point_estimate_k: est.k_nonempty(),
            ari_vs_truth: ari,
        });
    }
    let (alpha_mean, alpha_median) = if trace.alpha.is_empty() {
        (None, None)
    } else {
        let mut sorted = trace.alpha.clone();
        sorted.sort_by(f64::total_cmp);
        let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
        (Some(mean), Some(sorted[(sorted.len() - 1) / 2]))
    };
    let singletons = match kept {
        Some((kept_idx, n_full)) => {
            (0..n_full).filter(|i| !kept_idx.contains(i)).map(|i| i + 1).collect()
        }
        None => Vec::new(),
    };
    let summary = Summary {
        retained_draws: trace.len(),
        layers,
        alpha_mean,
        alpha_median,
        singletons,
    };
    let path = out.join("summary.json");
    let json = serde_json::to_string_pretty(&summary).expect("serializable");
    std::fs::write(&path, json).map_err(|e| data_err(&path, e))?;
    Ok(summary)
}

pub fn run(args: &SummarizeArgs) -> Result<(), CliError> {
    let records = read_trace_jsonl(&args.trace).map_err(|e| CliError::Data(e.to_string()))?;
    if records.is_empty() {
        return Err(CliError::Data(format!("{}: empty trace", args.trace.display())));
    }
    let trace = TraceSet::from_records(&records);
    let mut truths: Vec<Option<Vec<usize>>> = Vec::new();
    for path in [&args.truth1, &args.truth2] {
        truths.push(match path {
            Some(p) => Some(read_labels_csv(p).map_err(|e| CliError::Data(e.to_string()))?),
            None => None,
        });
    }
    let summary = write_trace_summaries(&trace, &args.out, &truths, None)?;
    println!(
        "summarize: {} draws, {} layer(s) -> {}",
        summary.retained_draws,
        summary.layers.len(),
        args.out.display()
    );
    Ok(())
}
