use crate::{CliError, ScoreArgs};
use bdc::io::read_labels_csv;
use bdc::posterior::{adjusted_rand, rand_index, variation_of_information};
use serde::Serialize;
use std::path::Path;

#[derive(Debug, Serialize)]
struct ScoreReport {
    ri: f64,
    ari: f64,
    vi: f64,
    k_estimate: usize,
    k_truth: usize,
}

fn distinct(labels: &[usize]) -> usize {
    let mut v = labels.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn score_pair(estimate: &Path, truth: &Path) -> Result<ScoreReport, CliError> {
    let est = read_labels_csv(estimate).map_err(|e| CliError::Data(e.to_string()))?;
    let tru = read_labels_csv(truth).map_err(|e| CliError::Data(e.to_string()))?;
    if est.len() != tru.len() {
        return Err(CliError::Data(format!(
            "label lengths differ: {} in {} vs {} in {}",
            est.len(),
            estimate.display(),
            tru.len(),
            truth.display()
        )));
    }
    Ok(ScoreReport {
        ri: rand_index(&est, &tru).map_err(|e| CliError::Data(e.to_string()))?,
        ari: adjusted_rand(&est, &tru).map_err(|e| CliError::Data(e.to_string()))?,
        vi: variation_of_information(&est, &tru).map_err(|e| CliError::Data(e.to_string()))?,
        k_estimate: distinct(&est),
        k_truth: distinct(&tru),
    })
}

fn quartiles(xs: &mut [f64]) -> (f64, f64, f64) {
    xs.sort_by(f64::total_cmp);
    let q = |p: f64| xs[((xs.len() - 1) as f64 * p).round() as usize];
    (q(0.25), q(0.5), q(0.75))
}

pub fn run(args: &ScoreArgs) -> Result<(), CliError> {
    if let Some(batch) = &args.batch {
        let mut entries: Vec<_> = std::fs::read_dir(batch)
            .map_err(|e| CliError::Data(format!("{}: {e}", batch.display())))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_dir())
            .collect();
        entries.sort();
        let mut aris = Vec::new();
        println!("dir,ri,ari,vi,k_estimate,k_truth");
        for dir in &entries {
            let est = dir.join(&args.estimate_name);
            let tru = dir.join(&args.truth_name);
            if !est.exists() || !tru.exists() {
                continue;
            }
            let r = score_pair(&est, &tru)?;
            println!(
                "{},{:.6},{:.6},{:.6},{},{}",
                dir.file_name().unwrap_or_default().to_string_lossy(),
                r.ri,
                r.ari,
                r.vi,
                r.k_estimate,
                r.k_truth
            );
            aris.push(r.ari);
        }
        if aris.is_empty() {
            return Err(CliError::Data(format!(
                "no replicate directories under {} contained {} and {}",
                batch.display(),
                args.estimate_name,
                args.truth_name
            )));
        }
        let (q1, q2, q3) = quartiles(&mut aris);
        println!("# ARI over {} replicates: median {q2:.4}, IQR [{q1:.4}, {q3:.4}]", aris.len());
        return Ok(());
    }
    let estimate = args.estimate.as_ref().expect("required unless --batch");
    let truth = args.truth.as_ref().expect("required unless --batch");
    let report = score_pair(estimate, truth)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}
