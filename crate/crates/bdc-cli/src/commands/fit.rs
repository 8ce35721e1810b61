use super::summarize::write_trace_summaries;
use super::{data_err, ensure_dir};
use crate::cfgfile::ConfigFile;
use crate::manifest::ManifestBuilder;
use crate::{CliError, FitArgs, InitArg, LikelihoodArg, ModelArg};
use bdc::core::{DistanceMatrix, MultiViewData};
use bdc::hyper::{select_hyperparameters, singleton_prefilter};
use bdc::io::{read_matrix_auto, write_labels_csv, write_trace_jsonl, TraceRecord};
use bdc::kmedoids::{default_k_range, elbow_k, pam};
use bdc::likelihood::{LikelihoodConfig, Mode};
use bdc::priors::{AlphaPriorConfig, MedoidPriorConfig, PYConfig};
use bdc::samplers::{
    derive_seed, run_bdm, run_joint, run_nested, run_py_dependent, run_py_independent,
    ChainConfig, InitStrategy, LayerTrace, LikelihoodSpec, PyDependentOptions, TraceSet,
};
use std::path::Path;

fn worker_cap(chains: u32) -> usize {
    let hw = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cap = std::env::var("BDC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(hw);
    cap.min(chains.max(1) as usize)
}

fn needs_second_layer(model: ModelArg) -> bool {
    matches!(model, ModelArg::TessNested | ModelArg::TessJoint | ModelArg::PyJoint)
}

fn read_matrix(path: &Path) -> Result<DistanceMatrix, CliError> {
    read_matrix_auto(path).map_err(|e| CliError::Data(e.to_string()))
}

/// Resolve mode/repulsion from flags, config file, and model defaults.
fn resolve_likelihood(
    args: &FitArgs,
    d: &DistanceMatrix,
    file_cfg: &Option<ConfigFile>,
) -> Result<(LikelihoodConfig, Option<usize>), CliError> {
    let mode = match (args.model, args.likelihood) {
        (ModelArg::PyIndep | ModelArg::PyJoint, Some(LikelihoodArg::Linear)) => {
            return Err(CliError::Args(
                "the linear likelihood is defined through medoids; py-* models support quadratic only"
                    .into(),
            ))
        }
        (ModelArg::PyIndep | ModelArg::PyJoint, _) => Mode::Quadratic,
        (_, Some(LikelihoodArg::Quadratic)) => Mode::Quadratic,
        (_, Some(LikelihoodArg::Linear)) => Mode::Linear,
        (_, None) => file_cfg.as_ref().map_or(Mode::Linear, |c| c.mode),
    };
    let repulsion = if args.repulsion {
        true
    } else if args.no_repulsion {
        false
    } else {
        file_cfg.as_ref().map_or(true, |c| c.repulsion)
    };
    let (base, k_elbow) = match file_cfg {
        Some(cfg) => (cfg.to_likelihood_config()?, cfg.k_elbow),
        None => {
            let (lo, hi) = default_k_range(d.n());
            let sel = select_hyperparameters(d, (lo, hi))
                .map_err(|e| CliError::Numeric(format!("hyperparameter selection: {e}")))?;
            (sel.cfg, Some(sel.k_elbow))
        }
    };
    Ok((base.with_mode(mode).with_repulsion(repulsion), k_elbow))
}

fn resolve_init(
    args: &FitArgs,
    d: &DistanceMatrix,
    k_elbow: Option<usize>,
) -> Result<InitStrategy, CliError> {
    match args.init {
        InitArg::Random => {
            let k = args.init_k.ok_or_else(|| {
                CliError::Args("--init random requires --init-k".into())
            })?;
            if k == 0 || k > d.n() {
                return Err(CliError::Args(format!(
                    "--init-k {k} outside 1..={}",
                    d.n()
                )));
            }
            Ok(InitStrategy::RandomK(k))
        }
        InitArg::Pam => match k_elbow {
            Some(k) if k >= 1 && k <= d.n() => Ok(InitStrategy::Explicit(
                pam(d, k).map_err(|e| CliError::Numeric(e.to_string()))?.medoids,
            )),
            _ => Ok(InitStrategy::FromPam),
        },
    }
}

/// Zip two independently fitted single-layer traces into one two-layer
/// trace (their retention schedules are identical).
fn zip_layers(mut a: TraceSet, b: TraceSet) -> TraceSet {
    assert_eq!(a.iters, b.iters, "retention schedules must match");
    a.layers.push(b.layers.into_iter().next().expect("single layer"));
    for (lp, lp2) in a.log_post.iter_mut().zip(b.log_post.iter()) {
        *lp += lp2;
    }
    a
}

fn run_chains(
    chains: u32,
    cap: usize,
    job: impl Fn(u32) -> TraceSet + Sync,
) -> Vec<TraceSet> {
    let mut results: Vec<Option<TraceSet>> = (0..chains).map(|_| None).collect();
    let mut next = 0u32;
    while next < chains {
        let batch_end = (next + cap as u32).min(chains);
        let batch: Vec<u32> = (next..batch_end).collect();
        let mut outputs: Vec<(u32, TraceSet)> = Vec::with_capacity(batch.len());
        let job = &job;
        std::thread::scope(|scope| {
            let handles: Vec<_> = batch
                .iter()
                .map(|&c| scope.spawn(move || (c, job(c))))
                .collect();
            for h in handles {
                outputs.push(h.join().expect("chain thread panicked"));
            }
        });
        for (c, t) in outputs {
            results[c as usize] = Some(t);
        }
        next = batch_end;
    }
    results.into_iter().map(|t| t.expect("all chains ran")).collect()
}

pub fn run(args: &FitArgs) -> Result<(), CliError> {
    if args.burnin >= args.iters {
        return Err(CliError::Args(format!(
            "--burnin {} must be below --iters {}",
            args.burnin, args.iters
        )));
    }
    if args.thin == 0 {
        return Err(CliError::Args("--thin must be at least 1".into()));
    }
    if args.chains == 0 {
        return Err(CliError::Args("--chains must be at least 1".into()));
    }
    if needs_second_layer(args.model) && args.d2.is_none() {
        return Err(CliError::Args(format!(
            "model {:?} needs --d2",
            args.model
        )));
    }
    ensure_dir(&args.out)?;
    let mut manifest = ManifestBuilder::new("fit", args.seed);
    manifest
        .param("model", format!("{:?}", args.model))
        .param("iters", args.iters)
        .param("burnin", args.burnin)
        .param("thin", args.thin)
        .param("chains", args.chains)
        .param("p_geom", args.p_geom)
        .param("d1", args.d1.display());
    manifest.digest_file("d1", &args.d1)?;
    if let Some(d2) = &args.d2 {
        manifest.param("d2", d2.display());
        manifest.digest_file("d2", d2)?;
    }

    manifest.begin_phase("load");
    let d1_full = read_matrix(&args.d1)?;
    let d2_full = args.d2.as_ref().map(|p| read_matrix(p)).transpose()?;
    if let Some(d2) = &d2_full {
        if d2.n() != d1_full.n() {
            return Err(CliError::Data(format!(
                "layer sizes differ: {} vs {}",
                d1_full.n(),
                d2.n()
            )));
        }
    }
    // optional singleton prefilter, computed on layer 1 and applied to both
    let n_full = d1_full.n();
    let (d1, d2, kept): (DistanceMatrix, Option<DistanceMatrix>, Option<Vec<usize>>) =
        match args.singleton_threshold {
            Some(threshold) => {
                if !(args.singleton_quantile > 0.0 && args.singleton_quantile < 1.0) {
                    return Err(CliError::Args(format!(
                        "--singleton-quantile must lie in (0,1), got {}",
                        args.singleton_quantile
                    )));
                }
                let r = singleton_prefilter(&d1_full, args.singleton_quantile, threshold);
                if r.kept.len() < 2 {
                    return Err(CliError::Data(format!(
                        "prefilter kept only {} objects",
                        r.kept.len()
                    )));
                }
                manifest.param("singletons_filtered", r.singletons.len());
                let d2r = d2_full.as_ref().map(|d| d.restrict(&r.kept));
                (r.restricted, d2r, Some(r.kept))
            }
            None => (d1_full, d2_full, None),
        };
    manifest.end_phase();

    // K-medoids is a point estimate, not a chain
    if args.model == ModelArg::Kmedoids {
        manifest.begin_phase("kmedoids");
        let mut summary_lines = Vec::new();
        for (tag, d) in [(1usize, Some(&d1)), (2, d2.as_ref())] {
            let Some(d) = d else { continue };
            let k = match args.k {
                Some(k) if k >= 1 && k <= d.n() => k,
                Some(k) => {
                    return Err(CliError::Args(format!("--k {k} outside 1..={}", d.n())))
                }
                None => {
                    let (lo, hi) = default_k_range(d.n());
                    elbow_k(d, lo, hi).map_err(|e| CliError::Numeric(e.to_string()))?
                }
            };
            let fit = pam(d, k).map_err(|e| CliError::Numeric(e.to_string()))?;
            let labels = match &kept {
                Some(kept_idx) => super::summarize::expand_labels(
                    fit.labels.labels(),
                    kept_idx,
                    n_full,
                ),
                None => fit.labels.labels().to_vec(),
            };
            let path = args.out.join(format!("labels{tag}.csv"));
            write_labels_csv(&path, &labels).map_err(|e| data_err(&path, e))?;
            summary_lines.push(serde_json::json!({
                "layer": tag,
                "k": k,
                "cost": fit.cost,
                "swaps": fit.iterations,
            }));
        }
        manifest.end_phase();
        let path = args.out.join("summary.json");
        let json = serde_json::to_string_pretty(&serde_json::json!({
            "model": "kmedoids",
            "layers": summary_lines,
        }))
        .expect("serializable");
        std::fs::write(&path, json).map_err(|e| data_err(&path, e))?;
        manifest.write(&args.out.join("manifest.json"))?;
        println!("fit kmedoids: wrote {}", args.out.display());
        return Ok(());
    }

    // likelihood configuration per layer
    manifest.begin_phase("hyper");
    let file_cfg = args.config.as_ref().map(|p| ConfigFile::read(p)).transpose()?;
    let (cfg1, k_elbow1) = resolve_likelihood(args, &d1, &file_cfg)?;
    let layer2_cfg = match &d2 {
        Some(d2) => Some(resolve_likelihood(args, d2, &file_cfg)?),
        None => None,
    };
    manifest.end_phase();
    let effective = ConfigFile::from_selection(&cfg1, k_elbow1);
    let effective_text = effective.render();
    let eff_path = args.out.join("effective.cfg");
    std::fs::write(&eff_path, &effective_text).map_err(|e| data_err(&eff_path, e))?;
    manifest.config_digest(&effective_text);

    let prior1 = MedoidPriorConfig::new(args.p_geom, d1.n())
        .map_err(|e| CliError::Args(e.to_string()))?;
    let alpha_prior = AlphaPriorConfig::new(args.alpha_a, args.alpha_b)
        .map_err(|e| CliError::Args(e.to_string()))?;
    let py = PYConfig::new(args.py_m, args.py_discount)
        .map_err(|e| CliError::Args(e.to_string()))?;
    let init1 = resolve_init(args, &d1, k_elbow1)?;
    let chain_for = |c: u32, init: InitStrategy| {
        ChainConfig::new(args.iters, args.burnin, args.thin, derive_seed(args.seed, c as u64), init)
    };

    manifest.begin_phase("sample");
    let cap = worker_cap(args.chains);
    let lik1 = LikelihoodSpec::Config(cfg1);
    let traces: Vec<TraceSet> = match args.model {
        ModelArg::TessIndep | ModelArg::PyIndep => {
            let fit_layer = |d: &DistanceMatrix,
                             cfg: LikelihoodConfig,
                             init: &InitStrategy,
                             stream: u64,
                             c: u32| {
                let chain = ChainConfig::new(
                    args.iters,
                    args.burnin,
                    args.thin,
                    derive_seed(args.seed, stream * 1000 + c as u64),
                    init.clone(),
                );
                if args.model == ModelArg::TessIndep {
                    run_bdm(d, &LikelihoodSpec::Config(cfg), &prior1, &chain)
                } else {
                    run_py_independent(d, &LikelihoodSpec::Config(cfg), &py, &chain)
                }
            };
            let layer2 = match (&d2, &layer2_cfg) {
                (Some(d2), Some((cfg2, k_elbow2))) => {
                    Some((d2, *cfg2, resolve_init(args, d2, *k_elbow2)?))
                }
                _ => None,
            };
            run_chains(args.chains, cap, |c| {
                let t1 = fit_layer(&d1, cfg1, &init1, 0, c);
                match &layer2 {
                    Some((d2, cfg2, init2)) => {
                        let t2 = fit_layer(d2, *cfg2, init2, 1, c);
                        zip_layers(t1, t2)
                    }
                    None => t1,
                }
            })
        }
        ModelArg::TessNested | ModelArg::TessJoint => {
            let d2 = d2.as_ref().expect("checked above");
            let (cfg2, _) = layer2_cfg.as_ref().expect("checked above");
            let mv = MultiViewData::new(d1.clone(), d2.clone())
                .map_err(|e| CliError::Data(e.to_string()))?;
            let prior2 = MedoidPriorConfig::new(args.p_geom, d2.n())
                .map_err(|e| CliError::Args(e.to_string()))?;
            let lik2 = LikelihoodSpec::Config(*cfg2);
            let init = match args.init {
                InitArg::Random => init1.clone(),
                InitArg::Pam => InitStrategy::FromPam,
            };
            run_chains(args.chains, cap, |c| {
                let chain = chain_for(c, init.clone());
                if args.model == ModelArg::TessNested {
                    run_nested(&mv, &lik1, &lik2, &prior1, &prior2, &chain)
                } else {
                    run_joint(&mv, &lik1, &lik2, &prior1, &prior2, &alpha_prior, &chain)
                }
            })
        }
        ModelArg::PyJoint => {
            let d2 = d2.as_ref().expect("checked above");
            let (cfg2, _) = layer2_cfg.as_ref().expect("checked above");
            let mv = MultiViewData::new(d1.clone(), d2.clone())
                .map_err(|e| CliError::Data(e.to_string()))?;
            let lik2 = LikelihoodSpec::Config(*cfg2);
            let init = match args.init {
                InitArg::Random => init1.clone(),
                InitArg::Pam => InitStrategy::FromPam,
            };
            run_chains(args.chains, cap, |c| {
                let chain = chain_for(c, init.clone());
                run_py_dependent(
                    &mv,
                    &lik1,
                    &lik2,
                    &py,
                    &alpha_prior,
                    &PyDependentOptions::default(),
                    &chain,
                )
            })
        }
        ModelArg::Kmedoids => unreachable!("handled above"),
    };
    manifest.end_phase();

    manifest.begin_phase("summarize");
    // per-chain records into one newline-delimited file
    let mut records: Vec<TraceRecord> = Vec::new();
    for (c, t) in traces.iter().enumerate() {
        records.extend(t.to_records(c as u32));
    }
    let trace_path = args.out.join("trace.jsonl");
    write_trace_jsonl(&trace_path, &records).map_err(|e| data_err(&trace_path, e))?;
    // merge chains for summarization
    let mut merged = TraceSet::default();
    merged.layers = vec![LayerTrace::default(); traces[0].layers.len()];
    for t in &traces {
        merged.iters.extend(&t.iters);
        merged.log_post.extend(&t.log_post);
        merged.alpha.extend(&t.alpha);
        for (layer, lt) in t.layers.iter().enumerate() {
            merged.layers[layer].medoids.extend(lt.medoids.iter().cloned());
            merged.layers[layer].labels.extend(lt.labels.iter().cloned());
        }
    }
    let truths: Vec<Option<Vec<usize>>> = vec![None; merged.layers.len()];
    let kept_ref = kept.as_ref().map(|k| (k.as_slice(), n_full));
    write_trace_summaries(&merged, &args.out, &truths, kept_ref)?;
    manifest.end_phase();
    manifest.write(&args.out.join("manifest.json"))?;
    println!(
        "fit {:?}: {} retained draws ({} chains) -> {}",
        args.model,
        merged.len(),
        args.chains,
        args.out.display()
    );
    Ok(())
}
