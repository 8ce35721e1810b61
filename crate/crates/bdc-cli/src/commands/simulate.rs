use super::{data_err, ensure_dir};
use crate::manifest::ManifestBuilder;
use crate::{CliError, SimulateArgs};
use bdc::io::{write_labels_csv, write_matrix_csv};
use bdc::simulate::{simulate_two_layer, SimConfig};

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    if args.sigma <= 0.0 {
        return Err(CliError::Args(format!("--sigma must be positive, got {}", args.sigma)));
    }
    if !(0.0..=1.0).contains(&args.alpha) {
        return Err(CliError::Args(format!("--alpha must lie in [0,1], got {}", args.alpha)));
    }
    let cfg = SimConfig {
        n: args.n,
        n_clusters: args.clusters,
        dim: args.dim,
        sigma_s: args.sigma,
        alpha_s: args.alpha,
        dirichlet_m: args.dirichlet_m,
        seed: args.seed,
    };
    cfg.validate().map_err(|e| CliError::Args(e.to_string()))?;
    ensure_dir(&args.out)?;
    let mut manifest = ManifestBuilder::new("simulate", args.seed);
    manifest
        .param("n", args.n)
        .param("clusters", args.clusters)
        .param("dim", args.dim)
        .param("sigma", args.sigma)
        .param("alpha", args.alpha)
        .param("dirichlet_m", args.dirichlet_m);
    manifest.begin_phase("simulate");
    let out = simulate_two_layer(&cfg).map_err(|e| CliError::Numeric(e.to_string()))?;
    manifest.begin_phase("write");
    let d1_path = args.out.join("d1.csv");
    let d2_path = args.out.join("d2.csv");
    write_matrix_csv(&d1_path, &out.d1).map_err(|e| data_err(&d1_path, e))?;
    write_matrix_csv(&d2_path, &out.d2).map_err(|e| data_err(&d2_path, e))?;
    let t1_path = args.out.join("truth1.csv");
    let t2_path = args.out.join("truth2.csv");
    write_labels_csv(&t1_path, &out.z1_true).map_err(|e| data_err(&t1_path, e))?;
    write_labels_csv(&t2_path, &out.z2_true).map_err(|e| data_err(&t2_path, e))?;
    manifest.end_phase();
    manifest.digest_file("d1", &d1_path)?;
    manifest.digest_file("d2", &d2_path)?;
    manifest.write(&args.out.join("manifest.json"))?;
    println!(
        "simulate: wrote {} objects, {} clusters to {}",
        args.n,
        args.clusters,
        args.out.display()
    );
    Ok(())
}
