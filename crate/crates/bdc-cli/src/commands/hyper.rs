use crate::cfgfile::ConfigFile;
use crate::{CliError, HyperArgs};
use bdc::hyper::select_hyperparameters;
use bdc::io::read_matrix_auto;
use bdc::kmedoids::default_k_range;

pub fn run(args: &HyperArgs) -> Result<(), CliError> {
    let d = read_matrix_auto(&args.d1).map_err(|e| CliError::Data(e.to_string()))?;
    let (def_lo, def_hi) = default_k_range(d.n());
    let lo = args.k_min.max(def_lo.min(2));
    let hi = args.k_max.unwrap_or(def_hi);
    if lo > hi || hi > d.n() {
        return Err(CliError::Args(format!(
            "k range {lo}..={hi} is invalid for {} objects",
            d.n()
        )));
    }
    let sel = select_hyperparameters(&d, (lo, hi)).map_err(|e| CliError::Numeric(e.to_string()))?;
    let cfg_file = ConfigFile::from_selection(&sel.cfg, Some(sel.k_elbow));
    cfg_file.write(&args.out)?;
    println!(
        "hyper: k_elbow={} |a|={} |b|={} delta1={:.4} delta2={:.4} -> {}",
        sel.k_elbow,
        sel.a_set_size,
        sel.b_set_size,
        sel.cfg.delta1,
        sel.cfg.delta2,
        args.out.display()
    );
    Ok(())
}
