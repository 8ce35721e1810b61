pub mod fit;
pub mod hyper;
pub mod score;
pub mod simulate;
pub mod summarize;

use crate::CliError;
use std::path::Path;

pub(crate) fn ensure_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub(crate) fn data_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}
