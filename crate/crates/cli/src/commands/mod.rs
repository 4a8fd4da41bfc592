pub mod check;
pub mod linear;
pub mod norms;
pub mod run;
pub mod sweep;

use std::path::Path;

use crate::error::{CliError, Result};

pub(crate) fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
