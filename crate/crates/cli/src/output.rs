use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::CliError;

/// Write to `path`, or to standard output when there is none.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
            }
            fs::write(p, bytes).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Input(format!("cannot write to standard output: {e}")))
        }
    }
}

pub fn json_bytes<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable output");
    out.push(b'\n');
    out
}
