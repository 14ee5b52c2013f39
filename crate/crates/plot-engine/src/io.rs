//! File output.

use std::io::Write as _;
use std::path::Path;

use crate::error::PlotError;

/// Writes `bytes` to `path` atomically: the content lands in a temporary
/// file in the same directory and is renamed into place, so readers never
/// observe a half-written output and a failed render leaves any previous
/// file untouched.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), PlotError> {
    let shown = path.display().to_string();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| PlotError::io(&shown, e))?;
    tmp.write_all(bytes).map_err(|e| PlotError::io(&shown, e))?;
    tmp.persist(path).map_err(|e| PlotError::io(&shown, e))?;
    Ok(())
}
