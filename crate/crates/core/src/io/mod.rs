//! File outputs: VTK snapshots, raw coefficient sidecars, atomic writes.

mod sidecar;
mod vtk;

use std::fs;
use std::io::Write;
use std::path::Path;

pub use sidecar::{read_sidecar, sidecar_bytes, write_sidecar, SIDECAR_MAGIC, SIDECAR_VERSION};
pub use vtk::{vtk_string, write_vtk};

use crate::Result;

/// Writes through a temporary sibling file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
