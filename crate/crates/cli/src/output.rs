use std::fs;
use std::path::Path;

use d2d_core::Result;

/// Writes `name` inside `dir` through a temporary sibling and a rename.
pub fn write_atomic(dir: &Path, name: &str, fill: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut buf = Vec::new();
    fill(&mut buf)?;
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, &buf)?;
    fs::rename(&tmp, dir.join(name))?;
    Ok(())
}

pub fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Result<()> {
    write_atomic(dir, name, |buf| {
        serde_json::to_writer_pretty(&mut *buf, value)?;
        buf.push(b'\n');
        Ok(())
    })
}
