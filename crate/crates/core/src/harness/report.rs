//! JSON-lines report files: one [`RunReport`] per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::pipeline::RunReport;

pub fn write_reports(path: &Path, reports: &[RunReport]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in reports {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_reports(path: &Path) -> Result<Vec<RunReport>> {
    let r = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let report =
            serde_json::from_str(&line).map_err(|e| Error::Input(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(report);
    }
    Ok(out)
}
