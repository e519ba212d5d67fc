//! Run-directory layout and the file sink.
//!
//! ```text
//! <run>/config.toml          resolved input config
//! <run>/force.snap           force field snapshot
//! <run>/force_numbers.toml   force-derived scalars
//! <run>/ledger.ndjson        one energy-ledger record per line
//! <run>/ledger.csv           same rows, units in the header
//! <run>/snapshots/NNNNNNNNN.snap
//! <run>/checkpoints/NNNNNNNNN.ckpt
//! <run>/report.toml          diagnostics report
//! <run>/manifest.json        digests of everything above
//! ```

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::dynamics::{write_field_file, EnergyLedgerRow, FieldFile, ModelParams, SimState, Sink};
use crate::error::{Error, Result};

pub const CONFIG: &str = "config.toml";
pub const FORCE: &str = "force.snap";
pub const FORCE_NUMBERS: &str = "force_numbers.toml";
pub const LEDGER: &str = "ledger.ndjson";
pub const LEDGER_CSV: &str = "ledger.csv";
pub const REPORT: &str = "report.toml";
pub const MANIFEST: &str = "manifest.json";
pub const SNAPSHOTS: &str = "snapshots";
pub const CHECKPOINTS: &str = "checkpoints";
pub const SWEEP_REPORT: &str = "sweep.toml";
pub const SWEEP_CSV: &str = "sweep.csv";

/// Ledger CSV header. `T` is time and `L` length in model units; `‖u‖²`
/// carries the box volume, so it is `L^5 T^-2`.
pub const LEDGER_CSV_HEADER: &str = "t [T],kinetic [L^5 T^-2],dissipation [L^5 T^-3],injection [L^5 T^-3],damping [L^5 T^-3],residual [L^5 T^-3],rate_slope [L^5 T^-4]";

pub fn csv_line(r: &EnergyLedgerRow) -> String {
    format!(
        "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
        r.t, r.kinetic, r.dissipation, r.injection, r.damping, r.residual, r.rate_slope
    )
}

pub fn checkpoint_path(dir: &Path, step: u64) -> PathBuf {
    dir.join(CHECKPOINTS).join(format!("{step:09}.ckpt"))
}

pub fn snapshot_path(dir: &Path, step: u64) -> PathBuf {
    dir.join(SNAPSHOTS).join(format!("{step:09}.snap"))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn read_ledger(path: &Path) -> Result<Vec<EnergyLedgerRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            msg: format!("line {}: {e}", i + 1),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Rewrites both ledger files with `rows`.
pub fn write_ledger(dir: &Path, rows: &[EnergyLedgerRow]) -> Result<()> {
    let mut sink = FileSink::create(dir)?;
    for r in rows {
        sink.row(r)?;
    }
    sink.flush()
}

/// Streams rows, snapshots and checkpoints into a run directory.
pub struct FileSink {
    dir: PathBuf,
    ndjson: BufWriter<File>,
    csv: BufWriter<File>,
}

impl FileSink {
    /// Truncates any existing ledger.
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let open = |name: &str| -> Result<BufWriter<File>> {
            let p = dir.join(name);
            File::create(&p).map(BufWriter::new).map_err(|e| Error::io(p, e))
        };
        let ndjson = open(LEDGER)?;
        let mut csv = open(LEDGER_CSV)?;
        writeln!(csv, "{LEDGER_CSV_HEADER}").map_err(|e| Error::io(dir.join(LEDGER_CSV), e))?;
        Ok(FileSink {
            dir: dir.to_path_buf(),
            ndjson,
            csv,
        })
    }

    /// Appends to an existing ledger.
    pub fn append(dir: &Path) -> Result<Self> {
        let open = |name: &str| -> Result<BufWriter<File>> {
            let p = dir.join(name);
            OpenOptions::new().append(true).open(&p).map(BufWriter::new).map_err(|e| Error::io(p, e))
        };
        Ok(FileSink {
            dir: dir.to_path_buf(),
            ndjson: open(LEDGER)?,
            csv: open(LEDGER_CSV)?,
        })
    }
}

impl Sink for FileSink {
    fn row(&mut self, row: &EnergyLedgerRow) -> Result<()> {
        let line = serde_json::to_string(row).expect("row serializes");
        writeln!(self.ndjson, "{line}").map_err(|e| Error::io(self.dir.join(LEDGER), e))?;
        writeln!(self.csv, "{}", csv_line(row)).map_err(|e| Error::io(self.dir.join(LEDGER_CSV), e))
    }

    fn snapshot(&mut self, state: &SimState) -> Result<()> {
        let p = snapshot_path(&self.dir, state.step_index);
        fs::create_dir_all(p.parent().unwrap()).map_err(|e| Error::io(&p, e))?;
        write_field_file(&p, &FieldFile::snapshot("velocity", state.t, state.step_index, &state.u))
    }

    fn checkpoint(&mut self, state: &SimState, params: &ModelParams) -> Result<()> {
        // the ledger must be on disk before the checkpoint that covers it
        self.flush()?;
        let p = checkpoint_path(&self.dir, state.step_index);
        fs::create_dir_all(p.parent().unwrap()).map_err(|e| Error::io(&p, e))?;
        write_field_file(&p, &FieldFile::checkpoint(state, params))
    }

    fn flush(&mut self) -> Result<()> {
        self.ndjson.flush().map_err(|e| Error::io(self.dir.join(LEDGER), e))?;
        self.csv.flush().map_err(|e| Error::io(self.dir.join(LEDGER_CSV), e))
    }
}
