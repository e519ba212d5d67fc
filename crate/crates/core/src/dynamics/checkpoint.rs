//! Binary field files.
//!
//! Layout, all integers little-endian:
//!
//! | bytes | content |
//! |---|---|
//! | 8 | magic, `KDMPCKPT` (checkpoint) or `KDMPSNAP` (snapshot) |
//! | 4 | format version, `u32` |
//! | 4 | header length `H`, `u32` |
//! | H | UTF-8 JSON header: grid, time, step index, model parameters, label |
//! | 48 n³ | coefficients: component-major, then flat mode index `(i n + j) n + k`, each as `re: f64`, `im: f64` |
//!
//! Coefficients are stored bit for bit, so a restart continues exactly.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use super::stepper::SimState;
use crate::error::{Error, Result};
use crate::spectral::{GridSpec, SpectralField, C64};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC_CHECKPOINT: &[u8; 8] = b"KDMPCKPT";
const MAGIC_SNAPSHOT: &[u8; 8] = b"KDMPSNAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    Checkpoint,
    Snapshot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct Header {
    grid: GridSpec,
    t: f64,
    step_index: u64,
    params: Option<ModelParams>,
    label: String,
}

/// Decoded field file.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldFile {
    pub kind: FieldKind,
    pub t: f64,
    pub step_index: u64,
    pub params: Option<ModelParams>,
    pub label: String,
    pub field: SpectralField,
}

impl FieldFile {
    pub fn checkpoint(state: &SimState, params: &ModelParams) -> Self {
        FieldFile {
            kind: FieldKind::Checkpoint,
            t: state.t,
            step_index: state.step_index,
            params: Some(*params),
            label: "u".into(),
            field: state.u.clone(),
        }
    }

    pub fn snapshot(label: &str, t: f64, step_index: u64, field: &SpectralField) -> Self {
        FieldFile {
            kind: FieldKind::Snapshot,
            t,
            step_index,
            params: None,
            label: label.into(),
            field: field.clone(),
        }
    }

    pub fn state(&self) -> SimState {
        SimState {
            t: self.t,
            u: self.field.clone(),
            step_index: self.step_index,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let header = Header {
            grid: *self.field.grid(),
            t: self.t,
            step_index: self.step_index,
            params: self.params,
            label: self.label.clone(),
        };
        let h = serde_json::to_vec(&header).expect("header serializes");
        let n3 = self.field.grid().len();
        let mut out = Vec::with_capacity(16 + h.len() + 48 * n3);
        out.extend_from_slice(match self.kind {
            FieldKind::Checkpoint => MAGIC_CHECKPOINT,
            FieldKind::Snapshot => MAGIC_SNAPSHOT,
        });
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(h.len() as u32).to_le_bytes());
        out.extend_from_slice(&h);
        for a in 0..3 {
            for c in self.field.component(a) {
                out.extend_from_slice(&c.re.to_le_bytes());
                out.extend_from_slice(&c.im.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], path: &Path) -> Result<Self> {
        let bad = |msg: &str| Error::Format {
            path: path.to_path_buf(),
            msg: msg.to_string(),
        };
        if bytes.len() < 16 {
            return Err(bad("truncated field file"));
        }
        let kind = match &bytes[..8] {
            m if m == MAGIC_CHECKPOINT => FieldKind::Checkpoint,
            m if m == MAGIC_SNAPSHOT => FieldKind::Snapshot,
            _ => return Err(bad("bad magic")),
        };
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(bad(&format!("unsupported format version {version}")));
        }
        let hlen = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
        let body = bytes.get(16..16 + hlen).ok_or_else(|| bad("truncated header"))?;
        let header: Header =
            serde_json::from_slice(body).map_err(|e| bad(&format!("header: {e}")))?;
        header.grid.validate()?;
        let n3 = header.grid.len();
        let payload = &bytes[16 + hlen..];
        if payload.len() != 48 * n3 {
            return Err(bad(&format!(
                "payload has {} bytes, expected {}",
                payload.len(),
                48 * n3
            )));
        }
        let f64_at = |p: usize| f64::from_le_bytes(payload[p..p + 8].try_into().unwrap());
        let comps: [Vec<C64>; 3] = std::array::from_fn(|a| {
            (0..n3)
                .map(|i| {
                    let p = (a * n3 + i) * 16;
                    C64::new(f64_at(p), f64_at(p + 8))
                })
                .collect()
        });
        Ok(FieldFile {
            kind,
            t: header.t,
            step_index: header.step_index,
            params: header.params,
            label: header.label,
            field: SpectralField::from_components(header.grid, comps)?,
        })
    }
}

pub fn write_field_file(path: &Path, file: &FieldFile) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&file.to_bytes()).map_err(|e| Error::io(path, e))?;
    f.sync_all().map_err(|e| Error::io(path, e))
}

pub fn read_field_file(path: &Path) -> Result<FieldFile> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    FieldFile::from_bytes(&bytes, path)
}
