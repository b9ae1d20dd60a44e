//! JSON manifest: instance data, certificate and verification summary, with
//! every float hex-encoded so that a read reproduces it bit for bit.
//!
//! Solver-facing files are referenced by SHA-256 of their bytes.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{read_text, write_text};
use crate::certify::{verify_lo, verify_sdo, verify_soco, Family, Tolerances, VerifyReport};
use crate::controls::GenControls;
use crate::error::{Error, Result};
use crate::lo::{LinearInstance, LoCertificate};
use crate::sdo::{SdoCertificate, SdoInstance};
use crate::soco::{SocoCertificate, SocoInstance};

pub const FORMAT_VERSION: &str = "conigen-manifest/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Payload {
    Lo {
        instance: LinearInstance,
        certificate: LoCertificate,
    },
    Sdo {
        instance: SdoInstance,
        certificate: SdoCertificate,
    },
    Soco {
        instance: SocoInstance,
        certificate: SocoCertificate,
    },
}

impl Payload {
    pub fn family(&self) -> Family {
        match self {
            Payload::Lo { .. } => Family::Lo,
            Payload::Sdo { .. } => Family::Sdo,
            Payload::Soco { .. } => Family::Soco,
        }
    }

    pub fn dimensions(&self) -> Dimensions {
        match self {
            Payload::Lo { instance, .. } => Dimensions {
                m: instance.rows(),
                n: instance.cols(),
                cone_dims: None,
            },
            Payload::Sdo { instance, .. } => Dimensions {
                m: instance.m(),
                n: instance.n(),
                cone_dims: None,
            },
            Payload::Soco { instance, .. } => Dimensions {
                m: instance.rows(),
                n: instance.cols(),
                cone_dims: Some(instance.cone_dims.clone()),
            },
        }
    }

    pub fn verify(&self, tol: &Tolerances) -> Result<VerifyReport> {
        match self {
            Payload::Lo { instance, certificate } => verify_lo(instance, certificate, tol),
            Payload::Sdo { instance, certificate } => verify_sdo(instance, certificate, tol),
            Payload::Soco { instance, certificate } => verify_soco(instance, certificate, tol),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimensions {
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_dims: Option<Vec<usize>>,
}

/// A solver-facing file next to the manifest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRef {
    /// Relative to the manifest's directory.
    pub path: String,
    pub format: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format_version: String,
    pub generator: String,
    pub mode: String,
    pub dimensions: Dimensions,
    pub controls: GenControls,
    pub files: Vec<FileRef>,
    pub payload: Payload,
    pub report: VerifyReport,
}

impl Manifest {
    pub fn new(mode: &str, controls: GenControls, payload: Payload, report: VerifyReport) -> Self {
        Self {
            format_version: FORMAT_VERSION.into(),
            generator: format!("conigen {}", env!("CARGO_PKG_VERSION")),
            mode: mode.into(),
            dimensions: payload.dimensions(),
            controls,
            files: Vec::new(),
            payload,
            report,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash `path` and record it relative to `base`.
pub fn file_ref(base: &Path, path: &Path, format: &str) -> Result<FileRef> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let rel = path.strip_prefix(base).unwrap_or(path);
    Ok(FileRef {
        path: rel.to_string_lossy().into_owned(),
        format: format.into(),
        sha256: sha256_hex(&bytes),
    })
}

pub fn to_string(manifest: &Manifest) -> Result<String> {
    serde_json::to_string_pretty(manifest)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Internal(format!("manifest serialization: {e}")))
}

pub fn write(manifest: &Manifest, path: &Path) -> Result<()> {
    write_text(path, &to_string(manifest)?)
}

/// Parse without touching referenced files.
pub fn parse(text: &str) -> Result<Manifest> {
    let manifest: Manifest = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let field = msg
            .split('`')
            .nth(1)
            .map_or_else(|| format!("column {}", e.column()), str::to_string);
        Error::parse(e.line(), field, msg)
    })?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(Error::parse(
            1,
            "format_version",
            format!("unsupported version `{}`", manifest.format_version),
        ));
    }
    Ok(manifest)
}

/// Read and check every referenced file's hash.
pub fn read(path: &Path) -> Result<Manifest> {
    let manifest = parse(&read_text(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    for f in &manifest.files {
        let full: PathBuf = base.join(&f.path);
        let bytes = std::fs::read(&full).map_err(|e| Error::io(&full, e))?;
        let found = sha256_hex(&bytes);
        if found != f.sha256 {
            return Err(Error::Integrity {
                path: full,
                expected: f.sha256.clone(),
                found,
            });
        }
    }
    Ok(manifest)
}
