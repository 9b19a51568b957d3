//! On-disk JSON formats.
//!
//! `fusion-frame/1` stores a system as a list of weighted spanning sets;
//! columns are listed one after another and every entry is `[re, im]`, or
//! `[re]` (or a bare number) in `"real"` files. Floats are written with 17
//! significant digits so every `f64` survives a round trip exactly.

use std::io;

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{Formatter, PrettyFormatter};
use thiserror::Error;

use crate::error::FrameError;
use crate::fusion::{FusionSystem, WeightedSubspace};
use crate::linalg::{
    default_rank_tol, orthonormalize_columns, OperatorMatrix, Scalar, SubspaceBasis,
};

pub const FRAME_FORMAT: &str = "fusion-frame/1";

#[derive(Debug, Error)]
pub enum FileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, SerializeDerive, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Bare(f64),
    Parts(Vec<f64>),
}

impl Entry {
    pub fn to_scalar(&self) -> Result<Scalar, FileError> {
        let z = match self {
            Entry::Bare(re) => Scalar::new(*re, 0.0),
            Entry::Parts(p) => match p.as_slice() {
                [re] => Scalar::new(*re, 0.0),
                [re, im] => Scalar::new(*re, *im),
                _ => {
                    return Err(FileError::Format(format!(
                        "entry must be [re] or [re, im], got {} numbers",
                        p.len()
                    )))
                }
            },
        };
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(FrameError::NonFinite.into());
        }
        Ok(z)
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct SubspaceEntry {
    pub weight: f64,
    /// Column vectors spanning the subspace.
    pub basis: Vec<Vec<Entry>>,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct FrameFileV1 {
    pub format_version: String,
    pub scalar: ScalarKind,
    pub ambient_dim: usize,
    pub subspaces: Vec<SubspaceEntry>,
}

impl FrameFileV1 {
    pub fn from_system(sys: &FusionSystem) -> Self {
        let real = sys
            .members()
            .iter()
            .all(|m| m.basis().columns().iter().all(|z| z.im == 0.0));
        let entry = |z: &Scalar| {
            if real {
                Entry::Parts(vec![z.re])
            } else {
                Entry::Parts(vec![z.re, z.im])
            }
        };
        let subspaces = sys
            .members()
            .iter()
            .map(|m| SubspaceEntry {
                weight: m.weight(),
                basis: m
                    .basis()
                    .columns()
                    .column_iter()
                    .map(|c| c.iter().map(entry).collect())
                    .collect(),
            })
            .collect();
        Self {
            format_version: FRAME_FORMAT.to_string(),
            scalar: if real {
                ScalarKind::Real
            } else {
                ScalarKind::Complex
            },
            ambient_dim: sys.ambient_dim(),
            subspaces,
        }
    }

    /// Validates the file and builds the system. Spanning sets that are not
    /// already orthonormal are orthonormalised; orthonormal ones are kept
    /// verbatim so canonical files round-trip byte for byte.
    pub fn to_system(&self) -> Result<FusionSystem, FileError> {
        if self.format_version != FRAME_FORMAT {
            return Err(FileError::Format(format!(
                "unsupported format_version {:?}, expected {FRAME_FORMAT:?}",
                self.format_version
            )));
        }
        let dim = self.ambient_dim;
        if dim == 0 {
            return Err(FileError::Format("ambient_dim must be positive".into()));
        }
        if self.subspaces.is_empty() {
            return Err(FrameError::EmptySystem.into());
        }
        let mut members = Vec::with_capacity(self.subspaces.len());
        for (k, sub) in self.subspaces.iter().enumerate() {
            if !(sub.weight.is_finite() && sub.weight > 0.0) {
                return Err(FrameError::InvalidWeight(sub.weight).into());
            }
            if sub.basis.is_empty() {
                return Err(FileError::Format(format!(
                    "subspace {k} has an empty basis"
                )));
            }
            let mut m = OperatorMatrix::zeros(dim, sub.basis.len());
            for (c, column) in sub.basis.iter().enumerate() {
                if column.len() != dim {
                    return Err(FrameError::DimensionMismatch {
                        expected: dim,
                        found: column.len(),
                    }
                    .into());
                }
                for (r, e) in column.iter().enumerate() {
                    let z = e.to_scalar()?;
                    if self.scalar == ScalarKind::Real && z.im != 0.0 {
                        return Err(FileError::Format(format!(
                            "subspace {k}: complex entry in a real file"
                        )));
                    }
                    m[(r, c)] = z;
                }
            }
            let basis = match SubspaceBasis::from_orthonormal(m.clone()) {
                Ok(b) => b,
                Err(_) => orthonormalize_columns(&m, default_rank_tol(dim))?,
            };
            members.push(WeightedSubspace::new(basis, sub.weight)?);
        }
        Ok(FusionSystem::new(dim, members)?)
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }
}

pub fn load_system(text: &str) -> Result<FusionSystem, FileError> {
    FrameFileV1::parse(text)?.to_system()
}

pub fn save_system(sys: &FusionSystem) -> String {
    FrameFileV1::from_system(sys).to_json()
}

/// Pretty JSON whose floats carry 17 significant digits.
struct CanonicalFormatter {
    pretty: PrettyFormatter<'static>,
}

impl Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", format_f64(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(writer)
    }
}

/// 17 significant digits in scientific notation, e.g. `1.5000000000000000e0`.
pub fn format_f64(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.16e}")
    } else {
        // JSON has no non-finite numbers; callers keep values finite.
        "null".to_string()
    }
}

/// Serializes with stable field order, two-space indentation and 17-digit
/// floats. Output ends with a newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let formatter = CanonicalFormatter {
        pretty: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
    value
        .serialize(&mut ser)
        .expect("serializing in-memory values cannot fail");
    let mut text = String::from_utf8(buf).expect("serde_json emits UTF-8");
    text.push('\n');
    text
}
