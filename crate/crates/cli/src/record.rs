//! Run descriptions and the line-delimited JSON report format.
//!
//! Each run is one JSON object on its own line:
//!
//! | field            | content                                              |
//! |------------------|------------------------------------------------------|
//! | `schema_version` | [`SCHEMA_VERSION`]                                   |
//! | `spec`           | [`MatrixSpec`]: how the input matrix was obtained    |
//! | `symmetric`      | whether the Hermitian driver ran                     |
//! | `config`         | the `RefineConfig` used                              |
//! | `report`         | the `RefineReport` of the run                        |
//! | `residuals`      | `verify_pair` output for the returned pair           |
//!
//! Non-finite residuals are written as the strings `"NaN"`, `"inf"`, `"-inf"`.

use std::io::{BufRead, Write};
use std::path::PathBuf;

use schur_core::refine::{PairResiduals, RefineConfig, RefineReport};
use schur_core::HpMatrix;
use serde::{Deserialize, Serialize};

use crate::gen::{gen_clustered, gen_randn_complex, gen_randn_real, gen_wilkinson, ClusterParams};
use crate::mm::read_matrix_market;
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixKind {
    RandnComplex,
    RandnReal,
    WilkinsonCompanion,
    Clustered,
    FromFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub kind: MatrixKind,
    /// Dimension; for files, the dimension read from the header.
    pub n: usize,
    pub seed: u64,
    /// Present iff `kind` is `Clustered`.
    pub cluster: Option<ClusterParams>,
    /// Present iff `kind` is `FromFile`.
    pub path: Option<PathBuf>,
}

impl MatrixSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |msg: String| Err(CliError::InvalidSpec(msg));
        if self.n == 0 && self.kind != MatrixKind::FromFile {
            return invalid("n must be at least 1".into());
        }
        if (self.kind == MatrixKind::FromFile) != self.path.is_some() {
            return invalid("a path is required exactly for matrices read from a file".into());
        }
        match (self.kind, self.cluster) {
            (MatrixKind::Clustered, None) => {
                invalid("clustered matrices need cluster parameters".into())
            }
            (MatrixKind::Clustered, Some(p)) => {
                if p.cluster_count == 0
                    || p.cluster_size == 0
                    || p.cluster_radius.is_nan()
                    || p.cluster_radius <= 0.0
                    || p.cond_x.is_nan()
                    || p.cond_x < 1.0
                {
                    return invalid(format!(
                        "cluster parameters must be positive (cond_x >= 1): {p:?}"
                    ));
                }
                if p.cluster_count * p.cluster_size > self.n {
                    return invalid(format!(
                        "{} clusters of size {} do not fit in n = {}",
                        p.cluster_count, p.cluster_size, self.n
                    ));
                }
                Ok(())
            }
            (_, Some(_)) => invalid("cluster parameters given for a non-clustered matrix".into()),
            (_, None) => Ok(()),
        }
    }

    /// Builds the matrix. For files, `n` is updated from the header.
    pub fn build(&mut self) -> Result<HpMatrix, CliError> {
        self.validate()?;
        let a = match self.kind {
            MatrixKind::RandnComplex => gen_randn_complex(self.n, self.seed),
            MatrixKind::RandnReal => gen_randn_real(self.n, self.seed),
            MatrixKind::WilkinsonCompanion => gen_wilkinson(self.n)?,
            MatrixKind::Clustered => {
                gen_clustered(self.n, self.cluster.expect("validated"), self.seed)?
            }
            MatrixKind::FromFile => {
                let (header, a) = read_matrix_market(self.path.as_deref().expect("validated"))?;
                if header.rows != header.cols {
                    return Err(CliError::InvalidSpec(format!(
                        "matrix is {}x{}, not square",
                        header.rows, header.cols
                    )));
                }
                self.n = header.rows;
                a
            }
        };
        Ok(a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub spec: MatrixSpec,
    pub symmetric: bool,
    pub config: RefineConfig,
    pub report: RefineReport,
    pub residuals: PairResiduals,
}

impl RunRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records contain only serializable values")
    }

    pub fn from_line(line: &str) -> Result<Self, CliError> {
        let rec: RunRecord =
            serde_json::from_str(line).map_err(|e| CliError::Record(e.to_string()))?;
        if rec.schema_version != SCHEMA_VERSION {
            return Err(CliError::Record(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                rec.schema_version
            )));
        }
        Ok(rec)
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{}", self.to_line())
    }
}

/// Reads every record of a line-delimited report, skipping blank lines.
pub fn read_records(r: impl BufRead) -> Result<Vec<RunRecord>, CliError> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line.map_err(|e| CliError::Io("report".into(), e))?;
        if !line.trim().is_empty() {
            out.push(RunRecord::from_line(&line)?);
        }
    }
    Ok(out)
}
