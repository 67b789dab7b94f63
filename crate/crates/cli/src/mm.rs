//! Matrix Market exchange format for dense complex matrices.
//!
//! Reading accepts `coordinate` and `array` storage with `real`, `integer`
//! or `complex` fields and `general` or `symmetric` symmetry. Values are
//! parsed to the nearest double-double, so files written from double-double
//! matrices read back bit-identically. Writing always produces `array`
//! storage, `complex` if any imaginary part is non-zero and `real` otherwise.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use schur_core::hp::{format_dd, parse_dd, DD_DECIMAL_DIGITS};
use schur_core::{DDComplex, DDReal, HpMatrix, LpMatrix};

use crate::CliError;

/// Significant digits written for binary64 values; enough to round-trip.
pub const LP_DECIMAL_DIGITS: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Storage {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Symmetric,
}

/// Contents of the banner and size line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub storage: Storage,
    pub field: Field,
    pub symmetry: Symmetry,
    pub rows: usize,
    pub cols: usize,
    /// Stored entries announced by the size line (`rows * cols` for full
    /// array storage, the lower triangle for symmetric arrays).
    pub entries: usize,
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::MatrixMarket(format!("line {line}: {}", msg.into()))
}

fn parse_banner(line: &str) -> Result<(Storage, Field, Symmetry), CliError> {
    let words: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if words.len() != 5 || words[0] != "%%matrixmarket" || words[1] != "matrix" {
        return Err(parse_err(
            1,
            format!("expected '%%MatrixMarket matrix ...', got '{line}'"),
        ));
    }
    let storage = match words[2].as_str() {
        "coordinate" => Storage::Coordinate,
        "array" => Storage::Array,
        other => return Err(parse_err(1, format!("unsupported storage '{other}'"))),
    };
    let field = match words[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(parse_err(1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match words[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };
    Ok((storage, field, symmetry))
}

fn parse_value(tokens: &[&str], field: Field, line: usize) -> Result<DDComplex, CliError> {
    let want = if field == Field::Complex { 2 } else { 1 };
    if tokens.len() != want {
        return Err(parse_err(
            line,
            format!("expected {want} value(s), got {}", tokens.len()),
        ));
    }
    let num = |s: &str| -> Result<DDReal, CliError> {
        if field == Field::Integer {
            let v: i128 = s
                .parse()
                .map_err(|_| parse_err(line, format!("bad integer '{s}'")))?;
            return Ok(crate::gen::dd_from_i128(v));
        }
        parse_dd(s).map_err(|e| parse_err(line, format!("bad number '{s}': {e}")))
    };
    let re = num(tokens[0])?;
    let im = if field == Field::Complex {
        num(tokens[1])?
    } else {
        DDReal::ZERO
    };
    Ok(DDComplex::new(re, im))
}

fn parse_usize(s: &str, line: usize) -> Result<usize, CliError> {
    s.parse()
        .map_err(|_| parse_err(line, format!("bad count '{s}'")))
}

/// Parses Matrix Market text.
pub fn parse_matrix_market(text: &str) -> Result<(Header, HpMatrix), CliError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
    let (_, banner) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let (storage, field, symmetry) = parse_banner(banner)?;
    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });

    let (size_line, size) = data
        .next()
        .ok_or_else(|| parse_err(2, "missing size line"))?;
    let size: Vec<&str> = size.split_whitespace().collect();
    let (rows, cols, entries) = match (storage, size.as_slice()) {
        (Storage::Coordinate, [r, c, nnz]) => (
            parse_usize(r, size_line)?,
            parse_usize(c, size_line)?,
            parse_usize(nnz, size_line)?,
        ),
        (Storage::Array, [r, c]) => {
            let (r, c) = (parse_usize(r, size_line)?, parse_usize(c, size_line)?);
            let stored = match symmetry {
                Symmetry::General => r * c,
                Symmetry::Symmetric => r * (r + 1) / 2,
            };
            (r, c, stored)
        }
        _ => return Err(parse_err(size_line, "malformed size line")),
    };
    if symmetry == Symmetry::Symmetric && rows != cols {
        return Err(parse_err(
            size_line,
            "symmetric storage needs a square matrix",
        ));
    }
    let header = Header {
        storage,
        field,
        symmetry,
        rows,
        cols,
        entries,
    };

    let mut m = HpMatrix::zeros(rows, cols);
    let mut count = 0;
    match storage {
        Storage::Coordinate => {
            let mut seen = HashSet::with_capacity(entries);
            for (line, text) in data.by_ref().take(entries) {
                let tokens: Vec<&str> = text.split_whitespace().collect();
                if tokens.len() < 2 {
                    return Err(parse_err(line, "expected row and column indices"));
                }
                let (i, j) = (parse_usize(tokens[0], line)?, parse_usize(tokens[1], line)?);
                if i == 0 || j == 0 || i > rows || j > cols {
                    return Err(parse_err(
                        line,
                        format!("index ({i}, {j}) outside {rows}x{cols}"),
                    ));
                }
                if symmetry == Symmetry::Symmetric && i < j {
                    return Err(parse_err(
                        line,
                        format!("entry ({i}, {j}) above the diagonal of symmetric storage"),
                    ));
                }
                if !seen.insert((i, j)) {
                    return Err(parse_err(line, format!("duplicate entry ({i}, {j})")));
                }
                let v = parse_value(&tokens[2..], field, line)?;
                m[(i - 1, j - 1)] = v;
                if symmetry == Symmetry::Symmetric {
                    m[(j - 1, i - 1)] = v;
                }
                count += 1;
            }
        }
        Storage::Array => {
            let mut slots = (0..cols).flat_map(|j| {
                let start = if symmetry == Symmetry::Symmetric {
                    j
                } else {
                    0
                };
                (start..rows).map(move |i| (i, j))
            });
            for (line, text) in data.by_ref().take(entries) {
                let tokens: Vec<&str> = text.split_whitespace().collect();
                let v = parse_value(&tokens, field, line)?;
                let (i, j) = slots.next().expect("entries counted from the same layout");
                m[(i, j)] = v;
                if symmetry == Symmetry::Symmetric {
                    m[(j, i)] = v;
                }
                count += 1;
            }
        }
    }
    if count != entries {
        return Err(CliError::MatrixMarket(format!(
            "header announces {entries} entries but the file has {count}"
        )));
    }
    if let Some((line, _)) = data.next() {
        return Err(parse_err(line, "data after the announced entries"));
    }
    Ok((header, m))
}

pub fn read_matrix_market(path: &Path) -> Result<(Header, HpMatrix), CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    parse_matrix_market(&text)
}

fn render(m: &HpMatrix, digits: usize) -> String {
    let complex = m.data().iter().any(|z| !z.im.is_zero());
    let field = if complex { "complex" } else { "real" };
    let mut out = format!(
        "%%MatrixMarket matrix array {field} general\n{} {}\n",
        m.rows(),
        m.cols()
    );
    for z in m.data() {
        if complex {
            writeln!(
                out,
                "{} {}",
                format_dd(z.re, digits),
                format_dd(z.im, digits)
            )
            .unwrap();
        } else {
            writeln!(out, "{}", format_dd(z.re, digits)).unwrap();
        }
    }
    out
}

/// Array-format text with round-trippable double-double decimals.
pub fn to_matrix_market(m: &HpMatrix) -> String {
    render(m, DD_DECIMAL_DIGITS)
}

/// Array-format text with 17-digit decimals.
pub fn to_matrix_market_lp(m: &LpMatrix) -> String {
    render(&m.to_hp(), LP_DECIMAL_DIGITS)
}

pub fn write_matrix_market(path: &Path, m: &HpMatrix) -> Result<(), CliError> {
    std::fs::write(path, to_matrix_market(m))
        .map_err(|e| CliError::Io(path.display().to_string(), e))
}

pub fn write_matrix_market_lp(path: &Path, m: &LpMatrix) -> Result<(), CliError> {
    std::fs::write(path, to_matrix_market_lp(m))
        .map_err(|e| CliError::Io(path.display().to_string(), e))
}
