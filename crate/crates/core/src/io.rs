//! JSON and CSV formats.
//!
//! Complex numbers are `[re, im]` pairs. Dense matrices are
//! `{"dim": d, "entries": [...]}` in row-major order; frames are
//! `{"f": f, "mode": "...", "W": [...]}` in column-major order with an
//! optional `"structure": {"m": m, "n": n}`. Floats are written with 17
//! significant digits so that every value parses back to the same bits.

use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::fermionic::{Mode, SpanRepresentation};
use crate::gauge::GaugeTransformation;
use crate::space::SpaceTimeStructure;
use crate::{CMatrix, C64};

fn pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: &[f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(a: &CMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::dims(
                "square matrix",
                format!("{}x{}", a.nrows(), a.ncols()),
            ));
        }
        let dim = a.nrows();
        let entries = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| pair(&a[(i, j)]))
            .collect();
        Ok(Self { dim, entries })
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::Parse(format!(
                "matrix of dim {} needs {} entries, found {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            )));
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            complex(&self.entries[i * self.dim + j])
        }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub m: usize,
    pub n: usize,
}

impl StructureJson {
    pub fn from_structure(st: &SpaceTimeStructure) -> Self {
        Self {
            m: st.m(),
            n: st.n(),
        }
    }

    pub fn to_structure(self) -> Result<SpaceTimeStructure> {
        SpaceTimeStructure::new(self.m, self.n)
    }
}

/// Spanning frame, column-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameJson {
    pub f: usize,
    pub mode: Mode,
    #[serde(rename = "W")]
    pub w: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureJson>,
}

impl FrameJson {
    pub fn from_span(span: &SpanRepresentation, st: Option<&SpaceTimeStructure>) -> Self {
        Self {
            f: span.f,
            mode: span.mode,
            w: span.w.iter().map(pair).collect(),
            structure: st.map(StructureJson::from_structure),
        }
    }

    /// The frame as a `d x f` matrix; `d` is inferred from the entry count.
    pub fn to_span(&self) -> Result<SpanRepresentation> {
        if self.f == 0 || self.w.is_empty() || !self.w.len().is_multiple_of(self.f) {
            return Err(Error::Parse(format!(
                "frame with f = {} cannot hold {} entries",
                self.f,
                self.w.len()
            )));
        }
        let d = self.w.len() / self.f;
        let w = CMatrix::from_iterator(d, self.f, self.w.iter().map(complex));
        Ok(SpanRepresentation {
            w,
            mode: self.mode,
            f: self.f,
        })
    }

    /// Explicit `(m, n)` overrides win over the embedded structure, which in
    /// turn wins over the default `n = 1`, `m = d / 2`.
    pub fn resolve_structure(
        &self,
        m: Option<usize>,
        n: Option<usize>,
    ) -> Result<SpaceTimeStructure> {
        let d = self.w.len().checked_div(self.f).unwrap_or(0);
        let n = n.or(self.structure.map(|s| s.n)).unwrap_or(1);
        let m = match m.or(self.structure.map(|s| s.m)) {
            Some(m) => m,
            None => {
                if n == 0 || !d.is_multiple_of(2 * n) {
                    return Err(Error::dims(format!("multiple of {}", 2 * n), d));
                }
                d / (2 * n)
            }
        };
        let st = SpaceTimeStructure::new(m, n)?;
        if st.dim() != d {
            return Err(Error::dims(st.dim(), d));
        }
        Ok(st)
    }
}

/// Per-point gauge blocks.
pub fn gauge_to_json(u: &GaugeTransformation) -> Result<Vec<MatrixJson>> {
    u.blocks.iter().map(MatrixJson::from_matrix).collect()
}

pub fn gauge_from_json(blocks: &[MatrixJson]) -> Result<GaugeTransformation> {
    Ok(GaugeTransformation {
        blocks: blocks
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<_>>()?,
    })
}

/// Pretty JSON with floats written as `{:.16e}`.
struct ExactFormatter {
    pretty: PrettyFormatter<'static>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.pretty.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl Formatter for ExactFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write!(writer, "{value:.8e}")
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

/// Serializes with 17 significant digits per float.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let fmt = ExactFormatter {
        pretty: PrettyFormatter::with_indent(b"  "),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    value.serialize(&mut ser)?;
    String::from_utf8(out).map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json_str(&std::fs::read_to_string(path)?)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut s = to_json_string(value)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

/// One row of a scan table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub m: usize,
    pub n: usize,
    pub f: usize,
    pub mu: f64,
    pub total: f64,
    pub constraint_value: f64,
}

pub const SCAN_COLUMNS: [&str; 6] = ["m", "n", "f", "mu", "total", "constraint_value"];

pub fn write_scan_csv<W: Write>(writer: W, rows: &[ScanRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SCAN_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.m.to_string(),
            r.n.to_string(),
            r.f.to_string(),
            format!("{:.16e}", r.mu),
            format!("{:.16e}", r.total),
            format!("{:.16e}", r.constraint_value),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scan_csv<R: io::Read>(reader: R) -> Result<Vec<ScanRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.iter().ne(SCAN_COLUMNS) {
        return Err(Error::Parse(format!(
            "expected columns {}, found {}",
            SCAN_COLUMNS.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}
