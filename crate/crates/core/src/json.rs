//! Versioned JSON documents (format tag `qml-v1`).
//!
//! Every document is self-describing. The mandatory `format` tag names the
//! schema version, rank tables carry their subspace ordering tag, and any
//! matrix travels together with the field it lives over, modulus included.
//! Field elements render as base-p digit strings, lowest degree first, so
//! `"0100"` over F_16 is the class of x. Serialization is byte-deterministic:
//! field order is fixed by the struct declarations, no maps are involved, and
//! parse -> serialize reproduces this library's own output bytes exactly.

use serde::{Deserialize, Serialize};

use crate::bounds::BoundRow;
use crate::cdc::ConstantDimensionCode;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::{LatticeIndex, Subspace};
use crate::matrix::Matrix;
use crate::qmatroid::{AxiomReport, RankTable, Structure};
use crate::repr::GeneratorMatrix;

/// Schema version written into, and demanded from, every document.
pub const FORMAT_TAG: &str = "qml-v1";

/// Subspace ordering tag for rank tables: dimension ascending, then
/// lexicographic on the canonical RREF basis.
pub const ORDERING_TAG: &str = "canonical-v1";

fn check_format(tag: &str) -> Result<()> {
    if tag != FORMAT_TAG {
        return Err(Error::InvalidInput(format!(
            "unsupported format tag {tag:?}, expected {FORMAT_TAG:?}"
        )));
    }
    Ok(())
}

/// Renders a field element as its base-p digit string, lowest degree first.
/// Digits must be single characters, so the characteristic is capped at 10.
pub fn element_to_string(field: &FieldSpec, code: u64) -> Result<String> {
    if field.p() > 10 {
        return Err(Error::InvalidInput(format!(
            "digit strings need characteristic <= 10, got {}",
            field.p()
        )));
    }
    let elem = field.element(code)?;
    let digits = field.coefficients(elem);
    Ok(digits.iter().map(|d| char::from(b'0' + *d as u8)).collect())
}

/// Parses a base-p digit string back into an element code.
pub fn element_from_str(field: &FieldSpec, s: &str) -> Result<u64> {
    if s.len() != field.e() as usize {
        return Err(Error::InvalidInput(format!(
            "element {s:?} needs exactly {} digits",
            field.e()
        )));
    }
    let mut coeffs = Vec::with_capacity(s.len());
    for c in s.chars() {
        let d = c.to_digit(10).map(u64::from).filter(|&d| d < field.p());
        match d {
            Some(d) => coeffs.push(d),
            None => {
                return Err(Error::InvalidInput(format!(
                    "bad digit {c:?} in element {s:?} over a field of characteristic {}",
                    field.p()
                )))
            }
        }
    }
    Ok(field.from_coefficients(&coeffs)?.code())
}

/// Matrix rows as arrays of element strings.
pub fn matrix_rows(m: &Matrix) -> Result<Vec<Vec<String>>> {
    let mut rows = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            row.push(element_to_string(m.field(), m.get(i, j).code())?);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Rebuilds a matrix from row arrays. Every row must have `cols` entries;
/// an empty row list yields the 0 x cols matrix.
pub fn matrix_from_rows(field: &FieldSpec, cols: usize, rows: &[Vec<String>]) -> Result<Matrix> {
    let mut codes = Vec::with_capacity(rows.len() * cols);
    for row in rows {
        if row.len() != cols {
            return Err(Error::InvalidInput(format!(
                "row has {} entries, expected {cols}",
                row.len()
            )));
        }
        for s in row {
            codes.push(element_from_str(field, s)?);
        }
    }
    Matrix::from_codes(field.clone(), rows.len(), cols, &codes)
}

/// Field descriptor: `{"p":2,"e":4,"modulus":[1,1,0,0,1]}`, modulus
/// coefficients lowest degree first, empty for prime fields.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FieldJson {
    pub p: u64,
    pub e: u32,
    pub modulus: Vec<u64>,
}

impl FieldJson {
    pub fn of(field: &FieldSpec) -> FieldJson {
        FieldJson { p: field.p(), e: field.e(), modulus: field.modulus().to_vec() }
    }

    /// Reconstructs the field. The modulus must be the canonical one this
    /// library would pick itself; other moduli are rejected rather than
    /// silently reinterpreted.
    pub fn to_field(&self) -> Result<FieldSpec> {
        let field = FieldSpec::new(self.p, self.e)?;
        if field.modulus() != self.modulus.as_slice() {
            return Err(Error::InvalidInput(format!(
                "modulus {:?} is not the canonical modulus {:?} for p={}, e={}",
                self.modulus,
                field.modulus(),
                self.p,
                self.e
            )));
        }
        Ok(field)
    }
}

/// A rank table: `{format, q, n, ordering, ranks}` with one rank per
/// subspace id under the canonical ordering.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct QMatroidJson {
    pub format: String,
    pub q: u64,
    pub n: u64,
    pub ordering: String,
    pub ranks: Vec<u32>,
}

impl QMatroidJson {
    pub fn of(t: &RankTable) -> QMatroidJson {
        QMatroidJson {
            format: FORMAT_TAG.into(),
            q: t.q(),
            n: t.ambient_dim() as u64,
            ordering: ORDERING_TAG.into(),
            ranks: t.ranks().to_vec(),
        }
    }

    pub fn to_table(&self) -> Result<RankTable> {
        check_format(&self.format)?;
        if self.ordering != ORDERING_TAG {
            return Err(Error::InvalidInput(format!(
                "unsupported ordering {:?}, expected {ORDERING_TAG:?}",
                self.ordering
            )));
        }
        let field = FieldSpec::from_order(self.q)?;
        let index = LatticeIndex::build(&field, self.n as usize)?;
        RankTable::from_raw_ranks(index, self.ranks.clone())
    }
}

/// A generator matrix with its field: `{format, field, n, rows}`. The
/// explicit column count keeps the degenerate 0-row generator well defined.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GeneratorJson {
    pub format: String,
    pub field: FieldJson,
    pub n: u64,
    pub rows: Vec<Vec<String>>,
}

impl GeneratorJson {
    pub fn of(g: &GeneratorMatrix) -> Result<GeneratorJson> {
        Ok(GeneratorJson {
            format: FORMAT_TAG.into(),
            field: FieldJson::of(g.field()),
            n: g.n() as u64,
            rows: matrix_rows(g.matrix())?,
        })
    }

    pub fn to_generator(&self) -> Result<GeneratorMatrix> {
        check_format(&self.format)?;
        let field = self.field.to_field()?;
        GeneratorMatrix::new(matrix_from_rows(&field, self.n as usize, &self.rows)?)
    }
}

/// Equal-dimensional subspace collections (constant dimension codes, paving
/// members, Grassmannian listings): `{format, q, n, k, codewords}` where each
/// codeword is its canonical basis matrix as rows of element strings.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CollectionJson {
    pub format: String,
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub codewords: Vec<Vec<Vec<String>>>,
}

impl CollectionJson {
    pub fn of(c: &ConstantDimensionCode) -> Result<CollectionJson> {
        CollectionJson::of_subspaces(c.field(), c.n(), c.k(), c.codewords())
    }

    pub fn of_subspaces(
        field: &FieldSpec,
        n: usize,
        k: usize,
        members: &[Subspace],
    ) -> Result<CollectionJson> {
        let mut codewords = Vec::with_capacity(members.len());
        for m in members {
            codewords.push(matrix_rows(m.basis())?);
        }
        Ok(CollectionJson {
            format: FORMAT_TAG.into(),
            q: field.order(),
            n: n as u64,
            k: k as u64,
            codewords,
        })
    }

    pub fn to_subspaces(&self) -> Result<(FieldSpec, Vec<Subspace>)> {
        check_format(&self.format)?;
        let field = FieldSpec::from_order(self.q)?;
        let mut members = Vec::with_capacity(self.codewords.len());
        for rows in &self.codewords {
            let m = matrix_from_rows(&field, self.n as usize, rows)?;
            let s = Subspace::from_rows(&m);
            if s.dim() != self.k as usize {
                return Err(Error::InvalidInput(format!(
                    "codeword spans {} dimensions, expected {}",
                    s.dim(),
                    self.k
                )));
            }
            members.push(s);
        }
        Ok((field, members))
    }

    pub fn to_cdc(&self) -> Result<ConstantDimensionCode> {
        let (field, members) = self.to_subspaces()?;
        ConstantDimensionCode::new(field, self.n as usize, self.k as usize, members)
    }
}

/// Axiom check verdicts: `{"format":"qml-v1","verdict":"pass"}` or a fail
/// with the offending axiom and the lexicographically first witness pair.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ReportJson {
    pub format: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axiom: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ids: Option<(usize, usize)>,
}

impl ReportJson {
    pub fn of(report: &AxiomReport) -> ReportJson {
        ReportJson {
            format: FORMAT_TAG.into(),
            verdict: if report.pass { "pass".into() } else { "fail".into() },
            axiom: report.violation.as_ref().map(|v| v.axiom),
            ids: report.violation.as_ref().map(|v| v.ids),
        }
    }
}

/// Representability search outcomes: `{found, m?, generator?}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SearchJson {
    pub format: String,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorJson>,
}

impl SearchJson {
    pub fn of(witness: Option<&GeneratorMatrix>) -> Result<SearchJson> {
        match witness {
            None => Ok(SearchJson { format: FORMAT_TAG.into(), found: false, m: None, generator: None }),
            Some(g) => Ok(SearchJson {
                format: FORMAT_TAG.into(),
                found: true,
                m: Some(g.field().e()),
                generator: Some(GeneratorJson::of(g)?),
            }),
        }
    }
}

/// Zero-pattern sweep reports: `{q, n, k, m, count, bound, patterns?}`.
/// The bound is a decimal string since it can dwarf any machine integer.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SweepJson {
    pub format: String,
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub m: u32,
    pub count: u64,
    pub bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub patterns: Option<Vec<String>>,
}

/// A single attained zero pattern: `{q, n, k, pattern}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PatternJson {
    pub format: String,
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub pattern: String,
}

/// Derived structure of a q-matroid. Bases, circuits, and loops are listed
/// by canonical subspace id; independents only by count, since they are the
/// bulk of the lattice.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct StructureJson {
    pub format: String,
    pub q: u64,
    pub n: u64,
    pub rank: u32,
    pub independent_count: u64,
    pub bases: Vec<usize>,
    pub circuits: Vec<usize>,
    pub loops: Vec<usize>,
    pub is_paving: bool,
}

impl StructureJson {
    pub fn of(t: &RankTable, s: &Structure) -> StructureJson {
        StructureJson {
            format: FORMAT_TAG.into(),
            q: t.q(),
            n: t.ambient_dim() as u64,
            rank: s.rank,
            independent_count: s.independents.len() as u64,
            bases: s.bases.clone(),
            circuits: s.circuits.clone(),
            loops: s.loops.clone(),
            is_paving: s.is_paving,
        }
    }
}

/// One row of the asymptotic bounds table. The lower exponent is exact; the
/// upper log and the gap are fixed-point decimals with 12 digits.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct BoundRowJson {
    pub n: u64,
    #[serde(rename = "log2_lower_N")]
    pub log2_lower_n: String,
    #[serde(rename = "log2_upper_R")]
    pub log2_upper_r: String,
    pub gap: String,
}

impl BoundRowJson {
    pub fn of(row: &BoundRow) -> BoundRowJson {
        BoundRowJson {
            n: row.n,
            log2_lower_n: row.log2_lower_n.to_string(),
            log2_upper_r: row.log2_upper_r.to_decimal(12),
            gap: row.gap.to_decimal(12),
        }
    }
}

/// The full bounds table: `{format, q, rows}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct BoundsTableJson {
    pub format: String,
    pub q: u64,
    pub rows: Vec<BoundRowJson>,
}

impl BoundsTableJson {
    pub fn of(q: u64, rows: &[BoundRow]) -> BoundsTableJson {
        BoundsTableJson {
            format: FORMAT_TAG.into(),
            q,
            rows: rows.iter().map(BoundRowJson::of).collect(),
        }
    }
}

/// Plain census output for enumeration verbs: `{q, n, count, tables?}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CensusJson {
    pub format: String,
    pub q: u64,
    pub n: u64,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<Vec<Vec<u32>>>,
}

/// Subspace distance report for a constant dimension code.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DistanceJson {
    pub format: String,
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub size: u64,
    pub distance: u64,
}
