//! JSON interchange files for algebras, operators and polynomial seeds.
//!
//! Rationals are always strings (`"p"` or `"p/q"`). Printing is canonical:
//! pairs in ascending order with `i < j` for skew tensors, coefficient indices
//! ascending, zero coefficients dropped and rationals in lowest terms, so a
//! printed file parses back to the same value and prints identically.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::algebra::tensor::{default_labels, StructureTensor};
use crate::constructions::grading::GradingSpec;
use crate::error::{Error, Result};
use crate::exactmath::matrix::{LinOp, RatMatrix};
use crate::exactmath::poly::{PolyTerm, SparsePoly};
use crate::exactmath::rat::{format_rat, parse_rat, Rat};

/// Largest dimension accepted from a file.
pub const MAX_FILE_DIM: usize = 1024;

fn parse_error(what: &str, detail: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {detail}"))
}

fn check_dim(what: &str, dim: usize) -> Result<()> {
    if dim > MAX_FILE_DIM {
        return Err(parse_error(what, format!("dim {dim} exceeds the limit {MAX_FILE_DIM}")));
    }
    Ok(())
}

fn from_json<T: DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error(what, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingMeta {
    pub weights: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u32>,
}

impl GradingMeta {
    pub fn from_spec(g: &GradingSpec) -> Self {
        GradingMeta {
            weights: g.weights().to_vec(),
            modulus: g.modulus(),
        }
    }

    pub fn to_spec(&self) -> Result<GradingSpec> {
        match self.modulus {
            Some(n) => GradingSpec::modular(self.weights.clone(), n),
            None => Ok(GradingSpec::integer(self.weights.clone())),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingMeta>,
}

fn default_true() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// Structure constants of a bilinear operation. With `skew` set (the
/// default) each entry `(i, j)` also fixes `(j, i)` by antisymmetry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    pub skew: bool,
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl AlgebraFile {
    /// Canonical file for `t`; skew form when `t` is skew-symmetric.
    pub fn from_tensor(t: &StructureTensor, metadata: Option<Metadata>) -> Self {
        let skew = crate::algebra::tensor::check_skew(t).holds;
        let brackets = t
            .entries()
            .filter(|((i, j), _)| !skew || i < j)
            .map(|((i, j), v)| BracketEntry {
                i: *i,
                j: *j,
                coeffs: v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, format_rat(c)))
                    .collect(),
            })
            .collect();
        let labels = (t.labels() != default_labels(t.dim()).as_slice()).then(|| t.labels().to_vec());
        AlgebraFile {
            dim: t.dim(),
            labels,
            skew,
            brackets,
            metadata,
        }
    }

    pub fn to_tensor(&self) -> Result<StructureTensor> {
        const WHAT: &str = "algebra file";
        let n = self.dim;
        check_dim(WHAT, n)?;
        let labels = match &self.labels {
            Some(l) if l.len() != n => {
                return Err(parse_error(WHAT, format!("{} labels for dim {n}", l.len())));
            }
            Some(l) => l.clone(),
            None => default_labels(n),
        };
        let mut t = StructureTensor::zero(n).with_labels(labels);
        let mut seen = std::collections::BTreeSet::new();
        for (e, entry) in self.brackets.iter().enumerate() {
            let ctx = |detail: String| parse_error(WHAT, format!("brackets[{e}] ({}, {}): {detail}", entry.i, entry.j));
            if entry.i >= n || entry.j >= n {
                return Err(ctx(format!("index out of range for dim {n}")));
            }
            let key = if self.skew {
                (entry.i.min(entry.j), entry.i.max(entry.j))
            } else {
                (entry.i, entry.j)
            };
            if !seen.insert(key) {
                return Err(ctx("pair given twice".into()));
            }
            let mut v = vec![Rat::zero(); n];
            for (k, c) in &entry.coeffs {
                if *k >= n {
                    return Err(ctx(format!("coefficient index {k} out of range")));
                }
                v[*k] = parse_rat(c).map_err(|err| ctx(format!("coeffs[{k}]: {err}")))?;
            }
            if self.skew {
                if entry.i == entry.j {
                    if v.iter().any(|c| !c.is_zero()) {
                        return Err(ctx("diagonal entry of a skew tensor must vanish".into()));
                    }
                    continue;
                }
                t.set_skew(entry.i, entry.j, v);
            } else {
                t.set(entry.i, entry.j, v);
            }
        }
        Ok(t)
    }

    pub fn grading(&self) -> Result<Option<GradingSpec>> {
        let Some(g) = self.metadata.as_ref().and_then(|m| m.grading.as_ref()) else {
            return Ok(None);
        };
        if g.weights.len() != self.dim {
            return Err(parse_error(
                "algebra file",
                format!("metadata.grading has {} weights for dim {}", g.weights.len(), self.dim),
            ));
        }
        g.to_spec().map(Some)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

/// Parses and validates an algebra file.
pub fn parse_algebra(text: &str) -> Result<(AlgebraFile, StructureTensor)> {
    let file: AlgebraFile = from_json("algebra file", text)?;
    let t = file.to_tensor()?;
    file.grading()?;
    Ok((file, t))
}

/// Canonical text of a tensor.
pub fn print_algebra(t: &StructureTensor, metadata: Option<Metadata>) -> String {
    AlgebraFile::from_tensor(t, metadata).to_json()
}

/// A dense square matrix of rationals; columns are images of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub dim: usize,
    pub matrix: Vec<Vec<String>>,
}

impl OperatorFile {
    pub fn from_op(d: &LinOp) -> Self {
        OperatorFile {
            dim: d.rows(),
            matrix: d.to_rows().iter().map(|r| r.iter().map(format_rat).collect()).collect(),
        }
    }

    pub fn to_op(&self) -> Result<LinOp> {
        const WHAT: &str = "operator file";
        let n = self.dim;
        check_dim(WHAT, n)?;
        if self.matrix.len() != n {
            return Err(parse_error(WHAT, format!("{} rows for dim {n}", self.matrix.len())));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(parse_error(
                    WHAT,
                    format!("matrix[{i}] has {} entries for dim {n}", row.len()),
                ));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(j, c)| parse_rat(c).map_err(|e| parse_error(WHAT, format!("matrix[{i}][{j}]: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(parsed);
        }
        if n == 0 {
            return Ok(RatMatrix::zeros(0, 0));
        }
        RatMatrix::from_rows(rows)
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

pub fn parse_operator(text: &str) -> Result<(OperatorFile, LinOp)> {
    let file: OperatorFile = from_json("operator file", text)?;
    let op = file.to_op()?;
    Ok((file, op))
}

pub fn print_operator(d: &LinOp) -> String {
    OperatorFile::from_op(d).to_json()
}

/// Polynomials in `nvars` variables, each a list of terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedFile {
    pub nvars: usize,
    pub seeds: Vec<Vec<PolyTerm>>,
}

impl SeedFile {
    pub fn from_polys(nvars: usize, polys: &[SparsePoly]) -> Self {
        SeedFile {
            nvars,
            seeds: polys.iter().map(SparsePoly::to_terms).collect(),
        }
    }

    pub fn to_polys(&self) -> Result<Vec<SparsePoly>> {
        check_dim("seed file", self.nvars)?;
        self.seeds
            .iter()
            .enumerate()
            .map(|(s, terms)| {
                SparsePoly::from_poly_terms(self.nvars, terms)
                    .map_err(|e| parse_error("seed file", format!("seeds[{s}]: {e}")))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

pub fn parse_seeds(text: &str) -> Result<(SeedFile, Vec<SparsePoly>)> {
    let file: SeedFile = from_json("seed file", text)?;
    let polys = file.to_polys()?;
    Ok((file, polys))
}

pub fn print_seeds(nvars: usize, polys: &[SparsePoly]) -> String {
    SeedFile::from_polys(nvars, polys).to_json()
}
