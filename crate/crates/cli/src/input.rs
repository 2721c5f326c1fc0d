use std::path::Path;

use anyhow::{bail, Context};
use nearderiv::algebra::StructureTensor;
use nearderiv::exactmath::{parse_rat, LinOp, Rat, SparsePoly};
use nearderiv::format::{parse_algebra, parse_operator, parse_seeds, AlgebraFile};
use nearderiv::Error;

/// Marks an error as an input problem regardless of its source.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// 1 for library errors that report a failed mathematical property, 2 for
/// everything else (unreadable files, malformed or mismatched input).
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<InputError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::NotNearDerivation
                | Error::IrrationalEigenvalues { .. }
                | Error::NotDerivation
                | Error::NotNijenhuis(..)
                | Error::PreconditionViolated { .. }
                | Error::NotLie(_)
                | Error::NotCentral { .. }
                | Error::NotNilpotent
                | Error::IdentityViolated(_) => 1,
                _ => 2,
            };
        }
    }
    2
}

fn read(path: &Path, what: &str) -> anyhow::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {what} file {}: {e}", path.display())).into())
}

pub fn load_algebra(path: &Path) -> anyhow::Result<(AlgebraFile, StructureTensor)> {
    let text = read(path, "algebra")?;
    parse_algebra(&text).with_context(|| format!("in {}", path.display()))
}

pub fn load_operator(path: &Path, dim: usize) -> anyhow::Result<LinOp> {
    let text = read(path, "operator")?;
    let (_, d) = parse_operator(&text).with_context(|| format!("in {}", path.display()))?;
    if d.rows() != dim {
        bail!(InputError(format!(
            "operator in {} has dimension {}, the algebra has {dim}",
            path.display(),
            d.rows()
        )));
    }
    Ok(d)
}

pub fn load_seeds(path: &Path, nvars: usize) -> anyhow::Result<Vec<SparsePoly>> {
    let text = read(path, "seed")?;
    let (file, seeds) = parse_seeds(&text).with_context(|| format!("in {}", path.display()))?;
    if file.nvars != nvars {
        bail!(InputError(format!(
            "seeds in {} use {} variables, the algebra has dimension {nvars}",
            path.display(),
            file.nvars
        )));
    }
    Ok(seeds)
}

pub fn parse_rats(items: &[String], what: &str) -> anyhow::Result<Vec<Rat>> {
    items
        .iter()
        .map(|s| parse_rat(s.trim()).map_err(|e| InputError(format!("{what}: {e}")).into()))
        .collect()
}
