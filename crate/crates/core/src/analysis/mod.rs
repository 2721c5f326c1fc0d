//! Structural invariants of Lie algebras: centre, centralisers, index and
//! the lower central series.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::derived::derived;
use crate::algebra::tensor::{require_lie, StructureTensor};
use crate::constructions::classical::Family;
use crate::constructions::nilpotent::{nilpotent_square, sl2_complete};
use crate::error::{Error, Result};
use crate::exactmath::matrix::{bareiss_rank, kernel_basis, rank_exact, rref, span_rank, RatMatrix};
use crate::exactmath::poly::SparsePoly;
use crate::exactmath::rat::{int, unit_vector, Rat, RatVec};

/// Environment variable holding the seed for probabilistic rank sampling.
pub const SEED_ENV: &str = "NEARDERIV_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed_1dea;
pub const DEFAULT_SAMPLES: usize = 5;
pub const DEFAULT_BOUND: i64 = 1_000_000;
pub const DEFAULT_EXACT_LIMIT: usize = 12;

/// Seed from [`SEED_ENV`] when set and parseable, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Centre of a Lie algebra as a basis of its kernel.
pub fn lie_centre(t: &StructureTensor) -> Result<Vec<RatVec>> {
    require_lie(t)?;
    let n = t.dim();
    let mut rows = Vec::with_capacity(n * n);
    for j in 0..n {
        rows.extend(t.right_mult(&unit_vector(n, j))?.to_rows());
    }
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    Ok(kernel_basis(&RatMatrix::from_rows(rows)?))
}

/// Kernel of `ad e`.
pub fn centraliser(t: &StructureTensor, e: &[Rat]) -> Result<Vec<RatVec>> {
    Ok(kernel_basis(&t.left_mult(e)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexMethod {
    Probabilistic,
    ExactSymbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexMode {
    /// Maximal rank of the structure matrix over `samples` random integer
    /// covectors with coordinates in `[-bound, bound]`.
    Probabilistic { samples: usize, bound: i64, seed: u64 },
    /// Bareiss elimination over the polynomial ring, refused above `max_dim`.
    Exact { max_dim: usize },
}

impl IndexMode {
    pub fn probabilistic(seed: u64) -> Self {
        IndexMode::Probabilistic {
            samples: DEFAULT_SAMPLES,
            bound: DEFAULT_BOUND,
            seed,
        }
    }

    pub fn exact() -> Self {
        IndexMode::Exact {
            max_dim: DEFAULT_EXACT_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub dim: usize,
    pub rank: usize,
    pub index: usize,
    pub method: IndexMethod,
    pub samples: usize,
    pub note: String,
}

/// The matrix `M(ξ)_ij = Σ_k c_ij^k ξ_k` of linear forms.
pub fn structure_matrix(t: &StructureTensor) -> Vec<Vec<SparsePoly>> {
    let n = t.dim();
    (0..n)
        .map(|i| (0..n).map(|j| SparsePoly::linear(&t.product(i, j))).collect())
        .collect()
}

fn structure_matrix_at(t: &StructureTensor, xi: &[Rat]) -> RatMatrix {
    let n = t.dim();
    RatMatrix::from_fn(n, n, |i, j| {
        t.get(i, j)
            .map(|v| v.iter().zip(xi).map(|(c, x)| c * x).sum())
            .unwrap_or_else(Rat::zero)
    })
}

/// `ind q = dim q − rank M(ξ)` for generic `ξ`.
pub fn lie_index(t: &StructureTensor, mode: &IndexMode) -> Result<IndexReport> {
    require_lie(t)?;
    let n = t.dim();
    let (rank, method, samples, note) = match *mode {
        IndexMode::Probabilistic { samples, bound, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = 0;
            for _ in 0..samples.max(1) {
                let xi: RatVec = (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect();
                best = best.max(rank_exact(&structure_matrix_at(t, &xi)));
                if best == n {
                    break;
                }
            }
            let note = format!(
                "maximal rank over {} random covectors in [-{bound}, {bound}]^{n} (seed {seed}); \
                 the index is an upper bound that is exact with high probability",
                samples.max(1)
            );
            (best, IndexMethod::Probabilistic, samples.max(1), note)
        }
        IndexMode::Exact { max_dim } => {
            if n > max_dim {
                return Err(Error::DimensionTooLarge { dim: n, limit: max_dim });
            }
            let rows: Vec<Vec<SparsePoly>> = structure_matrix(t)
                .into_iter()
                .filter(|r| r.iter().any(|p| !p.is_zero()))
                .collect();
            let rank = bareiss_rank(rows, n);
            (
                rank,
                IndexMethod::ExactSymbolic,
                0,
                "generic rank by fraction-free elimination".to_string(),
            )
        }
    };
    Ok(IndexReport {
        dim: n,
        rank,
        index: n - rank,
        method,
        samples,
        note,
    })
}

/// Dimensions of `g ⊇ [g, g] ⊇ [g, [g, g]] ⊇ …`, stopping once the
/// dimension repeats or reaches zero.
pub fn lower_central_series(t: &StructureTensor) -> Vec<usize> {
    let n = t.dim();
    let mut current: Vec<RatVec> = (0..n).map(|i| unit_vector(n, i)).collect();
    let mut dims = vec![n];
    while !current.is_empty() {
        let mut images = Vec::new();
        for i in 0..n {
            let ad = t
                .left_mult(&unit_vector(n, i))
                .expect("basis vector has the right length");
            for c in &current {
                images.push(ad.apply(c).expect("vector has the right length"));
            }
        }
        let m = RatMatrix::from_rows(images).expect("rows of equal length");
        let (r, pivots) = rref(&m);
        let next: Vec<RatVec> = (0..pivots.len()).map(|k| r.row(k).to_vec()).collect();
        let repeated = next.len() == current.len();
        dims.push(next.len());
        if repeated {
            break;
        }
        current = next;
    }
    dims
}

/// Length of the lower central series when it reaches zero.
pub fn nilpotency_class(t: &StructureTensor) -> Option<usize> {
    let series = lower_central_series(t);
    (*series.last()? == 0).then(|| series.len() - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexTheoremReport {
    pub family: String,
    pub n: usize,
    pub partition: Vec<usize>,
    pub dim: usize,
    pub centraliser_dim: usize,
    pub centre_dim: usize,
    pub index_probabilistic: IndexReport,
    pub index_exact: Option<IndexReport>,
    pub lower_central_series: Vec<usize>,
    pub nilpotency_class: Option<usize>,
    /// `g^e ⊆ z(g_D)`.
    pub centraliser_in_centre: bool,
    pub holds: bool,
}

/// Builds `g`, the nilpotent `e` of the given partition and `g_D` for
/// `D = (ad e)²`, then compares `ind g_D`, `dim g^e` and `dim z(g_D)`.
/// Exact rank is computed when `dim g ≤ exact_limit`.
pub fn verify_index_theorem(
    family: Family,
    n: usize,
    partition: &[usize],
    seed: u64,
    exact_limit: usize,
) -> Result<IndexTheoremReport> {
    let (g, triple) = sl2_complete(family, n, partition)?;
    let square = nilpotent_square(&g.tensor, &triple.e)?;
    let gd = derived(&g.tensor, &square.operator)?;
    let cent = centraliser(&g.tensor, &triple.e)?;
    let centre = lie_centre(&gd)?;
    let prob = lie_index(&gd, &IndexMode::probabilistic(seed))?;
    let exact = if gd.dim() <= exact_limit {
        Some(lie_index(&gd, &IndexMode::Exact { max_dim: exact_limit })?)
    } else {
        None
    };
    let series = lower_central_series(&gd);
    let class = nilpotency_class(&gd);
    let mut joined = centre.clone();
    joined.extend(cent.iter().cloned());
    let centraliser_in_centre = span_rank(&joined) == centre.len();
    let holds = prob.index == cent.len()
        && cent.len() == centre.len()
        && exact.as_ref().is_none_or(|e| e.index == prob.index)
        && class.is_some_and(|c| c <= 2)
        && centraliser_in_centre;
    Ok(IndexTheoremReport {
        family: family.to_string(),
        n,
        partition: partition.to_vec(),
        dim: gd.dim(),
        centraliser_dim: cent.len(),
        centre_dim: centre.len(),
        index_probabilistic: prob,
        index_exact: exact,
        lower_central_series: series,
        nilpotency_class: class,
        centraliser_in_centre,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tensor::tests_support::sl2;
    use crate::constructions::classical::build_classical;

    fn heisenberg() -> StructureTensor {
        let (g, tr) = sl2_complete(Family::Sl, 2, &[2]).unwrap();
        nilpotent_square(&g.tensor, &tr.e).unwrap().derived
    }

    #[test]
    fn centres() {
        assert!(lie_centre(&sl2()).unwrap().is_empty());
        assert_eq!(lie_centre(&StructureTensor::zero(4)).unwrap().len(), 4);
        assert_eq!(lie_centre(&heisenberg()).unwrap(), vec![unit_vector(3, 0)]);
        let mut bad = StructureTensor::zero(2);
        bad.set(0, 1, vec![int(1), int(0)]);
        assert!(matches!(lie_centre(&bad), Err(Error::NotLie(_))));
    }

    #[test]
    fn centralisers() {
        assert_eq!(centraliser(&sl2(), &vec![int(0); 3]).unwrap().len(), 3);
        assert_eq!(
            centraliser(&sl2(), &unit_vector(3, 0)).unwrap(),
            vec![unit_vector(3, 0)]
        );
        let (g, tr) = sl2_complete(Family::Sl, 3, &[2, 1]).unwrap();
        assert_eq!(centraliser(&g.tensor, &tr.e).unwrap().len(), 4);
    }

    #[test]
    fn index_values() {
        for mode in [IndexMode::probabilistic(7), IndexMode::exact()] {
            assert_eq!(lie_index(&sl2(), &mode).unwrap().index, 1);
            assert_eq!(lie_index(&StructureTensor::zero(5), &mode).unwrap().index, 5);
            assert_eq!(lie_index(&heisenberg(), &mode).unwrap().index, 1);
        }
        let sl3 = build_classical(Family::Sl, 3).unwrap().tensor;
        assert_eq!(lie_index(&sl3, &IndexMode::exact()).unwrap().index, 2);
        let sl4 = build_classical(Family::Sl, 4).unwrap().tensor;
        assert_eq!(
            lie_index(&sl4, &IndexMode::exact()).unwrap_err(),
            Error::DimensionTooLarge { dim: 15, limit: 12 }
        );
    }

    #[test]
    fn series() {
        assert_eq!(lower_central_series(&StructureTensor::zero(3)), vec![3, 0]);
        assert_eq!(lower_central_series(&heisenberg()), vec![3, 1, 0]);
        assert_eq!(lower_central_series(&sl2()), vec![3, 3]);
        assert_eq!(nilpotency_class(&heisenberg()), Some(2));
        assert_eq!(nilpotency_class(&sl2()), None);
    }

    #[test]
    fn index_theorem_small() {
        let r = verify_index_theorem(Family::Sl, 2, &[2], 1, 12).unwrap();
        assert!(r.holds);
        assert_eq!(
            (r.centraliser_dim, r.centre_dim, r.index_probabilistic.index),
            (1, 1, 1)
        );
        assert_eq!(r.nilpotency_class, Some(2));
        let r = verify_index_theorem(Family::Sl, 3, &[2, 1], 1, 12).unwrap();
        assert!(r.holds);
        assert_eq!(r.centraliser_dim, 4);
        assert!(verify_index_theorem(Family::Sl, 3, &[3], 1, 12).is_err());
    }
}
