//! The chain complex `C^k = A^{⊗(k(n−1)+1)}` with boundary
//! `d_k = Σ_{i=0}^{(k−1)(n−1)} (−1)^i δ_i`, where `δ_i` contracts the letters
//! `a_i, …, a_{i+n−1}` of `a_0 ⊗ ⋯ ⊗ a_{k(n−1)}`.

use crate::envelope::{contract, Word, WordVector};
use crate::exactlin::{Matrix, Scalar};
use crate::guard;
use crate::nary_core::{NAryAlgebra, Tuples};
use crate::{Error, Result};

/// Index convention printed at the top of every homology report.
pub const CONVENTION: &str =
    "chains a_0 ⊗ … ⊗ a_{k(n-1)}; d_k = sum_{i=0}^{(k-1)(n-1)} (-1)^i delta_i; delta_i contracts a_i … a_{i+n-1}";

/// Number of letters in a chain of level `k`.
pub fn chain_length(n: usize, k: usize) -> usize {
    k * (n - 1) + 1
}

pub fn chain_dim(a: &NAryAlgebra, k: usize) -> u128 {
    guard::power(a.dim(), chain_length(a.arity(), k))
}

/// `δ_i` on a basis chain of level `k`.
pub fn face_map(a: &NAryAlgebra, k: usize, i: usize, w: &Word) -> Result<WordVector> {
    let n = a.arity();
    if k == 0 {
        return Err(Error::Invalid("level 0 has no faces".into()));
    }
    if w.len() != chain_length(n, k) {
        return Err(Error::DimensionMismatch { expected: chain_length(n, k), found: w.len() });
    }
    if i > (k - 1) * (n - 1) {
        return Err(Error::Invalid(format!("face {i} out of range 0..={}", (k - 1) * (n - 1))));
    }
    contract(a, w, i)
}

/// Matrix of `d_k: C^k → C^{k−1}` in the word bases.
pub fn boundary_matrix(a: &NAryAlgebra, k: usize) -> Result<Matrix> {
    if k == 0 {
        return Err(Error::Invalid("d_k is defined for k >= 1".into()));
    }
    let n = a.arity();
    let dim = a.dim();
    guard::check(format!("boundary d_{k}"), chain_dim(a, k), guard::coord_budget())?;
    let rows = chain_dim(a, k - 1) as usize;
    let cols = chain_dim(a, k) as usize;
    let mut m = Matrix::zeros(rows, cols);
    for (col, letters) in Tuples::new(dim, chain_length(n, k)).enumerate() {
        let w = Word(letters);
        for i in 0..=(k - 1) * (n - 1) {
            let sign = Scalar::from(if i % 2 == 0 { 1 } else { -1 });
            for (v, c) in face_map(a, k, i, &w)?.terms() {
                m.add_at(v.index(dim), col, &(&sign * c));
            }
        }
    }
    Ok(m)
}

/// All boundaries `d_1, …, d_{k_max}` of an algebra.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    algebra: NAryAlgebra,
    boundaries: Vec<Matrix>,
}

impl ChainComplex {
    pub fn new(a: &NAryAlgebra, k_max: usize) -> Result<Self> {
        let boundaries = (1..=k_max).map(|k| boundary_matrix(a, k)).collect::<Result<_>>()?;
        Ok(ChainComplex { algebra: a.clone(), boundaries })
    }

    pub fn algebra(&self) -> &NAryAlgebra {
        &self.algebra
    }

    pub fn k_max(&self) -> usize {
        self.boundaries.len()
    }

    /// `d_k` for `1 ≤ k ≤ k_max`.
    pub fn boundary(&self, k: usize) -> &Matrix {
        &self.boundaries[k - 1]
    }

    pub fn dim(&self, k: usize) -> usize {
        chain_dim(&self.algebra, k) as usize
    }
}

/// Outcome of [`check_d_squared`]: entry `k − 1` describes `d_k d_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSquaredReport {
    pub zero: Vec<bool>,
    pub nonzero_entries: Vec<usize>,
}

impl DSquaredReport {
    pub fn all_zero(&self) -> bool {
        self.zero.iter().all(|&z| z)
    }

    pub fn max_nonzero_entry_count(&self) -> usize {
        self.nonzero_entries.iter().copied().max().unwrap_or(0)
    }

    /// First `k` with `d_k d_{k+1} ≠ 0`.
    pub fn first_failure(&self) -> Option<usize> {
        self.zero.iter().position(|z| !z).map(|p| p + 1)
    }
}

pub fn check_d_squared_complex(c: &ChainComplex) -> Result<DSquaredReport> {
    let mut zero = Vec::new();
    let mut nonzero_entries = Vec::new();
    for k in 1..c.k_max() {
        let p = c.boundary(k).mul(c.boundary(k + 1))?;
        zero.push(p.is_zero());
        nonzero_entries.push(p.nnz());
    }
    Ok(DSquaredReport { zero, nonzero_entries })
}

/// Computes `d_k d_{k+1}` for `1 ≤ k < k_max` and reports which vanish.
pub fn check_d_squared(a: &NAryAlgebra, k_max: usize) -> Result<DSquaredReport> {
    if k_max < 2 {
        return Err(Error::Invalid(format!("k_max must be at least 2, got {k_max}")));
    }
    check_d_squared_complex(&ChainComplex::new(a, k_max)?)
}

/// `h_0 = dim C^0 − rank d_1` and `h_k = dim ker d_k − rank d_{k+1}` for
/// `1 ≤ k ≤ k_max − 1`. Refused unless every computed `d_k d_{k+1}` vanishes.
pub fn homology_ranks(a: &NAryAlgebra, k_max: usize) -> Result<Vec<usize>> {
    if k_max < 2 {
        return Err(Error::Invalid(format!("k_max must be at least 2, got {k_max}")));
    }
    let c = ChainComplex::new(a, k_max)?;
    if let Some(k) = check_d_squared_complex(&c)?.first_failure() {
        return Err(Error::NotAComplex(k));
    }
    let ranks: Vec<usize> = (1..=k_max).map(|k| c.boundary(k).rank()).collect();
    let mut h = vec![c.dim(0) - ranks[0]];
    for k in 1..k_max {
        h.push(c.dim(k) - ranks[k - 1] - ranks[k]);
    }
    Ok(h)
}
