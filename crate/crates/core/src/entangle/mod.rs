//! Coefficient matrices, Schmidt spectra and entanglement entropy.
//!
//! A state `Σ_s ψ_s |s⟩` is reshaped into `M[α, β]` with `α` the packed
//! A-restriction of `s` and `β` the packed B-restriction. Its singular values
//! `σ_k` give the Schmidt coefficients `λ_k = σ_k²` and the entropy
//! `S = −Σ λ_k log λ_k`, in nats.

mod optimize;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ground_space::SparseState;
use crate::perm_group::{Bipartition, Permutation};

pub use optimize::{maximize_entropy, ManifoldObjective, ManifoldOptimum, OptimizerConfig};

/// Largest side (in sites) of a dense coefficient matrix.
pub const MAX_SIDE_SITES: usize = 16;
/// Largest total site count of a dense coefficient matrix (2^24 entries).
pub const MAX_DENSE_SITES: usize = 24;

/// Default relative cutoff for the numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMatrix {
    pub a_sites: usize,
    pub b_sites: usize,
    pub entries: DMatrix<Complex64>,
}

impl CoefficientMatrix {
    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn transpose(&self) -> CoefficientMatrix {
        CoefficientMatrix {
            a_sites: self.b_sites,
            b_sites: self.a_sites,
            entries: self.entries.transpose(),
        }
    }
}

pub(crate) fn check_dims(a: usize, b: usize) -> Result<()> {
    if a > MAX_SIDE_SITES || b > MAX_SIDE_SITES || a + b > MAX_DENSE_SITES {
        return Err(Error::DimensionOverflow { a, b });
    }
    Ok(())
}

pub fn coefficient_matrix(state: &SparseState, bip: &Bipartition) -> Result<CoefficientMatrix> {
    let (a, b) = (bip.a_size(), bip.b_size());
    check_dims(a, b)?;
    let mut entries = DMatrix::<Complex64>::zeros(1 << a, 1 << b);
    for &(s, amp) in &state.terms {
        entries[(bip.restrict_a(s), bip.restrict_b(s))] += amp;
    }
    Ok(CoefficientMatrix {
        a_sites: a,
        b_sites: b,
        entries,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtData {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `σ_k²`, descending.
    pub schmidt_coeffs: Vec<f64>,
    /// Number of `σ_k > rank_tol · σ_max`.
    pub rank: usize,
    /// Entropy in nats.
    pub entropy: f64,
}

impl SchmidtData {
    pub fn entropy_bits(&self) -> f64 {
        self.entropy / std::f64::consts::LN_2
    }
}

/// `−Σ λ log λ` over the strictly positive entries, with `0·log 0 = 0`.
pub fn entropy_of(lambdas: &[f64]) -> f64 {
    lambdas.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.ln()).sum()
}

/// Numerical rank: singular values above `rank_tol` times the largest.
pub fn numerical_rank(singular_values: &[f64], rank_tol: f64) -> usize {
    let max = singular_values.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    singular_values.iter().filter(|&&s| s > rank_tol * max).count()
}

pub(crate) fn singular_values_of(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let (rows, cols) = m.shape();
    let svd = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or(Error::SvdFailed { rows, cols })?;
    let mut sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Full SVD of the coefficient matrix.
pub fn schmidt(m: &CoefficientMatrix, rank_tol: f64) -> Result<SchmidtData> {
    if m.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SvdFailed {
            rows: m.entries.nrows(),
            cols: m.entries.ncols(),
        });
    }
    let singular_values = singular_values_of(&m.entries)?;
    let schmidt_coeffs: Vec<f64> = singular_values.iter().map(|s| s * s).collect();
    Ok(SchmidtData {
        rank: numerical_rank(&singular_values, rank_tol),
        entropy: entropy_of(&schmidt_coeffs),
        singular_values,
        schmidt_coeffs,
    })
}

/// Whether `M[g(α), g(β)] = M[α, β]` holds exactly for all entries.
pub fn is_pair_symmetric(m: &CoefficientMatrix, g: &Permutation, bip: &Bipartition) -> Result<bool> {
    let (amap, bmap) = bip.induced_maps(g)?;
    let e = &m.entries;
    Ok((0..e.nrows()).all(|a| (0..e.ncols()).all(|b| e[(amap[a] as usize, bmap[b] as usize)] == e[(a, b)])))
}

/// Permutation matrix with `P|x⟩ = |map[x]⟩`.
fn permutation_matrix(map: &[u32]) -> DMatrix<Complex64> {
    let mut p = DMatrix::<Complex64>::zeros(map.len(), map.len());
    for (x, &y) in map.iter().enumerate() {
        p[(y as usize, x)] = Complex64::new(1.0, 0.0);
    }
    p
}

/// `P_A(g)` and `P_B(g)` for `g ∈ Γ_A`.
pub fn side_permutation_matrices(g: &Permutation, bip: &Bipartition) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let (amap, bmap) = bip.induced_maps(g)?;
    Ok((permutation_matrix(&amap), permutation_matrix(&bmap)))
}

/// `‖P_A(g)·M − M·P_B(g)‖_∞`. With `P|x⟩ = |g(x)⟩` the two products are
/// `M[g⁻¹α, β]` and `M[α, g(β)]`, so no dense product is formed.
pub fn intertwiner_residual(m: &CoefficientMatrix, g: &Permutation, bip: &Bipartition) -> Result<f64> {
    let (amap, bmap) = bip.induced_maps(g)?;
    let ainv = invert(&amap);
    let e = &m.entries;
    let mut worst: f64 = 0.0;
    for a in 0..e.nrows() {
        for b in 0..e.ncols() {
            worst = worst.max((e[(ainv[a], b)] - e[(a, bmap[b] as usize)]).norm());
        }
    }
    Ok(worst)
}

fn invert(map: &[u32]) -> Vec<usize> {
    let mut inv = vec![0usize; map.len()];
    for (x, &y) in map.iter().enumerate() {
        inv[y as usize] = x;
    }
    inv
}

/// Largest deviation between the coefficient matrix of `U(g)|ψ⟩` and
/// `(P_A(g) ⊗ P_B(g))|ψ⟩`, i.e. `P_A M P_Bᵀ` with entries `M[g⁻¹α, g⁻¹β]`.
pub fn factorization_residual(state: &SparseState, g: &Permutation, bip: &Bipartition) -> Result<f64> {
    let direct = coefficient_matrix(&state.permuted(g), bip)?;
    let m = coefficient_matrix(state, bip)?;
    let (amap, bmap) = bip.induced_maps(g)?;
    let (ainv, binv) = (invert(&amap), invert(&bmap));
    let mut worst: f64 = 0.0;
    for a in 0..m.entries.nrows() {
        for b in 0..m.entries.ncols() {
            worst = worst.max((direct.entries[(a, b)] - m.entries[(ainv[a], binv[b])]).norm());
        }
    }
    Ok(worst)
}
