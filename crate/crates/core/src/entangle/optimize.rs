//! Maximization of the entanglement entropy over normalized states in the
//! span of the A1 basis.
//!
//! Coefficients `c ∈ ℂ^r` are stored as `x ∈ ℝ^{2r}` (real parts, then
//! imaginary parts) on the unit sphere. Each start runs projected gradient
//! ascent with central finite differences and a backtracking step.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::{check_dims, entropy_of, singular_values_of};
use crate::error::Result;
use crate::ground_space::A1Basis;
use crate::perm_group::Bipartition;
use crate::seeding;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Random starts in addition to the best basis vector.
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub fd_step: f64,
    /// Stop once an accepted step gains less than this.
    pub tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 8,
            seed: 0,
            max_iter: 500,
            fd_step: 1e-5,
            tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldOptimum {
    /// Unit norm, first nonzero coefficient real and nonnegative.
    pub coeffs: Vec<Complex64>,
    pub entropy: f64,
    pub restarts_used: usize,
    pub converged: bool,
}

/// Entropy as a function of the A1 coefficients, on the rows and columns of
/// the coefficient matrix that any basis state touches.
pub struct ManifoldObjective {
    rows: usize,
    cols: usize,
    /// Per basis state: `(row, col, amplitude)`.
    parts: Vec<Vec<(usize, usize, Complex64)>>,
}

impl ManifoldObjective {
    pub fn new(basis: &A1Basis, bip: &Bipartition) -> Result<Self> {
        check_dims(bip.a_size(), bip.b_size())?;
        let mut alphas: Vec<u32> = Vec::new();
        let mut betas: Vec<u32> = Vec::new();
        for st in &basis.states {
            for &(s, _) in &st.terms {
                alphas.push(bip.restrict_a(s) as u32);
                betas.push(bip.restrict_b(s) as u32);
            }
        }
        alphas.sort_unstable();
        alphas.dedup();
        betas.sort_unstable();
        betas.dedup();
        let parts = basis
            .states
            .iter()
            .map(|st| {
                st.terms
                    .iter()
                    .map(|&(s, amp)| {
                        let row = alphas.binary_search(&(bip.restrict_a(s) as u32)).unwrap();
                        let col = betas.binary_search(&(bip.restrict_b(s) as u32)).unwrap();
                        (row, col, amp)
                    })
                    .collect()
            })
            .collect();
        Ok(ManifoldObjective {
            rows: alphas.len(),
            cols: betas.len(),
            parts,
        })
    }

    pub fn dim(&self) -> usize {
        self.parts.len()
    }

    fn matrix(&self, c: &[Complex64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::<Complex64>::zeros(self.rows, self.cols);
        for (part, &ck) in self.parts.iter().zip(c) {
            for &(i, j, amp) in part {
                m[(i, j)] += amp * ck;
            }
        }
        m
    }

    /// Entropy of the normalized state with coefficients `c`.
    pub fn entropy_of_coeffs(&self, c: &[Complex64]) -> Result<f64> {
        let norm_sqr: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        let sv = singular_values_of(&self.matrix(c))?;
        let lambdas: Vec<f64> = sv.iter().map(|s| s * s / norm_sqr).collect();
        Ok(entropy_of(&lambdas))
    }

    /// Entropy at the normalized point `x / |x|` of `ℝ^{2r}`.
    pub fn entropy_at(&self, x: &[f64]) -> Result<f64> {
        self.entropy_of_coeffs(&to_complex(x))
    }

    /// Central-difference gradient of `entropy_at` with step `h`.
    pub fn gradient(&self, x: &[f64], h: f64) -> Result<Vec<f64>> {
        let mut y = x.to_vec();
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() {
            y[i] = x[i] + h;
            let up = self.entropy_at(&y)?;
            y[i] = x[i] - h;
            let down = self.entropy_at(&y)?;
            y[i] = x[i];
            g[i] = (up - down) / (2.0 * h);
        }
        Ok(g)
    }

    fn ascend(&self, x0: Vec<f64>, cfg: &OptimizerConfig) -> Result<(Vec<f64>, f64, bool)> {
        let mut x = normalized(x0);
        let mut s = self.entropy_at(&x)?;
        let mut eta = 0.1;
        for _ in 0..cfg.max_iter {
            let mut g = self.gradient(&x, cfg.fd_step)?;
            let radial: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
            for (gi, xi) in g.iter_mut().zip(&x) {
                *gi -= radial * xi;
            }
            if g.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-12 {
                return Ok((x, s, true));
            }
            let accepted = loop {
                let y = normalized(x.iter().zip(&g).map(|(a, b)| a + eta * b).collect());
                let sy = self.entropy_at(&y)?;
                if sy > s {
                    break Some((y, sy));
                }
                eta *= 0.5;
                if eta < 1e-14 {
                    break None;
                }
            };
            let Some((y, sy)) = accepted else {
                return Ok((x, s, true));
            };
            let gain = sy - s;
            x = y;
            s = sy;
            eta = (eta * 2.0).min(10.0);
            if gain < cfg.tol {
                return Ok((x, s, true));
            }
        }
        Ok((x, s, false))
    }
}

fn normalized(mut x: Vec<f64>) -> Vec<f64> {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= n);
    x
}

fn to_complex(x: &[f64]) -> Vec<Complex64> {
    let r = x.len() / 2;
    (0..r).map(|k| Complex64::new(x[k], x[r + k])).collect()
}

/// Unit norm and first nonzero coefficient real positive.
fn gauge_fixed(x: &[f64]) -> Vec<Complex64> {
    let mut c = to_complex(x);
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let phase = c
        .iter()
        .find(|z| z.norm() > 1e-12)
        .map(|z| z.conj() / z.norm())
        .unwrap_or(Complex64::new(1.0, 0.0));
    c.iter_mut().for_each(|z| *z = *z * phase / norm);
    c
}

/// Maximum entropy over the normalized span of `basis`.
pub fn maximize_entropy(basis: &A1Basis, bip: &Bipartition, cfg: &OptimizerConfig) -> Result<ManifoldOptimum> {
    let obj = ManifoldObjective::new(basis, bip)?;
    let r = obj.dim();
    if r == 1 {
        return Ok(ManifoldOptimum {
            coeffs: vec![Complex64::new(1.0, 0.0)],
            entropy: obj.entropy_of_coeffs(&[Complex64::new(1.0, 0.0)])?,
            restarts_used: 0,
            converged: true,
        });
    }
    let unit = |k: usize| {
        let mut x = vec![0.0; 2 * r];
        x[k] = 1.0;
        x
    };
    let mut best_basis = (0, f64::NEG_INFINITY);
    for k in 0..r {
        let s = obj.entropy_at(&unit(k))?;
        if s > best_basis.1 {
            best_basis = (k, s);
        }
    }
    let mut starts = vec![unit(best_basis.0)];
    for i in 0..cfg.restarts {
        let mut rng = seeding::stream(cfg.seed, seeding::OPTIMIZER, i as u64);
        starts.push((0..2 * r).map(|_| rng.random_range(-1.0..1.0)).collect());
    }
    let runs: Vec<(Vec<f64>, f64, bool)> = starts
        .into_par_iter()
        .map(|x0| obj.ascend(x0, cfg))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.1 > runs[best].1 {
            best = i;
        }
    }
    Ok(ManifoldOptimum {
        coeffs: gauge_fixed(&runs[best].0),
        entropy: runs[best].1,
        restarts_used: runs.len(),
        converged: runs[best].2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entangle::{coefficient_matrix, schmidt, DEFAULT_RANK_TOL};
    use crate::graph::{generate_family, FamilySpec, Graph};
    use crate::ground_space::{build_a1_basis, enumerate_ground_manifold};
    use crate::perm_group::{automorphism_group, DEFAULT_ENUMERATION_CAP};
    use std::f64::consts::LN_2;

    fn basis_for(g: &Graph) -> A1Basis {
        let grp = automorphism_group(g, DEFAULT_ENUMERATION_CAP);
        build_a1_basis(&enumerate_ground_manifold(g, &grp).unwrap()).unwrap()
    }

    #[test]
    fn single_orbit_is_exact() {
        let g = generate_family(&FamilySpec::cycle(6)).unwrap();
        let bip = Bipartition::first_half(6);
        let opt = maximize_entropy(&basis_for(&g), &bip, &OptimizerConfig::default()).unwrap();
        assert_eq!(opt.coeffs, vec![Complex64::new(1.0, 0.0)]);
        assert_eq!(opt.restarts_used, 0);
        assert!((opt.entropy - LN_2).abs() < 1e-12);
    }

    /// P_3 with A = {0}: r = 2, two Bloch-sphere parameters. A dense grid is
    /// the oracle for the maximum.
    #[test]
    fn path3_matches_grid_scan() {
        let g = generate_family(&FamilySpec::path(3)).unwrap();
        let bip = Bipartition::new(3, &[0]).unwrap();
        let basis = basis_for(&g);
        assert_eq!(basis.r(), 2);
        let obj = ManifoldObjective::new(&basis, &bip).unwrap();
        let mut grid_max: f64 = 0.0;
        for i in 0..=100 {
            for j in 0..100 {
                let theta = std::f64::consts::PI * i as f64 / 100.0;
                let phi = 2.0 * std::f64::consts::PI * j as f64 / 100.0;
                let c = [
                    Complex64::new((theta / 2.0).cos(), 0.0),
                    Complex64::from_polar((theta / 2.0).sin(), phi),
                ];
                grid_max = grid_max.max(obj.entropy_of_coeffs(&c).unwrap());
            }
        }
        let opt = maximize_entropy(&basis, &bip, &OptimizerConfig::default()).unwrap();
        assert!((grid_max - LN_2).abs() < 1e-3);
        assert!((opt.entropy - LN_2).abs() < 1e-9);
        assert!(opt.entropy >= grid_max - 1e-9);
        assert!(opt.converged);
        let norm: f64 = opt.coeffs.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert_eq!(opt.coeffs[0].im, 0.0);
        assert!(opt.coeffs[0].re >= 0.0);

        // Reported entropy equals the SVD of the reconstructed state.
        let psi = basis.combine(&opt.coeffs);
        let sd = schmidt(&coefficient_matrix(&psi, &bip).unwrap(), DEFAULT_RANK_TOL).unwrap();
        assert!((sd.entropy - opt.entropy).abs() < 1e-12);
    }

    #[test]
    fn gradient_is_step_stable() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 3)]).unwrap();
        let bip = Bipartition::first_half(6);
        let basis = basis_for(&g);
        assert!(basis.r() >= 2);
        let obj = ManifoldObjective::new(&basis, &bip).unwrap();
        let mut rng = seeding::stream(11, seeding::OPTIMIZER, 0);
        for _ in 0..5 {
            let x: Vec<f64> = normalized((0..2 * basis.r()).map(|_| rng.random_range(0.2..1.0)).collect());
            let fine = obj.gradient(&x, 1e-5).unwrap();
            let coarse = obj.gradient(&x, 1e-3).unwrap();
            for (a, b) in fine.iter().zip(&coarse) {
                assert!((a - b).abs() < 1e-4, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let g = Graph::new(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (0, 4), (2, 6)]).unwrap();
        let bip = Bipartition::first_half(7);
        let basis = basis_for(&g);
        let cfg = OptimizerConfig { seed: 3, ..Default::default() };
        let a = maximize_entropy(&basis, &bip, &cfg).unwrap();
        let b = maximize_entropy(&basis, &bip, &cfg).unwrap();
        assert_eq!(a, b);
        let ln_d = (basis.states.iter().map(|s| s.terms.len()).sum::<usize>() as f64).ln();
        assert!(a.entropy <= ln_d + 1e-9);
    }
}
