//! Closed-form reference values for even cycles and complete graphs with the
//! half-chain bipartition.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyReference {
    pub family: String,
    pub n: usize,
    pub exact_entropy_nats: f64,
    pub schmidt_spectrum: Option<Vec<f64>>,
    /// Orbit count of `Γ_A` on A-side configurations.
    pub omega_a: u64,
    /// Maximal intertwiner rank `Ω_A`.
    pub omega_cap: u64,
    /// `log Ω_A`.
    pub new_bound_nats: f64,
    pub asymptotic_entropy_nats: Option<f64>,
    pub asymptotic_entropy_corrected_nats: Option<f64>,
}

fn check_even(family: &str, n: usize) -> Result<()> {
    if n < 4 || n % 2 != 0 || n > 64 {
        return Err(Error::InvalidFamily(format!(
            "{family} reference needs an even size between 4 and 64, got {n}"
        )));
    }
    Ok(())
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `(2^{n/2} + 2^{⌈n/4⌉}) / 2`.
pub fn cycle_omega_a(n: usize) -> u64 {
    ((1u64 << (n / 2)) + (1u64 << n.div_ceil(4))) / 2
}

pub fn cn_reference(n: usize) -> Result<FamilyReference> {
    check_even("cycle", n)?;
    let omega_cap = 1u64 << (n / 2);
    Ok(FamilyReference {
        family: "cycle".into(),
        n,
        exact_entropy_nats: std::f64::consts::LN_2,
        schmidt_spectrum: Some(vec![0.5, 0.5]),
        omega_a: cycle_omega_a(n),
        omega_cap,
        new_bound_nats: (n / 2) as f64 * std::f64::consts::LN_2,
        asymptotic_entropy_nats: None,
        asymptotic_entropy_corrected_nats: None,
    })
}

/// `λ_j = C(n/2, j)² / C(n, n/2)` for `j = 0..=n/2`.
pub fn kn_spectrum(n: usize) -> Vec<f64> {
    let m = (n / 2) as u64;
    let total = binomial(2 * m, m) as f64;
    (0..=m).map(|j| (binomial(m, j) * binomial(m, j)) as f64 / total).collect()
}

pub fn kn_reference(n: usize) -> Result<FamilyReference> {
    check_even("complete", n)?;
    let spectrum = kn_spectrum(n);
    let entropy = spectrum.iter().map(|&l| -l * l.ln()).sum();
    let m = (n / 2) as u64;
    Ok(FamilyReference {
        family: "complete".into(),
        n,
        exact_entropy_nats: entropy,
        schmidt_spectrum: Some(spectrum),
        omega_a: m + 1,
        omega_cap: m + 1,
        new_bound_nats: ((m + 1) as f64).ln(),
        asymptotic_entropy_nats: Some(kn_asymptotic(n)),
        asymptotic_entropy_corrected_nats: Some(kn_asymptotic_corrected(n)),
    })
}

/// `½ log n + ½ log(πe/4)` nats.
pub fn kn_asymptotic(n: usize) -> f64 {
    use std::f64::consts::{E, PI};
    0.5 * (n as f64).ln() + 0.5 * (PI * E / 4.0).ln()
}

/// `½ log n + ½ log(πe/8)` nats: the Gaussian entropy at the actual
/// variance `n/16` of the spectrum.
pub fn kn_asymptotic_corrected(n: usize) -> f64 {
    use std::f64::consts::{E, PI};
    0.5 * (n as f64).ln() + 0.5 * (PI * E / 8.0).ln()
}

pub fn to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}
