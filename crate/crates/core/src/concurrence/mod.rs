//! Exact pure-state concurrences and the GME threshold on multipartite concurrence.

mod bloch;

pub use bloch::{
    correlation_tensor, gell_mann_basis, purity_via_tensors, CorrelationTensor, GellMannBasis,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::states::KetVector;
use crate::tensor::matrix::purity;
use crate::tensor::shape::SubsetMask;

/// Radicands down to −1e−10 are treated as rounding and clamped to zero.
pub const RADICAND_TOL: f64 = 1e-10;

fn clamped_sqrt(radicand: f64, what: &str) -> Result<f64> {
    scaled_sqrt(radicand, 1.0, what)
}

/// `√(scale · radicand)`. With `scale` a power of two the product is exact,
/// so `2^{1−N/2}√r` is computed as `√(2^{2−N} r)` with a single rounding.
fn scaled_sqrt(radicand: f64, scale: f64, what: &str) -> Result<f64> {
    if radicand < -RADICAND_TOL {
        return Err(Error::Numeric(format!(
            "{what}: negative radicand {radicand:e}"
        )));
    }
    Ok((scale * radicand.max(0.0)).sqrt())
}

/// Purity of every reduced state ρ_α of |ψ⟩⟨ψ|, α ranging over all 2^N − 2 nonempty
/// proper subsets in ascending mask order.
pub fn reduced_purities(psi: &KetVector) -> Result<Vec<f64>> {
    psi.shape()
        .cuts()
        .map(|cut| purity(&psi.reduced(cut.bits())))
        .collect()
}

/// Multipartite concurrence of a pure state,
/// `C_N = 2^{1−N/2} √((2^N − 2) − Σ_α Tr ρ_α²)`.
///
/// The α-sum runs over every nonempty proper subset, so each bipartition is
/// counted twice (once as α, once as ᾱ).
pub fn pure_concurrence(psi: &KetVector) -> Result<f64> {
    let n = psi.shape().parties();
    if n < 2 {
        return Err(Error::Contract(format!(
            "multipartite concurrence needs N >= 2, got {n}"
        )));
    }
    let subsets = (1u64 << n) as f64 - 2.0;
    let sum: f64 = reduced_purities(psi)?.iter().sum();
    scaled_sqrt(subsets - sum, 2f64.powi(2 - n as i32), "pure concurrence")
}

/// Bipartite concurrence `√(2(1 − Tr ρ_cut²))` of a pure state across `cut`.
pub fn pure_bipartite_concurrence(psi: &KetVector, cut: SubsetMask) -> Result<f64> {
    cut.check(psi.shape())?;
    let p = purity(&psi.reduced(cut.bits()))?;
    clamped_sqrt(2.0 * (1.0 - p), "bipartite concurrence")
}

/// Which closed form of the threshold applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// Largest multipartite concurrence reachable by a biseparable state of N parties
/// with local dimension d. Concurrence strictly above it certifies GME.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdValue {
    pub n: usize,
    pub d: usize,
    pub value: f64,
    pub branch: Parity,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// GME threshold on `C_N` for `n ≥ 3` parties of local dimension `d ≥ 2`:
///
/// odd N:  `2^{1−N/2} √(2^N − 4 + 2/d − 2 Σ_{k=1}^{(N−1)/2} C(N,k)/d^k)`
///
/// even N: `2^{1−N/2} √(2^N − 4 + 2/d − 2 Σ_{k=1}^{N/2−1} C(N,k)/d^k − C(N,N/2)/d^{N/2})`
///
/// For N = 3 this is `√(2 − 2/d)`.
pub fn gme_threshold(n: usize, d: usize) -> Result<ThresholdValue> {
    if n < 3 {
        return Err(Error::Contract(format!(
            "GME threshold needs N >= 3 subsystems, got {n}"
        )));
    }
    if d < 2 {
        return Err(Error::Contract(format!(
            "GME threshold needs local dimension >= 2, got {d}"
        )));
    }
    if n > 60 {
        return Err(Error::Contract(format!("N = {n} is too large")));
    }
    let df = d as f64;
    let (branch, last_k) = if n % 2 == 1 {
        (Parity::Odd, (n - 1) / 2)
    } else {
        (Parity::Even, n / 2 - 1)
    };
    let mut radicand = 2f64.powi(n as i32) - 4.0 + 2.0 / df;
    for k in 1..=last_k {
        radicand -= 2.0 * binomial(n, k) / df.powi(k as i32);
    }
    if branch == Parity::Even {
        radicand -= binomial(n, n / 2) / df.powi((n / 2) as i32);
    }
    let value = scaled_sqrt(radicand, 2f64.powi(2 - n as i32), "GME threshold")?;
    Ok(ThresholdValue {
        n,
        d,
        value,
        branch,
    })
}
