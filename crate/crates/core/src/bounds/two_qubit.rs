use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::DensityMatrix;
use crate::tensor::eigen::{clamp_psd, hermitian_eigen, hermitian_eigenvalues};
use crate::tensor::matrix::ComplexMatrix;

/// Eigenvalues of ρ at or below this are dropped from the ensemble used for the
/// spin-flip overlap matrix.
const RANK_TOL: f64 = 1e-12;

/// Exact concurrence of a two-qubit state, `max(0, μ₁ − μ₂ − μ₃ − μ₄)`.
///
/// The μ_i are the square roots of the eigenvalues of ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y), obtained
/// as the singular values of τ_ij = w_iᵀ (σ_y⊗σ_y) w_j for the eigen-ensemble
/// w_i = √p_i |v_i⟩ of ρ.
pub fn two_qubit_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.shape().dims() != [2, 2] {
        return Err(Error::Shape(format!(
            "two-qubit concurrence needs shape (2,2), got {}",
            rho.shape()
        )));
    }
    let eig = hermitian_eigen(rho.matrix())?;
    let ensemble: Vec<Vec<Complex64>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > RANK_TOL)
        .map(|(k, &p)| eig.vector(k).into_iter().map(|z| z * p.sqrt()).collect())
        .collect();
    let r = ensemble.len();
    if r == 0 {
        return Err(Error::Numeric(
            "density matrix has no positive eigenvalue".into(),
        ));
    }
    // σ_y⊗σ_y maps |00⟩,|01⟩,|10⟩,|11⟩ to −|11⟩, |10⟩, |01⟩, −|00⟩.
    let flip = |w: &[Complex64]| [-w[3], w[2], w[1], -w[0]];
    let tau = ComplexMatrix::from_fn(r, r, |i, j| {
        let fj = flip(&ensemble[j]);
        ensemble[i].iter().zip(fj.iter()).map(|(a, b)| a * b).sum()
    });
    let gram = tau.adjoint().matmul(&tau)?;
    let gram = ComplexMatrix::from_fn(r, r, |a, b| (gram[(a, b)] + gram[(b, a)].conj()) * 0.5);
    let mut mu2 = hermitian_eigenvalues(&gram)?;
    clamp_psd(&mut mu2, 1.0)?;
    let mut mu: Vec<f64> = mu2.into_iter().map(f64::sqrt).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    let rest: f64 = mu.iter().skip(1).sum();
    Ok((mu[0] - rest).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, random_mixed, w_state};
    use crate::tensor::partial::partial_trace;
    use crate::tensor::shape::{SubsetMask, SystemShape};

    /// Direct route: eigenvalues of the non-Hermitian R = ρ ρ̃ via the characteristic
    /// polynomial are awkward, so use the equivalent Hermitian √ρ ρ̃ √ρ.
    fn spin_flip_oracle(rho: &ComplexMatrix) -> f64 {
        let e = hermitian_eigen(rho).unwrap();
        let sqrt_vals: Vec<f64> = e.values.iter().map(|v| v.max(0.0).sqrt()).collect();
        let sqrt_rho = ComplexMatrix::from_fn(4, 4, |r, c| {
            (0..4)
                .map(|k| e.vectors[(r, k)] * sqrt_vals[k] * e.vectors[(c, k)].conj())
                .sum()
        });
        let yy = ComplexMatrix::from_fn(4, 4, |r, c| {
            let sign = if r == 0 || r == 3 { -1.0 } else { 1.0 };
            if r + c == 3 {
                Complex64::new(sign, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let tilde = &(&yy * &rho.conj()) * &yy;
        let h = &(&sqrt_rho * &tilde) * &sqrt_rho;
        let h = ComplexMatrix::from_fn(4, 4, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
        let mut mu: Vec<f64> = hermitian_eigenvalues(&h)
            .unwrap()
            .into_iter()
            .map(|v| v.max(0.0).sqrt())
            .collect();
        mu.sort_by(|a, b| b.total_cmp(a));
        (mu[0] - mu[1] - mu[2] - mu[3]).max(0.0)
    }

    #[test]
    fn bell_is_maximal() {
        let c = two_qubit_concurrence(&ghz(2, 2).unwrap().to_density()).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_state_is_separable() {
        let shape = SystemShape::uniform(2, 2).unwrap();
        let rho = DensityMatrix::new(shape, ComplexMatrix::from_real_diag(&[0.4, 0.3, 0.2, 0.1]))
            .unwrap();
        assert_eq!(two_qubit_concurrence(&rho).unwrap(), 0.0);
    }

    #[test]
    fn w_marginal() {
        let w = w_state(3).unwrap().to_density();
        let keep = SubsetMask::from_parties(&[1, 2], 3).unwrap();
        let m = partial_trace(w.matrix(), w.shape(), keep).unwrap();
        let shape = SystemShape::uniform(2, 2).unwrap();
        let rho = DensityMatrix::new(shape, m.clone()).unwrap();
        let c = two_qubit_concurrence(&rho).unwrap();
        assert!((c - 2.0 / 3.0).abs() < 1e-12);
        assert!((spin_flip_oracle(&m) - 2.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn matches_spin_flip_oracle_on_full_rank_states() {
        let shape = SystemShape::uniform(2, 2).unwrap();
        for seed in 0..30 {
            let rho = random_mixed(&shape, 1 + (seed as usize % 4), seed);
            let fast = two_qubit_concurrence(&rho).unwrap();
            let oracle = spin_flip_oracle(rho.matrix());
            // Oracle loses precision through √ of near-zero eigenvalues.
            assert!(
                (fast - oracle).abs() < 1e-6,
                "seed {seed}: {fast} vs {oracle}"
            );
        }
    }

    #[test]
    fn rejects_other_shapes() {
        let rho = ghz(3, 2).unwrap().to_density();
        assert!(matches!(two_qubit_concurrence(&rho), Err(Error::Shape(_))));
    }
}
