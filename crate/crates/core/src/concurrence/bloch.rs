//! Generalized Bloch expansion in SU(d) generators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::DensityMatrix;
use crate::tensor::matrix::ComplexMatrix;
use crate::tensor::partial::partial_trace_bits;
use crate::tensor::shape::PartySet;

/// The d² − 1 generalized Gell-Mann matrices, normalized to Tr(λ_a λ_b) = 2δ_ab.
///
/// Order: symmetric pairs (j < k, row-major), antisymmetric pairs (same order),
/// then the d − 1 diagonal generators. For d = 2 this is (σ_x, σ_y, σ_z).
#[derive(Clone, Debug)]
pub struct GellMannBasis {
    d: usize,
    generators: Vec<ComplexMatrix>,
}

impl GellMannBasis {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

pub fn gell_mann_basis(d: usize) -> Result<GellMannBasis> {
    if d < 2 {
        return Err(Error::Contract(format!(
            "SU(d) generators need d >= 2, got {d}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| (j + 1..d).map(move |k| (j, k)))
        .collect();
    let mut generators = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = one;
        m[(k, j)] = one;
        generators.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = -i;
        m[(k, j)] = i;
        generators.push(m);
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for v in diag.iter_mut().take(l) {
            *v = norm;
        }
        diag[l] = -(l as f64) * norm;
        generators.push(ComplexMatrix::from_real_diag(&diag));
    }
    Ok(GellMannBasis { d, generators })
}

/// Correlation tensor T^S with entries `(d/2)^M · Tr[ρ λ_{a_1}^{(μ_1)} ··· λ_{a_M}^{(μ_M)}]`.
///
/// Entries are stored row-major over `(a_1, ..., a_M)`, each axis of length d² − 1,
/// axes ordered by ascending party index.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTensor {
    subset: PartySet,
    axis_len: usize,
    entries: Vec<f64>,
}

impl CorrelationTensor {
    pub fn subset(&self) -> PartySet {
        self.subset
    }

    pub fn axis_len(&self) -> usize {
        self.axis_len
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        assert_eq!(index.len(), self.subset.len(), "tensor rank mismatch");
        let flat = index.iter().fold(0, |acc, &a| {
            assert!(a < self.axis_len, "generator index out of range");
            acc * self.axis_len + a
        });
        self.entries[flat]
    }

    /// Squared Euclidean norm Σ T².
    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|t| t * t).sum()
    }
}

fn homogeneous_d(rho: &DensityMatrix) -> Result<usize> {
    rho.shape().homogeneous_dim().ok_or_else(|| {
        Error::Unsupported(format!(
            "correlation tensors need equal local dimensions, got {}",
            rho.shape()
        ))
    })
}

/// `Tr[op · (λ_{a_1} ⊗ ... ⊗ λ_{a_m})]` for every generator tuple, by peeling the
/// leading factor one party at a time.
fn contract_generators(
    op: &ComplexMatrix,
    m: usize,
    basis: &GellMannBasis,
    out: &mut Vec<Complex64>,
) {
    if m == 0 {
        out.push(op[(0, 0)]);
        return;
    }
    let d = basis.dim();
    let rest = op.rows() / d;
    for g in basis.generators() {
        // Σ_{i,j} g_{ji} op[(i, ·), (j, ·)]
        let mut reduced = ComplexMatrix::zeros(rest, rest);
        for i in 0..d {
            for j in 0..d {
                let gji = g[(j, i)];
                if gji == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r in 0..rest {
                    for c in 0..rest {
                        reduced[(r, c)] += gji * op[(i * rest + r, j * rest + c)];
                    }
                }
            }
        }
        contract_generators(&reduced, m - 1, basis, out);
    }
}

fn tensor_with_basis(
    rho: &DensityMatrix,
    subset: PartySet,
    basis: &GellMannBasis,
) -> Result<CorrelationTensor> {
    let d = basis.dim();
    let m = subset.len();
    let reduced = partial_trace_bits(rho.matrix(), rho.shape(), subset.bits())?;
    let mut raw = Vec::with_capacity(basis.len().pow(m as u32));
    contract_generators(&reduced, m, basis, &mut raw);
    let prefactor = (d as f64 / 2.0).powi(m as i32);
    let mut entries = Vec::with_capacity(raw.len());
    for z in raw {
        if z.im.abs() > 1e-10 {
            return Err(Error::Contract(format!(
                "correlation tensor entry has imaginary part {:e}; state is not Hermitian",
                z.im
            )));
        }
        entries.push(prefactor * z.re);
    }
    Ok(CorrelationTensor {
        subset,
        axis_len: basis.len(),
        entries,
    })
}

/// Correlation tensor of ρ on the parties in `subset` (which may be all parties).
pub fn correlation_tensor(
    rho: &DensityMatrix,
    subset: impl Into<PartySet>,
) -> Result<CorrelationTensor> {
    let subset = subset.into();
    subset.check(rho.shape())?;
    let d = homogeneous_d(rho)?;
    tensor_with_basis(rho, subset, &gell_mann_basis(d)?)
}

/// Tr ρ_α² rebuilt from correlation tensors:
/// `d^{−M} (1 + Σ_{∅≠S⊆α} (2/d)^{|S|} ‖T^S‖²)` with M = |α|.
pub fn purity_via_tensors(rho: &DensityMatrix, subset: impl Into<PartySet>) -> Result<f64> {
    let subset = subset.into();
    subset.check(rho.shape())?;
    let d = homogeneous_d(rho)?;
    let basis = gell_mann_basis(d)?;
    let df = d as f64;
    let mut acc = 1.0;
    for s in subset.nonempty_subsets() {
        let t = tensor_with_basis(rho, s, &basis)?;
        acc += (2.0 / df).powi(s.len() as i32) * t.norm_sqr();
    }
    Ok(acc / df.powi(subset.len() as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, random_mixed};
    use crate::tensor::matrix::{kron, purity};
    use crate::tensor::shape::SystemShape;

    fn qubit_zero() -> DensityMatrix {
        let shape = SystemShape::new(vec![2]).unwrap();
        DensityMatrix::new(shape, ComplexMatrix::from_real_diag(&[1.0, 0.0])).unwrap()
    }

    #[test]
    fn qubit_basis_is_pauli() {
        let b = gell_mann_basis(2).unwrap();
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let x = ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
            .unwrap();
        let y = ComplexMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
            .unwrap();
        let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
        assert_eq!(b.generators(), &[x, y, z]);
    }

    #[test]
    fn hilbert_schmidt_orthonormality() {
        for d in 2..=5 {
            let b = gell_mann_basis(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
            for (i, gi) in b.generators().iter().enumerate() {
                assert!(gi.trace().norm() < 1e-12);
                assert!(gi.hermiticity_deviation() < 1e-15);
                for (j, gj) in b.generators().iter().enumerate() {
                    let hs = gi.trace_product(gj).unwrap();
                    let expected = if i == j { 2.0 } else { 0.0 };
                    assert!((hs - Complex64::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn single_qubit_tensor() {
        let rho = qubit_zero();
        let set = PartySet::full(1).unwrap();
        let t = correlation_tensor(&rho, set).unwrap();
        assert_eq!(t.entries(), &[0.0, 0.0, 1.0]);
        assert!((purity_via_tensors(&rho, set).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_tensors_vanish() {
        let shape = SystemShape::uniform(3, 3).unwrap();
        let rho = DensityMatrix::maximally_mixed(shape);
        for bits in 1..8u32 {
            let set = PartySet::new(bits, 3).unwrap();
            let t = correlation_tensor(&rho, set).unwrap();
            assert!(t.entries().iter().all(|v| v.abs() < 1e-15));
            let expected = 3f64.powi(-(set.len() as i32));
            assert!((purity_via_tensors(&rho, set).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn ghz_full_tensor_matches_brute_force_trace() {
        let rho = ghz(3, 2).unwrap().to_density();
        let set = PartySet::full(3).unwrap();
        let t = correlation_tensor(&rho, set).unwrap();
        let b = gell_mann_basis(2).unwrap();
        let g = b.generators();
        for a in 0..3 {
            for bb in 0..3 {
                for c in 0..3 {
                    let op = kron(&kron(&g[a], &g[bb]).unwrap(), &g[c]).unwrap();
                    let direct = rho.matrix().trace_product(&op).unwrap().re;
                    assert!((t.get(&[a, bb, c]) - direct).abs() < 1e-14);
                }
            }
        }
        // GHZ: ⟨XXX⟩ = 1, ⟨ZZZ⟩ = 0, ⟨XYY⟩ = −1.
        assert!((t.get(&[0, 0, 0]) - 1.0).abs() < 1e-14);
        assert!(t.get(&[2, 2, 2]).abs() < 1e-14);
        assert!((t.get(&[0, 1, 1]) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn ghz_marginal_purity() {
        let rho = ghz(3, 2).unwrap().to_density();
        let set = PartySet::from_parties(&[1], 3).unwrap();
        assert!((purity_via_tensors(&rho, set).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn qutrit_purity_identity() {
        let shape = SystemShape::uniform(2, 3).unwrap();
        let rho = random_mixed(&shape, 2, 11);
        for bits in 1..4u32 {
            let set = PartySet::new(bits, 2).unwrap();
            let direct =
                purity(&partial_trace_bits(rho.matrix(), rho.shape(), bits).unwrap()).unwrap();
            assert!((purity_via_tensors(&rho, set).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn heterogeneous_rejected() {
        let shape = SystemShape::new(vec![2, 3]).unwrap();
        let rho = DensityMatrix::maximally_mixed(shape);
        let set = PartySet::full(2).unwrap();
        assert!(matches!(
            correlation_tensor(&rho, set),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            purity_via_tensors(&rho, set),
            Err(Error::Unsupported(_))
        ));
    }
}
