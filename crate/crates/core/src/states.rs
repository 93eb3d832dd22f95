//! State constructors, validators and seeded random sampling.
//!
//! Random states use [`rand_chacha::ChaCha8Rng`] seeded with
//! `seed_from_u64`, with amplitudes drawn as independent standard normals
//! for the real and imaginary parts (Haar measure after normalization).

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tensor::eigen::hermitian_eigenvalues;
use crate::tensor::matrix::ComplexMatrix;
use crate::tensor::partial::{reduced_from_ket, split_indices};
use crate::tensor::shape::{SubsetMask, SystemShape};

pub const KET_NORM_TOL: f64 = 1e-12;
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Unit-norm pure state over a [`SystemShape`].
#[derive(Clone, Debug, PartialEq)]
pub struct KetVector {
    shape: SystemShape,
    amps: Vec<Complex64>,
}

impl KetVector {
    /// Requires `amps.len() == total_dim` and unit norm within 1e−12.
    pub fn new(shape: SystemShape, amps: Vec<Complex64>) -> Result<Self> {
        check_len(&shape, amps.len())?;
        let norm = norm(&amps);
        if (norm - 1.0).abs() > KET_NORM_TOL {
            return Err(Error::Contract(format!(
                "unit norm violated: |psi| = {norm:.15}"
            )));
        }
        Ok(Self { shape, amps })
    }

    /// Rescales `amps` to unit norm; rejects the zero vector.
    pub fn normalized(shape: SystemShape, amps: Vec<Complex64>) -> Result<Self> {
        check_len(&shape, amps.len())?;
        let n = norm(&amps);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Contract(format!(
                "cannot normalize a vector of norm {n}"
            )));
        }
        Ok(Self {
            shape,
            amps: amps.into_iter().map(|a| a / n).collect(),
        })
    }

    /// `|a⟩_cut ⊗ |b⟩_rest` laid out in the original party order of `shape`.
    pub fn product_over_cut(
        shape: SystemShape,
        cut: SubsetMask,
        a: &KetVector,
        b: &KetVector,
    ) -> Result<Self> {
        cut.check(&shape)?;
        let da = shape.dim_of(cut.bits());
        let db = shape.total_dim() / da;
        if a.amps.len() != da || b.amps.len() != db {
            return Err(Error::Shape(format!(
                "factors of dimension {} and {} do not match cut dims {da} and {db}",
                a.amps.len(),
                b.amps.len()
            )));
        }
        let (aidx, bidx) = split_indices(&shape, cut.bits());
        let amps = aidx
            .iter()
            .zip(&bidx)
            .map(|(&i, &j)| a.amps[i] * b.amps[j])
            .collect();
        Ok(Self { shape, amps })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn overlap(&self, other: &KetVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amps)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            shape: self.shape.clone(),
            matrix: self.projector(),
        }
    }

    /// ρ_keep of |ψ⟩⟨ψ| for any nonempty set of parties (mask bits).
    pub fn reduced(&self, keep_bits: u32) -> ComplexMatrix {
        reduced_from_ket(&self.amps, &self.shape, keep_bits)
    }
}

fn check_len(shape: &SystemShape, len: usize) -> Result<()> {
    if len != shape.total_dim() {
        return Err(Error::Shape(format!(
            "{len} amplitudes for a system of dimension {}",
            shape.total_dim()
        )));
    }
    Ok(())
}

fn norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Which density-matrix invariant a matrix violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationFailure {
    Shape,
    Hermiticity,
    Trace,
    Positivity,
    NonFinite,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValidationFailure::Shape => "shape",
            ValidationFailure::Hermiticity => "hermiticity",
            ValidationFailure::Trace => "trace",
            ValidationFailure::Positivity => "positivity",
            ValidationFailure::NonFinite => "finiteness",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn into_result(self) -> Result<()> {
        if self.passed() {
            return Ok(());
        }
        let names: Vec<String> = self.failures.iter().map(|f| f.to_string()).collect();
        Err(Error::Contract(format!(
            "density matrix invariant(s) violated: {} (hermiticity deviation {:e}, trace deviation {:e}, min eigenvalue {:e})",
            names.join(", "),
            self.hermiticity_deviation,
            self.trace_deviation,
            self.min_eigenvalue
        )))
    }
}

/// Checks Hermiticity (1e−10), unit trace (1e−10) and positivity (min eigenvalue ≥ −1e−9).
pub fn validate(matrix: &ComplexMatrix, shape: &SystemShape) -> ValidationReport {
    let d = shape.total_dim();
    if matrix.rows() != d || matrix.cols() != d {
        return ValidationReport {
            hermiticity_deviation: f64::NAN,
            trace_deviation: f64::NAN,
            min_eigenvalue: f64::NAN,
            failures: vec![ValidationFailure::Shape],
        };
    }
    if !matrix.is_finite() {
        return ValidationReport {
            hermiticity_deviation: f64::NAN,
            trace_deviation: f64::NAN,
            min_eigenvalue: f64::NAN,
            failures: vec![ValidationFailure::NonFinite],
        };
    }
    let mut failures = Vec::new();
    let herm = matrix.hermiticity_deviation();
    if herm > HERMITIAN_TOL {
        failures.push(ValidationFailure::Hermiticity);
    }
    let tr = matrix.trace();
    let trace_dev = (tr - Complex64::new(1.0, 0.0)).norm();
    if trace_dev > TRACE_TOL {
        failures.push(ValidationFailure::Trace);
    }
    let hpart = ComplexMatrix::from_fn(d, d, |r, c| (matrix[(r, c)] + matrix[(c, r)].conj()) * 0.5);
    let min_eig = match hermitian_eigenvalues(&hpart) {
        Ok(v) => v.first().copied().unwrap_or(0.0),
        Err(_) => f64::NAN,
    };
    if min_eig.is_nan() || min_eig < -POSITIVITY_TOL {
        failures.push(ValidationFailure::Positivity);
    }
    ValidationReport {
        hermiticity_deviation: herm,
        trace_deviation: trace_dev,
        min_eigenvalue: min_eig,
        failures,
    }
}

/// Hermitian, unit-trace, positive semidefinite operator over a [`SystemShape`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    shape: SystemShape,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(shape: SystemShape, matrix: ComplexMatrix) -> Result<Self> {
        validate(&matrix, &shape).into_result()?;
        Ok(Self { shape, matrix })
    }

    /// For operators that are valid by construction (convex combinations of valid states).
    pub(crate) fn new_unchecked(shape: SystemShape, matrix: ComplexMatrix) -> Self {
        Self { shape, matrix }
    }

    pub fn maximally_mixed(shape: SystemShape) -> Self {
        let d = shape.total_dim();
        let matrix = ComplexMatrix::identity(d).scale(1.0 / d as f64);
        Self { shape, matrix }
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

impl From<&KetVector> for DensityMatrix {
    fn from(k: &KetVector) -> Self {
        k.to_density()
    }
}

/// Convex combination Σ p_i |ψ_i⟩⟨ψ_i| with nonnegative weights summing to 1.
#[derive(Clone, Debug)]
pub struct MixtureSpec {
    components: Vec<(f64, KetVector)>,
}

impl MixtureSpec {
    pub fn new(components: Vec<(f64, KetVector)>) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::Contract("mixture has no components".into()));
        };
        let shape = first.shape().clone();
        let mut sum = 0.0;
        for (w, k) in &components {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::Contract(format!(
                    "mixture weight {w} is not nonnegative"
                )));
            }
            if k.shape() != &shape {
                return Err(Error::Shape(format!(
                    "mixture component has shape {} but the first has {shape}",
                    k.shape()
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Contract(format!(
                "mixture weights sum to {sum:.15}, not 1"
            )));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, KetVector)] {
        &self.components
    }

    pub fn to_density(&self) -> DensityMatrix {
        let shape = self.components[0].1.shape().clone();
        let d = shape.total_dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for (w, k) in &self.components {
            let a = k.amplitudes();
            for r in 0..d {
                if a[r] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    m[(r, c)] += a[r] * a[c].conj() * *w;
                }
            }
        }
        DensityMatrix::new_unchecked(shape, m)
    }
}

/// One-parameter white-noise family ρ(x) = (x/D)·I + (1 − x)·base, x ∈ [0, 1].
#[derive(Clone, Debug)]
pub struct NoisyFamily {
    base: DensityMatrix,
    parameter: String,
    label: String,
}

impl NoisyFamily {
    pub fn new(base: DensityMatrix) -> Self {
        Self {
            base,
            parameter: "x".into(),
            label: "white-noise".into(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_parameter(mut self, name: impl Into<String>) -> Self {
        self.parameter = name.into();
        self
    }

    pub fn base(&self) -> &DensityMatrix {
        &self.base
    }

    pub fn parameter(&self) -> &str {
        &self.parameter
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn member(&self, x: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Contract(format!(
                "family parameter {} = {x} outside [0, 1]",
                self.parameter
            )));
        }
        let shape = self.base.shape().clone();
        let d = shape.total_dim();
        let mut m = self.base.matrix().scale(1.0 - x);
        let diag = x / d as f64;
        for i in 0..d {
            m[(i, i)] += Complex64::new(diag, 0.0);
        }
        Ok(DensityMatrix::new_unchecked(shape, m))
    }
}

pub fn white_noise_family(base: DensityMatrix) -> NoisyFamily {
    NoisyFamily::new(base)
}

/// (Σ_{i<d} |i⟩^{⊗n}) / √d.
pub fn ghz(n: usize, d: usize) -> Result<KetVector> {
    if n < 2 {
        return Err(Error::Contract(format!("GHZ state needs n >= 2, got {n}")));
    }
    let shape = SystemShape::uniform(n, d)?;
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); shape.total_dim()];
    for i in 0..d {
        amps[shape.compose(&vec![i; n])] = amp;
    }
    KetVector::new(shape, amps)
}

/// Equal superposition of the n weight-one qubit basis states.
pub fn w_state(n: usize) -> Result<KetVector> {
    if n < 2 {
        return Err(Error::Contract(format!("W state needs n >= 2, got {n}")));
    }
    let shape = SystemShape::uniform(n, 2)?;
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); shape.total_dim()];
    for k in 0..n {
        amps[1 << k] = amp;
    }
    KetVector::new(shape, amps)
}

/// The eight GHZ-basis vectors used by [`dct_state`], in order
/// ψ₀⁺, ψ₀⁻, ψ₁⁺, ψ₁⁻, ψ₂⁺, ψ₂⁻, ψ₃⁺, ψ₃⁻.
///
/// ψ_k^± = (|k⟩_AB|0⟩_C ± |k̄⟩_AB|1⟩_C)/√2 with k̄ the two-bit complement of k.
pub fn dct_basis() -> Vec<KetVector> {
    let shape = SystemShape::uniform(3, 2).expect("three qubits fit the cap");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(8);
    for k in 0..4usize {
        let k_bar = 3 - k;
        for sign in [1.0, -1.0] {
            let mut amps = vec![Complex64::new(0.0, 0.0); 8];
            amps[k * 2] = Complex64::new(s, 0.0);
            amps[k_bar * 2 + 1] = Complex64::new(sign * s, 0.0);
            out.push(KetVector {
                shape: shape.clone(),
                amps,
            });
        }
    }
    out
}

/// Three-qubit GHZ-diagonal mixture
/// Σ_σ λ₀^σ |ψ₀^σ⟩⟨ψ₀^σ| + Σ_k λ_k (|ψ_k⁺⟩⟨ψ_k⁺| + |ψ_k⁻⟩⟨ψ_k⁻|).
pub fn dct_state(lambda0_plus: f64, lambda0_minus: f64, lambda: [f64; 3]) -> Result<DensityMatrix> {
    let weights = [
        lambda0_plus,
        lambda0_minus,
        lambda[0],
        lambda[0],
        lambda[1],
        lambda[1],
        lambda[2],
        lambda[2],
    ];
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::Contract(format!("DCT weight {w} is negative")));
    }
    let components = weights.into_iter().zip(dct_basis()).collect();
    MixtureSpec::new(components).map(|m| m.to_density())
}

fn gaussian_amplitudes(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect()
}

/// Haar-random pure state, deterministic in `seed`.
pub fn random_pure(shape: &SystemShape, seed: u64) -> KetVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = gaussian_amplitudes(&mut rng, shape.total_dim());
    KetVector::normalized(shape.clone(), amps).expect("Gaussian vector is nonzero")
}

/// Mixture of `rank` Haar-random pure states with uniformly random weights.
pub fn random_mixed(shape: &SystemShape, rank: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rank = rank.max(1);
    let raw: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let components: Vec<(f64, KetVector)> = raw
        .iter()
        .map(|w| {
            let amps = gaussian_amplitudes(&mut rng, shape.total_dim());
            let ket = KetVector::normalized(shape.clone(), amps).expect("nonzero");
            (w / total, ket)
        })
        .collect();
    mixture_density(&components)
}

/// Pure state that factors across a random cut, with Haar-random factors.
pub fn random_biseparable_pure(shape: &SystemShape, seed: u64) -> (KetVector, SubsetMask) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = shape.full_bits();
    let bits = rng.random_range(1..full);
    let cut = SubsetMask::new(bits, shape.parties()).expect("bits in 1..full");
    let a_shape = shape.restrict(cut.bits()).expect("restriction is valid");
    let b_shape = shape
        .restrict(cut.complement().bits())
        .expect("restriction is valid");
    let a = KetVector::normalized(
        a_shape.clone(),
        gaussian_amplitudes(&mut rng, a_shape.total_dim()),
    )
    .expect("nonzero");
    let b = KetVector::normalized(
        b_shape.clone(),
        gaussian_amplitudes(&mut rng, b_shape.total_dim()),
    )
    .expect("nonzero");
    let ket = KetVector::product_over_cut(shape.clone(), cut, &a, &b).expect("dims match");
    (ket, cut)
}

/// Mixture of `count` random biseparable pure states, each over its own random cut.
pub fn random_biseparable_mixture(shape: &SystemShape, count: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = count.max(1);
    let raw: Vec<f64> = (0..count).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let components: Vec<(f64, KetVector)> = raw
        .iter()
        .map(|w| {
            let (ket, _) = random_biseparable_pure(shape, rng.random());
            (w / total, ket)
        })
        .collect();
    mixture_density(&components)
}

fn mixture_density(components: &[(f64, KetVector)]) -> DensityMatrix {
    // Weights are normalized by construction, so validation cannot fail.
    MixtureSpec {
        components: components.to_vec(),
    }
    .to_density()
}
