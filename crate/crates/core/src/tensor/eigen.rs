//! Cyclic Jacobi eigensolver for small dense Hermitian matrices, and the
//! singular-value / trace-norm routines built on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::matrix::ComplexMatrix;

/// Max |h − h†| accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Negative eigenvalues of a PSD Gram matrix down to this (relative) level are clamped to 0.
pub const CLAMP_TOL: f64 = 1e-12;

/// Below this (relative) level a Gram eigenvalue is a hard numeric failure.
pub const NEGATIVE_FAIL_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) with the matching unit eigenvectors as columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(values) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| self.vectors[(r, k)] * self.values[k] * self.vectors[(c, k)].conj())
                .sum()
        })
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.values.len())
            .map(|r| self.vectors[(r, k)])
            .collect()
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::Contract(format!(
            "eigenproblem needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_finite() {
        return Err(Error::Numeric("matrix contains non-finite entries".into()));
    }
    let dev = h.hermiticity_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian: max |h - h^dagger| = {dev:e}"
        )));
    }
    Ok(())
}

/// Full Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let (values, vt, order) = jacobi(h, true)?;
    let n = values.len();
    let vt = vt.expect("vectors requested");
    let vectors = ComplexMatrix::from_fn(n, n, |r, k| vt[order[k] * n + r]);
    Ok(HermitianEigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors,
    })
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    let (values, _, order) = jacobi(h, false)?;
    Ok(order.iter().map(|&i| values[i]).collect())
}

fn off_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for r in 0..n {
        for c in r + 1..n {
            acc += a[r * n + c].norm_sqr();
        }
    }
    (2.0 * acc).sqrt()
}

/// Unsorted eigenvalues, optional eigenvectors stored as rows (row k is
/// eigenvector k), and the ascending order of the eigenvalues.
type JacobiOutput = (Vec<f64>, Option<Vec<Complex64>>, Vec<usize>);

fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> Result<JacobiOutput> {
    check_hermitian(h)?;
    let n = h.rows();
    // Work on the exactly Hermitian part.
    let mut a: Vec<Complex64> = (0..n * n)
        .map(|i| {
            let (r, c) = (i / n, i % n);
            (h[(r, c)] + h[(c, r)].conj()) * 0.5
        })
        .collect();
    let mut vt = want_vectors.then(|| {
        let mut v = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i * n + i] = Complex64::new(1.0, 0.0);
        }
        v
    });

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = f64::EPSILON * 1e-2 * scale;
    let mut off = off_norm(&a, n);
    let mut sweeps = 0;
    while off > target && sweeps < MAX_SWEEPS {
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                rotate(&mut a, vt.as_deref_mut(), n, p, q);
            }
        }
        sweeps += 1;
        off = off_norm(&a, n);
    }
    // Rounding can stall the off-norm marginally above the strict target.
    if off > target && off > 1e-13 * scale.max(1.0) {
        return Err(Error::Numeric(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps (off-norm {off:e})"
        )));
    }

    let values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    Ok((values, vt, order))
}

/// One Jacobi rotation annihilating `a[p][q]`; accumulates the unitary into the
/// row-stored eigenvectors `vt`.
fn rotate(a: &mut [Complex64], vt: Option<&mut [Complex64]>, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // Phase e^{-iθ} turning a[p][q] real and positive.
    let phase = apq.conj() / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // U = [[c, s], [-s·phase, c·phase]] on the (p, q) plane; A ← U† A U.
    // Rows p, q of the result: a'_pk = c a_pk + conj(u_qp) a_qk, a'_qk = s a_pk + conj(u_qq) a_qk.
    let u_qp = -phase * s;
    let u_qq = phase * c;
    let (cu_qp, cu_qq) = (u_qp.conj(), u_qq.conj());
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        let new_p = apk * c + aqk * cu_qp;
        let new_q = apk * s + aqk * cu_qq;
        a[p * n + k] = new_p;
        a[q * n + k] = new_q;
        a[k * n + p] = new_p.conj();
        a[k * n + q] = new_q.conj();
    }
    a[p * n + p] = Complex64::new(app - t * mag, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);

    if let Some(vt) = vt {
        // Columns p, q of V ← V U, i.e. rows p, q of the stored transpose.
        let (head, tail) = vt.split_at_mut(q * n);
        let row_p = &mut head[p * n..(p + 1) * n];
        let row_q = &mut tail[..n];
        for (vp, vq) in row_p.iter_mut().zip(row_q.iter_mut()) {
            let (x, y) = (*vp, *vq);
            *vp = x * c + y * u_qp;
            *vq = x * s + y * u_qq;
        }
    }
}

/// Clamps tiny negative eigenvalues of a positive semidefinite matrix to zero.
///
/// `scale` sets the magnitude the tolerances are relative to.
pub fn clamp_psd(values: &mut [f64], scale: f64) -> Result<()> {
    let scale = scale.max(1.0);
    for v in values.iter_mut() {
        if *v < -NEGATIVE_FAIL_TOL * scale {
            return Err(Error::Numeric(format!(
                "eigenvalue {v:e} of a positive semidefinite matrix is negative"
            )));
        }
        if *v < 0.0 {
            // Between the clamp and failure levels we still clamp; the value is rounding noise.
            *v = 0.0;
        }
    }
    Ok(())
}

/// Singular values (descending) from the eigenvalues of the smaller Gram matrix.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = if m.rows() <= m.cols() {
        m.matmul(&m.adjoint())?
    } else {
        m.adjoint().matmul(m)?
    };
    let n = gram.rows();
    let gram = ComplexMatrix::from_fn(n, n, |r, c| (gram[(r, c)] + gram[(c, r)].conj()) * 0.5);
    let scale = (0..n).map(|i| gram[(i, i)].re).fold(0.0, f64::max);
    let mut values = hermitian_eigenvalues(&gram)?;
    clamp_psd(&mut values, scale)?;
    let mut sv: Vec<f64> = values.into_iter().map(f64::sqrt).collect();
    sv.reverse();
    Ok(sv)
}

/// Sum of singular values; Hermitian input goes through Σ|λ| instead.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.is_square() && m.hermiticity_deviation() <= HERMITIAN_TOL {
        let values = hermitian_eigenvalues(m)?;
        return Ok(values.iter().map(|v| v.abs()).sum());
    }
    Ok(singular_values(m)?.iter().sum())
}
