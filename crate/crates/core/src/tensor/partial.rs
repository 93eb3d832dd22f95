//! Partial trace, partial transpose and realignment over mixed-radix indices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::matrix::ComplexMatrix;
use crate::tensor::shape::{SubsetMask, SystemShape};

fn check_operator(rho: &ComplexMatrix, shape: &SystemShape) -> Result<()> {
    let d = shape.total_dim();
    if rho.rows() != d || rho.cols() != d {
        return Err(Error::Shape(format!(
            "operator is {}x{} but shape {shape} needs {d}x{d}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// For each composite index, its sub-index inside the parties selected by `bits` and
/// inside the remaining parties (both big-endian in original party order).
pub(crate) fn split_indices(shape: &SystemShape, bits: u32) -> (Vec<usize>, Vec<usize>) {
    let dims = shape.dims();
    let total = shape.total_dim();
    let mut inner = Vec::with_capacity(total);
    let mut outer = Vec::with_capacity(total);
    for idx in 0..total {
        let digits = shape.digits(idx);
        let (mut a, mut b) = (0usize, 0usize);
        for (k, (&digit, &d)) in digits.iter().zip(dims).enumerate() {
            if bits & (1 << k) != 0 {
                a = a * d + digit;
            } else {
                b = b * d + digit;
            }
        }
        inner.push(a);
        outer.push(b);
    }
    (inner, outer)
}

/// Reduced operator on the parties in `keep_bits` (any subset, including all).
pub(crate) fn partial_trace_bits(
    rho: &ComplexMatrix,
    shape: &SystemShape,
    keep_bits: u32,
) -> Result<ComplexMatrix> {
    check_operator(rho, shape)?;
    if keep_bits == shape.full_bits() {
        return Ok(rho.clone());
    }
    let keep_dim = shape.dim_of(keep_bits);
    let traced_dim = shape.total_dim() / keep_dim;
    let (kidx, tidx) = split_indices(shape, keep_bits);
    // groups[t] lists (composite, kept) pairs sharing traced sub-index t.
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(keep_dim); traced_dim];
    for (c, (&k, &t)) in kidx.iter().zip(&tidx).enumerate() {
        groups[t].push((c, k));
    }
    let mut out = ComplexMatrix::zeros(keep_dim, keep_dim);
    for group in &groups {
        for &(r, kr) in group {
            for &(c, kc) in group {
                out[(kr, kc)] += rho[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Traces out every subsystem outside `keep`, returning ρ_keep.
pub fn partial_trace(
    rho: &ComplexMatrix,
    shape: &SystemShape,
    keep: SubsetMask,
) -> Result<ComplexMatrix> {
    keep.check(shape)?;
    partial_trace_bits(rho, shape, keep.bits())
}

/// Transposes the tensor factors in `part`.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    shape: &SystemShape,
    part: SubsetMask,
) -> Result<ComplexMatrix> {
    part.check(shape)?;
    check_operator(rho, shape)?;
    let strides = shape.strides();
    // Contribution of the `part` digits to each composite index.
    let part_component: Vec<usize> = (0..shape.total_dim())
        .map(|idx| {
            let digits = shape.digits(idx);
            part.members().iter().map(|&k| digits[k] * strides[k]).sum()
        })
        .collect();
    let d = shape.total_dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        let pr = part_component[r];
        for c in 0..d {
            let pc = part_component[c];
            out[(r - pr + pc, c - pc + pr)] = rho[(r, c)];
        }
    }
    Ok(out)
}

/// Realignment R(ρ)_{(i,j),(k,l)} = ρ_{(i,k),(j,l)} of an operator on a bipartite shape.
pub fn realign(rho: &ComplexMatrix, shape2: &SystemShape) -> Result<ComplexMatrix> {
    if shape2.parties() != 2 {
        return Err(Error::Shape(format!(
            "realignment needs a bipartite shape, got {shape2}"
        )));
    }
    check_operator(rho, shape2)?;
    let (da, db) = (shape2.dims()[0], shape2.dims()[1]);
    let mut out = ComplexMatrix::zeros(da * da, db * db);
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    out[(i * da + j, k * db + l)] = rho[(i * db + k, j * db + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Re-expresses ρ as a bipartite operator on (cut, complement) with the cut's parties
/// as the leading factor; returns the permuted operator and its two-party shape.
pub fn bipartite_view(
    rho: &ComplexMatrix,
    shape: &SystemShape,
    cut: SubsetMask,
) -> Result<(ComplexMatrix, SystemShape)> {
    cut.check(shape)?;
    check_operator(rho, shape)?;
    let da = shape.dim_of(cut.bits());
    let db = shape.total_dim() / da;
    let (aidx, bidx) = split_indices(shape, cut.bits());
    let perm: Vec<usize> = aidx.iter().zip(&bidx).map(|(&a, &b)| a * db + b).collect();
    let d = shape.total_dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for c in 0..d {
            out[(perm[r], perm[c])] = rho[(r, c)];
        }
    }
    Ok((out, SystemShape::with_cap(vec![da, db], usize::MAX)?))
}

/// Reduced density matrix of a pure state, ρ_keep = M M† with M the (keep × rest) reshape.
pub(crate) fn reduced_from_ket(
    amps: &[Complex64],
    shape: &SystemShape,
    keep_bits: u32,
) -> ComplexMatrix {
    let keep_dim = shape.dim_of(keep_bits);
    let rest_dim = shape.total_dim() / keep_dim;
    let (kidx, ridx) = split_indices(shape, keep_bits);
    let mut m = vec![Complex64::new(0.0, 0.0); keep_dim * rest_dim];
    for (c, &a) in amps.iter().enumerate() {
        m[kidx[c] * rest_dim + ridx[c]] = a;
    }
    ComplexMatrix::from_fn(keep_dim, keep_dim, |r, c| {
        m[r * rest_dim..(r + 1) * rest_dim]
            .iter()
            .zip(&m[c * rest_dim..(c + 1) * rest_dim])
            .map(|(x, y)| x * y.conj())
            .sum()
    })
}
