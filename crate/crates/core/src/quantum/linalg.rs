//! Small dense helpers on multipartite state vectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::model::index::MixedRadix;

pub type Cx = Complex64;
pub type CMat = DMatrix<Cx>;
pub type CVec = DVector<Cx>;

/// Applies `op` to tensor factor `party` of `state`.
pub fn apply_local(state: &CVec, dims: &[usize], party: usize, op: &CMat) -> CVec {
    let d = dims[party];
    let right: usize = dims[party + 1..].iter().product();
    let left: usize = dims[..party].iter().product();
    let mut out = CVec::zeros(state.len());
    for l in 0..left {
        for i in 0..d {
            let dst = (l * d + i) * right;
            for j in 0..d {
                let c = op[(i, j)];
                if c == Cx::new(0.0, 0.0) {
                    continue;
                }
                let src = (l * d + j) * right;
                for r in 0..right {
                    out[dst + r] += c * state[src + r];
                }
            }
        }
    }
    out
}

/// `Σ_{rest} φ[.., i, ..] conj(ψ[.., j, ..])`: the operator `R` with
/// `⟨ψ| A ⊗ rest |ψ⟩ = tr(A R)` when `φ = (1 ⊗ rest) ψ`.
pub fn reduced_cross(phi: &CVec, psi: &CVec, dims: &[usize], party: usize) -> CMat {
    let d = dims[party];
    let right: usize = dims[party + 1..].iter().product();
    let left: usize = dims[..party].iter().product();
    let mut out = CMat::zeros(d, d);
    for l in 0..left {
        for i in 0..d {
            for j in 0..d {
                let (pi, pj) = ((l * d + i) * right, (l * d + j) * right);
                let mut acc = Cx::new(0.0, 0.0);
                for r in 0..right {
                    acc += phi[pi + r] * psi[pj + r].conj();
                }
                out[(i, j)] += acc;
            }
        }
    }
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

/// Reorders tensor factors: new factor `k` is old factor `perm[k]`.
pub fn permute_factors(state: &CVec, dims: &[usize], perm: &[usize]) -> CVec {
    let old = MixedRadix::new(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new = MixedRadix::new(&new_dims);
    let mut out = CVec::zeros(state.len());
    let mut digits = vec![0; dims.len()];
    let mut moved = vec![0; dims.len()];
    for idx in 0..old.len() {
        old.decode_into(idx, &mut digits);
        for (k, &p) in perm.iter().enumerate() {
            moved[k] = digits[p];
        }
        out[new.encode(&moved)] = state[idx];
    }
    out
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn max_abs_entry(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of a Hermitian matrix (the strict upper part is ignored
/// after symmetrization).
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = hermitian_part(m).symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn spectral_map(m: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let n = vals.len();
    let mut diag = CMat::zeros(n, n);
    for (i, v) in vals.iter().enumerate() {
        diag[(i, i)] = Cx::new(f(*v), 0.0);
    }
    hermitian_part(&(&vecs * diag * vecs.adjoint()))
}

/// Matrix sign of a Hermitian matrix; eigenvalues at (numerical) zero map to `+1`.
pub fn hermitian_sign(m: &CMat) -> CMat {
    spectral_map(m, |v| if v >= -1e-12 { 1.0 } else { -1.0 })
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMat {
    CMat::from_row_iterator(rows, cols, entries.iter().map(|&v| Cx::new(v, 0.0)))
}
