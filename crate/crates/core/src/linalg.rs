//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Binomial coefficient as a float; zero outside `0 <= k <= n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round_if_exact()
}

trait RoundIfExact {
    fn round_if_exact(self) -> Self;
}

impl RoundIfExact for f64 {
    // Products of ratios accumulate ulp noise; binomials below 2^53 are integers.
    fn round_if_exact(self) -> Self {
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

pub fn binomial_usize(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Hermitian part `(m + m†)/2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * re(0.5)
}

/// Largest entrywise modulus of `m - m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if vals.iter().any(|v| !v.is_finite()) {
        // The complex solver occasionally breaks down on large sparse inputs
        // with entries spread over many magnitudes.
        let (pairs, _) = embedded_eigh(m);
        vals = pairs.into_iter().step_by(2).collect();
    }
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Eigen-decomposition of the Hermitian part of `m`: ascending eigenvalues and
/// the matching eigenvectors as columns.
pub fn hermitian_eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(hermitian_part(m));
    if eig.eigenvalues.iter().chain(eig.eigenvectors.iter().map(|z| &z.re)).all(|v| v.is_finite()) {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
        return (vals, vecs);
    }
    let (pairs, cands) = embedded_eigh(m);
    // Each eigenvalue appears twice; keep an orthonormal complex basis by
    // Gram-Schmidt over the candidates in ascending order.
    let mut vals = Vec::with_capacity(n);
    let mut vecs = CMatrix::zeros(n, n);
    for (lambda, v) in pairs.iter().zip(cands.column_iter()) {
        if vals.len() == n {
            break;
        }
        let mut w = v.into_owned();
        for j in 0..vals.len() {
            let u = vecs.column(j);
            let proj = u.dotc(&w);
            w -= u * proj;
        }
        let norm = w.norm();
        if norm > 0.5 {
            vecs.set_column(vals.len(), &w.unscale(norm));
            vals.push(*lambda);
        }
    }
    (vals, vecs)
}

/// Eigen-decomposition through the real symmetric embedding
/// `[[A, -B], [B, A]]` of `A + iB`. Returns the `2n` ascending eigenvalues
/// and the candidate complex eigenvectors `x + iy` as columns.
fn embedded_eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let mut h = hermitian_part(m);
    // Entries many orders below the scale can stall the shifted QR sweeps.
    let floor = 1e-15 * h.iter().fold(0.0f64, |a, z| a.max(z.norm()));
    h.iter_mut().filter(|z| z.norm() < floor).for_each(|z| *z = C64::new(0.0, 0.0));
    let n = h.nrows();
    let emb = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, col| {
        let z = h[(r % n, col % n)];
        match (r < n, col < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let eig = SymmetricEigen::new(emb);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, 2 * n, |r, col| {
        let v = eig.eigenvectors.column(order[col]);
        C64::new(v[r], v[r + n])
    });
    (vals, vecs)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Outer product `|u><v|`.
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

/// Partial transpose of the second tensor factor of a `(da*db) x (da*db)` matrix.
pub fn partial_transpose_second(m: &CMatrix, da: usize, db: usize) -> Result<CMatrix> {
    if m.nrows() != da * db || m.ncols() != da * db {
        return Err(Error::precondition(format!(
            "matrix of size {}x{} does not factor as {}x{}",
            m.nrows(),
            m.ncols(),
            da,
            db
        )));
    }
    Ok(CMatrix::from_fn(da * db, da * db, |row, col| {
        let (a, b) = (row / db, row % db);
        let (a2, b2) = (col / db, col % db);
        m[(a * db + b2, a2 * db + b)]
    }))
}

/// Partial trace over the first factor of a `(da*db)`-dimensional operator.
pub fn partial_trace_first(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(db, db, |b, b2| (0..da).map(|a| m[(a * db + b, a * db + b2)]).sum())
}

/// Partial trace over the second factor.
pub fn partial_trace_second(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da, da, |a, a2| (0..db).map(|b| m[(a * db + b, a2 * db + b)]).sum())
}

/// Minimum-norm least-squares solution of `a x = b` by SVD.
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = SVD::new(a.clone(), true, true);
    let scale = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = scale * 1e-12 * (a.nrows().max(a.ncols()) as f64);
    svd.solve(b, eps).map_err(|e| Error::LinAlg(e.to_string()))
}

/// Right singular vector of the smallest singular value, with the two
/// smallest singular values (ascending).
pub fn smallest_right_singular(a: &CMatrix) -> Result<(CVector, f64, f64)> {
    let n = a.ncols();
    if n == 0 {
        return Err(Error::LinAlg("empty system".into()));
    }
    // Pad wide systems so the SVD yields a full right basis.
    let padded = if a.nrows() < n { a.clone().resize_vertically(n, C64::new(0.0, 0.0)) } else { a.clone() };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::LinAlg("SVD did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let s0 = svd.singular_values[order[0]];
    let s1 = if n > 1 { svd.singular_values[order[1]] } else { f64::INFINITY };
    let v = v_t.row(order[0]).adjoint();
    Ok((v, s0, s1))
}
