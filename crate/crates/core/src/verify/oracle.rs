//! Dense Jordan-Wigner operators built from Kronecker products.
//!
//! The operators are assembled independently of the bit-mask sign rule in
//! [`crate::fock`]: mode `i` acts as `sigma^+ = |1><0|` on tensor factor `i`
//! (counted from the right) with `Z = diag(1, -1)` on every factor to its
//! right. A basis index therefore equals the occupation bit mask.

use crate::error::{Error, Result};
use crate::fock::StateVector;
use crate::linalg::{kron, re, CMatrix, CVector, C64};

/// Largest register size for the dense squeezing oracle (`4^d` dimensions).
pub const MAX_ORACLE_DIM: usize = 4;

/// Dense `a_mode†` on `modes` modes.
pub fn dense_creation(modes: usize, mode: usize) -> Result<CMatrix> {
    if mode >= modes || modes > 12 {
        return Err(Error::domain(format!("mode {mode} of {modes} outside the dense oracle range")));
    }
    let id = CMatrix::identity(2, 2);
    let z = CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.0), re(-1.0)]));
    let mut sp = CMatrix::zeros(2, 2);
    sp[(1, 0)] = re(1.0);
    // Factors from the leftmost (highest mode) to the rightmost (mode 0).
    let mut op = CMatrix::identity(1, 1);
    for m in (0..modes).rev() {
        let f = match m.cmp(&mode) {
            std::cmp::Ordering::Greater => &id,
            std::cmp::Ordering::Equal => &sp,
            std::cmp::Ordering::Less => &z,
        };
        op = kron(&op, f);
    }
    Ok(op)
}

pub fn dense_annihilation(modes: usize, mode: usize) -> Result<CMatrix> {
    Ok(dense_creation(modes, mode)?.adjoint())
}

/// Dense amplitude vector of a sparse state.
pub fn to_dense(s: &StateVector) -> CVector {
    let mut v = CVector::zeros(1 << s.modes());
    for (state, amp) in s.iter() {
        v[state.bits() as usize] = amp;
    }
    v
}

fn check_register(d: usize) -> Result<()> {
    if d == 0 || d > MAX_ORACLE_DIM {
        return Err(Error::domain(format!("dense oracle supports 1 <= d <= {MAX_ORACLE_DIM}, got {d}")));
    }
    Ok(())
}

/// `r sum_i (a_i† c_i† - c_i a_i)` on the `2d`-mode space (`A_i` is mode `i`,
/// `C_i` is mode `d + i`).
pub fn squeezing_generator(d: usize, r: f64) -> Result<CMatrix> {
    check_register(d)?;
    let n = 2 * d;
    let mut g = CMatrix::zeros(1 << n, 1 << n);
    for i in 0..d {
        let ad = dense_creation(n, i)?;
        let cd = dense_creation(n, d + i)?;
        let pair = &ad * &cd;
        g += &pair - pair.adjoint();
    }
    Ok(g * re(r))
}

/// `exp` of [`squeezing_generator`] by dense scaling and squaring.
pub fn squeezing_unitary(d: usize, r: f64) -> Result<CMatrix> {
    Ok(squeezing_generator(d, r)?.exp())
}

/// Squeezing unitary applied to the vacuum.
pub fn oracle_squeezed_vacuum(d: usize, r: f64) -> Result<CVector> {
    let u = squeezing_unitary(d, r)?;
    Ok(u.column(0).into_owned())
}

/// Squeezing unitary applied to `sum_i beta_i a_i† |vac>` (`beta` by mode).
pub fn oracle_isometry_apply(d: usize, r: f64, beta: &[C64]) -> Result<CVector> {
    check_register(d)?;
    if beta.len() != d {
        return Err(Error::precondition("beta length differs from d"));
    }
    let n = 2 * d;
    let mut input = CVector::zeros(1 << n);
    for (i, &b) in beta.iter().enumerate() {
        input += dense_creation(n, i)?.column(0) * b;
    }
    Ok(squeezing_unitary(d, r)? * input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{squeezed_vacuum, OccupationState};

    #[test]
    fn dense_operators_obey_anticommutation() {
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let ai = dense_annihilation(n, i).unwrap();
                let aj = dense_annihilation(n, j).unwrap();
                let ajd = aj.adjoint();
                let anti = &ai * &ajd + &ajd * &ai;
                let expected = if i == j { CMatrix::identity(8, 8) } else { CMatrix::zeros(8, 8) };
                assert!((anti - expected).norm() < 1e-14);
                assert!((&ai * &aj + &aj * &ai).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn dense_creation_matches_sparse_sign_rule() {
        let n = 4;
        for bits in 0..16u64 {
            let s = StateVector::basis(OccupationState::new(n, bits).unwrap()).unwrap();
            for m in 0..n {
                let sparse = to_dense(&s.apply_creation(m).unwrap());
                let dense = dense_creation(n, m).unwrap() * to_dense(&s);
                assert!((sparse - dense).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn qutrit_squeezed_vacuum_matches_dense_exponential() {
        let r = 0.3;
        let sparse = to_dense(&squeezed_vacuum(3, r).unwrap());
        let dense = oracle_squeezed_vacuum(3, r).unwrap();
        assert!((sparse - dense).norm() < 1e-12);
    }

    #[test]
    fn oracle_rejects_large_registers() {
        assert!(squeezing_unitary(5, 0.1).is_err());
    }
}
