use crate::capacity::LogBase;
use crate::channels::{
    complementary_channel, grassmann_channel, grouped_index, modes_from_rails, ChannelRep, DensityMatrix,
};
use crate::error::{Error, Result};
use crate::fock::{isometry_apply, split_ac};
use crate::linalg::{hermitian_eigenvalues, hermitian_eigh, CMatrix, CVector};

/// `-sum lambda ln lambda` over eigenvalues above `1e-14`.
pub(crate) fn entropy_nats(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).into_iter().filter(|&l| l > 1e-14).map(|l| -l * l.ln()).sum()
}

/// Von Neumann entropy; `d` fixes the base when `base` is [`LogBase::D`].
pub fn von_neumann_entropy(rho: &DensityMatrix, base: LogBase, d: usize) -> f64 {
    base.from_nats(entropy_nats(rho.entries()), d)
}

/// `H(A) - H(C)` of the isometry image of a purification of `rho_in`.
///
/// The reduced states are accumulated from the sparse images of the
/// eigenvectors of `rho_in`, so no channel matrices are involved.
pub fn coherent_information(d: usize, r: f64, rho_in: &DensityMatrix, base: LogBase) -> Result<f64> {
    if rho_in.dim() != d {
        return Err(Error::precondition(format!("input has dimension {}, expected {d}", rho_in.dim())));
    }
    let n = (1usize << d) - 1;
    let mut rho_a = CMatrix::zeros(n, n);
    let mut rho_c = CMatrix::zeros(n, n);
    let (vals, vecs) = hermitian_eigh(rho_in.entries());
    for (i, &lambda) in vals.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let v: CVector = vecs.column(i).into_owned();
        let phi = isometry_apply(d, r, &modes_from_rails(&v))?;
        let terms: Vec<(usize, usize, _)> = phi
            .iter()
            .map(|(s, amp)| {
                let (a, c) = split_ac(d, s.bits());
                (grouped_index(d, a, 1), grouped_index(d, c, 0), amp)
            })
            .collect();
        // Different eigenvectors live on orthogonal purifying levels, so the
        // reduced states add with weights lambda.
        for &(a1, c1, x) in &terms {
            for &(a2, c2, y) in &terms {
                if c1 == c2 {
                    rho_a[(a1, a2)] += x * y.conj() * lambda;
                }
                if a1 == a2 {
                    rho_c[(c1, c2)] += x * y.conj() * lambda;
                }
            }
        }
    }
    Ok(base.from_nats(entropy_nats(&rho_a) - entropy_nats(&rho_c), d))
}

/// Coherent information from a channel and its complement.
pub fn coherent_information_kraus(
    channel: &ChannelRep,
    complement: &ChannelRep,
    rho: &CMatrix,
    base: LogBase,
) -> Result<f64> {
    let a = channel.apply_operator(rho)?;
    let c = complement.apply_operator(rho)?;
    Ok(base.from_nats(entropy_nats(&a) - entropy_nats(&c), channel.in_dim()))
}

/// Holevo quantity `H(sum p N(s)) - sum p H(N(s))` of an ensemble through a channel.
pub fn holevo_quantity_for(channel: &ChannelRep, ensemble: &[(f64, CMatrix)], base: LogBase) -> Result<f64> {
    let n = channel.out_dim();
    let mut avg = CMatrix::zeros(n, n);
    let mut mean_entropy = 0.0;
    for (p, sigma) in ensemble {
        let out = channel.apply_operator(sigma)?;
        mean_entropy += p * entropy_nats(&out);
        avg += out * crate::linalg::re(*p);
    }
    Ok(base.from_nats(entropy_nats(&avg) - mean_entropy, channel.in_dim()))
}

/// Holevo quantity of an ensemble through the Grassmann channel.
pub fn holevo_quantity(d: usize, r: f64, ensemble: &[(f64, DensityMatrix)], base: LogBase) -> Result<f64> {
    let total: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if ensemble.is_empty() || ensemble.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > 1e-10 {
        return Err(Error::precondition("ensemble probabilities must be nonnegative and sum to 1"));
    }
    let ch = grassmann_channel(d, r)?;
    let ens: Vec<(f64, CMatrix)> = ensemble.iter().map(|(p, s)| (*p, s.entries().clone())).collect();
    holevo_quantity_for(&ch, &ens, base)
}

/// Coherent information through the Kraus route (used by the optimizer).
pub(crate) fn coherent_information_channels(d: usize, r: f64) -> Result<(ChannelRep, ChannelRep)> {
    Ok((grassmann_channel(d, r)?, complementary_channel(d, r)?))
}
