//! Grassmann channels, their sector blocks and complements, and reference
//! channel families, as Kraus representations.
//!
//! Channel inputs are indexed by rail (see [`crate::fock`]). Grassmann channel
//! outputs live on the `2^d - 1` nonempty occupation states of the `A`
//! register, grouped by fermion number `k = 1..=d` and ordered
//! lexicographically inside each sector. Complementary outputs live on the
//! `C` states with `0..d` fermions in the same arrangement.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::ops::Range;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::capacity::block_weights;
use crate::error::{Error, Result};
use crate::fock::{self, split_ac, OccupationState, StateVector};
use crate::linalg::{binomial, binomial_usize, hermiticity_defect, min_eigenvalue, re, trace, CMatrix, CVector, C64};

/// Largest `d` for which channels are built explicitly.
pub const MAX_CHANNEL_DIM: usize = 8;

/// A validated density matrix: Hermitian within `1e-10`, eigenvalues at least
/// `-1e-9`, unit trace within `1e-10`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    basis: String,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix, basis: impl Into<String>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::precondition("density matrix must be square and nonempty"));
        }
        let herm = hermiticity_defect(&entries);
        if herm > 1e-10 {
            return Err(Error::precondition(format!("matrix is not Hermitian (defect {herm:e})")));
        }
        let tr = trace(&entries);
        if (tr - re(1.0)).norm() > 1e-10 {
            return Err(Error::precondition(format!("trace {tr} is not 1")));
        }
        let lo = min_eigenvalue(&entries);
        if lo < -1e-9 {
            return Err(Error::precondition(format!("matrix has negative eigenvalue {lo:e}")));
        }
        Ok(Self { entries, basis: basis.into() })
    }

    /// `|psi><psi|` for a unit vector.
    pub fn pure(psi: &CVector, basis: impl Into<String>) -> Result<Self> {
        let n = psi.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::precondition(format!("state vector has norm {n}")));
        }
        Self::new(psi * psi.adjoint(), basis)
    }

    pub fn maximally_mixed(dim: usize, basis: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        Self::new(CMatrix::identity(dim, dim) * re(1.0 / dim as f64), basis)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }
}

/// One fixed-fermion-number sector of a channel output.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub k: usize,
    pub weight: f64,
    pub dim: usize,
}

/// Channel family and parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelLabel {
    pub family: String,
    pub d: usize,
    pub r: Option<f64>,
    /// Further named parameters (erasure probability, sector index, ...).
    pub params: Vec<(String, f64)>,
}

impl ChannelLabel {
    pub fn new(family: impl Into<String>, d: usize) -> Self {
        Self { family: family.into(), d, r: None, params: Vec::new() }
    }

    fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    fn with(mut self, name: &str, value: f64) -> Self {
        self.params.push((name.to_string(), value));
        self
    }
}

impl fmt::Display for ChannelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(d={}", self.family, self.d)?;
        if let Some(r) = self.r {
            write!(f, ", r={r}")?;
        }
        for (n, v) in &self.params {
            write!(f, ", {n}={v}")?;
        }
        f.write_str(")")
    }
}

/// A CPTP map given by Kraus operators (`out_dim x in_dim` each).
#[derive(Clone, Debug)]
pub struct ChannelRep {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<CMatrix>,
    blocks: Option<Vec<Block>>,
    label: ChannelLabel,
    choi: OnceLock<CMatrix>,
}

impl ChannelRep {
    /// Validates shapes, trace preservation (`1e-10`) and block metadata.
    pub fn new(
        in_dim: usize,
        out_dim: usize,
        kraus: Vec<CMatrix>,
        blocks: Option<Vec<Block>>,
        label: ChannelLabel,
    ) -> Result<Self> {
        if in_dim == 0 || out_dim == 0 || kraus.is_empty() {
            return Err(Error::precondition("channel needs positive dimensions and at least one Kraus operator"));
        }
        if let Some(k) = kraus.iter().find(|k| k.shape() != (out_dim, in_dim)) {
            return Err(Error::precondition(format!(
                "Kraus operator has shape {:?}, expected ({out_dim}, {in_dim})",
                k.shape()
            )));
        }
        if let Some(bl) = &blocks {
            let total: usize = bl.iter().map(|b| b.dim).sum();
            let wsum: f64 = bl.iter().map(|b| b.weight).sum();
            if total != out_dim || bl.iter().any(|b| b.weight < 0.0) || (wsum - 1.0).abs() > 1e-12 {
                return Err(Error::precondition("inconsistent block metadata"));
            }
        }
        let ch = Self { in_dim, out_dim, kraus, blocks, label, choi: OnceLock::new() };
        let defect = ch.trace_preservation_defect();
        if defect > 1e-10 {
            return Err(Error::precondition(format!(
                "{}: Kraus set is not trace preserving (defect {defect:e})",
                ch.label
            )));
        }
        Ok(ch)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn blocks(&self) -> Option<&[Block]> {
        self.blocks.as_deref()
    }

    pub fn label(&self) -> &ChannelLabel {
        &self.label
    }

    /// Output rows occupied by the block with sector index `k`.
    pub fn block_range(&self, k: usize) -> Option<Range<usize>> {
        let mut start = 0;
        for b in self.blocks.as_ref()? {
            if b.k == k {
                return Some(start..start + b.dim);
            }
            start += b.dim;
        }
        None
    }

    /// Largest entry of `sum K^dag K - I`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut s = CMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            s += k.adjoint() * k;
        }
        s -= CMatrix::identity(self.in_dim, self.in_dim);
        s.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `sum K X K^dag` for any `in_dim x in_dim` operator.
    pub fn apply_operator(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::precondition(format!(
                "operator has shape {:?}, channel input dimension is {}",
                x.shape(),
                self.in_dim
            )));
        }
        let mut out = CMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.entries())?;
        DensityMatrix::new(out, self.label.to_string())
    }

    /// Unnormalized Choi matrix `sum_ab |a><b| (x) N(|a><b|)` with the input
    /// factor first; its trace is `in_dim`.
    pub fn choi(&self) -> &CMatrix {
        self.choi.get_or_init(|| {
            let n = self.in_dim * self.out_dim;
            let mut j = CMatrix::zeros(n, n);
            for k in &self.kraus {
                let v = CVector::from_iterator(n, k.iter().copied());
                // Column-major iteration puts K[i,a] at a*out_dim + i.
                j += &v * v.adjoint();
            }
            j
        })
    }

    /// Smallest eigenvalue of the Choi matrix (nonnegative for CP maps).
    pub fn choi_min_eigenvalue(&self) -> f64 {
        min_eigenvalue(self.choi())
    }

    /// Serializable form.
    pub fn to_dump(&self) -> ChannelDump {
        ChannelDump {
            family: self.label.family.clone(),
            d: self.label.d,
            r: self.label.r,
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            kraus: self
                .kraus
                .iter()
                .map(|k| {
                    (0..self.out_dim)
                        .flat_map(|i| (0..self.in_dim).map(move |j| (i, j)))
                        .map(|(i, j)| [k[(i, j)].re, k[(i, j)].im])
                        .collect()
                })
                .collect(),
            blocks: self.blocks.clone().unwrap_or_default(),
        }
    }

    pub fn from_dump(dump: &ChannelDump) -> Result<Self> {
        let mut kraus = Vec::with_capacity(dump.kraus.len());
        for flat in &dump.kraus {
            if flat.len() != dump.in_dim * dump.out_dim {
                return Err(Error::precondition(format!(
                    "Kraus operator has {} entries, expected {}",
                    flat.len(),
                    dump.in_dim * dump.out_dim
                )));
            }
            kraus.push(CMatrix::from_row_iterator(
                dump.out_dim,
                dump.in_dim,
                flat.iter().map(|[a, b]| C64::new(*a, *b)),
            ));
        }
        let blocks = (!dump.blocks.is_empty()).then(|| dump.blocks.clone());
        let label = ChannelLabel { family: dump.family.clone(), d: dump.d, r: dump.r, params: Vec::new() };
        Self::new(dump.in_dim, dump.out_dim, kraus, blocks, label)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_dump())?;
        fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let dump: ChannelDump = serde_json::from_str(&fs::read_to_string(path)?)?;
        Self::from_dump(&dump)
    }
}

/// JSON layout of a channel. Each Kraus operator is flattened row-major into
/// `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelDump {
    pub family: String,
    pub d: usize,
    pub r: Option<f64>,
    pub in_dim: usize,
    pub out_dim: usize,
    pub kraus: Vec<Vec<[f64; 2]>>,
    pub blocks: Vec<Block>,
}

fn check_channel_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_CHANNEL_DIM {
        return Err(Error::domain(format!("channel dimension {d} outside 1..={MAX_CHANNEL_DIM}")));
    }
    Ok(())
}

/// Input vector (indexed by rail) of amplitudes indexed by mode.
pub fn rails_from_modes(beta_by_mode: &[C64]) -> CVector {
    let d = beta_by_mode.len();
    CVector::from_fn(d, |j, _| beta_by_mode[fock::mode_of_rail(d, j)])
}

/// Amplitudes indexed by mode of an input vector indexed by rail.
pub fn modes_from_rails(input: &CVector) -> Vec<C64> {
    let d = input.len();
    (0..d).map(|m| input[fock::rail_of_mode(d, m)]).collect()
}

/// Position of a `d`-mode state among the states with fermion numbers
/// `first..=d`, grouped by fermion number and lexicographic inside a group.
pub(crate) fn grouped_index(d: usize, bits: u64, first: usize) -> usize {
    let s = OccupationState::new(d, bits).expect("bits fit the register");
    let k = s.count();
    (first..k).map(|j| binomial_usize(d, j)).sum::<usize>() + s.rank()
}

/// Environment ordering: fermion number, then lexicographic.
fn env_key(d: usize, bits: u64) -> (usize, u64) {
    let s = OccupationState::new(d, bits).expect("bits fit the register");
    (s.count(), s.lex_key())
}

/// Traces one register out of isometry images of the input basis vectors.
/// `keep_a` selects the register kept as output; `out_pos` places kept states
/// (returning `None` drops them); the other register indexes the Kraus set.
fn kraus_from_images(
    images: &[StateVector],
    d: usize,
    keep_a: bool,
    out_dim: usize,
    out_pos: impl Fn(u64) -> Option<usize>,
    scale: f64,
) -> Vec<CMatrix> {
    let in_dim = images.len();
    let mut ops: BTreeMap<(usize, u64), CMatrix> = BTreeMap::new();
    for (col, img) in images.iter().enumerate() {
        for (state, amp) in img.iter() {
            let (a, c) = split_ac(d, state.bits());
            let (sys, env) = if keep_a { (a, c) } else { (c, a) };
            if let Some(row) = out_pos(sys) {
                ops.entry(env_key(d, env)).or_insert_with(|| CMatrix::zeros(out_dim, in_dim))[(row, col)] +=
                    amp * scale;
            }
        }
    }
    ops.into_values().filter(|k| k.iter().any(|z| *z != C64::default())).collect()
}

fn rail_inputs(d: usize) -> Vec<Vec<C64>> {
    (0..d)
        .map(|j| {
            let mut beta = vec![C64::default(); d];
            beta[fock::mode_of_rail(d, j)] = re(1.0);
            beta
        })
        .collect()
}

fn isometry_images(d: usize, r: f64) -> Result<Vec<StateVector>> {
    rail_inputs(d).iter().map(|b| fock::isometry_apply(d, r, b)).collect()
}

fn unit_images(d: usize) -> Result<Vec<StateVector>> {
    rail_inputs(d).iter().map(|b| fock::dressed_input(d, 1.0, b)).collect()
}

/// The Grassmann channel `psi -> sum_k p_k chi_k(psi)` on `d`-rail inputs.
pub fn grassmann_channel(d: usize, r: f64) -> Result<ChannelRep> {
    check_channel_dim(d)?;
    let images = isometry_images(d, r)?;
    let out_dim = (1usize << d) - 1;
    let kraus = kraus_from_images(&images, d, true, out_dim, |a| Some(grouped_index(d, a, 1)), 1.0);
    let bw = block_weights(d, r)?;
    let blocks = (1..=d).map(|k| Block { k, weight: bw.p[k - 1], dim: binomial_usize(d, k) }).collect();
    ChannelRep::new(d, out_dim, kraus, Some(blocks), ChannelLabel::new("grassmann", d).with_r(r))
}

/// The `r`-independent sector map `G_{d,k}: C^d -> C^{C(d,k)}` producing `chi_k`.
pub fn grassmann_block(d: usize, k: usize) -> Result<ChannelRep> {
    check_channel_dim(d)?;
    if k == 0 || k > d {
        return Err(Error::domain(format!("sector {k} outside 1..={d}")));
    }
    let out_dim = binomial_usize(d, k);
    let scale = 1.0 / binomial(d - 1, k - 1).sqrt();
    let kraus = kraus_from_images(
        &unit_images(d)?,
        d,
        true,
        out_dim,
        |a| (a.count_ones() as usize == k).then(|| OccupationState::new(d, a).unwrap().rank()),
        scale,
    );
    ChannelRep::new(
        d,
        out_dim,
        kraus,
        Some(vec![Block { k, weight: 1.0, dim: out_dim }]),
        ChannelLabel::new("grassmann-block", d).with("k", k as f64),
    )
}

/// Complement of [`grassmann_block`]: the `C`-register state (sector `k-1`)
/// accompanying the `A`-sector `k` part of the isometry image.
pub fn grassmann_block_complement(d: usize, k: usize) -> Result<ChannelRep> {
    check_channel_dim(d)?;
    if k == 0 || k > d {
        return Err(Error::domain(format!("sector {k} outside 1..={d}")));
    }
    let out_dim = binomial_usize(d, k - 1);
    let scale = 1.0 / binomial(d - 1, k - 1).sqrt();
    let images = unit_images(d)?;
    // Keep only the A-sector k part before tracing A.
    let restricted: Vec<StateVector> = images
        .iter()
        .map(|img| {
            StateVector::from_amplitudes(
                2 * d,
                img.iter().filter(|(s, _)| split_ac(d, s.bits()).0.count_ones() as usize == k),
            )
        })
        .collect::<Result<_>>()?;
    let kraus =
        kraus_from_images(&restricted, d, false, out_dim, |c| Some(OccupationState::new(d, c).unwrap().rank()), scale);
    ChannelRep::new(
        d,
        out_dim,
        kraus,
        Some(vec![Block { k: d + 1 - k, weight: 1.0, dim: out_dim }]),
        ChannelLabel::new("grassmann-block-complement", d).with("k", k as f64),
    )
}

/// Complementary Grassmann channel (trace over `A`). The `C` sector holding
/// `j` fermions carries weight `p_tilde_{d-j}` and is labeled `k = d - j`.
pub fn complementary_channel(d: usize, r: f64) -> Result<ChannelRep> {
    check_channel_dim(d)?;
    let images = isometry_images(d, r)?;
    let out_dim = (1usize << d) - 1;
    let kraus = kraus_from_images(&images, d, false, out_dim, |c| Some(grouped_index(d, c, 0)), 1.0);
    let bw = block_weights(d, r)?;
    let blocks = (0..d).map(|j| Block { k: d - j, weight: bw.p_tilde[d - j - 1], dim: binomial_usize(d, j) }).collect();
    ChannelRep::new(d, out_dim, kraus, Some(blocks), ChannelLabel::new("grassmann-complement", d).with_r(r))
}

pub fn identity_channel(n: usize) -> Result<ChannelRep> {
    ChannelRep::new(n, n, vec![CMatrix::identity(n, n)], None, ChannelLabel::new("identity", n))
}

/// Qubit erasure channel `psi -> (1-p) psi (+) p |f><f|`; the flag is the
/// third output level.
pub fn erasure_channel(p: f64) -> Result<ChannelRep> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("erasure probability {p} outside [0, 1]")));
    }
    let mut k0 = CMatrix::zeros(3, 2);
    k0[(0, 0)] = re((1.0 - p).sqrt());
    k0[(1, 1)] = re((1.0 - p).sqrt());
    let mut kraus = vec![k0];
    for a in 0..2 {
        let mut k = CMatrix::zeros(3, 2);
        k[(2, a)] = re(p.sqrt());
        kraus.push(k);
    }
    let blocks = vec![Block { k: 1, weight: 1.0 - p, dim: 2 }, Block { k: 2, weight: p, dim: 1 }];
    ChannelRep::new(2, 3, kraus, Some(blocks), ChannelLabel::new("erasure", 2).with("p", p))
}

/// Werner-Holevo channel `sigma -> (Tr sigma I - sigma^T)/(d-1)` with Kraus
/// operators `(|j><i| - |i><j|)/sqrt(d-1)`, `i < j`.
pub fn werner_holevo(d: usize) -> Result<ChannelRep> {
    if d < 2 {
        return Err(Error::domain(format!("Werner-Holevo channel needs d >= 2, got {d}")));
    }
    let s = 1.0 / ((d - 1) as f64).sqrt();
    let mut kraus = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut k = CMatrix::zeros(d, d);
            k[(j, i)] = re(s);
            k[(i, j)] = re(-s);
            kraus.push(k);
        }
    }
    ChannelRep::new(d, d, kraus, None, ChannelLabel::new("werner-holevo", d))
}

/// The linear map `sigma -> t sigma^T + (1-t) Tr(sigma) I/d`, kept at the
/// level of its Choi matrix. It is completely positive exactly for
/// `-1/(d-1) <= t <= 1/(d+1)`.
#[derive(Clone, Debug)]
pub struct TransposeDepolarizing {
    pub d: usize,
    pub t: f64,
    pub choi: CMatrix,
    /// Whether the Choi matrix is positive semidefinite (within `-1e-9`).
    pub completely_positive: bool,
}

impl TransposeDepolarizing {
    pub fn apply_operator(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.d, self.d) {
            return Err(Error::precondition("operator dimension does not match the map"));
        }
        let id = CMatrix::identity(self.d, self.d);
        Ok(x.transpose() * re(self.t) + id * (trace(x) * (1.0 - self.t) / self.d as f64))
    }
}

pub fn transpose_depolarizing(d: usize, t: f64) -> Result<TransposeDepolarizing> {
    if d < 1 || !t.is_finite() {
        return Err(Error::domain("transpose-depolarizing map needs d >= 1 and finite t"));
    }
    let n = d * d;
    let mut choi = CMatrix::identity(n, n) * re((1.0 - t) / d as f64);
    for a in 0..d {
        for b in 0..d {
            // |a><b| (x) t|b><a| contributes the swap operator.
            choi[(a * d + b, b * d + a)] += re(t);
        }
    }
    let completely_positive = min_eigenvalue(&choi) >= -1e-9;
    Ok(TransposeDepolarizing { d, t, choi, completely_positive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, frobenius, hermitian_eigenvalues};

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.shape() == b.shape() && frobenius(&(a - b)) < tol
    }

    #[test]
    fn identity_choi_is_scaled_bell_projector() {
        let ch = identity_channel(3).unwrap();
        let ev = hermitian_eigenvalues(ch.choi());
        assert!((ev[8] - 3.0).abs() < 1e-12);
        assert!(ev[..8].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn qubit_grassmann_choi_trace_and_kraus_pattern() {
        let ch = grassmann_channel(2, 0.5).unwrap();
        assert!((trace(ch.choi()) - re(2.0)).norm() < 1e-12);
        assert_eq!(ch.out_dim(), 3);
        let nonzero: usize = ch.kraus().iter().map(|k| k.iter().filter(|z| z.norm() > 0.0).count()).sum();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn unsqueezed_channel_is_identity_into_first_block() {
        for d in 1..=5 {
            let ch = grassmann_channel(d, 0.0).unwrap();
            assert_eq!(ch.kraus().len(), 1);
            let k = &ch.kraus()[0];
            assert!(close(&k.rows(0, d).into_owned(), &CMatrix::identity(d, d), 1e-15));
            assert_eq!(ch.blocks().unwrap()[0].weight, 1.0);
        }
    }

    #[test]
    fn one_dimensional_channel_is_trace_map() {
        let ch = grassmann_channel(1, 0.4).unwrap();
        assert_eq!((ch.in_dim(), ch.out_dim()), (1, 1));
        assert_eq!(ch.blocks().unwrap(), &[Block { k: 1, weight: 1.0, dim: 1 }]);
    }

    #[test]
    fn qutrit_second_block_matches_closed_form() {
        let beta = [c(0.3, 0.1), c(-0.5, 0.2), c(0.4, -0.6)];
        let norm = beta.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
        let beta: Vec<C64> = beta.iter().map(|b| b / norm).collect();
        let psi = rails_from_modes(&beta);
        let rho = DensityMatrix::pure(&psi, "rails").unwrap();
        let out = grassmann_block(3, 2).unwrap().apply(&rho).unwrap();
        let (b1, b2, b3) = (beta[0], beta[1], beta[2]);
        let h = re(0.5);
        let expected = CMatrix::from_row_slice(
            3,
            3,
            &[
                h * (b2.norm_sqr() + b3.norm_sqr()),
                h * b2 * b1.conj(),
                -h * b3 * b1.conj(),
                h * b2.conj() * b1,
                h * (b1.norm_sqr() + b3.norm_sqr()),
                h * b3 * b2.conj(),
                -h * b3.conj() * b1,
                h * b3.conj() * b2,
                h * (b1.norm_sqr() + b2.norm_sqr()),
            ],
        );
        assert!(close(out.entries(), &expected, 1e-14));
    }

    #[test]
    fn first_block_is_identity_and_last_is_flag() {
        for d in 1..=5 {
            let b1 = grassmann_block(d, 1).unwrap();
            assert_eq!(b1.kraus().len(), 1);
            assert!(close(&b1.kraus()[0], &CMatrix::identity(d, d), 1e-15));
            let bd = grassmann_block(d, d).unwrap();
            let x = CMatrix::from_fn(d, d, |i, j| c(i as f64, j as f64 - 0.5));
            let y = CMatrix::from_fn(d, d, |i, j| if i == j { re(1.0 / d as f64) } else { x[(i, j)] });
            let out = bd.apply_operator(&y).unwrap();
            assert!((out[(0, 0)] - re(1.0)).norm() < 1e-14);
        }
        assert!(grassmann_block(3, 0).is_err());
        assert!(grassmann_block(3, 4).is_err());
    }

    #[test]
    fn block_weights_are_measured_sector_probabilities() {
        let ch = grassmann_channel(4, 0.6).unwrap();
        let psi = CVector::from_fn(4, |i, _| c(1.0 + i as f64, -(i as f64)));
        let psi = psi.unscale(psi.norm());
        let out = ch.apply(&DensityMatrix::pure(&psi, "rails").unwrap()).unwrap();
        for b in ch.blocks().unwrap() {
            let r = ch.block_range(b.k).unwrap();
            let w: f64 = r.map(|i| out.entries()[(i, i)].re).sum();
            assert!((w - b.weight).abs() < 1e-12);
        }
    }

    #[test]
    fn unsqueezed_complement_outputs_vacuum() {
        let ch = complementary_channel(3, 0.0).unwrap();
        let x = CMatrix::identity(3, 3) * re(1.0 / 3.0);
        let out = ch.apply_operator(&x).unwrap();
        assert!((out[(0, 0)] - re(1.0)).norm() < 1e-15);
        assert!((trace(&out) - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn complement_blocks_carry_reversed_weights() {
        let ch = complementary_channel(3, 0.4).unwrap();
        let bw = block_weights(3, 0.4).unwrap();
        let blocks = ch.blocks().unwrap();
        assert_eq!(blocks.iter().map(|b| b.k).collect::<Vec<_>>(), [3, 2, 1]);
        assert_eq!(blocks.iter().map(|b| b.dim).collect::<Vec<_>>(), [1, 3, 3]);
        for b in blocks {
            assert!((b.weight - bw.p_tilde[b.k - 1]).abs() < 1e-15);
        }
    }

    #[test]
    fn erasure_edges() {
        let e0 = erasure_channel(0.0).unwrap();
        let x = CMatrix::from_row_slice(2, 2, &[re(0.7), c(0.1, 0.2), c(0.1, -0.2), re(0.3)]);
        let out = e0.apply_operator(&x).unwrap();
        assert!(close(&out.view((0, 0), (2, 2)).into_owned(), &x, 1e-15));
        let e1 = erasure_channel(1.0).unwrap();
        let out = e1.apply_operator(&x).unwrap();
        assert!((out[(2, 2)] - re(1.0)).norm() < 1e-15);
        assert!(erasure_channel(1.2).is_err());
    }

    #[test]
    fn werner_holevo_action() {
        let wh = werner_holevo(3).unwrap();
        assert_eq!(wh.kraus().len(), 3);
        let x = CMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64, i as f64 - j as f64));
        let out = wh.apply_operator(&x).unwrap();
        let expected = (CMatrix::identity(3, 3) * trace(&x) - x.transpose()) * re(0.5);
        assert!(close(&out, &expected, 1e-13));
        assert!(werner_holevo(1).is_err());
    }

    #[test]
    fn qubit_werner_holevo_is_single_flip() {
        let wh = werner_holevo(2).unwrap();
        assert_eq!(wh.kraus().len(), 1);
        let td = transpose_depolarizing(2, -1.0).unwrap();
        assert!(close(wh.choi(), &td.choi, 1e-14));
    }

    #[test]
    fn transpose_depolarizing_window() {
        for d in 2..=5 {
            let df = d as f64;
            assert!(transpose_depolarizing(d, -1.0 / (df - 1.0)).unwrap().completely_positive);
            assert!(transpose_depolarizing(d, 1.0 / (df + 1.0)).unwrap().completely_positive);
            assert!(transpose_depolarizing(d, 0.0).unwrap().completely_positive);
            assert!(!transpose_depolarizing(d, -1.0 / (df - 1.0) - 1e-3).unwrap().completely_positive);
            assert!(!transpose_depolarizing(d, 1.0 / (df + 1.0) + 1e-3).unwrap().completely_positive);
            let wh = werner_holevo(d).unwrap();
            assert!(close(wh.choi(), &transpose_depolarizing(d, -1.0 / (df - 1.0)).unwrap().choi, 1e-13));
        }
        let td = transpose_depolarizing(3, 0.0).unwrap();
        assert!(close(&td.choi, &(CMatrix::identity(9, 9) * re(1.0 / 3.0)), 1e-15));
    }

    #[test]
    fn json_round_trip_preserves_choi() {
        let ch = grassmann_channel(3, 0.7).unwrap();
        let back =
            ChannelRep::from_dump(&serde_json::from_str(&serde_json::to_string(&ch.to_dump()).unwrap()).unwrap())
                .unwrap();
        assert!(close(ch.choi(), back.choi(), 1e-12));
        assert_eq!(back.blocks(), ch.blocks());
    }

    #[test]
    fn rejects_non_trace_preserving_kraus() {
        let k = CMatrix::identity(2, 2) * re(0.5);
        assert!(matches!(
            ChannelRep::new(2, 2, vec![k], None, ChannelLabel::new("bad", 2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(CMatrix::identity(2, 2), "x").is_err());
        let m = CMatrix::from_row_slice(2, 2, &[re(1.5), re(0.0), re(0.0), re(-0.5)]);
        assert!(DensityMatrix::new(m, "x").is_err());
        assert!(DensityMatrix::maximally_mixed(4, "x").is_ok());
    }

    #[test]
    fn rail_and_mode_orders_are_inverse() {
        let beta = vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 1.0)];
        assert_eq!(modes_from_rails(&rails_from_modes(&beta)), beta);
        assert_eq!(rails_from_modes(&beta)[0], c(3.0, 1.0));
    }

    #[test]
    fn oversized_channels_are_rejected() {
        assert!(matches!(grassmann_channel(9, 0.1), Err(Error::Domain(_))));
        assert!(matches!(grassmann_channel(0, 0.1), Err(Error::Domain(_))));
    }
}
