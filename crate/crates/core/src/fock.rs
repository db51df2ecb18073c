//! Fermionic Fock-space arithmetic.
//!
//! Modes are numbered from 0. An occupation state is stored as a bit mask with
//! mode `i` on bit `i`; its display string lists `n_0 n_1 ... n_{d-1}` from
//! left to right. Ladder operators carry the Jordan-Wigner sign
//! `(-1)^{sum_{j<i} n_j}`, so a basis state equals the ordered product
//! `a_0†^{n_0} a_1†^{n_1} ... |vac>`.
//!
//! Inside a fixed fermion-number sector, states are ordered lexicographically
//! on their display strings (`011 < 101 < 110`). Every block matrix in the
//! crate uses this order. In particular the single-fermion sector lists mode
//! `d-1` first; the position of a mode in that list is its *rail* index, and
//! channel inputs are indexed by rail.
//!
//! Bipartite `AC` states use `2d` modes with the `A` register on modes
//! `0..d` and the `C` register on modes `d..2d`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{binomial_usize, re, CMatrix, C64};

/// Largest supported mode count for a single register (bipartite states use
/// twice as many modes).
pub const MAX_MODES: usize = 62;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OccupationState {
    modes: usize,
    bits: u64,
}

impl OccupationState {
    pub fn new(modes: usize, bits: u64) -> Result<Self> {
        if modes == 0 || modes > MAX_MODES {
            return Err(Error::domain(format!("mode count {modes} outside 1..={MAX_MODES}")));
        }
        if bits >> modes != 0 {
            return Err(Error::domain(format!("bit mask {bits:#b} exceeds {modes} modes")));
        }
        Ok(Self { modes, bits })
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::new(modes, 0)
    }

    /// Builds a state from occupation numbers `n_0 .. n_{d-1}`.
    pub fn from_occupations(occ: &[u8]) -> Result<Self> {
        let mut bits = 0u64;
        for (i, &n) in occ.iter().enumerate() {
            match n {
                0 => {}
                1 => bits |= 1 << i,
                _ => return Err(Error::domain(format!("occupation {n} at mode {i} is not 0 or 1"))),
            }
        }
        Self::new(occ.len(), bits)
    }

    /// Parses a display string such as `"0110"`.
    pub fn parse(s: &str) -> Result<Self> {
        let occ = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::domain(format!("invalid occupation character {ch:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_occupations(&occ)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Fermion number.
    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_occupied(&self, mode: usize) -> bool {
        mode < self.modes && self.bits >> mode & 1 == 1
    }

    pub fn occupations(&self) -> Vec<u8> {
        (0..self.modes).map(|i| (self.bits >> i & 1) as u8).collect()
    }

    /// Integer whose binary expansion is the display string; ordering by this
    /// key is the lexicographic order of the strings.
    pub fn lex_key(&self) -> u64 {
        lex_key(self.modes, self.bits)
    }

    /// Lexicographic index among all states with the same mode count and
    /// fermion number.
    pub fn rank(&self) -> usize {
        let mut ones_left = self.count();
        let mut rank = 0;
        for i in 0..self.modes {
            if ones_left == 0 {
                break;
            }
            if self.is_occupied(i) {
                // Strings sharing the prefix but holding a 0 here come first.
                rank += binomial_usize(self.modes - 1 - i, ones_left);
                ones_left -= 1;
            }
        }
        rank
    }

    /// Rail indices of the occupied modes, ascending.
    pub fn rails(&self) -> Vec<usize> {
        let mut r: Vec<usize> =
            (0..self.modes).filter(|&m| self.is_occupied(m)).map(|m| rail_of_mode(self.modes, m)).collect();
        r.sort_unstable();
        r
    }
}

impl fmt::Display for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.modes {
            f.write_str(if self.is_occupied(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{self}>")
    }
}

fn lex_key(modes: usize, bits: u64) -> u64 {
    let mut key = 0u64;
    for i in 0..modes {
        key = key << 1 | (bits >> i & 1);
    }
    key
}

fn bits_from_lex_key(modes: usize, key: u64) -> u64 {
    // lex_key is a bit reversal over `modes` bits, hence an involution.
    lex_key(modes, key)
}

/// Position of `mode` in the single-fermion basis.
pub fn rail_of_mode(d: usize, mode: usize) -> usize {
    d - 1 - mode
}

/// Mode occupied by the single-fermion basis state at position `rail`.
pub fn mode_of_rail(d: usize, rail: usize) -> usize {
    d - 1 - rail
}

/// All `C(d,k)` occupation states of `d` modes holding `k` fermions, in
/// lexicographic order.
pub fn basis_states(d: usize, k: usize) -> Result<Vec<OccupationState>> {
    if d == 0 || d > MAX_MODES {
        return Err(Error::domain(format!("mode count {d} outside 1..={MAX_MODES}")));
    }
    if k > d {
        return Err(Error::domain(format!("fermion number {k} outside 0..={d}")));
    }
    let total = binomial_usize(d, k);
    let mut out = Vec::with_capacity(total);
    if k == 0 {
        out.push(OccupationState { modes: d, bits: 0 });
        return Ok(out);
    }
    // Gosper's hack walks the k-bit integers in increasing order; read as lex
    // keys that is exactly the lexicographic order of the strings.
    let mut key: u64 = (1u64 << k) - 1;
    let limit = 1u64 << d;
    while key < limit {
        out.push(OccupationState { modes: d, bits: bits_from_lex_key(d, key) });
        let low = key & key.wrapping_neg();
        let ripple = key + low;
        key = (((ripple ^ key) >> 2) / low) | ripple;
    }
    debug_assert_eq!(out.len(), total);
    Ok(out)
}

/// All nonempty occupation states of `d` modes grouped by fermion number
/// `1..=d`, each group in lexicographic order.
pub fn nonempty_states(d: usize) -> Result<Vec<OccupationState>> {
    let mut out = Vec::with_capacity((1usize << d) - 1);
    for k in 1..=d {
        out.extend(basis_states(d, k)?);
    }
    Ok(out)
}

/// Sparse complex amplitudes over the occupation basis of `modes` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    modes: usize,
    amps: BTreeMap<u64, C64>,
}

impl StateVector {
    pub fn zero(modes: usize) -> Result<Self> {
        OccupationState::vacuum(modes)?;
        Ok(Self { modes, amps: BTreeMap::new() })
    }

    pub fn vacuum(modes: usize) -> Result<Self> {
        Self::basis(OccupationState::vacuum(modes)?)
    }

    pub fn basis(state: OccupationState) -> Result<Self> {
        let mut amps = BTreeMap::new();
        amps.insert(state.bits, re(1.0));
        Ok(Self { modes: state.modes, amps })
    }

    pub fn from_amplitudes<I>(modes: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationState, C64)>,
    {
        let mut s = Self::zero(modes)?;
        for (state, amp) in terms {
            if state.modes != modes {
                return Err(Error::precondition(format!("state {state} has {} modes, expected {modes}", state.modes)));
            }
            s.add_term(state.bits, amp);
        }
        Ok(s)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn amplitude(&self, state: &OccupationState) -> C64 {
        self.amplitude_bits(state.bits)
    }

    pub fn amplitude_bits(&self, bits: u64) -> C64 {
        self.amps.get(&bits).copied().unwrap_or_default()
    }

    /// Nonzero terms ordered by bit mask.
    pub fn iter(&self) -> impl Iterator<Item = (OccupationState, C64)> + '_ {
        let modes = self.modes;
        self.amps.iter().map(move |(&bits, &a)| (OccupationState { modes, bits }, a))
    }

    pub fn nnz(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().filter_map(|(b, a)| other.amps.get(b).map(|o| a.conj() * o)).sum()
    }

    pub fn scale(&self, factor: C64) -> StateVector {
        let mut out = StateVector { modes: self.modes, amps: BTreeMap::new() };
        for (&b, &a) in &self.amps {
            out.add_term(b, a * factor);
        }
        out
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: C64, other: &StateVector) -> Result<StateVector> {
        self.check_same_modes(other)?;
        let mut out = self.clone();
        for (&b, &a) in &other.amps {
            out.add_term(b, a * factor);
        }
        Ok(out)
    }

    /// Largest amplitude difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        let mut keys: Vec<u64> = self.amps.keys().chain(other.amps.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter().map(|&b| (self.amplitude_bits(b) - other.amplitude_bits(b)).norm()).fold(0.0, f64::max)
    }

    /// `a_mode† |self>`.
    pub fn apply_creation(&self, mode: usize) -> Result<StateVector> {
        self.check_mode(mode)?;
        let mut out = StateVector { modes: self.modes, amps: BTreeMap::new() };
        for (&bits, &a) in &self.amps {
            if bits >> mode & 1 == 1 {
                continue;
            }
            out.add_term(bits | 1 << mode, a * jordan_wigner_sign(bits, mode));
        }
        Ok(out)
    }

    /// `a_mode |self>`.
    pub fn apply_annihilation(&self, mode: usize) -> Result<StateVector> {
        self.check_mode(mode)?;
        let mut out = StateVector { modes: self.modes, amps: BTreeMap::new() };
        for (&bits, &a) in &self.amps {
            if bits >> mode & 1 == 0 {
                continue;
            }
            out.add_term(bits & !(1 << mode), a * jordan_wigner_sign(bits, mode));
        }
        Ok(out)
    }

    fn add_term(&mut self, bits: u64, amp: C64) {
        if amp == C64::default() {
            return;
        }
        let entry = self.amps.entry(bits).or_default();
        *entry += amp;
        if *entry == C64::default() {
            self.amps.remove(&bits);
        }
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            return Err(Error::domain(format!("mode {mode} outside 0..{}", self.modes)));
        }
        Ok(())
    }

    fn check_same_modes(&self, other: &StateVector) -> Result<()> {
        if self.modes != other.modes {
            return Err(Error::precondition(format!("mode counts differ: {} vs {}", self.modes, other.modes)));
        }
        Ok(())
    }
}

fn jordan_wigner_sign(bits: u64, mode: usize) -> C64 {
    let below = bits & ((1u64 << mode) - 1);
    if below.count_ones().is_multiple_of(2) {
        re(1.0)
    } else {
        re(-1.0)
    }
}

/// Mode index of `C_i` in a bipartite `AC` register.
pub fn c_mode(d: usize, i: usize) -> usize {
    d + i
}

/// Splits a bipartite bit mask into its `A` and `C` parts.
pub fn split_ac(d: usize, bits: u64) -> (u64, u64) {
    (bits & ((1u64 << d) - 1), bits >> d)
}

fn check_register(d: usize) -> Result<()> {
    if d == 0 || 2 * d > MAX_MODES {
        return Err(Error::domain(format!("register size {d} outside 1..={}", MAX_MODES / 2)));
    }
    Ok(())
}

fn check_squeezing(r: f64) -> Result<()> {
    if !(r.is_finite() && (0.0..std::f64::consts::FRAC_PI_2).contains(&r)) {
        return Err(Error::domain(format!("squeezing parameter r = {r} outside [0, pi/2)")));
    }
    Ok(())
}

/// `prod_i (1 + t a_i† c_i†) |vac>`, i.e. `exp[t sum_i a_i† c_i†] |vac>`
/// (each pair operator squares to zero and the pairs commute).
pub(crate) fn pair_cloud(d: usize, t: f64) -> Result<StateVector> {
    check_register(d)?;
    let mut s = StateVector::vacuum(2 * d)?;
    for i in 0..d {
        let pair = s.apply_creation(c_mode(d, i))?.apply_creation(i)?;
        s = s.axpy(re(t), &pair)?;
    }
    Ok(s)
}

/// The image of the vacuum under `d` fermionic two-mode squeezers,
/// `cos^d r exp[tan r sum_i a_i† c_i†] |vac>`.
pub fn squeezed_vacuum(d: usize, r: f64) -> Result<StateVector> {
    check_squeezing(r)?;
    Ok(pair_cloud(d, r.tan())?.scale(re(r.cos().powi(d as i32))))
}

/// `(sum_i beta_i a_i†) exp[t sum_j a_j† c_j†] |vac>` without normalization.
/// `beta` is indexed by mode.
pub(crate) fn dressed_input(d: usize, t: f64, beta: &[C64]) -> Result<StateVector> {
    if beta.len() != d {
        return Err(Error::precondition(format!("beta has {} entries, expected {d}", beta.len())));
    }
    let cloud = pair_cloud(d, t)?;
    let mut out = StateVector::zero(2 * d)?;
    for (i, &b) in beta.iter().enumerate() {
        if b != C64::default() {
            out = out.axpy(b, &cloud.apply_creation(i)?)?;
        }
    }
    Ok(out)
}

/// Image of the multi-rail qudit `sum_i beta_i a_i† |vac>` under the
/// squeezing isometry: `cos^{d-1} r (sum_i beta_i a_i†) exp[tan r sum_j a_j† c_j†] |vac>`.
///
/// `beta` is indexed by mode and must have unit norm.
pub fn isometry_apply(d: usize, r: f64, beta: &[C64]) -> Result<StateVector> {
    check_squeezing(r)?;
    let norm = beta.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::precondition(format!("input amplitudes have norm {norm}, expected 1")));
    }
    Ok(dressed_input(d, r.tan(), beta)?.scale(re(r.cos().powi(d as i32 - 1))))
}

/// Matrix of `a_mode†` from the `k`-fermion sector to the `k+1` sector of a
/// `d`-mode register, both in lexicographic order.
pub fn sector_creation_matrix(d: usize, k: usize, mode: usize) -> Result<CMatrix> {
    if k >= d {
        return Err(Error::domain(format!("no sector above {k} in {d} modes")));
    }
    let from = basis_states(d, k)?;
    let mut m = CMatrix::zeros(binomial_usize(d, k + 1), from.len());
    for (col, s) in from.iter().enumerate() {
        let out = StateVector::basis(*s)?.apply_creation(mode)?;
        for (t, amp) in out.iter() {
            m[(t.rank(), col)] = amp;
        }
    }
    Ok(m)
}

/// The `k`-th exterior power of a `d x d` matrix: the `C(d,k) x C(d,k)` matrix
/// of `k x k` minors.
#[derive(Clone, Debug)]
pub struct RepresentationMatrix {
    pub d: usize,
    pub k: usize,
    pub entries: CMatrix,
}

/// Compound matrix of `m` in the sector-`k` basis. Entry `(S, T)` is the minor
/// on rows `rails(S)` and columns `rails(T)`, where `m` is indexed by rail.
pub fn compound_matrix(m: &CMatrix, k: usize) -> Result<CMatrix> {
    let d = m.nrows();
    if m.ncols() != d {
        return Err(Error::precondition("compound matrix needs a square input"));
    }
    if k == 0 || k > d {
        return Err(Error::domain(format!("sector {k} outside 1..={d}")));
    }
    let states = basis_states(d, k)?;
    let rails: Vec<Vec<usize>> = states.iter().map(|s| s.rails()).collect();
    let n = states.len();
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let sub = CMatrix::from_fn(k, k, |a, b| m[(rails[i][a], rails[j][b])]);
        sub.determinant()
    }))
}

/// Exterior power of a unitary. It carries the `k`-fermion representation:
/// a mode rotation `a_j† -> sum_i U_ij a_i†` acts on the sector-`k` block as
/// this matrix.
pub fn exterior_power(u: &CMatrix, k: usize) -> Result<RepresentationMatrix> {
    let d = u.nrows();
    if u.ncols() != d {
        return Err(Error::precondition("exterior power needs a square matrix"));
    }
    let defect = (u.adjoint() * u - CMatrix::identity(d, d)).iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if defect > 1e-10 {
        return Err(Error::precondition(format!("matrix is not unitary (defect {defect:e})")));
    }
    Ok(RepresentationMatrix { d, k, entries: compound_matrix(u, k)? })
}
