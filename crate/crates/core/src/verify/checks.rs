use std::f64::consts::FRAC_PI_4;

use nalgebra::{DMatrix, DVector, QR};
use rayon::prelude::*;

use super::entropy::coherent_information;
use super::optimize::{optimize_coherent_information, optimize_holevo};
use super::oracle::dense_creation;
use super::random::{random_density_matrix, random_pure_state, random_unitary, trial_rng};
use super::{json_f64, VerificationReport};
use crate::capacity::{
    classical_capacity_grassmann, degrading_weights, quantum_capacity_grassmann, quantum_capacity_unruh,
    unruh_capacity_approx, LogBase,
};
use crate::channels::{
    complementary_channel, grassmann_block, grassmann_block_complement, grassmann_channel, transpose_depolarizing,
    werner_holevo, ChannelRep, DensityMatrix,
};
use crate::error::{Error, Result};
use crate::fock::{exterior_power, sector_creation_matrix};
use crate::linalg::{
    binomial_usize, frobenius, hermitian_eigenvalues, kron, least_squares, min_eigenvalue, partial_transpose_second,
    re, smallest_right_singular, CMatrix, C64,
};

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

fn unit_operator(n: usize, a: usize, b: usize) -> CMatrix {
    let mut e = CMatrix::zeros(n, n);
    e[(a, b)] = re(1.0);
    e
}

/// Unitary `W` with `W chi_k(X) W† = ` the `C`-register state that pairs with
/// `chi_k`, solved from `W X_E = Y_E W` over all matrix units `E`. Returns `W`
/// and its unitarity defect.
fn intertwiner(d: usize, k: usize) -> Result<(CMatrix, f64)> {
    let a_block = grassmann_block(d, k)?;
    let c_block = grassmann_block_complement(d, d + 1 - k)?;
    let n = a_block.out_dim();
    let id = CMatrix::identity(n, n);
    let mut rows: Vec<CMatrix> = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let e = unit_operator(d, a, b);
            let x = a_block.apply_operator(&e)?;
            let y = c_block.apply_operator(&e)?;
            rows.push(kron(&x.transpose(), &id) - kron(&id, &y));
        }
    }
    let mut stacked = CMatrix::zeros(rows.len() * n * n, n * n);
    for (i, m) in rows.iter().enumerate() {
        stacked.view_mut((i * n * n, 0), (n * n, n * n)).copy_from(m);
    }
    let (v, s0, s1) = smallest_right_singular(&stacked)?;
    if s0 > 1e-8 || s1 < 1e-6 {
        return Err(Error::LinAlg(format!("no unique intertwiner for d={d}, k={k} (singular values {s0:e}, {s1:e})")));
    }
    let w = CMatrix::from_column_slice(n, n, v.as_slice());
    let scale = (w.adjoint() * &w).trace().re / n as f64;
    let w = w.unscale(scale.sqrt());
    let defect = max_abs(&(w.adjoint() * &w - id));
    Ok((w, defect))
}

/// A degrading map fitted inside the family
/// `X -> sum_{k' <= k} c_{k',k} W_k Add^{k-k'}(Pi_{k'} X Pi_{k'}) W_k†`,
/// where `Add` creates one fermion in a uniformly random mode.
#[derive(Clone, Debug)]
pub struct DegradingMap {
    pub d: usize,
    pub r: f64,
    /// `((k', k), c_{k',k})` over the output sectors `k'` with nonzero weight.
    pub coefficients: Vec<((usize, usize), f64)>,
    /// Whether a fit with all coefficients nonnegative reached the tolerance.
    pub nonnegative: bool,
    /// Largest entry of `M(G(E)) - G^c(E)` over matrix units, or the
    /// trace-preservation defect if larger.
    pub residual: f64,
    /// Smallest eigenvalue of the map's Choi matrix on the output support.
    pub choi_min_eigenvalue: f64,
    pub intertwiner_defect: f64,
}

struct MapParts {
    d: usize,
    ws: Vec<CMatrix>,
    /// `adds[m]` holds the creation matrices from sector `m` to `m + 1`.
    adds: Vec<Vec<CMatrix>>,
    comp: ChannelRep,
    g: ChannelRep,
}

impl MapParts {
    /// Sector-`k'` operator carried to complement block `k`, embedded in the
    /// full complement output space.
    fn component(&self, kp: usize, k: usize, x: &CMatrix) -> CMatrix {
        let mut y = x.clone();
        for m in kp..k {
            let mut next = CMatrix::zeros(self.adds[m][0].nrows(), self.adds[m][0].nrows());
            for a in &self.adds[m] {
                next += a * &y * a.adjoint();
            }
            y = next.unscale((self.d - m) as f64);
        }
        let w = &self.ws[k - 1];
        let z = w * y * w.adjoint();
        let range = self.comp.block_range(k).expect("complement block");
        let n = self.comp.out_dim();
        let mut out = CMatrix::zeros(n, n);
        out.view_mut((range.start, range.start), (z.nrows(), z.ncols())).copy_from(&z);
        out
    }

    fn apply(&self, coeffs: &[((usize, usize), f64)], x: &CMatrix) -> CMatrix {
        let n = self.comp.out_dim();
        let mut out = CMatrix::zeros(n, n);
        for &((kp, k), c) in coeffs {
            if c != 0.0 {
                let r = self.g.block_range(kp).expect("channel block");
                let local = x.view((r.start, r.start), (r.len(), r.len())).into_owned();
                out += self.component(kp, k, &local) * re(c);
            }
        }
        out
    }
}

/// Fits a degrading map `M` with `M o G = G^c` for the Grassmann channel.
///
/// The coefficients are found by exhaustive nonnegative least squares over
/// coefficient supports. If no nonnegative fit reaches `tol`, the
/// unconstrained minimum-norm fit is returned instead; its Choi matrix then
/// exposes the failure of complete positivity.
pub fn degrading_map(d: usize, r: f64, tol: f64) -> Result<DegradingMap> {
    if d == 0 || d > 4 {
        return Err(Error::domain(format!("degrading-map search supports 1 <= d <= 4, got {d}")));
    }
    let g = grassmann_channel(d, r)?;
    let comp = complementary_channel(d, r)?;
    let mut ws = Vec::with_capacity(d);
    let mut intertwiner_defect: f64 = 0.0;
    for k in 1..=d {
        let (w, defect) = intertwiner(d, k)?;
        intertwiner_defect = intertwiner_defect.max(defect);
        ws.push(w);
    }
    let adds = (0..d)
        .map(|m| {
            if m == 0 || m >= d {
                return Ok(Vec::new());
            }
            (0..d).map(|mode| sector_creation_matrix(d, m, mode)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let parts = MapParts { d, ws, adds, comp, g };
    let support: Vec<usize> =
        parts.g.blocks().expect("blocks").iter().filter(|b| b.weight > 0.0).map(|b| b.k).collect();
    let unknowns: Vec<(usize, usize)> = support.iter().flat_map(|&kp| (kp..=d).map(move |k| (kp, k))).collect();

    let inputs: Vec<(CMatrix, CMatrix)> = (0..d)
        .flat_map(|a| (0..d).map(move |b| (a, b)))
        .map(|(a, b)| {
            let e = unit_operator(d, a, b);
            Ok((parts.g.apply_operator(&e)?, parts.comp.apply_operator(&e)?))
        })
        .collect::<Result<_>>()?;

    // Real least-squares system: entries of every input, then one
    // trace-preservation row per support sector.
    let n_out = parts.comp.out_dim();
    let per_input = 2 * n_out * n_out;
    let rows = inputs.len() * per_input + support.len();
    let mut a = DMatrix::<f64>::zeros(rows, unknowns.len());
    let mut b = DVector::<f64>::zeros(rows);
    for (col, &(kp, k)) in unknowns.iter().enumerate() {
        let single = [((kp, k), 1.0)];
        for (i, (gx, _)) in inputs.iter().enumerate() {
            let m = parts.apply(&single, gx);
            for (j, z) in m.iter().enumerate() {
                a[(i * per_input + 2 * j, col)] = z.re;
                a[(i * per_input + 2 * j + 1, col)] = z.im;
            }
        }
        let s = support.iter().position(|&x| x == kp).expect("support sector");
        a[(inputs.len() * per_input + s, col)] = 1.0;
    }
    for (i, (_, t)) in inputs.iter().enumerate() {
        for (j, z) in t.iter().enumerate() {
            b[i * per_input + 2 * j] = z.re;
            b[i * per_input + 2 * j + 1] = z.im;
        }
    }
    for s in 0..support.len() {
        b[inputs.len() * per_input + s] = 1.0;
    }

    let (coeffs, nonnegative) = match nonnegative_fit(&a, &b, tol)? {
        Some(c) => (c, true),
        None => (least_squares(&a, &b)?, false),
    };
    let coefficients: Vec<((usize, usize), f64)> = unknowns.iter().copied().zip(coeffs.iter().copied()).collect();

    let mut residual: f64 = 0.0;
    for (gx, t) in &inputs {
        residual = residual.max(max_abs(&(parts.apply(&coefficients, gx) - t)));
    }
    for &kp in &support {
        let total: f64 = coefficients.iter().filter(|((x, _), _)| *x == kp).map(|(_, c)| c).sum();
        residual = residual.max((total - 1.0).abs());
    }

    // Choi matrix on the support of the channel output.
    let idx: Vec<usize> = support.iter().flat_map(|&k| parts.g.block_range(k).expect("block")).collect();
    let n_in = parts.g.out_dim();
    let dim = idx.len() * n_out;
    let mut choi = CMatrix::zeros(dim, dim);
    for (i, &ai) in idx.iter().enumerate() {
        for (j, &bj) in idx.iter().enumerate() {
            let out = parts.apply(&coefficients, &unit_operator(n_in, ai, bj));
            choi.view_mut((i * n_out, j * n_out), (n_out, n_out)).copy_from(&out);
        }
    }
    let choi_min_eigenvalue = min_eigenvalue(&choi);
    Ok(DegradingMap { d, r, coefficients, nonnegative, residual, choi_min_eigenvalue, intertwiner_defect })
}

/// Nonnegative least squares by enumerating coefficient supports on the
/// QR-compressed system. Returns the best nonnegative solution if its largest
/// residual entry is within `tol`.
fn nonnegative_fit(a: &DMatrix<f64>, b: &DVector<f64>, tol: f64) -> Result<Option<DVector<f64>>> {
    let u = a.ncols();
    if u > 16 {
        return Err(Error::domain("too many coefficients for exhaustive nonnegative least squares"));
    }
    let qr = QR::new(a.clone());
    let (q, r) = (qr.q(), qr.r());
    let z = q.transpose() * b;
    let mut best: Option<(f64, DVector<f64>)> = None;
    for mask in 1u32..(1 << u) {
        let cols: Vec<usize> = (0..u).filter(|i| mask >> i & 1 == 1).collect();
        let sub = DMatrix::from_fn(r.nrows(), cols.len(), |i, j| r[(i, cols[j])]);
        let c = least_squares(&sub, &z)?;
        if c.iter().any(|&x| x < -1e-12) {
            continue;
        }
        let mut full = DVector::zeros(u);
        for (j, &col) in cols.iter().enumerate() {
            full[col] = c[j].max(0.0);
        }
        // Residual on the uncompressed system; the compressed one loses the
        // orthogonal part to cancellation.
        let res = (a * &full - b).amax();
        if best.as_ref().is_none_or(|(br, _)| res < *br) {
            best = Some((res, full));
        }
    }
    Ok(best.filter(|(res, _)| *res <= tol).map(|(_, c)| c))
}

/// Degradability check: the degrading weights are a probability vector
/// exactly on `r <= pi/4`, and a completely positive degrading map exists.
pub fn check_degradable(d: usize, r: f64, tol: f64) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("degradable", tol).param("d", d).param("r", json_f64(r));
    let q = degrading_weights(d, r)?;
    let expected = r <= FRAC_PI_4;
    rep.record("weights-flag", if q.valid == expected { 0.0 } else { 1.0 });
    if expected && d > 1 {
        let q1 = r.tan().powi(2 * (d as i32 - 1));
        rep.record("weights-first", (q.q[0] - q1).abs());
    }
    let map = degrading_map(d, r, tol)?;
    rep.set_param("nonnegative_fit", map.nonnegative);
    rep.set_param("choi_min_eigenvalue", json_f64(map.choi_min_eigenvalue));
    rep.record("intertwiner-unitarity", map.intertwiner_defect);
    rep.record("map-residual", map.residual);
    rep.record("choi-negativity", (-map.choi_min_eigenvalue).max(0.0));
    Ok(rep)
}

/// Passes when a completely positive degrading map is found exactly for
/// `r <= pi/4` (both the existence below and the failure above the boundary).
pub fn check_degradability_boundary(d: usize, r: f64, tol: f64) -> Result<VerificationReport> {
    let inner = check_degradable(d, r, tol)?;
    let expected = r <= FRAC_PI_4;
    let mut rep = VerificationReport::new("degradable-boundary", tol)
        .param("d", d)
        .param("r", json_f64(r))
        .param("expected_degradable", expected)
        .param("map_found", inner.pass)
        .param("map_worst_residual", json_f64(inner.worst_residual));
    let residual = if expected {
        inner.worst_residual
    } else if inner.pass {
        f64::INFINITY
    } else {
        0.0
    };
    rep.record("boundary", residual);
    Ok(rep)
}

/// `G(U psi U†) = R G(psi) R†` with `R` the direct sum of exterior powers.
pub fn check_covariance(d: usize, r: f64, trials: usize, tol: f64, seed: u64) -> Result<VerificationReport> {
    let ch = grassmann_channel(d, r)?;
    let mut rep = VerificationReport::new("covariance", tol)
        .param("d", d)
        .param("r", json_f64(r))
        .param("trials", trials)
        .param("seed", seed);
    let residuals: Vec<Result<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let u = if t == 0 { CMatrix::identity(d, d) } else { random_unitary(d, &mut rng) };
            let psi = random_pure_state(d, &mut rng);
            covariance_residual(&ch, &u, &(&psi * psi.adjoint()))
        })
        .collect();
    for (t, res) in residuals.into_iter().enumerate() {
        rep.record(format!("trial-{t}"), res?);
    }
    Ok(rep)
}

pub(crate) fn covariance_residual(ch: &ChannelRep, u: &CMatrix, rho: &CMatrix) -> Result<f64> {
    let d = ch.in_dim();
    let n = ch.out_dim();
    let mut big = CMatrix::zeros(n, n);
    for k in 1..=d {
        let range = ch.block_range(k).expect("grassmann block");
        let lk = exterior_power(u, k)?.entries;
        big.view_mut((range.start, range.start), (range.len(), range.len())).copy_from(&lk);
    }
    let lhs = ch.apply_operator(&(u * rho * u.adjoint()))?;
    let rhs = &big * ch.apply_operator(rho)? * big.adjoint();
    Ok(frobenius(&(lhs - rhs)))
}

/// For pure inputs, `P = I - (d' - m) G_{d,k}(rho)` is a projection of rank
/// `m = C(d-1,k)`, `d' = C(d,k)`.
pub fn check_wolf_eisert_form(d: usize, k: usize, trials: usize, tol: f64, seed: u64) -> Result<VerificationReport> {
    let block = grassmann_block(d, k)?;
    let dp = binomial_usize(d, k);
    let m = binomial_usize(d - 1, k);
    let mut rep = VerificationReport::new("wolf-eisert", tol)
        .param("d", d)
        .param("k", k)
        .param("rank", m)
        .param("trials", trials)
        .param("seed", seed);
    for t in 0..trials as u64 {
        let mut rng = trial_rng(seed, t);
        let psi = random_pure_state(d, &mut rng);
        let out = block.apply_operator(&(&psi * psi.adjoint()))?;
        let p = CMatrix::identity(dp, dp) - out * re((dp - m) as f64);
        let idem = frobenius(&(&p * &p - &p));
        let rank = hermitian_eigenvalues(&p).iter().filter(|&&l| l >= 0.5).count();
        let rank_gap = if rank == m { 0.0 } else { 1.0 };
        rep.record(format!("trial-{t}"), idem.max(rank_gap));
    }
    Ok(rep)
}

/// Each complement block's spectrum equals the spectrum of the paired block
/// `chi_k` scaled by the complementary weight.
pub fn check_complementary_spectra(d: usize, r: f64, trials: usize, tol: f64, seed: u64) -> Result<VerificationReport> {
    let comp = complementary_channel(d, r)?;
    let blocks: Vec<ChannelRep> = (1..=d).map(|k| grassmann_block(d, k)).collect::<Result<_>>()?;
    let mut rep = VerificationReport::new("complementary-spectra", tol)
        .param("d", d)
        .param("r", json_f64(r))
        .param("trials", trials)
        .param("seed", seed);
    for t in 0..trials as u64 {
        let mut rng = trial_rng(seed, t);
        let psi = random_pure_state(d, &mut rng);
        let rho = &psi * psi.adjoint();
        let out = comp.apply_operator(&rho)?;
        let mut worst: f64 = 0.0;
        for b in comp.blocks().expect("complement blocks") {
            let range = comp.block_range(b.k).expect("block");
            let local = out.view((range.start, range.start), (range.len(), range.len())).into_owned();
            let lhs = hermitian_eigenvalues(&local);
            let chi = blocks[b.k - 1].apply_operator(&rho)?;
            let rhs: Vec<f64> = hermitian_eigenvalues(&chi).into_iter().map(|l| l * b.weight).collect();
            for (x, y) in lhs.iter().zip(&rhs) {
                worst = worst.max((x - y).abs());
            }
        }
        rep.record(format!("trial-{t}"), worst);
    }
    Ok(rep)
}

/// On one mode pair, `exp[r(a†c† - ca)]` equals
/// `cos r exp[tan r a†c†] exp[(n_a + n_c) ln sec r] exp[-tan r ca]`.
pub fn check_factorization(r: f64, tol: f64) -> Result<VerificationReport> {
    if !(r.is_finite() && (0.0..std::f64::consts::FRAC_PI_2).contains(&r)) {
        return Err(Error::domain(format!("r = {r} outside [0, pi/2)")));
    }
    let ad = dense_creation(2, 0)?;
    let cd = dense_creation(2, 1)?;
    let raise = &ad * &cd;
    let lower = cd.adjoint() * ad.adjoint();
    let number = &ad * ad.adjoint() + &cd * cd.adjoint();
    let exact = ((&raise - &lower) * re(r)).exp();
    let t = r.tan();
    let product = (&raise * re(t)).exp() * (&number * re(-r.cos().ln())).exp() * (&lower * re(-t)).exp() * re(r.cos());
    let mut rep = VerificationReport::new("factorization", tol).param("r", json_f64(r));
    rep.record("frobenius", frobenius(&(exact.clone() - product)));
    let vac = exact.column(0);
    let amp_err = (vac[0] - re(r.cos())).norm().max((vac[3] - re(r.sin())).norm());
    rep.record("vacuum-amplitudes", amp_err);
    Ok(rep)
}

/// Smallest eigenvalue of the partial transpose (second factor) of a Choi
/// matrix on `C^da (x) C^db`.
pub fn check_ppt(choi: &CMatrix, da: usize, db: usize) -> Result<f64> {
    Ok(min_eigenvalue(&partial_transpose_second(choi, da, db)?))
}

/// The Werner-Holevo Choi matrix has a negative partial transpose, and the
/// partial transpose of the transpose-depolarizing Choi matrix changes sign
/// at `t = -1/(d^2-1)`.
pub fn check_ppt_claims(d: usize, tol: f64) -> Result<VerificationReport> {
    if d < 2 {
        return Err(Error::domain("PPT claims need d >= 2"));
    }
    let mut rep = VerificationReport::new("ppt", tol).param("d", d);
    let wh = werner_holevo(d)?;
    let lo = check_ppt(wh.choi(), d, d)?;
    rep.set_param("werner_holevo_min_pt_eigenvalue", json_f64(lo));
    rep.record("werner-holevo-npt", (lo + 1e-6).max(0.0));
    let threshold = -1.0 / ((d * d - 1) as f64);
    let delta = 1e-3;
    let inside = check_ppt(&transpose_depolarizing(d, threshold + delta)?.choi, d, d)?;
    let outside = check_ppt(&transpose_depolarizing(d, threshold - delta)?.choi, d, d)?;
    rep.set_param("threshold", json_f64(threshold));
    rep.record("ppt-above-threshold", (-inside).max(0.0));
    rep.record("npt-below-threshold", outside.max(0.0));
    Ok(rep)
}

/// The complement of the second sector map has the Werner-Holevo Choi matrix.
pub fn check_werner_holevo(d: usize, tol: f64) -> Result<VerificationReport> {
    if d < 2 {
        return Err(Error::domain("Werner-Holevo channel needs d >= 2"));
    }
    let comp = grassmann_block_complement(d, 2)?;
    let wh = werner_holevo(d)?;
    let mut rep = VerificationReport::new("werner-holevo", tol).param("d", d);
    rep.record("choi", max_abs(&(comp.choi() - wh.choi())));
    Ok(rep)
}

/// Optimized coherent information against the closed-form quantum capacity.
pub fn check_quantum_oracle(d: usize, r: f64, restarts: usize, tol: f64, seed: u64) -> Result<VerificationReport> {
    let closed = quantum_capacity_grassmann(d, r, LogBase::D)?.value;
    let opt = optimize_coherent_information(d, r, restarts, 1e-10, seed, LogBase::D)?;
    let mut rep = VerificationReport::new("oracle-q", tol)
        .param("d", d)
        .param("r", json_f64(r))
        .param("restarts", restarts)
        .param("seed", seed)
        .param("closed_form", json_f64(closed))
        .param("optimized", json_f64(opt.value));
    rep.record("optimum", (opt.value - closed).abs());
    Ok(rep)
}

/// Optimized Holevo quantity against the closed-form classical capacity.
pub fn check_holevo_oracle(d: usize, r: f64, restarts: usize, tol: f64, seed: u64) -> Result<VerificationReport> {
    let closed = classical_capacity_grassmann(d, r, LogBase::D)?;
    let opt = optimize_holevo(d, r, d.max(2) * 2, restarts, seed, LogBase::D)?;
    let mut rep = VerificationReport::new("oracle-c", tol)
        .param("d", d)
        .param("r", json_f64(r))
        .param("restarts", restarts)
        .param("seed", seed)
        .param("closed_form", json_f64(closed))
        .param("optimized", json_f64(opt.value));
    rep.record("optimum", (opt.value - closed).abs());
    Ok(rep)
}

/// Coherent information of random inputs never exceeds the maximally mixed
/// value (by more than `tol`).
pub fn check_capacity_upper_bound(d: usize, r: f64, samples: usize, tol: f64, seed: u64) -> Result<VerificationReport> {
    let mixed = DensityMatrix::maximally_mixed(d, "rails")?;
    let top = coherent_information(d, r, &mixed, LogBase::D)?;
    let mut rep = VerificationReport::new("capacity-upper-bound", tol)
        .param("d", d)
        .param("r", json_f64(r))
        .param("samples", samples)
        .param("seed", seed)
        .param("maximally_mixed_value", json_f64(top));
    let excess: Vec<Result<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let rho = random_density_matrix(d, &mut rng)?;
            Ok((coherent_information(d, r, &rho, LogBase::D)? - top).max(0.0))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for e in excess {
        worst = worst.max(e?);
    }
    rep.record("max-excess", worst);
    Ok(rep)
}

/// Least-squares slope of `ln|Q - Q'|` against `ln(1 - z)`.
pub fn unruh_rate_slope(d: usize, zs: &[f64]) -> Result<f64> {
    let mut pts = Vec::with_capacity(zs.len());
    for &z in zs {
        let q = quantum_capacity_unruh(d, z, 1e-15, LogBase::D)?.value;
        let qa = unruh_capacity_approx(d, z, LogBase::D)?;
        pts.push(((1.0 - z).ln(), (q - qa).abs().ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// The Unruh approximation error decays like `(1 - z)^2`: the log-log slope
/// on `z in {0.9, 0.99, 0.999, 0.9999}` lies in `[2 - tol, 2 + tol]`.
pub fn check_unruh_rate(d: usize, tol: f64) -> Result<VerificationReport> {
    if d < 2 {
        return Err(Error::domain("approximation rate needs d >= 2"));
    }
    let slope = unruh_rate_slope(d, &[0.9, 0.99, 0.999, 0.9999])?;
    let mut rep = VerificationReport::new("rate", tol).param("d", d).param("slope", json_f64(slope));
    rep.record("slope", (slope - 2.0).abs());
    Ok(rep)
}

/// Matches two Kraus sets operator by operator up to a per-operator phase,
/// allowing a diagonal `+-1` unitary on the output of `theirs`. Returns the
/// best diagonal and the largest Frobenius mismatch if every operator of
/// `theirs` finds a distinct partner within `tol`.
pub fn kraus_match_up_to_output_signs(ours: &[CMatrix], theirs: &[CMatrix], tol: f64) -> Option<(Vec<f64>, f64)> {
    if ours.len() != theirs.len() || ours.is_empty() {
        return None;
    }
    let n = theirs[0].nrows();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mask in 0u32..(1 << n) {
        let signs: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
        let mut used = vec![false; ours.len()];
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for t in theirs {
            let dt = CMatrix::from_fn(t.nrows(), t.ncols(), |i, j| t[(i, j)] * signs[i]);
            let mut pick: Option<(usize, f64)> = None;
            for (j, o) in ours.iter().enumerate() {
                if used[j] || o.shape() != dt.shape() {
                    continue;
                }
                let overlap: C64 = o.iter().zip(dt.iter()).map(|(a, b)| b.conj() * a).sum();
                let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { re(1.0) };
                let mismatch = frobenius(&(o - &dt * phase));
                if pick.is_none_or(|(_, m)| mismatch < m) {
                    pick = Some((j, mismatch));
                }
            }
            match pick {
                Some((j, m)) if m <= tol => {
                    used[j] = true;
                    worst = worst.max(m);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && best.as_ref().is_none_or(|(_, b)| worst < *b) {
            best = Some((signs, worst));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intertwiners_exist_and_are_unitary() {
        for d in 1..=4 {
            for k in 1..=d {
                let (_, defect) = intertwiner(d, k).unwrap();
                assert!(defect < 1e-10, "d={d} k={k}: {defect:e}");
            }
        }
    }

    #[test]
    fn erasure_regime_is_degradable() {
        let rep = check_degradable(2, 0.3, 1e-9).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn self_complementary_point_uses_identity_map() {
        let map = degrading_map(3, FRAC_PI_4, 1e-9).unwrap();
        assert!(map.nonnegative);
        for &((kp, k), c) in &map.coefficients {
            let expected = if kp == k { 1.0 } else { 0.0 };
            assert!((c - expected).abs() < 1e-9, "({kp},{k}) -> {c}");
        }
    }

    #[test]
    fn antidegradable_regime_fails_complete_positivity() {
        let rep = check_degradable(2, 1.0, 1e-9).unwrap();
        assert!(!rep.pass);
        let map = degrading_map(2, 1.0, 1e-9).unwrap();
        assert!(!map.nonnegative);
        assert!(map.choi_min_eigenvalue < -1e-6);
        assert!(check_degradability_boundary(2, 1.2, 1e-9).unwrap().pass);
    }

    #[test]
    fn identity_unitary_is_trivially_covariant() {
        let ch = grassmann_channel(3, 0.4).unwrap();
        let rho = CMatrix::identity(3, 3) * re(1.0 / 3.0);
        assert_eq!(covariance_residual(&ch, &CMatrix::identity(3, 3), &rho).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_phases_are_covariant() {
        let ch = grassmann_channel(4, 0.6).unwrap();
        let u =
            CMatrix::from_diagonal(&nalgebra::DVector::from_fn(4, |i, _| C64::from_polar(1.0, 0.7 * i as f64 - 1.05)));
        let mut rng = trial_rng(1, 0);
        let psi = random_pure_state(4, &mut rng);
        assert!(covariance_residual(&ch, &u, &(&psi * psi.adjoint())).unwrap() < 1e-13);
    }

    #[test]
    fn wolf_eisert_examples() {
        let block = grassmann_block(4, 2).unwrap();
        let psi = random_pure_state(4, &mut trial_rng(2, 0));
        let mut ev = hermitian_eigenvalues(&block.apply_operator(&(&psi * psi.adjoint())).unwrap());
        ev.sort_by(f64::total_cmp);
        for (i, l) in ev.iter().enumerate() {
            let expected = if i < 3 { 0.0 } else { 1.0 / 3.0 };
            assert!((l - expected).abs() < 1e-12);
        }
        for k in 1..=4 {
            assert!(check_wolf_eisert_form(4, k, 5, 1e-9, 3).unwrap().pass);
        }
    }

    #[test]
    fn factorization_examples() {
        for r in [0.0, 0.7, FRAC_PI_4, 1.2] {
            let rep = check_factorization(r, 1e-12).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn separable_choi_has_positive_partial_transpose() {
        // Replacement channel to a fixed state: Choi = I (x) sigma.
        let sigma = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![re(0.25), re(0.75)]));
        let choi = kron(&CMatrix::identity(3, 3), &sigma);
        assert!(check_ppt(&choi, 3, 2).unwrap() >= 0.0);
    }

    #[test]
    fn kraus_matching_finds_signs() {
        let a = CMatrix::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(2.0)]);
        let b = CMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(3.0), re(0.0)]);
        let flip = |m: &CMatrix| CMatrix::from_fn(2, 2, |i, j| if i == 0 { -m[(i, j)] } else { m[(i, j)] });
        let theirs = vec![flip(&b) * C64::new(0.0, 1.0), flip(&a)];
        let (signs, worst) = kraus_match_up_to_output_signs(&[a.clone(), b.clone()], &theirs, 1e-12).unwrap();
        assert_eq!(signs, vec![-1.0, 1.0]);
        assert!(worst < 1e-12);
        assert!(kraus_match_up_to_output_signs(&[a], &[b], 1e-6).is_none());
    }
}
