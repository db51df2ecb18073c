//! Closed-form capacities of Grassmann channels, the Unruh capacity series and
//! the block and degrading weights.
//!
//! All sums are evaluated in natural logarithms and converted once at the end.
//! Trigonometric weights `cos^{2(d-1)} r tan^{2m} r` are evaluated as
//! `cos^{2(d-1-m)} r sin^{2m} r` in the log domain so that large `d` and `r`
//! close to `pi/2` neither overflow nor lose the binomial prefactors.

use std::f64::consts::{FRAC_PI_2, LN_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Logarithm base of a reported capacity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogBase {
    /// Bits.
    Two,
    /// Base `d` of the channel at hand (the native unit of the formulas).
    D,
}

impl LogBase {
    /// Converts a value measured in nats. For `d = 1` every capacity is zero
    /// and base-`d` values are reported as zero.
    pub fn from_nats(self, value: f64, d: usize) -> f64 {
        match self {
            LogBase::Two => value / LN_2,
            LogBase::D if d < 2 => 0.0,
            LogBase::D => value / (d as f64).ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogBase::Two => "2",
            LogBase::D => "d",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" | "two" => Ok(LogBase::Two),
            "d" => Ok(LogBase::D),
            _ => Err(Error::domain(format!("unknown log base {s:?} (expected 2 or d)"))),
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    Ok(())
}

fn check_r(r: f64) -> Result<()> {
    if !(r.is_finite() && (0.0..FRAC_PI_2).contains(&r)) {
        return Err(Error::domain(format!("squeezing parameter r = {r} outside [0, pi/2)")));
    }
    Ok(())
}

/// `ln C(n, k)` for `k = 0..=n`.
pub(crate) fn ln_binomial_row(n: usize) -> Vec<f64> {
    let mut exact = Vec::with_capacity(n + 1);
    let mut c = 1.0f64;
    exact.push(c);
    for k in 0..n {
        c = c * (n - k) as f64 / (k + 1) as f64;
        exact.push(c.round());
    }
    if exact.iter().all(|v| v.is_finite() && *v < 9.0e15) {
        return exact.iter().map(|v| v.ln()).collect();
    }
    let mut row = Vec::with_capacity(n + 1);
    let mut l = 0.0;
    row.push(l);
    for k in 0..n {
        l += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        row.push(l);
    }
    row
}

/// `ln(cos^{2a} r sin^{2b} r)` with the `0 * ln 0` cases taken as 0.
fn ln_trig(a: i64, b: i64, r: f64) -> f64 {
    let mut out = 0.0;
    if a != 0 {
        out += 2.0 * a as f64 * r.cos().ln();
    }
    if b != 0 {
        out += 2.0 * b as f64 * r.sin().ln();
    }
    out
}

/// Sector weights of a Grassmann channel and of its complement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockWeights {
    pub d: usize,
    pub r: f64,
    /// `p[k-1] = C(d-1,k-1) cos^{2(d-1)} r tan^{2(k-1)} r`.
    pub p: Vec<f64>,
    /// `p_tilde[k-1] = C(d-1,k-1) cos^{2(d-1)} r tan^{2(d-k)} r`, the reversal of `p`.
    pub p_tilde: Vec<f64>,
}

pub fn block_weights(d: usize, r: f64) -> Result<BlockWeights> {
    check_dim(d)?;
    check_r(r)?;
    let lnc = ln_binomial_row(d - 1);
    let n = d as i64;
    let p: Vec<f64> = (1..=n).map(|k| (lnc[(k - 1) as usize] + ln_trig(n - k, k - 1, r)).exp()).collect();
    let p_tilde = p.iter().rev().copied().collect();
    Ok(BlockWeights { d, r, p, p_tilde })
}

/// Weights of the degrading map; `valid` holds when they form a probability
/// vector (all `q_k >= -1e-12` and `sum q_k = 1` within `1e-12`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegradingWeights {
    pub q: Vec<f64>,
    pub valid: bool,
}

/// `q_1 = tan^{2(d-1)} r` and, for `k >= 2`,
/// `q_k = C(d-1,k-1) cos^{2(d-1)} r (tan^{2(d-k)} r - tan^{2(d+k-2)} r)`.
pub fn degrading_weights(d: usize, r: f64) -> Result<DegradingWeights> {
    check_dim(d)?;
    check_r(r)?;
    let n = d as i64;
    let lnc = ln_binomial_row(d - 1);
    let mut q = Vec::with_capacity(d);
    q.push(ln_trig(-(n - 1), n - 1, r).exp());
    for k in 2..=n {
        let c = lnc[(k - 1) as usize];
        let hi = (c + ln_trig(k - 1, n - k, r)).exp();
        let lo = (c + ln_trig(-(k - 1), n + k - 2, r)).exp();
        q.push(hi - lo);
    }
    let sum: f64 = q.iter().sum();
    let valid = q.iter().all(|&x| x >= -1e-12) && (sum - 1.0).abs() <= 1e-12;
    Ok(DegradingWeights { q, valid })
}

/// A capacity clamped at zero together with the raw formula value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityValue {
    pub value: f64,
    pub unclamped: f64,
}

impl CapacityValue {
    fn from_raw(raw: f64) -> Self {
        CapacityValue { value: raw.max(0.0), unclamped: raw }
    }
}

/// Quantum capacity in nats from the `r`-parametrized closed form
/// `(1/d) cos^{2(d-1)} r sum_k k C(d,k) ln k (tan^{2(d-k)} r - tan^{2(k-1)} r)`.
fn quantum_nats_r(d: usize, r: f64) -> f64 {
    let n = d as i64;
    let lnc = ln_binomial_row(d);
    let mut sum = 0.0;
    for k in 2..=n {
        let pre = (k as f64) * (k as f64).ln();
        let c = lnc[k as usize];
        let a = (c + ln_trig(k - 1, n - k, r)).exp();
        let b = (c + ln_trig(n - k, k - 1, r)).exp();
        sum += pre * (a - b);
    }
    sum / d as f64
}

/// Quantum capacity in nats, `w`-form:
/// `(1/d)(1+w)^{-(d-1)} sum_k k C(d,k) ln k (w^{d-k} - w^{k-1})`.
fn quantum_nats_w_direct(d: usize, w: f64) -> f64 {
    let n = d as i64;
    let lnc = ln_binomial_row(d);
    let ln1w = (1.0 + w).ln();
    let lnw = w.ln();
    let pow = |m: i64| if m == 0 { 0.0 } else { m as f64 * lnw };
    let mut sum = 0.0;
    for k in 2..=n {
        let pre = (k as f64) * (k as f64).ln();
        let base = lnc[k as usize] - (n - 1) as f64 * ln1w;
        sum += pre * ((base + pow(n - k)).exp() - (base + pow(k - 1)).exp());
    }
    sum / d as f64
}

/// Quantum capacity in nats, rewritten sum:
/// `(1+w)^{-(d-1)} sum_{k=0}^{d-1} w^k C(d-1,k) ln((d-k)/(k+1))`.
fn quantum_nats_w_rewritten(d: usize, w: f64) -> f64 {
    let n = d as i64;
    let lnc = ln_binomial_row(d - 1);
    let ln1w = (1.0 + w).ln();
    let lnw = w.ln();
    let mut sum = 0.0;
    for k in 0..n {
        let lw = if k == 0 { 0.0 } else { k as f64 * lnw };
        let log_ratio = ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        sum += (lnc[k as usize] + lw - (n - 1) as f64 * ln1w).exp() * log_ratio;
    }
    sum
}

/// The three algebraic forms of the quantum capacity at `w = tan^2 r`, in nats
/// and unclamped: the `r` form, the direct `w` form and the rewritten sum.
pub fn quantum_capacity_forms(d: usize, r: f64) -> Result<[f64; 3]> {
    check_dim(d)?;
    check_r(r)?;
    let w = r.tan().powi(2);
    Ok([quantum_nats_r(d, r), quantum_nats_w_direct(d, w), quantum_nats_w_rewritten(d, w)])
}

/// Quantum capacity of the Grassmann channel as a function of the squeezing
/// parameter. Clamped at zero; the raw formula value is kept in `unclamped`.
pub fn quantum_capacity_grassmann(d: usize, r: f64, base: LogBase) -> Result<CapacityValue> {
    check_dim(d)?;
    check_r(r)?;
    Ok(CapacityValue::from_raw(base.from_nats(quantum_nats_r(d, r), d)))
}

/// Quantum capacity as a function of `w = tan^2 r in [0, 1]`. Both `w` forms
/// are evaluated and must agree within `1e-12`.
pub fn quantum_capacity_grassmann_w(d: usize, w: f64, base: LogBase) -> Result<CapacityValue> {
    check_dim(d)?;
    if !(w.is_finite() && (0.0..=1.0).contains(&w)) {
        return Err(Error::domain(format!("w = {w} outside [0, 1]")));
    }
    let a = quantum_nats_w_direct(d, w);
    let b = quantum_nats_w_rewritten(d, w);
    if (a - b).abs() > 1e-12 {
        return Err(Error::Consistency {
            what: format!("w-forms of the quantum capacity at d={d}, w={w}"),
            difference: (a - b).abs(),
        });
    }
    Ok(CapacityValue::from_raw(base.from_nats(a, d)))
}

/// Classical capacity `log d - sum_k p_k log k`. The three-term form
/// `H(p) + sum_k p_k log C(d,k) - H(pure output)` is evaluated alongside and
/// must agree within `1e-10`.
pub fn classical_capacity_grassmann(d: usize, r: f64, base: LogBase) -> Result<f64> {
    let bw = block_weights(d, r)?;
    let closed = classical_nats(&bw);
    let three = classical_three_term_nats(&bw);
    if (closed - three).abs() > 1e-10 {
        return Err(Error::Consistency {
            what: format!("classical capacity forms at d={d}, r={r}"),
            difference: (closed - three).abs(),
        });
    }
    Ok(base.from_nats(closed, d).max(0.0))
}

fn classical_nats(bw: &BlockWeights) -> f64 {
    let d = bw.d;
    let mut s = (d as f64).ln();
    for (i, &p) in bw.p.iter().enumerate() {
        s -= p * ((i + 1) as f64).ln();
    }
    s
}

fn shannon_nats(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

fn classical_three_term_nats(bw: &BlockWeights) -> f64 {
    let d = bw.d;
    let lnc = ln_binomial_row(d);
    let lnc1 = ln_binomial_row(d - 1);
    let h = shannon_nats(&bw.p);
    // Each block of a pure-input output is flat on C(d-1,k-1) levels.
    let pure_output: f64 = h + bw.p.iter().enumerate().map(|(i, &p)| p * lnc1[i]).sum::<f64>();
    let mixed_output: f64 = h + bw.p.iter().enumerate().map(|(i, &p)| p * lnc[i + 1]).sum::<f64>();
    mixed_output - pure_output
}

/// A truncated series with a rigorous bound on the discarded tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub remainder: f64,
    pub terms: usize,
}

/// Iteration cap of the Unruh series.
pub const UNRUH_MAX_TERMS: usize = 10_000_000;

/// Quantum capacity of the qudit Unruh channel,
/// `(1/d)(1-z)^{d+1} sum_{k>=1} k C(d+k-1,k) log((d+k-1)/k) z^{k-1}`.
///
/// For `k >= K` consecutive terms shrink by at most `z(d+K)/K`; once that
/// ratio is below one the tail after term `K` is bounded by a geometric
/// series, and summation stops when the bound drops below `tol`.
pub fn quantum_capacity_unruh(d: usize, z: f64, tol: f64, base: LogBase) -> Result<SeriesValue> {
    check_dim(d)?;
    if !(z.is_finite() && (0.0..1.0).contains(&z)) {
        return Err(Error::domain(format!("z = {z} outside [0, 1)")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    if d == 1 {
        return Ok(SeriesValue { value: 0.0, remainder: 0.0, terms: 1 });
    }
    let df = d as f64;
    // Scale from nats-with-prefactor to the requested base.
    let unit = base.from_nats(1.0, d) / df;
    let ln_a1 = (df + 1.0) * (1.0 - z).ln() + df.ln();
    let log_domain = ln_a1 < -600.0;
    let (mut a, mut ln_a) = (ln_a1.exp(), ln_a1);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        let ak = if log_domain { ln_a.exp() } else { a };
        let term = ak * kf * ((df + kf - 1.0).ln() - kf.ln());
        // Neumaier summation.
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        let ratio = z * (df + kf) / kf;
        if ratio < 1.0 {
            let tail = term * ratio / (1.0 - ratio) * unit;
            if tail < tol {
                return Ok(SeriesValue { value: (sum + comp) * unit, remainder: tail, terms: k });
            }
        }
        if k >= UNRUH_MAX_TERMS {
            let tail = if ratio < 1.0 { term * ratio / (1.0 - ratio) * unit } else { f64::INFINITY };
            return Err(Error::Convergence { iterations: k, partial: (sum + comp) * unit, remainder: tail });
        }
        let step = z * (df + kf) / (kf + 1.0);
        if log_domain {
            ln_a += z.ln() + (df + kf).ln() - (kf + 1.0).ln();
        } else {
            a *= step;
        }
        k += 1;
    }
}

/// Large-`k` approximation `(d-1)/(d ln d) (1-z)/z (1 - (1-z)^d)` of the Unruh
/// capacity (natively base `d`).
pub fn unruh_capacity_approx(d: usize, z: f64, base: LogBase) -> Result<f64> {
    check_dim(d)?;
    if !(z.is_finite() && z > 0.0 && z <= 1.0) {
        return Err(Error::domain(format!("z = {z} outside (0, 1]")));
    }
    if d == 1 {
        return Ok(0.0);
    }
    let df = d as f64;
    let nats = (df - 1.0) / df * (1.0 - z) / z * (1.0 - (1.0 - z).powi(d as i32));
    Ok(base.from_nats(nats, d))
}

/// Limit `z = w -> 1` of the ratio between the Grassmann and Unruh quantum
/// capacities,
/// `d/((d-1) 2^{d-1}) sum_{k=0}^{floor((d-1)/2)} (d-1-2k) C(d-1,k) ln((d-k)/(k+1))`.
pub fn capacity_ratio(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::domain(format!("capacity ratio needs d >= 2, got {d}")));
    }
    let n = d as i64;
    let lnc = ln_binomial_row(d - 1);
    let ln_norm = (n - 1) as f64 * LN_2;
    let mut sum = 0.0;
    for k in 0..=(n - 1) / 2 {
        let lr = ((n - k) as f64).ln() - ((k + 1) as f64).ln();
        sum += (n - 1 - 2 * k) as f64 * (lnc[k as usize] - ln_norm).exp() * lr;
    }
    Ok(d as f64 / (d as f64 - 1.0) * sum)
}
