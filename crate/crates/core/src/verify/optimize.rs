use rand::Rng;
use rayon::prelude::*;

use super::entropy::{coherent_information_channels, coherent_information_kraus, holevo_quantity_for};
use super::random::trial_rng;
use crate::capacity::LogBase;
use crate::channels::{grassmann_channel, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{c, re, CMatrix, CVector};

#[derive(Clone, Debug)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when the spread of simplex values falls below this.
    pub ftol: f64,
    /// ... and the simplex diameter falls below this.
    pub xtol: f64,
    pub initial_step: f64,
    /// Simplex rebuilds around the incumbent after convergence.
    pub rebuilds: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_evals: 200_000, ftol: 1e-13, xtol: 1e-9, initial_step: 0.5, rebuilds: 4 }
    }
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimizes `f` with the adaptive-coefficient Nelder-Mead simplex method.
/// After convergence the simplex is rebuilt around the best point up to
/// `rebuilds` times, stopping early once a rebuild no longer improves it.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let n = x0.len();
    let nf = n.max(1) as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut best_x = x0.to_vec();
    let mut best_v = eval(&best_x, &mut evals);
    let mut converged = false;
    let mut step = opts.initial_step;
    for _ in 0..=opts.rebuilds {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_v));
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += step;
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }
        converged = false;
        while evals < opts.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            let diameter = simplex[1..]
                .iter()
                .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if spread <= opts.ftol && diameter <= opts.xtol.max(1e-15) || n == 0 {
                converged = true;
                break;
            }
            if spread <= opts.ftol * 1e-3 {
                converged = true;
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect() };
            let xr = along(alpha);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(alpha * gamma);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < worst.1 {
                    let xc = along(alpha * rho);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                } else {
                    let xc = along(-rho);
                    let fc = eval(&xc, &mut evals);
                    (xc, fc)
                };
                if fc < worst.1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let x0 = simplex[0].0.clone();
                    for (x, v) in simplex.iter_mut().skip(1) {
                        for (xi, bi) in x.iter_mut().zip(&x0) {
                            *xi = bi + sigma * (*xi - bi);
                        }
                        *v = eval(x, &mut evals);
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improved = simplex[0].1 < best_v - opts.ftol;
        if simplex[0].1 <= best_v {
            best_x = simplex[0].0.clone();
            best_v = simplex[0].1;
        }
        if !improved || evals >= opts.max_evals {
            break;
        }
        step = (step * 0.1).max(1e-6);
    }
    Minimum { x: best_x, value: best_v, evals, converged }
}

/// Best value found by a multi-start search and where it was attained.
#[derive(Clone, Debug)]
pub struct Optimum {
    pub value: f64,
    pub argmax: DensityMatrix,
    pub evaluations: usize,
    pub converged: bool,
}

/// `L L† / Tr` for a lower-triangular `L` with real diagonal, packed as `d^2`
/// reals: the diagonal first, then real and imaginary parts below it.
fn density_from_params(d: usize, x: &[f64]) -> CMatrix {
    let mut l = CMatrix::zeros(d, d);
    let mut next = d;
    for i in 0..d {
        l[(i, i)] = c(x[i], 0.0);
        for j in 0..i {
            l[(i, j)] = c(x[next], x[next + 1]);
            next += 2;
        }
    }
    let m = &l * l.adjoint();
    let tr = m.trace().re;
    m.unscale(tr)
}

/// Maximizes the coherent information of the Grassmann channel over input
/// density matrices by restarted Nelder-Mead from random Cholesky factors.
/// Restarts run in parallel with independent seeded streams; the result is
/// deterministic for a given `seed`.
pub fn optimize_coherent_information(
    d: usize,
    r: f64,
    restarts: usize,
    tol: f64,
    seed: u64,
    base: LogBase,
) -> Result<Optimum> {
    if d == 0 || d > 6 {
        return Err(Error::domain(format!("coherent-information search supports 1 <= d <= 6, got {d}")));
    }
    let (g, gc) = coherent_information_channels(d, r)?;
    let opts = NelderMeadOptions { ftol: tol * 1e-3, ..Default::default() };
    let runs: Vec<Minimum> = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let x0: Vec<f64> = (0..d * d).map(|_| rng.random_range(-1.0..1.0)).collect();
            nelder_mead(
                |x| -coherent_information_kraus(&g, &gc, &density_from_params(d, x), base).unwrap_or(f64::NEG_INFINITY),
                &x0,
                &opts,
            )
        })
        .collect();
    let evaluations = runs.iter().map(|m| m.evals).sum();
    let best = best_run(runs);
    Ok(Optimum {
        value: -best.value,
        argmax: DensityMatrix::new(density_from_params(d, &best.x), "rails")?,
        evaluations,
        converged: best.converged,
    })
}

fn best_run(runs: Vec<Minimum>) -> Minimum {
    runs.into_iter().reduce(|a, b| if b.value < a.value { b } else { a }).expect("at least one run")
}

/// Best Holevo quantity found and its pure-state ensemble.
#[derive(Clone, Debug)]
pub struct HolevoOptimum {
    pub value: f64,
    pub ensemble: Vec<(f64, CVector)>,
    pub evaluations: usize,
    pub converged: bool,
}

/// Pure-state ensemble from `size` blocks of `2d` amplitudes followed by
/// `size` softmax logits.
fn ensemble_from_params(d: usize, size: usize, x: &[f64]) -> Vec<(f64, CVector)> {
    let logits = &x[2 * d * size..];
    let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    (0..size)
        .map(|s| {
            let v = CVector::from_fn(d, |i, _| c(x[2 * (s * d + i)], x[2 * (s * d + i) + 1]));
            let n = v.norm();
            let v = if n > 0.0 { v.unscale(n) } else { CVector::from_fn(d, |i, _| re((i == 0) as u8 as f64)) };
            (w[s] / total, v)
        })
        .collect()
}

/// Maximizes the Holevo quantity of the Grassmann channel over ensembles of
/// `ensemble_size` pure states.
pub fn optimize_holevo(
    d: usize,
    r: f64,
    ensemble_size: usize,
    restarts: usize,
    seed: u64,
    base: LogBase,
) -> Result<HolevoOptimum> {
    if d == 0 || d > 4 {
        return Err(Error::domain(format!("Holevo search supports 1 <= d <= 4, got {d}")));
    }
    if ensemble_size < d {
        return Err(Error::domain(format!("ensemble size {ensemble_size} below d = {d}")));
    }
    let ch = grassmann_channel(d, r)?;
    let opts = NelderMeadOptions::default();
    let objective = |x: &[f64]| {
        let ens: Vec<(f64, CMatrix)> =
            ensemble_from_params(d, ensemble_size, x).into_iter().map(|(p, v)| (p, &v * v.adjoint())).collect();
        -holevo_quantity_for(&ch, &ens, base).unwrap_or(f64::NEG_INFINITY)
    };
    let runs: Vec<Minimum> = (0..restarts.max(1) as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let x0: Vec<f64> = (0..(2 * d + 1) * ensemble_size).map(|_| rng.random_range(-1.0..1.0)).collect();
            nelder_mead(objective, &x0, &opts)
        })
        .collect();
    let evaluations = runs.iter().map(|m| m.evals).sum();
    let best = best_run(runs);
    Ok(HolevoOptimum {
        value: -best.value,
        ensemble: ensemble_from_params(d, ensemble_size, &best.x),
        evaluations,
        converged: best.converged,
    })
}
