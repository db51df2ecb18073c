//! Grassmann channels, their sector blocks and complements, and the
//! identifications with the erasure and Werner-Holevo channels.

use grassmann::channels::{
    complementary_channel, erasure_channel, grassmann_block, grassmann_block_complement, grassmann_channel,
    werner_holevo, DensityMatrix,
};
use grassmann::linalg::hermitian_eigenvalues;
use grassmann::verify::{random_pure_state, trial_rng};

fn main() -> grassmann::Result<()> {
    let (d, r) = (3, 0.5);
    let g = grassmann_channel(d, r)?;
    println!("G_{d}(r={r}): {} -> {}, {} Kraus operators", g.in_dim(), g.out_dim(), g.kraus().len());
    for b in g.blocks().unwrap_or_default() {
        println!("  block k={} dim={} weight={:.6}", b.k, b.dim, b.weight);
    }
    let gc = complementary_channel(d, r)?;
    for b in gc.blocks().unwrap_or_default() {
        println!("  complement block k={} dim={} weight={:.6}", b.k, b.dim, b.weight);
    }

    let psi = random_pure_state(d, &mut trial_rng(1, 0));
    let out = g.apply(&DensityMatrix::pure(&psi, "rails")?)?;
    println!("output spectrum on a random pure input: {:.6?}", hermitian_eigenvalues(out.entries()));

    let chi2 = grassmann_block(d, 2)?;
    let spec = hermitian_eigenvalues(&chi2.apply_operator(&(&psi * psi.adjoint()))?);
    println!("chi_2 spectrum: {spec:.6?}");

    let p = r.sin().powi(2);
    let e = hermitian_eigenvalues(erasure_channel(p)?.choi());
    let g2 = hermitian_eigenvalues(grassmann_channel(2, r)?.choi());
    let gap = e.iter().zip(&g2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("G_2 vs erasure(sin^2 r) Choi spectra: max gap {gap:.1e}");

    let wh_gap = (grassmann_block_complement(4, 2)?.choi() - werner_holevo(4)?.choi()).camax();
    println!("complement of G_(4,2) vs Werner-Holevo(4) Choi: max gap {wh_gap:.1e}");
    Ok(())
}
