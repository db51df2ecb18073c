//! Exterior powers as the representation carried by each sector, and the
//! SU(d) covariance of the Grassmann channel.

use grassmann::fock::exterior_power;
use grassmann::verify::{check_covariance, check_wolf_eisert_form, random_unitary, trial_rng};

fn main() -> grassmann::Result<()> {
    let u = random_unitary(4, &mut trial_rng(3, 0));
    for k in 1..=4 {
        let lk = exterior_power(&u, k)?;
        println!("Lambda^{k}(U): {0}x{0}", lk.entries.nrows());
    }
    println!("det U = {:.6}", exterior_power(&u, 4)?.entries[(0, 0)]);

    for d in 2..=4 {
        let rep = check_covariance(d, 0.5, 20, 1e-9, 42)?;
        println!("covariance d={d}: pass={} worst={:.1e}", rep.pass, rep.worst_residual);
    }
    for k in 1..=4 {
        let rep = check_wolf_eisert_form(4, k, 20, 1e-9, 42)?;
        println!("rank-projection form d=4 k={k}: pass={} worst={:.1e}", rep.pass, rep.worst_residual);
    }
    Ok(())
}
