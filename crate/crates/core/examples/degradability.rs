//! Fitting a degrading map below the self-complementary point and watching
//! complete positivity fail above it.

use grassmann::verify::{check_degradability_boundary, degrading_map};

fn main() -> grassmann::Result<()> {
    for r in [0.3, 0.7, 0.9] {
        let m = degrading_map(3, r, 1e-9)?;
        println!(
            "d=3 r={r}: nonnegative fit {}, residual {:.1e}, Choi min eigenvalue {:+.3e}",
            m.nonnegative, m.residual, m.choi_min_eigenvalue
        );
        for ((kp, k), c) in m.coefficients.iter().filter(|(_, c)| c.abs() > 1e-12) {
            println!("    c[{kp}->{k}] = {c:.6}");
        }
    }
    for (d, r) in [(2, 0.5), (2, 1.2), (4, 0.78)] {
        let rep = check_degradability_boundary(d, r, 1e-9)?;
        println!("boundary check d={d} r={r}: pass={}", rep.pass);
    }
    Ok(())
}
