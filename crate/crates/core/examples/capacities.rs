//! Closed-form capacities, the Unruh series and the limiting ratio.

use std::f64::consts::FRAC_PI_4;

use grassmann::capacity::{
    capacity_ratio, classical_capacity_grassmann, quantum_capacity_grassmann, quantum_capacity_unruh,
    unruh_capacity_approx, LogBase,
};

fn main() -> grassmann::Result<()> {
    println!("{:>4} {:>6} {:>12} {:>12}", "d", "r", "Q (bits)", "C (bits)");
    for d in [2, 3, 5, 10] {
        for r in [0.0, 0.3, FRAC_PI_4, 1.2] {
            let q = quantum_capacity_grassmann(d, r, LogBase::Two)?.value;
            let c = classical_capacity_grassmann(d, r, LogBase::Two)?;
            println!("{d:>4} {r:>6.3} {q:>12.6} {c:>12.6}");
        }
    }

    println!("\nUnruh channel, d=3:");
    for z in [0.5, 0.9, 0.99] {
        let s = quantum_capacity_unruh(3, z, 1e-12, LogBase::D)?;
        let approx = unruh_capacity_approx(3, z, LogBase::D)?;
        println!("  z={z}: Q={:.9} ({} terms, remainder <= {:.1e}), approx {approx:.9}", s.value, s.terms, s.remainder);
    }

    println!("\nratio r_d:");
    for d in [2, 3, 5, 10, 50, 100] {
        println!("  d={d:>3}: {:.9}", capacity_ratio(d)?);
    }
    Ok(())
}
