//! Brute-force maximization of coherent information and Holevo quantity,
//! compared with the closed forms.

use grassmann::capacity::{classical_capacity_grassmann, quantum_capacity_grassmann, LogBase};
use grassmann::verify::{optimize_coherent_information, optimize_holevo};

fn main() -> grassmann::Result<()> {
    for (d, r) in [(2, 0.3), (3, 0.2), (3, 0.7)] {
        let opt = optimize_coherent_information(d, r, 6, 1e-10, 1, LogBase::D)?;
        let closed = quantum_capacity_grassmann(d, r, LogBase::D)?.value;
        println!("Q  d={d} r={r}: optimized {:.10}, closed form {closed:.10}", opt.value);
    }
    for r in [0.0, 0.4, 0.8, 1.2] {
        let opt = optimize_holevo(2, r, 4, 6, 1, LogBase::Two)?;
        let closed = classical_capacity_grassmann(2, r, LogBase::Two)?;
        println!("C  d=2 r={r}: optimized {:.8}, closed form {closed:.8}", opt.value);
    }
    Ok(())
}
