//! Running checks programmatically and emitting their JSON reports.

use grassmann::verify::{check_complementary_spectra, check_factorization, check_unruh_rate, check_werner_holevo};

fn main() -> grassmann::Result<()> {
    let reports = vec![
        check_factorization(0.7, 1e-12)?,
        check_complementary_spectra(3, 0.6, 10, 1e-10, 9)?,
        check_werner_holevo(3, 1e-10)?,
        check_unruh_rate(3, 0.2)?,
    ];
    for rep in &reports {
        println!("{:<24} pass={} worst={:.2e}", rep.check, rep.pass, rep.worst_residual);
    }
    println!("{}", serde_json::to_string_pretty(&reports[0])?);
    Ok(())
}
