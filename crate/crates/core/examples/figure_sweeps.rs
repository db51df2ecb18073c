//! Writes the capacity sweeps behind the standard plots into a directory
//! (default `./sweeps`).

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use grassmann::capacity::LogBase;
use grassmann::cli::{cmd_sweep, Family, SweepConfig};

fn main() -> grassmann::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "sweeps".into()));
    std::fs::create_dir_all(&dir)?;
    let figs = vec![2, 5, 10, 50, 100];
    let configs = [
        ("quantum.csv", Family::GrassmannQ, figs.clone(), "r", FRAC_PI_2),
        ("classical.csv", Family::GrassmannC, figs, "r", FRAC_PI_2),
        ("grassmann_w.csv", Family::GrassmannQ, vec![2, 3, 4, 5], "w", 1.0),
        ("unruh_z.csv", Family::UnruhQ, vec![2, 3, 4, 5], "z", 1.0),
    ];
    for (file, family, ds, param, stop) in configs {
        let cfg = SweepConfig {
            family,
            ds,
            param_name: param.into(),
            start: 0.0,
            stop,
            points: 200,
            bases: vec![LogBase::Two, LogBase::D],
            out: Some(dir.join(file)),
            jobs: 0,
            seed: 0,
        };
        println!("{}", cmd_sweep(&cfg)?);
    }
    Ok(())
}
