//! Partial-transpose tests on the Werner-Holevo and transpose-depolarizing
//! families.

use grassmann::channels::{transpose_depolarizing, werner_holevo};
use grassmann::verify::check_ppt;

fn main() -> grassmann::Result<()> {
    for d in 2..=4 {
        let wh = werner_holevo(d)?;
        println!("Werner-Holevo d={d}: min PT eigenvalue {:+.6}", check_ppt(wh.choi(), d, d)?);
    }
    let d = 3;
    let threshold = -1.0 / ((d * d - 1) as f64);
    for t in [threshold - 0.05, threshold, threshold + 0.05, 0.5] {
        let td = transpose_depolarizing(d, t)?;
        println!(
            "transpose-depolarizing d={d} t={t:+.4}: CP {}, min PT eigenvalue {:+.6}",
            td.completely_positive,
            check_ppt(&td.choi, d, d)?
        );
    }
    Ok(())
}
