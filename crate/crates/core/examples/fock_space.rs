//! Occupation states, signed ladder operators and the squeezing isometry.

use grassmann::channels::modes_from_rails;
use grassmann::fock::{basis_states, isometry_apply, squeezed_vacuum, OccupationState, StateVector};
use grassmann::linalg::c;
use grassmann::CMatrix;

fn main() -> grassmann::Result<()> {
    let d = 3;
    println!("two-fermion sector of {d} modes:");
    for s in basis_states(d, 2)? {
        println!("  {s}  rails {:?}", s.rails());
    }

    // a_0† a_2† |000> picks up no sign; a_2† a_0† |000> does.
    let vac = StateVector::vacuum(d)?;
    let ab = vac.apply_creation(2)?.apply_creation(0)?;
    let ba = vac.apply_creation(0)?.apply_creation(2)?;
    let target = OccupationState::parse("101")?;
    println!("a0† a2† |000> -> {:+}", ab.amplitude(&target).re);
    println!("a2† a0† |000> -> {:+}", ba.amplitude(&target).re);

    let r = 0.6;
    let vac_image = squeezed_vacuum(d, r)?;
    println!("\nsqueezed vacuum (d={d}, r={r}), register A|C:");
    for (s, amp) in vac_image.iter() {
        let bits = s.to_string();
        println!("  {}|{}  {:+.6}", &bits[..d], &bits[d..], amp.re);
    }

    let input = CMatrix::from_column_slice(d, 1, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let image = isometry_apply(d, r, &modes_from_rails(&input.column(0).into_owned()))?;
    println!("\nisometry image of rail 0: {} terms, norm {:.12}", image.nnz(), image.norm());
    Ok(())
}
