//! Select the factor of a reducible equation that is smooth at a given
//! witness.
//!
//! When `f = h * w` and the witness lies on `h` only, the separant of `f`
//! degenerates to `w * s_h` there, so `h` is the unique factor that keeps
//! full order, vanishes at the witness, and has nonvanishing separant.
//! Factorisation is exact over the rationals via Kronecker substitution.

use std::sync::Arc;

use difflarge::parse::{parse_diffpoly, print_diffpoly};
use difflarge::ratfunc::RatFunc;
use difflarge::rational::Rat;
use difflarge::reduction::select_smooth_factor;
use difflarge::{BaseFieldSpec, Jet};

fn main() -> difflarge::Result<()> {
    let base = Arc::new(BaseFieldSpec::trivial());
    let h = parse_diffpoly("x' - 2*x", &base)?;
    let w = parse_diffpoly("x' + x + 1", &base)?;
    let f = h.mul(&w)?;
    println!("f = {}", print_diffpoly(&f));

    // witness on h only: (1, 2)
    let c = Jet::new(vec![
        RatFunc::constant(Rat::one()),
        RatFunc::constant(Rat::from_int(2)),
    ])?;
    let selected = select_smooth_factor(&f, &c, None)?;
    println!("selected factor (up to a rational unit): {}", print_diffpoly(&selected));

    let ld = selected.leader_data()?;
    println!("vanishes at witness: {}", selected.eval_jet(&c)?.is_zero());
    println!("separant at witness nonzero: {}", !ld.separant.eval_jet(&c)?.is_zero());
    Ok(())
}
