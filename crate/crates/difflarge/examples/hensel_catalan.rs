//! Lift a simple root of a t-adic polynomial equation by the Hensel fixed
//! point, recovering the Catalan generating function.
//!
//! The equation `y = -1 - t y^2` has residue `-1` at `t = 0` and a unit
//! derivative there, so iteration converges quadratically in the t-adic
//! metric.  Its unique solution is minus the Catalan series.

use difflarge::ratfunc::RatFunc;
use difflarge::series::{hensel_root, TruncSeries};

fn main() -> difflarge::Result<()> {
    let prec = 12;
    let mu2 = TruncSeries::monomial(RatFunc::one(), 1, prec)?;
    let y = hensel_root(&[mu2.clone()], prec)?;
    println!("y = {}", y);

    // check the defining equation modulo t^prec
    let residual = y.add(&TruncSeries::one(prec)).add(&mu2.mul(&y.pow(2, prec)));
    println!("y + 1 + t*y^2 = 0 mod t^{}: {}", prec, residual.is_zero_within_prec());

    for k in 0..prec {
        println!("coefficient of t^{:<2} = {}", k, y.coefficient(k).unwrap());
    }
    Ok(())
}
