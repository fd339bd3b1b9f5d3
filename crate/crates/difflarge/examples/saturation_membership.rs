//! Decide membership in the saturation ideal `[f] : s_f^infty`.
//!
//! For irreducible `f` the saturation consists exactly of the differential
//! polynomials whose reduction by `f` has remainder zero.  Membership of
//! `g` therefore means `g` vanishes on every sufficiently generic solution
//! of `f = 0`.

use std::sync::Arc;

use difflarge::parse::parse_diffpoly;
use difflarge::reduction::saturation_member;
use difflarge::BaseFieldSpec;

fn main() -> difflarge::Result<()> {
    let base = Arc::new(BaseFieldSpec::trivial());
    let f = parse_diffpoly("x'^2 - x", &base)?;

    // D(f) = 2 x' x'' - x' = x' (2 x'' - 1): the derivative and its
    // separant-free part are members even though neither is a multiple of f.
    for g_text in ["x'^2 - x", "2*x'*x'' - x'", "2*x'' - 1", "x''", "x - 1"] {
        let g = parse_diffpoly(g_text, &base)?;
        let member = saturation_member(&g, &f, false)?;
        println!("{:14} in [f] : s_f^inf  => {}", g_text, member);
    }
    Ok(())
}
