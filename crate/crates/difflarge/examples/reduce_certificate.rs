//! Reduce one differential polynomial by another and verify the resulting
//! certificate.
//!
//! Reduction produces an exact identity
//! `(i_f s_f)^r g = sum_j c_j D^j(f) + rem` where `rem` is reduced with
//! respect to `f`: it involves no proper derivative of the leader and has
//! smaller leader degree.  The certificate stores `r`, the cofactors
//! `c_j`, and the remainder, and can re-expand the identity to check it.

use std::sync::Arc;

use difflarge::parse::{parse_diffpoly, print_diffpoly};
use difflarge::reduction::ritt_reduce;
use difflarge::BaseFieldSpec;

fn main() -> difflarge::Result<()> {
    let base = Arc::new(BaseFieldSpec::trivial());
    let pairs = [
        ("x''", "x'^2 - x"),
        ("x'^3", "x'^2 - x"),
        ("x''*x' + x", "x*x'' - 1"),
    ];
    for (g_text, f_text) in pairs {
        let g = parse_diffpoly(g_text, &base)?;
        let f = parse_diffpoly(f_text, &base)?;
        let cert = ritt_reduce(&g, &f)?;
        println!("g         = {}", print_diffpoly(&g));
        println!("f         = {}", print_diffpoly(&f));
        println!("exponent  = {}", cert.r);
        for (j, c) in &cert.cofactors {
            println!("cofactor of D^{}(f): {}", j, print_diffpoly(c));
        }
        println!("remainder = {}", print_diffpoly(&cert.remainder));
        println!("verified  = {}", cert.verify(&g, &f)?);
        println!();
    }
    Ok(())
}
