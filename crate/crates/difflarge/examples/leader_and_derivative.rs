//! Inspect the leader, separant, and initial of a differential polynomial,
//! and apply the total derivative.
//!
//! For `f` of order `n` the leader is `x^(n)`, the separant is
//! `df/dx^(n)`, and the initial is the coefficient of the highest power of
//! the leader.  The total derivative `D` sends `x^(i)` to `x^(i+1)` and
//! derives base coefficients; `D(f)` is always linear in its own leader
//! with coefficient the separant of `f`.

use std::sync::Arc;

use difflarge::parse::{parse_diffpoly, print_diffpoly};
use difflarge::ratfunc::RatFunc;
use difflarge::BaseFieldSpec;

fn main() -> difflarge::Result<()> {
    let base = Arc::new(BaseFieldSpec::new(vec!["u".into()], vec![RatFunc::one()])?);
    for text in ["x*x'^2 + x'", "x'' - u*x", "x'^2 - x"] {
        let f = parse_diffpoly(text, &base)?;
        let ld = f.leader_data()?;
        println!("f        = {}", print_diffpoly(&f));
        println!("order    = {}", ld.order);
        println!("degree   = {}", ld.leader_degree);
        println!("separant = {}", print_diffpoly(&ld.separant));
        println!("initial  = {}", print_diffpoly(&ld.initial));

        let df = f.total_derivative()?;
        println!("D(f)     = {}", print_diffpoly(&df));
        let dld = df.leader_data()?;
        assert_eq!(dld.order, ld.order + 1);
        assert_eq!(print_diffpoly(&dld.initial), print_diffpoly(&ld.separant));
        println!();
    }
    Ok(())
}
