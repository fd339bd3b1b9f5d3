//! Parse differential polynomials from text and print them canonically.
//!
//! The grammar uses `x`, `x'`, `x''`, `x^(k)` for derivatives of the
//! indeterminate, named base generators such as `u`, integer and `p/q`
//! rational literals, and `+ - * ^`.  Printing sorts terms by
//! (order, leader degree, graded-lex) descending, so every expression has
//! a unique canonical form.

use std::sync::Arc;

use difflarge::parse::{parse_diffpoly, print_diffpoly};
use difflarge::ratfunc::RatFunc;
use difflarge::BaseFieldSpec;

fn main() -> difflarge::Result<()> {
    let trivial = Arc::new(BaseFieldSpec::trivial());
    for text in [
        "x' - x",
        "x*x' - 1",
        "x'' + 2*x' + x",
        "-1/2*x^(3) + x'^2",
        "(x + 1)*(x - 1)",
    ] {
        let f = parse_diffpoly(text, &trivial)?;
        println!("{:24} => {}", text, print_diffpoly(&f));
    }

    // a base field Q(u) with delta(u) = 1
    let ubase = Arc::new(BaseFieldSpec::new(vec!["u".into()], vec![RatFunc::one()])?);
    let f = parse_diffpoly("x'' - u*x + 3/4", &ubase)?;
    println!("{:24} => {}", "x'' - u*x + 3/4", print_diffpoly(&f));

    // printing is a fixed point: reparsing the output reproduces it
    let printed = print_diffpoly(&f);
    let reparsed = parse_diffpoly(&printed, &ubase)?;
    assert_eq!(print_diffpoly(&reparsed), printed);
    println!("round-trip stable: {}", printed);
    Ok(())
}
