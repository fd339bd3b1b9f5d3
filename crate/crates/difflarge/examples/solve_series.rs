//! Solve a differential equation in truncated power series by two
//! independent methods and compare them coefficient by coefficient.
//!
//! The Taylor method extends the witness jet along the canonical section
//! and divides by factorials; the undetermined-coefficients method pins
//! each coefficient by a linear perturbation of the residual.  Both are
//! exact over the base field.

use std::sync::Arc;

use difflarge::parse::{parse_diffpoly, print_field_elem};
use difflarge::ratfunc::RatFunc;
use difflarge::reduction::{DLProblem, ProblemKind};
use difflarge::series::{taylor_solve, undet_coeffs_solve};
use difflarge::{BaseFieldSpec, Jet};

fn main() -> difflarge::Result<()> {
    // base field Q(u) with delta(u) = 1; Airy-like equation x'' = u x
    let base = Arc::new(BaseFieldSpec::new(vec!["u".into()], vec![RatFunc::one()])?);
    let p = DLProblem {
        f: parse_diffpoly("x'' - u*x", &base)?,
        g: parse_diffpoly("x", &base)?,
        witness: Jet::new(vec![
            parse_diffpoly("1", &base)?.as_field_elem().unwrap(),
            parse_diffpoly("0", &base)?.as_field_elem().unwrap(),
            parse_diffpoly("u", &base)?.as_field_elem().unwrap(),
        ])?,
        kind: ProblemKind::Strict,
    };

    let taylor = taylor_solve(&p, 10)?;
    let undet = undet_coeffs_solve(&p, 10)?;
    assert_eq!(taylor.y, undet.y);

    println!("y = {}", taylor.y);
    for k in 0..10 {
        let c = taylor.y.coefficient(k).unwrap();
        println!("a_{} = {}", k, print_field_elem(&c, &base));
    }
    println!("residual vanishes to order {}", taylor.residual_prec);
    Ok(())
}
