//! Construct the differential field extension in which an irreducible
//! equation has a generic solution.
//!
//! For `f` of order `n` and leader degree `d`, the extension is
//! `K(x_0, .., x_{n-1})[x_n] / (f)` with the derivation induced by the
//! canonical section.  The class of `x_0` solves `f = 0` exactly, and the
//! coordinates below the leader stay algebraically independent.

use std::sync::Arc;

use difflarge::diffpoly::diff_eval_ring;
use difflarge::extension::{build_extension, ext_derive, ext_invert, verify_diff_solution};
use difflarge::parse::parse_diffpoly;
use difflarge::reduction::{DLProblem, ProblemKind};
use difflarge::ratfunc::RatFunc;
use difflarge::rational::Rat;
use difflarge::{BaseFieldSpec, Jet};

fn main() -> difflarge::Result<()> {
    let base = Arc::new(BaseFieldSpec::trivial());
    let f = parse_diffpoly("x'^2 - x", &base)?;
    let field = build_extension(&f, false)?;
    println!("order {}, leader degree {}", field.order(), field.degree());

    // the generator class of x_0 is a solution of f
    let theta = field.generator();
    let image = diff_eval_ring(&f, &theta, &field)?;
    println!("f(theta) = 0: {}", image.is_zero());

    // derivation: delta(x_0) is the class of x', delta(x') = 1/2
    let d1 = ext_derive(&theta, &field)?;
    let d2 = ext_derive(&d1, &field)?;
    println!("delta(theta)   = {}", d1);
    println!("delta^2(theta) = {}", d2);

    // inversion by the extended Euclidean algorithm
    let inv = ext_invert(&d1, &field)?;
    let one = field.constant(RatFunc::constant(Rat::one()))?;
    println!(
        "delta(theta)^-1 = {} (product is one: {})",
        inv,
        field.sub(&field.mul(&d1, &inv)?, &one).is_zero()
    );

    let p = DLProblem {
        f,
        g: parse_diffpoly("x", &base)?,
        witness: Jet::new(vec![
            RatFunc::constant(Rat::one()),
            RatFunc::constant(Rat::one()),
        ])?,
        kind: ProblemKind::Strict,
    };
    let report = verify_diff_solution(&p, &field)?;
    println!(
        "f maps to zero: {}, g stays nonzero: {}",
        report.f_image_zero, report.g_image_nonzero
    );
    Ok(())
}
