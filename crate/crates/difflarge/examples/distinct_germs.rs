//! Enumerate pairwise-distinct series solutions of one equation by
//! searching a grid of admissible witness jets.
//!
//! For `x'^2 = x` the smooth witnesses are `(q^2, q)` with `q` nonzero;
//! each yields the germ of a shifted parabola `(t/2 + q)^2`.

use std::sync::Arc;

use difflarge::parse::{parse_diffpoly, print_field_elem};
use difflarge::reduction::{DLProblem, ProblemKind};
use difflarge::ratfunc::RatFunc;
use difflarge::rational::Rat;
use difflarge::series::distinct_solutions;
use difflarge::{BaseFieldSpec, Jet};

fn main() -> difflarge::Result<()> {
    let base = Arc::new(BaseFieldSpec::trivial());
    let p = DLProblem {
        f: parse_diffpoly("x'^2 - x", &base)?,
        g: parse_diffpoly("x", &base)?,
        witness: Jet::new(vec![
            RatFunc::constant(Rat::one()),
            RatFunc::constant(Rat::one()),
        ])?,
        kind: ProblemKind::Strict,
    };
    let sols = distinct_solutions(&p, 5, 8, 8)?;
    for sol in &sols {
        println!(
            "witness ({}, {}): y = {}",
            print_field_elem(sol.jet.coord(0), &base),
            print_field_elem(sol.jet.coord(1), &base),
            sol.y
        );
    }
    Ok(())
}
