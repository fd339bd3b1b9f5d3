//! Build the canonical section of a hypersurface `f = 0` and extend
//! witness jets along it.
//!
//! Away from the separant locus, the derivation
//! `D_s x_i = x_{i+1} (i < n)`, `D_s x_n = h / s_f` satisfies
//! `D_s(f) = 0`, so iterating it extends any smooth point of `f = 0` to a
//! jet of arbitrary length that satisfies all prolongations of `f`.

use std::sync::Arc;

use difflarge::dvariety::{dpoint_check, jet_extend, section_numerator};
use difflarge::parse::{parse_diffpoly, print_diffpoly, print_field_elem};
use difflarge::reduction::{DLProblem, ProblemKind};
use difflarge::ratfunc::RatFunc;
use difflarge::rational::Rat;
use difflarge::{BaseFieldSpec, Jet};

fn main() -> difflarge::Result<()> {
    let base = Arc::new(BaseFieldSpec::trivial());
    let f = parse_diffpoly("x*x' - 1", &base)?;
    let s = section_numerator(&f)?;
    println!("f = {}", print_diffpoly(&f));
    println!("separant  s_f = {}", print_diffpoly(&s.separant));
    println!("numerator h   = {}", print_diffpoly(&s.numerator_h));

    // extend the smooth witness (1, 1) to a 6-jet
    let c = Jet::new(vec![
        RatFunc::constant(Rat::one()),
        RatFunc::constant(Rat::one()),
    ])?;
    let extended = jet_extend(&f, &c, 6)?;
    for (i, coord) in extended.coords().iter().enumerate() {
        println!("c_{} = {}", i, print_field_elem(coord, &base));
    }

    let p = DLProblem {
        f: f.clone(),
        g: parse_diffpoly("x", &base)?,
        witness: c.clone(),
        kind: ProblemKind::Strict,
    };
    let report = dpoint_check(&p, &c)?;
    println!(
        "on locus: {}, smooth: {}, avoids g*s_f = 0: {}",
        report.on_locus, report.smooth, report.avoids
    );
    Ok(())
}
