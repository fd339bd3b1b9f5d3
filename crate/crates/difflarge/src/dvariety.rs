//! The section of the prolongation of the hypersurface `f = 0` and the
//! derivation it induces on the ambient rational function field.
//!
//! For `f` of order `n` with separant `s_f`, the numerator
//! `h = -(f^delta + sum_{i<n} x_{i+1} df/dx_i)` defines the derivation
//! `D_s x_i = x_{i+1}` (i < n), `D_s x_n = h/s_f` on `K(x_0..x_n)`, which
//! kills `f` identically. Iterating it and evaluating at a smooth point
//! extends a jet to arbitrarily many higher derivatives.

use crate::diffpoly::{DiffPoly, Jet};
use crate::error::{Error, Result};
use crate::multipoly::Var;
use crate::ratfunc::RatFunc;
use crate::reduction::DLProblem;

/// The section numerator `h` and separant of a hypersurface `f = 0`.
#[derive(Clone, Debug)]
pub struct SectionData {
    pub f: DiffPoly,
    pub numerator_h: DiffPoly,
    pub separant: DiffPoly,
}

/// Exact evaluation of the three D-point clauses at a jet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DPointReport {
    pub on_locus: bool,
    pub smooth: bool,
    pub avoids: bool,
}

impl DPointReport {
    pub fn all(&self) -> bool {
        self.on_locus && self.smooth && self.avoids
    }
}

/// How [`jet_extend`] produces higher coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JetExtendMode {
    /// Iterate `D_s` symbolically, evaluate each `D_s^k(x_n)` at the jet.
    Symbolic,
    /// Solve `D^k f = 0` for `x_{n+k}` numerically at each step.
    Evaluate,
}

impl SectionData {
    pub fn order(&self) -> usize {
        self.f.order().expect("section data carries ordered f")
    }
}

/// Compute the section numerator `h` for `f` and verify `D_s(f) = 0`.
pub fn section_numerator(f: &DiffPoly) -> Result<SectionData> {
    let ld = f.leader_data()?;
    let n = ld.order;
    let mut h = f.coeff_derive()?;
    for i in 0..n {
        let p = f.partial_x(i);
        if !p.is_zero() {
            h = h.add(&p.mul(&DiffPoly::xvar(i + 1, f.base().clone()))?)?;
        }
    }
    let h = h.neg();
    let s = SectionData {
        f: f.clone(),
        numerator_h: h,
        separant: ld.separant,
    };
    // the defining identity, asserted symbolically
    let df = section_derive(f.as_ratfunc(), &s)?;
    if !df.is_zero() {
        return Err(Error::Internal("section derivation does not kill f".into()));
    }
    Ok(s)
}

/// Apply `D_s` to a rational function in `x_0..x_n` over the base field.
pub fn section_derive(e: &RatFunc, s: &SectionData) -> Result<RatFunc> {
    let n = s.order();
    let ds_xn = s
        .numerator_h
        .as_ratfunc()
        .div(s.separant.as_ratfunc())?;
    let base = s.f.base();
    let mut out = RatFunc::zero();
    for v in e.vars() {
        let image = match v {
            Var::X(i) if i < n => RatFunc::var(Var::X(i + 1)),
            Var::X(i) if i == n => ds_xn.clone(),
            Var::X(i) => {
                return Err(Error::Precondition(format!(
                    "variable x_{} exceeds the ambient order {}",
                    i, n
                )))
            }
            Var::U(i) if i < base.generator_count() => base.derivation_of(i).clone(),
            Var::U(_) => return Err(Error::BaseMismatch),
        };
        if !image.is_zero() {
            out = out.add(&e.partial(v).mul(&image));
        }
    }
    Ok(out)
}

/// Extend a jet on `f = 0` to length `target_len = N+1` using the section
/// recurrence. Requires `f(c) = 0`, `s_f(c) != 0`, `N >= ord f`.
pub fn jet_extend(f: &DiffPoly, c: &Jet, n_target: usize) -> Result<Jet> {
    jet_extend_with_mode(f, c, n_target, JetExtendMode::Symbolic)
}

pub fn jet_extend_with_mode(
    f: &DiffPoly,
    c: &Jet,
    n_target: usize,
    mode: JetExtendMode,
) -> Result<Jet> {
    let s = section_numerator(f)?;
    let n = s.order();
    if c.len() != n + 1 {
        return Err(Error::JetTooShort {
            needed: n + 1,
            got: c.len(),
        });
    }
    if n_target < n {
        return Err(Error::Precondition(
            "target length below the order of f".into(),
        ));
    }
    if !f.eval_jet(c)?.is_zero() {
        return Err(Error::Precondition("witness does not vanish on f".into()));
    }
    let sep_at_c = s.separant.eval_jet(c)?;
    if sep_at_c.is_zero() {
        return Err(Error::Precondition("separant vanishes at the witness".into()));
    }
    let mut coords = c.coords().to_vec();
    match mode {
        JetExtendMode::Symbolic => {
            // y_k = D_s^k(x_n); c_{n+k} = y_k(c)
            let mut y = RatFunc::var(Var::X(n));
            for _ in n..n_target {
                y = section_derive(&y, &s)?;
                let val = y.eval(&mut |v| match v {
                    Var::X(i) => Ok(c.coord(i).clone()),
                    Var::U(_) => Ok(RatFunc::var(v)),
                })?;
                coords.push(val);
            }
        }
        JetExtendMode::Evaluate => {
            // D^k f = s_f x_{n+k} + tail_k; solve for x_{n+k} at the jet
            let mut dk = f.clone();
            for k in 1..=(n_target - n) {
                dk = dk.total_derivative()?;
                let top = n + k;
                let tail = dk.sub(
                    &s.separant
                        .mul(&DiffPoly::xvar(top, f.base().clone()))?,
                )?;
                debug_assert!(tail.order().map_or(true, |m| m < top));
                let tail_val = tail.eval_jet(&Jet::new(coords.clone())?)?;
                coords.push(tail_val.neg().div(&sep_at_c)?);
            }
        }
    }
    Jet::new(coords)
}

/// Evaluate the D-point clauses of a problem at a jet of length `ord f + 1`.
pub fn dpoint_check(p: &DLProblem, c: &Jet) -> Result<DPointReport> {
    let ld = p.f.leader_data()?;
    if c.len() != ld.order + 1 {
        return Err(Error::JetTooShort {
            needed: ld.order + 1,
            got: c.len(),
        });
    }
    let on_locus = p.f.eval_jet(c)?.is_zero();
    let sep_val = ld.separant.eval_jet(c)?;
    let smooth = !sep_val.is_zero();
    let avoids = match p.g.eval_jet(c) {
        Ok(gv) => !gv.mul(&sep_val).is_zero(),
        Err(Error::JetTooShort { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(DPointReport {
        on_locus,
        smooth,
        avoids,
    })
}
