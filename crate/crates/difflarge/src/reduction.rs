//! Ritt-Kolchin reduction against a single differential polynomial,
//! saturation-ideal membership, smooth-factor selection, and validation of
//! differentially large problem instances.
//!
//! Reduction returns a certificate: the exact identity
//! `(i_f s_f)^r g = sum_j cofactor_j D^j f + remainder` with the remainder
//! reduced with respect to `f`, checkable by expansion.

use crate::diffpoly::{DiffPoly, Jet, LeaderData};
use crate::error::{Error, Result};
use crate::factor::kronecker_factor;
use std::collections::BTreeMap;
use std::fmt;

/// Default bound handed to the factorizer when callers do not supply one.
pub const DEFAULT_FACTOR_DEGREE_BOUND: u32 = 12;

/// Retry bound for the exponent-balancing loop in [`ritt_reduce`].
const BALANCE_RETRY_BOUND: usize = 16;

/// An exact reduction identity `(i_f s_f)^r g = sum_j cofactor_j D^j f + remainder`.
#[derive(Clone, Debug)]
pub struct ReductionCertificate {
    pub remainder: DiffPoly,
    pub r: u32,
    pub cofactors: BTreeMap<usize, DiffPoly>,
}

impl ReductionCertificate {
    /// Re-expand the identity and compare both sides exactly.
    pub fn verify(&self, g: &DiffPoly, f: &DiffPoly) -> Result<bool> {
        let ld = f.leader_data()?;
        let lhs = g.mul(&ld.initial.mul(&ld.separant)?.pow(self.r))?;
        let mut rhs = self.remainder.clone();
        let max_j = self.cofactors.keys().copied().max().unwrap_or(0);
        let mut df = f.clone();
        for j in 0..=max_j {
            if let Some(c) = self.cofactors.get(&j) {
                rhs = rhs.add(&c.mul(&df)?)?;
            }
            if j < max_j {
                df = df.total_derivative()?;
            }
        }
        Ok(lhs == rhs)
    }
}

/// Problem flavour: strict instances demand `ord g < ord f`; wide instances
/// only `ord f >= 1` and `ord f >= ord g` with `(g s_f)` nonvanishing.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProblemKind {
    Strict,
    Wide,
}

/// A differentially large problem `(f, g)` with a witness jet.
#[derive(Clone, Debug)]
pub struct DLProblem {
    pub f: DiffPoly,
    pub g: DiffPoly,
    pub witness: Jet,
    pub kind: ProblemKind,
}

/// Outcome of [`problem_validate`]: the names of every violated clause.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")
        } else {
            write!(f, "invalid: {}", self.violations.join(", "))
        }
    }
}

/// `g` is reduced with respect to `f`: no proper derivative of the leader
/// occurs, and the leader itself occurs with smaller degree than in `f`.
fn is_reduced(g: &DiffPoly, ld: &LeaderData) -> bool {
    match g.order() {
        None => true,
        Some(m) => m < ld.order || (m == ld.order && g.degree_in_x(m) < ld.leader_degree),
    }
}

/// Running state of the division: the invariant is
/// `s_f^s_count i_f^i_count g = sum_j cofactors[j] D^j f + cur`.
struct Division {
    cur: DiffPoly,
    cofactors: BTreeMap<usize, DiffPoly>,
    s_count: u32,
    i_count: u32,
}

impl Division {
    fn premultiply(&mut self, m: &DiffPoly) -> Result<()> {
        self.cur = self.cur.mul(m)?;
        for c in self.cofactors.values_mut() {
            *c = c.mul(m)?;
        }
        Ok(())
    }

    fn add_cofactor(&mut self, j: usize, q: &DiffPoly) -> Result<()> {
        let entry = match self.cofactors.remove(&j) {
            Some(c) => c.add(q)?,
            None => q.clone(),
        };
        self.cofactors.insert(j, entry);
        Ok(())
    }
}

/// Exact quotient of differential polynomials if it exists (the candidate
/// quotient must again have an x-free denominator).
fn try_div(num: &DiffPoly, den: &DiffPoly) -> Option<DiffPoly> {
    if den.is_zero() {
        return None;
    }
    let q = num.as_ratfunc().div(den.as_ratfunc()).ok()?;
    DiffPoly::new(q, num.base().clone()).ok()
}

/// Eliminate the top power of `x_idx` in `d.cur` against `by` (which has
/// leader `x_idx` of degree `by_deg` and initial `lead`), pseudo-dividing.
/// `count` tallies the premultiplications by `lead`.
fn eliminate_step(
    d: &mut Division,
    idx: usize,
    by: &DiffPoly,
    by_deg: u32,
    lead: &DiffPoly,
    j: usize,
    lead_is_unit: bool,
    count: &mut u32,
) -> Result<()> {
    let e = d.cur.degree_in_x(idx);
    debug_assert!(e >= by_deg);
    let top = d.cur.coeffs_in_x(idx).pop().expect("nonzero degree coeff");
    let shift = DiffPoly::xvar(idx, d.cur.base().clone()).pow(e - by_deg);
    let q = if lead_is_unit {
        let inv = lead.as_field_elem().expect("unit is x-free").recip()?;
        top.scale_field(&inv)?.mul(&shift)?
    } else if let Some(q) = try_div(&top, lead) {
        q.mul(&shift)?
    } else {
        d.premultiply(lead)?;
        *count += 1;
        top.mul(&shift)?
    };
    d.cur = d.cur.sub(&q.mul(by)?)?;
    d.add_cofactor(j, &q)?;
    Ok(())
}

/// The differential division algorithm with cofactor tracking.
pub fn ritt_reduce(g: &DiffPoly, f: &DiffPoly) -> Result<ReductionCertificate> {
    ritt_reduce_with_cap(g, f, crate::diffpoly::DEFAULT_DERIVATIVE_CAP)
}

pub fn ritt_reduce_with_cap(g: &DiffPoly, f: &DiffPoly, cap: usize) -> Result<ReductionCertificate> {
    let ld = f.leader_data()?;
    let n = ld.order;
    let d = ld.leader_degree;
    let s_unit = ld.separant.is_x_free();
    let i_unit = ld.initial.is_x_free();

    let mut div = Division {
        cur: g.clone(),
        cofactors: BTreeMap::new(),
        s_count: 0,
        i_count: 0,
    };

    // derivatives of f, filled lazily up to the order we meet
    let mut derivs: Vec<DiffPoly> = vec![f.clone()];
    let deriv_up_to = |k: usize, derivs: &mut Vec<DiffPoly>| -> Result<DiffPoly> {
        while derivs.len() <= k {
            let next = derivs.last().unwrap().total_derivative_with_cap(cap)?;
            derivs.push(next);
        }
        Ok(derivs[k].clone())
    };

    for round in 0.. {
        if round > BALANCE_RETRY_BOUND {
            return Err(Error::Internal(
                "reduction exponent balancing did not converge".into(),
            ));
        }

        // prolonged phase: kill every occurrence of x_{n+k}, k >= 1
        while let Some(m) = div.cur.order() {
            if m <= n {
                break;
            }
            let k = m - n;
            let dk = deriv_up_to(k, &mut derivs)?;
            debug_assert_eq!(dk.order(), Some(m));
            debug_assert_eq!(dk.degree_in_x(m), 1);
            while div.cur.degree_in_x(m) >= 1 {
                let mut s_count = div.s_count;
                eliminate_step(&mut div, m, &dk, 1, &ld.separant, k, s_unit, &mut s_count)?;
                div.s_count = s_count;
            }
        }

        // algebraic phase: pseudo-divide by f in x_n
        while div.cur.order() == Some(n) && div.cur.degree_in_x(n) >= d {
            let mut i_count = div.i_count;
            eliminate_step(&mut div, n, f, d, &ld.initial, 0, i_unit, &mut i_count)?;
            div.i_count = i_count;
        }
        debug_assert!(is_reduced(&div.cur, &ld));

        // balance the two exponents into a single r
        if div.s_count >= div.i_count {
            // i_f carries no x_n, so padding with it preserves reducedness
            let r = div.s_count;
            let pad = ld.initial.pow(r - div.i_count);
            div.cur = div.cur.mul(&pad)?;
            for c in div.cofactors.values_mut() {
                *c = c.mul(&pad)?;
            }
            debug_assert!(is_reduced(&div.cur, &ld));
            return Ok(ReductionCertificate {
                remainder: div.cur,
                r,
                cofactors: div.cofactors,
            });
        }
        // more i_f than s_f multiplications: padding with s_f may break
        // reducedness, in which case we fold the pad in and divide again
        let pad = ld.separant.pow(div.i_count - div.s_count);
        let padded = div.cur.mul(&pad)?;
        if is_reduced(&padded, &ld) {
            let r = div.i_count;
            div.cur = padded;
            for c in div.cofactors.values_mut() {
                *c = c.mul(&pad)?;
            }
            return Ok(ReductionCertificate {
                remainder: div.cur,
                r,
                cofactors: div.cofactors,
            });
        }
        div.premultiply(&pad)?;
        div.s_count = div.i_count;
    }
    unreachable!()
}

/// Membership of `g` in the saturation ideal `[f] : s_f^inf` for
/// irreducible `f`: true exactly when the reduction remainder vanishes.
pub fn saturation_member(g: &DiffPoly, f: &DiffPoly, assume_irreducible: bool) -> Result<bool> {
    saturation_member_with_bound(g, f, assume_irreducible, DEFAULT_FACTOR_DEGREE_BOUND)
}

pub fn saturation_member_with_bound(
    g: &DiffPoly,
    f: &DiffPoly,
    assume_irreducible: bool,
    degree_bound: u32,
) -> Result<bool> {
    f.leader_data()?;
    if !assume_irreducible {
        let num = f.as_ratfunc().num();
        let (_, factors) = kronecker_factor(num, degree_bound)?;
        if factors.len() != 1 {
            return Err(Error::RequiresIrreducible);
        }
    }
    Ok(ritt_reduce(g, f)?.remainder.is_zero())
}

/// Pick an irreducible factor `h` of `f` with `ord h = ord f`, `h(c) = 0`
/// and `s_h(c) != 0`. Supplied factors must multiply to `f` up to a unit of
/// the base field; `None` delegates to the factorizer.
pub fn select_smooth_factor(
    f: &DiffPoly,
    c: &Jet,
    factors: Option<&[DiffPoly]>,
) -> Result<DiffPoly> {
    select_smooth_factor_with_bound(f, c, factors, DEFAULT_FACTOR_DEGREE_BOUND)
}

pub fn select_smooth_factor_with_bound(
    f: &DiffPoly,
    c: &Jet,
    factors: Option<&[DiffPoly]>,
    degree_bound: u32,
) -> Result<DiffPoly> {
    let ld = f.leader_data()?;
    if !f.eval_jet(c)?.is_zero() {
        return Err(Error::Precondition("witness does not vanish on f".into()));
    }
    if ld.separant.eval_jet(c)?.is_zero() {
        return Err(Error::Precondition("separant vanishes at the witness".into()));
    }
    let owned;
    let list: &[DiffPoly] = match factors {
        Some(fs) => {
            let mut prod = DiffPoly::one(f.base().clone());
            for h in fs {
                prod = prod.mul(h)?;
            }
            // agreement up to a unit of K
            match try_div(f, &prod) {
                Some(q) if q.is_x_free() => {}
                _ => {
                    return Err(Error::Precondition(
                        "supplied factors do not multiply to f".into(),
                    ))
                }
            }
            fs
        }
        None => {
            let (_, parts) = kronecker_factor(f.as_ratfunc().num(), degree_bound)?;
            owned = parts
                .into_iter()
                .map(|p| DiffPoly::from_poly(p, f.base().clone()))
                .collect::<Result<Vec<_>>>()?;
            &owned
        }
    };
    for h in list {
        if h.order() != Some(ld.order) {
            continue;
        }
        if !h.eval_jet(c)?.is_zero() {
            continue;
        }
        if h.leader_data()?.separant.eval_jet(c)?.is_zero() {
            continue;
        }
        return Ok(h.clone());
    }
    Err(Error::Internal(
        "no factor meets the smoothness conditions despite valid preconditions".into(),
    ))
}

/// Check every invariant of a [`DLProblem`], naming violated clauses.
pub fn problem_validate(p: &DLProblem) -> ValidationReport {
    let mut v = Vec::new();
    let Some(n) = p.f.order() else {
        return ValidationReport {
            violations: vec!["order-defined".into()],
        };
    };
    // x-free g counts as order below every n
    let g_ord = p.g.order().map(|m| m as i64).unwrap_or(-1);
    if p.g.is_zero() {
        v.push("g-nonzero".into());
    }
    match p.kind {
        ProblemKind::Strict => {
            if g_ord >= n as i64 {
                v.push("strict-order".into());
            }
        }
        ProblemKind::Wide => {
            if n < 1 {
                v.push("wide-order-f".into());
            }
            if g_ord > n as i64 {
                v.push("wide-order-g".into());
            }
        }
    }
    if p.witness.len() != n + 1 {
        v.push("witness-length".into());
        return ValidationReport { violations: v };
    }
    let sep = match p.f.leader_data() {
        Ok(ld) => ld.separant,
        Err(_) => {
            v.push("order-defined".into());
            return ValidationReport { violations: v };
        }
    };
    match p.f.eval_jet(&p.witness) {
        Ok(val) if val.is_zero() => {}
        _ => v.push("f-vanishes".into()),
    }
    let sep_val = sep.eval_jet(&p.witness);
    match p.kind {
        ProblemKind::Strict => match sep_val {
            Ok(val) if !val.is_zero() => {}
            _ => v.push("separant-nonzero".into()),
        },
        ProblemKind::Wide => {
            let gs = p
                .g
                .mul(&sep)
                .and_then(|h| h.eval_jet(&p.witness));
            match gs {
                Ok(val) if !val.is_zero() => {}
                _ => v.push("g-separant-nonzero".into()),
            }
        }
    }
    ValidationReport { violations: v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basefield::BaseFieldSpec;
    use crate::ratfunc::RatFunc;
    use crate::rational::Rat;
    use std::sync::Arc;

    fn base_q() -> Arc<BaseFieldSpec> {
        Arc::new(BaseFieldSpec::trivial())
    }

    fn x(i: usize, b: &Arc<BaseFieldSpec>) -> DiffPoly {
        DiffPoly::xvar(i, b.clone())
    }

    fn q(n: i64) -> RatFunc {
        RatFunc::constant(Rat::from_int(n))
    }

    fn f_x1sq_minus_x0(b: &Arc<BaseFieldSpec>) -> DiffPoly {
        x(1, b).pow(2).sub(&x(0, b)).unwrap()
    }

    #[test]
    fn reduce_x2_against_x1sq_minus_x0() {
        // (2 x1) x2 = 1 * Df + x1 with Df = 2 x1 x2 - x1
        let b = base_q();
        let f = f_x1sq_minus_x0(&b);
        let g = x(2, &b);
        let cert = ritt_reduce(&g, &f).unwrap();
        assert_eq!(cert.remainder, x(1, &b));
        assert_eq!(cert.r, 1);
        assert_eq!(cert.cofactors.len(), 1);
        assert!(cert.cofactors[&1].as_ratfunc().is_one());
        assert!(cert.verify(&g, &f).unwrap());
    }

    #[test]
    fn reduce_already_reduced() {
        let b = base_q();
        let f = f_x1sq_minus_x0(&b);
        let g = x(0, &b);
        let cert = ritt_reduce(&g, &f).unwrap();
        assert_eq!(cert.remainder, g);
        assert_eq!(cert.r, 0);
        assert!(cert.cofactors.is_empty());
        assert!(cert.verify(&g, &f).unwrap());
    }

    #[test]
    fn reduce_f_by_itself() {
        let b = base_q();
        let f = f_x1sq_minus_x0(&b);
        let cert = ritt_reduce(&f, &f).unwrap();
        assert!(cert.remainder.is_zero());
        assert_eq!(cert.r, 0);
        assert!(cert.cofactors[&0].as_ratfunc().is_one());
        assert!(cert.verify(&f, &f).unwrap());
    }

    #[test]
    fn reduce_cube_of_leader() {
        // x1^3 = x1 * f + x0 x1
        let b = base_q();
        let f = f_x1sq_minus_x0(&b);
        let g = x(1, &b).pow(3);
        let cert = ritt_reduce(&g, &f).unwrap();
        assert_eq!(cert.remainder, x(0, &b).mul(&x(1, &b)).unwrap());
        assert_eq!(cert.r, 0);
        assert_eq!(cert.cofactors[&0], x(1, &b));
        assert!(cert.verify(&g, &f).unwrap());
    }

    #[test]
    fn reduce_idempotent_on_remainder() {
        let b = base_q();
        let f = f_x1sq_minus_x0(&b);
        for g in [
            x(2, &b).mul(&x(1, &b)).unwrap().add(&x(0, &b).pow(3)).unwrap(),
            x(3, &b).pow(2).sub(&x(2, &b)).unwrap(),
            x(1, &b).pow(5).add(&x(2, &b).mul(&x(0, &b)).unwrap()).unwrap(),
        ] {
            let cert = ritt_reduce(&g, &f).unwrap();
            assert!(cert.verify(&g, &f).unwrap());
            let again = ritt_reduce(&cert.remainder, &f).unwrap();
            assert_eq!(again.remainder, cert.remainder);
            assert_eq!(again.r, 0);
        }
    }

    #[test]
    fn reduce_with_nonunit_initial() {
        // f = x0 x1^2 + x1: both separant and initial are non-units
        let b = base_q();
        let f = x(0, &b)
            .mul(&x(1, &b).pow(2))
            .unwrap()
            .add(&x(1, &b))
            .unwrap();
        for g in [
            x(2, &b).pow(2),
            x(1, &b).pow(4).add(&x(2, &b)).unwrap(),
            x(3, &b).mul(&x(1, &b).pow(3)).unwrap(),
        ] {
            let cert = ritt_reduce(&g, &f).unwrap();
            assert!(cert.verify(&g, &f).unwrap());
            let ld = f.leader_data().unwrap();
            assert!(super::is_reduced(&cert.remainder, &ld));
        }
    }

    #[test]
    fn reduce_linear_leader_with_field_base() {
        let b = Arc::new(BaseFieldSpec::new(vec!["u".into()], vec![RatFunc::one()]).unwrap());
        let u = RatFunc::var(crate::multipoly::Var::U(0));
        // f = u x1 - x0^2
        let f = x(1, &b)
            .scale_field(&u)
            .unwrap()
            .sub(&x(0, &b).pow(2))
            .unwrap();
        let g = x(2, &b).mul(&x(1, &b)).unwrap();
        let cert = ritt_reduce(&g, &f).unwrap();
        assert!(cert.verify(&g, &f).unwrap());
        let ld = f.leader_data().unwrap();
        assert!(super::is_reduced(&cert.remainder, &ld));
    }

    #[test]
    fn saturation_examples() {
        let b = base_q();
        let f = f_x1sq_minus_x0(&b);
        // D(f) lies in [f]
        let df = f.total_derivative().unwrap();
        assert!(saturation_member(&df, &f, true).unwrap());
        // x0 does not
        assert!(!saturation_member(&x(0, &b), &f, true).unwrap());
        // x3 * f is a multiple of f
        let m = x(3, &b).mul(&f).unwrap();
        assert!(saturation_member(&m, &f, true).unwrap());
    }

    #[test]
    fn saturation_rejects_reducible() {
        let b = base_q();
        // (x1 - x0)(x1 + x0) is reducible
        let f = x(1, &b)
            .sub(&x(0, &b))
            .unwrap()
            .mul(&x(1, &b).add(&x(0, &b)).unwrap())
            .unwrap();
        assert!(matches!(
            saturation_member(&x(0, &b), &f, false),
            Err(Error::RequiresIrreducible)
        ));
        // with verification requested, irreducible f passes
        let f = f_x1sq_minus_x0(&b);
        assert!(!saturation_member(&x(0, &b), &f, false).unwrap());
    }

    #[test]
    fn smooth_factor_examples() {
        let b = base_q();
        let h1 = x(1, &b).sub(&x(0, &b)).unwrap();
        let h2 = x(1, &b).add(&x(0, &b)).unwrap();
        let f = h1.mul(&h2).unwrap();
        let c = Jet::new(vec![q(1), q(1)]).unwrap();
        // auto factorization normalizes the factor up to sign
        let h = select_smooth_factor(&f, &c, None).unwrap();
        assert!(h == h1 || h == h1.neg());
        // explicit factor list
        let list = [h2.clone(), h1.clone()];
        let h = select_smooth_factor(&f, &c, Some(&list)).unwrap();
        assert_eq!(h, h1);
        // irreducible f returns itself
        let f = f_x1sq_minus_x0(&b);
        let c = Jet::new(vec![q(4), q(2)]).unwrap();
        assert_eq!(select_smooth_factor(&f, &c, None).unwrap(), f);
    }

    #[test]
    fn smooth_factor_rejects_singular_witness() {
        let b = base_q();
        // (x1 - x0)^2 has vanishing separant wherever it vanishes
        let f = x(1, &b).sub(&x(0, &b)).unwrap().pow(2);
        let c = Jet::new(vec![q(1), q(1)]).unwrap();
        assert!(matches!(
            select_smooth_factor(&f, &c, None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn validate_examples() {
        let b = base_q();
        let f = f_x1sq_minus_x0(&b);
        let good = DLProblem {
            f: f.clone(),
            g: x(0, &b),
            witness: Jet::new(vec![q(1), q(1)]).unwrap(),
            kind: ProblemKind::Strict,
        };
        assert!(problem_validate(&good).is_valid());

        let singular = DLProblem {
            witness: Jet::new(vec![q(0), q(0)]).unwrap(),
            ..good.clone()
        };
        let rep = problem_validate(&singular);
        assert!(rep.violations.contains(&"separant-nonzero".to_string()));

        let zero_g = DLProblem {
            g: DiffPoly::zero(b.clone()),
            ..good.clone()
        };
        let rep = problem_validate(&zero_g);
        assert!(rep.violations.contains(&"g-nonzero".to_string()));

        let order_violation = DLProblem {
            g: x(1, &b),
            ..good.clone()
        };
        let rep = problem_validate(&order_violation);
        assert!(rep.violations.contains(&"strict-order".to_string()));

        // the same g is fine for a wide instance
        let wide = DLProblem {
            g: x(1, &b),
            kind: ProblemKind::Wide,
            ..good
        };
        assert!(problem_validate(&wide).is_valid());
    }
}
