//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! The variable universe is fixed: base-field generators `u_0..u_{k-1}`
//! followed by the jet variables `x_0, x_1, ...` where `x_i` stands for the
//! i-th derivative of the differential variable. The monomial order is
//! graded lexicographic with u-variables before x-variables; all
//! "leading coefficient" normalization in the crate refers to this order.

use crate::error::{Error, Result};
use crate::rational::Rat;
use num::bigint::BigInt;
use num::Integer;
use num::{One, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A variable of the fixed universe: base generator `U(i)` or jet variable `X(i)`.
///
/// The derived order (all `U` before all `X`, each by index) is the
/// lexicographic significance used by the monomial order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    U(usize),
    X(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::U(i) => write!(f, "u{}", i),
            Var::X(i) => write!(f, "x{}", i),
        }
    }
}

/// A monomial: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|&(v, _)| v);
        for w in pairs.windows(2) {
            assert!(w[0].0 != w[1].0, "duplicate variable in monomial");
        }
        Monomial { exps: pairs }
    }

    pub fn is_unit(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.exps
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.exps
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => {
                    out.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.exps[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.exps[i].0, self.exps[i].1 + other.exps[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    /// Componentwise quotient, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut i = 0;
        for &(v, e) in &other.exps {
            loop {
                if i >= self.exps.len() {
                    return None;
                }
                let (w, d) = self.exps[i];
                match w.cmp(&v) {
                    Ordering::Less => {
                        out.push((w, d));
                        i += 1;
                    }
                    Ordering::Equal => {
                        if d < e {
                            return None;
                        }
                        if d > e {
                            out.push((w, d - e));
                        }
                        i += 1;
                        break;
                    }
                    Ordering::Greater => return None,
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        Some(Monomial { exps: out })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then lexicographic with the
    /// smaller variable (u before x, each by index) more significant.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                // the side with a remaining factor has a positive exponent at
                // an earlier position than the exhausted side
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(v, e)), Some(&(w, d))) => match v.cmp(&w) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        match e.cmp(&d) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

/// Coefficient-ring abstraction used to evaluate a polynomial in an
/// arbitrary commutative ring (field elements, truncated series, extension
/// field elements).
pub trait CoeffRing {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_rat(&self, r: &Rat) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn pow(&self, a: &Self::Elem, mut e: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Sparse multivariate polynomial; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        MultiPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        MultiPoly::term(Rat::one(), Monomial::var(v))
    }

    pub fn term(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in pairs {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += &c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(Monomial::is_unit)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn has_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Largest x-index occurring, if any.
    pub fn max_x_index(&self) -> Option<usize> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::X(i) => Some(i),
                _ => None,
            })
            .max()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Leading term under graded lex; `None` for the zero polynomial.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial(&self, v: Var) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let q = m.div(&Monomial::var(v)).expect("exponent positive");
            out.add_term(q, c * &Rat::from_int(e as i64));
        }
        out
    }

    /// Coefficients of `self` viewed as univariate in `v`; index = degree.
    pub fn coeffs_in_var(&self, v: Var) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            let rest = m
                .div(&Monomial::from_pairs(vec![(v, e as u32)]))
                .expect("own exponent divides");
            out[e].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in_var(v: Var, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let m = Monomial::from_pairs(vec![(v, e as u32)]);
            out = out.add(&c.mul_monomial(&m));
        }
        out
    }

    /// Substitute a polynomial for one variable.
    pub fn subst_var(&self, v: Var, value: &MultiPoly) -> MultiPoly {
        let coeffs = self.coeffs_in_var(v);
        let mut out = MultiPoly::zero();
        let mut p = MultiPoly::one();
        for (e, c) in coeffs.iter().enumerate() {
            if e > 0 {
                p = p.mul(value);
            }
            out = out.add(&c.mul(&p));
        }
        out
    }

    /// Evaluate in an arbitrary coefficient ring; `image` supplies the value
    /// of each occurring variable.
    pub fn eval_in<R: CoeffRing>(
        &self,
        ring: &R,
        image: &mut impl FnMut(Var) -> Result<R::Elem>,
    ) -> Result<R::Elem> {
        let mut acc = ring.zero();
        let mut cache: BTreeMap<Var, R::Elem> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = ring.from_rat(c);
            for &(v, e) in m.pairs() {
                if !cache.contains_key(&v) {
                    let val = image(v)?;
                    cache.insert(v, val);
                }
                t = ring.mul(&t, &ring.pow(&cache[&v], e));
            }
            acc = ring.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Content and primitive part: returns `(unit, pp)` with
    /// `self = unit * pp`, where `pp` has coprime integer coefficients and a
    /// positive leading coefficient. The zero polynomial yields `(0, 0)`.
    pub fn primitive_part(&self) -> (Rat, MultiPoly) {
        if self.is_zero() {
            return (Rat::zero(), MultiPoly::zero());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut unit = Rat::from_big(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            unit = -unit;
        }
        let inv = unit.recip().expect("nonzero unit");
        (unit, self.scale(&inv))
    }

    /// Exact multivariate division; `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (dm, dc) = d.leading().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().expect("nonzero remainder");
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            let t = MultiPoly::term(qc, qm);
            quo = quo.add(&t);
            rem = rem.sub(&t.mul(d));
        }
        Some(quo)
    }

    /// Pseudo-division viewing both polynomials as univariate in `v`:
    /// returns `(q, r, e)` with `lc_v(d)^e * self = q * d + r` and
    /// `deg_v(r) < deg_v(d)`. The multiplier exponent `e` is minimized
    /// greedily per step.
    pub fn pseudo_div_rem(&self, d: &MultiPoly, v: Var) -> Result<(MultiPoly, MultiPoly, u32)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.degree_in(v);
        let lc = {
            let coeffs = d.coeffs_in_var(v);
            coeffs[dd as usize].clone()
        };
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero();
        let mut e = 0u32;
        loop {
            let rd = rem.degree_in(v);
            if rem.is_zero() || rd < dd {
                return Ok((quo, rem, e));
            }
            let rcoeffs = rem.coeffs_in_var(v);
            let a = rcoeffs[rd as usize].clone();
            let m = Monomial::from_pairs(vec![(v, rd - dd)]);
            // try exact division of the leading coefficient first
            let (factor, qterm) = match a.exact_div(&lc) {
                Some(q) => (None, q.mul_monomial(&m)),
                None => (Some(lc.clone()), a.mul_monomial(&m)),
            };
            if let Some(f) = factor {
                rem = rem.mul(&f);
                quo = quo.mul(&f);
                e += 1;
            }
            quo = quo.add(&qterm);
            rem = rem.sub(&qterm.mul(d));
            debug_assert!(rem.degree_in(v) < rd || rem.is_zero());
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let ca = c.abs();
            if m.is_unit() {
                write!(f, "{}", ca)?;
            } else {
                let mut lead = true;
                if !ca.is_one() {
                    write!(f, "{}*", ca)?;
                }
                for &(v, e) in m.pairs() {
                    if !lead {
                        write!(f, "*")?;
                    }
                    lead = false;
                    if e == 1 {
                        write!(f, "{}", v)?;
                    } else {
                        write!(f, "{}^{}", v, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(Var::X(i))
    }

    #[test]
    fn monomial_order_graded_lex() {
        let u0 = Monomial::var(Var::U(0));
        let x0 = Monomial::var(Var::X(0));
        let x1 = Monomial::var(Var::X(1));
        // same degree: earlier variable (u before x) is larger
        assert!(u0 > x0);
        assert!(x0 > x1);
        // degree dominates
        let x1sq = x1.mul(&x1);
        assert!(x1sq > u0);
        assert_eq!(x0.cmp(&x0), Ordering::Equal);
    }

    #[test]
    fn arithmetic_basics() {
        let p = x(0).add(&MultiPoly::one()); // x0 + 1
        let q = x(0).sub(&MultiPoly::one()); // x0 - 1
        let prod = p.mul(&q);
        let expect = x(0).mul(&x(0)).sub(&MultiPoly::one());
        assert_eq!(prod, expect);
        assert_eq!(prod.degree_in(Var::X(0)), 2);
        assert!(prod.exact_div(&p).unwrap() == q);
        assert!(prod.exact_div(&x(1).add(&MultiPoly::one())).is_none());
    }

    #[test]
    fn partial_derivative() {
        // d/dx0 (x0^2 x1 + 3 x0) = 2 x0 x1 + 3
        let p = x(0)
            .pow(2)
            .mul(&x(1))
            .add(&x(0).scale(&Rat::from_int(3)));
        let d = p.partial(Var::X(0));
        let expect = x(0)
            .mul(&x(1))
            .scale(&Rat::from_int(2))
            .add(&MultiPoly::constant(Rat::from_int(3)));
        assert_eq!(d, expect);
        assert!(p.partial(Var::U(0)).is_zero());
    }

    #[test]
    fn primitive_part_and_content() {
        let p = x(0)
            .scale(&Rat::from_frac(-4, 6))
            .add(&MultiPoly::constant(Rat::from_frac(-2, 9)));
        let (unit, pp) = p.primitive_part();
        assert_eq!(pp.mul(&MultiPoly::constant(unit.clone())), p);
        assert!(pp.leading_coeff().is_positive());
        // -2/3 x0 - 2/9 = (-2/9)(3 x0 + 1)
        assert_eq!(unit, Rat::from_frac(-2, 9));
    }

    #[test]
    fn pseudo_division_univariate_view() {
        // divide x1^3 by x0*x1 - 1 in x1: x0^2 * x1^3 = (x0 x1^2 + x1) (x0 x1 - 1) + x1... check identity
        let g = x(1).pow(3);
        let d = x(0).mul(&x(1)).sub(&MultiPoly::one());
        let (q, r, e) = g.pseudo_div_rem(&d, Var::X(1)).unwrap();
        let lc = x(0);
        let lhs = g.mul(&lc.pow(e));
        assert_eq!(lhs, q.mul(&d).add(&r));
        assert!(r.degree_in(Var::X(1)) < 1);
    }

    #[test]
    fn subst_var_expands() {
        // (x1)^2 with x1 -> x0 + 1 gives x0^2 + 2x0 + 1
        let p = x(1).pow(2);
        let s = p.subst_var(Var::X(1), &x(0).add(&MultiPoly::one()));
        let expect = x(0)
            .pow(2)
            .add(&x(0).scale(&Rat::from_int(2)))
            .add(&MultiPoly::one());
        assert_eq!(s, expect);
    }
}
