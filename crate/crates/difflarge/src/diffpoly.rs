//! Differential polynomials in one differential variable over the base field.
//!
//! `x_i` stands for the i-th derivative of the differential variable `x`.
//! Coefficients live in `K = Q(u_1..u_k)`; internally a differential
//! polynomial is a rational function whose denominator is free of the jet
//! variables, so that applying the total derivative (which derives the
//! coefficients) never leaves the representable class.

use crate::basefield::{BaseFieldSpec, FieldElem};
use crate::error::{Error, Result};
use crate::multipoly::{CoeffRing, MultiPoly, Var};
use crate::ratfunc::RatFunc;
use std::fmt;
use std::sync::Arc;

/// Default cap on the derivative index, guarding runaway prolongation loops.
pub const DEFAULT_DERIVATIVE_CAP: usize = 64;

/// A differential polynomial `f` in `K{x}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffPoly {
    rf: RatFunc,
    base: Arc<BaseFieldSpec>,
}

/// A finite jet `(c_0..c_m)`: the values of `x, delta x, ..., delta^m x`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Jet {
    coords: Vec<FieldElem>,
}

impl Jet {
    pub fn new(coords: Vec<FieldElem>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Precondition("jet must have length >= 1".into()));
        }
        Ok(Jet { coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, i: usize) -> &FieldElem {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn truncated(&self, len: usize) -> Result<Jet> {
        if len == 0 || len > self.coords.len() {
            return Err(Error::JetTooShort {
                needed: len,
                got: self.coords.len(),
            });
        }
        Jet::new(self.coords[..len].to_vec())
    }
}

/// Order, leader degree, separant and initial of a differential polynomial.
#[derive(Clone, Debug)]
pub struct LeaderData {
    pub order: usize,
    pub leader_degree: u32,
    pub separant: DiffPoly,
    pub initial: DiffPoly,
}

impl DiffPoly {
    /// Wrap a rational function as a differential polynomial. The
    /// denominator must be free of jet variables and all u-variables must
    /// lie in the declared universe.
    pub fn new(rf: RatFunc, base: Arc<BaseFieldSpec>) -> Result<Self> {
        if rf.den().vars().iter().any(|v| matches!(v, Var::X(_))) {
            return Err(Error::Precondition(
                "denominator of a differential polynomial must be x-free".into(),
            ));
        }
        for v in rf.vars() {
            if let Var::U(i) = v {
                if i >= base.generator_count() {
                    return Err(Error::BaseMismatch);
                }
            }
        }
        Ok(DiffPoly { rf, base })
    }

    pub fn from_poly(p: MultiPoly, base: Arc<BaseFieldSpec>) -> Result<Self> {
        DiffPoly::new(RatFunc::from_poly(p), base)
    }

    pub fn zero(base: Arc<BaseFieldSpec>) -> Self {
        DiffPoly {
            rf: RatFunc::zero(),
            base,
        }
    }

    pub fn one(base: Arc<BaseFieldSpec>) -> Self {
        DiffPoly {
            rf: RatFunc::one(),
            base,
        }
    }

    pub fn constant(c: FieldElem, base: Arc<BaseFieldSpec>) -> Result<Self> {
        DiffPoly::new(c, base)
    }

    pub fn xvar(i: usize, base: Arc<BaseFieldSpec>) -> Self {
        DiffPoly {
            rf: RatFunc::var(Var::X(i)),
            base,
        }
    }

    pub fn as_ratfunc(&self) -> &RatFunc {
        &self.rf
    }

    pub fn base(&self) -> &Arc<BaseFieldSpec> {
        &self.base
    }

    pub fn same_base(&self, other: &DiffPoly) -> bool {
        self.base == other.base || *self.base == *other.base
    }

    pub fn is_zero(&self) -> bool {
        self.rf.is_zero()
    }

    /// The order `n` = largest i with `x_i` occurring; `None` if x-free.
    pub fn order(&self) -> Option<usize> {
        self.rf.num().max_x_index()
    }

    pub fn is_x_free(&self) -> bool {
        self.order().is_none()
    }

    /// The element of `K` this polynomial equals, if it is x-free.
    pub fn as_field_elem(&self) -> Option<FieldElem> {
        if self.is_x_free() {
            Some(self.rf.clone())
        } else {
            None
        }
    }

    pub fn degree_in_x(&self, i: usize) -> u32 {
        self.rf.num().degree_in(Var::X(i))
    }

    pub fn add(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.check_base(other)?;
        DiffPoly::new(self.rf.add(&other.rf), self.base.clone())
    }

    pub fn sub(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.check_base(other)?;
        DiffPoly::new(self.rf.sub(&other.rf), self.base.clone())
    }

    pub fn mul(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.check_base(other)?;
        DiffPoly::new(self.rf.mul(&other.rf), self.base.clone())
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            rf: self.rf.neg(),
            base: self.base.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        DiffPoly {
            rf: self.rf.pow(e),
            base: self.base.clone(),
        }
    }

    /// Multiply by an element of `K`.
    pub fn scale_field(&self, c: &FieldElem) -> Result<DiffPoly> {
        DiffPoly::new(self.rf.mul(c), self.base.clone())
    }

    fn check_base(&self, other: &DiffPoly) -> Result<()> {
        if self.same_base(other) {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial_x(&self, i: usize) -> DiffPoly {
        DiffPoly {
            rf: self.rf.partial(Var::X(i)),
            base: self.base.clone(),
        }
    }

    /// Coefficients viewed as univariate in `x_i` (index = degree).
    pub fn coeffs_in_x(&self, i: usize) -> Vec<DiffPoly> {
        let den_inv = RatFunc::new(MultiPoly::one(), self.rf.den().clone())
            .expect("denominator nonzero");
        self.rf
            .num()
            .coeffs_in_var(Var::X(i))
            .into_iter()
            .map(|c| DiffPoly {
                rf: RatFunc::from_poly(c).mul(&den_inv),
                base: self.base.clone(),
            })
            .collect()
    }

    /// Apply the base derivation to every coefficient (the `f^delta` part
    /// of the total derivative); jet variables are treated as constants.
    pub fn coeff_derive(&self) -> Result<DiffPoly> {
        let mut out = RatFunc::zero();
        for v in self.rf.vars() {
            if let Var::U(i) = v {
                out = out.add(&self.rf.partial(v).mul(self.base.derivation_of(i)));
            }
        }
        DiffPoly::new(out, self.base.clone())
    }

    /// The total derivative `D(f) = f^delta + sum_i (df/dx_i) x_{i+1}`.
    pub fn total_derivative(&self) -> Result<DiffPoly> {
        self.total_derivative_with_cap(DEFAULT_DERIVATIVE_CAP)
    }

    pub fn total_derivative_with_cap(&self, cap: usize) -> Result<DiffPoly> {
        if let Some(n) = self.order() {
            if n + 1 > cap {
                return Err(Error::DerivativeCapExceeded(cap));
            }
        }
        let mut out = self.coeff_derive()?.rf;
        if let Some(n) = self.order() {
            for i in 0..=n {
                let p = self.rf.partial(Var::X(i));
                if !p.is_zero() {
                    out = out.add(&p.mul(&RatFunc::var(Var::X(i + 1))));
                }
            }
        }
        DiffPoly::new(out, self.base.clone())
    }

    /// Order, leader degree, separant `s_f` and initial `i_f`.
    /// Errors for zero or x-free input.
    pub fn leader_data(&self) -> Result<LeaderData> {
        let n = self.order().ok_or(Error::OrderUndefined)?;
        let d = self.degree_in_x(n);
        debug_assert!(d >= 1);
        let separant = self.partial_x(n);
        let initial = self.coeffs_in_x(n).pop().expect("degree coefficient");
        debug_assert!(!separant.is_zero() && !initial.is_zero());
        Ok(LeaderData {
            order: n,
            leader_degree: d,
            separant,
            initial,
        })
    }

    /// Evaluate at a jet: substitute `x_i -> c_i` and evaluate in `K`.
    pub fn eval_jet(&self, c: &Jet) -> Result<FieldElem> {
        if let Some(n) = self.order() {
            if c.len() <= n {
                return Err(Error::JetTooShort {
                    needed: n + 1,
                    got: c.len(),
                });
            }
        }
        self.rf.eval(&mut |v| match v {
            Var::X(i) => Ok(c.coord(i).clone()),
            Var::U(_) => Ok(RatFunc::var(v)),
        })
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::print_diffpoly(self))
    }
}

/// Free-function form of [`DiffPoly::leader_data`].
pub fn leader_data(f: &DiffPoly) -> Result<LeaderData> {
    f.leader_data()
}

/// Free-function form of [`DiffPoly::total_derivative`].
pub fn total_derivative(f: &DiffPoly) -> Result<DiffPoly> {
    f.total_derivative()
}

/// Free-function form of [`DiffPoly::eval_jet`].
pub fn diff_eval_jet(f: &DiffPoly, c: &Jet) -> Result<FieldElem> {
    f.eval_jet(c)
}

/// A differential ring whose elements can receive differential polynomials:
/// ring arithmetic (via [`CoeffRing`]), an embedding of `K`, and a derivation.
pub trait DifferentialRing: CoeffRing {
    fn base(&self) -> &BaseFieldSpec;
    fn from_field(&self, c: &FieldElem) -> Result<Self::Elem>;
    fn derive(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

/// Evaluate `f` differentially at `a`: compute `f(a, delta a, ..., delta^n a)`
/// with the ring's derivation and arithmetic.
pub fn diff_eval_ring<R: DifferentialRing>(f: &DiffPoly, a: &R::Elem, ring: &R) -> Result<R::Elem> {
    if *f.base().as_ref() != *ring.base() {
        return Err(Error::BaseMismatch);
    }
    let n = f.order().unwrap_or(0);
    let mut jet = Vec::with_capacity(n + 1);
    jet.push(a.clone());
    for _ in 0..n {
        let last = jet.last().unwrap();
        jet.push(ring.derive(last)?);
    }
    let num = f.as_ratfunc().num().eval_in(ring, &mut |v| match v {
        Var::X(i) => Ok(jet[i].clone()),
        Var::U(_) => ring.from_field(&RatFunc::var(v)),
    })?;
    // the denominator is x-free, hence a unit of K; fold its inverse in
    let den_inv = RatFunc::new(MultiPoly::one(), f.as_ratfunc().den().clone())?;
    Ok(ring.mul(&num, &ring.from_field(&den_inv)?))
}
