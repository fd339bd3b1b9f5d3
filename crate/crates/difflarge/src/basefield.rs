//! The differential base field `K = Q(u_1..u_k)` with a declared derivation.
//!
//! The derivation is given on the generators and extends uniquely to all of
//! `K` by additivity, the Leibniz rule and the quotient rule, with
//! `delta|_Q = 0`.

use crate::error::{Error, Result};
use crate::multipoly::Var;
use crate::ratfunc::RatFunc;

/// An element of the base field: a rational function in the u-variables only.
pub type FieldElem = RatFunc;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaseFieldSpec {
    generators: Vec<String>,
    derivations: Vec<RatFunc>,
}

impl BaseFieldSpec {
    /// The rational numbers with the (only possible) trivial derivation.
    pub fn trivial() -> Self {
        BaseFieldSpec {
            generators: Vec::new(),
            derivations: Vec::new(),
        }
    }

    /// Build a base field from generator names and their declared images
    /// under the derivation. Each image may reference only u-variables of
    /// the declared universe.
    pub fn new(generators: Vec<String>, derivations: Vec<RatFunc>) -> Result<Self> {
        if generators.len() != derivations.len() {
            return Err(Error::Precondition(
                "derivation list length must equal generator count".into(),
            ));
        }
        let k = generators.len();
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || g == "x" || g == "t" {
                return Err(Error::Precondition(format!(
                    "generator name `{}` is reserved or empty",
                    g
                )));
            }
            if generators[..i].contains(g) {
                return Err(Error::Precondition(format!("duplicate generator `{}`", g)));
            }
        }
        for d in &derivations {
            for v in d.vars() {
                match v {
                    Var::U(i) if i < k => {}
                    v => {
                        return Err(Error::Precondition(format!(
                            "derivation references `{}` outside the generator universe",
                            v
                        )))
                    }
                }
            }
        }
        Ok(BaseFieldSpec {
            generators,
            derivations,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn derivation_of(&self, i: usize) -> &RatFunc {
        &self.derivations[i]
    }

    /// Whether every derivation image is zero (constants field behaviour).
    pub fn is_trivial_derivation(&self) -> bool {
        self.derivations.iter().all(RatFunc::is_zero)
    }

    /// True when `e` lies in this base field: only u-variables of the
    /// declared universe occur.
    pub fn contains(&self, e: &FieldElem) -> bool {
        e.vars().iter().all(|v| match v {
            Var::U(i) => *i < self.generators.len(),
            _ => false,
        })
    }

    /// Apply the derivation to a base field element: additive, Leibniz,
    /// zero on `Q`, with the declared images on the generators. For a
    /// rational function this is the chain rule
    /// `delta(e) = sum_i (de/du_i) * delta(u_i)`.
    pub fn derive(&self, e: &FieldElem) -> Result<FieldElem> {
        if !self.contains(e) {
            return Err(Error::BaseMismatch);
        }
        let mut out = RatFunc::zero();
        for v in e.vars() {
            let Var::U(i) = v else { unreachable!() };
            out = out.add(&e.partial(v).mul(&self.derivations[i]));
        }
        Ok(out)
    }
}

/// Free-function form of [`BaseFieldSpec::derive`].
pub fn base_derive(e: &FieldElem, spec: &BaseFieldSpec) -> Result<FieldElem> {
    spec.derive(e)
}
