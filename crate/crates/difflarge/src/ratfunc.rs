//! Rational functions `num/den` over the fixed variable universe.
//!
//! Representations are canonical: the polynomial gcd (including content) of
//! numerator and denominator is removed and the denominator is primitive
//! with a positive leading coefficient under the graded-lex order. Equal
//! field elements therefore have identical representations and `==` is
//! semantic equality.

use crate::error::{Error, Result};
use crate::gcd::poly_gcd;
use crate::multipoly::{CoeffRing, MultiPoly, Var};
use crate::rational::Rat;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    /// Build `num/den`, normalizing. Errors on a zero denominator.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: MultiPoly::zero(),
                den: MultiPoly::one(),
            });
        }
        let g = poly_gcd(&num, &den);
        let mut num = num.exact_div(&g).expect("gcd divides");
        let mut den = den.exact_div(&g).expect("gcd divides");
        let (unit, pp) = den.primitive_part();
        den = pp;
        num = num.scale(&unit.recip().expect("nonzero unit"));
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc::from_poly(MultiPoly::constant(c))
    }

    pub fn zero() -> Self {
        RatFunc::constant(Rat::zero())
    }

    pub fn one() -> Self {
        RatFunc::constant(Rat::one())
    }

    pub fn var(v: Var) -> Self {
        RatFunc::from_poly(MultiPoly::var(v))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == MultiPoly::one() && self.den == MultiPoly::one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.den == MultiPoly::one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den == MultiPoly::one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
        .expect("nonzero denominators")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        // cross-cancel before multiplying to keep intermediate sizes down
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1).expect("gcd divides");
        let d2 = other.den.exact_div(&g1).expect("gcd divides");
        let n2 = other.num.exact_div(&g2).expect("gcd divides");
        let d1 = self.den.exact_div(&g2).expect("gcd divides");
        RatFunc::new(n1.mul(&n2), d1.mul(&d2)).expect("nonzero denominators")
    }

    pub fn recip(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        let mut acc = RatFunc::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative by the quotient rule.
    pub fn partial(&self, v: Var) -> RatFunc {
        RatFunc::new(
            self.num
                .partial(v)
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.partial(v))),
            self.den.mul(&self.den),
        )
        .expect("nonzero denominator")
    }

    pub fn has_var(&self, v: Var) -> bool {
        self.num.has_var(v) || self.den.has_var(v)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    /// Substitute rational functions for variables, evaluating in the field
    /// of fractions. Errors if the denominator evaluates to zero.
    pub fn eval(&self, image: &mut impl FnMut(Var) -> Result<RatFunc>) -> Result<RatFunc> {
        let ring = RatFuncRing;
        let n = self.num.eval_in(&ring, image)?;
        let d = self.den.eval_in(&ring, image)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        n.div(&d)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == MultiPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// The field of rational functions as a [`CoeffRing`].
pub struct RatFuncRing;

impl CoeffRing for RatFuncRing {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }

    fn one(&self) -> RatFunc {
        RatFunc::one()
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }

    fn from_rat(&self, r: &Rat) -> RatFunc {
        RatFunc::constant(r.clone())
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(Var::X(i))
    }

    #[test]
    fn canonical_representation() {
        // (2x0^2 - 2) / (4x0 + 4) normalizes to (1/2 x0 - 1/2) / 1... over x0+1:
        let num = x(0).pow(2).scale(&Rat::from_int(2)).sub(&MultiPoly::constant(Rat::from_int(2)));
        let den = x(0).scale(&Rat::from_int(4)).add(&MultiPoly::constant(Rat::from_int(4)));
        let r = RatFunc::new(num, den).unwrap();
        let direct = RatFunc::from_poly(x(0).sub(&MultiPoly::one()).scale(&Rat::from_frac(1, 2)));
        assert_eq!(r, direct);
    }

    #[test]
    fn same_element_two_ways() {
        // a/b built as (a*c)/(b*c) must normalize identically
        let a = x(0).add(&MultiPoly::one());
        let b = x(1).sub(&x(0));
        let c = x(0).mul(&x(1)).add(&MultiPoly::constant(Rat::from_int(7)));
        let r1 = RatFunc::new(a.clone(), b.clone()).unwrap();
        let r2 = RatFunc::new(a.mul(&c), b.mul(&c)).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn field_ops() {
        let r = RatFunc::new(MultiPoly::one(), x(0).clone()).unwrap(); // 1/x0
        let s = r.add(&r); // 2/x0
        assert_eq!(s, RatFunc::new(MultiPoly::constant(Rat::from_int(2)), x(0)).unwrap());
        assert!(r.mul(&r.recip().unwrap()).is_one());
        assert!(RatFunc::zero().recip().is_err());
    }

    #[test]
    fn quotient_rule() {
        // d/dx0 (1/x0) = -1/x0^2
        let r = RatFunc::new(MultiPoly::one(), x(0)).unwrap();
        let d = r.partial(Var::X(0));
        let expect = RatFunc::new(MultiPoly::constant(Rat::from_int(-1)), x(0).pow(2)).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn eval_substitution() {
        // (x1^2 - x0)/(x0) at x0 = 4, x1 = 2 -> 0
        let r = RatFunc::new(x(1).pow(2).sub(&x(0)), x(0)).unwrap();
        let v = r
            .eval(&mut |v| {
                Ok(match v {
                    Var::X(0) => RatFunc::constant(Rat::from_int(4)),
                    Var::X(1) => RatFunc::constant(Rat::from_int(2)),
                    _ => unreachable!(),
                })
            })
            .unwrap();
        assert!(v.is_zero());
    }
}
