//! Polynomial gcd and square-free decomposition.
//!
//! The gcd is a primitive pseudo-remainder sequence recursing on the most
//! significant variable; results are normalized primitive with positive
//! leading coefficient under the graded-lex order.

use crate::error::{Error, Result};
use crate::multipoly::{MultiPoly, Var};
use crate::rational::Rat;

/// Greatest common divisor, normalized primitive with a positive leading
/// coefficient. `gcd(a, 0)` is the normalized `a`; `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let g = gcd_rec(a, b);
    if g.is_zero() {
        return g;
    }
    g.primitive_part().1
}

fn gcd_rec(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    let v = *a
        .vars()
        .union(&b.vars())
        .max()
        .expect("nonconstant operands have variables");
    if !a.has_var(v) {
        // v occurs only in b: gcd divides every v-coefficient of b
        return gcd_rec(a, &content_in(b, v));
    }
    if !b.has_var(v) {
        return gcd_rec(&content_in(a, v), b);
    }
    let cont_a = content_in(a, v);
    let cont_b = content_in(b, v);
    let mut p = a.exact_div(&cont_a).expect("content divides");
    let mut q = b.exact_div(&cont_b).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    // primitive PRS
    while !q.is_zero() {
        let (_, r, _) = p.pseudo_div_rem(&q, v).expect("nonzero divisor");
        p = q;
        q = if r.is_zero() {
            MultiPoly::zero()
        } else {
            let c = content_in(&r, v);
            r.exact_div(&c).expect("content divides")
        };
    }
    gcd_rec(&cont_a, &cont_b).mul(&p)
}

/// Content of `p` with respect to `v`: the gcd of its `v`-coefficients.
fn content_in(p: &MultiPoly, v: Var) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in p.coeffs_in_var(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd_rec(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    if g.is_zero() {
        MultiPoly::zero()
    } else {
        g.primitive_part().1
    }
}

/// Gcd of `p` with all of its partial derivatives. In characteristic zero
/// this is exactly the product of the irreducible factors of `p` with
/// multiplicity one less than in `p`.
fn gcd_with_partials(p: &MultiPoly) -> MultiPoly {
    let mut g = p.clone();
    for v in p.vars() {
        g = poly_gcd(&g, &p.partial(v));
        if g.is_constant() {
            break;
        }
    }
    g
}

/// Square-free decomposition: returns `(content, factors)` with
/// `p = content * prod factor^mult`, the factors primitive, square-free,
/// pairwise coprime, ordered by ascending multiplicity.
pub fn squarefree_decompose(p: &MultiPoly) -> Result<(Rat, Vec<(MultiPoly, u32)>)> {
    if p.is_zero() {
        return Err(Error::ZeroInput("squarefree_decompose"));
    }
    let (unit, pp) = p.primitive_part();
    // layer_j = product of distinct factors occurring with multiplicity >= j
    let mut layers: Vec<MultiPoly> = Vec::new();
    let mut cur = pp;
    while !cur.is_constant() {
        let g = gcd_with_partials(&cur);
        layers.push(cur.exact_div(&g).expect("squarefree part divides"));
        cur = g;
    }
    let mut out = Vec::new();
    for j in 0..layers.len() {
        let f = if j + 1 < layers.len() {
            layers[j]
                .exact_div(&layers[j + 1])
                .expect("successive layers divide")
        } else {
            layers[j].clone()
        };
        if !f.is_constant() {
            out.push((f, (j + 1) as u32));
        }
    }
    Ok((unit, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(Var::X(i))
    }

    #[test]
    fn gcd_with_zero_is_normalized_input() {
        let p = x(0).scale(&Rat::from_int(-2)).add(&MultiPoly::constant(Rat::from_int(2)));
        let g = poly_gcd(&p, &MultiPoly::zero());
        // -2 x0 + 2 normalizes to x0 - 1
        assert_eq!(g, x(0).sub(&MultiPoly::one()));
        assert!(poly_gcd(&MultiPoly::zero(), &MultiPoly::zero()).is_zero());
    }

    #[test]
    fn gcd_univariate_euclid() {
        // gcd(x0^2 - 1, x0^2 - 2 x0 + 1) = x0 - 1 (Euclid by hand)
        let a = x(0).pow(2).sub(&MultiPoly::one());
        let b = x(0)
            .pow(2)
            .sub(&x(0).scale(&Rat::from_int(2)))
            .add(&MultiPoly::one());
        assert_eq!(poly_gcd(&a, &b), x(0).sub(&MultiPoly::one()));
    }

    #[test]
    fn gcd_coprime_cross_variable() {
        // res_{x0}(x0 - 1, x1 - 1) = x1 - 1 != 0, so the gcd is 1
        let a = x(0).sub(&MultiPoly::one());
        let b = x(1).sub(&MultiPoly::one());
        assert_eq!(poly_gcd(&a, &b), MultiPoly::one());
    }

    #[test]
    fn gcd_divides_both() {
        let g = x(0).mul(&x(1)).add(&MultiPoly::one());
        let a = g.mul(&x(0).add(&MultiPoly::one()));
        let b = g.mul(&x(1).pow(2).sub(&x(0)));
        let d = poly_gcd(&a, &b);
        assert!(a.exact_div(&d).is_some());
        assert!(b.exact_div(&d).is_some());
        assert_eq!(d, g);
    }

    #[test]
    fn squarefree_example() {
        // (x0-1)^2 (x0+2) -> [(x0+2, 1), (x0-1, 2)]
        let p = x(0)
            .sub(&MultiPoly::one())
            .pow(2)
            .mul(&x(0).add(&MultiPoly::constant(Rat::from_int(2))));
        let (unit, factors) = squarefree_decompose(&p).unwrap();
        assert_eq!(unit, Rat::one());
        assert_eq!(
            factors,
            vec![
                (x(0).add(&MultiPoly::constant(Rat::from_int(2))), 1),
                (x(0).sub(&MultiPoly::one()), 2),
            ]
        );
        // product re-multiplies to the input
        let mut prod = MultiPoly::constant(unit);
        for (f, m) in &factors {
            prod = prod.mul(&f.pow(*m));
        }
        assert_eq!(prod, p);
    }

    #[test]
    fn squarefree_trivial_cases() {
        let p = x(1).pow(2).sub(&x(0));
        let (unit, factors) = squarefree_decompose(&p).unwrap();
        assert_eq!(unit, Rat::one());
        assert_eq!(factors, vec![(p.clone(), 1)]);

        let (unit, factors) = squarefree_decompose(&MultiPoly::constant(Rat::from_int(5))).unwrap();
        assert_eq!(unit, Rat::from_int(5));
        assert!(factors.is_empty());

        assert!(squarefree_decompose(&MultiPoly::zero()).is_err());
    }
}
