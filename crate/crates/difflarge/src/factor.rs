//! Factorization over the rationals.
//!
//! Univariate: square-free split, Berlekamp factorization modulo a small
//! prime, quadratic Hensel lifting to a Mignotte-style bound, and subset
//! recombination. Multivariate: Kronecker substitution to the univariate
//! case, guarded by a degree bound; beyond the bound the result is an
//! explicit `Inconclusive` rather than a guess. Every factorization is
//! verified by exact re-multiplication before it is returned.

use crate::error::{Error, Result};
use crate::gcd::squarefree_decompose;
use crate::multipoly::{Monomial, MultiPoly, Var};
use crate::rational::Rat;
use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

/// Cap on the degree of the univariate image of a Kronecker substitution.
const KRONECKER_UNIVARIATE_CAP: u32 = 64;

// ---------------------------------------------------------------------------
// dense integer polynomials (ascending degree, trailing zeros trimmed)
// ---------------------------------------------------------------------------

type ZPoly = Vec<BigInt>;

fn ztrim(p: &mut ZPoly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn zdeg(p: &ZPoly) -> usize {
    p.len().saturating_sub(1)
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(&mut out);
    out
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    ztrim(&mut out);
    out
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    ztrim(&mut out);
    out
}

fn zmod(p: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out: ZPoly = p.iter().map(|c| c.mod_floor(m)).collect();
    ztrim(&mut out);
    out
}

/// Lift coefficients to the symmetric range (-m/2, m/2].
fn zsymmetric(p: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    let mut out: ZPoly = p
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    ztrim(&mut out);
    out
}

/// Division with remainder by a monic divisor, coefficients mod `m`.
fn zdivrem_monic_mod(a: &ZPoly, d: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    assert!(d.last().map_or(false, |c| c.is_one()), "divisor must be monic");
    let mut rem = zmod(a, m);
    let dd = zdeg(d);
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quo = vec![BigInt::zero(); rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = rem.last().unwrap().clone();
        quo[k] = c.clone();
        for (i, dc) in d.iter().enumerate() {
            rem[k + i] = (&rem[k + i] - &c * dc).mod_floor(m);
        }
        ztrim(&mut rem);
    }
    ztrim(&mut quo);
    (quo, zmod(&rem, m))
}

fn zcontent(p: &ZPoly) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
    }
    g
}

fn zprimitive(p: &ZPoly) -> ZPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut g = zcontent(p);
    if p.last().unwrap().is_negative() {
        g = -g;
    }
    p.iter().map(|c| c / &g).collect()
}

// ---------------------------------------------------------------------------
// arithmetic mod a small prime (u64 coefficients)
// ---------------------------------------------------------------------------

type PPoly = Vec<u64>;

fn ptrim(p: &mut PPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn pmul(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + (x as u128 * y as u128 % p as u128) as u64) % p;
        }
    }
    ptrim(&mut out);
    out
}

fn pinv(a: u64, p: u64) -> u64 {
    // Fermat
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn pscale(a: &PPoly, c: u64, p: u64) -> PPoly {
    let mut out: PPoly = a
        .iter()
        .map(|&x| (x as u128 * c as u128 % p as u128) as u64)
        .collect();
    ptrim(&mut out);
    out
}

fn pmonic(a: &PPoly, p: u64) -> PPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => pscale(a, pinv(lc, p), p),
    }
}

fn psub(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] = (out[i] + p - y) % p;
    }
    ptrim(&mut out);
    out
}

fn pdivrem(a: &PPoly, d: &PPoly, p: u64) -> (PPoly, PPoly) {
    let dd = d.len() - 1;
    let lcinv = pinv(*d.last().unwrap(), p);
    let mut rem = a.clone();
    ptrim(&mut rem);
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quo = vec![0u64; rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = (*rem.last().unwrap() as u128 * lcinv as u128 % p as u128) as u64;
        quo[k] = c;
        for (i, &dc) in d.iter().enumerate() {
            let sub = (c as u128 * dc as u128 % p as u128) as u64;
            rem[k + i] = (rem[k + i] + p - sub) % p;
        }
        ptrim(&mut rem);
    }
    ptrim(&mut quo);
    (quo, rem)
}

fn pgcd(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    ptrim(&mut x);
    ptrim(&mut y);
    while !y.is_empty() {
        let (_, r) = pdivrem(&x, &y, p);
        x = y;
        y = r;
    }
    pmonic(&x, p)
}

/// Extended Euclid: returns `(s, t)` with `s*a + t*b = 1 mod p`.
/// Requires `gcd(a, b) = 1`.
fn pext_euclid(a: &PPoly, b: &PPoly, p: u64) -> (PPoly, PPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (PPoly, PPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (PPoly, PPoly) = (Vec::new(), vec![1]);
    ptrim(&mut r0);
    ptrim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s = psub(&s0, &pmul(&q, &s1, p), p);
        let t = psub(&t0, &pmul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(r0.len(), 1, "operands not coprime mod p");
    let inv = pinv(r0[0], p);
    (pscale(&s0, inv, p), pscale(&t0, inv, p))
}

fn pderiv(a: &PPoly, p: u64) -> PPoly {
    let mut out: PPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| ((i as u128 % p as u128) * c as u128 % p as u128) as u64)
        .collect();
    ptrim(&mut out);
    out
}

fn ppow_mod(mut base: PPoly, mut e: u64, f: &PPoly, p: u64) -> PPoly {
    let mut acc: PPoly = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = pdivrem(&pmul(&acc, &base, p), f, p).1;
        }
        base = pdivrem(&pmul(&base, &base, p), f, p).1;
        e >>= 1;
    }
    acc
}

/// Berlekamp factorization of a monic square-free polynomial mod p.
fn berlekamp(f: &PPoly, p: u64) -> Vec<PPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    // Q matrix: rows = x^{ip} mod f
    let xp = ppow_mod(vec![0, 1], p, f, p);
    let mut rows: Vec<PPoly> = Vec::with_capacity(n);
    let mut cur: PPoly = vec![1];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = pdivrem(&pmul(&cur, &xp, p), f, p).1;
    }
    // nullspace of (Q - I)^T ... we need v with v Q = v, i.e. rows combine:
    // treat matrix M[i][j] = rows[i][j] - delta_ij, find left nullspace of M,
    // equivalently nullspace of M^T.
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = rows[i][j] % p;
            if i == j {
                v = (v + p - 1) % p;
            }
            m[j][i] = v; // transpose
        }
    }
    let basis = nullspace(&mut m, n, p);
    let r = basis.len(); // number of irreducible factors
    let mut factors: Vec<PPoly> = vec![pmonic(f, p)];
    for v in &basis {
        if factors.len() == r {
            break;
        }
        let mut vp: PPoly = v.clone();
        ptrim(&mut vp);
        if vp.len() <= 1 {
            continue; // constant vector splits nothing
        }
        let mut next: Vec<PPoly> = Vec::new();
        for g in factors.drain(..) {
            if g.len() - 1 <= 1 {
                next.push(g);
                continue;
            }
            let mut pieces: Vec<PPoly> = Vec::new();
            let mut rest = g.clone();
            for c in 0..p {
                if rest.len() - 1 == 0 {
                    break;
                }
                let mut shifted = vp.clone();
                if shifted.is_empty() {
                    shifted = vec![0];
                }
                shifted[0] = (shifted[0] + p - c) % p;
                ptrim(&mut shifted);
                let h = pgcd(&rest, &shifted, p);
                if h.len() > 1 && h.len() < rest.len() {
                    rest = pdivrem(&rest, &h, p).0;
                    pieces.push(h);
                }
            }
            if rest.len() > 1 {
                pieces.push(pmonic(&rest, p));
            }
            next.extend(pieces);
        }
        factors = next;
    }
    factors
}

/// Gaussian-elimination nullspace basis of an n x n matrix mod p.
fn nullspace(m: &mut [Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivot_col_of_row = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        let mut sel = None;
        for r in row..n {
            if m[r][col] != 0 {
                sel = Some(r);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        m.swap(row, sel);
        let inv = pinv(m[row][col], p);
        for j in 0..n {
            m[row][j] = (m[row][j] as u128 * inv as u128 % p as u128) as u64;
        }
        for r in 0..n {
            if r != row && m[r][col] != 0 {
                let c = m[r][col];
                for j in 0..n {
                    let sub = (c as u128 * m[row][j] as u128 % p as u128) as u64;
                    m[r][j] = (m[r][j] + p - sub) % p;
                }
            }
        }
        pivot_col_of_row[row] = col;
        row += 1;
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row[..row].to_vec();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - m[r][free]) % p;
        }
        basis.push(v);
    }
    basis
}

// ---------------------------------------------------------------------------
// Hensel lifting
// ---------------------------------------------------------------------------

/// Quadratic lift: given monic `f = g*h mod m` with `s*g + t*h = 1 mod m`,
/// returns `(g', h', s', t')` valid mod `m^2`.
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &ZPoly,
    t: &ZPoly,
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zmod(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = zdivrem_monic_mod(&zmul(s, &e), h, &m2);
    let gstar = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), &m2);
    let hstar = zmod(&zadd(h, &r), &m2);
    // lift the Bezout pair
    let b = zmod(
        &zsub(&zadd(&zmul(s, &gstar), &zmul(t, &hstar)), &vec![BigInt::one()]),
        &m2,
    );
    let (c, d) = zdivrem_monic_mod(&zmul(s, &b), &hstar, &m2);
    let sstar = zmod(&zsub(s, &d), &m2);
    let tstar = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &gstar)), &m2);
    (gstar, hstar, sstar, tstar)
}

/// Lift a monic factorization `f = prod factors mod p` to mod `p^k'` with
/// `p^k' >= bound`, returning the lifted monic factors and the modulus.
fn hensel_lift_tree(f: &ZPoly, factors: &[PPoly], p: u64, bound: &BigInt) -> (Vec<ZPoly>, BigInt) {
    let mut modulus = BigInt::from(p);
    while &modulus < bound {
        modulus = &modulus * &modulus;
    }
    let lifted = lift_rec(f, factors, p, &modulus);
    (lifted, modulus)
}

fn lift_rec(f: &ZPoly, factors: &[PPoly], p: u64, target: &BigInt) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![zmod(f, target)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let pb = BigInt::from(p);
    let gp = left.iter().fold(vec![1u64], |acc, x| pmul(&acc, x, p));
    let hp = right.iter().fold(vec![1u64], |acc, x| pmul(&acc, x, p));
    let (sp, tp) = pext_euclid(&gp, &hp, p);
    let to_z = |v: &PPoly| -> ZPoly { v.iter().map(|&c| BigInt::from(c)).collect() };
    let (mut g, mut h, mut s, mut t) = (to_z(&gp), to_z(&hp), to_z(&sp), to_z(&tp));
    let mut m = pb;
    while &m < target {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        m = &m * &m;
        g = g2;
        h = h2;
        s = s2;
        t = t2;
    }
    // reduce everything to the exact target modulus
    g = zmod(&g, target);
    h = zmod(&h, target);
    let mut out = lift_rec(&g, left, p, target);
    out.extend(lift_rec(&h, right, p, target));
    out
}

// ---------------------------------------------------------------------------
// Zassenhaus over Z
// ---------------------------------------------------------------------------

/// Factor a primitive square-free integer polynomial with positive leading
/// coefficient into primitive irreducible factors over Q.
fn zassenhaus_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = zdeg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.last().unwrap().clone();
    // make monic: F(y) = lc^(n-1) * f(y / lc), coefficient of y^i is c_i * lc^(n-1-i)
    let monic: ZPoly = f
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == n {
                BigInt::one()
            } else {
                c * num::pow::pow(lc.clone(), n - 1 - i)
            }
        })
        .collect();
    let factors_monic = factor_monic_squarefree(&monic);
    // map back: g(x) = primitive part of G(lc * x)
    factors_monic
        .iter()
        .map(|g| {
            let mapped: ZPoly = g
                .iter()
                .enumerate()
                .map(|(i, c)| c * num::pow::pow(lc.clone(), i))
                .collect();
            zprimitive(&mapped)
        })
        .collect()
}

fn factor_monic_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = zdeg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    // pick a prime keeping f square-free
    const PRIMES: [u64; 15] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
    let mut chosen = None;
    for &p in &PRIMES {
        let fp: PPoly = {
            let mut v: PPoly = f
                .iter()
                .map(|c| c.mod_floor(&BigInt::from(p)).try_into().unwrap_or(0u64))
                .collect();
            ptrim(&mut v);
            v
        };
        if fp.len() != n + 1 {
            continue; // lc vanished (cannot happen, f monic) or bad reduction
        }
        let d = pderiv(&fp, p);
        if d.is_empty() {
            continue;
        }
        if pgcd(&fp, &d, p).len() == 1 {
            chosen = Some((p, fp));
            break;
        }
    }
    let (p, fp) = chosen.expect("found a prime of good reduction");
    let modular = berlekamp(&pmonic(&fp, p), p);
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Mignotte-style bound on factor coefficients: 2^n * l2norm(f)
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let mut norm = norm_sq.sqrt() + 1;
    norm = norm * num::pow::pow(BigInt::from(2), n + 1);
    let bound = norm * BigInt::from(2) + 1;
    let (mut lifted, modulus) = hensel_lift_tree(f, &modular, p, &bound);

    // subset recombination
    let mut result: Vec<ZPoly> = Vec::new();
    let mut current = f.clone();
    'outer: loop {
        let r = lifted.len();
        if r == 0 {
            break;
        }
        for card in 1..=r / 2 {
            let mut idx: Vec<usize> = (0..card).collect();
            loop {
                let mut cand: ZPoly = vec![BigInt::one()];
                for &i in &idx {
                    cand = zmod(&zmul(&cand, &lifted[i]), &modulus);
                }
                let cand = zsymmetric(&cand, &modulus);
                if let Some(q) = zexact_div(&current, &cand) {
                    result.push(cand);
                    current = q;
                    let mut keep = Vec::new();
                    for (i, g) in lifted.drain(..).enumerate() {
                        if !idx.contains(&i) {
                            keep.push(g);
                        }
                    }
                    lifted = keep;
                    continue 'outer;
                }
                // next combination
                let mut i = card;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if idx[i] != i + r - card {
                        idx[i] += 1;
                        for j in i + 1..card {
                            idx[j] = idx[j - 1] + 1;
                        }
                        break;
                    }
                    if i == 0 {
                        idx.clear();
                        break;
                    }
                }
                if idx.is_empty() {
                    break;
                }
            }
        }
        // nothing splits: the rest is irreducible
        result.push(current.clone());
        break;
    }
    result
}

/// Exact division of integer polynomials; `None` if it does not divide.
fn zexact_div(a: &ZPoly, d: &ZPoly) -> Option<ZPoly> {
    if d.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < d.len() {
        return None;
    }
    let dlc = d.last().unwrap();
    let mut rem = a.clone();
    let mut quo = vec![BigInt::zero(); a.len() - d.len() + 1];
    while rem.len() >= d.len() && !rem.is_empty() {
        let k = rem.len() - d.len();
        let (q, r) = rem.last().unwrap().div_rem(dlc);
        if !r.is_zero() {
            return None;
        }
        quo[k] = q.clone();
        for (i, dc) in d.iter().enumerate() {
            let v = &rem[k + i] - &q * dc;
            rem[k + i] = v;
        }
        ztrim(&mut rem);
    }
    if rem.is_empty() {
        Some(quo)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// public entry points on MultiPoly
// ---------------------------------------------------------------------------

fn to_dense_univar(p: &MultiPoly, v: Var) -> Vec<Rat> {
    let d = p.degree_in(v) as usize;
    let mut out = vec![Rat::zero(); d + 1];
    for (m, c) in p.terms() {
        out[m.exponent(v) as usize] = c.clone();
    }
    out
}

fn from_dense_univar(coeffs: &[BigInt], v: Var) -> MultiPoly {
    MultiPoly::from_terms(coeffs.iter().enumerate().map(|(e, c)| {
        (
            Monomial::from_pairs(vec![(v, e as u32)]),
            Rat::from_bigint(c.clone()),
        )
    }))
}

/// Factor a univariate polynomial over Q.
///
/// Returns `(content, factors)`: the product of the factors times the
/// content equals the input; each factor is irreducible over Q, primitive
/// with positive leading coefficient, repeated according to multiplicity.
pub fn univar_factor_q(p: &MultiPoly) -> Result<(Rat, Vec<MultiPoly>)> {
    if p.is_zero() {
        return Err(Error::ZeroInput("univar_factor_q"));
    }
    let vars = p.vars();
    if vars.len() > 1 {
        return Err(Error::NotUnivariate(format!("{}", p)));
    }
    if vars.is_empty() {
        return Ok((p.as_constant().expect("constant"), Vec::new()));
    }
    let v = *vars.iter().next().unwrap();
    let (unit, sq_factors) = squarefree_decompose(p)?;
    let mut out = Vec::new();
    for (sf, mult) in sq_factors {
        let dense = to_dense_univar(&sf, v);
        // clear denominators; sf is primitive already so this is exact
        let zpoly: ZPoly = dense.iter().map(|r| r.numer().clone()).collect();
        debug_assert!(dense.iter().all(|r| r.is_integer()));
        let irreducibles = zassenhaus_squarefree(&zpoly);
        for g in irreducibles {
            let gm = from_dense_univar(&g, v);
            for _ in 0..mult {
                out.push(gm.clone());
            }
        }
    }
    // verify by exact re-multiplication
    let mut prod = MultiPoly::constant(unit.clone());
    for f in &out {
        prod = prod.mul(f);
    }
    if &prod != p {
        return Err(Error::Internal(
            "factorization failed re-multiplication check".into(),
        ));
    }
    Ok((unit, out))
}

/// Complete irreducible factorization over Q via Kronecker substitution,
/// guarded by `degree_bound`. Returns `(content, factors)` with repeats for
/// multiplicity, or `Inconclusive` when the guard trips. Never returns a
/// wrong factorization: the output is verified by exact multiplication.
pub fn kronecker_factor(p: &MultiPoly, degree_bound: u32) -> Result<(Rat, Vec<MultiPoly>)> {
    if p.is_zero() {
        return Err(Error::ZeroInput("kronecker_factor"));
    }
    if p.total_degree() > degree_bound {
        return Err(Error::Inconclusive(format!(
            "total degree {} exceeds the bound {}",
            p.total_degree(),
            degree_bound
        )));
    }
    let (unit, sq_factors) = squarefree_decompose(p)?;
    let mut out = Vec::new();
    for (sf, mult) in sq_factors {
        for g in factor_squarefree_multivar(&sf)? {
            for _ in 0..mult {
                out.push(g.clone());
            }
        }
    }
    let mut prod = MultiPoly::constant(unit.clone());
    for f in &out {
        prod = prod.mul(f);
    }
    if &prod != p {
        return Err(Error::Internal(
            "factorization failed re-multiplication check".into(),
        ));
    }
    Ok((unit, out))
}

fn factor_squarefree_multivar(q: &MultiPoly) -> Result<Vec<MultiPoly>> {
    let vars: Vec<Var> = q.vars().into_iter().collect();
    if vars.len() <= 1 {
        let (c, fs) = univar_factor_q(q)?;
        debug_assert!(c.is_one(), "square-free part is primitive");
        return Ok(fs);
    }
    // Kronecker substitution: v_i -> y^{D_i}, D_i = prod_{j<i} (deg_{v_j} q + 1)
    let degs: Vec<u32> = vars.iter().map(|&v| q.degree_in(v) + 1).collect();
    let mut radix: Vec<u64> = Vec::with_capacity(vars.len());
    let mut acc = 1u64;
    for &d in &degs {
        radix.push(acc);
        acc = acc.saturating_mul(d as u64);
    }
    let max_deg: u64 = vars
        .iter()
        .zip(&radix)
        .map(|(&v, &r)| q.degree_in(v) as u64 * r)
        .sum();
    if max_deg > KRONECKER_UNIVARIATE_CAP as u64 {
        return Err(Error::Inconclusive(format!(
            "Kronecker image degree {} exceeds the cap {}",
            max_deg, KRONECKER_UNIVARIATE_CAP
        )));
    }
    let mut dense = vec![Rat::zero(); max_deg as usize + 1];
    for (m, c) in q.terms() {
        let mut e = 0u64;
        for (i, &v) in vars.iter().enumerate() {
            e += m.exponent(v) as u64 * radix[i];
        }
        dense[e as usize] = c.clone();
    }
    let yvar = Var::X(usize::MAX); // scratch variable, never collides with jets
    let uni = MultiPoly::from_terms(dense.iter().enumerate().filter_map(|(e, c)| {
        if c.is_zero() {
            None
        } else {
            Some((
                Monomial::from_pairs(vec![(yvar, e as u32)]),
                c.clone(),
            ))
        }
    }));
    let (_, uni_factors) = univar_factor_q(&uni)?;

    let unmap = |f: &MultiPoly| -> MultiPoly {
        MultiPoly::from_terms(f.terms().map(|(m, c)| {
            let mut e = m.exponent(yvar) as u64;
            let mut pairs = Vec::new();
            for (i, &v) in vars.iter().enumerate().rev() {
                let digit = (e / radix[i]) as u32;
                e %= radix[i];
                if digit > 0 {
                    pairs.push((v, digit));
                }
            }
            (Monomial::from_pairs(pairs), c.clone())
        }))
    };

    // subset recombination against the multivariate polynomial
    let mut remaining: Vec<MultiPoly> = uni_factors;
    let mut current = q.clone();
    let mut out = Vec::new();
    'outer: loop {
        let r = remaining.len();
        if r <= 1 || current.is_constant() {
            break;
        }
        for card in 1..r {
            let mut idx: Vec<usize> = (0..card).collect();
            loop {
                let mut cand_uni = MultiPoly::one();
                for &i in &idx {
                    cand_uni = cand_uni.mul(&remaining[i]);
                }
                let cand = unmap(&cand_uni).primitive_part().1;
                if !cand.is_constant() {
                    if let Some(qt) = current.exact_div(&cand) {
                        if !qt.is_constant() {
                            out.push(cand);
                            current = qt.primitive_part().1;
                            let mut keep = Vec::new();
                            for (i, g) in remaining.drain(..).enumerate() {
                                if !idx.contains(&i) {
                                    keep.push(g);
                                }
                            }
                            remaining = keep;
                            continue 'outer;
                        }
                    }
                }
                if !next_combination(&mut idx, card, r) {
                    break;
                }
            }
        }
        break;
    }
    if !current.is_constant() {
        out.push(current.primitive_part().1);
    }
    Ok(out)
}

fn next_combination(idx: &mut Vec<usize>, card: usize, n: usize) -> bool {
    let mut i = card;
    while i > 0 {
        i -= 1;
        if idx[i] != i + n - card {
            idx[i] += 1;
            for j in i + 1..card {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
