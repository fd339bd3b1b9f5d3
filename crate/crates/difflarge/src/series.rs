//! Truncated Laurent/power series over the base field with the derivation
//! `delta(sum a_n t^n) = sum delta(a_n) t^n + sum n a_n t^{n-1}`, and the
//! series-side solvers: Taylor solving through the section recurrence, an
//! independent undetermined-coefficients solver, the Hensel root equation,
//! and bounded search for distinct solutions.
//!
//! Precision is tracked pessimistically: a series knows its coefficients
//! for exponents `lowest..prec` and claims nothing beyond; deriving costs
//! one order of precision.

use crate::basefield::{BaseFieldSpec, FieldElem};
use crate::diffpoly::{diff_eval_ring, DifferentialRing, DiffPoly, Jet};
use crate::error::{Error, Result};
use crate::multipoly::CoeffRing;
use crate::ratfunc::RatFunc;
use crate::rational::Rat;
use crate::reduction::{problem_validate, DLProblem};
use std::fmt;
use std::sync::Arc;

/// A series known exactly at exponents `lowest..prec` (exclusive), zero
/// below `lowest` by construction.
#[derive(Clone, Eq, Debug)]
pub struct TruncSeries {
    lowest: isize,
    coeffs: Vec<FieldElem>,
    prec: isize,
}

impl TruncSeries {
    pub fn new(lowest: isize, coeffs: Vec<FieldElem>, prec: isize) -> Result<Self> {
        if prec - lowest != coeffs.len() as isize {
            return Err(Error::Precondition(
                "coefficient count must equal prec - lowest".into(),
            ));
        }
        Ok(TruncSeries {
            lowest,
            coeffs,
            prec,
        })
    }

    /// The zero series known modulo `t^prec`.
    pub fn zero_mod(prec: isize) -> Self {
        TruncSeries {
            lowest: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn constant(c: FieldElem, prec: isize) -> Result<Self> {
        if prec < 1 {
            return Err(Error::PrecisionExceeded);
        }
        let mut coeffs = vec![RatFunc::zero(); prec as usize];
        coeffs[0] = c;
        TruncSeries::new(0, coeffs, prec)
    }

    pub fn one(prec: isize) -> Self {
        TruncSeries::constant(RatFunc::one(), prec).expect("prec >= 1")
    }

    /// `c * t^n` known modulo `t^prec`.
    pub fn monomial(c: FieldElem, n: isize, prec: isize) -> Result<Self> {
        if prec <= n {
            return Err(Error::PrecisionExceeded);
        }
        let mut coeffs = vec![RatFunc::zero(); (prec - n) as usize];
        coeffs[0] = c;
        TruncSeries::new(n, coeffs, prec)
    }

    pub fn lowest(&self) -> isize {
        self.lowest
    }

    pub fn prec(&self) -> isize {
        self.prec
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// The coefficient of `t^n`; `None` when `n` is at or beyond the
    /// precision bound.
    pub fn coefficient(&self, n: isize) -> Option<FieldElem> {
        if n >= self.prec {
            None
        } else if n < self.lowest {
            Some(RatFunc::zero())
        } else {
            Some(self.coeffs[(n - self.lowest) as usize].clone())
        }
    }

    /// All known coefficients vanish.
    pub fn is_zero_within_prec(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    /// Lower the precision bound.
    pub fn truncate(&self, prec: isize) -> Result<Self> {
        if prec > self.prec {
            return Err(Error::PrecisionExceeded);
        }
        let lowest = self.lowest.min(prec);
        TruncSeries::new(
            lowest,
            self.coeffs[..(prec - lowest) as usize].to_vec(),
            prec,
        )
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let prec = self.prec.min(other.prec);
        let lowest = self.lowest.min(other.lowest).min(prec);
        let coeffs = (lowest..prec)
            .map(|n| {
                self.coefficient(n)
                    .unwrap_or_else(RatFunc::zero)
                    .add(&other.coefficient(n).unwrap_or_else(RatFunc::zero))
            })
            .collect();
        TruncSeries {
            lowest,
            coeffs,
            prec,
        }
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(RatFunc::neg).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> TruncSeries {
        TruncSeries {
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        // the product is reliable below min(p1 + l2, p2 + l1)
        let prec = (self.prec + other.lowest).min(other.prec + self.lowest);
        let lowest = (self.lowest + other.lowest).min(prec);
        let mut coeffs = vec![RatFunc::zero(); (prec - lowest) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let n = self.lowest + i as isize + other.lowest + j as isize;
                if n >= prec {
                    break;
                }
                let idx = (n - lowest) as usize;
                coeffs[idx] = coeffs[idx].add(&a.mul(b));
            }
        }
        TruncSeries {
            lowest,
            coeffs,
            prec,
        }
    }

    pub fn pow(&self, e: u32, prec_hint: isize) -> TruncSeries {
        let mut acc = TruncSeries::one(prec_hint.max(1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl PartialEq for TruncSeries {
    /// Semantic equality: same precision bound and identical coefficients
    /// everywhere both are defined.
    fn eq(&self, other: &Self) -> bool {
        if self.prec != other.prec {
            return false;
        }
        let lowest = self.lowest.min(other.lowest);
        (lowest..self.prec).all(|n| self.coefficient(n) == other.coefficient(n))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = self.lowest + i as isize;
            parts.push(match n {
                0 => format!("({})", c),
                1 => format!("({})*t", c),
                _ => format!("({})*t^{}", c, n),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(t^{})", parts.join(" + "), self.prec)
    }
}

/// A solved problem instance: the series, the jet of its derivatives at
/// zero, and the order of vanishing certified for the residual.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    pub y: TruncSeries,
    pub jet: Jet,
    pub residual_prec: isize,
}

/// The derivation `delta(sum a_n t^n) = sum delta(a_n) t^n + sum n a_n t^{n-1}`.
pub fn series_derive(s: &TruncSeries, base: &BaseFieldSpec) -> Result<TruncSeries> {
    let prec = s.prec - 1;
    // the shift part contributes nothing at exponent -1 when lowest = 0
    let lowest = if s.lowest == 0 { 0 } else { s.lowest - 1 }.min(prec);
    let coeffs = (lowest..prec)
        .map(|n| {
            let coeffwise = match s.coefficient(n) {
                Some(a) => base.derive(&a)?,
                None => RatFunc::zero(),
            };
            let shift = match s.coefficient(n + 1) {
                Some(a) => a.scale(&Rat::from_int((n + 1) as i64)),
                None => RatFunc::zero(),
            };
            Ok(coeffwise.add(&shift))
        })
        .collect::<Result<Vec<_>>>()?;
    TruncSeries::new(lowest, coeffs, prec)
}

/// `K[[t]]` truncated at a fixed working precision, as a differential ring.
pub struct SeriesRing {
    pub base: Arc<BaseFieldSpec>,
    pub prec: isize,
}

impl CoeffRing for SeriesRing {
    type Elem = TruncSeries;

    fn zero(&self) -> TruncSeries {
        TruncSeries::zero_mod(self.prec)
    }

    fn one(&self) -> TruncSeries {
        TruncSeries::one(self.prec)
    }

    fn add(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a.add(b)
    }

    fn mul(&self, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
        a.mul(b)
    }

    fn from_rat(&self, r: &Rat) -> TruncSeries {
        TruncSeries::constant(RatFunc::constant(r.clone()), self.prec).expect("prec >= 1")
    }

    fn is_zero(&self, a: &TruncSeries) -> bool {
        a.is_zero_within_prec()
    }
}

impl DifferentialRing for SeriesRing {
    fn base(&self) -> &BaseFieldSpec {
        &self.base
    }

    fn from_field(&self, c: &FieldElem) -> Result<TruncSeries> {
        TruncSeries::constant(c.clone(), self.prec)
    }

    fn derive(&self, a: &TruncSeries) -> Result<TruncSeries> {
        series_derive(a, &self.base)
    }
}

/// Build the unique power series `y = sum_{m<prec} a_m t^m` (zero beyond
/// the jet) with `D^m y(0) = jet_m` for `m < min(jet len, prec)`: a
/// triangular solve whose pivots are `m!`.
pub fn jet_to_series(jet: &Jet, prec: isize, base: &BaseFieldSpec) -> Result<TruncSeries> {
    if prec < 1 {
        return Err(Error::PrecisionExceeded);
    }
    let pinned = (jet.len() as isize).min(prec) as usize;
    let mut a = vec![RatFunc::zero(); prec as usize];
    let mut factorial = Rat::one();
    for m in 0..pinned {
        if m > 0 {
            factorial = factorial * Rat::from_int(m as i64);
        }
        // working precision m+1 suffices to read D^m y(0)
        let w = (m + 1) as isize;
        let lowest = 0;
        let y = TruncSeries::new(lowest, a[..w as usize].to_vec(), w)?;
        let mut d = y;
        for _ in 0..m {
            d = series_derive(&d, base)?;
        }
        let got = d.coefficient(0).expect("working precision covers 0");
        // D^m y(0) = m! a_m + (terms fixed by a_0..a_{m-1})
        let delta = jet.coord(m).sub(&got);
        a[m] = delta.scale(&factorial.recip()?);
    }
    TruncSeries::new(0, a, prec)
}

fn residual_and_solution(
    p: &DLProblem,
    y: TruncSeries,
    jet: Jet,
    prec: isize,
) -> Result<SeriesSolution> {
    let n = p.f.order().ok_or(Error::OrderUndefined)? as isize;
    let ring = SeriesRing {
        base: p.f.base().clone(),
        prec,
    };
    let residual = diff_eval_ring(&p.f, &y, &ring)?;
    if !residual.is_zero_within_prec() {
        return Err(Error::Internal(
            "solver residual does not vanish within precision".into(),
        ));
    }
    let residual_prec = residual.prec().min(prec - n);
    let g_val = diff_eval_ring(&p.g, &y, &ring)?;
    if g_val.is_zero_within_prec() {
        return Err(Error::InconclusiveNonvanishing);
    }
    Ok(SeriesSolution {
        y,
        jet,
        residual_prec,
    })
}

/// Solve through the section recurrence: extend the witness jet to length
/// `prec`, then apply the twisted Taylor construction.
pub fn taylor_solve(p: &DLProblem, prec: isize) -> Result<SeriesSolution> {
    let report = problem_validate(p);
    if !report.is_valid() {
        return Err(Error::Validation(report.to_string()));
    }
    let n = p.f.order().ok_or(Error::OrderUndefined)?;
    if n < 1 {
        return Err(Error::Precondition("solver requires ord f >= 1".into()));
    }
    if prec <= n as isize {
        return Err(Error::PrecisionExceeded);
    }
    let jet = crate::dvariety::jet_extend(&p.f, &p.witness, (prec - 1) as usize)?;
    let y = jet_to_series(&jet, prec, p.f.base())?;
    residual_and_solution(p, y, jet, prec)
}

/// Independent solver: pin `a_0..a_n` from the witness by the jet relation,
/// then force each residual coefficient to zero in turn; every step is
/// linear in the next unknown.
pub fn undet_coeffs_solve(p: &DLProblem, prec: isize) -> Result<SeriesSolution> {
    let report = problem_validate(p);
    if !report.is_valid() {
        return Err(Error::Validation(report.to_string()));
    }
    let n = p.f.order().ok_or(Error::OrderUndefined)?;
    if n < 1 {
        return Err(Error::Precondition("solver requires ord f >= 1".into()));
    }
    if prec <= n as isize {
        return Err(Error::PrecisionExceeded);
    }
    let base = p.f.base().clone();
    let head = jet_to_series(&p.witness, (n + 1) as isize, &base)?;
    let mut a: Vec<FieldElem> = (0..prec)
        .map(|m| head.coefficient(m).unwrap_or_else(RatFunc::zero))
        .collect();

    // residual coefficient of t^{m-n} as a function of the candidate a_m
    let coeff_at = |a: &[FieldElem], m: usize, cand: &FieldElem| -> Result<FieldElem> {
        let w = (m + 1) as isize;
        let mut c = a[..=m].to_vec();
        c[m] = cand.clone();
        let y = TruncSeries::new(0, c, w)?;
        let ring = SeriesRing {
            base: base.clone(),
            prec: w,
        };
        let res = diff_eval_ring(&p.f, &y, &ring)?;
        res.coefficient((m - n) as isize)
            .ok_or(Error::PrecisionExceeded)
    };

    for m in (n + 1)..prec as usize {
        let r0 = coeff_at(&a, m, &RatFunc::zero())?;
        let r1 = coeff_at(&a, m, &RatFunc::one())?;
        let pivot = r1.sub(&r0);
        if pivot.is_zero() {
            return Err(Error::Internal(format!(
                "vanishing pivot at coefficient {}",
                m
            )));
        }
        a[m] = r0.neg().div(&pivot)?;
    }
    let y = TruncSeries::new(0, a, prec)?;

    // read the jet off the solved series, independent of jet_extend
    let mut jet_coords = Vec::with_capacity(prec as usize);
    let mut d = y.clone();
    for k in 0..prec {
        jet_coords.push(
            d.coefficient(0)
                .expect("precision covers the constant term"),
        );
        if k + 1 < prec {
            d = series_derive(&d, &base)?;
        }
    }
    let jet = Jet::new(jet_coords)?;
    residual_and_solution(p, y, jet, prec)
}

/// Solve `1 + f + sum_i mu_i f^i = 0` by the t-adic fixed point
/// `f <- -1 - sum_i mu_i f^i`. `mus[k]` is the coefficient of `f^{k+2}`;
/// each must lie in the maximal ideal `t K[[t]]`.
pub fn hensel_root(mus: &[TruncSeries], prec: isize) -> Result<TruncSeries> {
    if prec < 1 {
        return Err(Error::PrecisionExceeded);
    }
    let mus: Vec<TruncSeries> = mus
        .iter()
        .map(|m| {
            if m.prec() < prec {
                return Err(Error::PrecisionExceeded);
            }
            let m = m.truncate(prec)?;
            match m.coefficient(0) {
                Some(c) if c.is_zero() => {}
                _ => {
                    return Err(Error::Precondition(
                        "every mu must have zero constant term".into(),
                    ))
                }
            }
            for k in m.lowest()..0 {
                if !m.coefficient(k).is_some_and(|c| c.is_zero()) {
                    return Err(Error::Precondition(
                        "every mu must be a power series".into(),
                    ));
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let neg_one = TruncSeries::one(prec).neg();
    let mut f = neg_one.clone();
    // each pass gains at least one exact t-adic digit
    for _ in 0..prec {
        let mut next = neg_one.clone();
        for (k, mu) in mus.iter().enumerate() {
            let e = (k + 2) as u32;
            next = next.sub(&mu.mul(&f.pow(e, prec)).truncate(prec)?);
        }
        let next = next.truncate(prec)?;
        if next == f {
            break;
        }
        f = next;
    }
    Ok(f)
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(Rat::from_big(ns, ds))
    } else {
        None
    }
}

/// Deterministic search grid: nonnegative integers ascending, then negative
/// integers, then half-integers with odd numerator up to the bound.
fn grid_values(bound: i64) -> Vec<Rat> {
    let mut v = Vec::new();
    if bound < 1 {
        return v;
    }
    for k in 0..=bound {
        v.push(Rat::from_int(k));
    }
    for k in 1..=bound {
        v.push(Rat::from_int(-k));
    }
    let mut num = 1;
    while num <= bound {
        v.push(Rat::from_frac(num, 2));
        v.push(Rat::from_frac(-num, 2));
        num += 2;
    }
    v
}

/// Roots of the specialization of `f` to the coordinate `solve_idx`, with
/// the other coordinates fixed; only degrees 1 and 2 are attempted, and
/// quadratics only over rational discriminants.
fn solve_coordinate(f: &DiffPoly, solve_idx: usize, fixed: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let n = f.order().ok_or(Error::OrderUndefined)?;
    let mut coeffs: Vec<FieldElem> = Vec::new();
    for c in f.coeffs_in_x(solve_idx) {
        let val = c.as_ratfunc().eval(&mut |v| match v {
            crate::multipoly::Var::X(i) => {
                debug_assert!(i <= n && i != solve_idx);
                let skip = if i > solve_idx { i - 1 } else { i };
                Ok(fixed[skip].clone())
            }
            u => Ok(RatFunc::var(u)),
        })?;
        coeffs.push(val);
    }
    while coeffs.last().is_some_and(RatFunc::is_zero) {
        coeffs.pop();
    }
    match coeffs.len() {
        2 => {
            // linear: a1 x + a0 = 0
            Ok(vec![coeffs[0].neg().div(&coeffs[1])?])
        }
        3 => {
            let (a, b, c) = (&coeffs[2], &coeffs[1], &coeffs[0]);
            let disc = b.mul(b).sub(&a.mul(c).scale(&Rat::from_int(4)));
            let Some(d) = disc.as_constant() else {
                return Ok(Vec::new());
            };
            let Some(sq) = rat_sqrt(&d) else {
                return Ok(Vec::new());
            };
            let two_a = a.scale(&Rat::from_int(2));
            let sq = RatFunc::constant(sq);
            let r1 = b.neg().add(&sq).div(&two_a)?;
            let r2 = b.neg().sub(&sq).div(&two_a)?;
            if r1 == r2 {
                Ok(vec![r1])
            } else {
                Ok(vec![r1, r2])
            }
        }
        _ => Ok(Vec::new()),
    }
}

/// Enumerate admissible witness jets and solve at each, collecting up to
/// `count` pairwise-distinct series solutions.
pub fn distinct_solutions(
    p: &DLProblem,
    count: usize,
    prec: isize,
    search_bound: i64,
) -> Result<Vec<SeriesSolution>> {
    let n = p.f.order().ok_or(Error::OrderUndefined)?;
    let values = grid_values(search_bound.max(0));
    // coordinate of lowest degree in {1, 2}, lowest index breaking ties
    let solve_idx = (0..=n)
        .filter(|i| (1..=2).contains(&p.f.degree_in_x(*i)))
        .min_by_key(|i| (p.f.degree_in_x(*i), *i));

    let mut found: Vec<SeriesSolution> = Vec::new();
    // indices into the grid for the free coordinates
    let free = match solve_idx {
        Some(_) => n,
        None => n + 1,
    };
    let mut idx = vec![0usize; free];
    let mut exhausted = free > 0 && values.is_empty();
    while found.len() < count && !exhausted {
        let fixed: Vec<FieldElem> = idx
            .iter()
            .map(|&i| RatFunc::constant(values[i].clone()))
            .collect();
        let witnesses: Vec<Jet> = match solve_idx {
            Some(s) => solve_coordinate(&p.f, s, &fixed)?
                .into_iter()
                .map(|root| {
                    let mut coords = fixed.clone();
                    coords.insert(s, root);
                    Jet::new(coords)
                })
                .collect::<Result<Vec<_>>>()?,
            None => vec![Jet::new(fixed)?],
        };
        for w in witnesses {
            let cand = DLProblem {
                witness: w,
                ..p.clone()
            };
            if !problem_validate(&cand).is_valid() {
                continue;
            }
            let sol = match taylor_solve(&cand, prec) {
                Ok(s) => s,
                Err(Error::InconclusiveNonvanishing) => continue,
                Err(e) => return Err(e),
            };
            if found.iter().all(|s| s.y != sol.y) {
                found.push(sol);
                if found.len() == count {
                    break;
                }
            }
        }
        // advance the mixed-radix counter over the grid
        if free == 0 {
            exhausted = true;
        } else {
            let mut pos = 0;
            loop {
                idx[pos] += 1;
                if idx[pos] < values.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
                if pos == free {
                    exhausted = true;
                    break;
                }
            }
        }
    }
    if found.len() < count {
        return Err(Error::FewerFound {
            requested: count,
            found: found.len(),
        });
    }
    Ok(found)
}
