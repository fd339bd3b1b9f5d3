//! Surface syntax for differential polynomials and the canonical printer.
//!
//! Grammar: `x` is the differential variable, `x'`, `x''`, `x^(k)` its
//! derivatives; base generators appear by their declared names; rational
//! literals are `p` or `p/q`; operators `+ - * ^` with the usual precedence
//! and parentheses. The printer emits terms descending by (order, leader
//! degree, graded-lex), so printed output is byte-deterministic and
//! reparses to the same polynomial.

use crate::basefield::BaseFieldSpec;
use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::multipoly::{Monomial, MultiPoly, Var};
use crate::ratfunc::RatFunc;
use crate::rational::Rat;
use crate::series::TruncSeries;
use std::sync::Arc;

/// Expression tree produced by the parser.
#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Rational(Rat),
    Generator(String),
    /// `x^(k)`: the k-th derivative of the differential variable.
    Derivative(usize),
    Sum(Box<Ast>, Box<Ast>),
    Diff(Box<Ast>, Box<Ast>),
    Prod(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    /// bare integer usable as an exponent
    Int(u32),
    Ident(String),
    /// `x` with a count of trailing primes
    XDeriv(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: &str = &text[start..i];
                // a slash directly followed by digits continues the literal
                if i < bytes.len() && bytes[i] == b'/' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let r: Rat = format!("{}/{}", numer, &text[dstart..i])
                        .parse()
                        .map_err(|_| err(start, "malformed rational literal"))?;
                    out.push((start, Tok::Num(r)));
                } else {
                    match numer.parse::<u32>() {
                        Ok(v) => out.push((start, Tok::Int(v))),
                        Err(_) => out.push((
                            start,
                            Tok::Num(numer.parse().map_err(|_| err(start, "malformed integer"))?),
                        )),
                    }
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let name = &text[start..i];
                if name == "x" {
                    let mut primes = 0;
                    while i < bytes.len() && bytes[i] == b'\'' {
                        primes += 1;
                        i += 1;
                    }
                    out.push((start, Tok::XDeriv(primes)));
                } else {
                    out.push((start, Tok::Ident(name.to_string())));
                }
            }
            _ => return Err(err(i, format!("unexpected character `{}`", c))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(self.here(), format!("expected {}", what)))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Ast::Sum(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Ast::Diff(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            lhs = Ast::Prod(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Ast> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(Ast::Prod(
                Box::new(Ast::Rational(Rat::from_int(-1))),
                Box::new(inner),
            ));
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<u32> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(v)) => Ok(v),
            Some(Tok::Num(_)) => Err(err(pos, "exponent must be a nonnegative integer")),
            Some(Tok::Minus) => Err(err(pos, "negative exponent")),
            _ => Err(err(pos, "expected integer exponent")),
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let bare_x = matches!(self.peek(), Some(Tok::XDeriv(0)));
        let mut base = self.atom()?;
        // `x^(k)` reads as a derivative index, only after a bare `x`
        if bare_x
            && self.peek() == Some(&Tok::Caret)
            && self.toks.get(self.pos + 1).map(|(_, t)| t) == Some(&Tok::LParen)
        {
            self.pos += 2;
            let pos = self.here();
            let k = match self.bump() {
                Some(Tok::Int(v)) => v as usize,
                _ => return Err(err(pos, "expected derivative index")),
            };
            self.expect(&Tok::RParen, "`)` after derivative index")?;
            base = Ast::Derivative(k);
        }
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.exponent()?;
            base = Ast::Pow(Box::new(base), e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Num(r)) => Ok(Ast::Rational(r)),
            Some(Tok::Int(v)) => Ok(Ast::Rational(Rat::from_int(v as i64))),
            Some(Tok::XDeriv(k)) => Ok(Ast::Derivative(k)),
            Some(Tok::Ident(name)) => Ok(Ast::Generator(name)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "closing `)`")?;
                Ok(inner)
            }
            _ => Err(err(pos, "expected a value")),
        }
    }
}

/// Parse an expression into an [`Ast`].
pub fn parse_expr(text: &str) -> Result<Ast> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.here(), "trailing input"));
    }
    Ok(ast)
}

/// Interpret an [`Ast`] as a differential polynomial over the base field.
pub fn ast_to_diffpoly(ast: &Ast, base: &Arc<BaseFieldSpec>) -> Result<DiffPoly> {
    match ast {
        Ast::Rational(r) => {
            DiffPoly::constant(RatFunc::constant(r.clone()), base.clone())
        }
        Ast::Generator(name) => match base.generator_index(name) {
            Some(i) => DiffPoly::constant(RatFunc::var(Var::U(i)), base.clone()),
            None => Err(Error::UnknownIdent(name.clone())),
        },
        Ast::Derivative(k) => Ok(DiffPoly::xvar(*k, base.clone())),
        Ast::Sum(a, b) => ast_to_diffpoly(a, base)?.add(&ast_to_diffpoly(b, base)?),
        Ast::Diff(a, b) => ast_to_diffpoly(a, base)?.sub(&ast_to_diffpoly(b, base)?),
        Ast::Prod(a, b) => ast_to_diffpoly(a, base)?.mul(&ast_to_diffpoly(b, base)?),
        Ast::Pow(a, e) => Ok(ast_to_diffpoly(a, base)?.pow(*e)),
    }
}

/// Parse a differential polynomial expression.
pub fn parse_diffpoly(text: &str, base: &Arc<BaseFieldSpec>) -> Result<DiffPoly> {
    ast_to_diffpoly(&parse_expr(text)?, base)
}

/// Interpret an [`Ast`] as a truncated series in `t` over the base field;
/// `t` names the series variable, `x` is rejected.
pub fn ast_to_series(ast: &Ast, base: &Arc<BaseFieldSpec>, prec: isize) -> Result<TruncSeries> {
    match ast {
        Ast::Rational(r) => TruncSeries::constant(RatFunc::constant(r.clone()), prec),
        Ast::Generator(name) if name == "t" => {
            TruncSeries::monomial(RatFunc::one(), 1, prec)
        }
        Ast::Generator(name) => match base.generator_index(name) {
            Some(i) => TruncSeries::constant(RatFunc::var(Var::U(i)), prec),
            None => Err(Error::UnknownIdent(name.clone())),
        },
        Ast::Derivative(_) => Err(Error::Precondition(
            "the differential variable cannot appear in a series expression".into(),
        )),
        Ast::Sum(a, b) => Ok(ast_to_series(a, base, prec)?.add(&ast_to_series(b, base, prec)?)),
        Ast::Diff(a, b) => Ok(ast_to_series(a, base, prec)?.sub(&ast_to_series(b, base, prec)?)),
        Ast::Prod(a, b) => Ok(ast_to_series(a, base, prec)?
            .mul(&ast_to_series(b, base, prec)?)
            .truncate(prec)?),
        Ast::Pow(a, e) => Ok(ast_to_series(a, base, prec)?.pow(*e, prec).truncate(prec)?),
    }
}

/// Parse a series expression in `t` (used for Hensel coefficients).
pub fn parse_series(text: &str, base: &Arc<BaseFieldSpec>, prec: isize) -> Result<TruncSeries> {
    ast_to_series(&parse_expr(text)?, base, prec)
}

fn x_name(k: usize) -> String {
    match k {
        0 => "x".into(),
        1 => "x'".into(),
        2 => "x''".into(),
        _ => format!("x^({})", k),
    }
}

fn var_string(v: Var, e: u32, base: &BaseFieldSpec) -> String {
    let name = match v {
        Var::U(i) => base
            .generator_names()
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("u{}", i)),
        Var::X(k) => x_name(k),
    };
    if e == 1 {
        name
    } else {
        format!("{}^{}", name, e)
    }
}

/// sort key: descending (order, leader degree, graded-lex)
fn term_key(m: &Monomial) -> (i64, u32, Monomial) {
    let order = m
        .pairs()
        .iter()
        .filter_map(|(v, _)| match v {
            Var::X(i) => Some(*i as i64),
            _ => None,
        })
        .max()
        .unwrap_or(-1);
    let leader_deg = if order >= 0 {
        m.exponent(Var::X(order as usize))
    } else {
        0
    };
    (order, leader_deg, m.clone())
}

fn print_poly(p: &MultiPoly, base: &BaseFieldSpec) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(Monomial, Rat)> = p
        .terms()
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect();
    terms.sort_by(|a, b| term_key(&b.0).cmp(&term_key(&a.0)));
    let mut out = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let vars: Vec<String> = m
            .pairs()
            .iter()
            .map(|(v, e)| var_string(*v, *e, base))
            .collect();
        if vars.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&vars.join("*"));
        } else {
            out.push_str(&format!("{}*{}", mag, vars.join("*")));
        }
    }
    out
}

/// Canonical printed form of a base field element.
pub fn print_field_elem(e: &RatFunc, base: &BaseFieldSpec) -> String {
    if e.den() == &MultiPoly::one() {
        print_poly(e.num(), base)
    } else {
        format!("({})/({})", print_poly(e.num(), base), print_poly(e.den(), base))
    }
}

/// Canonical printed form; reparsing yields an identical polynomial
/// whenever the denominator is trivial.
pub fn print_diffpoly(f: &DiffPoly) -> String {
    let rf = f.as_ratfunc();
    let base = f.base();
    if rf.den() == &MultiPoly::one() {
        print_poly(rf.num(), base)
    } else {
        format!(
            "({})/({})",
            print_poly(rf.num(), base),
            print_poly(rf.den(), base)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn base_q() -> Arc<BaseFieldSpec> {
        Arc::new(BaseFieldSpec::trivial())
    }

    fn base_u() -> Arc<BaseFieldSpec> {
        Arc::new(BaseFieldSpec::new(vec!["u".into()], vec![RatFunc::one()]).unwrap())
    }

    fn x(i: usize, b: &Arc<BaseFieldSpec>) -> DiffPoly {
        DiffPoly::xvar(i, b.clone())
    }

    #[test]
    fn grammar_examples() {
        let b = base_q();
        let p = parse_diffpoly("x'' - x*x'", &b).unwrap();
        let expect = x(2, &b).sub(&x(0, &b).mul(&x(1, &b)).unwrap()).unwrap();
        assert_eq!(p, expect);

        let p = parse_diffpoly("x'^2 - x", &b).unwrap();
        let expect = x(1, &b).pow(2).sub(&x(0, &b)).unwrap();
        assert_eq!(p, expect);

        let p = parse_diffpoly("x^(3) + 1/2", &b).unwrap();
        let expect = x(3, &b)
            .add(&DiffPoly::constant(RatFunc::constant(Rat::from_frac(1, 2)), b.clone()).unwrap())
            .unwrap();
        assert_eq!(p, expect);

        // derivative then power
        let p = parse_diffpoly("x^(4)^2", &b).unwrap();
        assert_eq!(p, x(4, &b).pow(2));

        // plain power of x
        let p = parse_diffpoly("x^2", &b).unwrap();
        assert_eq!(p, x(0, &b).pow(2));

        let bu = base_u();
        let p = parse_diffpoly("u^2*x' - 3*u", &bu).unwrap();
        let u = DiffPoly::constant(RatFunc::var(Var::U(0)), bu.clone()).unwrap();
        let expect = u
            .pow(2)
            .mul(&x(1, &bu))
            .unwrap()
            .sub(&u.scale_field(&RatFunc::constant(Rat::from_int(3))).unwrap())
            .unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn errors_carry_positions() {
        let b = base_q();
        match parse_diffpoly("x^('", &b) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected parse error, got {:?}", other),
        }
        assert!(matches!(
            parse_diffpoly("x + y", &b),
            Err(Error::UnknownIdent(n)) if n == "y"
        ));
        assert!(matches!(
            parse_diffpoly("x^-2", &b),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_diffpoly("x^(1/2)", &b),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_diffpoly("", &b), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_diffpoly("x + + x", &b),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn print_examples() {
        let b = base_q();
        let f = x(1, &b).pow(2).sub(&x(0, &b)).unwrap();
        assert_eq!(print_diffpoly(&f), "x'^2 - x");
        let f = x(2, &b).sub(&x(0, &b).mul(&x(1, &b)).unwrap()).unwrap();
        assert_eq!(print_diffpoly(&f), "x'' - x*x'");
        assert_eq!(print_diffpoly(&DiffPoly::zero(b.clone())), "0");
        let f = x(3, &b)
            .scale_field(&RatFunc::constant(Rat::from_frac(-1, 2)))
            .unwrap();
        assert_eq!(print_diffpoly(&f), "-1/2*x^(3)");
    }

    #[test]
    fn round_trip_random() {
        let bu = base_u();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let mut f = DiffPoly::zero(bu.clone());
            for _ in 0..rng.gen_range(1..5) {
                let mut term = DiffPoly::constant(
                    RatFunc::constant(Rat::from_frac(
                        rng.gen_range(-6..=6),
                        rng.gen_range(1..=4),
                    )),
                    bu.clone(),
                )
                .unwrap();
                for _ in 0..rng.gen_range(0..3) {
                    let v = if rng.gen_bool(0.7) {
                        x(rng.gen_range(0..4), &bu)
                    } else {
                        DiffPoly::constant(RatFunc::var(Var::U(0)), bu.clone()).unwrap()
                    };
                    term = term.mul(&v.pow(rng.gen_range(1..3))).unwrap();
                }
                f = f.add(&term).unwrap();
            }
            let printed = print_diffpoly(&f);
            let reparsed = parse_diffpoly(&printed, &bu).unwrap();
            assert_eq!(reparsed, f, "printed form: {}", printed);
            // printing is a fixed point
            assert_eq!(print_diffpoly(&reparsed), printed);
        }
    }
}
