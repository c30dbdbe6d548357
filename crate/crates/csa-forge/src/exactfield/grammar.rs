//! The scalar expression grammar used by file formats and the command line.
//!
//! Expressions are integers, named generators, and the operators `+ - * / ^`
//! with parentheses; `^` takes a nonnegative integer exponent and binds
//! tightest, then unary minus, then `*` and `/`, then `+` and `-`. Names
//! resolve against the target ring: `g` is the generator of a finite
//! extension field, rational-function contexts contribute their variable
//! names, and tower rings contribute their layer generators.
//!
//! Printing is canonical: for a given value the printed form is unique, and
//! parsing it back yields the same value.

use std::fmt;
use std::sync::Arc;

use crate::exactfield::poly::MultiPoly;
use crate::exactfield::ratfn::RatFn;
use crate::exactfield::scalar::{FieldDesc, Scalar};
use crate::exactfield::tower::TowerElem;
use crate::exactfield::value::{RingDesc, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum GrammarError {
    BadChar(usize, char),
    UnexpectedEnd,
    Unexpected(usize, String),
    UnknownName(usize, String),
    NonUnitDivisor(usize),
    ExponentTooLarge(usize),
    TrailingInput(usize),
}

impl fmt::Display for GrammarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarError::BadChar(at, c) => write!(f, "unexpected character {c:?} at byte {at}"),
            GrammarError::UnexpectedEnd => write!(f, "unexpected end of expression"),
            GrammarError::Unexpected(at, tok) => write!(f, "unexpected token {tok} at byte {at}"),
            GrammarError::UnknownName(at, n) => {
                write!(f, "name {n} at byte {at} is not defined in the target ring")
            }
            GrammarError::NonUnitDivisor(at) => {
                write!(f, "division at byte {at} by zero or a non-unit")
            }
            GrammarError::ExponentTooLarge(at) => write!(f, "exponent at byte {at} too large"),
            GrammarError::TrailingInput(at) => write!(f, "trailing input at byte {at}"),
        }
    }
}

impl std::error::Error for GrammarError {}

// ---- tokens ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, GrammarError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
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
            '/' => {
                out.push((i, Tok::Slash));
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
                let mut n: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|x| x.checked_add((bytes[i] - b'0') as u64))
                        .ok_or(GrammarError::ExponentTooLarge(start))?;
                    i += 1;
                }
                out.push((start, Tok::Int(n)));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => return Err(GrammarError::BadChar(i, c)),
        }
    }
    Ok(out)
}

// ---- parser ----

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ring: &'a RingDesc,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map(|(a, _)| *a).unwrap_or(usize::MAX)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Value, GrammarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value, GrammarError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    let at = self.at();
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.div(&d).ok_or(GrammarError::NonUnitDivisor(at))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value, GrammarError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, GrammarError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(&Tok::Caret) {
            let at = self.at();
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(e)) => {
                    if e > u16::MAX as u64 {
                        return Err(GrammarError::ExponentTooLarge(at));
                    }
                    acc = acc.pow(e);
                }
                Some(t) => return Err(GrammarError::Unexpected(at, format!("{t:?}"))),
                None => return Err(GrammarError::UnexpectedEnd),
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value, GrammarError> {
        let at = self.at();
        match self.next() {
            Some(Tok::Int(n)) => Ok(self.ring.from_residue(n)),
            Some(Tok::Ident(name)) => self.resolve(at, &name),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    Some(t) => Err(GrammarError::Unexpected(at, format!("{t:?}"))),
                    None => Err(GrammarError::UnexpectedEnd),
                }
            }
            Some(t) => Err(GrammarError::Unexpected(at, format!("{t:?}"))),
            None => Err(GrammarError::UnexpectedEnd),
        }
    }

    fn resolve(&self, at: usize, name: &str) -> Result<Value, GrammarError> {
        // tower layers shadow base-field names
        if let RingDesc::Tower(t) = self.ring {
            if let Some(layer) = t.layers.iter().position(|(n, _)| n == name) {
                return Ok(Value::T(TowerElem::gen(t, layer)));
            }
        }
        let fld = match self.ring {
            RingDesc::Tower(t) => t.base.clone(),
            RingDesc::Field(f) => f.clone(),
        };
        let sc = resolve_in_field(&fld, name)
            .ok_or_else(|| GrammarError::UnknownName(at, name.to_string()))?;
        Ok(match self.ring {
            RingDesc::Tower(t) => Value::T(TowerElem::from_base(t, sc)),
            RingDesc::Field(_) => Value::S(sc),
        })
    }
}

fn resolve_in_field(fld: &FieldDesc, name: &str) -> Option<Scalar> {
    match fld {
        FieldDesc::Ff(f) => {
            if name == "g" && f.k > 1 {
                Some(Scalar::Ff { fld: f.clone(), ix: f.gen() })
            } else {
                None
            }
        }
        FieldDesc::Rf(ctx) => {
            if let Some(i) = ctx.vars.iter().position(|v| v == name) {
                return Some(Scalar::Rf(Arc::new(RatFn::var(ctx, i))));
            }
            if name == "g" && ctx.base.k > 1 {
                let c = MultiPoly::constant(ctx, ctx.base.gen());
                return Some(Scalar::Rf(Arc::new(RatFn::from_poly(c))));
            }
            None
        }
    }
}

/// Parse an expression against a ring.
pub fn parse_value(src: &str, ring: &RingDesc) -> Result<Value, GrammarError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, ring };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(GrammarError::TrailingInput(p.at()));
    }
    Ok(v)
}

/// Parse an expression against a plain field.
pub fn parse_scalar(src: &str, fld: &FieldDesc) -> Result<Scalar, GrammarError> {
    match parse_value(src, &RingDesc::Field(fld.clone()))? {
        Value::S(s) => Ok(s),
        Value::T(_) => unreachable!("field ring cannot produce tower values"),
    }
}

// ---- canonical printing ----

/// Canonical form of a finite-field element: residue for prime fields,
/// polynomial in `g` for extensions; terms from high degree down.
pub fn print_ff_elem(f: &crate::exactfield::ff::FieldTable, ix: u8) -> String {
    if f.k == 1 {
        return format!("{ix}");
    }
    let cs = f.coeffs(ix);
    let mut parts = Vec::new();
    for (d, &c) in cs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match d {
            0 => None,
            1 => Some("g".to_string()),
            _ => Some(format!("g^{d}")),
        };
        parts.push(match (c, mono) {
            (_, None) => format!("{c}"),
            (1, Some(m)) => m,
            (c, Some(m)) => format!("{c}*{m}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Canonical polynomial form: stored term order (descending graded
/// lexicographic), coefficients as residues, no minus signs.
pub fn print_poly(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let ctx = &p.ctx;
    let mut parts = Vec::new();
    for (exps, c) in &p.terms {
        let mut factors = Vec::new();
        let coef = print_ff_elem(&ctx.base, *c);
        let coef_needs_parens = coef.contains('+');
        let mono_empty = exps.iter().all(|&e| e == 0);
        if *c != 1 || mono_empty {
            if coef_needs_parens && !mono_empty {
                factors.push(format!("({coef})"));
            } else {
                factors.push(coef);
            }
        }
        for (vi, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(ctx.vars[vi].clone()),
                _ => factors.push(format!("{}^{}", ctx.vars[vi], e)),
            }
        }
        parts.push(factors.join("*"));
    }
    parts.join("+")
}

/// Canonical rational function form: `num` when the denominator is one, else
/// `num/den` with parentheses exactly where reparsing needs them.
pub fn print_ratfn(r: &RatFn) -> String {
    let num = print_poly(&r.num);
    if r.den.is_one() {
        return num;
    }
    let den = print_poly(&r.den);
    let num_wrapped = if num.contains('+') { format!("({num})") } else { num };
    let den_wrapped =
        if den.contains('+') || den.contains('*') { format!("({den})") } else { den };
    format!("{num_wrapped}/{den_wrapped}")
}

pub fn print_scalar(s: &Scalar) -> String {
    match s {
        Scalar::Ff { fld, ix } => print_ff_elem(fld, *ix),
        Scalar::Rf(r) => print_ratfn(r),
    }
}

/// Canonical tower element form: monomials from the highest basis index
/// down, coefficients printed before their monomial.
pub fn print_tower_elem(e: &TowerElem) -> String {
    let mut parts = Vec::new();
    for ix in (0..e.coords.len()).rev() {
        let c = &e.coords[ix];
        if c.is_zero() {
            continue;
        }
        let mono = e.tower.monomial_name(ix);
        let coef = print_scalar(c);
        if mono == "1" {
            parts.push(coef);
        } else if c.is_one() {
            parts.push(mono);
        } else if coef.contains('+') || coef.contains('*') || coef.contains('/') {
            parts.push(format!("({coef})*{mono}"));
        } else {
            parts.push(format!("{coef}*{mono}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

pub fn print_value(v: &Value) -> String {
    match v {
        Value::S(s) => print_scalar(s),
        Value::T(t) => print_tower_elem(t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::ff::field;
    use crate::exactfield::poly::RfCtx;
    use crate::exactfield::tower::Tower;

    #[test]
    fn parse_prime_field() {
        let fd = FieldDesc::Ff(field(5, 1).unwrap());
        let s = parse_scalar("2*3+4^2-1", &fd).unwrap();
        // 6 + 16 - 1 = 21 = 1 mod 5
        assert!(s.is_one());
        let t = parse_scalar("3/4", &fd).unwrap();
        // 3 * 4^-1 = 3 * 4 = 12 = 2
        assert_eq!(t, fd.from_residue(2));
    }

    #[test]
    fn parse_extension_field() {
        let f16 = field(2, 4).unwrap();
        let fd = FieldDesc::Ff(f16.clone());
        let g = parse_scalar("g", &fd).unwrap();
        let lhs = parse_scalar("g^4", &fd).unwrap();
        assert_eq!(lhs, g.add(&fd.one()));
        assert!(parse_scalar("(g+1)*(g+1)", &fd).unwrap() == g.mul(&g).add(&fd.one()));
        assert!(parse_scalar("h", &fd).is_err());
        assert!(parse_scalar("1/0", &fd).is_err());
    }

    #[test]
    fn roundtrip_all_of_f16_and_f27() {
        for &(p, k) in &[(2u32, 4u32), (3, 3)] {
            let f = field(p, k).unwrap();
            let fd = FieldDesc::Ff(f.clone());
            for ix in f.elements() {
                let printed = print_ff_elem(&f, ix);
                let back = parse_scalar(&printed, &fd).unwrap();
                assert_eq!(back, Scalar::Ff { fld: f.clone(), ix }, "roundtrip of {printed}");
                assert_eq!(print_scalar(&back), printed);
            }
        }
    }

    #[test]
    fn roundtrip_ratfn() {
        let ctx = RfCtx::new(field(2, 1).unwrap(), vec!["t".into()]);
        let fd = FieldDesc::Rf(ctx.clone());
        for src in ["t^2+t+1", "(t+1)/t", "(t^2+1)/(t^2+t)", "1/(t^3+t+1)", "t"] {
            let v = parse_scalar(src, &fd).unwrap();
            let printed = print_scalar(&v);
            let back = parse_scalar(&printed, &fd).unwrap();
            assert_eq!(back, v, "roundtrip of {src} via {printed}");
            assert_eq!(print_scalar(&back), printed);
        }
        // normalization happens at parse time
        let v = parse_scalar("(t^2+t)/t", &fd).unwrap();
        assert_eq!(print_scalar(&v), "t+1");
    }

    #[test]
    fn roundtrip_multivariate() {
        let ctx = RfCtx::new(field(3, 1).unwrap(), vec!["x".into(), "y".into()]);
        let fd = FieldDesc::Rf(ctx.clone());
        let v = parse_scalar("(x+2*y)^2/(x*y)", &fd).unwrap();
        let printed = print_scalar(&v);
        let back = parse_scalar(&printed, &fd).unwrap();
        assert_eq!(back, v);
        assert_eq!(print_scalar(&back), printed);
    }

    #[test]
    fn tower_names_resolve_and_roundtrip() {
        let fd = FieldDesc::Ff(field(2, 2).unwrap());
        let ring = RingDesc::Tower(Tower::new(fd.clone(), vec![
            ("al".into(), fd.one()),
            ("be".into(), parse_scalar("g", &fd).unwrap()),
        ]));
        let v = parse_value("(g+1)*al*be+al+g", &ring).unwrap();
        let printed = print_value(&v);
        let back = parse_value(&printed, &ring).unwrap();
        assert_eq!(back, v, "roundtrip via {printed}");
        assert_eq!(print_value(&back), printed);
        // al^2 = al + 1
        let sq = parse_value("al^2", &ring).unwrap();
        let expect = parse_value("al+1", &ring).unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn unary_minus_and_precedence() {
        let fd = FieldDesc::Ff(field(3, 1).unwrap());
        let v = parse_scalar("-2", &fd).unwrap();
        assert!(v.is_one());
        // ^ binds tighter than unary minus: -2^2 = -(4) = -1 = 2
        let w = parse_scalar("-2^2", &fd).unwrap();
        assert_eq!(w, fd.from_residue(2));
        // * over +: 1+2*2 = 5 = 2
        let x = parse_scalar("1+2*2", &fd).unwrap();
        assert_eq!(x, fd.from_residue(2));
    }

    #[test]
    fn error_positions() {
        let fd = FieldDesc::Ff(field(2, 1).unwrap());
        match parse_scalar("1+$", &fd) {
            Err(GrammarError::BadChar(2, '$')) => {}
            other => panic!("expected BadChar, got {other:?}"),
        }
        match parse_scalar("1+", &fd) {
            Err(GrammarError::UnexpectedEnd) => {}
            other => panic!("expected UnexpectedEnd, got {other:?}"),
        }
        match parse_scalar("1 1", &fd) {
            Err(GrammarError::TrailingInput(2)) => {}
            other => panic!("expected TrailingInput, got {other:?}"),
        }
    }
}
