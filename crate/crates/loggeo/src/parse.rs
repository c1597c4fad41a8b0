//! Text grammar for polynomials and degree-one form expressions.
//!
//! Polynomials (EBNF, whitespace-insensitive):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = factor { "*" factor } ;
//! factor  = base [ "^" nat ] ;
//! base    = number | ident | "(" expr ")" | "-" factor ;
//! number  = nat [ "/" nat ] ;
//! nat     = digit { digit } ;
//! ident   = letter { letter | digit | "_" } ;
//! ```
//!
//! Form expressions extend `base` with the labels `d(<ident>)` and
//! `dlog(<ident>)`; a form expression must be homogeneous of degree one in
//! the labels.

use crate::error::ParseError;
use crate::field::Coef;
use crate::poly::{ring_constant, ring_one, ring_var, ring_zero, PolyRing, Polynomial};
use num::BigInt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(s: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut n = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                n.push(bump(&mut chars));
            }
            Tok::Num(n)
        } else if c.is_alphabetic() || c == '_' {
            // '@' continues an identifier: it appears in generated slot
            // variable names, never in chart-declared ones
            let mut id = String::new();
            while chars
                .peek()
                .is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == '@')
            {
                id.push(bump(&mut chars));
            }
            Tok::Ident(id)
        } else {
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => {
                    return Err(ParseError {
                        line: tline,
                        col: tcol,
                        msg: format!("unexpected character '{other}'"),
                    })
                }
            };
            bump(&mut chars);
            t
        };
        out.push(Spanned {
            tok,
            line: tline,
            col: tcol,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// A degree-one form label appearing in form expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FormLabel {
    /// `d(<B-variable>)`
    D(String),
    /// `dlog(<monoid generator name>)`
    Dlog(String),
}

impl std::fmt::Display for FormLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormLabel::D(v) => write!(f, "d({v})"),
            FormLabel::Dlog(g) => write!(f, "dlog({g})"),
        }
    }
}

/// Parsed form expression: a polynomial part (must be zero for a valid
/// 1-form) plus coefficients per label.
#[derive(Debug, Clone)]
pub struct FormExpr {
    pub scalar: Polynomial,
    pub terms: Vec<(FormLabel, Polynomial)>,
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    ring: &'a Arc<PolyRing>,
    forms: bool,
}

/// Value manipulated by the parser: polynomial plus an optional single
/// form label factor (forms are a rank-one module, no products of labels).
#[derive(Debug, Clone)]
struct Val {
    poly: Polynomial,
    form: Vec<(FormLabel, Polynomial)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, sp: &Spanned, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: sp.line,
            col: sp.col,
            msg: msg.into(),
        })
    }

    fn scalar(&self, p: Polynomial) -> Val {
        Val {
            poly: p,
            form: Vec::new(),
        }
    }

    fn add(&self, a: Val, b: Val) -> Val {
        let mut form = a.form;
        'outer: for (l, c) in b.form {
            for (l2, c2) in form.iter_mut() {
                if *l2 == l {
                    *c2 = c2.add(&c);
                    continue 'outer;
                }
            }
            form.push((l, c));
        }
        Val {
            poly: a.poly.add(&b.poly),
            form,
        }
    }

    fn neg(&self, a: Val) -> Val {
        Val {
            poly: a.poly.neg(),
            form: a.form.into_iter().map(|(l, c)| (l, c.neg())).collect(),
        }
    }

    fn mul(&self, sp: &Spanned, a: Val, b: Val) -> Result<Val, ParseError> {
        if !a.form.is_empty() && !b.form.is_empty() {
            return self.err(sp, "products of form labels are not allowed");
        }
        let (scalar, formed) = if a.form.is_empty() { (a, b) } else { (b, a) };
        Ok(Val {
            poly: scalar.poly.mul(&formed.poly),
            form: formed
                .form
                .into_iter()
                .map(|(l, c)| (l, c.mul(&scalar.poly)))
                .collect(),
        })
    }

    fn parse_expr(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    let t = self.parse_term()?;
                    acc = self.add(acc, t);
                }
                Tok::Minus => {
                    self.next();
                    let t = self.parse_term()?;
                    let nt = self.neg(t);
                    acc = self.add(acc, nt);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.parse_factor()?;
        while self.peek().tok == Tok::Star {
            let sp = self.next();
            let f = self.parse_factor()?;
            acc = self.mul(&sp, acc, f)?;
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Val, ParseError> {
        let base = self.parse_base()?;
        if self.peek().tok == Tok::Caret {
            let sp = self.next();
            let exp = match self.next() {
                Spanned {
                    tok: Tok::Num(n), ..
                } => n
                    .parse::<u32>()
                    .map_err(|_| ParseError {
                        line: sp.line,
                        col: sp.col,
                        msg: format!("exponent {n} out of range"),
                    })?,
                other => return self.err(&other, "expected integer exponent after '^'"),
            };
            if !base.form.is_empty() {
                return self.err(&sp, "form labels cannot be raised to powers");
            }
            return Ok(self.scalar(base.poly.pow(exp)));
        }
        Ok(base)
    }

    fn parse_number(&mut self, first: String, sp: &Spanned) -> Result<Polynomial, ParseError> {
        let numer: BigInt = first.parse().unwrap();
        let field = self.ring.field;
        let coef = if self.peek().tok == Tok::Slash {
            // rational literal: only allowed directly between two integers
            self.next();
            let den_tok = self.next();
            let Tok::Num(d) = &den_tok.tok else {
                return self.err(&den_tok, "expected integer denominator after '/'");
            };
            let denom: BigInt = d.parse().unwrap();
            big_ratio(&field, &numer, &denom).ok_or(ParseError {
                line: den_tok.line,
                col: den_tok.col,
                msg: "denominator is zero in this field".into(),
            })?
        } else {
            big_ratio(&field, &numer, &BigInt::from(1)).ok_or(ParseError {
                line: sp.line,
                col: sp.col,
                msg: "bad literal".into(),
            })?
        };
        Ok(ring_constant(self.ring, coef))
    }

    fn parse_base(&mut self) -> Result<Val, ParseError> {
        let sp = self.next();
        match sp.tok.clone() {
            Tok::Num(n) => {
                let p = self.parse_number(n, &sp)?;
                Ok(self.scalar(p))
            }
            Tok::Minus => {
                let f = self.parse_factor()?;
                Ok(self.neg(f))
            }
            Tok::LParen => {
                let e = self.parse_expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return self.err(&close, "expected ')'");
                }
                Ok(e)
            }
            Tok::Ident(name) => {
                if self.forms
                    && (name == "d" || name == "dlog")
                    && self.peek().tok == Tok::LParen
                {
                    self.next();
                    let arg = self.next();
                    let Tok::Ident(argname) = &arg.tok else {
                        return self.err(&arg, "expected identifier inside form label");
                    };
                    let close = self.next();
                    if close.tok != Tok::RParen {
                        return self.err(&close, "expected ')' closing form label");
                    }
                    let label = if name == "d" {
                        FormLabel::D(argname.clone())
                    } else {
                        FormLabel::Dlog(argname.clone())
                    };
                    return Ok(Val {
                        poly: ring_zero(self.ring),
                        form: vec![(label, ring_one(self.ring))],
                    });
                }
                match self.ring.var_index(&name) {
                    Some(i) => Ok(self.scalar(ring_var(self.ring, i))),
                    None => self.err(&sp, format!("unknown variable '{name}'")),
                }
            }
            _ => self.err(&sp, "expected a number, variable or '('"),
        }
    }
}

fn big_ratio(field: &crate::field::CoefficientField, n: &BigInt, d: &BigInt) -> Option<Coef> {
    use crate::field::CoefficientField;
    use num::{rational::BigRational, Zero};
    match field {
        CoefficientField::Q => {
            if d.is_zero() {
                None
            } else {
                Some(Coef::Q(BigRational::new(n.clone(), d.clone())))
            }
        }
        CoefficientField::Fp(p) => {
            let pb = BigInt::from(*p);
            let nr = ((n % &pb) + &pb) % &pb;
            let dr = ((d % &pb) + &pb) % &pb;
            let nv: u64 = nr.try_into().ok()?;
            let dv: u64 = dr.try_into().ok()?;
            if dv == 0 {
                return None;
            }
            let f = CoefficientField::Fp(*p);
            Some(f.div(&Coef::F(nv), &Coef::F(dv)))
        }
    }
}

/// Parse a polynomial in the given ring.
pub fn parse_polynomial(ring: &Arc<PolyRing>, input: &str) -> Result<Polynomial, ParseError> {
    let toks = tokenize(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ring,
        forms: false,
    };
    let v = p.parse_expr()?;
    let end = p.next();
    if end.tok != Tok::Eof {
        return Err(ParseError {
            line: end.line,
            col: end.col,
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(v.poly)
}

/// Parse a form expression (polynomial coefficients times `d(...)` /
/// `dlog(...)` labels) over the given coefficient ring.
pub fn parse_form(ring: &Arc<PolyRing>, input: &str) -> Result<FormExpr, ParseError> {
    let toks = tokenize(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ring,
        forms: true,
    };
    let v = p.parse_expr()?;
    let end = p.next();
    if end.tok != Tok::Eof {
        return Err(ParseError {
            line: end.line,
            col: end.col,
            msg: "unexpected trailing input".into(),
        });
    }
    Ok(FormExpr {
        scalar: v.poly,
        terms: v.form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CoefficientField;
    use crate::poly::ring_var;

    fn qring(vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(
            CoefficientField::Q,
            vars.iter().map(|s| s.to_string()).collect(),
        )
    }

    #[test]
    fn parses_basic() {
        let r = qring(&["x", "y"]);
        let p = parse_polynomial(&r, "x^2 - 2*x*y + 1/2").unwrap();
        let x = ring_var(&r, 0);
        let y = ring_var(&r, 1);
        let expected = x
            .pow(2)
            .sub(&x.mul(&y).scale(&CoefficientField::Q.from_i64(2)))
            .add(&crate::poly::ring_constant(
                &r,
                CoefficientField::Q.from_ratio(1, 2).unwrap(),
            ));
        assert_eq!(p, expected);
    }

    #[test]
    fn whitespace_insensitive() {
        let r = qring(&["x"]);
        assert_eq!(
            parse_polynomial(&r, " x ^ 2 + x ").unwrap(),
            parse_polynomial(&r, "x^2+x").unwrap()
        );
    }

    #[test]
    fn nested_negation_and_parens() {
        let r = qring(&["x", "y"]);
        let p = parse_polynomial(&r, "-(x - y)^2").unwrap();
        let q = parse_polynomial(&r, "-x^2 + 2*x*y - y^2").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn error_position() {
        let r = qring(&["x"]);
        let e = parse_polynomial(&r, "x + $").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        let e = parse_polynomial(&r, "x +\n y*").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn unknown_variable_rejected() {
        let r = qring(&["x"]);
        assert!(parse_polynomial(&r, "x + z").is_err());
    }

    #[test]
    fn fp_literals_reduce() {
        let r = PolyRing::new(CoefficientField::Fp(5), vec!["x".into()]);
        let p = parse_polynomial(&r, "7*x + 10").unwrap();
        let q = parse_polynomial(&r, "2*x").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn form_expressions() {
        let r = qring(&["x", "y"]);
        let f = parse_form(&r, "x*d(y) - 3*dlog(g0) + d(y)").unwrap();
        assert!(f.scalar.is_zero());
        assert_eq!(f.terms.len(), 2);
        let dy = f
            .terms
            .iter()
            .find(|(l, _)| *l == FormLabel::D("y".into()))
            .unwrap();
        assert_eq!(dy.1, parse_polynomial(&r, "x + 1").unwrap());
    }

    #[test]
    fn form_label_products_rejected() {
        let r = qring(&["x"]);
        assert!(parse_form(&r, "d(x)*d(x)").is_err());
    }
}
