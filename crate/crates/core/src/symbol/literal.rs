//! Text form of symbols.
//!
//! A literal is a sum of terms `c * x1^a1 * ... * xn^an`; factors may also be
//! juxtaposed (`3 x1^2 x2`). `|x|^k` (even `k`) expands to `(x1^2+...+xn^2)^{k/2}`
//! and parenthesised sub-expressions may be raised to integer powers.

use super::poly::SymbolPoly;
use super::SymbolError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Var(usize),
    Norm,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str, dim: usize) -> Result<Vec<(usize, Tok)>, SymbolError> {
    let bytes = src.as_bytes();
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
            '|' => {
                if src[i..].starts_with("|x|") {
                    out.push((i, Tok::Norm));
                    i += 3;
                } else {
                    return Err(parse_err(i, "expected `|x|`"));
                }
            }
            'x' => {
                let start = i;
                i += 1;
                let digits_start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: usize = src[digits_start..i]
                    .parse()
                    .map_err(|_| parse_err(start, "variable needs an index, e.g. x1"))?;
                if idx == 0 || idx > dim {
                    return Err(parse_err(
                        start,
                        &format!("variable x{idx} out of range for dimension {dim}"),
                    ));
                }
                out.push((start, Tok::Var(idx - 1)));
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let v: f64 = src[start..i]
                    .parse()
                    .map_err(|_| parse_err(start, "malformed number"))?;
                out.push((start, Tok::Num(v)));
            }
            _ => return Err(parse_err(i, &format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

fn parse_err(pos: usize, msg: &str) -> SymbolError {
    SymbolError::Parse {
        pos,
        msg: msg.to_string(),
    }
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    dim: usize,
    end: usize,
}

enum Atom {
    Poly(SymbolPoly),
    Norm,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<SymbolPoly, SymbolError> {
        let mut acc = SymbolPoly::zero(self.dim);
        let mut sign = 1.0;
        match self.peek() {
            Some(Tok::Plus) => self.pos += 1,
            Some(Tok::Minus) => {
                sign = -1.0;
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(sign);
            match self.peek() {
                Some(Tok::Plus) => {
                    sign = 1.0;
                    self.pos += 1;
                }
                Some(Tok::Minus) => {
                    sign = -1.0;
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SymbolPoly, SymbolError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::Norm) | Some(Tok::LParen) => {
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn exponent(&mut self) -> Result<Option<u32>, SymbolError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.pos += 1;
        let at = self.here();
        match self.peek() {
            Some(Tok::Num(v)) if v.fract() == 0.0 && *v >= 0.0 && *v <= 64.0 => {
                let k = *v as u32;
                self.pos += 1;
                Ok(Some(k))
            }
            _ => Err(parse_err(at, "exponent must be a non-negative integer")),
        }
    }

    fn power(&mut self) -> Result<SymbolPoly, SymbolError> {
        let at = self.here();
        let atom = self.atom()?;
        let k = self.exponent()?;
        match atom {
            Atom::Norm => match k {
                Some(k) if k % 2 == 0 => Ok(SymbolPoly::norm_power(self.dim, k)),
                Some(_) => Err(parse_err(at, "|x|^k needs an even exponent")),
                None => Err(parse_err(at, "|x| must carry an even exponent")),
            },
            Atom::Poly(p) => Ok(match k {
                Some(k) => p.pow(k),
                None => p,
            }),
        }
    }

    fn atom(&mut self) -> Result<Atom, SymbolError> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Atom::Poly(SymbolPoly::constant(self.dim, v)))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(Atom::Poly(SymbolPoly::coordinate(self.dim, i)))
            }
            Some(Tok::Norm) => {
                self.pos += 1;
                Ok(Atom::Norm)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(parse_err(self.here(), "expected `)`"));
                }
                self.pos += 1;
                Ok(Atom::Poly(inner))
            }
            Some(t) => Err(parse_err(at, &format!("unexpected token {t:?}"))),
            None => Err(parse_err(at, "unexpected end of input")),
        }
    }
}

/// Parses a symbol literal in `dim` variables.
pub fn parse_symbol(src: &str, dim: usize) -> Result<SymbolPoly, SymbolError> {
    if dim == 0 {
        return Err(SymbolError::InvalidInput("dimension must be at least 1".into()));
    }
    let toks = tokenize(src, dim)?;
    if toks.is_empty() {
        return Err(parse_err(0, "empty symbol"));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        dim,
        end: src.len(),
    };
    let poly = p.expr()?;
    if p.pos != toks.len() {
        return Err(parse_err(p.here(), "trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::MultiIndex;
    use proptest::prelude::*;

    #[test]
    fn parses_norm_shorthand() {
        let p = parse_symbol("1+|x|^4", 2).unwrap();
        assert_eq!(p.to_string(), "1 + x1^4 + 2*x1^2*x2^2 + x2^4");
        assert_eq!(p.order(), 4);
    }

    #[test]
    fn parses_juxtaposed_and_explicit_products() {
        let a = parse_symbol("3 x1^2 x2 - 0.5*x2^3", 2).unwrap();
        assert_eq!(a.coeff(&MultiIndex::new(vec![2, 1])), 3.0);
        assert_eq!(a.coeff(&MultiIndex::new(vec![0, 3])), -0.5);
        let b = parse_symbol("(x1^2 + x2^2)^2", 2).unwrap();
        assert_eq!(b, parse_symbol("|x|^4", 2).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_symbol("|x|^3", 2).is_err());
        assert!(parse_symbol("x3^2", 2).is_err());
        assert!(parse_symbol("1 + ", 2).is_err());
        assert!(parse_symbol("x1^1.5", 2).is_err());
        assert!(parse_symbol("", 2).is_err());
        assert!(parse_symbol("(x1", 2).is_err());
    }

    #[test]
    fn scientific_coefficients() {
        let p = parse_symbol("1e-3*x1^4 + 2.5E2", 1).unwrap();
        assert_eq!(p.coeff(&MultiIndex::new(vec![4])), 1e-3);
        assert_eq!(p.coeff(&MultiIndex::new(vec![0])), 250.0);
    }

    fn arb_poly() -> impl Strategy<Value = SymbolPoly> {
        let term = (
            prop::collection::vec(0u32..5, 3),
            prop_oneof![-1e3..1e3f64, (-20i32..20).prop_map(f64::from)],
        );
        prop::collection::vec(term, 0..8).prop_map(|ts| {
            SymbolPoly::from_terms(3, ts.into_iter().map(|(e, c)| (MultiIndex::new(e), c)))
        })
    }

    proptest! {
        #[test]
        fn canonical_printer_round_trips(p in arb_poly()) {
            let text = p.to_string();
            let back = parse_symbol(&text, 3).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
