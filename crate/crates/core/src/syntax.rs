//! Ring-spec grammar:
//!
//! ```text
//! ring   := factor ("x" factor)*
//! factor := "Z/" int | "GF(" int ")" | "GF(" int ")[x]/x^" int
//! ```
//!
//! Whitespace is ignored everywhere. Errors carry the byte offset of the
//! offending token.

use std::fmt;

use crate::arith::{factorize, prime_power};
use crate::error::{Error, Result};
use crate::ring::FactorDescriptor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorNode {
    Zn { n: u64, offset: usize },
    Gf { q: u64, offset: usize },
    GfPoly { q: u64, k: u32, offset: usize },
}

impl FactorNode {
    /// Chain-ring factors this node stands for; `Z/n` splits along the prime
    /// factorization of `n`.
    pub fn normalize(&self) -> Result<Vec<FactorDescriptor>> {
        match *self {
            FactorNode::Zn { n, .. } => factorize(n).into_iter().map(|(p, k)| FactorDescriptor::integer_chain(p as u32, k)).collect(),
            FactorNode::Gf { q, .. } => Ok(vec![FactorDescriptor::galois_field(q)?]),
            FactorNode::GfPoly { q, k: 1, .. } => Ok(vec![FactorDescriptor::galois_field(q)?]),
            FactorNode::GfPoly { q, k, .. } => Ok(vec![FactorDescriptor::truncated_poly(q, k)?]),
        }
    }
}

impl fmt::Display for FactorNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorNode::Zn { n, .. } => write!(f, "Z/{n}"),
            FactorNode::Gf { q, .. } => write!(f, "GF({q})"),
            FactorNode::GfPoly { q, k, .. } => write!(f, "GF({q})[x]/x^{k}"),
        }
    }
}

/// Parsed ring spec, factor nodes in source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpecAst {
    pub factors: Vec<FactorNode>,
}

impl RingSpecAst {
    pub fn normalized(&self) -> Result<Vec<FactorDescriptor>> {
        let mut out = Vec::new();
        for f in &self.factors {
            out.extend(f.normalize()?);
        }
        Ok(out)
    }
}

impl fmt::Display for RingSpecAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, node) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{node}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax { offset, message: message.into() }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        for &c in lit.as_bytes() {
            match self.peek() {
                Some(got) if got == c => self.pos += 1,
                _ => return Err(syntax(self.pos, format!("expected `{lit}`"))),
            }
        }
        Ok(())
    }

    fn int(&mut self) -> Result<(u64, usize)> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add((c - b'0') as u64))
                    .ok_or_else(|| syntax(start, "integer too large"))?;
                self.pos += 1;
            } else if c.is_ascii_whitespace() {
                let rest = &self.src[self.pos..];
                match rest.iter().position(|b| !b.is_ascii_whitespace()) {
                    Some(k) if rest[k].is_ascii_digit() => self.pos += k,
                    _ => break,
                }
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(syntax(start, "expected an integer"));
        }
        Ok((value, start))
    }

    fn factor(&mut self) -> Result<FactorNode> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'Z') => {
                self.expect("Z/")?;
                let (n, at) = self.int()?;
                if n < 2 {
                    return Err(syntax(at, format!("modulus must be at least 2, got {n}")));
                }
                Ok(FactorNode::Zn { n, offset: start })
            }
            Some(b'G') => {
                self.expect("GF(")?;
                let (q, at) = self.int()?;
                if prime_power(q).is_none() {
                    return Err(syntax(at, format!("GF argument {q} is not a prime power")));
                }
                self.expect(")")?;
                if self.peek() == Some(b'[') {
                    self.expect("[x]/x^")?;
                    let (k, kat) = self.int()?;
                    if k == 0 || k > 64 {
                        return Err(syntax(kat, format!("nilpotency exponent {k} out of range")));
                    }
                    Ok(FactorNode::GfPoly { q, k: k as u32, offset: start })
                } else {
                    Ok(FactorNode::Gf { q, offset: start })
                }
            }
            _ => Err(syntax(start, "expected `Z/` or `GF(`")),
        }
    }
}

pub fn parse_ring_spec(text: &str) -> Result<RingSpecAst> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let mut factors = vec![p.factor()?];
    loop {
        match p.peek() {
            None => break,
            Some(b'x') => {
                p.pos += 1;
                factors.push(p.factor()?);
            }
            Some(_) => return Err(syntax(p.pos, "expected `x` between factors")),
        }
    }
    Ok(RingSpecAst { factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let ast = parse_ring_spec("Z/12").unwrap();
        let norm = ast.normalized().unwrap();
        assert_eq!(norm, vec![FactorDescriptor::integer_chain(2, 2).unwrap(), FactorDescriptor::integer_chain(3, 1).unwrap()]);
        let ast = parse_ring_spec("GF(4) x GF(4)").unwrap();
        assert_eq!(ast.factors.len(), 2);
        let ast = parse_ring_spec("  GF ( 2 ) [ x ] / x ^ 3 xZ/9").unwrap();
        assert_eq!(ast.to_string(), "GF(2)[x]/x^3 x Z/9");
        assert_eq!(parse_ring_spec("Z/1 2").unwrap().to_string(), "Z/12");
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse_ring_spec("Z/0").unwrap_err(), Error::Syntax { offset: 2, message: "modulus must be at least 2, got 0".into() });
        assert!(matches!(parse_ring_spec("Z/1"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_ring_spec("GF(6)"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_ring_spec("Z/4 y Z/3"), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse_ring_spec(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse_ring_spec("Z/4 x"), Err(Error::Syntax { offset: 5, .. })));
        assert!(matches!(parse_ring_spec("Z/99999999999999999999999"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn gf_prime_normalizes_to_integer_chain() {
        let a = parse_ring_spec("GF(7)").unwrap().normalized().unwrap();
        let b = parse_ring_spec("Z/7").unwrap().normalized().unwrap();
        assert_eq!(a, b);
    }
}
