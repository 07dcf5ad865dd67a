//! Expression language for naming streams on the command line.
//!
//! Grammar, with whitespace allowed around arguments:
//!
//! ```text
//! expr := zip(expr, expr) | inv(expr) | xor(expr)
//!       | drop(count, expr) | cons(word, expr)
//!       | mutate(expr, index=letter, ...)
//!       | applyca(path, expr) | encode(letters, expr)
//!       | atom
//! atom := name | name:params      params split on '/'
//! ```
//!
//! Atoms are catalog entries, e.g. `tm`, `periodic:011101`, `algoctr:1/2`.

use std::collections::BTreeMap;

use crate::ca::{self, xor_rule};
use crate::catalog;
use crate::codec::Codec;
use crate::error::{Error, Result};
use crate::stream::{self, Alphabet, Stream};

/// Abstract syntax of a stream expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamExpr {
    Atom { name: String, params: Vec<String> },
    Zip(Box<StreamExpr>, Box<StreamExpr>),
    Inv(Box<StreamExpr>),
    Drop(u64, Box<StreamExpr>),
    Cons(String, Box<StreamExpr>),
    Mutate(Box<StreamExpr>, Vec<(u64, char)>),
    Xor(Box<StreamExpr>),
    ApplyCa(String, Box<StreamExpr>),
    Encode(String, Box<StreamExpr>),
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser { chars: text.char_indices().collect(), pos: 0, len: text.len() }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(o, _)| o)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(Error::ExprSyntax { offset: self.offset(), reason: reason.into() })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.fail(format!("expected {want:?}, found {c:?}")),
            None => self.fail(format!("expected {want:?}, found end of input")),
        }
    }

    fn is_delimiter(c: char) -> bool {
        c == '(' || c == ')' || c == ',' || c.is_whitespace()
    }

    /// A bare value: word, path, or alphabet. Anything up to a delimiter.
    fn token(&mut self, what: &str) -> Result<String> {
        self.skip_ws();
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if Self::is_delimiter(c) {
                break;
            }
            out.push(c);
            self.pos += 1;
        }
        if out.is_empty() {
            return self.fail(format!("expected {what}"));
        }
        Ok(out)
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        self.skip_ws();
        let start = self.offset();
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            digits.push(c);
            self.pos += 1;
        }
        digits
            .parse()
            .map_err(|_| Error::ExprSyntax { offset: start, reason: format!("expected {what}") })
    }

    fn ident(&mut self) -> Result<(usize, String)> {
        self.skip_ws();
        let start = self.offset();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if !c.is_alphanumeric() && c != '_' {
                break;
            }
            name.push(c);
            self.pos += 1;
        }
        if name.is_empty() {
            return self.fail("expected a stream expression");
        }
        Ok((start, name))
    }

    fn expr(&mut self) -> Result<StreamExpr> {
        let (start, name) = self.ident()?;
        match self.peek() {
            Some('(') => self.call(start, &name),
            Some(':') => {
                self.pos += 1;
                let text = self.token("catalog parameters after ':'")?;
                Ok(StreamExpr::Atom {
                    name,
                    params: text.split('/').map(str::to_string).collect(),
                })
            }
            _ => Ok(StreamExpr::Atom { name, params: Vec::new() }),
        }
    }

    fn call(&mut self, start: usize, name: &str) -> Result<StreamExpr> {
        self.expect('(')?;
        let node = match name {
            "zip" => {
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                StreamExpr::Zip(Box::new(a), Box::new(b))
            }
            "inv" => StreamExpr::Inv(Box::new(self.expr()?)),
            "xor" => StreamExpr::Xor(Box::new(self.expr()?)),
            "drop" => {
                let n = self.number("a count")?;
                self.expect(',')?;
                StreamExpr::Drop(n, Box::new(self.expr()?))
            }
            "cons" => {
                let w = self.token("a word")?;
                self.expect(',')?;
                StreamExpr::Cons(w, Box::new(self.expr()?))
            }
            "mutate" => {
                let base = self.expr()?;
                let mut edits = Vec::new();
                loop {
                    self.skip_ws();
                    if self.peek() != Some(',') {
                        break;
                    }
                    self.pos += 1;
                    let i = self.number("an index")?;
                    self.expect('=')?;
                    let letter = match self.bump() {
                        Some(c) if !Self::is_delimiter(c) => c,
                        _ => return self.fail("expected a letter after '='"),
                    };
                    edits.push((i, letter));
                }
                if edits.is_empty() {
                    return self.fail("mutate needs at least one index=letter edit");
                }
                StreamExpr::Mutate(Box::new(base), edits)
            }
            "applyca" => {
                let path = self.token("a rule file path")?;
                self.expect(',')?;
                StreamExpr::ApplyCa(path, Box::new(self.expr()?))
            }
            "encode" => {
                let letters = self.token("an alphabet")?;
                self.expect(',')?;
                StreamExpr::Encode(letters, Box::new(self.expr()?))
            }
            _ => {
                return Err(Error::ExprSyntax {
                    offset: start,
                    reason: format!("{name:?} is not a function"),
                })
            }
        };
        self.expect(')')?;
        Ok(node)
    }
}

/// Parses an expression, reporting syntax errors with byte offsets.
pub fn parse_expr(text: &str) -> Result<StreamExpr> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.skip_ws();
    if p.peek().is_some() {
        return p.fail("unexpected trailing input");
    }
    Ok(e)
}

/// Builds the stream an expression names. Reads rule files for
/// `applyca` nodes.
pub fn eval_expr(e: &StreamExpr) -> Result<Stream> {
    match e {
        StreamExpr::Atom { name, params } => {
            let refs: Vec<&str> = params.iter().map(String::as_str).collect();
            catalog::build(name, &refs)
        }
        StreamExpr::Zip(a, b) => stream::zip(&eval_expr(a)?, &eval_expr(b)?),
        StreamExpr::Inv(a) => stream::inv(&eval_expr(a)?),
        StreamExpr::Drop(n, a) => Ok(stream::drop(&eval_expr(a)?, *n)),
        StreamExpr::Cons(w, a) => stream::cons(w, &eval_expr(a)?),
        StreamExpr::Mutate(a, edits) => {
            let map: BTreeMap<u64, char> = edits.iter().copied().collect();
            stream::mutate(&eval_expr(a)?, map)
        }
        StreamExpr::Xor(a) => ca::apply(&xor_rule(), &eval_expr(a)?),
        StreamExpr::ApplyCa(path, a) => {
            let text = std::fs::read_to_string(path)?;
            ca::apply(&ca::parse_rule(&text)?, &eval_expr(a)?)
        }
        StreamExpr::Encode(letters, a) => {
            Codec::new(Alphabet::new(letters)?).encode(&eval_expr(a)?)
        }
    }
}

/// One-step convenience: parse then evaluate.
pub fn build_stream(text: &str) -> Result<Stream> {
    eval_expr(&parse_expr(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(name: &str, params: &[&str]) -> StreamExpr {
        StreamExpr::Atom {
            name: name.into(),
            params: params.iter().map(|p| p.to_string()).collect(),
        }
    }

    #[test]
    fn the_grammar_covers_atoms_and_calls() {
        assert_eq!(
            parse_expr("zip(tm,pd)").unwrap(),
            StreamExpr::Zip(Box::new(atom("tm", &[])), Box::new(atom("pd", &[])))
        );
        assert_eq!(
            parse_expr("periodic:011101").unwrap(),
            atom("periodic", &["011101"])
        );
        assert_eq!(
            parse_expr("drop(3, xor(tm))").unwrap(),
            StreamExpr::Drop(3, Box::new(StreamExpr::Xor(Box::new(atom("tm", &[])))))
        );
        assert_eq!(parse_expr("algoctr:1/2").unwrap(), atom("algoctr", &["1", "2"]));
        assert_eq!(
            parse_expr("mutate(zeros, 2=1, 5=1)").unwrap(),
            StreamExpr::Mutate(Box::new(atom("zeros", &[])), vec![(2, '1'), (5, '1')])
        );
    }

    #[test]
    fn syntax_errors_carry_byte_offsets() {
        let offset = |text: &str| match parse_expr(text) {
            Err(Error::ExprSyntax { offset, .. }) => offset,
            other => panic!("expected a syntax error for {text:?}, got {other:?}"),
        };
        assert_eq!(offset("zip(tm"), 6);
        assert_eq!(offset("tm)"), 2);
        assert_eq!(offset("frob(tm)"), 0);
        assert_eq!(offset("drop(x, tm)"), 5);
        assert_eq!(offset(""), 0);
        assert_eq!(offset("tm:"), 3);
    }

    #[test]
    fn evaluation_matches_the_library_combinators() {
        let zipped = build_stream("zip(tm, pd)").unwrap();
        assert_eq!(zipped.prefix(8).unwrap(), "01101101");
        let inverted = build_stream("inv(pd)").unwrap();
        assert_eq!(inverted.prefix(8).unwrap(), "01000101");
        let mutated = build_stream("mutate(zeros, 1=1)").unwrap();
        assert_eq!(mutated.prefix(4).unwrap(), "0100");
        let differenced = build_stream("xor(tm)").unwrap();
        assert_eq!(differenced.prefix(15).unwrap(), "101110101011101");
    }
}
