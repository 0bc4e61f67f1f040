//! Recursive-descent parser for the published text grammars: exact numbers,
//! intervals, PL and PP literals, tree pairs, and words.
//!
//! Parse then serialize is the identity on values; serializing always emits
//! the canonical spelling.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exact::{quad_roots, ExactNumber};
use crate::interval::{Cut, Interval};
use crate::mobius::Mobius;
use crate::plmap::PlMap;
use crate::ppmap::PpMap;
use crate::rational::Rational;
use crate::treepair::{BinaryTree, TreePair};
use crate::word::{Factor, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid value: {0}")]
    Semantic(String),
}

pub type ParseResult<T> = Result<T, ParseError>;

const MAX_NESTING: usize = 256;

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
    depth: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
            depth: 0,
        }
    }

    fn descend(&mut self) -> ParseResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            self.err("nesting too deep")
        } else {
            Ok(())
        }
    }

    fn ascend(&mut self) {
        self.depth -= 1;
    }

    fn err<T>(&self, msg: impl Into<String>) -> ParseResult<T> {
        Err(ParseError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    fn expect(&mut self, c: u8) -> ParseResult<()> {
        self.skip_ws();
        match self.peek() {
            Some(got) if got == c => {
                self.bump();
                Ok(())
            }
            Some(got) => self.err(format!("expected `{}`, found `{}`", c as char, got as char)),
            None => self.err(format!("expected `{}`, found end of input", c as char)),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let bytes = kw.as_bytes();
        if self.src[self.pos..].starts_with(bytes) {
            let after = self.src.get(self.pos + bytes.len()).copied();
            // Keywords made of letters must not run into a name.
            if kw.chars().all(|c| c.is_ascii_alphabetic())
                && matches!(after, Some(c) if c.is_ascii_alphanumeric() || c == b'_')
            {
                return false;
            }
            for _ in 0..bytes.len() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn expect_end(&mut self) -> ParseResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    fn integer(&mut self) -> ParseResult<BigInt> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return self.err("expected a digit");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mut n: BigInt = digits.parse().unwrap();
        if neg {
            n = -n;
        }
        Ok(n)
    }

    fn exponent(&mut self) -> ParseResult<i64> {
        self.skip_ws();
        if !self.eat(b'^') {
            return Ok(1);
        }
        let n = self.integer()?;
        let e: i64 = n
            .try_into()
            .map_err(|_| ParseError::Semantic("exponent out of range".into()))?;
        if e == 0 {
            return Err(ParseError::Semantic("exponent must be nonzero".into()));
        }
        Ok(e)
    }

    fn rational(&mut self) -> ParseResult<Rational> {
        let n = self.integer()?;
        if self.peek() == Some(b'/') {
            self.bump();
            let d = self.integer()?;
            if d.is_zero() {
                return Err(ParseError::Semantic("zero denominator".into()));
            }
            Ok(Rational::new(n, d))
        } else {
            Ok(Rational::from(n))
        }
    }

    fn number(&mut self) -> ParseResult<ExactNumber> {
        self.skip_ws();
        if self.eat_keyword("-inf") {
            return Ok(ExactNumber::NegInf);
        }
        if self.eat_keyword("inf") {
            return Ok(ExactNumber::PosInf);
        }
        if self.eat_keyword("root") {
            self.expect(b'(')?;
            let a = self.rational()?;
            self.expect(b',')?;
            let b = self.rational()?;
            self.expect(b',')?;
            let c = self.rational()?;
            self.expect(b';')?;
            self.expect(b'[')?;
            let lo = self.rational()?;
            self.expect(b',')?;
            let hi = self.rational()?;
            self.expect(b']')?;
            self.expect(b')')?;
            let roots = quad_roots(&a, &b, &c)
                .map_err(|e| ParseError::Semantic(e.to_string()))?;
            let lo = ExactNumber::Rat(lo);
            let hi = ExactNumber::Rat(hi);
            let inside: Vec<ExactNumber> = roots
                .into_iter()
                .filter(|r| lo <= *r && *r <= hi)
                .collect();
            match inside.len() {
                1 => Ok(inside.into_iter().next().unwrap()),
                n => Err(ParseError::Semantic(format!(
                    "isolating interval must contain exactly one root, found {}",
                    n
                ))),
            }
        } else {
            Ok(ExactNumber::Rat(self.rational()?))
        }
    }

    fn finite_rational_number(&mut self) -> ParseResult<Rational> {
        let n = self.number()?;
        match n.as_rational() {
            Some(r) => Ok(r.clone()),
            None => Err(ParseError::Semantic(format!(
                "expected a rational number, found {}",
                n
            ))),
        }
    }

    fn interval(&mut self) -> ParseResult<Interval> {
        self.skip_ws();
        if self.eat(b'{') {
            let v = self.number()?;
            self.expect(b'}')?;
            if !v.is_finite() {
                return Err(ParseError::Semantic("point must be finite".into()));
            }
            return Ok(Interval::point(v));
        }
        let lo_closed = if self.eat(b'[') {
            true
        } else if self.eat(b'(') {
            false
        } else {
            return self.err("expected `[`, `(` or `{`");
        };
        let lo = self.number()?;
        self.expect(b',')?;
        let hi = self.number()?;
        let hi_closed = if self.eat(b']') {
            true
        } else if self.eat(b')') {
            false
        } else {
            return self.err("expected `]` or `)`");
        };
        let lo_cut = if lo_closed {
            Cut::before(lo)
        } else {
            Cut::after(lo)
        };
        let hi_cut = if hi_closed {
            Cut::after(hi)
        } else {
            Cut::before(hi)
        };
        Interval::from_cuts(lo_cut, hi_cut)
            .ok_or_else(|| ParseError::Semantic("empty interval".into()))
    }

    fn name(&mut self) -> ParseResult<String> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                self.bump();
            }
            _ => return self.err("expected a name"),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.bump();
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn pl_literal(&mut self) -> ParseResult<PlMap> {
        // Caller consumed `PL`.
        self.expect(b'[')?;
        let mut pts = Vec::new();
        loop {
            self.expect(b'(')?;
            let x = self.finite_rational_number()?;
            self.expect(b',')?;
            let y = self.finite_rational_number()?;
            self.expect(b')')?;
            pts.push((x, y));
            if !self.eat(b',') {
                break;
            }
        }
        self.expect(b']')?;
        PlMap::new(pts).map_err(|e| ParseError::Semantic(e.to_string()))
    }

    fn pp_literal(&mut self) -> ParseResult<PpMap> {
        // Caller consumed `PP`.
        self.expect(b'[')?;
        let mut spans: Vec<(ExactNumber, ExactNumber)> = Vec::new();
        let mut pieces = Vec::new();
        loop {
            self.expect(b'(')?;
            let lo = self.number()?;
            self.expect(b',')?;
            let hi = self.number()?;
            self.expect(b':')?;
            let p = self.finite_rational_number()?;
            self.expect(b',')?;
            let q = self.finite_rational_number()?;
            self.expect(b',')?;
            let r = self.finite_rational_number()?;
            self.expect(b',')?;
            let s = self.finite_rational_number()?;
            self.expect(b')')?;
            spans.push((lo, hi));
            pieces.push(
                Mobius::from_rationals(&p, &q, &r, &s)
                    .map_err(|e| ParseError::Semantic(e.to_string()))?,
            );
            self.skip_ws();
            if self.peek() == Some(b']') {
                break;
            }
        }
        self.expect(b']')?;
        if spans[0].0 != ExactNumber::NegInf {
            return Err(ParseError::Semantic(
                "first piece must start at -inf".into(),
            ));
        }
        if spans.last().unwrap().1 != ExactNumber::PosInf {
            return Err(ParseError::Semantic("last piece must end at inf".into()));
        }
        let mut cuts = Vec::new();
        for i in 0..spans.len() - 1 {
            if spans[i].1 != spans[i + 1].0 {
                return Err(ParseError::Semantic(format!(
                    "piece intervals must share endpoints, found {} then {}",
                    spans[i].1,
                    spans[i + 1].0
                )));
            }
            cuts.push(spans[i].1.clone());
        }
        PpMap::new(cuts, pieces).map_err(|e| ParseError::Semantic(e.to_string()))
    }

    fn tree(&mut self) -> ParseResult<BinaryTree> {
        self.skip_ws();
        if self.eat(b'*') {
            return Ok(BinaryTree::Leaf);
        }
        self.descend()?;
        self.expect(b'(')?;
        let l = self.tree()?;
        let r = self.tree()?;
        self.expect(b')')?;
        self.ascend();
        Ok(BinaryTree::caret(l, r))
    }

    fn tree_pair(&mut self) -> ParseResult<TreePair> {
        let d = self.tree()?;
        self.expect(b'|')?;
        let r = self.tree()?;
        TreePair::new(d, r).map_err(|e| ParseError::Semantic(e.to_string()))
    }

    fn word(&mut self) -> ParseResult<Word> {
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'(') => {
                    self.descend()?;
                    self.bump();
                    let inner = self.word()?;
                    self.expect(b')')?;
                    self.ascend();
                    let e = self.exponent()?;
                    factors.push(Factor::Group(inner, e));
                }
                Some(b'[') => {
                    self.descend()?;
                    self.bump();
                    let lhs = self.word()?;
                    self.expect(b',')?;
                    let rhs = self.word()?;
                    self.expect(b']')?;
                    self.ascend();
                    let e = self.exponent()?;
                    factors.push(Factor::Comm(lhs, rhs, e));
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let n = self.name()?;
                    let e = self.exponent()?;
                    factors.push(Factor::Gen(n, e));
                }
                _ => break,
            }
        }
        if factors.is_empty() {
            return self.err("expected a word");
        }
        Ok(Word::from_factors(factors))
    }
}

/// A parsed element expression; words still need an environment to become
/// maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementExpr {
    Pl(PlMap),
    Pp(PpMap),
    Tree(TreePair),
    WordExpr(Word),
}

pub fn parse_number(s: &str) -> ParseResult<ExactNumber> {
    let mut sc = Scanner::new(s);
    let n = sc.number()?;
    sc.expect_end()?;
    Ok(n)
}

pub fn parse_rational(s: &str) -> ParseResult<Rational> {
    let mut sc = Scanner::new(s);
    let n = sc.finite_rational_number()?;
    sc.expect_end()?;
    Ok(n)
}

pub fn parse_interval(s: &str) -> ParseResult<Interval> {
    let mut sc = Scanner::new(s);
    let iv = sc.interval()?;
    sc.expect_end()?;
    Ok(iv)
}

pub fn parse_word(s: &str) -> ParseResult<Word> {
    let mut sc = Scanner::new(s);
    let w = sc.word()?;
    sc.expect_end()?;
    Ok(w)
}

pub fn parse_tree_pair(s: &str) -> ParseResult<TreePair> {
    let mut sc = Scanner::new(s);
    let tp = sc.tree_pair()?;
    sc.expect_end()?;
    Ok(tp)
}

/// Dispatches on the leading token: `PL[`, `PP[`, a tree pair (detected by a
/// top-level `|`), or a word.
pub fn parse_element(s: &str) -> ParseResult<ElementExpr> {
    let mut sc = Scanner::new(s);
    sc.skip_ws();
    if sc.eat_keyword("PL") {
        let m = sc.pl_literal()?;
        sc.expect_end()?;
        return Ok(ElementExpr::Pl(m));
    }
    if sc.eat_keyword("PP") {
        let m = sc.pp_literal()?;
        sc.expect_end()?;
        return Ok(ElementExpr::Pp(m));
    }
    if s.contains('|') {
        let tp = sc.tree_pair()?;
        sc.expect_end()?;
        return Ok(ElementExpr::Tree(tp));
    }
    let w = sc.word()?;
    sc.expect_end()?;
    Ok(ElementExpr::WordExpr(w))
}
