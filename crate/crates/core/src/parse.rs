//! Parsers for the word and element grammars.
//!
//! One expression grammar serves every alphabet:
//!
//! ```text
//! expr  := term ('*'? term)*
//! term  := atom ('^' int)?
//! atom  := name | '1' | '(' expr ')' | '[' expr ',' expr ']'
//! int   := ('+' | '-')? digit+
//! ```
//!
//! `[u, v]` is `u^-1 v^-1 u v`. Whitespace is ignored everywhere. Words use
//! the names `x1..x9` with aliases `x, y, z, t`; group elements use their
//! generators and are normalized by evaluation, so `a^2*b` in K parses to
//! `b*a^-2`.

use crate::error::{Error, Result};
use crate::freewords::FreeWord;
use crate::groups::{
    evaluate_word, DihedralElt, Element, GElt, Group, GroupId, KleinElt, VFour, ZxDElt,
};

/// Upper bound on the length of a parsed product, in generator letters.
const MAX_LETTERS: u64 = 1 << 20;

struct Parser<'a> {
    // non-whitespace bytes with their 1-based column in the input
    toks: Vec<(usize, u8)>,
    pos: usize,
    names: &'a [(&'a str, usize)],
    arity: usize,
    end_col: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

impl<'a> Parser<'a> {
    fn new(src: &str, names: &'a [(&'a str, usize)], arity: usize) -> Result<Self> {
        let mut toks = Vec::new();
        for (i, c) in src.char_indices() {
            if c.is_whitespace() {
                continue;
            }
            if !c.is_ascii() {
                return err(i + 1, format!("unexpected character `{c}`"));
            }
            toks.push((i + 1, c as u8));
        }
        Ok(Parser {
            toks,
            pos: 0,
            names,
            arity,
            end_col: src.len() + 1,
        })
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn peek(&self) -> Option<u8> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => err(
                    self.col(),
                    format!("expected `{}`, found `{}`", c as char, found as char),
                ),
                None => err(
                    self.col(),
                    format!("expected `{}`, found end of input", c as char),
                ),
            }
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn match_name(&mut self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for &(name, var) in self.names {
            let bytes = name.as_bytes();
            let fits = bytes
                .iter()
                .enumerate()
                .all(|(i, b)| self.toks.get(self.pos + i).map(|t| t.1) == Some(*b));
            if fits && best.is_none_or(|(len, _)| bytes.len() > len) {
                best = Some((bytes.len(), var));
            }
        }
        let (len, var) = best?;
        self.pos += len;
        Some(var)
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.col();
        let mut text = String::new();
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            text.push(c as char);
            self.pos += 1;
        }
        while let Some(c) = self.peek().filter(u8::is_ascii_digit) {
            text.push(c as char);
            self.pos += 1;
        }
        if !text.bytes().any(|c| c.is_ascii_digit()) {
            return err(self.col(), "expected an integer exponent");
        }
        text.parse::<i64>()
            .or_else(|_| err(start, format!("exponent `{text}` out of range")))
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(b'(' | b'[' | b'1')) || {
            let p = self.pos;
            self.names.iter().any(|&(name, _)| {
                name.bytes()
                    .enumerate()
                    .all(|(i, b)| self.toks.get(p + i).map(|t| t.1) == Some(b))
            })
        }
    }

    fn expr(&mut self) -> Result<FreeWord> {
        if self.at_end() {
            return err(self.col(), "empty expression");
        }
        let mut acc = self.term()?;
        loop {
            let star = self.eat(b'*');
            if !star && !self.starts_atom() {
                break;
            }
            let rhs = self.term()?;
            acc = acc.mul(&rhs)?;
            self.check_len(&acc)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FreeWord> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let col = self.col();
            let n = self.int()?;
            if base.len().saturating_mul(n.unsigned_abs()) > MAX_LETTERS && base.letters().len() > 1
            {
                return err(col, "expression too long");
            }
            let w = pow_word(&base, n)?;
            self.check_len(&w)?;
            return Ok(w);
        }
        Ok(base)
    }

    fn check_len(&self, w: &FreeWord) -> Result<()> {
        if w.letters().len() as u64 > MAX_LETTERS {
            return err(self.col(), "expression too long");
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<FreeWord> {
        let col = self.col();
        if let Some(var) = self.match_name() {
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                return err(col, "unknown generator");
            }
            return FreeWord::generator(var, self.arity);
        }
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(FreeWord::identity(self.arity))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.expr()?;
                self.expect(b',')?;
                let v = self.expr()?;
                self.expect(b']')?;
                FreeWord::commutator(&u, &v)
            }
            Some(c) => err(col, format!("unexpected `{}`", c as char)),
            None => err(col, "unexpected end of input"),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => err(self.col(), format!("unexpected `{}`", c as char)),
        }
    }
}

fn pow_word(base: &FreeWord, n: i64) -> Result<FreeWord> {
    if let [single] = base.letters() {
        let e = single
            .exp
            .checked_mul(n)
            .ok_or(Error::Overflow("exponent"))?;
        return FreeWord::from_pairs(&[(single.var, e)], base.arity());
    }
    base.pow(n)
}

fn parse_with(src: &str, names: &[(&str, usize)], arity: usize) -> Result<FreeWord> {
    let mut p = Parser::new(src, names, arity)?;
    let w = p.expr()?;
    p.finish()?;
    Ok(w)
}

const WORD_NAMES: &[(&str, usize)] = &[
    ("x", 1),
    ("y", 2),
    ("z", 3),
    ("t", 4),
    ("x1", 1),
    ("x2", 2),
    ("x3", 3),
    ("x4", 4),
    ("x5", 5),
    ("x6", 6),
    ("x7", 7),
    ("x8", 8),
    ("x9", 9),
];

/// Parse a word. The arity is `arity` if given, else the highest variable
/// used (at least 1).
pub fn parse_word(src: &str, arity: Option<usize>) -> Result<FreeWord> {
    let w = parse_with(src, WORD_NAMES, 9)?;
    let n = arity.unwrap_or(w.max_var().max(1));
    w.with_arity(n)
}

const KD_NAMES: &[(&str, usize)] = &[("a", 1), ("b", 2)];

const G_NAMES: &[(&str, usize)] = &[
    ("d1", 1),
    ("d2", 2),
    ("d3", 3),
    ("b", 4),
    ("a1", 5),
    ("a2", 6),
    ("a3", 7),
];

pub fn parse_k(src: &str) -> Result<KleinElt> {
    evaluate_word(&parse_with(src, KD_NAMES, 2)?, &[KleinElt::A, KleinElt::B])
}

pub fn parse_d(src: &str) -> Result<DihedralElt> {
    evaluate_word(
        &parse_with(src, KD_NAMES, 2)?,
        &[DihedralElt::A, DihedralElt::B],
    )
}

pub fn parse_g(src: &str) -> Result<GElt> {
    let gens = [
        GElt::from_d(VFour::D1),
        GElt::from_d(VFour::D2),
        GElt::from_d(VFour::D3),
        GElt::B,
        GElt::a(1),
        GElt::a(2),
        GElt::a(3),
    ];
    evaluate_word(&parse_with(src, G_NAMES, 7)?, &gens)
}

/// `(i; w)` with `w` a D-expression.
pub fn parse_zd(src: &str) -> Result<ZxDElt> {
    let mut p = Parser::new(src, KD_NAMES, 2)?;
    p.expect(b'(')?;
    let i = p.int()?;
    p.expect(b';')?;
    let w = p.expr()?;
    p.expect(b')')?;
    p.finish()?;
    Ok(ZxDElt::new(
        i,
        evaluate_word(&w, &[DihedralElt::A, DihedralElt::B])?,
    ))
}

pub fn parse_element(group: GroupId, src: &str) -> Result<Element> {
    Ok(match group {
        GroupId::K => parse_k(src)?.into_element(),
        GroupId::D => parse_d(src)?.into_element(),
        GroupId::G => parse_g(src)?.into_element(),
        GroupId::ZD => parse_zd(src)?.into_element(),
    })
}
