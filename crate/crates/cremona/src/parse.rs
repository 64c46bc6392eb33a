//! Text grammars for scalars, polynomials, map literals, matrices, words,
//! and symmetric-matrix triples.
//!
//! Grammar sketch (all whitespace-insensitive except word files, which are
//! line-oriented):
//!
//! ```text
//! scalar := '-'? int ('/' int)?
//! poly   := term (('+'|'-') term)*
//! term   := coeff? ('*'? var ('^' int)?)*        vars: x y z
//! map    := '[' poly ':' poly ':' poly ']'
//! matrix := '[[r,r,r],[r,r,r],[r,r,r]]'
//! word   := lines of `sigma` | `lin <matrix>`
//! triple := first line n, then three n×n matrices (rows of scalars),
//!           blank-line separated
//! ```

use crate::cremap::{CreMap, LinMap, MapError};
use crate::giza::SymTriple;
use crate::hpoly::{Exp, HPoly};
use crate::scalar::{FieldMode, Scalar};
use crate::word::{Letter, Word};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at line {line}, column {col}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    mode: FieldMode,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, mode: FieldMode) -> Cursor<'a> {
        Cursor { src, pos: 0, mode }
    }

    fn line_col(&self) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for c in self.src[..self.pos].chars() {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn err(&self, expected: &str) -> ParseError {
        let (line, col) = self.line_col();
        let found: String = self.src[self.pos..].chars().take(12).collect();
        ParseError {
            line,
            col,
            expected: expected.to_string(),
            found: if found.is_empty() {
                "end of input".to_string()
            } else {
                found
            },
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("'{c}'")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn big_integer(&mut self) -> Result<num_bigint::BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits_start {
            return Err(self.err("integer"));
        }
        self.src[start..self.pos]
            .parse::<num_bigint::BigInt>()
            .map_err(|_| self.err("integer"))
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        use num_traits::ToPrimitive;
        let n = self.big_integer()?;
        n.to_i64().ok_or_else(|| self.err("small integer"))
    }

    fn scalar(&mut self) -> Result<Scalar, ParseError> {
        let num = self.big_integer()?;
        if self.eat('/') {
            let den = self.big_integer()?;
            self.mode
                .from_big_ratio(&num, &den)
                .map_err(|_| self.err("nonzero denominator"))
        } else {
            Ok(self.mode.from_bigint(&num))
        }
    }

    /// A polynomial term: optional coefficient and variable powers.
    fn term(&mut self) -> Result<HPoly, ParseError> {
        self.skip_ws();
        let mut coeff: Option<Scalar> = None;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            // Unsigned here; sign handled by the caller.
            let num = self.big_integer()?;
            let c = if self.eat('/') {
                let den = self.big_integer()?;
                self.mode
                    .from_big_ratio(&num, &den)
                    .map_err(|_| self.err("nonzero denominator"))?
            } else {
                self.mode.from_bigint(&num)
            };
            coeff = Some(c);
        }
        let mut exps = [0u16; 3];
        let mut saw_var = false;
        loop {
            self.skip_ws();
            let save = self.pos;
            if self.eat('*') {
                self.skip_ws();
            }
            let idx = match self.peek() {
                Some('x') => 0,
                Some('y') => 1,
                Some('z') => 2,
                _ => {
                    self.pos = save;
                    break;
                }
            };
            self.bump();
            let mut e = 1u16;
            if self.eat('^') {
                let n = self.integer()?;
                if !(0..=u16::MAX as i64).contains(&n) {
                    return Err(self.err("small non-negative exponent"));
                }
                e = n as u16;
            }
            exps[idx] += e;
            saw_var = true;
        }
        if coeff.is_none() && !saw_var {
            return Err(self.err("coefficient or variable"));
        }
        let c = coeff.unwrap_or_else(|| self.mode.one());
        Ok(HPoly::monomial(Exp(exps[0], exps[1], exps[2]), c))
    }

    fn poly(&mut self) -> Result<HPoly, ParseError> {
        self.skip_ws();
        let mut negate = false;
        if self.eat('-') {
            negate = true;
        } else {
            let _ = self.eat('+');
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            self.skip_ws();
            let neg = match self.peek() {
                Some('+') => false,
                Some('-') => true,
                _ => break,
            };
            self.bump();
            let t = self.term()?;
            let t = if neg { t.neg() } else { t };
            acc = acc.add(&t).map_err(|e| self.err(&format!("homogeneous term ({e})")))?;
        }
        Ok(acc)
    }

    fn matrix(&mut self) -> Result<[[Scalar; 3]; 3], ParseError> {
        self.expect('[')?;
        let mut rows: Vec<[Scalar; 3]> = Vec::new();
        for i in 0..3 {
            self.expect('[')?;
            let a = self.scalar()?;
            self.expect(',')?;
            let b = self.scalar()?;
            self.expect(',')?;
            let c = self.scalar()?;
            self.expect(']')?;
            rows.push([a, b, c]);
            if i < 2 {
                self.expect(',')?;
            }
        }
        self.expect(']')?;
        Ok([rows[0].clone(), rows[1].clone(), rows[2].clone()])
    }
}

pub fn parse_scalar(src: &str, mode: FieldMode) -> Result<Scalar, ParseError> {
    let mut c = Cursor::new(src, mode);
    let s = c.scalar()?;
    if !c.at_end() {
        return Err(c.err("end of input"));
    }
    Ok(s)
}

pub fn parse_poly(src: &str, mode: FieldMode) -> Result<HPoly, ParseError> {
    let mut c = Cursor::new(src, mode);
    let p = c.poly()?;
    if !c.at_end() {
        return Err(c.err("end of input"));
    }
    Ok(p)
}

/// Map literal `[p : p : p]`, normalized into a `CreMap`.
pub fn parse_map(src: &str, mode: FieldMode) -> Result<CreMap, ParseError> {
    let mut c = Cursor::new(src, mode);
    c.expect('[')?;
    let f0 = c.poly()?;
    c.expect(':')?;
    let f1 = c.poly()?;
    c.expect(':')?;
    let f2 = c.poly()?;
    c.expect(']')?;
    if !c.at_end() {
        return Err(c.err("end of input"));
    }
    CreMap::new([f0, f1, f2]).map_err(|e: MapError| ParseError {
        line: 1,
        col: 1,
        expected: "a birational map triple".to_string(),
        found: e.to_string(),
    })
}

/// Point literal `[a : b : c]` with scalar coordinates.
pub fn parse_point(src: &str, mode: FieldMode) -> Result<crate::cremap::ProjPoint, ParseError> {
    let mut c = Cursor::new(src, mode);
    c.expect('[')?;
    let a = c.scalar()?;
    c.expect(':')?;
    let b = c.scalar()?;
    c.expect(':')?;
    let d = c.scalar()?;
    c.expect(']')?;
    if !c.at_end() {
        return Err(c.err("end of input"));
    }
    crate::cremap::ProjPoint::new([a, b, d]).ok_or(ParseError {
        line: 1,
        col: 1,
        expected: "a nonzero coordinate".to_string(),
        found: "all-zero point".to_string(),
    })
}

pub fn parse_matrix(src: &str, mode: FieldMode) -> Result<LinMap, ParseError> {
    let mut c = Cursor::new(src, mode);
    let m = c.matrix()?;
    if !c.at_end() {
        return Err(c.err("end of input"));
    }
    LinMap::new(m).map_err(|e| ParseError {
        line: 1,
        col: 1,
        expected: "an invertible matrix".to_string(),
        found: e.to_string(),
    })
}

/// Word file: one letter per line, `sigma` or `lin [[..],[..],[..]]`.
/// Blank lines and `#` comments are skipped.
pub fn parse_word(src: &str, mode: FieldMode) -> Result<Word, ParseError> {
    let mut letters = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "sigma" {
            letters.push(Letter::Sigma);
        } else if let Some(rest) = line.strip_prefix("lin") {
            let mut c = Cursor::new(rest, mode);
            let m = c.matrix().map_err(|e| ParseError {
                line: ln + 1,
                col: e.col + 3,
                expected: e.expected,
                found: e.found,
            })?;
            if !c.at_end() {
                return Err(ParseError {
                    line: ln + 1,
                    col: 1,
                    expected: "end of line".to_string(),
                    found: rest.trim().to_string(),
                });
            }
            let lm = LinMap::new(m).map_err(|e| ParseError {
                line: ln + 1,
                col: 5,
                expected: "an invertible matrix".to_string(),
                found: e.to_string(),
            })?;
            letters.push(Letter::lin(lm));
        } else {
            return Err(ParseError {
                line: ln + 1,
                col: 1,
                expected: "`sigma` or `lin [[..],[..],[..]]`".to_string(),
                found: line.chars().take(20).collect(),
            });
        }
    }
    Ok(Word::new(letters))
}

/// Triple file: `n` on the first line, then three n×n matrices in row-major
/// scalar syntax, blank-line separated.
pub fn parse_triple(src: &str, mode: FieldMode) -> Result<SymTriple, ParseError> {
    let mut lines = src.lines().enumerate().peekable();
    let (nline, ntext) = loop {
        match lines.next() {
            Some((i, l)) if !l.trim().is_empty() => break (i, l.trim().to_string()),
            Some(_) => continue,
            None => {
                return Err(ParseError {
                    line: 1,
                    col: 1,
                    expected: "matrix size n".to_string(),
                    found: "end of input".to_string(),
                })
            }
        }
    };
    let n: usize = ntext.parse().map_err(|_| ParseError {
        line: nline + 1,
        col: 1,
        expected: "matrix size n".to_string(),
        found: ntext.clone(),
    })?;
    if n == 0 {
        return Err(ParseError {
            line: nline + 1,
            col: 1,
            expected: "n ≥ 1".to_string(),
            found: ntext,
        });
    }
    let mut mats: Vec<Vec<Vec<Scalar>>> = Vec::new();
    let mut current: Vec<Vec<Scalar>> = Vec::new();
    for (i, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            if !current.is_empty() {
                mats.push(std::mem::take(&mut current));
            }
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            let mut c = Cursor::new(tok, mode);
            let s = c.scalar().map_err(|e| ParseError {
                line: i + 1,
                col: 1,
                expected: e.expected,
                found: tok.to_string(),
            })?;
            if !c.at_end() {
                return Err(ParseError {
                    line: i + 1,
                    col: 1,
                    expected: "scalar".to_string(),
                    found: tok.to_string(),
                });
            }
            row.push(s);
        }
        if row.len() != n {
            return Err(ParseError {
                line: i + 1,
                col: 1,
                expected: format!("{n} row entries"),
                found: format!("{} entries", row.len()),
            });
        }
        current.push(row);
        if current.len() == n {
            mats.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        mats.push(current);
    }
    if mats.len() != 3 {
        return Err(ParseError {
            line: 1,
            col: 1,
            expected: "three matrices".to_string(),
            found: format!("{} matrices", mats.len()),
        });
    }
    SymTriple::new(
        n,
        [mats[0].clone(), mats[1].clone(), mats[2].clone()],
    )
    .map_err(|e| ParseError {
        line: 1,
        col: 1,
        expected: "a symmetric triple".to_string(),
        found: e.to_string(),
    })
}

/// Canonical word printing, inverse of `parse_word`.
pub fn print_word(w: &Word) -> String {
    let mut out = String::new();
    for letter in w.letters() {
        match letter {
            Letter::Sigma => out.push_str("sigma\n"),
            Letter::Lin(m) => {
                out.push_str(&format!("lin {}\n", m));
            }
        }
    }
    out
}

/// Canonical triple printing, inverse of `parse_triple`.
pub fn print_triple(t: &SymTriple) -> String {
    let mut out = format!("{}\n", t.n());
    for (k, m) in t.mats().iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        for row in m {
            let cells: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldMode = FieldMode::Rational;

    #[test]
    fn scalar_syntax() {
        assert_eq!(parse_scalar("-3", Q).unwrap(), Q.from_i64(-3));
        assert_eq!(parse_scalar("7/2", Q).unwrap(), Q.from_ratio(7, 2).unwrap());
        let p = FieldMode::prime(1_000_000_007).unwrap();
        assert_eq!(parse_scalar("-3", p).unwrap(), p.from_i64(-3));
    }

    #[test]
    fn poly_syntax() {
        let f = parse_poly("y*z - x^2", Q).unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.num_terms(), 2);
        // Implicit multiplication without '*'.
        assert_eq!(parse_poly("2x^2", Q).unwrap(), parse_poly("2*x^2", Q).unwrap());
    }

    #[test]
    fn map_literals() {
        let sigma = parse_map("[y*z : x*z : x*y]", Q).unwrap();
        assert_eq!(sigma, CreMap::sigma(Q));
        let ident = parse_map("[x : y : z]", Q).unwrap();
        assert_eq!(ident, CreMap::identity(Q));
        let h = parse_map("[z-x : z-y : z]", Q).unwrap();
        assert_eq!(h, CreMap::from_lin(&LinMap::h(Q)));
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_poly("x +", Q).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.col >= 3);
        let e = parse_map("[x : y", Q).unwrap_err();
        assert_eq!(e.expected, "':'");
    }

    #[test]
    fn word_round_trip() {
        let src = "sigma\nlin [[1,0,0],[0,1,0],[0,0,1]]\n";
        let w = parse_word(src, Q).unwrap();
        assert_eq!(w.letters().len(), 2);
        assert_eq!(parse_word(&print_word(&w), Q).unwrap(), w);
    }
}
