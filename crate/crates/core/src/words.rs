//! Braid generators, signed-letter words, and the text grammar.
//!
//! Words are stored canonically: adjacent letters on the same generator are
//! merged and letters whose exponents cancel are dropped. This is free
//! reduction, which is valid in every group, so the carrier never depends on
//! an ambient presentation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A braid generator. Strand indices are 1-based.
///
/// The derived ordering is lexicographic on (kind, indices) with kinds ordered
/// `A < Rho < Tau < Sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `A[i,j]`, `1 <= i < j`.
    A(usize, usize),
    /// `rho[k]`, the surface generator of the projective plane.
    Rho(usize),
    /// `tau[k]`.
    Tau(usize),
    /// `s[i]`, the Artin generator sigma_i.
    Sigma(usize),
}

impl Generator {
    /// Checked constructor for `A[i,j]`.
    pub fn a(i: usize, j: usize) -> Result<Self> {
        let g = Generator::A(i, j);
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Generator::A(i, j) => 1 <= i && i < j,
            Generator::Rho(k) | Generator::Tau(k) | Generator::Sigma(k) => k >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadIndices(self.to_string()))
        }
    }

    /// Largest strand index mentioned by the generator. `s[i]` mentions strand
    /// `i + 1`.
    pub fn max_strand(&self) -> usize {
        match *self {
            Generator::A(_, j) => j,
            Generator::Rho(k) | Generator::Tau(k) => k,
            Generator::Sigma(i) => i + 1,
        }
    }

    /// Whether the generator involves strand `s`.
    pub fn mentions(&self, s: usize) -> bool {
        match *self {
            Generator::A(i, j) => i == s || j == s,
            Generator::Rho(k) | Generator::Tau(k) => k == s,
            Generator::Sigma(i) => i == s || i + 1 == s,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::A(i, j) => write!(f, "A[{i},{j}]"),
            Generator::Rho(k) => write!(f, "rho[{k}]"),
            Generator::Tau(k) => write!(f, "tau[{k}]"),
            Generator::Sigma(i) => write!(f, "s[{i}]"),
        }
    }
}

/// A generator raised to a nonzero power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Generator,
    pub exp: i64,
}

impl Letter {
    pub fn new(gen: Generator, exp: i64) -> Self {
        debug_assert!(exp != 0);
        Letter { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            exp: -self.exp,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.gen)
        } else {
            write!(f, "{}^{}", self.gen, self.exp)
        }
    }
}

/// A freely reduced word in the braid generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    /// Single-letter word `gen^exp` (empty when `exp == 0`).
    pub fn gen(gen: Generator, exp: i64) -> Self {
        let mut w = Word::new();
        w.push(gen, exp);
        w
    }

    pub fn from_letters<I: IntoIterator<Item = (Generator, i64)>>(letters: I) -> Self {
        let mut w = Word::new();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of syllables (merged letters).
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Sum of absolute exponents.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    /// Appends `gen^exp`, merging with and cancelling against the tail.
    pub fn push(&mut self, gen: Generator, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.gen == gen {
                last.exp += exp;
                if last.exp == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter::new(gen, exp));
    }

    pub fn push_word(&mut self, other: &Word) {
        for l in &other.letters {
            self.push(l.gen, l.exp);
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self * other`, freely reduced.
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.push_word(other);
        w
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::new();
        for _ in 0..k.unsigned_abs() {
            w.push_word(&base);
        }
        w
    }

    /// `self * other * self^-1`.
    pub fn conjugate(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse())
    }

    /// Iterates over the word one unit letter at a time, as `(gen, +1|-1)`.
    pub fn unit_letters(&self) -> impl Iterator<Item = (Generator, i64)> + '_ {
        self.letters.iter().flat_map(|l| {
            std::iter::repeat_n((l.gen, l.exp.signum()), l.exp.unsigned_abs() as usize)
        })
    }

    /// Replaces every letter by the image of its generator.
    pub fn substitute<F>(&self, mut f: F) -> Word
    where
        F: FnMut(Generator) -> Word,
    {
        let mut out = Word::new();
        for l in &self.letters {
            out.push_word(&f(l.gen).pow(l.exp));
        }
        out
    }

    /// Fallible variant of [`Word::substitute`].
    pub fn try_substitute<F>(&self, mut f: F) -> Result<Word>
    where
        F: FnMut(Generator) -> Result<Word>,
    {
        let mut out = Word::new();
        for l in &self.letters {
            out.push_word(&f(l.gen)?.pow(l.exp));
        }
        Ok(out)
    }

    /// Largest strand index mentioned, 0 for the empty word.
    pub fn max_strand(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.gen.max_strand())
            .max()
            .unwrap_or(0)
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.letters.iter().map(|l| l.gen)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        parse_word(s)
    }
}

impl From<Generator> for Word {
    fn from(g: Generator) -> Word {
        Word::gen(g, 1)
    }
}

/// Parses the word grammar:
///
/// ```text
/// word := term (WS+ term)* | ""
/// term := gen ("^" int)?
/// gen  := "A[" int "," int "]" | "rho[" int "]" | "tau[" int "]" | "s[" int "]"
/// ```
///
/// Leading and trailing whitespace is ignored.
pub fn parse_word(text: &str) -> Result<Word> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
    }
    .word()
}

/// `concat_reduce(u, v)`: concatenation followed by free reduction.
pub fn concat_reduce(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

pub fn invert(w: &Word) -> Word {
    w.inverse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.pos - start
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(format!("expected {lit:?}"))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.pos < self.src.len() && (self.src[self.pos] == b'-' || self.src[self.pos] == b'+') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<i64>().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    fn index(&mut self) -> Result<usize> {
        let start = self.pos;
        let v = self.int()?;
        if v < 1 {
            self.pos = start;
            return self.err("strand index must be >= 1");
        }
        Ok(v as usize)
    }

    fn gen(&mut self) -> Result<Generator> {
        let start = self.pos;
        let g = if self.eat("A[") {
            let i = self.index()?;
            self.expect(",")?;
            let j = self.index()?;
            self.expect("]")?;
            Generator::A(i, j)
        } else if self.eat("rho[") {
            let k = self.index()?;
            self.expect("]")?;
            Generator::Rho(k)
        } else if self.eat("tau[") {
            let k = self.index()?;
            self.expect("]")?;
            Generator::Tau(k)
        } else if self.eat("s[") {
            let k = self.index()?;
            self.expect("]")?;
            Generator::Sigma(k)
        } else {
            return self.err("expected generator");
        };
        if g.validate().is_err() {
            self.pos = start;
            return self.err(format!("invalid generator {g}: requires i < j"));
        }
        Ok(g)
    }

    fn word(mut self) -> Result<Word> {
        let mut w = Word::new();
        self.skip_ws();
        let mut first = true;
        while self.pos < self.src.len() {
            if !first && self.skip_ws() == 0 {
                return self.err("expected whitespace between terms");
            }
            if self.pos == self.src.len() {
                break;
            }
            first = false;
            let g = self.gen()?;
            let mut exp = 1;
            if self.eat("^") {
                let at = self.pos;
                exp = self.int()?;
                if exp == 0 {
                    self.pos = at;
                    return self.err("exponent must be nonzero");
                }
            }
            w.push(g, exp);
        }
        Ok(w)
    }
}
