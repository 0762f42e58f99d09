//! Free-group letters and cyclic words.
//!
//! A closed curve is represented by a cyclically reduced word over the edge
//! labels of a ribbon graph. Words compare as cyclic words up to rotation;
//! unoriented comparison (rotation and inversion) is a separate mode.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed exponent in term `{0}`")]
    MalformedExponent(String),
    #[error("malformed term `{0}`")]
    MalformedTerm(String),
    #[error("word is null-homotopic (reduces to the empty word)")]
    NullHomotopic,
}

/// A generator or its inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: String,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: impl Into<String>, inverse: bool) -> Self {
        Letter { gen: gen.into(), inverse }
    }

    pub fn inv(&self) -> Letter {
        Letter { gen: self.gen.clone(), inverse: !self.inverse }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

/// Parse a linear word. Grammar: whitespace-separated terms,
/// `term := ident ('^' signed-integer)?`; an ident whose first character is
/// uppercase denotes the inverse of the lowercased generator.
pub fn parse_word(text: &str, alphabet: &BTreeSet<String>) -> Result<Vec<Letter>, WordError> {
    let mut out = Vec::new();
    for term in text.split_whitespace() {
        let (ident, exp) = match term.split_once('^') {
            Some((i, e)) => {
                let exp: i64 = e
                    .parse()
                    .map_err(|_| WordError::MalformedExponent(term.to_string()))?;
                (i, exp)
            }
            None => (term, 1),
        };
        if ident.is_empty() {
            return Err(WordError::MalformedTerm(term.to_string()));
        }
        let first = ident.chars().next().unwrap();
        let (gen, mut inverse) = if first.is_uppercase() {
            let mut g = first.to_lowercase().to_string();
            g.push_str(&ident[first.len_utf8()..]);
            (g, true)
        } else {
            (ident.to_string(), false)
        };
        if !alphabet.contains(&gen) {
            return Err(WordError::UnknownGenerator(gen));
        }
        let mut count = exp;
        if count < 0 {
            inverse = !inverse;
            count = -count;
        }
        for _ in 0..count {
            out.push(Letter::new(gen.clone(), inverse));
        }
    }
    Ok(out)
}

/// A nonempty cyclically reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicWord {
    letters: Vec<Letter>,
}

impl CyclicWord {
    /// Free reduction followed by wrap-around reduction.
    pub fn reduce(word: &[Letter]) -> Result<CyclicWord, WordError> {
        let mut stack: Vec<Letter> = Vec::with_capacity(word.len());
        for l in word {
            if stack.last().is_some_and(|t| t.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l.clone());
            }
        }
        let mut lo = 0;
        let mut hi = stack.len();
        while hi - lo >= 2 && stack[lo].cancels(&stack[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        let letters: Vec<Letter> = stack[lo..hi].to_vec();
        if letters.is_empty() {
            return Err(WordError::NullHomotopic);
        }
        Ok(CyclicWord { letters })
    }

    pub fn from_letters(letters: Vec<Letter>) -> Result<CyclicWord, WordError> {
        Self::reduce(&letters)
    }

    pub fn parse(text: &str, alphabet: &BTreeSet<String>) -> Result<CyclicWord, WordError> {
        Self::reduce(&parse_word(text, alphabet)?)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rotated(&self, by: usize) -> CyclicWord {
        let n = self.letters.len();
        let mut letters = Vec::with_capacity(n);
        for i in 0..n {
            letters.push(self.letters[(i + by) % n].clone());
        }
        CyclicWord { letters }
    }

    pub fn inverse(&self) -> CyclicWord {
        let letters: Vec<Letter> = self.letters.iter().rev().map(Letter::inv).collect();
        CyclicWord { letters }
    }

    /// True iff no proper rotation equals the word itself.
    pub fn is_primitive(&self) -> bool {
        let n = self.letters.len();
        for t in 1..n {
            if n % t == 0 && self.rotated(t).letters == self.letters {
                return false;
            }
        }
        true
    }

    /// Equality as cyclic words (up to rotation).
    pub fn cyclic_eq(&self, other: &CyclicWord) -> bool {
        if self.letters.len() != other.letters.len() {
            return false;
        }
        let n = self.letters.len();
        (0..n).any(|t| self.rotated(t).letters == other.letters)
    }

    /// Equality of free homotopy classes of unoriented curves
    /// (up to rotation and inversion).
    pub fn unoriented_eq(&self, other: &CyclicWord) -> bool {
        self.cyclic_eq(other) || self.inverse().cyclic_eq(other)
    }

    /// Lexicographically minimal rotation, used as a canonical form.
    pub fn canonical(&self) -> CyclicWord {
        let n = self.letters.len();
        (0..n).map(|t| self.rotated(t)).min_by(|a, b| a.letters.cmp(&b.letters)).unwrap()
    }

    /// Exponent sum per generator (first homology coordinates).
    pub fn homology(&self) -> BTreeMap<String, i64> {
        let mut m = BTreeMap::new();
        for l in &self.letters {
            *m.entry(l.gen.clone()).or_insert(0) += if l.inverse { -1 } else { 1 };
        }
        m
    }
}

impl fmt::Display for CyclicWord {
    /// Canonical printing: lowercase generators with caret exponents,
    /// runs grouped, e.g. `a b^3` or `a b^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls = &self.letters;
        let mut i = 0;
        let mut first = true;
        while i < ls.len() {
            let mut j = i + 1;
            while j < ls.len() && ls[j] == ls[i] {
                j += 1;
            }
            let run = (j - i) as i64;
            let exp = if ls[i].inverse { -run } else { run };
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if exp == 1 {
                write!(f, "{}", ls[i].gen)?;
            } else {
                write!(f, "{}^{}", ls[i].gen, exp)?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Apply a substitution homomorphism and cyclically reduce the image.
pub fn substitute(
    w: &CyclicWord,
    map: &BTreeMap<String, Vec<Letter>>,
) -> Result<CyclicWord, WordError> {
    let mut image = Vec::new();
    for l in w.letters() {
        match map.get(&l.gen) {
            Some(img) => {
                if l.inverse {
                    image.extend(img.iter().rev().map(Letter::inv));
                } else {
                    image.extend(img.iter().cloned());
                }
            }
            None => image.push(l.clone()),
        }
    }
    CyclicWord::reduce(&image)
}
