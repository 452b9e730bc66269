//! Words in the generators i1, i2, i3, stored run-length encoded.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hermitian::HMatrix;
use crate::triangle::TriangleConfig;

/// A reduced word: syllables (generator, exponent) with exponent in [1, n-1]
/// and no two adjacent syllables on the same generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<(u8, u32)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn syllables(&self) -> &[(u8, u32)] {
        &self.0
    }

    /// Number of syllables. This is the length used by enumeration.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of letters, counting i2^2 as two.
    pub fn letters(&self) -> usize {
        self.0.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn uses(&self, g: u8) -> bool {
        self.0.iter().any(|&(h, _)| h == g)
    }

    /// Parses digit strings with optional caret exponents on the last digit of
    /// a token: "21212", "2^2 1", "12^-1". "Id" and "" are the identity.
    /// The result is not reduced; see [`reduce_word`].
    pub fn parse_letters(s: &str) -> Result<Vec<(u8, i64)>> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "Id" {
                continue;
            }
            let (digits, exp) = match tok.split_once('^') {
                Some((d, e)) => (d, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?),
                None => (tok, 1),
            };
            if digits.is_empty() {
                return Err(Error::Parse(format!("empty word token {tok:?}")));
            }
            let n = digits.len();
            for (i, ch) in digits.chars().enumerate() {
                let g = match ch {
                    '1' => 1,
                    '2' => 2,
                    '3' => 3,
                    _ => return Err(Error::Parse(format!("bad generator {ch:?} in {tok:?}"))),
                };
                out.push((g, if i + 1 == n { exp } else { 1 }));
            }
        }
        Ok(out)
    }

    pub fn parse(s: &str, orders: [u32; 3]) -> Result<Word> {
        Ok(reduce_word(&Word::parse_letters(s)?, orders))
    }

    /// Concatenation followed by reduction.
    pub fn concat(&self, other: &Word, orders: [u32; 3]) -> Word {
        let letters: Vec<(u8, i64)> = self.0.iter().chain(other.0.iter()).map(|&(g, e)| (g, e as i64)).collect();
        reduce_word(&letters, orders)
    }
}

impl fmt::Display for Word {
    /// Expanded digit string, "Id" for the empty word.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("Id");
        }
        for &(g, e) in &self.0 {
            for _ in 0..e {
                write!(f, "{g}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    /// Parses without reducing exponents modulo the orders (adjacent runs are merged).
    fn from_str(s: &str) -> Result<Word> {
        let big = [u32::MAX; 3];
        let letters = Word::parse_letters(s)?;
        if letters.iter().any(|&(_, e)| e < 0) {
            return Err(Error::Parse(format!("negative exponent needs orders: {s:?}")));
        }
        Ok(reduce_word(&letters, big))
    }
}

/// Normalises exponents into [1, n_k - 1] using i_k^n = 1 and merges runs.
pub fn reduce_word(letters: &[(u8, i64)], orders: [u32; 3]) -> Word {
    let mut out: Vec<(u8, u32)> = Vec::with_capacity(letters.len());
    for &(g, e) in letters {
        let n = orders[(g - 1) as usize] as i64;
        let mut e = e.rem_euclid(n);
        if let Some(&(h, f)) = out.last() {
            if h == g {
                out.pop();
                e = (e + f as i64).rem_euclid(n);
            }
        }
        if e != 0 {
            out.push((g, e as u32));
        }
    }
    Word(out)
}

/// Matrix product M_{a1} M_{a2} ... for the word i_{a1 a2 ...}.
pub fn eval_word(w: &Word, cfg: &TriangleConfig) -> HMatrix {
    let mut m = HMatrix::identity();
    for &(g, e) in &w.0 {
        let gm = cfg.gens[(g - 1) as usize];
        for _ in 0..e {
            m = m * gm;
        }
    }
    m
}

/// Image of 0 under the planar rotations: j_{a1}(j_{a2}(...(0))).
pub fn planar_image(w: &Word, cfg: &TriangleConfig, z: crate::hermitian::C64) -> Result<crate::hermitian::C64> {
    let mut z = z;
    for &(g, e) in w.0.iter().rev() {
        if g == 3 {
            return Err(Error::NotInE);
        }
        for _ in 0..e {
            z = cfg.planar(g, z);
        }
    }
    Ok(z)
}

/// Every reduced word over `gens` with at most `max_len` syllables, ordered by
/// length and then lexicographically on the syllables.
pub fn enumerate_words(gens: &[u8], max_len: usize, orders: [u32; 3]) -> WordIter {
    let mut gens: Vec<u8> = gens.to_vec();
    gens.sort_unstable();
    gens.dedup();
    WordIter { gens, orders, max_len, len: 0, level: vec![Word::identity()], idx: 0 }
}

pub struct WordIter {
    gens: Vec<u8>,
    orders: [u32; 3],
    max_len: usize,
    len: usize,
    level: Vec<Word>,
    idx: usize,
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        loop {
            if self.idx < self.level.len() {
                self.idx += 1;
                return Some(self.level[self.idx - 1].clone());
            }
            if self.len >= self.max_len || self.level.is_empty() {
                return None;
            }
            let mut next = Vec::new();
            for w in &self.level {
                let last = w.0.last().map(|&(g, _)| g);
                for &g in &self.gens {
                    if Some(g) == last {
                        continue;
                    }
                    for e in 1..self.orders[(g - 1) as usize] {
                        let mut v = w.0.clone();
                        v.push((g, e));
                        next.push(Word(v));
                    }
                }
            }
            self.level = next;
            self.len += 1;
            self.idx = 0;
        }
    }
}
