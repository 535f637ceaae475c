//! Finite words over `{0, ..., d-1}` labeling cylinder intervals.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// An itinerary `i_0 i_1 ... i_{n-1}`; its length is the partition level.
///
/// Displayed as concatenated digits when every symbol is below 10 and as
/// dot-separated numbers otherwise.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(symbols: Vec<u32>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The constant word `s s ... s` of length `n`.
    pub fn repeat(symbol: u32, n: usize) -> Self {
        Word(alloc::vec![symbol; n])
    }

    /// The `index`-th word of length `level` in left-to-right cylinder order
    /// (base-`degree` digits, most significant first).
    pub fn from_index(mut index: usize, degree: u32, level: usize) -> Self {
        let d = degree as usize;
        let mut symbols = alloc::vec![0; level];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % d) as u32;
            index /= d;
        }
        Word(symbols)
    }

    /// Inverse of [`Word::from_index`].
    pub fn index(&self, degree: u32) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &s| acc * degree as usize + s as usize)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, symbol: u32) {
        self.0.push(symbol);
    }

    /// `w` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    /// `σ`: drops the first symbol.
    pub fn left_shift(&self) -> Result<Word> {
        match self.0.split_first() {
            Some((_, rest)) => Ok(Word(rest.to_vec())),
            None => Err(Error::EmptyWord),
        }
    }

    /// `σ*`: drops the last symbol.
    pub fn drop_last(&self) -> Result<Word> {
        match self.0.split_last() {
            Some((_, rest)) => Ok(Word(rest.to_vec())),
            None => Err(Error::EmptyWord),
        }
    }

    pub fn check_degree(&self, degree: u32) -> Result<()> {
        match self.0.iter().find(|&&s| s >= degree) {
            Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, degree }),
            None => Ok(()),
        }
    }
}

impl From<Vec<u32>> for Word {
    fn from(symbols: Vec<u32>) -> Self {
        Word(symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
        } else {
            for (i, s) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(".")?;
                }
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('.') {
            s.split('.')
                .map(|part| part.parse::<u32>().map_err(|_| Error::BadWord(String::from(s))))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::BadWord(String::from(s))))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        }
    }
}
