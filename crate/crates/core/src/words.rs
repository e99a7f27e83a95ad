//! Words over an indexed alphabet, shortlex enumeration, and budgets.

use std::fmt;

/// A word is a sequence of symbol indices into some alphabet. The first
/// symbol of a word is the first input the system reads, and therefore the
/// first operator applied.
///
/// Symbols are stored compactly; alphabets are capped at `u16::MAX` symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Word(iter.into_iter().map(|s| s as u16).collect())
    }

    pub fn repeated(symbol: usize, count: usize) -> Self {
        Word(vec![symbol as u16; count])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&s| s as usize)
    }

    pub fn symbol(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// Word with `symbol` appended (read after everything in `self`).
    pub fn extended(&self, symbol: usize) -> Self {
        let mut v = self.0.clone();
        v.push(symbol as u16);
        Word(v)
    }

    pub fn concat(&self, tail: &Word) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&tail.0);
        Word(v)
    }

    /// The last `k` symbols (the whole word if shorter).
    pub fn suffix(&self, k: usize) -> Self {
        let start = self.0.len().saturating_sub(k);
        Word(self.0[start..].to_vec())
    }

    /// Render against an alphabet; the empty word prints as `ε`. Single-
    /// character symbols are concatenated, anything longer is dot-separated.
    pub fn display(&self, alphabet: &[String]) -> String {
        if self.0.is_empty() {
            return "ε".to_string();
        }
        let sep = if alphabet.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            "."
        };
        self.symbols()
            .map(|s| alphabet[s].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Number of words of length exactly `len` over `k` symbols, `None` on
/// overflow.
pub fn words_of_length_count(k: usize, len: usize) -> Option<u128> {
    (k as u128).checked_pow(u32::try_from(len).ok()?)
}

/// Number of words of length at most `max_len` over `k` symbols.
pub fn words_up_to_count(k: usize, max_len: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for len in 0..=max_len {
        total = total.checked_add(words_of_length_count(k, len)?)?;
    }
    Some(total)
}

/// Iterate all words of length exactly `len` over `k` symbols in
/// lexicographic order (symbol 0 first).
pub fn words_of_length(k: usize, len: usize) -> WordsOfLength {
    WordsOfLength {
        k,
        current: vec![0; len],
        done: k == 0 && len > 0,
        fresh: true,
    }
}

pub struct WordsOfLength {
    k: usize,
    current: Vec<u16>,
    done: bool,
    fresh: bool,
}

impl Iterator for WordsOfLength {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(Word(self.current.clone()));
        }
        // Odometer increment from the last position.
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if (self.current[i] as usize) + 1 < self.k {
                self.current[i] += 1;
                for slot in &mut self.current[i + 1..] {
                    *slot = 0;
                }
                return Some(Word(self.current.clone()));
            }
        }
    }
}
