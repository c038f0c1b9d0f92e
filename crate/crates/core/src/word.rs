//! Finite prefixes of infinite binary words and their factor languages.
//!
//! Positions are 1-based everywhere: `w.window(i, k)` is the factor of
//! length `k` starting at the `i`-th letter.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fib;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Symbol {
    Zero = 0,
    One = 1,
}

impl Symbol {
    pub fn complement(self) -> Self {
        match self {
            Symbol::Zero => Symbol::One,
            Symbol::One => Symbol::Zero,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
        }
    }
}

impl TryFrom<char> for Symbol {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            '0' => Ok(Symbol::Zero),
            '1' => Ok(Symbol::One),
            other => Err(Error::InvalidSymbol(other)),
        }
    }
}

/// A finite binary word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn complement(&self) -> Word {
        Word(self.0.iter().map(|s| s.complement()).collect())
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl std::borrow::Borrow<[Symbol]> for Word {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars().map(Symbol::try_from).collect::<Result<Vec<_>>>().map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.0)
    }
}

fn write_symbols(f: &mut fmt::Formatter<'_>, symbols: &[Symbol]) -> fmt::Result {
    use fmt::Write;
    for s in symbols {
        f.write_char(s.as_char())?;
    }
    Ok(())
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Where a prefix came from. Determines how long a prefix must be before
/// every factor of a given length has appeared in it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Source {
    Fibonacci,
    FibonacciComplement,
    ThueMorse,
    Periodic(Word),
    Literal(Word),
}

impl Source {
    /// Prefix length after which all length-`k` factors of the source have
    /// been seen. For a literal word this is the word itself.
    pub fn sufficient_len(&self, k: usize) -> usize {
        match self {
            Source::Fibonacci | Source::FibonacciComplement => prefix_policy(k),
            Source::ThueMorse => 8 * k.max(1).next_power_of_two(),
            Source::Periodic(x) => {
                let p = x.len().max(1);
                (k + p - 1).div_ceil(p).max(1) * p
            }
            Source::Literal(w) => w.len(),
        }
    }

    /// Generates a prefix of length at least `min_len`. Literal sources
    /// return the literal word unchanged.
    pub fn prefix(&self, min_len: usize) -> Result<WordPrefix> {
        let min_len = min_len.max(1);
        match self {
            Source::Fibonacci => Ok(fibonacci_prefix(min_len)),
            Source::FibonacciComplement => Ok(complement(&fibonacci_prefix(min_len))),
            Source::ThueMorse => Ok(thue_morse_prefix(min_len)),
            Source::Periodic(x) => periodic_prefix(x, min_len),
            Source::Literal(w) => Ok(WordPrefix::new(w.to_vec(), self.clone())),
        }
    }

    /// A prefix long enough to contain every factor of length `k`.
    pub fn prefix_for_factors(&self, k: usize) -> Result<WordPrefix> {
        self.prefix(self.sufficient_len(k))
    }

    pub fn is_fibonacci_family(&self) -> bool {
        matches!(self, Source::Fibonacci | Source::FibonacciComplement)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Fibonacci => f.write_str("fibonacci"),
            Source::FibonacciComplement => f.write_str("fibonacci-c"),
            Source::ThueMorse => f.write_str("thue-morse"),
            Source::Periodic(x) => write!(f, "periodic:{x}"),
            Source::Literal(w) => write!(f, "literal:{w}"),
        }
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let nonempty = |w: &str| -> Result<Word> {
            let word: Word = w.parse()?;
            if word.is_empty() {
                return Err(Error::EmptyWord);
            }
            Ok(word)
        };
        match s {
            "fibonacci" => Ok(Source::Fibonacci),
            "fibonacci-c" => Ok(Source::FibonacciComplement),
            "thue-morse" => Ok(Source::ThueMorse),
            _ => {
                if let Some(x) = s.strip_prefix("periodic:") {
                    Ok(Source::Periodic(nonempty(x)?))
                } else if let Some(w) = s.strip_prefix("literal:") {
                    Ok(Source::Literal(nonempty(w)?))
                } else {
                    Err(Error::UnknownSource(s.to_string()))
                }
            }
        }
    }
}

impl Serialize for Source {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finite prefix of an infinite word, tagged with its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordPrefix {
    symbols: Vec<Symbol>,
    source: Source,
}

impl WordPrefix {
    pub fn new(symbols: Vec<Symbol>, source: Source) -> Self {
        WordPrefix { symbols, source }
    }

    pub fn literal(word: Word) -> Self {
        WordPrefix {
            symbols: word.to_vec(),
            source: Source::Literal(word),
        }
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The letter `w_i`, 1-based.
    pub fn letter(&self, i: usize) -> Option<Symbol> {
        i.checked_sub(1).and_then(|i| self.symbols.get(i).copied())
    }

    /// `w[i; k]`: the factor of length `k` starting at 1-based position `i`.
    pub fn window(&self, i: usize, k: usize) -> Option<&[Symbol]> {
        let start = i.checked_sub(1)?;
        self.symbols.get(start..start.checked_add(k)?)
    }

    pub fn to_word(&self) -> Word {
        Word(self.symbols.clone())
    }

    /// Errors unless this prefix contains every factor of length `k` of its
    /// source.
    pub fn ensure_covers(&self, k: usize) -> Result<()> {
        let need = self.source.sufficient_len(k).max(k);
        if self.len() < need {
            return Err(Error::InsufficientPrefix {
                have: self.len(),
                need,
            });
        }
        Ok(())
    }
}

impl fmt::Display for WordPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.symbols)
    }
}

/// Prefix length that exposes every length-`k` factor of the Fibonacci
/// word: `F_{n+2} + k`, where `F_{n+1}` is the least Fibonacci number
/// exceeding `k`.
pub fn prefix_policy(k: usize) -> usize {
    let mut idx = 1;
    while fib::fib_usize(idx).is_some_and(|v| v <= k) {
        idx += 1;
    }
    fib::fib_usize(idx + 1)
        .and_then(|v| v.checked_add(k))
        .unwrap_or(usize::MAX)
}

/// `g_n` for the smallest `n >= 1` with `F_n >= min_len`, built by the
/// recurrence `g_n = g_{n-1} g_{n-2}` from `g_1 = 0`, `g_2 = 01`.
pub fn fibonacci_prefix(min_len: usize) -> WordPrefix {
    if min_len <= 1 {
        return WordPrefix::new(vec![Symbol::Zero], Source::Fibonacci);
    }
    let mut cur = vec![Symbol::Zero, Symbol::One];
    let mut prev_len = 1; // |g_1|
    while cur.len() < min_len {
        // g_{n-1} is a prefix of g_n, so g_{n-2} = cur[..prev_len].
        let len = cur.len();
        cur.extend_from_within(..prev_len);
        prev_len = len;
    }
    WordPrefix::new(cur, Source::Fibonacci)
}

/// Iterates `0 -> 01, 1 -> 0` from the seed `0` until the length reaches
/// `min_len`.
pub fn fibonacci_prefix_by_morphism(min_len: usize) -> WordPrefix {
    let mut cur = vec![Symbol::Zero];
    while cur.len() < min_len {
        let mut next = Vec::with_capacity(cur.len() * 2);
        for s in &cur {
            match s {
                Symbol::Zero => next.extend([Symbol::Zero, Symbol::One]),
                Symbol::One => next.push(Symbol::Zero),
            }
        }
        cur = next;
    }
    WordPrefix::new(cur, Source::Fibonacci)
}

/// `⌊nτ⌋` for `τ = (√5 − 1)/2`, exactly.
///
/// `nτ = (√(5n²) − n)/2`, and flooring commutes with the integer parts
/// because `√(5n²)` is irrational for `n >= 1`.
pub fn floor_tau(n: u64) -> u64 {
    let n = u128::from(n);
    let root = (5 * n * n).isqrt();
    ((root - n) / 2) as u64
}

/// The `n`-th letter of the Fibonacci word from the Beatty difference
/// `⌊(n+1)τ⌋ − ⌊nτ⌋`: `1` when it is zero, `0` otherwise.
pub fn letter_at(n: u64) -> Symbol {
    debug_assert!(n >= 1);
    if floor_tau(n + 1) == floor_tau(n) {
        Symbol::One
    } else {
        Symbol::Zero
    }
}

pub fn complement(w: &WordPrefix) -> WordPrefix {
    let symbols: Vec<Symbol> = w.symbols.iter().map(|s| s.complement()).collect();
    let source = match &w.source {
        Source::Fibonacci => Source::FibonacciComplement,
        Source::FibonacciComplement => Source::Fibonacci,
        Source::Periodic(x) => Source::Periodic(x.complement()),
        Source::Literal(_) | Source::ThueMorse => Source::Literal(Word(symbols.clone())),
    };
    WordPrefix::new(symbols, source)
}

/// Whole repetitions of `x` covering at least `min_len` symbols.
pub fn periodic_prefix(x: &Word, min_len: usize) -> Result<WordPrefix> {
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    let reps = min_len.div_ceil(x.len()).max(1);
    Ok(WordPrefix::new(x.repeat(reps), Source::Periodic(x.clone())))
}

/// Thue–Morse prefix from `0 -> 01, 1 -> 10`, seed `0`.
pub fn thue_morse_prefix(min_len: usize) -> WordPrefix {
    let mut cur = vec![Symbol::Zero];
    while cur.len() < min_len {
        let tail: Vec<Symbol> = cur.iter().map(|s| s.complement()).collect();
        cur.extend(tail);
    }
    WordPrefix::new(cur, Source::ThueMorse)
}

/// The distinct length-`k` factors of a prefix, in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    k: usize,
    factors: Vec<Word>,
    first_occurrence: Vec<usize>,
    index: HashMap<Word, usize>,
}

impl FactorSet {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[Word] {
        &self.factors
    }

    pub fn first_occurrences(&self) -> &[usize] {
        &self.first_occurrence
    }

    /// 1-based: `get(j)` is `v_j`.
    pub fn get(&self, j: usize) -> Option<&Word> {
        j.checked_sub(1).and_then(|i| self.factors.get(i))
    }

    /// 0-based index of `u` in first-occurrence order.
    pub fn index_of(&self, u: &[Symbol]) -> Option<usize> {
        self.index.get(u).copied()
    }

    pub fn contains(&self, u: &[Symbol]) -> bool {
        self.index.contains_key(u)
    }

    pub fn first_occurrence_of(&self, u: &[Symbol]) -> Option<usize> {
        self.index_of(u).map(|i| self.first_occurrence[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, usize)> {
        self.factors.iter().zip(self.first_occurrence.iter().copied())
    }
}

impl Serialize for FactorSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            factor: &'a Word,
            first_occurrence: usize,
        }
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for (factor, first_occurrence) in self.iter() {
            seq.serialize_element(&Entry {
                factor,
                first_occurrence,
            })?;
        }
        seq.end()
    }
}

pub fn factors(w: &WordPrefix, k: usize) -> Result<FactorSet> {
    if k == 0 || k > w.len() {
        return Err(Error::FactorLength { k, len: w.len() });
    }
    let mut index: HashMap<Word, usize> = HashMap::new();
    let mut factors = Vec::new();
    let mut first_occurrence = Vec::new();
    let mut seen: HashMap<&[Symbol], ()> = HashMap::new();
    for (i, window) in w.symbols.windows(k).enumerate() {
        if seen.insert(window, ()).is_none() {
            let word = Word::from(window);
            index.insert(word.clone(), factors.len());
            factors.push(word);
            first_occurrence.push(i + 1);
        }
    }
    Ok(FactorSet {
        k,
        factors,
        first_occurrence,
        index,
    })
}

/// All 1-based positions of `u` in a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccurrenceList {
    pub factor: Word,
    pub positions: Vec<usize>,
}

/// Knuth–Morris–Pratt scan; overlapping occurrences are all reported.
pub fn occurrences(w: &WordPrefix, u: &[Symbol]) -> OccurrenceList {
    let factor = Word::from(u);
    let text = w.symbols();
    if u.is_empty() || u.len() > text.len() {
        return OccurrenceList {
            factor,
            positions: Vec::new(),
        };
    }
    let mut border = vec![0usize; u.len()];
    let mut b = 0;
    for i in 1..u.len() {
        while b > 0 && u[i] != u[b] {
            b = border[b - 1];
        }
        if u[i] == u[b] {
            b += 1;
        }
        border[i] = b;
    }
    let mut positions = Vec::new();
    let mut q = 0;
    for (i, &s) in text.iter().enumerate() {
        while q > 0 && s != u[q] {
            q = border[q - 1];
        }
        if s == u[q] {
            q += 1;
        }
        if q == u.len() {
            positions.push(i + 2 - u.len());
            q = border[q - 1];
        }
    }
    OccurrenceList { factor, positions }
}
