//! Binary linear codes on `Omega = {1, ..., n}`, `n <= 64`, with codewords
//! stored as bitsets.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A subset of `{1, ..., n}`; element `i` is bit `i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    bits: u64,
    n: u8,
}

impl Word {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_len(n)?;
        if n < 64 && bits >> n != 0 {
            return Err(Error::WidthMismatch {
                expected: n,
                found: 64 - bits.leading_zeros() as usize,
            });
        }
        Ok(Self { bits, n: n as u8 })
    }

    pub fn empty(n: usize) -> Self {
        Self { bits: 0, n: n as u8 }
    }

    pub fn full(n: usize) -> Self {
        Self {
            bits: full_mask(n),
            n: n as u8,
        }
    }

    /// From 1-based element labels.
    pub fn from_elements(n: usize, elements: &[usize]) -> Result<Self> {
        check_len(n)?;
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::WidthMismatch { expected: n, found: e });
            }
            bits |= 1 << (e - 1);
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// From an `n`-character string of `0`/`1`, position 1 first.
    pub fn from_bitstring(s: &str) -> Option<Self> {
        let n = s.len();
        if n == 0 || n > 64 {
            return None;
        }
        let mut bits = 0u64;
        for (i, ch) in s.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => bits |= 1 << i,
                _ => return None,
            }
        }
        Some(Self { bits, n: n as u8 })
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.len()).map(|i| if self.bits >> i & 1 == 1 { '1' } else { '0' }).collect()
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == full_mask(self.len())
    }

    /// 1-based membership.
    pub fn contains(&self, element: usize) -> bool {
        element >= 1 && element <= self.len() && self.bits >> (element - 1) & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn elements(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.contains(i)).collect()
    }

    pub fn sym_diff(&self, other: &Word) -> Word {
        debug_assert_eq!(self.n, other.n);
        Word {
            bits: self.bits ^ other.bits,
            n: self.n,
        }
    }

    pub fn intersection_size(&self, other: &Word) -> usize {
        (self.bits & other.bits).count_ones() as usize
    }

    pub fn complement(&self) -> Word {
        Word {
            bits: !self.bits & full_mask(self.len()),
            n: self.n,
        }
    }

    /// Sort key realising lexicographic order on bitstrings.
    fn lex_key(&self) -> u64 {
        self.bits.reverse_bits()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.lex_key()).cmp(&(other.n, other.lex_key()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<String> = self.elements().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", els.join(","))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bitstring())
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 || n > 64 {
        Err(Error::UnsupportedLength(n))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    basis: Vec<Word>,
    words: Vec<Word>,
}

impl BinaryCode {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Reduced row-echelon basis over F2.
    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every codeword, in lexicographic bitstring order.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() == self.n && self.words.binary_search(w).is_ok()
    }

    pub fn contains_full_set(&self) -> bool {
        self.contains(&Word::full(self.n))
    }

    pub fn weight_distribution(&self) -> BTreeMap<usize, usize> {
        let mut d = BTreeMap::new();
        for w in &self.words {
            *d.entry(w.weight()).or_insert(0) += 1;
        }
        d
    }

    pub fn is_self_dual(&self) -> bool {
        dual(self) == *self
    }
}

/// F2-span of `generators`.
pub fn span(n: usize, generators: &[Word]) -> Result<BinaryCode> {
    check_len(n)?;
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(Error::WidthMismatch {
            expected: n,
            found: g.len(),
        });
    }
    // Gauss-Jordan on bit rows, pivoting on the lowest element first.
    let mut rows: Vec<u64> = Vec::new();
    for g in generators {
        let mut v = g.bits;
        for &r in &rows {
            let p = r.trailing_zeros();
            if v >> p & 1 == 1 {
                v ^= r;
            }
        }
        if v == 0 {
            continue;
        }
        let p = v.trailing_zeros();
        for r in rows.iter_mut() {
            if *r >> p & 1 == 1 {
                *r ^= v;
            }
        }
        rows.push(v);
    }
    rows.sort_by_key(|r| r.trailing_zeros());
    let basis: Vec<Word> = rows.iter().map(|&bits| Word { bits, n: n as u8 }).collect();
    let mut words: Vec<Word> = (0u64..1 << basis.len())
        .map(|mask| {
            let bits = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0u64, |acc, (_, w)| acc ^ w.bits);
            Word { bits, n: n as u8 }
        })
        .collect();
    words.sort();
    Ok(BinaryCode { n, basis, words })
}

/// Annihilator of `code` under `(S, T) -> |S ∩ T| mod 2`.
pub fn dual(code: &BinaryCode) -> BinaryCode {
    let n = code.n;
    // Solve basis * x = 0 over F2 using the reduced basis: pivot bits are
    // determined by the free bits.
    let pivots: Vec<u32> = code.basis.iter().map(|w| w.bits.trailing_zeros()).collect();
    let free: Vec<u32> = (0..n as u32).filter(|b| !pivots.contains(b)).collect();
    let generators: Vec<Word> = free
        .iter()
        .map(|&f| {
            let mut bits = 1u64 << f;
            for (row, &p) in code.basis.iter().zip(&pivots) {
                if row.bits >> f & 1 == 1 {
                    bits |= 1 << p;
                }
            }
            Word { bits, n: n as u8 }
        })
        .collect();
    span(n, &generators).expect("widths agree")
}

/// `n ∈ 4Z`, `Omega ∈ C` and every weight in `4Z`.
pub fn is_type_ii(code: &BinaryCode) -> bool {
    code.n.is_multiple_of(4) && code.contains_full_set() && code.words.iter().all(|w| w.weight().is_multiple_of(4))
}

pub fn even_code(n: usize) -> Result<BinaryCode> {
    check_len(n)?;
    if n < 2 {
        return Err(Error::Inadmissible("even code needs n >= 2".into()));
    }
    let gens: Vec<Word> = (1..n).map(|i| Word::from_elements(n, &[i, i + 1]).unwrap()).collect();
    span(n, &gens)
}

/// `{∅, Omega}`.
pub fn trivial_code(n: usize) -> Result<BinaryCode> {
    check_len(n)?;
    span(n, &[Word::full(n)])
}

const HAMMING_SETS: [[usize; 4]; 7] = [
    [1, 2, 3, 4],
    [1, 2, 5, 6],
    [1, 2, 7, 8],
    [1, 3, 5, 7],
    [2, 4, 5, 7],
    [2, 3, 6, 7],
    [2, 3, 5, 8],
];

/// The extended Hamming code on 8 points: the seven listed 4-sets, the empty
/// set, and their complements.
pub fn hamming8() -> BinaryCode {
    let mut gens: Vec<Word> = HAMMING_SETS.iter().map(|s| Word::from_elements(8, s).unwrap()).collect();
    gens.push(Word::full(8));
    span(8, &gens).unwrap()
}

/// The 32-word code on `Omega ∪ Omega'` (`Omega'` is elements 9..16)
/// generated by the doubles `T ∪ T'` of Hamming words and by `Omega'`.
pub fn c16() -> BinaryCode {
    let mut gens: Vec<Word> = hamming8()
        .basis
        .iter()
        .map(|t| Word {
            bits: t.bits | t.bits << 8,
            n: 16,
        })
        .collect();
    gens.push(Word { bits: 0xff00, n: 16 });
    span(16, &gens).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationWitness {
    pub i: usize,
    pub j: usize,
    /// A codeword containing `i` but not `j`.
    pub witness: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodformReport {
    pub n_div_4: bool,
    pub subset_of_even: bool,
    pub contains_omega: bool,
    pub separating: bool,
    pub witnesses: Vec<SeparationWitness>,
    pub failing_pair: Option<(usize, usize)>,
}

impl GoodformReport {
    pub fn passes(&self) -> bool {
        self.n_div_4 && self.subset_of_even && self.contains_omega && self.separating
    }
}

/// Checks the hypotheses for the code-generated integral form: `4 | n`,
/// every weight even, `Omega ∈ C`, and for all ordered pairs of distinct
/// `i, j` a codeword containing `i` but not `j` (the lightest such word, ties
/// broken lexicographically, is reported).
pub fn goodform_conditions(code: &BinaryCode) -> GoodformReport {
    let n = code.n;
    let mut by_weight = code.words.clone();
    by_weight.sort_by_key(|w| (w.weight(), *w));
    let mut witnesses = Vec::new();
    let mut failing_pair = None;
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            let witness = by_weight.iter().find(|w| w.contains(i) && !w.contains(j)).copied();
            if witness.is_none() && failing_pair.is_none() {
                failing_pair = Some((i, j));
            }
            witnesses.push(SeparationWitness { i, j, witness });
        }
    }
    GoodformReport {
        n_div_4: n.is_multiple_of(4),
        subset_of_even: code.words.iter().all(|w| w.weight() % 2 == 0),
        contains_omega: code.contains_full_set(),
        separating: failing_pair.is_none(),
        witnesses,
        failing_pair,
    }
}

/// One word from each `{T, T^c}` pair: the one not containing element 1.
pub fn complement_reduce(code: &BinaryCode) -> Result<Vec<Word>> {
    if !code.contains_full_set() {
        return Err(Error::MissingFullSet);
    }
    Ok(code.words.iter().filter(|w| !w.contains(1)).copied().collect())
}

/// Where a code comes from on the command line: a builtin name or a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSource {
    Even(usize),
    Trivial(usize),
    Hamming8,
    C16,
    File(String),
}

impl CodeSource {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = Error::InvalidInput;
        let size = |t: &str| -> Result<usize> { t.parse().map_err(|_| bad(format!("bad code size `{t}`"))) };
        Ok(match s {
            "hamming8" => CodeSource::Hamming8,
            "c16" => CodeSource::C16,
            _ => {
                if let Some(n) = s.strip_prefix("even:") {
                    CodeSource::Even(size(n)?)
                } else if let Some(n) = s.strip_prefix("trivial:") {
                    CodeSource::Trivial(size(n)?)
                } else {
                    CodeSource::File(s.to_string())
                }
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            CodeSource::Even(n) => format!("even:{n}"),
            CodeSource::Trivial(n) => format!("trivial:{n}"),
            CodeSource::Hamming8 => "hamming8".into(),
            CodeSource::C16 => "c16".into(),
            CodeSource::File(p) => p.clone(),
        }
    }

    /// Builds a builtin code, or parses `contents` for a file source.
    pub fn build_with(&self, read_file: impl FnOnce(&str) -> std::io::Result<String>) -> Result<BinaryCode> {
        match self {
            CodeSource::Even(n) => even_code(*n),
            CodeSource::Trivial(n) => trivial_code(*n),
            CodeSource::Hamming8 => Ok(hamming8()),
            CodeSource::C16 => Ok(c16()),
            CodeSource::File(path) => {
                let text = read_file(path).map_err(|e| Error::Io {
                    path: path.clone(),
                    msg: e.to_string(),
                })?;
                parse_code_file(&text)
            }
        }
    }
}

/// Parses the text code format: a `n=<int>` line followed by one 0/1 word
/// per line; `#` lines and blank lines are skipped. The code is the span of
/// the listed words.
pub fn parse_code_file(text: &str) -> Result<BinaryCode> {
    let mut n: Option<usize> = None;
    let mut words = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match n {
            None => {
                let v = line
                    .strip_prefix("n=")
                    .and_then(|t| t.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse {
                        line: line_no,
                        msg: format!("expected `n=<int>`, found `{line}`"),
                    })?;
                if v == 0 || v > 64 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("n={v} outside 1..=64"),
                    });
                }
                n = Some(v);
            }
            Some(n) => {
                let w = Word::from_bitstring(line).filter(|w| w.len() == n).ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("expected a {n}-character 0/1 word, found `{line}`"),
                })?;
                words.push(w);
            }
        }
    }
    let n = n.ok_or_else(|| Error::InvalidInput("missing `n=<int>` header".into()))?;
    span(n, &words)
}

pub fn format_code_file(code: &BinaryCode) -> String {
    let mut out = format!("n={}\n", code.n);
    for w in &code.words {
        out.push_str(&w.to_bitstring());
        out.push('\n');
    }
    out
}
