//! Matrix coefficients `F(w) = (Y(v_{H1}, x) v_{H2}, w)` of a would-be
//! intertwining operator, propagated from the lowest coefficient by the
//! cross-bracket recursion
//!
//! `F(L_T(-m) w) = F(L_T(0) w) - a2 F(w) + m a1 F(w)`,
//!
//! where `a1`, `a2` are the `L_T(0)` eigenvalues on `v_{H1}`, `v_{H2}`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::codes::{BinaryCode, Word};
use crate::error::{Error, Result};
use crate::lattice::{check_admissible, spanning_monomials, SpanningMonomial};
use crate::linalg;
use crate::rational::{int, is_integral, parse_rational, Rational};
use crate::tensor::{lt0_eigenvalue, HVector, IsingWeight, TensorModule, TensorVector};
use crate::virasoro::{monomials_at_level, shapovalov_gram, CentralParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSpec {
    pub h1: HVector,
    pub h2: HVector,
    pub h3: HVector,
    pub code: BinaryCode,
    pub lowest_coeff: Rational,
}

impl TripleSpec {
    pub fn new(h1: HVector, h2: HVector, h3: HVector, code: BinaryCode, lowest_coeff: Rational) -> Result<Self> {
        for h in [&h1, &h2, &h3] {
            check_admissible(&code, h)?;
        }
        Ok(Self {
            h1,
            h2,
            h3,
            code,
            lowest_coeff,
        })
    }

    /// `sum(H3) - sum(H1) - sum(H2)`: the power of `x` carried by the
    /// lowest coefficient.
    pub fn base_exponent(&self) -> Rational {
        self.h3.lowest_weight() - self.h1.lowest_weight() - self.h2.lowest_weight()
    }

    pub fn with_coeff(&self, c: Rational) -> Self {
        Self {
            lowest_coeff: c,
            ..self.clone()
        }
    }
}

/// One step of the recursion: `F(L_T(-m) w)` from `F(L_T(0) w)` and `F(w)`.
pub fn cross_bracket_step(m: u32, f_lt0_w: &Rational, f_w: &Rational, a1: &Rational, a2: &Rational) -> Rational {
    f_lt0_w - a2 * f_w + int(m as i64) * a1 * f_w
}

/// A word `L_{T1}(-n1) ... L_{Tk}(-nk)`, leftmost first; modes need not be
/// ordered.
pub type OpWord = Vec<(Word, u32)>;

type MemoKey = (Vec<Word>, OpWord);

/// Evaluates `F / c` on arbitrary words in the `L_T(-n)` and commuting
/// zero modes `L_S(0)`. Zero modes are pushed right with
/// `L_S(0) L_T(-n) = L_T(-n) L_S(0) + n L_{S+T}(-n)` until they reach
/// `v_{H3}`, where they act by eigenvalues. Labels are normalized with
/// `L_{T^c} = -L_T`.
pub struct Correlator {
    spec: TripleSpec,
    memo: HashMap<MemoKey, Rational>,
}

fn canonical(t: &Word) -> (Word, bool) {
    if t.contains(1) {
        (t.complement(), true)
    } else {
        (*t, false)
    }
}

impl Correlator {
    pub fn new(spec: TripleSpec) -> Self {
        Self {
            spec,
            memo: HashMap::new(),
        }
    }

    pub fn spec(&self) -> &TripleSpec {
        &self.spec
    }

    fn eigen(h: &HVector, t: &Word) -> Rational {
        lt0_eigenvalue(t, h).expect("labels have the module width")
    }

    /// `F(word v_{H3})` for the configured lowest coefficient.
    pub fn value(&mut self, word: &[(Word, u32)]) -> Rational {
        self.unit_value(word) * &self.spec.lowest_coeff
    }

    /// `F(word v_{H3})` for lowest coefficient 1.
    pub fn unit_value(&mut self, word: &[(Word, u32)]) -> Rational {
        let mut negative = false;
        let normalized: OpWord = word
            .iter()
            .map(|(t, n)| {
                let (c, flip) = canonical(t);
                negative ^= flip;
                (c, *n)
            })
            .collect();
        let v = self.eval(Vec::new(), normalized);
        if negative {
            -v
        } else {
            v
        }
    }

    // zero modes must be canonical and sorted; so must the word labels
    fn eval(&mut self, zeros: Vec<Word>, word: OpWord) -> Rational {
        if word.is_empty() {
            return zeros.iter().map(|s| Self::eigen(&self.spec.h3, s)).product();
        }
        let key = (zeros, word);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let (zeros, word) = key;
        let (t, n) = word[0];
        let rest: OpWord = word[1..].to_vec();
        let nr = int(n as i64);
        let mut total = Rational::zero();
        // choose the subset of zero modes that merge into the label
        for mask in 0u32..(1 << zeros.len()) {
            let mut label = t;
            let mut remaining = Vec::new();
            let mut factor = Rational::one();
            for (b, s) in zeros.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    label = label.sym_diff(s);
                    factor *= &nr;
                } else {
                    remaining.push(*s);
                }
            }
            let (label, flip) = canonical(&label);
            if flip {
                factor = -factor;
            }
            // F(L_label(-n) u) with u = remaining-zero-modes * rest
            let a1 = Self::eigen(&self.spec.h1, &label);
            let a2 = Self::eigen(&self.spec.h2, &label);
            let mut with_label = remaining.clone();
            with_label.push(label);
            with_label.sort();
            let f_lt0 = self.eval(with_label, rest.clone());
            let f_u = self.eval(remaining, rest.clone());
            total += factor * cross_bracket_step(n, &f_lt0, &f_u, &a1, &a2);
        }
        self.memo.insert((zeros, word), total.clone());
        total
    }
}

/// `F` on the spanning products of `W_{H3}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationFunctional {
    pub lowest_coeff: Rational,
    pub base_exponent: Rational,
    pub per_level: BTreeMap<usize, Vec<(SpanningMonomial, Rational)>>,
}

impl CorrelationFunctional {
    /// Exponent of `x` attached to level `k`.
    pub fn exponent(&self, level: usize) -> Rational {
        &self.base_exponent + int(level as i64)
    }
}

fn as_word(m: &SpanningMonomial) -> OpWord {
    m.factors.clone()
}

pub fn build_correlation(spec: &TripleSpec, max_level: usize) -> Result<CorrelationFunctional> {
    let mut corr = Correlator::new(spec.clone());
    let mut per_level = BTreeMap::new();
    for level in 0..=max_level {
        let monos = spanning_monomials(&spec.code, &spec.h3, level)?;
        let values = monos
            .into_iter()
            .map(|m| {
                let v = corr.value(&as_word(&m));
                (m, v)
            })
            .collect();
        per_level.insert(level, values);
    }
    Ok(CorrelationFunctional {
        lowest_coeff: spec.lowest_coeff.clone(),
        base_exponent: spec.base_exponent(),
        per_level,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelConsistency {
    pub level: usize,
    /// Straightened and reordered words evaluated.
    pub words: usize,
    /// One linear functional on `(W_{H3})_level` reproduces every value.
    pub order_independent: bool,
    pub radical_vectors: usize,
    pub radical_vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellDefinedReport {
    pub levels: Vec<LevelConsistency>,
}

impl WellDefinedReport {
    pub fn passes(&self) -> bool {
        self.levels.iter().all(|l| l.order_independent && l.radical_vanishes)
    }
}

fn distinct_permutations(items: &[(Word, u32)]) -> Vec<OpWord> {
    fn rec(remaining: &mut Vec<(Word, u32)>, prefix: &mut OpWord, out: &mut Vec<OpWord>) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        let mut seen: Vec<(Word, u32)> = Vec::new();
        for i in 0..remaining.len() {
            if seen.contains(&remaining[i]) {
                continue;
            }
            seen.push(remaining[i]);
            let x = remaining.remove(i);
            prefix.push(x);
            rec(remaining, prefix, out);
            prefix.pop();
            remaining.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut items.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Applies a word to `v_H`, rightmost operator first.
pub fn apply_word(module: &TensorModule, word: &[(Word, u32)]) -> Result<TensorVector> {
    let mut v = module.lowest();
    for (t, n) in word.iter().rev() {
        v = module.lt_action(t, -(*n as i64), &v)?;
    }
    Ok(v)
}

/// Words at `level` with every mode `>= 1` and labels from `reps`, in
/// every order: the checked set for order independence.
fn all_words(reps: &[Word], level: usize) -> Vec<OpWord> {
    let mut out = Vec::new();
    for parts in monomials_at_level(level) {
        let mut sorted: Vec<OpWord> = vec![Vec::new()];
        for (k, &p) in parts.parts().iter().enumerate() {
            let mut next = Vec::new();
            for w in &sorted {
                // equal modes commute: non-decreasing labels suffice here
                let start = if k > 0 && parts.parts()[k - 1] == p {
                    reps.iter().position(|r| *r == w[k - 1].0).unwrap()
                } else {
                    0
                };
                for r in &reps[start..] {
                    let mut w = w.clone();
                    w.push((*r, p));
                    next.push(w);
                }
            }
            sorted = next;
        }
        for w in sorted {
            out.extend(distinct_permutations(&w));
        }
    }
    out
}

/// (a) every reordering of every word, including those with `L_T(-1)` in
/// the vacuum, is consistent with one linear functional in the tensor
/// coordinates of `W_{H3}`; (b) `F` vanishes on the radical vectors of each
/// factor Verma module, written in the `L_T` through
/// `L^(i)(n) = (2/|C|) sum_{T ∈ C, i ∉ T} L_T(n)`, and on their images
/// under one `L^(j)(-1)` of another factor.
pub fn check_well_defined(spec: &TripleSpec, max_level: usize) -> Result<WellDefinedReport> {
    let module = TensorModule::new(spec.h3.clone());
    let reps = crate::codes::complement_reduce(&spec.code)?;
    let mut corr = Correlator::new(spec.clone());
    let mut levels = Vec::new();
    let radical = radical_words(spec, max_level);
    for level in 0..=max_level {
        let words = all_words(&reps, level);
        let mut rows = Vec::with_capacity(words.len());
        let mut rhs = Vec::with_capacity(words.len());
        for w in &words {
            rows.push(module.coordinates(&apply_word(&module, w)?));
            rhs.push(corr.unit_value(w));
        }
        let dim = module.dim(level);
        let order_independent = if level == 0 {
            true
        } else {
            linalg::solve(&rows, &rhs, dim).is_some()
        };
        let mut radical_vectors = 0;
        let mut radical_vanishes = true;
        for combo in radical.get(&level).into_iter().flatten() {
            radical_vectors += 1;
            let total: Rational = combo.iter().map(|(c, w)| c * corr.unit_value(w)).sum();
            if !total.is_zero() {
                radical_vanishes = false;
            }
        }
        levels.push(LevelConsistency {
            level,
            words: words.len(),
            order_independent,
            radical_vectors,
            radical_vanishes,
        });
    }
    Ok(WellDefinedReport { levels })
}

type Combination = Vec<(Rational, OpWord)>;

fn radical_words(spec: &TripleSpec, max_level: usize) -> BTreeMap<usize, Vec<Combination>> {
    let n = spec.h3.len();
    let size = spec.code.size() as i64;
    let scale = Rational::new(2.into(), size.into());
    // labels for L^(i): codewords avoiding i
    let avoiding: Vec<Vec<Word>> = (1..=n)
        .map(|i| spec.code.words().iter().filter(|w| !w.contains(i)).copied().collect())
        .collect();
    let expand = |i: usize, modes: &[u32]| -> Combination {
        let mut out: Combination = vec![(Rational::one(), Vec::new())];
        for &p in modes {
            let mut next = Vec::with_capacity(out.len() * avoiding[i].len());
            for (c, w) in &out {
                for t in &avoiding[i] {
                    let mut w = w.clone();
                    w.push((*t, p));
                    next.push((c * &scale, w));
                }
            }
            out = next;
        }
        out
    };
    let mut by_level: BTreeMap<usize, Vec<Combination>> = BTreeMap::new();
    let mut by_weight: HashMap<IsingWeight, Vec<usize>> = HashMap::new();
    for (i, w) in spec.h3.weights().iter().enumerate() {
        by_weight.entry(*w).or_default().push(i);
    }
    for (weight, factors) in by_weight {
        let params = CentralParams::ising(weight.value());
        for level in 1..=max_level {
            let monos = monomials_at_level(level);
            let gram = shapovalov_gram(&params, level);
            let kernel = linalg::nullspace(&gram, monos.len());
            for k in &kernel {
                for &i in &factors {
                    let mut combo = Combination::new();
                    for (c, m) in k.iter().zip(&monos) {
                        if c.is_zero() {
                            continue;
                        }
                        for (d, w) in expand(i, m.parts()) {
                            combo.push((c * d, w));
                        }
                    }
                    if level < max_level {
                        let j = (i + 1) % n;
                        let prefixed: Combination = expand(j, &[1])
                            .into_iter()
                            .flat_map(|(d, head)| {
                                combo.iter().map(move |(c, w)| {
                                    let mut word = head.clone();
                                    word.extend(w.iter().copied());
                                    (c * &d, word)
                                })
                            })
                            .collect();
                        by_level.entry(level + 1).or_default().push(prefixed);
                    }
                    by_level.entry(level).or_default().push(combo);
                }
            }
        }
    }
    by_level
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub integral: bool,
    /// First spanning product (by level, then enumeration order) whose value
    /// is not an integer.
    pub witness: Option<(SpanningMonomial, Rational)>,
}

pub fn integrality_verdict(spec: &TripleSpec, max_level: usize) -> Result<Verdict> {
    let f = build_correlation(spec, max_level)?;
    Ok(verdict_of(&f))
}

pub fn verdict_of(f: &CorrelationFunctional) -> Verdict {
    let witness = f.per_level.values().flatten().find(|(_, v)| !is_integral(v)).cloned();
    Verdict {
        integral: witness.is_none(),
        witness,
    }
}

pub type LowestTable = BTreeMap<(HVector, HVector, HVector), Rational>;

/// Reads a lowest-coefficient table: tab-separated `H1 H2 H3 c` lines,
/// `#` comments and blank lines ignored.
pub fn parse_lowest_table(text: &str) -> Result<LowestTable> {
    let mut table = LowestTable::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let cols: Vec<&str> = content.split('\t').map(str::trim).collect();
        if cols.len() != 4 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 4 tab-separated columns, found {}", cols.len()),
            });
        }
        let parse_h = |s: &str| -> Result<HVector> { s.parse().map_err(|e: Error| Error::Parse { line, msg: e.to_string() }) };
        let c = parse_rational(cols[3]).ok_or_else(|| Error::Parse {
            line,
            msg: format!("bad rational {:?}", cols[3]),
        })?;
        table.insert((parse_h(cols[0])?, parse_h(cols[1])?, parse_h(cols[2])?), c);
    }
    Ok(table)
}

/// Summands `W_H` with `H ∈ {0, 1/2}^n` of even half-support, multiplicity 1.
pub fn even_support_decomposition(n: usize) -> Vec<(HVector, usize)> {
    (0u64..(1 << n))
        .filter(|b| b.count_ones() % 2 == 0)
        .map(|b| (HVector::with_half_support(&Word::new(n, b).expect("n <= 64")), 1))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleResult {
    pub h1: HVector,
    pub h2: HVector,
    pub h3: HVector,
    pub coeff: Rational,
    pub entry_integral: bool,
    /// Recursion verdict through the cutoff; `None` for zero entries.
    pub verdict: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedReport {
    pub triples: Vec<TripleResult>,
    pub max_level: usize,
}

impl FramedReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.triples
            .iter()
            .all(|t| t.entry_integral && t.verdict.as_ref().is_none_or(|v| v.integral))
    }

    pub fn conclusion(&self) -> &'static str {
        if self.hypothesis_holds() {
            "integrality hypothesis satisfied: Y(u,x)v maps into V_C' (the dual form); V_C = V_C' is not claimed"
        } else {
            "integrality hypothesis fails for the flagged triples"
        }
    }
}

/// Checks every ordered triple of summands against the table.
pub fn framed_criterion(
    decomposition: &[(HVector, usize)],
    code: &BinaryCode,
    table: &LowestTable,
    max_level: usize,
) -> Result<FramedReport> {
    let hs: Vec<&HVector> = decomposition.iter().map(|(h, _)| h).collect();
    for h in &hs {
        check_admissible(code, h)?;
    }
    let mut triples = Vec::new();
    for a in &hs {
        for b in &hs {
            for c in &hs {
                let key = ((*a).clone(), (*b).clone(), (*c).clone());
                let coeff = table
                    .get(&key)
                    .cloned()
                    .ok_or_else(|| Error::MissingTableEntry(format!("({a}) x ({b}) -> ({c})")))?;
                let verdict = if coeff.is_zero() {
                    None
                } else {
                    let spec = TripleSpec::new(key.0.clone(), key.1.clone(), key.2.clone(), code.clone(), coeff.clone())?;
                    Some(integrality_verdict(&spec, max_level)?)
                };
                triples.push(TripleResult {
                    h1: key.0,
                    h2: key.1,
                    h3: key.2,
                    entry_integral: is_integral(&coeff),
                    coeff,
                    verdict,
                });
            }
        }
    }
    Ok(FramedReport { triples, max_level })
}
