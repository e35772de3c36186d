//! Tensor products `W_H = L(1/2, h_1) ⊗ ... ⊗ L(1/2, h_N)` and the mode
//! operators `L^(i)(n)` and `L_T(n)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::codes::Word;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{int, parse_rational, rat, Rational};
use crate::virasoro::{CentralParams, IrreducibleModule};

/// Lowest weight of an irreducible `L(1/2, 0)`-module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IsingWeight {
    Zero,
    Half,
    Sixteenth,
}

impl IsingWeight {
    pub fn value(self) -> Rational {
        match self {
            IsingWeight::Zero => int(0),
            IsingWeight::Half => rat(1, 2),
            IsingWeight::Sixteenth => rat(1, 16),
        }
    }

    pub fn from_value(q: &Rational) -> Option<Self> {
        [IsingWeight::Zero, IsingWeight::Half, IsingWeight::Sixteenth]
            .into_iter()
            .find(|w| w.value() == *q)
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for IsingWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IsingWeight::Zero => "0",
            IsingWeight::Half => "1/2",
            IsingWeight::Sixteenth => "1/16",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HVector(Vec<IsingWeight>);

impl HVector {
    pub fn new(weights: Vec<IsingWeight>) -> Result<Self> {
        if weights.is_empty() || weights.len() > 64 {
            return Err(Error::UnsupportedLength(weights.len()));
        }
        Ok(Self(weights))
    }

    pub fn vacuum(n: usize) -> Self {
        Self(vec![IsingWeight::Zero; n])
    }

    pub fn uniform(n: usize, w: IsingWeight) -> Self {
        Self(vec![w; n])
    }

    /// Weights `1/2` on `support`, `0` elsewhere.
    pub fn with_half_support(support: &Word) -> Self {
        Self(
            (1..=support.len())
                .map(|i| {
                    if support.contains(i) {
                        IsingWeight::Half
                    } else {
                        IsingWeight::Zero
                    }
                })
                .collect(),
        )
    }

    pub fn weights(&self) -> &[IsingWeight] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lowest_weight(&self) -> Rational {
        self.0.iter().map(|w| w.value()).sum()
    }

    /// Positions carrying `1/2`.
    pub fn support(&self) -> Word {
        let els: Vec<usize> = (1..=self.len()).filter(|&i| self.0[i - 1] == IsingWeight::Half).collect();
        Word::from_elements(self.len(), &els).expect("length checked on construction")
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.iter().all(|&w| w == IsingWeight::Zero)
    }

    pub fn is_zero_half(&self) -> bool {
        self.0.iter().all(|&w| w != IsingWeight::Sixteenth)
    }

    pub fn is_all_sixteenth(&self) -> bool {
        self.0.iter().all(|&w| w == IsingWeight::Sixteenth)
    }
}

impl FromStr for HVector {
    type Err = Error;

    /// Comma-separated weights from `{0, 1/2, 1/16}` (decimal forms accepted).
    fn from_str(s: &str) -> Result<Self> {
        let weights = s
            .split(',')
            .map(|tok| {
                parse_rational(tok)
                    .and_then(|q| IsingWeight::from_value(&q))
                    .ok_or_else(|| Error::InvalidInput(format!("`{}` is not one of 0, 1/2, 1/16", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        HVector::new(weights)
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for HVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Shared `L(1/2, h)` modules for the three Ising weights.
pub fn ising_factor(w: IsingWeight) -> Arc<IrreducibleModule> {
    static FACTORS: OnceLock<[Arc<IrreducibleModule>; 3]> = OnceLock::new();
    let all = FACTORS.get_or_init(|| {
        [IsingWeight::Zero, IsingWeight::Half, IsingWeight::Sixteenth]
            .map(|w| Arc::new(IrreducibleModule::new(CentralParams::ising(w.value()))))
    });
    all[w.slot()].clone()
}

/// Level and pivot index of one tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorCoord {
    pub level: u16,
    pub index: u16,
}

pub type BasisKey = Vec<FactorCoord>;

/// Homogeneous element of some `W_H`, in the product of the factor pivot
/// bases. Zero coefficients are never stored. Zero vectors compare equal
/// whatever level they are tagged with.
#[derive(Debug, Clone, Eq)]
pub struct TensorVector {
    level: usize,
    terms: BTreeMap<BasisKey, Rational>,
}

impl PartialEq for TensorVector {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (self.level == other.level || self.terms.is_empty())
    }
}

impl TensorVector {
    pub fn zero(level: usize) -> Self {
        Self {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &BasisKey) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, key: BasisKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c * other`; levels must agree unless one side is zero.
    pub fn add_scaled(&mut self, other: &TensorVector, c: &Rational) {
        if other.is_zero() || c.is_zero() {
            return;
        }
        if self.is_zero() {
            self.level = other.level;
        }
        debug_assert_eq!(self.level, other.level);
        for (k, x) in &other.terms {
            self.add_term(k.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> TensorVector {
        let mut out = TensorVector::zero(self.level);
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &TensorVector) -> TensorVector {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn minus(&self, other: &TensorVector) -> TensorVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }
}

/// Ordered basis of one level of `W_H`.
#[derive(Debug)]
pub struct LevelBasis {
    keys: Vec<BasisKey>,
    index: HashMap<BasisKey, usize>,
}

impl LevelBasis {
    pub fn keys(&self) -> &[BasisKey] {
        &self.keys
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn position(&self, key: &BasisKey) -> Option<usize> {
        self.index.get(key).copied()
    }
}

/// The module `W_H`.
#[derive(Debug)]
pub struct TensorModule {
    h: HVector,
    factors: Vec<Arc<IrreducibleModule>>,
    levels: Mutex<HashMap<usize, Arc<LevelBasis>>>,
}

impl TensorModule {
    pub fn new(h: HVector) -> Self {
        let factors = h.weights().iter().map(|&w| ising_factor(w)).collect();
        Self {
            h,
            factors,
            levels: Mutex::new(HashMap::new()),
        }
    }

    pub fn h(&self) -> &HVector {
        &self.h
    }

    pub fn power(&self) -> usize {
        self.h.len()
    }

    pub fn factor(&self, i: usize) -> &IrreducibleModule {
        &self.factors[i]
    }

    /// `v_H`.
    pub fn lowest(&self) -> TensorVector {
        let mut v = TensorVector::zero(0);
        v.add_term(vec![FactorCoord { level: 0, index: 0 }; self.power()], Rational::one());
        v
    }

    /// Basis keys of a level: compositions of the level across factors in
    /// lexicographic order of the per-factor levels, then pivot indices.
    pub fn level_basis(&self, level: usize) -> Arc<LevelBasis> {
        if let Some(b) = self.levels.lock().unwrap().get(&level) {
            return b.clone();
        }
        let dims: Vec<Vec<usize>> = self.factors.iter().map(|f| (0..=level).map(|l| f.dim(l)).collect()).collect();
        let mut keys = Vec::new();
        let mut current = Vec::with_capacity(self.power());
        enumerate_keys(&dims, level, &mut current, &mut keys);
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let basis = Arc::new(LevelBasis { keys, index });
        self.levels.lock().unwrap().entry(level).or_insert(basis).clone()
    }

    pub fn dim(&self, level: usize) -> usize {
        self.level_basis(level).dim()
    }

    pub fn coordinates(&self, v: &TensorVector) -> Vec<Rational> {
        let basis = self.level_basis(v.level());
        let mut out = vec![Rational::zero(); basis.dim()];
        for (k, c) in v.terms() {
            let i = basis.position(k).expect("vector keys belong to the level basis");
            out[i] = c.clone();
        }
        out
    }

    pub fn from_coordinates(&self, level: usize, coords: &[Rational]) -> TensorVector {
        let basis = self.level_basis(level);
        let mut v = TensorVector::zero(level);
        for (k, c) in basis.keys().iter().zip(coords) {
            v.add_term(k.clone(), c.clone());
        }
        v
    }

    /// Basis vector number `i` of a level.
    pub fn basis_vector(&self, level: usize, i: usize) -> TensorVector {
        let mut v = TensorVector::zero(level);
        v.add_term(self.level_basis(level).keys()[i].clone(), Rational::one());
        v
    }

    /// `L^(i)(m) v` for a 0-based factor index.
    pub fn factor_mode(&self, i: usize, m: i64, v: &TensorVector) -> TensorVector {
        let mut coeffs = vec![Rational::zero(); self.power()];
        coeffs[i] = Rational::one();
        self.combined_mode(&coeffs, m, v)
    }

    /// `sum_i coeffs[i] L^(i)(m) v`: the `m`-th mode of the weight-2 vector
    /// `sum_i coeffs[i] omega^(i)`.
    pub fn combined_mode(&self, coeffs: &[Rational], m: i64, v: &TensorVector) -> TensorVector {
        let target = v.level() as i64 - m;
        if target < 0 {
            return TensorVector::zero(0);
        }
        let mut out = TensorVector::zero(target as usize);
        for (key, c) in v.terms() {
            for (i, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let FactorCoord { level, index } = key[i];
                let image = self.factors[i].action(m, level as usize, index as usize);
                if image.is_empty() {
                    continue;
                }
                let scale = c * a;
                let new_level = (level as i64 - m) as u16;
                for (j, x) in image.iter() {
                    let mut k = key.clone();
                    k[i] = FactorCoord {
                        level: new_level,
                        index: *j as u16,
                    };
                    out.add_term(k, &scale * x);
                }
            }
        }
        out
    }

    /// `L_T(m) v = sum_{i ∉ T} L^(i)(m) v - sum_{i ∈ T} L^(i)(m) v`.
    pub fn lt_action(&self, t: &Word, m: i64, v: &TensorVector) -> Result<TensorVector> {
        self.check_width(t)?;
        Ok(self.combined_mode(&signs(t), m, v))
    }

    /// `omega_T` in the vacuum module.
    pub fn omega_t(&self, t: &Word) -> Result<TensorVector> {
        if !self.h.is_vacuum() {
            return Err(Error::Inadmissible(format!(
                "omega_T lives in the vacuum module, not W_({})",
                self.h
            )));
        }
        self.lt_action(t, -2, &self.lowest())
    }

    /// `omega^(i)` (1-based) in the vacuum module.
    pub fn omega_i(&self, i: usize) -> Result<TensorVector> {
        if !self.h.is_vacuum() || i == 0 || i > self.power() {
            return Err(Error::Inadmissible(format!("omega^({i}) in W_({})", self.h)));
        }
        Ok(self.factor_mode(i - 1, -2, &self.lowest()))
    }

    fn check_width(&self, t: &Word) -> Result<()> {
        if t.len() != self.power() {
            return Err(Error::WidthMismatch {
                expected: self.power(),
                found: t.len(),
            });
        }
        Ok(())
    }

    /// Invariant form `(a, b)_H`: product of the factor Shapovalov forms.
    pub fn form(&self, a: &TensorVector, b: &TensorVector) -> Rational {
        if a.level() != b.level() {
            return Rational::zero();
        }
        let mut acc = Rational::zero();
        for (ka, x) in a.terms() {
            for (kb, y) in b.terms() {
                let p = self.key_pairing(ka, kb);
                if !p.is_zero() {
                    acc += x * y * p;
                }
            }
        }
        acc
    }

    fn key_pairing(&self, a: &BasisKey, b: &BasisKey) -> Rational {
        let mut p = Rational::one();
        for (i, (fa, fb)) in a.iter().zip(b).enumerate() {
            if fa.level != fb.level {
                return Rational::zero();
            }
            let g = &self.factors[i].basis(fa.level as usize).gram[fa.index as usize][fb.index as usize];
            if g.is_zero() {
                return Rational::zero();
            }
            p *= g;
        }
        p
    }

    /// Gram matrix of the invariant form on the level basis.
    pub fn level_gram(&self, level: usize) -> Matrix {
        let basis = self.level_basis(level);
        let keys = basis.keys();
        keys.iter().map(|a| keys.iter().map(|b| self.key_pairing(a, b)).collect()).collect()
    }
}

fn enumerate_keys(dims: &[Vec<usize>], remaining: usize, current: &mut Vec<(usize, usize)>, out: &mut Vec<BasisKey>) {
    let i = current.len();
    if i == dims.len() {
        if remaining == 0 {
            // expand per-factor levels into every choice of pivot index
            let mut partial: Vec<BasisKey> = vec![Vec::with_capacity(dims.len())];
            for &(l, d) in current.iter() {
                partial = partial
                    .into_iter()
                    .flat_map(|k| {
                        (0..d).map(move |j| {
                            let mut k = k.clone();
                            k.push(FactorCoord {
                                level: l as u16,
                                index: j as u16,
                            });
                            k
                        })
                    })
                    .collect();
            }
            out.extend(partial);
        }
        return;
    }
    for l in 0..=remaining {
        let d = dims[i][l];
        if d == 0 {
            continue;
        }
        current.push((l, d));
        enumerate_keys(dims, remaining - l, current, out);
        current.pop();
    }
}

fn signs(t: &Word) -> Vec<Rational> {
    (1..=t.len())
        .map(|i| if t.contains(i) { -Rational::one() } else { Rational::one() })
        .collect()
}

/// Closed-form `L_T(0)` eigenvalue on `v_H`: `|S|/2 - |S ∩ T|` for `H` in
/// `{0, 1/2}^N` with half-support `S`, and `(N - 2|T|)/16` for all-`1/16`.
pub fn lt0_eigenvalue(t: &Word, h: &HVector) -> Result<Rational> {
    if t.len() != h.len() {
        return Err(Error::WidthMismatch {
            expected: h.len(),
            found: t.len(),
        });
    }
    if h.is_zero_half() {
        let s = h.support();
        Ok(rat(s.weight() as i64, 2) - int(s.intersection_size(t) as i64))
    } else if h.is_all_sixteenth() {
        Ok(rat(h.len() as i64 - 2 * t.weight() as i64, 16))
    } else {
        Err(Error::MixedWeights(h.to_string()))
    }
}

/// `[L_S(m), L_T(n)] = linear * L_word(m + n) + central * Id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commutator {
    pub linear: i64,
    pub word: Word,
    pub central: Rational,
}

/// `N` is the tensor power; `n_mode` is the mode of `L_T`.
pub fn commutator_symbolic(s: &Word, t: &Word, m: i64, n_mode: i64, n: usize) -> Result<Commutator> {
    for w in [s, t] {
        if w.len() != n {
            return Err(Error::WidthMismatch {
                expected: n,
                found: w.len(),
            });
        }
    }
    let word = s.sym_diff(t);
    let central = if m + n_mode == 0 {
        rat(n as i64 - 2 * word.weight() as i64, 4) * int(crate::rational::cubic_binomial(m))
    } else {
        Rational::zero()
    };
    Ok(Commutator {
        linear: m - n_mode,
        word,
        central,
    })
}

/// Checks the commutator identity on every basis vector of `W_H` up to
/// `max_level`.
pub fn verify_commutator(module: &TensorModule, s: &Word, t: &Word, m: i64, n_mode: i64, max_level: usize) -> Result<bool> {
    let comm = commutator_symbolic(s, t, m, n_mode, module.power())?;
    for level in 0..=max_level {
        for i in 0..module.dim(level) {
            let b = module.basis_vector(level, i);
            let st = module.lt_action(s, m, &module.lt_action(t, n_mode, &b)?)?;
            let ts = module.lt_action(t, n_mode, &module.lt_action(s, m, &b)?)?;
            let lhs = st.minus(&ts);
            let mut rhs = module.lt_action(&comm.word, m + n_mode, &b)?.scaled(&int(comm.linear));
            rhs.add_scaled(&b, &comm.central);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Graded dimension of `W_H` at `level`, from the factor dimensions.
pub fn graded_dim(h: &HVector, level: usize) -> usize {
    let mut poly = vec![0usize; level + 1];
    poly[0] = 1;
    for &w in h.weights() {
        let f = ising_factor(w);
        let dims: Vec<usize> = (0..=level).map(|l| f.dim(l)).collect();
        let mut next = vec![0usize; level + 1];
        for (a, &x) in poly.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &d) in dims.iter().enumerate().take(level + 1 - a) {
                next[a + b] += x * d;
            }
        }
        poly = next;
    }
    poly[level]
}

/// Dimension of `W_H` at absolute conformal weight `weight`, zero when the
/// weight is below the lowest weight or differs from it by a non-integer.
pub fn dim_at_weight(h: &HVector, weight: &Rational) -> usize {
    let level = weight - h.lowest_weight();
    if level < Rational::zero() || !level.denom().is_one() {
        return 0;
    }
    let level: usize = level.to_integer().try_into().expect("level fits usize");
    graded_dim(h, level)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E8WeightOne {
    /// `(H, dim)` for every `H ∈ {0,1/2}^16` of integral weight contributing
    /// at weight 1.
    pub breakdown: Vec<(HVector, usize)>,
    pub vacuum_contribution: usize,
    pub integral_weight_total: usize,
    pub sixteenth_multiplicity: usize,
    pub sixteenth_dim: usize,
    pub total: usize,
}

/// Weight-one dimension of `⊕_H W_H ⊕ 2^7 W_(1/16,...,1/16)` over even
/// `H ∈ {0,1/2}^16`.
pub fn weight1_count_e8() -> E8WeightOne {
    let one = int(1);
    let mut breakdown = Vec::new();
    let mut vacuum_contribution = 0;
    let mut integral_weight_total = 0;
    for mask in 0u64..1 << 16 {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let h = HVector::with_half_support(&Word::new(16, mask).unwrap());
        let d = dim_at_weight(&h, &one);
        if mask == 0 {
            vacuum_contribution = d;
        }
        if d > 0 {
            integral_weight_total += d;
            breakdown.push((h, d));
        }
    }
    breakdown.sort();
    let sixteenth_multiplicity = 1 << 7;
    let sixteenth_dim = dim_at_weight(&HVector::uniform(16, IsingWeight::Sixteenth), &one);
    E8WeightOne {
        breakdown,
        vacuum_contribution,
        integral_weight_total,
        sixteenth_multiplicity,
        sixteenth_dim,
        total: integral_weight_total + sixteenth_multiplicity * sixteenth_dim,
    }
}
