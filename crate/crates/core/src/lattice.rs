//! Graded integer lattices inside `W_H`: the forms generated by the
//! `omega_T`, saturation of forms generated by arbitrary weight-2 vectors,
//! invariant-form Gram matrices and graded duals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{complement_reduce, goodform_conditions, BinaryCode, Word};
use crate::error::{Error, Result};
use crate::hnf;
use crate::linalg::{self, Matrix};
use crate::rational::{common_denominator, is_integral, Rational};
use crate::tensor::{lt0_eigenvalue, HVector, TensorModule, TensorVector};

/// `L_{T1}(-n1) ... L_{Tk}(-nk) v_H` with `n1 >= ... >= nk > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SpanningMonomial {
    pub factors: Vec<(Word, u32)>,
}

impl SpanningMonomial {
    pub fn level(&self) -> usize {
        self.factors.iter().map(|&(_, n)| n as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Drops the leftmost operator.
    pub fn rest(&self) -> SpanningMonomial {
        SpanningMonomial {
            factors: self.factors[1..].to_vec(),
        }
    }
}

impl fmt::Display for SpanningMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, n) in &self.factors {
            write!(f, "L_{}(-{})", t.to_bitstring(), n)?;
        }
        write!(f, "v")
    }
}

impl Serialize for SpanningMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Checks that `(code, H)` satisfy the hypotheses under which `v_H`
/// generates an integral form: the code passes the goodform conditions and
/// every `L_T(0)` eigenvalue on `v_H` is an integer.
pub fn check_admissible(code: &BinaryCode, h: &HVector) -> Result<()> {
    if code.len() != h.len() {
        return Err(Error::WidthMismatch {
            expected: code.len(),
            found: h.len(),
        });
    }
    let report = goodform_conditions(code);
    if !report.passes() {
        return Err(Error::Inadmissible(format!(
            "code fails the generating conditions (n_div_4={}, even={}, omega={}, separating={})",
            report.n_div_4, report.subset_of_even, report.contains_omega, report.separating
        )));
    }
    for t in code.words() {
        let e = lt0_eigenvalue(t, h)?;
        if !is_integral(&e) {
            return Err(Error::Inadmissible(format!(
                "L_T(0) eigenvalue {} on v_H is not integral for T={}",
                crate::rational::format_rational(&e),
                t
            )));
        }
    }
    Ok(())
}

fn min_mode(h: &HVector) -> u32 {
    // L_T(-1) kills the vacuum
    if h.is_vacuum() {
        2
    } else {
        1
    }
}

/// Straightened spanning products at `level`, labels drawn from the
/// complement-reduced code. Operators with equal modes commute, so their
/// labels are taken in non-decreasing order.
pub fn spanning_monomials(code: &BinaryCode, h: &HVector, level: usize) -> Result<Vec<SpanningMonomial>> {
    check_admissible(code, h)?;
    let reps = complement_reduce(code)?;
    Ok(enumerate_monomials(&reps, min_mode(h), level))
}

fn enumerate_monomials(reps: &[Word], min: u32, level: usize) -> Vec<SpanningMonomial> {
    fn rec(
        reps: &[Word],
        min: u32,
        remaining: u32,
        max_mode: u32,
        min_label: usize,
        prefix: &mut Vec<(usize, u32)>,
        out: &mut Vec<SpanningMonomial>,
    ) {
        if remaining == 0 {
            out.push(SpanningMonomial {
                factors: prefix.iter().map(|&(i, n)| (reps[i], n)).collect(),
            });
            return;
        }
        for n in (min..=remaining.min(max_mode)).rev() {
            let first_label = if n == max_mode { min_label } else { 0 };
            for i in first_label..reps.len() {
                prefix.push((i, n));
                rec(reps, min, remaining - n, n, i, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    let level = level as u32;
    rec(reps, min, level, level, 0, &mut Vec::new(), &mut out);
    out
}

/// One graded piece of a lattice: the Z-span of `hnf / denominator` inside
/// the rational coordinate space of the level basis. The pair is kept
/// canonical (HNF, and no common factor shared by all entries and the
/// denominator), so equal lattices compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeEntry {
    pub level: usize,
    pub ambient_dim: usize,
    pub denominator: BigInt,
    pub hnf: Vec<Vec<BigInt>>,
}

impl LatticeEntry {
    pub fn zero(level: usize, ambient_dim: usize) -> Self {
        Self {
            level,
            ambient_dim,
            denominator: BigInt::one(),
            hnf: Vec::new(),
        }
    }

    pub fn from_rational_rows(level: usize, ambient_dim: usize, rows: &[Vec<Rational>]) -> Self {
        let d = common_denominator(rows.iter().flatten());
        let int_rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|q| (q * Rational::from_integer(d.clone())).to_integer()).collect())
            .collect();
        Self::from_scaled(level, ambient_dim, d, &int_rows)
    }

    fn from_scaled(level: usize, ambient_dim: usize, denominator: BigInt, rows: &[Vec<BigInt>]) -> Self {
        let mut hnf = hnf::hermite_normal_form(rows, ambient_dim);
        let mut d = denominator;
        let g = hnf.iter().flatten().fold(d.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            for x in hnf.iter_mut().flatten() {
                *x /= &g;
            }
            d /= &g;
        }
        if hnf.is_empty() {
            d = BigInt::one();
        }
        Self {
            level,
            ambient_dim,
            denominator: d,
            hnf,
        }
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    /// Basis rows as rational coordinate vectors.
    pub fn basis(&self) -> Vec<Vec<Rational>> {
        self.hnf
            .iter()
            .map(|r| r.iter().map(|x| Rational::new(x.clone(), self.denominator.clone())).collect())
            .collect()
    }

    pub fn contains_coords(&self, v: &[Rational]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let scaled: Option<Vec<BigInt>> = v
            .iter()
            .map(|q| {
                let x = q * Rational::from_integer(self.denominator.clone());
                is_integral(&x).then(|| x.to_integer())
            })
            .collect();
        scaled.is_some_and(|s| hnf::in_row_span(&self.hnf, &s))
    }

    /// Lattice generated by `self` and `v`.
    pub fn with_vector(&self, v: &[Rational]) -> Self {
        let mut rows = self.basis();
        rows.push(v.to_vec());
        Self::from_rational_rows(self.level, self.ambient_dim, &rows)
    }

    /// Covolume `|det(basis)|`; `None` unless full rank.
    pub fn covolume(&self) -> Option<Rational> {
        if !self.is_full_rank() {
            return None;
        }
        let d = num_traits::pow(self.denominator.clone(), self.ambient_dim);
        Some(Rational::new(hnf::pivot_product(&self.hnf), d))
    }
}

/// A lattice in `W_H`, one entry per level above the lowest weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLattice {
    pub h: HVector,
    pub code: Option<BinaryCode>,
    pub per_level: BTreeMap<usize, LatticeEntry>,
}

/// The `L(1/2,0)^{⊗N}_C`-submodule of `W_H` generated by `v_H`, evaluated
/// level by level. Evaluated spanning products are cached.
pub struct ModuleForm {
    code: BinaryCode,
    module: TensorModule,
    reps: Vec<Word>,
    cache: HashMap<SpanningMonomial, TensorVector>,
    computed_to: Option<usize>,
}

impl ModuleForm {
    pub fn new(code: &BinaryCode, h: &HVector) -> Result<Self> {
        check_admissible(code, h)?;
        Ok(Self {
            code: code.clone(),
            module: TensorModule::new(h.clone()),
            reps: complement_reduce(code)?,
            cache: HashMap::new(),
            computed_to: None,
        })
    }

    pub fn module(&self) -> &TensorModule {
        &self.module
    }

    pub fn code(&self) -> &BinaryCode {
        &self.code
    }

    pub fn h(&self) -> &HVector {
        self.module.h()
    }

    /// Complement representatives used as labels.
    pub fn labels(&self) -> &[Word] {
        &self.reps
    }

    pub fn monomials(&self, level: usize) -> Vec<SpanningMonomial> {
        enumerate_monomials(&self.reps, min_mode(self.h()), level)
    }

    fn ensure(&mut self, level: usize) {
        let start = match self.computed_to {
            Some(l) if l >= level => return,
            Some(l) => l + 1,
            None => 0,
        };
        for l in start..=level {
            let monos = self.monomials(l);
            let cache = &self.cache;
            let module = &self.module;
            let evaluated: Vec<(SpanningMonomial, TensorVector)> = monos
                .into_par_iter()
                .map(|mono| {
                    let v = if mono.is_empty() {
                        module.lowest()
                    } else {
                        let (t, n) = mono.factors[0];
                        let rest = &cache[&mono.rest()];
                        module.lt_action(&t, -(n as i64), rest).expect("labels have the module width")
                    };
                    (mono, v)
                })
                .collect();
            self.cache.extend(evaluated);
            self.computed_to = Some(l);
        }
    }

    /// Vector of one spanning product, which must be straightened.
    pub fn evaluate(&mut self, mono: &SpanningMonomial) -> TensorVector {
        self.ensure(mono.level());
        self.cache[mono].clone()
    }

    /// Spanning products at `level` paired with their vectors.
    pub fn spanning_vectors(&mut self, level: usize) -> Vec<(SpanningMonomial, TensorVector)> {
        self.ensure(level);
        self.monomials(level)
            .into_iter()
            .map(|m| {
                let v = self.cache[&m].clone();
                (m, v)
            })
            .collect()
    }

    pub fn lattice(&mut self, level: usize) -> LatticeEntry {
        let rows: Vec<Vec<Rational>> = self
            .spanning_vectors(level)
            .iter()
            .map(|(_, v)| self.module.coordinates(v))
            .collect();
        LatticeEntry::from_rational_rows(level, self.module.dim(level), &rows)
    }

    pub fn graded(&mut self, max_level: usize) -> GradedLattice {
        let per_level = (0..=max_level).map(|l| (l, self.lattice(l))).collect();
        GradedLattice {
            h: self.h().clone(),
            code: Some(self.code.clone()),
            per_level,
        }
    }
}

pub fn lattice_at_level(code: &BinaryCode, h: &HVector, level: usize) -> Result<LatticeEntry> {
    Ok(ModuleForm::new(code, h)?.lattice(level))
}

pub fn contains(module: &TensorModule, entry: &LatticeEntry, v: &TensorVector) -> Result<bool> {
    if v.is_zero() {
        return Ok(true);
    }
    if v.level() != entry.level {
        return Err(Error::LevelMismatch {
            expected: entry.level,
            found: v.level(),
        });
    }
    Ok(entry.contains_coords(&module.coordinates(v)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub stabilized: bool,
    pub rounds: usize,
    pub final_mode_budget: usize,
    /// Stabilization is detected empirically, not proved.
    pub note: &'static str,
}

/// Z-closure of `v_H` under the modes of the weight-2 generators.
///
/// Round `r` uses modes `|m| <= r + 2` and tracks levels up to
/// `max_level + r + 2`; it closes the truncated system to a fixed point.
/// Iteration stops once the lattices at levels `<= max_level` agree across
/// three consecutive rounds, or when the mode bound would exceed
/// `mode_budget`.
pub fn saturate_generated_form(
    module: &TensorModule,
    generators: &[TensorVector],
    max_level: usize,
    mode_budget: usize,
) -> Result<(GradedLattice, SaturationReport)> {
    if !module.h().is_vacuum() {
        return Err(Error::Inadmissible("generated forms are built in the vacuum module".into()));
    }
    let mut coeffs = Vec::new();
    for g in generators {
        if g.is_zero() {
            continue;
        }
        if g.level() != 2 {
            return Err(Error::LevelMismatch {
                expected: 2,
                found: g.level(),
            });
        }
        coeffs.push(weight_two_coefficients(module, g));
    }

    let mut previous: Option<BTreeMap<usize, LatticeEntry>> = None;
    let mut stable_rounds = 0;
    let mut rounds = 0;
    let mut budget = 2usize;
    let mut result = None;
    while budget <= mode_budget.max(2) {
        rounds += 1;
        let closure = close_truncated(module, &coeffs, max_level + budget, budget);
        let current: BTreeMap<usize, LatticeEntry> = closure.into_iter().filter(|(l, _)| *l <= max_level).collect();
        if previous.as_ref() == Some(&current) {
            stable_rounds += 1;
        } else {
            stable_rounds = 0;
        }
        previous = Some(current.clone());
        result = Some(current);
        if stable_rounds >= 2 {
            break;
        }
        budget += 1;
    }
    let per_level = result.expect("at least one round runs");
    let report = SaturationReport {
        stabilized: stable_rounds >= 2,
        rounds,
        final_mode_budget: budget.min(mode_budget.max(2)),
        note: "stabilized (heuristic)",
    };
    Ok((
        GradedLattice {
            h: module.h().clone(),
            code: None,
            per_level,
        },
        report,
    ))
}

/// Coefficients `a_i` with `g = sum_i a_i omega^(i)`; every level-2 vector
/// of the vacuum module has this form.
fn weight_two_coefficients(module: &TensorModule, g: &TensorVector) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); module.power()];
    for (key, c) in g.terms() {
        let i = key
            .iter()
            .position(|f| f.level == 2)
            .expect("level-2 vacuum keys have one excited factor");
        coeffs[i] = c.clone();
    }
    coeffs
}

fn close_truncated(module: &TensorModule, gens: &[Vec<Rational>], cap: usize, budget: usize) -> BTreeMap<usize, LatticeEntry> {
    let mut lattices: BTreeMap<usize, LatticeEntry> = (0..=cap).map(|l| (l, LatticeEntry::zero(l, module.dim(l)))).collect();
    let mut work: Vec<TensorVector> = Vec::new();
    let push = |v: TensorVector, lattices: &mut BTreeMap<usize, LatticeEntry>, work: &mut Vec<TensorVector>| {
        if v.is_zero() || v.level() > cap {
            return;
        }
        let coords = module.coordinates(&v);
        let entry = lattices.get_mut(&v.level()).unwrap();
        if !entry.contains_coords(&coords) {
            *entry = entry.with_vector(&coords);
            work.push(v);
        }
    };
    push(module.lowest(), &mut lattices, &mut work);
    while let Some(v) = work.pop() {
        let b = budget as i64;
        let lo = -(b.min((cap - v.level()) as i64));
        let hi = b.min(v.level() as i64);
        for a in gens {
            for m in lo..=hi {
                let image = module.combined_mode(a, m, &v);
                push(image, &mut lattices, &mut work);
            }
        }
    }
    lattices
}

/// Gram matrix of the invariant form on `rows` (coordinate vectors at
/// `level`).
pub fn gram_matrix(module: &TensorModule, level: usize, rows: &[Vec<Rational>]) -> Matrix {
    let g = module.level_gram(level);
    let rg = linalg::mat_mul(rows, &g);
    linalg::mat_mul(&rg, &linalg::transpose(rows))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualLattice {
    pub dual: LatticeEntry,
    /// Rows of `gram^{-1} * basis`, dual to the lattice basis.
    pub dual_basis: Vec<Vec<Rational>>,
    /// `|det gram|`; an integer exactly when the dual contains the lattice.
    pub index: Rational,
    pub contains_lattice: bool,
    pub gram: Matrix,
}

/// Graded Z-dual of a full-rank level with respect to the invariant form.
pub fn graded_dual(module: &TensorModule, entry: &LatticeEntry) -> Result<DualLattice> {
    if !entry.is_full_rank() {
        return Err(Error::RankDeficient(entry.level));
    }
    let basis = entry.basis();
    let gram = gram_matrix(module, entry.level, &basis);
    let inv = linalg::inverse(&gram).ok_or(Error::DegenerateGram(entry.level))?;
    let dual_basis = linalg::mat_mul(&inv, &basis);
    let index = linalg::determinant(&gram).abs();
    let contains_lattice = gram.iter().flatten().all(is_integral);
    let dual = LatticeEntry::from_rational_rows(entry.level, entry.ambient_dim, &dual_basis);
    Ok(DualLattice {
        dual,
        dual_basis,
        index,
        contains_lattice,
        gram,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub a_in_b: bool,
    pub b_in_a: bool,
    /// `covol(A) / covol(B)`, i.e. `[B : A]` when `A ⊆ B`.
    #[serde(skip)]
    pub index: Option<Rational>,
}

impl Comparison {
    pub fn equal(&self) -> bool {
        self.a_in_b && self.b_in_a
    }
}

pub fn compare(a: &LatticeEntry, b: &LatticeEntry) -> Result<Comparison> {
    if a.level != b.level || a.ambient_dim != b.ambient_dim {
        return Err(Error::AmbientMismatch(format!(
            "level {} dim {} vs level {} dim {}",
            a.level, a.ambient_dim, b.level, b.ambient_dim
        )));
    }
    let a_in_b = a.basis().iter().all(|r| b.contains_coords(r));
    let b_in_a = b.basis().iter().all(|r| a.contains_coords(r));
    let index = match (a.covolume(), b.covolume()) {
        (Some(va), Some(vb)) => Some(va / vb),
        _ => None,
    };
    Ok(Comparison { a_in_b, b_in_a, index })
}
