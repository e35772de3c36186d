use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use super::CentralParams;
use crate::linalg::Matrix;
use crate::rational::{int, Rational};

/// `[L(m), L(n)] = linear * L(m+n) + central * ell * Id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub linear: i64,
    /// Multiplier of the central charge; zero unless `m + n = 0`.
    pub central: Rational,
}

impl Bracket {
    pub fn central_at(&self, ell: &Rational) -> Rational {
        &self.central * ell
    }
}

pub fn bracket(m: i64, n: i64) -> Bracket {
    let central = if m + n == 0 {
        Rational::new((m * m * m - m).into(), 12.into())
    } else {
        Rational::zero()
    };
    Bracket { linear: m - n, central }
}

/// `L(-n1) ... L(-nk) v` with `n1 >= ... >= nk >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PbwMonomial(Vec<u32>);

impl PbwMonomial {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    /// Builds a monomial from its parts, or `None` if they are not weakly
    /// decreasing positive integers.
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        let ok = parts.iter().all(|&p| p >= 1) && parts.windows(2).all(|w| w[0] >= w[1]);
        ok.then_some(Self(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    fn prepend(&self, part: u32) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(part);
        v.extend_from_slice(&self.0);
        Self(v)
    }

    fn tail(&self) -> Self {
        Self(self.0[1..].to_vec())
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "L(-{p})")?;
        }
        write!(f, "v")
    }
}

/// Exact linear combination of PBW monomials. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VermaVector {
    terms: BTreeMap<PbwMonomial, Rational>,
}

impl VermaVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: PbwMonomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn term(m: PbwMonomial, c: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn lowest() -> Self {
        Self::monomial(PbwMonomial::vacuum())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &PbwMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common level of all terms, `None` for zero or mixed levels.
    pub fn homogeneous_level(&self) -> Option<usize> {
        let mut levels = self.terms.keys().map(PbwMonomial::level);
        let first = levels.next()?;
        levels.all(|l| l == first).then_some(first)
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add_scaled(&mut self, other: &VermaVector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Rational) -> VermaVector {
        let mut out = VermaVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &VermaVector) -> VermaVector {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }
}

/// All PBW monomials of a level, in descending lexicographic order of their
/// parts (so `L(-n)v` comes first and `L(-1)^n v` last).
pub fn monomials_at_level(level: usize) -> Vec<PbwMonomial> {
    fn rec(remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<PbwMonomial>) {
        if remaining == 0 {
            out.push(PbwMonomial(prefix.clone()));
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let level = level as u32;
    rec(level, level, &mut Vec::new(), &mut out);
    out
}

/// The Verma module `M(ell, h)`. Straightened products are memoised.
#[derive(Debug)]
pub struct VermaModule {
    params: CentralParams,
    memo: Mutex<HashMap<(i64, PbwMonomial), Arc<VermaVector>>>,
}

impl VermaModule {
    pub fn new(params: CentralParams) -> Self {
        Self {
            params,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &CentralParams {
        &self.params
    }

    /// `L(n) v`, straightened into PBW form.
    pub fn apply_mode(&self, n: i64, v: &VermaVector) -> VermaVector {
        let mut out = VermaVector::zero();
        for (m, c) in v.terms() {
            out.add_scaled(&self.apply_to_monomial(n, m), c);
        }
        out
    }

    /// Applies `L(modes[k-1])`, then ..., then `L(modes[0])`: the word
    /// `L(modes[0]) ... L(modes[k-1])` acting on `v`.
    pub fn apply_word(&self, modes: &[i64], v: &VermaVector) -> VermaVector {
        modes.iter().rev().fold(v.clone(), |acc, &n| self.apply_mode(n, &acc))
    }

    fn apply_to_monomial(&self, n: i64, mono: &PbwMonomial) -> Arc<VermaVector> {
        let key = (n, mono.clone());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let value = Arc::new(self.straighten(n, mono));
        self.memo.lock().unwrap().insert(key, value.clone());
        value
    }

    // Positive modes move rightward until they hit v_h; negative modes are
    // inserted so the parts stay weakly decreasing.
    fn straighten(&self, n: i64, mono: &PbwMonomial) -> VermaVector {
        let Some(&first) = mono.parts().first() else {
            return match n {
                n if n > 0 => VermaVector::zero(),
                0 => VermaVector::term(PbwMonomial::vacuum(), self.params.h.clone()),
                n => VermaVector::monomial(PbwMonomial(vec![(-n) as u32])),
            };
        };
        let first_mode = -(first as i64);
        if n < 0 && -n >= first as i64 {
            return VermaVector::monomial(mono.prepend((-n) as u32));
        }
        // L(n) L(-first) rest = L(-first) L(n) rest + [L(n), L(-first)] rest
        let rest = mono.tail();
        let inner = self.apply_to_monomial(n, &rest);
        let mut out = self.apply_mode(first_mode, &inner);
        let b = bracket(n, first_mode);
        if b.linear != 0 {
            out.add_scaled(&self.apply_to_monomial(n + first_mode, &rest), &int(b.linear));
        }
        let central = b.central_at(&self.params.ell);
        if !central.is_zero() {
            out.add_term(rest, central);
        }
        out
    }

    /// Shapovalov pairing `<a, v>` with `<v_h, v_h> = 1` and `L(n)` adjoint
    /// to `L(-n)`.
    pub fn pairing(&self, a: &PbwMonomial, v: &VermaVector) -> Rational {
        // <L(-a1)...L(-ak) v_h, w> = coefficient of v_h in L(ak)...L(a1) w
        let raised = a.parts().iter().fold(v.clone(), |acc, &p| self.apply_mode(p as i64, &acc));
        raised.coefficient(&PbwMonomial::vacuum())
    }

    pub fn gram(&self, monomials: &[PbwMonomial]) -> Matrix {
        let n = monomials.len();
        let mut g = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            let vi = VermaVector::monomial(monomials[i].clone());
            for j in i..n {
                let x = self.pairing(&monomials[j], &vi);
                g[j][i] = x.clone();
                g[i][j] = x;
            }
        }
        g
    }
}

/// Shapovalov Gram matrix on every PBW monomial of the level, ordered as
/// in [`monomials_at_level`].
pub fn shapovalov_gram(params: &CentralParams, level: usize) -> Matrix {
    VermaModule::new(params.clone()).gram(&monomials_at_level(level))
}
