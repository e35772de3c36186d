//! Serializable reports shared by the command-line tool and tests.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use crate::intertwining::{CorrelationFunctional, TripleSpec, Verdict, WellDefinedReport};
use crate::lattice::{DualLattice, GradedLattice, LatticeEntry, SpanningMonomial};
use crate::rational::{format_rational, int, Rational, RationalJson};
use crate::tensor::HVector;

/// An arbitrary-size integer as a JSON number.
pub fn big_number(x: &BigInt) -> Value {
    serde_json::from_str(&x.to_string()).expect("decimal integers are valid JSON")
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub code: String,
    #[serde(rename = "H")]
    pub h: HVector,
    pub level: usize,
    pub conformal_weight: RationalJson,
    pub ambient_dim: usize,
    pub rank: usize,
    pub full_rank: bool,
    pub denominator: Value,
    pub hnf: Vec<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<RationalJson>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_index: Option<RationalJson>,
}

impl LatticeReport {
    pub fn new(code: &str, h: &HVector, entry: &LatticeEntry) -> Self {
        Self {
            code: code.to_string(),
            h: h.clone(),
            level: entry.level,
            conformal_weight: (&(h.lowest_weight() + int(entry.level as i64))).into(),
            ambient_dim: entry.ambient_dim,
            rank: entry.rank(),
            full_rank: entry.is_full_rank(),
            denominator: big_number(&entry.denominator),
            hnf: entry.hnf.iter().map(|r| r.iter().map(big_number).collect()).collect(),
            gram: None,
            dual_index: None,
        }
    }

    pub fn with_dual(mut self, dual: &DualLattice) -> Self {
        self.gram = Some(rational_matrix(&dual.gram));
        self.dual_index = Some((&dual.index).into());
        self
    }
}

pub fn rational_matrix(m: &[Vec<Rational>]) -> Vec<Vec<RationalJson>> {
    m.iter().map(|r| r.iter().map(RationalJson::from).collect()).collect()
}

pub fn lattice_reports(code: &str, lattice: &GradedLattice) -> Vec<LatticeReport> {
    lattice
        .per_level
        .values()
        .map(|e| LatticeReport::new(code, &lattice.h, e))
        .collect()
}

/// One row per level.
pub fn lattice_tsv(reports: &[LatticeReport]) -> String {
    let mut out = String::from("code\tH\tlevel\tconformal_weight\tambient_dim\trank\tdenominator\tfull_rank\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.code,
            r.h,
            r.level,
            json_rational_text(&r.conformal_weight),
            r.ambient_dim,
            r.rank,
            r.denominator,
            r.full_rank
        );
    }
    out
}

fn json_rational_text(q: &RationalJson) -> String {
    if q.d == "1" {
        q.n.clone()
    } else {
        format!("{}/{}", q.n, q.d)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecReport {
    pub h1: HVector,
    pub h2: HVector,
    pub h3: HVector,
    pub code: String,
    pub lowest_coeff: RationalJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationEntry {
    pub monomial: SpanningMonomial,
    pub value_numer: String,
    pub value_denom: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationLevel {
    pub level: usize,
    pub exponent: RationalJson,
    pub entries: Vec<CorrelationEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub monomial: SpanningMonomial,
    pub value: RationalJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationReport {
    pub spec: SpecReport,
    pub base_exponent: RationalJson,
    pub per_level: Vec<CorrelationLevel>,
    pub well_defined: Option<WellDefinedReport>,
    pub verdict: bool,
    pub witness: Option<Witness>,
}

impl CorrelationReport {
    pub fn new(
        code_name: &str,
        spec: &TripleSpec,
        f: &CorrelationFunctional,
        verdict: &Verdict,
        well_defined: Option<WellDefinedReport>,
    ) -> Self {
        let per_level = f
            .per_level
            .iter()
            .map(|(&level, entries)| CorrelationLevel {
                level,
                exponent: (&f.exponent(level)).into(),
                entries: entries
                    .iter()
                    .map(|(m, v)| CorrelationEntry {
                        monomial: m.clone(),
                        value_numer: v.numer().to_string(),
                        value_denom: v.denom().to_string(),
                    })
                    .collect(),
            })
            .collect();
        Self {
            spec: SpecReport {
                h1: spec.h1.clone(),
                h2: spec.h2.clone(),
                h3: spec.h3.clone(),
                code: code_name.to_string(),
                lowest_coeff: (&spec.lowest_coeff).into(),
            },
            base_exponent: (&f.base_exponent).into(),
            per_level,
            well_defined,
            verdict: verdict.integral,
            witness: verdict.witness.as_ref().map(|(m, v)| Witness {
                monomial: m.clone(),
                value: v.into(),
            }),
        }
    }

    pub fn tsv(&self) -> String {
        let mut out = String::from("level\texponent\tmonomial\tvalue\n");
        for l in &self.per_level {
            for e in &l.entries {
                let v = if e.value_denom == "1" {
                    e.value_numer.clone()
                } else {
                    format!("{}/{}", e.value_numer, e.value_denom)
                };
                let _ = writeln!(out, "{}\t{}\t{}\t{}", l.level, json_rational_text(&l.exponent), e.monomial, v);
            }
        }
        out
    }
}

/// `a/b` or `a`.
pub fn show(q: &Rational) -> String {
    format_rational(q)
}
