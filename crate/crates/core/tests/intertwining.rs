mod common;

use common::{q, Q};
use isingform::codes::{even_code, hamming8};
use isingform::intertwining::{
    build_correlation, check_well_defined, even_support_decomposition, framed_criterion, integrality_verdict, parse_lowest_table,
    Correlator, LowestTable,
};
use isingform::lattice::spanning_monomials;
use isingform::{BinaryCode, Error, HVector, IsingWeight, TripleSpec, Word};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn h(s: &str) -> HVector {
    s.parse().unwrap()
}

/// Eigenvalue of `sum_i eps_i L^(i)(0)`, `eps_i = -1` on `T`, on the lowest vector.
fn eigen(t: &Word, hv: &HVector) -> Q {
    hv.weights()
        .iter()
        .enumerate()
        .map(|(i, w)| if t.contains(i + 1) { -w.value() } else { w.value() })
        .sum()
}

/// `F(word v_{H3})` with every `L_T(0)` kept as an explicit operator and
/// pushed right one commutator `[L_T(0), L_S(-k)] = k L_{S+T}(-k)` at a time.
fn oracle(spec: &TripleSpec, word: &[(Word, i64)]) -> Q {
    let Some(&(t, m)) = word.first() else {
        return Q::one();
    };
    let rest = &word[1..];
    if m == 0 {
        // zero modes commute with each other: jump over the run of them
        let Some(j) = rest.iter().position(|&(_, k)| k != 0) else {
            return word.iter().map(|(s, _)| eigen(s, &spec.h3)).product();
        };
        let (s, k) = rest[j];
        let mut swapped = rest[..j].to_vec();
        swapped.extend([(s, k), (t, 0)]);
        swapped.extend_from_slice(&rest[j + 1..]);
        let mut merged = rest[..j].to_vec();
        merged.push((s.sym_diff(&t), k));
        merged.extend_from_slice(&rest[j + 1..]);
        return oracle(spec, &swapped) + Q::from_integer((-k).into()) * oracle(spec, &merged);
    }
    let n = Q::from_integer((-m).into());
    let mut lt0 = vec![(t, 0)];
    lt0.extend_from_slice(rest);
    let f_rest = oracle(spec, rest);
    oracle(spec, &lt0) - eigen(&t, &spec.h2) * &f_rest + n * eigen(&t, &spec.h1) * f_rest
}

fn triple(h1: &str, h2: &str, h3: &str, code: BinaryCode) -> TripleSpec {
    TripleSpec::new(h(h1), h(h2), h(h3), code, Q::one()).unwrap()
}

#[test]
fn recursion_matches_explicit_zero_modes() {
    let specs = [
        triple("1/2,1/2,0,0", "1/2,1/2,0,0", "0,0,0,0", even_code(4).unwrap()),
        triple("1/2,1/2,0,0", "0,0,1/2,1/2", "1/2,1/2,1/2,1/2", even_code(4).unwrap()),
        triple("0,0,0,0", "1/2,0,1/2,0", "1/2,0,1/2,0", even_code(4).unwrap()),
    ];
    for spec in specs {
        let mut corr = Correlator::new(spec.clone());
        for level in 0..=4 {
            for m in spanning_monomials(&spec.code, &spec.h3, level).unwrap() {
                let word: Vec<(Word, i64)> = m.factors.iter().map(|&(t, n)| (t, -(n as i64))).collect();
                assert_eq!(corr.value(&m.factors), oracle(&spec, &word), "{m}");
            }
        }
        // labels outside the canonical half go through L_{T^c} = -L_T
        let full = Word::full(4);
        for t in spec.code.words() {
            let c = t.sym_diff(&full);
            assert_eq!(corr.value(&[(c, 2), (*t, 1)]), oracle(&spec, &[(c, -2), (*t, -1)]));
        }
    }
}

#[test]
fn sixteenth_triple_matches_oracle() {
    let code = isingform::codes::c16();
    let s = HVector::uniform(16, IsingWeight::Sixteenth);
    let spec = TripleSpec::new(HVector::vacuum(16), s.clone(), s, code, Q::one()).unwrap();
    let mut corr = Correlator::new(spec.clone());
    for level in 0..=2 {
        for m in spanning_monomials(&spec.code, &spec.h3, level).unwrap() {
            let word: Vec<(Word, i64)> = m.factors.iter().map(|&(t, n)| (t, -(n as i64))).collect();
            assert_eq!(corr.value(&m.factors), oracle(&spec, &word));
        }
    }
}

#[test]
fn exponents() {
    let spec = triple("1/2,1/2,0,0", "0,0,1/2,1/2", "1/2,1/2,1/2,1/2", even_code(4).unwrap());
    assert_eq!(spec.base_exponent(), Q::zero());
    let f = build_correlation(&spec, 3).unwrap();
    assert_eq!(f.exponent(3), q(3, 1));
    let spec = triple("1/2,1/2,0,0", "1/2,1/2,0,0", "0,0,0,0", even_code(4).unwrap());
    assert_eq!(spec.base_exponent(), q(-2, 1));
    let f = build_correlation(&spec, 2).unwrap();
    assert_eq!(f.exponent(0), q(-2, 1));
    assert_eq!(f.exponent(2), Q::zero());
    assert_eq!(f.per_level.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2]);
    assert!(f.per_level[&1].is_empty());
}

#[test]
fn allowed_triple_is_well_defined() {
    let spec = triple("1/2,1/2,0,0", "0,0,1/2,1/2", "1/2,1/2,1/2,1/2", even_code(4).unwrap());
    let report = check_well_defined(&spec, 3).unwrap();
    assert!(report.passes(), "{report:?}");
    assert!(report.levels.iter().all(|l| l.order_independent));
    assert!(report.levels.iter().map(|l| l.radical_vectors).sum::<usize>() > 0);
}

#[test]
fn mismatched_fusion_is_rejected() {
    // 1/2 x 1/2 does not produce 1/2 in the first two factors
    let spec = triple("1/2,1/2,0,0", "1/2,1/2,0,0", "1/2,1/2,0,0", even_code(4).unwrap());
    assert!(!check_well_defined(&spec, 2).unwrap().passes());
}

#[test]
fn verdicts_are_monotone_in_the_cutoff() {
    let spec = triple("1/2,1/2,0,0", "0,0,1/2,1/2", "1/2,1/2,1/2,1/2", even_code(4).unwrap()).with_coeff(q(1, 3));
    let mut first_failure = None;
    for cutoff in 0..=4 {
        let v = integrality_verdict(&spec, cutoff).unwrap();
        if let Some(at) = first_failure {
            assert!(!v.integral);
            assert_eq!(v.witness.as_ref().unwrap().0.level(), at);
        } else if !v.integral {
            first_failure = Some(v.witness.as_ref().unwrap().0.level());
        }
    }
    assert_eq!(first_failure, Some(0));
    let one = integrality_verdict(&spec.with_coeff(Q::one()), 4).unwrap();
    assert!(one.integral && one.witness.is_none());
}

#[test]
fn hamming_vacuum_functional_is_integral() {
    let v = HVector::vacuum(8);
    let spec = TripleSpec::new(v.clone(), v.clone(), v, hamming8(), Q::one()).unwrap();
    assert!(integrality_verdict(&spec, 4).unwrap().integral);
}

fn fusion_table(n: usize) -> LowestTable {
    let summands = even_support_decomposition(n);
    let mut table = LowestTable::new();
    for (a, _) in &summands {
        for (b, _) in &summands {
            for (c, _) in &summands {
                let allowed = a.support().sym_diff(&b.support()) == c.support();
                table.insert((a.clone(), b.clone(), c.clone()), if allowed { Q::one() } else { Q::zero() });
            }
        }
    }
    table
}

#[test]
fn framed_criterion_on_even_four() {
    let code = even_code(4).unwrap();
    let decomposition = even_support_decomposition(4);
    assert_eq!(decomposition.len(), 8);
    assert!(decomposition.iter().all(|(_, m)| *m == 1));
    let mut table = fusion_table(4);
    let report = framed_criterion(&decomposition, &code, &table, 2).unwrap();
    assert_eq!(report.triples.len(), 512);
    assert_eq!(report.triples.iter().filter(|t| t.verdict.is_some()).count(), 64);
    assert!(report.hypothesis_holds());
    assert!(report.conclusion().contains("not claimed"));

    let key = (h("1/2,1/2,0,0"), h("0,0,1/2,1/2"), h("1/2,1/2,1/2,1/2"));
    table.insert(key.clone(), q(1, 2));
    let report = framed_criterion(&decomposition, &code, &table, 2).unwrap();
    assert!(!report.hypothesis_holds());
    let flagged: Vec<_> = report
        .triples
        .iter()
        .filter(|t| !t.entry_integral || !t.verdict.as_ref().is_none_or(|v| v.integral))
        .collect();
    assert_eq!(flagged.len(), 1);
    assert_eq!((flagged[0].h1.clone(), flagged[0].h2.clone(), flagged[0].h3.clone()), key);

    table.remove(&key);
    assert!(matches!(
        framed_criterion(&decomposition, &code, &table, 2),
        Err(Error::MissingTableEntry(_))
    ));
}

#[test]
fn table_file_errors_carry_lines() {
    let err = parse_lowest_table("0,0\t0,0\t0,0\t1\n0,0\t0,0\t1/3,0\t1\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }));
    assert!(err.to_string().contains('2'));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn values_are_linear_in_the_lowest_coefficient(n in -20i64..20, d in 1i64..12, pick in 0usize..3) {
        let specs = [
            triple("1/2,1/2,0,0", "1/2,1/2,0,0", "0,0,0,0", even_code(4).unwrap()),
            triple("1/2,1/2,0,0", "0,0,1/2,1/2", "1/2,1/2,1/2,1/2", even_code(4).unwrap()),
            triple("0,0,0,0", "0,1/2,0,1/2", "0,1/2,0,1/2", even_code(4).unwrap()),
        ];
        let c = q(n, d);
        let base = build_correlation(&specs[pick], 3).unwrap();
        let scaled = build_correlation(&specs[pick].with_coeff(c.clone()), 3).unwrap();
        for (level, values) in &base.per_level {
            for ((m, v), (m2, w)) in values.iter().zip(&scaled.per_level[level]) {
                prop_assert_eq!(m, m2);
                prop_assert_eq!(w, &(v * &c));
            }
        }
    }
}
