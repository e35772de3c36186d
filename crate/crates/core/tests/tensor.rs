mod common;

use common::{binom3, ising_dims, q, tensor_dim, Q};
use isingform::codes::{even_code, hamming8};
use isingform::tensor::{commutator_symbolic, dim_at_weight, graded_dim, lt0_eigenvalue, verify_commutator, weight1_count_e8};
use isingform::{HVector, TensorModule, TensorVector, Word};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn h(s: &str) -> HVector {
    s.parse().unwrap()
}

fn factor_names(h: &HVector) -> Vec<&'static str> {
    h.weights()
        .iter()
        .map(|w| match w.to_string().as_str() {
            "0" => "0",
            "1/2" => "1/2",
            _ => "1/16",
        })
        .collect()
}

#[test]
fn graded_dims_match_character_products() {
    for hv in ["0,0,0,0", "1/2,1/2,0,0", "1/16,1/16,1/16,1/16", "1/2,0,1/16,0"] {
        let hv = h(hv);
        let dims: Vec<Vec<usize>> = factor_names(&hv).iter().map(|n| ising_dims(n, 6)).collect();
        let module = TensorModule::new(hv.clone());
        for level in 0..=6 {
            assert_eq!(graded_dim(&hv, level), tensor_dim(&dims, level));
            assert_eq!(module.dim(level), tensor_dim(&dims, level));
        }
    }
}

#[test]
fn symbolic_commutator_values() {
    let s = Word::from_elements(4, &[1, 2]).unwrap();
    let t = Word::from_elements(4, &[2, 3]).unwrap();
    let c = commutator_symbolic(&s, &t, 2, -2, 4).unwrap();
    assert_eq!(c.linear, 4);
    assert_eq!(c.word, Word::from_elements(4, &[1, 3]).unwrap());
    // (4 - 2*2)/4 * binom(3,3) = 0
    assert!(c.central.is_zero());
    let c = commutator_symbolic(&Word::empty(4), &Word::empty(4), 3, -3, 4).unwrap();
    assert_eq!(c.central, q(4, 4) * binom3(3));
    let c = commutator_symbolic(&Word::empty(4), &Word::empty(4), -3, 3, 4).unwrap();
    assert_eq!(c.central, binom3(-3));
    assert!(commutator_symbolic(&Word::empty(4), &Word::empty(8), 1, -1, 4).is_err());
}

#[test]
fn omega_of_complement_is_negated() {
    let module = TensorModule::new(HVector::vacuum(8));
    for t in hamming8().words() {
        let a = module.omega_t(t).unwrap();
        let b = module.omega_t(&t.complement()).unwrap();
        assert_eq!(a.plus(&b), TensorVector::zero(2));
    }
}

#[test]
fn half_size_omega_i_identity() {
    // (|C|/2) omega^(i) = sum over T in C with i not in T of omega_T
    for code in [even_code(4).unwrap(), hamming8()] {
        let n = code.len();
        let module = TensorModule::new(HVector::vacuum(n));
        let half = Q::from_integer((code.size() / 2).into());
        for i in 1..=n {
            let mut sum = TensorVector::zero(2);
            for t in code.words().iter().filter(|t| !t.contains(i)) {
                sum.add_scaled(&module.omega_t(t).unwrap(), &Q::one());
            }
            assert_eq!(sum, module.omega_i(i).unwrap().scaled(&half));
        }
    }
}

#[test]
fn lt0_closed_forms() {
    let hv = h("1/2,1/2,0,0");
    let module = TensorModule::new(hv.clone());
    for t in even_code(4).unwrap().words() {
        let v = module.lt_action(t, 0, &module.lowest()).unwrap();
        assert_eq!(v, module.lowest().scaled(&lt0_eigenvalue(t, &hv).unwrap()));
    }
    let all = h("1/16,1/16,1/16,1/16");
    assert_eq!(lt0_eigenvalue(&Word::empty(4), &all).unwrap(), q(4, 16));
    assert!(lt0_eigenvalue(&Word::empty(4), &h("1/2,1/16,0,0")).is_err());
}

#[test]
fn e8_count() {
    let e8 = weight1_count_e8();
    assert_eq!(e8.breakdown.len(), 120);
    assert!(e8.breakdown.iter().all(|(hv, d)| *d == 1 && hv.support().weight() == 2));
    assert_eq!(e8.vacuum_contribution, 0);
    assert_eq!(e8.total, 248);
    assert_eq!(dim_at_weight(&HVector::vacuum(16), &Q::one()), 0);
}

fn arb_case() -> impl Strategy<Value = (usize, usize, usize, i64, i64)> {
    (0usize..8, 0usize..8, 0usize..4, -3i64..=3, -3i64..=3)
}

const HS: [&str; 4] = ["0,0,0,0", "1/2,1/2,0,0", "1/16,1/16,1/16,1/16", "0,1/2,0,1/2"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn commutator_matches_action((si, ti, hi, m, n) in arb_case()) {
        let code = even_code(4).unwrap();
        let (s, t) = (code.words()[si], code.words()[ti]);
        let module = TensorModule::new(h(HS[hi]));
        prop_assert!(verify_commutator(&module, &s, &t, m, n, 3).unwrap());
    }

    #[test]
    fn complement_negates_modes((ti, hi, m, level, idx) in (0usize..8, 0usize..4, -3i64..=3, 0usize..4, 0usize..64)) {
        let t = even_code(4).unwrap().words()[ti];
        let module = TensorModule::new(h(HS[hi]));
        let dim = module.dim(level);
        prop_assume!(dim > 0);
        let v = module.basis_vector(level, idx % dim);
        let a = module.lt_action(&t, m, &v).unwrap();
        let b = module.lt_action(&t.complement(), m, &v).unwrap();
        prop_assert_eq!(a.plus(&b), TensorVector::zero(a.level()));
    }

    #[test]
    fn lowering_modes_raise_level((ti, hi, n, level, idx) in (0usize..8, 0usize..4, 1i64..=3, 0usize..4, 0usize..64)) {
        let t = even_code(4).unwrap().words()[ti];
        let module = TensorModule::new(h(HS[hi]));
        let dim = module.dim(level);
        prop_assume!(dim > 0);
        let v = module.basis_vector(level, idx % dim);
        let out = module.lt_action(&t, -n, &v).unwrap();
        if !out.is_zero() {
            prop_assert_eq!(out.level(), level + n as usize);
        }
        let coords = module.coordinates(&out);
        prop_assert_eq!(module.from_coordinates(level + n as usize, &coords), out);
    }

    #[test]
    fn form_is_symmetric_and_contravariant((ti, hi, m, level, a, b) in (0usize..8, 0usize..4, 1i64..=2, 0usize..3, 0usize..64, 0usize..64)) {
        let t = even_code(4).unwrap().words()[ti];
        let module = TensorModule::new(h(HS[hi]));
        let (d0, d1) = (module.dim(level), module.dim(level + m as usize));
        prop_assume!(d0 > 0 && d1 > 0);
        let x = module.basis_vector(level, a % d0);
        let y = module.basis_vector(level + m as usize, b % d1);
        let lhs = module.form(&module.lt_action(&t, -m, &x).unwrap(), &y);
        let rhs = module.form(&x, &module.lt_action(&t, m, &y).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(module.form(&x, &module.basis_vector(level, b % d0)), module.form(&module.basis_vector(level, b % d0), &x));
    }
}
