mod common;

use common::{ising_dims, q, tensor_dim, Q};
use isingform::codes::{c16, even_code, hamming8, span};
use isingform::lattice::{
    check_admissible, compare, contains, graded_dual, gram_matrix, lattice_at_level, saturate_generated_form, spanning_monomials,
    LatticeEntry, ModuleForm,
};
use isingform::virasoro::scaling_admissible;
use isingform::{Error, HVector, TensorModule, TensorVector, Word};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn h(s: &str) -> HVector {
    s.parse().unwrap()
}

#[test]
fn admissibility() {
    let e4 = even_code(4).unwrap();
    assert!(check_admissible(&e4, &h("1/2,1/2,0,0")).is_ok());
    assert!(check_admissible(&e4, &h("1/2,0,0,0")).is_err());
    assert!(matches!(
        check_admissible(&e4, &HVector::vacuum(8)),
        Err(Error::WidthMismatch { .. })
    ));
    let sixteen = HVector::uniform(16, isingform::IsingWeight::Sixteenth);
    assert!(check_admissible(&c16(), &sixteen).is_ok());
    // (8 - 2|T|)/16 is not integral for weight-2 words of even:8
    assert!(check_admissible(&even_code(8).unwrap(), &HVector::uniform(8, isingform::IsingWeight::Sixteenth)).is_err());
}

#[test]
fn monomial_shapes() {
    let e4 = even_code(4).unwrap();
    let vac = HVector::vacuum(4);
    let l6 = spanning_monomials(&e4, &vac, 6).unwrap();
    assert!(l6.iter().all(|m| m.factors.iter().all(|&(_, n)| n >= 2)));
    assert!(l6.iter().all(|m| m.factors.windows(2).all(|w| w[0].1 >= w[1].1)));
    assert!(l6.iter().all(|m| m.factors.iter().all(|(t, _)| !t.contains(1))));
    let mut shapes: Vec<Vec<u32>> = l6.iter().map(|m| m.factors.iter().map(|&(_, n)| n).collect()).collect();
    shapes.dedup();
    assert_eq!(shapes, vec![vec![6], vec![4, 2], vec![3, 3], vec![2, 2, 2]]);
    let m1 = spanning_monomials(&e4, &h("1/2,1/2,0,0"), 3).unwrap();
    assert!(m1.iter().any(|m| m.factors.iter().any(|&(_, n)| n == 1)));
}

#[test]
fn vacuum_forms_full_rank_with_omega() {
    for (code, max) in [(even_code(4).unwrap(), 6), (hamming8(), 4), (even_code(8).unwrap(), 4)] {
        let n = code.len();
        let dims = vec![ising_dims("0", max); n];
        let mut form = ModuleForm::new(&code, &HVector::vacuum(n)).unwrap();
        for level in 0..=max {
            let e = form.lattice(level);
            assert_eq!(e.rank(), tensor_dim(&dims, level), "n={n} level={level}");
            assert!(e.is_full_rank());
        }
        let l2 = form.lattice(2);
        let module = form.module();
        assert!(contains(module, &l2, &module.omega_t(&Word::empty(n)).unwrap()).unwrap());
        let half = Q::from_integer((code.size() / 2).into());
        for i in 1..=n {
            assert!(contains(module, &l2, &module.omega_i(i).unwrap().scaled(&half)).unwrap());
        }
    }
    let e0 = lattice_at_level(&even_code(4).unwrap(), &HVector::vacuum(4), 0).unwrap();
    assert_eq!(e0, LatticeEntry::from_rational_rows(0, 1, &[vec![Q::one()]]));
}

#[test]
fn sixteenth_module_full_rank() {
    let sixteen = HVector::uniform(16, isingform::IsingWeight::Sixteenth);
    let dims = vec![ising_dims("1/16", 2); 16];
    let mut form = ModuleForm::new(&c16(), &sixteen).unwrap();
    for level in 0..=2 {
        assert_eq!(form.lattice(level).rank(), tensor_dim(&dims, level));
    }
}

#[test]
fn lowering_modes_preserve_the_form() {
    let code = even_code(4).unwrap();
    for hv in ["0,0,0,0", "1/2,1/2,0,0", "0,0,1/2,1/2"] {
        let mut form = ModuleForm::new(&code, &h(hv)).unwrap();
        let cutoff = 5;
        let lattices: Vec<LatticeEntry> = (0..=cutoff).map(|l| form.lattice(l)).collect();
        let module = form.module();
        for level in 0..cutoff {
            for row in lattices[level].basis() {
                let v = module.from_coordinates(level, &row);
                for t in code.words() {
                    for m in 1..=(cutoff - level) {
                        let image = module.lt_action(t, -(m as i64), &v).unwrap();
                        assert!(
                            contains(module, &lattices[level + m], &image).unwrap(),
                            "H={hv} level={level} T={t} m={m}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn duals_are_preserved_by_modes() {
    let code = even_code(4).unwrap();
    let mut form = ModuleForm::new(&code, &h("1/2,1/2,0,0")).unwrap();
    let top = 4;
    let entries: Vec<LatticeEntry> = (0..=top).map(|l| form.lattice(l)).collect();
    let module = form.module();
    let duals: Vec<LatticeEntry> = entries.iter().map(|e| graded_dual(module, e).unwrap().dual).collect();
    for level in 0..=top {
        for row in duals[level].basis() {
            let v = module.from_coordinates(level, &row);
            for t in code.words() {
                for m in 1..=2i64 {
                    if level + (m as usize) <= top {
                        let up = module.lt_action(t, -m, &v).unwrap();
                        assert!(contains(module, &duals[level + m as usize], &up).unwrap());
                    }
                    if level >= m as usize {
                        let down = module.lt_action(t, m, &v).unwrap();
                        assert!(contains(module, &duals[level - m as usize], &down).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn example_gram_and_dual() {
    let code = even_code(4).unwrap();
    let mut form = ModuleForm::new(&code, &h("1/2,1/2,0,0")).unwrap();
    let entry = form.lattice(1);
    let l0 = form.lattice(0);
    let module = form.module();
    let a = module.factor_mode(0, -1, &module.lowest());
    let b = module.factor_mode(1, -1, &module.lowest());
    let rows = vec![module.coordinates(&a.plus(&b)), module.coordinates(&a.minus(&b))];
    assert_eq!(
        gram_matrix(module, 1, &rows),
        vec![vec![q(2, 1), Q::zero()], vec![Q::zero(), q(2, 1)]]
    );
    let d = graded_dual(module, &entry).unwrap();
    assert_eq!(d.index, q(4, 1));
    assert!(d.contains_lattice);
    let cmp = compare(&entry, &d.dual).unwrap();
    assert!(cmp.a_in_b && !cmp.b_in_a);
    assert_eq!(cmp.index, Some(q(4, 1)));
    let d0 = graded_dual(module, &l0).unwrap();
    assert_eq!(d0.index, Q::one());
    assert!(compare(&l0, &d0.dual).unwrap().equal());
}

#[test]
fn dual_errors() {
    let module = TensorModule::new(HVector::vacuum(4));
    let partial = LatticeEntry::from_rational_rows(2, 4, &[vec![Q::one(), Q::zero(), Q::zero(), Q::zero()]]);
    assert!(matches!(graded_dual(&module, &partial), Err(Error::RankDeficient(2))));
}

#[test]
fn two_omega_saturation() {
    let module = TensorModule::new(HVector::vacuum(1));
    let omega = module.omega_i(1).unwrap();
    let (lat, report) = saturate_generated_form(&module, &[omega.scaled(&q(2, 1))], 6, 8).unwrap();
    assert!(report.stabilized);
    assert_eq!(report.note, "stabilized (heuristic)");
    let l2 = &lat.per_level[&2];
    assert_eq!(
        *l2,
        LatticeEntry::from_rational_rows(2, 1, &[module.coordinates(&omega.scaled(&q(2, 1)))])
    );
    assert!(!contains(&module, l2, &omega).unwrap());
    assert!(scaling_admissible(&q(2, 1), &q(1, 2)) && !scaling_admissible(&Q::one(), &q(1, 2)));
}

#[test]
fn empty_generators() {
    let module = TensorModule::new(HVector::vacuum(2));
    let (lat, report) = saturate_generated_form(&module, &[], 4, 4).unwrap();
    assert!(report.stabilized);
    assert_eq!(lat.per_level[&0].rank(), 1);
    assert!((1..=4).all(|l| lat.per_level[&l].rank() == 0));
    assert!(saturate_generated_form(&module, &[module.lowest()], 2, 2).is_err());
}

#[test]
fn omega_t_generators_reproduce_code_form() {
    let code = even_code(4).unwrap();
    let module = TensorModule::new(HVector::vacuum(4));
    let gens: Vec<TensorVector> = code.words().iter().map(|t| module.omega_t(t).unwrap()).collect();
    let max = 3;
    let (lat, report) = saturate_generated_form(&module, &gens, max, 4).unwrap();
    assert!(report.stabilized);
    let mut form = ModuleForm::new(&code, &HVector::vacuum(4)).unwrap();
    for level in 0..=max {
        assert_eq!(lat.per_level[&level], form.lattice(level), "level {level}");
    }
}

#[test]
fn compare_scaled_and_mismatched() {
    let mut form = ModuleForm::new(&even_code(4).unwrap(), &HVector::vacuum(4)).unwrap();
    let l = form.lattice(4);
    let doubled: Vec<Vec<Q>> = l.basis().iter().map(|r| r.iter().map(|x| x * q(2, 1)).collect()).collect();
    let l2 = LatticeEntry::from_rational_rows(4, l.ambient_dim, &doubled);
    let c = compare(&l2, &l).unwrap();
    assert!(c.a_in_b && !c.b_in_a);
    assert_eq!(c.index, Some(Q::from_integer(num_bigint::BigInt::from(2).pow(l.rank() as u32))));
    assert!(compare(&l, &form.lattice(3)).is_err());
}

fn shuffled_rows() -> impl Strategy<Value = Vec<usize>> {
    Just((0..44).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hnf_ignores_row_order(perm in shuffled_rows()) {
        let code = hamming8();
        let mut form = ModuleForm::new(&code, &HVector::vacuum(8)).unwrap();
        let vectors = form.spanning_vectors(4);
        prop_assert_eq!(vectors.len(), 44);
        let module = form.module();
        let rows: Vec<Vec<Q>> = vectors.iter().map(|(_, v)| module.coordinates(v)).collect();
        let shuffled: Vec<Vec<Q>> = perm.iter().map(|&i| rows[i].clone()).collect();
        let a = LatticeEntry::from_rational_rows(4, module.dim(4), &rows);
        let b = LatticeEntry::from_rational_rows(4, module.dim(4), &shuffled);
        prop_assert_eq!(&a, &b);
        let again = LatticeEntry::from_rational_rows(4, module.dim(4), &a.basis());
        prop_assert_eq!(&again, &a);
    }

    #[test]
    fn omega_in_every_passing_code(extra in prop::collection::vec(0u64..256, 0..3)) {
        let mut gens: Vec<Word> = hamming8().basis().to_vec();
        gens.extend(extra.iter().filter(|b| b.count_ones() % 2 == 0).map(|&b| Word::new(8, b).unwrap()));
        let code = span(8, &gens).unwrap();
        let mut form = ModuleForm::new(&code, &HVector::vacuum(8)).unwrap();
        let l2 = form.lattice(2);
        prop_assert!(l2.is_full_rank());
        let module = form.module();
        prop_assert!(contains(module, &l2, &module.omega_t(&Word::empty(8)).unwrap()).unwrap());
    }
}
