//! Property tests for the structural invariants, over a small catalog of
//! groups, subgroups and G-rings.

use std::sync::Arc;

use gcores::algebras::{
    azumaya_check, end_galgebra, matrix_galgebra, tensor_galgebra, tensor_presentation, AzumayaPresentation,
    GAlgebra, StructureConstants,
};
use gcores::cores::{cores, cores_product_iso};
use gcores::goldman::{pi_map, star_module, switch_system, trd_equivariance_check};
use gcores::groups::{s3_sign, FiniteGroup, Permutation, Subgroup, Transversal};
use gcores::linalg::{self, SparseMatrix, SparseVec};
use gcores::modules::{
    tensor_induce, tensor_vecs, ti_action_apply, ti_hom, ti_universal_factorize, ModuleHom, SemilinearModule,
};
use gcores::{ActionRule, Carrier, GRing, Limits};
use proptest::prelude::*;

/// `(group, subgroup generators, carrier, action)`.
fn catalog() -> Vec<(&'static str, Vec<usize>, Carrier, ActionRule)> {
    let gf = |p, k| Carrier::GaloisField { p, k };
    vec![
        ("C2", vec![], gf(2, 1), ActionRule::Trivial),
        ("C2", vec![], gf(2, 2), ActionRule::Frobenius(vec![0, 1])),
        ("C3", vec![], Carrier::Zmod(4), ActionRule::Trivial),
        ("C2xC2", vec![1], Carrier::Zmod(3), ActionRule::Trivial),
        ("S3", vec![1], gf(2, 2), ActionRule::Frobenius(s3_sign())),
        (
            "C2",
            vec![],
            Carrier::Product { base: Box::new(gf(2, 1)), copies: 2 },
            ActionRule::Product { permutations: vec![vec![0, 1], vec![1, 0]], twists: None },
        ),
        ("C4", vec![2], gf(3, 2), ActionRule::Frobenius(vec![0, 1, 0, 1])),
    ]
}

struct Case {
    ring: Arc<GRing>,
    h: Subgroup,
    t: Transversal,
}

fn case(i: usize) -> Case {
    let (group, gens, carrier, rule) = catalog().swap_remove(i);
    let g = Arc::new(FiniteGroup::preset(group).unwrap());
    let ring = Arc::new(GRing::new(carrier, g.clone(), &rule).unwrap());
    let h = Subgroup::generated_by(g, &gens).unwrap();
    let t = Transversal::decompose(&h);
    Case { ring, h, t }
}

fn small_cases() -> impl Strategy<Value = usize> {
    0..catalog().len()
}

fn m2(ring: &Arc<GRing>) -> AzumayaPresentation {
    matrix_galgebra(ring, 2, &Limits::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn coset_permutation_is_a_homomorphism(group in prop::sample::select(vec!["C2", "C4", "C2xC2", "S3", "S4"]),
                                            gens in prop::collection::vec(0usize..24, 0..3)) {
        let g = Arc::new(FiniteGroup::preset(group).unwrap());
        let gens: Vec<usize> = gens.into_iter().map(|x| x % g.order()).collect();
        let h = Subgroup::generated_by(g.clone(), &gens).unwrap();
        let t = Transversal::decompose(&h);
        for a in g.elements() {
            for b in g.elements() {
                prop_assert_eq!(t.coset_permutation(a).then(&t.coset_permutation(b)), t.coset_permutation(g.mul(a, b)));
            }
        }
        // t_i g = h t_j has exactly one solution (h, j)
        for i in 0..t.index() {
            for x in g.elements() {
                let lhs = g.mul(t.reps()[i], x);
                let solutions = h.elements().iter()
                    .flat_map(|&y| t.reps().iter().map(move |&r| (y, r)))
                    .filter(|&(y, r)| g.mul(y, r) == lhs)
                    .count();
                prop_assert_eq!(solutions, 1);
                let (y, j) = t.factor(i, x);
                prop_assert_eq!(g.mul(y, t.reps()[j]), lhs);
            }
        }
    }

    #[test]
    fn adjacent_decompose_round_trip(images in (0usize..=5).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let n = images.len();
        let p = Permutation::from_images(images).unwrap();
        let rebuilt = p.adjacent_decompose().into_iter()
            .fold(Permutation::identity(n), |acc, a| acc.then(&Permutation::transposition(n, a, a + 1)));
        prop_assert_eq!(rebuilt, p);
    }

    #[test]
    fn ring_actions_are_right_actions_by_automorphisms(i in small_cases(), r in 0u8..=255, s in 0u8..=255) {
        let c = case(i);
        let ring = &c.ring;
        let (r, s) = (r % ring.order() as u8, s % ring.order() as u8);
        let g = ring.group();
        for x in g.elements() {
            prop_assert_eq!(ring.act(ring.add(r, s), x), ring.add(ring.act(r, x), ring.act(s, x)));
            prop_assert_eq!(ring.act(ring.mul(r, s), x), ring.mul(ring.act(r, x), ring.act(s, x)));
            prop_assert_eq!(ring.act(ring.one(), x), ring.one());
            for y in g.elements() {
                prop_assert_eq!(ring.act(ring.act(r, x), y), ring.act(r, g.mul(x, y)));
            }
        }
        let fixed = ring.fixed_subring();
        prop_assert!(fixed.contains(&0) && fixed.contains(&ring.one()));
        for &a in &fixed {
            for &b in &fixed {
                prop_assert!(fixed.contains(&ring.add(a, b)) && fixed.contains(&ring.mul(a, b)));
            }
            prop_assert!(fixed.contains(&ring.neg(a)));
        }
    }

    #[test]
    fn tensor_induced_action_is_associative(i in small_cases(), seed in any::<u64>()) {
        let c = case(i);
        let v = SemilinearModule::permutation(
            c.ring.clone(),
            Subgroup::whole(c.ring.group().clone()),
            &vec![vec![0, 1]; c.ring.group().order()],
        ).unwrap().restrict(&c.h).unwrap();
        let ti = tensor_induce(&v, &c.t, &Limits::default()).unwrap();
        let g = c.ring.group();
        let x = linalg::unit_vec((seed as usize) % ti.module().rank(), c.ring.one());
        for a in g.elements() {
            let xa = ti_action_apply(&ti, &x, a);
            prop_assert_eq!(&xa, &ti.module().act(&x, a));
            for b in g.elements() {
                prop_assert_eq!(ti_action_apply(&ti, &xa, b), ti_action_apply(&ti, &x, g.mul(a, b)));
            }
        }
    }

    #[test]
    fn ti_hom_is_a_functor(i in small_cases(), entries in prop::collection::vec(any::<u8>(), 8)) {
        let c = case(i);
        let fixed: Vec<u8> = c.ring.elements()
            .filter(|&r| c.h.elements().iter().all(|&x| c.ring.act(r, x) == r))
            .collect();
        let v = SemilinearModule::trivial(c.ring.clone(), c.h.clone(), 2).unwrap();
        let mat = |e: &[u8]| SparseMatrix::from_dense(&[
            vec![fixed[e[0] as usize % fixed.len()], fixed[e[1] as usize % fixed.len()]],
            vec![fixed[e[2] as usize % fixed.len()], fixed[e[3] as usize % fixed.len()]],
        ]);
        let phi = ModuleHom::new(v.clone(), v.clone(), mat(&entries[..4])).unwrap();
        let psi = ModuleHom::new(v.clone(), v.clone(), mat(&entries[4..])).unwrap();
        let limits = Limits::default();
        let lhs = ti_hom(&phi.then(&psi).unwrap(), &c.t, &limits).unwrap();
        let rhs = ti_hom(&phi, &c.t, &limits).unwrap().then(&ti_hom(&psi, &c.t, &limits).unwrap()).unwrap();
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
        prop_assert!(lhs.is_rg_hom());
    }

    #[test]
    fn universal_factorization_agrees_with_beta(i in small_cases()) {
        let c = case(i);
        let a = m2(&c.ring).algebra().restrict(&c.h).unwrap();
        let v = a.module().clone();
        let cc = cores(&a, &c.t, &Limits::default()).unwrap();
        let mus: Vec<SparseMatrix> = (0..c.t.index()).map(|w| cc.mu(w)).collect();
        let alg = cc.algebra().clone();
        let ring = c.ring.clone();
        let beta = |slots: &[SparseVec]| {
            slots.iter().enumerate().fold(alg.one().clone(), |acc, (w, s)| alg.mul(&acc, &mus[w].apply(&ring, s)))
        };
        let (phi, _) = ti_universal_factorize(&v, &c.t, alg.module(), beta).unwrap();
        let n = c.t.index();
        for idx in 0..alg.rank() {
            let tuple = gcores::modules::index_tuple(idx, 4, n);
            let slots: Vec<SparseVec> = tuple.iter().map(|&k| linalg::unit_vec(k, ring.one())).collect();
            prop_assert_eq!(phi.apply(&tensor_vecs(&ring, &slots, 4)), beta(&slots));
        }
    }

    #[test]
    fn constructors_satisfy_the_algebra_axioms(i in small_cases(), which in 0usize..4) {
        let c = case(i);
        let limits = Limits::default();
        let whole = Subgroup::whole(c.ring.group().clone());
        let p = SemilinearModule::permutation(c.ring.clone(), whole, &vec![vec![0, 1]; c.ring.group().order()]).unwrap();
        let a = match which {
            0 => matrix_galgebra(&c.ring, 1, &limits).unwrap(),
            1 => m2(&c.ring),
            2 => end_galgebra(&p, &limits).unwrap(),
            _ => tensor_presentation(&m2(&c.ring), &m2(&c.ring).opposite(), &limits).unwrap(),
        };
        a.algebra().verify_axioms().unwrap();
        a.check_trace_symmetric().unwrap();
        prop_assert!(trd_equivariance_check(&a).passed());
        prop_assert!(azumaya_check(a.algebra(), &limits).unwrap().is_azumaya);
        prop_assert_eq!(&a.algebra().opposite().opposite(), a.algebra());
        let cc = cores(&a.algebra().restrict(&c.h).unwrap(), &c.t, &limits).unwrap();
        cc.check_diagram().unwrap();
        if cc.algebra().rank() <= 16 {
            prop_assert!(azumaya_check(cc.algebra(), &limits).unwrap().is_azumaya);
        }
    }

    #[test]
    fn pi_is_central_and_star_is_an_action(i in small_cases()) {
        let c = case(i);
        let sw = switch_system(&m2(&c.ring), c.t.index(), &Limits::default()).unwrap();
        let pi = pi_map(&sw, &c.t).unwrap();
        let b = sw.power().algebra();
        for x in c.ring.group().elements() {
            for y in c.ring.group().elements() {
                prop_assert_eq!(&b.act(pi.value(x), y), pi.value(x));
            }
        }
        star_module(&pi).unwrap();
    }
}

#[test]
fn matrix_algebras_are_azumaya_and_dual_numbers_are_not() {
    let limits = Limits::default();
    for i in 0..catalog().len() {
        let c = case(i);
        for n in 1..=2 {
            assert!(azumaya_check(matrix_galgebra(&c.ring, n, &limits).unwrap().algebra(), &limits).unwrap().is_azumaya);
        }
    }
    let r = case(0).ring;
    let module = SemilinearModule::trivial(r.clone(), Subgroup::whole(r.group().clone()), 2).unwrap();
    let mult = StructureConstants::from_fn(2, |i, j| if i + j >= 2 { vec![] } else { vec![((i + j) as u32, 1)] });
    let dual = GAlgebra::new(module, mult, vec![(0, 1)]).unwrap();
    let cert = azumaya_check(&dual, &limits).unwrap();
    assert!(!cert.is_azumaya && cert.kernel_vector.is_some());
}

#[test]
fn coxeter_relations_up_to_four_slots() {
    let a = m2(&case(1).ring);
    for n in 2..=4 {
        let sw = switch_system(&a, n, &Limits::default()).unwrap();
        sw.check_coxeter().unwrap();
        sw.check_slot_conjugation().unwrap();
    }
}

#[test]
fn product_iso_is_associative_up_to_reassociation() {
    let c = case(0);
    let limits = Limits::default();
    let a = m2(&c.ring).algebra().restrict(&c.h).unwrap();
    let (x, y, z) = (a.clone(), a.clone(), a.clone());
    let xy = tensor_galgebra(&x, &y, &limits).unwrap();
    let yz = tensor_galgebra(&y, &z, &limits).unwrap();
    let cz = cores(&z, &c.t, &limits).unwrap();
    let cx = cores(&x, &c.t, &limits).unwrap();
    let ring = &c.ring;
    // (Cx ⊗ Cy) ⊗ Cz → C(x⊗y) ⊗ Cz → C((x⊗y)⊗z)
    let left = cores_product_iso(&x, &y, &c.t, &limits)
        .unwrap()
        .matrix()
        .kron(ring, &SparseMatrix::identity(ring, cz.algebra().rank()))
        .mul(ring, cores_product_iso(&xy, &z, &c.t, &limits).unwrap().matrix());
    // Cx ⊗ (Cy ⊗ Cz) → Cx ⊗ C(y⊗z) → C(x⊗(y⊗z))
    let right = SparseMatrix::identity(ring, cx.algebra().rank())
        .kron(ring, cores_product_iso(&y, &z, &c.t, &limits).unwrap().matrix())
        .mul(ring, cores_product_iso(&x, &yz, &c.t, &limits).unwrap().matrix());
    // row-major flattening makes both reassociations the identity on indices
    assert_eq!(left, right);
}
