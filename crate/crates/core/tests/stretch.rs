//! Full ε isomorphism checks on the larger witnesses (rank-4096 End algebras).

use std::sync::Arc;

use gcores::algebras::matrix_galgebra;
use gcores::goldman::{rescores_witness, RescoresOptions};
use gcores::groups::{s3_sign, FiniteGroup, Subgroup, Transversal};
use gcores::{ActionRule, Carrier, GRing, Limits};

fn full_witness(group: &str, gens: &[usize], carrier: Carrier, rule: ActionRule) {
    let g = Arc::new(FiniteGroup::preset(group).unwrap());
    let r = Arc::new(GRing::new(carrier, g.clone(), &rule).unwrap());
    let t = Transversal::decompose(&Subgroup::generated_by(g, gens).unwrap());
    let a = matrix_galgebra(&r, 2, &Limits::default()).unwrap();
    let w = rescores_witness(&a, &t, RescoresOptions::default(), &Limits::default()).unwrap();
    assert_eq!(w.epsilon.source().rank(), 4096);
    let eps = w.checks.iter().find(|c| c.0 == "epsilon iso").unwrap().1;
    assert_eq!(eps, 1 + 4096 * 4096 + 4096 * t.group().order() as u64 + 1);
    assert!(w.checks.iter().any(|c| c.0 == "equivalence witness"));
}

#[test]
fn s3_over_gf4_with_sign_frobenius() {
    full_witness("S3", &[1], Carrier::GaloisField { p: 2, k: 2 }, ActionRule::Frobenius(s3_sign()));
}

#[test]
fn c3_over_z4_with_trivial_subgroup() {
    full_witness("C3", &[], Carrier::Zmod(4), ActionRule::Trivial);
}
