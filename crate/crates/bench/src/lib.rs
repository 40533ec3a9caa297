//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use gcores::groups::s3_sign;
use gcores::{matrix_galgebra, ActionRule, AzumayaPresentation, Carrier, FiniteGroup, GRing, Limits, Subgroup, Transversal};

/// `M_2(R)` over `G` with a transversal of `H = ⟨gens⟩`.
pub fn fixture(group: &str, gens: &[usize], carrier: Carrier, rule: ActionRule) -> (AzumayaPresentation, Transversal) {
    let g = Arc::new(FiniteGroup::preset(group).expect("preset"));
    let r = Arc::new(GRing::new(carrier, g.clone(), &rule).expect("ring"));
    let t = Transversal::decompose(&Subgroup::generated_by(g, gens).expect("subgroup"));
    (matrix_galgebra(&r, 2, &Limits::default()).expect("matrix algebra"), t)
}

/// `M_2(GF(2))` over `C2`, `H` trivial.
pub fn c2_m2_gf2() -> (AzumayaPresentation, Transversal) {
    fixture("C2", &[], Carrier::GaloisField { p: 2, k: 1 }, ActionRule::Trivial)
}

/// `M_2(GF(4))` over `S3` acting through sign and Frobenius, `H = ⟨(12)⟩`.
pub fn s3_m2_gf4() -> (AzumayaPresentation, Transversal) {
    fixture("S3", &[1], Carrier::GaloisField { p: 2, k: 2 }, ActionRule::Frobenius(s3_sign()))
}
