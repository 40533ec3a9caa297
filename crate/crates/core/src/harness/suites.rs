use crate::algebras::{
    equivalence_witness_check, iso_check, unit_algebra, EquivalenceWitness, GAlgebra, GAlgebraHom,
};
use crate::cores::{
    base_change_cores_iso, cores, cores_end_iso, cores_equivalence, cores_hom, cores_product_iso, cores_universal,
    transversal_change_iso,
};
use crate::error::{Error, Result};
use crate::goldman::{goldman_element, rescores_witness, switch_system, trd_equivariance_check, RescoresOptions};
use crate::groups::Transversal;
use crate::linalg::{self, SparseMatrix};
use crate::modules::{tensor_induce, ti_hom, ti_nonadditivity_witness, ti_universal_factorize, ModuleHom};

use super::scenario::Resolved;
use super::Suite;

/// Identity counts per named check, plus free-form notes.
#[derive(Default)]
pub(super) struct Outcome {
    pub checks: Vec<(String, u64)>,
    pub notes: Vec<String>,
}

impl Outcome {
    fn push(&mut self, name: &str, count: u64) {
        self.checks.push((name.to_string(), count));
    }
}

pub(super) fn run(suite: Suite, s: &Resolved, full_epsilon: bool) -> Result<Outcome> {
    let mut out = Outcome::default();
    let limits = &s.limits;
    let a = &s.algebra;
    let t = &s.transversal;
    let a_h = || a.algebra().restrict(&s.subgroup);
    match suite {
        Suite::TraceEquivariance => {
            out.push("trd(b^g) = trd(b)^g", trd_equivariance_check(a).into_result()?);
            out.push("trd(ab) = trd(ba)", a.check_trace_symmetric()?);
        }
        Suite::Goldman => {
            let g = goldman_element(a, limits)?;
            out.push("sum x_i a y_i = trd(a) 1", g.check_defining_identity()?);
            out.push("t^2 = 1", g.check_involution()?);
            out.push("(a ⊗ b) t = t (b ⊗ a)", g.check_switch()?);
            out.push("t^g = t", g.check_invariant()?);
        }
        Suite::SwitchHomomorphism => {
            let n = t.index().max(3);
            let sw = switch_system(a, n, limits)?;
            out.notes.push(format!("degree {n}"));
            out.push("coxeter relations", sw.check_coxeter()?);
            out.push("slot conjugation", sw.check_slot_conjugation()?);
            out.push("sigma(pq) = sigma(p) sigma(q)", sw.check_homomorphism()?);
            out.push("sigma(p)^g = sigma(p)", sw.check_invariant()?);
        }
        Suite::TensorInductionUniversal => {
            let v = a_h()?.module().clone();
            let ti = tensor_induce(&v, t, limits)?;
            let m = v.rank();
            let ring = v.ring().clone();
            let tau = |slots: &[linalg::SparseVec]| crate::modules::tensor_vecs(&ring, slots, m);
            let (phi, count) = ti_universal_factorize(&v, t, ti.module(), tau)?;
            out.push("tau is multilinear and equivariant", count);
            if !phi.matrix().is_identity(v.ring()) {
                return Err(Error::identity("factorization of tau is the identity", "tensor induced module"));
            }
            out.push("factorization of tau is the identity", 1);
        }
        Suite::TensorInductionFunctor => {
            let v = a_h()?.module().clone();
            let id = ModuleHom::identity(v.clone());
            let lifted = ti_hom(&id, t, limits)?;
            if !lifted.matrix().is_identity(v.ring()) {
                return Err(Error::identity("id^(⊗G) = id", "tensor induced module"));
            }
            out.push("id^(⊗G) = id", 1);
            let zero = ModuleHom::new(v.clone(), v.clone(), SparseMatrix::zero(v.rank(), v.rank()))?;
            if ti_hom(&zero, t, limits)?.matrix().nnz() != 0 {
                return Err(Error::identity("0^(⊗G) = 0", "tensor induced module"));
            }
            out.push("0^(⊗G) = 0", 1);
        }
        Suite::TensorInductionNonadditive => {
            let r = crate::modules::SemilinearModule::trivial(s.ring.clone(), s.subgroup.clone(), 1)?;
            match ti_nonadditivity_witness(&r, t) {
                Some((x, y)) => {
                    out.notes.push(format!("r = {x}, r' = {y}"));
                    out.push("(r + r')^(⊗G) != r^(⊗G) + r'^(⊗G)", 1);
                }
                None => {
                    return Err(Error::identity(
                        "some (r + r')^(⊗G) != r^(⊗G) + r'^(⊗G)",
                        "no pair of scalars on R",
                    ))
                }
            }
        }
        Suite::CoresAction => {
            let c = cores(&a_h()?, t, limits)?;
            out.push("algebra axioms", c.algebra().verify_axioms()?);
            out.push("(a mu_H)^g = a^(⊗g) mu_(Hg)", c.check_diagram()?);
            out.push("slot images commute", c.check_commuting()?);
            out.push("mu_H is an H-algebra map", c.mu_hom()?.check_hom()?);
        }
        Suite::CoresUniversal => {
            let c = cores(&a_h()?, t, limits)?;
            let (alpha, count) = cores_universal(&c, c.algebra(), &c.mu(0))?;
            out.push("universal map of mu_H", count);
            if !alpha.matrix().is_identity(a.algebra().ring()) {
                return Err(Error::identity("universal map of mu_H is the identity", "Cores(A)"));
            }
            out.push("universal map of mu_H is the identity", 1);
        }
        Suite::CoresFunctor => {
            let ah = a_h()?;
            let f = unit_conjugation(&ah)?;
            out.notes.push("conjugation by an H-fixed unit 1 + b_k".into());
            let ff = f.then(&f)?;
            let (cf, cff) = (cores_hom(&f, t, limits)?, cores_hom(&ff, t, limits)?);
            out.push("Cores(f) is an isomorphism", iso_check(&cf)?);
            if cf.then(&cf)?.matrix() != cff.matrix() {
                return Err(Error::identity("Cores(f f) = Cores(f) Cores(f)", "conjugation"));
            }
            out.push("Cores(f f) = Cores(f) Cores(f)", 1);
            if !cores_hom(&GAlgebraHom::identity(&ah), t, limits)?.matrix().is_identity(ah.ring()) {
                return Err(Error::identity("Cores(id) = id", "Cores(A)"));
            }
            out.push("Cores(id) = id", 1);
        }
        Suite::CoresProduct => {
            let ah = a_h()?;
            out.push("Cores(A) ⊗ Cores(A) ≅ Cores(A ⊗ A)", iso_check(&cores_product_iso(&ah, &ah, t, limits)?)?);
        }
        Suite::BaseChange => {
            let ext = s.scenario.extension.as_ref().ok_or_else(|| Error::Resolve("base-change needs an extension".into()))?;
            let phi = ext.build(&s.ring).map_err(super::scenario::classify)?;
            let f = base_change_cores_iso(&a_h()?, &phi, &ext.basis, t, limits)?;
            out.push("Cores(A ⊗ S) ≅ Cores(A) ⊗ S", iso_check(&f)?);
        }
        Suite::CoresEnd => {
            let spec = s.scenario.module.clone().unwrap_or(super::scenario::ModuleSpec::Trivial(2));
            let p = spec.build(&s.ring).map_err(super::scenario::classify)?.restrict(&s.subgroup)?;
            out.push("End(P^(⊗G)) ≅ Cores(End P)", iso_check(&cores_end_iso(&p, t, limits)?)?);
        }
        Suite::CoresEquivalence => {
            let ah = a_h()?;
            let w = match s.scenario.algebra.splitting_module() {
                Some(spec) => {
                    let p = spec.build(&s.ring).map_err(super::scenario::classify)?.restrict(&s.subgroup)?;
                    out.notes.push("A ⊗ End(R) ≅ R ⊗ End(P) for A = End(P)".into());
                    let r = crate::modules::SemilinearModule::trivial(s.ring.clone(), s.subgroup.clone(), 1)?;
                    EquivalenceWitness {
                        iso: SparseMatrix::identity(&s.ring, ah.rank()),
                        a: ah,
                        p: r,
                        b: unit_algebra(&s.ring, s.subgroup.clone())?.algebra().clone(),
                        q: p,
                        provenance: "A = End(P)".into(),
                    }
                }
                None => {
                    out.notes.push("reflexive witness".into());
                    EquivalenceWitness::reflexive(&ah)?
                }
            };
            out.push("input witness", equivalence_witness_check(&w, limits)?);
            out.push("corestricted witness", equivalence_witness_check(&cores_equivalence(&w, t, limits)?, limits)?);
        }
        Suite::TransversalIndependence => {
            let t2 = match &s.scenario.alt_transversal {
                Some(reps) => Transversal::from_reps(&s.subgroup, reps).map_err(super::scenario::classify)?,
                None => last_representatives(t),
            };
            out.notes.push(format!("representatives {:?} and {:?}", t.reps(), t2.reps()));
            out.push("Cores(A; T) ≅ Cores(A; T')", iso_check(&transversal_change_iso(&a_h()?, t, &t2, limits)?)?);
        }
        Suite::Degenerate => {
            let whole = Transversal::decompose(&crate::groups::Subgroup::whole(s.group.clone()));
            let c = cores(a.algebra(), &whole, limits)?;
            if c.algebra() != a.algebra() || !c.mu(0).is_identity(&s.ring) {
                return Err(Error::identity("Cores over H = G is the algebra itself", "whole group"));
            }
            out.push("Cores over H = G is the algebra itself", 1);
        }
        Suite::Rescores => {
            let options = RescoresOptions { check_epsilon: full_epsilon, build_witness: full_epsilon };
            if !full_epsilon {
                out.notes.push("epsilon isomorphism check gated off".into());
            }
            let w = rescores_witness(a, t, options, limits)?;
            for (name, count) in w.checks {
                out.push(name, count);
            }
        }
    }
    Ok(out)
}

/// Conjugation `x ↦ u^{-1} x u` by the first `u = 1 + b_k` that is a unit
/// fixed by the acting group, or the identity if there is none.
fn unit_conjugation(a: &GAlgebra) -> Result<GAlgebraHom> {
    let ring = a.ring();
    for k in 0..a.rank() {
        let u = linalg::add(ring, a.one(), &a.basis(k));
        if a.group().elements().iter().any(|&g| a.act(&u, g) != u) {
            continue;
        }
        let Some(inv) = linalg::inverse(ring, &a.right_mul_matrix(&u)) else { continue };
        let u_inv = inv.apply(ring, a.one());
        let rows = (0..a.rank()).map(|i| a.mul(&a.mul(&u_inv, &a.basis(i)), &u)).collect();
        return GAlgebraHom::new(a.clone(), a.clone(), SparseMatrix::from_rows(a.rank(), rows));
    }
    Ok(GAlgebraHom::identity(a))
}

/// Each coset represented by its largest element, identity kept first.
fn last_representatives(t: &Transversal) -> Transversal {
    let g = t.group();
    let mut reps = vec![g.identity(); t.index()];
    for x in g.elements() {
        let i = t.coset_of(x);
        if i != 0 {
            reps[i] = reps[i].max(x);
        }
    }
    Transversal::from_reps(t.subgroup(), &reps).expect("one element per coset")
}
