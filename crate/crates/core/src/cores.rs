//! Corestriction of algebras: `Cores(A) = A^{⊗G}` for an H-algebra `A`, its
//! slot embeddings, universal property, functoriality and compatibility
//! with products, scalar extension, endomorphism algebras and equivalence.
//!
//! Slot `i` holds `A ⊗ t_i`, whose structure constants and unit are those of
//! `A` twisted by `t_i`. The underlying module is the tensor-induced module.

use rayon::prelude::*;

use crate::algebras::{
    end_galgebra, iso_check, tensor_galgebra, AzumayaPresentation, EquivalenceWitness, GAlgebra, GAlgebraHom,
    Provenance, StructureConstants,
};
use crate::error::{Error, Result};
use crate::groups::{Subgroup, Transversal};
use crate::limits::Limits;
use crate::linalg::{self, SparseMatrix, SparseVec};
use crate::modules::{index_tuple, routed_kron, tensor_induce, tensor_vecs, ti_hom_matrix, tuple_index};
use crate::rings::{Elem, GRingHom};

#[derive(Clone, Debug)]
pub struct CoresAlgebra {
    base: GAlgebra,
    transversal: Transversal,
    algebra: GAlgebra,
}

pub fn cores(a: &GAlgebra, t: &Transversal, limits: &Limits) -> Result<CoresAlgebra> {
    if a.group() != t.subgroup() {
        return Err(Error::GroupMismatch("algebra group is not the transversal's subgroup".into()));
    }
    let ring = a.ring();
    let module = tensor_induce(a.module(), t, limits)?.module().clone();
    let twisted: Vec<StructureConstants> = t.reps().iter().map(|&ti| a.structure().twisted(ring, ti)).collect();
    let mult = StructureConstants::tensor(ring, &twisted.iter().collect::<Vec<_>>());
    let units: Vec<SparseVec> = t.reps().iter().map(|&ti| linalg::twist(ring, a.one(), ti)).collect();
    let unit = tensor_vecs(ring, &units, a.rank());
    let algebra = GAlgebra::new_unchecked(module, mult, unit)?;
    Ok(CoresAlgebra { base: a.clone(), transversal: t.clone(), algebra })
}

/// Corestriction of a presentation, with `trd(⊗ b_{k_i} ⊗ t_i) = Π trd(b_{k_i})^{t_i}`.
pub fn cores_presentation(
    a: &AzumayaPresentation,
    t: &Transversal,
    limits: &Limits,
) -> Result<(CoresAlgebra, AzumayaPresentation)> {
    let c = cores(a.algebra(), t, limits)?;
    let ring = a.algebra().ring();
    let (d, n) = (a.algebra().rank(), t.index());
    let trace = (0..c.algebra.rank())
        .map(|idx| {
            index_tuple(idx, d, n)
                .into_iter()
                .zip(t.reps())
                .fold(ring.one(), |acc, (k, &ti)| ring.mul(acc, ring.act(a.trace_values()[k], ti)))
        })
        .collect();
    let p = AzumayaPresentation::new(c.algebra.clone(), trace, Provenance::Cores(Box::new(a.provenance().clone()), n))?;
    Ok((c, p))
}

impl CoresAlgebra {
    pub fn algebra(&self) -> &GAlgebra {
        &self.algebra
    }

    pub fn base(&self) -> &GAlgebra {
        &self.base
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn slots(&self) -> usize {
        self.transversal.index()
    }

    /// `μ_ω` as a matrix from slot coordinates `b_k ⊗ t_ω` to `Cores(A)`.
    pub fn mu(&self, omega: usize) -> SparseMatrix {
        let ring = self.base.ring();
        let d = self.base.rank();
        let units: Vec<SparseVec> =
            self.transversal.reps().iter().map(|&ti| linalg::twist(ring, self.base.one(), ti)).collect();
        let rows = (0..d)
            .map(|k| {
                let mut slots = units.clone();
                slots[omega] = linalg::unit_vec(k, ring.one());
                tensor_vecs(ring, &slots, d)
            })
            .collect();
        SparseMatrix::from_rows(self.algebra.rank(), rows)
    }

    /// `μ_H` as an H-algebra map `A → Cores(A)`.
    pub fn mu_hom(&self) -> Result<GAlgebraHom> {
        let target = self.algebra.restrict(self.base.group())?;
        GAlgebraHom::new(self.base.clone(), target, self.mu(0))
    }

    /// `(a μ_H)^g = a^{⊗g} μ_{Hg}` for every basis `a` and `g ∈ G`, where
    /// `a ⊗ g = a^h ⊗ t_j` for `g = h t_j`.
    pub fn check_diagram(&self) -> Result<u64> {
        let ring = self.base.ring();
        let mus: Vec<SparseMatrix> = (0..self.slots()).map(|w| self.mu(w)).collect();
        let mut count = 0;
        for g in self.transversal.group().elements() {
            let (h, j) = self.transversal.factor(0, g);
            let tj = self.transversal.reps()[j];
            for k in 0..self.base.rank() {
                let lhs = self.algebra.act(mus[0].row(k), g);
                let slot = linalg::twist(ring, &self.base.act(&self.base.basis(k), h), tj);
                if lhs != mus[j].apply(ring, &slot) {
                    return Err(Error::identity("(a mu_H)^g = a^(⊗g) mu_(Hg)", format!("basis {k}, g = {g}")));
                }
                count += 1;
            }
        }
        Ok(count)
    }

    /// Images of different slot embeddings commute elementwise.
    pub fn check_commuting(&self) -> Result<u64> {
        let mus: Vec<SparseMatrix> = (0..self.slots()).map(|w| self.mu(w)).collect();
        let d = self.base.rank();
        let mut count = 0;
        for w in 0..self.slots() {
            for w2 in w + 1..self.slots() {
                let failure = (0..d).into_par_iter().find_map_first(|i| {
                    (0..d)
                        .find(|&j| {
                            let (x, y) = (mus[w].row(i), mus[w2].row(j));
                            self.algebra.mul(x, y) != self.algebra.mul(y, x)
                        })
                        .map(|j| (i, j))
                });
                if let Some((i, j)) = failure {
                    return Err(Error::identity(
                        "(a mu_w)(b mu_w') = (b mu_w')(a mu_w)",
                        format!("slots ({w}, {w2}), basis ({i}, {j})"),
                    ));
                }
                count += (d * d) as u64;
            }
        }
        Ok(count)
    }
}

/// Given an H-algebra map `ψ: A → B` into a G-algebra whose image commutes
/// with its `g`-conjugates for `g ∉ H`, the unique G-algebra map
/// `α: Cores(A) → B` with `μ_H α = ψ`, namely `⊗_i (a_i ⊗ t_i) ↦ Π_i (a_i ψ)^{t_i}`.
pub fn cores_universal(c: &CoresAlgebra, b: &GAlgebra, psi: &SparseMatrix) -> Result<(GAlgebraHom, u64)> {
    let h = c.base.group();
    let psi_hom = GAlgebraHom::new(c.base.clone(), b.restrict(h)?, psi.clone())?;
    let mut count = psi_hom.check_hom().map_err(|e| Error::NotHAlgebraHom(Box::new(e)))?;
    let d = c.base.rank();
    let images: Vec<&SparseVec> = psi.rows().iter().collect();
    for g in c.transversal.group().elements().filter(|&g| !h.contains(g)) {
        let conj: Vec<SparseVec> = images.iter().map(|x| b.act(x, g)).collect();
        let failure = (0..d).into_par_iter().find_map_first(|i| {
            (0..d).find(|&j| b.mul(images[i], &conj[j]) != b.mul(&conj[j], images[i])).map(|j| (i, j))
        });
        if let Some((i, j)) = failure {
            return Err(Error::HypothesisFailed { g, i, j });
        }
        count += (d * d) as u64;
    }
    let t = &c.transversal;
    let n = t.index();
    let slot_images: Vec<Vec<SparseVec>> =
        t.reps().iter().map(|&ti| images.iter().map(|x| b.act(x, ti)).collect()).collect();
    let rows = (0..c.algebra.rank())
        .into_par_iter()
        .map(|idx| {
            index_tuple(idx, d, n)
                .into_iter()
                .enumerate()
                .fold(b.one().clone(), |acc, (i, k)| b.mul(&acc, &slot_images[i][k]))
        })
        .collect();
    let alpha = GAlgebraHom::new(c.algebra.clone(), b.clone(), SparseMatrix::from_rows(b.rank(), rows))?;
    count += alpha.check_hom()?;
    if &c.mu(0).mul(b.ring(), alpha.matrix()) != psi {
        return Err(Error::identity("mu_H alpha = psi", "slot embedding"));
    }
    Ok((alpha, count + 1))
}

/// `α^{⊗G}: Cores(A) → Cores(B)` for an H-algebra map `α`.
pub fn cores_hom(alpha: &GAlgebraHom, t: &Transversal, limits: &Limits) -> Result<GAlgebraHom> {
    alpha.check_hom().map_err(|e| Error::NotHAlgebraHom(Box::new(e)))?;
    let source = cores(alpha.source(), t, limits)?;
    let target = cores(alpha.target(), t, limits)?;
    let matrix = ti_hom_matrix(alpha.source().ring(), alpha.matrix(), t);
    GAlgebraHom::new(source.algebra, target.algebra, matrix)
}

/// `Cores(A) ⊗ Cores(B) → Cores(A ⊗ B)`, `(⊗ a_ω) ⊗ (⊗ b_ω) ↦ ⊗ (a_ω ⊗ b_ω)`.
pub fn cores_product_iso(a: &GAlgebra, b: &GAlgebra, t: &Transversal, limits: &Limits) -> Result<GAlgebraHom> {
    let ca = cores(a, t, limits)?;
    let cb = cores(b, t, limits)?;
    let source = tensor_galgebra(&ca.algebra, &cb.algebra, limits)?;
    let target = cores(&tensor_galgebra(a, b, limits)?, t, limits)?;
    let (da, db, n) = (a.rank(), b.rank(), t.index());
    let sb = cb.algebra.rank();
    let one = a.ring().one();
    let rows = (0..source.rank())
        .map(|idx| {
            let (x, y) = (index_tuple(idx / sb, da, n), index_tuple(idx % sb, db, n));
            let pairs: Vec<usize> = x.iter().zip(&y).map(|(i, j)| i * db + j).collect();
            linalg::unit_vec(tuple_index(&pairs, da * db), one)
        })
        .collect();
    GAlgebraHom::new(source, target.algebra, SparseMatrix::from_rows(target_rank(da * db, n), rows))
}

fn target_rank(d: usize, n: usize) -> usize {
    d.pow(n as u32)
}

/// Checks that `basis` is a free basis of `S` over `R` along `φ`: the map
/// `(r_1, .., r_e) ↦ Σ φ(r_l) s_l` is a bijection `R^e → S`.
pub fn check_free_basis(phi: &GRingHom, basis: &[Elem]) -> Result<()> {
    let (r, s) = (phi.source(), phi.target());
    if basis.is_empty() || basis.iter().any(|&x| x as usize >= s.order()) {
        return Err(Error::NotFreeBasis("basis elements out of range".into()));
    }
    let total = (r.order() as u128).checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
    if total != s.order() as u128 {
        return Err(Error::NotFreeBasis(format!(
            "{} elements over a ring of order {} cannot span a ring of order {}",
            basis.len(),
            r.order(),
            s.order()
        )));
    }
    let mut hit = vec![false; s.order()];
    for code in 0..s.order() {
        let mut c = code;
        let mut sum = 0;
        for &b in basis {
            let coeff = (c % r.order()) as Elem;
            c /= r.order();
            sum = s.add(sum, s.mul(phi.apply(coeff), b));
        }
        if std::mem::replace(&mut hit[sum as usize], true) {
            return Err(Error::NotFreeBasis(format!("two coefficient vectors give the element {sum}")));
        }
    }
    Ok(())
}

/// `(A ⊗_R S)^{⊗_S G} → (A^{⊗_R G}) ⊗_R S`, `(a ⊗ s)^{⊗g} ↦ a^{⊗g} ⊗ s^g`,
/// as algebras over `S`. `basis` is an R-basis of `S`.
pub fn base_change_cores_iso(
    a: &GAlgebra,
    phi: &GRingHom,
    basis: &[Elem],
    t: &Transversal,
    limits: &Limits,
) -> Result<GAlgebraHom> {
    check_free_basis(phi, basis)?;
    let source = cores(&a.scalar_extend(phi)?, t, limits)?;
    let c = cores(a, t, limits)?;
    let target = c.algebra.scalar_extend(phi)?;
    // slot embeddings of the target: μ_i of Cores_R(A) pushed along φ
    let mus: Vec<SparseMatrix> = (0..t.index())
        .map(|w| {
            let m = c.mu(w);
            let rows = m.rows().iter().map(|r| r.iter().map(|&(i, x)| (i, phi.apply(x))).collect()).collect();
            SparseMatrix::from_rows(m.n_cols(), rows)
        })
        .collect();
    let (d, n) = (a.rank(), t.index());
    let rows = (0..source.algebra.rank())
        .into_par_iter()
        .map(|idx| {
            // (b_k ⊗ 1) ⊗ t_i ↦ (b_k ⊗ t_i) ⊗ 1^{t_i}
            index_tuple(idx, d, n)
                .into_iter()
                .enumerate()
                .fold(target.one().clone(), |acc, (i, k)| target.mul(&acc, mus[i].row(k)))
        })
        .collect();
    GAlgebraHom::new(source.algebra, target.clone(), SparseMatrix::from_rows(target.rank(), rows))
}

/// `End_R(P^{⊗G}) → (End_R P)^{⊗G}`, `E_{X,Y} ↦ ⊗_i (E_{x_i y_i} ⊗ t_i)`.
pub fn cores_end_iso(p: &crate::modules::SemilinearModule, t: &Transversal, limits: &Limits) -> Result<GAlgebraHom> {
    let pg = tensor_induce(p, t, limits)?;
    let source = end_galgebra(pg.module(), limits)?;
    let target = cores(end_galgebra(p, limits)?.algebra(), t, limits)?;
    let (m, n) = (p.rank(), t.index());
    let big = pg.module().rank();
    let one = p.ring().one();
    let rows = (0..big * big)
        .map(|idx| {
            let (x, y) = (index_tuple(idx / big, m, n), index_tuple(idx % big, m, n));
            let units: Vec<usize> = x.iter().zip(&y).map(|(a, b)| a * m + b).collect();
            linalg::unit_vec(tuple_index(&units, m * m), one)
        })
        .collect();
    GAlgebraHom::new(source.algebra().clone(), target.algebra, SparseMatrix::from_rows(big * big, rows))
}

/// From `A ⊗ End(P) ≅ B ⊗ End(Q)` over H, the witness
/// `Cores(A) ⊗ End(P^{⊗G}) ≅ Cores(B) ⊗ End(Q^{⊗G})` obtained by chaining
/// the End compatibility, the product iso and the corestricted iso.
pub fn cores_equivalence(w: &EquivalenceWitness, t: &Transversal, limits: &Limits) -> Result<EquivalenceWitness> {
    let ring = w.a.ring();
    let ca = cores(&w.a, t, limits)?;
    let cb = cores(&w.b, t, limits)?;
    let end_p = cores_end_iso(&w.p, t, limits)?;
    let end_q = cores_end_iso(&w.q, t, limits)?;
    let step1 = SparseMatrix::identity(ring, ca.algebra.rank()).kron(ring, end_p.matrix());
    let end_p_h = end_galgebra(&w.p, limits)?;
    let end_q_h = end_galgebra(&w.q, limits)?;
    let step2 = cores_product_iso(&w.a, end_p_h.algebra(), t, limits)?;
    let step3 = cores_hom(&w.hom(limits)?, t, limits)?;
    let step4 = cores_product_iso(&w.b, end_q_h.algebra(), t, limits)?.inverse()?;
    let end_q_inv = end_q.inverse()?;
    let step5 = SparseMatrix::identity(ring, cb.algebra.rank()).kron(ring, end_q_inv.matrix());
    let iso = [step2.matrix(), step3.matrix(), step4.matrix(), &step5]
        .into_iter()
        .fold(step1, |acc, m| acc.mul(ring, m));
    Ok(EquivalenceWitness {
        a: ca.algebra,
        p: tensor_induce(&w.p, t, limits)?.module().clone(),
        b: cb.algebra,
        q: tensor_induce(&w.q, t, limits)?.module().clone(),
        iso,
        provenance: format!("cores of [{}]", w.provenance),
    })
}

/// `A` with its action restricted to `H`.
pub fn restrict(a: &GAlgebra, h: &Subgroup) -> Result<GAlgebra> {
    a.restrict(h)
}

/// `Cores(A; T) → Cores(A; T')`. The slot of coset `ω` moves to its position in
/// `T'`, and with `t'_j = h t_i`, `a ⊗ t_i = a^{h^{-1}} ⊗ t'_j`.
pub fn transversal_change_iso(a: &GAlgebra, t: &Transversal, t2: &Transversal, limits: &Limits) -> Result<GAlgebraHom> {
    if t.subgroup() != t2.subgroup() {
        return Err(Error::GroupMismatch("transversals of different subgroups".into()));
    }
    let ring = a.ring();
    let g = t.group();
    let source = cores(a, t, limits)?;
    let target = cores(a, t2, limits)?;
    let images: Vec<(usize, SparseMatrix)> = t
        .reps()
        .iter()
        .map(|&ti| {
            let j = t2.coset_of(ti);
            let tj = t2.reps()[j];
            let h = g.mul(tj, g.inv(ti));
            (j, a.module().matrix(g.inv(h)).twist(ring, tj))
        })
        .collect();
    let matrix = routed_kron(ring, &images, a.rank());
    let f = GAlgebraHom::new(source.algebra, target.algebra, matrix)?;
    iso_check(&f)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebras::matrix_galgebra;
    use crate::groups::FiniteGroup;
    use crate::rings::{ActionRule, Carrier, GRing};

    fn gf2_c2() -> Arc<GRing> {
        let g = Arc::new(FiniteGroup::preset("C2").unwrap());
        Arc::new(GRing::new(Carrier::GaloisField { p: 2, k: 1 }, g, &ActionRule::Trivial).unwrap())
    }

    fn c2_m2() -> (GAlgebra, Transversal) {
        let r = gf2_c2();
        let h = Subgroup::trivial(r.group().clone());
        let a = matrix_galgebra(&r, 2, &Limits::default()).unwrap().algebra().restrict(&h).unwrap();
        (a, Transversal::decompose(&h))
    }

    #[test]
    fn cores_of_m2_over_c2_swaps_slots() {
        let (a, t) = c2_m2();
        let c = cores(&a, &t, &Limits::default()).unwrap();
        assert_eq!(c.algebra().rank(), 16);
        c.algebra().verify_axioms().unwrap();
        // (e_11 ⊗ e_12)^s = e_12 ⊗ e_11
        assert_eq!(c.algebra().act(&vec![(1, 1)], 1), vec![(4, 1)]);
        c.check_diagram().unwrap();
        c.check_commuting().unwrap();
        c.mu_hom().unwrap().check_hom().unwrap();
    }

    #[test]
    fn whole_group_cores_is_the_algebra() {
        let r = gf2_c2();
        let a = matrix_galgebra(&r, 2, &Limits::default()).unwrap();
        let t = Transversal::decompose(&Subgroup::whole(r.group().clone()));
        let c = cores(a.algebra(), &t, &Limits::default()).unwrap();
        assert_eq!(c.algebra(), a.algebra());
        assert!(c.mu(0).is_identity(&r));
    }

    #[test]
    fn universal_property_on_tautological_input() {
        let (a, t) = c2_m2();
        let c = cores(&a, &t, &Limits::default()).unwrap();
        let (alpha, _) = cores_universal(&c, c.algebra(), &c.mu(0)).unwrap();
        assert!(alpha.matrix().is_identity(a.ring()));
    }

    #[test]
    fn universal_property_hypothesis_failure() {
        // ψ = the identity of M_2 with the entrywise (trivial) C2 action: A ψ
        // and its conjugate are the same noncommutative algebra.
        let r = gf2_c2();
        let (a, t) = c2_m2();
        let c = cores(&a, &t, &Limits::default()).unwrap();
        let b = matrix_galgebra(&r, 2, &Limits::default()).unwrap();
        let err = cores_universal(&c, b.algebra(), &SparseMatrix::identity(&r, 4)).unwrap_err();
        assert!(matches!(err, Error::HypothesisFailed { g: 1, .. }));
    }

    #[test]
    fn conjugation_corestricts_to_conjugation_by_u_tensor_u() {
        let (a, t) = c2_m2();
        let r = a.ring().clone();
        // u = [[1,1],[0,1]] = u^{-1} over GF(2)
        let u = vec![(0, 1), (1, 1), (3, 1)];
        let rows = (0..4).map(|k| a.mul(&a.mul(&u, &a.basis(k)), &u)).collect();
        let conj = GAlgebraHom::new(a.clone(), a.clone(), SparseMatrix::from_rows(4, rows)).unwrap();
        let lifted = cores_hom(&conj, &t, &Limits::default()).unwrap();
        iso_check(&lifted).unwrap();
        let c = lifted.source();
        let uu = tensor_vecs(&r, &[u.clone(), u.clone()], 4);
        for k in 0..16 {
            assert_eq!(lifted.apply(&c.basis(k)), c.mul(&c.mul(&uu, &c.basis(k)), &uu));
        }
    }

    #[test]
    fn compatibility_isos_on_the_c2_catalog() {
        let limits = Limits::default();
        let (a, t) = c2_m2();
        iso_check(&cores_product_iso(&a, &a, &t, &limits).unwrap()).unwrap();
        let p = crate::modules::SemilinearModule::trivial(a.ring().clone(), t.subgroup().clone(), 2).unwrap();
        iso_check(&cores_end_iso(&p, &t, &limits).unwrap()).unwrap();
        let w = EquivalenceWitness::reflexive(&a).unwrap();
        let cw = cores_equivalence(&w, &t, &limits).unwrap();
        crate::algebras::equivalence_witness_check(&cw, &limits).unwrap();
    }

    #[test]
    fn base_change_gf2_to_gf4() {
        let limits = Limits::default();
        let (a, t) = c2_m2();
        let r = a.ring().clone();
        let s = Arc::new(
            GRing::new(Carrier::GaloisField { p: 2, k: 2 }, r.group().clone(), &ActionRule::Frobenius(vec![0, 1]))
                .unwrap(),
        );
        let phi = GRingHom::new(r, s, vec![0, 1]).unwrap();
        iso_check(&base_change_cores_iso(&a, &phi, &[1, 2], &t, &limits).unwrap()).unwrap();
        assert!(matches!(check_free_basis(&phi, &[1, 3, 2]), Err(Error::NotFreeBasis(_))));
        assert!(matches!(check_free_basis(&phi, &[2, 2]), Err(Error::NotFreeBasis(_))));
    }

    #[test]
    fn transversals_of_a_transposition_subgroup_in_s3() {
        let g = Arc::new(FiniteGroup::preset("S3").unwrap());
        let r = Arc::new(
            GRing::new(Carrier::GaloisField { p: 2, k: 2 }, g.clone(), &ActionRule::Frobenius(crate::groups::s3_sign()))
                .unwrap(),
        );
        let h = Subgroup::generated_by(g.clone(), &[1]).unwrap();
        let a = matrix_galgebra(&r, 2, &Limits::default()).unwrap().algebra().restrict(&h).unwrap();
        let t = Transversal::decompose(&h);
        let reps: Vec<usize> =
            t.reps().iter().enumerate().map(|(i, &x)| if i == 0 { x } else { g.mul(1, x) }).collect();
        let t2 = Transversal::from_reps(&h, &reps).unwrap();
        assert_ne!(t.reps(), t2.reps());
        transversal_change_iso(&a, &t, &t2, &Limits::default()).unwrap();
    }
}
