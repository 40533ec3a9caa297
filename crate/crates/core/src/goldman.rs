//! Reduced trace equivariance, the Goldman element, the switch homomorphism
//! `σ: S_n → (A^{⊗n})^*`, the map `π: G → B^*`, the star action and the
//! constructive witness for `[Cores(Res A)] = [A]^{|G:H|}`.

use rayon::prelude::*;

use crate::algebras::{
    end_galgebra, iso_check, natural_map_matrix, tensor_galgebra, tensor_power, unit_algebra, AzumayaPresentation,
    EquivalenceWitness, GAlgebra, GAlgebraHom,
};
use crate::cores::{cores_presentation, CoresAlgebra};
use crate::error::{Error, Result};
use crate::groups::{Permutation, Transversal};
use crate::limits::Limits;
use crate::linalg::{self, SparseMatrix, SparseVec};
use crate::modules::{index_tuple, tensor_vecs, tuple_index, SemilinearModule};

/// Outcome of the trace equivariance check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEquivariance {
    pub checked: u64,
    /// First `(basis, g)` with `trd(b^g) != trd(b)^g`.
    pub failure: Option<(usize, usize)>,
}

impl TraceEquivariance {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn into_result(self) -> Result<u64> {
        match self.failure {
            None => Ok(self.checked),
            Some((basis, g)) => Err(Error::TraceNotEquivariant { basis, g }),
        }
    }
}

/// `trd(b^g) = trd(b)^g` over basis × G.
pub fn trd_equivariance_check(a: &AzumayaPresentation) -> TraceEquivariance {
    let alg = a.algebra();
    let ring = alg.ring();
    let mut checked = 0;
    for &g in alg.group().elements() {
        for k in 0..alg.rank() {
            checked += 1;
            if a.trace(&alg.act(&alg.basis(k), g)) != ring.act(a.trace_values()[k], g) {
                return TraceEquivariance { checked, failure: Some((k, g)) };
            }
        }
    }
    TraceEquivariance { checked, failure: None }
}

/// The unique `t = Σ x_i ⊗ y_i ∈ A ⊗ A` with `Σ x_i a y_i = trd(a)·1`.
#[derive(Clone, Debug)]
pub struct GoldmanElement {
    presentation: AzumayaPresentation,
    square: GAlgebra,
    t: SparseVec,
}

pub fn goldman_element(a: &AzumayaPresentation, limits: &Limits) -> Result<GoldmanElement> {
    let alg = a.algebra();
    let ring = alg.ring();
    let d = alg.rank();
    let n = natural_map_matrix(alg, limits)?;
    let inv = linalg::inverse(ring, &n).ok_or(Error::NotAzumaya)?;
    let target: SparseVec = (0..d)
        .flat_map(|k| {
            let tr = a.trace_values()[k];
            alg.one().iter().map(move |&(l, r)| ((k * d) as u32 + l, ring.mul(tr, r))).collect::<Vec<_>>()
        })
        .filter(|&(_, r)| r != 0)
        .collect();
    let t = inv.apply(ring, &target);
    if n.apply(ring, &t) != target {
        return Err(Error::SolveFailed("natural map inverse does not solve the trace system".into()));
    }
    let square = tensor_galgebra(alg, alg, limits)?;
    let e = GoldmanElement { presentation: a.clone(), square, t };
    e.verify()?;
    Ok(e)
}

impl GoldmanElement {
    pub fn presentation(&self) -> &AzumayaPresentation {
        &self.presentation
    }

    /// `A ⊗ A`, where `t` lives.
    pub fn square(&self) -> &GAlgebra {
        &self.square
    }

    pub fn element(&self) -> &SparseVec {
        &self.t
    }

    /// Terms `(i, j, c)` of `t = Σ c b_i ⊗ b_j`.
    pub fn terms(&self) -> Vec<(usize, usize, crate::rings::Elem)> {
        let d = self.presentation.algebra().rank();
        self.t.iter().map(|&(idx, c)| (idx as usize / d, idx as usize % d, c)).collect()
    }

    /// `Σ x_i a y_i = trd(a)·1` for every basis `a`.
    pub fn check_defining_identity(&self) -> Result<u64> {
        let alg = self.presentation.algebra();
        let ring = alg.ring();
        let terms = self.terms();
        for k in 0..alg.rank() {
            let bk = alg.basis(k);
            let lhs = terms.iter().fold(Vec::new(), |acc, &(i, j, c)| {
                let v = alg.mul(&alg.mul(&alg.basis(i), &bk), &alg.basis(j));
                linalg::add(ring, &acc, &linalg::scale(ring, &v, c))
            });
            if lhs != linalg::scale(ring, alg.one(), self.presentation.trace_values()[k]) {
                return Err(Error::identity("sum x_i a y_i = trd(a) 1", format!("basis {k}")));
            }
        }
        Ok(alg.rank() as u64)
    }

    /// `t² = 1`.
    pub fn check_involution(&self) -> Result<u64> {
        if self.square.mul(&self.t, &self.t) != *self.square.one() {
            return Err(Error::identity("t^2 = 1", "A ⊗ A"));
        }
        Ok(1)
    }

    /// `(a ⊗ b) t = t (b ⊗ a)` for `a, b` ranging over all scalar multiples
    /// `r b_k` of basis elements.
    pub fn check_switch(&self) -> Result<u64> {
        let alg = self.presentation.algebra();
        let ring = alg.ring();
        let d = alg.rank();
        let elems: Vec<SparseVec> =
            (0..d).flat_map(|k| ring.elements().map(move |r| linalg::unit_vec(k, r))).collect();
        let failure = (0..elems.len()).into_par_iter().find_map_first(|x| {
            (0..elems.len())
                .find(|&y| {
                    let ab = tensor_vecs(ring, &[elems[x].clone(), elems[y].clone()], d);
                    let ba = tensor_vecs(ring, &[elems[y].clone(), elems[x].clone()], d);
                    self.square.mul(&ab, &self.t) != self.square.mul(&self.t, &ba)
                })
                .map(|y| (x, y))
        });
        if let Some((x, y)) = failure {
            return Err(Error::identity("(a ⊗ b) t = t (b ⊗ a)", format!("elements ({x}, {y})")));
        }
        Ok((elems.len() * elems.len()) as u64)
    }

    /// `t^g = t` for every `g`.
    pub fn check_invariant(&self) -> Result<u64> {
        for &g in self.square.group().elements() {
            if self.square.act(&self.t, g) != self.t {
                return Err(Error::identity("t^g = t", format!("g = {g}")));
            }
        }
        Ok(self.square.group().order() as u64)
    }

    pub fn verify(&self) -> Result<u64> {
        Ok(self.check_defining_identity()?
            + self.check_involution()?
            + self.check_switch()?
            + self.check_invariant()?)
    }
}

/// `t_{i,i+1} ∈ A^{⊗n}` and `σ(π) = t_{a_1} t_{a_2} ⋯` for `π = s_{a_1} s_{a_2} ⋯`.
#[derive(Clone, Debug)]
pub struct SwitchSystem {
    goldman: GoldmanElement,
    n: usize,
    power: AzumayaPresentation,
    adjacent: Vec<SparseVec>,
}

pub fn switch_system(a: &AzumayaPresentation, n: usize, limits: &Limits) -> Result<SwitchSystem> {
    let goldman = goldman_element(a, limits)?;
    switch_system_from(goldman, n, limits)
}

fn switch_system_from(goldman: GoldmanElement, n: usize, limits: &Limits) -> Result<SwitchSystem> {
    let a = goldman.presentation.clone();
    let power = tensor_power(&a, n, limits)?;
    let ring = a.algebra().ring().clone();
    let d = a.algebra().rank();
    let terms = goldman.terms();
    let adjacent = (0..n.saturating_sub(1))
        .map(|i| {
            terms.iter().fold(Vec::new(), |acc, &(x, y, c)| {
                let mut slots = vec![a.algebra().one().clone(); n];
                slots[i] = linalg::unit_vec(x, c);
                slots[i + 1] = linalg::unit_vec(y, ring.one());
                linalg::add(&ring, &acc, &tensor_vecs(&ring, &slots, d))
            })
        })
        .collect();
    Ok(SwitchSystem { goldman, n, power, adjacent })
}

impl SwitchSystem {
    pub fn goldman(&self) -> &GoldmanElement {
        &self.goldman
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `A^{⊗n}` with the diagonal action.
    pub fn power(&self) -> &AzumayaPresentation {
        &self.power
    }

    /// `t_{i,i+1}`, 0-based.
    pub fn adjacent(&self, i: usize) -> &SparseVec {
        &self.adjacent[i]
    }

    /// The product `t_{a_1} t_{a_2} ⋯` for a word in neighbor transpositions.
    pub fn sigma_of_word(&self, word: &[usize]) -> SparseVec {
        let b = self.power.algebra();
        word.iter().fold(b.one().clone(), |acc, &a| b.mul(&acc, &self.adjacent[a]))
    }

    pub fn sigma(&self, p: &Permutation) -> SparseVec {
        self.sigma_of_word(&p.adjacent_decompose())
    }

    /// `σ(π)^{-1} = σ(π^{-1})`.
    pub fn sigma_inverse(&self, p: &Permutation) -> SparseVec {
        self.sigma(&p.inverse())
    }

    /// `x^{σ(π)} = σ(π)^{-1} x σ(π)`.
    pub fn conjugate(&self, x: &SparseVec, p: &Permutation) -> SparseVec {
        let b = self.power.algebra();
        b.mul(&b.mul(&self.sigma_inverse(p), x), &self.sigma(p))
    }

    /// Involutivity, disjoint commutation and the braid relation.
    pub fn check_coxeter(&self) -> Result<u64> {
        let b = self.power.algebra();
        let one = b.one();
        let mut count = 0;
        for i in 0..self.adjacent.len() {
            for k in i..self.adjacent.len() {
                let prod = b.mul(&self.adjacent[i], &self.adjacent[k]);
                let (identity, exp) = match k - i {
                    0 => ("t_(i,i+1)^2 = 1", 1),
                    1 => ("(t_(i,i+1) t_(i+1,i+2))^3 = 1", 3),
                    _ => ("(t_(i,i+1) t_(k,k+1))^2 = 1", 2),
                };
                let power = (1..exp).fold(prod.clone(), |acc, _| b.mul(&acc, &prod));
                if power != *one {
                    return Err(Error::identity(identity, format!("i = {i}, k = {k}")));
                }
                count += 1;
            }
        }
        Ok(count)
    }

    /// `σ(π)^{-1} (a_1 ⊗ ⋯ ⊗ a_n) σ(π)` carries the factor of slot `i` to slot `iπ`.
    pub fn check_slot_conjugation(&self) -> Result<u64> {
        let b = self.power.algebra();
        let d = self.goldman.presentation.algebra().rank();
        let one = b.ring().one();
        let mut count = 0;
        for p in Permutation::all(self.n) {
            let (s, s_inv) = (self.sigma(&p), self.sigma_inverse(&p));
            let failure = (0..b.rank()).into_par_iter().find_first(|&idx| {
                let k = index_tuple(idx, d, self.n);
                let mut moved = vec![0; self.n];
                for (i, &ki) in k.iter().enumerate() {
                    moved[p.apply(i)] = ki;
                }
                b.mul(&b.mul(&s_inv, &b.basis(idx)), &s) != linalg::unit_vec(tuple_index(&moved, d), one)
            });
            if let Some(idx) = failure {
                return Err(Error::identity(
                    "sigma(p)^-1 (a_1 ⊗ .. ⊗ a_n) sigma(p) = a_(1p^-1) ⊗ .. ⊗ a_(np^-1)",
                    format!("permutation {:?}, basis {idx}", p.images()),
                ));
            }
            count += b.rank() as u64;
        }
        Ok(count)
    }

    /// `σ(πρ) = σ(π) σ(ρ)` for all pairs.
    pub fn check_homomorphism(&self) -> Result<u64> {
        let b = self.power.algebra();
        let perms = Permutation::all(self.n);
        let values: Vec<SparseVec> = perms.iter().map(|p| self.sigma(p)).collect();
        let failure = (0..perms.len()).into_par_iter().find_map_first(|x| {
            (0..perms.len())
                .find(|&y| self.sigma(&perms[x].then(&perms[y])) != b.mul(&values[x], &values[y]))
                .map(|y| (x, y))
        });
        if let Some((x, y)) = failure {
            return Err(Error::identity(
                "sigma(p q) = sigma(p) sigma(q)",
                format!("p = {:?}, q = {:?}", perms[x].images(), perms[y].images()),
            ));
        }
        Ok((perms.len() * perms.len()) as u64)
    }

    /// `σ(π)^g = σ(π)` for every `π` and `g`.
    pub fn check_invariant(&self) -> Result<u64> {
        let b = self.power.algebra();
        let mut count = 0;
        for p in Permutation::all(self.n) {
            let s = self.sigma(&p);
            for &g in b.group().elements() {
                if b.act(&s, g) != s {
                    return Err(Error::identity("sigma(p)^g = sigma(p)", format!("{:?}, g = {g}", p.images())));
                }
                count += 1;
            }
        }
        Ok(count)
    }

    pub fn verify(&self) -> Result<u64> {
        Ok(self.check_coxeter()?
            + self.check_slot_conjugation()?
            + self.check_homomorphism()?
            + self.check_invariant()?)
    }
}

/// `π(g) = σ(coset permutation of g)` in `B = A^{⊗|G:H|}`.
#[derive(Clone, Debug)]
pub struct PiMap {
    switch: SwitchSystem,
    transversal: Transversal,
    values: Vec<SparseVec>,
    inverses: Vec<SparseVec>,
}

pub fn pi_map(switch: &SwitchSystem, t: &Transversal) -> Result<PiMap> {
    if switch.n != t.index() {
        return Err(Error::DimensionMismatch(format!(
            "switch system of degree {} for {} cosets",
            switch.n,
            t.index()
        )));
    }
    let g = t.group();
    let values = g.elements().map(|x| switch.sigma(&t.coset_permutation(x))).collect();
    let inverses = g.elements().map(|x| switch.sigma_inverse(&t.coset_permutation(x))).collect();
    let pi = PiMap { switch: switch.clone(), transversal: t.clone(), values, inverses };
    pi.verify()?;
    Ok(pi)
}

impl PiMap {
    pub fn value(&self, g: usize) -> &SparseVec {
        &self.values[g]
    }

    pub fn inverse_value(&self, g: usize) -> &SparseVec {
        &self.inverses[g]
    }

    pub fn algebra(&self) -> &GAlgebra {
        self.switch.power.algebra()
    }

    pub fn switch(&self) -> &SwitchSystem {
        &self.switch
    }

    /// `b^{π(g)} = π(g)^{-1} b π(g)`.
    pub fn conjugate(&self, b: &SparseVec, g: usize) -> SparseVec {
        let alg = self.algebra();
        alg.mul(&alg.mul(&self.inverses[g], b), &self.values[g])
    }

    /// `π(gh) = π(g) π(h)`, `π(g)^h = π(g)` and `π(g)^{-1} π(g) = 1`.
    pub fn verify(&self) -> Result<u64> {
        let alg = self.algebra();
        let g = self.transversal.group();
        let mut count = 0;
        for x in g.elements() {
            if alg.mul(&self.inverses[x], &self.values[x]) != *alg.one() {
                return Err(Error::identity("pi(g)^-1 pi(g) = 1", format!("g = {x}")));
            }
            for y in g.elements() {
                if self.values[g.mul(x, y)] != alg.mul(&self.values[x], &self.values[y]) {
                    return Err(Error::identity("pi(gh) = pi(g) pi(h)", format!("g = {x}, h = {y}")));
                }
                if alg.act(&self.values[x], y) != self.values[x] {
                    return Err(Error::identity("pi(g)^h = pi(g)", format!("g = {x}, h = {y}")));
                }
                count += 2;
            }
        }
        Ok(count + g.order() as u64)
    }
}

/// `B` with the action `b ⋆ g = b^g π(g)`, matrix `M^B_g · R_{π(g)}`.
#[derive(Clone, Debug)]
pub struct StarModule {
    pi: PiMap,
    module: SemilinearModule,
}

pub fn star_module(pi: &PiMap) -> Result<StarModule> {
    let b = pi.algebra();
    let ring = b.ring();
    let mats = b
        .group()
        .elements()
        .iter()
        .map(|&g| b.module().matrix(g).mul(ring, &b.right_mul_matrix(&pi.values[g])))
        .collect();
    let module = SemilinearModule::new(ring.clone(), b.group().clone(), b.rank(), mats)?;
    let star = StarModule { pi: pi.clone(), module };
    star.verify()?;
    Ok(star)
}

impl StarModule {
    pub fn module(&self) -> &SemilinearModule {
        &self.module
    }

    pub fn pi(&self) -> &PiMap {
        &self.pi
    }

    /// `b ⋆ g = b^g π(g)`, computed in the algebra.
    pub fn star(&self, b: &SparseVec, g: usize) -> SparseVec {
        let alg = self.pi.algebra();
        alg.mul(&alg.act(b, g), &self.pi.values[g])
    }

    /// `(b⋆g)⋆h = b⋆(gh)` and `(br)⋆g = (b⋆g) r^g` over basis, scalars and
    /// pairs of group elements, and agreement with the action matrices.
    pub fn verify(&self) -> Result<u64> {
        let alg = self.pi.algebra();
        let ring = alg.ring();
        let group = alg.group().parent().clone();
        let mut count = 0;
        for k in 0..alg.rank() {
            let bk = alg.basis(k);
            for x in group.elements() {
                let bx = self.star(&bk, x);
                if bx != self.module.act(&bk, x) {
                    return Err(Error::identity("b ⋆ g = b M_g R_pi(g)", format!("basis {k}, g = {x}")));
                }
                for y in group.elements() {
                    if self.star(&bx, y) != self.star(&bk, group.mul(x, y)) {
                        return Err(Error::identity("(b ⋆ g) ⋆ h = b ⋆ (gh)", format!("basis {k}, g = {x}, h = {y}")));
                    }
                    count += 1;
                }
                for r in ring.elements() {
                    let lhs = self.star(&linalg::scale(ring, &bk, r), x);
                    if lhs != linalg::scale(ring, &bx, ring.act(r, x)) {
                        return Err(Error::identity("(b r) ⋆ g = (b ⋆ g) r^g", format!("basis {k}, r = {r}, g = {x}")));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    }
}

/// Which of the expensive parts of the witness to verify.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RescoresOptions {
    /// Run `iso_check` on `ε` and the pointwise equivariance chain.
    pub check_epsilon: bool,
    /// Invert `ε` and check the returned equivalence witness as well.
    pub build_witness: bool,
}

impl Default for RescoresOptions {
    fn default() -> Self {
        RescoresOptions { check_epsilon: true, build_witness: true }
    }
}

/// Everything constructed for `Cores(Res A) ~ A^{⊗|G:H|}`, with counts of
/// the identities verified at each stage.
#[derive(Clone, Debug)]
pub struct RescoresWitness {
    pub cores: CoresAlgebra,
    pub cores_presentation: AzumayaPresentation,
    pub power: AzumayaPresentation,
    pub phi: SparseMatrix,
    pub star: StarModule,
    /// `ε: B^op ⊗ C → End_R(B_⋆)`.
    pub epsilon: GAlgebraHom,
    /// `R ⊗ End(B_⋆) ≅ (B^op ⊗ C) ⊗ End(R)`, when built.
    pub witness: Option<EquivalenceWitness>,
    pub checks: Vec<(&'static str, u64)>,
}

/// Builds `φ: C → B`, the star module `B_⋆` and `ε: B^op ⊗ C → End_R(B_⋆)`,
/// `x (b ⊗ c)^ε = b x φ(c)`, verifying each stage.
pub fn rescores_witness(
    a: &AzumayaPresentation,
    t: &Transversal,
    options: RescoresOptions,
    limits: &Limits,
) -> Result<RescoresWitness> {
    let alg = a.algebra();
    if !alg.group().is_whole() || alg.group().parent() != t.group() {
        return Err(Error::GroupMismatch("the algebra must carry the action of the whole group".into()));
    }
    let ring = alg.ring();
    let n = t.index();
    let mut checks = Vec::new();

    let azumaya = crate::algebras::azumaya_check(alg, limits)?;
    if !azumaya.is_azumaya {
        return Err(Error::NotAzumaya);
    }
    let (c, cp) = cores_presentation(&a.restrict(t.subgroup())?, t, limits)?;
    checks.push(("cores diagram", c.check_diagram()?));
    checks.push(("slot commutation", c.check_commuting()?));

    let switch = switch_system(a, n, limits)?;
    checks.push(("goldman element", switch.goldman().verify()?));
    checks.push(("coxeter relations", switch.check_coxeter()?));
    checks.push(("sigma invariant", switch.check_invariant()?));
    let pi = pi_map(&switch, t)?;
    checks.push(("pi homomorphism", pi.verify()?));
    let b = switch.power().algebra().clone();

    let phi = t
        .reps()
        .iter()
        .fold(SparseMatrix::identity(ring, 1), |acc, &ti| acc.kron(ring, alg.module().matrix(ti)));
    let phi_hom = GAlgebraHom::new(c.algebra().clone(), b.clone(), phi.clone())?;
    checks.push(("phi ring hom", phi_hom.check_ring_hom()?));
    if !linalg::is_invertible(ring, &phi) {
        return Err(Error::NotBijective);
    }
    checks.push(("phi twist law", check_phi_twist(&c, &pi, &phi)?));

    let star = star_module(&pi)?;
    checks.push(("star action", star.verify()?));
    let end = end_galgebra(star.module(), limits)?;
    let source = tensor_galgebra(&b.opposite(), c.algebra(), limits)?;
    let epsilon = GAlgebraHom::new(source, end.algebra().clone(), epsilon_matrix(&b, &phi, limits)?)?;

    let mut witness = None;
    if options.check_epsilon {
        checks.push(("epsilon chain", check_epsilon_chain(&star, &phi)?));
        checks.push(("epsilon iso", iso_check(&epsilon)?));
    }
    if options.build_witness {
        let inv = linalg::inverse(ring, epsilon.matrix()).ok_or(Error::NotBijective)?;
        let unit = unit_algebra(ring, alg.group().clone())?;
        let r = SemilinearModule::trivial(ring.clone(), alg.group().clone(), 1)?;
        let w = EquivalenceWitness {
            a: unit.algebra().clone(),
            p: star.module().clone(),
            b: epsilon.source().clone(),
            q: r,
            iso: inv,
            provenance: "R ⊗ End(B_⋆) = End(B_⋆) → B^op ⊗ C = (B^op ⊗ C) ⊗ End(R) by the inverse of ε; \
                         unit slots collapsed"
                .into(),
        };
        if options.check_epsilon {
            checks.push(("equivalence witness", crate::algebras::equivalence_witness_check(&w, limits)?));
        }
        witness = Some(w);
    }
    Ok(RescoresWitness { cores: c, cores_presentation: cp, power: switch.power().clone(), phi, star, epsilon, witness, checks })
}

/// `φ(c^g) = φ(c)^{π(g) g}` for every basis `c` and every `g`.
pub fn check_phi_twist(c: &CoresAlgebra, pi: &PiMap, phi: &SparseMatrix) -> Result<u64> {
    let (ca, b) = (c.algebra(), pi.algebra());
    let ring = ca.ring();
    let group = c.transversal().group();
    let failure = (0..ca.rank()).into_par_iter().find_map_first(|k| {
        group
            .elements()
            .find(|&g| {
                let lhs = phi.apply(ring, &ca.act(&ca.basis(k), g));
                lhs != b.act(&pi.conjugate(phi.row(k), g), g)
            })
            .map(|g| (k, g))
    });
    if let Some((k, g)) = failure {
        return Err(Error::identity("phi(c^g) = phi(c)^(pi(g) g)", format!("basis {k}, g = {g}")));
    }
    Ok((ca.rank() * group.order()) as u64)
}

/// Row `i·|C| + j` is the flattened endomorphism `x ↦ b_i x φ(c_j)`.
fn epsilon_matrix(b: &GAlgebra, phi: &SparseMatrix, limits: &Limits) -> Result<SparseMatrix> {
    let m = b.rank();
    let size = limits.check_rank("epsilon: B^op ⊗ C → End(B_⋆)", m.saturating_mul(phi.n_rows()))?;
    let dc = phi.n_rows();
    let rows = (0..size)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / dc, idx % dc);
            let bi = b.basis(i);
            let mut row = Vec::new();
            for k in 0..m {
                let v = b.mul(&b.mul(&bi, &b.basis(k)), phi.row(j));
                row.extend(v.into_iter().map(|(l, r)| ((k * m) as u32 + l, r)));
            }
            row
        })
        .collect();
    Ok(SparseMatrix::from_rows(m * m, rows))
}

/// `x ((b ⊗ c)^ε)^g = b^g x φ(c)^{π(g) g}` for all basis `x, b, c` and all
/// `g`, with the left side computed through the star action as
/// `((x ⋆ g^{-1}) (b ⊗ c)^ε) ⋆ g`.
pub fn check_epsilon_chain(star: &StarModule, phi: &SparseMatrix) -> Result<u64> {
    let pi = star.pi();
    let b = pi.algebra();
    let group = b.group().parent().clone();
    let (m, dc) = (b.rank(), phi.n_rows());
    let twisted: Vec<Vec<SparseVec>> = group
        .elements()
        .map(|g| (0..dc).map(|j| b.act(&pi.conjugate(phi.row(j), g), g)).collect())
        .collect();
    let failure = (0..m * dc).into_par_iter().find_map_first(|idx| {
        let (i, j) = (idx / dc, idx % dc);
        let bi = b.basis(i);
        for g in group.elements() {
            let big = b.act(&bi, g);
            for k in 0..m {
                let x = b.basis(k);
                let y = star.star(&x, group.inv(g));
                let lhs = star.star(&b.mul(&b.mul(&bi, &y), phi.row(j)), g);
                let rhs = b.mul(&b.mul(&big, &x), &twisted[g][j]);
                if lhs != rhs {
                    return Some((k, i, j, g));
                }
            }
        }
        None
    });
    if let Some((k, i, j, g)) = failure {
        return Err(Error::identity(
            "x ((b ⊗ c)^eps)^g = b^g x phi(c)^(pi(g) g)",
            format!("x = {k}, b = {i}, c = {j}, g = {g}"),
        ));
    }
    Ok((m * m * dc * group.order()) as u64)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebras::matrix_galgebra;
    use crate::groups::{FiniteGroup, Subgroup};
    use crate::rings::{ActionRule, Carrier, GRing};

    fn ring(carrier: Carrier, group: &str, rule: ActionRule) -> Arc<GRing> {
        let g = Arc::new(FiniteGroup::preset(group).unwrap());
        Arc::new(GRing::new(carrier, g, &rule).unwrap())
    }

    fn gf2(group: &str) -> Arc<GRing> {
        ring(Carrier::GaloisField { p: 2, k: 1 }, group, ActionRule::Trivial)
    }

    fn gf4_c2() -> Arc<GRing> {
        ring(Carrier::GaloisField { p: 2, k: 2 }, "C2", ActionRule::Frobenius(vec![0, 1]))
    }

    fn m2(r: &Arc<GRing>) -> AzumayaPresentation {
        matrix_galgebra(r, 2, &Limits::default()).unwrap()
    }

    #[test]
    fn trace_equivariance() {
        let a = m2(&gf4_c2());
        assert!(trd_equivariance_check(&a).passed());
        // trd(ω e_11) = ω and trd((ω e_11)^s) = ω²
        let alg = a.algebra();
        let x = vec![(0, 2)];
        assert_eq!(a.trace(&x), 2);
        assert_eq!(a.trace(&alg.act(&x, 1)), 3);
        let bad = a.with_trace(vec![1, 2, 0, 1]).unwrap();
        assert_eq!(trd_equivariance_check(&bad).failure, Some((1, 1)));
    }

    #[test]
    fn goldman_of_the_ring_is_one_tensor_one() {
        let r = gf4_c2();
        let u = unit_algebra(&r, Subgroup::whole(r.group().clone())).unwrap();
        assert_eq!(goldman_element(&u, &Limits::default()).unwrap().element(), &vec![(0, 1)]);
    }

    #[test]
    fn goldman_of_matrices_is_the_matrix_unit_sum() {
        for n in 1..=3 {
            let r = gf4_c2();
            let a = matrix_galgebra(&r, n, &Limits::default()).unwrap();
            let t = goldman_element(&a, &Limits::default()).unwrap();
            let mut expected: Vec<(u32, u8)> = Vec::new();
            for x in 0..n {
                for y in 0..n {
                    expected.push((((x * n + y) * n * n + y * n + x) as u32, 1));
                }
            }
            expected.sort();
            assert_eq!(t.element(), &expected);
        }
    }

    #[test]
    fn goldman_rejects_bad_traces_and_non_azumaya() {
        let a = m2(&gf2("C1"));
        let bad = a.with_trace(vec![1, 1, 0, 1]).unwrap();
        assert!(goldman_element(&bad, &Limits::default()).is_err());
        let zero = a.with_trace(vec![0; 4]).unwrap();
        assert!(goldman_element(&zero, &Limits::default()).is_err());
    }

    #[test]
    fn switch_system_for_m2_gf2() {
        let a = m2(&gf2("C2"));
        let s = switch_system(&a, 3, &Limits::default()).unwrap();
        assert_eq!(s.verify().unwrap(), 3 + 6 * 64 + 36 + 12);
        assert_eq!(s.sigma(&Permutation::identity(3)), *s.power().algebra().one());
        let s2 = switch_system(&a, 2, &Limits::default()).unwrap();
        // e11⊗e11 + e12⊗e21 + e21⊗e12 + e22⊗e22
        assert_eq!(s2.sigma(&Permutation::transposition(2, 0, 1)), vec![(0, 1), (6, 1), (9, 1), (15, 1)]);
    }

    /// A second decomposition: selection sort moving the largest value to
    /// the end. Swapping image positions is left multiplication by `s_a`.
    fn other_word(p: &Permutation) -> Vec<usize> {
        let n = p.degree();
        let mut w = p.images().to_vec();
        let mut word = Vec::new();
        for end in (1..n).rev() {
            let mut pos = w.iter().position(|&v| v == end).unwrap();
            while pos < end {
                w.swap(pos, pos + 1);
                word.push(pos);
                pos += 1;
            }
        }
        word
    }

    #[test]
    fn sigma_is_independent_of_the_decomposition() {
        let a = m2(&gf2("C1"));
        for n in [3, 4] {
            let s = switch_system(&a, n, &Limits::default()).unwrap();
            for (idx, p) in Permutation::all(n).into_iter().enumerate() {
                if n == 4 && idx % 5 != 0 {
                    continue;
                }
                let word = other_word(&p);
                let rebuilt = word
                    .iter()
                    .fold(Permutation::identity(n), |acc, &x| acc.then(&Permutation::transposition(n, x, x + 1)));
                assert_eq!(rebuilt, p);
                assert_eq!(s.sigma_of_word(&word), s.sigma(&p));
            }
        }
    }

    #[test]
    fn pi_for_c2_is_the_swap() {
        let r = gf2("C2");
        let a = m2(&r);
        let t = Transversal::decompose(&Subgroup::trivial(r.group().clone()));
        let s = switch_system(&a, 2, &Limits::default()).unwrap();
        let pi = pi_map(&s, &t).unwrap();
        assert_eq!(pi.value(0), s.power().algebra().one());
        assert_eq!(pi.value(1), &s.sigma(&Permutation::transposition(2, 0, 1)));
        let whole = Transversal::decompose(&Subgroup::whole(r.group().clone()));
        let s1 = switch_system(&a, 1, &Limits::default()).unwrap();
        let pi1 = pi_map(&s1, &whole).unwrap();
        assert!((0..2).all(|g| pi1.value(g) == s1.power().algebra().one()));
    }

    #[test]
    fn star_module_for_c2() {
        let r = gf2("C2");
        let a = m2(&r);
        let t = Transversal::decompose(&Subgroup::trivial(r.group().clone()));
        let s = switch_system(&a, 2, &Limits::default()).unwrap();
        let star = star_module(&pi_map(&s, &t).unwrap()).unwrap();
        let b = s.power().algebra();
        // trivial action on M_2(GF(2)): b ⋆ s = b π(s)
        for k in 0..16 {
            assert_eq!(star.star(&b.basis(k), 1), b.mul(&b.basis(k), pi_map(&s, &t).unwrap().value(1)));
            assert_eq!(star.star(&star.star(&b.basis(k), 1), 1), b.basis(k));
        }
    }

    #[test]
    fn rescores_with_h_equal_to_g_is_the_natural_map() {
        let r = gf4_c2();
        let a = m2(&r);
        let t = Transversal::decompose(&Subgroup::whole(r.group().clone()));
        let w = rescores_witness(&a, &t, RescoresOptions::default(), &Limits::default()).unwrap();
        assert!(w.phi.is_identity(&r));
        assert_eq!(w.cores.algebra().rank(), 4);
        assert_eq!(w.epsilon.matrix(), &natural_map_matrix(a.algebra(), &Limits::default()).unwrap());
    }

    #[test]
    fn rescores_for_c2_over_gf4() {
        let r = gf4_c2();
        let a = m2(&r);
        let t = Transversal::decompose(&Subgroup::trivial(r.group().clone()));
        let w = rescores_witness(&a, &t, RescoresOptions::default(), &Limits::default()).unwrap();
        assert_eq!(w.epsilon.source().rank(), 256);
        assert!(w.witness.is_some());
    }
}
