//! Finite free R-modules with a semilinear group action (right RG-modules),
//! induction, tensor induction and its universal property.
//!
//! A module of rank `m` acting group `K ≤ G` stores one matrix `M_k` per
//! `k ∈ K`, and `v^k = twist(v, k)·M_k`. The action law `(v^g)^h = v^(gh)`
//! reads `twist(M_g, h)·M_h = M_(gh)`.
//!
//! Induced and tensor-induced modules use the slot basis `b_k ⊗ t_i`. Inside
//! `V ⊗_{RH} RG` scalars pass through a representative with a twist,
//! `(v r) ⊗ t = (v ⊗ t) r^t`, so `b_k ⊗ t_i` multiplied by `g` with
//! `t_i g = h t_j` is `Σ_l (b_l ⊗ t_j) ((M_h)_{kl})^{t_j}`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::{Subgroup, Transversal};
use crate::limits::Limits;
use crate::linalg::{self, SparseMatrix, SparseVec};
use crate::rings::{Elem, GRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearModule {
    ring: Arc<GRing>,
    group: Subgroup,
    rank: usize,
    action: Arc<Vec<SparseMatrix>>,
}

impl SemilinearModule {
    /// `matrices[p]` is the matrix of `group.elements()[p]`. Checks shapes,
    /// `M_e = I` and the action law on every pair.
    pub fn new(ring: Arc<GRing>, group: Subgroup, rank: usize, matrices: Vec<SparseMatrix>) -> Result<Self> {
        let m = Self::new_unchecked(ring, group, rank, matrices)?;
        m.verify()?;
        Ok(m)
    }

    /// Shape checks only; used by constructions whose action law is verified
    /// separately.
    pub(crate) fn new_unchecked(
        ring: Arc<GRing>,
        group: Subgroup,
        rank: usize,
        matrices: Vec<SparseMatrix>,
    ) -> Result<Self> {
        if group.parent() != ring.group() {
            return Err(Error::GroupMismatch("acting subgroup does not live in the ring's group".into()));
        }
        if rank == 0 {
            return Err(Error::DimensionMismatch("modules must have positive rank".into()));
        }
        if matrices.len() != group.order() || matrices.iter().any(|a| a.n_rows() != rank || a.n_cols() != rank) {
            return Err(Error::DimensionMismatch(format!(
                "expected {} matrices of size {rank}x{rank}",
                group.order()
            )));
        }
        Ok(SemilinearModule { ring, group, rank, action: Arc::new(matrices) })
    }

    /// Checks `M_e = I` and `twist(M_g, h)·M_h = M_(gh)` for all `g, h`.
    pub fn verify(&self) -> Result<u64> {
        let ring = &*self.ring;
        let parent = self.group.parent();
        if !self.matrix(parent.identity()).is_identity(ring) {
            return Err(Error::IdentityActsNontrivially);
        }
        let mut count = 1;
        for &g in self.group.elements() {
            for &h in self.group.elements() {
                let lhs = self.matrix(g).twist(ring, h).mul(ring, self.matrix(h));
                if &lhs != self.matrix(parent.mul(g, h)) {
                    return Err(Error::NotAnAction { g, h });
                }
                count += 1;
            }
        }
        Ok(count)
    }

    /// Every group element acts by the identity matrix.
    pub fn trivial(ring: Arc<GRing>, group: Subgroup, rank: usize) -> Result<Self> {
        let id = SparseMatrix::identity(&ring, rank);
        let mats = vec![id; group.order()];
        Self::new_unchecked(ring, group, rank, mats)
    }

    /// `b_i^g = b_{perm_g(i)}`, for a right action of the group on basis indices.
    /// `perms[p]` belongs to `group.elements()[p]`.
    pub fn permutation(ring: Arc<GRing>, group: Subgroup, perms: &[Vec<usize>]) -> Result<Self> {
        let rank = perms.first().map_or(0, Vec::len);
        let one = ring.one();
        let mats = perms
            .iter()
            .map(|p| {
                if p.len() != rank || p.iter().any(|&x| x >= rank) {
                    return Err(Error::DimensionMismatch("permutation has the wrong degree".into()));
                }
                Ok(SparseMatrix::from_rows(rank, p.iter().map(|&x| linalg::unit_vec(x, one)).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, group, rank, mats)
    }

    pub fn ring(&self) -> &Arc<GRing> {
        &self.ring
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The matrix of `g` (an element index of the ambient group).
    pub fn matrix(&self, g: usize) -> &SparseMatrix {
        let p = self.group.position(g).unwrap_or_else(|| panic!("group element {g} does not act on this module"));
        &self.action[p]
    }

    pub fn matrices(&self) -> &[SparseMatrix] {
        &self.action
    }

    /// `v^g`.
    pub fn act(&self, v: &SparseVec, g: usize) -> SparseVec {
        self.matrix(g).apply(&self.ring, &linalg::twist(&self.ring, v, g))
    }

    /// The same module viewed over a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Self> {
        if !sub.is_subgroup_of(&self.group) {
            return Err(Error::GroupMismatch("restriction to a non-subgroup".into()));
        }
        let mats = sub.elements().iter().map(|&g| self.matrix(g).clone()).collect();
        Ok(SemilinearModule { ring: self.ring.clone(), group: sub.clone(), rank: self.rank, action: Arc::new(mats) })
    }

    /// `M_g^{-1} = twist(M_{g^{-1}}, g)`.
    pub fn inverse_matrix(&self, g: usize) -> SparseMatrix {
        let gi = self.group.parent().inv(g);
        self.matrix(gi).twist(&self.ring, g)
    }

    pub(crate) fn same_shape(&self, other: &SemilinearModule) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("modules over different rings".into()));
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch("modules over different groups".into()));
        }
        Ok(())
    }
}

/// An R-linear map between modules, given by the images of the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    source: SemilinearModule,
    target: SemilinearModule,
    matrix: SparseMatrix,
}

impl ModuleHom {
    pub fn new(source: SemilinearModule, target: SemilinearModule, matrix: SparseMatrix) -> Result<Self> {
        source.same_shape(&target)?;
        if matrix.n_rows() != source.rank() || matrix.n_cols() != target.rank() {
            return Err(Error::DimensionMismatch("hom matrix does not match the module ranks".into()));
        }
        Ok(ModuleHom { source, target, matrix })
    }

    pub fn identity(module: SemilinearModule) -> Self {
        let matrix = SparseMatrix::identity(module.ring(), module.rank());
        ModuleHom { source: module.clone(), target: module, matrix }
    }

    pub fn source(&self) -> &SemilinearModule {
        &self.source
    }

    pub fn target(&self) -> &SemilinearModule {
        &self.target
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        self.matrix.apply(self.source.ring(), v)
    }

    /// The first `(basis, g)` at which `f(b^g) != f(b)^g`, if any.
    pub fn equivariance_failure(&self) -> Option<(usize, usize)> {
        let ring = &**self.source.ring();
        self.source.group().elements().iter().find_map(|&g| {
            let lhs = self.source.matrix(g).mul(ring, &self.matrix);
            let rhs = self.matrix.twist(ring, g).mul(ring, self.target.matrix(g));
            (0..self.source.rank()).find(|&i| lhs.row(i) != rhs.row(i)).map(|i| (i, g))
        })
    }

    pub fn is_rg_hom(&self) -> bool {
        self.equivariance_failure().is_none()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &ModuleHom) -> Result<ModuleHom> {
        if self.target.rank() != other.source.rank() {
            return Err(Error::DimensionMismatch("composition of incompatible homs".into()));
        }
        let matrix = self.matrix.mul(self.source.ring(), &other.matrix);
        ModuleHom::new(self.source.clone(), other.target.clone(), matrix)
    }

    pub fn add(&self, other: &ModuleHom) -> Result<ModuleHom> {
        let matrix = self.matrix.add(self.source.ring(), &other.matrix);
        ModuleHom::new(self.source.clone(), self.target.clone(), matrix)
    }
}

/// Index of the tuple `(k_0, .., k_{n-1})`, slot 0 most significant.
pub fn tuple_index(tuple: &[usize], m: usize) -> usize {
    tuple.iter().fold(0, |acc, &k| acc * m + k)
}

pub fn index_tuple(mut index: usize, m: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in (0..n).rev() {
        out[slot] = index % m;
        index /= m;
    }
    out
}

/// The tensor product of slot vectors, each of length `m`.
pub fn tensor_vecs(ring: &GRing, vecs: &[SparseVec], m: usize) -> SparseVec {
    let mut acc: SparseVec = vec![(0, ring.one())];
    for v in vecs {
        let mut next = Vec::with_capacity(acc.len() * v.len());
        for &(a, x) in &acc {
            for &(l, y) in v {
                let p = ring.mul(x, y);
                if p != 0 {
                    next.push((a * m as u32 + l, p));
                }
            }
        }
        acc = next;
    }
    acc
}

fn check_induction_input(v: &SemilinearModule, t: &Transversal) -> Result<()> {
    if v.group() != t.subgroup() {
        return Err(Error::GroupMismatch("module group is not the transversal's subgroup".into()));
    }
    Ok(())
}

/// For each slot `i`, the routing `(h_i, j_i)` of `t_i g = h_i t_{j_i}`, and
/// the slot-`j` matrix `twist(M_{h_i}, t_j)` taking slot `i` content to slot `j`.
fn slot_images(v: &SemilinearModule, t: &Transversal, g: usize) -> Vec<(usize, SparseMatrix)> {
    (0..t.index())
        .map(|i| {
            let (h, j) = t.factor(i, g);
            (j, v.matrix(h).twist(v.ring(), t.reps()[j]))
        })
        .collect()
}

/// `V^G = ⊕_i V ⊗ t_i`, basis index `i·m + k` for `b_k ⊗ t_i`.
#[derive(Clone, Debug)]
pub struct InducedModule {
    base: SemilinearModule,
    transversal: Transversal,
    total: SemilinearModule,
}

pub fn induce(v: &SemilinearModule, t: &Transversal, limits: &Limits) -> Result<InducedModule> {
    check_induction_input(v, t)?;
    let (m, n) = (v.rank(), t.index());
    limits.check_rank("induced module", n * m)?;
    let group = Subgroup::whole(t.group().clone());
    let mats = group
        .elements()
        .iter()
        .map(|&g| {
            let mut rows = vec![Vec::new(); n * m];
            for (i, (j, q)) in slot_images(v, t, g).into_iter().enumerate() {
                for k in 0..m {
                    rows[i * m + k] = q.row(k).iter().map(|&(l, r)| ((j * m) as u32 + l, r)).collect();
                }
            }
            SparseMatrix::from_rows(n * m, rows)
        })
        .collect();
    let total = SemilinearModule::new(v.ring().clone(), group, n * m, mats)?;
    Ok(InducedModule { base: v.clone(), transversal: t.clone(), total })
}

impl InducedModule {
    pub fn base(&self) -> &SemilinearModule {
        &self.base
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn module(&self) -> &SemilinearModule {
        &self.total
    }

    /// Basis indices of the block `V ⊗ t_i`.
    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        let m = self.base.rank();
        i * m..(i + 1) * m
    }
}

/// `V^{⊗G} = ⊗_i V ⊗ t_i`, basis indexed by tuples with slot 0 most significant.
#[derive(Clone, Debug)]
pub struct TensorInducedModule {
    base: SemilinearModule,
    transversal: Transversal,
    total: SemilinearModule,
}

/// The matrix sending the basis tensor `⊗_i b_{k_i}` to `⊗_j` of the rows
/// `Q_i[k_i]` placed in slot `j_i`, where `images[i] = (j_i, Q_i)` and the
/// `j_i` form a permutation. All slots have rank `m`.
pub(crate) fn routed_kron(ring: &GRing, images: &[(usize, SparseMatrix)], m: usize) -> SparseMatrix {
    let n = images.len();
    let mut by_target: Vec<Option<&SparseMatrix>> = vec![None; n];
    for (j, q) in images {
        by_target[*j] = Some(q);
    }
    let kron = by_target
        .iter()
        .map(|q| q.expect("slot routing is a permutation"))
        .fold(SparseMatrix::identity(ring, 1), |acc, q| acc.kron(ring, q));
    let total = kron.n_rows();
    let rows = (0..total)
        .map(|idx| {
            let k = index_tuple(idx, m, n);
            let mut r = vec![0; n];
            for (i, (j, _)) in images.iter().enumerate() {
                r[*j] = k[i];
            }
            kron.row(tuple_index(&r, m)).clone()
        })
        .collect();
    SparseMatrix::from_rows(total, rows)
}

/// The action matrix of `g` on the tensor-induced module.
pub(crate) fn tensor_induced_matrix(v: &SemilinearModule, t: &Transversal, g: usize) -> SparseMatrix {
    routed_kron(v.ring(), &slot_images(v, t, g), v.rank())
}

pub fn tensor_induce(v: &SemilinearModule, t: &Transversal, limits: &Limits) -> Result<TensorInducedModule> {
    check_induction_input(v, t)?;
    let rank = limits.check_power("tensor induced module", v.rank(), t.index())?;
    let group = Subgroup::whole(t.group().clone());
    let mats = group.elements().iter().map(|&g| tensor_induced_matrix(v, t, g)).collect();
    let total = SemilinearModule::new(v.ring().clone(), group, rank, mats)?;
    Ok(TensorInducedModule { base: v.clone(), transversal: t.clone(), total })
}

impl TensorInducedModule {
    pub fn base(&self) -> &SemilinearModule {
        &self.base
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn module(&self) -> &SemilinearModule {
        &self.total
    }

    pub fn slots(&self) -> usize {
        self.transversal.index()
    }

    /// Applies `g` to `x` by routing pure tensors slot by slot, without the
    /// stored action matrix.
    pub fn apply_action(&self, x: &SparseVec, g: usize) -> SparseVec {
        ti_action_apply(self, x, g)
    }
}

/// `x^g` computed from the pure-tensor rule and extended semilinearly.
pub fn ti_action_apply(module: &TensorInducedModule, x: &SparseVec, g: usize) -> SparseVec {
    let v = &module.base;
    let t = &module.transversal;
    let ring = &**v.ring();
    let (m, n) = (v.rank(), t.index());
    let images = slot_images(v, t, g);
    let mut terms = Vec::new();
    for &(idx, r) in x {
        let k = index_tuple(idx as usize, m, n);
        let mut slots = vec![Vec::new(); n];
        for (i, (j, q)) in images.iter().enumerate() {
            slots[*j] = q.row(k[i]).clone();
        }
        let rg = ring.act(r, g);
        terms.extend(tensor_vecs(ring, &slots, m).into_iter().map(|(l, c)| (l, ring.mul(c, rg))));
    }
    linalg::collect_terms(ring, terms)
}

/// The slot-wise image of a tuple `(v_i)` under `g` in `V^G`: slot `j_i`
/// receives `(v_i ⊗ t_i) g`, in slot coordinates.
pub fn route_tuple(v: &SemilinearModule, t: &Transversal, tuple: &[SparseVec], g: usize) -> Vec<SparseVec> {
    let ring = &**v.ring();
    let mut out = vec![Vec::new(); t.index()];
    for (i, (j, q)) in slot_images(v, t, g).into_iter().enumerate() {
        out[j] = q.apply(ring, &linalg::twist(ring, &tuple[i], g));
    }
    out
}

/// The unique RG-hom `φ: V^{⊗G} → W` with `τφ = β`, after checking that `β`
/// is R-multilinear and a map of G-sets on basis data.
///
/// `beta` receives one vector per slot, in the coordinates `b_k ⊗ t_i`.
pub fn ti_universal_factorize(
    v: &SemilinearModule,
    t: &Transversal,
    w: &SemilinearModule,
    beta: impl Fn(&[SparseVec]) -> SparseVec + Sync,
) -> Result<(ModuleHom, u64)> {
    check_induction_input(v, t)?;
    if !w.group().is_whole() || w.ring() != v.ring() {
        return Err(Error::GroupMismatch("target must be an RG-module over the same ring".into()));
    }
    let ring = &**v.ring();
    let (m, n) = (v.rank(), t.index());
    let total = m.pow(n as u32);
    let basis_tuple = |idx: usize| -> Vec<SparseVec> {
        index_tuple(idx, m, n).into_iter().map(|k| linalg::unit_vec(k, ring.one())).collect()
    };
    let table: Vec<SparseVec> = (0..total).map(|idx| beta(&basis_tuple(idx))).collect();
    let mut count = 0u64;
    for (idx, value) in table.iter().enumerate() {
        let tuple = basis_tuple(idx);
        for slot in 0..n {
            for r in ring.elements() {
                let mut scaled = tuple.clone();
                scaled[slot] = linalg::scale(ring, &tuple[slot], r);
                if beta(&scaled) != linalg::scale(ring, value, r) {
                    return Err(Error::NotMultilinear { slot, tuple: idx, detail: format!("scalar {r}") });
                }
                count += 1;
            }
            for l in 0..m {
                let mut summed = tuple.clone();
                summed[slot] = linalg::add(ring, &tuple[slot], &linalg::unit_vec(l, ring.one()));
                let mut other = tuple.clone();
                other[slot] = linalg::unit_vec(l, ring.one());
                if beta(&summed) != linalg::add(ring, value, &beta(&other)) {
                    return Err(Error::NotMultilinear { slot, tuple: idx, detail: format!("sum with basis {l}") });
                }
                count += 1;
            }
        }
        for g in t.group().elements() {
            let moved = route_tuple(v, t, &tuple, g);
            if beta(&moved) != w.act(value, g) {
                return Err(Error::NotEquivariant { basis: idx, g });
            }
            count += 1;
        }
    }
    let source = SemilinearModule::new_unchecked(
        v.ring().clone(),
        Subgroup::whole(t.group().clone()),
        total,
        Subgroup::whole(t.group().clone()).elements().iter().map(|&g| tensor_induced_matrix(v, t, g)).collect(),
    )?;
    let hom = ModuleHom::new(source, w.clone(), SparseMatrix::from_rows(w.rank(), table))?;
    Ok((hom, count))
}

/// `φ^{⊗G}`: `⊗(v_i ⊗ t_i) ↦ ⊗(v_i φ ⊗ t_i)`, i.e. the Kronecker product of
/// `twist(Φ, t_i)`.
pub fn ti_hom(phi: &ModuleHom, t: &Transversal, limits: &Limits) -> Result<ModuleHom> {
    if let Some((basis, g)) = phi.equivariance_failure() {
        return Err(Error::NotRHHom { basis, g });
    }
    let source = tensor_induce(phi.source(), t, limits)?;
    let target = tensor_induce(phi.target(), t, limits)?;
    let matrix = ti_hom_matrix(phi.source().ring(), phi.matrix(), t);
    ModuleHom::new(source.total, target.total, matrix)
}

pub(crate) fn ti_hom_matrix(ring: &GRing, phi: &SparseMatrix, t: &Transversal) -> SparseMatrix {
    t.reps().iter().fold(SparseMatrix::identity(ring, 1), |acc, &ti| acc.kron(ring, &phi.twist(ring, ti)))
}

/// Searches pairs of scalar maps `r, r'` on `v` (with `r, r'` fixed by `H`)
/// for one where `(r + r')^{⊗G} != r^{⊗G} + r'^{⊗G}`.
pub fn ti_nonadditivity_witness(v: &SemilinearModule, t: &Transversal) -> Option<(Elem, Elem)> {
    let ring = v.ring();
    let h = v.group();
    let fixed: Vec<Elem> = ring.elements().filter(|&r| h.elements().iter().all(|&g| ring.act(r, g) == r)).collect();
    let scalar = |r: Elem| SparseMatrix::identity(ring, v.rank()).scale(ring, r);
    let lift = |r: Elem| ti_hom_matrix(ring, &scalar(r), t);
    fixed.iter().flat_map(|&x| fixed.iter().map(move |&y| (x, y))).find(|&(x, y)| {
        lift(ring.add(x, y)) != lift(x).add(ring, &lift(y))
    })
}

/// Right multiplication by a scalar on a rank-1 module, as a matrix.
pub fn scalar_matrix(r: Elem) -> SparseMatrix {
    SparseMatrix::from_rows(1, vec![linalg::unit_vec(0, r)])
}
