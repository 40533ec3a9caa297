//! G-algebras over a G-ring given by structure constants, Azumaya
//! presentations with a reduced trace, and algebra homomorphisms.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::Subgroup;
use crate::limits::Limits;
use crate::linalg::{self, SparseMatrix, SparseVec};
use crate::modules::{tensor_vecs, SemilinearModule};
use crate::rings::{Elem, GRing, GRingHom};

/// `b_i b_j = Σ_k c_{ijk} b_k`, stored per `i` as `(j, Σ_k c_{ijk} b_k)` sorted
/// by `j`, omitting zero products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    rank: usize,
    rows: Vec<Vec<(u32, SparseVec)>>,
}

impl StructureConstants {
    pub fn from_fn(rank: usize, mut product: impl FnMut(usize, usize) -> SparseVec) -> Self {
        let rows = (0..rank)
            .map(|i| {
                (0..rank)
                    .filter_map(|j| {
                        let p = product(i, j);
                        (!p.is_empty()).then_some((j as u32, p))
                    })
                    .collect()
            })
            .collect();
        StructureConstants { rank, rows }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `b_i b_j`, or `None` when it is zero.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> Option<&SparseVec> {
        let row = &self.rows[i];
        row.binary_search_by_key(&(j as u32), |e| e.0).ok().map(|p| &row[p].1)
    }

    pub fn nonzero_products(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `c_{ijk} ↦ c_{jik}`.
    pub fn transposed(&self) -> Self {
        let mut rows = vec![Vec::new(); self.rank];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                rows[*j as usize].push((i as u32, v.clone()));
            }
        }
        StructureConstants { rank: self.rank, rows }
    }

    /// Applies `g` to every structure constant.
    pub fn twisted(&self, ring: &GRing, g: usize) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(j, v)| (*j, linalg::twist(ring, v, g))).collect())
            .collect();
        StructureConstants { rank: self.rank, rows }
    }

    pub fn map_coefficients(&self, f: impl Fn(Elem) -> Elem) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(j, v)| (*j, v.iter().map(|&(k, c)| (k, f(c))).filter(|t| t.1 != 0).collect()))
                    .filter(|(_, v): &(u32, SparseVec)| !v.is_empty())
                    .collect()
            })
            .collect();
        StructureConstants { rank: self.rank, rows }
    }

    /// Tensor product of the factors, first factor most significant.
    pub fn tensor(ring: &GRing, factors: &[&StructureConstants]) -> Self {
        let mut acc = StructureConstants { rank: 1, rows: vec![vec![(0, vec![(0, ring.one())])]] };
        for f in factors {
            let d = f.rank;
            let mut rows = Vec::with_capacity(acc.rank * d);
            for r1 in &acc.rows {
                for r2 in &f.rows {
                    let mut row = Vec::with_capacity(r1.len() * r2.len());
                    for (j1, v1) in r1 {
                        for (j2, v2) in r2 {
                            row.push((j1 * d as u32 + j2, tensor_vecs(ring, &[v1.clone(), v2.clone()], d)));
                        }
                    }
                    rows.push(row);
                }
            }
            acc = StructureConstants { rank: acc.rank * d, rows };
        }
        acc
    }

    /// Multiplies coordinate vectors.
    pub fn multiply(&self, ring: &GRing, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for &(i, a) in x {
            let row = &self.rows[i as usize];
            if row.is_empty() {
                continue;
            }
            for &(j, b) in y {
                if let Ok(p) = row.binary_search_by_key(&j, |e| e.0) {
                    let ab = ring.mul(a, b);
                    terms.extend(row[p].1.iter().map(|&(k, c)| (k, ring.mul(ab, c))));
                }
            }
        }
        linalg::collect_terms(ring, terms)
    }
}

/// An associative unital R-algebra, free of finite rank, with a group acting
/// by semilinear ring automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAlgebra {
    module: SemilinearModule,
    mult: Arc<StructureConstants>,
    unit: SparseVec,
}

impl GAlgebra {
    /// Checks every axiom exhaustively on basis data.
    pub fn new(module: SemilinearModule, mult: StructureConstants, unit: SparseVec) -> Result<Self> {
        let a = Self::new_unchecked(module, mult, unit)?;
        a.verify_axioms()?;
        Ok(a)
    }

    /// Shape checks only. Constructors whose output satisfies the axioms by
    /// construction use this; [`Self::verify_axioms`] re-checks on demand.
    pub fn new_unchecked(module: SemilinearModule, mult: StructureConstants, unit: SparseVec) -> Result<Self> {
        if mult.rank() != module.rank() {
            return Err(Error::DimensionMismatch("structure constants do not match the module rank".into()));
        }
        Ok(GAlgebra { module, mult: Arc::new(mult), unit })
    }

    pub fn ring(&self) -> &Arc<GRing> {
        self.module.ring()
    }

    pub fn group(&self) -> &Subgroup {
        self.module.group()
    }

    pub fn module(&self) -> &SemilinearModule {
        &self.module
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.mult
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn one(&self) -> &SparseVec {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> SparseVec {
        linalg::unit_vec(i, self.ring().one())
    }

    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.mult.multiply(self.ring(), x, y)
    }

    pub fn act(&self, x: &SparseVec, g: usize) -> SparseVec {
        self.module.act(x, g)
    }

    /// Row `k` is `b_k x`.
    pub fn right_mul_matrix(&self, x: &SparseVec) -> SparseMatrix {
        let rows = (0..self.rank()).map(|k| self.mul(&self.basis(k), x)).collect();
        SparseMatrix::from_rows(self.rank(), rows)
    }

    /// Associativity on basis triples, two-sided unit, multiplicative and
    /// unital action, and the action law of the underlying module. Returns
    /// the number of identities checked.
    pub fn verify_axioms(&self) -> Result<u64> {
        let d = self.rank();
        let mut count = self.module.verify()?;
        for i in 0..d {
            let b = self.basis(i);
            if self.mul(&self.unit, &b) != b || self.mul(&b, &self.unit) != b {
                return Err(Error::BadUnit(i));
            }
        }
        count += 2 * d as u64;
        let failure = (0..d).into_par_iter().find_map_first(|i| {
            let bi = self.basis(i);
            for j in 0..d {
                let ij = self.mul(&bi, &self.basis(j));
                for k in 0..d {
                    let bk = self.basis(k);
                    let left = self.mul(&ij, &bk);
                    let jk = self.mul(&self.basis(j), &bk);
                    if left != self.mul(&bi, &jk) {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        if let Some((i, j, k)) = failure {
            return Err(Error::AlgebraNotAssociative(i, j, k));
        }
        count += (d * d * d) as u64;
        for &g in self.group().elements() {
            if self.act(&self.unit, g) != self.unit {
                return Err(Error::ActionMovesUnit(g));
            }
            let images: Vec<SparseVec> = (0..d).map(|i| self.module.matrix(g).row(i).clone()).collect();
            let failure = (0..d).into_par_iter().find_map_first(|i| {
                (0..d)
                    .find(|&j| {
                        let prod = self.mul(&self.basis(i), &self.basis(j));
                        self.act(&prod, g) != self.mul(&images[i], &images[j])
                    })
                    .map(|j| (i, j))
            });
            if let Some((i, j)) = failure {
                return Err(Error::ActionNotMultiplicative { g, i, j });
            }
            count += (d * d) as u64 + 1;
        }
        Ok(count)
    }

    /// The algebra with its action restricted to a subgroup.
    pub fn restrict(&self, sub: &Subgroup) -> Result<Self> {
        Ok(GAlgebra { module: self.module.restrict(sub)?, mult: self.mult.clone(), unit: self.unit.clone() })
    }

    /// Same module and action, opposite multiplication.
    pub fn opposite(&self) -> Self {
        GAlgebra { module: self.module.clone(), mult: Arc::new(self.mult.transposed()), unit: self.unit.clone() }
    }

    /// Whether `x` commutes with every basis element.
    pub fn is_central(&self, x: &SparseVec) -> bool {
        (0..self.rank()).all(|i| {
            let b = self.basis(i);
            self.mul(x, &b) == self.mul(&b, x)
        })
    }

    /// Scalar extension `A ⊗_R S` along an equivariant ring map, over the
    /// same acting subgroup.
    pub fn scalar_extend(&self, phi: &GRingHom) -> Result<Self> {
        if phi.source() != self.ring() {
            return Err(Error::RingMismatch("scalar extension along a map from another ring".into()));
        }
        let s = phi.target().clone();
        let map_vec = |v: &SparseVec| -> SparseVec {
            v.iter().map(|&(i, r)| (i, phi.apply(r))).filter(|t| t.1 != 0).collect()
        };
        let mats = self
            .group()
            .elements()
            .iter()
            .map(|&g| {
                let m = self.module.matrix(g);
                SparseMatrix::from_rows(m.n_cols(), m.rows().iter().map(map_vec).collect())
            })
            .collect();
        let group = Subgroup::from_elements(s.group().clone(), self.group().elements())?;
        let module = SemilinearModule::new(s, group, self.rank(), mats)?;
        let mult = self.mult.map_coefficients(|c| phi.apply(c));
        GAlgebra::new_unchecked(module, mult, map_vec(&self.unit))
    }
}

/// How a presentation was built, recorded for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Matrix(usize),
    End(usize),
    Tensor(Box<Provenance>, Box<Provenance>),
    Opposite(Box<Provenance>),
    Cores(Box<Provenance>, usize),
    Restrict(Box<Provenance>),
    TensorPower(Box<Provenance>, usize),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Matrix(n) => write!(f, "M_{n}"),
            Provenance::End(m) => write!(f, "End(P_{m})"),
            Provenance::Tensor(a, b) => write!(f, "({a} ⊗ {b})"),
            Provenance::Opposite(a) => write!(f, "{a}^op"),
            Provenance::Cores(a, n) => write!(f, "Cores({a}; {n} cosets)"),
            Provenance::Restrict(a) => write!(f, "Res({a})"),
            Provenance::TensorPower(a, n) => write!(f, "{a}^⊗{n}"),
        }
    }
}

/// A G-algebra together with a reduced trace `trd(b_i)`, carried as data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AzumayaPresentation {
    algebra: GAlgebra,
    trace: Vec<Elem>,
    provenance: Provenance,
}

impl AzumayaPresentation {
    pub fn new(algebra: GAlgebra, trace: Vec<Elem>, provenance: Provenance) -> Result<Self> {
        if trace.len() != algebra.rank() {
            return Err(Error::DimensionMismatch("trace has the wrong length".into()));
        }
        Ok(AzumayaPresentation { algebra, trace, provenance })
    }

    pub fn algebra(&self) -> &GAlgebra {
        &self.algebra
    }

    pub fn trace_values(&self) -> &[Elem] {
        &self.trace
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn trace(&self, x: &SparseVec) -> Elem {
        let ring = self.algebra.ring();
        x.iter().fold(0, |acc, &(i, r)| ring.add(acc, ring.mul(r, self.trace[i as usize])))
    }

    /// `trd(ab) = trd(ba)` on basis pairs.
    pub fn check_trace_symmetric(&self) -> Result<u64> {
        let a = &self.algebra;
        let d = a.rank();
        for i in 0..d {
            for j in i + 1..d {
                let (bi, bj) = (a.basis(i), a.basis(j));
                if self.trace(&a.mul(&bi, &bj)) != self.trace(&a.mul(&bj, &bi)) {
                    return Err(Error::TraceNotSymmetric(i, j));
                }
            }
        }
        Ok((d * d.saturating_sub(1) / 2) as u64)
    }

    pub fn restrict(&self, sub: &Subgroup) -> Result<Self> {
        Ok(AzumayaPresentation {
            algebra: self.algebra.restrict(sub)?,
            trace: self.trace.clone(),
            provenance: Provenance::Restrict(Box::new(self.provenance.clone())),
        })
    }

    pub fn opposite(&self) -> Self {
        AzumayaPresentation {
            algebra: self.algebra.opposite(),
            trace: self.trace.clone(),
            provenance: Provenance::Opposite(Box::new(self.provenance.clone())),
        }
    }

    /// Replaces the trace table (for negative controls).
    pub fn with_trace(&self, trace: Vec<Elem>) -> Result<Self> {
        Self::new(self.algebra.clone(), trace, self.provenance.clone())
    }
}

/// `End_R(P)` on the matrix units `E_{xy}: b_x ↦ b_y` (index `x·m + y`), with
/// `[α^g] = M_g^{-1} · twist([α], g) · M_g`. The trace is the matrix trace.
pub fn end_galgebra(p: &SemilinearModule, limits: &Limits) -> Result<AzumayaPresentation> {
    let m = p.rank();
    let rank = limits.check_rank("endomorphism algebra", m.saturating_mul(m))?;
    let ring = p.ring();
    let mats: Vec<SparseMatrix> = p
        .group()
        .elements()
        .par_iter()
        .map(|&g| p.inverse_matrix(g).transpose().kron(ring, p.matrix(g)))
        .collect();
    let module = SemilinearModule::new_unchecked(ring.clone(), p.group().clone(), rank, mats)?;
    let one = ring.one();
    let mult = StructureConstants {
        rank,
        rows: (0..rank)
            .map(|i| {
                let (x, y) = (i / m, i % m);
                (0..m).map(|w| ((y * m + w) as u32, linalg::unit_vec(x * m + w, one))).collect()
            })
            .collect(),
    };
    let unit = (0..m).map(|x| ((x * m + x) as u32, one)).collect();
    let trace = (0..rank).map(|i| if i / m == i % m { one } else { 0 }).collect();
    let algebra = GAlgebra::new_unchecked(module, mult, unit)?;
    Ok(AzumayaPresentation { algebra, trace, provenance: Provenance::End(m) })
}

/// `M_n(R)` with the entrywise action of the whole group.
pub fn matrix_galgebra(ring: &Arc<GRing>, n: usize, limits: &Limits) -> Result<AzumayaPresentation> {
    let p = SemilinearModule::trivial(ring.clone(), Subgroup::whole(ring.group().clone()), n)?;
    let mut a = end_galgebra(&p, limits)?;
    a.provenance = Provenance::Matrix(n);
    Ok(a)
}

/// `A ⊗_R B` with the diagonal action `(a ⊗ b)^g = a^g ⊗ b^g`.
pub fn tensor_galgebra(a: &GAlgebra, b: &GAlgebra, limits: &Limits) -> Result<GAlgebra> {
    a.module().same_shape(b.module())?;
    let rank = limits.check_rank("tensor product", a.rank().saturating_mul(b.rank()))?;
    let ring = a.ring();
    let mats = a
        .group()
        .elements()
        .par_iter()
        .map(|&g| a.module().matrix(g).kron(ring, b.module().matrix(g)))
        .collect();
    let module = SemilinearModule::new_unchecked(ring.clone(), a.group().clone(), rank, mats)?;
    let mult = StructureConstants::tensor(ring, &[a.structure(), b.structure()]);
    let unit = tensor_vecs(ring, &[a.one().clone(), b.one().clone()], b.rank());
    GAlgebra::new_unchecked(module, mult, unit)
}

/// Tensor product of presentations with `trd(a ⊗ b) = trd(a) trd(b)`.
pub fn tensor_presentation(
    a: &AzumayaPresentation,
    b: &AzumayaPresentation,
    limits: &Limits,
) -> Result<AzumayaPresentation> {
    let algebra = tensor_galgebra(&a.algebra, &b.algebra, limits)?;
    let ring = algebra.ring().clone();
    let trace = a.trace.iter().flat_map(|&x| b.trace.iter().map(move |&y| (x, y))).map(|(x, y)| ring.mul(x, y)).collect();
    Ok(AzumayaPresentation {
        algebra,
        trace,
        provenance: Provenance::Tensor(Box::new(a.provenance.clone()), Box::new(b.provenance.clone())),
    })
}

/// `A^{⊗n}` with the diagonal action and the product trace.
pub fn tensor_power(a: &AzumayaPresentation, n: usize, limits: &Limits) -> Result<AzumayaPresentation> {
    let rank = limits.check_power("tensor power", a.algebra.rank(), n)?;
    let alg = &a.algebra;
    let ring = alg.ring();
    let d = alg.rank();
    let mats = alg
        .group()
        .elements()
        .par_iter()
        .map(|&g| {
            let m = alg.module().matrix(g);
            (0..n).fold(SparseMatrix::identity(ring, 1), |acc, _| acc.kron(ring, m))
        })
        .collect();
    let module = SemilinearModule::new_unchecked(ring.clone(), alg.group().clone(), rank, mats)?;
    let factors = vec![alg.structure(); n];
    let mult = StructureConstants::tensor(ring, &factors);
    let unit = tensor_vecs(ring, &vec![alg.one().clone(); n], d);
    let trace = (0..rank)
        .map(|idx| {
            crate::modules::index_tuple(idx, d, n).into_iter().fold(ring.one(), |acc, k| ring.mul(acc, a.trace[k]))
        })
        .collect();
    Ok(AzumayaPresentation {
        algebra: GAlgebra::new_unchecked(module, mult, unit)?,
        trace,
        provenance: Provenance::TensorPower(Box::new(a.provenance.clone()), n),
    })
}

/// The commutative algebra `R` itself (rank 1, trace the identity).
pub fn unit_algebra(ring: &Arc<GRing>, group: Subgroup) -> Result<AzumayaPresentation> {
    let mut a = end_galgebra(&SemilinearModule::trivial(ring.clone(), group, 1)?, &Limits::default())?;
    a.provenance = Provenance::Matrix(1);
    Ok(a)
}

/// Result of the operational Azumaya test: bijectivity of the natural map
/// `A^op ⊗ A → End_R(A)`, `x (a ⊗ b) = a x b`.
#[derive(Clone, Debug)]
pub struct AzumayaCertificate {
    pub is_azumaya: bool,
    /// A nonzero element of `A^op ⊗ A` in the kernel, when one was found.
    pub kernel_vector: Option<SparseVec>,
    /// Rank of the square system that was eliminated.
    pub system_size: usize,
}

/// The matrix of `A^op ⊗ A → End_R(A)`: row `i·d + j` is the flattened
/// endomorphism `x ↦ b_i x b_j`.
pub fn natural_map_matrix(a: &GAlgebra, limits: &Limits) -> Result<SparseMatrix> {
    let d = a.rank();
    let size = limits.check_rank("natural map A^op ⊗ A → End(A)", d.saturating_mul(d))?;
    let rows: Vec<SparseVec> = (0..size)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / d, idx % d);
            let (bi, bj) = (a.basis(i), a.basis(j));
            let mut row = Vec::new();
            for k in 0..d {
                let v = a.mul(&a.mul(&bi, &a.basis(k)), &bj);
                row.extend(v.into_iter().map(|(l, r)| ((k * d) as u32 + l, r)));
            }
            row
        })
        .collect();
    Ok(SparseMatrix::from_rows(size, rows))
}

pub fn azumaya_check(a: &GAlgebra, limits: &Limits) -> Result<AzumayaCertificate> {
    let n = natural_map_matrix(a, limits)?;
    let e = linalg::eliminate(a.ring(), &n, false);
    Ok(AzumayaCertificate { is_azumaya: e.invertible, kernel_vector: e.kernel_vector, system_size: n.n_rows() })
}

/// An R-linear map between algebras, given by the images of the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAlgebraHom {
    source: GAlgebra,
    target: GAlgebra,
    matrix: SparseMatrix,
}

impl GAlgebraHom {
    pub fn new(source: GAlgebra, target: GAlgebra, matrix: SparseMatrix) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch("algebra map between different rings".into()));
        }
        if matrix.n_rows() != source.rank() || matrix.n_cols() != target.rank() {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {}x{}, algebras have ranks {} and {}",
                matrix.n_rows(),
                matrix.n_cols(),
                source.rank(),
                target.rank()
            )));
        }
        Ok(GAlgebraHom { source, target, matrix })
    }

    pub fn identity(a: &GAlgebra) -> Self {
        GAlgebraHom { source: a.clone(), target: a.clone(), matrix: SparseMatrix::identity(a.ring(), a.rank()) }
    }

    pub fn source(&self) -> &GAlgebra {
        &self.source
    }

    pub fn target(&self) -> &GAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        self.matrix.apply(self.source.ring(), x)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &GAlgebraHom) -> Result<Self> {
        if self.target.rank() != other.source.rank() {
            return Err(Error::DimensionMismatch("composition of incompatible maps".into()));
        }
        GAlgebraHom::new(self.source.clone(), other.target.clone(), self.matrix.mul(self.source.ring(), &other.matrix))
    }

    /// The inverse map, when the matrix is invertible.
    pub fn inverse(&self) -> Result<Self> {
        let inv = linalg::inverse(self.source.ring(), &self.matrix).ok_or(Error::NotBijective)?;
        GAlgebraHom::new(self.target.clone(), self.source.clone(), inv)
    }

    /// `f ⊗ g` between the tensor products.
    pub fn tensor(&self, other: &GAlgebraHom, limits: &Limits) -> Result<Self> {
        let source = tensor_galgebra(&self.source, &other.source, limits)?;
        let target = tensor_galgebra(&self.target, &other.target, limits)?;
        GAlgebraHom::new(source, target, self.matrix.kron(self.source.ring(), &other.matrix))
    }

    fn check_unit(&self) -> Result<()> {
        if self.apply(self.source.one()) != *self.target.one() {
            return Err(Error::NotUnital);
        }
        Ok(())
    }

    fn check_multiplicative(&self) -> Result<u64> {
        let d = self.source.rank();
        let images: Vec<&SparseVec> = self.matrix.rows().iter().collect();
        let failure = (0..d).into_par_iter().find_map_first(|i| {
            let bi = self.source.basis(i);
            (0..d)
                .find(|&j| {
                    let lhs = self.apply(&self.source.mul(&bi, &self.source.basis(j)));
                    lhs != self.target.mul(images[i], images[j])
                })
                .map(|j| (i, j))
        });
        if let Some((i, j)) = failure {
            return Err(Error::NotMultiplicative(i, j));
        }
        Ok((d * d) as u64)
    }

    /// `f(b_i^g) = f(b_i)^g` for every basis element and every `g` in `group`.
    fn check_equivariant(&self, group: &Subgroup) -> Result<u64> {
        let ring = &**self.source.ring();
        for &g in group.elements() {
            let lhs = self.source.module().matrix(g).mul(ring, &self.matrix);
            let rhs = self.matrix.twist(ring, g).mul(ring, self.target.module().matrix(g));
            if let Some(i) = (0..self.source.rank()).find(|&i| lhs.row(i) != rhs.row(i)) {
                return Err(Error::NotEquivariant { basis: i, g });
            }
        }
        Ok((self.source.rank() * group.order()) as u64)
    }

    fn check_bijective(&self) -> Result<u64> {
        if self.source.rank() != self.target.rank() || !linalg::is_invertible(self.source.ring(), &self.matrix) {
            return Err(Error::NotBijective);
        }
        Ok(1)
    }

    /// Unital and multiplicative as a map of R-algebras (actions ignored).
    pub fn check_ring_hom(&self) -> Result<u64> {
        self.check_unit()?;
        Ok(1 + self.check_multiplicative()?)
    }

    /// Unital, multiplicative and equivariant for the source's acting group.
    pub fn check_hom(&self) -> Result<u64> {
        let group = self.source.group().clone();
        if !group.is_subgroup_of(self.target.group()) {
            return Err(Error::GroupMismatch("target is not acted on by the source's group".into()));
        }
        Ok(self.check_ring_hom()? + self.check_equivariant(&group)?)
    }
}

/// Verifies that `f` is an isomorphism of G-algebras: unital, multiplicative
/// on all basis pairs, equivariant on basis × group, and bijective. Returns
/// the number of identities checked.
pub fn iso_check(f: &GAlgebraHom) -> Result<u64> {
    if f.source.group() != f.target.group() {
        return Err(Error::GroupMismatch("isomorphism between algebras over different groups".into()));
    }
    Ok(f.check_hom()? + f.check_bijective()?)
}

/// Data certifying `A ~ B`: an isomorphism `A ⊗ End_R(P) ≅ B ⊗ End_R(Q)`.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub a: GAlgebra,
    pub p: SemilinearModule,
    pub b: GAlgebra,
    pub q: SemilinearModule,
    /// Matrix from the basis of `A ⊗ End(P)` to that of `B ⊗ End(Q)`.
    pub iso: SparseMatrix,
    /// How the iso was assembled.
    pub provenance: String,
}

impl EquivalenceWitness {
    pub fn source(&self, limits: &Limits) -> Result<GAlgebra> {
        tensor_galgebra(&self.a, end_galgebra(&self.p, limits)?.algebra(), limits)
    }

    pub fn target(&self, limits: &Limits) -> Result<GAlgebra> {
        tensor_galgebra(&self.b, end_galgebra(&self.q, limits)?.algebra(), limits)
    }

    pub fn hom(&self, limits: &Limits) -> Result<GAlgebraHom> {
        GAlgebraHom::new(self.source(limits)?, self.target(limits)?, self.iso.clone())
    }

    /// `A ~ A` through the identity, with `P = Q = R`.
    pub fn reflexive(a: &GAlgebra) -> Result<Self> {
        let r = SemilinearModule::trivial(a.ring().clone(), a.group().clone(), 1)?;
        Ok(EquivalenceWitness {
            a: a.clone(),
            p: r.clone(),
            b: a.clone(),
            q: r,
            iso: SparseMatrix::identity(a.ring(), a.rank()),
            provenance: "identity".into(),
        })
    }
}

pub fn equivalence_witness_check(w: &EquivalenceWitness, limits: &Limits) -> Result<u64> {
    if w.p.rank() == 0 || w.q.rank() == 0 {
        return Err(Error::MalformedWitness("trivial factors need positive rank".into()));
    }
    iso_check(&w.hom(limits)?)
}

/// The permutation iso `A ⊗ B → B ⊗ A`.
pub fn swap_iso(a: &GAlgebra, b: &GAlgebra, limits: &Limits) -> Result<GAlgebraHom> {
    let (da, db) = (a.rank(), b.rank());
    let one = a.ring().one();
    let rows = (0..da * db).map(|idx| linalg::unit_vec((idx % db) * da + idx / db, one)).collect();
    GAlgebraHom::new(tensor_galgebra(a, b, limits)?, tensor_galgebra(b, a, limits)?, SparseMatrix::from_rows(da * db, rows))
}

/// `b ↦ b^T` on `End_R(P)` as a linear map (an anti-automorphism).
pub fn transpose_map(a: &AzumayaPresentation) -> Result<GAlgebraHom> {
    let (Provenance::Matrix(n) | Provenance::End(n)) = a.provenance else {
        return Err(Error::DimensionMismatch("transpose needs a matrix presentation".into()));
    };
    let one = a.algebra.ring().one();
    let rows = (0..n * n).map(|i| linalg::unit_vec((i % n) * n + i / n, one)).collect();
    GAlgebraHom::new(a.algebra.clone(), a.algebra.clone(), SparseMatrix::from_rows(n * n, rows))
}
