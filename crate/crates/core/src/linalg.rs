//! Sparse vectors and matrices over a finite commutative ring, and exact
//! elimination.
//!
//! Matrices act on row vectors: row `i` is the image of basis vector `b_i`, so
//! the composite "f then g" is the product `F·G`. Elimination splits the ring
//! into its local factors `eR` and runs Gauss-Jordan with unit pivots in each.

use rayon::prelude::*;

use crate::rings::{Elem, GRing, LocalComponent};

/// Sorted `(index, coefficient)` pairs with no zero coefficients.
pub type SparseVec = Vec<(u32, Elem)>;

pub fn unit_vec(i: usize, r: Elem) -> SparseVec {
    if r == 0 {
        Vec::new()
    } else {
        vec![(i as u32, r)]
    }
}

pub fn to_dense(v: &SparseVec, len: usize) -> Vec<Elem> {
    let mut out = vec![0; len];
    for &(i, r) in v {
        out[i as usize] = r;
    }
    out
}

pub fn from_dense(v: &[Elem]) -> SparseVec {
    v.iter().enumerate().filter(|(_, &r)| r != 0).map(|(i, &r)| (i as u32, r)).collect()
}

pub fn add(ring: &GRing, a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let s = ring.add(a[i].1, b[j].1);
                if s != 0 {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn neg(ring: &GRing, a: &SparseVec) -> SparseVec {
    a.iter().map(|&(i, r)| (i, ring.neg(r))).collect()
}

pub fn sub(ring: &GRing, a: &SparseVec, b: &SparseVec) -> SparseVec {
    add(ring, a, &neg(ring, b))
}

pub fn scale(ring: &GRing, a: &SparseVec, r: Elem) -> SparseVec {
    a.iter().filter_map(|&(i, x)| Some((i, ring.mul(x, r))).filter(|p| p.1 != 0)).collect()
}

/// Applies `g` to every coefficient.
pub fn twist(ring: &GRing, a: &SparseVec, g: usize) -> SparseVec {
    a.iter().map(|&(i, r)| (i, ring.act(r, g))).collect()
}

/// Sorts `(index, coefficient)` terms, merging duplicates and dropping zeros.
pub fn collect_terms(ring: &GRing, mut terms: Vec<(u32, Elem)>) -> SparseVec {
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: SparseVec = Vec::with_capacity(terms.len());
    for (i, r) in terms {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = ring.add(last.1, r),
            _ => out.push((i, r)),
        }
    }
    out.retain(|t| t.1 != 0);
    out
}

/// A `rows × cols` matrix stored as sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    cols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { cols, rows: vec![Vec::new(); rows] }
    }

    pub fn identity(ring: &GRing, n: usize) -> Self {
        SparseMatrix { cols: n, rows: (0..n).map(|i| unit_vec(i, ring.one())).collect() }
    }

    /// Rows must be sorted, zero-free and in range.
    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Self {
        debug_assert!(rows.iter().all(|r| r.windows(2).all(|w| w[0].0 < w[1].0)
            && r.iter().all(|&(i, x)| (i as usize) < cols && x != 0)));
        SparseMatrix { cols, rows }
    }

    pub fn from_dense(rows: &[Vec<Elem>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        SparseMatrix { cols, rows: rows.iter().map(|r| from_dense(r)).collect() }
    }

    pub fn to_dense(&self) -> Vec<Vec<Elem>> {
        self.rows.iter().map(|r| to_dense(r, self.cols)).collect()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        let row = &self.rows[i];
        row.binary_search_by_key(&(j as u32), |t| t.0).map_or(0, |k| row[k].1)
    }

    pub fn is_identity(&self, ring: &GRing) -> bool {
        self.cols == self.rows.len()
            && self.rows.iter().enumerate().all(|(i, r)| r.len() == 1 && r[0] == (i as u32, ring.one()))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Row vector times matrix.
    pub fn apply(&self, ring: &GRing, v: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for &(i, r) in v {
            for &(j, x) in &self.rows[i as usize] {
                terms.push((j, ring.mul(r, x)));
            }
        }
        collect_terms(ring, terms)
    }

    /// `self · other`, i.e. `self` followed by `other`.
    pub fn mul(&self, ring: &GRing, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.n_rows(), "matrix product dimension mismatch");
        let rows = self.rows.par_iter().map(|r| other.apply(ring, r)).collect();
        SparseMatrix { cols: other.cols, rows }
    }

    pub fn add(&self, ring: &GRing, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.n_rows(), self.cols), (other.n_rows(), other.cols));
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| add(ring, a, b)).collect();
        SparseMatrix { cols: self.cols, rows }
    }

    pub fn scale(&self, ring: &GRing, r: Elem) -> SparseMatrix {
        SparseMatrix { cols: self.cols, rows: self.rows.iter().map(|v| scale(ring, v, r)).collect() }
    }

    /// Entrywise action of `g`.
    pub fn twist(&self, ring: &GRing, g: usize) -> SparseMatrix {
        SparseMatrix { cols: self.cols, rows: self.rows.iter().map(|v| twist(ring, v, g)).collect() }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut rows = vec![Vec::new(); self.cols];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, x) in r {
                rows[j as usize].push((i as u32, x));
            }
        }
        SparseMatrix { cols: self.rows.len(), rows }
    }

    /// Kronecker product with the first factor most significant:
    /// `(b_i ⊗ c_k) ↦ (b_i F) ⊗ (c_k G)`.
    pub fn kron(&self, ring: &GRing, other: &SparseMatrix) -> SparseMatrix {
        let (ro, co) = (other.n_rows(), other.cols);
        let mut rows = Vec::with_capacity(self.n_rows() * ro);
        for a in &self.rows {
            for b in &other.rows {
                let mut row = Vec::with_capacity(a.len() * b.len());
                for &(j, x) in a {
                    for &(l, y) in b {
                        let p = ring.mul(x, y);
                        if p != 0 {
                            row.push((j * co as u32 + l, p));
                        }
                    }
                }
                rows.push(row);
            }
        }
        SparseMatrix { cols: self.cols * co, rows }
    }
}

/// Outcome of eliminating a square matrix.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub invertible: bool,
    /// `M^{-1}` when invertible and requested.
    pub inverse: Option<SparseMatrix>,
    /// A nonzero `v` with `v·M = 0`, found on a residue-field component.
    pub kernel_vector: Option<SparseVec>,
}

/// Decides invertibility of a square matrix, optionally producing the inverse
/// (or a left-kernel vector when singular on a field component).
pub fn eliminate(ring: &GRing, m: &SparseMatrix, want_inverse: bool) -> Elimination {
    let n = m.n_rows();
    assert_eq!(n, m.n_cols(), "elimination needs a square matrix");
    let mut inverse = want_inverse.then(|| SparseMatrix::zero(n, n));
    for comp in ring.components() {
        match eliminate_local(ring, m, comp, want_inverse) {
            Ok(Some(inv)) => {
                if let Some(total) = inverse.as_mut() {
                    *total = total.add(ring, &inv);
                }
            }
            Ok(None) => {}
            Err(kernel) => return Elimination { invertible: false, inverse: None, kernel_vector: kernel },
        }
    }
    Elimination { invertible: true, inverse, kernel_vector: None }
}

pub fn is_invertible(ring: &GRing, m: &SparseMatrix) -> bool {
    m.n_rows() == m.n_cols() && eliminate(ring, m, false).invertible
}

pub fn inverse(ring: &GRing, m: &SparseMatrix) -> Option<SparseMatrix> {
    if m.n_rows() != m.n_cols() {
        return None;
    }
    eliminate(ring, m, true).inverse
}

/// Gauss-Jordan over the local factor `eR` on `[eM | eI]`. Returns the
/// inverse over `eR`, or on failure a kernel vector when `eR` is a field.
fn eliminate_local(
    ring: &GRing,
    m: &SparseMatrix,
    comp: &LocalComponent,
    augment: bool,
) -> Result<Option<SparseMatrix>, Option<SparseVec>> {
    let n = m.n_rows();
    let e = comp.idempotent();
    let augment = augment || comp.is_field();
    let width = if augment { 2 * n } else { n };
    let mut a: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            let mut row = vec![0; width];
            for &(j, x) in m.row(i) {
                row[j as usize] = ring.mul(x, e);
            }
            if augment {
                row[n + i] = e;
            }
            row
        })
        .collect();
    let mut pivot_done = vec![false; n];
    let mut pivot_rows = vec![0usize; n];
    for c in 0..n {
        let Some(p) = (0..n).find(|&r| !pivot_done[r] && comp.inverse(a[r][c]).is_some()) else {
            return Err(if comp.is_field() { field_kernel(ring, comp, &a, &pivot_done, n) } else { None });
        };
        pivot_done[p] = true;
        pivot_rows[c] = p;
        let inv = comp.inverse(a[p][c]).unwrap();
        for x in a[p].iter_mut() {
            *x = ring.mul(*x, inv);
        }
        let support: Vec<usize> = (0..width).filter(|&j| a[p][j] != 0).collect();
        let pivot = std::mem::take(&mut a[p]);
        for (r, row) in a.iter_mut().enumerate() {
            if r == p {
                continue;
            }
            let f = row[c];
            if f == 0 {
                continue;
            }
            for &j in &support {
                row[j] = ring.sub(row[j], ring.mul(f, pivot[j]));
            }
        }
        a[p] = pivot;
    }
    if !augment {
        return Ok(None);
    }
    let rows = (0..n).map(|c| from_dense(&a[pivot_rows[c]][n..])).collect();
    Ok(Some(SparseMatrix { cols: n, rows }))
}

/// Finishes a stalled field elimination: reduces the remaining rows to echelon
/// form and returns the augmented part of a row whose matrix part vanished.
fn field_kernel(ring: &GRing, comp: &LocalComponent, a: &[Vec<Elem>], done: &[bool], n: usize) -> Option<SparseVec> {
    let mut rest: Vec<Vec<Elem>> = (0..a.len()).filter(|&r| !done[r]).map(|r| a[r].clone()).collect();
    let mut used = vec![false; rest.len()];
    for c in 0..n {
        let Some(p) = (0..rest.len()).find(|&r| !used[r] && rest[r][c] != 0) else {
            continue;
        };
        used[p] = true;
        let inv = comp.inverse(rest[p][c])?;
        let pivot: Vec<Elem> = rest[p].iter().map(|&x| ring.mul(x, inv)).collect();
        for (r, row) in rest.iter_mut().enumerate() {
            if r != p && row[c] != 0 {
                let f = row[c];
                for j in 0..row.len() {
                    row[j] = ring.sub(row[j], ring.mul(f, pivot[j]));
                }
            }
        }
        rest[p] = pivot;
    }
    rest.iter().find(|row| row[..n].iter().all(|&x| x == 0)).map(|row| from_dense(&row[n..]))
}
