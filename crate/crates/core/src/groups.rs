//! Finite groups given by multiplication tables, subgroups, right-coset
//! transversals and permutations.
//!
//! Elements are dense indices `0..order`. Products are read left to right,
//! and every action in the crate is a right action: `x^(gh) = (x^g)^h`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default soft limit on the group order; exhaustive checks scale with |G|².
pub const DEFAULT_MAX_GROUP_ORDER: usize = 24;

/// Names of the shipped group presets.
pub const PRESETS: &[&str] = &["C1", "C2", "C3", "C4", "C2xC2", "S3", "S4"];

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).finish()
    }
}

impl FiniteGroup {
    /// Validates a multiplication table against the default order limit.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        Self::from_table_with_limit(table, DEFAULT_MAX_GROUP_ORDER)
    }

    /// Validates a multiplication table. Associativity is checked first, then
    /// the identity, then inverses.
    pub fn from_table_with_limit(table: &[Vec<usize>], max_order: usize) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        if order > max_order {
            return Err(Error::GroupTooLarge { order, limit: max_order });
        }
        let mut mul = Vec::with_capacity(order * order);
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::MalformedTable(format!(
                    "row {a} has length {}, expected {order}",
                    row.len()
                )));
            }
            for &x in row {
                if x >= order {
                    return Err(Error::MalformedTable(format!("entry {x} in row {a} out of range")));
                }
                mul.push(x);
            }
        }
        let m = |a: usize, b: usize| mul[a * order + b];
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if m(m(a, b), c) != m(a, m(b, c)) {
                        return Err(Error::NonAssociative(a, b, c));
                    }
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or(Error::NoIdentity)?;
        let mut inv = Vec::with_capacity(order);
        for a in 0..order {
            let b = (0..order)
                .find(|&b| m(a, b) == identity && m(b, a) == identity)
                .ok_or(Error::NoInverse(a))?;
            inv.push(b);
        }
        Ok(FiniteGroup { order, mul, identity, inv })
    }

    pub fn preset(name: &str) -> Result<Self> {
        let table = match name {
            "C1" => cyclic_table(1),
            "C2" => cyclic_table(2),
            "C3" => cyclic_table(3),
            "C4" => cyclic_table(4),
            "C2xC2" | "V4" => (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
            "S3" => permutation_group_table(&s3_elements()),
            "S4" => permutation_group_table(&s4_elements()),
            other => return Err(Error::UnknownPreset(other.to_string())),
        };
        Self::from_table(&table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }
}

fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

/// Elements of S3 as image arrays on {0,1,2}, in the preset order
/// `e, (12), (123), (132), (13), (23)` (points labelled 1..3).
pub fn s3_elements() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2],
        vec![1, 0, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![2, 1, 0],
        vec![0, 2, 1],
    ]
}

/// Elements of S4 as image arrays on {0,1,2,3} in lexicographic order.
pub fn s4_elements() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..4).collect();
    loop {
        out.push(current.clone());
        if !next_permutation(&mut current) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Multiplication table of a list of permutations under "apply left factor
/// first" composition.
fn permutation_group_table(elements: &[Vec<usize>]) -> Vec<Vec<usize>> {
    elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| {
                    let ab: Vec<usize> = a.iter().map(|&x| b[x]).collect();
                    elements.iter().position(|e| *e == ab).expect("closed")
                })
                .collect()
        })
        .collect()
}

/// The sign homomorphism of the S3 preset, as 0 (even) / 1 (odd) per element.
pub fn s3_sign() -> Vec<u32> {
    s3_elements()
        .iter()
        .map(|p| Permutation::from_images(p.clone()).expect("valid").parity())
        .collect()
}

/// A subgroup of a finite group, stored as a sorted element list.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup").field("elements", &self.elements).finish()
    }
}

impl Subgroup {
    pub fn whole(parent: Arc<FiniteGroup>) -> Self {
        let elements: Vec<usize> = parent.elements().collect();
        Self::from_sorted(parent, elements)
    }

    pub fn trivial(parent: Arc<FiniteGroup>) -> Self {
        let e = parent.identity();
        Self::from_sorted(parent, vec![e])
    }

    /// Validates an explicit element set.
    pub fn from_elements(parent: Arc<FiniteGroup>, elements: &[usize]) -> Result<Self> {
        let mut els = elements.to_vec();
        els.sort_unstable();
        els.dedup();
        if let Some(&x) = els.iter().find(|&&x| x >= parent.order()) {
            return Err(Error::NotSubgroup(format!("element {x} out of range")));
        }
        if !els.contains(&parent.identity()) {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        for &a in &els {
            if els.binary_search(&parent.inv(a)).is_err() {
                return Err(Error::NotSubgroup(format!("inverse of {a} missing")));
            }
            for &b in &els {
                if els.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::NotSubgroup(format!("product {a}*{b} missing")));
                }
            }
        }
        Ok(Self::from_sorted(parent, els))
    }

    /// The subgroup generated by `generators` (closure under products).
    pub fn generated_by(parent: Arc<FiniteGroup>, generators: &[usize]) -> Result<Self> {
        if let Some(&x) = generators.iter().find(|&&x| x >= parent.order()) {
            return Err(Error::NotSubgroup(format!("generator {x} out of range")));
        }
        let mut inside = vec![false; parent.order()];
        inside[parent.identity()] = true;
        let mut frontier = vec![parent.identity()];
        while let Some(x) = frontier.pop() {
            for &s in generators {
                let y = parent.mul(x, s);
                if !inside[y] {
                    inside[y] = true;
                    frontier.push(y);
                }
            }
        }
        let els = (0..parent.order()).filter(|&x| inside[x]).collect();
        Ok(Self::from_sorted(parent, els))
    }

    fn from_sorted(parent: Arc<FiniteGroup>, elements: Vec<usize>) -> Self {
        let mut position = vec![None; parent.order()];
        for (i, &x) in elements.iter().enumerate() {
            position[x] = Some(i);
        }
        Subgroup { parent, elements, position }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.position.get(g).is_some_and(|p| p.is_some())
    }

    /// Index of `g` inside [`Self::elements`].
    pub fn position(&self, g: usize) -> Option<usize> {
        self.position.get(g).copied().flatten()
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.elements.iter().all(|&x| other.contains(x))
    }
}

/// Ordered right-coset representatives `t_0, ..., t_{n-1}` of `H` in `G`,
/// with `t_0` the identity. Coset factorizations `t_i g = h t_j` are
/// tabulated at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transversal {
    subgroup: Subgroup,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
    factors: Vec<(usize, usize)>,
}

impl Transversal {
    /// Representatives chosen by scanning element indices in order and taking
    /// the smallest element not yet covered.
    pub fn decompose(subgroup: &Subgroup) -> Self {
        let g = subgroup.parent().clone();
        let mut covered = vec![false; g.order()];
        let mut reps = Vec::new();
        for x in g.elements() {
            if covered[x] {
                continue;
            }
            reps.push(x);
            for &h in subgroup.elements() {
                covered[g.mul(h, x)] = true;
            }
        }
        Self::from_reps(subgroup, &reps).expect("scan yields a transversal")
    }

    /// Validates an explicit list of representatives.
    pub fn from_reps(subgroup: &Subgroup, reps: &[usize]) -> Result<Self> {
        let g = subgroup.parent();
        if reps.first() != Some(&g.identity()) {
            return Err(Error::InvalidTransversal("first representative must be the identity".into()));
        }
        if reps.len() * subgroup.order() != g.order() {
            return Err(Error::InvalidTransversal(format!(
                "{} representatives for index {}",
                reps.len(),
                g.order() / subgroup.order()
            )));
        }
        let mut coset_of = vec![usize::MAX; g.order()];
        for (i, &t) in reps.iter().enumerate() {
            if t >= g.order() {
                return Err(Error::InvalidTransversal(format!("element {t} out of range")));
            }
            for &h in subgroup.elements() {
                let x = g.mul(h, t);
                if coset_of[x] != usize::MAX {
                    return Err(Error::InvalidTransversal(format!(
                        "representatives {} and {t} lie in the same coset",
                        reps[coset_of[x]]
                    )));
                }
                coset_of[x] = i;
            }
        }
        let n = reps.len();
        let mut factors = Vec::with_capacity(n * g.order());
        for &t in reps {
            for x in g.elements() {
                let y = g.mul(t, x);
                let j = coset_of[y];
                let h = g.mul(y, g.inv(reps[j]));
                factors.push((h, j));
            }
        }
        Ok(Transversal { subgroup: subgroup.clone(), reps: reps.to_vec(), coset_of, factors })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.subgroup.parent()
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// Number of cosets `|G:H|`.
    pub fn index(&self) -> usize {
        self.reps.len()
    }

    /// Index of the coset `Hg`.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// The unique `(h, j)` with `h ∈ H` and `t_i g = h t_j`.
    #[inline]
    pub fn factor(&self, i: usize, g: usize) -> (usize, usize) {
        self.factors[i * self.group().order() + g]
    }

    /// The permutation `Hg_i ↦ Hg_i g` of the coset indices.
    pub fn coset_permutation(&self, g: usize) -> Permutation {
        Permutation { images: (0..self.index()).map(|i| self.factor(i, g).1).collect() }
    }
}

/// A permutation of `0..n` given by its image table. Products are read left
/// to right: `i^(pq) = (i^p)^q`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Permutation { images })
    }

    /// The transposition swapping `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// 0 for even, 1 for odd.
    pub fn parity(&self) -> u32 {
        let mut seen = vec![false; self.degree()];
        let mut transpositions = 0;
        for start in 0..self.degree() {
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        (transpositions % 2) as u32
    }

    /// Writes the permutation as a product `s_{a_1} s_{a_2} ... s_{a_k}` of
    /// neighbor transpositions `s_a = (a, a+1)` (0-based), returning the `a_i`
    /// in product order. The word is the bubble-sort swap sequence.
    pub fn adjacent_decompose(&self) -> Vec<usize> {
        // Swapping positions a, a+1 of the image array is left multiplication
        // by s_a; sorting to the identity gives s_{a_k}...s_{a_1} p = 1.
        let mut w = self.images.clone();
        let mut word = Vec::new();
        let n = w.len();
        for pass in 0..n {
            let mut swapped = false;
            for a in 0..n.saturating_sub(1 + pass) {
                if w[a] > w[a + 1] {
                    w.swap(a, a + 1);
                    word.push(a);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        word
    }

    /// All permutations of `0..n` in lexicographic order of image tables.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { images: current.clone() });
            if !next_permutation(&mut current) {
                break;
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}
