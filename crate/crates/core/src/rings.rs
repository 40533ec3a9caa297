//! Finite commutative rings with a group acting by ring automorphisms.
//!
//! Every carrier is table driven: elements are encoded as bytes, and sum,
//! product, negation and the action `r ↦ r^g` are precomputed. Encodings:
//!
//! * `Zmod(n)`: the residue `r` is encoded as `r`.
//! * `GaloisField(p, k)`: `Σ c_i x^i` is encoded as `Σ c_i p^i`, arithmetic
//!   modulo the pinned irreducible from [`irreducible_polynomial`].
//! * `Product(base, m)`: `(r_0, .., r_{m-1})` is encoded as `Σ r_i |base|^i`.
//!
//! Zero is always encoded as 0.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;

pub type Elem = u8;

pub const MAX_RING_ORDER: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Zmod(u32),
    GaloisField { p: u32, k: u32 },
    Product { base: Box<Carrier>, copies: u32 },
}

impl Carrier {
    pub fn order(&self) -> Option<usize> {
        match self {
            Carrier::Zmod(n) => Some(*n as usize),
            Carrier::GaloisField { p, k } => (*p as usize).checked_pow(*k),
            Carrier::Product { base, copies } => base.order()?.checked_pow(*copies),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Carrier::Zmod(n) if *n < 2 => return Err(Error::UnsupportedCarrier(format!("Z/{n}"))),
            Carrier::GaloisField { p, k } => {
                if *k == 0 || !is_prime(*p) {
                    return Err(Error::UnsupportedCarrier(format!("GF({p}^{k})")));
                }
            }
            Carrier::Product { base, copies } => {
                if *copies == 0 {
                    return Err(Error::UnsupportedCarrier("product with zero copies".into()));
                }
                base.validate()?;
            }
            _ => {}
        }
        match self.order() {
            Some(o) if o <= MAX_RING_ORDER => Ok(()),
            _ => Err(Error::UnsupportedCarrier(format!("{self} has more than {MAX_RING_ORDER} elements"))),
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Zmod(n) => write!(f, "Z/{n}"),
            Carrier::GaloisField { p, k } => write!(f, "GF({p}^{k})"),
            Carrier::Product { base, copies } => write!(f, "({base})^{copies}"),
        }
    }
}

/// How the group acts on a carrier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionRule {
    Trivial,
    /// Per group element, the Frobenius exponent `e`: `r^g = r^(p^e)`.
    /// Must be a homomorphism `G → Z/k`.
    Frobenius(Vec<u32>),
    /// Per group element, the full image table `r ↦ r^g`.
    Table(Vec<Vec<Elem>>),
    /// Product carriers: per group element a coordinate permutation
    /// (`permutations[g][i]` is where coordinate `i` goes), followed by a
    /// Frobenius twist of each target coordinate.
    Product { permutations: Vec<Vec<usize>>, twists: Option<Vec<Vec<u32>>> },
}

/// Deterministic choice of irreducible polynomial for `GF(p^k)`: the monic
/// degree-`k` irreducible whose lower coefficients `c_0..c_{k-1}` give the
/// smallest `Σ c_i p^i`. Returned as coefficients `c_0..c_k` (`c_k = 1`).
///
/// | field   | polynomial            |
/// |---------|-----------------------|
/// | GF(4)   | x² + x + 1            |
/// | GF(8)   | x³ + x + 1            |
/// | GF(16)  | x⁴ + x + 1            |
/// | GF(256) | x⁸ + x⁴ + x³ + x + 1  |
/// | GF(9)   | x² + 1                |
/// | GF(27)  | x³ + 2x + 1           |
/// | GF(25)  | x² + 2                |
/// | GF(49)  | x² + 1                |
pub fn irreducible_polynomial(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = (p as usize).pow(k);
    (0..count)
        .map(|code| {
            let mut coeffs = digits(code, p as usize, k as usize);
            coeffs.push(1);
            coeffs
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

fn digits(mut code: usize, base: usize, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (code % base) as u32;
            code /= base;
            d
        })
        .collect()
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Brute force: no monic factor of degree 1..=deg/2.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..(p as usize).pow(d as u32) {
            let mut g = digits(code, p as usize, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of `f` modulo monic `g` over GF(p).
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        for (i, &gc) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - lead * gc % p) % p;
        }
        r.pop();
    }
    r
}

/// One local factor `eR` of the ring, for a primitive idempotent `e`.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalComponent {
    idempotent: Elem,
    /// `inverse[x]` is the inverse of `x` in `eR` when `x ∈ eR` is a unit there.
    inverse: Vec<Option<Elem>>,
    is_field: bool,
}

impl LocalComponent {
    pub fn idempotent(&self) -> Elem {
        self.idempotent
    }

    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        self.inverse[x as usize]
    }

    pub fn is_field(&self) -> bool {
        self.is_field
    }
}

/// A finite commutative ring together with a right action of a finite group by
/// ring automorphisms.
#[derive(Clone, PartialEq, Eq)]
pub struct GRing {
    carrier: Carrier,
    group: Arc<FiniteGroup>,
    order: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    one: Elem,
    action: Vec<Vec<Elem>>,
    components: Vec<LocalComponent>,
}

impl fmt::Debug for GRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GRing")
            .field("carrier", &self.carrier)
            .field("group_order", &self.group.order())
            .finish()
    }
}

struct Tables {
    order: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    one: Elem,
}

fn carrier_tables(carrier: &Carrier) -> Tables {
    match carrier {
        Carrier::Zmod(n) => {
            let n = *n as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = ((a + b) % n) as Elem;
                    mul[a * n + b] = ((a * b) % n) as Elem;
                }
            }
            Tables { order: n, add, mul, one: 1 }
        }
        Carrier::GaloisField { p, k } => {
            let (p, k) = (*p, *k as usize);
            let modulus = irreducible_polynomial(p, k as u32);
            let n = (p as usize).pow(k as u32);
            let encode = |c: &[u32]| c.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize);
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..n {
                let da = digits(a, p as usize, k);
                for b in 0..n {
                    let db = digits(b, p as usize, k);
                    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    add[a * n + b] = encode(&sum) as Elem;
                    let mut prod = vec![0u32; 2 * k - 1];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    let r = poly_rem(&prod, &modulus, p);
                    let mut r = r;
                    r.resize(k, 0);
                    mul[a * n + b] = encode(&r) as Elem;
                }
            }
            Tables { order: n, add, mul, one: 1 }
        }
        Carrier::Product { base, copies } => {
            let b = carrier_tables(base);
            let m = *copies as usize;
            let n = b.order.pow(m as u32);
            let coords = |x: usize| digits(x, b.order, m);
            let encode = |c: &[u32]| c.iter().rev().fold(0usize, |acc, &d| acc * b.order + d as usize);
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for x in 0..n {
                let cx = coords(x);
                for y in 0..n {
                    let cy = coords(y);
                    let s: Vec<u32> =
                        cx.iter().zip(&cy).map(|(u, v)| b.add[*u as usize * b.order + *v as usize] as u32).collect();
                    let p: Vec<u32> =
                        cx.iter().zip(&cy).map(|(u, v)| b.mul[*u as usize * b.order + *v as usize] as u32).collect();
                    add[x * n + y] = encode(&s) as Elem;
                    mul[x * n + y] = encode(&p) as Elem;
                }
            }
            let one = encode(&vec![b.one as u32; m]) as Elem;
            Tables { order: n, add, mul, one }
        }
    }
}

/// Characteristic prime of a Galois field carrier (for Frobenius twists).
fn frobenius_prime(carrier: &Carrier) -> Option<(u32, u32)> {
    match carrier {
        Carrier::GaloisField { p, k } => Some((*p, *k)),
        _ => None,
    }
}

impl GRing {
    /// Builds the ring and validates every G-ring invariant exhaustively:
    /// each `r ↦ r^g` is a bijective, additive, multiplicative, unital map,
    /// the identity acts trivially, and `(r^g)^h = r^(gh)`.
    pub fn new(carrier: Carrier, group: Arc<FiniteGroup>, rule: &ActionRule) -> Result<Self> {
        carrier.validate()?;
        let t = carrier_tables(&carrier);
        let n = t.order;
        let mut neg = vec![0; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| t.add[a * n + b] == 0).expect("additive group") as Elem;
        }
        let pow = |mut x: Elem, mut e: u64| {
            let mut acc = t.one;
            while e > 0 {
                if e & 1 == 1 {
                    acc = t.mul[acc as usize * n + x as usize];
                }
                x = t.mul[x as usize * n + x as usize];
                e >>= 1;
            }
            acc
        };
        let order = group.order();
        let action: Vec<Vec<Elem>> = match rule {
            ActionRule::Trivial => vec![(0..n).map(|r| r as Elem).collect(); order],
            ActionRule::Frobenius(exps) => {
                let (p, k) = frobenius_prime(&carrier).ok_or_else(|| {
                    Error::UnsupportedCarrier(format!("Frobenius action needs a Galois field, got {carrier}"))
                })?;
                if exps.len() != order {
                    return Err(Error::DimensionMismatch(format!(
                        "{} Frobenius exponents for a group of order {order}",
                        exps.len()
                    )));
                }
                for g in 0..order {
                    for h in 0..order {
                        if (exps[g] + exps[h]) % k != exps[group.mul(g, h)] % k {
                            return Err(Error::NotAHomomorphism { g, h });
                        }
                    }
                }
                exps.iter()
                    .map(|&e| (0..n).map(|r| pow(r as Elem, (p as u64).pow(e % k))).collect())
                    .collect()
            }
            ActionRule::Table(tables) => {
                if tables.len() != order || tables.iter().any(|row| row.len() != n) {
                    return Err(Error::DimensionMismatch("action table has the wrong shape".into()));
                }
                if tables.iter().flatten().any(|&x| x as usize >= n) {
                    return Err(Error::DimensionMismatch("action table entry out of range".into()));
                }
                tables.clone()
            }
            ActionRule::Product { permutations, twists } => {
                let Carrier::Product { base, copies } = &carrier else {
                    return Err(Error::UnsupportedCarrier("product action on a non-product carrier".into()));
                };
                let m = *copies as usize;
                let bt = carrier_tables(base);
                if permutations.len() != order || permutations.iter().any(|p| p.len() != m) {
                    return Err(Error::DimensionMismatch("coordinate permutations have the wrong shape".into()));
                }
                let base_frob = frobenius_prime(base);
                let twist_exps: Vec<Vec<u32>> = twists.clone().unwrap_or_else(|| vec![vec![0; m]; order]);
                if twist_exps.len() != order || twist_exps.iter().any(|t| t.len() != m) {
                    return Err(Error::DimensionMismatch("coordinate twists have the wrong shape".into()));
                }
                if base_frob.is_none() && twist_exps.iter().flatten().any(|&e| e != 0) {
                    return Err(Error::UnsupportedCarrier("coordinate twists need a Galois field base".into()));
                }
                let bn = bt.order;
                let base_pow = |mut x: usize, mut e: u64| {
                    let mut acc = bt.one as usize;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = bt.mul[acc * bn + x] as usize;
                        }
                        x = bt.mul[x * bn + x] as usize;
                        e >>= 1;
                    }
                    acc
                };
                let mut action = Vec::with_capacity(order);
                for g in 0..order {
                    let perm = &permutations[g];
                    let mut seen = vec![false; m];
                    for &x in perm {
                        if x >= m || std::mem::replace(&mut seen[x], true) {
                            return Err(Error::InvalidPermutation(format!("{perm:?}")));
                        }
                    }
                    let row = (0..n)
                        .map(|r| {
                            let c = digits(r, bn, m);
                            let mut moved = vec![0u32; m];
                            for i in 0..m {
                                moved[perm[i]] = c[i];
                            }
                            for (j, slot) in moved.iter_mut().enumerate() {
                                let e = twist_exps[g][j];
                                if e != 0 {
                                    let (p, k) = base_frob.unwrap();
                                    *slot = base_pow(*slot as usize, (p as u64).pow(e % k)) as u32;
                                }
                            }
                            moved.iter().rev().fold(0usize, |acc, &d| acc * bn + d as usize) as Elem
                        })
                        .collect();
                    action.push(row);
                }
                action
            }
        };
        let components = local_components(n, &t.add, &t.mul, t.one);
        let ring = GRing { carrier, group, order: n, add: t.add, mul: t.mul, neg, one: t.one, action, components };
        ring.validate_action()?;
        Ok(ring)
    }

    fn validate_action(&self) -> Result<()> {
        let n = self.order;
        for g in self.group.elements() {
            let a = &self.action[g];
            let mut seen = vec![false; n];
            for &x in a {
                if std::mem::replace(&mut seen[x as usize], true) {
                    return Err(Error::NotAutomorphism { g, detail: "not bijective".into() });
                }
            }
            if a[self.one as usize] != self.one {
                return Err(Error::NotAutomorphism { g, detail: "1^g != 1".into() });
            }
            for r in 0..n {
                for s in 0..n {
                    let (r8, s8) = (r as Elem, s as Elem);
                    if a[self.add(r8, s8) as usize] != self.add(a[r], a[s]) {
                        return Err(Error::NotAutomorphism { g, detail: format!("(r+s)^g != r^g+s^g at ({r}, {s})") });
                    }
                    if a[self.mul(r8, s8) as usize] != self.mul(a[r], a[s]) {
                        return Err(Error::NotAutomorphism { g, detail: format!("(rs)^g != r^g s^g at ({r}, {s})") });
                    }
                }
            }
        }
        let e = self.group.identity();
        if (0..n).any(|r| self.action[e][r] as usize != r) {
            return Err(Error::NotAutomorphism { g: e, detail: "identity acts nontrivially".into() });
        }
        for g in self.group.elements() {
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                for r in 0..n {
                    if self.action[h][self.action[g][r] as usize] != self.action[gh][r] {
                        return Err(Error::NotRightAction { r, g, h });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(|r| r as Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `r^g`.
    #[inline]
    pub fn act(&self, r: Elem, g: usize) -> Elem {
        self.action[g][r as usize]
    }

    pub fn components(&self) -> &[LocalComponent] {
        &self.components
    }

    /// Multiplicative inverse, when `a` is a unit.
    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        self.elements().find(|&b| self.mul(a, b) == self.one)
    }

    /// Elements fixed by every group element.
    pub fn fixed_subring(&self) -> Vec<Elem> {
        self.elements().filter(|&r| self.group.elements().all(|g| self.act(r, g) == r)).collect()
    }

    /// Whether `(r^g)` is the identity map for every g.
    pub fn action_is_trivial(&self) -> bool {
        self.group.elements().all(|g| self.elements().all(|r| self.act(r, g) == r))
    }

    /// The same carrier with the action restricted along `map: K → G`, i.e.
    /// `r^k := r^{map(k)}` for a group `K` mapping homomorphically into G.
    pub fn pull_back(&self, group: Arc<FiniteGroup>, map: &[usize]) -> Result<Self> {
        let table: Vec<Vec<Elem>> = map.iter().map(|&g| self.action[g].clone()).collect();
        GRing::new(self.carrier.clone(), group, &ActionRule::Table(table))
    }
}

/// Splits the ring into local factors `eR` via its primitive idempotents.
fn local_components(n: usize, add: &[Elem], mul: &[Elem], one: Elem) -> Vec<LocalComponent> {
    let m = |a: usize, b: usize| mul[a * n + b] as usize;
    let idempotents: Vec<usize> = (1..n).filter(|&e| m(e, e) == e).collect();
    let primitive: Vec<usize> = idempotents
        .iter()
        .copied()
        .filter(|&e| idempotents.iter().all(|&f| f == e || m(f, e) != f))
        .collect();
    debug_assert_eq!(
        primitive.iter().fold(0usize, |acc, &e| add[acc * n + e] as usize),
        one as usize,
        "primitive idempotents sum to one"
    );
    primitive
        .into_iter()
        .map(|e| {
            let members: Vec<usize> = (0..n).filter(|&x| m(x, e) == x).collect();
            let mut inverse = vec![None; n];
            for &x in &members {
                inverse[x] = members.iter().find(|&&y| m(x, y) == e).map(|&y| y as Elem);
            }
            let is_field = members.iter().all(|&x| x == 0 || inverse[x].is_some());
            LocalComponent { idempotent: e as Elem, inverse, is_field }
        })
        .collect()
}

/// An equivariant ring homomorphism between two G-rings over the same group.
#[derive(Clone, Debug)]
pub struct GRingHom {
    source: Arc<GRing>,
    target: Arc<GRing>,
    table: Vec<Elem>,
}

impl GRingHom {
    /// Validates ring-homomorphism and equivariance properties exhaustively.
    pub fn new(source: Arc<GRing>, target: Arc<GRing>, table: Vec<Elem>) -> Result<Self> {
        if source.group() != target.group() {
            return Err(Error::GroupMismatch("ring homomorphism between rings over different groups".into()));
        }
        if table.len() != source.order() || table.iter().any(|&x| x as usize >= target.order()) {
            return Err(Error::NotRingHom("value table has the wrong shape".into()));
        }
        if table[source.one() as usize] != target.one() {
            return Err(Error::NotRingHom("1 is not sent to 1".into()));
        }
        for r in source.elements() {
            for s in source.elements() {
                let (fr, fs) = (table[r as usize], table[s as usize]);
                if table[source.add(r, s) as usize] != target.add(fr, fs) {
                    return Err(Error::NotRingHom(format!("not additive at ({r}, {s})")));
                }
                if table[source.mul(r, s) as usize] != target.mul(fr, fs) {
                    return Err(Error::NotRingHom(format!("not multiplicative at ({r}, {s})")));
                }
            }
        }
        for r in source.elements() {
            for g in source.group().elements() {
                if table[source.act(r, g) as usize] != target.act(table[r as usize], g) {
                    return Err(Error::NotEquivariantRingMap { r: r as usize, g });
                }
            }
        }
        Ok(GRingHom { source, target, table })
    }

    pub fn identity(ring: Arc<GRing>) -> Self {
        let table = ring.elements().collect();
        GRingHom { source: ring.clone(), target: ring, table }
    }

    pub fn source(&self) -> &Arc<GRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GRing> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, r: Elem) -> Elem {
        self.table[r as usize]
    }
}
