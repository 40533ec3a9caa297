use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Verification failures name the
/// violated identity together with the basis / group indices involved.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    // groups
    #[error("malformed multiplication table: {0}")]
    MalformedTable(String),
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("group order {order} exceeds the supported limit {limit}")]
    GroupTooLarge { order: usize, limit: usize },
    #[error("unknown group preset {0:?}")]
    UnknownPreset(String),
    #[error("element set is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("invalid transversal: {0}")]
    InvalidTransversal(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    // rings
    #[error("unsupported ring carrier: {0}")]
    UnsupportedCarrier(String),
    #[error("action of group element {g} is not a ring automorphism: {detail}")]
    NotAutomorphism { g: usize, detail: String },
    #[error("Frobenius exponent map is not a homomorphism: rho({g}*{h}) != rho({g}) + rho({h})")]
    NotAHomomorphism { g: usize, h: usize },
    #[error("ring action is not a right action: (r^{g})^{h} != r^({g}*{h}) for r = {r}")]
    NotRightAction { r: usize, g: usize, h: usize },
    #[error("map is not a ring homomorphism: {0}")]
    NotRingHom(String),
    #[error("ring map is not equivariant at element {r} and group element {g}")]
    NotEquivariantRingMap { r: usize, g: usize },

    // modules and algebras
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("{construction} would have rank {rank}, above the limit {limit}")]
    SizeLimit { construction: String, rank: usize, limit: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("module action fails the cocycle law at g = {g}, h = {h}")]
    NotAnAction { g: usize, h: usize },
    #[error("action of the identity is not the identity matrix")]
    IdentityActsNontrivially,
    #[error("module map does not commute with group element {g} on basis vector {basis}")]
    NotRHHom { basis: usize, g: usize },
    #[error("map is not multilinear in slot {slot} at basis tuple {tuple}: {detail}")]
    NotMultilinear { slot: usize, tuple: usize, detail: String },
    #[error("map is not equivariant on basis element/tuple {basis} for group element {g}")]
    NotEquivariant { basis: usize, g: usize },
    #[error("algebra is not associative on basis triple ({0}, {1}, {2})")]
    AlgebraNotAssociative(usize, usize, usize),
    #[error("unit is not two-sided on basis element {0}")]
    BadUnit(usize),
    #[error("group element {g} does not act multiplicatively on basis pair ({i}, {j})")]
    ActionNotMultiplicative { g: usize, i: usize, j: usize },
    #[error("group element {0} does not fix the unit")]
    ActionMovesUnit(usize),
    #[error("map is not multiplicative on basis pair ({0}, {1})")]
    NotMultiplicative(usize, usize),
    #[error("map does not send 1 to 1")]
    NotUnital,
    #[error("map is not bijective")]
    NotBijective,
    #[error("trace is not symmetric on basis pair ({0}, {1})")]
    TraceNotSymmetric(usize, usize),
    #[error("trace is not equivariant: trd(b_{basis}^{g}) != trd(b_{basis})^{g}")]
    TraceNotEquivariant { basis: usize, g: usize },
    #[error("algebra is not Azumaya")]
    NotAzumaya,
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
    #[error("not an H-algebra homomorphism: {0}")]
    NotHAlgebraHom(Box<Error>),
    #[error("universal property hypothesis fails: images of b_{i} and b_{j}^{g} do not commute (g = {g})")]
    HypothesisFailed { g: usize, i: usize, j: usize },
    #[error("supplied elements are not a free basis of the extension ring: {0}")]
    NotFreeBasis(String),
    #[error("identity {identity} fails at {at}")]
    IdentityFailed { identity: String, at: String },
    #[error("witness is malformed: {0}")]
    MalformedWitness(String),

    // harness
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("cannot resolve scenario: {0}")]
    Resolve(String),
    #[error("limit exceeded while building {construction}: {detail}")]
    LimitExceeded { construction: String, detail: String },
}

impl Error {
    pub(crate) fn identity(identity: impl Into<String>, at: impl Into<String>) -> Self {
        Error::IdentityFailed { identity: identity.into(), at: at.into() }
    }
}
