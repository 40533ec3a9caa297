//! Exact computations with G-algebras over finite G-rings: tensor induction,
//! corestriction, Goldman elements and the witness that corestriction after
//! restriction is the `|G:H|`-th power on equivalence classes.
//!
//! Groups act on the right. Every construction is checked by exhaustive
//! evaluation of the identities it is supposed to satisfy.

pub mod algebras;
pub mod cores;
mod error;
pub mod goldman;
pub mod groups;
pub mod harness;
pub mod limits;
pub mod linalg;
pub mod modules;
pub mod rings;

pub use algebras::{
    azumaya_check, end_galgebra, equivalence_witness_check, iso_check, matrix_galgebra, tensor_galgebra, tensor_power,
    AzumayaPresentation, EquivalenceWitness, GAlgebra, GAlgebraHom, Provenance, StructureConstants,
};
pub use cores::{
    base_change_cores_iso, cores, cores_end_iso, cores_equivalence, cores_hom, cores_presentation, cores_product_iso,
    cores_universal, transversal_change_iso, CoresAlgebra,
};
pub use error::{Error, Result};
pub use goldman::{
    goldman_element, pi_map, rescores_witness, star_module, switch_system, trd_equivariance_check, GoldmanElement,
    PiMap, RescoresOptions, RescoresWitness, StarModule, SwitchSystem,
};
pub use groups::{FiniteGroup, Permutation, Subgroup, Transversal};
pub use harness::{emit_report, list_presets, run_scenario, Report, ReportFormat, Scenario, Suite};
pub use limits::Limits;
pub use linalg::{SparseMatrix, SparseVec};
pub use modules::{
    induce, tensor_induce, ti_hom, ti_universal_factorize, InducedModule, ModuleHom, SemilinearModule,
    TensorInducedModule,
};
pub use rings::{ActionRule, Carrier, Elem, GRing, GRingHom};
