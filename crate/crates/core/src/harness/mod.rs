//! Scenario files, suite orchestration and reports.
//!
//! A scenario names a group, a subgroup, a G-ring and an algebra, and lists
//! suites to run on them. Each suite runs a family of exhaustive identity
//! checks and reports how many identities it verified.

mod scenario;
mod suites;

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, PRESETS};

pub use scenario::{
    classify, parse_scenario, AlgebraSpec, ExtensionSpec, GroupSpec, LimitSpec, ModuleSpec, Resolved, RingSpec,
    Scenario,
};

/// Environment variable that turns on the full `ε` check regardless of the
/// scenario's `full_epsilon` setting.
pub const FULL_EPSILON_ENV: &str = "GCORES_FULL_STRETCH";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TraceEquivariance,
    Goldman,
    SwitchHomomorphism,
    TensorInductionUniversal,
    TensorInductionFunctor,
    TensorInductionNonadditive,
    CoresAction,
    CoresUniversal,
    CoresFunctor,
    CoresProduct,
    BaseChange,
    CoresEnd,
    CoresEquivalence,
    TransversalIndependence,
    Degenerate,
    Rescores,
}

impl Suite {
    pub const ALL: [Suite; 16] = [
        Suite::TraceEquivariance,
        Suite::Goldman,
        Suite::SwitchHomomorphism,
        Suite::TensorInductionUniversal,
        Suite::TensorInductionFunctor,
        Suite::TensorInductionNonadditive,
        Suite::CoresAction,
        Suite::CoresUniversal,
        Suite::CoresFunctor,
        Suite::CoresProduct,
        Suite::BaseChange,
        Suite::CoresEnd,
        Suite::CoresEquivalence,
        Suite::TransversalIndependence,
        Suite::Degenerate,
        Suite::Rescores,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TraceEquivariance => "trace-equivariance",
            Suite::Goldman => "goldman",
            Suite::SwitchHomomorphism => "switch-homomorphism",
            Suite::TensorInductionUniversal => "tensor-induction-universal",
            Suite::TensorInductionFunctor => "tensor-induction-functor",
            Suite::TensorInductionNonadditive => "tensor-induction-nonadditive",
            Suite::CoresAction => "cores-action",
            Suite::CoresUniversal => "cores-universal",
            Suite::CoresFunctor => "cores-functor",
            Suite::CoresProduct => "cores-product",
            Suite::BaseChange => "base-change",
            Suite::CoresEnd => "cores-end",
            Suite::CoresEquivalence => "cores-equivalence",
            Suite::TransversalIndependence => "transversal-independence",
            Suite::Degenerate => "degenerate",
            Suite::Rescores => "rescores",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    /// The statement the suite verifies.
    pub fn statement(self) -> &'static str {
        match self {
            Suite::TraceEquivariance => "the reduced trace commutes with the group action",
            Suite::Goldman => "the Goldman element exists, squares to 1, switches factors and is invariant",
            Suite::SwitchHomomorphism => "neighbor switches satisfy the Coxeter relations and give S_n -> (A^⊗n)*",
            Suite::TensorInductionUniversal => "the canonical multilinear map factors through the tensor induced module",
            Suite::TensorInductionFunctor => "tensor induction of maps preserves identities and zero",
            Suite::TensorInductionNonadditive => "tensor induction of maps is not additive",
            Suite::CoresAction => "Cores(A) is a G-algebra whose action is characterized by the slot embeddings",
            Suite::CoresUniversal => "Cores(A) has the universal property for commuting conjugate images",
            Suite::CoresFunctor => "corestriction is a functor on algebra maps",
            Suite::CoresProduct => "Cores(A) ⊗ Cores(B) ≅ Cores(A ⊗ B)",
            Suite::BaseChange => "scalar extension and corestriction commute",
            Suite::CoresEnd => "End(P^⊗G) ≅ Cores(End P)",
            Suite::CoresEquivalence => "corestriction preserves equivalence of algebras",
            Suite::TransversalIndependence => "Cores(A) does not depend on the transversal",
            Suite::Degenerate => "for H = G corestriction is the identity",
            Suite::Rescores => "Cores(Res A) is equivalent to A^⊗|G:H|",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckCount {
    pub name: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    /// Total identities checked, summed over `checks`.
    pub checked: u64,
    /// Whether any count comes from sampling rather than exhaustion.
    pub sampled: bool,
    pub checks: Vec<CheckCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    /// Wall time, excluded from golden comparisons.
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    /// The report with every timing field zeroed.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for s in &mut r.suites {
            s.elapsed_ms = 0;
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Json,
}

/// Options that override the scenario file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Run only these suites (in scenario order).
    pub suites: Vec<Suite>,
    pub max_rank: Option<usize>,
    /// Force the full `ε` check on.
    pub full_epsilon: bool,
}

pub fn run_scenario(path: impl AsRef<Path>, options: &RunOptions) -> Result<Report> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { line: 0, column: 0, message: format!("{}: {e}", path.display()) })?;
    run_scenario_text(&text, options)
}

pub fn run_scenario_text(text: &str, options: &RunOptions) -> Result<Report> {
    run(&parse_scenario(text)?, options)
}

/// Resolves the scenario and runs its suites in declaration order.
pub fn run(scenario: &Scenario, options: &RunOptions) -> Result<Report> {
    let start = Instant::now();
    let resolved = scenario.resolve(options.max_rank)?;
    let full_epsilon = scenario.full_epsilon || options.full_epsilon || std::env::var_os(FULL_EPSILON_ENV).is_some();
    let mut suites = Vec::new();
    for &suite in &scenario.suites {
        if !options.suites.is_empty() && !options.suites.contains(&suite) {
            continue;
        }
        let t0 = Instant::now();
        let result = suites::run(suite, &resolved, full_epsilon);
        let elapsed_ms = t0.elapsed().as_millis() as u64;
        let report = match result {
            Ok(out) => SuiteReport {
                suite,
                passed: true,
                checked: out.checks.iter().map(|c| c.1).sum(),
                sampled: false,
                checks: out.checks.into_iter().map(|(name, count)| CheckCount { name, count }).collect(),
                counterexample: None,
                notes: out.notes,
                elapsed_ms,
            },
            Err(e @ (Error::SizeLimit { .. } | Error::GroupTooLarge { .. } | Error::Resolve(_))) => {
                return Err(classify(e));
            }
            Err(e) => SuiteReport {
                suite,
                passed: false,
                checked: 0,
                sampled: false,
                checks: Vec::new(),
                counterexample: Some(e.to_string()),
                notes: Vec::new(),
                elapsed_ms,
            },
        };
        suites.push(report);
        if let Some(max) = scenario.limits.max_seconds {
            let spent = start.elapsed().as_secs_f64();
            if spent > max {
                return Err(Error::LimitExceeded {
                    construction: format!("suite {}", suite.name()),
                    detail: format!("{spent:.1} s spent, limit {max} s"),
                });
            }
        }
    }
    Ok(Report { scenario: scenario.name.clone(), passed: suites.iter().all(|s| s.passed), suites })
}

pub fn emit_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        ReportFormat::Human => {
            let mut out = format!("scenario {}\n", report.scenario);
            for s in &report.suites {
                let status = if s.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "  {status}  {:<30} {:>12} identities  {:>7} ms", s.suite.name(), s.checked, s.elapsed_ms);
                for n in &s.notes {
                    let _ = writeln!(out, "        note: {n}");
                }
                if let Some(c) = &s.counterexample {
                    let _ = writeln!(out, "        counterexample: {c}");
                }
            }
            let passed = report.suites.iter().filter(|s| s.passed).count();
            let verdict = if report.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{verdict}: {passed}/{} suites passed", report.suites.len());
            out
        }
    }
}

/// Process exit code for a run: 0 pass, 2 verification failure, 3 parse,
/// 4 resolve, 5 limit.
pub fn exit_code(result: &Result<Report>) -> i32 {
    match result {
        Ok(r) if r.passed => 0,
        Ok(_) => 2,
        Err(Error::Parse { .. }) => 3,
        Err(Error::LimitExceeded { .. } | Error::SizeLimit { .. } | Error::GroupTooLarge { .. }) => 5,
        Err(Error::Resolve(_)) => 4,
        Err(_) => 2,
    }
}

pub fn list_presets() -> String {
    let mut out = String::from("groups:\n");
    for name in PRESETS {
        let g = FiniteGroup::preset(name).expect("presets build");
        let _ = writeln!(out, "  {name:<6} order {}", g.order());
    }
    out.push_str("\nring carriers:\n");
    out.push_str("  {\"zmod\": n}                      Z/n, n <= 256\n");
    out.push_str("  {\"galois_field\": {\"p\": p, \"k\": k}}  GF(p^k), p^k <= 256\n");
    out.push_str("  {\"product\": {\"base\": C, \"copies\": c}}  C^c, |C|^c <= 256\n");
    out.push_str("\nactions:\n");
    out.push_str("  \"trivial\", {\"frobenius\": [e_g]}, {\"table\": [[r^g]]}, {\"product\": {\"permutations\", \"twists\"}}\n");
    out.push_str("\nsuites:\n");
    for s in Suite::ALL {
        let _ = writeln!(out, "  {:<30} {}", s.name(), s.statement());
    }
    out
}

/// JSON schema of scenario files.
pub fn schema() -> &'static str {
    include_str!("schema.json")
}
