//! Acceptance run: eleven criteria, one PASS/FAIL line each. Arithmetic is
//! exact, so every comparison is equality. Set `GCORES_FULL_STRETCH=1` to
//! include the full ε isomorphism check in the S3 criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use gcores::algebras::{equivalence_witness_check, iso_check, matrix_galgebra, AzumayaPresentation};
use gcores::cores::{
    base_change_cores_iso, cores, cores_end_iso, cores_product_iso, cores_universal, transversal_change_iso,
};
use gcores::goldman::{goldman_element, rescores_witness, switch_system, trd_equivariance_check, RescoresOptions};
use gcores::groups::{s3_sign, FiniteGroup, Permutation, Subgroup, Transversal};
use gcores::linalg::{self, SparseMatrix, SparseVec};
use gcores::modules::{tensor_induce, tensor_vecs, ti_nonadditivity_witness, ti_universal_factorize, SemilinearModule};
use gcores::{ActionRule, Carrier, Error, GRing, GRingHom, Limits};

type Outcome = Result<String, String>;

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn ok<T>(r: gcores::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

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

fn gf4_s3_sign() -> Arc<GRing> {
    ring(Carrier::GaloisField { p: 2, k: 2 }, "S3", ActionRule::Frobenius(s3_sign()))
}

fn m2(r: &Arc<GRing>) -> AzumayaPresentation {
    matrix_galgebra(r, 2, &Limits::default()).unwrap()
}

/// `Σ_{r,s} e_rs ⊗ e_sr` in `M_n ⊗ M_n`, written down directly.
fn matrix_unit_switch(n: usize) -> SparseVec {
    let mut v: SparseVec = Vec::new();
    for r in 0..n {
        for s in 0..n {
            v.push((((r * n + s) * n * n + s * n + r) as u32, 1));
        }
    }
    v.sort();
    v
}

fn goldman_matrix_form() -> Outcome {
    let a = m2(&gf4_c2());
    let g = ok(goldman_element(&a, &Limits::default()), "goldman element")?;
    ensure(*g.element() == matrix_unit_switch(2), "t is not Σ e_rs ⊗ e_sr")?;
    ok(g.check_involution(), "t^2")?;
    let pairs = ok(g.check_switch(), "switch")?;
    ensure(pairs == 256, format!("{pairs} switch pairs instead of 16×16"))?;
    ok(g.check_invariant(), "t^g")?;
    ok(g.check_defining_identity(), "defining identity")?;
    Ok(format!("t = Σ e_rs⊗e_sr, {pairs} switch pairs"))
}

fn braid_relation() -> Outcome {
    let sw = ok(switch_system(&m2(&gf2("C1")), 3, &Limits::default()), "switch system")?;
    let b = sw.power().algebra();
    let x = b.mul(sw.adjacent(0), sw.adjacent(1));
    let cube = b.mul(&b.mul(&x, &x), &x);
    let one = tensor_vecs(b.ring(), &vec![vec![(0, 1), (3, 1)]; 3], 4);
    ensure(cube == one, "(t12 t23)^3 != 1⊗1⊗1")?;
    ensure(b.mul(sw.adjacent(0), sw.adjacent(0)) == one, "t12^2 != 1")?;
    Ok("(t12 t23)^3 = 1⊗1⊗1 in M_2(GF(2))^⊗3".into())
}

fn sigma_homomorphism() -> Outcome {
    let sw = ok(switch_system(&m2(&gf2("C2")), 3, &Limits::default()), "switch system")?;
    let b = sw.power().algebra();
    let perms = Permutation::all(3);
    let mut pairs = 0;
    for p in &perms {
        for q in &perms {
            ensure(sw.sigma(&p.then(q)) == b.mul(&sw.sigma(p), &sw.sigma(q)), "σ(πρ) != σ(π)σ(ρ)")?;
            pairs += 1;
        }
    }
    ensure(pairs == 36, "not 36 pairs")?;
    let inv = ok(sw.check_invariant(), "σ^g")?;
    ok(sw.check_slot_conjugation(), "slot conjugation")?;
    Ok(format!("{pairs} pairs, {inv} invariance checks"))
}

fn trace_equivariance() -> Outcome {
    let a = m2(&gf4_c2());
    let r = trd_equivariance_check(&a);
    ensure(r.passed() && r.checked == 8, format!("{r:?}"))?;
    let alg = a.algebra();
    // trd(ω e_11) = ω, trd((ω e_11)^s) = ω² = ω^s
    let x = vec![(0, 2)];
    ensure(a.trace(&x) == 2 && a.trace(&alg.act(&x, 1)) == alg.ring().act(2, 1), "ω e_11 example")?;
    let corrupted = a.with_trace(vec![2, 0, 0, 3]).unwrap();
    ensure(trd_equivariance_check(&corrupted).failure == Some((0, 1)), "corrupted trace not caught")?;
    Ok(format!("{} basis × G checks", r.checked))
}

fn rescores_witness_c2() -> Outcome {
    let r = gf2("C2");
    let t = Transversal::decompose(&Subgroup::trivial(r.group().clone()));
    let w = ok(rescores_witness(&m2(&r), &t, RescoresOptions::default(), &Limits::default()), "witness")?;
    let eps = w.checks.iter().find(|c| c.0 == "epsilon iso").map(|c| c.1).ok_or("ε not checked")?;
    ensure(w.epsilon.source().rank() == 256 && w.epsilon.target().rank() == 256, "ε ranks")?;
    ensure(eps == 1 + 256 * 256 + 256 * 2 + 1, format!("ε check count {eps}"))?;
    // re-run independently of the constructor's own checks
    let again = ok(iso_check(&w.epsilon), "iso_check(ε)")?;
    let witness = w.witness.as_ref().ok_or("no witness")?;
    ensure(witness.p.rank() == 16 && witness.q.rank() == 1, "witness shape")?;
    ok(equivalence_witness_check(witness, &Limits::default()), "witness check")?;
    Ok(format!("ε: B^op⊗C → End(B_⋆) iso, {again} identities"))
}

fn stretch_scenario() -> Outcome {
    let r = gf4_s3_sign();
    let h = ok(Subgroup::generated_by(r.group().clone(), &[1]), "subgroup")?;
    let t = Transversal::decompose(&h);
    let full = std::env::var_os("GCORES_FULL_STRETCH").is_some();
    let options = RescoresOptions { check_epsilon: full, build_witness: full };
    let w = ok(rescores_witness(&m2(&r), &t, options, &Limits::default()), "witness")?;
    for name in ["cores diagram", "slot commutation", "phi twist law"] {
        ensure(w.checks.iter().any(|c| c.0 == name && c.1 > 0), format!("{name} missing"))?;
    }
    ok(w.cores.algebra().verify_axioms(), "cores axioms")?;
    let twist = w.checks.iter().find(|c| c.0 == "phi twist law").unwrap().1;
    ensure(twist == 64 * 6, "twist law count")?;
    Ok(format!("Cores rank {}, φ twist law on {twist} pairs, full ε {}", w.cores.algebra().rank(), if full { "checked" } else { "gated off" }))
}

fn monoidality_and_base_change() -> Outcome {
    let limits = Limits::default();
    let mut total = 0;
    for r in [gf2("C2"), gf4_c2()] {
        let t = Transversal::decompose(&Subgroup::trivial(r.group().clone()));
        let a = m2(&r).algebra().restrict(t.subgroup()).unwrap();
        let start = Instant::now();
        total += ok(iso_check(&ok(cores_product_iso(&a, &a, &t, &limits), "product iso")?), "product iso")?;
        ensure(start.elapsed() < Duration::from_secs(10), "product iso over budget")?;
    }
    let r = gf2("C2");
    let t = Transversal::decompose(&Subgroup::trivial(r.group().clone()));
    let a = m2(&r).algebra().restrict(t.subgroup()).unwrap();
    let s = gf4_c2();
    let phi = GRingHom::new(r, s, vec![0, 1]).unwrap();
    let start = Instant::now();
    total += ok(iso_check(&ok(base_change_cores_iso(&a, &phi, &[1, 2], &t, &limits), "base change")?), "base change")?;
    ensure(start.elapsed() < Duration::from_secs(10), "base change over budget")?;
    Ok(format!("{total} identities"))
}

fn end_compatibility() -> Outcome {
    let r = gf2("C2");
    let t = Transversal::decompose(&Subgroup::trivial(r.group().clone()));
    let whole = Subgroup::whole(r.group().clone());
    let mut total = 0;
    for p in [
        SemilinearModule::trivial(r.clone(), whole.clone(), 2).unwrap(),
        SemilinearModule::permutation(r.clone(), whole, &[vec![0, 1], vec![1, 0]]).unwrap(),
    ] {
        let p = p.restrict(t.subgroup()).unwrap();
        total += ok(iso_check(&ok(cores_end_iso(&p, &t, &Limits::default()), "End iso")?), "End iso")?;
    }
    Ok(format!("{total} identities over two rank-2 modules"))
}

fn universal_properties() -> Outcome {
    let r = gf2("C2");
    let t = Transversal::decompose(&Subgroup::trivial(r.group().clone()));
    let a = m2(&r).algebra().restrict(t.subgroup()).unwrap();
    let v = a.module().clone();
    let ti = ok(tensor_induce(&v, &t, &Limits::default()), "tensor induce")?;
    let tau = |slots: &[SparseVec]| tensor_vecs(&r, slots, 4);
    let (phi, _) = ok(ti_universal_factorize(&v, &t, ti.module(), tau), "τ")?;
    ensure(phi.matrix().is_identity(&r), "factorization of τ is not the identity")?;

    // β = product of slot images in Cores(A), against the canonical map
    let c = ok(cores(&a, &t, &Limits::default()), "cores")?;
    let mus = [c.mu(0), c.mu(1)];
    let ca = c.algebra().clone();
    let beta = |slots: &[SparseVec]| {
        let x = mus[0].apply(&r, &slots[0]);
        let y = mus[1].apply(&r, &slots[1]);
        ca.mul(&x, &y)
    };
    let (phi, _) = ok(ti_universal_factorize(&v, &t, c.algebra().module(), beta), "β = product")?;
    for x in 0..4 {
        for y in 0..4 {
            let basis_tensor = tensor_vecs(&r, &[linalg::unit_vec(x, 1), linalg::unit_vec(y, 1)], 4);
            ensure(phi.apply(&basis_tensor) == basis_tensor, format!("β factorization at ({x}, {y})"))?;
        }
    }

    // corrupted β: τ followed by killing coordinate 1 breaks equivariance
    let broken = |slots: &[SparseVec]| {
        let mut x = tensor_vecs(&r, slots, 4);
        x.retain(|&(i, _)| i != 1);
        x
    };
    let err = ti_universal_factorize(&v, &t, ti.module(), broken).err();
    ensure(matches!(err, Some(Error::NotEquivariant { .. })), format!("corrupted β gave {err:?}"))?;

    let (alpha, _) = ok(cores_universal(&c, c.algebra(), &c.mu(0)), "cores universal")?;
    ensure(alpha.matrix().is_identity(&r), "universal map of μ_H is not the identity")?;
    let mut rows = c.mu(0).rows().to_vec();
    rows[1] = Vec::new();
    let corrupted = SparseMatrix::from_rows(16, rows);
    let err = cores_universal(&c, c.algebra(), &corrupted).err();
    ensure(matches!(err, Some(Error::NotHAlgebraHom(_))), format!("corrupted ψ gave {err:?}"))?;
    let b = m2(&r);
    let err = cores_universal(&c, b.algebra(), &SparseMatrix::identity(&r, 4)).err();
    ensure(matches!(err, Some(Error::HypothesisFailed { .. })), format!("non-commuting ψ gave {err:?}"))?;
    Ok("τ and μ_H factor as identities; corrupted β, ψ rejected".into())
}

fn degenerate_laws() -> Outcome {
    let r = gf4_c2();
    let a = m2(&r);
    let whole = Transversal::decompose(&Subgroup::whole(r.group().clone()));
    let c = ok(cores(a.algebra(), &whole, &Limits::default()), "H = G")?;
    ensure(c.algebra() == a.algebra() && c.mu(0).is_identity(&r), "H = G cores is not A")?;

    let one = gf2("C1");
    let b = m2(&one);
    let t1 = Transversal::decompose(&Subgroup::whole(one.group().clone()));
    let c1 = ok(cores(b.algebra(), &t1, &Limits::default()), "trivial group")?;
    ensure(c1.algebra() == b.algebra(), "trivial group cores is not A")?;

    let t = Transversal::decompose(&Subgroup::trivial(r.group().clone()));
    let v = SemilinearModule::trivial(r.clone(), t.subgroup().clone(), 1).unwrap();
    let (x, y) = ti_nonadditivity_witness(&v, &t).ok_or("no nonadditivity witness")?;
    let norm = |z: u8| r.mul(z, r.act(z, 1));
    ensure(norm(r.add(x, y)) != r.add(norm(x), norm(y)), "witness does not witness")?;
    Ok(format!("H = G and G = 1 give A; (r + r')^⊗G != r^⊗G + r'^⊗G at r = {x}, r' = {y}"))
}

fn transversal_independence() -> Outcome {
    let r = gf4_s3_sign();
    let g = r.group().clone();
    let h = Subgroup::generated_by(g.clone(), &[1]).unwrap();
    let a = m2(&r).algebra().restrict(&h).unwrap();
    let t = Transversal::decompose(&h);
    let reps: Vec<usize> = t.reps().iter().enumerate().map(|(i, &x)| if i == 0 { x } else { g.mul(1, x) }).collect();
    let t2 = ok(Transversal::from_reps(&h, &reps), "second transversal")?;
    ensure(t.reps() != t2.reps(), "transversals coincide")?;
    let f = ok(transversal_change_iso(&a, &t, &t2, &Limits::default()), "change of transversal")?;
    let count = ok(iso_check(&f), "iso_check")?;
    Ok(format!("{:?} → {:?}, {count} identities", t.reps(), t2.reps()))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("Goldman matrix form", Duration::from_secs(1), goldman_matrix_form),
        ("braid relation", Duration::from_secs(1), braid_relation),
        ("σ homomorphism", Duration::from_secs(5), sigma_homomorphism),
        ("trd equivariance", Duration::from_secs(1), trace_equivariance),
        ("rescores witness (C2)", Duration::from_secs(60), rescores_witness_c2),
        ("stretch scenario (S3)", Duration::from_secs(600), stretch_scenario),
        ("monoidality and base change", Duration::from_secs(20), monoidality_and_base_change),
        ("End compatibility", Duration::from_secs(5), end_compatibility),
        ("universal properties", Duration::from_secs(5), universal_properties),
        ("degenerate laws", Duration::from_secs(1), degenerate_laws),
        ("transversal independence", Duration::from_secs(10), transversal_independence),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|d| {
            if elapsed > budget {
                Err(format!("took {elapsed:.2?}, budget {budget:?}"))
            } else {
                Ok(d)
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}): {why}", i + 1)
            }
        }
    }
    println!("acceptance: {}/11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
