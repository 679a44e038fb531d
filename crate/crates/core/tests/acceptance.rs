//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one `[PASS]`/`[FAIL]` line; the process exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use alambda::algebra::{canonicalize, AlgebraicTerm, SimpleTerm};
use alambda::cli;
use alambda::conservativity::{conserve, inconsistency, lifting_counterexample, split_witness};
use alambda::mashup::{self, Judgement, MashupDerivation, SimpleDerivation};
use alambda::reduction::{
    alg_reducts, joinable, parallel_pure, parallel_reduce, AlgTrace, BetaTrace, Reach, SplitPolicy,
};
use alambda::semiring::{positivity_probe, Coefficient, PositivityVerdict, SemiringId};
use alambda::syntax::{parse_pure, PureTerm, RawTerm, Var};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;

const ALL: [SemiringId; 4] = [SemiringId::Nat, SemiringId::NonnegRat, SemiringId::Bool, SemiringId::Int];
const POSITIVE: [SemiringId; 3] = [SemiringId::Nat, SemiringId::NonnegRat, SemiringId::Bool];

/// `Ok(summary)` on success, `Err(first failure)` otherwise.
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("canonicalization soundness", canonicalization),
        ("conservativity certificates", conservativity),
        ("mashup transformers", transformers),
        ("lifting counterexample golden", lifting_golden),
        ("half-split leaves pure terms golden", split_golden),
        ("inconsistency replay", inconsistency_replay),
        ("local joinability", local_joinability),
        ("parallel reduction coherence", parallel_coherence),
        ("positivity probes", positivity),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(summary) => println!("[PASS] {} {name}: {summary} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "unknown panic".into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("alambda").chain(args.iter().copied());
    let code = cli::run(argv.map(std::ffi::OsString::from), &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8"))
}

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

// ---------------------------------------------------------------------------

/// A rewrite `lhs ≜ rhs` instantiated with metavariables at binder depth
/// `depth`.
type Rewrite = fn(&mut ChaCha8Rng, usize, SemiringId) -> (RawTerm, RawTerm);

fn meta(rng: &mut ChaCha8Rng, depth: usize, s: SemiringId) -> RawTerm {
    let size = rng.gen_range(1..=5);
    raw(rng, size, depth, s)
}

fn rewrites() -> Vec<(&'static str, Rewrite)> {
    vec![
        ("λx.0 = 0", |_, _, _| (RawTerm::lam(RawTerm::Zero), RawTerm::Zero)),
        ("λx.(M+N) = λx.M + λx.N", |r, d, s| {
            let (m, n) = (meta(r, d + 1, s), meta(r, d + 1, s));
            (
                RawTerm::lam(RawTerm::sum(m.clone(), n.clone())),
                RawTerm::sum(RawTerm::lam(m), RawTerm::lam(n)),
            )
        }),
        ("λx.(a.M) = a.λx.M", |r, d, s| {
            let (a, m) = (coefficient(r, s), meta(r, d + 1, s));
            (
                RawTerm::lam(RawTerm::scale(a.clone(), m.clone())),
                RawTerm::scale(a, RawTerm::lam(m)),
            )
        }),
        ("(0)P = 0", |r, d, s| (RawTerm::app(RawTerm::Zero, meta(r, d, s)), RawTerm::Zero)),
        ("(M+N)P = (M)P + (N)P", |r, d, s| {
            let (m, n, p) = (meta(r, d, s), meta(r, d, s), meta(r, d, s));
            (
                RawTerm::app(RawTerm::sum(m.clone(), n.clone()), p.clone()),
                RawTerm::sum(RawTerm::app(m, p.clone()), RawTerm::app(n, p)),
            )
        }),
        ("(a.M)P = a.(M)P", |r, d, s| {
            let (a, m, p) = (coefficient(r, s), meta(r, d, s), meta(r, d, s));
            (
                RawTerm::app(RawTerm::scale(a.clone(), m.clone()), p.clone()),
                RawTerm::scale(a, RawTerm::app(m, p)),
            )
        }),
        ("M+N = N+M", |r, d, s| {
            let (m, n) = (meta(r, d, s), meta(r, d, s));
            (RawTerm::sum(m.clone(), n.clone()), RawTerm::sum(n, m))
        }),
        ("(M+N)+P = M+(N+P)", |r, d, s| {
            let (m, n, p) = (meta(r, d, s), meta(r, d, s), meta(r, d, s));
            (
                RawTerm::sum(RawTerm::sum(m.clone(), n.clone()), p.clone()),
                RawTerm::sum(m, RawTerm::sum(n, p)),
            )
        }),
        ("M+0 = M", |r, d, s| {
            let m = meta(r, d, s);
            (RawTerm::sum(m.clone(), RawTerm::Zero), m)
        }),
        ("a.(M+N) = a.M + a.N", |r, d, s| {
            let (a, m, n) = (coefficient(r, s), meta(r, d, s), meta(r, d, s));
            (
                RawTerm::scale(a.clone(), RawTerm::sum(m.clone(), n.clone())),
                RawTerm::sum(RawTerm::scale(a.clone(), m), RawTerm::scale(a, n)),
            )
        }),
        ("(a+b).M = a.M + b.M", |r, d, s| {
            let (a, b, m) = (coefficient(r, s), coefficient(r, s), meta(r, d, s));
            (
                RawTerm::scale(a.add(&b).expect("same semiring"), m.clone()),
                RawTerm::sum(RawTerm::scale(a, m.clone()), RawTerm::scale(b, m)),
            )
        }),
    ]
}

fn canonicalization() -> Outcome {
    let mut rng = rng(1);
    let rules = rewrites();
    let mut total = 0;
    for (name, rule) in &rules {
        for i in 0..1000 {
            let s = ALL[i % ALL.len()];
            let size = rng.gen_range(1..=6);
            let context = raw(&mut rng, size, 0, s);
            let spots = positions(&context);
            let (path, depth) = &spots[rng.gen_range(0..spots.len())];
            let (lhs, rhs) = rule(&mut rng, *depth, s);
            let (left, right) = (replace(&context, path, &lhs), replace(&context, path, &rhs));
            let (cl, cr) = (canonicalize(&left, s), canonicalize(&right, s));
            ensure(matches!((&cl, &cr), (Ok(a), Ok(b)) if a == b), || {
                format!("{name} over {s}: {left} gives {cl:?}, {right} gives {cr:?}")
            })?;
            total += 1;
        }
    }
    Ok(format!("{} rewrites, {total} instances, 0 failures (exact)", rules.len()))
}

// ---------------------------------------------------------------------------

fn conservativity() -> Outcome {
    let mut rng = rng(2);
    let (mut checked, mut nontrivial, mut beta_steps) = (0, 0, 0);
    for _ in 0..300 {
        let m = pure(&mut rng, 10);
        for policy in [SplitPolicy::unit(), SplitPolicy::Full] {
            let len = rng.gen_range(0..=6);
            let walk = alg_walk(&mut rng, AlgebraicTerm::embed(&m, SemiringId::Nat), len, policy);
            for i in 0..=walk.len() {
                let prefix = AlgTrace {
                    start: walk.start.clone(),
                    steps: walk.steps[..i].to_vec(),
                };
                let Some(target) = prefix.end().as_pure() else { continue };
                let cert = conserve(&prefix).map_err(|e| format!("conserve on {m} ({policy}, {i} steps): {e}"))?;
                cert.verify().map_err(|e| format!("certificate for {m}: {e}"))?;
                let end = cert.beta.replay().map_err(|e| e.to_string())?;
                ensure(cert.beta.start == m && end == target, || {
                    format!("{m}: β-trace replays to {end}, expected {target}")
                })?;
                checked += 1;
                if i > 0 {
                    nontrivial += 1;
                    beta_steps += cert.beta.len();
                }
            }
        }
    }
    Ok(format!(
        "{checked} pure endpoints ({nontrivial} after ≥1 step, {beta_steps} β-steps) replayed exactly, 0 failures"
    ))
}

// ---------------------------------------------------------------------------

fn expect_mashup(d: &MashupDerivation, subject: &PureTerm, term: &AlgebraicTerm, what: &str) -> Result<(), String> {
    let got = mashup::check_mashup_derivation(d)
        .into_result()
        .map_err(|e| format!("{what}: rejected: {e}"))?;
    let want = Judgement::Mashup {
        subject: subject.clone(),
        term: term.clone(),
    };
    ensure(got == want, || format!("{what}: concludes {got}, expected {want}"))
}

fn expect_simple(d: &SimpleDerivation, subject: &PureTerm, term: &SimpleTerm, what: &str) -> Result<(), String> {
    let got = mashup::check_simple_derivation(d)
        .into_result()
        .map_err(|e| format!("{what}: rejected: {e}"))?;
    let want = Judgement::Simple {
        subject: subject.clone(),
        term: term.clone(),
    };
    ensure(got == want, || format!("{what}: concludes {got}, expected {want}"))
}

fn policy_for(rng: &mut ChaCha8Rng, s: SemiringId) -> SplitPolicy {
    let options: Vec<SplitPolicy> = [SplitPolicy::Full, SplitPolicy::unit(), SplitPolicy::Half]
        .into_iter()
        .filter(|p| p.is_valid_for(s))
        .collect();
    options[rng.gen_range(0..options.len())]
}

/// A random derivation `m ⊩ σ` together with its subject.
fn random_derivation(rng: &mut ChaCha8Rng, s: SemiringId, max: usize) -> (PureTerm, MashupDerivation) {
    let m = pure(rng, max);
    let policy = policy_for(rng, s);
    let steps = rng.gen_range(0..=4);
    let d = derivation(rng, &m, steps, s, policy);
    (m, d)
}

/// A β-trace ending at `end`; half of the time it starts from `(λa.a)end`.
fn trace_to(rng: &mut ChaCha8Rng, end: PureTerm) -> BetaTrace {
    if rng.gen_bool(0.5) {
        let id = PureTerm::lam(PureTerm::bound(0));
        let mut t = BetaTrace::empty(PureTerm::app(id, end));
        t.push(Vec::new()).expect("root redex");
        t
    } else {
        BetaTrace::empty(end)
    }
}

fn transformers() -> Outcome {
    const N: usize = 500;
    let mut rng = rng(3);
    let sr = |i: usize| POSITIVE[i % POSITIVE.len()];

    for i in 0..N {
        let s = sr(i);
        let m = pure(&mut rng, 10);
        expect_mashup(&mashup::refl(&m, s), &m, &AlgebraicTerm::embed(&m, s), "refl")?;
    }

    for i in 0..N {
        let s = sr(i);
        let m = pure(&mut rng, 8);
        let steps = rng.gen_range(0..=4);
        let trace = beta_walk(&mut rng, &m, steps);
        let policy = policy_for(&mut rng, s);
        let steps = rng.gen_range(0..=3);
        let d = derivation(&mut rng, trace.end(), steps, s, policy);
        let sigma = d.conclusion().map_err(|e| e.to_string())?;
        let p = mashup::precompose(&trace, &d).map_err(|e| format!("precompose: {e}"))?;
        expect_mashup(&p, &m, &sigma, "precompose")?;
    }

    for i in 0..N {
        let s = sr(i);
        let (m, d) = random_derivation(&mut rng, s, 9);
        let sigma = d.conclusion().map_err(|e| e.to_string())?;
        let parts = mashup::support_split(&d).map_err(|e| format!("support_split: {e}"))?;
        ensure(parts.keys().cloned().collect::<BTreeSet<_>>() == sigma.support(), || {
            format!("support_split of {sigma}: wrong keys")
        })?;
        for (u, part) in &parts {
            expect_simple(part, &m, u, "support_split")?;
        }
        let joined = mashup::support_join(&m, &sigma, &parts).map_err(|e| format!("support_join: {e}"))?;
        expect_mashup(&joined, &m, &sigma, "support_join")?;
    }

    // (s), (λ), (a) and (+) as admissible rules.
    for i in 0..N {
        let s = sr(i);
        let (m, d) = random_derivation(&mut rng, s, 8);
        let sigma = d.conclusion().map_err(|e| e.to_string())?;

        let parts = mashup::support_split(&d).map_err(|e| e.to_string())?;
        if let Some((u, part)) = parts.into_iter().next() {
            let lifted = mashup::admissible_s(part, s);
            expect_mashup(&lifted, &m, &AlgebraicTerm::singleton(u, s), "admissible (s)")?;
        }

        let trace = trace_to(&mut rng, PureTerm::lam(m.clone()));
        let lam = mashup::admissible_lam(&trace, &d).map_err(|e| format!("admissible (λ): {e}"))?;
        let want = sigma.flat_map(|u| AlgebraicTerm::singleton(SimpleTerm::lam(u.clone()), s));
        expect_mashup(&lam, &trace.start, &want, "admissible (λ)")?;

        let (n, e) = random_derivation(&mut rng, s, 6);
        let tau = e.conclusion().map_err(|e| e.to_string())?;
        let trace = trace_to(&mut rng, PureTerm::app(m.clone(), n.clone()));
        let app = mashup::admissible_app(&trace, &d, &e).map_err(|e| format!("admissible (a): {e}"))?;
        let want = sigma.flat_map(|u| AlgebraicTerm::singleton(SimpleTerm::app(u.clone(), tau.clone()), s));
        expect_mashup(&app, &trace.start, &want, "admissible (a)")?;

        let policy = policy_for(&mut rng, s);
        let steps = rng.gen_range(0..=3);
        let other = derivation(&mut rng, &m, steps, s, policy);
        let rho = other.conclusion().map_err(|e| e.to_string())?;
        let a = coefficient(&mut rng, s);
        let plus = mashup::admissible_plus(&a, &d, &other).map_err(|e| format!("admissible (+): {e}"))?;
        let want = sigma.scale(&a).and_then(|x| x.add(&rho)).map_err(|e| e.to_string())?;
        expect_mashup(&plus, &m, &want, "admissible (+)")?;
    }

    for i in 0..N {
        let s = sr(i);
        // Free and bound targets; a bound target is removed β-style.
        let (target, depth) = if i % 3 == 0 {
            (Var::Bound(0), 1)
        } else {
            (Var::free(FREE[i % FREE.len()]), 0)
        };
        let size = rng.gen_range(1..=7);
        let m = pure_of_size(&mut rng, size, depth);
        let policy = policy_for(&mut rng, s);
        let steps = rng.gen_range(0..=3);
        let d = derivation(&mut rng, &m, steps, s, policy);
        let (p, dp) = random_derivation(&mut rng, s, 5);
        let (sigma, rho) = (d.conclusion().map_err(|e| e.to_string())?, dp.conclusion().map_err(|e| e.to_string())?);
        let out = mashup::subst_derivation(&d, &target, &dp).map_err(|e| format!("subst_derivation: {e}"))?;
        expect_mashup(&out, &m.subst(&target, &p), &sigma.subst(&target, &rho), "subst_derivation")?;
    }

    let mut stepped = 0;
    while stepped < N {
        let s = sr(stepped);
        let (m, d) = random_derivation(&mut rng, s, 9);
        let sigma = d.conclusion().map_err(|e| e.to_string())?;
        let policy = policy_for(&mut rng, s);
        let options = alg_reducts(&sigma, policy);
        if options.is_empty() {
            continue;
        }
        let pick = &options[rng.gen_range(0..options.len())];
        let out = mashup::step_derivation(&d, &pick.step).map_err(|e| format!("step_derivation: {e}"))?;
        expect_mashup(&out, &m, &pick.result, "step_derivation")?;
        stepped += 1;
    }

    Ok(format!(
        "{N} instances each of refl, precompose, support split/join, admissible rules, subst, step; 0 failures"
    ))
}

// ---------------------------------------------------------------------------

fn lifting_golden() -> Outcome {
    let c = lifting_counterexample();
    let want: BTreeSet<PureTerm> = ["(λx.(x)x)y", "(λx.(x)x)z"]
        .iter()
        .map(|t| parse_pure(t).expect("parses"))
        .collect();
    ensure(c.choices == want, || format!("Λ(σ) = {:?}", c.choices))?;
    ensure(c.witness == parse_pure("(y)z").expect("parses"), || format!("witness {}", c.witness))?;
    ensure(c.witness_is_choice(), || "(y)z ∉ Λ(σ')".into())?;
    ensure(c.witness_reachable() == Some(false), || {
        format!("reachability of the witness: {:?}", c.witness_reachable())
    })?;
    let (code, out) = run_cli(&["demo", "claim21"]);
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(out == fixture("demo_lifting.txt"), || format!("output differs from fixture:\n{out}"))?;
    Ok("Λ(σ) exact, (y)z ∈ Λ(σ'), both graphs exhausted, fixture identical".into())
}

fn split_golden() -> Outcome {
    let w = split_witness();
    ensure(w.start.as_pure() == Some(w.term.clone()), || "start is not the pure term".into())?;
    let half = Coefficient::rat(1, 2).map_err(|e| e.to_string())?;
    ensure(w.step.split == half, || format!("split {}", w.step.split))?;
    ensure(w.step.apply_to(&w.start).ok() == Some(w.result.clone()), || "step does not replay".into())?;
    ensure(w.result.as_pure().is_none(), || format!("{} is pure", w.result))?;
    let (code, out) = run_cli(&["demo", "subars"]);
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(out == fixture("demo_split.txt"), || format!("output differs from fixture:\n{out}"))?;
    Ok("1/2 split over rat+ replays, as_pure = None, fixture identical".into())
}

fn inconsistency_replay() -> Outcome {
    let inc = inconsistency("y").map_err(|e| e.to_string())?;
    inc.verify().map_err(|e| format!("verify: {e}"))?;
    for t in [&inc.forward, &inc.backward, &inc.int_forward, &inc.int_backward] {
        t.validate().map_err(|e| format!("replay: {e}"))?;
    }
    ensure(inc.int_cancelled.is_zero(), || format!("∞σ - ∞σ = {}", inc.int_cancelled))?;
    ensure(inc.int_shifted == inc.int_sigma, || format!("σ + ∞σ - ∞σ = {}", inc.int_shifted))?;
    ensure(inc.forward.end() == inc.backward.end(), || "nat chains do not meet".into())?;
    ensure(inc.int_forward.start.is_zero() && inc.int_backward.start == inc.int_sigma, || {
        "int chains do not run from 0 and σ".into()
    })?;
    ensure(inc.int_forward.end() == inc.int_backward.end(), || "int chains do not meet".into())?;
    let (code, out) = run_cli(&["demo", "inconsistency"]);
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(out == fixture("demo_inconsistency.txt"), || format!("output differs from fixture:\n{out}"))?;
    let steps = inc.forward.len() + inc.backward.len() + inc.int_forward.len() + inc.int_backward.len();
    Ok(format!("{steps} steps replayed, ∞σ + (-1).∞σ = 0, 0 ↔ σ over int, fixture identical"))
}

// ---------------------------------------------------------------------------

fn local_joinability() -> Outcome {
    const FUEL: usize = 200;
    let mut rng = rng(7);
    let (mut pairs, mut with_reducts) = (0, 0);
    for _ in 0..200 {
        let size = rng.gen_range(4..=8);
        let sigma = algebraic(&mut rng, size, SemiringId::Nat);
        let reducts: BTreeSet<AlgebraicTerm> =
            alg_reducts(&sigma, SplitPolicy::unit()).into_iter().map(|r| r.result).collect();
        if reducts.len() > 1 {
            with_reducts += 1;
        }
        let reducts: Vec<_> = reducts.into_iter().collect();
        for (i, a) in reducts.iter().enumerate() {
            for b in &reducts[i + 1..] {
                pairs += 1;
                let full = joinable(a, b, FUEL, SplitPolicy::Full).map_err(|e| e.to_string())?;
                if full.is_found() {
                    continue;
                }
                let unit = joinable(a, b, FUEL, SplitPolicy::unit()).map_err(|e| e.to_string())?;
                match unit {
                    Reach::Found(_) => {}
                    Reach::Unreachable { .. } => return Err(format!("{a} and {b} from {sigma} never join")),
                    Reach::Unknown { .. } => {
                        return Err(format!("{a} and {b} from {sigma}: no join within fuel {FUEL}"))
                    }
                }
            }
        }
    }
    Ok(format!(
        "200 terms ({with_reducts} with diverging steps), {pairs} reduct pairs joined within fuel {FUEL}, 0 unknown"
    ))
}

fn parallel_coherence() -> Outcome {
    let terms = all_pure_terms(7);
    for m in &terms {
        let want = parallel_pure(m);
        for s in [SemiringId::Nat, SemiringId::Bool] {
            let got = parallel_reduce(&AlgebraicTerm::embed(m, s));
            ensure(got == AlgebraicTerm::embed(&want, s), || {
                format!("{m} over {s}: algebraic {got}, pure {want}")
            })?;
        }
    }
    Ok(format!("all {} pure terms of size ≤ 7, exact equality over nat and bool", terms.len()))
}

fn positivity() -> Outcome {
    let mut rng = rng(9);
    let mut summary = Vec::new();
    for s in ALL {
        // Small elements in a fixed order first, then random pairs.
        let small: Vec<Coefficient> = match s {
            SemiringId::Bool => vec![Coefficient::boolean(false), Coefficient::boolean(true)],
            SemiringId::Int => (0..=3i64).flat_map(|n| [n, -n]).skip(1).map(Coefficient::int).collect(),
            _ => (0..=3u64).map(|n| Coefficient::from_u64(n, s)).collect(),
        };
        let mut samples: Vec<(Coefficient, Coefficient)> = small
            .iter()
            .flat_map(|a| small.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        while samples.len() < 1000 {
            samples.push((coefficient(&mut rng, s), coefficient(&mut rng, s)));
        }
        let verdict = positivity_probe(s, &samples).map_err(|e| e.to_string())?;
        let want = if s == SemiringId::Int {
            PositivityVerdict::CounterexamplePair(Coefficient::int(1), Coefficient::int(-1))
        } else {
            PositivityVerdict::Positive
        };
        ensure(verdict == want, || format!("{s}: {verdict:?}"))?;
        summary.push(match verdict {
            PositivityVerdict::Positive => format!("{s} positive on {}", samples.len()),
            PositivityVerdict::CounterexamplePair(a, b) => format!("{s} fails at ({a}, {b})"),
        });
    }
    Ok(summary.join(", "))
}
