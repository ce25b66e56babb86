//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any of them fails.

mod common;

use std::time::{Duration, Instant};

use common::{accepted, agreement, goals, programs, Expect, Gen};
use fcci::driver;
use fcci::elaborate::elaborate_unit;
use fcci::eval::{evaluate, Value, DEFAULT_FUEL};
use fcci::fomega::fomega_typecheck;
use fcci::kinds::{kind_of, normalize, type_equiv};
use fcci::resolution::{ExplorationOrder, SolveOptions};
use fcci::surface::parser::{parse_context, parse_term, parse_type, parse_unit};
use fcci::surface::pretty::{pretty_term, pretty_type};
use fcci::syntax::{BinderForm, Context, Term, Type};
use fcci::typing::{type_of, type_of_with};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn within(limit: Duration, started: Instant, detail: String) -> Verdict {
    let took = started.elapsed();
    if took < limit {
        Ok(format!("{} in {:.2?}", detail, took))
    } else {
        Err(format!("{} but took {:.2?} (limit {:?})", detail, took, limit))
    }
}

fn fcci(args: &[&str]) -> driver::Output {
    driver::run(std::iter::once("fcci").chain(args.iter().copied()))
}

fn examples_exact() -> Verdict {
    let started = Instant::now();
    let unit = parse_unit("let [y : Int] = 7 in (/\\[a]. \\[x : a]. x) :: Int", "summon.fcci").map_err(|d| d.message)?;
    let typed = type_of(&Context::new(), &unit.body).map_err(|d| d.message)?;
    if typed.ty != Type::Int {
        return Err(format!("summon checks at {}", pretty_type(&typed.ty)));
    }
    let core = elaborate_unit(&typed);
    let expected = "(\\(y : Int). (/\\(a). \\(x : a). x) @(Int) (y)) (7)";
    if core.to_string() != expected {
        return Err(format!("summon elaborates to {}", core));
    }
    fomega_typecheck(&Context::new(), core.term()).map_err(|d| d.message)?;
    if evaluate(&core, DEFAULT_FUEL) != Ok(Value::Int(7)) {
        return Err("summon does not run to 7".into());
    }
    let summon_time = started.elapsed();
    if summon_time >= Duration::from_secs(1) {
        return Err(format!("summon took {:.2?}", summon_time));
    }

    let started = Instant::now();
    let ctx = parse_context("[y : Int -> Int], (f : Int => (Int -> Int) => Int)").unwrap();
    let term = parse_term("f :: Int => Int", &ctx).unwrap();
    let typed = type_of(&ctx, &term).map_err(|d| d.message)?;
    let witness = &typed.resolutions[&0];
    let f = Term::free(1, "f");
    let expected = Term::abs(
        BinderForm::Explicit,
        "x",
        Type::Int,
        Term::app(
            BinderForm::Explicit,
            Term::app(BinderForm::Explicit, f.clone(), Term::var(fcci::syntax::Var::Bound(0), "x")),
            Term::free(0, "y"),
        ),
    );
    if witness.with_subject(&f) != expected {
        return Err(format!("focusing witness is {}", witness.pretty()));
    }
    within(
        Duration::from_secs(1),
        started,
        format!("summon runs to 7 ({:.2?}); focusing witness {}", summon_time, witness.pretty()),
    )
}

fn oracle_equivalence() -> Verdict {
    let started = Instant::now();
    let cases = goals();
    if cases.len() < 40 {
        return Err(format!("only {} goals", cases.len()));
    }
    let failures: Vec<String> = cases.iter().filter_map(|c| agreement(c, 16).err()).collect();
    if !failures.is_empty() {
        return Err(failures.join("; "));
    }
    within(Duration::from_secs(60), started, format!("{}/{} goals agree at limit 16", cases.len(), cases.len()))
}

fn elaboration_soundness() -> Verdict {
    let started = Instant::now();
    let programs = accepted();
    if programs.len() < 30 {
        return Err(format!("only {} accepted programs", programs.len()));
    }
    for p in &programs {
        let unit = parse_unit(&p.text, &p.name).map_err(|d| format!("{}: {}", p.name, d.message))?;
        let typed = type_of(&Context::new(), &unit.body).map_err(|d| format!("{}: {}", p.name, d.message))?;
        let core = elaborate_unit(&typed);
        let ty = fomega_typecheck(&Context::new(), core.term()).map_err(|d| format!("{}: {}", p.name, d.message))?;
        if ty != typed.ty.erase() {
            return Err(format!("{}: core type {} differs from {}", p.name, pretty_type(&ty), pretty_type(&typed.ty)));
        }
    }
    within(Duration::from_secs(30), started, format!("{}/{} programs", programs.len(), programs.len()))
}

fn coherence() -> Verdict {
    let started = Instant::now();
    let mut violations = Vec::new();
    let unique = accepted();
    for p in &unique {
        let unit = parse_unit(&p.text, &p.name).unwrap();
        let mut values = Vec::new();
        for _ in 0..5 {
            let typed = type_of(&Context::new(), &unit.body).unwrap();
            values.push(evaluate(&elaborate_unit(&typed), DEFAULT_FUEL));
        }
        for seed in 0..5 {
            let options = SolveOptions { order: ExplorationOrder::Shuffled(seed), ..SolveOptions::default() };
            let typed = type_of_with(&Context::new(), &unit.body, &options).unwrap();
            values.push(evaluate(&elaborate_unit(&typed), DEFAULT_FUEL));
        }
        if values.iter().any(|v| v != &values[0] || v.is_err()) {
            violations.push(p.name.clone());
        }
    }
    let ambiguous: Vec<_> =
        programs().into_iter().filter(|p| p.expect == (Expect::Reject { code: "E302".into() })).collect();
    for p in &ambiguous {
        let out = fcci(&["run", p.path.to_str().unwrap()]);
        if out.status != 2 || out.stderr.matches("witness: ").count() < 2 || !out.stdout.is_empty() {
            violations.push(p.name.clone());
        }
    }
    if ambiguous.is_empty() {
        violations.push("no ambiguous programs".into());
    }
    if violations.is_empty() {
        Ok(format!(
            "{} unique programs stable over 10 runs, {} ambiguous programs exit 2, in {:.2?}",
            unique.len(),
            ambiguous.len(),
            started.elapsed()
        ))
    } else {
        Err(format!("violations: {}", violations.join(", ")))
    }
}

fn kinding_and_normalization() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    let mut reduced = 0;
    while checked < 1000 {
        let mut g = Gen::new(&mut rng);
        let kind = g.kind(1);
        let ty = g.ty(&kind, 1 + checked % 30);
        let ctx = g.context().clone();
        if ty.size() > 30 {
            continue;
        }
        checked += 1;
        if kind_of(&ctx, &ty).as_ref() != Ok(&kind) {
            return Err(format!("generated {} is not of its kind", pretty_type(&ty)));
        }
        let nf = normalize(&ty);
        if nf != ty {
            reduced += 1;
        }
        if normalize(&nf) != nf {
            return Err(format!("normalize is not idempotent on {}", pretty_type(&ty)));
        }
        if kind_of(&ctx, &nf).as_ref() != Ok(&kind) {
            return Err(format!("normalize changes the kind of {}", pretty_type(&ty)));
        }
    }
    let redex = parse_type("(\\a : *. a) Int", &Context::new()).unwrap();
    if !type_equiv(&Context::new(), &redex, &Type::Int) {
        return Err("(\\a : *. a) Int is not equivalent to Int".into());
    }
    within(Duration::from_secs(30), started, format!("{} types ({} with redexes)", checked, reduced))
}

fn round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf00d);
    for i in 0..1000 {
        let mut g = Gen::new(&mut rng);
        let size = 1 + i % 30;
        let kind = g.kind(1);
        let ty = g.ty(&kind, size);
        let term = g.term(size);
        let ctx = g.context().clone();
        let text = pretty_type(&ty);
        match parse_type(&text, &ctx) {
            Ok(back) if back == ty => {}
            _ => return Err(format!("type {} does not round-trip", text)),
        }
        let text = pretty_term(&term);
        match parse_term(&text, &ctx) {
            Ok(back) if back == term => {}
            _ => return Err(format!("term {} does not round-trip", text)),
        }
    }
    Ok("1000 types and 1000 terms".into())
}

fn boundary_honesty() -> Verdict {
    let dir = common::corpus_dir().join("programs");
    let incomplete = fcci(&["check", dir.join("non_pattern.fcci").to_str().unwrap()]);
    if incomplete.status != 3 || !incomplete.stderr.contains("error[E304]") {
        return Err(format!("non-pattern goal gave exit {}: {}", incomplete.status, incomplete.stderr.trim()));
    }
    let exhausted = fcci(&["check", dir.join("looping_instance.fcci").to_str().unwrap()]);
    if exhausted.status != 3 || !exhausted.stderr.contains("error[E303]") {
        return Err(format!("looping goal gave exit {}: {}", exhausted.status, exhausted.stderr.trim()));
    }
    let limited = fcci(&["check", "--limit", "1", dir.join("summon.fcci").to_str().unwrap()]);
    if limited.status != 3 || !limited.stderr.contains("error[E303]") {
        return Err(format!("summon at limit 1 gave exit {}", limited.status));
    }
    Ok("non-pattern goal is E304, over-limit goals are E303, both exit 3".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("examples exact", examples_exact),
        ("oracle equivalence", oracle_equivalence),
        ("elaboration soundness", elaboration_soundness),
        ("coherence and determinism", coherence),
        ("kinding and normalization", kinding_and_normalization),
        ("syntax round-trip", round_trip),
        ("boundary honesty", boundary_honesty),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("criterion {} {}: PASS ({})", i + 1, name, detail),
            Ok(Err(detail)) => {
                failed += 1;
                println!("criterion {} {}: FAIL ({})", i + 1, name, detail);
            }
            Err(_) => {
                failed += 1;
                println!("criterion {} {}: FAIL (panicked)", i + 1, name);
            }
        }
    }
    if failed > 0 {
        println!("{} of {} criteria failed", failed, criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
