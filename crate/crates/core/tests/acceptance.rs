//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use ncvar_core::frontend::{parse_cyclic, parse_operator};
use ncvar_core::jet::{normal_form, DiffOperator};
use ncvar_core::multivector::schouten;
use ncvar_core::poisson::{bivector_of, check_involutive, check_master, jacobiator, Outcome};
use ncvar_core::testkit::bruteforce_bracket;
use ncvar_core::Context;

type Outcome_ = Result<String, String>;

fn within(limit: Duration, start: Instant) -> Check {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.1?}, limit {limit:?}"))
}

fn run_all(count: u64, mut f: impl FnMut(u64) -> Check) -> Check {
    for seed in 0..count {
        f(seed)?;
    }
    Ok(())
}

fn c1_euler_exactness() -> Outcome_ {
    let start = Instant::now();
    run_all(200, |seed| euler_kills_total_derivatives(seed, 1 + (seed % 2) as usize))?;
    within(Duration::from_secs(30), start)?;
    Ok(format!("200 densities, m in {{1,2}}, {:.2?}", start.elapsed()))
}

fn c2_adjoint() -> Outcome_ {
    run_all(100, |seed| adjoint_identity(1000 + seed, 1 + (seed % 2) as usize))?;
    Ok("100 random (p1, p2, A), order <= 3".into())
}

fn c3_lift() -> Outcome_ {
    run_all(100, |seed| lift_contract(2000 + seed, 1 + (seed % 2) as usize))?;
    Ok("100 random (phi, p, psi)".into())
}

fn c4_skew() -> Outcome_ {
    run_all(100, |seed| skew_symmetry(3000 + seed, (seed % 4) as usize, ((seed / 4) % 4) as usize))?;
    Ok("100 pairs, degrees up to 3".into())
}

fn c5_jacobi() -> Outcome_ {
    let start = Instant::now();
    let mut nontrivial = 0;
    for seed in 0..25u64 {
        let degrees = (1 + (seed % 3) as usize, 1 + ((seed / 3) % 3) as usize, 1 + ((seed / 9) % 2) as usize);
        if jacobi(4000 + seed, degrees.0, degrees.1, degrees.2)? {
            nontrivial += 1;
        }
    }
    within(Duration::from_secs(300), start)?;
    ensure(nontrivial >= 10, || format!("only {nontrivial} of 25 triples have a nonzero side"))?;
    Ok(format!("25 triples, degrees up to 3, {nontrivial} nonzero, {:.2?}", start.elapsed()))
}

fn c6_one_vectors() -> Outcome_ {
    let ctx = Context::cyclic(1);
    let fixed = schouten(
        &ctx,
        &multivector(&ctx, "tr(b*a*a)"),
        &multivector(&ctx, "tr(b*a*a*a)"),
    );
    let expected = normal_form(&ctx, &parse_cyclic(&ctx, "-1 tr(b*a*a*a*a)").unwrap());
    ensure(fixed.body() == &expected, || "[[<b,a^2>,<b,a^3>]] != -<b a^4>".into())?;
    run_all(50, |seed| one_vector_formula(5000 + seed, 1 + (seed % 2) as usize))?;
    Ok("fixed pair plus 50 random pairs".into())
}

fn multivector(ctx: &Context, src: &str) -> ncvar_core::multivector::Multivector {
    ncvar_core::multivector::multivector_from_density(ctx, &parse_cyclic(ctx, src).unwrap()).unwrap()
}

fn c7_fields() -> Outcome_ {
    run_all(25, |seed| field_correspondence(6000 + seed, 10))?;
    Ok("25 pairs x 10 probes".into())
}

struct NamedOp {
    name: &'static str,
    src: &'static str,
    commutative: bool,
    hamiltonian: bool,
}

const VERDICT_SUITE: [NamedOp; 5] = [
    NamedOp { name: "D_x", src: "p_1", commutative: false, hamiltonian: true },
    NamedOp { name: "D_x^3", src: "p_3", commutative: false, hamiltonian: true },
    NamedOp { name: "a.p - p.a", src: COMMUTATOR_OP, commutative: false, hamiltonian: true },
    NamedOp { name: "a^2 D + D a^2", src: A_SQUARED_OP, commutative: true, hamiltonian: true },
    NamedOp { name: "a_x D + D a_x", src: A_X_OP, commutative: true, hamiltonian: false },
];

fn ctx_for(op: &NamedOp) -> Context {
    if op.commutative {
        Context::commutative(1)
    } else {
        Context::cyclic(1)
    }
}

fn operator(ctx: &Context, op: &NamedOp) -> DiffOperator {
    parse_operator(ctx, op.src, &["p"]).unwrap()
}

/// Residual of the non-Hamiltonian case, frozen from the oracle.
const FROZEN_RESIDUAL: &str = "-4 tr(b*b_1*b_3*a)";

fn c8_verdicts() -> Outcome_ {
    for named in &VERDICT_SUITE {
        let ctx = ctx_for(named);
        let op = operator(&ctx, named);
        let pi = bivector_of(&ctx, &op).map_err(|e| format!("{}: {e}", named.name))?;
        let oracle = bruteforce_bracket(&ctx, &pi, &pi).map_err(|e| e.to_string())?;
        let master = check_master(&ctx, &op).unwrap();
        ensure(master.hamiltonian() == named.hamiltonian, || format!("{}: master verdict wrong", named.name))?;
        ensure(master.residual.body() == oracle.body(), || format!("{}: residual differs from oracle", named.name))?;
        if !named.hamiltonian {
            let frozen = normal_form(&ctx, &parse_cyclic(&ctx, FROZEN_RESIDUAL).unwrap());
            ensure(!frozen.is_zero() && master.residual.body() == &frozen, || format!("{}: residual differs from frozen value", named.name))?;
        }
        let inv = check_involutive(&ctx, &op, None).unwrap();
        if inv.outcome != Outcome::Inconclusive {
            ensure(inv.hamiltonian() == named.hamiltonian, || format!("{}: involutive route disagrees", named.name))?;
        } else {
            return Err(format!("{}: involutive route inconclusive at default bound", named.name));
        }
    }
    Ok("5 operators; master = oracle; involutive route agrees on all".into())
}

fn c9_poisson() -> Outcome_ {
    run_all(100, |seed| poisson_skew(7000 + seed, seed % 2 == 1))?;
    let mut triples = 0;
    for named in VERDICT_SUITE.iter().filter(|n| n.hamiltonian) {
        for seed in 0..20 {
            let (ctx, hs) = hamiltonian_triple(8000 + seed, named.commutative);
            let op = operator(&ctx, named);
            jacobiator_vanishes(&ctx, &op, &hs).map_err(|e| format!("{}: seed {seed}: {e}", named.name))?;
            triples += 1;
        }
    }
    let bad = &VERDICT_SUITE[4];
    let ctx = ctx_for(bad);
    let op = operator(&ctx, bad);
    let witness = (0..200u64).find(|seed| {
        let (c, hs) = hamiltonian_triple(9000 + seed, true);
        !jacobiator(&c, &hs[0], &hs[1], &hs[2], &op).unwrap().is_zero()
    });
    let seed = witness.ok_or("no nonzero jacobiator found for a_x D + D a_x")?;
    Ok(format!("100 skew cases; {triples} vanishing jacobiators; a_x D + D a_x witness at seed {}", 9000 + seed))
}

fn c10_projection() -> Outcome_ {
    run_all(100, |seed| projection_intertwines(10_000 + seed))?;
    Ok("100 random inputs through D, euler, couple, schouten".into())
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncvar")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn c11_frontend() -> Outcome_ {
    run_all(500, |seed| frontend_round_trip(11_000 + seed))?;
    let mut checked = 0;
    for named in &VERDICT_SUITE {
        let mut args = vec!["is-hamiltonian", "--op", named.src, "--route", "both"];
        if named.commutative {
            args.push("--commutative");
        }
        let (code, out) = cli(&args);
        let expected = if named.hamiltonian { (0, "true\n") } else { (1, "false\n") };
        ensure((code, out.as_str()) == expected, || format!("{}: CLI gave ({code}, {out:?})", named.name))?;
        checked += 1;
    }
    let fixed: [(&[&str], i32, &str); 8] = [
        (&["is-hamiltonian", "--gens", "1", "--op", "D[1](p)"], 0, "true\n"),
        (&["euler", "--var", "a", "tr(a*a*a)"], 0, "3 a*a\n"),
        (&["schouten", "tr(b*a*a)", "tr(b*a*a*a)"], 0, "-1 tr(b*a*a*a*a)\n"),
        (&["is-hamiltonian", "--commutative", "--route", "involutive", "--order-bound", "0", "--op", A_X_OP], 2, "inconclusive\n"),
        (&["is-hamiltonian", "--op", "a*p + p*a"], 65, ""),
        (&["normal-form", "tr(a*"], 65, ""),
        (&["no-such-command"], 64, ""),
        (&["euler", "tr(a)"], 64, ""),
    ];
    for (args, code, out) in fixed {
        let got = cli(args);
        ensure(got == (code, out.to_string()), || format!("ncvar {args:?}: expected ({code}, {out:?}), got {got:?}"))?;
        checked += 1;
    }
    Ok(format!("500 round trips; {checked} CLI exit-code checks"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome_); 11] = [
        ("Euler-exactness", c1_euler_exactness),
        ("adjoint identity", c2_adjoint),
        ("covector lift contract", c3_lift),
        ("graded skew-symmetry", c4_skew),
        ("Jacobi identity", c5_jacobi),
        ("one-vector formula", c6_one_vectors),
        ("field correspondence", c7_fields),
        ("Hamiltonian verdicts", c8_verdicts),
        ("Poisson layer", c9_poisson),
        ("commutative degeneration", c10_projection),
        ("frontend", c11_frontend),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
