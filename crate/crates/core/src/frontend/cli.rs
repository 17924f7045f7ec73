//! `ncvar` command line.
//!
//! Exit codes: 0 success; `is-hamiltonian` 0 true, 1 false, 2 inconclusive;
//! `selftest` 1 on any failure; 64 usage; 65 bad input; 70 route disagreement.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{CyclicPoly, DiffPoly, Family, Mode};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::jet::{adjoint, couple_raw, euler_all, normal_form, variational_derivative, DiffOperator, Side};
use crate::multivector::{evaluate, multivector_from_density, odd_field, schouten};
use crate::poisson::{check_involutive, check_master, jacobiator, poisson_bracket, Outcome, PoissonVerdict};
use crate::testkit::selftest;

use super::document::{from_json, to_document, Value};
use super::parse::{parse_expression, parse_operator, parse_vector, Parsed};
use super::render::{default_slot_names, render_cyclic, render_operator, render_poly, render_vector};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_DISAGREE: i32 = 70;

#[derive(Parser, Debug)]
#[command(name = "ncvar", version, about = "Exact calculus of variational multivectors on cyclic words")]
struct Cli {
    /// Number of generators m
    #[arg(long, global = true, default_value_t = 1)]
    gens: usize,
    /// Number of base variables n
    #[arg(long = "base-dim", global = true, default_value_t = 1)]
    base_dim: usize,
    /// Graded-commutative letters instead of cyclic words
    #[arg(long, global = true)]
    commutative: bool,
    /// Emit structured documents
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Var {
    A,
    B,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SideArg {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Master,
    Involutive,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Variational derivative of a density
    Euler {
        density: String,
        #[arg(long, value_enum)]
        var: Var,
        /// 1-based generator; all generators when omitted
        #[arg(long)]
        gen: Option<usize>,
        #[arg(long, value_enum, default_value = "right")]
        side: SideArg,
    },
    /// Adjoint of a linear operator
    Adjoint {
        #[arg(long)]
        op: String,
        #[arg(long, default_value = "p")]
        slot: String,
    },
    /// Coupling of a covector with an a-characteristic
    Couple { covector: String, characteristic: String },
    /// Schouten bracket of two multivectors
    Schouten { xi: String, eta: String },
    /// Value of a k-vector on k covectors
    Evaluate {
        xi: String,
        covectors: Vec<String>,
    },
    /// Characteristics of the odd field of a multivector
    QField { xi: String },
    /// Poisson bracket of two functionals
    Poisson {
        #[arg(long)]
        op: String,
        #[arg(long, default_value = "p")]
        slot: String,
        h1: String,
        h2: String,
    },
    /// Jacobiator of three functionals
    Jacobiator {
        #[arg(long)]
        op: String,
        #[arg(long, default_value = "p")]
        slot: String,
        h1: String,
        h2: String,
        h3: String,
    },
    /// Decide whether a skew-adjoint operator is Hamiltonian
    IsHamiltonian {
        #[arg(long)]
        op: String,
        #[arg(long, default_value = "p")]
        slot: String,
        #[arg(long, value_enum, default_value = "master")]
        route: RouteArg,
        #[arg(long = "order-bound")]
        order_bound: Option<u32>,
    },
    /// Normal form of a density modulo total derivatives
    NormalForm { density: String },
    /// Randomized cross-check of the bracket against the oracle
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

struct Session<'a> {
    ctx: Context,
    json: bool,
    out: &'a mut dyn Write,
}

impl Session<'_> {
    fn emit_value(&mut self, v: &Value) -> std::io::Result<()> {
        if self.json {
            let doc = to_document(&self.ctx, v);
            writeln!(self.out, "{}", serde_json::to_string(&doc).expect("documents serialize"))
        } else {
            let text = match v {
                Value::Poly(p) => render_poly(&self.ctx, p),
                Value::Cyclic(c) => render_cyclic(&self.ctx, c),
                Value::Vector(rows) => render_vector(&self.ctx, rows),
                Value::Operator(op) => render_operator(&self.ctx, op, &default_slot_names(op.arity())),
            };
            writeln!(self.out, "{text}")
        }
    }

    fn density(&self, src: &str) -> Result<CyclicPoly> {
        if src.trim_start().starts_with('{') {
            return match self.document(src)? {
                Value::Cyclic(c) => Ok(c),
                Value::Poly(p) => Ok(self.ctx.close(&p)),
                _ => Err(Error::Document("expected a density".into())),
            };
        }
        match parse_expression(&self.ctx, src)? {
            Parsed::Closed(c) => Ok(c),
            // an open polynomial is read as its trace
            Parsed::Open(p) => Ok(self.ctx.close(&p)),
        }
    }

    fn vector(&self, src: &str) -> Result<Vec<DiffPoly>> {
        if src.trim_start().starts_with('{') {
            return match self.document(src)? {
                Value::Vector(v) => Ok(v),
                Value::Poly(p) if self.ctx.gens() == 1 => Ok(vec![p]),
                _ => Err(Error::Document("expected a vector".into())),
            };
        }
        parse_vector(&self.ctx, src)
    }

    fn operator(&self, src: &str, slot: &str) -> Result<DiffOperator> {
        if src.trim_start().starts_with('{') {
            return match self.document(src)? {
                Value::Operator(op) => Ok(op),
                _ => Err(Error::Document("expected an operator".into())),
            };
        }
        parse_operator(&self.ctx, src, &[slot])
    }

    fn document(&self, src: &str) -> Result<Value> {
        let (ctx, v) = from_json(src)?;
        if ctx.gens() != self.ctx.gens() || ctx.base_dim() != self.ctx.base_dim() || ctx.mode() != self.ctx.mode() {
            return Err(Error::Document("document context differs from --gens/--base-dim/--commutative".into()));
        }
        Ok(v)
    }
}

enum Failure {
    Data(Error),
    Io(std::io::Error),
    Disagree(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn outcome_name(o: Outcome) -> &'static str {
    match o {
        Outcome::Hamiltonian => "true",
        Outcome::NotHamiltonian => "false",
        Outcome::Inconclusive => "inconclusive",
    }
}

fn outcome_code(o: Outcome) -> i32 {
    match o {
        Outcome::Hamiltonian => 0,
        Outcome::NotHamiltonian => 1,
        Outcome::Inconclusive => 2,
    }
}

fn verdict_json(ctx: &Context, v: &PoissonVerdict) -> serde_json::Value {
    let route = match v.route {
        crate::poisson::Route::Master => "master",
        crate::poisson::Route::Involutive => "involutive",
    };
    let vec_doc = |rows: &Option<Vec<DiffPoly>>| {
        rows.as_ref().map(|r| serde_json::to_value(to_document(ctx, &Value::Vector(r.clone()))).expect("serializable"))
    };
    json!({
        "route": route,
        "outcome": outcome_name(v.outcome),
        "hamiltonian": v.hamiltonian(),
        "residual": serde_json::to_value(to_document(ctx, &Value::Cyclic(v.residual.body().as_cyclic().clone()))).expect("serializable"),
        "commutator": vec_doc(&v.commutator),
        "witness": vec_doc(&v.witness),
    })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> std::result::Result<i32, Failure> {
    let mode = if cli.commutative { Mode::Commutative } else { Mode::Cyclic };
    let ctx = Context::new(cli.gens, cli.base_dim, mode)?;
    let mut s = Session { ctx, json: cli.json, out };
    match cli.command {
        Command::Euler { density, var, gen, side } => {
            let f = s.density(&density)?;
            let family = match var {
                Var::A => Family::A,
                Var::B => Family::B,
            };
            let side = match side {
                SideArg::Right => Side::Right,
                SideArg::Left => Side::Left,
            };
            match gen {
                Some(j) => {
                    if j == 0 {
                        return Err(Error::GeneratorOutOfRange { index: 0, gens: s.ctx.gens() }.into());
                    }
                    let d = variational_derivative(&s.ctx, &f, family, j - 1, side)?;
                    s.emit_value(&Value::Poly(d))?;
                }
                None => {
                    let rows = euler_all(&s.ctx, &f, family, side)?;
                    s.emit_value(&Value::Vector(rows))?;
                }
            }
        }
        Command::Adjoint { op, slot } => {
            let op = s.operator(&op, &slot)?;
            let adj = adjoint(&s.ctx, &op)?;
            if s.json {
                s.emit_value(&Value::Operator(adj))?;
            } else {
                let text = render_operator(&s.ctx, &adj, &[slot]);
                writeln!(s.out, "{text}")?;
            }
        }
        Command::Couple { covector, characteristic } => {
            let p = s.vector(&covector)?;
            let phi = s.vector(&characteristic)?;
            let f = couple_raw(&s.ctx, &p, &phi);
            s.emit_value(&Value::Cyclic(f.into_cyclic()))?;
        }
        Command::Schouten { xi, eta } => {
            let xi = multivector_from_density(&s.ctx, &s.density(&xi)?)?;
            let eta = multivector_from_density(&s.ctx, &s.density(&eta)?)?;
            let r = schouten(&s.ctx, &xi, &eta);
            s.emit_value(&Value::Cyclic(r.body().as_cyclic().clone()))?;
        }
        Command::Evaluate { xi, covectors } => {
            let xi = multivector_from_density(&s.ctx, &s.density(&xi)?)?;
            let ps = covectors
                .iter()
                .map(|c| s.vector(c).map(crate::jet::Covector::new))
                .collect::<Result<Vec<_>>>()?;
            let r = evaluate(&s.ctx, &xi, &ps)?;
            s.emit_value(&Value::Cyclic(r.into_cyclic()))?;
        }
        Command::QField { xi } => {
            let xi = multivector_from_density(&s.ctx, &s.density(&xi)?)?;
            let q = odd_field(&s.ctx, &xi);
            if s.json {
                let doc = json!({
                    "parity": if q.parity.is_odd() { "odd" } else { "even" },
                    "a": serde_json::to_value(to_document(&s.ctx, &Value::Vector(q.on_a.clone()))).expect("serializable"),
                    "b": serde_json::to_value(to_document(&s.ctx, &Value::Vector(q.on_b.clone()))).expect("serializable"),
                });
                writeln!(s.out, "{doc}")?;
            } else {
                writeln!(s.out, "a: {}", render_vector(&s.ctx, &q.on_a))?;
                writeln!(s.out, "b: {}", render_vector(&s.ctx, &q.on_b))?;
            }
        }
        Command::Poisson { op, slot, h1, h2 } => {
            let op = s.operator(&op, &slot)?;
            let r = poisson_bracket(&s.ctx, &s.density(&h1)?, &s.density(&h2)?, &op)?;
            s.emit_value(&Value::Cyclic(r.into_cyclic()))?;
        }
        Command::Jacobiator { op, slot, h1, h2, h3 } => {
            let op = s.operator(&op, &slot)?;
            let r = jacobiator(&s.ctx, &s.density(&h1)?, &s.density(&h2)?, &s.density(&h3)?, &op)?;
            s.emit_value(&Value::Cyclic(r.into_cyclic()))?;
        }
        Command::IsHamiltonian { op, slot, route, order_bound } => {
            let op = s.operator(&op, &slot)?;
            let mut verdicts = Vec::new();
            if route != RouteArg::Involutive {
                verdicts.push(check_master(&s.ctx, &op)?);
            }
            if route != RouteArg::Master {
                verdicts.push(check_involutive(&s.ctx, &op, order_bound)?);
            }
            let conclusive: Vec<Outcome> =
                verdicts.iter().map(|v| v.outcome).filter(|o| *o != Outcome::Inconclusive).collect();
            let outcome = conclusive.first().copied().unwrap_or(Outcome::Inconclusive);
            if conclusive.iter().any(|o| *o != outcome) {
                return Err(Failure::Disagree("master and involutive routes disagree".into()));
            }
            if s.json {
                let doc = json!({
                    "outcome": outcome_name(outcome),
                    "routes": verdicts.iter().map(|v| verdict_json(&s.ctx, v)).collect::<Vec<_>>(),
                });
                writeln!(s.out, "{doc}")?;
            } else {
                writeln!(s.out, "{}", outcome_name(outcome))?;
            }
            return Ok(outcome_code(outcome));
        }
        Command::NormalForm { density } => {
            let f = normal_form(&s.ctx, &s.density(&density)?);
            s.emit_value(&Value::Cyclic(f.into_cyclic()))?;
        }
        Command::Selftest { seed, cases } => {
            let report = selftest(seed, cases);
            if s.json {
                writeln!(s.out, "{}", json!({ "seed": seed, "cases": cases, "failures": report.failures }))?;
            } else {
                writeln!(s.out, "selftest seed {seed}: {cases} cases, {} failures", report.failures.len())?;
                for f in &report.failures {
                    writeln!(s.out, "  {f}")?;
                }
            }
            return Ok(if report.passed() { 0 } else { 1 });
        }
    }
    Ok(0)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, stdout) {
        Ok(code) => code,
        Err(Failure::Data(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DATA
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            74
        }
        Err(Failure::Disagree(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DISAGREE
        }
    }
}
