use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use detachlab_core::expr::join_polys;
use detachlab_core::families;
use detachlab_core::gb::{self, Ideal};
use detachlab_core::hilbert;
use detachlab_core::localgeom::{self, PointedIdeal};
use detachlab_core::structures;
use detachlab_core::tangent;
use detachlab_core::Error;
use serde_json::{json, Value as Json};

use crate::census::{self, RunOptions, DEFAULT_SEED};
use crate::eval::{render_ideal, BuiltStructure, Env, Value};
use crate::grammar::{parse_document, parse_field_spec, parse_order_spec, Decl, Document, Expr, Overrides};

#[derive(Parser, Debug)]
#[command(name = "detachlab", version, about = "Embedded points, flat limits and detachment families")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// QQ or FF:p
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// grevlex, lex or "eliminate k"
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Treat this variable as the family parameter.
    #[arg(long, global = true)]
    pub param: Option<String>,
    /// Generic fibers sampled by flatness and verification.
    #[arg(long, global = true, default_value_t = 3)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Statement file (`-` for stdin).
    pub file: PathBuf,
    /// Declaration to act on; defaults to the last one of the right kind.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct At {
    #[command(flatten)]
    pub input: Input,
    /// Point as a tuple, e.g. "(0, 0, 1)", or the name of a `point`.
    #[arg(long)]
    pub point: String,
    /// The point and ideal are projective; use an affine chart.
    #[arg(long)]
    pub projective: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Gröbner basis.
    Gb(Input),
    /// Normal form of a polynomial modulo an ideal.
    Nf {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        poly: String,
    },
    /// Hilbert polynomial, dimension, degree and genus.
    Hilbert(Input),
    /// Syzygies of the generators.
    Syz(Input),
    /// sum, product, intersect, quotient, saturate or eliminate.
    IdealOp {
        op: String,
        file: PathBuf,
        /// Ideal names (eliminate: one ideal, then variables).
        #[arg(required = true)]
        operands: Vec<String>,
    },
    /// Local minimal number of generators at a point.
    Local(At),
    /// Blow-up fiber and the detachability criterion at a point.
    Blowup {
        #[command(flatten)]
        at: At,
        /// Ambient dimension N; defaults to the number of affine coordinates.
        #[arg(long)]
        ambient: Option<usize>,
    },
    /// Kernel ideal, closed form and module class of a structure.
    Structure(Input),
    /// Total ideal of a detachment family.
    Detach(Input),
    /// Flat limit at t = 0, as a reduced Gröbner basis.
    FlatLimit(Input),
    /// Limit, flatness and sampled fibers of a family against a target.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        target: String,
        /// The scheme points are added to (not needed for cilimit families).
        #[arg(long)]
        base: Option<String>,
        /// Length a general fiber adds off the base.
        #[arg(long, default_value_t = 1)]
        points: u64,
    },
    /// Dimension of Hom(I, S/I)_0.
    Tangent(Input),
    /// Endomorphism algebra of a finite module.
    End(Input),
    /// The bundled census.
    Example {
        #[command(subcommand)]
        action: ExampleAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExampleAction {
    List,
    Run {
        name: Option<String>,
        #[arg(long)]
        all: bool,
        /// Run a statement file instead of a bundled example.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

/// Bad input: exit code 2.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::UnknownVariable(_)
            | Error::DuplicateVariable(_)
            | Error::TooManyVariables(_)
            | Error::NonPrimeModulus(_) => Failure::Usage(e.to_string()),
            e => Failure::Compute(e.to_string()),
        }
    }
}

pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn ok(text: String) -> Result<Outcome, Failure> {
    Ok(Outcome { text, passed: true })
}

impl Global {
    fn overrides(&self) -> Result<Overrides, Failure> {
        Ok(Overrides {
            field: self.field.as_deref().map(parse_field_spec).transpose()?,
            order: self.order.as_deref().map(parse_order_spec).transpose()?,
            param: self.param.clone(),
        })
    }

    fn run_options(&self) -> Result<RunOptions, Failure> {
        Ok(RunOptions { overrides: self.overrides()?, seed: self.seed, samples: self.samples })
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf, g: &Global) -> Result<Document, Failure> {
    Ok(parse_document(&read(path)?, &g.overrides()?)?)
}

fn pick(doc: &Document, name: &Option<String>, what: &str, pred: impl Fn(&Decl) -> bool) -> Result<String, Failure> {
    match name {
        Some(n) => doc.find(n).map(|s| s.name.clone()).ok_or_else(|| Failure::Usage(format!("no declaration named `{n}`"))),
        None => doc.last_where(pred).map(str::to_string).ok_or_else(|| Failure::Usage(format!("the file declares no {what}"))),
    }
}

fn is_ideal(d: &Decl) -> bool {
    matches!(d, Decl::Ideal(_) | Decl::IdealExpr(_))
}

fn ideal_of(env: &Env<'_>, input: &Input) -> Result<Ideal, Failure> {
    let n = pick(env.doc, &input.name, "ideal", is_ideal)?;
    Ok(env.ideal(&Expr::Name(n))?)
}

fn render(g: &Global, j: Json, text: String) -> String {
    if g.json {
        serde_json::to_string_pretty(&j).unwrap()
    } else {
        text
    }
}

fn strings(ps: &[detachlab_core::Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn pointed(env: &Env<'_>, at: &At) -> Result<PointedIdeal, Failure> {
    let i = ideal_of(env, &at.input)?;
    let expr = if env.doc.find(&at.point).is_some() {
        Expr::Name(at.point.clone())
    } else {
        Expr::Raw { text: at.point.clone(), line: 0, col: 0 }
    };
    let Value::Point(p) = env.eval(&expr)? else { return Err(Failure::Usage("--point must be a tuple".into())) };
    let zero = vec![env.ring.field().zero(); env.ring.nvars()];
    let c = p.iter().map(|q| q.evaluate(&zero)).collect::<Vec<_>>();
    let i = if i.ring().nvars() == env.geom.nvars() { i } else { Ideal::new(&env.geom, i.gens().to_vec()) };
    Ok(if at.projective { PointedIdeal::from_projective(&i, &c)? } else { PointedIdeal::new(i, c)? })
}

fn structure(env: &Env<'_>, input: &Input) -> Result<std::rc::Rc<BuiltStructure>, Failure> {
    let n = pick(env.doc, &input.name, "structure", |d| matches!(d, Decl::Structure { .. }))?;
    match env.eval(&Expr::Name(n))? {
        Value::Structure(s) => Ok(s),
        v => Err(Failure::Usage(format!("expected a structure, found a {}", v.kind()))),
    }
}

fn family_name(doc: &Document, input: &Input) -> Result<String, Failure> {
    pick(doc, &input.name, "family", |d| matches!(d, Decl::Family { .. }))
}

fn family(env: &Env<'_>, input: &Input) -> Result<Value, Failure> {
    Ok(env.eval(&Expr::Name(family_name(env.doc, input)?))?)
}

fn total_of(v: &Value) -> Result<&families::FamilyOverLine, Failure> {
    match v {
        Value::Family(f) => Ok(f),
        Value::CiFamily(c) => Ok(&c.family),
        v => Err(Failure::Usage(format!("expected a family, found a {}", v.kind()))),
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let g = &cli.global;
    let with_env = |input: &Input, f: &dyn Fn(&Env<'_>) -> Result<Outcome, Failure>| -> Result<Outcome, Failure> {
        let doc = load(&input.file, g)?;
        let env = Env::new(&doc, g.seed, g.samples)?;
        f(&env)
    };
    match &cli.command {
        Command::Gb(input) => with_env(input, &|env| {
            let i = ideal_of(env, input)?;
            let basis = i.groebner();
            ok(render(g, json!({ "basis": strings(basis), "order": format!("{:?}", i.ring().order()) }), join_polys(basis)))
        }),
        Command::Nf { input, poly } => with_env(input, &|env| {
            let i = ideal_of(env, input)?;
            let p = detachlab_core::expr::parse_poly(i.ring(), poly)?;
            let r = i.normal_form(&p);
            ok(render(g, json!({ "normal_form": r.to_string(), "member": r.is_zero() }), r.to_string()))
        }),
        Command::Hilbert(input) => with_env(input, &|env| {
            let i = ideal_of(env, input)?;
            let i = if i.is_homogeneous() { i } else { families::projective_closure(&i)? };
            let h = hilbert::hilbert_polynomial(&i, true)?;
            let j = json!({
                "hilbert_polynomial": h.polynomial.to_string(),
                "dim": h.dim,
                "degree": h.degree.to_string(),
                "genus": h.genus,
                "saturated_input": h.saturated_input,
            });
            ok(render(g, j, h.polynomial.to_string()))
        }),
        Command::Syz(input) => with_env(input, &|env| {
            let i = ideal_of(env, input)?;
            let syz = gb::syzygies(i.gens());
            let rows: Vec<Vec<String>> = syz.rows.iter().map(|r| strings(r.comps())).collect();
            let text = rows.iter().map(|r| format!("({})", r.join(", "))).collect::<Vec<_>>().join("\n");
            ok(render(g, json!({ "generators": strings(i.gens()), "rows": rows, "verified": syz.verify(i.gens()) }), text))
        }),
        Command::IdealOp { op, file, operands } => {
            let doc = load(file, g)?;
            let env = Env::new(&doc, g.seed, g.samples)?;
            if !["sum", "product", "intersect", "quotient", "saturate", "eliminate"].contains(&op.as_str()) {
                return Err(Failure::Usage(format!("unknown ideal operation `{op}`")));
            }
            let args = operands.iter().map(|o| Expr::Name(o.clone())).collect();
            let Value::Ideal(r) = env.eval(&Expr::Call { name: op.clone(), args, line: 0, col: 0 })? else { unreachable!() };
            let basis = r.groebner();
            ok(render(g, json!({ "basis": strings(basis) }), join_polys(basis)))
        }
        Command::Local(at) => with_env(&at.input, &|env| {
            let pi = pointed(env, at)?;
            let r = localgeom::local_min_gens(&pi)?;
            ok(render(g, json!({ "r": r, "chart": pi.chart }), r.to_string()))
        }),
        Command::Blowup { at, ambient } => with_env(&at.input, &|env| {
            let pi = pointed(env, at)?;
            let n = ambient.unwrap_or(pi.ideal.ring().nvars());
            let rep = localgeom::detachability_criterion(&pi, n)?;
            let fiber = rep.fiber.description();
            let j = json!({ "r": rep.r, "fiber": fiber, "detachable": rep.detachable, "chart": rep.chart });
            ok(render(g, j, format!("r = {}\nfiber: {fiber}\ndetachable: {}", rep.r, rep.detachable)))
        }),
        Command::Structure(input) => with_env(input, &|env| {
            let s = structure(env, input)?;
            let class = structures::classify_module(&s.spec.module)?;
            let agree = s.kernel.equals(&s.closed);
            let j = json!({
                "case": s.case.to_string(),
                "classified": class.to_string(),
                "kernel": strings(s.kernel.groebner()),
                "closed_form": strings(s.closed.groebner()),
                "agree": agree,
            });
            let text = format!("case {} (module classified as {class})\nkernel: {}\nclosed form agrees: {agree}", s.case, render_ideal(&s.kernel));
            Ok(Outcome { text: render(g, j, text), passed: agree })
        }),
        Command::Detach(input) => with_env(input, &|env| {
            let v = family(env, input)?;
            let f = total_of(&v)?;
            let total = f.total().groebner();
            ok(render(g, json!({ "kind": f.kind().to_string(), "projective": f.is_projective(), "total": strings(total) }), join_polys(total)))
        }),
        Command::FlatLimit(input) => with_env(input, &|env| {
            let v = family(env, input)?;
            let limit = families::flat_limit(total_of(&v)?);
            ok(render(g, json!({ "limit": strings(limit.groebner()) }), join_polys(limit.groebner())))
        }),
        Command::Verify { input, target, base, points } => with_env(input, &|env| {
            let v = family(env, input)?;
            let t = env.ideal(&Expr::Name(target.clone()))?;
            let mut sampler = env.sampler();
            let (passed, j) = match &v {
                Value::CiFamily(cf) => {
                    let rep = families::verify_ci_limit(cf, &t, g.samples, &mut sampler)?;
                    (rep.passed(), json!({ "limit_ok": rep.limit_ok, "flat": rep.flatness.verdict, "fibers": rep.fibers.iter().map(|c| c.point_off_base && c.matches).collect::<Vec<_>>() }))
                }
                _ => {
                    let b = base.as_ref().ok_or_else(|| Failure::Usage("--base is required".into()))?;
                    let x = env.ideal(&Expr::Name(b.clone()))?;
                    let rep = families::verify_detachment(total_of(&v)?, &t, &x, *points, g.samples, &mut sampler)?;
                    let fibers: Vec<Json> = rep.fibers.iter().map(|c| json!({ "t": c.t.render(x.ring().field()), "colength": c.colength, "off_base": c.off_x_length, "passed": c.passed(*points) })).collect();
                    (rep.passed(), json!({ "limit_ok": rep.limit_ok, "flat": rep.flatness.verdict, "fibers": fibers, "isolated": rep.fibers_isolated() }))
                }
            };
            let mut j = j;
            j["passed"] = json!(passed);
            j["seed"] = json!(g.seed);
            let text = format!("{} (seed {})\n{}", verdict(passed), g.seed, serde_json::to_string(&j).unwrap());
            Ok(Outcome { text: render(g, j, text), passed })
        }),
        Command::Tangent(input) => with_env(input, &|env| {
            let i = ideal_of(env, input)?;
            let h = tangent::hom_dim(&i)?;
            let j = json!({ "hom_dim": h.dimension, "generators": h.generators.len(), "syzygy_rows": h.syzygy_rows, "window_degree": h.window_degree });
            ok(render(g, j, h.dimension.to_string()))
        }),
        Command::End(input) => with_env(input, &|env| {
            let n = pick(env.doc, &input.name, "module", |d| matches!(d, Decl::Module { .. } | Decl::Structure { .. }))?;
            let Value::Int(dim) = env.eval(&Expr::Call { name: "end".into(), args: vec![Expr::Name(n.clone())], line: 0, col: 0 })? else { unreachable!() };
            let Value::Bool(inv) = env.eval(&Expr::Call { name: "invertible".into(), args: vec![Expr::Name(n)], line: 0, col: 0 })? else { unreachable!() };
            ok(render(g, json!({ "end_dim": dim, "invertible_witness": inv, "seed": g.seed }), dim.to_string()))
        }),
        Command::Example { action } => example(g, action),
    }
}

fn example(g: &Global, action: &ExampleAction) -> Result<Outcome, Failure> {
    match action {
        ExampleAction::List => {
            let list = census::list_examples();
            let j: Vec<Json> = list.iter().map(|(n, c)| json!({ "name": n, "claim": c })).collect();
            let text = list.iter().map(|(n, c)| format!("{n:<26} {c}")).collect::<Vec<_>>().join("\n");
            ok(render(g, Json::Array(j), text))
        }
        ExampleAction::Run { name, all, file } => {
            let opts = g.run_options()?;
            let reports = match (name, all, file) {
                (_, _, Some(f)) => vec![census::run_text(&read(f)?, &opts)?],
                (None, true, None) => census::EXAMPLES.iter().map(|(n, _)| census::run_example(n, &opts)).collect::<Result<Vec<_>, _>>()?,
                (Some(n), false, None) => {
                    if census::source(n).is_none() {
                        return Err(Failure::Usage(format!("no example named `{n}`; see `detachlab example list`")));
                    }
                    vec![census::run_example(n, &opts)?]
                }
                _ => return Err(Failure::Usage("give an example name, --all or --file".into())),
            };
            let passed = reports.iter().all(|r| r.passed);
            let text = if g.json {
                if reports.len() == 1 {
                    serde_json::to_string_pretty(&reports[0]).unwrap()
                } else {
                    serde_json::to_string_pretty(&json!({ "seed": g.seed, "passed": passed, "examples": reports })).unwrap()
                }
            } else {
                let mut t: String = reports.iter().map(|r| r.table()).collect::<Vec<_>>().join("\n");
                if reports.len() > 1 {
                    let bad: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
                    t.push_str(&format!("\n{} of {} examples pass{}\n", reports.len() - bad.len(), reports.len(), if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(", ")) }));
                }
                t
            };
            Ok(Outcome { text, passed })
        }
    }
}

/// Parse `args`, run, print; returns the process exit code.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, if code == 0 { e.to_string() } else { String::new() }, if code == 0 { String::new() } else { e.to_string() });
        }
    };
    match execute(&cli) {
        Ok(o) => (if o.passed { 0 } else { 1 }, ensure_newline(o.text), String::new()),
        Err(Failure::Usage(m)) => (2, String::new(), format!("error: {m}\n")),
        Err(Failure::Compute(m)) => (1, String::new(), format!("error: {m}\n")),
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

pub fn main() -> ExitCode {
    let (code, out, err) = run(std::env::args_os());
    print!("{out}");
    eprint!("{err}");
    ExitCode::from(code as u8)
}
