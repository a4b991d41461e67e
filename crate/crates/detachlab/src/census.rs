//! The bundled example census and the runner shared by `detachlab example`
//! and the tests.

use std::cmp::Ordering;

use detachlab_core::families;
use detachlab_core::gb::{self, Ideal};
use detachlab_core::hilbert::colength;
use detachlab_core::{Error, Polynomial};
use serde::Serialize;

use crate::eval::{error_kind, Env, Value};
use crate::grammar::{parse_document, Check, Cmp, Decl, Document, Expr, Overrides, Tag};

macro_rules! census {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../census/", $name, ".dl")))),*]
    };
}

/// Bundled examples, in the order `example list` shows them.
pub const EXAMPLES: &[(&str, &str)] = census![
    "hilbert-ledger",
    "example-two",
    "case-templates",
    "triple-point-limit",
    "case-e-limit",
    "pullone-line",
    "curvilinear-two",
    "hypersurface-limit",
    "mult1-move-point",
    "triple-line",
    "extremal-quartics",
    "nonlci-blowup",
    "onepoint-failure",
    "two-squares-detachable",
    "case-d-limit",
    "case-e-degenerate",
    "components-4z+1",
    "tangent-values",
    "bowtie-end-dim",
    "bowtie-ledger",
    "codim3-dimension-ledger",
    "embedcomp",
    "components-dims",
];

pub fn source(name: &str) -> Option<&'static str> {
    EXAMPLES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub overrides: Overrides,
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { overrides: Overrides::default(), seed: DEFAULT_SEED, samples: 3 }
    }
}

pub const DEFAULT_SEED: u64 = 20240611;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub line: usize,
    pub text: String,
    pub computed: String,
    pub cmp: &'static str,
    pub expected: String,
    pub source: &'static str,
    pub note: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub claim: String,
    pub field: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl ExampleReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.verdict != Verdict::Pass).count()
    }

    /// One line per check, then a summary line.
    pub fn table(&self) -> String {
        let mut out = format!("{} [{}; seed {}]\n  {}\n", self.name, self.field, self.seed, self.claim);
        let width = self.checks.iter().map(|c| c.text.len()).max().unwrap_or(0).min(70);
        for c in &self.checks {
            let mark = match c.verdict {
                Verdict::Pass => "ok  ",
                Verdict::Fail => "FAIL",
                Verdict::Error => "ERR ",
            };
            out.push_str(&format!("  {mark} {:<width$}  got {}  ({})\n", c.text, c.computed, c.source));
            if let Some(e) = &c.error {
                out.push_str(&format!("       {e}\n"));
            } else if c.verdict == Verdict::Fail {
                out.push_str(&format!("       expected {} {}\n", c.cmp, c.expected));
            }
        }
        out.push_str(&format!("  {}: {} of {} checks pass\n", if self.passed { "PASS" } else { "FAIL" }, self.checks.len() - self.failures(), self.checks.len()));
        out
    }
}

/// Problems that make a document unfit for the census.
pub fn lint(doc: &Document) -> Vec<String> {
    let mut out = Vec::new();
    if doc.example.as_deref().unwrap_or("").is_empty() {
        out.push("missing `example` name".to_string());
    }
    if doc.claim.as_deref().unwrap_or("").trim().is_empty() {
        out.push("missing `claim`".to_string());
    }
    if doc.checks.is_empty() {
        out.push("no checks".to_string());
    }
    for c in &doc.checks {
        if let Tag::Stated(s) | Tag::Derived(s) = &c.tag {
            if s.trim().is_empty() {
                out.push(format!("line {}: empty {} note", c.line, c.tag.kind()));
            }
        }
    }
    out
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn literal(e: &Expr) -> Option<String> {
    match e {
        Expr::Raw { text, .. } => Some(text.clone()),
        Expr::Name(n) => Some(n.clone()),
        Expr::Str(s) => Some(s.clone()),
        Expr::Int(n) => Some(n.to_string()),
        _ => None,
    }
}

fn holds(cmp: Cmp, o: Ordering) -> bool {
    match cmp {
        Cmp::Eq => o == Ordering::Equal,
        Cmp::Ne => o != Ordering::Equal,
        Cmp::Lt => o == Ordering::Less,
        Cmp::Le => o != Ordering::Greater,
        Cmp::Gt => o == Ordering::Greater,
        Cmp::Ge => o != Ordering::Less,
    }
}

fn compare(env: &Env<'_>, check: &Check) -> Result<(String, String, bool), Error> {
    let lhs = env.eval(&check.lhs)?;
    let rhs = match (&lhs, literal(&check.rhs)) {
        (Value::Text(_), Some(t)) => Value::Text(t),
        _ => env.eval(&check.rhs)?,
    };
    let (computed, expected) = (lhs.to_string(), rhs.to_string());
    let ok = match (&lhs, &rhs) {
        (Value::Int(a), Value::Int(b)) => holds(check.cmp, a.cmp(b)),
        (Value::Ideal(a), Value::Ideal(b)) if matches!(check.cmp, Cmp::Eq | Cmp::Ne) => {
            let same = if **a.ring() == **b.ring() { a.equals(b) } else { computed == expected };
            same == (check.cmp == Cmp::Eq)
        }
        _ if matches!(check.cmp, Cmp::Eq | Cmp::Ne) => (squash(&computed) == squash(&expected)) == (check.cmp == Cmp::Eq),
        _ => return Err(Error::Inconsistent(format!("cannot order a {} against a {}", lhs.kind(), rhs.kind()))),
    };
    Ok((computed, expected, ok))
}

pub fn run_document(doc: &Document, opts: &RunOptions) -> Result<ExampleReport, Error> {
    let env = Env::new(doc, opts.seed, opts.samples)?;
    let checks: Vec<CheckReport> = doc
        .checks
        .iter()
        .map(|c| {
            let base = |computed: String, expected: String, verdict, error| CheckReport {
                line: c.line,
                text: c.text.clone(),
                computed,
                cmp: c.cmp.symbol(),
                expected,
                source: c.tag.kind(),
                note: c.tag.note().to_string(),
                verdict,
                error,
            };
            match compare(&env, c) {
                Ok((a, b, true)) => base(a, b, Verdict::Pass, None),
                Ok((a, b, false)) => base(a, b, Verdict::Fail, None),
                Err(e) => base(error_kind(&e), literal(&c.rhs).unwrap_or_default(), Verdict::Error, Some(e.to_string())),
            }
        })
        .collect();
    let passed = checks.iter().all(|c| c.verdict == Verdict::Pass);
    Ok(ExampleReport {
        name: doc.example.clone().unwrap_or_default(),
        claim: doc.claim.clone().unwrap_or_default(),
        field: env.ring.field().to_string(),
        seed: opts.seed,
        checks,
        passed,
    })
}

pub fn run_text(text: &str, opts: &RunOptions) -> Result<ExampleReport, Error> {
    run_document(&parse_document(text, &opts.overrides)?, opts)
}

pub fn run_example(name: &str, opts: &RunOptions) -> Result<ExampleReport, Error> {
    let text = source(name).ok_or_else(|| Error::Unsupported(format!("no example named `{name}`")))?;
    run_text(text, opts)
}

/// `(name, claim)` for every bundled example.
pub fn list_examples() -> Vec<(&'static str, String)> {
    EXAMPLES
        .iter()
        .map(|(n, s)| (*n, parse_document(s, &Overrides::default()).ok().and_then(|d| d.claim).unwrap_or_default()))
        .collect()
}

/// What a sweep over declared objects found for one object.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub example: &'static str,
    pub name: String,
    pub outcome: Result<bool, String>,
}

fn sweep(pick: impl Fn(&Decl) -> bool, test: impl Fn(&Env<'_>, Value) -> Result<bool, Error>) -> Vec<Sweep> {
    let mut out = Vec::new();
    for (example, text) in EXAMPLES {
        let Ok(doc) = parse_document(text, &Overrides::default()) else { continue };
        let Ok(env) = Env::new(&doc, DEFAULT_SEED, 3) else { continue };
        for s in doc.statements.iter().filter(|s| pick(&s.decl)) {
            let outcome = env.lookup(&s.name).and_then(|v| test(&env, v)).map_err(|e| error_kind(&e));
            out.push(Sweep { example, name: s.name.clone(), outcome });
        }
    }
    out
}

/// For every structure in the census: the colength over its base is the
/// length of the module, and it splits additively through `I_Y ∩ m^4`.
pub fn colength_sweep() -> Vec<Sweep> {
    sweep(
        |d| matches!(d, Decl::Structure { .. }),
        |_, v| {
            let Value::Structure(s) = v else { return Ok(false) };
            let ring = s.kernel.ring().clone();
            let coords: Vec<Polynomial> = s.support.iter().map(|c| Polynomial::constant(&ring, c.clone())).collect();
            let m = Ideal::of_point(&ring, &coords);
            let m2 = gb::product(&m, &m);
            let m4 = gb::product(&m2, &m2);
            let (x, y) = (&s.base, &s.kernel);
            let (x4, y4) = (gb::intersect(x, &m4), gb::intersect(y, &m4));
            let step = colength(x, y)?;
            Ok(step as usize == s.case.length()
                && colength(x, &y4)? == step + colength(y, &y4)?
                && colength(x, &y4)? == colength(x, &x4)? + colength(&x4, &y4)?)
        },
    )
}

/// For every family in the census that has a limit: the Gröbner limit agrees
/// degreewise with the interpolation oracle.
pub fn limit_oracle_sweep() -> Vec<Sweep> {
    sweep(
        |d| matches!(d, Decl::Family { .. }),
        |_, v| match v {
            Value::Family(f) => Ok(families::limit_oracle_agrees(&f, 3, 2, 3)),
            Value::CiFamily(f) => Ok(families::limit_oracle_agrees(&f.family, 3, 2, 3)),
            _ => Ok(false),
        },
    )
}
