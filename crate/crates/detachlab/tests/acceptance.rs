//! One line per acceptance criterion. Exits non-zero when the set of failing
//! criteria differs from `KNOWN_FAILING`.

use std::process::ExitCode;
use std::time::Instant;

use detachlab::census::{colength_sweep, limit_oracle_sweep, run_example, RunOptions, Sweep};
use detachlab_core::expr::parse_poly;
use detachlab_core::gb::{self, Ideal};
use detachlab_core::graded::{piece_by_groebner, piece_by_linear_algebra};
use detachlab_core::hilbert::hilbert_polynomial;
use detachlab_core::sample::Sampler;
use detachlab_core::{Monomial, MonomialOrder, Polynomial, Ring, RingRef};

/// Criterion 9 asks for three generators at general points of a thick
/// quadruple line; the computation gives two (see the embedcomp example).
const KNOWN_FAILING: &[usize] = &[9];

struct Outcome {
    ok: bool,
    detail: String,
}

fn examples(names: &[&str]) -> Outcome {
    let opts = RunOptions::default();
    let mut bad = Vec::new();
    for name in names {
        match run_example(name, &opts) {
            Ok(r) if r.passed => {}
            Ok(r) => bad.push(format!("{name} ({} of {} checks fail)", r.failures(), r.checks.len())),
            Err(e) => bad.push(format!("{name} ({e})")),
        }
    }
    if bad.is_empty() {
        Outcome { ok: true, detail: format!("examples {}", names.join(", ")) }
    } else {
        Outcome { ok: false, detail: format!("failing: {}", bad.join("; ")) }
    }
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    Outcome { ok: a.ok && b.ok, detail: format!("{}; {}", a.detail, b.detail) }
}

fn linear(d: i64, c: i64) -> String {
    match c {
        0 => format!("{d}*z"),
        c if c > 0 => format!("{d}*z+{c}"),
        c => format!("{d}*z{c}"),
    }
}

fn hilbert_direct() -> Outcome {
    let r = Ring::qq(&["x", "y", "z", "w"]);
    let hp = |gens: &[String]| {
        let i = Ideal::new(&r, gens.iter().map(|g| parse_poly(&r, g).unwrap()).collect());
        hilbert_polynomial(&i, false).unwrap().polynomial.to_string()
    };
    let mut ok = hp(&["x*z-y^2".into(), "x*w-y*z".into(), "y*w-z^2".into()]) == "3*z+1";
    for d in 2..=6i64 {
        let g = (d - 1) * (d - 2) / 2;
        ok &= hp(&["w".into(), format!("x^{d}+y^{d}+z^{d}")]) == linear(d, 1 - g);
    }
    ok &= hp(&["x^2".into(), "y^2".into()]) == "4*z";
    Outcome { ok, detail: "direct: twisted cubic, plane curves d = 2..6, double line".into() }
}

fn random_poly(ring: &RingRef, n: usize, s: &mut Sampler) -> Polynomial {
    let k = ring.field();
    let mut terms = Vec::new();
    for _ in 0..1 + s.below(3) {
        let mut m = Monomial::one();
        let mut left = 3;
        for i in 0..n {
            let e = s.below(left as usize + 1) as u32;
            m.set_exp(i, e);
            left -= e;
        }
        let c = (s.below(6) as i64) - 3;
        terms.push((m, k.from_i64(if c >= 0 { c + 1 } else { c })));
    }
    Polynomial::from_terms(ring, terms)
}

fn random_case(s: &mut Sampler, order: MonomialOrder) -> (RingRef, usize, Vec<Polynomial>) {
    let n = 2 + s.below(3);
    let r = Ring::qq(&["a", "b", "c", "d"][..n]).with_order(order);
    let gens = (0..2 + s.below(2)).map(|_| random_poly(&r, n, s)).filter(|p| !p.is_zero()).collect();
    (r, n, gens)
}

fn properties() -> Outcome {
    let mut s = Sampler::new(20240611, 3);
    let mut fails = 0;
    for case in 0..100 {
        let order = if case % 2 == 0 { MonomialOrder::Grevlex } else { MonomialOrder::Lex };
        let (_, _, mut gens) = random_case(&mut s, order);
        if gens.is_empty() {
            continue;
        }
        let first = gb::reduced_gb(&gens);
        let len = gens.len();
        gens.rotate_left(s.below(len));
        gens.reverse();
        if gb::reduced_gb(&gens) != first || !gb::is_groebner(&first) {
            fails += 1;
        }
    }
    let uniq = fails == 0;
    let mut graded = true;
    for _ in 0..30 {
        let (r, n, gens) = random_case(&mut s, MonomialOrder::Grevlex);
        let homog: Vec<Polynomial> = gens.iter().map(|p| p.component_in(u32::MAX >> (32 - n), p.degree().unwrap())).collect();
        if homog.is_empty() {
            continue;
        }
        let i = Ideal::new(&r, homog.clone());
        for d in 0..=4 {
            graded &= piece_by_linear_algebra(&r, &homog, d, false).1 == piece_by_groebner(&i, d, false).1;
        }
    }
    let count = |v: &[Sweep]| (v.iter().filter(|s| s.outcome == Ok(true)).count(), v.len());
    let col = colength_sweep();
    let (lim, invalid): (Vec<Sweep>, Vec<Sweep>) = limit_oracle_sweep().into_iter().partition(|s| s.outcome.is_ok());
    let (cp, ct) = count(&col);
    let (lp, lt) = count(&lim);
    Outcome {
        ok: uniq && graded && cp == ct && ct > 0 && lp == lt && lt > 0,
        detail: format!(
            "GB uniqueness 100 cases {}; graded GB vs linear algebra {}; colength additivity {cp}/{ct} structures; limit oracle {lp}/{lt} families ({} invalid by design skipped)",
            if uniq { "ok" } else { "FAILED" },
            if graded { "ok" } else { "FAILED" },
            invalid.len()
        ),
    }
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("Hilbert-polynomial ledger", Box::new(|| both(examples(&["hilbert-ledger"]), hilbert_direct()))),
        ("kernel of the single-point structure on (x^2, y^2)", Box::new(|| examples(&["example-two"]))),
        ("closed forms vs kernels for all eight case templates", Box::new(|| examples(&["case-templates"]))),
        (
            "flat-limit suite",
            Box::new(|| examples(&["case-d-limit", "triple-point-limit", "case-e-limit", "pullone-line", "curvilinear-two", "hypersurface-limit"])),
        ),
        ("twisted cubics degenerating to the triple line", Box::new(|| examples(&["triple-line"]))),
        ("blow-up criterion", Box::new(|| examples(&["nonlci-blowup", "onepoint-failure", "two-squares-detachable"]))),
        ("tangent suite", Box::new(|| examples(&["tangent-values", "components-dims"]))),
        ("bowtie endomorphisms", Box::new(|| examples(&["bowtie-end-dim"]))),
        ("negative-example ledgers", Box::new(|| examples(&["codim3-dimension-ledger", "bowtie-ledger", "embedcomp"]))),
        ("property suites", Box::new(properties)),
    ];
    let mut failing = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let n = i + 1;
        if !out.ok {
            failing.push(n);
        }
        let known = if !out.ok && KNOWN_FAILING.contains(&n) { " (known)" } else { "" };
        println!(
            "criterion {n:>2} {}{known}: {name} [{:.1}s] {}",
            if out.ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    if failing == KNOWN_FAILING {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
