use detachlab::census::{lint, list_examples, run_example, RunOptions, Verdict, EXAMPLES};
use detachlab::grammar::{parse_document, parse_field_spec, Overrides};

/// The stated three-generator claim for the thick quadruple line does not hold
/// at general points; everything else in the census passes.
const EXPECTED_FAILURES: &[(&str, usize)] = &[("embedcomp", 3)];

fn options(field: Option<&str>) -> RunOptions {
    let mut o = RunOptions::default();
    if let Some(f) = field {
        o.overrides.field = Some(parse_field_spec(f).unwrap());
    }
    o
}

#[test]
fn every_example_lints_clean() {
    for (name, text) in EXAMPLES {
        let doc = parse_document(text, &Overrides::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(doc.example.as_deref(), Some(*name));
        assert!(lint(&doc).is_empty(), "{name}: {:?}", lint(&doc));
    }
}

#[test]
fn census_passes_in_both_fields_with_the_same_values() {
    for (name, _) in EXAMPLES {
        let q = run_example(name, &options(None)).unwrap();
        let p = run_example(name, &options(Some("FF:32003"))).unwrap();
        let expected = EXPECTED_FAILURES.iter().find(|(n, _)| n == name).map_or(0, |e| e.1);
        assert_eq!(q.failures(), expected, "{}", q.table());
        assert_eq!(p.failures(), expected, "{}", p.table());
        for (a, b) in q.checks.iter().zip(&p.checks) {
            assert_eq!(a.computed, b.computed, "{name}: {}", a.text);
            assert_ne!(a.verdict, Verdict::Error, "{name}: {}", a.text);
        }
    }
}

#[test]
fn failures_are_only_stated_claims() {
    let r = run_example("embedcomp", &RunOptions::default()).unwrap();
    for c in r.checks.iter().filter(|c| c.verdict != Verdict::Pass) {
        assert_eq!(c.source, "stated");
        assert_eq!(c.computed, "2");
    }
}

#[test]
fn listing_has_claims() {
    let list = list_examples();
    assert_eq!(list.len(), EXAMPLES.len());
    assert!(list.iter().all(|(_, c)| !c.is_empty()));
}
