//! One line per acceptance criterion. Every comparison is exact; the only
//! tolerances are the wall-clock budgets below.
//!
//! Run with `cargo test -p mkw-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use mkw_core::verify::{run_suite, SuiteOptions, SuiteReport};

const EXAMPLES_BUDGET: Duration = Duration::from_secs(1);
const HOPF_BUDGET: Duration = Duration::from_secs(120);

/// The one check known to fail: no Hopf isomorphism `(𝔗,∗) → (𝔗,⊙)` restricts
/// to the identity on planted trees, since the commutator of `I_0(•)` with
/// `X` differs between the two products.
const KNOWN_FAILURE: &str = "φ(A∗B) = φ(A)⊙φ(B)";

struct Criterion {
    name: &'static str,
    suites: &'static [(&'static str, usize)],
    budget: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion { name: "worked-example replay", suites: &[("paper-examples", 5)], budget: Some(EXAMPLES_BUDGET) },
    Criterion { name: "MKW Hopf axioms, degree ≤ 5 on {o}, ≤ 4 on {a,b}", suites: &[("hopf-axioms", 5)], budget: Some(HOPF_BUDGET) },
    Criterion { name: "post-Lie axioms and shift identity, degree ≤ 5", suites: &[("post-lie-axioms", 5)], budget: None },
    Criterion { name: "∗/Δ_MKW and ⊲/ρ_⊲ duality, degree ≤ 5", suites: &[("gl-duality", 5)], budget: None },
    Criterion {
        name: "primitives, natural growth, f_decompose round trip",
        suites: &[("primitives", 5), ("natural-growth", 5)],
        budget: None,
    },
    Criterion { name: "φ morphism, bijectivity, embedding, Chen", suites: &[("phi-iso", 5)], budget: None },
    Criterion {
        name: "cointeraction, translation, disjointness",
        suites: &[("cointeraction", 4), ("cotranslation", 4), ("translation", 3), ("disjointness", 4)],
        budget: None,
    },
    Criterion {
        name: "regularity structures, d = 1, norm ≤ 2, reg_degree ≤ 3",
        suites: &[("regstruct-postlie", 3), ("regstruct-phi", 3)],
        budget: None,
    },
];

fn run(c: &Criterion) -> (Vec<SuiteReport>, Duration) {
    let start = Instant::now();
    let reports = c
        .suites
        .iter()
        .map(|&(suite, n)| run_suite(suite, &SuiteOptions { max_degree: Some(n), ..Default::default() }).unwrap())
        .collect();
    (reports, start.elapsed())
}

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    for c in CRITERIA {
        let (reports, elapsed) = run(c);
        let failed: Vec<_> = reports
            .iter()
            .flat_map(|r| r.checks.iter().filter(|e| e.status != "pass").map(move |e| (r.suite.as_str(), e)))
            .collect();
        let cases: usize = reports.iter().flat_map(|r| &r.checks).map(|e| e.cases).sum();
        let in_budget = c.budget.map_or(true, |b| elapsed <= b);
        let ok = failed.is_empty() && in_budget;
        let budget = c.budget.map(|b| format!(" budget {b:?}")).unwrap_or_default();
        println!(
            "{} {} ({cases} cases, {:.2}s{budget})",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            elapsed.as_secs_f64()
        );
        for (suite, e) in &failed {
            println!("    {suite}: {} | {}", e.name, e.witness.as_deref().unwrap_or(""));
        }
        if !in_budget {
            failures.push(format!("{}: over budget", c.name));
        }
        failures.extend(failed.iter().map(|(s, e)| format!("{s}: {}", e.name)));
    }
    assert_eq!(failures, vec![format!("regstruct-phi: {KNOWN_FAILURE}")]);
}
