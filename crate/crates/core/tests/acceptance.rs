//! One pass/fail line per acceptance criterion.

use std::time::{Duration, Instant};

use matgraph_core::harness::{
    all_passed, render_reports, run_all, verify_additive_classification, verify_colouring_bound,
    verify_degenerate_range, verify_field_homs, verify_metric_and_structure, verify_minus_order,
    verify_nondegenerate_props, verify_semrl_theorem, AdditiveCounts, DegenerateRangeConfig, SuiteConfig,
    VerificationReport, METRIC_REGIMES,
};

const SEED: u64 = 0;
const SEARCH_BUDGET: u64 = 100_000_000;
const GF2_DRAWS: usize = 500;
const GF4_SAMPLES: usize = 100;
const ADDITIVE_FIXTURE: &str = include_str!("fixtures/additive_gf2_2x2.txt");

const LIMIT_METRIC: Duration = Duration::from_secs(10);
const LIMIT_CLIQUES: Duration = Duration::from_secs(30);
const LIMIT_MINUS: Duration = Duration::from_secs(60);
const LIMIT_ADDITIVE: Duration = Duration::from_secs(120);
const LIMIT_SEMRL: Duration = Duration::from_secs(120);
const LIMIT_COLOURING: Duration = Duration::from_secs(300);
const LIMIT_DEGENERATE: Duration = Duration::from_secs(600);
const LIMIT_NONDEGENERATE: Duration = Duration::from_secs(60);
const LIMIT_FIELDS: Duration = Duration::from_secs(1);

struct Line {
    n: usize,
    name: &'static str,
    ok: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn pick<'a>(reports: &'a [VerificationReport], ids: &[&str]) -> Vec<&'a VerificationReport> {
    reports
        .iter()
        .filter(|r| ids.contains(&r.theorem_id.as_str()))
        .collect()
}

fn summary(reports: &[&VerificationReport], elapsed: Duration, limit: Duration) -> (bool, String) {
    let checked: u64 = reports.iter().map(|r| r.checked).sum();
    let violations: u64 = reports.iter().map(|r| r.violations).sum();
    let ok = !reports.is_empty() && violations == 0 && elapsed <= limit;
    (
        ok,
        format!("checked={checked} violations={violations} time={elapsed:.2?} limit={limit:?}"),
    )
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();

    let (metric, t) = timed(|| verify_metric_and_structure(&METRIC_REGIMES));
    let ids = ["metric-identity"];
    let (ok, detail) = summary(&pick(&metric, &ids), t, LIMIT_METRIC);
    let edges_ok = metric[0].notes.iter().any(|n| n == "vertices=16 edges=72");
    lines.push(Line {
        n: 1,
        name: "metric identity",
        ok: ok && edges_ok,
        detail,
    });
    let ids = [
        "edge-clique-law",
        "clique-intersections",
        "three-point-membership",
        "rank-one-support",
    ];
    let (ok, detail) = summary(&pick(&metric, &ids), t, LIMIT_CLIQUES);
    lines.push(Line {
        n: 2,
        name: "clique geometry",
        ok,
        detail,
    });

    let (minus, t) = timed(verify_minus_order);
    let (ok, detail) = summary(&minus.iter().collect::<Vec<_>>(), t, LIMIT_MINUS);
    let universes_ok = minus
        .iter()
        .filter(|r| r.theorem_id == "minus-order-characterisations")
        .map(|r| r.checked)
        .collect::<Vec<_>>()
        == [256, 6561];
    lines.push(Line {
        n: 3,
        name: "minus order",
        ok: ok && universes_ok,
        detail,
    });

    let ((additive, counts), t) = timed(verify_additive_classification);
    let (ok, detail) = summary(&additive.iter().collect::<Vec<_>>(), t, LIMIT_ADDITIVE);
    let expected = AdditiveCounts::parse(ADDITIVE_FIXTURE).expect("fixture parses");
    lines.push(Line {
        n: 4,
        name: "additive classification",
        ok: ok && counts == expected,
        detail: format!("{detail} counts_match_fixture={}", counts == expected),
    });

    let (semrl, t) = timed(verify_semrl_theorem);
    let (ok, detail) = summary(&semrl.iter().collect::<Vec<_>>(), t, LIMIT_SEMRL);
    lines.push(Line {
        n: 5,
        name: "semrl forms",
        ok,
        detail,
    });

    let (bound, t) = timed(|| verify_colouring_bound(SEARCH_BUDGET));
    let (ok, detail) = summary(&bound.iter().collect::<Vec<_>>(), t, LIMIT_COLOURING);
    let unsat = bound[0].notes.iter().any(|n| n.starts_with("outcome=unsat"));
    lines.push(Line {
        n: 6,
        name: "colouring bound",
        ok: ok && unsat,
        detail,
    });

    let cfg = DegenerateRangeConfig {
        gf2_draws: GF2_DRAWS,
        gf4_samples: GF4_SAMPLES,
        ..DegenerateRangeConfig::new(SEED)
    };
    let (deg, t) = timed(|| verify_degenerate_range(&cfg));
    let (ok, detail) = summary(&deg.iter().collect::<Vec<_>>(), t, LIMIT_DEGENERATE);
    let sizes_ok = deg.len() == 2
        && deg[0]
            .notes
            .iter()
            .any(|n| n.starts_with(&format!("sampled={GF2_DRAWS} ")))
        && deg[1]
            .notes
            .iter()
            .any(|n| n.starts_with(&format!("sampled={GF4_SAMPLES} ")));
    lines.push(Line {
        n: 7,
        name: "degenerate range",
        ok: ok && sizes_ok,
        detail,
    });

    let (nondeg, t) = timed(|| verify_nondegenerate_props(SEED));
    let (ok, detail) = summary(&nondeg.iter().collect::<Vec<_>>(), t, LIMIT_NONDEGENERATE);
    lines.push(Line {
        n: 8,
        name: "non-degenerate properties",
        ok,
        detail,
    });

    let (fields, t) = timed(verify_field_homs);
    let (ok, detail) = summary(&fields.iter().collect::<Vec<_>>(), t, LIMIT_FIELDS);
    lines.push(Line {
        n: 9,
        name: "field-hom counts",
        ok,
        detail,
    });

    let cfg = SuiteConfig {
        seed: SEED,
        budget: SEARCH_BUDGET,
    };
    let run_with = |jobs: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().unwrap();
        pool.install(|| render_reports(&run_all(&cfg)))
    };
    let (a, b, c) = (run_with(1), run_with(4), run_with(4));
    let same = a == b && b == c;
    lines.push(Line {
        n: 10,
        name: "determinism",
        ok: same,
        detail: format!("runs=3 jobs=1,4,4 bytes={} identical={same}", a.len()),
    });

    for l in &lines {
        println!(
            "criterion {:>2} {} {}: {}",
            l.n,
            if l.ok { "PASS" } else { "FAIL" },
            l.name,
            l.detail
        );
    }
    let all: Vec<VerificationReport> = [metric, minus, additive, semrl, bound, deg, nondeg, fields].concat();
    if !all_passed(&all) {
        println!("{}", render_reports(&all));
    }
    assert!(lines.iter().all(|l| l.ok), "acceptance criteria failed");
}
