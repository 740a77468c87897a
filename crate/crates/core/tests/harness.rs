use matgraph_core::harness::{
    all_passed, verify_degenerate_range, verify_nondegenerate_props, DegenerateRangeConfig, Mode,
};

#[test]
fn degenerate_range_seed_42() {
    let reports = verify_degenerate_range(&DegenerateRangeConfig::new(42));
    for r in &reports {
        println!("{}", r.render());
    }
    assert!(all_passed(&reports));
    assert_eq!(reports[0].mode, Mode::Sampled { seed: 42, size: 500 });
    let short = DegenerateRangeConfig {
        gf4_samples: 20,
        ..DegenerateRangeConfig::new(42)
    };
    assert!(!verify_degenerate_range(&short)[1].passed());
    assert!(reports[1]
        .notes
        .iter()
        .any(|n| n.starts_with("exploratory GF(4) 2x2 -> GF(16) 2x2")));
}

#[test]
fn nondegenerate_props_pass_for_other_seeds() {
    for seed in [1, 2, 3] {
        assert!(all_passed(&verify_nondegenerate_props(seed)));
    }
}
