use planeperc_core::clusters::{tenuous_check, TenuousStatus};
use planeperc_core::exploration::{explore, halting_bound, revealed_edges, HaltReason};
use planeperc_core::lattice::{BondConfig, Region};
use planeperc_core::samplers::{rng_from_seed, Model, Sampler};

#[test]
fn traces_grow_strictly_and_cut_offs_are_sound() {
    let mut rng = rng_from_seed(41);
    let mut reasons = [0usize; 3];
    for (half, height, n, p) in [(20, 12, 2, 0.5), (30, 16, 3, 0.5), (15, 10, 1, 0.45), (25, 12, 2, 0.55)]
    {
        let region = Region::free_box(2 * half + 1, height + 1).unwrap();
        let mut s = Sampler::new(Model::Bernoulli { p }, region).unwrap();
        for _ in 0..400 {
            let c = s.sample(&mut rng);
            let t = explore(&c, n).unwrap();
            assert_eq!(t.halt_index + 1, t.steps.len());
            for (i, step) in t.steps.iter().enumerate() {
                assert_eq!(step.index, i);
                assert!(step.m_minus <= 0 && step.m_plus >= 0);
                assert!(step.column_edges_revealed <= halting_bound(p, n).column_edges);
                if i > 0 {
                    let prev = &t.steps[i - 1];
                    assert!(step.m_plus - step.m_minus > prev.m_plus - prev.m_minus);
                    assert!(step.column_edges_revealed > 0);
                    assert!(step.cluster_size >= prev.cluster_size);
                }
            }
            let status = tenuous_check(&c, n, t.target).unwrap();
            match t.halt_reason {
                HaltReason::CutOff => {
                    reasons[0] += 1;
                    assert_eq!(status, TenuousStatus::NotApplicable);
                }
                HaltReason::InfiniteProxy => {
                    reasons[1] += 1;
                    assert_ne!(status, TenuousStatus::NotApplicable);
                }
                HaltReason::WindowExhausted => reasons[2] += 1,
            }
        }
    }
    assert!(reasons[0] > 100 && reasons[1] > 100, "{reasons:?}");
}

#[test]
fn revealed_sets_are_nested() {
    let region = Region::free_box(21, 9).unwrap();
    let n = 3;
    let base = revealed_edges(&region, n, 0, 0).unwrap();
    let wider = revealed_edges(&region, n, -3, 5).unwrap();
    let count = |m: &[bool]| m.iter().filter(|&&b| b).count();
    for (a, b) in base.iter().zip(&wider) {
        assert!(!a || *b);
    }
    // 8 extra strip columns, each with n horizontals and n verticals
    assert_eq!(count(&wider) - count(&base), 8 * 2 * n);
    assert!(revealed_edges(&region, n, -10, 0).is_err());
}

#[test]
fn sparse_configs_cut_off_at_step_zero() {
    let region = Region::free_box(41, 11).unwrap();
    let c = BondConfig::closed(region);
    for n in 1..10 {
        let t = explore(&c, n).unwrap();
        assert_eq!(t.halt_reason, HaltReason::CutOff);
        assert_eq!(t.steps.len(), 1);
    }
}
