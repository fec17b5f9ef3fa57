//! Coarse scaling envelopes for the benchmark harness. The bounds are
//! deliberately loose; they catch complexity regressions, not noise.

use pn2sc::bench::{run_bench, Phase};

#[test]
fn reduce_phase_grows_super_linearly_within_bounds() {
    let rows = run_bench(&[1000, 5000], 7, 3);
    let reduce_ms = |size: usize| {
        rows.iter()
            .find(|r| r.size == size && r.phase == Phase::Reduce)
            .unwrap()
            .median
            .as_secs_f64()
    };
    let factor = reduce_ms(5000) / reduce_ms(1000);
    assert!(
        (2.0..=50.0).contains(&factor),
        "reduce scaling factor {factor:.1} for 1000→5000 outside [2, 50]"
    );
    assert!(rows.iter().all(|r| r.final_places == 1));
}
