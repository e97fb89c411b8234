//! Regression baselines for the number of periodic orbits per period.

use bcnf_core::spectra::enumerate_periodic_orbits;
use bcnf_core::Params;

fn counts(p: &Params, max_period: usize) -> Vec<usize> {
    let e = enumerate_periodic_orbits(p, max_period).unwrap();
    assert_eq!(e.boundary_duplicates, 0);
    let mut c = vec![0; max_period];
    for r in &e.records {
        c[r.period() - 1] += 1;
    }
    c
}

#[test]
fn orbit_counts_p16() {
    let want = [2, 1, 2, 3, 2, 3, 4, 4, 4, 11, 10, 16, 20, 30, 40, 65, 80, 124, 164, 238];
    assert_eq!(counts(&Params::new(1.6, 0.4, -1.6, 0.4), 20), want);
}

#[test]
fn orbit_counts_p18() {
    let want = [
        2, 1, 2, 3, 4, 5, 10, 14, 20, 32, 58, 85, 146, 239, 412, 686, 1164, 1966, 3344, 5661,
    ];
    assert_eq!(counts(&Params::new(1.8, 0.4, -1.8, 0.4), 20), want);
}
