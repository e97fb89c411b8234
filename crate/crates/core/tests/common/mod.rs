#![allow(dead_code)]

use bcnf_core::sampling::{rng_from_seed, sample_in_r, sample_theorem2, SampleRng};
use bcnf_core::Params;
use proptest::prelude::*;

pub fn in_r() -> impl Strategy<Value = Params> {
    any::<u64>().prop_map(|s| sample_in_r(&mut rng_from_seed(s)))
}

pub fn theorem2() -> impl Strategy<Value = Params> {
    any::<u64>().prop_map(|s| sample_theorem2(&mut rng_from_seed(s)))
}

/// Parameters satisfying `cond1`, with no constraint on `phi`.
pub fn cond1() -> impl Strategy<Value = Params> {
    (0.02..1.5f64, 0.02..1.5f64, 0.0..4.0f64, 0.0..4.0f64)
        .prop_filter_map("cond1 boundary", |(dl, dr, a, b)| {
            let p = Params::new(dl + 1.0 + a, dl, -(dr + 1.0) - b, dr);
            p.classify().cond1.then_some(p)
        })
}

/// In-regime parameters together with an independent RNG for per-case draws.
pub fn in_r_with_rng() -> impl Strategy<Value = (Params, SampleRng)> {
    (any::<u64>(), any::<u64>()).prop_map(|(s, t)| (sample_in_r(&mut rng_from_seed(s)), rng_from_seed(t)))
}

pub fn theorem2_with_rng() -> impl Strategy<Value = (Params, SampleRng)> {
    (any::<u64>(), any::<u64>())
        .prop_map(|(s, t)| (sample_theorem2(&mut rng_from_seed(s)), rng_from_seed(t)))
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}
