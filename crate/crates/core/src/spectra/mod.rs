//! Finite-time Lyapunov runs along tangent orbits, and periodic-orbit
//! enumeration over symbolic itineraries.

mod lyapunov;
mod orbits;
mod words;

pub use lyapunov::{tangent_orbit, LyapunovRun};
pub use orbits::{
    cycle_det, cycle_map, enumerate_periodic_orbits, enumerate_periodic_orbits_with, solve_cycle,
    verify_instability, InstabilityReport, InstabilityViolation, Multipliers, OrbitEnumeration,
    OrbitRecord, SINGULAR_TOL,
};
pub use words::{lyndon_count, lyndon_words, word_string};
