//! Stable matching under proximity-induced preferences.
//!
//! * [`matching`]: deferred acceptance, blocking pairs, exhaustive
//!   enumeration and all-stable-partners for finite two-sided markets.
//! * [`hypercube`]: random profiles on `{0,1}^k`, Hamming and weighted
//!   Hamming preferences.
//! * [`line`]: red/blue Poisson points on the real line, stable and queue
//!   matchings, waves and the busy-cycle law.
//! * [`exact`]: exact rational expectation of the greedy line matching cost
//!   over gap orderings.
//! * [`experiments`]: seeded experiment runners, configuration and the
//!   validation suite used by the CLI.

pub mod exact;
pub mod experiments;
pub mod hypercube;
pub mod line;
pub mod matching;
pub mod numeric;
pub mod rng;
pub mod stats;
