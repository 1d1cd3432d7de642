//! Shared fixtures for the benchmarks.

use arithdiff::arith::Prime;
use arithdiff::LevelParams;

pub fn params(p: u64, m: u32, n: u32) -> LevelParams {
    LevelParams::new(p, m, n).expect("valid bench parameters")
}

pub fn prime(p: u64) -> Prime {
    Prime::new(p).expect("bench primes are prime")
}
