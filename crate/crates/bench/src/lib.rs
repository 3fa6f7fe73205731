//! Shared fixtures for the benchmarks in `benches/`.

use vblaschke::experiment::gen_random_poly;
use vblaschke::Polynomial;

/// Random monic polynomial of degree `n` with roots in the disk of radius 5.
pub fn fixture(n: usize) -> Polynomial {
    gen_random_poly(n, 5.0, 0x00be_4c40 + n as u64).to_polynomial()
}
