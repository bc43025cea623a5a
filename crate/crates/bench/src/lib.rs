//! Fixed inputs shared by the criterion benches in `benches/`.

use turanlab::domain_spec::{bundled, Domain};
use turanlab::estimator::random_poly;
use turanlab::RootPolynomial;

/// Seed used for every benchmark polynomial.
pub const BENCH_SEED: u64 = 0x5eed;

/// A bundled domain by name.
pub fn domain(name: &str) -> Domain {
    bundled(name).unwrap_or_else(|| panic!("no bundled domain {name}"))
}

/// Degree-`n` polynomial with roots drawn uniformly from the domain.
pub fn poly(d: &Domain, n: usize) -> RootPolynomial {
    random_poly(d.boundary(), n, BENCH_SEED)
}
