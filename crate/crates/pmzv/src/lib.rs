//! Exact computation of Deligne-type p-adic multiple zeta values.
//!
//! The value attached to an index (n_1,...,n_d) is obtained as a p-adic
//! limit of explicit partial sums built from binomial multiple harmonic
//! sums, divided powers of the prime-restricted logarithm series, and
//! adjoint values of lower depth; the table driver runs the induction on
//! depth. Everything computes through one of two interchangeable backends:
//! exact rationals (oracle mode) and fixed-precision p-adic numbers with
//! honest valuation and precision tracking (production mode).
//!
//! Module map:
//! - [`arith`]: rationals, p-adic numbers, binomial coefficients, backends
//! - [`words`]: words over {e0, e1}, index encoding, segments, shuffle
//! - [`zseries`]: truncated series and the two coefficient transforms
//! - [`ncseries`]: noncommutative series, Hopf operations, triangle product
//! - [`harmonic`]: multiple harmonic sums and their binomial variant
//! - [`adjoint`]: the value table and adjoint values (two routes)
//! - [`engine`]: partial sums, limit extraction, table driver
//! - [`verify`]: named identity suites shared by tests and the CLI

pub mod adjoint;
pub mod arith;
pub mod engine;
pub mod harmonic;
pub mod ncseries;
pub mod verify;
pub mod words;
pub mod zseries;
