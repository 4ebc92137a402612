//! Library surface of the `bosonkit` binary: the output formatting is
//! shared with the integration tests, which verify that emitted JSON
//! round-trips byte-for-byte.

pub mod output;
