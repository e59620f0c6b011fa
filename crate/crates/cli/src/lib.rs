//! Support library for the `sdmm` binary. Holds the CSV conventions so
//! that tests can parse everything the tool emits with the tool's own
//! reader.

pub mod csv;
