//! Cofinite directed graphs, Serre graphs and groupoids at finite scale:
//! closure operators, quotients, filter bases, inverse systems of finite
//! quotients and rigid groupoid congruences.

pub mod carrier;
pub mod cofinite;
pub mod completion;
pub mod fixtures;
pub mod format;
pub mod groupoid;
pub mod oracle;
pub mod partition;
pub mod verify;
