//! Numerical tolerances shared by every module.

/// Geometric predicate tolerance (equidistance, vertex merging).
pub const GEO: f64 = 1e-9;

/// Allowed deviation from unit norm / unit probability.
pub const NORM: f64 = 1e-12;

/// Slack applied to inclusive fidelity comparisons (cap membership, cover tests).
pub const FIDELITY: f64 = 1e-12;

/// Default angular tolerance (radians) for point deduplication.
pub const DEDUP: f64 = 1e-9;
