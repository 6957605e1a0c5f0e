//! Point sets on the Bloch sphere, their spherical Voronoi diagrams and
//! covering radii, and the classical-bit cost of remote qubit state
//! preparation as a function of the shared entanglement.

pub mod bloch;
pub mod error;
mod hull;
pub mod points;
pub mod protocol;
pub mod sampling;
pub mod tol;
pub mod tradeoff;
pub mod voronoi;

pub use bloch::{
    bloch_to_state, fidelity, infidelity, rotation_taking, state_to_bloch, BlochRotation, BlochVector, QubitState,
    SchmidtPair, SphericalCap,
};
pub use error::{Error, Result};
pub use points::{berry_grid, dedup, platonic, spiral_points, PointSet, Solid};
pub use protocol::{decode, encode, simulate, RspMessage, SimulationReport};
pub use tradeoff::{
    area_lower_bound, build_table, ebits, min_n, tradeoff_curve, CoverEntry, CoverTable, Generator, TradeoffCurve,
    TradeoffPoint,
};
pub use voronoi::{
    covering_radius, covering_radius_sampled, is_cover, voronoi, CoverMethod, CoveringResult, VoronoiDiagram,
    VoronoiVertex,
};
