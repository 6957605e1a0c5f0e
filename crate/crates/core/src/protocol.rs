//! Remote state preparation with a fixed point set.
//!
//! The sender first steers the receiver's qubit into the polar cap of
//! infidelity radius `ρ_F` around `|0⟩` (two classical bits), then names the
//! site whose rotation `R_i: |0⟩ ↦ site_i` carries the cap state onto the
//! target.

use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{
    bloch_to_state, infidelity, rotation_taking, state_to_bloch, BlochRotation, BlochVector, QubitState,
};
use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::sampling;
use crate::tradeoff::{index_bits, CORRECTION_BITS};
use crate::voronoi::{covering_radius, nearest_site};

/// Slack when checking cap membership of simulated states.
pub const CAP_SLACK: f64 = 1e-9;

/// Classical message of the final step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RspMessage {
    pub site_index: usize,
    /// `⌈log₂ N⌉`.
    pub index_bits: u32,
    pub correction_bits: u32,
}

impl RspMessage {
    pub fn total_bits(&self) -> u32 {
        self.index_bits + self.correction_bits
    }
}

/// The receiver's rotation for site `i`.
pub fn site_rotation(sites: &PointSet, i: usize) -> Result<BlochRotation> {
    if i >= sites.len() {
        return Err(Error::IndexOutOfRange { index: i, len: sites.len() });
    }
    Ok(rotation_taking(&BlochVector::NORTH, &sites[i]))
}

/// Chooses the site for `target` and the state the first two steps must
/// leave in the receiver's lab.
pub fn encode(sites: &PointSet, target: &BlochVector) -> Result<(RspMessage, QubitState)> {
    if sites.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let i = nearest_site(sites, target);
    let r = site_rotation(sites, i)?;
    let cap_state = bloch_to_state(&r.inverse().apply(target));
    let msg = RspMessage { site_index: i, index_bits: index_bits(sites.len()), correction_bits: CORRECTION_BITS };
    Ok((msg, cap_state))
}

/// Receiver side: applies the named rotation to the cap state.
pub fn decode(sites: &PointSet, msg: &RspMessage, cap_state: &QubitState) -> Result<BlochVector> {
    let r = site_rotation(sites, msg.site_index)?;
    Ok(r.apply(&state_to_bloch(cap_state)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub rho_f_used: f64,
    /// Largest infidelity between a target and its chosen site.
    pub max_infidelity_to_site: f64,
    pub mean_infidelity_to_site: f64,
    /// Largest angle between a target and the receiver's reconstruction.
    pub reconstruction_max_error: f64,
    /// Every site infidelity and cap state within `rho_f_used + CAP_SLACK`.
    pub all_within_cap: bool,
    pub index_bits: u32,
    pub correction_bits: u32,
    pub total_bits: u32,
}

#[derive(Default)]
struct Acc {
    max_inf: f64,
    sum_inf: f64,
    max_err: f64,
    max_cap: f64,
}

/// Runs the protocol on `trials` seeded uniform targets.
pub fn simulate(sites: &PointSet, trials: usize, seed: u64) -> Result<SimulationReport> {
    if sites.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if trials == 0 {
        return Err(Error::InvalidCount { got: 0, min: 1 });
    }
    let rho_f = covering_radius(sites)?.rho_f;
    let rotations: Vec<BlochRotation> = (0..sites.len()).map(|i| site_rotation(sites, i)).collect::<Result<_>>()?;

    let chunks: Vec<Acc> = (0..sampling::chunk_count(trials))
        .into_par_iter()
        .map(|chunk| {
            let mut acc = Acc::default();
            for target in sampling::chunk_points(seed, chunk, trials) {
                let i = nearest_site(sites, &target);
                let cap_state = bloch_to_state(&rotations[i].inverse().apply(&target));
                let cap_point = state_to_bloch(&cap_state);
                let received = rotations[i].apply(&cap_point);
                let inf = infidelity(&target, &sites[i]);
                acc.max_inf = acc.max_inf.max(inf);
                acc.sum_inf += inf;
                acc.max_err = acc.max_err.max(received.angle_to(&target));
                acc.max_cap = acc.max_cap.max(infidelity(&BlochVector::NORTH, &cap_point));
            }
            acc
        })
        .collect();

    let mut total = Acc::default();
    for a in &chunks {
        total.max_inf = total.max_inf.max(a.max_inf);
        total.sum_inf += a.sum_inf;
        total.max_err = total.max_err.max(a.max_err);
        total.max_cap = total.max_cap.max(a.max_cap);
    }
    let bits = index_bits(sites.len());
    Ok(SimulationReport {
        n: sites.len(),
        trials,
        seed,
        rho_f_used: rho_f,
        max_infidelity_to_site: total.max_inf,
        mean_infidelity_to_site: total.sum_inf / trials as f64,
        reconstruction_max_error: total.max_err,
        all_within_cap: total.max_inf <= rho_f + CAP_SLACK && total.max_cap <= rho_f + CAP_SLACK,
        index_bits: bits,
        correction_bits: CORRECTION_BITS,
        total_bits: bits + CORRECTION_BITS,
    })
}
