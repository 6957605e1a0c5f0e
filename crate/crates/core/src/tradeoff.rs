//! Covering tables and the classical-communication versus entanglement
//! trade-off.
//!
//! A resource with smaller Schmidt coefficient `r` prepares any state within
//! infidelity `r²` of a site, so the scheme needs the smallest tabulated
//! point set whose covering radius is at most `r²`, and then spends
//! `log₂ N` bits naming the site plus two bits for the correction step.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::points::{berry_grid, spiral_points};
use crate::tol;
use crate::voronoi::covering_radius;

/// Classical bits spent by the entanglement transformation and disentangling
/// measurement that produce a state in the polar cap.
pub const CORRECTION_BITS: u32 = 2;

/// Largest tabulated point count / grid parameter accepted by [`build_table`].
pub const MAX_TABLE_PARAM: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Spiral,
    BerryGrid,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Spiral => "spiral",
            Generator::BerryGrid => "berry-grid",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "spiral" => Ok(Generator::Spiral),
            "berry-grid" => Ok(Generator::BerryGrid),
            other => Err(format!("unknown generator `{other}`")),
        }
    }
}

/// One row of a covering table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverEntry {
    /// Number of distinct sites.
    pub n: usize,
    pub rho_f: f64,
    /// Number of messages the scheme must be able to send for this set:
    /// `n` for spiral points, `d³` for the box grid.
    pub index_space: usize,
    /// Generator parameter (`n` for spiral points, `d` for the box grid).
    pub param: usize,
}

/// `n ↦ ρ_F(n)` for one generator, sorted by `n` with unique keys.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverTable {
    pub label: String,
    entries: Vec<CoverEntry>,
}

impl CoverTable {
    /// Sorts by `n`, keeping the smallest index space when `n` repeats, and
    /// checks every radius lies in `(0, 1]`.
    pub fn new(label: impl Into<String>, mut entries: Vec<CoverEntry>) -> Result<Self> {
        for e in &entries {
            if !(e.rho_f > 0.0 && e.rho_f <= 1.0) {
                return Err(Error::Domain { name: "rho_f", value: e.rho_f, domain: "(0, 1]" });
            }
        }
        entries.sort_by(|a, b| a.n.cmp(&b.n).then(a.index_space.cmp(&b.index_space)));
        entries.dedup_by_key(|e| e.n);
        Ok(Self { label: label.into(), entries })
    }

    pub fn entries(&self) -> &[CoverEntry] {
        &self.entries
    }

    pub fn get(&self, n: usize) -> Option<&CoverEntry> {
        self.entries.binary_search_by_key(&n, |e| e.n).ok().map(|i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Exact covering radius for every generator parameter in `lo..=hi`.
///
/// For [`Generator::Spiral`] the parameter is the point count; for
/// [`Generator::BerryGrid`] it is the grid size `d` and rows are keyed by the
/// deduplicated point count.
pub fn build_table(generator: Generator, lo: usize, hi: usize) -> Result<CoverTable> {
    if lo < 2 {
        return Err(Error::InvalidCount { got: lo, min: 2 });
    }
    if hi < lo || hi > MAX_TABLE_PARAM {
        return Err(Error::Domain { name: "n_max", value: hi as f64, domain: "[n_min, 4096]" });
    }
    let entries = (lo..=hi).into_par_iter().map(|param| table_entry(generator, param)).collect::<Result<Vec<_>>>()?;
    CoverTable::new(format!("{generator}({lo}..={hi})"), entries)
}

fn table_entry(generator: Generator, param: usize) -> Result<CoverEntry> {
    let (ps, index_space) = match generator {
        Generator::Spiral => (spiral_points(param)?, param),
        Generator::BerryGrid => (berry_grid(param, true)?, param.pow(3)),
    };
    Ok(CoverEntry { n: ps.len(), rho_f: covering_radius(&ps)?.rho_f, index_space, param })
}

/// Box-grid table for `d = 2, 3, …` up to the first `d` whose covering radius
/// is at most `rf`, or `d_max`.
pub fn build_berry_table_until(rf: f64, d_max: usize) -> Result<CoverTable> {
    let mut entries = Vec::new();
    for d in 2..=d_max.max(2) {
        let e = table_entry(Generator::BerryGrid, d)?;
        entries.push(e);
        if e.rho_f <= rf + tol::FIDELITY {
            break;
        }
    }
    CoverTable::new(format!("berry-grid(2..={})", entries.last().map_or(2, |e| e.param)), entries)
}

fn check_rf(rf: f64) -> Result<()> {
    if rf > 0.0 && rf <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { name: "rf", value: rf, domain: "(0, 1]" })
    }
}

/// Smallest tabulated `n` with `ρ_F(n) ≤ rf` (inclusive to 1e-12).
pub fn min_n(table: &CoverTable, rf: f64) -> Result<usize> {
    check_rf(rf)?;
    table.entries.iter().find(|e| e.rho_f <= rf + tol::FIDELITY).map(|e| e.n).ok_or(Error::NoCoverAvailable { rf })
}

/// The covering entry with the fewest messages; for spiral tables this is the
/// entry of [`min_n`].
pub fn cheapest_cover(table: &CoverTable, rf: f64) -> Result<&CoverEntry> {
    check_rf(rf)?;
    table
        .entries
        .iter()
        .filter(|e| e.rho_f <= rf + tol::FIDELITY)
        .min_by_key(|e| (e.index_space, e.n))
        .ok_or(Error::NoCoverAvailable { rf })
}

/// Binary entropy in bits; `0` at the endpoints.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    let q = 1.0 - p;
    let tail = if p < 0.25 { q * (-p).ln_1p() / std::f64::consts::LN_2 } else { q * q.log2() };
    -p * p.log2() - tail
}

/// Entanglement of the resource with `r² = r_squared`, in ebits.
pub fn ebits(r_squared: f64) -> Result<f64> {
    if !(r_squared > 0.0 && r_squared <= 0.5) {
        return Err(Error::Domain { name: "r_squared", value: r_squared, domain: "(0, 0.5]" });
    }
    Ok(binary_entropy(r_squared))
}

/// `log₂(1/rf)`: caps of infidelity radius `rf` each cover a fraction `rf`
/// of the sphere's area, so at least `1/rf` of them are needed.
pub fn area_lower_bound(rf: f64) -> Result<f64> {
    check_rf(rf)?;
    Ok(-rf.log2())
}

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn index_bits(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub r_squared: f64,
    pub ebits: f64,
    /// Distinct sites in the chosen point set.
    pub n: usize,
    /// Messages the scheme distinguishes (equals `n` except for the box grid).
    pub index_space: usize,
    /// Generator parameter of the chosen entry.
    pub param: usize,
    /// `log₂(index_space)`.
    pub cbits_step3: f64,
    /// `cbits_step3 + 2`.
    pub cbits_total: f64,
    /// `⌈log₂(index_space)⌉`, what a message encoder actually sends.
    pub index_bits: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffCurve {
    pub points: Vec<TradeoffPoint>,
    /// Grid values for which no tabulated set covers the sphere.
    pub uncovered: Vec<f64>,
}

/// Evaluates the trade-off at one `r²`.
pub fn tradeoff_point(table: &CoverTable, r_squared: f64) -> Result<TradeoffPoint> {
    let e = ebits(r_squared)?;
    let entry = cheapest_cover(table, r_squared)?;
    let cbits = (entry.index_space as f64).log2();
    Ok(TradeoffPoint {
        r_squared,
        ebits: e,
        n: entry.n,
        index_space: entry.index_space,
        param: entry.param,
        cbits_step3: cbits,
        cbits_total: cbits + f64::from(CORRECTION_BITS),
        index_bits: index_bits(entry.index_space),
    })
}

/// Trade-off over `r2_grid`. Grid values outside `(0, 0.5]` or beyond the
/// table's reach are collected in `uncovered` instead of failing the curve.
pub fn tradeoff_curve(table: &CoverTable, r2_grid: &[f64]) -> TradeoffCurve {
    let mut points = Vec::with_capacity(r2_grid.len());
    let mut uncovered = Vec::new();
    for &r2 in r2_grid {
        match tradeoff_point(table, r2) {
            Ok(p) => points.push(p),
            Err(_) => uncovered.push(r2),
        }
    }
    TradeoffCurve { points, uncovered }
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![max],
        _ => (0..steps)
            .map(|k| if k + 1 == steps { max } else { min + (max - min) * k as f64 / (steps - 1) as f64 })
            .collect(),
    }
}
