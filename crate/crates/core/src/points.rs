//! Point distributions on the Bloch sphere.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bloch::{state_to_bloch, BlochVector, QubitState};
use crate::error::{Error, Result};
use crate::tol;

/// Azimuthal step constant of the spiral construction (distance travelled
/// along a latitude is `SPIRAL_STEP / sqrt(n)`).
pub const SPIRAL_STEP: f64 = 3.6;

/// An ordered, labelled list of sites on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub label: String,
    pub points: Vec<BlochVector>,
}

impl PointSet {
    pub fn new(label: impl Into<String>, points: Vec<BlochVector>) -> Self {
        Self { label: label.into(), points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BlochVector> {
        self.points.iter()
    }

    /// Copy with `point` appended.
    pub fn with_point(&self, point: BlochVector) -> Self {
        let mut points = self.points.clone();
        points.push(point);
        Self { label: format!("{}+1", self.label), points }
    }
}

impl std::ops::Index<usize> for PointSet {
    type Output = BlochVector;

    fn index(&self, i: usize) -> &BlochVector {
        &self.points[i]
    }
}

/// Spiral points from the south pole to the north pole.
///
/// Point `i` (1-based) has height `z_i = -1 + 2(i-1)/(n-1)`; the azimuth
/// advances by `3.6/sqrt(n) / sqrt(1 - z_i²)` modulo 2π between the poles and
/// is pinned to zero at both poles.
pub fn spiral_points(n: usize) -> Result<PointSet> {
    if n < 2 {
        return Err(Error::InvalidCount { got: n, min: 2 });
    }
    let step = SPIRAL_STEP / (n as f64).sqrt();
    let denom = (n - 1) as f64;
    let mut points = Vec::with_capacity(n);
    let mut phi = 0.0f64;
    for i in 1..=n {
        let z = -1.0 + 2.0 * (i - 1) as f64 / denom;
        if i == 1 || i == n {
            points.push(BlochVector::from_height_azimuth(z, 0.0));
            continue;
        }
        phi = (phi + step / (1.0 - z * z).sqrt()).rem_euclid(std::f64::consts::TAU);
        points.push(BlochVector::from_height_azimuth(z, phi));
    }
    Ok(PointSet::new(format!("spiral(n={n})"), points))
}

/// The `d` grid values `(2k - 1)/d - 1`, `k = 1..=d`.
pub fn berry_grid_values(d: usize) -> Vec<f64> {
    (1..=d).map(|k| (2 * k - 1) as f64 / d as f64 - 1.0).collect()
}

/// Box-grid construction: every triple `(a, b, c)` of grid values becomes the
/// state `a|0⟩ + (b + ic)|1⟩`. The all-zero triple (odd `d`) is skipped.
pub fn berry_grid(d: usize, dedup_points: bool) -> Result<PointSet> {
    if d == 0 {
        return Err(Error::InvalidCount { got: d, min: 1 });
    }
    let vals = berry_grid_values(d);
    let mut points = Vec::with_capacity(d * d * d);
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                if a == 0.0 && b == 0.0 && c == 0.0 {
                    continue;
                }
                let s = QubitState::from_amplitudes(Complex64::new(a, 0.0), Complex64::new(b, c))?;
                points.push(state_to_bloch(&s));
            }
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let raw = PointSet::new(format!("berry-grid(d={d})"), points);
    if dedup_points {
        let mut out = dedup(&raw, tol::DEDUP);
        out.label = format!("berry-grid(d={d},dedup)");
        Ok(out)
    } else {
        Ok(raw)
    }
}

/// Greedy merge in input order: a point is dropped iff it lies within angle
/// `tol` of a point already kept.
pub fn dedup(ps: &PointSet, tol: f64) -> PointSet {
    let (kept, _) = dedup_indices(&ps.points, tol);
    PointSet::new(ps.label.clone(), kept.into_iter().map(|i| ps.points[i]).collect())
}

/// Greedy deduplication returning the kept indices (ascending) and, for every
/// input point, the index of the kept point that absorbed it.
pub(crate) fn dedup_indices(points: &[BlochVector], tol: f64) -> (Vec<usize>, Vec<usize>) {
    let chord = if tol >= std::f64::consts::PI { 2.0 } else { 2.0 * (tol / 2.0).sin() };
    let cell = chord.max(1e-12);
    let key = |p: &BlochVector| -> [i64; 3] { p.to_array().map(|c| (c / cell).floor() as i64) };

    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut kept = Vec::new();
    let mut rep = Vec::with_capacity(points.len());
    'points: for (i, p) in points.iter().enumerate() {
        let k = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(bucket) = grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        if let Some(&j) = bucket.iter().find(|&&j| points[j].angle_to(p) <= tol) {
                            rep.push(j);
                            continue 'points;
                        }
                    }
                }
            }
        }
        grid.entry(k).or_default().push(i);
        kept.push(i);
        rep.push(i);
    }
    (kept, rep)
}

/// The five regular solids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solid {
    Tetrahedron,
    Octahedron,
    Cube,
    Icosahedron,
    Dodecahedron,
}

impl Solid {
    pub const ALL: [Solid; 5] =
        [Solid::Tetrahedron, Solid::Octahedron, Solid::Cube, Solid::Icosahedron, Solid::Dodecahedron];

    pub fn name(self) -> &'static str {
        match self {
            Solid::Tetrahedron => "tetrahedron",
            Solid::Octahedron => "octahedron",
            Solid::Cube => "cube",
            Solid::Icosahedron => "icosahedron",
            Solid::Dodecahedron => "dodecahedron",
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            Solid::Tetrahedron => 4,
            Solid::Octahedron => 6,
            Solid::Cube => 8,
            Solid::Icosahedron => 12,
            Solid::Dodecahedron => 20,
        }
    }
}

impl fmt::Display for Solid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Solid::ALL.into_iter().find(|solid| solid.name() == s).ok_or_else(|| format!("unknown solid `{s}`"))
    }
}

/// Vertices of a regular solid inscribed in the unit sphere.
///
/// Orientation: tetrahedron on alternate cube corners starting at
/// `(1,1,1)/√3`; octahedron on `±x̂, ±ŷ, ±ẑ`; cube on `(±1,±1,±1)/√3`;
/// icosahedron on cyclic permutations of `(0, ±1, ±φ)`; dodecahedron on
/// `(±1,±1,±1)` plus cyclic permutations of `(0, ±1/φ, ±φ)`.
pub fn platonic(solid: Solid) -> PointSet {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let signs = [1.0, -1.0];
    let mut raw: Vec<[f64; 3]> = Vec::new();
    let cyclic = |raw: &mut Vec<[f64; 3]>, a: f64, b: f64| {
        for &sa in &signs {
            for &sb in &signs {
                raw.push([0.0, sa * a, sb * b]);
            }
        }
        for &sa in &signs {
            for &sb in &signs {
                raw.push([sa * a, sb * b, 0.0]);
            }
        }
        for &sa in &signs {
            for &sb in &signs {
                raw.push([sb * b, 0.0, sa * a]);
            }
        }
    };
    match solid {
        Solid::Tetrahedron => {
            raw.extend([[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]);
        }
        Solid::Octahedron => {
            raw.extend([
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ]);
        }
        Solid::Cube => cube_corners(&mut raw),
        Solid::Icosahedron => cyclic(&mut raw, 1.0, phi),
        Solid::Dodecahedron => {
            cube_corners(&mut raw);
            cyclic(&mut raw, 1.0 / phi, phi);
        }
    }
    let points = raw.into_iter().map(|v| BlochVector::try_from(v).expect("solid vertices are non-zero")).collect();
    PointSet::new(solid.name(), points)
}

fn cube_corners(raw: &mut Vec<[f64; 3]>) {
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                raw.push([sx, sy, sz]);
            }
        }
    }
}
