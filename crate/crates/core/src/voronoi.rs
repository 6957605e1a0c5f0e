//! Spherical Voronoi diagrams and the fidelity covering radius.
//!
//! The diagram is read off the convex hull of the sites: every hull facet is
//! a spherical Delaunay triangle and its outward unit normal is the Voronoi
//! vertex equidistant from the facet's three sites. The covering radius is
//! the largest infidelity between any state and its nearest site.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::bloch::{antipodal_axis, cross, dot, infidelity, norm, BlochVector};
use crate::error::{Error, Result};
use crate::hull::{closest_to_origin_on_segment, closest_to_origin_on_triangle, convex_hull};
use crate::points::{dedup_indices, PointSet};
use crate::sampling;
use crate::tol;

/// A point equidistant from three or more sites, none of them farther than
/// any other site.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiVertex {
    pub direction: BlochVector,
    /// Sorted site indices.
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiDiagram {
    pub sites: PointSet,
    /// Sorted by `(z, y, x)` of the direction.
    pub vertices: Vec<VoronoiVertex>,
    /// For each site, its vertex indices counter-clockwise seen from outside.
    pub cells: Vec<Vec<usize>>,
    /// Delaunay triangles before cocircular merging.
    pub triangles: Vec<[usize; 3]>,
}

impl VoronoiDiagram {
    /// True when cocircular facets were collapsed into shared vertices.
    pub fn merged(&self) -> bool {
        self.vertices.len() < self.triangles.len()
    }

    /// Direct `O(V·N)` scan of the equidistance and empty-circle invariants.
    /// Returns the first violation found.
    pub fn verify(&self, eps: f64) -> std::result::Result<(), String> {
        for (vi, v) in self.vertices.iter().enumerate() {
            if v.generators.len() < 3 {
                return Err(format!("vertex {vi} has {} generators", v.generators.len()));
            }
            let angles: Vec<f64> = v.generators.iter().map(|&g| v.direction.angle_to(&self.sites[g])).collect();
            let lo = angles.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi - lo > eps {
                return Err(format!("vertex {vi} not equidistant: spread {}", hi - lo));
            }
            for (s, site) in self.sites.iter().enumerate() {
                if v.generators.binary_search(&s).is_err() && v.direction.angle_to(site) < lo - eps {
                    return Err(format!("site {s} strictly closer to vertex {vi} than its generators"));
                }
            }
        }
        Ok(())
    }
}

/// Spherical Voronoi diagram of `ps`.
///
/// Sites closer than [`tol::GEO`] radians are treated as one site; the
/// duplicates share its cell and appear alongside it as generators.
/// Facets whose circumcenters coincide within [`tol::GEO`] are merged.
pub fn voronoi(ps: &PointSet) -> Result<VoronoiDiagram> {
    let (kept, rep) = dedup_indices(&ps.points, tol::GEO);
    let coords: Vec<[f64; 3]> = kept.iter().map(|&i| ps[i].to_array()).collect();
    let faces = convex_hull(&coords)?;

    // Original indices grouped under each kept site.
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); kept.len()];
    let mut slot = vec![usize::MAX; ps.len()];
    for (k, &i) in kept.iter().enumerate() {
        slot[i] = k;
    }
    for (i, &r) in rep.iter().enumerate() {
        members[slot[r]].push(i);
    }

    let triangles: Vec<[usize; 3]> = faces.iter().map(|f| f.map(|k| kept[k])).collect();
    let normals: Vec<BlochVector> = faces
        .iter()
        .map(|f| {
            let [a, b, c] = f.map(|k| coords[k]);
            let n = cross(sub(b, a), sub(c, a));
            BlochVector::new(n[0], n[1], n[2]).expect("hull facets have non-zero area")
        })
        .collect();

    // Merge coincident circumcenters (cocircular sites).
    let (reps, facet_rep) = dedup_indices(&normals, tol::GEO);
    let mut groups: Vec<(BlochVector, Vec<usize>)> = reps.iter().map(|&f| (normals[f], Vec::new())).collect();
    let mut group_of = vec![usize::MAX; normals.len()];
    for (g, &f) in reps.iter().enumerate() {
        group_of[f] = g;
    }
    for (f, face) in faces.iter().enumerate() {
        let g = group_of[facet_rep[f]];
        for &k in face {
            groups[g].1.extend_from_slice(&members[k]);
        }
    }
    for (_, gens) in &mut groups {
        gens.sort_unstable();
        gens.dedup();
    }
    groups.sort_by(|a, b| cmp_zyx(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
    let vertices: Vec<VoronoiVertex> =
        groups.into_iter().map(|(direction, generators)| VoronoiVertex { direction, generators }).collect();

    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ps.len()];
    for (vi, v) in vertices.iter().enumerate() {
        for &g in &v.generators {
            cells[g].push(vi);
        }
    }
    for (s, cell) in cells.iter_mut().enumerate() {
        order_around(&ps[s], cell, &vertices);
    }

    Ok(VoronoiDiagram { sites: ps.clone(), vertices, cells, triangles })
}

fn cmp_zyx(a: &BlochVector, b: &BlochVector) -> Ordering {
    a.z().total_cmp(&b.z()).then_with(|| a.y().total_cmp(&b.y())).then_with(|| a.x().total_cmp(&b.x()))
}

/// Sorts `cell` counter-clockwise around `site` (viewed from outside).
fn order_around(site: &BlochVector, cell: &mut [usize], vertices: &[VoronoiVertex]) {
    let s = site.to_array();
    let e1 = antipodal_axis(site);
    let e2 = cross(s, e1);
    let angle = |v: usize| {
        let d = vertices[v].direction.to_array();
        dot(d, e2).atan2(dot(d, e1))
    };
    cell.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)).then(a.cmp(&b)));
}

#[inline]
fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// How a covering radius was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMethod {
    Exact,
    Sampled,
}

impl CoverMethod {
    pub fn name(self) -> &'static str {
        match self {
            CoverMethod::Exact => "exact",
            CoverMethod::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoveringResult {
    /// Largest infidelity from any (or any sampled) state to its nearest site.
    pub rho_f: f64,
    /// A state attaining `rho_f`.
    pub witness_vertex: BlochVector,
    /// The site nearest to the witness.
    pub witness_site: usize,
    pub method: CoverMethod,
}

/// Exact covering radius of `ps`.
///
/// With `h(x) = max_i x·p_i`, the radius is `(1 − min_{|x|=1} h(x)) / 2`.
/// When the origin lies inside the hull of the sites the minimum is the
/// smallest facet offset, attained at that facet's Voronoi vertex. Otherwise
/// it is `−dist(0, hull)`, attained opposite the hull point nearest the
/// origin; this also covers one, two, three and coplanar sites.
pub fn covering_radius(ps: &PointSet) -> Result<CoveringResult> {
    if ps.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let (kept, _) = dedup_indices(&ps.points, tol::GEO);
    let coords: Vec<[f64; 3]> = kept.iter().map(|&i| ps[i].to_array()).collect();

    let witness = match convex_hull(&coords) {
        Ok(faces) => witness_from_hull(&coords, &faces),
        Err(Error::DegenerateInput) => witness_from_flat(&coords),
        Err(e) => return Err(e),
    };
    let witness_site = nearest_site(ps, &witness);
    Ok(CoveringResult {
        rho_f: infidelity(&witness, &ps[witness_site]),
        witness_vertex: witness,
        witness_site,
        method: CoverMethod::Exact,
    })
}

fn witness_from_hull(coords: &[[f64; 3]], faces: &[[usize; 3]]) -> BlochVector {
    let mut best: Option<(f64, BlochVector)> = None;
    for f in faces {
        let [a, b, c] = f.map(|k| coords[k]);
        let n = cross(sub(b, a), sub(c, a));
        let Ok(n) = BlochVector::new(n[0], n[1], n[2]) else { continue };
        let offset = (dot(n.to_array(), a) + dot(n.to_array(), b) + dot(n.to_array(), c)) / 3.0;
        if best.is_none_or(|(o, _)| offset < o) {
            best = Some((offset, n));
        }
    }
    let (offset, normal) = best.expect("a hull has at least four facets");
    if offset >= 0.0 {
        return normal;
    }
    // Origin strictly outside: look away from the nearest hull point.
    let nearest = faces
        .iter()
        .map(|f| {
            let [a, b, c] = f.map(|k| coords[k]);
            closest_to_origin_on_triangle(a, b, c)
        })
        .min_by(|p, q| norm(*p).total_cmp(&norm(*q)))
        .expect("non-empty hull");
    away_from(nearest).unwrap_or(normal)
}

/// Witness for sites that do not span 3-space (fewer than four, or coplanar).
fn witness_from_flat(coords: &[[f64; 3]]) -> BlochVector {
    let a = coords[0];
    let far = argmax_by(coords, |p| norm(sub(p, a)));
    let b = coords[far];
    if norm(sub(b, a)) == 0.0 {
        return away_from(a).expect("site is a unit vector");
    }
    let e1 = sub(b, a);
    let off = argmax_by(coords, |p| norm(cross(e1, sub(p, a))));
    let normal = cross(e1, sub(coords[off], a));
    let nearest = if norm(normal) == 0.0 {
        closest_to_origin_on_segment(a, b)
    } else {
        closest_on_polygon(coords, a, e1, normal)
    };
    if let Some(w) = away_from(nearest) {
        return w;
    }
    // The origin lies in the hull: any direction normal to the sites' plane
    // sees every site at a right angle.
    match BlochVector::new(normal[0], normal[1], normal[2]) {
        Ok(n) => n,
        Err(_) => {
            let axis = antipodal_axis(&BlochVector::new(a[0], a[1], a[2]).expect("unit site"));
            BlochVector::new(axis[0], axis[1], axis[2]).expect("unit axis")
        }
    }
}

/// Closest point to the origin on the convex polygon spanned by coplanar
/// `coords`, via a fan over their 2D hull.
fn closest_on_polygon(coords: &[[f64; 3]], a: [f64; 3], e1: [f64; 3], normal: [f64; 3]) -> [f64; 3] {
    let u = scale(e1, 1.0 / norm(e1));
    let n = scale(normal, 1.0 / norm(normal));
    let v = cross(n, u);
    let flat: Vec<(f64, f64)> = coords
        .iter()
        .map(|&p| {
            let d = sub(p, a);
            (dot(d, u), dot(d, v))
        })
        .collect();
    let ring = hull_2d(&flat);
    match ring.len() {
        0 | 1 => a,
        2 => closest_to_origin_on_segment(coords[ring[0]], coords[ring[1]]),
        _ => (1..ring.len() - 1)
            .map(|k| closest_to_origin_on_triangle(coords[ring[0]], coords[ring[k]], coords[ring[k + 1]]))
            .min_by(|p, q| norm(*p).total_cmp(&norm(*q)))
            .expect("polygon has a triangle"),
    }
}

/// Andrew's monotone chain; returns indices counter-clockwise.
fn hull_2d(pts: &[(f64, f64)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| pts[i].0.total_cmp(&pts[j].0).then(pts[i].1.total_cmp(&pts[j].1)));
    if idx.len() < 3 {
        return idx;
    }
    let turn = |o: usize, a: usize, b: usize| {
        (pts[a].0 - pts[o].0) * (pts[b].1 - pts[o].1) - (pts[a].1 - pts[o].1) * (pts[b].0 - pts[o].0)
    };
    let mut out: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = out.len();
        let seq: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &i in seq {
            while out.len() >= start + 2 && turn(out[out.len() - 2], out[out.len() - 1], i) <= 0.0 {
                out.pop();
            }
            out.push(i);
        }
        out.pop();
    }
    out
}

fn argmax_by(coords: &[[f64; 3]], f: impl Fn([f64; 3]) -> f64) -> usize {
    let mut best = 0;
    let mut best_v = f(coords[0]);
    for (i, &p) in coords.iter().enumerate().skip(1) {
        let v = f(p);
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

#[inline]
fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn away_from(p: [f64; 3]) -> Option<BlochVector> {
    if norm(p) <= tol::NORM {
        return None;
    }
    BlochVector::new(-p[0], -p[1], -p[2]).ok()
}

/// Index of the site with the highest fidelity to `v`; lowest index on ties.
pub fn nearest_site(ps: &PointSet, v: &BlochVector) -> usize {
    let mut best = 0;
    let mut best_dot = f64::NEG_INFINITY;
    for (i, p) in ps.iter().enumerate() {
        let d = p.dot(v);
        if d > best_dot {
            best = i;
            best_dot = d;
        }
    }
    best
}

/// Monte-Carlo lower bound on the covering radius from `samples` seeded
/// uniform states, each compared against every site.
pub fn covering_radius_sampled(ps: &PointSet, samples: usize, seed: u64) -> Result<CoveringResult> {
    if ps.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if samples == 0 {
        return Err(Error::InvalidCount { got: 0, min: 1 });
    }
    let xs: Vec<f64> = ps.iter().map(|p| p.x()).collect();
    let ys: Vec<f64> = ps.iter().map(|p| p.y()).collect();
    let zs: Vec<f64> = ps.iter().map(|p| p.z()).collect();

    // (max-infidelity sample as the smallest best-dot, global sample index, point)
    let best = (0..sampling::chunk_count(samples))
        .into_par_iter()
        .map(|chunk| {
            let mut worst: Option<(f64, usize, BlochVector)> = None;
            for (k, q) in sampling::chunk_points(seed, chunk, samples).enumerate() {
                let (qx, qy, qz) = (q.x(), q.y(), q.z());
                let mut m = f64::NEG_INFINITY;
                for i in 0..xs.len() {
                    m = m.max(xs[i] * qx + ys[i] * qy + zs[i] * qz);
                }
                if worst.is_none_or(|(w, _, _)| m < w) {
                    worst = Some((m, chunk * sampling::CHUNK + k, q));
                }
            }
            worst
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(x), Some(y)) => Some(if (y.0, y.1) < (x.0, x.1) { y } else { x }),
                (x, None) => x,
                (None, y) => y,
            },
        )
        .expect("at least one sample");

    let witness_vertex = best.2;
    let witness_site = nearest_site(ps, &witness_vertex);
    Ok(CoveringResult {
        rho_f: infidelity(&witness_vertex, &ps[witness_site]),
        witness_vertex,
        witness_site,
        method: CoverMethod::Sampled,
    })
}

/// Whether caps of infidelity radius `rf` around the sites cover the sphere.
pub fn is_cover(ps: &PointSet, rf: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&rf) {
        return Err(Error::Domain { name: "rf", value: rf, domain: "[0, 1]" });
    }
    Ok(covering_radius(ps)?.rho_f <= rf + tol::FIDELITY)
}
