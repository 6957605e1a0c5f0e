//! Incremental 3D convex hull with conflict lists and exact orientation tests.
//!
//! For points on the unit sphere the hull facets are exactly the spherical
//! Delaunay triangles, and each outward facet normal is a Voronoi vertex.

use std::collections::HashMap;

use robust::{orient3d, Coord3D};

use crate::bloch::{cross, dot, norm};
use crate::error::{Error, Result};

type P3 = [f64; 3];

#[inline]
fn coord(p: P3) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

#[inline]
fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Exact sign: negative iff `d` is strictly on the side of plane `abc` from
/// which `a, b, c` appear counter-clockwise.
#[inline]
fn orient(pts: &[P3], a: usize, b: usize, c: usize, d: usize) -> f64 {
    orient3d(coord(pts[a]), coord(pts[b]), coord(pts[c]), coord(pts[d]))
}

struct Face {
    v: [usize; 3],
    /// `adj[k]` shares the edge `v[k] → v[(k + 1) % 3]`.
    adj: [usize; 3],
    normal: P3,
    outside: Vec<usize>,
    alive: bool,
}

impl Face {
    fn new(pts: &[P3], v: [usize; 3]) -> Self {
        let normal = cross(sub(pts[v[1]], pts[v[0]]), sub(pts[v[2]], pts[v[0]]));
        Self { v, adj: [usize::MAX; 3], normal, outside: Vec::new(), alive: true }
    }

    fn visible_from(&self, pts: &[P3], p: usize) -> bool {
        orient(pts, self.v[0], self.v[1], self.v[2], p) < 0.0
    }

    /// Unnormalized height of `p` above the face plane, used only to rank
    /// candidates.
    fn height(&self, pts: &[P3], p: usize) -> f64 {
        dot(self.normal, sub(pts[p], pts[self.v[0]]))
    }

    fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        (0..3).find(|&k| self.v[k] == a && self.v[(k + 1) % 3] == b)
    }
}

/// Triangulated hull of `pts`, facets oriented counter-clockwise seen from
/// outside. Points must be pairwise distinct.
///
/// Returns [`Error::DegenerateInput`] when the points are coplanar (including
/// fewer than four points).
pub(crate) fn convex_hull(pts: &[P3]) -> Result<Vec<[usize; 3]>> {
    let [i0, i1, i2, i3] = initial_simplex(pts)?;
    let mut faces: Vec<Face> = Vec::new();

    // Orient the seed tetrahedron so the opposite vertex is inside each face.
    let tet = [[i0, i1, i2, i3], [i0, i3, i1, i2], [i1, i3, i2, i0], [i0, i2, i3, i1]];
    for [a, b, c, opp] in tet {
        let v = if orient(pts, a, b, c, opp) > 0.0 { [a, b, c] } else { [a, c, b] };
        faces.push(Face::new(pts, v));
    }
    link_all(&mut faces);

    let seeds = [i0, i1, i2, i3];
    for p in 0..pts.len() {
        if seeds.contains(&p) {
            continue;
        }
        if let Some(f) = faces.iter().position(|f| f.visible_from(pts, p)) {
            faces[f].outside.push(p);
        }
    }

    let mut pending: Vec<usize> = (0..faces.len()).rev().filter(|&f| !faces[f].outside.is_empty()).collect();
    // Per-face visibility tag for the current step, keyed by `epoch`.
    let mut seen: Vec<u32> = Vec::new();
    let mut is_visible: Vec<bool> = Vec::new();
    let mut epoch = 0u32;
    let mut visible: Vec<usize> = Vec::new();
    let mut horizon: Vec<(usize, usize, usize)> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();

    while let Some(f) = pending.pop() {
        if !faces[f].alive || faces[f].outside.is_empty() {
            continue;
        }
        let eye = furthest(&faces[f], pts);

        epoch += 1;
        seen.resize(faces.len(), 0);
        is_visible.resize(faces.len(), false);
        visible.clear();
        horizon.clear();
        seen[f] = epoch;
        is_visible[f] = true;
        stack.push(f);
        while let Some(g) = stack.pop() {
            visible.push(g);
            for k in 0..3 {
                let nb = faces[g].adj[k];
                if seen[nb] != epoch {
                    seen[nb] = epoch;
                    is_visible[nb] = faces[nb].visible_from(pts, eye);
                    if is_visible[nb] {
                        stack.push(nb);
                        continue;
                    }
                }
                if !is_visible[nb] {
                    horizon.push((faces[g].v[k], faces[g].v[(k + 1) % 3], nb));
                }
            }
        }

        let first_new = faces.len();
        let mut by_start: HashMap<usize, usize> = HashMap::with_capacity(horizon.len());
        let mut by_end: HashMap<usize, usize> = HashMap::with_capacity(horizon.len());
        for &(a, b, nb) in &horizon {
            let id = faces.len();
            let mut face = Face::new(pts, [a, b, eye]);
            face.adj[0] = nb;
            let k = faces[nb].edge_index(b, a).expect("horizon neighbour shares the edge");
            faces[nb].adj[k] = id;
            faces.push(face);
            by_start.insert(a, id);
            by_end.insert(b, id);
        }
        for f in faces.iter_mut().skip(first_new) {
            let [a, b, _] = f.v;
            f.adj[1] = by_start[&b];
            f.adj[2] = by_end[&a];
        }

        let mut orphans = Vec::new();
        for &g in &visible {
            faces[g].alive = false;
            orphans.append(&mut faces[g].outside);
        }
        for q in orphans {
            if q == eye {
                continue;
            }
            if let Some(id) = (first_new..faces.len()).find(|&id| faces[id].visible_from(pts, q)) {
                faces[id].outside.push(q);
            }
        }
        for id in (first_new..faces.len()).rev() {
            if !faces[id].outside.is_empty() {
                pending.push(id);
            }
        }
    }

    Ok(faces.into_iter().filter(|f| f.alive).map(|f| f.v).collect())
}

fn furthest(face: &Face, pts: &[P3]) -> usize {
    let mut best = face.outside[0];
    let mut best_h = face.height(pts, best);
    for &p in &face.outside[1..] {
        let h = face.height(pts, p);
        if h > best_h {
            best = p;
            best_h = h;
        }
    }
    best
}

fn link_all(faces: &mut [Face]) {
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    for (id, f) in faces.iter().enumerate() {
        for k in 0..3 {
            edges.insert((f.v[k], f.v[(k + 1) % 3]), id);
        }
    }
    for f in faces.iter_mut() {
        for k in 0..3 {
            f.adj[k] = edges[&(f.v[(k + 1) % 3], f.v[k])];
        }
    }
}

/// Well-spread seed tetrahedron chosen from coordinate extremes; ties go to
/// the lowest index.
fn initial_simplex(pts: &[P3]) -> Result<[usize; 4]> {
    if pts.len() < 4 {
        return Err(Error::DegenerateInput);
    }
    let argmax = |f: &dyn Fn(usize) -> f64| -> usize {
        let mut best = 0;
        let mut best_v = f(0);
        for i in 1..pts.len() {
            let v = f(i);
            if v > best_v {
                best = i;
                best_v = v;
            }
        }
        best
    };
    let i0 = argmax(&|i| -pts[i][0]);
    let i1 = argmax(&|i| norm(sub(pts[i], pts[i0])));
    let e = sub(pts[i1], pts[i0]);
    let i2 = argmax(&|i| norm(cross(e, sub(pts[i], pts[i0]))));
    let n = cross(e, sub(pts[i2], pts[i0]));
    let i3 = argmax(&|i| dot(n, sub(pts[i], pts[i0])).abs());
    if orient(pts, i0, i1, i2, i3) != 0.0 {
        return Ok([i0, i1, i2, i3]);
    }
    // Floating-point ranking can miss a point that is off-plane only at the
    // ulp level; fall back to an exact scan.
    for i in 0..pts.len() {
        if orient(pts, i0, i1, i2, i) != 0.0 {
            return Ok([i0, i1, i2, i]);
        }
    }
    Err(Error::DegenerateInput)
}

/// Closest point to the origin on triangle `abc`.
pub(crate) fn closest_to_origin_on_triangle(a: P3, b: P3, c: P3) -> P3 {
    // Voronoi-region walk over the triangle's features.
    let p = [0.0; 3];
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot(ab, ap);
    let d2 = dot(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = sub(p, b);
    let d3 = dot(ab, bp);
    let d4 = dot(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let t = d1 / (d1 - d3);
        return lerp(a, ab, t);
    }
    let cp = sub(p, c);
    let d5 = dot(ab, cp);
    let d6 = dot(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let t = d2 / (d2 - d6);
        return lerp(a, ac, t);
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return lerp(b, sub(c, b), t);
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    [a[0] + ab[0] * v + ac[0] * w, a[1] + ab[1] * v + ac[1] * w, a[2] + ab[2] * v + ac[2] * w]
}

/// Closest point to the origin on segment `ab`.
pub(crate) fn closest_to_origin_on_segment(a: P3, b: P3) -> P3 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return a;
    }
    let t = (-dot(a, ab) / len2).clamp(0.0, 1.0);
    lerp(a, ab, t)
}

#[inline]
fn lerp(a: P3, d: P3, t: f64) -> P3 {
    [a[0] + d[0] * t, a[1] + d[1] * t, a[2] + d[2] * t]
}
