//! Bloch-sphere primitives: unit vectors, canonical qubit states, fidelity,
//! spherical caps and rotations.
//!
//! Convention: `|ψ⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` maps to
//! `(sinθ cosφ, sinθ sinφ, cosθ)`, so `|0⟩` sits at the north pole.

use std::ops::Neg;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// A point on the unit sphere, i.e. a pure qubit state up to global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    /// `|0⟩`.
    pub const NORTH: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };
    /// `|1⟩`.
    pub const SOUTH: BlochVector = BlochVector { x: 0.0, y: 0.0, z: -1.0 };

    /// Normalizes `(x, y, z)` onto the sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm < f64::MIN_POSITIVE {
            return Err(Error::ZeroVector(x, y, z));
        }
        Ok(Self::renormalized(x / norm, y / norm, z / norm))
    }

    /// Builds a vector from polar angle `theta` (from +z) and azimuth `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::renormalized(st * cp, st * sp, ct)
    }

    /// Builds a vector from its height `z` and azimuth, using `sqrt(1 - z²)`
    /// for the radius. `z` is stored as given.
    pub fn from_height_azimuth(z: f64, phi: f64) -> Self {
        let z = z.clamp(-1.0, 1.0);
        let rho = (1.0 - z * z).max(0.0).sqrt();
        let (sp, cp) = phi.sin_cos();
        Self { x: rho * cp, y: rho * sp, z }
    }

    // Leaves bit patterns untouched when already unit to the last ulp.
    fn renormalized(x: f64, y: f64, z: f64) -> Self {
        let n2 = x * x + y * y + z * z;
        if (n2 - 1.0).abs() <= f64::EPSILON {
            Self { x, y, z }
        } else {
            let n = n2.sqrt();
            Self { x: x / n, y: y / n, z: z / n }
        }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.z
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(&self, other: &BlochVector) -> [f64; 3] {
        cross(self.to_array(), other.to_array())
    }

    /// Great-circle angle in `[0, π]`, accurate for nearly coincident and
    /// nearly antipodal pairs.
    pub fn angle_to(&self, other: &BlochVector) -> f64 {
        let c = self.cross(other);
        norm(c).atan2(self.dot(other))
    }
}

impl Neg for BlochVector {
    type Output = BlochVector;

    fn neg(self) -> BlochVector {
        BlochVector { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        BlochVector::new(v[0], v[1], v[2])
    }
}

#[inline]
pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// A normalized pure qubit state in canonical global phase: `psi0` is real
/// and non-negative, and when it vanishes `psi1` is exactly `1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    psi0: f64,
    psi1: Complex64,
}

impl QubitState {
    /// `|0⟩`.
    pub const ZERO: QubitState = QubitState { psi0: 1.0, psi1: Complex64 { re: 0.0, im: 0.0 } };
    /// `|1⟩`.
    pub const ONE: QubitState = QubitState { psi0: 0.0, psi1: Complex64 { re: 1.0, im: 0.0 } };

    /// Normalizes `c0|0⟩ + c1|1⟩` and strips the global phase.
    pub fn from_amplitudes(c0: Complex64, c1: Complex64) -> Result<Self> {
        let n2 = c0.norm_sqr() + c1.norm_sqr();
        let n = n2.sqrt();
        if !n.is_finite() || n < f64::MIN_POSITIVE {
            return Err(Error::ZeroVector(c0.norm(), c1.re, c1.im));
        }
        let m0 = c0.norm();
        if m0 == 0.0 {
            return Ok(Self::ONE);
        }
        // Multiply by conj(c0)/|c0| so the |0⟩ amplitude becomes real positive.
        let phase = c0.conj() / m0;
        Ok(Self { psi0: m0 / n, psi1: c1 * phase / n })
    }

    /// Amplitude of `|0⟩` (real, `≥ 0`).
    #[inline]
    pub fn psi0(&self) -> f64 {
        self.psi0
    }

    /// Amplitude of `|1⟩`.
    #[inline]
    pub fn psi1(&self) -> Complex64 {
        self.psi1
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QubitState) -> Complex64 {
        Complex64::new(self.psi0 * other.psi0, 0.0) + self.psi1.conj() * other.psi1
    }
}

/// Maps a state to its Bloch vector.
pub fn state_to_bloch(s: &QubitState) -> BlochVector {
    let a = s.psi0;
    let b = s.psi1;
    BlochVector::renormalized(2.0 * a * b.re, 2.0 * a * b.im, a * a - b.norm_sqr())
}

/// Inverse of [`state_to_bloch`], returning the canonical representative.
pub fn bloch_to_state(v: &BlochVector) -> QubitState {
    // Half-angle forms avoid acos near the poles.
    let psi0 = ((1.0 + v.z) * 0.5).max(0.0).sqrt();
    if psi0 == 0.0 {
        return QubitState::ONE;
    }
    let sin_half = ((1.0 - v.z) * 0.5).max(0.0).sqrt();
    let rho = v.x.hypot(v.y);
    let psi1 = if rho == 0.0 {
        Complex64::new(sin_half, 0.0)
    } else {
        Complex64::new(sin_half * v.x / rho, sin_half * v.y / rho)
    };
    let n = (psi0 * psi0 + psi1.norm_sqr()).sqrt();
    QubitState { psi0: psi0 / n, psi1: psi1 / n }
}

/// `|⟨ψ_u|ψ_v⟩|² = (1 + u·v) / 2`.
#[inline]
pub fn fidelity(u: &BlochVector, v: &BlochVector) -> f64 {
    ((1.0 + u.dot(v)) * 0.5).clamp(0.0, 1.0)
}

/// `1 - fidelity(u, v)`.
#[inline]
pub fn infidelity(u: &BlochVector, v: &BlochVector) -> f64 {
    ((1.0 - u.dot(v)) * 0.5).clamp(0.0, 1.0)
}

/// Pure entangled resource `α₀|00⟩ + α₁|11⟩` in Schmidt form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtPair {
    alpha0: f64,
    alpha1: f64,
}

impl SchmidtPair {
    pub fn new(alpha0: f64, alpha1: f64) -> Result<Self> {
        if alpha0.is_nan() || alpha0 <= 0.0 {
            return Err(Error::Domain { name: "alpha0", value: alpha0, domain: "(0, 1)" });
        }
        if alpha1.is_nan() || alpha1 <= 0.0 {
            return Err(Error::Domain { name: "alpha1", value: alpha1, domain: "(0, 1)" });
        }
        let s = alpha0 * alpha0 + alpha1 * alpha1;
        if (s - 1.0).abs() > tol::NORM {
            return Err(Error::Domain { name: "alpha0² + alpha1²", value: s, domain: "{1}" });
        }
        Ok(Self { alpha0, alpha1 })
    }

    /// The pair whose smaller coefficient squared is `rf`.
    pub fn from_fidelity_radius(rf: f64) -> Result<Self> {
        if !(rf > 0.0 && rf <= 0.5) {
            return Err(Error::Domain { name: "r_F", value: rf, domain: "(0, 0.5]" });
        }
        Ok(Self { alpha0: (1.0 - rf).sqrt(), alpha1: rf.sqrt() })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    /// Smaller Schmidt coefficient.
    pub fn r(&self) -> f64 {
        self.alpha0.min(self.alpha1)
    }

    /// Fidelity radius of the preparable cap, `r²`.
    pub fn fidelity_radius(&self) -> f64 {
        let r = self.r();
        r * r
    }
}

/// The set of states within infidelity `rf` of `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCap {
    pub center: BlochVector,
    pub rf: f64,
}

impl SphericalCap {
    pub fn new(center: BlochVector, rf: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rf) {
            return Err(Error::Domain { name: "rf", value: rf, domain: "[0, 1]" });
        }
        Ok(Self { center, rf })
    }

    /// The cap `c₀` around `|0⟩` preparable with the given resource.
    pub fn preparable(resource: &SchmidtPair) -> Self {
        Self { center: BlochVector::NORTH, rf: resource.fidelity_radius() }
    }

    pub fn contains(&self, e: &BlochVector) -> bool {
        cap_contains(self, e)
    }
}

/// Inclusive membership test: `fidelity(center, e) ≥ 1 − rf` up to [`tol::FIDELITY`].
pub fn cap_contains(c: &SphericalCap, e: &BlochVector) -> bool {
    fidelity(&c.center, e) >= 1.0 - c.rf - tol::FIDELITY
}

/// A proper rotation of the Bloch sphere (the action of a qubit unitary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochRotation {
    m: [[f64; 3]; 3],
}

impl BlochRotation {
    pub const IDENTITY: BlochRotation = BlochRotation { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] };

    /// Rodrigues rotation by `angle` about the unit `axis`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let n = norm(axis);
        let [kx, ky, kz] = [axis[0] / n, axis[1] / n, axis[2] / n];
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Self {
            m: [
                [c + t * kx * kx, t * kx * ky - s * kz, t * kx * kz + s * ky],
                [t * ky * kx + s * kz, c + t * ky * ky, t * ky * kz - s * kx],
                [t * kz * kx - s * ky, t * kz * ky + s * kx, c + t * kz * kz],
            ],
        }
    }

    /// Row-major matrix.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn inverse(&self) -> Self {
        let m = self.m;
        Self { m: [[m[0][0], m[1][0], m[2][0]], [m[0][1], m[1][1], m[2][1]], [m[0][2], m[1][2], m[2][2]]] }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &BlochRotation) -> Self {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Self { m: out }
    }

    pub fn determinant(&self) -> f64 {
        let m = self.m;
        dot(m[0], cross(m[1], m[2]))
    }

    pub fn apply(&self, v: &BlochVector) -> BlochVector {
        apply_rotation(self, v)
    }

    fn apply_raw(&self, v: [f64; 3]) -> [f64; 3] {
        [dot(self.m[0], v), dot(self.m[1], v), dot(self.m[2], v)]
    }
}

/// The rotation about `from × to` carrying `from` onto `to`. Antipodal pairs
/// rotate by π about the component of x̂ orthogonal to `from` (ŷ if that
/// vanishes).
pub fn rotation_taking(from: &BlochVector, to: &BlochVector) -> BlochRotation {
    let c = from.dot(to);
    let axis = from.cross(to);
    let s = norm(axis);
    if c <= -1.0 + tol::NORM {
        return BlochRotation::from_axis_angle(antipodal_axis(from), std::f64::consts::PI);
    }
    if s < 1e-300 {
        return BlochRotation::IDENTITY;
    }
    BlochRotation::from_axis_angle(axis, s.atan2(c))
}

/// A fixed unit vector perpendicular to `v`.
pub(crate) fn antipodal_axis(v: &BlochVector) -> [f64; 3] {
    let proj = [1.0 - v.x * v.x, -v.x * v.y, -v.x * v.z];
    let n = norm(proj);
    if n > 1e-6 {
        [proj[0] / n, proj[1] / n, proj[2] / n]
    } else {
        [0.0, 1.0, 0.0]
    }
}

pub fn apply_rotation(r: &BlochRotation, v: &BlochVector) -> BlochVector {
    let [x, y, z] = r.apply_raw(v.to_array());
    BlochVector::renormalized(x, y, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn bv(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector::new(x, y, z).unwrap()
    }

    fn close(a: &BlochVector, b: &BlochVector, eps: f64) -> bool {
        (a.x - b.x).abs() <= eps && (a.y - b.y).abs() <= eps && (a.z - b.z).abs() <= eps
    }

    #[test]
    fn state_to_bloch_basis_states() {
        assert_eq!(state_to_bloch(&QubitState::ZERO), BlochVector::NORTH);
        assert_eq!(state_to_bloch(&QubitState::ONE), BlochVector::SOUTH);
        let plus = QubitState::from_amplitudes(Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(FRAC_1_SQRT_2, 0.0))
            .unwrap();
        assert!(close(&state_to_bloch(&plus), &bv(1.0, 0.0, 0.0), 1e-15));
    }

    #[test]
    fn bloch_to_state_examples() {
        assert_eq!(bloch_to_state(&BlochVector::NORTH), QubitState::ZERO);
        assert_eq!(bloch_to_state(&BlochVector::SOUTH), QubitState::ONE);
        let s = bloch_to_state(&bv(0.0, 1.0, 0.0));
        assert!((s.psi0() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(s.psi1().re.abs() < 1e-15);
        assert!((s.psi1().im - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn canonical_phase() {
        let s = QubitState::from_amplitudes(Complex64::new(0.0, -2.0), Complex64::new(0.0, 2.0)).unwrap();
        assert!(s.psi0() > 0.0);
        assert!((s.psi1() - Complex64::new(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        let one = QubitState::from_amplitudes(Complex64::new(0.0, 0.0), Complex64::new(0.0, 3.0)).unwrap();
        assert_eq!(one, QubitState::ONE);
        assert!(QubitState::from_amplitudes(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn fidelity_examples() {
        let u = bv(0.3, -0.2, 0.9);
        assert_eq!(fidelity(&u, &u), 1.0);
        assert_eq!(fidelity(&u, &-u), 0.0);
        assert_eq!(fidelity(&bv(1.0, 0.0, 0.0), &bv(0.0, 0.0, 1.0)), 0.5);
    }

    #[test]
    fn cap_examples() {
        let c = SphericalCap::new(BlochVector::NORTH, 0.5).unwrap();
        assert!(cap_contains(&c, &bv(1.0, 0.0, 0.0)));
        let c = SphericalCap::new(BlochVector::NORTH, 0.25).unwrap();
        assert!(!cap_contains(&c, &BlochVector::SOUTH));
        let full = SphericalCap::new(bv(0.1, 0.7, -0.2), 1.0).unwrap();
        assert!(cap_contains(&full, &bv(-0.1, -0.7, 0.2)));
        assert!(SphericalCap::new(BlochVector::NORTH, 1.5).is_err());
    }

    #[test]
    fn schmidt_pair() {
        let p = SchmidtPair::new(0.8, 0.6).unwrap();
        assert!((p.r() - 0.6).abs() < 1e-15);
        assert!((p.fidelity_radius() - 0.36).abs() < 1e-15);
        assert!(SchmidtPair::new(0.8, 0.5).is_err());
        assert!(SchmidtPair::new(1.0, 0.0).is_err());
        let m = SchmidtPair::from_fidelity_radius(0.5).unwrap();
        assert!((m.r() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(SphericalCap::preparable(&p).center, BlochVector::NORTH);
    }

    #[test]
    fn rotation_examples() {
        let r = rotation_taking(&BlochVector::NORTH, &BlochVector::NORTH);
        assert_eq!(r, BlochRotation::IDENTITY);

        let r = rotation_taking(&BlochVector::NORTH, &BlochVector::SOUTH);
        let expect = BlochRotation::from_axis_angle([1.0, 0.0, 0.0], PI);
        for i in 0..3 {
            for j in 0..3 {
                assert!((r.matrix()[i][j] - expect.matrix()[i][j]).abs() < 1e-15);
            }
        }

        // Rodrigues about ŷ by π/2, evaluated by hand: [[0,0,1],[0,1,0],[-1,0,0]].
        let r = rotation_taking(&BlochVector::NORTH, &bv(1.0, 0.0, 0.0));
        let hand = [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]];
        for (row, want) in r.matrix().iter().zip(hand) {
            for (a, b) in row.iter().zip(want) {
                assert!((a - b).abs() < 1e-15);
            }
        }
        assert!(close(&r.apply(&BlochVector::NORTH), &bv(1.0, 0.0, 0.0), 1e-10));
        let direct = BlochRotation::from_axis_angle([0.0, 1.0, 0.0], FRAC_PI_2);
        assert!(close(&direct.apply(&BlochVector::NORTH), &bv(1.0, 0.0, 0.0), 1e-15));
    }

    #[test]
    fn apply_rotation_examples() {
        let v = bv(0.2, 0.3, -0.5);
        assert_eq!(apply_rotation(&BlochRotation::IDENTITY, &v), v);
        let rx = BlochRotation::from_axis_angle([1.0, 0.0, 0.0], PI);
        assert!(close(&rx.apply(&BlochVector::NORTH), &BlochVector::SOUTH, 1e-15));
        let r = BlochRotation::from_axis_angle([1.0, 2.0, 3.0], 0.7);
        assert!(close(&r.inverse().apply(&r.apply(&v)), &v, 1e-10));
    }

    #[test]
    fn antipodal_axis_degenerate_uses_y() {
        let r = rotation_taking(&bv(1.0, 0.0, 0.0), &bv(-1.0, 0.0, 0.0));
        let expect = BlochRotation::from_axis_angle([0.0, 1.0, 0.0], PI);
        assert_eq!(r, expect);
        assert!(close(&r.apply(&bv(1.0, 0.0, 0.0)), &bv(-1.0, 0.0, 0.0), 1e-15));
    }

    fn unit() -> impl Strategy<Value = BlochVector> {
        (-1.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| BlochVector::from_height_azimuth(z, phi))
    }

    fn unit_norm(v: &BlochVector) -> f64 {
        v.dot(v).sqrt()
    }

    proptest! {
        #[test]
        fn constructed_vectors_are_unit(x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0) {
            prop_assume!(x * x + y * y + z * z > 1e-6);
            let v = bv(x, y, z);
            prop_assert!((unit_norm(&v) - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn fidelity_symmetry_and_complement(u in unit(), v in unit()) {
            prop_assert_eq!(fidelity(&u, &v), fidelity(&v, &u));
            prop_assert!((fidelity(&u, &v) + fidelity(&u, &-v) - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn bloch_state_round_trips(v in unit()) {
            let s = bloch_to_state(&v);
            prop_assert!((s.psi0() * s.psi0() + s.psi1().norm_sqr() - 1.0).abs() <= 1e-12);
            prop_assert!(close(&state_to_bloch(&s), &v, 1e-10));
            let s2 = bloch_to_state(&state_to_bloch(&s));
            prop_assert!((s2.psi0() - s.psi0()).abs() <= 1e-10);
            prop_assert!((s2.psi1() - s.psi1()).norm() <= 1e-10);
        }

        #[test]
        fn fidelity_matches_amplitude_overlap(u in unit(), v in unit()) {
            let su = bloch_to_state(&u);
            let sv = bloch_to_state(&v);
            prop_assert!((su.inner(&sv).norm_sqr() - fidelity(&u, &v)).abs() <= 1e-10);
        }

        #[test]
        fn rotation_taking_round_trip(a in unit(), b in unit()) {
            prop_assume!(a.dot(&b) > -1.0 + 1e-6);
            let ab = rotation_taking(&a, &b);
            prop_assert!(close(&ab.apply(&a), &b, 1e-10));
            prop_assert!((ab.determinant() - 1.0).abs() <= 1e-10);
            let id = rotation_taking(&b, &a).compose(&ab);
            for i in 0..3 {
                for j in 0..3 {
                    let e = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((id.matrix()[i][j] - e).abs() <= 1e-9);
                }
            }
        }

        #[test]
        fn rotations_preserve_fidelity(u in unit(), v in unit(), a in unit(), b in unit()) {
            let r = rotation_taking(&a, &b);
            let (ru, rv) = (r.apply(&u), r.apply(&v));
            prop_assert!((fidelity(&ru, &rv) - fidelity(&u, &v)).abs() <= 1e-10);
            prop_assert!((unit_norm(&ru) - 1.0).abs() <= 1e-12);
        }
    }
}
