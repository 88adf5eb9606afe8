//! Small fixed-size vector kernel for complex wavevectors.
//!
//! Everything downstream works with 3-vectors over `Complex64`. Two scalar
//! products appear throughout and must not be confused:
//!
//! * [`ComplexVec3::dot_bilinear`] — `Σ uᵢ·vᵢ`, no conjugation. This is the
//!   analytic continuation of the real dot product and is what appears in
//!   exponents like `exp(i q·r)` and in `sinc(q·E)`.
//! * [`ComplexVec3::dot_conjugated`] — `Σ conj(uᵢ)·vᵢ`. Used where a starred
//!   vector is contracted, e.g. `q×* · Σⱼ ...`.
//!
//! Squared norms ([`ComplexVec3::norm_sq`]) are always Hermitian,
//! `Σ |uᵢ|²` — real and non-negative — so denominators like `‖q∥‖²` vanish
//! only when the vector itself is zero. That choice is what confines the
//! removable singularities of the evaluators to the loci `q∥ = 0` and
//! `q = 0`.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// Relative tolerance on `|n̂| = 1` accepted by [`Plane::new`].
pub const UNIT_NORMAL_TOL: f64 = 1e-14;

/// Machine epsilon used by the `q∥` snap rule in [`decompose`].
pub const MACHINE_EPSILON: f64 = 2.22e-16;

/// A 3-vector with real components. Components must be finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// A 3-vector with complex components. Components must be finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexVec3 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl RealVec3 {
    #[must_use]
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        assert!(
            x.is_finite() && y.is_finite() && z.is_finite(),
            "RealVec3 components must be finite, got ({x}, {y}, {z})"
        );
        Self { x, y, z }
    }

    pub const ZERO: Self = Self { x: 0.0, y: 0.0, z: 0.0 };

    #[must_use]
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[must_use]
    pub fn cross(self, other: Self) -> Self {
        Self {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    #[must_use]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[must_use]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `self / |self|`; caller must ensure the norm is nonzero.
    #[must_use]
    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self { x: self.x / n, y: self.y / n, z: self.z / n }
    }
}

impl Add for RealVec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { x: self.x + o.x, y: self.y + o.y, z: self.z + o.z }
    }
}

impl Sub for RealVec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { x: self.x - o.x, y: self.y - o.y, z: self.z - o.z }
    }
}

impl Neg for RealVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl Mul<f64> for RealVec3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { x: self.x * s, y: self.y * s, z: self.z * s }
    }
}

impl ComplexVec3 {
    #[must_use]
    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        assert!(
            x.is_finite() && y.is_finite() && z.is_finite(),
            "ComplexVec3 components must be finite"
        );
        Self { x, y, z }
    }

    pub const ZERO: Self = Self {
        x: Complex64 { re: 0.0, im: 0.0 },
        y: Complex64 { re: 0.0, im: 0.0 },
        z: Complex64 { re: 0.0, im: 0.0 },
    };

    /// Build from separate real and imaginary parts.
    #[must_use]
    pub fn from_parts(re: RealVec3, im: RealVec3) -> Self {
        Self {
            x: Complex64::new(re.x, im.x),
            y: Complex64::new(re.y, im.y),
            z: Complex64::new(re.z, im.z),
        }
    }

    #[must_use]
    pub fn re(self) -> RealVec3 {
        RealVec3 { x: self.x.re, y: self.y.re, z: self.z.re }
    }

    #[must_use]
    pub fn im(self) -> RealVec3 {
        RealVec3 { x: self.x.im, y: self.y.im, z: self.z.im }
    }

    /// Componentwise complex conjugate.
    #[must_use]
    pub fn conj(self) -> Self {
        Self { x: self.x.conj(), y: self.y.conj(), z: self.z.conj() }
    }

    /// Bilinear scalar product `Σ uᵢ·vᵢ` — no conjugation on either factor.
    #[must_use]
    pub fn dot_bilinear(self, other: Self) -> Complex64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Sesquilinear scalar product `Σ conj(uᵢ)·vᵢ` (conjugates `self`).
    #[must_use]
    pub fn dot_conjugated(self, other: Self) -> Complex64 {
        self.x.conj() * other.x + self.y.conj() * other.y + self.z.conj() * other.z
    }

    /// Bilinear dot with a real vector, `Σ uᵢ·vᵢ`.
    #[must_use]
    pub fn dot_real(self, other: RealVec3) -> Complex64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Componentwise (bilinear) cross product.
    #[must_use]
    pub fn cross(self, other: Self) -> Self {
        Self {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    /// Hermitian squared norm `Σ |uᵢ|²`: real, non-negative, zero only for
    /// the zero vector.
    #[must_use]
    pub fn norm_sq(self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    #[must_use]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }
}

impl From<RealVec3> for ComplexVec3 {
    fn from(v: RealVec3) -> Self {
        Self {
            x: Complex64::new(v.x, 0.0),
            y: Complex64::new(v.y, 0.0),
            z: Complex64::new(v.z, 0.0),
        }
    }
}

impl Add for ComplexVec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { x: self.x + o.x, y: self.y + o.y, z: self.z + o.z }
    }
}

impl Sub for ComplexVec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { x: self.x - o.x, y: self.y - o.y, z: self.z - o.z }
    }
}

impl Neg for ComplexVec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }
}

impl Mul<Complex64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        Self { x: self.x * s, y: self.y * s, z: self.z * s }
    }
}

impl Mul<f64> for ComplexVec3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { x: self.x * s, y: self.y * s, z: self.z * s }
    }
}

/// `sin(z)/z`, continued to `1` at `z = 0`.
///
/// The literal quotient is accurate to machine precision for all nonzero
/// arguments of interest; no series switch-over is needed here.
#[must_use]
pub fn sinc(z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        Complex64::new(1.0, 0.0)
    } else {
        z.sin() / z
    }
}

/// An oriented plane: unit normal `n̂` plus signed offset `r⊥` so that points
/// `r` of the plane satisfy `n̂·r = r⊥`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    normal: RealVec3,
    r_perp: f64,
}

impl Plane {
    /// `normal` must be unit length within [`UNIT_NORMAL_TOL`].
    #[must_use]
    pub fn new(normal: RealVec3, r_perp: f64) -> Self {
        let n = normal.norm();
        assert!(
            (n - 1.0).abs() <= UNIT_NORMAL_TOL,
            "plane normal must be unit length (|n| - 1 = {:e})",
            n - 1.0
        );
        assert!(r_perp.is_finite(), "plane offset must be finite");
        Self { normal, r_perp }
    }

    #[must_use]
    pub fn normal(&self) -> RealVec3 {
        self.normal
    }

    #[must_use]
    pub fn r_perp(&self) -> f64 {
        self.r_perp
    }
}

/// Plane-relative split of a wavevector, with cached norms.
///
/// Produced by [`decompose`]; all evaluators consume `q` through this.
#[derive(Clone, Copy, Debug)]
pub struct WavevectorDecomposition {
    /// The original wavevector.
    pub q: ComplexVec3,
    /// Perpendicular part `(q·n̂)·n̂`.
    pub q_perp: ComplexVec3,
    /// In-plane part, one refinement iteration applied, possibly snapped to
    /// exact zero (see [`decompose`]).
    pub q_par: ComplexVec3,
    /// `n̂ × q∥`.
    pub q_cross: ComplexVec3,
    /// The complex scalar `q·n̂`.
    pub q_perp_scalar: Complex64,
    /// Hermitian `‖q‖²`.
    pub norm_sq_q: f64,
    /// Hermitian `‖q∥‖²`.
    pub norm_sq_q_par: f64,
    /// True iff `q∥` was snapped to (or is exactly) zero.
    pub q_par_is_zero: bool,
}

/// Split `q` into parts perpendicular and parallel to `plane`.
///
/// `q⊥ = (q·n̂)n̂` and `q∥ = q − q⊥`, followed by exactly one refinement
/// iteration `q∥ ← q∥ − (q∥·n̂)n̂` that removes the O(ε) normal component
/// left by cancellation in the first subtraction. If after refinement
/// `|q∥| / |q⊥| <` [`MACHINE_EPSILON`], the parallel part is snapped to
/// exact zero: such remainders are pure rounding noise, and keeping them
/// would feed meaningless directions into `1/‖q∥‖²` prefactors.
#[must_use]
pub fn decompose(q: ComplexVec3, plane: &Plane) -> WavevectorDecomposition {
    let n = plane.normal();
    let q_perp_scalar = q.dot_real(n);
    let q_perp = ComplexVec3::from(n) * q_perp_scalar;
    let raw_par = q - q_perp;
    // One refinement pass: subtract the residual normal component.
    let mut q_par = raw_par - ComplexVec3::from(n) * raw_par.dot_real(n);

    let norm_sq_q = q.norm_sq();
    let mut norm_sq_q_par = q_par.norm_sq();
    let norm_sq_q_perp = q_perp.norm_sq();

    // Snap rule: |q∥| < ε·|q⊥| means q∥ is rounding debris.
    let mut q_par_is_zero = norm_sq_q_par == 0.0;
    if !q_par_is_zero && norm_sq_q_par < MACHINE_EPSILON * MACHINE_EPSILON * norm_sq_q_perp {
        q_par = ComplexVec3::ZERO;
        norm_sq_q_par = 0.0;
        q_par_is_zero = true;
    }

    let q_cross = ComplexVec3::from(n).cross(q_par);

    WavevectorDecomposition {
        q,
        q_perp,
        q_par,
        q_cross,
        q_perp_scalar,
        norm_sq_q,
        norm_sq_q_par,
        q_par_is_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bilinear_dot_does_not_conjugate() {
        let u = ComplexVec3::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0));
        // (i, 0, 0)·(i, 0, 0) = -1 bilinear, +1 conjugated.
        assert_eq!(u.dot_bilinear(u), c(-1.0, 0.0));
        assert_eq!(u.dot_conjugated(u), c(1.0, 0.0));
        assert_eq!(u.norm_sq(), 1.0);
    }

    #[test]
    fn cross_matches_real_cross_on_real_input() {
        let a = RealVec3::new(1.0, 2.0, 3.0);
        let b = RealVec3::new(-2.0, 0.5, 4.0);
        let cr = a.cross(b);
        let cc = ComplexVec3::from(a).cross(ComplexVec3::from(b));
        assert_eq!(cc.re(), cr);
        assert_eq!(cc.im(), RealVec3::ZERO);
    }

    #[test]
    fn sinc_at_zero_is_one() {
        assert_eq!(sinc(c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn sinc_of_imaginary_unit_is_sinh_one() {
        // sin(i)/i = sinh(1) = 1.1752011936438014
        let v = sinc(c(0.0, 1.0));
        assert!((v.re - 1.175_201_193_643_801_4).abs() < 1e-15, "{v}");
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn sinc_near_pi_over_two() {
        let v = sinc(c(std::f64::consts::FRAC_PI_2, 0.0));
        let expect = 1.0 / std::f64::consts::FRAC_PI_2;
        assert!((v.re - expect).abs() < 1e-15);
    }

    #[test]
    fn decompose_splits_and_reassembles() {
        let plane = Plane::new(RealVec3::new(0.0, 0.0, 1.0), 0.25);
        let q = ComplexVec3::new(c(1.0, 0.1), c(-2.0, 0.0), c(3.0, -0.4));
        let d = decompose(q, &plane);
        assert_eq!(d.q_perp_scalar, c(3.0, -0.4));
        assert_eq!(d.q_par.z, c(0.0, 0.0));
        let back = d.q_perp + d.q_par;
        let err = (back - q).norm();
        assert!(err <= 1e-14 * q.norm(), "reassembly error {err:e}");
        assert!(!d.q_par_is_zero);
        // q× = n̂ × q∥ stays in-plane and is bilinearly orthogonal to q∥
        // (the Hermitian contraction need not vanish for complex q∥).
        assert!(d.q_cross.z == c(0.0, 0.0));
        assert!(d.q_cross.dot_bilinear(d.q_par).norm() < 1e-14 * d.norm_sq_q_par);
    }

    #[test]
    fn decompose_snaps_tiny_parallel_part() {
        let plane = Plane::new(RealVec3::new(0.0, 0.0, 1.0), 0.0);
        // q almost exactly along the normal: in-plane residual far below
        // ε·|q⊥| must snap to exact zero.
        let q = ComplexVec3::new(c(1e-18, 0.0), c(0.0, 0.0), c(7.0, 0.0));
        let d = decompose(q, &plane);
        assert!(d.q_par_is_zero);
        assert_eq!(d.q_par, ComplexVec3::ZERO);
        assert_eq!(d.norm_sq_q_par, 0.0);
        assert_eq!(d.q_cross, ComplexVec3::ZERO);
    }

    #[test]
    fn decompose_in_plane_q_does_not_snap() {
        let plane = Plane::new(RealVec3::new(0.0, 0.0, 1.0), 0.0);
        // Purely in-plane q with |q⊥| = 0: however tiny, q∥ is meaningful.
        let q = ComplexVec3::new(c(0.6e-17, 0.0), c(0.8e-17, 0.0), c(0.0, 0.0));
        let d = decompose(q, &plane);
        assert!(!d.q_par_is_zero);
        assert!(d.norm_sq_q_par > 0.0);
    }

    #[test]
    fn decompose_zero_q() {
        let plane = Plane::new(RealVec3::new(0.0, 0.0, 1.0), 1.0);
        let d = decompose(ComplexVec3::ZERO, &plane);
        assert!(d.q_par_is_zero);
        assert_eq!(d.norm_sq_q, 0.0);
    }

    #[test]
    fn decompose_tilted_plane_refinement() {
        // A normal with components in all axes; check q∥·n̂ after refinement
        // is at the double-rounding floor.
        let n = RealVec3::new(1.0, 1.0, 1.0).normalized();
        let plane = Plane::new(n, -0.3);
        let q = ComplexVec3::new(c(0.3, -0.2), c(11.0, 0.01), c(-5.0, 2.0));
        let d = decompose(q, &plane);
        let leak = d.q_par.dot_real(n).norm();
        assert!(leak <= 4.0 * MACHINE_EPSILON * d.q_par.norm(), "leak {leak:e}");
    }

    #[test]
    #[should_panic(expected = "unit length")]
    fn plane_rejects_non_unit_normal() {
        let _ = Plane::new(RealVec3::new(0.0, 0.0, 1.1), 0.0);
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn complex_vec_rejects_nan() {
        let _ = ComplexVec3::new(c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0));
    }
}
