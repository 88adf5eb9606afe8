//! Polygon form factor `f(q, Γ) = ∬_Γ d²r e^{iq·r}` at complex `q`.
//!
//! The analytic expression
//!
//! ```text
//! f = (2 / (i‖q∥‖²)) · q×* · Σⱼ Eⱼ sinc(q·Eⱼ) e^{iq·Rⱼ}
//! ```
//!
//! is exact for all `q` with `q∥ ≠ 0`, but as `q∥ → 0` the edge sum cancels
//! to `O(‖q∥‖²)` while its terms stay `O(1)`, so in floating point the
//! quotient degrades like `1/‖q∥‖` and is pure noise near machine epsilon.
//! [`ff_polygon`] therefore dispatches between the analytic path, two series
//! expansions that are exact rearrangements of it (one in powers of the full
//! `q`, one in powers of `q∥` with the perpendicular phase kept exact), the
//! `q∥ = 0` limit `e^{iq⊥r⊥}·Ar`, and — when an S₂ pairing is supplied — a
//! symmetrized edge sum that stays stable for `q∥ → 0` with no series at
//! all.
//!
//! The series coefficients are evaluated through the factorization
//! `fₙ(q) = Σₘ (q⊥r⊥)^{n−m}/(n−m)! · fₘ(q∥)`, whose in-plane coefficients
//! involve no cancelling `1/‖q∥‖²` quotient; this keeps every coefficient
//! at full precision even when `q∥` is many orders smaller than `q`.

use crate::linalg::{decompose, sinc, ComplexVec3, RealVec3, WavevectorDecomposition};
use crate::mesh::{SymmetryKind, SymmetryPairing, VertexChain, SYMMETRY_TOL};
use num_complex::Complex64;
use serde::Serialize;

/// Relative wavevector-projection threshold below which the Lee–Mittra
/// reference form refuses to divide: `|q·Eⱼ| < 1e-12·|q|·a`.
pub const LEEMITTRA_EDGE_TOL: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Powers of `i` by `n mod 4`.
pub(crate) const I_POW: [Complex64; 4] = [
    Complex64 { re: 1.0, im: 0.0 },
    Complex64 { re: 0.0, im: 1.0 },
    Complex64 { re: -1.0, im: 0.0 },
    Complex64 { re: 0.0, im: -1.0 },
];

/// Evaluation thresholds and series controls.
///
/// The dispatch windows compare the dimensionless products `a·|q|` and
/// `a·|q∥|` (with `a` the figure's enclosing radius) against `c`,
/// `c_par` (polygons) and `c_poly` (polyhedra). The defaults of `1e-3` sit
/// comfortably inside the overlap region where analytic and series paths
/// agree to ~1e-13 relative; [`crate::harness::tune_thresholds`] can search
/// for better ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalConfig {
    /// Polygon full-`q` series window: used when `a·|q| < c`.
    pub c: f64,
    /// Polygon in-plane series window: used when `a·|q∥| < c_par`.
    pub c_par: f64,
    /// Polyhedron series window: used when `a·|q| < c_poly`.
    pub c_poly: f64,
    /// Hard cap on the series order; exceeding it is a [`FfError::NotConverged`].
    pub max_order: usize,
    /// Relative size at which an even-order series term counts as converged.
    pub epsilon: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            c: 1e-3,
            c_par: 1e-3,
            c_poly: 1e-3,
            max_order: 40,
            epsilon: 2.22e-16,
        }
    }
}

impl EvalConfig {
    /// Panic on out-of-domain settings; called by every evaluator.
    pub fn assert_valid(&self) {
        assert!(
            self.c > 0.0 && self.c < 1.0,
            "c must lie in (0, 1), got {}",
            self.c
        );
        assert!(
            self.c_par > 0.0 && self.c_par < 1.0,
            "c_par must lie in (0, 1), got {}",
            self.c_par
        );
        assert!(
            self.c_poly > 0.0 && self.c_poly < 1.0,
            "c_poly must lie in (0, 1), got {}",
            self.c_poly
        );
        assert!(self.max_order >= 4, "max_order must be at least 4, got {}", self.max_order);
        assert!(
            self.epsilon >= 0.0 && self.epsilon < 1.0,
            "epsilon must lie in [0, 1), got {}",
            self.epsilon
        );
    }
}

/// Which evaluation path produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Closed-form edge (or face) sum.
    Analytic,
    /// Series in powers of the full wavevector.
    SeriesFullQ,
    /// Series in powers of the in-plane wavevector, perpendicular phase exact.
    SeriesInPlane,
    /// Exact `q∥ = 0` limit `e^{iq⊥r⊥}·Ar`.
    QParZero,
    /// Exact `q = 0` limit (area or volume).
    QZero,
    /// Inversion-symmetry fast path.
    SymmetryPath,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Analytic => "Analytic",
            Method::SeriesFullQ => "SeriesFullQ",
            Method::SeriesInPlane => "SeriesInPlane",
            Method::QParZero => "QParZero",
            Method::QZero => "QZero",
            Method::SymmetryPath => "SymmetryPath",
        };
        f.write_str(s)
    }
}

/// A form factor value together with its evaluation provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub method: Method,
    /// Highest series order summed (0 for non-series paths).
    pub terms_used: usize,
    /// False only when the series hit `max_order` without meeting the
    /// termination criterion.
    pub converged: bool,
}

/// Evaluation errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FfError {
    /// The analytic polygon prefactor `1/‖q∥‖²` is undefined: `q∥` is zero
    /// (or was snapped to zero as rounding debris).
    #[error("q_par is zero: the analytic polygon path is singular here")]
    QParZero,
    /// The analytic polyhedron prefactor `1/‖q‖²` is undefined at `q = 0`.
    #[error("q is zero: the analytic polyhedron path is singular here")]
    QZero,
    /// The series hit `max_order`; `partial` carries the truncated sum.
    #[error("series did not meet the termination criterion within {} orders", partial.terms_used)]
    NotConverged { partial: EvalResult },
    /// A supplied symmetry pairing does not describe this figure.
    #[error("invalid symmetry pairing: {reason}")]
    InvalidPairing { reason: String },
    /// The Lee–Mittra reference form hit `q·Eⱼ ≈ 0` for some edge.
    #[error("reference form denominator vanishes at edge {edge} (|q·E| = {magnitude:.3e})")]
    SingularDenominator { edge: usize, magnitude: f64 },
}

/// `conj(u) · e` for a real `e` — the `q×* · (...)` contraction.
#[inline]
pub(crate) fn conj_dot_real(u: ComplexVec3, e: RealVec3) -> Complex64 {
    u.x.conj() * e.x + u.y.conj() * e.y + u.z.conj() * e.z
}

/// Closed-form edge sum. Exact for `q∥ ≠ 0`; relative accuracy degrades like
/// `ε/(a·‖q∥‖)` as `q∥ → 0`, which is why the dispatcher owns a series
/// window. Exposed so that tests (and the curious) can watch it fail.
pub fn ff_polygon_analytic(q: ComplexVec3, chain: &VertexChain) -> Result<EvalResult, FfError> {
    let d = decompose(q, chain.plane());
    analytic_with(&d, chain)
}

fn analytic_with(d: &WavevectorDecomposition, chain: &VertexChain) -> Result<EvalResult, FfError> {
    if d.q_par_is_zero {
        return Err(FfError::QParZero);
    }
    let rep = chain.rep();
    let mut sum = ZERO;
    for (e, r) in rep.e.iter().zip(rep.r.iter()) {
        let c_j = conj_dot_real(d.q_cross, *e);
        let alpha = d.q.dot_real(*e);
        let beta = d.q.dot_real(*r);
        sum += c_j * sinc(alpha) * (I * beta).exp();
    }
    // 2/(i x) = −2i/x for the real Hermitian norm x.
    let value = sum * Complex64::new(0.0, -2.0 / d.norm_sq_q_par);
    Ok(EvalResult { value, method: Method::Analytic, terms_used: 0, converged: true })
}

/// In-plane expansion coefficients `fₘ(q∥, Γ)` for `m = 0..=n_max`.
///
/// `f₀` is the area; higher coefficients come from the edge sum
/// `fₘ = (2/‖q∥‖²) q×* · Σⱼ Eⱼ Σ_{2l≤m+1} (q∥·Eⱼ)^{2l}/(2l+1)! ·
/// (q∥·Rⱼ)^{m+1−2l}/(m+1−2l)!`, accumulated incrementally per edge. Unlike
/// the analytic edge sum these have no hidden cancellation: each term of
/// order `m` is itself `O((q∥·b)^m)`, so the coefficients hold full relative
/// precision however small `q∥` is. For snapped `q∥ = 0` the higher
/// coefficients are exactly zero.
pub(crate) fn inplane_coeffs(
    d: &WavevectorDecomposition,
    chain: &VertexChain,
    n_max: usize,
) -> Vec<Complex64> {
    let mut f = vec![ZERO; n_max + 1];
    f[0] = Complex64::new(chain.area(), 0.0);
    if d.q_par_is_zero || n_max == 0 {
        return f;
    }
    let rep = chain.rep();
    let pref = 2.0 / d.norm_sq_q_par;
    // Power tables per edge: a_pow[l] = α^{2l}/(2l+1)!, b_pow[p] = β^p/p!.
    let nu_max = n_max + 1;
    let mut b_pow = vec![ZERO; nu_max + 1];
    let mut a_pow = vec![ZERO; nu_max / 2 + 1];
    for (e, r) in rep.e.iter().zip(rep.r.iter()) {
        let c_j = conj_dot_real(d.q_cross, *e);
        let alpha = d.q_par.dot_real(*e);
        let beta = d.q_par.dot_real(*r);
        let alpha_sq = alpha * alpha;
        b_pow[0] = ONE;
        for p in 1..=nu_max {
            b_pow[p] = b_pow[p - 1] * beta / p as f64;
        }
        a_pow[0] = ONE;
        for l in 1..=nu_max / 2 {
            a_pow[l] = a_pow[l - 1] * alpha_sq / ((2 * l) as f64 * (2 * l + 1) as f64);
        }
        for (m, f_m) in f.iter_mut().enumerate().take(n_max + 1).skip(1) {
            let nu = m + 1;
            let mut t = ZERO;
            for l in 0..=nu / 2 {
                t += a_pow[l] * b_pow[nu - 2 * l];
            }
            *f_m += c_j * t * pref;
        }
    }
    f
}

/// `s^p / p!` table for the perpendicular-phase folding.
pub(crate) fn phase_pows(s: Complex64, n_max: usize) -> Vec<Complex64> {
    let mut pows = vec![ZERO; n_max + 1];
    pows[0] = ONE;
    for p in 1..=n_max {
        pows[p] = pows[p - 1] * s / p as f64;
    }
    pows
}

/// Fold the perpendicular phase into an in-plane coefficient:
/// `fₙ(q) = Σ_{m=0}^{n} s^{n−m}/(n−m)! · fₘ(q∥)` with `s = (q·n̂)·r⊥`.
#[inline]
pub(crate) fn fold(n: usize, inplane: &[Complex64], s_pows: &[Complex64]) -> Complex64 {
    let mut acc = ZERO;
    for m in 0..=n {
        acc += s_pows[n - m] * inplane[m];
    }
    acc
}

/// Sum `Σₙ term(n)` with the even-order termination rule: stop once a term
/// of even order `n ≥ 2` is below `epsilon·|partial sum|`. Odd-order terms
/// never terminate the sum — they can vanish identically (e.g. every odd
/// coefficient of a centered figure) without implying convergence.
pub(crate) fn sum_series<F: FnMut(usize) -> Complex64>(
    mut term_at: F,
    max_order: usize,
    epsilon: f64,
) -> (Complex64, usize, bool) {
    let mut sum = ZERO;
    for n in 0..=max_order {
        let term = term_at(n);
        sum += term;
        if n >= 2 && n % 2 == 0 && term.norm() < epsilon * sum.norm() {
            return (sum, n, true);
        }
    }
    (sum, max_order, false)
}

/// Series expansion coefficient `fₙ(q, Γ)` of the polygon form factor,
/// so that `f = Σₙ iⁿ fₙ`.
///
/// `n = 0` is served as `e^{iq⊥r⊥}·Ar(Γ)` (exactly `Ar(Γ)` for in-plane
/// `q`); higher orders require `q∥ ≠ 0` and error with
/// [`FfError::QParZero`] otherwise.
pub fn coeff_fn(n: usize, q: ComplexVec3, chain: &VertexChain) -> Result<Complex64, FfError> {
    let d = decompose(q, chain.plane());
    let s = d.q_perp_scalar * chain.plane().r_perp();
    if n == 0 {
        return Ok((I * s).exp() * chain.area());
    }
    if d.q_par_is_zero {
        return Err(FfError::QParZero);
    }
    let inplane = inplane_coeffs(&d, chain, n);
    let s_pows = phase_pows(s, n);
    Ok(fold(n, &inplane, &s_pows))
}

/// Small-`q` series `f = Σₙ iⁿ fₙ(q, Γ)` in powers of the full wavevector.
///
/// Exact rearrangement of the analytic result; the perpendicular phase
/// content is folded into the coefficients, so `f₀ = Ar(Γ)` and the sum
/// reproduces `e^{iq⊥r⊥}` order by order. Converges fast for `a·|q| ≲ 0.1`;
/// the dispatcher only enters here for `a·|q| < c`.
pub fn ff_polygon_series_full_q(
    q: ComplexVec3,
    chain: &VertexChain,
    cfg: &EvalConfig,
) -> Result<EvalResult, FfError> {
    cfg.assert_valid();
    let d = decompose(q, chain.plane());
    series_full_q_with(&d, chain, cfg)
}

fn series_full_q_with(
    d: &WavevectorDecomposition,
    chain: &VertexChain,
    cfg: &EvalConfig,
) -> Result<EvalResult, FfError> {
    if d.norm_sq_q == 0.0 {
        return Ok(EvalResult {
            value: Complex64::new(chain.area(), 0.0),
            method: Method::SeriesFullQ,
            terms_used: 0,
            converged: true,
        });
    }
    let s = d.q_perp_scalar * chain.plane().r_perp();
    let inplane = inplane_coeffs(d, chain, cfg.max_order);
    let s_pows = phase_pows(s, cfg.max_order);
    let (value, terms_used, converged) = sum_series(
        |n| I_POW[n % 4] * fold(n, &inplane, &s_pows),
        cfg.max_order,
        cfg.epsilon,
    );
    let result = EvalResult { value, method: Method::SeriesFullQ, terms_used, converged };
    if converged {
        Ok(result)
    } else {
        Err(FfError::NotConverged { partial: result })
    }
}

/// Small-`q∥` series `f = e^{iq⊥r⊥} Σₙ iⁿ fₙ(q∥, Γ)`: expansion in the
/// in-plane wavevector only, perpendicular phase exact.
///
/// This is the window that matters for polyhedron faces nearly
/// perpendicular to `q`, where `|q|` is large but `|q∥|` is tiny.
pub fn ff_polygon_series_inplane(
    q: ComplexVec3,
    chain: &VertexChain,
    cfg: &EvalConfig,
) -> Result<EvalResult, FfError> {
    cfg.assert_valid();
    let d = decompose(q, chain.plane());
    series_inplane_with(&d, chain, cfg)
}

fn series_inplane_with(
    d: &WavevectorDecomposition,
    chain: &VertexChain,
    cfg: &EvalConfig,
) -> Result<EvalResult, FfError> {
    let s = d.q_perp_scalar * chain.plane().r_perp();
    let phase = (I * s).exp();
    if d.q_par_is_zero {
        return Ok(EvalResult {
            value: phase * chain.area(),
            method: Method::SeriesInPlane,
            terms_used: 0,
            converged: true,
        });
    }
    let inplane = inplane_coeffs(d, chain, cfg.max_order);
    let (sum, terms_used, converged) =
        sum_series(|n| I_POW[n % 4] * inplane[n], cfg.max_order, cfg.epsilon);
    let result =
        EvalResult { value: phase * sum, method: Method::SeriesInPlane, terms_used, converged };
    if converged {
        Ok(result)
    } else {
        Err(FfError::NotConverged { partial: result })
    }
}

/// S₂ fast path: for chains with `V_{j+J̃,∥} = −V_{j,∥}` the edge sum
/// antisymmetrizes to
///
/// ```text
/// f = (4/‖q∥‖²) e^{iq⊥r⊥} · q×* · Σ_{j≤J̃} Eⱼ sinc(q·Eⱼ) sin(q∥·Rⱼ)
/// ```
///
/// whose terms are themselves `O(‖q∥‖²)` — the cancellation that plagues the
/// generic analytic path is performed exactly, so this stays accurate for
/// arbitrarily small `q∥` with no series fallback. For snapped `q∥ = 0` it
/// returns the limit `e^{iq⊥r⊥}·Ar`.
pub fn ff_polygon_s2(
    q: ComplexVec3,
    chain: &VertexChain,
    pairing: &SymmetryPairing,
) -> Result<EvalResult, FfError> {
    validate_s2_pairing(chain, pairing)?;
    let d = decompose(q, chain.plane());
    let s = d.q_perp_scalar * chain.plane().r_perp();
    let phase = (I * s).exp();
    if d.q_par_is_zero {
        return Ok(EvalResult {
            value: phase * chain.area(),
            method: Method::SymmetryPath,
            terms_used: 0,
            converged: true,
        });
    }
    let rep = chain.rep();
    let mut sum = ZERO;
    for &(j, _) in &pairing.pairs {
        let e = rep.e[j];
        let r = rep.r[j];
        let c_j = conj_dot_real(d.q_cross, e);
        let alpha = d.q.dot_real(e);
        let gamma = d.q_par.dot_real(r);
        sum += c_j * sinc(alpha) * gamma.sin();
    }
    let value = phase * sum * (4.0 / d.norm_sq_q_par);
    Ok(EvalResult { value, method: Method::SymmetryPath, terms_used: 0, converged: true })
}

fn validate_s2_pairing(chain: &VertexChain, pairing: &SymmetryPairing) -> Result<(), FfError> {
    if pairing.kind != SymmetryKind::S2Polygon {
        return Err(FfError::InvalidPairing {
            reason: format!("expected an S2 polygon pairing, got {:?}", pairing.kind),
        });
    }
    let j = chain.vertices().len();
    if !j.is_multiple_of(2) || pairing.half_count() != j / 2 {
        return Err(FfError::InvalidPairing {
            reason: format!(
                "pairing covers {} vertex pairs but the chain has {j} vertices",
                pairing.half_count()
            ),
        });
    }
    let n = chain.plane().normal();
    let tol = SYMMETRY_TOL * chain.radius();
    for &(a, b) in &pairing.pairs {
        if a >= j || b >= j {
            return Err(FfError::InvalidPairing {
                reason: format!("pair ({a}, {b}) out of range for {j} vertices"),
            });
        }
        let va = chain.vertices()[a];
        let vb = chain.vertices()[b];
        let va_par = va - n * n.dot(va);
        let vb_par = vb - n * n.dot(vb);
        if (va_par + vb_par).norm() > tol {
            return Err(FfError::InvalidPairing {
                reason: format!("vertices {a} and {b} are not inversion images in-plane"),
            });
        }
    }
    Ok(())
}

/// Independent reference form (Lee–Mittra): a pure vertex sum
///
/// ```text
/// f = Σⱼ n̂·(Eⱼ × Eⱼ₊₁) / ((q·Eⱼ)(q·Eⱼ₊₁)) · e^{iq·Vⱼ}
/// ```
///
/// pairing each vertex with its two adjacent edges. No evaluation path uses
/// this — it exists as an algebraically unrelated cross-check. It has
/// non-removable trouble wherever `q ⊥ Eⱼ` for some edge and refuses such
/// wavevectors with [`FfError::SingularDenominator`].
pub fn ff_polygon_leemittra(q: ComplexVec3, chain: &VertexChain) -> Result<Complex64, FfError> {
    let rep = chain.rep();
    let vertices = chain.vertices();
    let j_count = vertices.len();
    let q_norm = q.norm();
    let a = chain.radius();
    let mut denom = Vec::with_capacity(j_count);
    for (j, e) in rep.e.iter().enumerate() {
        let d = q.dot_real(*e);
        if d.norm() < LEEMITTRA_EDGE_TOL * q_norm * a {
            return Err(FfError::SingularDenominator { edge: j, magnitude: d.norm() });
        }
        denom.push(d);
    }
    let n = chain.plane().normal();
    let mut sum = ZERO;
    for j in 0..j_count {
        // e[j] arrives at vertex j, e[j+1] leaves it.
        let next = (j + 1) % j_count;
        let num = n.dot(rep.e[j].cross(rep.e[next]));
        let phase = (I * q.dot_real(vertices[j])).exp();
        sum += phase * num / (denom[j] * denom[next]);
    }
    Ok(sum)
}

/// Evaluate the polygon form factor, choosing the stable path for this `q`.
///
/// Dispatch, after re-homing distant chains onto their center of gravity
/// (restoring the translation phase `e^{iq·v}`):
///
/// 1. an S₂ `pairing`, if supplied, routes to [`ff_polygon_s2`];
/// 2. snapped `q∥ = 0` returns the exact limit `e^{iq⊥r⊥}·Ar`;
/// 3. `a·|q| < c` sums the full-`q` series;
/// 4. `a·|q∥| < c_par` sums the in-plane series;
/// 5. otherwise the analytic edge sum.
pub fn ff_polygon(
    q: ComplexVec3,
    chain: &VertexChain,
    cfg: &EvalConfig,
    pairing: Option<&SymmetryPairing>,
) -> Result<EvalResult, FfError> {
    cfg.assert_valid();
    if let Some((v, twin)) = chain.rehomed() {
        let twin_pairing = if pairing.is_some() { twin.s2_pairing() } else { None };
        let inner = ff_polygon(q, twin, cfg, twin_pairing)?;
        let phase = (I * q.dot_real(v)).exp();
        return Ok(EvalResult { value: phase * inner.value, ..inner });
    }
    if let Some(p) = pairing {
        return ff_polygon_s2(q, chain, p);
    }
    let d = decompose(q, chain.plane());
    if d.q_par_is_zero {
        let s = d.q_perp_scalar * chain.plane().r_perp();
        return Ok(EvalResult {
            value: (I * s).exp() * chain.area(),
            method: Method::QParZero,
            terms_used: 0,
            converged: true,
        });
    }
    let a = chain.radius();
    if a * d.norm_sq_q.sqrt() < cfg.c {
        series_full_q_with(&d, chain, cfg)
    } else if a * d.norm_sq_q_par.sqrt() < cfg.c_par {
        series_inplane_with(&d, chain, cfg)
    } else {
        analytic_with(&d, chain)
    }
}
