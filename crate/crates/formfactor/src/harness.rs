//! Internal-consistency machinery: the worst-case relative deviation
//! metric δ, symmetry and specialization suites, continuity scans that
//! locate method switches by bisection, and empirical threshold tuning.
//!
//! These are the checks a user runs to convince themselves the evaluator is
//! healthy on *their* shapes: no external reference data is involved, only
//! redundancy the geometry itself provides (a figure invariant under a
//! rotation must produce the same value at `q` and `R·q`; two
//! constructions of the same solid must agree; the value must not jump
//! where the dispatcher changes method).

use crate::linalg::{ComplexVec3, RealVec3};
use crate::mesh::{Figure, PolyhedronMesh, SYMMETRY_TOL};
use crate::polygon::{EvalConfig, FfError, Method};
use crate::polyhedron::{ff_figure, ff_polyhedron};
use num_complex::Complex64;
use serde_json::json;

/// Relative perturbation used by continuity scans: the two probes
/// `t·(1∓η)` land a few ulps on either side of a located switch.
pub const CONTINUITY_ETA: f64 = 8e-16;

/// Worst-case relative deviation over a paired sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaReport {
    /// max over pairs of |F1−F2| / (|F1+F2|/2).
    pub delta: f64,
    /// The wavevector of the worst pair.
    pub argmax_q: ComplexVec3,
    /// Pairs that entered the maximum.
    pub samples: usize,
    /// Pairs skipped because |F1+F2| = 0 left no scale to compare against.
    pub excluded: usize,
}

impl DeltaReport {
    /// Machine-readable form (the same JSON text-object format as shape
    /// files).
    pub fn to_json(&self, suite: &str, bound: f64) -> serde_json::Value {
        let q = self.argmax_q;
        json!({
            "suite": suite,
            "delta": self.delta,
            "argmax_q": {
                "re": [q.x.re, q.y.re, q.z.re],
                "im": [q.x.im, q.y.im, q.z.im],
            },
            "samples": self.samples,
            "excluded": self.excluded,
            "bound": bound,
            "pass": self.delta <= bound,
        })
    }
}

/// A dispatch boundary located by [`continuity_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodSwitch {
    /// |q| magnitude of the first grid/bisection point past the switch.
    pub q_threshold: f64,
    pub method_below: Method,
    pub method_above: Method,
    /// δ between the values a few ulps on either side of the switch.
    pub delta_cont: f64,
}

impl MethodSwitch {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q_threshold": self.q_threshold,
            "method_below": self.method_below.to_string(),
            "method_above": self.method_above.to_string(),
            "delta_cont": self.delta_cont,
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    /// Every pair had |F1+F2| = 0; δ is undefined.
    #[error("every pair was degenerate (|F1+F2| = 0); delta is undefined")]
    AllPairsDegenerate,
    /// The supplied transform does not map the figure onto itself.
    #[error("transform is not a symmetry of the figure: {reason}")]
    NotASymmetry { reason: String },
    /// An evaluation inside a suite failed.
    #[error("evaluation failed during suite: {0}")]
    Eval(#[from] FfError),
}

/// Worst-case relative deviation between two paired value lists, labeled
/// by wavevector. Pairs whose sum vanishes exactly carry no scale and are
/// excluded (and counted); if every pair is excluded the metric is
/// undefined.
pub fn delta(
    qs: &[ComplexVec3],
    f1: &[Complex64],
    f2: &[Complex64],
) -> Result<DeltaReport, HarnessError> {
    assert_eq!(qs.len(), f1.len(), "delta needs one q label per pair");
    assert_eq!(f1.len(), f2.len(), "delta needs paired lists");
    assert!(!f1.is_empty(), "delta needs at least one pair");
    let mut report = DeltaReport {
        delta: -1.0,
        argmax_q: qs[0],
        samples: 0,
        excluded: 0,
    };
    for ((&q, &a), &b) in qs.iter().zip(f1).zip(f2) {
        let scale = (a + b).norm() / 2.0;
        if scale == 0.0 {
            report.excluded += 1;
            continue;
        }
        report.samples += 1;
        let d = (a - b).norm() / scale;
        if d > report.delta {
            report.delta = d;
            report.argmax_q = q;
        }
    }
    if report.samples == 0 {
        return Err(HarnessError::AllPairsDegenerate);
    }
    Ok(report)
}

fn delta_single(a: Complex64, b: Complex64) -> f64 {
    let scale = (a + b).norm() / 2.0;
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// Row-major 3×3 real matrix, for rotations and reflections.
pub type Mat3 = [[f64; 3]; 3];

/// Rotation by `angle` about `axis` (Rodrigues form; `axis` need not be
/// normalized).
pub fn rotation_about(axis: RealVec3, angle: f64) -> Mat3 {
    let u = axis.normalized();
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + u.x * u.x * t, u.x * u.y * t - u.z * s, u.x * u.z * t + u.y * s],
        [u.y * u.x * t + u.z * s, c + u.y * u.y * t, u.y * u.z * t - u.x * s],
        [u.z * u.x * t - u.y * s, u.z * u.y * t + u.x * s, c + u.z * u.z * t],
    ]
}

/// Reflection across the plane through the origin with the given normal.
pub fn reflection_across(normal: RealVec3) -> Mat3 {
    let n = normal.normalized();
    let mut m = [[0.0; 3]; 3];
    let nv = [n.x, n.y, n.z];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            *entry = delta - 2.0 * nv[i] * nv[j];
        }
    }
    m
}

pub fn mat3_apply(m: &Mat3, v: RealVec3) -> RealVec3 {
    RealVec3::new(
        m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
        m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
        m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
    )
}

pub fn mat3_apply_complex(m: &Mat3, q: ComplexVec3) -> ComplexVec3 {
    ComplexVec3::from_parts(mat3_apply(m, q.re()), mat3_apply(m, q.im()))
}

fn check_orthogonal(m: &Mat3) -> Result<(), HarnessError> {
    for i in 0..3 {
        for j in 0..3 {
            let dot: f64 = (0..3).map(|k| m[i][k] * m[j][k]).sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            if (dot - expect).abs() > 1e-10 {
                return Err(HarnessError::NotASymmetry {
                    reason: format!("matrix is not orthogonal (row {i}·row {j} = {dot})"),
                });
            }
        }
    }
    Ok(())
}

/// Verify that `m` permutes the vertex set within `SYMMETRY_TOL · radius`.
fn check_maps_vertices(m: &Mat3, vertices: &[RealVec3], radius: f64) -> Result<(), HarnessError> {
    let tol = SYMMETRY_TOL * radius;
    let mut taken = vec![false; vertices.len()];
    for (i, &v) in vertices.iter().enumerate() {
        let image = mat3_apply(m, v);
        let found = vertices
            .iter()
            .enumerate()
            .filter(|&(j, &w)| !taken[j] && (image - w).norm() <= tol)
            .map(|(j, _)| j)
            .next();
        match found {
            Some(j) => taken[j] = true,
            None => {
                return Err(HarnessError::NotASymmetry {
                    reason: format!(
                        "vertex {i} maps to ({:.6}, {:.6}, {:.6}), not a vertex of the figure",
                        image.x, image.y, image.z
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Compare `F(q)` with `F(R·q)` over a q-set for a figure invariant under
/// the orthogonal transform `R`. The invariance itself is verified first
/// (orthogonality, vertex permutation) so a typo in the transform fails
/// loudly instead of producing a meaningless δ.
pub fn symmetry_suite(
    mesh: &PolyhedronMesh,
    transform: &Mat3,
    q_set: &[ComplexVec3],
    cfg: &EvalConfig,
) -> Result<DeltaReport, HarnessError> {
    check_orthogonal(transform)?;
    check_maps_vertices(transform, mesh.vertices(), mesh.radius())?;
    let pairing = mesh.ci_pairing();
    let mut f1 = Vec::with_capacity(q_set.len());
    let mut f2 = Vec::with_capacity(q_set.len());
    for &q in q_set {
        f1.push(ff_polyhedron(q, mesh, cfg, pairing)?.value);
        f2.push(ff_polyhedron(mat3_apply_complex(transform, q), mesh, cfg, pairing)?.value);
    }
    delta(q_set, &f1, &f2)
}

/// Compare two figures constructed to coincide (e.g. a right pyramid and
/// the matching prism) over a q-set.
pub fn specialization_suite(
    figure1: &Figure,
    figure2: &Figure,
    q_set: &[ComplexVec3],
    cfg: &EvalConfig,
) -> Result<DeltaReport, HarnessError> {
    let mut f1 = Vec::with_capacity(q_set.len());
    let mut f2 = Vec::with_capacity(q_set.len());
    for &q in q_set {
        f1.push(ff_figure(q, figure1, cfg)?.value);
        f2.push(ff_figure(q, figure2, cfg)?.value);
    }
    delta(q_set, &f1, &f2)
}

/// Walk `|q|` over `q_range` along a fixed direction, locate every point
/// where the dispatcher changes method (log-grid detection + bisection to
/// a few ulps), and measure the value jump δ_cont across each switch.
///
/// `q_dir` may be complex; the magnitude parameter scales it after
/// normalization by the real part (full norm if the real part vanishes).
pub fn continuity_scan(
    figure: &Figure,
    q_dir: ComplexVec3,
    q_range: (f64, f64),
    cfg: &EvalConfig,
) -> Result<Vec<MethodSwitch>, HarnessError> {
    let (t_min, t_max) = q_range;
    assert!(
        t_min > 0.0 && t_max > t_min,
        "continuity_scan needs 0 < t_min < t_max"
    );
    let scale = {
        let re = q_dir.re().norm();
        if re > 0.0 { re } else { q_dir.norm() }
    };
    let dir = q_dir * Complex64::new(1.0 / scale, 0.0);
    let eval = |t: f64| -> Result<(Method, Complex64), HarnessError> {
        let r = ff_figure(dir * Complex64::new(t, 0.0), figure, cfg)?;
        Ok((r.method, r.value))
    };

    const GRID: usize = 61;
    let ratio = t_max / t_min;
    let mut grid = Vec::with_capacity(GRID);
    for k in 0..GRID {
        let t = t_min * ratio.powf(k as f64 / (GRID - 1) as f64);
        grid.push((t, eval(t)?.0));
    }

    let mut switches = Vec::new();
    for w in grid.windows(2) {
        let (mut lo, m_lo) = w[0];
        let (mut hi, m_hi) = w[1];
        if m_lo == m_hi {
            continue;
        }
        // Log-bisection until the bracket is a few ulps wide. More than
        // one boundary inside a grid cell collapses to the first; the grid
        // is dense enough that dispatch thresholds decades apart never
        // share a cell.
        let mut m_below = m_lo;
        for _ in 0..100 {
            if hi / lo - 1.0 < 4.0 * f64::EPSILON {
                break;
            }
            let mid = ((lo.ln() + hi.ln()) / 2.0).exp();
            let mid = if mid <= lo || mid >= hi { (lo + hi) / 2.0 } else { mid };
            let (m_mid, _) = eval(mid)?;
            if m_mid == m_lo {
                lo = mid;
                m_below = m_mid;
            } else {
                hi = mid;
            }
        }
        let (_, f_below) = eval(hi * (1.0 - CONTINUITY_ETA))?;
        let (m_above, f_above) = eval(hi * (1.0 + CONTINUITY_ETA))?;
        switches.push(MethodSwitch {
            q_threshold: hi,
            method_below: m_below,
            method_above: m_above,
            delta_cont: delta_single(f_below, f_above),
        });
    }
    Ok(switches)
}

/// Default verification q-set: 61 log-spaced magnitudes spanning
/// [1e-6, 1e2]·(1/radius), across 7 fixed directions, each taken purely
/// real and with a 5% imaginary part.
pub fn default_q_set(radius: f64) -> Vec<ComplexVec3> {
    q_set_with(radius, 61, (1e-6, 1e2))
}

/// As [`default_q_set`] with explicit magnitude count and `a·|q|` span —
/// the suites in the test-suite use smaller sets to stay fast.
pub fn q_set_with(radius: f64, magnitudes: usize, aq_span: (f64, f64)) -> Vec<ComplexVec3> {
    assert!(magnitudes >= 2 && aq_span.0 > 0.0 && aq_span.1 > aq_span.0);
    let directions = [
        RealVec3::new(0.0, 0.0, 1.0),
        RealVec3::new(1.0, 0.0, 0.0),
        RealVec3::new(1.0, 1.0, 1.0),
        RealVec3::new(1.0, 2.0, 3.0),
        RealVec3::new(0.6, 0.8, 0.0),
        RealVec3::new(0.02, 0.01, 1.0),
        RealVec3::new(-2.0, 1.0, 0.5),
    ];
    let ratio = aq_span.1 / aq_span.0;
    let mut qs = Vec::with_capacity(directions.len() * magnitudes * 2);
    for dir in directions {
        let d = dir.normalized();
        for k in 0..magnitudes {
            let t = aq_span.0 / radius * ratio.powf(k as f64 / (magnitudes - 1) as f64);
            let real = ComplexVec3::from(d * t);
            qs.push(real);
            qs.push(real * Complex64::new(1.0, 0.05));
        }
    }
    qs
}

/// Grid-search the dispatch thresholds: every (c, c_par, c_poly) triple
/// drawn from `candidates` is scored by its worst δ_cont over the suite
/// (two scan directions per figure), rejecting any triple that fails to
/// converge anywhere. Returns the winning config and its worst δ_cont;
/// ties break toward the earliest candidate triple, so the result is
/// deterministic.
pub fn tune_thresholds(
    suite: &[Figure],
    candidates: &[f64],
    base: &EvalConfig,
) -> Result<(EvalConfig, f64), HarnessError> {
    assert!(!suite.is_empty() && !candidates.is_empty());
    let directions = [
        ComplexVec3::from(RealVec3::new(1.0, 2.0, 3.0).normalized()),
        ComplexVec3::from(RealVec3::new(0.6, 0.8, 0.0).normalized()),
    ];
    let mut best: Option<(EvalConfig, f64)> = None;
    for &c in candidates {
        for &c_par in candidates {
            for &c_poly in candidates {
                let cfg = EvalConfig { c, c_par, c_poly, ..*base };
                cfg.assert_valid();
                let mut worst = 0.0_f64;
                let mut feasible = true;
                'figures: for figure in suite {
                    let a = figure.radius();
                    // All candidate thresholds live inside [1e-5, 1e-1];
                    // pad one decade each side so every switch is seen.
                    let range = (1e-7 / a, 1.0 / a);
                    for dir in directions {
                        match continuity_scan(figure, dir, range, &cfg) {
                            Ok(switches) => {
                                for s in &switches {
                                    worst = worst.max(s.delta_cont);
                                }
                            }
                            Err(HarnessError::Eval(FfError::NotConverged { .. })) => {
                                feasible = false;
                                break 'figures;
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
                if !feasible {
                    continue;
                }
                if best.as_ref().is_none_or(|&(_, b)| worst < b) {
                    best = Some((cfg, worst));
                }
            }
        }
    }
    // A grid drawn from (0, 1) with the default max_order always has
    // feasible members; an empty result means the caller passed thresholds
    // outside the series' convergence reach, which assert_valid rejects.
    Ok(best.expect("at least one threshold triple must converge on the suite"))
}
