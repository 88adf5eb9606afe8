//! Polygon chains and polyhedron meshes, with the cached geometry the
//! evaluators need.
//!
//! A [`VertexChain`] is an ordered, closed loop of coplanar vertices; a
//! [`PolyhedronMesh`] is a closed surface of such chains sharing a vertex
//! table. Construction validates the geometry (planarity, winding, edge
//! closure, outward orientation) and precomputes everything that is reused
//! per evaluation: the supporting [`Plane`], the edge/midpoint
//! representation, areas, volumes, enclosing radii, centers of gravity, and
//! any inversion-symmetry pairing.
//!
//! Orientation conventions: a chain's vertices wind counterclockwise when
//! seen from the side its normal points to ("+1 winding"); mesh faces wind
//! counterclockwise seen from outside, so their normals point outward.

use crate::linalg::{Plane, RealVec3};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Maximum out-of-plane residual accepted for a chain, relative to its
/// diameter. Geometry from exact constructions sits at the rounding floor
/// (~1e-16); anything above this is a genuinely skew input.
pub const PLANARITY_TOL: f64 = 1e-10;

/// A Newell normal sum smaller than this, relative to `max|Vⱼ|²`, means the
/// chain has no usable plane (collinear or repeated vertices).
pub const DEGENERATE_NORMAL_TOL: f64 = 1e-14;

/// Closed-surface residual `|Σ n̂ₖ Arₖ|` accepted relative to `Σ Arₖ`.
pub const FACE_CLOSURE_TOL: f64 = 1e-12;

/// Edge-vector closure `|Σ Eⱼ|` accepted relative to `max|Vⱼ|`.
pub const EDGE_CLOSURE_TOL: f64 = 1e-13;

/// Vertex-matching tolerance for symmetry detection, relative to the
/// enclosing radius.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Geometry validation errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeshError {
    /// Fewer than three vertices, repeated/collinear vertices, or a vanishing
    /// normal sum: there is no usable polygon.
    #[error("degenerate vertex chain: {reason}")]
    DegenerateChain { reason: String },
    /// Out-of-plane residual exceeds `tol × diameter`.
    #[error("vertex chain is not planar: residual {residual:.3e} > {tol:.3e} x diameter")]
    NotPlanar { residual: f64, tol: f64 },
    /// The chain winds clockwise about the stored normal.
    #[error("vertex chain winds clockwise about its normal (signed area {area:.3e})")]
    NegativeWinding { area: f64 },
    /// The face set does not form a valid closed, outward-oriented surface.
    #[error("invalid polyhedron mesh: {reason}")]
    InvalidMesh { reason: String },
}

/// Edge half-vectors `Eⱼ = (Vⱼ − Vⱼ₋₁)/2` and midpoints
/// `Rⱼ = (Vⱼ + Vⱼ₋₁)/2`, with the cyclic convention `V₀ ≡ V_J`.
///
/// Entry `j` describes the edge arriving at vertex `j` from its predecessor.
/// The half-vectors close up: `Σⱼ Eⱼ = 0` (within rounding).
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMidpointRep {
    pub e: Vec<RealVec3>,
    pub r: Vec<RealVec3>,
}

impl EdgeMidpointRep {
    #[must_use]
    pub fn from_vertices(vertices: &[RealVec3]) -> Self {
        let j = vertices.len();
        let mut e = Vec::with_capacity(j);
        let mut r = Vec::with_capacity(j);
        for i in 0..j {
            let prev = vertices[(i + j - 1) % j];
            let cur = vertices[i];
            e.push((cur - prev) * 0.5);
            r.push((cur + prev) * 0.5);
        }
        Self { e, r }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.e.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }
}

/// Compute the supporting plane of a closed vertex loop.
///
/// The normal direction is the normalized Newell sum `Σⱼ Vⱼ₋₁ × Vⱼ` (twice
/// the vector area), which is robust for any simple polygon regardless of
/// where the origin lies — individual vertices at the origin are fine. The
/// offset is the mean of `n̂·Vⱼ`.
pub fn plane_of(vertices: &[RealVec3]) -> Result<Plane, MeshError> {
    if vertices.len() < 3 {
        return Err(MeshError::DegenerateChain {
            reason: format!("need at least 3 vertices, got {}", vertices.len()),
        });
    }
    let max_norm_sq = vertices.iter().map(|v| v.norm_sq()).fold(0.0, f64::max);
    let sum = newell_sum(vertices);
    if sum.norm() <= DEGENERATE_NORMAL_TOL * max_norm_sq.max(f64::MIN_POSITIVE) {
        return Err(MeshError::DegenerateChain {
            reason: "normal sum vanishes (collinear or repeated vertices)".into(),
        });
    }
    let normal = sum.normalized();
    let r_perp = vertices.iter().map(|v| normal.dot(*v)).sum::<f64>() / vertices.len() as f64;
    Ok(Plane::new(normal, r_perp))
}

/// `Σⱼ Vⱼ₋₁ × Vⱼ` — twice the vector area of the loop.
fn newell_sum(vertices: &[RealVec3]) -> RealVec3 {
    let j = vertices.len();
    let mut sum = RealVec3::ZERO;
    for i in 0..j {
        let prev = vertices[(i + j - 1) % j];
        sum = sum + prev.cross(vertices[i]);
    }
    sum
}

/// Signed area of the loop about `normal`: `½ n̂ · Σⱼ Vⱼ₋₁ × Vⱼ`.
#[must_use]
pub fn signed_area(vertices: &[RealVec3], normal: RealVec3) -> f64 {
    0.5 * normal.dot(newell_sum(vertices))
}

/// Full validation record for a single chain.
#[derive(Debug, Clone)]
pub struct PolygonDiagnostics {
    /// The supporting plane, if one could be determined.
    pub plane: Option<Plane>,
    /// Signed area about the plane normal.
    pub area: f64,
    /// Max out-of-plane residual `|n̂·Vⱼ − r⊥|`.
    pub planarity_residual: f64,
    /// Max pairwise vertex distance.
    pub diameter: f64,
    /// All violations found (empty means the chain is valid).
    pub violations: Vec<MeshError>,
}

impl PolygonDiagnostics {
    #[must_use]
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validate a vertex loop as a polygon.
///
/// With `normal = None` the plane is taken from [`plane_of`], so the winding
/// is positive by construction; passing an explicit (unit) normal — e.g. the
/// outward normal a face is supposed to have — additionally checks that the
/// loop winds counterclockwise about it.
#[must_use]
pub fn validate_polygon(
    vertices: &[RealVec3],
    normal: Option<RealVec3>,
    tol: f64,
) -> PolygonDiagnostics {
    let mut violations = Vec::new();
    let mut diameter = 0.0_f64;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            diameter = diameter.max((*a - *b).norm());
        }
    }

    let plane = match normal {
        Some(n) => {
            if vertices.len() < 3 {
                Err(MeshError::DegenerateChain {
                    reason: format!("need at least 3 vertices, got {}", vertices.len()),
                })
            } else {
                let n = n.normalized();
                let r_perp =
                    vertices.iter().map(|v| n.dot(*v)).sum::<f64>() / vertices.len() as f64;
                Ok(Plane::new(n, r_perp))
            }
        }
        None => plane_of(vertices),
    };

    let plane = match plane {
        Ok(p) => p,
        Err(e) => {
            violations.push(e);
            return PolygonDiagnostics {
                plane: None,
                area: 0.0,
                planarity_residual: 0.0,
                diameter,
                violations,
            };
        }
    };

    let residual = vertices
        .iter()
        .map(|v| (plane.normal().dot(*v) - plane.r_perp()).abs())
        .fold(0.0, f64::max);
    if residual > tol * diameter {
        violations.push(MeshError::NotPlanar { residual, tol });
    }

    let area = signed_area(vertices, plane.normal());
    let max_norm_sq = vertices.iter().map(|v| v.norm_sq()).fold(0.0, f64::max);
    if area.abs() <= 0.5 * DEGENERATE_NORMAL_TOL * max_norm_sq {
        violations.push(MeshError::DegenerateChain {
            reason: "surveyor area vanishes".into(),
        });
    } else if area < 0.0 {
        violations.push(MeshError::NegativeWinding { area });
    }

    PolygonDiagnostics {
        plane: Some(plane),
        area,
        planarity_residual: residual,
        diameter,
        violations,
    }
}

/// The enclosing radii that gate the evaluators' branch thresholds:
/// `a = max |Vⱼ|` (about the origin) and `b = max |Vⱼ∥|` (in-plane parts).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnclosingRadii {
    pub a: f64,
    pub b: f64,
}

/// Which kind of inversion symmetry a pairing describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    /// Polygon with `V_{j+J̃,∥} = −V_{j,∥}` about the origin's in-plane
    /// projection (J even, J̃ = J/2).
    S2Polygon,
    /// Polyhedron whose faces pair up under point inversion through the
    /// origin (K even, K̃ = K/2).
    CiPolyhedron,
}

/// An inversion-symmetry pairing: `pairs[i] = (index, partner)` maps each
/// representative (vertex index for S₂, face index for Cᵢ) to its image
/// under inversion. Exactly half the items appear as representatives.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryPairing {
    pub kind: SymmetryKind,
    pub pairs: Vec<(usize, usize)>,
}

impl SymmetryPairing {
    /// Number of representatives (J̃ or K̃).
    #[must_use]
    pub fn half_count(&self) -> usize {
        self.pairs.len()
    }
}

/// A closed planar polygon: an ordered vertex loop plus cached geometry.
///
/// The vertex order defines the orientation: the stored plane normal is the
/// one the loop winds counterclockwise about.
#[derive(Debug, Clone)]
pub struct VertexChain {
    vertices: Vec<RealVec3>,
    plane: Plane,
    rep: EdgeMidpointRep,
    area: f64,
    radii: EnclosingRadii,
    cog: RealVec3,
    s2: Option<SymmetryPairing>,
    /// Present when the centroid sits measurably off the origin: `(shift v,
    /// chain translated by −v)`. Evaluators use the translated twin and
    /// restore the phase `e^{iq·v}`.
    rehome: Option<(RealVec3, Box<VertexChain>)>,
}

/// Relative centroid offset beyond which a figure gets a centered evaluation
/// twin. The closed-form edge and face sums cancel their leading,
/// `q`-independent part exactly only when the phases `e^{iq·R}` wind about
/// the centroid; an offset origin leaves the cancellation an `O(ε)` residue
/// that the `1/‖q∥‖²` prefactor amplifies at small `q`. Centering is cheap
/// (one cached copy, one exact phase factor), so the threshold only needs to
/// keep already-centered figures — whose recentered centroid lands at
/// `O(ε)·radius` — from recentering again.
const REHOME_FRACTION: f64 = 1e-12;

impl VertexChain {
    /// Build a chain, deriving the normal from the winding (always valid
    /// orientation).
    pub fn new(vertices: Vec<RealVec3>) -> Result<Self, MeshError> {
        Self::build(vertices, None)
    }

    /// Build a chain that must wind counterclockwise about the given normal;
    /// errors with [`MeshError::NegativeWinding`] otherwise.
    pub fn with_normal(vertices: Vec<RealVec3>, normal: RealVec3) -> Result<Self, MeshError> {
        Self::build(vertices, Some(normal))
    }

    fn build(vertices: Vec<RealVec3>, normal: Option<RealVec3>) -> Result<Self, MeshError> {
        let diag = validate_polygon(&vertices, normal, PLANARITY_TOL);
        if let Some(first) = diag.violations.into_iter().next() {
            return Err(first);
        }
        let plane = diag.plane.expect("valid diagnostics carry a plane");
        let rep = EdgeMidpointRep::from_vertices(&vertices);
        debug_assert!(
            rep.e.iter().fold(RealVec3::ZERO, |s, e| s + *e).norm()
                <= EDGE_CLOSURE_TOL
                    * vertices.iter().map(|v| v.norm()).fold(f64::MIN_POSITIVE, f64::max),
            "edge half-vectors must close up"
        );

        let n = plane.normal();
        let a = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let b = vertices
            .iter()
            .map(|v| (*v - n * n.dot(*v)).norm())
            .fold(0.0, f64::max);
        let cog = polygon_cog(&vertices, diag.area);

        let mut chain = Self {
            vertices,
            plane,
            rep,
            area: diag.area,
            radii: EnclosingRadii { a, b },
            cog,
            s2: None,
            rehome: None,
        };
        chain.s2 = detect_s2(&chain);

        let a_cog = chain
            .vertices
            .iter()
            .map(|v| (*v - cog).norm())
            .fold(0.0, f64::max);
        if cog.norm() > REHOME_FRACTION * a_cog {
            let shifted: Vec<RealVec3> = chain.vertices.iter().map(|v| *v - cog).collect();
            let twin = Self::build(shifted, Some(chain.plane.normal()))?;
            chain.rehome = Some((cog, Box::new(twin)));
        }
        Ok(chain)
    }

    #[must_use]
    pub fn vertices(&self) -> &[RealVec3] {
        &self.vertices
    }

    #[must_use]
    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    #[must_use]
    pub fn rep(&self) -> &EdgeMidpointRep {
        &self.rep
    }

    /// Positive area enclosed by the loop.
    #[must_use]
    pub fn area(&self) -> f64 {
        self.area
    }

    #[must_use]
    pub fn enclosing_radii(&self) -> EnclosingRadii {
        self.radii
    }

    /// `a = max |Vⱼ|`: the radius a sphere about the origin needs to enclose
    /// the chain. Gates the small-`q` branch thresholds.
    #[must_use]
    pub fn radius(&self) -> f64 {
        self.radii.a
    }

    /// Area centroid.
    #[must_use]
    pub fn center_of_gravity(&self) -> RealVec3 {
        self.cog
    }

    /// The S₂ (in-plane inversion) pairing about the origin's projection,
    /// if the chain has that symmetry.
    #[must_use]
    pub fn s2_pairing(&self) -> Option<&SymmetryPairing> {
        self.s2.as_ref()
    }

    /// See the field doc: `(v, twin)` with `twin = self − v`, present
    /// whenever the centroid offset exceeds [`REHOME_FRACTION`] of the
    /// chain's centered radius.
    #[must_use]
    pub fn rehomed(&self) -> Option<(RealVec3, &VertexChain)> {
        self.rehome.as_ref().map(|(v, c)| (*v, c.as_ref()))
    }
}

/// Area centroid of a simple polygon via a signed fan from the first vertex.
fn polygon_cog(vertices: &[RealVec3], area: f64) -> RealVec3 {
    let v0 = vertices[0];
    let mut weighted = RealVec3::ZERO;
    // Signed fan triangles (v0, vᵢ, vᵢ₊₁); their signed areas sum to the
    // polygon area for any simple polygon.
    let normal = newell_sum(vertices).normalized();
    for i in 1..vertices.len() - 1 {
        let a = vertices[i];
        let b = vertices[i + 1];
        let tri_area = 0.5 * normal.dot((a - v0).cross(b - v0));
        let centroid = (v0 + a + b) * (1.0 / 3.0);
        weighted = weighted + centroid * tri_area;
    }
    weighted * (1.0 / area)
}

/// Translate a chain by `−v` (its vertices become `Vⱼ − v`), preserving the
/// orientation convention. Form factors of the result relate to the original
/// by the phase factor `e^{iq·v}`.
pub fn translate_chain(chain: &VertexChain, v: RealVec3) -> Result<VertexChain, MeshError> {
    let shifted: Vec<RealVec3> = chain.vertices.iter().map(|w| *w - v).collect();
    VertexChain::with_normal(shifted, chain.plane.normal())
}

/// Detect the S₂ pairing of a chain: J even and `V_{j+J̃,∥} = −V_{j,∥}`
/// within [`SYMMETRY_TOL`]`·a`, where `∥` projects into the chain's plane.
#[must_use]
pub fn detect_s2(chain: &VertexChain) -> Option<SymmetryPairing> {
    let j = chain.vertices.len();
    if !j.is_multiple_of(2) {
        return None;
    }
    let half = j / 2;
    let n = chain.plane.normal();
    let tol = SYMMETRY_TOL * chain.radii.a;
    let in_plane =
        |v: RealVec3| -> RealVec3 { v - n * n.dot(v) };
    for idx in 0..half {
        let a = in_plane(chain.vertices[idx]);
        let b = in_plane(chain.vertices[idx + half]);
        if (a + b).norm() > tol {
            return None;
        }
    }
    Some(SymmetryPairing {
        kind: SymmetryKind::S2Polygon,
        pairs: (0..half).map(|i| (i, i + half)).collect(),
    })
}

/// Full validation record for a mesh.
#[derive(Debug, Clone)]
pub struct MeshDiagnostics {
    /// All violations found (empty means the mesh is valid).
    pub violations: Vec<MeshError>,
    /// Signed volume from the divergence theorem (meaningful when faces are
    /// individually valid).
    pub volume: f64,
    /// `|Σ n̂ₖ Arₖ| / Σ Arₖ`.
    pub closure_residual: f64,
}

impl MeshDiagnostics {
    #[must_use]
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Validate a vertex table plus face index lists as a closed polyhedron
/// surface, listing every violation found.
#[must_use]
pub fn validate_mesh(vertices: &[RealVec3], faces: &[Vec<usize>]) -> MeshDiagnostics {
    let mut violations = Vec::new();

    if faces.len() < 4 {
        violations.push(MeshError::InvalidMesh {
            reason: format!("a closed surface needs at least 4 faces, got {}", faces.len()),
        });
    }

    // Index sanity.
    for (k, face) in faces.iter().enumerate() {
        if face.len() < 3 {
            violations.push(MeshError::InvalidMesh {
                reason: format!("face {k} has {} vertices", face.len()),
            });
            continue;
        }
        for &idx in face {
            if idx >= vertices.len() {
                violations.push(MeshError::InvalidMesh {
                    reason: format!("face {k} references vertex {idx} of {}", vertices.len()),
                });
            }
        }
        let mut sorted = face.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            violations.push(MeshError::InvalidMesh {
                reason: format!("face {k} repeats a vertex index"),
            });
        }
    }
    if !violations.is_empty() {
        return MeshDiagnostics { violations, volume: 0.0, closure_residual: 0.0 };
    }

    // Every undirected edge must be shared by exactly two faces, traversed
    // in opposite directions.
    let mut edges: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
    for (k, face) in faces.iter().enumerate() {
        for i in 0..face.len() {
            let a = face[i];
            let b = face[(i + 1) % face.len()];
            let key = (a.min(b), a.max(b));
            edges.entry(key).or_default().push((k, a < b));
        }
    }
    for (&(a, b), uses) in &edges {
        if uses.len() != 2 {
            violations.push(MeshError::InvalidMesh {
                reason: format!("edge ({a},{b}) bounds {} faces, expected 2", uses.len()),
            });
        } else if uses[0].1 == uses[1].1 {
            violations.push(MeshError::InvalidMesh {
                reason: format!(
                    "edge ({a},{b}) traversed in the same direction by faces {} and {}",
                    uses[0].0, uses[1].0
                ),
            });
        }
    }

    // Face-level validity.
    let mut chains = Vec::with_capacity(faces.len());
    for (k, face) in faces.iter().enumerate() {
        let pts: Vec<RealVec3> = face.iter().map(|&i| vertices[i]).collect();
        match VertexChain::new(pts) {
            Ok(c) => chains.push(Some(c)),
            Err(e) => {
                violations.push(MeshError::InvalidMesh { reason: format!("face {k}: {e}") });
                chains.push(None);
            }
        }
    }

    let mut volume = 0.0;
    let mut closure = RealVec3::ZERO;
    let mut total_area = 0.0;
    if chains.iter().all(Option::is_some) {
        for chain in chains.iter().flatten() {
            let ar = chain.area();
            volume += ar * chain.plane().r_perp() / 3.0;
            closure = closure + chain.plane().normal() * ar;
            total_area += ar;
        }
        let closure_residual = closure.norm() / total_area;
        if closure_residual > FACE_CLOSURE_TOL {
            violations.push(MeshError::InvalidMesh {
                reason: format!(
                    "face normals do not close up: |Σ n̂ Ar| / Σ Ar = {closure_residual:.3e}"
                ),
            });
        }
        if volume <= 0.0 {
            violations.push(MeshError::InvalidMesh {
                reason: format!("volume {volume:.3e} is not positive; faces wind inward"),
            });
        }
        return MeshDiagnostics { violations, volume, closure_residual };
    }

    MeshDiagnostics { violations, volume, closure_residual: 0.0 }
}

/// A closed polyhedron surface: shared vertex table plus faces listed as
/// counterclockwise-from-outside index loops.
#[derive(Debug, Clone)]
pub struct PolyhedronMesh {
    vertices: Vec<RealVec3>,
    face_indices: Vec<Vec<usize>>,
    faces: Vec<VertexChain>,
    volume: f64,
    radius: f64,
    cog: RealVec3,
    ci: Option<SymmetryPairing>,
    rehome: Option<(RealVec3, Box<PolyhedronMesh>)>,
}

impl PolyhedronMesh {
    pub fn new(vertices: Vec<RealVec3>, faces: Vec<Vec<usize>>) -> Result<Self, MeshError> {
        let diag = validate_mesh(&vertices, &faces);
        if let Some(first) = diag.violations.into_iter().next() {
            return Err(first);
        }
        let chains: Vec<VertexChain> = faces
            .iter()
            .map(|face| {
                let pts: Vec<RealVec3> = face.iter().map(|&i| vertices[i]).collect();
                VertexChain::new(pts).expect("validated above")
            })
            .collect();

        let radius = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let cog = polyhedron_cog(&chains, diag.volume);

        let mut mesh = Self {
            vertices,
            face_indices: faces,
            faces: chains,
            volume: diag.volume,
            radius,
            cog,
            ci: None,
            rehome: None,
        };
        mesh.ci = detect_ci(&mesh);

        let a_cog = mesh
            .vertices
            .iter()
            .map(|v| (*v - cog).norm())
            .fold(0.0, f64::max);
        if cog.norm() > REHOME_FRACTION * a_cog {
            let shifted: Vec<RealVec3> = mesh.vertices.iter().map(|v| *v - cog).collect();
            let twin = Self::new(shifted, mesh.face_indices.clone())?;
            mesh.rehome = Some((cog, Box::new(twin)));
        }
        Ok(mesh)
    }

    #[must_use]
    pub fn vertices(&self) -> &[RealVec3] {
        &self.vertices
    }

    #[must_use]
    pub fn face_indices(&self) -> &[Vec<usize>] {
        &self.face_indices
    }

    #[must_use]
    pub fn faces(&self) -> &[VertexChain] {
        &self.faces
    }

    /// Enclosed volume, always positive.
    #[must_use]
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `a = max |Vⱼ|` over the whole figure.
    #[must_use]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Volume centroid.
    #[must_use]
    pub fn center_of_gravity(&self) -> RealVec3 {
        self.cog
    }

    /// The Cᵢ (point-inversion through the origin) face pairing, if the mesh
    /// has that symmetry.
    #[must_use]
    pub fn ci_pairing(&self) -> Option<&SymmetryPairing> {
        self.ci.as_ref()
    }

    /// `(v, twin)` with `twin = self − v`, present whenever the centroid
    /// offset exceeds [`REHOME_FRACTION`] of the mesh's centered radius.
    #[must_use]
    pub fn rehomed(&self) -> Option<(RealVec3, &PolyhedronMesh)> {
        self.rehome.as_ref().map(|(v, m)| (*v, m.as_ref()))
    }
}

/// Volume centroid via signed tetrahedra (origin, fan triangles of each face).
fn polyhedron_cog(faces: &[VertexChain], volume: f64) -> RealVec3 {
    let mut weighted = RealVec3::ZERO;
    for face in faces {
        let vs = face.vertices();
        let v0 = vs[0];
        for i in 1..vs.len() - 1 {
            let a = vs[i];
            let b = vs[i + 1];
            let vol_t = v0.dot(a.cross(b)) / 6.0;
            let centroid = (v0 + a + b) * 0.25;
            weighted = weighted + centroid * vol_t;
        }
    }
    weighted * (1.0 / volume)
}

/// Translate a mesh by `−v` (vertices become `Vⱼ − v`). Form factors of the
/// result relate to the original by the phase factor `e^{iq·v}`.
pub fn translate_mesh(mesh: &PolyhedronMesh, v: RealVec3) -> Result<PolyhedronMesh, MeshError> {
    let shifted: Vec<RealVec3> = mesh.vertices.iter().map(|w| *w - v).collect();
    PolyhedronMesh::new(shifted, mesh.face_indices.clone())
}

/// Detect the Cᵢ pairing of a mesh: every face must map onto a partner face
/// under point inversion through the origin (as a vertex set, within
/// [`SYMMETRY_TOL`]`·a`).
#[must_use]
pub fn detect_ci(mesh: &PolyhedronMesh) -> Option<SymmetryPairing> {
    let k = mesh.faces.len();
    if !k.is_multiple_of(2) {
        return None;
    }
    let tol = SYMMETRY_TOL * mesh.radius;
    let mut partner: Vec<Option<usize>> = vec![None; k];
    let mut pairs = Vec::with_capacity(k / 2);
    for i in 0..k {
        if partner[i].is_some() {
            continue;
        }
        let found = (0..k).find(|&m| {
            m != i
                && partner[m].is_none()
                && faces_are_inverted(&mesh.faces[i], &mesh.faces[m], tol)
        });
        let m = found?;
        partner[i] = Some(m);
        partner[m] = Some(i);
        pairs.push((i, m));
    }
    Some(SymmetryPairing { kind: SymmetryKind::CiPolyhedron, pairs })
}

/// True iff face `b`'s vertex set equals `−1 ×` face `a`'s vertex set.
pub(crate) fn faces_are_inverted(a: &VertexChain, b: &VertexChain, tol: f64) -> bool {
    if a.vertices().len() != b.vertices().len() {
        return false;
    }
    let mut used = vec![false; b.vertices().len()];
    for va in a.vertices() {
        let mut matched = false;
        for (i, vb) in b.vertices().iter().enumerate() {
            if !used[i] && (*va + *vb).norm() <= tol {
                used[i] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return false;
        }
    }
    true
}

/// A planar polygon or a closed polyhedron — the two figure kinds the
/// evaluators accept.
#[derive(Debug, Clone)]
pub enum Figure {
    Polygon(VertexChain),
    Polyhedron(PolyhedronMesh),
}

impl Figure {
    /// Enclosing radius `a = max |Vⱼ|`.
    #[must_use]
    pub fn radius(&self) -> f64 {
        match self {
            Figure::Polygon(c) => c.radius(),
            Figure::Polyhedron(m) => m.radius(),
        }
    }

    #[must_use]
    pub fn center_of_gravity(&self) -> RealVec3 {
        match self {
            Figure::Polygon(c) => c.center_of_gravity(),
            Figure::Polyhedron(m) => m.center_of_gravity(),
        }
    }

    /// Area (polygon) or volume (polyhedron): the `q = 0` limit of the
    /// respective form factor.
    #[must_use]
    pub fn measure(&self) -> f64 {
        match self {
            Figure::Polygon(c) => c.area(),
            Figure::Polyhedron(m) => m.volume(),
        }
    }

    /// The figure's inversion-symmetry pairing, if any.
    #[must_use]
    pub fn symmetry(&self) -> Option<&SymmetryPairing> {
        match self {
            Figure::Polygon(c) => c.s2_pairing(),
            Figure::Polyhedron(m) => m.ci_pairing(),
        }
    }

    pub fn translate(&self, v: RealVec3) -> Result<Figure, MeshError> {
        Ok(match self {
            Figure::Polygon(c) => Figure::Polygon(translate_chain(c, v)?),
            Figure::Polyhedron(m) => Figure::Polyhedron(translate_mesh(m, v)?),
        })
    }
}

/// Detect any inversion symmetry of a figure about the origin (S₂ for
/// polygons, Cᵢ for polyhedra).
#[must_use]
pub fn detect_symmetry(figure: &Figure) -> Option<SymmetryPairing> {
    match figure {
        Figure::Polygon(c) => detect_s2(c),
        Figure::Polyhedron(m) => detect_ci(m),
    }
}

/// On-disk shape description: a vertex table plus faces as 0-based,
/// counterclockwise-from-outside index loops. A polygon is a file with
/// exactly one face. Lengths are nanometers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShapeFile {
    pub name: String,
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

impl ShapeFile {
    /// Build the figure this file describes: one face means a polygon,
    /// several mean a closed polyhedron.
    pub fn to_figure(&self) -> Result<Figure, MeshError> {
        let vertices: Vec<RealVec3> = self
            .vertices
            .iter()
            .map(|&[x, y, z]| {
                if x.is_finite() && y.is_finite() && z.is_finite() {
                    Ok(RealVec3::new(x, y, z))
                } else {
                    Err(MeshError::InvalidMesh { reason: "non-finite vertex".into() })
                }
            })
            .collect::<Result<_, _>>()?;
        match self.faces.len() {
            0 => Err(MeshError::InvalidMesh { reason: "no faces".into() }),
            1 => {
                let face = &self.faces[0];
                for &i in face {
                    if i >= vertices.len() {
                        return Err(MeshError::InvalidMesh {
                            reason: format!("face references vertex {i} of {}", vertices.len()),
                        });
                    }
                }
                let pts: Vec<RealVec3> = face.iter().map(|&i| vertices[i]).collect();
                Ok(Figure::Polygon(VertexChain::new(pts)?))
            }
            _ => Ok(Figure::Polyhedron(PolyhedronMesh::new(vertices, self.faces.clone())?)),
        }
    }

    /// Describe a figure for serialization.
    #[must_use]
    pub fn from_figure(name: &str, figure: &Figure) -> Self {
        match figure {
            Figure::Polygon(c) => ShapeFile {
                name: name.to_string(),
                vertices: c.vertices().iter().map(|v| [v.x, v.y, v.z]).collect(),
                faces: vec![(0..c.vertices().len()).collect()],
            },
            Figure::Polyhedron(m) => ShapeFile {
                name: name.to_string(),
                vertices: m.vertices().iter().map(|v| [v.x, v.y, v.z]).collect(),
                faces: m.face_indices().to_vec(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> RealVec3 {
        RealVec3::new(x, y, z)
    }

    fn unit_square_at_origin_corner() -> Vec<RealVec3> {
        vec![v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(1.0, 1.0, 0.0), v(0.0, 1.0, 0.0)]
    }

    #[test]
    fn plane_of_unit_square() {
        let p = plane_of(&unit_square_at_origin_corner()).unwrap();
        assert_eq!(p.normal(), v(0.0, 0.0, 1.0));
        assert_eq!(p.r_perp(), 0.0);
    }

    #[test]
    fn plane_of_offset_square() {
        let pts: Vec<RealVec3> = unit_square_at_origin_corner()
            .into_iter()
            .map(|w| w + v(0.0, 0.0, 2.5))
            .collect();
        let p = plane_of(&pts).unwrap();
        assert_eq!(p.normal(), v(0.0, 0.0, 1.0));
        assert!((p.r_perp() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn plane_of_collinear_points_is_degenerate() {
        let pts = vec![v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(2.0, 0.0, 0.0)];
        assert!(matches!(plane_of(&pts), Err(MeshError::DegenerateChain { .. })));
    }

    #[test]
    fn edge_midpoint_rep_of_stretched_square() {
        // First segment V₀ = (0,0,0) → V₁ = (2,0,0): E₁ = (1,0,0), R₁ = (1,0,0).
        let pts = vec![v(0.0, 0.0, 0.0), v(2.0, 0.0, 0.0), v(2.0, 2.0, 0.0), v(0.0, 2.0, 0.0)];
        let rep = EdgeMidpointRep::from_vertices(&pts);
        // Entry 1 is the edge arriving at vertex 1 from vertex 0.
        assert_eq!(rep.e[1], v(1.0, 0.0, 0.0));
        assert_eq!(rep.r[1], v(1.0, 0.0, 0.0));
        // Entry 0 is the closing edge V₃ → V₀.
        assert_eq!(rep.e[0], v(0.0, -1.0, 0.0));
        let sum = rep.e.iter().fold(RealVec3::ZERO, |s, e| s + *e);
        assert_eq!(sum, RealVec3::ZERO);
    }

    #[test]
    fn clockwise_square_against_up_normal_is_negative_winding() {
        let mut pts = unit_square_at_origin_corner();
        pts.reverse();
        let diag = validate_polygon(&pts, Some(v(0.0, 0.0, 1.0)), PLANARITY_TOL);
        assert!(diag
            .violations
            .iter()
            .any(|e| matches!(e, MeshError::NegativeWinding { .. })));
    }

    #[test]
    fn skew_quad_is_not_planar() {
        let pts = vec![
            v(0.0, 0.0, 0.0),
            v(1.0, 0.0, 0.0),
            v(1.0, 1.0, 0.3),
            v(0.0, 1.0, 0.0),
        ];
        let diag = validate_polygon(&pts, None, PLANARITY_TOL);
        assert!(diag.violations.iter().any(|e| matches!(e, MeshError::NotPlanar { .. })));
    }

    #[test]
    fn chain_caches_area_and_radii() {
        let chain = VertexChain::new(unit_square_at_origin_corner()).unwrap();
        assert!((chain.area() - 1.0).abs() < 1e-15);
        assert!((chain.radius() - 2.0_f64.sqrt()).abs() < 1e-15);
        assert!((chain.enclosing_radii().b - 2.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(chain.center_of_gravity(), v(0.5, 0.5, 0.0));
    }

    #[test]
    fn centered_square_detects_s2() {
        let pts = vec![
            v(0.5, -0.5, 1.0),
            v(0.5, 0.5, 1.0),
            v(-0.5, 0.5, 1.0),
            v(-0.5, -0.5, 1.0),
        ];
        let chain = VertexChain::new(pts).unwrap();
        let s2 = chain.s2_pairing().expect("centered square has S2");
        assert_eq!(s2.kind, SymmetryKind::S2Polygon);
        assert_eq!(s2.half_count(), 2);
    }

    #[test]
    fn triangle_has_no_s2() {
        let pts = vec![v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0), v(-1.0, -1.0, 0.0)];
        let chain = VertexChain::new(pts).unwrap();
        assert!(chain.s2_pairing().is_none());
    }

    #[test]
    fn offset_chain_rehomes_to_cog() {
        let pts: Vec<RealVec3> = unit_square_at_origin_corner()
            .into_iter()
            .map(|w| w + v(10.0, 0.0, 0.0))
            .collect();
        let chain = VertexChain::new(pts).unwrap();
        let (shift, twin) = chain.rehomed().expect("distant chain re-homes");
        assert_eq!(shift, v(10.5, 0.5, 0.0));
        assert!(twin.center_of_gravity().norm() < 1e-12);
        assert!(twin.rehomed().is_none());
        // Any measurable offset re-homes — even the corner-anchored square
        // whose loop encloses the origin.
        let near = VertexChain::new(unit_square_at_origin_corner()).unwrap();
        let (shift, twin) = near.rehomed().expect("offset chain re-homes");
        assert_eq!(shift, v(0.5, 0.5, 0.0));
        assert!(twin.rehomed().is_none());
        // A centered chain does not: its twin would be itself.
        let centered = VertexChain::new(vec![
            v(0.5, -0.5, 0.0),
            v(0.5, 0.5, 0.0),
            v(-0.5, 0.5, 0.0),
            v(-0.5, -0.5, 0.0),
        ])
        .unwrap();
        assert!(centered.rehomed().is_none());
    }

    fn unit_cube_centered() -> (Vec<RealVec3>, Vec<Vec<usize>>) {
        let h = 0.5;
        let vertices = vec![
            v(-h, -h, -h),
            v(h, -h, -h),
            v(h, h, -h),
            v(-h, h, -h),
            v(-h, -h, h),
            v(h, -h, h),
            v(h, h, h),
            v(-h, h, h),
        ];
        let faces = vec![
            vec![0, 3, 2, 1], // bottom, normal -z
            vec![4, 5, 6, 7], // top, normal +z
            vec![0, 1, 5, 4], // front, normal -y
            vec![1, 2, 6, 5], // right, normal +x
            vec![2, 3, 7, 6], // back, normal +y
            vec![3, 0, 4, 7], // left, normal -x
        ];
        (vertices, faces)
    }

    #[test]
    fn cube_mesh_validates_and_caches() {
        let (vs, fs) = unit_cube_centered();
        let mesh = PolyhedronMesh::new(vs, fs).unwrap();
        assert!((mesh.volume() - 1.0).abs() < 1e-15);
        assert!((mesh.radius() - 0.75_f64.sqrt()).abs() < 1e-15);
        assert!(mesh.center_of_gravity().norm() < 1e-15);
        let ci = mesh.ci_pairing().expect("centered cube has Ci");
        assert_eq!(ci.kind, SymmetryKind::CiPolyhedron);
        assert_eq!(ci.half_count(), 3);
        // Per-face in-plane radius of a unit-cube face is √2/2.
        for f in mesh.faces() {
            assert!((f.enclosing_radii().b - 0.5_f64 * 2.0_f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn cube_with_reversed_face_is_invalid() {
        let (vs, mut fs) = unit_cube_centered();
        fs[1].reverse();
        let diag = validate_mesh(&vs, &fs);
        assert!(!diag.is_valid());
        assert!(diag.violations.iter().any(|e| {
            matches!(e, MeshError::InvalidMesh { reason } if reason.contains("same direction"))
        }));
    }

    #[test]
    fn cube_with_missing_face_is_open() {
        let (vs, mut fs) = unit_cube_centered();
        fs.pop();
        let diag = validate_mesh(&vs, &fs);
        assert!(diag
            .violations
            .iter()
            .any(|e| matches!(e, MeshError::InvalidMesh { reason } if reason.contains("bounds 1 faces"))));
    }

    #[test]
    fn inward_cube_is_invalid() {
        let (vs, fs) = unit_cube_centered();
        let flipped: Vec<Vec<usize>> = fs
            .into_iter()
            .map(|mut f| {
                f.reverse();
                f
            })
            .collect();
        let diag = validate_mesh(&vs, &flipped);
        assert!(diag
            .violations
            .iter()
            .any(|e| matches!(e, MeshError::InvalidMesh { reason } if reason.contains("not positive"))));
    }

    #[test]
    fn tetrahedron_has_no_ci() {
        let s = 1.0 / (2.0 * 2.0_f64.sqrt());
        let vs = vec![
            v(s, s, s),
            v(s, -s, -s),
            v(-s, s, -s),
            v(-s, -s, s),
        ];
        let fs = vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]];
        let mesh = PolyhedronMesh::new(vs, fs).unwrap();
        assert!(mesh.ci_pairing().is_none());
    }

    #[test]
    fn translate_mesh_shifts_cog_and_restores() {
        let (vs, fs) = unit_cube_centered();
        let mesh = PolyhedronMesh::new(vs, fs).unwrap();
        let shifted = translate_mesh(&mesh, v(-3.0, 1.0, 0.25)).unwrap();
        assert!((shifted.center_of_gravity() - v(3.0, -1.0, -0.25)).norm() < 1e-12);
        assert!((shifted.volume() - 1.0).abs() < 1e-14);
        assert!(shifted.rehomed().is_some());
    }

    #[test]
    fn shape_file_round_trip() {
        let (vs, fs) = unit_cube_centered();
        let mesh = PolyhedronMesh::new(vs, fs).unwrap();
        let file = ShapeFile::from_figure("cube", &Figure::Polyhedron(mesh));
        let json = serde_json::to_string(&file).unwrap();
        let back: ShapeFile = serde_json::from_str(&json).unwrap();
        let fig = back.to_figure().unwrap();
        match fig {
            Figure::Polyhedron(m) => assert!((m.volume() - 1.0).abs() < 1e-15),
            Figure::Polygon(_) => panic!("expected polyhedron"),
        }
    }

    #[test]
    fn single_face_shape_file_is_polygon() {
        let file = ShapeFile {
            name: "square".into(),
            vertices: vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [1.0, 1.0, 0.0],
                [0.0, 1.0, 0.0],
            ],
            faces: vec![vec![0, 1, 2, 3]],
        };
        match file.to_figure().unwrap() {
            Figure::Polygon(c) => assert!((c.area() - 1.0).abs() < 1e-15),
            Figure::Polyhedron(_) => panic!("expected polygon"),
        }
    }
}
