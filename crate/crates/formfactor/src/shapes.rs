//! Constructors for the test-suite figures: regular polygons, boxes, prisms,
//! pyramidal frusta, the Platonic solids, and the Archimedean solids used by
//! the verification suites.
//!
//! Orientation conventions are fixed so that emitted figures are
//! reproducible: the standalone regular polygon lies in `z = 0` with an edge
//! along `+x`; frustum and prism base rings have an edge *normal* to `+x`
//! (i.e. along `y`); frusta sit on their base in `z = 0` while every other
//! solid is centered on the origin. All constructors emit fully validated
//! figures with outward-oriented faces.

use crate::linalg::RealVec3;
use crate::mesh::{Figure, MeshError, PolyhedronMesh, VertexChain};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Construction errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ShapeError {
    /// Parameters outside geometric validity.
    #[error("invalid shape spec: {reason}")]
    InvalidSpec { reason: String },
    /// A constructed figure failed mesh validation (indicates a bug here,
    /// not bad parameters).
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

fn invalid(reason: impl Into<String>) -> ShapeError {
    ShapeError::InvalidSpec { reason: reason.into() }
}

/// A shape request: which figure, with which dimensions (lengths in nm,
/// angles in degrees).
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    /// Regular `fold`-gon in `z = 0`, an edge along `+x`.
    RegularPolygon { fold: usize, edge: f64 },
    /// Axis-aligned cuboid centered on the origin.
    Box { lx: f64, ly: f64, lz: f64 },
    /// Regular-`fold`-gon prism centered on the origin.
    RegularPrism { fold: usize, edge: f64, height: f64 },
    /// Pyramidal frustum, base in `z = 0`, side dihedral `alpha_deg`.
    /// `fold = 2` means a rectangular base with edges `edge` × `2·edge`.
    PyramidFrustum { fold: usize, edge: f64, alpha_deg: f64, height: f64 },
    Tetrahedron { edge: f64 },
    Cube { edge: f64 },
    Octahedron { edge: f64 },
    Dodecahedron { edge: f64 },
    Icosahedron { edge: f64 },
    Cuboctahedron { edge: f64 },
    TruncatedCube { edge: f64 },
    /// The fixed frustum used in the series/analytic overlap figure:
    /// 3-fold, base edge 1, α = 72°, H = 0.5.
    TruncatedTetrahedronFig,
}

/// Build the requested figure.
pub fn make(spec: &ShapeSpec) -> Result<Figure, ShapeError> {
    match *spec {
        ShapeSpec::RegularPolygon { fold, edge } => {
            Ok(Figure::Polygon(regular_polygon_chain(fold, edge)?))
        }
        ShapeSpec::Box { lx, ly, lz } => Ok(Figure::Polyhedron(box_mesh(lx, ly, lz)?)),
        ShapeSpec::RegularPrism { fold, edge, height } => {
            Ok(Figure::Polyhedron(regular_prism(fold, edge, height)?))
        }
        ShapeSpec::PyramidFrustum { fold, edge, alpha_deg, height } => {
            Ok(Figure::Polyhedron(pyramid_frustum(fold, edge, alpha_deg, height)?))
        }
        ShapeSpec::Tetrahedron { edge } => Ok(Figure::Polyhedron(tetrahedron(edge)?)),
        ShapeSpec::Cube { edge } => Ok(Figure::Polyhedron(cube(edge)?)),
        ShapeSpec::Octahedron { edge } => Ok(Figure::Polyhedron(octahedron(edge)?)),
        ShapeSpec::Dodecahedron { edge } => Ok(Figure::Polyhedron(dodecahedron(edge)?)),
        ShapeSpec::Icosahedron { edge } => Ok(Figure::Polyhedron(icosahedron(edge)?)),
        ShapeSpec::Cuboctahedron { edge } => Ok(Figure::Polyhedron(cuboctahedron(edge)?)),
        ShapeSpec::TruncatedCube { edge } => Ok(Figure::Polyhedron(truncated_cube(edge)?)),
        ShapeSpec::TruncatedTetrahedronFig => {
            Ok(Figure::Polyhedron(truncated_tetrahedron_fig()?))
        }
    }
}

fn check_positive(value: f64, what: &str) -> Result<(), ShapeError> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(invalid(format!("{what} must be positive and finite, got {value}")));
    }
    Ok(())
}

/// Regular `j`-gon of edge length `edge` in the `z = 0` plane, centered on
/// the origin, first edge running along `+x`.
pub fn regular_polygon_chain(j: usize, edge: f64) -> Result<VertexChain, ShapeError> {
    if j < 3 {
        return Err(invalid(format!("a polygon needs at least 3 vertices, got fold {j}")));
    }
    check_positive(edge, "edge")?;
    let r = edge / (2.0 * (PI / j as f64).sin());
    let mut vertices = Vec::with_capacity(j);
    for k in 0..j {
        // Start so that the edge from vertex 0 to vertex 1 points along +x.
        let theta = -PI / 2.0 - PI / j as f64 + 2.0 * PI * k as f64 / j as f64;
        vertices.push(RealVec3::new(r * theta.cos(), r * theta.sin(), 0.0));
    }
    Ok(VertexChain::new(vertices)?)
}

/// Base ring for prisms and frusta: regular `j`-gon with an edge normal to
/// `+x` (edge along `y`), counterclockwise about `+z`, at height `z`.
fn base_ring(j: usize, edge: f64, z: f64) -> Vec<RealVec3> {
    let r = edge / (2.0 * (PI / j as f64).sin());
    (0..j)
        .map(|k| {
            let theta = -PI / j as f64 + 2.0 * PI * k as f64 / j as f64;
            RealVec3::new(r * theta.cos(), r * theta.sin(), z)
        })
        .collect()
}

/// Faces of a solid bounded by two parallel `j`-gon rings: bottom ring at
/// indices `0..j` (wound counterclockwise seen from `+z`), top ring at
/// `j..2j`. Emits outward-oriented bottom, top, and side quadrilaterals.
fn ring_faces(j: usize) -> Vec<Vec<usize>> {
    let mut faces = Vec::with_capacity(j + 2);
    faces.push((0..j).rev().collect());
    faces.push((j..2 * j).collect());
    for k in 0..j {
        let k1 = (k + 1) % j;
        faces.push(vec![k, k1, j + k1, j + k]);
    }
    faces
}

/// Axis-aligned `lx × ly × lz` cuboid centered on the origin.
pub fn box_mesh(lx: f64, ly: f64, lz: f64) -> Result<PolyhedronMesh, ShapeError> {
    check_positive(lx, "lx")?;
    check_positive(ly, "ly")?;
    check_positive(lz, "lz")?;
    let (x, y, z) = (lx / 2.0, ly / 2.0, lz / 2.0);
    let vertices = vec![
        RealVec3::new(-x, -y, -z),
        RealVec3::new(x, -y, -z),
        RealVec3::new(x, y, -z),
        RealVec3::new(-x, y, -z),
        RealVec3::new(-x, -y, z),
        RealVec3::new(x, -y, z),
        RealVec3::new(x, y, z),
        RealVec3::new(-x, y, z),
    ];
    Ok(PolyhedronMesh::new(vertices, ring_faces(4))?)
}

/// Cube of edge `edge` centered on the origin, faces axis-aligned.
pub fn cube(edge: f64) -> Result<PolyhedronMesh, ShapeError> {
    box_mesh(edge, edge, edge)
}

/// Regular `j`-gon prism centered on the origin (base convention: edge
/// normal to `+x`).
pub fn regular_prism(j: usize, edge: f64, height: f64) -> Result<PolyhedronMesh, ShapeError> {
    if j < 3 {
        return Err(invalid(format!("a prism needs fold >= 3, got {j}")));
    }
    check_positive(edge, "edge")?;
    check_positive(height, "height")?;
    let mut vertices = base_ring(j, edge, -height / 2.0);
    vertices.extend(base_ring(j, edge, height / 2.0));
    Ok(PolyhedronMesh::new(vertices, ring_faces(j))?)
}

/// Pyramidal frustum: regular-`j`-gon base of edge `edge` in `z = 0`, side
/// faces at dihedral angle `alpha_deg` to the base, cut at height `height`.
/// The top ring is the base shrunk by `height/tan α` per apothem, so
/// `alpha_deg = 90` gives a prism exactly.
///
/// `j = 2` builds the two-fold (rectangular-base) variant with edges
/// `edge × 2·edge`; use [`rect_frustum`] to control both edges.
pub fn pyramid_frustum(
    j: usize,
    edge: f64,
    alpha_deg: f64,
    height: f64,
) -> Result<PolyhedronMesh, ShapeError> {
    if j == 2 {
        return rect_frustum(edge, 2.0 * edge, alpha_deg, height);
    }
    if j < 3 {
        return Err(invalid(format!("frustum fold must be 2 or >= 3, got {j}")));
    }
    check_positive(edge, "edge")?;
    let recession = side_recession(alpha_deg, height)?;
    let apothem = edge / (2.0 * (PI / j as f64).tan());
    if recession >= apothem {
        return Err(invalid(format!(
            "height {height} reaches the apex: needs height < apothem·tan(alpha) = {}",
            apothem * (alpha_deg.to_radians()).tan()
        )));
    }
    let top_edge = edge * (apothem - recession) / apothem;
    let mut vertices = base_ring(j, edge, 0.0);
    vertices.extend(base_ring(j, top_edge, height));
    Ok(PolyhedronMesh::new(vertices, ring_faces(j))?)
}

/// Rectangular-base frustum: `lx × ly` base in `z = 0`, side dihedral
/// `alpha_deg`, height `height`. Each side recedes by `height/tan α`.
pub fn rect_frustum(
    lx: f64,
    ly: f64,
    alpha_deg: f64,
    height: f64,
) -> Result<PolyhedronMesh, ShapeError> {
    check_positive(lx, "lx")?;
    check_positive(ly, "ly")?;
    let recession = side_recession(alpha_deg, height)?;
    if 2.0 * recession >= lx.min(ly) {
        return Err(invalid(format!(
            "height {height} reaches the apex of the {lx} x {ly} base at dihedral {alpha_deg}"
        )));
    }
    let ring = |hx: f64, hy: f64, z: f64| {
        vec![
            RealVec3::new(hx, -hy, z),
            RealVec3::new(hx, hy, z),
            RealVec3::new(-hx, hy, z),
            RealVec3::new(-hx, -hy, z),
        ]
    };
    let mut vertices = ring(lx / 2.0, ly / 2.0, 0.0);
    vertices.extend(ring(lx / 2.0 - recession, ly / 2.0 - recession, height));
    Ok(PolyhedronMesh::new(vertices, ring_faces(4))?)
}

/// Horizontal distance each side face recedes over the frustum height.
/// `alpha_deg = 90` is special-cased to exactly zero so that right frusta
/// coincide with prisms bit for bit.
fn side_recession(alpha_deg: f64, height: f64) -> Result<f64, ShapeError> {
    check_positive(height, "height")?;
    if !(alpha_deg > 0.0 && alpha_deg <= 90.0) {
        return Err(invalid(format!(
            "dihedral angle must lie in (0, 90] degrees, got {alpha_deg}"
        )));
    }
    if alpha_deg == 90.0 {
        Ok(0.0)
    } else {
        Ok(height / alpha_deg.to_radians().tan())
    }
}

/// The series/analytic overlap-figure solid: 3-fold frustum, base edge 1,
/// dihedral 72°, height 0.5.
pub fn truncated_tetrahedron_fig() -> Result<PolyhedronMesh, ShapeError> {
    pyramid_frustum(3, 1.0, 72.0, 0.5)
}

/// Regular tetrahedron of edge `edge`, centered on the origin.
pub fn tetrahedron(edge: f64) -> Result<PolyhedronMesh, ShapeError> {
    let table = vec![
        RealVec3::new(1.0, 1.0, 1.0),
        RealVec3::new(1.0, -1.0, -1.0),
        RealVec3::new(-1.0, 1.0, -1.0),
        RealVec3::new(-1.0, -1.0, 1.0),
    ];
    scaled_convex(table, edge)
}

/// Regular octahedron of edge `edge`, vertices on the axes.
pub fn octahedron(edge: f64) -> Result<PolyhedronMesh, ShapeError> {
    let mut table = Vec::new();
    for s in [1.0, -1.0] {
        table.push(RealVec3::new(s, 0.0, 0.0));
        table.push(RealVec3::new(0.0, s, 0.0));
        table.push(RealVec3::new(0.0, 0.0, s));
    }
    scaled_convex(table, edge)
}

fn golden_ratio() -> f64 {
    (1.0 + 5.0_f64.sqrt()) / 2.0
}

/// Regular icosahedron of edge `edge`.
pub fn icosahedron(edge: f64) -> Result<PolyhedronMesh, ShapeError> {
    let phi = golden_ratio();
    let mut table = Vec::new();
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            table.push(RealVec3::new(0.0, sa, sb * phi));
            table.push(RealVec3::new(sa, sb * phi, 0.0));
            table.push(RealVec3::new(sb * phi, 0.0, sa));
        }
    }
    scaled_convex(table, edge)
}

/// Regular dodecahedron of edge `edge`.
pub fn dodecahedron(edge: f64) -> Result<PolyhedronMesh, ShapeError> {
    let phi = golden_ratio();
    let inv = 1.0 / phi;
    let mut table = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                table.push(RealVec3::new(sx, sy, sz));
            }
        }
    }
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            table.push(RealVec3::new(0.0, sa * inv, sb * phi));
            table.push(RealVec3::new(sa * inv, sb * phi, 0.0));
            table.push(RealVec3::new(sb * phi, 0.0, sa * inv));
        }
    }
    scaled_convex(table, edge)
}

/// Cuboctahedron of edge `edge`.
pub fn cuboctahedron(edge: f64) -> Result<PolyhedronMesh, ShapeError> {
    let mut table = Vec::new();
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            table.push(RealVec3::new(sa, sb, 0.0));
            table.push(RealVec3::new(sa, 0.0, sb));
            table.push(RealVec3::new(0.0, sa, sb));
        }
    }
    scaled_convex(table, edge)
}

/// Truncated cube of edge `edge` (octagon and triangle faces).
pub fn truncated_cube(edge: f64) -> Result<PolyhedronMesh, ShapeError> {
    let xi = 2.0_f64.sqrt() - 1.0;
    let mut table = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                table.push(RealVec3::new(sx * xi, sy, sz));
                table.push(RealVec3::new(sx, sy * xi, sz));
                table.push(RealVec3::new(sx, sy, sz * xi));
            }
        }
    }
    scaled_convex(table, edge)
}

/// Scale a canonical vertex table so its shortest vertex separation (the
/// edge, for every table here) becomes `edge`, then extract faces.
fn scaled_convex(table: Vec<RealVec3>, edge: f64) -> Result<PolyhedronMesh, ShapeError> {
    check_positive(edge, "edge")?;
    let mut min_sep = f64::INFINITY;
    for i in 0..table.len() {
        for j in i + 1..table.len() {
            min_sep = min_sep.min((table[i] - table[j]).norm());
        }
    }
    let s = edge / min_sep;
    convex_mesh(table.into_iter().map(|v| v * s).collect())
}

/// Assemble a mesh from the vertices of a convex solid (every vertex
/// extreme) by supporting-plane extraction: each face is the set of
/// vertices on a plane with all others strictly inside, ordered
/// counterclockwise about the outward normal.
fn convex_mesh(vertices: Vec<RealVec3>) -> Result<PolyhedronMesh, ShapeError> {
    let n = vertices.len();
    if n < 4 {
        return Err(invalid(format!("a solid needs at least 4 vertices, got {n}")));
    }
    let scale = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = 1e-9 * scale;
    let mut face_normals: BTreeMap<Vec<usize>, RealVec3> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let cross = (vertices[j] - vertices[i]).cross(vertices[k] - vertices[i]);
                if cross.norm() < 1e-12 * scale * scale {
                    continue;
                }
                let normal = cross.normalized();
                let d = normal.dot(vertices[i]);
                let heights: Vec<f64> = vertices.iter().map(|v| normal.dot(*v)).collect();
                let max = heights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let min = heights.iter().cloned().fold(f64::INFINITY, f64::min);
                let (normal, d) = if max <= d + tol {
                    (normal, d)
                } else if min >= d - tol {
                    (-normal, -d)
                } else {
                    continue;
                };
                let members: Vec<usize> = (0..n)
                    .filter(|&m| (normal.dot(vertices[m]) - d).abs() <= tol)
                    .collect();
                face_normals.entry(members).or_insert(normal);
            }
        }
    }
    let cog: RealVec3 =
        vertices.iter().fold(RealVec3::ZERO, |acc, v| acc + *v) * (1.0 / n as f64);
    let mut faces = Vec::with_capacity(face_normals.len());
    for (members, normal) in face_normals {
        faces.push(order_face(&vertices, &members, normal, cog));
    }
    Ok(PolyhedronMesh::new(vertices, faces)?)
}

/// Order a coplanar vertex subset counterclockwise about the outward
/// normal, starting from its smallest index.
fn order_face(
    vertices: &[RealVec3],
    members: &[usize],
    normal: RealVec3,
    solid_cog: RealVec3,
) -> Vec<usize> {
    let centroid = members
        .iter()
        .fold(RealVec3::ZERO, |acc, &m| acc + vertices[m])
        * (1.0 / members.len() as f64);
    let outward =
        if normal.dot(centroid - solid_cog) >= 0.0 { normal } else { -normal };
    let u = (vertices[members[0]] - centroid).normalized();
    let w = outward.cross(u);
    let mut ordered: Vec<usize> = members.to_vec();
    ordered.sort_by(|&a, &b| {
        let pa = vertices[a] - centroid;
        let pb = vertices[b] - centroid;
        let ta = f64::atan2(w.dot(pa), u.dot(pa));
        let tb = f64::atan2(w.dot(pb), u.dot(pb));
        ta.partial_cmp(&tb).unwrap()
    });
    let start = ordered
        .iter()
        .enumerate()
        .min_by_key(|(_, &m)| m)
        .map(|(pos, _)| pos)
        .unwrap();
    ordered.rotate_left(start);
    ordered
}
