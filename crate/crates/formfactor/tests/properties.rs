//! Randomized invariants of the geometry and vector layers under proptest:
//! identities that must hold for *any* admissible input, not just the
//! hand-picked figures of the acceptance gate.

use formfactor::harness::{delta, mat3_apply, rotation_about};
use formfactor::mesh::plane_of;
use formfactor::shapes::{box_mesh, pyramid_frustum, regular_polygon_chain, regular_prism};
use formfactor::{
    decompose, sinc, ComplexVec3, Plane, PolyhedronMesh, RealVec3, VertexChain,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

fn real3(lim: f64) -> impl Strategy<Value = RealVec3> {
    (-lim..lim, -lim..lim, -lim..lim).prop_map(|(x, y, z)| RealVec3::new(x, y, z))
}

fn complex3(lim: f64) -> impl Strategy<Value = ComplexVec3> {
    (real3(lim), real3(lim)).prop_map(|(re, im)| ComplexVec3::from_parts(re, im))
}

fn unit3() -> impl Strategy<Value = RealVec3> {
    real3(1.0)
        .prop_filter("usable direction", |v| v.norm() > 1e-2)
        .prop_map(RealVec3::normalized)
}

/// Boxes, prisms, and frusta over a broad parameter range. The frustum
/// height is drawn as a fraction of the apex height so the construction
/// never degenerates.
fn mesh_strategy() -> impl Strategy<Value = PolyhedronMesh> {
    prop_oneof![
        (0.3..3.0f64, 0.3..3.0f64, 0.3..3.0f64)
            .prop_map(|(lx, ly, lz)| box_mesh(lx, ly, lz).unwrap()),
        (3usize..9, 0.3..2.0f64, 0.2..2.0f64)
            .prop_map(|(j, edge, h)| regular_prism(j, edge, h).unwrap()),
        (3usize..9, 0.5..2.0f64, 50.0..80.0f64, 0.1..0.85f64).prop_map(|(j, edge, alpha, f)| {
            let apothem = edge / (2.0 * (PI / j as f64).tan());
            let height = f * apothem * alpha.to_radians().tan();
            pyramid_frustum(j, edge, alpha, height).unwrap()
        }),
    ]
}

/// Independent volume: fan every face into triangles and sum signed
/// tetrahedra against the vertex mean (any fixed apex works for a closed
/// oriented surface).
fn fan_volume(mesh: &PolyhedronMesh) -> f64 {
    let verts = mesh.vertices();
    let mut apex = RealVec3::ZERO;
    for &v in verts {
        apex = apex + v;
    }
    apex = apex * (1.0 / verts.len() as f64);
    let mut six_v = 0.0;
    for face in mesh.face_indices() {
        let v0 = verts[face[0]] - apex;
        for w in face[1..].windows(2) {
            let v1 = verts[w[0]] - apex;
            let v2 = verts[w[1]] - apex;
            six_v += v0.dot(v1.cross(v2));
        }
    }
    six_v / 6.0
}

proptest! {
    /// The Hermitian norm² is the real part of the self conjugated dot,
    /// whose imaginary part vanishes.
    #[test]
    fn norm_sq_is_self_conjugated_dot(u in complex3(10.0)) {
        let d = u.dot_conjugated(u);
        prop_assert!((u.norm_sq() - d.re).abs() <= 1e-15 * u.norm_sq());
        prop_assert!(d.im.abs() <= 1e-15 * u.norm_sq());
    }

    /// On real vectors the bilinear and conjugated dots coincide with the
    /// real dot product exactly.
    #[test]
    fn real_vectors_collapse_both_dots(a in real3(10.0), b in real3(10.0)) {
        let (ca, cb) = (ComplexVec3::from(a), ComplexVec3::from(b));
        prop_assert_eq!(ca.dot_bilinear(cb), ca.dot_conjugated(cb));
        prop_assert_eq!(ca.dot_bilinear(cb).re, a.dot(b));
        prop_assert_eq!(ca.dot_bilinear(cb).im, 0.0);
    }

    /// The complex cross product is bilinear-orthogonal to both factors.
    #[test]
    fn cross_is_orthogonal_to_factors(u in complex3(10.0), v in complex3(10.0)) {
        prop_assume!(u.norm() > 1e-3 && v.norm() > 1e-3);
        let w = u.cross(v);
        prop_assert!(w.dot_bilinear(u).norm() <= 1e-14 * u.norm_sq() * v.norm());
        prop_assert!(w.dot_bilinear(v).norm() <= 1e-14 * u.norm() * v.norm_sq());
    }

    /// sinc is even across both its branches.
    #[test]
    fn sinc_is_even(re in -30.0..30.0f64, im in -3.0..3.0f64) {
        let z = Complex64::new(re, im);
        prop_assert_eq!(sinc(z), sinc(-z));
    }

    /// Near the origin, sinc(x) differs from 1 − x²/6 by at most the next
    /// alternating-series term x⁴/120 (plus fp slack on the subtraction).
    #[test]
    fn sinc_matches_quadratic_taylor(x in -1.0..1.0f64) {
        let s = sinc(Complex64::new(x, 0.0));
        prop_assert!(s.im.abs() == 0.0);
        let err = (s.re - (1.0 - x * x / 6.0)).abs();
        prop_assert!(err <= x.powi(4) / 120.0 + 4e-16);
    }

    /// Splitting q against a plane reconstructs q, leaves no normal
    /// component in the in-plane part, and is idempotent.
    #[test]
    fn decompose_splits_cleanly(q in complex3(10.0), n in unit3(), r in -2.0..2.0f64) {
        let plane = Plane::new(n, r);
        let d = decompose(q, &plane);
        let scale = q.norm().max(1e-300);
        prop_assert!((d.q_par + d.q_perp - q).norm() <= 1e-15 * scale);
        prop_assert!(d.q_par.dot_real(n).norm() <= 1e-15 * scale);
        let d2 = decompose(d.q_par, &plane);
        prop_assert!((d2.q_par - d.q_par).norm() <= 1e-15 * d.q_par.norm().max(1e-300));
        prop_assert!(d2.q_perp_scalar.norm() <= 1e-15 * scale);
    }

    /// Polygon area scales as s² and is invariant under rotation.
    #[test]
    fn polygon_area_scales_quadratically(
        j in 3usize..10,
        edge in 0.3..3.0f64,
        s in 0.1..10.0f64,
        axis in unit3(),
        angle in 0.0..TAU,
    ) {
        let chain = regular_polygon_chain(j, edge).unwrap();
        let rot = rotation_about(axis, angle);
        let turned = VertexChain::new(
            chain.vertices().iter().map(|&v| mat3_apply(&rot, v) * s).collect(),
        ).unwrap();
        let expect = s * s * chain.area();
        prop_assert!((turned.area() - expect).abs() <= 1e-13 * expect);
    }

    /// Polyhedron volume scales as s³ and matches an independent
    /// tetrahedron fan.
    #[test]
    fn volume_scales_cubically_and_matches_fan(mesh in mesh_strategy(), s in 0.1..10.0f64) {
        prop_assert!((fan_volume(&mesh) - mesh.volume()).abs() <= 1e-12 * mesh.volume());
        let scaled = PolyhedronMesh::new(
            mesh.vertices().iter().map(|&v| v * s).collect(),
            mesh.face_indices().to_vec(),
        ).unwrap();
        let expect = s.powi(3) * mesh.volume();
        prop_assert!((scaled.volume() - expect).abs() <= 1e-13 * expect);
    }

    /// The area-weighted outward normals of a closed mesh sum to zero.
    #[test]
    fn closed_mesh_normals_cancel(mesh in mesh_strategy()) {
        let mut sum = RealVec3::ZERO;
        let mut total = 0.0;
        for face in mesh.faces() {
            sum = sum + face.plane().normal() * face.area();
            total += face.area();
        }
        prop_assert!(sum.norm() <= 1e-12 * total);
    }

    /// The fitted plane of a loop does not depend on which vertex the loop
    /// starts at.
    #[test]
    fn plane_survives_cyclic_reindexing(
        j in 3usize..10,
        edge in 0.3..2.0f64,
        shift in 1usize..9,
        axis in unit3(),
        angle in 0.0..TAU,
    ) {
        let rot = rotation_about(axis, angle);
        let verts: Vec<RealVec3> = regular_polygon_chain(j, edge).unwrap()
            .vertices()
            .iter()
            .map(|&v| mat3_apply(&rot, v) + axis * 0.7)
            .collect();
        let mut cycled = verts.clone();
        cycled.rotate_left(shift % j);
        let p1 = plane_of(&verts).unwrap();
        let p2 = plane_of(&cycled).unwrap();
        prop_assert!(p1.normal().dot(p2.normal()) >= 1.0 - 1e-12);
        prop_assert!((p1.r_perp() - p2.r_perp()).abs() <= 1e-12 * (1.0 + p1.r_perp().abs()));
    }

    /// The pairwise deviation metric is symmetric in its two lists.
    #[test]
    fn delta_is_symmetric(
        pairs in prop::collection::vec(
            ((-5.0..5.0f64, -5.0..5.0f64), (-5.0..5.0f64, -5.0..5.0f64)),
            1..40,
        ),
    ) {
        let qs: Vec<ComplexVec3> = (0..pairs.len())
            .map(|i| ComplexVec3::from(RealVec3::new(i as f64 + 1.0, 0.0, 0.0)))
            .collect();
        let f1: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p.0.0, p.0.1)).collect();
        let f2: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p.1.0, p.1.1)).collect();
        let d12 = delta(&qs, &f1, &f2).unwrap();
        let d21 = delta(&qs, &f2, &f1).unwrap();
        prop_assert_eq!(d12.delta, d21.delta);
        prop_assert_eq!(d12.samples, d21.samples);
        prop_assert_eq!(d12.excluded, d21.excluded);
    }
}
