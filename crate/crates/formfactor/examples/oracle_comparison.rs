//! Quadrature + Monte Carlo oracles: independent integrators that share no
//! machinery with the evaluators, used to pin expected values. The
//! adaptive quadrature fans the solid into tetrahedra from its COG; the
//! Monte Carlo fallback handles meshes that are not star-shaped.

use formfactor::oracle::{mc_polyhedron, quad_polygon, quad_polyhedron, OracleError};
use formfactor::{ff_polygon, ff_polyhedron, shapes, ComplexVec3, EvalConfig, PolyhedronMesh, RealVec3};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EvalConfig::default();

    // Polygon: a unit square at a generic in-plane q.
    let square = shapes::regular_polygon_chain(4, 1.0)?;
    let q = ComplexVec3::from(RealVec3::new(2.0, 3.0, 0.0));
    let library = ff_polygon(q, &square, &cfg, None)?.value;
    let oracle = quad_polygon(q, &square, 1e-10)?;
    println!("square  library = {:+.12e}{:+.12e}i", library.re, library.im);
    println!("        oracle  = {:+.12e}{:+.12e}i", oracle.value.re, oracle.value.im);
    println!(
        "        deviation = {:.3e} after {} evaluations (est. error {:.1e})\n",
        (library - oracle.value).norm() / library.norm(),
        oracle.evaluations,
        oracle.est_error
    );

    // Polyhedron: the icosahedron at a moderate wavevector.
    let icosa = shapes::icosahedron(1.0)?;
    let q = ComplexVec3::from(RealVec3::new(1.0, 2.0, 3.0).normalized() * 3.0);
    let library = ff_polyhedron(q, &icosa, &cfg, icosa.ci_pairing())?.value;
    let oracle = quad_polyhedron(q, &icosa, 1e-8)?;
    println!("icosahedron  library = {:+.12e}{:+.12e}i", library.re, library.im);
    println!("             oracle  = {:+.12e}{:+.12e}i", oracle.value.re, oracle.value.im);
    println!(
        "             deviation = {:.3e} after {} evaluations\n",
        (library - oracle.value).norm() / library.norm(),
        oracle.evaluations
    );

    // An L-shaped prism is not star-shaped from its COG: the fan would
    // double-count, so the quadrature refuses and Monte Carlo steps in.
    let l_prism = l_shaped_prism()?;
    match quad_polyhedron(q, &l_prism, 1e-8) {
        Err(OracleError::NotStarShaped { min_signed_volume }) => println!(
            "L-prism: fan quadrature refused (flipped tetrahedron, signed volume {min_signed_volume:.2e})"
        ),
        other => panic!("expected NotStarShaped, got {other:?}"),
    }
    let library = ff_polyhedron(q, &l_prism, &cfg, l_prism.ci_pairing())?.value;
    let mc = mc_polyhedron(q, &l_prism, 400_000, 42);
    let dev = (library - mc.value).norm();
    println!("         library = {:+.9e}{:+.9e}i", library.re, library.im);
    println!("         MC      = {:+.9e}{:+.9e}i", mc.value.re, mc.value.im);
    println!(
        "         deviation = {:.3e}, MC standard error = {:.3e} ({} samples)",
        dev, mc.est_error, mc.evaluations
    );
    assert!(dev < 5.0 * mc.est_error, "library disagrees with MC beyond 5σ");

    Ok(())
}

/// Six-sided L cross-section extruded along z — concave, so its COG fan
/// contains an inverted tetrahedron.
fn l_shaped_prism() -> Result<PolyhedronMesh, Box<dyn std::error::Error>> {
    let lower: Vec<[f64; 3]> = [
        [0.0, 0.0],
        [2.0, 0.0],
        [2.0, 1.0],
        [1.0, 1.0],
        [1.0, 2.0],
        [0.0, 2.0],
    ]
    .iter()
    .map(|&[x, y]| [x, y, 0.0])
    .collect();
    let mut vertices: Vec<RealVec3> = lower.iter().map(|&[x, y, z]| RealVec3::new(x, y, z)).collect();
    vertices.extend(lower.iter().map(|&[x, y, _]| RealVec3::new(x, y, 1.0)));

    let mut faces = vec![
        vec![5, 4, 3, 2, 1, 0],    // bottom, outward −z
        vec![6, 7, 8, 9, 10, 11],  // top, outward +z
    ];
    for k in 0..6 {
        let next = (k + 1) % 6;
        faces.push(vec![k, next, next + 6, k + 6]);
    }
    Ok(PolyhedronMesh::new(vertices, faces)?)
}
