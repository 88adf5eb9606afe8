//! Inversion-symmetry fast paths: a polygon with a twofold axis or a
//! polyhedron with a center pairs its vertices r ↔ −r, which folds the
//! edge sum to half length and antisymmetrizes away the leading
//! cancellation. The pairing is detected once on the mesh and handed to
//! the evaluator.

use formfactor::{
    ff_polygon, ff_polygon_s2, ff_polyhedron, ff_polyhedron_ci, shapes, ComplexVec3, EvalConfig,
    RealVec3,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EvalConfig::default();

    // A regular hexagon has the twofold in-plane symmetry; detection runs
    // at construction and the chain carries the pairing.
    let hexagon = shapes::regular_polygon_chain(6, 1.0)?;
    let pairing = hexagon.s2_pairing().expect("a regular hexagon pairs opposite vertices");
    println!(
        "hexagon: {} vertices fold to {} antisymmetrized pairs",
        hexagon.vertices().len(),
        pairing.half_count()
    );

    let q = ComplexVec3::from(RealVec3::new(2.0, -1.0, 0.5));
    let generic = ff_polygon(q, &hexagon, &cfg, None)?;
    let folded = ff_polygon_s2(q, &hexagon, pairing)?;
    println!(
        "  generic path [{}]: {:+.15e} {:+.15e}i",
        generic.method, generic.value.re, generic.value.im
    );
    println!(
        "  folded path  [{}]: {:+.15e} {:+.15e}i",
        folded.method, folded.value.re, folded.value.im
    );
    println!(
        "  agreement: {:.3e}\n",
        (generic.value - folded.value).norm() / generic.value.norm()
    );

    // Same idea in 3D: the cuboctahedron is centrosymmetric.
    let mesh = shapes::cuboctahedron(1.0)?;
    let pairing = mesh.ci_pairing().expect("the cuboctahedron has an inversion center");
    println!(
        "cuboctahedron: {} vertices, {} faces, inversion pairing present",
        mesh.vertices().len(),
        mesh.faces().len()
    );

    let generic = ff_polyhedron(q, &mesh, &cfg, None)?;
    let folded = ff_polyhedron_ci(q, &mesh, pairing, &cfg)?;
    println!(
        "  generic path [{}]: {:+.15e} {:+.15e}i",
        generic.method, generic.value.re, generic.value.im
    );
    println!(
        "  folded path  [{}]: {:+.15e} {:+.15e}i",
        folded.method, folded.value.re, folded.value.im
    );
    println!(
        "  agreement: {:.3e}\n",
        (generic.value - folded.value).norm() / generic.value.norm()
    );

    // For a centrosymmetric solid at real q the transform is purely real;
    // the folded path delivers that by construction instead of leaving a
    // ~1e-16 imaginary residue.
    println!("imaginary residue at real q (exactly zero on the folded path):");
    println!("  generic: {:+.3e}", generic.value.im);
    println!("  folded:  {:+.3e}", folded.value.im);

    // A tetrahedron has no inversion center, so there is nothing to detect.
    let tetra = shapes::tetrahedron(1.0)?;
    assert!(tetra.ci_pairing().is_none());
    println!("\ntetrahedron: no inversion center, pairing detection returns None");

    Ok(())
}
