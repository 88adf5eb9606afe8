//! The polyhedron suite: evaluate boxes, prisms, frusta, and the Platonic
//! solids, and see how the dispatcher picks its route as |q| grows.

use formfactor::{ff_polyhedron, shapes, ComplexVec3, EvalConfig, RealVec3};
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EvalConfig::default();

    // A unit cube at (π, π, π): the transform separates into one
    // sinc(π/2) = 2/π per axis, so F = (2/π)³.
    let cube = shapes::cube(1.0)?;
    let q = ComplexVec3::from(RealVec3::new(PI, PI, PI));
    let r = ff_polyhedron(q, &cube, &cfg, cube.ci_pairing())?;
    println!("cube  F(π,π,π) = {:.16}  ((2/π)³ = {:.16})", r.value.re, (2.0 / PI).powi(3));

    // Every convex solid returns its volume at q = 0.
    for (label, mesh) in [
        ("tetrahedron ", shapes::tetrahedron(1.0)?),
        ("octahedron  ", shapes::octahedron(1.0)?),
        ("icosahedron ", shapes::icosahedron(1.0)?),
        ("dodecahedron", shapes::dodecahedron(1.0)?),
    ] {
        let r = ff_polyhedron(ComplexVec3::ZERO, &mesh, &cfg, mesh.ci_pairing())?;
        println!("{label} F(0) = {:.15}  (volume = {:.15})", r.value.re, mesh.volume());
    }

    // A pyramidal frustum: base edge 1, side dihedral 72°, height 0.3.
    let frustum = shapes::pyramid_frustum(4, 1.0, 72.0, 0.3)?;
    let q = ComplexVec3::from(RealVec3::new(1.0, 2.0, 3.0));
    let r = ff_polyhedron(q, &frustum, &cfg, frustum.ci_pairing())?;
    println!(
        "frustum F(1,2,3) = {:+.12e} {:+.12e}i   [{}]",
        r.value.re, r.value.im, r.method
    );

    // Sweep |q| on the icosahedron and watch the method change: the series
    // takes over below the switch radius, exact limits catch q = 0, and the
    // inversion-symmetric fast path handles everything else.
    println!("\nicosahedron along (1,2,3)/√14:");
    println!("{:>10}  {:>23}  method", "a|q|", "|F|");
    let icosa = shapes::icosahedron(1.0)?;
    let a = icosa.radius();
    let dir = RealVec3::new(1.0, 2.0, 3.0).normalized();
    for aq in [0.0, 1e-9, 1e-4, 1e-2, 0.5, 2.0, 10.0] {
        let q = ComplexVec3::from(dir * (aq / a));
        let r = ff_polyhedron(q, &icosa, &cfg, icosa.ci_pairing())?;
        println!("{aq:>10.1e}  {:>23.16e}  {}", r.value.norm(), r.method);
    }

    Ok(())
}
