//! The verification harness: symmetry invariance, specialization
//! cross-checks, and continuity across method switches, each reduced to a
//! single worst-case relative deviation δ.

use formfactor::harness::{
    continuity_scan, q_set_with, rotation_about, specialization_suite, symmetry_suite,
};
use formfactor::{shapes, ComplexVec3, EvalConfig, Figure, RealVec3};
use std::f64::consts::PI;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EvalConfig::default();

    // Symmetry: rotating the cube by 90° about z maps it onto itself, so
    // F(Rq) must equal F(q) for every q. The suite evaluates both sides
    // over a log-spaced grid of directions and magnitudes.
    let cube = shapes::cube(1.0)?;
    let rot = rotation_about(RealVec3::new(0.0, 0.0, 1.0), PI / 2.0);
    let q_set = q_set_with(cube.radius(), 21, (1e-6, 1e2));
    let report = symmetry_suite(&cube, &rot, &q_set, &cfg)?;
    println!(
        "symmetry    cube 90°(z):      δ = {:.3e} over {} samples ({} zero-sum pairs excluded)",
        report.delta, report.samples, report.excluded
    );
    println!("{}\n", serde_json::to_string_pretty(&report.to_json("cube-rot90z", 5e-10))?);

    // Specialization: a square frustum with 90° base angle *is* a prism
    // shifted so its base sits at z = 0. Two independent constructions,
    // one transform.
    let pyramid = Figure::Polyhedron(shapes::pyramid_frustum(4, 1.0, 90.0, 1.0)?);
    let prism = Figure::Polyhedron(shapes::regular_prism(4, 1.0, 1.0)?)
        .translate(RealVec3::new(0.0, 0.0, -0.5))?;
    let q_set = q_set_with(pyramid.radius(), 21, (1e-6, 1e2));
    let report = specialization_suite(&pyramid, &prism, &q_set, &cfg)?;
    println!(
        "special.    frustum≡prism:    δ = {:.3e} over {} samples",
        report.delta, report.samples
    );

    // Continuity: walk |q| through the switch radius and compare the two
    // methods at q·(1±η). A stable switch leaves δ_cont near machine ε.
    let icosa = Figure::Polyhedron(shapes::icosahedron(1.0)?);
    let a = icosa.radius();
    let dir = ComplexVec3::from(RealVec3::new(1.0, 2.0, 3.0).normalized());
    let switches = continuity_scan(&icosa, dir, (1e-6 / a, 10.0 / a), &cfg)?;
    println!("continuity  icosahedron, {} switch(es) along (1,2,3)̂:", switches.len());
    for sw in &switches {
        println!(
            "  |q| = {:.6e}: {} → {}  δ_cont = {:.3e}",
            sw.q_threshold, sw.method_below, sw.method_above, sw.delta_cont
        );
    }

    Ok(())
}
