//! Form factors (Fourier shape transforms) of polygons and polyhedra.
//!
//! This crate evaluates
//!
//! * `f(q, Γ) = ∬_Γ d²r e^{iq·r}` — the form factor of a planar polygon, and
//! * `F(q, Π) = ∭_Π d³r e^{iq·r}` — the form factor of a polyhedron,
//!
//! for arbitrary complex wavevectors `q ∈ ℂ³`, in units of nm² and nm³.
//! Closed analytic expressions exist for both, but they divide by `‖q∥‖²`
//! or `‖q‖²` and therefore lose all significance near the removable
//! singularities `q∥ → 0` and `q → 0`. The evaluators here switch
//! automatically to series expansions inside small-`q` windows, so the
//! returned values stay accurate to ~1e-12 relative across the whole
//! wavevector range, including exactly on the singular loci.
//!
//! Entry points: [`ff_polygon`] and [`ff_polyhedron`] (or [`ff_figure`] for
//! either kind), configured by [`EvalConfig`]. Shape constructors live in
//! [`shapes`], brute-force reference integrators in [`oracle`], and the
//! self-verification suites in [`harness`].
//!
//! The `examples/` directory walks through each capability:
//!
//! ```text
//! cargo run --example polygon_form_factor     basic polygon evaluation
//! cargo run --example polyhedron_form_factor  the polyhedron suite
//! cargo run --example stable_small_q          why the small-q series exists
//! cargo run --example series_overlap          analytic/series cross-check
//! cargo run --example symmetry_paths          inversion-symmetry fast paths
//! cargo run --example oracle_comparison       quadrature + Monte Carlo oracles
//! cargo run --example selftest_suites         the verification harness
//! cargo run --example shape_files             reading and writing shape files
//! cargo run --example threshold_tuning        scanning the switch thresholds
//! ```
//!
//! ```
//! use formfactor::{ff_figure, make, ComplexVec3, EvalConfig, RealVec3, ShapeSpec};
//!
//! let cube = make(&ShapeSpec::Cube { edge: 2.0 }).unwrap();
//! let cfg = EvalConfig::default();
//!
//! // A wavevector deep inside the singular region: the closed form would
//! // lose every digit here, but the dispatcher switches to the series and
//! // returns the volume limit to full precision.
//! let tiny = ComplexVec3::from(RealVec3::new(1e-9, 2e-9, -1e-9));
//! let f = ff_figure(tiny, &cube, &cfg).unwrap();
//! assert!((f.value.re - 8.0).abs() <= 8.0 * 1e-12);
//! assert!(f.value.im.abs() <= 1e-11);
//! ```

pub mod harness;
pub mod linalg;
pub mod mesh;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod polygon;
pub mod polyhedron;
pub mod shapes;

pub use linalg::{decompose, sinc, ComplexVec3, Plane, RealVec3, WavevectorDecomposition};
pub use mesh::{Figure, MeshError, PolyhedronMesh, ShapeFile, SymmetryPairing, VertexChain};
pub use polygon::{
    coeff_fn, ff_polygon, ff_polygon_analytic, ff_polygon_leemittra, ff_polygon_s2,
    ff_polygon_series_full_q, ff_polygon_series_inplane, EvalConfig, EvalResult, FfError, Method,
};
pub use polyhedron::{
    coeff_big_fn, ff_figure, ff_polyhedron, ff_polyhedron_analytic, ff_polyhedron_ci,
    ff_polyhedron_series, ff_prism,
};
pub use shapes::{make, ShapeError, ShapeSpec};
