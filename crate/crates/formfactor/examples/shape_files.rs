//! Reading and writing shape files: the JSON interchange format used by
//! the CLI. A shape file is a name, a vertex list, and face index loops;
//! one face means a polygon, several mean a polyhedron.

use formfactor::{ff_figure, shapes, ComplexVec3, EvalConfig, RealVec3, ShapeFile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = EvalConfig::default();

    // Round-trip a generated solid through JSON.
    let mesh = shapes::dodecahedron(1.0)?;
    let figure = formfactor::Figure::Polyhedron(mesh);
    let file = ShapeFile::from_figure("dodecahedron", &figure);
    let json = serde_json::to_string_pretty(&file)?;
    println!(
        "dodecahedron.json: {} vertices, {} faces, {} bytes",
        file.vertices.len(),
        file.faces.len(),
        json.len()
    );

    let reread: ShapeFile = serde_json::from_str(&json)?;
    let restored = reread.to_figure()?;
    let q = ComplexVec3::from(RealVec3::new(1.0, 2.0, 3.0));
    let before = ff_figure(q, &figure, &cfg)?.value;
    let after = ff_figure(q, &restored, &cfg)?.value;
    println!("F before write = {:+.16e} {:+.16e}i", before.re, before.im);
    println!("F after reread = {:+.16e} {:+.16e}i", after.re, after.im);
    assert_eq!(before, after, "JSON round-trip must be bit-exact");

    // Shape files also describe figures no generator covers: here a
    // hand-written 3-4-5 right-triangle plate.
    let custom = r#"{
        "name": "right-triangle",
        "vertices": [[0.0, 0.0, 0.0], [3.0, 0.0, 0.0], [3.0, 4.0, 0.0]],
        "faces": [[0, 1, 2]]
    }"#;
    let plate: ShapeFile = serde_json::from_str(custom)?;
    let figure = plate.to_figure()?;
    println!("\n{}: measure = {} (expect area 6)", plate.name, figure.measure());
    let r = ff_figure(ComplexVec3::from(RealVec3::new(0.5, -0.25, 0.0)), &figure, &cfg)?;
    println!("f(0.5,-0.25,0) = {:+.12e} {:+.12e}i   [{}]", r.value.re, r.value.im, r.method);

    // Malformed input is rejected with a diagnosis, not a panic: this mesh
    // leaves an edge shared by only one face.
    let broken = r#"{
        "name": "open-box",
        "vertices": [[0,0,0],[1,0,0],[1,1,0],[0,1,0],[0,0,1],[1,0,1],[1,1,1],[0,1,1]],
        "faces": [[3,2,1,0],[4,5,6,7],[0,1,5,4],[1,2,6,5],[2,3,7,6]]
    }"#;
    let open: ShapeFile = serde_json::from_str(broken)?;
    match open.to_figure() {
        Err(e) => println!("\nopen-box rejected: {e}"),
        Ok(_) => panic!("a mesh with a missing face must not validate"),
    }

    Ok(())
}
