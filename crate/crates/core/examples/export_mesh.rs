//! Grid CSV and OBJ export of a surface, and reading them back.

use adslf::grid::Grid2;
use adslf::io::{GridTable, ObjMesh};
use adslf::presets;
use adslf::surfaces::{base_node, case2_initial, fundamental_forms, reconstruct_case2, solve_omega};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid2::square(-0.5, 0.5, 0.1)?;
    let (a, b) = presets::example_5_7_coefficients(0.6);
    let nu = presets::example_5_7_nu(grid);
    let omega = solve_omega(&presets::example_5_7_frames(grid), a, b);
    let sf = reconstruct_case2(&nu, &omega, case2_initial(0.6), base_node(&grid, 0.0, 0.0))?;
    let geo = fundamental_forms(&sf)?;

    let table = GridTable::empty_for(&grid).with_nu(&nu.values).with_surface(&sf).with_geometry(&geo);
    let csv = table.to_string()?;
    println!("{}", csv.lines().take(3).collect::<Vec<_>>().join("\n"));
    println!("CSV round trip exact: {}", GridTable::read(csv.as_bytes())?.to_string()? == csv);

    let mesh = ObjMesh::from_surface(&sf, None, 0)?;
    let obj = mesh.to_string()?;
    println!("OBJ: {} vertices, {} faces, {} polylines", mesh.vertices.len(), mesh.faces.len(), mesh.lines.len());
    println!("OBJ round trip exact: {}", ObjMesh::parse(&obj)? == mesh);
    Ok(())
}
