//! Generates a graded mesh, writes it as MSH 2.2 and reads it back.

use pspl::mesh::{generate_unit_square, read_msh2, write_msh2, BoundaryTag, MeshSpec};

fn main() -> pspl::Result<()> {
    let spec = MeshSpec::new(16, 2.0);
    let mesh = generate_unit_square(&spec)?;
    println!("{} vertices, {} cells, area {:.12}", mesh.num_vertices(), mesh.num_cells(), mesh.total_area());
    for tag in BoundaryTag::ALL {
        println!("  {tag:?}: length {:.4}", mesh.boundary_measure(tag));
    }

    let path = std::env::temp_dir().join("pspl_example.msh");
    write_msh2(&mesh, &path)?;
    let back = read_msh2(&path)?;
    assert_eq!(back.content_hash(), mesh.content_hash());
    println!("wrote {} (hash {})", path.display(), &mesh.content_hash()[..12]);
    Ok(())
}
