//! Envelope mesh of the running example with residuals, written as OBJ.
use envlie::envelope::{envelope_mesh, export_obj, SurfaceSystem};
use envlie::presets;

fn main() -> envlie::error::Result<()> {
    let sys = SurfaceSystem::new(presets::running_example_cone(), presets::running_example());
    let u: Vec<f64> = (0..40).map(|i| -1.0 + 2.0 * i as f64 / 39.0).collect();
    let mesh = envelope_mesh(&sys, &sys.motion.uniform_grid(40), &u)?;
    let (f, df) = mesh.max_residuals();
    println!("{} vertices, {} faces, max |f| = {f:.2e}, max |df/dt| = {df:.2e}", mesh.vertices.len(), mesh.faces.len());
    let path = std::env::temp_dir().join("running_example.obj");
    export_obj(&mesh, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
