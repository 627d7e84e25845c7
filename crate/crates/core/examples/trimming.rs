//! Trimmed envelope patch of the running example between z = 2 and z = 5.
use envlie::envelope::{obj_string, SurfaceSystem};
use envlie::exact::int;
use envlie::presets;
use envlie::trimming::{export_trimmed, trim_boundaries, TrimOptions};

fn main() -> envlie::error::Result<()> {
    let sys = SurfaceSystem::new(presets::running_example_cone(), presets::running_example());
    let region = trim_boundaries(&sys, &int(2), &int(5), &sys.motion.uniform_grid(21), &TrimOptions::default())?;
    for b in &region.branches {
        println!("{:?} branch: {} knots, u from {:.6} to {:.6}", b.kind, b.spline.knots.len(), b.spline.values[0], b.spline.values.last().unwrap());
    }
    if let Some(Some(ivs)) = region.intervals.get(10) {
        for iv in ivs {
            println!("t = 1/2: u in {:?}", iv.bounds_f64());
        }
    }
    let ex = export_trimmed(&sys, &region, 10)?;
    let path = std::env::temp_dir().join("running_example_trimmed.obj");
    std::fs::write(&path, obj_string(&ex.mesh.vertices, &ex.mesh.faces))?;
    println!("wrote {}", path.display());
    Ok(())
}
