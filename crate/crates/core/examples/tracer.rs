//! Numerical tracing of non-rational characteristics: moving ellipsoids
//! and a moving paraboloid.
use envlie::char_curve::TraceOptions;
use envlie::envelope::{Characteristic, SurfaceSystem};
use envlie::exact::rat;
use envlie::presets;
use envlie::quadric::Quadric;

fn main() -> envlie::error::Result<()> {
    let cases = [
        ("sheared ellipsoid", SurfaceSystem::new(Quadric::unit_sphere(), presets::sheared_ellipsoid()), [[-2.0; 3], [2.0; 3]]),
        ("paraboloid", SurfaceSystem::new(presets::paraboloid_surface(), presets::paraboloid_motion()), [[-3.0, -3.0, -1.0], [3.0, 3.0, 9.0]]),
    ];
    for (name, sys, bounds) in cases {
        let opts = TraceOptions { bounds, ..TraceOptions::default() };
        let t0 = rat(1, 2);
        println!("{name}: h = {}", sys.reduced_derivative_surface(&t0)?);
        if let Characteristic::Traced(branches) = sys.characteristic(&t0, &opts)? {
            for b in &branches {
                println!("  {} points, closed {}, length {:.6}, max residual {:.1e}", b.len(), b.closed, b.length(), b.max_residual());
            }
        }
    }
    Ok(())
}
