//! Exact rational parameterization of the characteristic of the running
//! example at t = 1/2, in the cone frame and in world coordinates.
use envlie::char_curve::TraceOptions;
use envlie::envelope::{Characteristic, SurfaceSystem};
use envlie::exact::rat;
use envlie::presets;

fn main() -> envlie::error::Result<()> {
    let sys = SurfaceSystem::new(presets::running_example_cone(), presets::running_example());
    let t0 = rat(1, 2);
    println!("derivative surface: {}", sys.reduced_derivative_surface(&t0)?);
    let Characteristic::Rational(c) = sys.characteristic(&t0, &TraceOptions::default())? else {
        unreachable!("cone under a rigid motion")
    };
    println!("{}", serde_json::to_string_pretty(&c.to_json()).unwrap());
    let g = sys.motion.eval(&t0)?;
    for u in [-0.5, 0.0, 0.5] {
        let p = g.act_point_f64(c.eval_f64(u));
        let (f, df) = sys.residual(&t0, p)?;
        println!("u = {u:5}: {p:?}  |f| = {f:.1e}  |df/dt| = {df:.1e}");
    }
    Ok(())
}
