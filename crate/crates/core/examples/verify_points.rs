//! Residual report for points on and off the characteristic at t = 1/2.
use envlie::char_curve::TraceOptions;
use envlie::envelope::{verify_envelope, SurfaceSystem};
use envlie::exact::rat;
use envlie::presets;

fn main() -> envlie::error::Result<()> {
    let sys = SurfaceSystem::new(presets::running_example_cone(), presets::running_example());
    let t0 = rat(1, 2);
    let ch = sys.characteristic(&t0, &TraceOptions::default())?;
    let g = sys.motion.eval(&t0)?;
    let mut pts: Vec<_> = [-0.3, 0.1, 0.6].iter().map(|&u| (t0.clone(), g.act_point_f64(ch.sample(u).unwrap()))).collect();
    pts.push((t0.clone(), [1.5, 0.5, 1.5]));
    let report = verify_envelope(&sys, &pts)?;
    print!("{}", report.to_csv());
    println!("max |f| = {:.2e}, max |df/dt| = {:.2e}", report.max.0, report.max.1);
    Ok(())
}
