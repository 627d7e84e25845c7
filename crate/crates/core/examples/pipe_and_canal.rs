//! Characteristic circles of pipe and canal surfaces swept by the unit sphere.
use envlie::char_curve::TraceOptions;
use envlie::envelope::{Characteristic, SurfaceSystem};
use envlie::exact::{format_rational, rat};
use envlie::presets;
use envlie::quadric::Quadric;

fn main() -> envlie::error::Result<()> {
    for (name, m) in [("pipe", presets::pipe()), ("canal", presets::canal())] {
        let sys = SurfaceSystem::new(Quadric::unit_sphere(), m);
        for t in [rat(0, 1), rat(1, 2), rat(1, 1)] {
            match sys.characteristic(&t, &TraceOptions::default())? {
                Characteristic::Circle(c) => println!(
                    "{name} t = {}: circle in the sphere frame, center {:?}, radius^2 {}",
                    format_rational(&t),
                    c.center.iter().map(format_rational).collect::<Vec<_>>(),
                    format_rational(&c.radius_sq)
                ),
                other => println!("{name} t = {}: {other:?}", format_rational(&t)),
            }
        }
    }
    Ok(())
}
