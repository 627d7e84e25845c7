//! Body velocity g⁻¹ġ of the running example, an element of se(3).
use envlie::exact::{format_rational, rat};
use envlie::presets;

fn main() -> envlie::error::Result<()> {
    let m = presets::running_example();
    for t in [rat(0, 1), rat(1, 2), rat(1, 1)] {
        let v = m.body_velocity(&t)?;
        println!("t = {} (skew: {})", format_rational(&t), v.is_skew());
        for row in &v.matrix().0 {
            println!("  {}", row.iter().map(format_rational).collect::<Vec<_>>().join("  "));
        }
    }
    Ok(())
}
