//! Rational Bézier form of a cone characteristic on a pole-free interval.
use envlie::char_curve::{cone_char_param, curve_to_bezier, ConeDerivativeSurface};
use envlie::exact::{int, rat};

fn main() -> envlie::error::Result<()> {
    let d = ConeDerivativeSurface::new([0, 0, 1, 1, 0].map(int), rat(1, 5))?;
    let c = cone_char_param(&d)?;
    let b = curve_to_bezier(&c, &rat(-1, 2), &rat(1, 2))?;
    println!("{}", serde_json::to_string_pretty(&b.to_json()).unwrap());
    let u = rat(1, 7);
    assert_eq!(b.eval_u(&u), c.eval(&u));
    println!("degree-elevated to {}", b.elevate(c.degree() + 2).degree());
    Ok(())
}
