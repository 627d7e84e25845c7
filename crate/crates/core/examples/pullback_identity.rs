//! Implicit equation of the moving cone of the running example: the
//! pullback family cleared by 100·(1108t² + 788t + 517)².
use envlie::exact::int;
use envlie::poly::Polynomial;
use envlie::presets;
use envlie::quadric::QuadricFamily;
use envlie::rational_fn::RationalFunction;

fn main() {
    let fam = QuadricFamily::pullback_motion(&presets::running_example_cone(), &presets::running_example());
    let d = Polynomial::from_ints(&[517, 788, 1108]);
    let factor = RationalFunction::from_poly((&d * &d).scale(&int(100)));
    let names = ["x^2", "y^2", "z^2", "xy", "xz", "yz", "x", "y", "z", "1"];
    for (c, n) in fam.coeffs().iter().zip(names) {
        println!("{n:>4}: {}", c * &factor);
    }
}
