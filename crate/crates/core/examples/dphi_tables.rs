//! Tangent-map images of the SE(3) generators for a cone, a sphere and a
//! paraboloid, with image rank and stabilizer kernel.
use envlie::exact::{int, rat};
use envlie::group::{generator_names, generators, GroupTag};
use envlie::quadric::Quadric;
use envlie::tangent::{dphi1, image_basis, stabilizer_kernel};

fn main() -> envlie::error::Result<()> {
    let gens = generators(GroupTag::SE3);
    let names = generator_names(GroupTag::SE3);
    for (label, q) in [
        ("cone r = 1/5", Quadric::cone(&rat(1, 5))?),
        ("unit sphere", Quadric::unit_sphere()),
        ("paraboloid a = 1, b = 2", Quadric::paraboloid(&int(1), &int(2))?),
    ] {
        println!("{label}: {q}");
        for (g, n) in gens.iter().zip(&names) {
            let im = dphi1(&q, g);
            println!("  {n}: {}", if im.is_zero() { "0".into() } else { im.to_string() });
        }
        let (_, rank) = image_basis(&q, &gens);
        println!("  rank {rank}, kernel dimension {}", stabilizer_kernel(&q, &gens).len());
    }
    Ok(())
}
