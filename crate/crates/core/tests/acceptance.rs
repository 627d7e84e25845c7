//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! to stderr (unaffected by output capture) and then asserts.

use std::cmp::Ordering;
use std::io::Write as _;
use std::time::Instant;

use envlie::char_curve::{cone_char_param, curve_to_bezier, generic_char_trace, ConeDerivativeSurface, TraceOptions};
use envlie::envelope::{envelope_mesh, Characteristic, SurfaceSystem};
use envlie::exact::{int, rat, to_f64, Mat4, Rational};
use envlie::group::{aff3_generators, se3_basis, uniform_expansion, GroupTag};
use envlie::motion::RationalMotion;
use envlie::poly::Polynomial;
use envlie::presets;
use envlie::quadric::{Quadric, QuadricFamily};
use envlie::rational_fn::RationalFunction;
use envlie::tangent::dphi1;
use envlie::trimming::{export_trimmed, trim_boundaries, trim_u_intervals, ConeKFamily, TrimOptions};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

fn report(n: u32, pass: bool, detail: &str, start: Instant, limit_s: f64) -> bool {
    let secs = start.elapsed().as_secs_f64();
    let ok = pass && secs < limit_s;
    let _ = writeln!(
        std::io::stderr(),
        "criterion {n}: {} ({detail}; {secs:.2} s, limit {limit_s} s)",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn coeffs(entries: &[(usize, Rational)]) -> [Rational; 10] {
    let mut c: [Rational; 10] = std::array::from_fn(|_| int(0));
    for (k, v) in entries {
        c[*k] = v.clone();
    }
    c
}

// basis indices
const XX: usize = 0;
const YY: usize = 1;
const ZZ: usize = 2;
const XY: usize = 3;
const XZ: usize = 4;
const YZ: usize = 5;
const X: usize = 6;
const Y: usize = 7;
const Z: usize = 8;

fn rand_rat(rng: &mut StdRng, n: i64, d: i64) -> Rational {
    rat(rng.gen_range(-n..=n), rng.gen_range(1..=d))
}

fn rand_t0(rng: &mut StdRng) -> Rational {
    let d = rng.gen_range(1..=97);
    rat(rng.gen_range(0..=d), d)
}

#[test]
fn criterion_1_dphi_golden_tables() {
    let start = Instant::now();
    let g = se3_basis();
    let mut failures = vec![];
    for r in [rat(1, 5), int(1), rat(7, 3)] {
        let q = Quadric::cone(&r).unwrap();
        let two_1r2 = int(2) * (int(1) + &r * &r);
        let want = [
            coeffs(&[(YZ, two_1r2.clone())]),
            coeffs(&[(XZ, two_1r2)]),
            coeffs(&[]),
            coeffs(&[(X, int(-2))]),
            coeffs(&[(Y, int(-2))]),
            coeffs(&[(Z, int(2) * &r * &r)]),
        ];
        for (i, w) in want.iter().enumerate() {
            if dphi1(&q, &g[i]).coeffs() != *w {
                failures.push(format!("cone r={r} gamma{}", i + 1));
            }
        }
    }
    let s = Quadric::unit_sphere();
    for (i, k) in [X, Y, Z].into_iter().enumerate() {
        if dphi1(&s, &g[3 + i]).coeffs() != coeffs(&[(k, int(-2))]) {
            failures.push(format!("sphere translation gamma{}", 4 + i));
        }
    }
    for (a, b) in [(int(1), int(1)), (int(2), int(3)), (rat(-1, 2), rat(5, 7))] {
        let p = Quadric::paraboloid(&a, &b).unwrap();
        let want = [
            coeffs(&[(Y, int(1)), (YZ, int(2) * &b)]),
            coeffs(&[(X, int(1)), (XZ, int(2) * &a)]),
            coeffs(&[(XY, int(2) * (&a - &b))]),
        ];
        for (i, w) in want.iter().enumerate() {
            if dphi1(&p, &g[i]).coeffs() != *w {
                failures.push(format!("paraboloid a={a} b={b} gamma{}", i + 1));
            }
        }
    }
    // The expansion sub-check is reported here and asserted in the ignored
    // test below; the implemented value is the linear-consistent one.
    let expansion = dphi1(&s, &uniform_expansion()).coeffs();
    let printed = coeffs(&[(XX, int(2)), (YY, int(2)), (ZZ, int(2))]);
    let expansion_ok = expansion == printed;
    let detail = format!(
        "cone/translation/paraboloid mismatches: {}; sphere expansion image {} (expected as printed: 2(x^2+y^2+z^2))",
        if failures.is_empty() { "none".to_string() } else { failures.join(", ") },
        Quadric::from_coeffs(expansion.clone()).unwrap()
    );
    report(1, failures.is_empty() && expansion_ok, &detail, start, 1.0);
    assert!(failures.is_empty(), "{failures:?}");
    // consistency of the implemented expansion image with the axis expansions
    let axes = aff3_generators();
    let sum = (3..6).fold(Quadric::zero(), |acc, i| acc.add(&dphi1(&s, &axes[i])));
    assert_eq!(sum.coeffs(), expansion);
}

#[test]
#[ignore = "the printed sign of the expansion image contradicts linearity; see the decisions ledger"]
fn c1_sphere_expansion_image_as_printed() {
    let s = Quadric::unit_sphere();
    let printed = coeffs(&[(XX, int(2)), (YY, int(2)), (ZZ, int(2))]);
    assert_eq!(dphi1(&s, &uniform_expansion()).coeffs(), printed);
}

#[test]
fn criterion_2_running_example_pullback() {
    let start = Instant::now();
    let expected: [&[i64]; 10] = [
        &[4338116, 10446368, 157385824, 233406592, 107430976],
        &[21322564, 68579872, 186419296, 195440768, 108682304],
        &[26727964, 80672992, 2451616, -86590592, 24508864],
        &[22004736, 61155328, -12087296, -78061568, 29392896],
        &[-289536, -125152768, -291359744, -45606912, 77635584],
        &[142272, 61441536, 118962688, -43902976, -74400768],
        &[-23582412, 43314320, 121132640, -311980800, -1016063680, -750809344],
        &[-54543076, -424846840, -1064846880, -1463723200, -925983040, -487677312],
        &[-79820724, -245226120, -47853600, 561255360, 589686720, -79122048],
        &[91188121, 482773672, 1173047560, 1726892960, 2216961040, 2264876032, 1601008384],
    ];
    let fam = QuadricFamily::pullback_motion(&presets::running_example_cone(), &presets::running_example());
    let d = Polynomial::from_ints(&[517, 788, 1108]);
    let factor = RationalFunction::from_poly((&d * &d).scale(&int(100)));
    let got = fam.coeffs();
    let bad: Vec<usize> = (0..10)
        .filter(|&k| &got[k] * &factor != RationalFunction::from_poly(Polynomial::from_ints(expected[k])))
        .collect();
    let ok = report(2, bad.is_empty(), &format!("mismatched coefficients: {bad:?}"), start, 5.0);
    assert!(ok);
}

#[test]
fn criterion_3_cone_parameterization_identity() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(3);
    let mut cases = 0;
    let mut bad = 0;
    while cases < 200 {
        let k: [Rational; 5] = std::array::from_fn(|_| rand_rat(&mut rng, 30, 12));
        let r = rat(rng.gen_range(1..=20), rng.gen_range(1..=20));
        if k[3].is_zero() && k[4].is_zero() {
            continue;
        }
        let d = ConeDerivativeSurface::new(k.clone(), r.clone()).unwrap();
        if d.n_poly().is_zero() {
            continue;
        }
        cases += 1;
        let c = cone_char_param(&d).unwrap();
        let [x, y, z, w] = c.components().clone();
        let cone = &(&(&x * &x) + &(&y * &y)) - &(&z * &z).scale(&(&r * &r));
        let h = [
            (&x * &w).scale(&k[0]),
            (&y * &w).scale(&k[1]),
            (&z * &w).scale(&k[2]),
            (&x * &z).scale(&k[3]),
            (&y * &z).scale(&k[4]),
        ]
        .iter()
        .fold(Polynomial::zero(), |a, b| &a + b);
        if !cone.is_zero() || !h.is_zero() || w.is_zero() {
            bad += 1;
        }
    }
    let ok = report(3, bad == 0, &format!("{cases} random (k, r), {bad} nonzero residual polynomials"), start, 5.0);
    assert!(ok);
}

fn linspace(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn running_system() -> SurfaceSystem {
    SurfaceSystem::new(presets::running_example_cone(), presets::running_example())
}

#[test]
fn criterion_4_running_example_residuals() {
    let start = Instant::now();
    let sys = running_system();
    let mesh = envelope_mesh(&sys, &sys.motion.uniform_grid(40), &linspace(40, -1.0, 1.0)).unwrap();
    let (f, df) = mesh.max_residuals();
    let emitted = mesh.emitted_rows();
    let pass = emitted == 40 && mesh.vertices.len() == 1600 && f <= 1e-8 && df <= 1e-8;
    let ok = report(
        4,
        pass,
        &format!("{emitted}/40 rows, {} vertices, max |f| = {f:.2e}, max |df/dt| = {df:.2e}", mesh.vertices.len()),
        start,
        10.0,
    );
    assert!(ok);
}

#[test]
fn criterion_5_scaling_invariance() {
    let start = Instant::now();
    let sys = running_system();
    let lambda = RationalFunction::from_poly(Polynomial::from_ints(&[1, 0, 1]));
    let scaled = running_system().with_scale(lambda.clone()).unwrap();
    let qbar = &sys.qbar;
    let mut rng = StdRng::seed_from_u64(5);
    let mut bad = vec![];
    for _ in 0..10 {
        let t0 = rand_t0(&mut rng);
        let h = sys.derivative_surface(&t0).unwrap();
        let hl = scaled.derivative_surface(&t0).unwrap();
        let diff = hl.sub(&h.scale(&lambda.eval(&t0).unwrap()));
        if !(diff.is_zero() || diff.proportionality(qbar).is_some()) {
            bad.push(t0);
        }
    }
    let tg = sys.motion.uniform_grid(12);
    let ug = linspace(12, -1.0, 1.0);
    let a = envelope_mesh(&sys, &tg, &ug).unwrap();
    let b = envelope_mesh(&scaled, &tg, &ug).unwrap();
    let same = a.vertices == b.vertices && a.faces == b.faces;
    let ok = report(
        5,
        bad.is_empty() && same,
        &format!("non-proportional t0: {}, meshes vertex-identical: {same}", bad.len()),
        start,
        5.0,
    );
    assert!(ok);
}

/// `R = I + 2/(1+|v|²)·(S + S²)` with `S = [v]×`, the Cayley transform of
/// the skew matrix of `v(t)`.
fn cayley_motion(rng: &mut StdRng) -> RationalMotion {
    let v: [Polynomial; 3] = std::array::from_fn(|_| {
        Polynomial::new((0..3).map(|_| rand_rat(rng, 5, 4)).collect())
    });
    let mut s = Mat4::<RationalFunction>::zero();
    let rf = |p: &Polynomial| RationalFunction::from_poly(p.clone());
    s.0[0][1] = -rf(&v[2]);
    s.0[0][2] = rf(&v[1]);
    s.0[1][0] = rf(&v[2]);
    s.0[1][2] = -rf(&v[0]);
    s.0[2][0] = -rf(&v[1]);
    s.0[2][1] = rf(&v[0]);
    let s2 = s.mul(&s);
    let n2 = v.iter().fold(Polynomial::from_ints(&[1]), |a, p| &a + &(p * p));
    let c = RationalFunction::new(Polynomial::from_ints(&[2]), n2).unwrap();
    let mut m = Mat4::<RationalFunction>::identity();
    for i in 0..3 {
        for j in 0..3 {
            m.0[i][j] = &m.0[i][j] + &(&c * &(&s.0[i][j] + &s2.0[i][j]));
        }
        m.0[i][3] = RationalFunction::from_poly(Polynomial::new(vec![rand_rat(rng, 5, 3), rand_rat(rng, 5, 3)]));
    }
    RationalMotion::new(m, (int(-1), int(2)), GroupTag::SE3).unwrap()
}

#[test]
fn criterion_6_body_velocity_in_algebra() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(6);
    let motions = [presets::running_example(), cayley_motion(&mut rng)];
    let mut bad = 0;
    let mut checked = 0;
    for m in &motions {
        let (lo, hi) = m.domain().clone();
        for _ in 0..20 {
            let t0 = &lo + (&hi - &lo) * rand_t0(&mut rng);
            let bv = m.body_velocity(&t0).unwrap();
            let a = bv.matrix();
            let skew = (0..3).all(|i| (0..3).all(|j| a.0[i][j] == -a.0[j][i].clone()));
            let last = a.0[3].iter().all(|c| c.is_zero());
            checked += 1;
            if !(skew && last && bv.is_skew()) {
                bad += 1;
            }
        }
    }
    let ok = report(6, bad == 0, &format!("{checked} instants over 2 motions, {bad} violations"), start, 1.0);
    assert!(ok);
}

/// Integer evaluation of `zmin < Z(u)/W(u) < zmax` at `u = a/b` for a
/// fixed `b`, in homogeneous form with cleared denominators.
struct SlabOracle {
    z: Vec<BigInt>,
    w: Vec<BigInt>,
    zmin: (BigInt, BigInt),
    zmax: (BigInt, BigInt),
}

impl SlabOracle {
    fn new(z: &Polynomial, w: &Polynomial, b: i64, zmin: &Rational, zmax: &Rational) -> Self {
        let deg = z.degree().unwrap_or(0).max(w.degree().unwrap_or(0));
        let scale = z.coeffs().iter().chain(w.coeffs()).fold(BigInt::from(1), |acc, c| acc * c.denom());
        let pre = |p: &Polynomial| -> Vec<BigInt> {
            (0..=deg)
                .map(|i| {
                    let c = p.coeff(i) * Rational::from_integer(scale.clone());
                    assert!(c.is_integer());
                    c.to_integer() * BigInt::from(b).pow((deg - i) as u32)
                })
                .collect()
        };
        SlabOracle {
            z: pre(z),
            w: pre(w),
            zmin: (zmin.numer().clone(), zmin.denom().clone()),
            zmax: (zmax.numer().clone(), zmax.denom().clone()),
        }
    }

    fn eval(c: &[BigInt], a: i64) -> BigInt {
        c.iter().rev().skip(1).fold(c[c.len() - 1].clone(), |acc, ci| acc * a + ci)
    }

    fn inside(&self, a: i64) -> bool {
        let (mut z, mut w) = (Self::eval(&self.z, a), Self::eval(&self.w, a));
        if w.is_zero() {
            return false;
        }
        if w.is_negative() {
            z = -z;
            w = -w;
        }
        // zmin = p/q < z/w  <=>  p·w < z·q  (q, w > 0)
        &self.zmin.0 * &w < &z * &self.zmin.1 && &z * &self.zmax.1 < &self.zmax.0 * &w
    }
}

#[test]
fn criterion_7_trimming() {
    let start = Instant::now();
    let sys = running_system();
    let (zmin, zmax) = (int(2), int(5));
    let opts = TrimOptions::default();
    let fam = ConeKFamily::new(&sys).unwrap();

    // classification of 10⁴ rational u per t against direct evaluation of
    // z(u) = Z(u)/W(u) from the rational parameterization
    let grid = sys.motion.uniform_grid(100);
    let region = trim_boundaries(&sys, &zmin, &zmax, &grid, &opts).unwrap();
    let n_u = 10_000i64;
    let us: Vec<Rational> = (0..n_u).map(|j| rat(2 * j + 1 - n_u, n_u)).collect();
    let (misclassified, inside): (usize, usize) = grid
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let c = cone_char_param(&fam.surface_at(t).unwrap()).unwrap();
            let oracle = SlabOracle::new(c.z(), c.w(), n_u, &zmin, &zmax);
            let ivs = region.intervals[i].as_ref().expect("row not skipped");
            // u-samples are increasing, so each open interval is an index range
            let mut claimed = vec![false; us.len()];
            for iv in ivs {
                let lo = us.partition_point(|u| iv.lo.value.cmp_rational(u) != Ordering::Less);
                let hi = us.partition_point(|u| iv.hi.value.cmp_rational(u) == Ordering::Greater);
                for flag in claimed.iter_mut().take(hi).skip(lo) {
                    *flag = true;
                }
            }
            let bad = (0..n_u).filter(|&j| oracle.inside(2 * j + 1 - n_u) != claimed[j as usize]).count();
            (bad, claimed.iter().filter(|&&c| c).count())
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    // trimmed vertices pull back into the slab
    let ex = export_trimmed(&sys, &region, 20).unwrap();
    let mut slab = 0.0f64;
    for s in &ex.strips {
        let g = sys.motion.eval(&region.t_samples[s.row]).unwrap().inverse();
        for v in &ex.mesh.vertices[s.first_vertex..s.first_vertex + s.u.len()] {
            let z = g.act_point_f64(*v)[2];
            slab = slab.max(2.0 - z).max(z - 5.0);
        }
    }

    // spline error against exact bounds with 50 knots
    let reg50 = trim_boundaries(&sys, &zmin, &zmax, &sys.motion.uniform_grid(50), &opts).unwrap();
    let mut spline_err = 0.0f64;
    for b in &reg50.branches {
        let k = &b.spline.knots;
        for w in k.windows(2) {
            for s in 1..10 {
                let tq = rat(((w[0] + (w[1] - w[0]) * s as f64 / 10.0) * 1e6).round() as i64, 1_000_000);
                let v = b.spline.eval(to_f64(&tq)).unwrap();
                let ivs = trim_u_intervals(&fam.surface_at(&tq).unwrap(), &zmin, &zmax, &opts.window).unwrap();
                let exact = ivs
                    .iter()
                    .flat_map(|iv| [&iv.lo, &iv.hi])
                    .filter(|e| e.kind == b.kind)
                    .map(|e| (e.value.to_f64() - v).abs())
                    .fold(f64::INFINITY, f64::min);
                spline_err = spline_err.max(exact);
            }
        }
    }
    let pass = region.skipped.is_empty() && misclassified == 0 && inside > 0 && slab <= 1e-9 && spline_err <= 1e-6;
    let ok = report(
        7,
        pass,
        &format!(
            "100 t x 10^4 u: {misclassified} misclassified ({inside} inside); max slab violation {:.2e}; spline max error {spline_err:.2e} over {} branches",
            slab.max(0.0),
            reg50.branches.len()
        ),
        start,
        30.0,
    );
    assert!(ok);
}

/// Two-sided sampled Hausdorff distance between traced branches and an
/// exact rational curve, restricted to the box (shrunk by `margin` for the
/// exact-to-traced direction).
fn hausdorff(
    br: &[envlie::char_curve::SampledCurve],
    c: &envlie::char_curve::HomogRationalCurve,
    bounds: [[f64; 3]; 2],
    margin: f64,
) -> f64 {
    let inside = |p: [f64; 3], m: f64| (0..3).all(|i| p[i] >= bounds[0][i] + m && p[i] <= bounds[1][i] - m);
    let n = 20_000;
    let half = std::f64::consts::FRAC_PI_2;
    let at = |th: f64| c.eval_f64(th.tan());
    let dist = |a: [f64; 3], b: [f64; 3]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
    let thetas: Vec<f64> = (1..n).map(|i| -half + std::f64::consts::PI * i as f64 / n as f64).collect();
    let samples: Vec<[f64; 3]> = thetas.iter().map(|&th| at(th)).collect();
    let h = std::f64::consts::PI / n as f64;
    let to_exact = br
        .par_iter()
        .flat_map(|b| b.points.par_iter())
        .map(|&p| {
            let (i, _) = samples
                .iter()
                .enumerate()
                .filter(|(_, s)| s.iter().all(|x| x.is_finite()))
                .map(|(i, s)| (i, dist(*s, p)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            let (mut lo, mut hi) = (thetas[i] - h, thetas[i] + h);
            let f = |th: f64| dist(at(th), p);
            for _ in 0..100 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if f(m1) < f(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            f(0.5 * (lo + hi))
        })
        .reduce(|| 0.0, f64::max);
    let to_traced = samples
        .par_iter()
        .filter(|p| p.iter().all(|x| x.is_finite()) && inside(**p, margin))
        .map(|&p| br.iter().map(|b| b.distance(p)).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max);
    to_exact.max(to_traced)
}

/// Number of closed curves cut out of the unit sphere by `h = 0`, from the
/// sign regions of `h` on a dense latitude/longitude grid (regions − 1).
fn sphere_curve_count(h: &Quadric) -> usize {
    let hf = h.to_f64();
    let (nt, np) = (600usize, 1200usize);
    let sign: Vec<bool> = (0..nt * np)
        .map(|k| {
            let (i, j) = (k / np, k % np);
            let th = std::f64::consts::PI * (i as f64 + 0.5) / nt as f64;
            let ph = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
            hf.eval([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]) > 0.0
        })
        .collect();
    let mut parent: Vec<usize> = (0..nt * np).collect();
    fn find(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    let join = |p: &mut Vec<usize>, a: usize, b: usize| {
        if sign[a] == sign[b] {
            let (ra, rb) = (find(p, a), find(p, b));
            p[ra] = rb;
        }
    };
    for i in 0..nt {
        for j in 0..np {
            let k = i * np + j;
            join(&mut parent, k, i * np + (j + 1) % np);
            if i + 1 < nt {
                join(&mut parent, k, k + np);
            }
        }
    }
    // cells around each pole touch
    for j in 0..np {
        join(&mut parent, j, 0);
        join(&mut parent, (nt - 1) * np + j, (nt - 1) * np);
    }
    let mut roots: Vec<usize> = (0..nt * np).map(|k| find(&mut parent, k)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len() - 1
}

#[test]
fn criterion_8_tracer_oracles() {
    let start = Instant::now();
    let opts = TraceOptions {
        bounds: [[-3.0, -3.0, -12.0], [3.0, 3.0, 12.0]],
        ..TraceOptions::default()
    };
    let cases: [([i64; 5], Rational); 3] =
        [([0, 0, 1, 1, 0], rat(1, 5)), ([1, -2, 3, 4, 5], rat(2, 7)), ([2, 1, 0, 1, -1], int(1))];
    let mut worst = 0.0f64;
    for (k, r) in &cases {
        let d = ConeDerivativeSurface::new(k.map(int), r.clone()).unwrap();
        let exact = cone_char_param(&d).unwrap();
        let br = generic_char_trace(&Quadric::cone(r).unwrap(), &d.to_quadric(), &opts).unwrap();
        worst = worst.max(hausdorff(&br, &exact, opts.bounds, 0.1));
    }

    let sys = SurfaceSystem::new(Quadric::unit_sphere(), presets::sheared_ellipsoid());
    let eopts = TraceOptions::default();
    let mut max_res = 0.0f64;
    let mut counts = vec![];
    let mut form_ok = true;
    for t0 in [int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)] {
        let h = sys.derivative_surface(&t0).unwrap();
        form_ok &= [XX, YY, ZZ, XZ, YZ, 9].iter().all(|&i| h.coeff(i).is_zero());
        let Characteristic::Traced(br) = sys.characteristic(&t0, &eopts).unwrap() else {
            panic!("expected a traced characteristic")
        };
        let g = sys.motion.eval(&t0).unwrap();
        for b in &br {
            for p in &b.points {
                let (a, c) = sys.residual(&t0, g.act_point_f64(*p)).unwrap();
                max_res = max_res.max(a).max(c);
            }
        }
        counts.push((br.len(), sphere_curve_count(&sys.reduced_derivative_surface(&t0).unwrap())));
    }
    let counts_ok = counts.iter().all(|(a, b)| a == b);
    let pass = worst <= 10.0 * opts.tol && max_res <= 1e-10 && counts_ok && form_ok;
    let ok = report(
        8,
        pass,
        &format!(
            "cone Hausdorff {worst:.2e} (gate {:.0e}); sheared ellipsoid: h of form k1x+k2y+k3z+k4xy: {form_ok}, max residual {max_res:.2e}, (traced, grid-scan) branches {counts:?}",
            10.0 * opts.tol
        ),
        start,
        60.0,
    );
    assert!(ok);
}

#[test]
fn criterion_9_bezier_conversion() {
    let start = Instant::now();
    let mut bad = 0;
    let mut checked = 0;
    let cases: [([i64; 5], Rational, Rational, Rational); 3] = [
        ([0, 0, 1, 1, 0], rat(1, 5), rat(-1, 2), rat(1, 2)),
        ([1, -2, 3, 4, 5], rat(2, 7), int(3), int(6)),
        ([2, 1, 0, 1, -1], int(1), int(-2), rat(1, 4)),
    ];
    for (k, r, lo, hi) in &cases {
        let c = cone_char_param(&ConeDerivativeSurface::new(k.map(int), r.clone()).unwrap()).unwrap();
        let b = curve_to_bezier(&c, lo, hi).unwrap().elevate(c.degree() + 1);
        for i in 1..=10 {
            let u = lo + (hi - lo) * rat(i, 11);
            checked += 1;
            if b.eval_u(&u) != c.eval(&u) || c.eval(&u).is_none() {
                bad += 1;
            }
        }
    }
    let ok = report(9, bad == 0, &format!("{checked} interior parameters, {bad} mismatches"), start, 1.0);
    assert!(ok);
}
