#![allow(dead_code)]

use levelpath::{Complex, ExprNode, LinearCase};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Test functions with a regular seed on a smooth level curve.
pub const POOL: [(&str, (f64, f64)); 6] = [
    ("z", (1.0, 0.0)),
    ("z^2+1", (1.0, 0.0)),
    ("z^3-1", (0.5, 0.5)),
    ("exp(z)", (0.3, 0.2)),
    ("z*exp(z)", (0.5, 0.5)),
    ("(z-1)/(z+1)", (0.5, 1.0)),
];

pub fn pool() -> Vec<(&'static str, ExprNode, Complex)> {
    POOL.iter()
        .map(|(src, (re, im))| (*src, src.parse().unwrap(), Complex::new(*re, *im)))
        .collect()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn point_in_disk(rng: &mut StdRng, radius: f64) -> Complex {
    loop {
        let z = Complex::new(
            rng.gen_range(-radius..radius),
            rng.gen_range(-radius..radius),
        );
        if z.norm() <= radius {
            return z;
        }
    }
}

pub fn polar(r: f64, theta: f64) -> Complex {
    Complex::from_polar(r, theta)
}

/// A random linear case with `|a|` in [0.5, 2] and level radius in [0.5, 3].
pub fn random_linear_case(rng: &mut StdRng) -> LinearCase {
    let tau = std::f64::consts::TAU;
    let a = polar(rng.gen_range(0.5..=2.0), rng.gen_range(0.0..tau));
    let b = Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let z0 = -b / a + polar(rng.gen_range(0.5..=3.0), rng.gen_range(0.0..tau));
    LinearCase::new(a, b, z0, 0.0).unwrap()
}

/// `|got - want| / max(|want|, 1)`.
pub fn rel_err(got: Complex, want: Complex) -> f64 {
    (got - want).norm() / want.norm().max(1.0)
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

/// (expression, poles as (re, im), has log cut)
pub type JetCase = (&'static str, &'static [(f64, f64)], bool);

/// Every elementary function plus the tracing pool, each with its poles and
/// whether it carries the principal log cut.
pub const JET_POOL: [JetCase; 14] = [
    ("exp(z)", &[], false),
    ("log(z)", &[(0.0, 0.0)], true),
    ("sin(z)", &[], false),
    ("cos(z)", &[], false),
    ("tan(z)", &[(HALF_PI, 0.0), (-HALF_PI, 0.0)], false),
    ("sinh(z)", &[], false),
    ("cosh(z)", &[], false),
    ("tanh(z)", &[(0.0, HALF_PI), (0.0, -HALF_PI)], false),
    ("z", &[], false),
    ("z^2+1", &[], false),
    ("z^3-1", &[], false),
    ("z*exp(z)", &[], false),
    ("(z-1)/(z+1)", &[(-1.0, 0.0)], false),
    (
        "z^-2+sin(z)/cosh(z)",
        &[(0.0, 0.0), (0.0, HALF_PI), (0.0, -HALF_PI)],
        false,
    ),
];

pub fn far_from_singularities(
    z: Complex,
    poles: &[(f64, f64)],
    log_cut: bool,
    margin: f64,
) -> bool {
    let clear_of_poles = poles
        .iter()
        .all(|&(re, im)| (z - Complex::new(re, im)).norm() >= margin);
    let clear_of_cut = !log_cut || z.re > 0.0 || z.im.abs() >= margin;
    clear_of_poles && clear_of_cut
}
