mod common;

use common::{pool, random_linear_case, rng};
use levelpath::{
    linear_level_path, tangent, tangent_log, trace, Complex, Exponential, ExprNode, LinearCase,
    Orientation, TraceConfig,
};
use proptest::prelude::*;

const EPS: f64 = 1e-8;

fn arb_point() -> impl Strategy<Value = Complex> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex::new(re, im))
}

proptest! {
    #[test]
    fn tangent_has_unit_speed(idx in 0usize..6, z in arb_point(), reverse in any::<bool>()) {
        let (_, f, _) = &pool()[idx];
        let orientation = if reverse { Orientation::Reverse } else { Orientation::Forward };
        if let Ok(t) = tangent(f, z, orientation, EPS) {
            prop_assert!((t.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn reversal_negates_the_tangent(idx in 0usize..6, z in arb_point()) {
        let (_, f, _) = &pool()[idx];
        if let Ok(t) = tangent(f, z, Orientation::Forward, EPS) {
            let back = tangent(f, z, Orientation::Reverse, EPS).unwrap();
            prop_assert_eq!(back, -t);
        }
    }

    #[test]
    fn log_form_agrees_with_direct_form(
        c0 in arb_point(), c1 in arb_point(), c2 in arb_point(), z in arb_point()
    ) {
        // g = c0 + c1*z + c2*z^2
        let g = ExprNode::Add(
            Box::new(ExprNode::Add(
                Box::new(ExprNode::Const(c0)),
                Box::new(ExprNode::Mul(Box::new(ExprNode::Const(c1)), Box::new(ExprNode::Var))),
            )),
            Box::new(ExprNode::Mul(Box::new(ExprNode::Const(c2)), Box::new(ExprNode::PowInt(Box::new(ExprNode::Var), 2)))),
        );
        let g_prime = c1 + 2.0 * c2 * z;
        prop_assume!(g_prime.norm() > 0.1);
        let direct = tangent(&Exponential(&g), z, Orientation::Forward, EPS).unwrap();
        let log = tangent_log(&g, z, Orientation::Forward, EPS).unwrap();
        prop_assert!((direct - log).norm() <= 1e-10);
    }
}

#[test]
fn closed_form_solves_the_tangent_ode() {
    let mut rng = rng(3);
    for _ in 0..50 {
        let case = random_linear_case(&mut rng);
        let f = case.function();
        for k in 0..10 {
            let s = -5.0 + k as f64;
            let h = 1e-5;
            let derivative =
                (linear_level_path(&case, s + h) - linear_level_path(&case, s - h)) / (2.0 * h);
            let t = tangent(&f, linear_level_path(&case, s), Orientation::Forward, EPS).unwrap();
            assert!((derivative - t).norm() <= 1e-6, "{derivative} vs {t}");
        }
    }
}

#[test]
fn traces_are_deterministic() {
    let (_, f, seed) = pool().swap_remove(4);
    let cfg = TraceConfig {
        arc_budget: 2.0,
        ..TraceConfig::new(f, seed)
    };
    assert_eq!(trace(&cfg).unwrap(), trace(&cfg).unwrap());
}

#[test]
fn concentric_seeds_give_concentric_circles() {
    let f: ExprNode = "z".parse().unwrap();
    for r in [1.0, 2.0, 3.0] {
        let cfg = TraceConfig {
            arc_budget: 7.0 * r,
            ..TraceConfig::new(f.clone(), Complex::new(r, 0.0))
        };
        let result = trace(&cfg).unwrap();
        assert_eq!(result.termination, levelpath::Termination::ClosedLoop);
        let case = LinearCase::new(
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(r, 0.0),
            0.0,
        )
        .unwrap();
        for p in &result.points {
            assert!((p.z - linear_level_path(&case, p.s)).norm() <= 1e-6);
        }
    }
}
