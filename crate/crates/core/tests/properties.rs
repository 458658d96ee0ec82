use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spaceform_mtw::checker::classify_point;
use spaceform_mtw::costlib::{BinOp, Expr};
use spaceform_mtw::jets::Elementary;
use spaceform_mtw::mtwcore::jacobi_map_closed;
use spaceform_mtw::oracle::fd_derivative;
use spaceform_mtw::{scan_conditions, CostFunction, Curvature, Jet, MtwInput, ProfileEngine, ScanConfig, SpaceForm, TangentVector};

fn curvature() -> impl Strategy<Value = Curvature> {
    prop::sample::select(Curvature::ALL.to_vec())
}

/// (cost name, diameter) that is A3s or A3w for each curvature.
fn setting(k: Curvature) -> (&'static str, f64) {
    match k {
        Curvature::Negative => ("neg-cosh", 2.0),
        Curvature::Zero => ("quartic", 1.0),
        Curvature::Positive => ("neg-log1p-cos", 2.5),
    }
}

struct Sample {
    space: SpaceForm,
    u: TangentVector,
    v: TangentVector,
    w: TangentVector,
}

fn sample(k: Curvature, dim: usize, seed: u64, max_v: f64) -> Sample {
    let mut rng = StdRng::seed_from_u64(seed);
    let space = SpaceForm::new(k, dim).unwrap();
    let x = space.random_point(&mut rng, 1.0);
    let u = space.random_tangent(&mut rng, &x);
    let w = space.random_tangent(&mut rng, &x);
    let r: f64 = rng.random_range(0.05..max_v);
    let v = space.random_tangent_with_norm(&mut rng, &x, r);
    Sample { space, u, v, w }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::Var), (0u32..4000).prop_map(|n| Expr::Lit(n as f64 / 8.0))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let op = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div]);
        let f = prop::sample::select(Elementary::ALL.to_vec());
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::binary(o, a, b)),
            (inner.clone(), -3i32..=4).prop_map(|(e, p)| Expr::Pow(Box::new(e), p)),
            (f, inner).prop_map(|(f, e)| Expr::call(f, e)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_product_rule(a in -2.0f64..2.0, x in -1.0f64..1.0) {
        let z = Jet::<5>::variable(x);
        let f = (z.clone() * z.clone()).scale(a) + z.clone().sin();
        let g = z.exp();
        let fg = f.clone() * g.clone();
        let want = f.derivative(1) * g.value() + f.value() * g.derivative(1);
        prop_assert!((fg.derivative(1) - want).abs() < 1e-12 * want.abs().max(1.0));
        let back = g.ln().unwrap();
        prop_assert!((back.derivative(1) - 1.0).abs() < 1e-13);
        prop_assert!(back.derivative(2).abs() < 1e-13);
    }

    #[test]
    fn parser_round_trip(e in expr()) {
        let text = e.to_string();
        let parsed = Expr::parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(parsed, e, "{}", text);
    }

    #[test]
    fn quadratic_in_u_and_w(k in curvature(), dim in 2usize..5, seed: u64, lambda in 0.1f64..4.0) {
        let (name, d) = setting(k);
        let cost = CostFunction::resolve(name, d).unwrap();
        let engine = ProfileEngine::new(&cost, k).unwrap();
        let s = sample(k, dim, seed, 0.9 * cost.lprime_limit());
        let base = MtwInput::new(&s.space, s.u.clone(), s.v.clone(), s.w.clone()).unwrap();
        let su = MtwInput::new(&s.space, s.u.scaled(lambda), s.v.clone(), s.w.clone()).unwrap();
        let sw = MtwInput::new(&s.space, s.u.scaled(-lambda), s.v.clone(), s.w.scaled(lambda)).unwrap();
        let m = engine.mtw_closed(&s.space, &base).unwrap();
        let tol = 1e-11 * (lambda * lambda * m).abs().max(1.0);
        prop_assert!((engine.mtw_closed(&s.space, &su).unwrap() - lambda * lambda * m).abs() < tol);
        prop_assert!((engine.mtw_via_jacobi(&s.space, &sw).unwrap() - lambda.powi(4) * m).abs() < tol * lambda * lambda);
    }

    #[test]
    fn closed_and_jacobi_routes_agree(k in curvature(), dim in 2usize..5, seed: u64) {
        let (name, d) = setting(k);
        let cost = CostFunction::resolve(name, d).unwrap();
        let engine = ProfileEngine::new(&cost, k).unwrap();
        let s = sample(k, dim, seed, 0.95 * cost.lprime_limit());
        let input = MtwInput::new(&s.space, s.u, s.v, s.w).unwrap();
        let a = engine.mtw_closed(&s.space, &input).unwrap();
        let b = engine.mtw_via_jacobi(&s.space, &input).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn isometry_invariance(k in curvature(), dim in 2usize..5, seed: u64) {
        let (name, d) = setting(k);
        let cost = CostFunction::resolve(name, d).unwrap();
        let engine = ProfileEngine::new(&cost, k).unwrap();
        let s = sample(k, dim, seed, 0.9 * cost.lprime_limit());
        let iso = s.space.isometry_to_origin(s.u.base());
        let moved = MtwInput::new(&s.space, iso.apply_tangent(&s.u), iso.apply_tangent(&s.v), iso.apply_tangent(&s.w)).unwrap();
        let input = MtwInput::new(&s.space, s.u, s.v, s.w).unwrap();
        let a = engine.mtw_closed(&s.space, &input).unwrap();
        let b = engine.mtw_closed(&s.space, &moved).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn nonnegative_on_orthogonal_pairs(k in curvature(), dim in 2usize..5, seed: u64) {
        let (name, d) = setting(k);
        let cost = CostFunction::resolve(name, d).unwrap();
        let engine = ProfileEngine::new(&cost, k).unwrap();
        let s = sample(k, dim, seed, 0.95 * cost.lprime_limit());
        let proj = s.space.inner(&s.u, &s.w) / s.space.inner(&s.u, &s.u);
        let w = s.w.add_scaled(-proj, &s.u);
        let input = MtwInput::new(&s.space, s.u, s.v, w).unwrap();
        prop_assert!(engine.mtw_closed(&s.space, &input).unwrap() >= -1e-8);
    }

    #[test]
    fn lower_dimension_embeds(k in curvature(), seed: u64) {
        let (name, d) = setting(k);
        let cost = CostFunction::resolve(name, d).unwrap();
        let engine = ProfileEngine::new(&cost, k).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let mut frame = |n: usize| -> Vec<f64> { (0..n).map(|_| rng.random_range(-1.0..1.0)).collect() };
        let (u, mut v, w) = (frame(2), frame(2), frame(2));
        let len = (v[0] * v[0] + v[1] * v[1]).sqrt().max(1e-3);
        let target = 0.5 * cost.lprime_limit();
        v.iter_mut().for_each(|c| *c *= target / len);
        let eval = |n: usize| {
            let space = SpaceForm::new(k, n).unwrap();
            let pad = |c: &[f64]| { let mut x = c.to_vec(); x.resize(n, 0.0); space.frame_vector(&x).unwrap() };
            let input = MtwInput::new(&space, pad(&u), pad(&v), pad(&w)).unwrap();
            engine.mtw_closed(&space, &input).unwrap()
        };
        let (m2, m4) = (eval(2), eval(4));
        prop_assert!((m2 - m4).abs() <= 1e-12 * m2.abs().max(1.0));
    }

    #[test]
    fn jacobi_map_continuous_at_small_v(k in curvature(), seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let space = SpaceForm::new(k, 3).unwrap();
        let x = space.random_point(&mut rng, 1.0);
        let u = space.random_tangent(&mut rng, &x);
        let v = space.random_tangent_with_norm(&mut rng, &x, 1e-8);
        let j = jacobi_map_closed(&space, &u, &v).unwrap();
        let diff = (j.components() + u.components()).norm();
        prop_assert!(diff <= 1e-14 * u.components().norm().max(1.0));
    }

    #[test]
    fn weak_region_is_monotone(
        c in prop::array::uniform4(-2.0f64..2.0),
        shift in prop::array::uniform4(0.0f64..1.0),
        dim in 2usize..5,
    ) {
        let [a, b, g, d] = c;
        let before = classify_point(a, b, g, d, dim);
        let after = classify_point(a - shift[0], b - shift[1], g - shift[2], d - shift[3], dim);
        if before.weak(0.0) {
            prop_assert!(after.weak(0.0));
        }
        if before.strict(0.0) {
            prop_assert!(after.strict(0.0));
        }
    }

    #[test]
    fn richardson_improves_fd(x in -1.0f64..1.0, order in 1usize..=4) {
        let exact = x.exp();
        let plain = (fd_derivative(f64::exp, x, order, 1e-2, false).unwrap() - exact).abs();
        let rich = (fd_derivative(f64::exp, x, order, 1e-2, true).unwrap() - exact).abs();
        prop_assert!(rich <= plain.max(1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn verdict_is_stable_under_refinement(eps in 1e-4f64..5e-2, k in curvature(), dim in 2usize..4) {
        let cost = match k {
            Curvature::Zero => CostFunction::resolve(&format!("quartic({eps})"), 1.0).unwrap(),
            _ => CostFunction::resolve(setting(k).0, setting(k).1).unwrap(),
        };
        let scan = |grid| scan_conditions(&cost, k, &ScanConfig { dim, grid_points: grid, ..ScanConfig::default() }).unwrap();
        prop_assert_eq!(scan(512).status, scan(8192).status);
    }
}
