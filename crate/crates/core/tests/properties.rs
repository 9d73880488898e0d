use curvlab_core::constructions::registry;
use curvlab_core::geometry::LocalGeometry;
use curvlab_core::identities::{default_samples, run, ContactKind, Identity};
use curvlab_core::structures::{chart_evaluations, validate};
use curvlab_core::{parse_expr, Chart, Jet2};
use proptest::prelude::*;

fn charts() -> Vec<Chart> {
    vec![
        registry::s2_round().unwrap().chart,
        registry::h21_chart(curvlab_core::scalar::ratio(3, 5), curvlab_core::scalar::ratio(4, 5)).unwrap().chart,
        registry::sine_cone(false).unwrap().structure.chart,
        registry::s5_spec().unwrap().chart,
        registry::ellipsoid_spec().unwrap().chart,
    ]
}

fn point_in(chart: &Chart, u: &[f64]) -> Vec<f64> {
    chart
        .domain()
        .iter()
        .zip(u)
        .map(|(iv, t)| {
            let (lo, hi) = iv.sampling_window().unwrap();
            lo + (hi - lo) * t
        })
        .collect()
}

const EXPRS: &[&str] = &[
    "sin(x)*cos(y)^2 + x*y",
    "exp(x/3)*sqrt(2 + y^2)",
    "1/(1 + x^2 + y^2)^2",
    "log(3 + x) * tan(y/4) - x^3",
    "sinh(x/2)*cosh(y/3)",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curvature_symmetries(which in 0usize..5, u in prop::collection::vec(0.0f64..1.0, 6),
                            v in prop::collection::vec(-1.0f64..1.0, 24)) {
        let chart = &charts()[which];
        let n = chart.dim();
        let p = point_in(chart, &u[..n]);
        let geo = LocalGeometry::at(chart, &p).unwrap();
        let w: Vec<&[f64]> = v.chunks(6).map(|c| &c[..n]).collect();
        let r = |a: &[f64], b: &[f64], c: &[f64], d: &[f64]| geo.curvature(a, b, c, d);
        let base = r(w[0], w[1], w[2], w[3]);
        prop_assert!((base + r(w[1], w[0], w[2], w[3])).abs() <= 1e-9);
        prop_assert!((base + r(w[0], w[1], w[3], w[2])).abs() <= 1e-9);
        prop_assert!((base - r(w[2], w[3], w[0], w[1])).abs() <= 1e-9);
        let bianchi = base + r(w[1], w[2], w[0], w[3]) + r(w[2], w[0], w[1], w[3]);
        prop_assert!(bianchi.abs() <= 1e-9);
    }

    #[test]
    fn jets_match_finite_differences(k in 0usize..5, x in -0.9f64..0.9, y in -0.9f64..0.9) {
        let e = parse_expr(EXPRS[k], &["x", "y"]).unwrap();
        let j: Jet2 = e.eval(&Jet2::seeds(&[x, y]).unwrap()).unwrap();
        let f = |a: f64, b: f64| e.eval::<f64>(&[a, b]).unwrap();
        let h = 1e-4;
        let close = |got: f64, want: f64| (got - want).abs() <= 1e-6 * want.abs().max(1.0);
        let dx = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
        let dy = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
        let dxx = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
        let dxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
        prop_assert!(close(j.value(), f(x, y)));
        prop_assert!(close(j.d(0), dx), "{} vs {}", j.d(0), dx);
        prop_assert!(close(j.d(1), dy));
        prop_assert!((j.hessian(0, 0) - dxx).abs() <= 1e-4 * dxx.abs().max(1.0));
        prop_assert!((j.hessian(0, 1) - dxy).abs() <= 1e-4 * dxy.abs().max(1.0));
        prop_assert_eq!(j.hessian(0, 1), j.hessian(1, 0));
    }

    #[test]
    fn display_reparses(k in 0usize..5, x in -0.9f64..0.9, y in -0.9f64..0.9) {
        let coords = ["x".to_string(), "y".to_string()];
        let e = parse_expr(EXPRS[k], &coords).unwrap();
        let text = e.display(&coords).to_string();
        let back = parse_expr(&text, &coords).unwrap();
        let (a, b) = (e.eval::<f64>(&[x, y]).unwrap(), back.eval::<f64>(&[x, y]).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{text}");
    }

    #[test]
    fn witness_reproduces_residual(seed in 0u64..1000) {
        let st = registry::sine_cone(true).unwrap().contact();
        let cc = st.chart().unwrap();
        let samples = default_samples(&st, 3, seed).unwrap();
        let set = chart_evaluations(cc, &samples).unwrap();
        let id = Identity::Contact(ContactKind::G1);
        let rep = run(&set, &id, 1e-7).unwrap();
        let w = rep.witness.unwrap();
        let t = cc.tensors_at(&w.point).unwrap();
        let vs: Vec<&[f64]> = w.vectors.iter().map(Vec::as_slice).collect();
        let again = id.residual(&t, &vs).unwrap();
        prop_assert!((again - rep.residual).abs() <= 1e-12);
    }
}

#[test]
fn registry_structures_validate() {
    for name in ["flat3", "flat_cosymplectic5", "h21", "h21_chart", "sine_cone_cos", "sine_cone_sin", "r_warped_surface", "s5_in_c3", "ellipsoid_in_c3", "hopf_pair"] {
        let st = registry::lookup(name).unwrap().contact().unwrap();
        let s = default_samples(&st, 5, 1).unwrap();
        let rep = validate(&st, &s, 1e-9).unwrap();
        assert!(rep.passes(), "{name}: {}", rep.max_residual());
    }
}
