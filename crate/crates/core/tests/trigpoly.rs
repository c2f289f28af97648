use carleman_lift::numerics::CScalar;
use carleman_lift::trigpoly::TrigPoly;
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = TrigPoly> {
    (0usize..=3).prop_flat_map(|m| {
        prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 2 * m + 1).prop_map(move |cs| {
            let coeffs = cs
                .into_iter()
                .map(|(re, im)| CScalar::new(re, im))
                .map(|z| if z.norm() > 2.0 { z / z.norm() * 2.0 } else { z })
                .collect();
            TrigPoly::new(m, coeffs).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn maclaurin_sum_converges_to_g(g in poly(), r in 0.0..1.0f64, theta in 0.0..std::f64::consts::TAU) {
        let x = CScalar::from_polar(r, theta);
        let series = g.maclaurin(30);
        let exact = g.eval(x);
        prop_assert!((series.eval(x) - exact).norm() <= 1e-12 * exact.norm().max(1.0));
    }

    #[test]
    fn coefficients_obey_growth_condition(g in poly()) {
        let r0 = g.degree() as f64;
        let c0: f64 = g.frequencies().map(|(m, gm)| gm.norm() * (m.unsigned_abs().max(1) as f64)).sum();
        let series = g.maclaurin(25);
        let mut fact = 1.0;
        for n in 1..=25 {
            fact *= n as f64;
            let limit = c0 * r0.powi(n as i32 - 1) / fact;
            prop_assert!(series.coeff(n).norm() <= limit * (1.0 + 1e-12) + 1e-300);
        }
        let (default_c0, default_r0) = g.growth_constants(25);
        prop_assert_eq!(default_r0, r0.max(1.0));
        if g.degree() >= 1 {
            prop_assert!(default_c0 <= c0 * (1.0 + 1e-12));
        }
    }
}
