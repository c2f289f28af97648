use carleman_lift::carleman::*;
use carleman_lift::casestudy::{exact_at, CaseParams};
use carleman_lift::numerics::{CScalar, TimeGrid, I};
use carleman_lift::trigpoly::{MaclaurinSeries, TrigPoly};
use carleman_lift::Error;

fn c(re: f64, im: f64) -> CScalar {
    CScalar::new(re, im)
}

#[test]
fn entries_follow_the_power_rule() {
    let series = MaclaurinSeries::from_coeffs(vec![c(0.5, 0.0), c(1.0, 2.0), c(-0.3, 0.1), c(0.2, 0.2), c(0.0, -0.05), c(0.01, 0.0), c(0.002, 0.001)]).unwrap();
    let sec = build_carleman_section(&series, 6).unwrap();
    let a = sec.matrix();
    for k in 1..=6usize {
        for kp in 1..=6usize {
            let expect = if kp + 1 >= k {
                series.coeff(kp + 1 - k) * k as f64
            } else {
                c(0.0, 0.0)
            };
            assert_eq!(a[(k - 1, kp - 1)], expect, "entry ({k}, {kp})");
        }
    }
    assert_eq!(sec.affine()[0], c(0.5, 0.0));
    assert!(sec.affine()[1..].iter().all(|z| *z == c(0.0, 0.0)));
    assert!(!sec.is_homogeneous());
    assert!(!a.is_upper_triangular());
}

#[test]
fn powers_of_initial_value() {
    let sec = build_carleman_section(&TrigPoly::case_study(c(1.0, 0.0)).maclaurin(5), 5).unwrap();
    let x0 = c(0.2, -0.1);
    for (k, y) in sec.initial_state(x0).iter().enumerate() {
        assert!((y - x0.powu(k as u32 + 1)).norm() < 1e-16);
    }
    assert!(build_carleman_section(&TrigPoly::case_study(c(1.0, 0.0)).maclaurin(2), 5).is_err());
}

#[test]
fn case_study_section_converges_with_order() {
    let p = CaseParams::from_phi(-0.5, c(0.1, 0.05)).unwrap();
    let grid = TimeGrid::span(0.5, 50).unwrap();
    let x = exact_at(&p, &grid.samples()).unwrap();
    let mut last = f64::INFINITY;
    for order in [2, 4, 8, 16] {
        let sec = build_carleman_section(&p.governing_function().maclaurin(order), order).unwrap();
        let tr = solve_finite_section(&sec, p.x0(), &grid).unwrap();
        let err = tr
            .component(0)
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < last, "order {order}: {err} !< {last}");
        last = err;
    }
    assert!(last < 1e-12);
}

#[test]
fn shifted_field_uses_integrator() {
    // u = e^{-ix} obeys u' = -ia (u - b)
    let (a, b) = (c(1.0, 0.0), c(4.0 / 3.0, 0.0));
    let g = TrigPoly::shifted_case_study(a, b);
    let x0 = c(0.05, 0.02);
    let order = 12;
    let sec = build_carleman_section(&g.maclaurin(order), order).unwrap();
    assert!(!sec.is_homogeneous());
    let grid = TimeGrid::span(0.5, 20).unwrap();
    let tr = solve_finite_section(&sec, x0, &grid).unwrap();
    for (t, s) in tr.times().iter().zip(tr.states()) {
        let u = b + ((-I * x0).exp() - b) * (-I * a * t).exp();
        assert!(((I * s[0]).exp() * u - 1.0).norm() < 1e-7, "t = {t}");
    }
}

#[test]
fn bound_dominates_small_initial_values() {
    for a in [c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)] {
        let p = CaseParams::new(a, c(0.12, -0.09)).unwrap();
        let report = CarlemanBoundReport::new(1.0, 1.0, p.x0()).unwrap();
        let grid = TimeGrid::span(report.t_star, 60).unwrap();
        let x = exact_at(&p, &grid.samples()).unwrap();
        for order in 1..=10 {
            let sec = build_carleman_section(&p.governing_function().maclaurin(order), order).unwrap();
            let tr = solve_finite_section(&sec, p.x0(), &grid).unwrap();
            for (i, &t) in grid.samples().iter().enumerate() {
                let err = (tr.state(i)[0] - x[i]).norm();
                assert!(err <= report.bound(order, t).unwrap() * (1.0 + 1e-9) + 1e-15);
            }
        }
    }
}

#[test]
fn bound_constants() {
    let r = CarlemanBoundReport::new(1.0, 1.0, c(0.0, 0.0)).unwrap();
    assert_eq!(r.tilde_r0, 1.0);
    assert!((r.t_star - 1.0 / std::f64::consts::E).abs() < 1e-15);
    let r = CarlemanBoundReport::new(1.0, 1.0, c(0.2, 0.0)).unwrap();
    assert!((r.tilde_r0 - 0.2 * std::f64::consts::E.powi(2)).abs() < 1e-14);
    assert!(matches!(r.bound(1, 2.0 * r.t_star), Err(Error::OutOfTimeRange { .. })));
    assert!(CarlemanBoundReport::new(0.0, 1.0, c(0.1, 0.0)).is_err());
    assert_eq!(carleman_bound(1.0, 1.0, c(0.0, 0.0), 4, 0.1).unwrap(), 0.0);
}

#[test]
fn local_state_bound_requires_containment() {
    let t = local_state_bound(1.0, 1.0, c(0.1, 0.0), 0.5).unwrap();
    assert!((t - 0.5 / (0.5f64.exp() - 1.0) * 5f64.ln()).abs() < 1e-14);
    assert!(matches!(local_state_bound(1.0, 1.0, c(0.6, 0.0), 0.5), Err(Error::InvalidBound { .. })));
}
