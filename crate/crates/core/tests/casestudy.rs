use std::f64::consts::{FRAC_PI_2, PI};

use carleman_lift::casestudy::*;
use carleman_lift::numerics::{rk45, CScalar, TimeGrid, I};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> CScalar {
    CScalar::new(re, im)
}

#[test]
fn closed_form_agrees_with_direct_integration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..12 {
        let phi = rng.gen_range(-FRAC_PI_2..FRAC_PI_2);
        let x0 = c(rng.gen_range(-3.0..3.0), rng.gen_range(-0.5..1.5));
        let p = CaseParams::from_phi(phi, x0).unwrap();
        let horizon = blowup_time(&p).map_or(3.0, |t0| (0.8 * t0).min(3.0));
        let grid = TimeGrid::span(horizon, 60).unwrap();
        let a = p.a();
        let tr = rk45(|_, y, dy| dy[0] = a * (1.0 - (I * y[0]).exp()), &[x0], &grid, 1e-11, 1e-13).unwrap();
        let x = exact_trajectory(&p, &grid).unwrap();
        for (num, ex) in tr.component(0).iter().zip(&x) {
            assert!((num - ex).norm() < 1e-6 * ex.norm().max(1.0), "phi={phi} x0={x0}: {num} vs {ex}");
        }
    }
}

#[test]
fn branch_is_tracked_through_many_turns() {
    // a = 1, winding trajectory: Re x grows by 2 pi per period
    let p = CaseParams::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
    let x = exact_at(&p, &[0.0, 2.0 * PI, 4.0 * PI]).unwrap();
    assert!(((x[1] - x[0]).re.abs() - 2.0 * PI).abs() < 1e-9);
    assert!(((x[2] - x[0]).re.abs() - 4.0 * PI).abs() < 1e-9);
    assert!(classify_trajectory(&p).unwrap() == TrajectoryClass::Diverges);
}

#[test]
fn scan_and_analytic_blowup_times_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut found = 0;
    for _ in 0..40 {
        // seeds on the blow-up manifold: e^{-ix0} = 1 - e^{ia t0}
        let phi = rng.gen_range(-1.2..1.2);
        let t0 = rng.gen_range(0.2..2.5);
        let a = (I * phi).exp();
        let x0 = I * (1.0 - (I * a * t0).exp()).ln();
        let p = CaseParams::new(a, x0).unwrap();
        let analytic = blowup_time(&p).expect("seed on the manifold");
        assert!(analytic <= t0 + 1e-9);
        let scanned = detect_blowup(&p, t0 + 0.5).unwrap().unwrap();
        assert!((scanned - analytic).abs() < 1e-6);
        found += 1;
    }
    assert_eq!(found, 40);
}

#[test]
fn generic_seeds_do_not_blow_up() {
    let p = CaseParams::new(c(0.0, 1.0), c(0.3, 0.4)).unwrap();
    assert_eq!(blowup_time(&p), None);
    assert_eq!(detect_blowup(&p, 10.0).unwrap(), None);
}

#[test]
fn classification_by_winding() {
    let class = |a, x0| classify_trajectory(&CaseParams::new(a, x0).unwrap()).unwrap();
    assert_eq!(class(c(1.0, 0.0), c(0.0, 0.0)), TrajectoryClass::Equilibrium);
    assert_eq!(class(c(1.0, 0.0), c(-0.5, 0.0)), TrajectoryClass::LimitCycle);
    assert_eq!(class(c(1.0, 0.0), c(PI, 0.0)), TrajectoryClass::Diverges);
    assert_eq!(class(c(0.0, -1.0), c(1.5, 0.0)), TrajectoryClass::Converges);
    assert_eq!(class(c(0.0, 1.0), c(1.5, 0.0)), TrajectoryClass::Diverges);
    let seed = I * (1.0 - I).ln();
    match class(c(1.0, 0.0), seed) {
        TrajectoryClass::BlowUp(t0) => assert!((t0 - FRAC_PI_2).abs() < 1e-9),
        other => panic!("{other:?}"),
    }
}

#[test]
fn limit_cycles_are_periodic() {
    let p = CaseParams::new(c(1.0, 0.0), c(0.7, 0.1)).unwrap();
    assert_eq!(classify_trajectory(&p).unwrap(), TrajectoryClass::LimitCycle);
    let x = exact_at(&p, &[0.0, 2.0 * PI]).unwrap();
    assert!((x[1] - x[0]).norm() < 1e-9);
}

#[test]
fn exact_error_is_power_of_first_order_error() {
    let p = CaseParams::from_phi(0.4, c(0.3, 0.5)).unwrap();
    for t in [0.05, 0.2, 0.45] {
        let e1 = exact_error(&p, 1, t);
        for n in 1..=8 {
            assert!((exact_error(&p, n, t) - e1.powi(n as i32)).abs() <= 1e-15);
            let z = exact_z(&p, 1, n, t).unwrap();
            let x = exact_solution(&p, t).unwrap();
            let direct = (z * (-I * x).exp() - 1.0).norm();
            assert!((direct - exact_error(&p, n, t)).abs() <= 1e-12);
        }
    }
}

#[test]
fn time_ranges() {
    assert!((actual_time_range(0.0, 0.0).unwrap() - PI / 3.0).abs() < 1e-12);
    assert_eq!(actual_time_range(0.0, 2.0).unwrap(), f64::INFINITY);
    for phi in [-1.2, -0.4, 0.3, 1.0, FRAC_PI_2] {
        for y in [0.0, 0.5] {
            let t = actual_time_range(phi, y).unwrap();
            let bound = (2.0 * y).exp();
            if t.is_finite() {
                assert!((h_phi(phi, t) - bound).abs() < 1e-8 * bound);
                assert!(h_phi(phi, 0.5 * t) <= bound);
            }
            assert!(t > cf_guaranteed_time_range(y));
        }
    }
    assert!(actual_time_range(2.0, 0.0).is_err());
}

#[test]
fn global_window() {
    // h <= 4 always, and h -> 1 for phi > 0
    let sup = h_supremum(1.0).unwrap();
    assert!(sup > 1.0 && sup < 4.0);
    assert!(global_window_holds(1.0, 0.5 * sup.ln() + 1e-6).unwrap());
    assert!(!global_window_holds(1.0, 0.5 * sup.ln() - 1e-6).unwrap());
    assert!(h_supremum(0.0).is_err());
}
