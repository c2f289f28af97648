use std::ffi::CStr;
use std::ptr;

use carleman_lift_ffi::*;

fn c(re: f64, im: f64) -> ClComplex {
    ClComplex { re, im }
}

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    let n = unsafe { cl_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn concise_section_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(cl_trigpoly_case_study(c(1.0, 0.0), c(1.0, 0.0), &mut g), ClStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(cl_section_build(g, ClScheme::ConciseCf as i32, 4, &mut s), ClStatus::Ok);
        assert_eq!(cl_section_dim(s), 4);
        let mut m = vec![ClComplex::default(); 16];
        assert_eq!(cl_section_matrix(s, m.as_mut_ptr(), m.len()), ClStatus::Ok);
        // G(k, k) = i k g_0 with g_0 = a = 1
        assert_eq!(m[5], c(0.0, 2.0));
        assert_eq!(cl_section_matrix(s, m.as_mut_ptr(), 15), ClStatus::BufferTooSmall);

        let mut tr = ptr::null_mut();
        let x0 = c(0.3, 0.4);
        assert_eq!(cl_section_solve(s, x0, 0.5, 10, &mut tr), ClStatus::Ok);
        assert_eq!((cl_trajectory_len(tr), cl_trajectory_dim(tr), cl_trajectory_valid_samples(tr)), (11, 4, 11));
        let mut times = [0.0; 11];
        assert_eq!(cl_trajectory_times(tr, times.as_mut_ptr(), 11), ClStatus::Ok);
        assert_eq!(times[10], 0.5);
        let mut z1 = [ClComplex::default(); 11];
        assert_eq!(cl_trajectory_component(tr, 0, z1.as_mut_ptr(), 11), ClStatus::Ok);
        let mut x = ClComplex::default();
        assert_eq!(cl_case_exact_solution(c(1.0, 0.0), x0, 0.5, &mut x), ClStatus::Ok);
        // z_1 ~ e^{ix}
        let ex = carleman_lift::numerics::CScalar::new(-x.im, x.re).exp();
        assert!((z1[10].re - ex.re).abs() < 1e-2 && (z1[10].im - ex.im).abs() < 1e-2);
        assert_eq!(cl_trajectory_component(tr, 4, z1.as_mut_ptr(), 11), ClStatus::InvalidArgument);

        cl_trajectory_free(tr);
        cl_section_free(s);
        cl_trigpoly_free(g);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut g = ptr::null_mut();
        let coeffs = [c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(cl_trigpoly_new(1, coeffs.as_ptr(), 3, &mut g), ClStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(cl_section_build(g, ClScheme::ConciseCf as i32, 3, &mut s), ClStatus::Precondition);
        assert!(last_error().contains("negative frequency"));
        assert_eq!(cl_section_build(g, 9, 3, &mut s), ClStatus::InvalidArgument);
        assert_eq!(cl_section_build(ptr::null(), 0, 3, &mut s), ClStatus::NullPointer);
        assert_eq!(cl_trigpoly_new(1, coeffs.as_ptr(), 2, &mut g), ClStatus::InvalidArgument);
        let mut y = ClComplex::default();
        assert_eq!(cl_trigpoly_eval(g, c(0.0, 0.0), &mut y), ClStatus::Ok);
        assert_eq!(y, c(2.0, 0.0));
        let mut out = 0.0;
        assert_eq!(cl_cf_bound(g, c(0.0, 3.0), 10.0, 2, 0.0, &mut out), ClStatus::Precondition);
        cl_trigpoly_free(g);
        cl_trigpoly_free(ptr::null_mut());
        assert_eq!(cl_section_dim(ptr::null()), 0);
    }
}

#[test]
fn scalar_entry_points() {
    unsafe {
        assert!((cl_cf_guaranteed_time_range(0.0) - 0.0524).abs() < 5e-4);
        let mut t = 0.0;
        assert_eq!(cl_actual_time_range(0.0, 0.0, &mut t), ClStatus::Ok);
        assert!((t - std::f64::consts::PI / 3.0).abs() < 1e-9);
        assert_eq!(cl_carleman_time_range(1.0, 1.0, c(0.0, 0.0), &mut t), ClStatus::Ok);
        assert!((t - (-1f64).exp()).abs() < 1e-15);
        let mut b = 0.0;
        assert_eq!(cl_carleman_bound(1.0, 1.0, c(0.1, 0.0), 3, 10.0, &mut b), ClStatus::Precondition);
        let mut class = ClClass::Equilibrium;
        assert_eq!(cl_case_classify(c(0.0, -1.0), c(1.5, 0.0), &mut class, &mut t), ClStatus::Ok);
        assert_eq!(class, ClClass::Converges);
        assert!(t.is_nan());
        let seed = c(std::f64::consts::FRAC_PI_4, 0.5 * 2f64.ln());
        assert_eq!(cl_case_classify(c(1.0, 0.0), seed, &mut class, &mut t), ClStatus::Ok);
        assert_eq!(class, ClClass::BlowUp);
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    }
}
