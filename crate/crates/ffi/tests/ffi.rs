use std::ffi::CStr;
use std::ptr;

use orbinv_ffi::*;

fn c(re: f64, im: f64) -> OrbinvComplex {
    OrbinvComplex { re, im }
}

fn last_error() -> String {
    let p = orbinv_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn shift_group(n: usize, m: usize) -> *mut OrbinvGroup {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { orbinv_group_shift(n, m, &mut g) }, OrbinvStatus::Ok);
    g
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(orbinv_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn group_construction_and_errors() {
    let orders = [4u64];
    let exps = [1i64, 2];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(orbinv_group_new(orders.as_ptr(), 1, exps.as_ptr(), 2, &mut g), OrbinvStatus::Ok);
        assert_eq!(orbinv_group_dim(g), 2);
        assert_eq!(orbinv_group_num_generators(g), 1);
        orbinv_group_free(g);

        let zero = [0u64];
        let mut bad = ptr::null_mut();
        assert_eq!(orbinv_group_new(zero.as_ptr(), 1, exps.as_ptr(), 2, &mut bad), OrbinvStatus::InvalidArgument);
        assert!(bad.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(orbinv_group_new(ptr::null(), 1, exps.as_ptr(), 2, &mut bad), OrbinvStatus::NullPointer);
        assert_eq!(orbinv_group_dim(ptr::null()), 0);
        orbinv_group_free(ptr::null_mut());
    }
}

#[test]
fn table_json() {
    let orders = [4u64];
    let exps = [1i64, 2];
    unsafe {
        let mut g = ptr::null_mut();
        orbinv_group_new(orders.as_ptr(), 1, exps.as_ptr(), 2, &mut g);
        let mut t = ptr::null_mut();
        assert_eq!(orbinv_table_new(g, 3, &mut t), OrbinvStatus::Ok);
        assert_eq!(orbinv_table_total_dim(t), 3);
        let s = orbinv_table_to_json(t);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        orbinv_string_free(s);
        assert!(text.contains(r#""singles":[4,2]"#));
        assert!(text.contains(r#""0,1":[2,1]"#));
        let mut t2 = ptr::null_mut();
        assert_eq!(orbinv_table_new(g, 4, &mut t2), OrbinvStatus::InvalidArgument);
        orbinv_table_free(t);
        orbinv_group_free(g);
    }
}

#[test]
fn transform_is_invariant_through_the_abi() {
    let g = shift_group(2, 3);
    let x: Vec<OrbinvComplex> = (0..6).map(|k| c(0.3 + k as f64 * 0.1, 0.7 - k as f64 * 0.2)).collect();
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(
            orbinv_transform_new(g, OrbinvTransformKind::Phi, OrbinvPhiMode::Repaired, 42, &mut t),
            OrbinvStatus::Ok
        );
        let dim = orbinv_transform_output_dim(t);
        assert_eq!(dim, 3 * 6 + 1);
        let mut fx = vec![OrbinvComplex::default(); dim];
        assert_eq!(orbinv_transform_eval(t, x.as_ptr(), 6, fx.as_mut_ptr(), dim), OrbinvStatus::Ok);

        let powers = [1u64, 2];
        let mut gx = vec![OrbinvComplex::default(); 6];
        assert_eq!(orbinv_group_act(g, powers.as_ptr(), 2, x.as_ptr(), 6, gx.as_mut_ptr(), 6), OrbinvStatus::Ok);
        let mut fgx = vec![OrbinvComplex::default(); dim];
        orbinv_transform_eval(t, gx.as_ptr(), 6, fgx.as_mut_ptr(), dim);
        for (a, b) in fx.iter().zip(&fgx) {
            assert!((a.re - b.re).abs() < 1e-10 && (a.im - b.im).abs() < 1e-10);
        }

        let mut d = -1.0;
        let mut w = [9u64; 2];
        assert_eq!(orbinv_orbit_distance(g, gx.as_ptr(), x.as_ptr(), 6, &mut d, w.as_mut_ptr(), 2), OrbinvStatus::Ok);
        assert!(d < 1e-12);
        assert_eq!(w, powers);

        let mut small = vec![OrbinvComplex::default(); 3];
        assert_eq!(orbinv_transform_eval(t, x.as_ptr(), 6, small.as_mut_ptr(), 3), OrbinvStatus::BufferTooSmall);
        assert_eq!(orbinv_transform_eval(t, x.as_ptr(), 5, fx.as_mut_ptr(), dim), OrbinvStatus::DimensionMismatch);
        assert!(last_error().contains("dimension"));

        orbinv_transform_free(t);
        orbinv_group_free(g);
    }
}

#[test]
fn hermite_round_trip() {
    let g = shift_group(2, 3);
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(orbinv_hermite_new(g, &mut h), OrbinvStatus::Ok);
        let s = orbinv_hermite_to_json(h);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        orbinv_string_free(s);
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        let signature: i64 = json["signature"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).sum();

        let ones = vec![c(1.0, 0.0); 6];
        let mut out = vec![OrbinvComplex::default(); 6];
        let mut ok = false;
        assert_eq!(orbinv_hermite_eval(h, ones.as_ptr(), 6, out.as_mut_ptr(), 6, &mut ok), OrbinvStatus::Ok);
        assert!(ok);
        assert!(out.iter().all(|z| (z.re - 1.0).abs() < 1e-14 && z.im.abs() < 1e-14));

        let mut q = 0.0;
        assert_eq!(orbinv_hermite_q(h, ones.as_ptr(), 6, &mut q), OrbinvStatus::Ok);
        assert_eq!(q, signature as f64);

        let mut sign = 0i8;
        assert_eq!(orbinv_hermite_g(h, ones.as_ptr(), 6, &mut sign, out.as_mut_ptr(), 6), OrbinvStatus::Ok);
        assert_eq!(sign, if signature > 0 { 1 } else { -1 });

        let mut with_zero = ones.clone();
        with_zero[0] = c(0.0, 0.0);
        assert_eq!(orbinv_hermite_g(h, with_zero.as_ptr(), 6, &mut sign, out.as_mut_ptr(), 6), OrbinvStatus::Domain);

        orbinv_hermite_free(h);
        orbinv_group_free(g);
    }
}

#[test]
fn success_clears_the_error() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(orbinv_group_shift(0, 3, &mut g), OrbinvStatus::InvalidArgument);
        assert!(!orbinv_last_error().is_null());
        let g = shift_group(2, 2);
        assert!(orbinv_last_error().is_null());
        orbinv_group_free(g);
    }
}
