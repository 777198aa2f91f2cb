use std::ffi::{CStr, CString};
use std::ptr;

use bouquet_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(bouquet_last_error()) }.to_string_lossy().into_owned()
}

fn quarter() -> *mut BouquetModel {
    let mut m = ptr::null_mut();
    assert_eq!(bouquet_model_exp(BouquetComplex { re: 0.25, im: 0.0 }, 1.0, &mut m), BouquetStatus::Ok);
    assert!(!m.is_null());
    m
}

fn address(text: &str) -> *mut BouquetAddress {
    let c = CString::new(text).unwrap();
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { bouquet_address_parse(c.as_ptr(), &mut a) }, BouquetStatus::Ok);
    a
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { bouquet_string_free(s) };
    out
}

#[test]
fn model_round_trip() {
    let m = quarter();
    unsafe {
        let mut disjoint = false;
        assert_eq!(bouquet_model_is_disjoint(m, &mut disjoint), BouquetStatus::Ok);
        assert!(disjoint);
        let z = BouquetComplex { re: 1.2, im: 0.7 };
        let mut w = BouquetComplex { re: 0.0, im: 0.0 };
        assert_eq!(bouquet_model_eval(m, z, &mut w), BouquetStatus::Ok);
        let (mut inside, mut index) = (false, i64::MIN);
        assert_eq!(bouquet_model_classify(m, z, &mut inside, &mut index), BouquetStatus::Ok);
        assert!(inside);
        assert_eq!(index, 0);
        let mut back = BouquetComplex { re: 0.0, im: 0.0 };
        assert_eq!(bouquet_model_inverse(m, index, w, &mut back), BouquetStatus::Ok);
        assert!((back.re - z.re).abs() < 1e-12 && (back.im - z.im).abs() < 1e-12);
        bouquet_model_free(m);
    }
}

#[test]
fn rejected_models_report_errors() {
    let mut m = ptr::null_mut();
    let s = bouquet_model_exp(BouquetComplex { re: 0.25, im: 0.0 }, 20.0, &mut m);
    assert_eq!(s, BouquetStatus::InfeasibleModel);
    assert!(m.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(bouquet_model_sine(-1.0, 3.0, &mut m), BouquetStatus::InfeasibleModel);
    assert_eq!(
        bouquet_model_exp(BouquetComplex { re: 0.25, im: 0.0 }, 1.0, ptr::null_mut()),
        BouquetStatus::NullPointer
    );
}

#[test]
fn addresses() {
    let a = address("0");
    let b = address("1 -1;0");
    unsafe {
        let mut ord = 0;
        assert_eq!(bouquet_address_compare(a, b, &mut ord), BouquetStatus::Ok);
        assert_eq!(ord, -1);
        assert_eq!(bouquet_address_compare(b, a, &mut ord), BouquetStatus::Ok);
        assert_eq!(ord, 1);
        let mut y = 0.0;
        assert_eq!(bouquet_address_ordinate(a, &mut y), BouquetStatus::Ok);
        assert_eq!(y, 0.5);
        let mut s = ptr::null_mut();
        assert_eq!(bouquet_address_to_string(b, &mut s), BouquetStatus::Ok);
        assert_eq!(take_string(s), "1 -1;0");
        let bad = CString::new("0 ;").unwrap();
        let mut c = ptr::null_mut();
        assert_eq!(bouquet_address_parse(bad.as_ptr(), &mut c), BouquetStatus::Parse);
        assert!(c.is_null());
        assert_eq!(bouquet_address_parse(ptr::null(), &mut c), BouquetStatus::NullPointer);
        bouquet_address_free(a);
        bouquet_address_free(b);
        bouquet_address_free(ptr::null_mut());
    }
}

#[test]
fn tracing() {
    let m = quarter();
    let a = address("0");
    unsafe {
        let mut z = BouquetComplex { re: 0.0, im: 0.0 };
        assert_eq!(bouquet_trace(m, a, 1.0, &mut z), BouquetStatus::Ok);
        assert!((z.re - 1.4332041213).abs() < 1e-9 && z.im == 0.0);
        let ts = [1.0, 2.0, 3.0];
        let mut out = [BouquetComplex { re: 0.0, im: 0.0 }; 3];
        assert_eq!(bouquet_trace_many(m, a, ts.as_ptr(), 3, out.as_mut_ptr()), BouquetStatus::Ok);
        assert_eq!(out[0], z);
        assert!(out[0].re < out[1].re && out[1].re < out[2].re);
        let (mut t, mut e) = (f64::NAN, BouquetComplex { re: 0.0, im: 0.0 });
        assert_eq!(bouquet_endpoint(m, a, &mut t, &mut e), BouquetStatus::Ok);
        assert!(t.abs() < 1e-6);
        assert!((e.re.exp() - 2.153292364).abs() < 1e-6);
        assert_eq!(bouquet_trace(m, a, -5.0, &mut z), bouquet_trace(m, a, -5.0, &mut z));
        assert_ne!(bouquet_trace(m, a, -5.0, &mut z), BouquetStatus::Ok);
        bouquet_address_free(a);
        bouquet_model_free(m);
    }
}

#[test]
fn brush_json() {
    let m = quarter();
    let hairs = [address("-1"), address("0"), address("1")];
    let handles: Vec<*const BouquetAddress> = hairs.iter().map(|&h| h as *const _).collect();
    let grid = [1.0, 2.0];
    unsafe {
        let mut s = ptr::null_mut();
        let status = bouquet_brush_json(m, handles.as_ptr(), handles.len(), grid.as_ptr(), grid.len(), &mut s);
        assert_eq!(status, BouquetStatus::Ok);
        let json = take_string(s);
        assert!(json.starts_with("{\"model\""));
        assert_eq!(json.matches("\"address\"").count(), 3);
        assert_eq!(bouquet_brush_json(m, ptr::null(), 0, grid.as_ptr(), 2, &mut s), BouquetStatus::EmptyInput);
        for h in hairs {
            bouquet_address_free(h);
        }
        bouquet_model_free(m);
    }
}
