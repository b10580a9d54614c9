use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use bikmeans_ffi::*;

fn last_error() -> String {
    let p = bk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn points(coords: &[f64], dim: usize) -> *mut BkPoints {
    let mut p = ptr::null_mut();
    let s = unsafe { bk_points_new(coords.as_ptr(), coords.len() / dim, dim, &mut p) };
    assert_eq!(s, BkStatus::Ok);
    p
}

#[test]
fn reduce_solve_round() {
    let x = points(&[0.0, 0.0, 0.5, 0.0, 9.0, 9.0, 9.0, 9.5, 4.0, 5.0], 2);
    unsafe {
        assert_eq!((bk_points_len(x), bk_points_dim(x)), (5, 2));
        let mut kmeans = 0.0;
        assert_eq!(bk_oracle_kmeans(x, 2, &mut kmeans), BkStatus::Ok);

        let mut inst = ptr::null_mut();
        assert_eq!(bk_reduce(x, 0.3, 1, &mut inst), BkStatus::Ok);
        let mut psi = vec![usize::MAX; 5];
        assert_eq!(bk_instance_psi(inst, psi.as_mut_ptr(), 5), BkStatus::Ok);
        assert!(psi.iter().all(|&d| d < bk_instance_num_demands(inst)));

        let mut kmedian = 0.0;
        assert_eq!(bk_oracle_kmedian(inst, 2, &mut kmedian), BkStatus::Ok);
        assert!(kmeans <= kmedian + 1e-9 && kmedian <= 1.3 * kmeans + 1e-9);

        let mut sol = ptr::null_mut();
        assert_eq!(bk_lp_solve(inst, 2, &mut sol), BkStatus::Ok);
        assert!(bk_lp_value(sol) <= kmedian + 1e-6);

        let mut a = BkRoundStats::default();
        let mut b = BkRoundStats::default();
        assert_eq!(bk_round(inst, sol, 4, 30, 5, 1, &mut a), BkStatus::Ok);
        assert_eq!(bk_round(inst, sol, 4, 30, 5, 2, &mut b), BkStatus::Ok);
        assert_eq!(a, b);
        assert_eq!(a.trials, 30);

        let mut opened = [0usize; 3];
        let mut cost = 0.0;
        assert_eq!(bk_local_search(inst, 3, 1, 1e-3, opened.as_mut_ptr(), &mut cost), BkStatus::Ok);
        assert!(opened.windows(2).all(|w| w[0] < w[1]));
        assert!(cost <= kmedian + 1e-9);

        bk_lp_free(sol);
        bk_instance_free(inst);
        bk_points_free(x);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(bk_points_new(ptr::null(), 3, 1, &mut p), BkStatus::NullPointer);
        assert!(last_error().contains("coords"));

        let nan = [f64::NAN];
        assert_eq!(bk_points_new(nan.as_ptr(), 1, 1, &mut p), BkStatus::InvalidArgument);

        let mut v = 0.0;
        assert_eq!(bk_alpha_lp_tight(0.5, &mut v), BkStatus::Domain);
        assert!(!last_error().is_empty());
        assert_eq!(bk_alpha_lp_tight(2.0, ptr::null_mut()), BkStatus::NullPointer);

        let x = points(&[0.0, 1.0, 2.0], 1);
        let mut inst = ptr::null_mut();
        assert_eq!(bk_instance_new(x, x, &mut inst), BkStatus::Ok);
        let mut sol = ptr::null_mut();
        assert_eq!(bk_lp_solve(inst, 4, &mut sol), BkStatus::InvalidArgument);
        assert!(sol.is_null());
        assert_eq!(bk_instance_psi(inst, ptr::null_mut(), 0), BkStatus::InvalidArgument);
        let many: Vec<f64> = (0..20).map(f64::from).collect();
        let big = points(&many, 1);
        assert_eq!(bk_oracle_kmeans(big, 2, &mut v), BkStatus::SizeLimit);

        bk_instance_free(inst);
        bk_points_free(x);
        bk_points_free(big);
        bk_points_free(ptr::null_mut());
        assert!(bk_lp_value(ptr::null()).is_nan());
    }
}

#[test]
fn bounds_match_library() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(bk_alpha_local(2.0, 1, 0.0, &mut v), BkStatus::Ok);
        assert_eq!(v, bikmeans::bounds::alpha_local(2.0, 1, 0.0).unwrap());
        assert_eq!(bk_alpha_pipage(3.0, &mut v), BkStatus::Ok);
        assert_eq!(v, bikmeans::bounds::alpha_pipage(3.0).unwrap());
    }
    let version = unsafe { CStr::from_ptr(bk_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

/// Compiles the C smoke program against the generated header and the static
/// library, then runs it.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("bikmeans.h").exists());
    // target/<profile>/deps/abi-xxxx -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libbikmeans_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let bin = tmp.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&header_dir)
        .arg(manifest.join("tests").join("smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
