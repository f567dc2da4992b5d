use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use so3cover_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(so3_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn six_hundred_cell_round_trip() {
    let group = CString::new("2I").unwrap();
    let mut set = ptr::null_mut();
    let q = [1.0, 0.0, 0.0, 0.0];
    unsafe {
        assert_eq!(so3_from_basis(q.as_ptr(), 1, group.as_ptr(), &mut set), So3Status::Ok);
        assert_eq!(so3_set_len(set), 120);

        let mut theta = 0.0;
        assert_eq!(so3_covering_radius(set, &mut theta), So3Status::Ok);
        assert!((theta.to_degrees() - 22.238756).abs() < 1e-5);

        let mut star = 0.0;
        assert_eq!(so3_lower_bound_radius(120, &mut star), So3Status::Ok);
        assert!((star - theta).abs() < 1e-6);

        let mut buf = vec![0.0; 4 * 120];
        assert_eq!(so3_set_points(set, buf.as_mut_ptr(), 10), So3Status::BufferTooSmall);
        assert_eq!(so3_set_points(set, buf.as_mut_ptr(), buf.len()), So3Status::Ok);
        for p in buf.chunks_exact(4) {
            assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("cell.qset").to_str().unwrap()).unwrap();
        assert_eq!(so3_save(set, path.as_ptr(), false), So3Status::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(so3_load(path.as_ptr(), &mut back), So3Status::Ok);
        assert_eq!(so3_set_len(back), 120);

        let mut counts = [0u64; 8];
        let (mut max, mut mean) = (0.0, 0.0);
        let s = so3_error_histogram(back, 20_000, 8, 1, counts.as_mut_ptr(), &mut max, &mut mean);
        assert_eq!(s, So3Status::Ok);
        assert_eq!(counts.iter().sum::<u64>(), 20_000);
        assert!(max <= 2.0 * theta.to_degrees() + 1e-6 && mean < max);

        so3_set_free(back);
        so3_set_free(set);
        so3_set_free(ptr::null_mut());
    }
}

#[test]
fn generate_small_set() {
    let group = CString::new("C1").unwrap();
    let mut set = ptr::null_mut();
    unsafe {
        assert_eq!(so3_generate(8, group.as_ptr(), 4, 3, &mut set), So3Status::Ok);
        assert_eq!(so3_set_len(set), 8);
        let mut theta = 0.0;
        assert_eq!(so3_covering_radius(set, &mut theta), So3Status::Ok);
        assert!(theta.to_degrees() < 61.0, "{}", theta.to_degrees());
        so3_set_free(set);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut set = ptr::null_mut();
    let c1 = CString::new("C1").unwrap();
    let bad = CString::new("Q9").unwrap();
    unsafe {
        assert_eq!(so3_generate(7, c1.as_ptr(), 1, 0, &mut set), So3Status::InvalidCount);
        assert!(last_error().contains("nearest valid n = 8"), "{}", last_error());
        assert_eq!(so3_generate(8, bad.as_ptr(), 1, 0, &mut set), So3Status::UnknownGroup);
        assert_eq!(so3_generate(8, ptr::null(), 1, 0, &mut set), So3Status::NullPointer);
        assert_eq!(so3_generate(8, c1.as_ptr(), 1, 0, ptr::null_mut()), So3Status::NullPointer);
        let q = [0.0, f64::NAN, 0.0, 0.0];
        assert_eq!(so3_from_basis(q.as_ptr(), 1, c1.as_ptr(), &mut set), So3Status::InvalidArgument);
        let missing = CString::new("/nonexistent/x.qset").unwrap();
        assert_eq!(so3_load(missing.as_ptr(), &mut set), So3Status::Io);
        assert!(set.is_null());
        assert_eq!(so3_set_len(ptr::null()), 0);
        let mut x = 0.0;
        assert_eq!(so3_covering_radius(ptr::null(), &mut x), So3Status::NullPointer);
        assert_eq!(so3_lower_bound_radius(3, &mut x), So3Status::InvalidArgument);
    }
    let v = unsafe { CStr::from_ptr(so3_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/so3cover.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["so3_generate", "so3_from_basis", "so3_set_free", "SO3_STATUS_INVALID_COUNT", "typedef struct So3Set"] {
        assert!(text.contains(name), "{name}");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{header}\"\nint main(void) {{ So3Set *s = 0; double t; \
             return so3_covering_radius(s, &t) == SO3_STATUS_OK; }}\n"
        ),
    )
    .unwrap();
    match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(status) => assert!(status.success()),
        Err(_) => eprintln!("no C compiler; header syntax not checked"),
    }
}
