use std::ffi::{CStr, CString};
use std::ptr;

use katflow_ffi::*;

fn last_error() -> String {
    let p = katflow_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn octahedron() -> *mut KatflowGraph {
    let edges: [usize; 24] = [0, 1, 0, 2, 0, 3, 0, 4, 1, 2, 2, 3, 3, 4, 1, 4, 5, 1, 5, 2, 5, 3, 5, 4];
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { katflow_graph_new(6, edges.as_ptr(), 12, &mut g) }, KatflowStatus::Ok);
    g
}

#[test]
fn solve_verify_and_export() {
    unsafe {
        let g = octahedron();
        assert_eq!(katflow_graph_vertex_count(g), 6);
        let mut p = ptr::null_mut();
        assert_eq!(katflow_solve(g, false, 0, &mut p), KatflowStatus::Ok);
        assert_eq!(katflow_packing_len(p), 6);
        let mut bad = usize::MAX;
        assert_eq!(katflow_verify(p, g, 1e-6, &mut bad), KatflowStatus::Ok);
        assert_eq!(bad, 0);
        assert!(katflow_last_error().is_null());

        let (mut x, mut y, mut r) = (0.0, 0.0, 0.0);
        assert_eq!(katflow_packing_disk(p, 5, &mut x, &mut y, &mut r), KatflowStatus::Ok);
        assert!(r > 0.0);
        assert_eq!(katflow_packing_disk(p, 6, &mut x, &mut y, &mut r), KatflowStatus::InvalidInput);
        assert!(last_error().contains("out of range"));

        let mut json = ptr::null_mut();
        assert_eq!(katflow_packing_to_json(p, 1e-6, &mut json), KatflowStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_string();
        assert!(text.contains("\"schema_version\""));
        let mut q = ptr::null_mut();
        assert_eq!(katflow_packing_from_json(json, &mut q), KatflowStatus::Ok);
        katflow_string_free(json);
        assert_eq!(katflow_verify(q, g, 1e-6, ptr::null_mut()), KatflowStatus::Ok);

        katflow_packing_free(p);
        katflow_packing_free(q);
        katflow_graph_free(g);
    }
}

#[test]
fn verify_reports_violations() {
    unsafe {
        let g = octahedron();
        let mut p = ptr::null_mut();
        assert_eq!(katflow_solve(g, true, 3, &mut p), KatflowStatus::Ok);
        let mut xyr = Vec::new();
        for i in 0..6 {
            let (mut x, mut y, mut r) = (0.0, 0.0, 0.0);
            katflow_packing_disk(p, i, &mut x, &mut y, &mut r);
            xyr.extend([x, y, if i == 5 { r * 0.99 } else { r }]);
        }
        let mut q = ptr::null_mut();
        assert_eq!(katflow_packing_new(xyr.as_ptr(), 6, &mut q), KatflowStatus::Ok);
        let mut bad = 0;
        assert_eq!(katflow_verify(q, g, 1e-6, &mut bad), KatflowStatus::VerificationFailed);
        assert_eq!(bad, 4);
        assert!(last_error().contains("violated"));
        katflow_packing_free(p);
        katflow_packing_free(q);
        katflow_graph_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        let k5 =
            CString::new(r#"{"n":5,"edges":[[0,1],[0,2],[0,3],[0,4],[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#).unwrap();
        assert_eq!(katflow_graph_from_json(k5.as_ptr(), &mut g), KatflowStatus::Ok);
        let mut p = ptr::null_mut();
        assert_eq!(katflow_solve(g, false, 0, &mut p), KatflowStatus::NotPlanar);
        assert!(p.is_null());
        assert!(last_error().contains("not planar"));
        katflow_graph_free(g);

        let junk = CString::new("{").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(katflow_graph_from_json(junk.as_ptr(), &mut h), KatflowStatus::InvalidInput);
        assert_eq!(katflow_graph_from_json(ptr::null(), &mut h), KatflowStatus::NullPointer);
        let edges = [0usize, 0];
        assert_eq!(katflow_graph_new(2, edges.as_ptr(), 1, &mut h), KatflowStatus::InvalidInput);
        assert_eq!(katflow_solve(ptr::null(), false, 0, &mut p), KatflowStatus::NullPointer);
        assert_eq!(katflow_packing_len(ptr::null()), 0);

        let overlapping = [0.0, 0.0, 1.0, 1.0, 0.0, 1.0];
        assert_eq!(katflow_packing_new(overlapping.as_ptr(), 2, &mut p), KatflowStatus::InvalidInput);

        katflow_graph_free(ptr::null_mut());
        katflow_packing_free(ptr::null_mut());
        katflow_string_free(ptr::null_mut());
    }
}

#[test]
fn inversive_distance_of_tangent_disks() {
    let mut d = 0.0;
    assert_eq!(unsafe { katflow_inversive_distance(0.0, 0.0, 1.0, 3.0, 0.0, 2.0, &mut d) }, KatflowStatus::Ok);
    assert!((d - 1.0).abs() < 1e-15);
    assert_eq!(
        unsafe { katflow_inversive_distance(0.0, 0.0, -1.0, 3.0, 0.0, 2.0, &mut d) },
        KatflowStatus::InvalidInput
    );
}
