use std::ffi::{CStr, CString};
use std::ptr;

use scramble_core::chain::{occupancy_curve, ChainParams, RngPolicy, Schedule, ScheduleKind};
use scramble_core::graphs::build_binary_tree;
use scramble_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(scramble_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn tree(depth: u32) -> *mut ScrambleGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { scramble_graph_binary_tree(depth, &mut g) }, ScrambleStatus::Ok);
    assert!(!g.is_null());
    g
}

#[test]
fn graph_queries() {
    let g = tree(3);
    let (mut v, mut e, mut d, mut x, mut y) = (0, 0, 0, 0, 0);
    unsafe {
        assert_eq!(scramble_graph_num_vertices(g, &mut v), ScrambleStatus::Ok);
        assert_eq!(scramble_graph_num_edges(g, &mut e), ScrambleStatus::Ok);
        assert_eq!(scramble_graph_diameter(g, &mut d), ScrambleStatus::Ok);
        assert_eq!(scramble_graph_farthest_pair(g, &mut x, &mut y), ScrambleStatus::Ok);
    }
    assert_eq!((v, e, d, x, y), (15, 14, 6, 7, 11));
    let left = [1usize, 3, 4, 7, 8, 9, 10];
    let mut cut = 0;
    let mut bound = 0.0;
    unsafe {
        assert_eq!(
            scramble_cut_size(g, left.as_ptr(), left.len(), &mut cut),
            ScrambleStatus::Ok
        );
        assert_eq!(
            scramble_tau_ent_lower_bound(g, left.as_ptr(), left.len(), 2, 0.2, &mut bound),
            ScrambleStatus::Ok
        );
        scramble_graph_free(g);
    }
    assert_eq!(cut, 1);
    assert!((bound - 0.2 * 7.0 / 2.0).abs() < 1e-12);
}

#[test]
fn builders_report_errors() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(scramble_graph_dumbbell(1, &mut g), ScrambleStatus::GraphError);
        assert!(g.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(
            scramble_graph_binary_tree(2, ptr::null_mut()),
            ScrambleStatus::NullPointer
        );
        assert!(last_error().contains("null"));
        let mut n = 0;
        assert_eq!(
            scramble_graph_num_vertices(ptr::null(), &mut n),
            ScrambleStatus::NullPointer
        );

        let dims = [3usize, 4];
        assert_eq!(scramble_graph_lattice(dims.as_ptr(), 2, &mut g), ScrambleStatus::Ok);
        assert_eq!(scramble_graph_num_vertices(g, &mut n), ScrambleStatus::Ok);
        assert_eq!(n, 12);
        assert!(last_error().is_empty());
        scramble_graph_release(&mut g);
        assert!(g.is_null());
        scramble_graph_free(ptr::null_mut());
    }
}

#[test]
fn edge_list_round_trip() {
    let g = tree(2);
    let mut needed = 0;
    unsafe {
        assert_eq!(
            scramble_graph_to_edge_list(g, ptr::null_mut(), 0, &mut needed),
            ScrambleStatus::BufferTooSmall
        );
        let mut buf = vec![0 as std::ffi::c_char; needed];
        assert_eq!(
            scramble_graph_to_edge_list(g, buf.as_mut_ptr(), buf.len(), &mut needed),
            ScrambleStatus::Ok
        );
        let mut h = ptr::null_mut();
        assert_eq!(scramble_graph_from_edge_list(buf.as_ptr(), &mut h), ScrambleStatus::Ok);
        let (mut a, mut b) = (0, 0);
        scramble_graph_num_edges(g, &mut a);
        scramble_graph_num_edges(h, &mut b);
        assert_eq!(a, b);
        scramble_graph_free(h);

        let bad = CString::new("p 3\n0 1\n0 9\n").unwrap();
        assert_eq!(
            scramble_graph_from_edge_list(bad.as_ptr(), &mut h),
            ScrambleStatus::GraphError
        );
        assert!(last_error().contains('3'), "{}", last_error());
        scramble_graph_free(g);
    }
}

#[test]
fn closed_forms() {
    let (mut occ, mut otoc, mut fid, mut capped) = (0.0, 0.0, 0.0, false);
    unsafe {
        assert_eq!(scramble_equilibrium_occupancy(2, 2, &mut occ), ScrambleStatus::Ok);
        assert_eq!(scramble_otoc_from_occupancy(0.75, 2, &mut otoc), ScrambleStatus::Ok);
        assert_eq!(
            scramble_decoding_fidelity_bound(0.99, 2, &mut fid, &mut capped),
            ScrambleStatus::Ok
        );
        assert_eq!(
            scramble_otoc_from_occupancy(1.5, 2, &mut otoc),
            ScrambleStatus::EstimateError
        );
        assert_eq!(
            scramble_decoding_fidelity_bound(1.0, 2, &mut fid, &mut capped),
            ScrambleStatus::EstimateError
        );
    }
    assert!((occ - 0.8).abs() < 1e-15);
    assert!((otoc - 1.0).abs() < 1e-15);
    assert_eq!((fid, capped), (1.0, true));
}

#[test]
fn occupancy_curve_matches_core() {
    let g = tree(3);
    let times = [0.0, 2.0, 5.0, 10.0];
    let mut est = [0.0; 4];
    let mut se = [0.0; 4];
    let status = unsafe {
        scramble_occupancy_curve(
            g,
            2,
            7,
            11,
            ScrambleSchedule::PoissonRateOne as u32,
            10.0,
            times.as_ptr(),
            times.len(),
            500,
            42,
            est.as_mut_ptr(),
            se.as_mut_ptr(),
        )
    };
    assert_eq!(status, ScrambleStatus::Ok);
    let core = occupancy_curve(
        &build_binary_tree(3).unwrap(),
        &ChainParams::new(2).unwrap(),
        7,
        11,
        &Schedule::new(ScheduleKind::PoissonRateOne, 10.0).unwrap(),
        &times,
        500,
        &RngPolicy::new(42),
    )
    .unwrap();
    assert_eq!(est.to_vec(), core.estimates);
    assert_eq!(se.to_vec(), core.std_errors);

    let (mut tau, mut censored) = (0.0, true);
    unsafe {
        assert_eq!(
            scramble_tau_from_curve(
                times.as_ptr(),
                est.as_ptr(),
                se.as_ptr(),
                4,
                1e-9,
                &mut tau,
                &mut censored
            ),
            ScrambleStatus::Ok
        );
        assert_eq!(
            scramble_occupancy_curve(
                g,
                2,
                7,
                11,
                9,
                10.0,
                times.as_ptr(),
                4,
                10,
                1,
                est.as_mut_ptr(),
                se.as_mut_ptr()
            ),
            ScrambleStatus::InvalidArgument
        );
        assert_eq!(
            scramble_occupancy_curve(
                g,
                2,
                99,
                11,
                0,
                10.0,
                times.as_ptr(),
                4,
                10,
                1,
                est.as_mut_ptr(),
                se.as_mut_ptr()
            ),
            ScrambleStatus::SimulationError
        );
        assert_eq!(
            scramble_tau_from_curve(ptr::null(), est.as_ptr(), se.as_ptr(), 0, 0.1, &mut tau, &mut censored),
            ScrambleStatus::EstimateError
        );
        scramble_graph_free(g);
    }
    assert!(!censored);
    assert!(tau <= 10.0);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(scramble_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
