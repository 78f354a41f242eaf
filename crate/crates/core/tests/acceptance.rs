//! Acceptance suite: one criterion per test, one PASS line each (a failed
//! criterion panics, so its line reads FAIL by absence).

use soliton_lab::catalog::{self, Family};
use soliton_lab::flow::{self, BoundaryMotion};
use soliton_lab::geom::{
    circle_directions, DistanceField, GraphDirection, GraphPatch, GridSpec, Point, SurfaceSample,
};
use soliton_lab::hull::{self, classify_hull, HullCase, SamplingProtocol};
use soliton_lab::pde;
use soliton_lab::verify;
use soliton_lab::wedge::{self, NoneRule, WedgeNormalForm, WedgeVerdict, WitnessFamily};
use std::time::Instant;

fn family_sample(family: Family, h: f64) -> SurfaceSample<f64> {
    let cells = |span: f64| (span / h).floor() as usize + 1;
    match family {
        Family::Plane => {
            // vertical plane x_1 = 0 as a sideways graph
            let grid = GridSpec::new(vec![-1.0, -1.0], h, vec![cells(2.0), cells(2.0)]);
            GraphPatch::from_fn(GraphDirection::Sideways, grid, |_: &[f64]| 0.0)
                .graph_geometry()
                .unwrap()
        }
        Family::GrimReaper => {
            let half = std::f64::consts::FRAC_PI_2 - 0.3;
            let grid = GridSpec::new(vec![-half, -1.0], h, vec![cells(2.0 * half), cells(2.0)]);
            catalog::grim_reaper(2, grid).unwrap().graph_geometry().unwrap()
        }
        Family::TiltedGrimReaper => {
            let theta = 0.3f64;
            let half = (std::f64::consts::FRAC_PI_2 - 0.3) / theta.cos();
            let grid = GridSpec::new(vec![-half, -1.0], h, vec![cells(2.0 * half), cells(2.0)]);
            catalog::tilted_grim_reaper(2, theta, grid)
                .unwrap()
                .graph_geometry()
                .unwrap()
        }
        Family::Bowl => catalog::bowl::<f64>(2, 4.0, h)
            .unwrap()
            .revolve(&circle_directions(64), "bowl"),
        Family::Winglike => catalog::winglike::<f64>(2, 1.0, 4.0, h)
            .unwrap()
            .upper
            .revolve(&circle_directions(64), "winglike-upper"),
        Family::MinimalCylinder => {
            let base = Point::new(vec![0.0, 0.0, 0.0]);
            catalog::minimal_cylinder(&[1.0, 0.0, 0.0], &base, 2.0, h).unwrap()
        }
    }
}

#[test]
fn criterion_01_residual_suite() {
    let start = Instant::now();
    let families = [
        Family::Plane,
        Family::GrimReaper,
        Family::TiltedGrimReaper,
        Family::Bowl,
        Family::Winglike,
        Family::MinimalCylinder,
    ];
    let hs = [0.04, 0.02, 0.01];
    for family in families {
        let mut errs = Vec::new();
        for &h in &hs {
            let sample = family_sample(family, h);
            let report = verify::translator_residual(&sample).unwrap();
            assert!(
                report.max_abs <= 10.0 * h * h,
                "{} at h={h}: residual {} > {}",
                family.name(),
                report.max_abs,
                10.0 * h * h
            );
            errs.push(report.max_abs);
        }
        if errs[2] > 1e-12 {
            let order = (errs[1] / errs[2]).log2();
            assert!(
                order >= 1.8,
                "{}: order {order} below 1.8 (errors {errs:?})",
                family.name()
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() <= 30.0, "residual suite took {elapsed:?}");
    println!("criterion 01 residual-suite: PASS ({elapsed:?})");
}

#[test]
fn criterion_02_master_identity() {
    // Route agreement on the vertical-plane closed form: geometric trace
    // route vs the displayed identity, both from exact data.
    let df = DistanceField::new(1.0f64, 0.6, 0.8).unwrap();
    let normal = [0.3f64.cos(), 0.3f64.sin(), 0.0];
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let t = k as f64 * 0.17;
        let p = Point::new(vec![
            df.locus_offset() + 1.5 + t.sin().abs(),
            0.7 + t.cos(),
            t * 0.1 - 1.0,
        ]);
        let eval = df.eval(&p).unwrap();
        let chi_n = soliton_lab::vec::dot(&eval.spectrum.chi, &normal);
        let grad_n = soliton_lab::vec::dot(&eval.gradient, &normal);
        let h_scalar = 0.0; // vertical plane is minimal
        let route_a =
            eval.spectrum.trace - eval.spectrum.nonzero_eigenvalue * chi_n * chi_n
                + h_scalar * grad_n;
        let route_b = (1.0 - chi_n * chi_n) / eval.d + grad_n * normal[2];
        worst = worst.max((route_a - route_b).abs());
    }
    assert!(worst <= 1e-10, "plane two-route disagreement {worst}");

    // O(h^2) convergence of the identity on grim reaper patches.
    let patch = |h: f64| {
        let n = (0.8 / h).round() as usize + 1;
        let grid = GridSpec::new(vec![-1.0, -0.4], h, vec![n, n]);
        catalog::grim_reaper(2, grid).unwrap()
    };
    let reports: Vec<_> = [0.04, 0.02, 0.01]
        .iter()
        .map(|&h| verify::main_identity_check(&patch(h), &df).unwrap())
        .collect();
    let o1 = verify::convergence_order(&reports[0], &reports[1]);
    let o2 = verify::convergence_order(&reports[1], &reports[2]);
    assert!(
        o1 >= 1.5 && o2 >= 1.5,
        "orders {o1}, {o2} (residuals {:?})",
        reports.iter().map(|r| r.max_abs).collect::<Vec<_>>()
    );
    println!(
        "criterion 02 master-identity: PASS (plane agreement {worst:.2e}, grim orders {o1:.2}, {o2:.2})"
    );
}

#[test]
fn criterion_03_winglike_neck_bound() {
    let mut lines = Vec::new();
    for n in [2usize, 3] {
        for r in [0.5f64, 1.0, 2.0, 5.0] {
            let wing = catalog::winglike::<f64>(n, r, 8.0 + 2.0 * r, 0.005).unwrap();
            let gap = wing.r_star - r;
            assert!(
                wing.r_star.is_finite() && gap > 0.0,
                "n={n} R={r}: r_star {}",
                wing.r_star
            );
            assert!(
                gap <= std::f64::consts::FRAC_PI_2 + 1e-6,
                "n={n} R={r}: R* - R = {gap}"
            );
            lines.push(format!("n={n} R={r} R*-R={gap:.4}"));
        }
    }
    println!("criterion 03 winglike-neck: PASS ({})", lines.join("; "));
}

#[test]
fn criterion_04_wedge_truth_table() {
    use WedgeVerdict::{Exists, None as NoneV};
    let dir = |slope: f64, phi: f64| -> Vec<f64> {
        let horiz = (1.0 - slope * slope).max(0.0).sqrt();
        vec![horiz * phi.cos(), horiz * phi.sin(), slope]
    };
    let fixtures: Vec<(Vec<f64>, Vec<f64>, WedgeVerdict)> = vec![
        (dir(0.5, 0.0), dir(0.5, 1.0), Exists(WitnessFamily::Bowl)),
        (dir(0.9, 0.3), dir(0.1, 2.0), Exists(WitnessFamily::Bowl)),
        (dir(1.0, 0.0), dir(0.5, 0.7), Exists(WitnessFamily::Bowl)),
        (dir(0.2, 2.4), dir(0.7, 0.1), Exists(WitnessFamily::Bowl)),
        (dir(0.5, 0.4), dir(0.0, 1.4), Exists(WitnessFamily::TiltedGrimReaper)),
        (dir(0.0, 2.0), dir(0.5, 0.2), Exists(WitnessFamily::TiltedGrimReaper)),
        (dir(1e-13, 0.9), dir(0.5, 2.2), Exists(WitnessFamily::TiltedGrimReaper)),
        (dir(0.0, 0.5), dir(0.0, 0.5), Exists(WitnessFamily::VerticalPlane)),
        (
            dir(0.0, 0.5),
            dir(0.0, 0.5 + std::f64::consts::PI),
            Exists(WitnessFamily::VerticalPlane),
        ),
        (dir(0.0, 0.0), dir(0.0, 1.5), NoneV(NoneRule::BiHalfspace)),
        (dir(0.0, 2.0), dir(0.0, 2.1), NoneV(NoneRule::BiHalfspace)),
        (dir(0.0, 0.3), dir(0.0, 3.0), NoneV(NoneRule::BiHalfspace)),
        (dir(-0.5, 0.0), dir(0.5, 1.0), NoneV(NoneRule::NegativeSlope)),
        (dir(0.5, 0.2), dir(-0.5, 1.2), NoneV(NoneRule::NegativeSlope)),
        (dir(-0.5, 0.4), dir(-0.5, 2.0), NoneV(NoneRule::NegativeSlope)),
        (dir(-0.2, 1.0), dir(0.0, 0.0), NoneV(NoneRule::NegativeSlope)),
        (dir(-1.0, 0.0), dir(0.3, 0.7), NoneV(NoneRule::NegativeSlope)),
    ];
    assert_eq!(fixtures.len(), 17);
    let mut agree = 0usize;
    for (w1, w2, want) in &fixtures {
        let got = wedge::wedge_existence(w1, w2);
        assert_eq!(got, *want, "w1={w1:?} w2={w2:?}");
        agree += 1;
    }
    println!("criterion 04 wedge-truth-table: PASS ({agree}/17 agree)");
}

fn grim_slab_sampler(rho: f64) -> SurfaceSample<f64> {
    let mut s = SurfaceSample::empty(3, "grim-reaper");
    let half = std::f64::consts::FRAC_PI_2 - 1e-4;
    let (m, rows) = (101, 33);
    for i in 0..m {
        let x1 = -half + 2.0 * half * i as f64 / (m - 1) as f64;
        for j in 0..rows {
            let x2 = -rho + 2.0 * rho * j as f64 / (rows - 1) as f64;
            s.push(
                Point::new(vec![x1, x2, -(x1.cos().ln())]),
                vec![0.0, 0.0, 1.0],
                0.0,
                false,
            );
        }
    }
    s
}

fn bowl_sampler(rho: f64) -> SurfaceSample<f64> {
    let r = rho.max(2.0);
    let profile = catalog::bowl::<f64>(2, r, r / 400.0).unwrap();
    profile.revolve(&circle_directions(16), "bowl")
}

fn plane_sampler(rho: f64) -> SurfaceSample<f64> {
    let base = Point::new(vec![0.0, 0.0, 0.0]);
    catalog::minimal_cylinder(&[1.0, 0.0, 0.0], &base, rho, rho / 8.0).unwrap()
}

fn cap_sampler(_rho: f64) -> SurfaceSample<f64> {
    let profile = catalog::bowl::<f64>(2, 2.0, 0.02).unwrap();
    profile.revolve(&circle_directions(16), "bowl-cap")
}

#[test]
fn criterion_05_hull_classifier() {
    for levels in [6usize, 7] {
        let protocol = SamplingProtocol::new(0.5, levels, hull::default_directions(2, 32)).unwrap();
        assert_eq!(
            classify_hull(&bowl_sampler, &protocol).unwrap(),
            HullCase::FullSpace,
            "bowl at K={levels}"
        );
        match classify_hull(&grim_slab_sampler, &protocol).unwrap() {
            HullCase::Slab { width, .. } => assert!(
                (width - std::f64::consts::PI).abs() <= 1e-3,
                "slab width {width} at K={levels}"
            ),
            other => panic!("grim reaper classified {other:?} at K={levels}"),
        }
        assert!(
            matches!(
                classify_hull(&plane_sampler, &protocol).unwrap(),
                HullCase::Hyperplane { .. }
            ),
            "vertical hyperplane at K={levels}"
        );
        assert_eq!(
            classify_hull(&cap_sampler, &protocol).unwrap(),
            HullCase::Compact,
            "cap at K={levels}"
        );
    }
    println!("criterion 05 hull-classifier: PASS (4 cases stable at K=6,7)");
}

#[test]
fn criterion_06_boundary_hull_bound() {
    let h_tol = 0.05;
    let mut pieces: Vec<SurfaceSample<f64>> = Vec::new();

    // bowl cap with its rim flagged as boundary
    let mut cap = cap_sampler(0.0);
    let r_max = cap
        .points
        .iter()
        .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
        .fold(0.0f64, f64::max);
    for i in 0..cap.len() {
        let r = (cap.points[i][0] * cap.points[i][0] + cap.points[i][1] * cap.points[i][1]).sqrt();
        cap.boundary[i] = r >= r_max - 0.04;
    }
    pieces.push(cap);

    // grim reaper patch: chart edge is the boundary
    let grid = GridSpec::new(vec![-1.0, -1.0], 0.05, vec![41, 41]);
    pieces.push(catalog::grim_reaper(2, grid).unwrap().graph_geometry().unwrap());

    // tilted grim reaper patch
    let grid = GridSpec::new(vec![-1.0, -1.0], 0.05, vec![41, 41]);
    pieces.push(
        catalog::tilted_grim_reaper(2, 0.4, grid)
            .unwrap()
            .graph_geometry()
            .unwrap(),
    );

    // winglike upper wing piece, both rims flagged
    let wing = catalog::winglike::<f64>(2, 1.0, 2.0, 0.01).unwrap();
    let mut piece = wing.upper.revolve(&circle_directions(32), "winglike-piece");
    let radii: Vec<f64> = piece
        .points
        .iter()
        .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
        .collect();
    let (r_lo, r_hi) = radii
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    for i in 0..piece.len() {
        piece.boundary[i] = radii[i] <= r_lo + 0.02 || radii[i] >= r_hi - 0.02;
    }
    pieces.push(piece);

    assert!(pieces.len() >= 3);
    let directions = circle_directions::<f64>(32);
    for s in &pieces {
        let dim = s.ambient_dim();
        let interior_max = (0..s.len())
            .filter(|&i| !s.boundary[i])
            .map(|i| s.points[i][dim - 1])
            .fold(f64::NEG_INFINITY, f64::max);
        let boundary_max = (0..s.len())
            .filter(|&i| s.boundary[i])
            .map(|i| s.points[i][dim - 1])
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(
            interior_max - boundary_max <= h_tol,
            "{}: interior max {interior_max} above boundary max {boundary_max}",
            s.source
        );
        let contained = hull::boundary_hull_bound_check(s, &directions, h_tol).unwrap();
        assert!(contained, "{}: hull bound violated", s.source);
    }
    println!(
        "criterion 06 boundary-hull-bound: PASS ({} compact pieces)",
        pieces.len()
    );
}

#[test]
fn criterion_07_prop62_experiment() {
    let mut deep_flags = Vec::new();
    let mut shallow_ok = Vec::new();
    for h in [0.1f64, 0.05, 0.025] {
        let shallow = pde::construct_prop62_data::<f64>(0.6, -0.2, h).unwrap();
        assert!(!shallow.nongraphical);
        let phi = |y: &[f64]| shallow.phi(y);
        let (_, report) = pde::solve_side(&shallow.domain, &phi).unwrap();
        assert!(
            report.converged && report.final_residual <= 1e-10,
            "shallow h={h}: {report:?}"
        );
        shallow_ok.push(report.converged);

        let deep = pde::construct_prop62_data::<f64>(0.6, 1.0, h).unwrap();
        assert!(deep.nongraphical);
        let phi = |y: &[f64]| deep.phi(y);
        let (_, report) = pde::solve_side(&deep.domain, &phi).unwrap();
        assert!(report.nonexistence_flag && !report.converged, "deep h={h}: {report:?}");
        deep_flags.push(report.nonexistence_flag);
    }
    assert!(shallow_ok.iter().all(|&b| b) && deep_flags.iter().all(|&b| b));
    println!("criterion 07 prop62: PASS (verdicts stable at h, h/2, h/4)");
}

#[test]
fn criterion_08_flow_self_translation() {
    let h = 0.01f64;
    // grim reaper, n = 1
    let half = 1.2f64;
    let m = (2.0 * half / h).round() as usize + 1;
    let grim = GraphPatch::from_fn(
        GraphDirection::Vertical,
        GridSpec::new(vec![-half], h, vec![m]),
        |x: &[f64]| -(x[0].cos().ln()),
    );
    let dt = h * h / 4.0;
    let traj = flow::flow_graph_mcf(&grim, 1.0, dt, BoundaryMotion::Translating).unwrap();
    let (t1, last) = traj.snapshots.last().unwrap();
    let grim_err = last
        .values
        .iter()
        .zip(&grim.values)
        .map(|(&a, &b)| (a - b - t1).abs())
        .fold(0.0f64, f64::max);
    assert!(grim_err <= 1e-2, "grim reaper translation error {grim_err}");

    // bowl, n = 2
    let profile = catalog::bowl::<f64>(2, 2.0, 0.005).unwrap();
    let m = (1.0f64 / h).round() as usize + 1;
    let bowl = GraphPatch::from_fn(
        GraphDirection::Vertical,
        GridSpec::new(vec![-0.5, -0.5], h, vec![m, m]),
        |x: &[f64]| {
            profile
                .height_at_radius((x[0] * x[0] + x[1] * x[1]).sqrt())
                .unwrap()
        },
    );
    let dt = h * h / 6.0;
    let traj = flow::flow_graph_mcf(&bowl, 1.0, dt, BoundaryMotion::Translating).unwrap();
    let (t1, last) = traj.snapshots.last().unwrap();
    let bowl_err = last
        .values
        .iter()
        .zip(&bowl.values)
        .map(|(&a, &b)| (a - b - t1).abs())
        .fold(0.0f64, f64::max);
    assert!(bowl_err <= 1e-2, "bowl translation error {bowl_err}");

    // shrinking sphere above a grim reaper cylinder: distance nondecreasing
    let hc = 0.05f64;
    let m1 = (2.4f64 / hc).round() as usize + 1;
    let m2 = (2.0f64 / hc).round() as usize + 1;
    let cyl = GraphPatch::from_fn(
        GraphDirection::Vertical,
        GridSpec::new(vec![-1.2, -1.0], hc, vec![m1, m2]),
        |x: &[f64]| -(x[0].cos().ln()),
    );
    let dtc = hc * hc / 6.0;
    let cyl_flow = flow::flow_graph_mcf(&cyl, 0.2, dtc, BoundaryMotion::Translating).unwrap();
    let times = cyl_flow.times();
    let sphere = flow::sphere_trajectory(&[0.0, 0.0, 4.0], 1.0, &times, 48).unwrap();
    let track = flow::comparison_distance_track(&sphere, &cyl_flow.clouds()).unwrap();
    let tol = 10.0 * (dtc + hc * hc);
    assert!(
        flow::nondecreasing_within(&track, tol),
        "distance track decreased: {track:?}"
    );
    println!(
        "criterion 08 flow: PASS (grim err {grim_err:.2e}, bowl err {bowl_err:.2e}, track monotone within {tol:.2e})"
    );
}

#[test]
fn criterion_09_oy_probe() {
    let nf = WedgeNormalForm {
        xi: std::f64::consts::FRAC_1_SQRT_2,
        eta: std::f64::consts::FRAC_1_SQRT_2,
    };
    let a = 0.1f64;
    let r = 1.0f64;
    let mut sample = SurfaceSample::empty(3, "clipped-plane");
    let m = 81;
    for i in 0..m {
        let x2 = -a + 2.0 * a * i as f64 / (m - 1) as f64;
        for j in 0..m {
            let x3 = -1.0 + 2.0 * j as f64 / (m - 1) as f64;
            sample.push(Point::new(vec![a, x2, x3]), vec![1.0, 0.0, 0.0], 0.0, false);
        }
    }
    let report = wedge::oy_probe(&sample, &nf, r, None).unwrap();
    assert!(report.contradiction_indicator, "indicator did not fire");
    let bound = r / nf.xi;
    for p in &report.probes {
        assert!(p.f <= bound + 1e-12, "f = {} > R/xi = {bound}", p.f);
    }
    println!(
        "criterion 09 oy-probe: PASS (indicator fired, sup f = {:.6} <= {bound:.6})",
        report.sup_f
    );
}

#[test]
fn criterion_10_determinism() {
    let exe = env!("CARGO_BIN_EXE_soliton-lab");
    let run_all = |dir: &std::path::Path| {
        let out = dir.to_str().unwrap();
        for args in [
            vec!["generate", "--family", "bowl", "--rmax", "5", "--h", "0.05", "--out", out],
            vec!["probe", "--r", "1", "--a", "0.1", "--out", out],
            vec![
                "classify",
                "--family",
                "grim_reaper",
                "--directions",
                "seeded",
                "--seed",
                "42",
                "--out",
                out,
            ],
        ] {
            let status = std::process::Command::new(exe)
                .args(&args)
                .stdout(std::process::Stdio::null())
                .status()
                .unwrap();
            assert!(status.success(), "command {args:?} failed");
        }
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    run_all(d1.path());
    run_all(d2.path());
    let mut compared = 0usize;
    for entry in std::fs::read_dir(d1.path()).unwrap() {
        let name = entry.unwrap().file_name();
        if name.to_string_lossy().ends_with(".csv") {
            let a = std::fs::read(d1.path().join(&name)).unwrap();
            let b = std::fs::read(d2.path().join(&name)).unwrap();
            assert_eq!(a, b, "artifact {name:?} differs between runs");
            compared += 1;
        }
    }
    assert!(compared >= 2, "expected at least two CSV artifacts, saw {compared}");
    println!("criterion 10 determinism: PASS ({compared} CSV artifacts byte-identical)");
}
