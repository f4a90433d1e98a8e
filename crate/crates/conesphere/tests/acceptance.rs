//! Acceptance suite: every release-gating criterion, one test per criterion,
//! each printing a `acceptance N: PASS/FAIL` line (run with `--nocapture` to
//! see the lines on success).
//!
//! 1.  Cone-deficit audit on a searched 6-loop arrangement.
//! 2.  Parallelogram and cell counts.
//! 3.  Area-form signatures (1, 2N−3).
//! 4.  Side-of-face verdicts across every cataloged adjacent pair.
//! 5.  Reference frame determinant values.
//! 6.  Coordinate round trip through the frame.
//! 7.  Ideal-simplex structure of the 6-loop chart.
//! 8.  Dihedral quotient: relations, isometry, canonical representatives.
//! 9.  Hyperbolic metric sanity.
//! 10. Angle identities over all loop triples and quads.

mod util;

use std::time::Instant;

use conesphere::arrangement::cells::cell_complex;
use conesphere::arrangement::search::{search_arrangement, SearchParams};
use conesphere::arrangement::{lune_deficit_sum, validate};
use conesphere::decomposition::{
    angle_from_lune, area_form, build_complex, signature, verify_cone_deficits, EdgeLengths,
};
use conesphere::developing::{
    compare_face_sides, coordinates_from_frame, frame_matrix, frame_vectors, unfold, SideVerdict,
    TreePolicy,
};
use conesphere::geom::Rng;
use conesphere::moduli::{
    canonical_rep, d6_apply, distance, ideal_simplex_check, normalize, permuted_form, D6Element,
};

fn pass(n: u32, what: &str) {
    println!("acceptance {n}: PASS — {what}");
}

#[test]
fn criterion_01_cone_deficit_audit() {
    let started = Instant::now();
    let vs = util::cube_vertices();
    let deficits = vec![std::f64::consts::FRAC_PI_2; 4];
    let seed = std::env::var("CONESPHERE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(12u64);
    let arr = search_arrangement(
        &util::n4_reference_specs(),
        &vs,
        &deficits,
        seed,
        &SearchParams::default(),
    )
    .expect("searched arrangement");
    assert!(validate(&arr).is_valid());
    let mut rng = Rng::new(0xACCE97);
    for _ in 0..100 {
        let lengths = util::random_lengths(&mut rng, 6);
        let cx = build_complex(&arr, &lengths).unwrap();
        let audit = verify_cone_deficits(&cx, &arr.deficits, 1e-9);
        assert!(audit.pass, "audit must pass for positive lengths");
        assert!((audit.total_measured - 2.0 * std::f64::consts::TAU).abs() <= 1e-8);
    }
    for _ in 0..10 {
        let d = util::random_deficits(&mut rng, 4);
        let arr_d = arr.with_deficits(d.clone());
        let lengths = util::random_lengths(&mut rng, 6);
        let cx = build_complex(&arr_d, &lengths).unwrap();
        let audit = verify_cone_deficits(&cx, &d, 1e-9);
        assert!(audit.pass, "audit must pass for random deficits");
        assert!((audit.total_measured - 2.0 * std::f64::consts::TAU).abs() <= 1e-8);
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "audit suite took {elapsed:?}, budget 5 s"
    );
    pass(
        1,
        "cone deficits match at every cone point (110 audits), total 4π, under 5 s",
    );
}

#[test]
fn criterion_02_counts() {
    let cat = util::catalog();
    for e in &cat.entries {
        let k = e.arrangement.n_loops();
        let n = e.arrangement.n_pairs();
        let expected_quads = if n == 4 { 30 } else { 56 };
        let cells = cell_complex(&e.arrangement).unwrap();
        assert_eq!(cells.points.len(), k * (k - 1), "{}: V", e.name);
        assert_eq!(cells.faces.len(), k * k - k + 2, "{}: F", e.name);
        let cx = build_complex(&e.arrangement, &EdgeLengths::uniform(k, 1.0)).unwrap();
        assert_eq!(cx.quads.len(), expected_quads, "{}: quads", e.name);
        assert_eq!(cx.euler_characteristic(), 2, "{}: Euler", e.name);
    }
    pass(
        2,
        "30/56 parallelograms, V = k(k−1), F = k²−k+2, Euler characteristic 2",
    );
}

#[test]
fn criterion_03_signatures() {
    let cat = util::catalog();
    for e in &cat.entries {
        let n = e.arrangement.n_pairs();
        let q = area_form(&e.arrangement, &e.arrangement.deficits).unwrap();
        let sig = signature(&q.mat);
        assert_eq!(sig, (1, 2 * n - 3, 0), "{}: signature", e.name);
    }
    pass(3, "every catalog area form has signature (1, 2N−3)");
}

#[test]
fn criterion_04_side_of_face_verdicts() {
    let cat = util::catalog();
    // The named reference pair.
    let p = cat.pair("N4-sigma-a").expect("N4-sigma-a pair");
    assert_eq!(p.chart_a, "N4-A1");
    assert_eq!(p.chart_b, "N4-A2");
    // Every face of the reference 6-loop chart has a cataloged adjacent
    // arrangement on the other side.
    for lp in ["a", "b", "c", "d", "e", "f"] {
        let pair = cat
            .pair(&format!("N4-sigma-{lp}"))
            .unwrap_or_else(|| panic!("missing N4 pair for face {lp}"));
        let a = util::entry(&cat, &pair.chart_a).arrangement;
        let b = util::entry(&cat, &pair.chart_b).arrangement;
        let verdict = compare_face_sides(&a, &b, &pair.frame_a, &pair.frame_b, lp).unwrap();
        assert_eq!(verdict, SideVerdict::DifferentSide, "N4 face {lp}");
    }
    // The 10-vertex catalog: the seven shipped pairs, with the downgrade path
    // listing anything the generator could not realize.
    let wanted = [
        "N5-sigma-b",
        "N5-sigma-h",
        "N5-sigma-e",
        "N5-T3-sigma-a",
        "N5-T3-sigma-b",
        "N5-T3-sigma-d",
        "N5-T3-sigma-e",
    ];
    let mut missing = Vec::new();
    for name in wanted {
        match cat.pair(name) {
            None => missing.push(name),
            Some(pair) => {
                let a = util::entry(&cat, &pair.chart_a).arrangement;
                let b = util::entry(&cat, &pair.chart_b).arrangement;
                let verdict =
                    compare_face_sides(&a, &b, &pair.frame_a, &pair.frame_b, &pair.loop_label)
                        .unwrap();
                assert_eq!(verdict, SideVerdict::DifferentSide, "{name}");
            }
        }
    }
    if missing.is_empty() {
        pass(
            4,
            "all 6 reference faces and all 7 ten-vertex pairs verdict DifferentSide",
        );
    } else {
        println!(
            "acceptance 4: PASS (downgraded) — unrealized ten-vertex entries: {}",
            missing.join(", ")
        );
    }
}

#[test]
fn criterion_05_frame_determinants() {
    let cat = util::catalog();
    let e4 = util::entry(&cat, "N4-A1");
    let m4 = frame_matrix(
        &e4.arrangement,
        &e4.arrangement.deficits,
        e4.frame.as_ref().unwrap(),
    )
    .unwrap();
    let want4 = (std::f64::consts::FRAC_PI_2 / 2.0).sin().powi(3);
    assert!(
        (m4.det().abs() - want4).abs() < 1e-9,
        "|det M| = {} vs sin³(π/4) = {want4}",
        m4.det().abs()
    );
    assert!((want4 - 0.353_553_390_593_273_7).abs() < 1e-12);
    let e5 = util::entry(&cat, "N5-T1");
    let m5 = frame_matrix(
        &e5.arrangement,
        &e5.arrangement.deficits,
        e5.frame.as_ref().unwrap(),
    )
    .unwrap();
    let want5 = (e5.arrangement.deficits[0] / 2.0).sin().powi(4);
    assert!(
        (m5.det().abs() - want5).abs() < 1e-9,
        "|det M| = {} vs sin⁴(δ1/2) = {want5}",
        m5.det().abs()
    );
    pass(
        5,
        "|det M| = sin³(δ1/2) ≈ 0.35355 at uniform deficits; sin⁴(δ1/2) on the 8-loop chart",
    );
}

#[test]
fn criterion_06_coordinate_round_trip() {
    let cat = util::catalog();
    let e = util::entry(&cat, "N4-A1");
    let arr = e.arrangement;
    let spec = e.frame.unwrap();
    let base = spec.entries[0].path[0];
    let m = frame_matrix(&arr, &arr.deficits, &spec).unwrap();
    let mut rng = Rng::new(606);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let l = util::random_lengths(&mut rng, 6);
        let cx = build_complex(&arr, &l).unwrap();
        let dev = unfold(&cx, base, TreePolicy::BfsByQuadIndex).unwrap();
        let z = frame_vectors(&cx, &dev, &spec).unwrap();
        let stacked: Vec<f64> = z.iter().flat_map(|v| [v[0], v[1]]).collect();
        let back = coordinates_from_frame(&m, &stacked).unwrap();
        for (a, b) in l.0.iter().zip(&back.0) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst <= 1e-10, "round-trip error {worst}");
    pass(
        6,
        "coordinates_from_frame ∘ frame_vectors = identity on 100 vectors (max error ≤ 1e−10)",
    );
}

#[test]
fn criterion_07_ideal_simplex() {
    let cat = util::catalog();
    let e = util::entry(&cat, "N4-A1");
    let q = area_form(&e.arrangement, &e.arrangement.deficits).unwrap();
    let report = ideal_simplex_check(&q).unwrap();
    assert_eq!(report.n_vertices, 6, "six ideal vertices");
    assert_eq!(report.n_facets, 6, "six facets");
    assert!(
        report.null_residuals.iter().all(|r| *r == 0.0),
        "axis directions are exactly Q-null"
    );
    assert!(report.facets_per_vertex.iter().all(|c| *c == 5));
    for (i, s) in report.facet_signatures.iter().enumerate() {
        assert_eq!(*s, (1, 4, 0), "facet {i} restricted signature");
    }
    // Regularity: the uniform-deficit Gram takes the value 1 on the six
    // loop pairs whose bipartitions differ in two labels and sin(π/4) on the
    // other nine, a pattern no positive vertex rescaling can equalize. The
    // residual below is therefore structural, not numerical; see
    // docs/ideal-simplex-regularity.md for the full argument.
    assert!(
        report.regularity_residual < 1e-8,
        "acceptance 7: FAIL — regularity residual {:.6} exceeds 1e-8; the \
         6-loop chart closure is a vertex-transitive but non-regular ideal \
         simplex (dihedral angles 45° and 120°), so the equal-Gram \
         regularity test cannot come out green for any arrangement",
        report.regularity_residual
    );
    pass(
        7,
        "ideal 5-simplex: 6 null vertices, 6 totally geodesic facets, regular at uniform deficits",
    );
}

#[test]
fn criterion_08_dihedral_quotient() {
    // Generator relations on a generic vector.
    let probe = [1.0, 2.0, 3.5, 4.25, 5.125, 6.0625];
    let r = D6Element {
        rot: 1,
        reflect: false,
    };
    let s = D6Element {
        rot: 0,
        reflect: true,
    };
    let apply_n = |g: D6Element, v: &[f64], times: usize| {
        let mut out = v.to_vec();
        for _ in 0..times {
            out = d6_apply(g, &out).unwrap();
        }
        out
    };
    assert_eq!(apply_n(r, &probe, 6), probe.to_vec(), "r^6 = id");
    assert_eq!(apply_n(s, &probe, 2), probe.to_vec(), "s^2 = id");
    let sr = d6_apply(r, &d6_apply(s, &probe).unwrap()).unwrap();
    let srsr = d6_apply(r, &d6_apply(s, &sr).unwrap()).unwrap();
    assert_eq!(srsr, probe.to_vec(), "(sr)^2 = id");

    let cat = util::catalog();
    let e = util::entry(&cat, "N4-A1");
    let q = area_form(&e.arrangement, &e.arrangement.deficits).unwrap();
    for g in [r, s] {
        let pqp = permuted_form(&q, g).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                assert!(
                    (pqp[(x, y)] - q.entry(x, y)).abs() <= 1e-10,
                    "PᵀQP = Q for {g:?}"
                );
            }
        }
    }
    let mut rng = Rng::new(88);
    for _ in 0..100 {
        let l: Vec<f64> = (0..6).map(|_| rng.range(0.1, 3.0)).collect();
        let c = canonical_rep(&l).unwrap();
        for g in D6Element::all() {
            assert_eq!(canonical_rep(&d6_apply(g, &l).unwrap()).unwrap(), c);
        }
    }
    pass(
        8,
        "r⁶ = s² = (sr)² = id, PᵀQP = Q at uniform deficits, canonical_rep constant on orbits",
    );
}

#[test]
fn criterion_09_metric_sanity() {
    let cat = util::catalog();
    let arr = util::entry(&cat, "N4-A1").arrangement;
    let q = area_form(&arr, &arr.deficits).unwrap();
    let mut rng = Rng::new(909);
    for _ in 0..1000 {
        let mk = |rng: &mut Rng| {
            let l: Vec<f64> = (0..6).map(|_| rng.range(0.1, 2.0)).collect();
            normalize(&l, &q).unwrap()
        };
        let x = mk(&mut rng);
        let y = mk(&mut rng);
        let z = mk(&mut rng);
        assert!(distance(&x, &x, &q).unwrap() <= 1e-9);
        let dxy = distance(&x, &y, &q).unwrap();
        assert!((dxy - distance(&y, &x, &q).unwrap()).abs() <= 1e-9);
        let dyz = distance(&y, &z, &q).unwrap();
        let dxz = distance(&x, &z, &q).unwrap();
        assert!(dxz <= dxy + dyz + 1e-9);
    }
    pass(
        9,
        "distance is zero on the diagonal, symmetric, and triangular on 1000 triples",
    );
}

#[test]
fn criterion_10_angle_identities() {
    let cat = util::catalog();
    let tau = std::f64::consts::TAU;
    for e in &cat.entries {
        let arr = &e.arrangement;
        let k = arr.n_loops();
        let signs = arr.sign_vectors().unwrap();
        for i in 0..k {
            for j in (i + 1)..k {
                for m in (j + 1)..k {
                    for oct in 0..8u8 {
                        let s = [
                            if oct & 1 != 0 { 1i8 } else { -1 },
                            if oct & 2 != 0 { 1 } else { -1 },
                            if oct & 4 != 0 { 1 } else { -1 },
                        ];
                        let w = util::octant_witness(arr, [i, j, m], s).unwrap();
                        // Deficit enclosed by the octant triangle.
                        let mut in_t = 0.0;
                        for (pair, d) in arr.deficits.iter().enumerate() {
                            let v = [signs[i][pair], signs[j][pair], signs[m][pair]];
                            if v == s || v == [-s[0], -s[1], -s[2]] {
                                in_t += d;
                            }
                        }
                        // Lune sums: the lune of each loop pair containing
                        // the triangle.
                        let li = lune_deficit_sum(arr, j, m, &w).unwrap();
                        let lj = lune_deficit_sum(arr, i, m, &w).unwrap();
                        let lm = lune_deficit_sum(arr, i, j, &w).unwrap();
                        let eq3 = li + lj + lm - 2.0 * in_t;
                        assert!(
                            (eq3 - tau).abs() <= 1e-10,
                            "{}: lune identity off by {:e}",
                            e.name,
                            (eq3 - tau).abs()
                        );
                        // Angle-sum identity for the triangle.
                        let ti = angle_from_lune(arr, j, m, &w).unwrap();
                        let tj = angle_from_lune(arr, i, m, &w).unwrap();
                        let tm = angle_from_lune(arr, i, j, &w).unwrap();
                        assert!(
                            ((ti + tj + tm) - (tau - in_t)).abs() <= 1e-10,
                            "{}: triangle angle identity",
                            e.name
                        );
                    }
                }
            }
        }
        // Adjacent corners of every quad are supplementary.
        let cx = build_complex(arr, &EdgeLengths::uniform(k, 1.0)).unwrap();
        for quad in &cx.quads {
            for t in 0..4 {
                let sum = quad.angles[t] + quad.angles[(t + 1) % 4];
                assert!(
                    (sum - std::f64::consts::PI).abs() <= 1e-10,
                    "{}: corner supplement",
                    e.name
                );
                assert!(quad.angles[t] > 0.0 && quad.angles[t] < std::f64::consts::PI);
            }
        }
    }
    pass(
        10,
        "lune and triangle identities to 1e−10 and θ + θ' = π on every catalog quad",
    );
}
