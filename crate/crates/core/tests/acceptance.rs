//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regge_core::catalog::{
    self, a0_sweep, classify_tet, codecomposability_inequality_check, oct_sections, random_cone_triangulation,
    random_move, random_refinement, theta_grid, RefinementKind, SplitCase, THETA_MAX,
};
use regge_core::complex::{census, Triangulation3};
use regge_core::geometry::{signed_volume, ClosedSurface};
use regge_core::moves::{move_delta, theorem_signature, Definiteness};
use regge_core::pipeline::{analyze, AnalysisConfig, Source};
use regge_core::regge::{gradient_check, hessian, kernel_span_check, schlafli_residual, HessianOptions};
use regge_core::rigidity::{dehn_decomposition_check, flex_space, is_infinitesimally_rigid, Framework};
use regge_core::{tol, Point3, Vector3};

const GAP: f64 = 1e3;
const SYMMETRY: f64 = 1e-6;
const GRADIENT: f64 = 1e-6;
const SCHLAFLI: f64 = 1e-8;
const KERNEL: f64 = 1e-6;
const PHI_ZERO: f64 = 1e-8;
const SECTION: f64 = 1e-12;
const SLACK: f64 = 1e-10;

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(name: &'static str, failures: Vec<String>, summary: String) -> Outcome {
    let passed = failures.is_empty();
    let detail = if passed {
        summary
    } else {
        let shown: Vec<&String> = failures.iter().take(5).collect();
        format!("{summary}; {} failure(s): {:?}", failures.len(), shown)
    };
    Outcome { name, passed, detail }
}

const ALL_KINDS: [RefinementKind; 4] = [
    RefinementKind::OneFour,
    RefinementKind::TwoThree,
    RefinementKind::BoundaryStarTriangle,
    RefinementKind::BoundaryStarEdge,
];

fn refined_instances() -> Vec<Triangulation3> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..25)
        .map(|i| {
            let base = random_cone_triangulation(&mut rng, 6 + i % 10).expect("random cone");
            random_refinement(&base, &mut rng, 4 + 3 * i, &ALL_KINDS).0
        })
        .collect()
}

fn triangulated_entries() -> Vec<(String, Triangulation3)> {
    catalog::all().into_iter().filter_map(|e| e.triangulation.map(|t| (e.name, t))).collect()
}

fn signature_theorem(instances: &[Triangulation3]) -> Outcome {
    let start = Instant::now();
    let opts = HessianOptions::default();
    let mut failures = Vec::new();
    let mut max_n = 0;
    let mut min_gap = f64::INFINITY;
    let mut max_m = 0;
    for (i, t) in instances.iter().enumerate() {
        let c = census(t).expect("census");
        let h = hessian(t, &opts).expect("hessian");
        max_n = max_n.max(h.n());
        max_m = max_m.max(c.m());
        let predicted = theorem_signature(&c);
        if predicted != Some(h.signature) {
            failures.push(format!("#{i}: m={} k={} n={} observed {:?}", c.m(), c.k(), c.n(), h.signature));
        }
        let gap = h.gap_ratio.unwrap_or(f64::INFINITY);
        min_gap = min_gap.min(gap);
        if gap < GAP {
            failures.push(format!("#{i}: gap ratio {gap:e}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 60.0 {
        failures.push(format!("runtime {secs:.1} s"));
    }
    let summary = format!(
        "{} triangulations, n up to {max_n}, m up to {max_m}, min gap {min_gap:.3e}, {secs:.2} s",
        instances.len()
    );
    outcome("1 signature theorem", failures, summary)
}

fn positive_definite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = HessianOptions::default();
    let mut failures = Vec::new();
    let mut min_gap = f64::INFINITY;
    let sizes: Vec<usize> = (0..12).map(|i| 6 + (i * 14) / 11).collect();
    for &v in &sizes {
        let t = random_cone_triangulation(&mut rng, v).expect("random cone");
        let h = hessian(&t, &opts).expect("hessian");
        let min = h.min_eigenvalue().unwrap_or(f64::INFINITY);
        let gap = h.gap_ratio.unwrap_or(f64::INFINITY);
        min_gap = min_gap.min(gap);
        if !(min > 0.0) || h.signature.zero != 0 || gap < GAP {
            failures.push(format!("{v} vertices: min eigenvalue {min:e}, gap {gap:e}, {:?}", h.signature));
        }
    }
    outcome("2 positive definiteness", failures, format!("{} cones with {:?} vertices, min gap {min_gap:.3e}", sizes.len(), sizes))
}

fn symmetry(extra: &[Triangulation3]) -> Outcome {
    let opts = HessianOptions::default();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let named = triangulated_entries();
    let all = named.iter().map(|(n, t)| (n.clone(), t)).chain(extra.iter().enumerate().map(|(i, t)| (format!("refined #{i}"), t)));
    for (name, t) in all {
        let h = hessian(t, &opts).expect("hessian");
        count += 1;
        if h.n() == 0 {
            continue;
        }
        worst = worst.max(h.relative_asymmetry);
        if h.relative_asymmetry >= SYMMETRY {
            failures.push(format!("{name}: {:e}", h.relative_asymmetry));
        }
    }
    outcome("3 Hessian symmetry", failures, format!("{count} instances, worst relative asymmetry {worst:.2e}"))
}

fn gradient_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for (name, t) in triangulated_entries() {
        let topo = t.topology();
        let l0 = t.realized_lengths(&topo);
        if l0.is_empty() {
            continue;
        }
        let mut found = 0;
        while found < 10 {
            let l: Vec<f64> = l0.iter().map(|x| x * (1.0 + rng.gen_range(-0.05..0.05))).collect();
            if !t.in_domain(&topo, &l).unwrap() {
                continue;
            }
            found += 1;
            let g = gradient_check(&t, &topo, &l, tol::FD_STEP).expect("gradient");
            worst = worst.max(g.max_rel_error);
            if g.max_rel_error >= GRADIENT {
                failures.push(format!("{name}: {:e}", g.max_rel_error));
            }
        }
        points += found;
    }
    outcome("4 gradient identity", failures, format!("{points} interior points, worst relative error {worst:.2e}"))
}

fn random_velocity(rng: &mut impl Rng, n: usize) -> Vec<Vector3> {
    (0..n).map(|_| Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn random_tet_surface(rng: &mut impl Rng) -> ClosedSurface {
    loop {
        let p: Vec<Point3> = (0..4)
            .map(|_| Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if signed_volume(&p[0], &p[1], &p[2], &p[3]).abs() > 1e-2 {
            return ClosedSurface::new_oriented(p, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
        }
    }
}

fn schlafli() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let convex: Vec<ClosedSurface> = catalog::all().into_iter().filter(|e| e.expected.convex).map(|e| e.boundary).collect();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for i in 0..100 {
        let s = if i % 2 == 0 { random_tet_surface(&mut rng) } else { convex[(i / 2) % convex.len()].clone() };
        let v = random_velocity(&mut rng, s.points.len());
        let r = schlafli_residual(&s, &v).expect("schlafli");
        runs += 1;
        worst = worst.max(r.relative());
        if r.relative() >= SCHLAFLI {
            failures.push(format!("run {i}: {:e}", r.relative()));
        }
    }
    outcome(
        "5 Schläfli residual",
        failures,
        format!("{runs} deformations (random tets and {} convex polyhedra), worst {worst:.2e}", convex.len()),
    )
}

fn kernel_construction(instances: &[Triangulation3]) -> Outcome {
    let opts = HessianOptions::default();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let named = triangulated_entries();
    let all = named.iter().map(|(n, t)| (n.clone(), t)).chain(instances.iter().enumerate().map(|(i, t)| (format!("refined #{i}"), t)));
    let mut count = 0;
    for (name, t) in all {
        let c = census(t).expect("census");
        let h = hessian(t, &opts).expect("hessian");
        let k = kernel_span_check(t, &c, &h).expect("kernel");
        count += 1;
        worst = worst.max(k.max_residual);
        if !k.passes(KERNEL) || k.predicted != 3 * c.m() + c.k() {
            failures.push(format!(
                "{name}: predicted {} span {} observed {} residual {:e}",
                k.predicted, k.span_rank, k.observed, k.max_residual
            ));
        }
    }
    outcome("6 kernel construction", failures, format!("{count} triangulations, worst residual {worst:.2e}"))
}

fn move_deltas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = HessianOptions::default();
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for kind in ALL_KINDS {
        // Edge starring counts genuine edges of the polyhedron; edges inside
        // planar faces are checked too but tallied apart.
        let mut done = 0;
        let mut in_face = 0;
        let mut attempts = 0;
        while done < 20 && attempts < 400 {
            attempts += 1;
            let v = rng.gen_range(6..11);
            let base = random_cone_triangulation(&mut rng, v).expect("random cone");
            let pre = rng.gen_range(0..4);
            let (t, _) = random_refinement(&base, &mut rng, pre, &ALL_KINDS);
            let Some((t2, rec)) = random_move(&t, &mut rng, kind) else { continue };
            let h0 = hessian(&t, &opts).expect("hessian before");
            let h1 = hessian(&t2, &opts).expect("hessian after");
            let d = move_delta(&h0, &h1, &rec, opts.zero_threshold).expect("delta");
            let flat = census(&t2).unwrap().k() > census(&t).unwrap().k();
            let scale = h0.norm().max(h1.norm()).max(1.0);
            let ok = match kind {
                RefinementKind::TwoThree => d.definiteness == Definiteness::Psd && d.rank == 1,
                RefinementKind::OneFour => d.definiteness == Definiteness::Nsd && d.rank == 1,
                RefinementKind::BoundaryStarTriangle => d.max_abs_entry < PHI_ZERO * scale,
                RefinementKind::BoundaryStarEdge => {
                    // A new vertex inside a planar face trades one positive
                    // eigenvalue for a zero one.
                    let i = rec.incident_tets - 1 - flat as usize;
                    let want = if i == 0 { Definiteness::Zero } else { Definiteness::Psd };
                    d.definiteness == want && d.rank == i
                }
            };
            if kind == RefinementKind::BoundaryStarEdge && flat {
                in_face += 1;
            } else {
                done += 1;
            }
            if !ok {
                failures.push(format!(
                    "{kind:?}: {:?} rank {} (incident {}, flat {flat}), max entry {:e}",
                    d.definiteness, d.rank, rec.incident_tets, d.max_abs_entry
                ));
            }
        }
        if done < 20 {
            failures.push(format!("{kind:?}: only {done} instances"));
        }
        if kind == RefinementKind::BoundaryStarEdge {
            counts.push(format!("{kind:?} {done} (+{in_face} inside faces)"));
        } else {
            counts.push(format!("{kind:?} {done}"));
        }
    }
    outcome("7 move deltas", failures, counts.join(", "))
}

fn rigidity_verdicts() -> Outcome {
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for e in catalog::all() {
        if e.expected.convex && e.name != "flat-vertex-sphere" {
            match is_infinitesimally_rigid(&e.boundary) {
                Ok(v) if v.rigid => notes.push(format!("{} rigid", e.name)),
                other => failures.push(format!("{}: {other:?}", e.name)),
            }
        }
    }
    for name in ["jessen-icosahedron", "wunderlich-octahedron"] {
        let e = catalog::builtin(name).unwrap();
        let fs = flex_space(&Framework::from_surface(&e.boundary).unwrap()).unwrap();
        notes.push(format!("{name} nontrivial {}", fs.nontrivial_dim));
        if fs.nontrivial_dim < 1 {
            failures.push(format!("{name}: nontrivial_dim {}", fs.nontrivial_dim));
        }
    }
    let e = catalog::builtin("flat-vertex-sphere").unwrap();
    let c = census(e.triangulation.as_ref().unwrap()).unwrap();
    let fs = flex_space(&Framework::from_surface(&e.boundary).unwrap()).unwrap();
    let dehn = dehn_decomposition_check(&e.boundary).unwrap();
    notes.push(format!("flat-vertex-sphere flex dim {} (k = {})", fs.kernel_dim, c.k()));
    if fs.kernel_dim != 6 + c.k() || !dehn.passes {
        failures.push(format!("flat-vertex-sphere: flex dim {}, k {}, dehn residual {:e}", fs.kernel_dim, c.k(), dehn.max_residual));
    }
    outcome("8 rigidity verdicts", failures, notes.join(", "))
}

fn lemma_cross_check() -> Outcome {
    let opts = HessianOptions::default();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for e in catalog::all() {
        let Some(t) = &e.triangulation else { continue };
        let c = census(t).unwrap();
        if c.m() != 0 || c.k() != 0 {
            continue;
        }
        let h = hessian(t, &opts).unwrap();
        let nondegenerate = h.signature.zero == 0;
        let rigid = is_infinitesimally_rigid(&e.boundary).unwrap().rigid;
        notes.push(format!("{} ({nondegenerate}, {rigid})", e.name));
        if nondegenerate != rigid {
            failures.push(format!("{}: non-degenerate {nondegenerate}, rigid {rigid}", e.name));
        }
    }
    outcome("9 non-degenerate iff rigid", failures, notes.join(", "))
}

fn random_split_tet(rng: &mut impl Rng, below: usize) -> [Point3; 4] {
    let mut p = [Point3::origin(); 4];
    for (i, q) in p.iter_mut().enumerate() {
        let h = rng.gen_range(1.0..3.0);
        let z = if i < below { -h } else { h };
        *q = Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), z);
    }
    p
}

fn appendix() -> Outcome {
    let mut failures = Vec::new();
    let target = 3.0 * 3f64.sqrt() / 4.0;
    let grid = theta_grid(0.0, THETA_MAX - 1e-3, 199).unwrap();
    let rows = a0_sweep(&grid).unwrap();
    let worst_end = rows
        .iter()
        .map(|r| (r.a_plus - target).abs().max((r.a_minus - target).abs()))
        .fold(0.0, f64::max);
    if worst_end > SECTION {
        failures.push(format!("A_±1 deviates by {worst_end:e}"));
    }
    for w in rows.windows(2) {
        if !(w[1].a0 < w[0].a0) {
            failures.push(format!("A_0 not decreasing at theta {}", w[1].theta));
            break;
        }
    }
    let ratio = rows[rows.len() - 1].a0 / rows[0].a0;
    if !(ratio < 1e-2) {
        failures.push(format!("A_0 ratio {ratio:e}"));
    }
    let sign_change = rows.windows(2).find(|w| w[0].margin >= 0.0 && w[1].margin < 0.0).map(|w| w[1].theta);
    if sign_change.is_none() {
        failures.push("4A_0 - A_-1 - A_1 does not change sign".into());
    }
    if rows[0].margin <= 0.0 || oct_sections(0.0).unwrap().margin <= 0.0 {
        failures.push("margin not positive at theta = 0".into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = [f64::INFINITY; 3];
    for (ci, (below, case)) in [(2, SplitCase::TwoTwo), (3, SplitCase::OneThree), (1, SplitCase::ThreeOne)].into_iter().enumerate() {
        let tets: Vec<[Point3; 4]> = (0..1000).map(|_| random_split_tet(&mut rng, below)).collect();
        if tets.iter().any(|t| classify_tet(t).ok() != Some(case)) {
            failures.push(format!("{case:?}: misclassified tet"));
        }
        let check = codecomposability_inequality_check(&tets, None).unwrap();
        for t in &check.tets {
            worst[ci] = worst[ci].min(t.margin.min(t.margin4));
        }
        if worst[ci] < -SLACK {
            failures.push(format!("{case:?}: min margin {:e}", worst[ci]));
        }
    }
    let summary = format!(
        "200 angles, |A_±1 - 3√3/4| <= {worst_end:.1e}, A_0 ratio {ratio:.2e}, sign change at theta {:.4}, min per-tet margins {:.2e}/{:.2e}/{:.2e}",
        sign_change.unwrap_or(f64::NAN),
        worst[0],
        worst[1],
        worst[2]
    );
    outcome("10 appendix reproduction", failures, summary)
}

fn determinism() -> Outcome {
    let mut failures = Vec::new();
    let config = AnalysisConfig::default();
    let names: Vec<String> = catalog::all().into_iter().map(|e| e.name).collect();
    for name in &names {
        let a = analyze(&Source::Catalog(name.clone()), &config).map(|r| r.to_json());
        let b = analyze(&Source::Catalog(name.clone()), &config).map(|r| r.to_json());
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => failures.push(format!("{name}: reports differ")),
            (a, b) => failures.push(format!("{name}: {:?} / {:?}", a.err(), b.err())),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let t = random_refinement(&random_cone_triangulation(&mut rng, 9).unwrap(), &mut rng, 10, &ALL_KINDS).0;
    let bytes = regge_core::io::triangulation_to_json(&t).into_bytes();
    let src = Source::File { path: "refined.json".into(), bytes };
    let a = analyze(&src, &config).unwrap().to_json();
    let b = analyze(&src, &config).unwrap().to_json();
    if a != b {
        failures.push("refined file: reports differ".into());
    }
    outcome("11 determinism", failures, format!("{} catalog entries and one file input, analyzed twice", names.len()))
}

fn main() {
    let instances = refined_instances();
    let results = vec![
        signature_theorem(&instances),
        positive_definite(),
        symmetry(&instances),
        gradient_identity(),
        schlafli(),
        kernel_construction(&instances),
        move_deltas(),
        rigidity_verdicts(),
        lemma_cross_check(),
        appendix(),
        determinism(),
    ];
    for r in &results {
        println!("{} criterion {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
