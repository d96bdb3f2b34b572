//! Acceptance suite. One line per criterion; the process fails if any
//! criterion fails.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pseudoresolve::catalog;
use pseudoresolve::census::{balanced_check, census_links, census_match, iso, vertex_links, IsoMode, OrientedSphere};
use pseudoresolve::complex::{barycentric_subdivision, face_interval};
use pseudoresolve::cubes::{explore_component, oriented_order_complex};
use pseudoresolve::labeling::{labeling_from_coloring, verify_good, LabelSet};
use pseudoresolve::projection::{cube_coordinates, g_weights};
use pseudoresolve::{
    ensure_good, resolve, Error, LabeledComplex, PseudoManifold, Provenance, ResolutionState, Resolver, ResolveOptions,
    SimplicialComplex, UserLabeling,
};

const POLYGON_BUDGET: Duration = Duration::from_secs(1);
const SURFACE_BUDGET: Duration = Duration::from_secs(60);
const SINGULAR_BUDGET: Duration = Duration::from_secs(300);
const WEIGHT_SUM_TOL: f64 = 1e-12;
const ROUND_TRIP_TOL: f64 = 1e-9;
const MIN_INVOLUTION_STATES: usize = 1000;
/// States explored for the 3-dimensional smoke test before giving up.
const SMOKE_CAP: usize = 5_000;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pm(c: SimplicialComplex) -> PseudoManifold {
    PseudoManifold::new(c).expect("catalog complexes are oriented pseudo-manifolds")
}

/// Orbit of the seed state of an m-gon, computed directly. A state is
/// (vertex, edge, parity); Φ⁰ moves to the other end of the edge, Φ¹ to
/// the other edge at the vertex and flips the parity. Edges are `{i, i+1}`.
fn polygon_orbit(m: usize) -> usize {
    let ends = |e: usize| [e, (e + 1) % m];
    let other_edge = |v: usize, e: usize| if e == v { (v + m - 1) % m } else { v };
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(0usize, 0usize, 0u8)]);
    seen.insert((0, 0, 0));
    while let Some((v, e, h)) = queue.pop_front() {
        let [a, b] = ends(e);
        let across = if v == a { b } else { a };
        for next in [(across, e, h), (v, other_edge(v, e), h ^ 1)] {
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    seen.len()
}

fn criterion_1() -> Check {
    let frozen = [(2, 4, 1), (3, 12, 2)];
    for (m, cubes, r) in frozen {
        ensure(polygon_orbit(m) == cubes, || format!("oracle disagrees with frozen {m}-gon size"))?;
        let res = resolve(catalog::polygon(m), &ResolveOptions::default()).map_err(|e| e.to_string())?;
        ensure(res.component.len() == cubes && res.degree.degree == r, || {
            format!("{m}-gon: {} cubes, degree {}", res.component.len(), res.degree.degree)
        })?;
    }
    let mut sizes = Vec::new();
    for m in 2..=8 {
        let t = Instant::now();
        let res = resolve(catalog::polygon(m), &ResolveOptions::default()).map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        let size = res.component.len();
        let r = res.degree.degree as usize;
        ensure(size == polygon_orbit(m), || format!("{m}-gon: {size} cubes, oracle {}", polygon_orbit(m)))?;
        ensure(size == 2 * m * r, || format!("{m}-gon: {size} != 2·{m}·{r}"))?;
        let q = &res.quotient;
        let points: Vec<u32> = (0..q.num_classes() as u32).filter(|c| q.class_dim(*c) == 0).collect();
        ensure(points.iter().all(|c| q.class_size(*c) == 2), || format!("{m}-gon: a point of M is not two edge ends"))?;
        ensure(points.len() == size && res.manifold.is_manifold(), || format!("{m}-gon: M is not a circle"))?;
        ensure(elapsed < POLYGON_BUDGET, || format!("{m}-gon took {elapsed:?}"))?;
        sizes.push(size);
    }
    Ok(format!("sizes {sizes:?} for m = 2..8"))
}

/// Counts violations of the generator relations over `states`.
fn involution_violations(res: &mut Resolver, states: &[ResolutionState]) -> std::result::Result<usize, Error> {
    let n = res.dim();
    let mut bad = 0;
    for s in states {
        for j in 1..=n {
            for eps in [0, 1] {
                let t = res.phi(j, eps, s)?;
                if t == *s || res.phi(j, eps, &t)? != *s {
                    bad += 1;
                }
                if eps == 1 && res.check_state(&t).is_err() {
                    bad += 1;
                }
            }
            for k in 1..=n {
                if j != k {
                    let a = res.phi(k, 1, s)?;
                    let b = res.phi(j, 0, s)?;
                    if res.phi(j, 0, &a)? != res.phi(k, 1, &b)? {
                        bad += 1;
                    }
                }
                if j < k {
                    let a = res.phi(k, 1, s)?;
                    let b = res.phi(j, 1, s)?;
                    if res.phi(j, 1, &a)? != res.phi(k, 1, &b)? {
                        bad += 1;
                    }
                }
            }
        }
    }
    Ok(bad)
}

fn criterion_2() -> Check {
    let inputs = [
        ("octahedron", catalog::octahedron_boundary()),
        ("tetrahedron", catalog::tetrahedron_boundary()),
        ("pinched torus", catalog::pinched_torus()),
        ("torus7", catalog::torus7()),
    ];
    let mut total = 0;
    for (name, c) in inputs {
        let lc = ensure_good(&pm(c), &UserLabeling::None).map_err(|e| e.to_string())?;
        let mut res = Resolver::new(lc).map_err(|e| e.to_string())?;
        let seed = res.initial_state(0).map_err(|e| e.to_string())?;
        let states = match explore_component(&mut res, seed, 2000) {
            Ok(comp) => comp.states().to_vec(),
            Err(Error::CapExceeded(p)) => p.states,
            Err(e) => return Err(format!("{name}: {e}")),
        };
        let bad = involution_violations(&mut res, &states).map_err(|e| format!("{name}: {e}"))?;
        ensure(bad == 0, || format!("{name}: {bad} violations"))?;
        total += states.len();
    }
    ensure(total >= MIN_INVOLUTION_STATES, || format!("only {total} states checked"))?;
    Ok(format!("{total} states over 4 inputs, 0 violations"))
}

/// Checks common to closed oriented surfaces: walls have two sides and
/// vertex links are circles.
fn check_surface(res: &pseudoresolve::Resolution) -> std::result::Result<(), String> {
    let q = &res.quotient;
    let n = q.dim();
    for c in 0..q.num_classes() as u32 {
        if q.class_dim(c) == n - 1 {
            ensure(q.class_size(c) == 2, || format!("wall class {c} has {} sides", q.class_size(c)))?;
        }
    }
    ensure(res.manifold.is_manifold(), || format!("link failures {:?}", res.manifold.failures.first()))?;
    let m = oriented_order_complex(q, &res.cube_signs).map_err(|e| e.to_string())?;
    for (v, link) in vertex_links(&m) {
        let c = link.complex();
        let circle = c.dim() == 1 && c.vertices().iter().all(|u| c.facets().iter().filter(|f| f.contains(*u)).count() == 2);
        ensure(circle && is_connected(c), || format!("link of vertex {v} is not a circle"))?;
    }
    Ok(())
}

fn is_connected(c: &SimplicialComplex) -> bool {
    let verts: Vec<_> = c.vertices().into_iter().collect();
    let mut seen = BTreeSet::from([verts[0]]);
    let mut stack = vec![verts[0]];
    while let Some(v) = stack.pop() {
        for f in c.facets().iter().filter(|f| f.contains(v)) {
            for u in f.vertices() {
                if seen.insert(*u) {
                    stack.push(*u);
                }
            }
        }
    }
    seen.len() == verts.len()
}

fn criterion_3() -> Check {
    let t = Instant::now();
    let res = resolve(catalog::tetrahedron_boundary(), &ResolveOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(res.resolver.labeled().provenance() == Provenance::Subdivided, || "input was not subdivided".into())?;
    check_surface(&res)?;
    let d = &res.degree;
    ensure(d.flags == 144, || format!("{} flags", d.flags))?;
    let r = d.signed_counts[0];
    ensure(d.signed_counts.iter().all(|c| *c == r) && r != 0, || "degree not constant".into())?;
    let chi = res.quotient.euler_characteristic();
    if res.covering.branch_points.is_empty() {
        ensure(chi == 2 * d.degree as i64, || format!("χ = {chi}, r = {}", d.degree))?;
    }
    ensure(elapsed < SURFACE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} cubes, r = {}, χ = {chi}, {} branch pieces, {elapsed:.1?}",
        res.component.len(),
        d.degree,
        res.covering.branch_points.len()
    ))
}

fn criterion_4() -> Check {
    let t = Instant::now();
    let res = match resolve(catalog::pinched_torus(), &ResolveOptions::default()) {
        Ok(r) => r,
        Err(Error::CapExceeded(p)) => return Err(format!("cap exceeded after {} states", p.states.len())),
        Err(e) => return Err(e.to_string()),
    };
    let elapsed = t.elapsed();
    check_surface(&res)?;
    let cov = &res.covering;
    ensure(cov.is_covering(), || format!("covering violations {:?} {:?}", cov.wall_violations.first(), cov.local_violations.first()))?;
    ensure(cov.branching_off_skeleton_free(2), || "branching over a wall or facet".into())?;
    ensure(res.degree.degree >= 1, || "degree 0".into())?;
    ensure(elapsed < SINGULAR_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} cubes, r = {}, χ = {}, {} branch pieces over vertices, {elapsed:.1?}",
        res.component.len(),
        res.degree.degree,
        res.quotient.euler_characteristic(),
        cov.branch_points.len()
    ))
}

fn criterion_5() -> Check {
    let input = pm(catalog::suspension(&catalog::torus7()));
    let lc = ensure_good(&input, &UserLabeling::None).map_err(|e| e.to_string())?;
    let mut res = Resolver::new(lc).map_err(|e| e.to_string())?;
    let seed = res.initial_state(0).map_err(|e| e.to_string())?;
    match explore_component(&mut res, seed, SMOKE_CAP) {
        Ok(comp) => {
            let out = pseudoresolve::pipeline::finish(input, res, comp).map_err(|e| e.to_string())?;
            ensure(out.manifold.is_manifold(), || "a vertex link is not a 2-sphere".into())?;
            Ok(format!("completed: {} cubes, r = {}", out.component.len(), out.degree.degree))
        }
        Err(Error::CapExceeded(p)) => {
            ensure(p.states.len() >= p.cap, || "cap reported early".into())?;
            for s in &p.states {
                res.check_state(s).map_err(|e| e.to_string())?;
            }
            let bad = involution_violations(&mut res, &p.states[..p.states.len().min(1000)]).map_err(|e| e.to_string())?;
            ensure(bad == 0, || format!("{bad} violations on the partial orbit"))?;
            Ok(format!("cap {} reached cleanly, {} states checked", p.cap, p.states.len()))
        }
        Err(e) => Err(e.to_string()),
    }
}

/// Checks that `S ↦ face_by_labelset(F, G, S)` is a bijection from the
/// subsets of `c(F)` onto the interval `[F, G]`.
fn check_intervals(lc: &LabeledComplex) -> std::result::Result<usize, String> {
    let pm = lc.pm();
    let mut checked = 0;
    for g in pm.complex().facets() {
        for mask in 1..(1u32 << g.len()) {
            let f = g.sub_cell(mask);
            let cf = lc.labelset(&f).map_err(|e| e.to_string())?;
            let labels = cf.to_vec();
            let expected: BTreeSet<_> = face_interval(pm, &f, g).map_err(|e| e.to_string())?.into_iter().collect();
            let mut got = BTreeSet::new();
            for sub in 0..(1u32 << labels.len()) {
                let mut s = LabelSet::default();
                for (i, l) in labels.iter().enumerate() {
                    if sub >> i & 1 == 1 {
                        s.insert(*l);
                    }
                }
                let h = lc.face_by_labelset(&f, g, s).map_err(|e| e.to_string())?;
                ensure(lc.labelset(&h).map_err(|e| e.to_string())? == s, || format!("c({h}) is not the requested set"))?;
                got.insert(h);
            }
            ensure(got == expected && got.len() == 1 << labels.len(), || format!("interval [{f}, {g}] not hit bijectively"))?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut intervals, mut mutations) = (0, 0);
    for trial in 0..20 {
        let input = pm(catalog::random_pseudomanifold(&mut rng));
        let (sub, coloring) = barycentric_subdivision(&input);
        let lab = labeling_from_coloring(&sub, &coloring).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(verify_good(&sub, &lab).is_good(), || format!("trial {trial}: subdivision labeling not good"))?;
        let lc = LabeledComplex::new(sub.clone(), lab.clone(), Provenance::Subdivided).map_err(|e| e.to_string())?;
        intervals += check_intervals(&lc).map_err(|e| format!("trial {trial}: {e}"))?;
        let n = sub.dim() as u32;
        let ridges: Vec<_> = lab.iter().map(|(c, l)| (c.clone(), l)).collect();
        for _ in 0..10 {
            let (ridge, old) = &ridges[rng.gen_range(0..ridges.len())];
            for new in (0..=n + 1).filter(|l| l != old) {
                let caught = !verify_good(&sub, &lab.with_label(ridge, new)).is_good();
                // in dimension 1 there is no face of codimension 2, so every labeling is good
                ensure(caught == (n >= 2), || format!("trial {trial}: relabeling {ridge} to {new}: caught = {caught}"))?;
                mutations += usize::from(caught);
            }
        }
    }
    Ok(format!("20 complexes, {intervals} intervals, {mutations} mutations caught"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_sum, mut worst_trip) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=4);
        let t: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..0.99)).collect();
        let w = g_weights(&t);
        worst_sum = worst_sum.max((w.iter().sum::<f64>() - 1.0).abs());
        let back = cube_coordinates(&w).ok_or("inverse undefined off the degenerate set")?;
        let err = t.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_trip = worst_trip.max(err);
    }
    ensure(worst_sum < WEIGHT_SUM_TOL, || format!("weight sum off by {worst_sum:e}"))?;
    ensure(worst_trip < ROUND_TRIP_TOL, || format!("round trip off by {worst_trip:e}"))?;
    Ok(format!("10^4 samples, max sum error {worst_sum:.1e}, max round trip error {worst_trip:.1e}"))
}

fn sphere(c: SimplicialComplex) -> OrientedSphere {
    OrientedSphere::new(c, None).expect("catalog spheres are orientable")
}

/// Pairs as unordered vertex pairs, for comparison across runs.
fn pair_set(pairs: &[pseudoresolve::census::MirrorPair<u32>]) -> BTreeSet<(u32, u32)> {
    pairs.iter().map(|p| (p.first.min(p.second), p.first.max(p.second))).collect()
}

fn census_consistent(m: &PseudoManifold, ys: &[OrientedSphere]) -> std::result::Result<bool, String> {
    let report = match census_match(m, ys) {
        Ok(r) => r,
        Err(Error::PatternMismatch(_)) => return Ok(false),
        Err(e) => return Err(e.to_string()),
    };
    let matched: BTreeSet<u32> = report.matched.iter().flatten().copied().collect();
    ensure(report.matched.iter().all(|v| v.len() == report.r), || "matched list of wrong length".into())?;
    let residual: Vec<_> = vertex_links(m).into_iter().filter(|(v, _)| !matched.contains(v)).collect();
    let again = census_links(&residual, &[]).map_err(|e| format!("residual does not pair off: {e}"))?;
    ensure(again.r == 0, || "residual census has r > 0".into())?;
    ensure(pair_set(&again.residual_pairs) == pair_set(&report.residual_pairs), || "residual pairs differ".into())?;
    Ok(true)
}

fn criterion_8() -> Check {
    let tet = sphere(catalog::tetrahedron_boundary());
    let id = iso(&tet, &tet, IsoMode::Preserve).ok_or("no identity certificate")?;
    ensure(id.preserves_orientation && id.map.iter().all(|(a, b)| a == b), || "first certificate is not the identity".into())?;
    let mirror = iso(&tet, &tet.mirror(), IsoMode::Reverse).ok_or("no mirror certificate")?;
    ensure(!mirror.preserves_orientation && mirror.map.iter().all(|(a, b)| a == b), || "mirror certificate is not the identity".into())?;
    let swapped = tet.relabeled(|v| [1, 0, 2, 3][v as usize]).map_err(|e| e.to_string())?;
    ensure(iso(&tet, &swapped, IsoMode::Reverse).is_some(), || "odd relabeling not found reversing".into())?;
    let oct = sphere(catalog::octahedron_boundary());
    ensure(iso(&tet, &oct, IsoMode::Either).is_none(), || "tetrahedron matched octahedron".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..10 {
        let extra = rng.gen_range(1..8);
        let y = sphere(catalog::random_sphere(&mut rng, extra));
        balanced_check(&[y.clone(), y.mirror()]).map_err(|e| format!("random sphere {i}: {e}"))?;
    }
    ensure(
        matches!(balanced_check(&[sphere(catalog::bipyramid(3))]), Err(Error::NotBalanced(_))),
        || "odd-count bipyramid accepted".into(),
    )?;

    let mut runs = vec![
        (pm(catalog::octahedron_boundary()), vec![]),
        (pm(catalog::octahedron_boundary()), vec![sphere(catalog::polygon(4))]),
        (pm(catalog::octahedron_boundary()), vec![sphere(catalog::polygon(4)); 2]),
        (pm(catalog::bipyramid(5)), vec![sphere(catalog::polygon(4))]),
        (pm(catalog::torus7()), vec![sphere(catalog::polygon(6))]),
    ];
    for c in [catalog::polygon(3), catalog::octahedron_boundary(), catalog::tetrahedron_boundary()] {
        let res = resolve(c, &ResolveOptions::default()).map_err(|e| e.to_string())?;
        let m = oriented_order_complex(&res.quotient, &res.cube_signs).map_err(|e| e.to_string())?;
        let first = vertex_links(&m)[0].1.clone();
        runs.push((m.clone(), vec![]));
        runs.push((m, vec![first]));
    }
    let mut ok = 0;
    for (i, (m, ys)) in runs.iter().enumerate() {
        if census_consistent(m, ys).map_err(|e| format!("run {i}: {e}"))? {
            ok += 1;
        }
    }
    ensure(ok >= 5, || format!("only {ok} census runs matched"))?;
    Ok(format!("certificates ok, 10 balanced random spheres, {ok}/{} census runs consistent", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("polygons", criterion_1),
        ("involutions", criterion_2),
        ("subdivided tetrahedron", criterion_3),
        ("pinched torus", criterion_4),
        ("3-dimensional smoke", criterion_5),
        ("labelings", criterion_6),
        ("projection numerics", criterion_7),
        ("census", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS  {detail} [{elapsed:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL  {detail} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
