use std::time::Instant;

use pseudoresolve::{catalog, resolve, ResolveOptions, SimplicialComplex};

fn run(name: &str, c: SimplicialComplex, cap: usize) {
    let t = Instant::now();
    let opts = ResolveOptions { max_states: cap, ..Default::default() };
    match resolve(c, &opts) {
        Ok(r) => {
            let rep = r.report();
            println!(
                "{name}: {} states, sheets {}, r = {}, chi = {}, manifold = {}, covering = {}, branch = {} (max {}) [{:?}]",
                rep.component_size, r.covering.sheets, rep.degree, rep.euler_characteristic, rep.manifold, rep.covering,
                rep.branch_points, rep.max_branching, t.elapsed()
            );
            if !r.manifold.is_manifold() {
                println!("  {:?}", r.manifold.failures.iter().take(3).collect::<Vec<_>>());
            }
            if !r.covering.is_covering() {
                println!("  {:?} {:?}", r.covering.wall_violations.iter().take(3).collect::<Vec<_>>(), r.covering.local_violations.iter().take(3).collect::<Vec<_>>());
            }
        }
        Err(e) => println!("{name}: error {e} [{:?}]", t.elapsed()),
    }
}

fn main() {
    let cap: usize = std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(1_000_000);
    for m in 2..=8 {
        run(&format!("{m}-gon"), catalog::polygon(m), cap);
    }
    run("octahedron", catalog::octahedron_boundary(), cap);
    run("tetrahedron", catalog::tetrahedron_boundary(), cap);
    run("pinched torus", catalog::pinched_torus(), cap);
    run("torus7", catalog::torus7(), cap);
    run("bipyramid5", catalog::bipyramid(5), cap);
    if cap < 1_000_000 { run("susp torus7", catalog::suspension(&catalog::torus7()), cap); }
}
