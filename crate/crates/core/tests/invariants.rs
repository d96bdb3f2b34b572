use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pseudoresolve::catalog;
use pseudoresolve::census::{balanced_check, iso, IsoMode, OrientedSphere};
use pseudoresolve::complex::{barycentric_subdivision, euler_characteristic};
use pseudoresolve::cubes::explore_component;
use pseudoresolve::io::ComplexFile;
use pseudoresolve::labeling::{labeling_from_coloring, verify_good};
use pseudoresolve::projection::{cube_coordinates, g_weights};
use pseudoresolve::{ensure_good, PseudoManifold, Resolver, UserLabeling};

fn octahedron_resolver() -> (Resolver, Vec<pseudoresolve::ResolutionState>) {
    let pm = PseudoManifold::new(catalog::octahedron_boundary()).unwrap();
    let lc = ensure_good(&pm, &UserLabeling::None).unwrap();
    let mut res = Resolver::new(lc).unwrap();
    let seed = res.initial_state(0).unwrap();
    let comp = explore_component(&mut res, seed, 10_000).unwrap();
    let states = comp.states().to_vec();
    (res, states)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_form_a_partition_of_unity(t in prop::collection::vec(0.0f64..=1.0, 1..6)) {
        let w = g_weights(&t);
        prop_assert!(w.iter().all(|x| *x >= 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weights_invert_off_the_degenerate_set(t in prop::collection::vec(0.001f64..0.999, 1..6)) {
        let back = cube_coordinates(&g_weights(&t)).unwrap();
        for (a, b) in t.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn generators_are_fixed_point_free_involutions(i in 0usize..96, j in 1usize..=2, eps in 0u8..=1) {
        let (mut res, states) = octahedron_resolver();
        let s = states[i % states.len()];
        let t = res.phi(j, eps, &s).unwrap();
        prop_assert_ne!(t, s);
        prop_assert_eq!(res.phi(j, eps, &t).unwrap(), s);
        prop_assert!(states.contains(&t));
    }

    #[test]
    fn subdivisions_are_well_labeled(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pm = PseudoManifold::new(catalog::random_pseudomanifold(&mut rng)).unwrap();
        let (sub, coloring) = barycentric_subdivision(&pm);
        let lab = labeling_from_coloring(&sub, &coloring).unwrap();
        prop_assert!(verify_good(&sub, &lab).is_good());
        prop_assert_eq!(euler_characteristic(sub.complex()), euler_characteristic(pm.complex()));
    }

    #[test]
    fn random_spheres_are_balanced_with_their_mirror(seed in any::<u64>(), extra in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = OrientedSphere::new(catalog::random_sphere(&mut rng, extra), None).unwrap();
        prop_assert!(balanced_check(&[y.clone(), y.mirror()]).is_ok());
        let shifted = y.relabeled(|v| v + 100).unwrap();
        let cert = iso(&y, &shifted, IsoMode::Preserve).unwrap();
        prop_assert!(cert.preserves_orientation);
    }

    #[test]
    fn complex_files_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pm = PseudoManifold::new(catalog::random_pseudomanifold(&mut rng)).unwrap();
        let file = ComplexFile::from_pm(&pm);
        let again = ComplexFile::parse(&file.emit()).unwrap();
        prop_assert_eq!(again.emit(), file.emit());
        let input = again.to_input().unwrap();
        prop_assert_eq!(input.pm.complex(), pm.complex());
        prop_assert_eq!(input.pm.orientation(), pm.orientation());
    }
}
