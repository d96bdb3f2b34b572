//! Small named complexes used by the tests, the CLI and the guide.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{Cell, SimplicialComplex, Vertex};

fn complex(dim: usize, facets: Vec<Vec<Vertex>>) -> SimplicialComplex {
    SimplicialComplex::new(dim, facets.into_iter().map(|f| Cell::new(f).unwrap()).collect()).unwrap()
}

/// The `m`-gon for `m >= 2`; the 2-gon has two edges on the same two
/// vertices.
pub fn polygon(m: usize) -> SimplicialComplex {
    assert!(m >= 2);
    complex(1, (0..m as Vertex).map(|i| vec![i, (i + 1) % m as Vertex]).collect())
}

/// Boundary of the `(d + 1)`-simplex, a `d`-sphere on `d + 2` vertices.
pub fn boundary_of_simplex(d: usize) -> SimplicialComplex {
    let k = d as Vertex + 2;
    complex(d, (0..k).map(|skip| (0..k).filter(|v| *v != skip).collect()).collect())
}

pub fn tetrahedron_boundary() -> SimplicialComplex {
    boundary_of_simplex(2)
}

/// Octahedron boundary; antipodal pairs are `{0,1}`, `{2,3}`, `{4,5}`.
pub fn octahedron_boundary() -> SimplicialComplex {
    let mut f = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                f.push(vec![a, b, c]);
            }
        }
    }
    complex(2, f)
}

/// Color of octahedron vertex `v` in its antipodal 3-coloring.
pub fn octahedron_coloring() -> Vec<u32> {
    vec![0, 0, 1, 1, 2, 2]
}

/// Six-vertex real projective plane.
pub fn projective_plane() -> SimplicialComplex {
    complex(
        2,
        vec![
            vec![0, 1, 3],
            vec![0, 1, 5],
            vec![0, 2, 4],
            vec![0, 2, 5],
            vec![0, 3, 4],
            vec![1, 2, 3],
            vec![1, 2, 4],
            vec![1, 4, 5],
            vec![2, 3, 5],
            vec![3, 4, 5],
        ],
    )
}

/// Seven-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7() -> SimplicialComplex {
    let mut f = Vec::new();
    for i in 0..7 {
        f.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        f.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    complex(2, f)
}

/// Vertex of [`pinched_torus`] whose link is two circles.
pub const PINCH_VERTEX: Vertex = 0;

/// A 2-sphere (two triangles capping a triangular antiprism) with its two
/// apices, at distance 3, identified. Seven vertices, χ = 1.
pub fn pinched_torus() -> SimplicialComplex {
    let a = |i: u32| 1 + i % 3;
    let b = |i: u32| 4 + i % 3;
    let mut f = Vec::new();
    for i in 0..3 {
        f.push(vec![PINCH_VERTEX, a(i), a(i + 1)]);
        f.push(vec![a(i), a(i + 1), b(i)]);
        f.push(vec![a(i + 1), b(i), b(i + 1)]);
        f.push(vec![PINCH_VERTEX, b(i), b(i + 1)]);
    }
    complex(2, f)
}

/// Two tetrahedron boundaries sharing vertex 0.
pub fn two_spheres_sharing_a_vertex() -> SimplicialComplex {
    let mut f: Vec<Vec<Vertex>> = tetrahedron_boundary().facets().iter().map(|c| c.vertices().to_vec()).collect();
    let other = [0, 4, 5, 6];
    for skip in 0..4 {
        f.push(other.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect());
    }
    complex(2, f)
}

/// Suspension with two new apices numbered after the existing vertices.
pub fn suspension(c: &SimplicialComplex) -> SimplicialComplex {
    let top = c.vertices().last().copied().unwrap_or(0);
    let mut f = Vec::new();
    for apex in [top + 1, top + 2] {
        for facet in c.facets() {
            let mut vs = facet.vertices().to_vec();
            vs.push(apex);
            f.push(vs);
        }
    }
    complex(c.dim() + 1, f)
}

/// Suspension of a `k`-gon (a bipyramid). Odd `k` gives apex stars that
/// are odd cycles.
pub fn bipyramid(k: usize) -> SimplicialComplex {
    suspension(&polygon(k))
}

/// A random 2-sphere on `4 + extra` vertices built by stellar subdivision
/// of random triangles, starting from the tetrahedron boundary.
pub fn random_sphere<R: Rng>(rng: &mut R, extra: usize) -> SimplicialComplex {
    let mut facets: Vec<Vec<Vertex>> =
        tetrahedron_boundary().facets().iter().map(|c| c.vertices().to_vec()).collect();
    let mut next = 4;
    for _ in 0..extra {
        let i = rng.gen_range(0..facets.len());
        let t = facets.swap_remove(i);
        facets.push(vec![t[0], t[1], next]);
        facets.push(vec![t[0], t[2], next]);
        facets.push(vec![t[1], t[2], next]);
        next += 1;
    }
    complex(2, facets)
}

/// A random small pseudo-manifold of dimension 1, 2 or 3: polygons,
/// stellar 2-spheres, pinched spheres and suspensions of polygons.
pub fn random_pseudomanifold<R: Rng>(rng: &mut R) -> SimplicialComplex {
    match rng.gen_range(0..5) {
        0 => polygon(rng.gen_range(2..9)),
        1 => {
            let extra = rng.gen_range(0..5);
            random_sphere(rng, extra)
        }
        2 => pinched_torus(),
        3 => bipyramid(rng.gen_range(3..7)),
        _ => {
            let mut options = [tetrahedron_boundary(), octahedron_boundary(), bipyramid(4)];
            options.shuffle(rng);
            suspension(&options[0])
        }
    }
}
