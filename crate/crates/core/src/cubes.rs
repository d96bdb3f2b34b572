//! The cube complex `M = [0,1]^n × V / ~` over one connected component of
//! resolution states.
//!
//! A face of cube `s` is named by a pattern: a base-3 word whose `j`-th
//! digit is 0 or 1 when `t_j` is pinned to that value and 2 when `t_j` is
//! free. Face `(s, p)` is glued to `(Φ_j^{p_j}(s), p)` for every pinned
//! `j`, by the identity on the remaining coordinates. Union-find over all
//! `(s, p)` pairs yields the face classes of `M`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::{permutation_sign, permutations, OrientationAssignment, PseudoManifold, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::{sphere_check, DeltaBuilder, DeltaComplex, SphereVerdict};
use crate::states::{ResolutionState, Resolver};

/// One connected component of states, closed under all `Φ_j^ε`.
#[derive(Clone, Debug)]
pub struct Component {
    dim: usize,
    states: Vec<ResolutionState>,
    index: HashMap<ResolutionState, u32>,
    /// `edges[s * 2n + 2(j-1) + ε]` is the index of `Φ_j^ε(s)`.
    edges: Vec<u32>,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// States in breadth-first discovery order.
    pub fn states(&self) -> &[ResolutionState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> ResolutionState {
        self.states[i]
    }

    pub fn index_of(&self, s: &ResolutionState) -> Option<usize> {
        self.index.get(s).map(|i| *i as usize)
    }

    /// Index of `Φ_j^ε` applied to state `i`.
    pub fn neighbor(&self, i: usize, j: usize, eps: u8) -> usize {
        self.edges[i * 2 * self.dim + 2 * (j - 1) + eps as usize] as usize
    }

    /// Builds a component from an explicit partner table, for cube
    /// complexes that do not come from a [`Resolver`] (imports, tests).
    /// `partner(i, j, ε)` must be a fixed-point-free involution for each
    /// `(j, ε)`.
    pub fn from_partners(
        dim: usize,
        states: Vec<ResolutionState>,
        partner: impl Fn(usize, usize, u8) -> usize,
    ) -> Result<Self> {
        let k = states.len();
        let mut edges = Vec::with_capacity(k * 2 * dim);
        for i in 0..k {
            for j in 1..=dim {
                for eps in 0..2u8 {
                    let t = partner(i, j, eps);
                    if t >= k || t == i || partner(t, j, eps) != i {
                        return Err(Error::InvalidFlag(format!(
                            "generator ({j}, {eps}) is not a fixed-point-free involution at cube {i}"
                        )));
                    }
                    edges.push(t as u32);
                }
            }
        }
        let index = states.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        Ok(Component { dim, states, index, edges })
    }
}

/// What was learned before the state cap was hit.
#[derive(Clone, Debug, Serialize)]
pub struct PartialExploration {
    pub cap: usize,
    /// Discovered states, in discovery order.
    pub states: Vec<ResolutionState>,
    /// States whose neighbours were all computed.
    pub expanded: usize,
}

/// Breadth-first closure of `seed` under all generators. Fails with
/// [`Error::CapExceeded`] as soon as more than `cap` states are known.
pub fn explore_component(res: &mut Resolver, seed: ResolutionState, cap: usize) -> Result<Component> {
    let n = res.dim();
    let mut states = vec![seed];
    let mut index = HashMap::from([(seed, 0u32)]);
    let mut edges: Vec<u32> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let s = states[i];
        for j in 1..=n {
            for eps in 0..2u8 {
                let t = res.phi(j, eps, &s)?;
                let id = match index.get(&t) {
                    Some(id) => *id,
                    None => {
                        if states.len() >= cap {
                            return Err(Error::CapExceeded(Box::new(PartialExploration {
                                cap,
                                states,
                                expanded: i,
                            })));
                        }
                        let id = states.len() as u32;
                        states.push(t);
                        index.insert(t, id);
                        queue.push_back(id as usize);
                        id
                    }
                };
                edges.push(id);
            }
        }
    }
    Ok(Component { dim: n, states, index, edges })
}

fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

/// Base-3 pattern digit of coordinate `j` (1-based): 0, 1, or 2 = free.
pub fn pattern_digit(pattern: usize, j: usize) -> usize {
    pattern / 3usize.pow(j as u32 - 1) % 3
}

pub(crate) fn set_digit(pattern: usize, j: usize, d: usize) -> usize {
    let w = 3usize.pow(j as u32 - 1);
    pattern - pattern / w % 3 * w + d * w
}

/// The pattern that is free on `free` (bit `j-1` for coordinate `j`) and
/// pinned to `corner` elsewhere.
pub fn pattern_of(n: usize, corner: u32, free: u32) -> usize {
    (1..=n).rev().fold(0, |acc, j| {
        let b = 1 << (j - 1);
        acc * 3 + if free & b != 0 { 2 } else { (corner & b != 0) as usize }
    })
}

/// A face of a cube: coordinate `j` pinned to `pattern_j` where it is not
/// free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CubeFaceKey {
    pub cube: u32,
    pub pattern: u32,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(k: usize) -> Self {
        UnionFind { parent: (0..k as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            // smaller root wins, so the result does not depend on union order
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Face classes of `M`.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    dim: usize,
    cubes: usize,
    /// Class id of key `cube * 3^n + pattern`.
    class_of: Vec<u32>,
    class_dim: Vec<u8>,
    /// Keys of each class, grouped: `members[start[c]..start[c+1]]`.
    start: Vec<u32>,
    members: Vec<u32>,
    face_counts: Vec<usize>,
    /// For each cube, the neighbour across the face `t_j = ε`.
    partners: Vec<u32>,
}

impl QuotientComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_cubes(&self) -> usize {
        self.cubes
    }

    pub fn num_classes(&self) -> usize {
        self.class_dim.len()
    }

    /// Number of face classes of each dimension `0..=n`.
    pub fn face_counts(&self) -> &[usize] {
        &self.face_counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.face_counts.iter().enumerate().map(|(d, c)| if d % 2 == 0 { *c as i64 } else { -(*c as i64) }).sum()
    }

    pub fn class_of(&self, key: CubeFaceKey) -> u32 {
        self.class_of[key.cube as usize * pow3(self.dim) + key.pattern as usize]
    }

    pub fn class_dim(&self, class: u32) -> usize {
        self.class_dim[class as usize] as usize
    }

    /// All cube faces in a class.
    pub fn class_members(&self, class: u32) -> impl Iterator<Item = CubeFaceKey> + '_ {
        let p3 = pow3(self.dim);
        let (a, b) = (self.start[class as usize] as usize, self.start[class as usize + 1] as usize);
        self.members[a..b]
            .iter()
            .map(move |k| CubeFaceKey { cube: (*k as usize / p3) as u32, pattern: (*k as usize % p3) as u32 })
    }

    pub fn class_size(&self, class: u32) -> usize {
        (self.start[class as usize + 1] - self.start[class as usize]) as usize
    }

    /// The cube across the face `t_j = ε` of `cube`.
    pub fn partner(&self, cube: usize, j: usize, eps: u8) -> usize {
        self.partners[cube * 2 * self.dim + 2 * (j - 1) + eps as usize] as usize
    }

    fn class_at(&self, cube: usize, pattern: usize) -> u32 {
        self.class_of[cube * pow3(self.dim) + pattern]
    }
}

/// Union-find closure of the gluings over every `(cube, pattern)` pair.
pub fn build_quotient(comp: &Component) -> QuotientComplex {
    let n = comp.dim;
    let p3 = pow3(n);
    let k = comp.len();
    let mut uf = UnionFind::new(k * p3);
    for s in 0..k {
        for p in 0..p3 {
            for j in 1..=n {
                let d = pattern_digit(p, j);
                if d < 2 {
                    let t = comp.neighbor(s, j, d as u8);
                    uf.union((s * p3 + p) as u32, (t * p3 + p) as u32);
                }
            }
        }
    }
    let mut class_of = vec![0u32; k * p3];
    let mut root_class: HashMap<u32, u32> = HashMap::new();
    let mut class_dim = Vec::new();
    let mut sizes: Vec<u32> = Vec::new();
    for key in 0..k * p3 {
        let r = uf.find(key as u32);
        let c = *root_class.entry(r).or_insert_with(|| {
            let p = key % p3;
            class_dim.push((1..=n).filter(|j| pattern_digit(p, *j) == 2).count() as u8);
            sizes.push(0);
            (class_dim.len() - 1) as u32
        });
        sizes[c as usize] += 1;
        class_of[key] = c;
    }
    let mut start = vec![0u32; class_dim.len() + 1];
    for (c, sz) in sizes.iter().enumerate() {
        start[c + 1] = start[c] + sz;
    }
    let mut fill = start.clone();
    let mut members = vec![0u32; k * p3];
    for (key, c) in class_of.iter().enumerate() {
        members[fill[*c as usize] as usize] = key as u32;
        fill[*c as usize] += 1;
    }
    let mut face_counts = vec![0usize; n + 1];
    for d in &class_dim {
        face_counts[*d as usize] += 1;
    }
    QuotientComplex {
        dim: n,
        cubes: k,
        class_of,
        class_dim,
        start,
        members,
        face_counts,
        partners: comp.edges.clone(),
    }
}

/// How a link was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Exact combinatorial sphere recognition (link dimension at most 2).
    Exact,
    /// Homology sphere only (link dimension 3 and above).
    Homology,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkFailure {
    pub class: u32,
    pub face_dim: usize,
    pub reason: String,
}

/// Outcome of the manifold checks on `M`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldReport {
    pub dim: usize,
    pub cubes: usize,
    pub face_counts: Vec<usize>,
    pub euler_characteristic: i64,
    /// Codimension-1 classes that do not consist of exactly two sides.
    pub wall_violations: Vec<(u32, usize)>,
    pub vertex_links_checked: usize,
    pub face_links_checked: usize,
    pub vertex_link_certification: Certification,
    pub failures: Vec<LinkFailure>,
}

impl ManifoldReport {
    pub fn is_manifold(&self) -> bool {
        self.wall_violations.is_empty() && self.failures.is_empty()
    }
}

/// Link of a face class as a Δ-complex. Each member face `(s, p)` with
/// pinned set `P` contributes, for every nonempty `A ⊆ P`, the corner of
/// the face obtained by freeing `A`; that corner is named by the class of
/// the bigger face and the pinned values on `A`.
pub fn link_of_class(q: &QuotientComplex, class: u32) -> DeltaComplex {
    let n = q.dim;
    let link_dim = n - q.class_dim(class) - 1;
    let mut b: DeltaBuilder<(u32, u32)> = DeltaBuilder::new(link_dim);
    for key in q.class_members(class).collect::<Vec<_>>() {
        let p = key.pattern as usize;
        let pinned: Vec<usize> = (1..=n).filter(|j| pattern_digit(p, *j) < 2).collect();
        let m = pinned.len();
        // subsets in order of size so faces exist before cofaces
        let mut subsets: Vec<u32> = (1..1u32 << m).collect();
        subsets.sort_by_key(|a| (a.count_ones(), *a));
        for a in subsets {
            let mut pat = p;
            let mut bits = 0u32;
            let coords: Vec<usize> = (0..m).filter(|i| a >> i & 1 == 1).map(|i| pinned[i]).collect();
            for &j in &coords {
                pat = set_digit(pat, j, 2);
                bits |= (pattern_digit(p, j) as u32) << (j - 1);
            }
            let face_key = (q.class_at(key.cube as usize, pat), bits);
            let kdim = coords.len() - 1;
            b.insert(kdim, face_key, |b| {
                if kdim == 0 {
                    return Box::new([]);
                }
                coords
                    .iter()
                    .map(|&j| {
                        let sub = set_digit(pat, j, pattern_digit(p, j));
                        let sub_bits = bits & !(1 << (j - 1));
                        b.id(kdim - 1, &(q.class_at(key.cube as usize, sub), sub_bits))
                    })
                    .collect()
            });
        }
    }
    b.finish()
}

/// Checks that every wall has two sides, that every vertex link is a
/// sphere, and that every face link of dimension at most 2 is a sphere.
pub fn verify_manifold(q: &QuotientComplex) -> ManifoldReport {
    let n = q.dim;
    let mut report = ManifoldReport {
        dim: n,
        cubes: q.cubes,
        face_counts: q.face_counts.clone(),
        euler_characteristic: q.euler_characteristic(),
        wall_violations: Vec::new(),
        vertex_links_checked: 0,
        face_links_checked: 0,
        vertex_link_certification: if n <= 3 { Certification::Exact } else { Certification::Homology },
        failures: Vec::new(),
    };
    for c in 0..q.num_classes() as u32 {
        let d = q.class_dim(c);
        if d == n {
            continue;
        }
        if d + 1 == n && q.class_size(c) != 2 {
            report.wall_violations.push((c, q.class_size(c)));
        }
        if d > 0 && n - d - 1 > 2 {
            continue;
        }
        let verdict = sphere_check(&link_of_class(q, c));
        if d == 0 {
            report.vertex_links_checked += 1;
        } else {
            report.face_links_checked += 1;
        }
        if let SphereVerdict::NotSphere(reason) = verdict {
            report.failures.push(LinkFailure { class: c, face_dim: d, reason });
        }
    }
    report
}

/// Cube orientations: every gluing pairs faces `t_j = ε` of two cubes by
/// the identity, so the glued cubes need opposite signs. Cube 0 gets +1.
pub fn orient_quotient(q: &QuotientComplex) -> Result<Vec<i8>> {
    let n = q.dim;
    let mut sign = vec![0i8; q.cubes];
    if q.cubes == 0 {
        return Ok(sign);
    }
    sign[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        for j in 1..=n {
            for eps in 0..2 {
                let t = q.partner(s, j, eps);
                if sign[t] == 0 {
                    sign[t] = -sign[s];
                    queue.push_back(t);
                } else if sign[t] == sign[s] {
                    return Err(Error::NonOrientableQuotient { cube: t });
                }
            }
        }
    }
    Ok(sign)
}

/// Simplicial subdivision of `M` by chains of its face poset. Vertex ids
/// are face class ids; each cube contributes `2^n n!` triangles, one per
/// corner and order of freeing coordinates.
pub fn order_complex(q: &QuotientComplex) -> SimplicialComplex {
    order_chains(q, None).0
}

/// [`order_complex`] with the orientation induced by cube signs.
pub fn oriented_order_complex(q: &QuotientComplex, cube_signs: &[i8]) -> Result<PseudoManifold> {
    let (c, signs) = order_chains(q, Some(cube_signs));
    PseudoManifold::with_orientation(c, OrientationAssignment { signs })
}

fn order_chains(q: &QuotientComplex, cube_signs: Option<&[i8]>) -> (SimplicialComplex, Vec<i8>) {
    let n = q.dim;
    let perms = permutations(n);
    let mut facets = Vec::with_capacity(q.cubes << n);
    for s in 0..q.cubes {
        for corner in 0..1u32 << n {
            for perm in &perms {
                let mut free = 0u32;
                let mut chain = vec![q.class_at(s, pattern_of(n, corner, 0))];
                for &i in perm {
                    free |= 1 << i;
                    chain.push(q.class_at(s, pattern_of(n, corner, free)));
                }
                let sign = cube_signs.map_or(1, |cs| {
                    let parity = if corner.count_ones() % 2 == 0 { 1 } else { -1 };
                    cs[s] * parity * permutation_sign(perm) * permutation_sign(&chain)
                });
                chain.sort_unstable();
                facets.push((crate::complex::Cell::from_sorted(chain), sign));
            }
        }
    }
    let (complex, signs) = SimplicialComplex::with_payload(n, facets).expect("chains are n-simplices");
    (complex, signs)
}
