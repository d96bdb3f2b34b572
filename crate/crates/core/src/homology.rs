//! Δ-complexes, integer homology by Smith normal form, and sphere
//! recognition.
//!
//! Sphere recognition is exact up to dimension 2 (points, circles,
//! closed surfaces with χ = 2). Above that only a homology-sphere
//! certificate is produced.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::complex::{Cell, SimplicialComplex};

/// Simplices per dimension; a `k`-simplex lists its `k + 1` faces, the
/// `i`-th face omitting the `i`-th vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeltaComplex {
    cells: Vec<Vec<Box<[u32]>>>,
}

impl DeltaComplex {
    pub fn new(cells: Vec<Vec<Box<[u32]>>>) -> Self {
        debug_assert!(cells.first().is_none_or(|v| v.iter().all(|c| c.is_empty())));
        DeltaComplex { cells }
    }

    /// Lower faces are identified by vertex set; top simplices stay
    /// distinct even when they repeat a vertex set.
    pub fn from_simplicial(complex: &SimplicialComplex) -> Self {
        let d = complex.dim();
        let mut layers: Vec<BTreeMap<Cell, u32>> = vec![BTreeMap::new(); d];
        for f in complex.facets() {
            for mask in 1u32..(1u32 << f.len()) - 1 {
                let c = f.sub_cell(mask);
                layers[c.dim()].insert(c, 0);
            }
        }
        for layer in layers.iter_mut() {
            for (i, v) in layer.values_mut().enumerate() {
                *v = i as u32;
            }
        }
        let faces_of = |c: &Cell| -> Box<[u32]> {
            if c.len() == 1 {
                return Box::new([]);
            }
            (0..c.len())
                .map(|p| layers[c.dim() - 1][&c.without_position(p).unwrap()])
                .collect()
        };
        let mut cells: Vec<Vec<Box<[u32]>>> = layers.iter().map(|l| l.keys().map(faces_of).collect()).collect();
        cells.push(complex.facets().iter().map(faces_of).collect());
        DeltaComplex { cells }
    }

    pub fn dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn count(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, |c| c.len())
    }

    pub fn faces(&self, k: usize, i: usize) -> &[u32] {
        &self.cells[k][i]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    fn boundary_matrix(&self, k: usize) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.count(k)]; self.count(k - 1)];
        for (j, faces) in self.cells[k].iter().enumerate() {
            for (i, &f) in faces.iter().enumerate() {
                m[f as usize][j] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
        m
    }

    pub fn homology(&self) -> Vec<HomologyGroup> {
        let d = self.dim();
        // (rank, invariant factors > 1) of each boundary map
        let mut ranks = vec![0usize; d + 2];
        let mut torsion = vec![Vec::new(); d + 2];
        for k in 1..=d {
            let factors = invariant_factors(self.boundary_matrix(k));
            ranks[k] = factors.len();
            torsion[k] = factors.into_iter().filter(|f| *f > 1).collect();
        }
        (0..=d)
            .map(|k| HomologyGroup {
                rank: self.count(k) - ranks[k] - ranks[k + 1],
                torsion: torsion[k + 1].clone(),
            })
            .collect()
    }

    fn connected(&self) -> bool {
        let nv = self.count(0);
        if nv == 0 {
            return false;
        }
        let mut uf: Vec<usize> = (0..nv).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        if self.dim() >= 1 {
            for e in &self.cells[1] {
                let (a, b) = (find(&mut uf, e[0] as usize), find(&mut uf, e[1] as usize));
                uf[a] = b;
            }
        }
        let root = find(&mut uf, 0);
        (0..nv).all(|v| find(&mut uf, v) == root)
    }

    /// How many top-simplex sides each codimension-1 simplex carries.
    fn ridge_degrees(&self) -> Vec<usize> {
        let d = self.dim();
        let mut deg = vec![0usize; self.count(d - 1)];
        for faces in &self.cells[d] {
            for &f in faces.iter() {
                deg[f as usize] += 1;
            }
        }
        deg
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_z(&self) -> bool {
        self.rank == 1 && self.torsion.is_empty()
    }
}

/// Nonzero invariant factors (absolute values, a divisibility chain) of an
/// integer matrix.
pub fn invariant_factors(mut a: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(&a, t, t..rows, t..cols) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t] / p;
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                    clean &= a[i][t] == 0;
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j] / p;
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                    clean &= a[t][j] == 0;
                }
            }
            if !clean {
                // a smaller remainder appeared in row or column t; move it to the pivot
                let (mut bi, mut bj) = (t, t);
                for i in t..rows {
                    if a[i][t] != 0 && a[i][t].abs() < a[bi][bj].abs() {
                        (bi, bj) = (i, t);
                    }
                }
                for j in t..cols {
                    if a[t][j] != 0 && a[t][j].abs() < a[bi][bj].abs() {
                        (bi, bj) = (t, j);
                    }
                }
                a.swap(t, bi);
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn min_nonzero(
    a: &[Vec<i64>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
                if a[i][j].abs() == 1 {
                    return best;
                }
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SphereVerdict {
    /// Recognized exactly (dimension at most 2).
    Sphere,
    /// Closed pseudo-manifold with the integer homology of a sphere;
    /// PL sphericity not decided.
    HomologySphere,
    NotSphere(String),
}

impl SphereVerdict {
    pub fn passed(&self) -> bool {
        !matches!(self, SphereVerdict::NotSphere(_))
    }
}

pub fn sphere_check(dc: &DeltaComplex) -> SphereVerdict {
    let d = dc.dim();
    if dc.count(d) == 0 {
        return SphereVerdict::NotSphere("empty".into());
    }
    if d == 0 {
        return match dc.count(0) {
            2 => SphereVerdict::Sphere,
            k => SphereVerdict::NotSphere(format!("{k} points")),
        };
    }
    if let Some((i, deg)) = dc.ridge_degrees().into_iter().enumerate().find(|(_, deg)| *deg != 2) {
        return SphereVerdict::NotSphere(format!("{}-simplex {i} has degree {deg}", d - 1));
    }
    if !dc.connected() {
        return SphereVerdict::NotSphere("disconnected".into());
    }
    match d {
        1 => SphereVerdict::Sphere,
        2 => {
            if let Some(v) = surface_vertex_defect(dc) {
                return SphereVerdict::NotSphere(format!("vertex {v} has a non-circular link"));
            }
            match dc.euler_characteristic() {
                2 => SphereVerdict::Sphere,
                chi => SphereVerdict::NotSphere(format!("closed surface with χ = {chi}")),
            }
        }
        _ => {
            let h = dc.homology();
            let ok = h[0].is_z() && h[d].is_z() && h[1..d].iter().all(|g| g.is_trivial());
            if ok {
                SphereVerdict::HomologySphere
            } else {
                SphereVerdict::NotSphere(format!("homology {:?}", h))
            }
        }
    }
}

/// For a 2-dimensional Δ-complex whose edges all have degree 2, finds a
/// vertex where the triangle corners do not form a single cycle.
fn surface_vertex_defect(dc: &DeltaComplex) -> Option<usize> {
    // edge end (edge, position) -> node; corners join two ends
    let nv = dc.count(0);
    let ne = dc.count(1);
    let end_vertex = |e: usize, p: usize| dc.faces(1, e)[1 - p] as usize;
    let mut parent: Vec<usize> = (0..2 * ne).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for t in 0..dc.count(2) {
        let f = dc.faces(2, t);
        for i in 0..3 {
            let ends: Vec<usize> = (0..3)
                .filter(|&j| j != i)
                .map(|j| {
                    let pos = if i > j { i - 1 } else { i };
                    2 * f[j] as usize + pos
                })
                .collect();
            let (a, b) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
            parent[a] = b;
        }
    }
    let mut roots: Vec<Option<usize>> = vec![None; nv];
    for e in 0..ne {
        for p in 0..2 {
            let v = end_vertex(e, p);
            let r = find(&mut parent, 2 * e + p);
            match roots[v] {
                None => roots[v] = Some(r),
                Some(r0) if r0 != r => return Some(v),
                _ => {}
            }
        }
    }
    None
}

/// Convenience for simplicial input.
pub fn simplicial_sphere_check(complex: &SimplicialComplex) -> SphereVerdict {
    sphere_check(&DeltaComplex::from_simplicial(complex))
}

/// Builds a Δ-complex from abstract simplex identities: each simplex key
/// lists its faces' keys in vertex-omission order.
pub(crate) struct DeltaBuilder<K: std::hash::Hash + Eq + Clone> {
    index: Vec<HashMap<K, u32>>,
    cells: Vec<Vec<Box<[u32]>>>,
}

impl<K: std::hash::Hash + Eq + Clone> DeltaBuilder<K> {
    pub(crate) fn new(dim: usize) -> Self {
        DeltaBuilder { index: vec![HashMap::new(); dim + 1], cells: vec![Vec::new(); dim + 1] }
    }

    /// Registers a simplex of dimension `k` with already-registered faces.
    pub(crate) fn insert(&mut self, k: usize, key: K, faces: impl FnOnce(&Self) -> Box<[u32]>) -> u32 {
        if let Some(&i) = self.index[k].get(&key) {
            return i;
        }
        let f = faces(self);
        let i = self.cells[k].len() as u32;
        self.cells[k].push(f);
        self.index[k].insert(key, i);
        i
    }

    pub(crate) fn id(&self, k: usize, key: &K) -> u32 {
        self.index[k][key]
    }

    pub(crate) fn finish(self) -> DeltaComplex {
        DeltaComplex::new(self.cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn snf_small() {
        assert_eq!(invariant_factors(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(invariant_factors(vec![vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(invariant_factors(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn homology_of_projective_plane_has_torsion() {
        let h = DeltaComplex::from_simplicial(&catalog::projective_plane()).homology();
        assert!(h[0].is_z());
        assert_eq!(h[1], HomologyGroup { rank: 0, torsion: vec![2] });
        assert!(h[2].is_trivial());
    }

    #[test]
    fn homology_of_torus() {
        let h = DeltaComplex::from_simplicial(&catalog::torus7()).homology();
        assert_eq!(h.iter().map(|g| g.rank).collect::<Vec<_>>(), vec![1, 2, 1]);
    }

    #[test]
    fn sphere_verdicts() {
        assert_eq!(simplicial_sphere_check(&catalog::polygon(5)), SphereVerdict::Sphere);
        assert_eq!(simplicial_sphere_check(&catalog::polygon(2)), SphereVerdict::Sphere);
        assert_eq!(simplicial_sphere_check(&catalog::tetrahedron_boundary()), SphereVerdict::Sphere);
        assert!(!simplicial_sphere_check(&catalog::torus7()).passed());
        assert_eq!(simplicial_sphere_check(&catalog::boundary_of_simplex(4)), SphereVerdict::HomologySphere);
        let two_circles = SimplicialComplex::from_facets([[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]]).unwrap();
        assert!(!simplicial_sphere_check(&two_circles).passed());
        let pinched = catalog::pinched_torus();
        assert!(!simplicial_sphere_check(&pinched).passed());
    }
}
