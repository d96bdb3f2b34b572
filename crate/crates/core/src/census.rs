//! Oriented simplicial spheres up to isomorphism, balanced sets, and the
//! vertex-link census of a closed oriented manifold.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::complex::{permutation_sign, Cell, OrientationAssignment, PseudoManifold, SimplicialComplex, Vertex};
use crate::error::{Error, Result};
use crate::homology::simplicial_sphere_check;

/// A simplicial sphere with a coherent orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientedSphere {
    complex: SimplicialComplex,
    orientation: OrientationAssignment,
}

impl OrientedSphere {
    /// Checks that the complex is a sphere (homology sphere above
    /// dimension 2) and the signs are coherent. Without signs the complex
    /// is oriented from its first facet.
    pub fn new(complex: SimplicialComplex, orientation: Option<OrientationAssignment>) -> Result<Self> {
        if complex.has_repeated_facets() {
            return Err(Error::NotASphere("repeated facets".into()));
        }
        let pm = match orientation {
            Some(o) => PseudoManifold::with_orientation(complex, o)?,
            None => PseudoManifold::new(complex)?,
        };
        if let crate::homology::SphereVerdict::NotSphere(reason) = simplicial_sphere_check(pm.complex()) {
            return Err(Error::NotASphere(reason));
        }
        Ok(OrientedSphere { complex: pm.complex().clone(), orientation: pm.orientation().clone() })
    }

    /// Trusted constructor for links of a verified manifold.
    pub(crate) fn from_parts(complex: SimplicialComplex, orientation: OrientationAssignment) -> Self {
        OrientedSphere { complex, orientation }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn orientation(&self) -> &OrientationAssignment {
        &self.orientation
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    /// `-K`: the same complex with the opposite orientation.
    pub fn mirror(&self) -> Self {
        OrientedSphere { complex: self.complex.clone(), orientation: self.orientation.reversed() }
    }

    /// Same sphere with vertices renamed by an injective map.
    pub fn relabeled(&self, map: impl Fn(Vertex) -> Vertex) -> Result<Self> {
        let facets: Vec<(Cell, i8)> = self
            .complex
            .facets()
            .iter()
            .zip(&self.orientation.signs)
            .map(|(f, s)| {
                let image: Vec<Vertex> = f.vertices().iter().map(|v| map(*v)).collect();
                let sign = s * permutation_sign(&image);
                Ok((Cell::new(image)?, sign))
            })
            .collect::<Result<_>>()?;
        let (complex, signs) = SimplicialComplex::with_payload(self.dim(), facets)?;
        Ok(OrientedSphere { complex, orientation: OrientationAssignment { signs } })
    }
}

/// Links of all vertices of an oriented pseudo-manifold, each oriented so
/// that `v * lk(v)` carries the orientation of the star.
pub fn vertex_links(m: &PseudoManifold) -> Vec<(Vertex, OrientedSphere)> {
    let mut by_vertex: BTreeMap<Vertex, Vec<(Cell, i8)>> = BTreeMap::new();
    for (f, s) in m.complex().facets().iter().zip(&m.orientation().signs) {
        for (i, v) in f.vertices().iter().enumerate() {
            let rest: Vec<Vertex> = f.vertices().iter().copied().filter(|w| w != v).collect();
            let sign = if i % 2 == 0 { *s } else { -s };
            by_vertex.entry(*v).or_default().push((Cell::from_sorted(rest), sign));
        }
    }
    let d = m.dim().saturating_sub(1);
    by_vertex
        .into_iter()
        .map(|(v, facets)| {
            let (complex, signs) = SimplicialComplex::with_payload(d, facets).expect("links are pure");
            (v, OrientedSphere::from_parts(complex, OrientationAssignment { signs }))
        })
        .collect()
}

/// Requested orientation behaviour of an isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoMode {
    Preserve,
    Reverse,
    Either,
}

/// An explicit vertex bijection, and whether it preserves orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoCertificate {
    pub map: BTreeMap<Vertex, Vertex>,
    pub preserves_orientation: bool,
}

struct Prepared {
    verts: Vec<Vertex>,
    facets: HashMap<Vec<usize>, i8>,
    facets_of: Vec<Vec<Vec<usize>>>,
    nbrs: Vec<Vec<usize>>,
    invariant: Vec<(usize, Vec<usize>)>,
}

impl Prepared {
    fn new(s: &OrientedSphere) -> Self {
        let verts: Vec<Vertex> = s.complex.vertices().into_iter().collect();
        let vid: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let k = verts.len();
        let mut facets = HashMap::new();
        let mut facets_of = vec![Vec::new(); k];
        let mut nbrs = vec![Vec::new(); k];
        for (f, sign) in s.complex.facets().iter().zip(&s.orientation.signs) {
            let local: Vec<usize> = f.vertices().iter().map(|v| vid[v]).collect();
            for &a in &local {
                facets_of[a].push(local.clone());
                nbrs[a].extend(local.iter().copied().filter(|b| *b != a));
            }
            facets.insert(local, *sign);
        }
        for n in &mut nbrs {
            n.sort_unstable();
            n.dedup();
        }
        let invariant = (0..k)
            .map(|a| {
                let mut around: Vec<usize> = nbrs[a].iter().map(|b| facets_of[*b].len()).collect();
                around.sort_unstable();
                (facets_of[a].len(), around)
            })
            .collect();
        Prepared { verts, facets, facets_of, nbrs, invariant }
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.nbrs[a].binary_search(&b).is_ok()
    }

    fn fingerprint(&self) -> Vec<(usize, Vec<usize>)> {
        let mut inv = self.invariant.clone();
        inv.sort();
        inv
    }
}

/// Backtracking search for a simplicial isomorphism `a → b` with the
/// requested orientation behaviour. Candidates are pruned by vertex
/// invariants and by adjacency with already-mapped vertices; the first
/// certificate in a deterministic order is returned.
pub fn iso(a: &OrientedSphere, b: &OrientedSphere, mode: IsoMode) -> Option<IsoCertificate> {
    if a.dim() != b.dim() || a.complex.facets().len() != b.complex.facets().len() {
        return None;
    }
    let pa = Prepared::new(a);
    let pb = Prepared::new(b);
    iso_prepared(&pa, &pb, mode)
}

fn iso_prepared(pa: &Prepared, pb: &Prepared, mode: IsoMode) -> Option<IsoCertificate> {
    let k = pa.verts.len();
    if k != pb.verts.len() || pa.facets.len() != pb.facets.len() || pa.fingerprint() != pb.fingerprint() {
        return None;
    }
    if k == 0 {
        return Some(IsoCertificate { map: BTreeMap::new(), preserves_orientation: mode != IsoMode::Reverse });
    }
    let order = search_order(pa);
    let mut search = Search {
        pa,
        pb,
        order: &order,
        map: vec![usize::MAX; k],
        used: vec![false; k],
        ratio: match mode {
            IsoMode::Preserve => Some(1),
            IsoMode::Reverse => Some(-1),
            IsoMode::Either => None,
        },
    };
    if !search.extend(0) {
        return None;
    }
    let map = (0..k).map(|i| (pa.verts[i], pb.verts[search.map[i]])).collect();
    Some(IsoCertificate { map, preserves_orientation: search.ratio != Some(-1) })
}

/// Rarest invariant first, then breadth-first so each new vertex has
/// mapped neighbours.
fn search_order(p: &Prepared) -> Vec<usize> {
    let k = p.verts.len();
    let mut freq: HashMap<&(usize, Vec<usize>), usize> = HashMap::new();
    for inv in &p.invariant {
        *freq.entry(inv).or_default() += 1;
    }
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        let start = (0..k).filter(|a| !placed[*a]).min_by_key(|a| (freq[&p.invariant[*a]], *a)).unwrap();
        placed[start] = true;
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            for &b in &p.nbrs[order[head]] {
                if !placed[b] {
                    placed[b] = true;
                    order.push(b);
                }
            }
            head += 1;
        }
    }
    order
}

struct Search<'a> {
    pa: &'a Prepared,
    pb: &'a Prepared,
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
    ratio: Option<i8>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for w in 0..self.pb.verts.len() {
            if self.used[w] || self.pa.invariant[v] != self.pb.invariant[w] {
                continue;
            }
            let mapped = &self.order[..depth];
            if mapped.iter().any(|&u| self.pa.adjacent(v, u) != self.pb.adjacent(w, self.map[u])) {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            let saved = self.ratio;
            if self.facets_consistent(v) && self.extend(depth + 1) {
                return true;
            }
            self.ratio = saved;
            self.map[v] = usize::MAX;
            self.used[w] = false;
        }
        false
    }

    /// Every facet through `v` whose vertices are all mapped must land on
    /// a facet with the required orientation ratio.
    fn facets_consistent(&mut self, v: usize) -> bool {
        for f in &self.pa.facets_of[v] {
            if f.iter().any(|u| self.map[*u] == usize::MAX) {
                continue;
            }
            let image: Vec<usize> = f.iter().map(|u| self.map[*u]).collect();
            let mut sorted = image.clone();
            sorted.sort_unstable();
            let Some(&sb) = self.pb.facets.get(&sorted) else { return false };
            let r = self.pa.facets[f] * sb * permutation_sign(&image);
            match self.ratio {
                None => self.ratio = Some(r),
                Some(x) if x != r => return false,
                _ => {}
            }
        }
        true
    }
}

/// Classes of oriented spheres under orientation-preserving isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereClasses {
    /// Class of each input sphere.
    pub class_of: Vec<usize>,
    /// Index of the first sphere of each class.
    pub representative: Vec<usize>,
    pub amphichiral: Vec<bool>,
    /// Class of the mirror image, when present among the inputs.
    pub mirror: Vec<Option<usize>>,
}

/// Sorts spheres into preserve-classes, determines chirality, and links
/// each chiral class to its mirror class.
pub fn classify(spheres: &[&OrientedSphere]) -> SphereClasses {
    let prepared: Vec<Prepared> = spheres.iter().map(|s| Prepared::new(s)).collect();
    let mut buckets: HashMap<(usize, usize, Vec<(usize, Vec<usize>)>), Vec<usize>> = HashMap::new();
    let mut class_of = Vec::with_capacity(spheres.len());
    let mut representative: Vec<usize> = Vec::new();
    for (i, p) in prepared.iter().enumerate() {
        let key = (spheres[i].dim(), p.facets.len(), p.fingerprint());
        let bucket = buckets.entry(key).or_default();
        let found = bucket.iter().copied().find(|&c| iso_prepared(&prepared[representative[c]], p, IsoMode::Preserve).is_some());
        let c = found.unwrap_or_else(|| {
            representative.push(i);
            bucket.push(representative.len() - 1);
            representative.len() - 1
        });
        class_of.push(c);
    }
    let amphichiral: Vec<bool> = representative
        .iter()
        .map(|&r| iso_prepared(&prepared[r], &prepared[r], IsoMode::Reverse).is_some())
        .collect();
    let mut mirror = vec![None; representative.len()];
    for bucket in buckets.values() {
        for &c in bucket {
            if amphichiral[c] {
                mirror[c] = Some(c);
                continue;
            }
            mirror[c] = bucket.iter().copied().find(|&d| {
                d != c && iso_prepared(&prepared[representative[c]], &prepared[representative[d]], IsoMode::Reverse).is_some()
            });
        }
    }
    SphereClasses { class_of, representative, amphichiral, mirror }
}

/// A pair of items whose spheres are related by an orientation-reversing
/// isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MirrorPair<T> {
    pub first: T,
    pub second: T,
    pub certificate: IsoCertificate,
}

/// Pairs off items of a multiset of spheres: within an amphichiral class
/// consecutive members, across a chiral class and its mirror members in
/// order. Returns the offending class counts if that is impossible.
fn pair_off<T: Clone>(items: &[(T, &OrientedSphere)]) -> std::result::Result<Vec<MirrorPair<T>>, String> {
    let spheres: Vec<&OrientedSphere> = items.iter().map(|(_, s)| *s).collect();
    let classes = classify(&spheres);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes.representative.len()];
    for (i, c) in classes.class_of.iter().enumerate() {
        members[*c].push(i);
    }
    let mut problems = Vec::new();
    let mut pairs = Vec::new();
    let cert = |a: usize, b: usize| MirrorPair {
        first: items[a].0.clone(),
        second: items[b].0.clone(),
        certificate: iso(items[a].1, items[b].1, IsoMode::Reverse).expect("classes are mirror images"),
    };
    for c in 0..members.len() {
        let m = &members[c];
        match classes.mirror[c] {
            Some(d) if d == c => {
                if m.len() % 2 == 1 {
                    problems.push(format!("amphichiral class of item {} occurs {} times", classes.representative[c], m.len()));
                    continue;
                }
                pairs.extend(m.chunks(2).map(|p| cert(p[0], p[1])));
            }
            Some(d) => {
                if d < c {
                    continue;
                }
                let md = &members[d];
                if m.len() != md.len() {
                    problems.push(format!(
                        "chiral class of item {} occurs {} times, its mirror {} times",
                        classes.representative[c],
                        m.len(),
                        md.len()
                    ));
                    continue;
                }
                pairs.extend(m.iter().zip(md).map(|(a, b)| cert(*a, *b)));
            }
            None => problems.push(format!(
                "chiral class of item {} occurs {} times, its mirror never",
                classes.representative[c],
                m.len()
            )),
        }
    }
    if problems.is_empty() {
        Ok(pairs)
    } else {
        Err(problems.join("; "))
    }
}

/// Vertex of sphere `sphere` in a list of spheres.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SphereVertex {
    pub sphere: usize,
    pub vertex: Vertex,
}

/// Pairs the vertices of `ys` so that the links in each pair are related
/// by an orientation-reversing isomorphism.
pub fn balanced_check(ys: &[OrientedSphere]) -> Result<Vec<MirrorPair<SphereVertex>>> {
    if let Some(y) = ys.iter().find(|y| y.dim() != ys[0].dim()) {
        return Err(Error::DimensionMismatch { expected: ys[0].dim(), found: y.dim() });
    }
    let links: Vec<(SphereVertex, OrientedSphere)> = ys
        .iter()
        .enumerate()
        .flat_map(|(i, y)| {
            let pm = PseudoManifold::with_orientation(y.complex.clone(), y.orientation.clone())
                .expect("spheres are oriented pseudo-manifolds");
            vertex_links(&pm).into_iter().map(move |(v, l)| (SphereVertex { sphere: i, vertex: v }, l))
        })
        .collect();
    let items: Vec<(SphereVertex, &OrientedSphere)> = links.iter().map(|(k, l)| (*k, l)).collect();
    pair_off(&items).map_err(Error::NotBalanced)
}

/// Outcome of matching the vertex links of a manifold against a
/// prescribed list of spheres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    /// Number of link classes and their sizes.
    pub class_sizes: Vec<usize>,
    pub amphichiral: Vec<bool>,
    /// Largest `r` such that the links are `r` copies of the prescription
    /// plus mirror pairs.
    pub r: usize,
    /// For each prescribed sphere, the vertices whose links matched it.
    pub matched: Vec<Vec<Vertex>>,
    /// The leftover links, paired `(K, -K)`.
    pub residual_pairs: Vec<MirrorPair<Vertex>>,
}

/// Census of a closed oriented manifold's vertex links.
pub fn census_match(m: &PseudoManifold, ys: &[OrientedSphere]) -> Result<CensusReport> {
    census_links(&vertex_links(m), ys)
}

/// Census of an explicit list of vertex links.
pub fn census_links(links: &[(Vertex, OrientedSphere)], ys: &[OrientedSphere]) -> Result<CensusReport> {
    let mut all: Vec<&OrientedSphere> = links.iter().map(|(_, l)| l).collect();
    all.extend(ys.iter());
    let classes = classify(&all);
    let nc = classes.representative.len();
    let mut have: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for (i, c) in classes.class_of[..links.len()].iter().enumerate() {
        have[*c].push(i);
    }
    let mut need = vec![0usize; nc];
    for c in &classes.class_of[links.len()..] {
        need[*c] += 1;
    }
    let r_max = if ys.is_empty() {
        0
    } else {
        (0..nc).filter(|c| need[*c] > 0).map(|c| have[c].len() / need[c]).min().unwrap_or(0)
    };
    let mut last_err = String::new();
    for r in (0..=r_max).rev() {
        // take r copies of each prescribed sphere, earliest vertices first
        let mut taken = vec![0usize; nc];
        let mut matched = vec![Vec::new(); ys.len()];
        for (yi, c) in classes.class_of[links.len()..].iter().enumerate() {
            let from = taken[*c];
            matched[yi] = have[*c][from..from + r].iter().map(|i| links[*i].0).collect();
            taken[*c] += r;
        }
        let residual: Vec<(Vertex, &OrientedSphere)> = (0..nc)
            .flat_map(|c| have[c][taken[c]..].iter().map(|i| (links[*i].0, &links[*i].1)))
            .collect::<Vec<_>>();
        let mut residual = residual;
        residual.sort_by_key(|(v, _)| *v);
        match pair_off(&residual) {
            Ok(residual_pairs) => {
                return Ok(CensusReport {
                    class_sizes: have.iter().map(Vec::len).collect(),
                    amphichiral: classes.amphichiral,
                    r,
                    matched,
                    residual_pairs,
                })
            }
            Err(e) => last_err = e,
        }
    }
    Err(Error::PatternMismatch(last_err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn sphere(c: SimplicialComplex) -> OrientedSphere {
        OrientedSphere::new(c, None).unwrap()
    }

    #[test]
    fn identity_and_mirror() {
        let t = sphere(catalog::tetrahedron_boundary());
        let id = iso(&t, &t, IsoMode::Preserve).unwrap();
        assert!(id.map.iter().all(|(a, b)| a == b));
        let swapped = t.relabeled(|v| [1, 0, 2, 3][v as usize]).unwrap();
        let c = iso(&t, &swapped, IsoMode::Reverse).unwrap();
        assert!(!c.preserves_orientation);
        assert!(iso(&t, &t.mirror(), IsoMode::Reverse).is_some());
        assert!(iso(&t, &sphere(catalog::octahedron_boundary()), IsoMode::Either).is_none());
    }

    #[test]
    fn polygons_are_amphichiral() {
        let p = sphere(catalog::polygon(5));
        assert!(iso(&p, &p, IsoMode::Reverse).is_some());
    }

    #[test]
    fn octahedron_is_balanced() {
        let pairs = balanced_check(&[sphere(catalog::octahedron_boundary())]).unwrap();
        assert_eq!(pairs.len(), 3);
    }

    #[test]
    fn odd_class_is_not_balanced() {
        // three degree-4 vertices and two degree-3 apices
        let err = balanced_check(&[sphere(catalog::bipyramid(3))]).unwrap_err();
        assert!(matches!(err, Error::NotBalanced(_)));
    }

    #[test]
    fn census_of_mirror_pair() {
        let y = sphere(catalog::octahedron_boundary());
        let links = vec![(0, y.clone()), (1, y.mirror())];
        let rep = census_links(&links, &[y.clone(), y.mirror()]).unwrap();
        assert_eq!(rep.r, 1);
        assert!(rep.residual_pairs.is_empty());
    }
}
