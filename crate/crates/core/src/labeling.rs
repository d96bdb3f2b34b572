//! Good labelings of ridges and label-set addressing of faces inside a
//! facet.
//!
//! A labeling assigns a small integer to every ridge. The label set
//! `c(F)` of a face is the set of labels of the ridges containing it. A
//! labeling is good when `|c(F)| = n - dim F` for every face and, inside
//! every facet `G ⊇ F`, distinct faces `F ⊆ H ⊆ G` have distinct label
//! sets. The second condition is what makes [`LabeledComplex::face_by_labelset`]
//! well defined.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{barycentric_subdivision, Cell, PseudoManifold, Vertex};
use crate::error::{Error, Result};
use crate::lattice::{CellId, FaceLattice};

pub type LabelId = u32;

/// A set of labels below 64, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn singleton(label: LabelId) -> Self {
        LabelSet(1 << label)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn insert(&mut self, label: LabelId) {
        self.0 |= 1 << label;
    }

    pub fn contains(self, label: LabelId) -> bool {
        self.0 >> label & 1 == 1
    }

    pub fn is_superset(self, other: LabelSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = LabelId> {
        (0..64).filter(move |b| self.0 >> b & 1 == 1)
    }

    pub fn to_vec(self) -> Vec<LabelId> {
        self.iter().collect()
    }
}

impl FromIterator<LabelId> for LabelSet {
    fn from_iter<I: IntoIterator<Item = LabelId>>(iter: I) -> Self {
        let mut s = LabelSet::EMPTY;
        for l in iter {
            s.insert(l);
        }
        s
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Ridge labels, keyed by ridge.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodLabeling {
    labels: BTreeMap<Cell, LabelId>,
}

impl GoodLabeling {
    pub fn new(labels: BTreeMap<Cell, LabelId>) -> Result<Self> {
        if let Some(&label) = labels.values().find(|l| **l >= 64) {
            return Err(Error::LabelOutOfRange { label });
        }
        Ok(GoodLabeling { labels })
    }

    pub fn get(&self, ridge: &Cell) -> Option<LabelId> {
        self.labels.get(ridge).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cell, LabelId)> {
        self.labels.iter().map(|(c, l)| (c, *l))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Replaces one ridge label; used to probe `verify_good`.
    pub fn with_label(&self, ridge: &Cell, label: LabelId) -> Self {
        let mut labels = self.labels.clone();
        labels.insert(ridge.clone(), label);
        GoodLabeling { labels }
    }
}

/// Label sets per cell id, or the first unlabeled ridge.
fn label_sets(lattice: &FaceLattice, lab: &GoodLabeling) -> std::result::Result<Vec<LabelSet>, Cell> {
    let mut sets = vec![LabelSet::EMPTY; lattice.num_cells()];
    for r in lattice.ridges() {
        let label = lab.get(lattice.cell(r)).ok_or_else(|| lattice.cell(r).clone())?;
        sets[r as usize].insert(label);
        // every proper face of a facet through r lies in r or contains the
        // missing vertex; walk the faces of r through any facet
        let g = lattice.star(r)[0];
        let rmask = lattice.mask_in(g, r).unwrap();
        let mut sub = (rmask - 1) & rmask;
        while sub != 0 {
            let f = lattice.local_cell(g, sub);
            sets[f as usize].insert(label);
            sub = (sub - 1) & rmask;
        }
    }
    Ok(sets)
}

/// Each ridge gets the unique color of `0..=n` absent from its vertices.
/// `coloring` is indexed by vertex id.
pub fn labeling_from_coloring(pm: &PseudoManifold, coloring: &[u32]) -> Result<GoodLabeling> {
    let n = pm.dim() as u32;
    let color_of = |v: Vertex| -> Result<u32> {
        match coloring.get(v as usize) {
            None => Err(Error::NotProperColoring { vertex: v, reason: "no color assigned".into() }),
            Some(&c) if c > n => Err(Error::NotProperColoring {
                vertex: v,
                reason: format!("color {c} outside 0..={n}"),
            }),
            Some(&c) => Ok(c),
        }
    };
    for f in pm.complex().facets() {
        let mut colors = f.vertices().iter().map(|v| color_of(*v)).collect::<Result<Vec<_>>>()?;
        colors.sort_unstable();
        colors.dedup();
        if colors.len() != n as usize + 1 {
            return Err(Error::WrongColorCount { facet: f.clone(), colors, expected: n as usize + 1 });
        }
    }
    let lat = pm.lattice();
    let mut labels = BTreeMap::new();
    for r in lat.ridges() {
        let ridge = lat.cell(r);
        let present: LabelSet = ridge.vertices().iter().map(|v| color_of(*v)).collect::<Result<_>>()?;
        let missing = (0..=n).find(|c| !present.contains(*c)).expect("ridge misses one color");
        labels.insert(ridge.clone(), missing);
    }
    GoodLabeling::new(labels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition1Violation {
    pub cell: Cell,
    pub expected: usize,
    pub found: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition2Violation {
    /// The lower end `F` of the interval.
    pub lower: Cell,
    /// The facet `G`, by facet index.
    pub facet: usize,
    /// Two distinct faces of the interval sharing a label set.
    pub clash: (Cell, Cell),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GoodnessReport {
    pub missing: Vec<Cell>,
    pub extraneous: Vec<Cell>,
    pub condition1: Vec<Condition1Violation>,
    pub condition2: Vec<Condition2Violation>,
}

impl GoodnessReport {
    pub fn is_good(&self) -> bool {
        self.missing.is_empty()
            && self.extraneous.is_empty()
            && self.condition1.is_empty()
            && self.condition2.is_empty()
    }
}

/// Checks both conditions exhaustively and lists every violation.
pub fn verify_good(pm: &PseudoManifold, lab: &GoodLabeling) -> GoodnessReport {
    let lat = pm.lattice();
    let n = pm.dim();
    let mut report = GoodnessReport::default();
    for r in lat.ridges() {
        if lab.get(lat.cell(r)).is_none() {
            report.missing.push(lat.cell(r).clone());
        }
    }
    for (c, _) in lab.iter() {
        if c.len() != n || lat.face_id(c).is_none() {
            report.extraneous.push(c.clone());
        }
    }
    if !report.missing.is_empty() {
        return report;
    }
    let sets = label_sets(lat, lab).expect("no missing labels");
    for id in 0..lat.num_faces() as CellId {
        let expected = n - lat.cell_dim(id);
        let found = sets[id as usize].len();
        if found != expected {
            report.condition1.push(Condition1Violation { cell: lat.cell(id).clone(), expected, found });
        }
    }
    let full = (1u32 << (n + 1)) - 1;
    for g in lat.facet_ids() {
        for lower in 1..=full {
            let free = full & !lower;
            let mut seen: BTreeMap<LabelSet, u32> = BTreeMap::new();
            let mut sub = free;
            loop {
                let m = lower | sub;
                let h = lat.local_cell(g, m);
                if let Some(prev) = seen.insert(sets[h as usize], m) {
                    report.condition2.push(Condition2Violation {
                        lower: lat.cell(lat.local_cell(g, lower)).clone(),
                        facet: lat.facet_index(g),
                        clash: (lat.cell(lat.local_cell(g, prev)).clone(), lat.cell(h).clone()),
                    });
                    break;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }
    }
    report
}

/// Where the good labeling of a run came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// The input complex itself carries the labeling.
    Direct,
    /// The input was barycentrically subdivided and labeled by face
    /// dimension.
    Subdivided,
}

/// What the caller supplies alongside the complex.
#[derive(Clone, Debug, Default)]
pub enum UserLabeling {
    #[default]
    None,
    Coloring(Vec<u32>),
    Labels(GoodLabeling),
}

/// A pseudo-manifold with a verified good labeling and cached label sets.
#[derive(Clone, Debug)]
pub struct LabeledComplex {
    pm: PseudoManifold,
    labeling: GoodLabeling,
    sets: Vec<LabelSet>,
    provenance: Provenance,
}

impl LabeledComplex {
    /// Fails with [`Error::NotGood`] unless `verify_good` passes.
    pub fn new(pm: PseudoManifold, labeling: GoodLabeling, provenance: Provenance) -> Result<Self> {
        let report = verify_good(&pm, &labeling);
        if let Some(r) = report.missing.first() {
            return Err(Error::MissingLabel { ridge: r.clone() });
        }
        if let Some(c) = report.extraneous.first() {
            return Err(Error::NotARidge { cell: c.clone() });
        }
        if !report.is_good() {
            return Err(Error::NotGood(format!(
                "{} condition-1 and {} condition-2 violations",
                report.condition1.len(),
                report.condition2.len()
            )));
        }
        let sets = label_sets(pm.lattice(), &labeling).expect("complete");
        Ok(LabeledComplex { pm, labeling, sets, provenance })
    }

    pub fn pm(&self) -> &PseudoManifold {
        &self.pm
    }

    pub fn lattice(&self) -> &FaceLattice {
        self.pm.lattice()
    }

    pub fn labeling(&self) -> &GoodLabeling {
        &self.labeling
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.pm.dim()
    }

    /// `c(F)`: labels of the ridges containing `f`; empty for facets.
    pub fn labelset(&self, f: &Cell) -> Result<LabelSet> {
        if f.len() == self.dim() + 1 {
            return self.lattice().lookup(f).map(|_| LabelSet::EMPTY).ok_or_else(|| Error::FaceNotPresent(f.clone()));
        }
        let id = self.lattice().face_id(f).ok_or_else(|| Error::FaceNotPresent(f.clone()))?;
        Ok(self.sets[id as usize])
    }

    pub fn labelset_of(&self, id: CellId) -> LabelSet {
        self.sets[id as usize]
    }

    /// The unique `H` with `f ⊆ H ⊆ g` and `c(H) = s`, `g` a facet.
    pub fn face_by_labelset(&self, f: &Cell, g: &Cell, s: LabelSet) -> Result<Cell> {
        let lat = self.lattice();
        if g.len() != self.dim() + 1 {
            return Err(Error::InvalidFlag(format!("{g} is not a facet")));
        }
        let gid = lat.lookup(g).ok_or_else(|| Error::FaceNotPresent(g.clone()))?;
        let fid = lat.lookup(f).ok_or_else(|| Error::FaceNotPresent(f.clone()))?;
        let fid = if lat.is_facet(fid) { gid } else { fid };
        self.face_by_labelset_id(fid, gid, s).map(|h| lat.cell(h).clone())
    }

    pub fn face_by_labelset_id(&self, f: CellId, g: CellId, s: LabelSet) -> Result<CellId> {
        let lat = self.lattice();
        let lower = lat.mask_in(g, f).ok_or_else(|| Error::NotNested {
            lower: lat.cell(f).clone(),
            upper: lat.cell(g).clone(),
        })?;
        let full = (1u32 << (self.dim() + 1)) - 1;
        let free = full & !lower;
        let mut found = None;
        let mut count = 0;
        let mut sub = free;
        loop {
            let h = lat.local_cell(g, lower | sub);
            if self.sets[h as usize] == s {
                count += 1;
                found.get_or_insert(h);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
        match (found, count) {
            (Some(h), 1) => Ok(h),
            (None, _) => Err(Error::NoSuchFace {
                lower: lat.cell(f).clone(),
                upper: lat.cell(g).clone(),
                labels: s.to_vec(),
            }),
            (Some(_), count) => Err(Error::NotUnique {
                lower: lat.cell(f).clone(),
                upper: lat.cell(g).clone(),
                labels: s.to_vec(),
                count,
            }),
        }
    }
}

/// Searches for a proper `(n+1)`-coloring. Across a ridge the opposite
/// vertex is forced to carry the ridge's missing color, so seeding the
/// first facet and propagating decides existence.
pub fn find_coloring(pm: &PseudoManifold) -> Option<Vec<u32>> {
    let lat = pm.lattice();
    let n = pm.dim();
    let nv = pm.complex().vertices().last().map_or(0, |v| *v as usize + 1);
    let mut color = vec![u32::MAX; nv];
    let first = lat.facet_id(0);
    for (i, v) in lat.cell(first).vertices().iter().enumerate() {
        color[*v as usize] = i as u32;
    }
    let mut seen = vec![false; lat.num_facets()];
    seen[0] = true;
    let mut queue = VecDeque::from([first]);
    while let Some(g) = queue.pop_front() {
        for p in 0..=n {
            let mask = ((1u32 << (n + 1)) - 1) & !(1 << p);
            if mask == 0 {
                continue;
            }
            let missing = color[lat.cell(g).vertices()[p] as usize];
            let ridge = lat.local_cell(g, mask);
            for &h in lat.star(ridge) {
                if h == g {
                    continue;
                }
                let opposite = lat.cell(h).difference(lat.cell(ridge))[0];
                let slot = &mut color[opposite as usize];
                if *slot == u32::MAX {
                    *slot = missing;
                } else if *slot != missing {
                    return None;
                }
                let hi = lat.facet_index(h);
                if !seen[hi] {
                    seen[hi] = true;
                    queue.push_back(h);
                }
            }
        }
    }
    Some(color)
}

/// Produces a labeled complex: user labels or coloring when given,
/// otherwise a coloring of the input if one exists (any labeling when
/// `n = 1`), otherwise the barycentric subdivision colored by face
/// dimension.
pub fn ensure_good(pm: &PseudoManifold, user: &UserLabeling) -> Result<LabeledComplex> {
    match user {
        UserLabeling::Labels(lab) => LabeledComplex::new(pm.clone(), lab.clone(), Provenance::Direct),
        UserLabeling::Coloring(col) => {
            let lab = labeling_from_coloring(pm, col)?;
            LabeledComplex::new(pm.clone(), lab, Provenance::Direct)
        }
        UserLabeling::None => {
            if let Some(col) = find_coloring(pm) {
                let lab = labeling_from_coloring(pm, &col)?;
                return LabeledComplex::new(pm.clone(), lab, Provenance::Direct);
            }
            if pm.dim() == 1 {
                let lab = pm.lattice().ridges().map(|r| (pm.lattice().cell(r).clone(), 0)).collect();
                return LabeledComplex::new(pm.clone(), GoodLabeling::new(lab)?, Provenance::Direct);
            }
            let (sub, col) = barycentric_subdivision(pm);
            let lab = labeling_from_coloring(&sub, &col)?;
            LabeledComplex::new(sub, lab, Provenance::Subdivided)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn cell(vs: &[u32]) -> Cell {
        Cell::new(vs.iter().copied()).unwrap()
    }

    fn pm(c: crate::complex::SimplicialComplex) -> PseudoManifold {
        PseudoManifold::new(c).unwrap()
    }

    #[test]
    fn octahedron_antipodal_coloring_is_good() {
        let p = pm(catalog::octahedron_boundary());
        let lab = labeling_from_coloring(&p, &catalog::octahedron_coloring()).unwrap();
        assert!(verify_good(&p, &lab).is_good());
        // direct enumeration of condition 1 at the vertices
        let lc = LabeledComplex::new(p, lab, Provenance::Direct).unwrap();
        for v in 0..6 {
            assert_eq!(lc.labelset(&cell(&[v])).unwrap().len(), 2);
        }
    }

    #[test]
    fn coloring_errors() {
        let p = pm(catalog::octahedron_boundary());
        // vertex 1 takes vertex 4's color: facets [1,2,4] etc. miss color 0
        let err = labeling_from_coloring(&p, &[0, 2, 1, 1, 2, 2]).unwrap_err();
        assert!(matches!(err, Error::WrongColorCount { .. }));
        let err = labeling_from_coloring(&p, &[0, 0, 1, 1, 2]).unwrap_err();
        assert!(matches!(err, Error::NotProperColoring { vertex: 5, .. }));
        let err = labeling_from_coloring(&p, &[0, 0, 1, 1, 2, 7]).unwrap_err();
        assert!(matches!(err, Error::NotProperColoring { vertex: 5, .. }));
    }

    #[test]
    fn polygon_labels_are_good() {
        let p = pm(catalog::polygon(5));
        let lab = GoodLabeling::new((0..5).map(|v| (cell(&[v]), v % 3)).collect()).unwrap();
        assert!(verify_good(&p, &lab).is_good());
    }

    #[test]
    fn equal_labels_in_a_triangle_violate_condition_two() {
        let p = pm(catalog::octahedron_boundary());
        let lab = labeling_from_coloring(&p, &catalog::octahedron_coloring()).unwrap();
        // edges [0,2] and [0,4] of triangle [0,2,4] get the same label
        let l = lab.get(&cell(&[0, 2])).unwrap();
        let bad = lab.with_label(&cell(&[0, 4]), l);
        let report = verify_good(&p, &bad);
        assert!(!report.is_good());
        assert!(report.condition2.iter().any(|v| v.lower == cell(&[0])));
    }

    #[test]
    fn labelset_examples() {
        let p = pm(catalog::octahedron_boundary());
        let lab = labeling_from_coloring(&p, &catalog::octahedron_coloring()).unwrap();
        let lc = LabeledComplex::new(p, lab, Provenance::Direct).unwrap();
        // ridge [0,2] has colors {0,1}, so label 2
        assert_eq!(lc.labelset(&cell(&[0, 2])).unwrap(), LabelSet::singleton(2));
        assert_eq!(lc.labelset(&cell(&[0, 2, 4])).unwrap(), LabelSet::EMPTY);
        assert_eq!(lc.labelset(&cell(&[0])).unwrap().to_vec(), vec![1, 2]);
    }

    #[test]
    fn face_by_labelset_examples() {
        let p = pm(catalog::octahedron_boundary());
        let lab = labeling_from_coloring(&p, &catalog::octahedron_coloring()).unwrap();
        let lc = LabeledComplex::new(p.clone(), lab, Provenance::Direct).unwrap();
        let g = cell(&[0, 2, 4]);
        let v = cell(&[0]);
        assert_eq!(lc.face_by_labelset(&v, &g, LabelSet::EMPTY).unwrap(), g);
        assert_eq!(lc.face_by_labelset(&v, &g, lc.labelset(&v).unwrap()).unwrap(), v);
        // oracle: filter the interval by label set
        for s in [LabelSet::singleton(1), LabelSet::singleton(2)] {
            let expected: Vec<Cell> = crate::complex::face_interval(&p, &v, &g)
                .unwrap()
                .into_iter()
                .filter(|h| lc.labelset(h).unwrap() == s)
                .collect();
            assert_eq!(expected.len(), 1);
            assert_eq!(lc.face_by_labelset(&v, &g, s).unwrap(), expected[0]);
        }
        assert!(matches!(
            lc.face_by_labelset(&v, &g, LabelSet::singleton(0)),
            Err(Error::NoSuchFace { .. })
        ));
    }

    #[test]
    fn ensure_good_paths() {
        let tri = pm(catalog::polygon(3));
        let lc = ensure_good(&tri, &UserLabeling::None).unwrap();
        assert_eq!(lc.provenance(), Provenance::Direct);
        assert_eq!(lc.pm().complex().facets().len(), 3);

        assert!(find_coloring(&pm(catalog::torus7())).is_none());
        let lc = ensure_good(&pm(catalog::torus7()), &UserLabeling::None).unwrap();
        assert_eq!(lc.provenance(), Provenance::Subdivided);

        let lc = ensure_good(&pm(catalog::pinched_torus()), &UserLabeling::None).unwrap();
        assert_eq!(lc.provenance(), Provenance::Subdivided);
        assert!(verify_good(lc.pm(), lc.labeling()).is_good());

        let oct = pm(catalog::octahedron_boundary());
        assert!(find_coloring(&oct).is_some());
        let lc = ensure_good(&oct, &UserLabeling::Coloring(catalog::octahedron_coloring())).unwrap();
        assert_eq!(lc.provenance(), Provenance::Direct);
    }
}
