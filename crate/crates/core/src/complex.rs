//! Simplicial substrate: cells, pure complexes, oriented pseudo-manifolds,
//! links and barycentric subdivision.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{sphere_check, DeltaComplex, SphereVerdict};
use crate::lattice::{CellId, FaceLattice};

pub type Vertex = u32;

/// A simplex given by its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Cell(Box<[Vertex]>);

impl Cell {
    /// Sorts the vertices; rejects empty input and repeated vertices.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut vs: Vec<Vertex> = vertices.into_iter().collect();
        vs.sort_unstable();
        if vs.is_empty() {
            return Err(Error::InvalidCell { vertices: vs, reason: "empty vertex list" });
        }
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCell { vertices: vs, reason: "repeated vertex" });
        }
        Ok(Cell(vs.into_boxed_slice()))
    }

    pub(crate) fn from_sorted(vs: Vec<Vertex>) -> Self {
        debug_assert!(!vs.is_empty() && vs.windows(2).all(|w| w[0] < w[1]));
        Cell(vs.into_boxed_slice())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn is_subset_of(&self, other: &Cell) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// Vertices at the positions selected by `mask`. The mask must be nonzero.
    pub fn sub_cell(&self, mask: u32) -> Cell {
        Cell::from_sorted(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| *v)
                .collect(),
        )
    }

    /// The cell with the vertex at `pos` removed, or `None` for a vertex.
    pub fn without_position(&self, pos: usize) -> Option<Cell> {
        if self.0.len() == 1 {
            return None;
        }
        let mut vs = self.0.to_vec();
        vs.remove(pos);
        Some(Cell::from_sorted(vs))
    }

    /// Vertices of `self` not in `other`.
    pub fn difference(&self, other: &Cell) -> Vec<Vertex> {
        self.0.iter().copied().filter(|v| !other.contains(*v)).collect()
    }
}

impl TryFrom<Vec<u32>> for Cell {
    type Error = Error;

    fn try_from(vs: Vec<u32>) -> Result<Self> {
        Cell::new(vs)
    }
}

impl From<Cell> for Vec<u32> {
    fn from(c: Cell) -> Self {
        c.0.into_vec()
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Sign of the permutation that sorts `seq` (entries must be distinct).
pub fn permutation_sign<T: Ord>(seq: &[T]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A pure complex given by its facets, kept in lexicographic order.
///
/// Facets may repeat a vertex set (a 2-gon has two edges `[0,1]`); lower
/// faces are identified by vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    dim: usize,
    facets: Vec<Cell>,
}

impl SimplicialComplex {
    pub fn new(dim: usize, facets: Vec<Cell>) -> Result<Self> {
        let (complex, _) = Self::with_payload(dim, facets.into_iter().map(|f| (f, ())).collect())?;
        Ok(complex)
    }

    /// Builds a complex from raw vertex lists; the dimension is read off
    /// the first facet.
    pub fn from_facets<I, F>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = Vertex>,
    {
        let cells = facets.into_iter().map(Cell::new).collect::<Result<Vec<_>>>()?;
        let dim = cells.first().ok_or(Error::EmptyComplex)?.dim();
        Self::new(dim, cells)
    }

    /// Sorts facets together with a per-facet payload (stable for repeats).
    pub fn with_payload<T>(dim: usize, mut facets: Vec<(Cell, T)>) -> Result<(Self, Vec<T>)> {
        if facets.is_empty() {
            return Err(Error::EmptyComplex);
        }
        for (f, _) in &facets {
            if f.len() != dim + 1 {
                return Err(Error::FacetSize { facet: f.clone(), expected: dim + 1, found: f.len() });
            }
        }
        facets.sort_by(|a, b| a.0.cmp(&b.0));
        let (facets, payload) = facets.into_iter().unzip();
        Ok((SimplicialComplex { dim, facets }, payload))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Cell] {
        &self.facets
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.facets.iter().flat_map(|f| f.vertices().iter().copied()).collect()
    }

    pub fn has_repeated_facets(&self) -> bool {
        self.facets.windows(2).any(|w| w[0] == w[1])
    }

    /// Face counts per dimension; lower faces by vertex set, facets with
    /// multiplicity.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut layers: Vec<BTreeSet<Cell>> = vec![BTreeSet::new(); self.dim];
        for f in &self.facets {
            for mask in 1u32..(1u32 << f.len()) - 1 {
                let c = f.sub_cell(mask);
                layers[c.dim()].insert(c);
            }
        }
        let mut out: Vec<usize> = layers.iter().map(|l| l.len()).collect();
        out.push(self.facets.len());
        out
    }

    /// Applies a vertex relabeling. The map must be injective on vertices.
    pub fn relabel(&self, map: impl Fn(Vertex) -> Vertex) -> Result<Self> {
        let facets = self
            .facets
            .iter()
            .map(|f| Cell::new(f.vertices().iter().map(|v| map(*v))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.dim, facets)
    }
}

/// Alternating sum of face counts.
pub fn euler_characteristic(complex: &SimplicialComplex) -> i64 {
    complex
        .f_vector()
        .iter()
        .enumerate()
        .map(|(d, c)| if d % 2 == 0 { *c as i64 } else { -(*c as i64) })
        .sum()
}

/// Per-facet signs, aligned with the facet order of the complex. A sign is
/// the orientation relative to the increasing vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrientationAssignment {
    pub signs: Vec<i8>,
}

impl OrientationAssignment {
    pub fn sign(&self, facet: usize) -> i8 {
        self.signs[facet]
    }

    pub fn reversed(&self) -> Self {
        OrientationAssignment { signs: self.signs.iter().map(|s| -s).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularFace {
    pub cell: Cell,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dimension: usize,
    pub facets: usize,
    pub pure: bool,
    /// Ridge degree -> number of ridges with that degree.
    pub ridge_degree_histogram: BTreeMap<usize, usize>,
    pub strongly_connected: bool,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    /// Faces whose link is not a sphere.
    pub singular_faces: Vec<SingularFace>,
    /// Faces whose link passed only the homology test (link dimension >= 3).
    pub homology_certified_faces: usize,
}

fn ridge_position(facet: &Cell, ridge: &Cell) -> usize {
    facet
        .vertices()
        .iter()
        .position(|v| !ridge.contains(*v))
        .expect("ridge is a proper face of the facet")
}

/// Checks the pseudo-manifold conditions and classifies singular faces.
pub fn validate(complex: &SimplicialComplex) -> Result<ValidationReport> {
    let lattice = FaceLattice::new(complex);
    validate_lattice(complex, &lattice)
}

fn validate_lattice(complex: &SimplicialComplex, lattice: &FaceLattice) -> Result<ValidationReport> {
    let mut histogram = BTreeMap::new();
    for r in lattice.ridges() {
        *histogram.entry(lattice.star(r).len()).or_insert(0usize) += 1;
    }
    if let Some(r) = lattice.ridges().find(|r| lattice.star(*r).len() != 2) {
        return Err(Error::RidgeDegreeViolation {
            ridge: lattice.cell(r).clone(),
            degree: lattice.star(r).len(),
        });
    }
    let components = facet_components(lattice);
    if components != 1 {
        return Err(Error::NotStronglyConnected { components });
    }
    let n = complex.dim();
    let mut singular = Vec::new();
    let mut certified = 0;
    if n >= 2 {
        for d in 0..=n - 2 {
            for id in lattice.faces_of_dim(d) {
                let link = link_in(lattice, id);
                match sphere_check(&DeltaComplex::from_simplicial(&link)) {
                    SphereVerdict::Sphere => {}
                    SphereVerdict::HomologySphere => certified += 1,
                    SphereVerdict::NotSphere(reason) => {
                        singular.push(SingularFace { cell: lattice.cell(id).clone(), reason })
                    }
                }
            }
        }
    }
    let f_vector = complex.f_vector();
    Ok(ValidationReport {
        dimension: n,
        facets: complex.facets().len(),
        pure: true,
        ridge_degree_histogram: histogram,
        strongly_connected: true,
        euler_characteristic: euler_characteristic(complex),
        f_vector,
        singular_faces: singular,
        homology_certified_faces: certified,
    })
}

fn facet_components(lattice: &FaceLattice) -> usize {
    let m = lattice.num_facets();
    let mut comp = vec![usize::MAX; m];
    let mut count = 0;
    // facet -> ridges incidence through the local tables
    let n = lattice.dim();
    for start in 0..m {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let fid = lattice.facet_id(f);
            for p in 0..=n {
                let mask = ((1u32 << (n + 1)) - 1) & !(1 << p);
                if mask == 0 {
                    continue;
                }
                let ridge = lattice.local_cell(fid, mask);
                for &g in lattice.star(ridge) {
                    let gi = lattice.facet_index(g);
                    if comp[gi] == usize::MAX {
                        comp[gi] = count;
                        queue.push_back(gi);
                    }
                }
            }
        }
        count += 1;
    }
    count
}

/// Propagates signs across ridges starting from the first (lexicographically
/// smallest) facet, which gets `+1`.
pub fn orient(complex: &SimplicialComplex) -> Result<OrientationAssignment> {
    let lattice = FaceLattice::new(complex);
    validate_ridges(&lattice)?;
    orient_lattice(&lattice)
}

fn validate_ridges(lattice: &FaceLattice) -> Result<()> {
    for r in lattice.ridges() {
        if lattice.star(r).len() != 2 {
            return Err(Error::RidgeDegreeViolation {
                ridge: lattice.cell(r).clone(),
                degree: lattice.star(r).len(),
            });
        }
    }
    Ok(())
}

fn orient_lattice(lattice: &FaceLattice) -> Result<OrientationAssignment> {
    let m = lattice.num_facets();
    let mut signs = vec![0i8; m];
    for start in 0..m {
        if signs[start] != 0 {
            continue;
        }
        signs[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            let fid = lattice.facet_id(f);
            let facet = lattice.cell(fid);
            for p in 0..facet.len() {
                let Some(ridge_cell) = facet.without_position(p) else { continue };
                let ridge = lattice.face_id(&ridge_cell).expect("ridge present");
                for &g in lattice.star(ridge) {
                    if g == fid {
                        continue;
                    }
                    let gi = lattice.facet_index(g);
                    let q = ridge_position(lattice.cell(g), &ridge_cell);
                    let want = -signs[f] * if (p + q).is_multiple_of(2) { 1 } else { -1 };
                    if signs[gi] == 0 {
                        signs[gi] = want;
                        queue.push_back(gi);
                    } else if signs[gi] != want {
                        return Err(Error::NonOrientable { ridge: ridge_cell });
                    }
                }
            }
        }
    }
    Ok(OrientationAssignment { signs })
}

fn check_coherent(lattice: &FaceLattice, orientation: &OrientationAssignment) -> Result<()> {
    if orientation.signs.len() != lattice.num_facets() {
        return Err(Error::OrientationLength {
            expected: lattice.num_facets(),
            found: orientation.signs.len(),
        });
    }
    for r in lattice.ridges() {
        let ridge = lattice.cell(r);
        let induced: Vec<i8> = lattice
            .star(r)
            .iter()
            .map(|&g| {
                let p = ridge_position(lattice.cell(g), ridge);
                let s = orientation.sign(lattice.facet_index(g));
                if p.is_multiple_of(2) {
                    s
                } else {
                    -s
                }
            })
            .collect();
        if induced.len() == 2 && induced[0] == induced[1] {
            return Err(Error::IncoherentOrientation { ridge: ridge.clone() });
        }
    }
    Ok(())
}

/// A validated, strongly connected, coherently oriented pseudo-manifold.
#[derive(Clone, Debug)]
pub struct PseudoManifold {
    complex: SimplicialComplex,
    orientation: OrientationAssignment,
    lattice: Arc<FaceLattice>,
}

impl PseudoManifold {
    /// Validates the ridge and connectivity conditions and orients.
    pub fn new(complex: SimplicialComplex) -> Result<Self> {
        let lattice = FaceLattice::new(&complex);
        validate_ridges(&lattice)?;
        let components = facet_components(&lattice);
        if components != 1 {
            return Err(Error::NotStronglyConnected { components });
        }
        let orientation = orient_lattice(&lattice)?;
        Ok(PseudoManifold { complex, orientation, lattice: Arc::new(lattice) })
    }

    /// Like [`PseudoManifold::new`] but with caller-supplied signs, which
    /// must be coherent.
    pub fn with_orientation(complex: SimplicialComplex, orientation: OrientationAssignment) -> Result<Self> {
        let lattice = FaceLattice::new(&complex);
        validate_ridges(&lattice)?;
        let components = facet_components(&lattice);
        if components != 1 {
            return Err(Error::NotStronglyConnected { components });
        }
        check_coherent(&lattice, &orientation)?;
        Ok(PseudoManifold { complex, orientation, lattice: Arc::new(lattice) })
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn orientation(&self) -> &OrientationAssignment {
        &self.orientation
    }

    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    /// Orientation sign of a facet given by its cell id.
    pub fn facet_sign(&self, facet: CellId) -> i8 {
        self.orientation.sign(self.lattice.facet_index(facet))
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        validate_lattice(&self.complex, &self.lattice)
    }

    /// The same complex with the opposite orientation.
    pub fn reversed(&self) -> Self {
        PseudoManifold {
            complex: self.complex.clone(),
            orientation: self.orientation.reversed(),
            lattice: self.lattice.clone(),
        }
    }
}

pub(crate) fn link_in(lattice: &FaceLattice, id: CellId) -> SimplicialComplex {
    let center = lattice.cell(id);
    let facets: Vec<Cell> = lattice
        .star(id)
        .iter()
        .map(|&g| Cell::from_sorted(lattice.cell(g).difference(center)))
        .collect();
    SimplicialComplex::new(lattice.dim() - center.len(), facets).expect("links are pure")
}

/// `{G \ f : G ⊇ f}` as a complex of dimension `n - dim f - 1`. Links of
/// faces contained in repeated facets carry repeated facets too.
pub fn link(pm: &PseudoManifold, f: &Cell) -> Result<SimplicialComplex> {
    if f.len() == pm.dim() + 1 {
        return match pm.lattice.lookup(f) {
            Some(_) => Err(Error::TopDimensionalFace(f.clone())),
            None => Err(Error::FaceNotPresent(f.clone())),
        };
    }
    let id = pm.lattice.face_id(f).ok_or_else(|| Error::FaceNotPresent(f.clone()))?;
    Ok(link_in(&pm.lattice, id))
}

/// Vertices are the faces of `pm` (numbered as in its [`FaceLattice`]:
/// proper faces by dimension then lexicographically, facets last); facets
/// are maximal chains. The coloring gives each new vertex the dimension of
/// the face it stands for.
pub fn barycentric_subdivision(pm: &PseudoManifold) -> (PseudoManifold, Vec<u32>) {
    let lat = &pm.lattice;
    let n = pm.dim();
    let mut coloring = vec![0u32; lat.num_cells()];
    for id in 0..lat.num_cells() as CellId {
        coloring[id as usize] = lat.cell_dim(id) as u32;
    }
    let mut facets = Vec::new();
    for g in lat.facet_ids() {
        let sign = pm.facet_sign(g);
        for perm in permutations(n + 1) {
            // perm lists local positions u_0, ..., u_n
            let mut mask = 0u32;
            let mut ids = Vec::with_capacity(n + 1);
            for &p in &perm {
                mask |= 1 << p;
                ids.push(lat.local_cell(g, mask));
            }
            // ids are increasing: lower dimension first, facets last
            let s = sign * permutation_sign(&perm);
            facets.push((Cell::from_sorted(ids), s));
        }
    }
    let (complex, signs) = SimplicialComplex::with_payload(n, facets).expect("subdivision is pure");
    let sub = PseudoManifold::with_orientation(complex, OrientationAssignment { signs })
        .expect("subdivision of an oriented pseudo-manifold is one");
    (sub, coloring)
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Faces `H` with `f ⊆ H ⊆ g`, ordered by dimension then lexicographically.
pub fn face_interval(pm: &PseudoManifold, f: &Cell, g: &Cell) -> Result<Vec<Cell>> {
    for c in [f, g] {
        if pm.lattice.lookup(c).is_none() {
            return Err(Error::FaceNotPresent(c.clone()));
        }
    }
    if !f.is_subset_of(g) {
        return Err(Error::NotNested { lower: f.clone(), upper: g.clone() });
    }
    let extra = g.difference(f);
    let mut out: Vec<Cell> = (0u32..1 << extra.len())
        .map(|mask| {
            let mut vs = f.vertices().to_vec();
            vs.extend(extra.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v));
            Cell::new(vs).expect("distinct")
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Dense relabeling `old vertex -> 0..k` in increasing order.
pub fn dense_vertex_map(complex: &SimplicialComplex) -> HashMap<Vertex, Vertex> {
    complex.vertices().into_iter().enumerate().map(|(i, v)| (v, i as Vertex)).collect()
}
