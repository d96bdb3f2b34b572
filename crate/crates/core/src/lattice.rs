//! Indexed face poset of a pure simplicial complex.
//!
//! Every proper face (dimension below the top) gets a dense [`CellId`]
//! ordered by dimension and then lexicographically; facets follow, in the
//! order of the complex. Facets are addressed by position rather than by
//! vertex set so that complexes with repeated facets (a 2-gon, a pillow)
//! are representable. Lower faces are always identified by their vertex
//! set.

use std::collections::HashMap;

use crate::complex::{Cell, SimplicialComplex};

pub type CellId = u32;

pub(crate) const NO_CELL: CellId = u32::MAX;

#[derive(Debug, Clone)]
pub struct FaceLattice {
    dim: usize,
    cells: Vec<Cell>,
    num_faces: usize,
    dim_start: Vec<usize>,
    index: HashMap<Cell, CellId>,
    star: Vec<Vec<CellId>>,
    local: Vec<Box<[CellId]>>,
}

impl FaceLattice {
    pub fn new(complex: &SimplicialComplex) -> Self {
        let n = complex.dim();
        let mut by_dim: Vec<Vec<Cell>> = vec![Vec::new(); n];
        {
            let mut seen: Vec<std::collections::HashSet<Cell>> = vec![Default::default(); n];
            for facet in complex.facets() {
                let k = facet.len();
                for mask in 1u32..(1u32 << k) - 1 {
                    let face = facet.sub_cell(mask);
                    let d = face.dim();
                    if seen[d].insert(face.clone()) {
                        by_dim[d].push(face);
                    }
                }
            }
        }
        let mut cells = Vec::new();
        let mut dim_start = Vec::with_capacity(n + 1);
        for mut layer in by_dim {
            layer.sort();
            dim_start.push(cells.len());
            cells.extend(layer);
        }
        dim_start.push(cells.len());
        let num_faces = cells.len();
        let index: HashMap<Cell, CellId> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as CellId))
            .collect();
        cells.extend(complex.facets().iter().cloned());

        let mut star = vec![Vec::new(); num_faces];
        let mut local = Vec::with_capacity(complex.facets().len());
        for (fi, facet) in complex.facets().iter().enumerate() {
            let fid = (num_faces + fi) as CellId;
            let k = facet.len();
            let full = (1u32 << k) - 1;
            let mut table = vec![NO_CELL; 1usize << k];
            table[full as usize] = fid;
            for mask in 1..full {
                let id = index[&facet.sub_cell(mask)];
                table[mask as usize] = id;
                star[id as usize].push(fid);
            }
            local.push(table.into_boxed_slice());
        }
        FaceLattice { dim: n, cells, num_faces, dim_start, index, star, local }
    }

    /// Top dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_faces(&self) -> usize {
        self.num_faces
    }

    pub fn num_facets(&self) -> usize {
        self.cells.len() - self.num_faces
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id as usize]
    }

    pub fn cell_dim(&self, id: CellId) -> usize {
        if self.is_facet(id) {
            self.dim
        } else {
            self.cells[id as usize].dim()
        }
    }

    pub fn is_facet(&self, id: CellId) -> bool {
        id as usize >= self.num_faces
    }

    pub fn facet_id(&self, facet_index: usize) -> CellId {
        (self.num_faces + facet_index) as CellId
    }

    pub fn facet_index(&self, id: CellId) -> usize {
        id as usize - self.num_faces
    }

    pub fn facet_ids(&self) -> impl Iterator<Item = CellId> + '_ {
        (self.num_faces..self.cells.len()).map(|i| i as CellId)
    }

    /// Ids of proper faces of dimension `d` (`d < n`).
    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = CellId> {
        (self.dim_start[d]..self.dim_start[d + 1]).map(|i| i as CellId)
    }

    pub fn ridges(&self) -> impl Iterator<Item = CellId> {
        self.faces_of_dim(self.dim - 1)
    }

    /// Id of a proper face.
    pub fn face_id(&self, cell: &Cell) -> Option<CellId> {
        self.index.get(cell).copied()
    }

    /// Id of any face: proper faces by vertex set, facets by the first
    /// facet carrying that vertex set.
    pub fn lookup(&self, cell: &Cell) -> Option<CellId> {
        if cell.len() == self.dim + 1 {
            self.cells[self.num_faces..]
                .iter()
                .position(|f| f == cell)
                .map(|i| (self.num_faces + i) as CellId)
        } else {
            self.face_id(cell)
        }
    }

    /// Facets containing a proper face, ascending.
    pub fn star(&self, id: CellId) -> &[CellId] {
        &self.star[id as usize]
    }

    /// Bit mask of `cell`'s vertices among the sorted vertices of `facet`.
    pub fn mask_in(&self, facet: CellId, cell: CellId) -> Option<u32> {
        if cell == facet {
            return Some((1u32 << (self.dim + 1)) - 1);
        }
        let outer = self.cell(facet);
        let mut mask = 0u32;
        for v in self.cell(cell).vertices() {
            mask |= 1 << outer.position(*v)?;
        }
        Some(mask)
    }

    /// The face of `facet` whose vertices are selected by `mask`.
    pub fn local_cell(&self, facet: CellId, mask: u32) -> CellId {
        self.local[self.facet_index(facet)][mask as usize]
    }

    /// Whether `lower` is a face of `upper` (non-strict).
    pub fn contains(&self, upper: CellId, lower: CellId) -> bool {
        if upper == lower {
            return true;
        }
        if self.is_facet(lower) {
            return false;
        }
        self.cell(lower).is_subset_of(self.cell(upper))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn counts_for_tetrahedron_boundary() {
        let lat = FaceLattice::new(&catalog::tetrahedron_boundary());
        assert_eq!(lat.num_faces(), 4 + 6);
        assert_eq!(lat.num_facets(), 4);
        for r in lat.ridges() {
            assert_eq!(lat.star(r).len(), 2);
        }
        for v in lat.faces_of_dim(0) {
            assert_eq!(lat.star(v).len(), 3);
        }
    }

    #[test]
    fn repeated_facets_get_distinct_ids() {
        let lat = FaceLattice::new(&catalog::polygon(2));
        assert_eq!(lat.num_facets(), 2);
        assert_eq!(lat.num_faces(), 2);
        let a = lat.face_id(&Cell::new([0]).unwrap()).unwrap();
        assert_eq!(lat.star(a), &[2, 3]);
    }

    #[test]
    fn local_table_round_trips() {
        let lat = FaceLattice::new(&catalog::octahedron_boundary());
        for g in lat.facet_ids() {
            for mask in 1u32..7 {
                let c = lat.local_cell(g, mask);
                assert_eq!(lat.mask_in(g, c), Some(mask));
            }
        }
    }
}
