//! Resolution states and the face-gluing involutions.
//!
//! A state is a triple (flag, pairing family, parity vector). The flag
//! `F_0 ⊃ F_1 ⊃ ... ⊃ F_n` has `dim F_i = n - i`. The family picks, for
//! every proper face `F`, a colour-reversing fixed-point-free involution
//! `Λ_F` of the star `L_F` (facets containing `F`). The parity vector
//! `h` lives in `Z_2^n`.
//!
//! The set of all states is never built. A [`Resolver`] hash-conses
//! pairings, fixed-width chunks of pairings, and whole families, so a
//! state is three machine words and equality is structural. Applying
//! `Φ_j^1` rewrites only the family entries it touches and reuses every
//! untouched chunk.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use crate::complex::{permutation_sign, Cell, PseudoManifold};
use crate::error::{Error, Result};
use crate::labeling::{LabelSet, LabeledComplex};
use crate::lattice::{CellId, FaceLattice};

pub type FlagId = u32;
pub type FamilyId = u32;

/// A maximal chain `F_0 ⊃ ... ⊃ F_n` of cell ids; `F_0` is a facet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Flag(Box<[CellId]>);

impl Flag {
    pub fn new(cells: Vec<CellId>) -> Self {
        Flag(cells.into_boxed_slice())
    }

    pub fn cells(&self) -> &[CellId] {
        &self.0
    }

    /// `F_i`.
    pub fn at(&self, i: usize) -> CellId {
        self.0[i]
    }

    pub fn facet(&self) -> CellId {
        self.0[0]
    }

    pub fn to_cells(&self, lattice: &FaceLattice) -> Vec<Cell> {
        self.0.iter().map(|c| lattice.cell(*c).clone()).collect()
    }

    /// Local position masks of `F_0, ..., F_n` inside the facet.
    fn masks(&self, lattice: &FaceLattice) -> Vec<u32> {
        self.0.iter().map(|c| lattice.mask_in(self.0[0], *c).expect("chain")).collect()
    }

    /// Orientation of the flag simplex `(b(F_n), ..., b(F_0))` relative
    /// to the oriented facet `F_0`.
    pub fn sign(&self, pm: &PseudoManifold) -> i8 {
        let masks = self.masks(pm.lattice());
        let n = masks.len() - 1;
        let mut order = Vec::with_capacity(n + 1);
        let mut prev = 0u32;
        for i in (0..=n).rev() {
            order.push((masks[i] & !prev).trailing_zeros());
            prev = masks[i];
        }
        pm.facet_sign(self.0[0]) * permutation_sign(&order)
    }
}

/// All flags, in lexicographic order of their cell sequences.
pub fn enumerate_flags(pm: &PseudoManifold) -> Vec<Flag> {
    let lat = pm.lattice();
    let n = pm.dim();
    let mut flags = Vec::with_capacity(lat.num_facets() * (1..=n + 1).product::<usize>());
    for g in lat.facet_ids() {
        for perm in crate::complex::permutations(n + 1) {
            let mut cells = vec![0; n + 1];
            let mut mask = 0u32;
            for (k, &p) in perm.iter().enumerate() {
                mask |= 1 << p;
                cells[n - k] = lat.local_cell(g, mask);
            }
            flags.push(Flag::new(cells));
        }
    }
    // ids within one dimension are in lexicographic cell order
    flags.sort();
    flags
}

/// Replaces `F_j` by the other cell between `F_{j+1}` and `F_{j-1}`
/// (`F_{n+1}` is empty).
pub fn flip_flag(lattice: &FaceLattice, flag: &Flag, j: usize) -> Result<Flag> {
    let n = flag.0.len() - 1;
    if j == 0 || j > n {
        return Err(Error::GeneratorOutOfRange { j, n });
    }
    let g = flag.0[0];
    let upper = lattice.mask_in(g, flag.0[j - 1]);
    let mid = lattice.mask_in(g, flag.0[j]);
    let lower = if j == n { Some(0) } else { lattice.mask_in(g, flag.0[j + 1]) };
    let diamond = || Error::DiamondViolation { flag: flag.to_cells(lattice), position: j };
    let (Some(upper), Some(mid), Some(lower)) = (upper, mid, lower) else {
        return Err(diamond());
    };
    if upper & mid != mid || mid & lower != lower || (upper & !lower).count_ones() != 2 || (mid & !lower).count_ones() != 1 {
        return Err(diamond());
    }
    let other = lower | (upper & !mid);
    let mut cells = flag.0.to_vec();
    cells[j] = lattice.local_cell(g, other);
    Ok(Flag::new(cells))
}

/// Facets containing a proper face, 2-coloured.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarSet {
    pub center: CellId,
    /// Facet ids, ascending.
    pub members: Vec<CellId>,
    pub black: Vec<bool>,
}

impl StarSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, facet: CellId) -> Option<usize> {
        self.members.binary_search(&facet).ok()
    }
}

/// Orientation of a facet relative to the order of its vertices by the
/// label of the opposite ridge. Adjacent facets get opposite parities
/// under a good labeling on a coherently oriented complex.
fn label_parity(lc: &LabeledComplex, g: CellId) -> Option<i8> {
    let lat = lc.lattice();
    let n = lc.dim();
    let full = (1u32 << (n + 1)) - 1;
    let labels: Vec<u32> = (0..=n)
        .map(|p| lc.labelset_of(lat.local_cell(g, full & !(1 << p))).iter().next().unwrap_or(0))
        .collect();
    let mut sorted = labels.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n + 1 {
        return None;
    }
    Some(lc.pm().facet_sign(g) * permutation_sign(&labels))
}

/// The star `L_F` with its regular 2-colouring.
///
/// The colouring is found by breadth-first search over facets sharing a
/// ridge through `F`. For `n >= 2` each connected piece is then aligned
/// with the global label parity of its facets, so stars of nested faces
/// carry compatible colourings; for `n = 1` the smallest member is black.
pub fn star_set(lc: &LabeledComplex, f: CellId) -> Result<StarSet> {
    let lat = lc.lattice();
    let n = lc.dim();
    let center_cell = || lat.cell(f).clone();
    if lat.is_facet(f) {
        return Err(Error::TopDimensionalFace(center_cell()));
    }
    let members = lat.star(f).to_vec();
    let k = members.len();
    let full = (1u32 << (n + 1)) - 1;
    let mut adj = vec![Vec::new(); k];
    for (a, &g) in members.iter().enumerate() {
        let fm = lat.mask_in(g, f).unwrap();
        for p in 0..=n {
            if fm >> p & 1 == 1 {
                continue;
            }
            let ridge = lat.local_cell(g, full & !(1 << p));
            for &h in lat.star(ridge) {
                if h != g {
                    adj[a].push(members.binary_search(&h).expect("neighbor contains F"));
                }
            }
        }
    }
    let mut color = vec![None::<bool>; k];
    for seed in 0..k {
        if color[seed].is_some() {
            continue;
        }
        let mut component = vec![seed];
        color[seed] = Some(true);
        let mut queue = VecDeque::from([seed]);
        while let Some(a) = queue.pop_front() {
            let ca = color[a].unwrap();
            for &b in &adj[a] {
                match color[b] {
                    None => {
                        color[b] = Some(!ca);
                        component.push(b);
                        queue.push_back(b);
                    }
                    Some(cb) if cb == ca => return Err(Error::NotBipartite { center: center_cell() }),
                    _ => {}
                }
            }
        }
        if n >= 2 {
            if let Some(par) = label_parity(lc, members[seed]) {
                if par < 0 {
                    for &a in &component {
                        color[a] = color[a].map(|c| !c);
                    }
                }
            }
        }
    }
    let black: Vec<bool> = color.into_iter().map(|c| c.unwrap()).collect();
    let nb = black.iter().filter(|b| **b).count();
    if 2 * nb != k {
        return Err(Error::UnbalancedColors { center: center_cell(), black: nb, white: k - nb });
    }
    Ok(StarSet { center: f, members, black })
}

/// An involution of a star's members, as a partner table.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Pairing(pub Box<[u16]>);

impl Pairing {
    pub fn partner(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// Fixed-point-free, an involution, and colour-reversing on `star`.
    pub fn is_valid_for(&self, star: &StarSet) -> bool {
        self.0.len() == star.len()
            && self.0.iter().enumerate().all(|(i, &p)| {
                let p = p as usize;
                p < self.0.len() && p != i && self.0[p] as usize == i && star.black[i] != star.black[p]
            })
    }
}

/// Pairs the i-th black member with the i-th white member.
pub fn canonical_pairing(star: &StarSet) -> Pairing {
    let blacks: Vec<usize> = (0..star.len()).filter(|i| star.black[*i]).collect();
    let whites: Vec<usize> = (0..star.len()).filter(|i| !star.black[*i]).collect();
    let mut partner = vec![0u16; star.len()];
    for (b, w) in blacks.iter().zip(&whites) {
        partner[*b] = *w as u16;
        partner[*w] = *b as u16;
    }
    Pairing(partner.into_boxed_slice())
}

/// One cube of the resolved manifold.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct ResolutionState {
    pub flag: FlagId,
    pub family: FamilyId,
    /// Bit `j - 1` is the `j`-th coordinate of the parity vector.
    pub h: u32,
}

/// A materialized pairing family: one pairing per proper face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingFamily(pub BTreeMap<CellId, Pairing>);

#[derive(Debug)]
struct Interner<T: Hash + Eq> {
    items: Vec<Arc<T>>,
    index: HashMap<Arc<T>, u32>,
}

impl<T: Hash + Eq> Default for Interner<T> {
    fn default() -> Self {
        Interner { items: Vec::new(), index: HashMap::new() }
    }
}

impl<T: Hash + Eq> Interner<T> {
    fn intern(&mut self, item: T) -> u32 {
        if let Some(&i) = self.index.get(&item) {
            return i;
        }
        let i = self.items.len() as u32;
        let item = Arc::new(item);
        self.items.push(item.clone());
        self.index.insert(item, i);
        i
    }

    fn get(&self, i: u32) -> &T {
        &self.items[i as usize]
    }

    fn len(&self) -> usize {
        self.items.len()
    }
}

const CHUNK: usize = 8;
type Chunk = [u32; CHUNK];
const NO_SLOT: u32 = u32::MAX;

/// For a tracked face `F` and a label set `S`: for each member `G` of
/// `L_F`, the face `H ⊇ F` of `G` with `c(H) = S` and the translation of
/// `L_H` positions back into `L_F` positions.
#[derive(Debug)]
struct SigmaTable {
    groups: Vec<(CellId, Vec<u16>)>,
    member: Vec<(u16, u16)>,
}

/// Statistics of the hash-consing stores.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StoreStats {
    pub pairings: usize,
    pub chunks: usize,
    pub families: usize,
}

/// Owns the labeled complex, its flags and stars, and the hash-consing
/// stores; applies the involutions.
#[derive(Debug)]
pub struct Resolver {
    lc: LabeledComplex,
    flags: Vec<Flag>,
    flag_index: HashMap<Flag, FlagId>,
    flag_signs: Vec<i8>,
    stars: Vec<StarSet>,
    slot_of: Vec<u32>,
    slot_cells: Vec<CellId>,
    pairings: Interner<Pairing>,
    chunks: Interner<Chunk>,
    families: Interner<Box<[u32]>>,
    update_cache: HashMap<LabelSet, Arc<[u32]>>,
    sigma_cache: HashMap<(u32, LabelSet), Arc<SigmaTable>>,
    swap: Pairing,
}

impl Resolver {
    /// Builds flags and colored stars; fails if some star is not
    /// bipartite or not balanced.
    pub fn new(lc: LabeledComplex) -> Result<Self> {
        let lat = lc.lattice();
        let flags = enumerate_flags(lc.pm());
        let flag_index = flags.iter().enumerate().map(|(i, f)| (f.clone(), i as FlagId)).collect();
        let flag_signs = flags.iter().map(|f| f.sign(lc.pm())).collect();
        let mut stars = Vec::with_capacity(lat.num_faces());
        let mut slot_of = vec![NO_SLOT; lat.num_faces()];
        let mut slot_cells = Vec::new();
        for f in 0..lat.num_faces() as CellId {
            let s = star_set(&lc, f)?;
            if s.len() > 2 {
                slot_of[f as usize] = slot_cells.len() as u32;
                slot_cells.push(f);
            }
            stars.push(s);
        }
        Ok(Resolver {
            lc,
            flags,
            flag_index,
            flag_signs,
            stars,
            slot_of,
            slot_cells,
            pairings: Interner::default(),
            chunks: Interner::default(),
            families: Interner::default(),
            update_cache: HashMap::new(),
            sigma_cache: HashMap::new(),
            swap: Pairing(Box::new([1, 0])),
        })
    }

    pub fn labeled(&self) -> &LabeledComplex {
        &self.lc
    }

    pub fn pm(&self) -> &PseudoManifold {
        self.lc.pm()
    }

    pub fn lattice(&self) -> &FaceLattice {
        self.lc.lattice()
    }

    pub fn dim(&self) -> usize {
        self.lc.dim()
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn flag(&self, id: FlagId) -> &Flag {
        &self.flags[id as usize]
    }

    pub fn flag_id(&self, flag: &Flag) -> Option<FlagId> {
        self.flag_index.get(flag).copied()
    }

    /// Orientation sign of the flag simplex, see [`Flag::sign`].
    pub fn flag_sign(&self, id: FlagId) -> i8 {
        self.flag_signs[id as usize]
    }

    pub fn star(&self, f: CellId) -> &StarSet {
        &self.stars[f as usize]
    }

    /// Faces whose star has more than two members; only these carry a
    /// choice of pairing.
    pub fn tracked_cells(&self) -> &[CellId] {
        &self.slot_cells
    }

    pub fn store_stats(&self) -> StoreStats {
        StoreStats { pairings: self.pairings.len(), chunks: self.chunks.len(), families: self.families.len() }
    }

    /// Canonical pairings everywhere, `h = 0`.
    pub fn initial_state(&mut self, seed: FlagId) -> Result<ResolutionState> {
        if seed as usize >= self.flags.len() {
            return Err(Error::InvalidFlag(format!("seed flag {seed} out of range")));
        }
        let ids: Vec<u32> = self
            .slot_cells
            .clone()
            .iter()
            .map(|&c| {
                let p = canonical_pairing(&self.stars[c as usize]);
                self.pairings.intern(p)
            })
            .collect();
        let family = self.intern_family_from_pairings(&ids);
        Ok(ResolutionState { flag: seed, family, h: 0 })
    }

    fn intern_family_from_pairings(&mut self, ids: &[u32]) -> FamilyId {
        let chunk_ids: Vec<u32> = ids
            .chunks(CHUNK)
            .map(|c| {
                let mut chunk = [0u32; CHUNK];
                chunk[..c.len()].copy_from_slice(c);
                self.chunks.intern(chunk)
            })
            .collect();
        self.families.intern(chunk_ids.into_boxed_slice())
    }

    fn pairing_id(&self, family: FamilyId, slot: u32) -> u32 {
        let chunk = self.families.get(family)[slot as usize / CHUNK];
        self.chunks.get(chunk)[slot as usize % CHUNK]
    }

    /// `Λ_F` in the given family.
    pub fn pairing_in(&self, family: FamilyId, f: CellId) -> &Pairing {
        match self.slot_of[f as usize] {
            NO_SLOT => &self.swap,
            slot => self.pairings.get(self.pairing_id(family, slot)),
        }
    }

    pub fn family(&self, family: FamilyId) -> PairingFamily {
        PairingFamily(
            (0..self.lattice().num_faces() as CellId)
                .map(|f| (f, self.pairing_in(family, f).clone()))
                .collect(),
        )
    }

    /// Checks every structural invariant of a state.
    pub fn check_state(&self, s: &ResolutionState) -> Result<()> {
        let n = self.dim();
        let flag = self
            .flags
            .get(s.flag as usize)
            .ok_or_else(|| Error::InvalidFlag(format!("flag id {}", s.flag)))?;
        if n < 32 && s.h >> n != 0 {
            return Err(Error::InvalidFlag(format!("parity vector {:#b} too long", s.h)));
        }
        for w in flag.0.windows(2) {
            if !self.lattice().contains(w[0], w[1]) {
                return Err(Error::InvalidFlag("not a chain".into()));
            }
        }
        for &c in &self.slot_cells {
            if !self.pairing_in(s.family, c).is_valid_for(&self.stars[c as usize]) {
                return Err(Error::PairingBroken { center: self.lattice().cell(c).clone() });
            }
        }
        Ok(())
    }

    /// `Φ_j^ε`.
    pub fn phi(&mut self, j: usize, eps: u8, s: &ResolutionState) -> Result<ResolutionState> {
        let n = self.dim();
        if j == 0 || j > n {
            return Err(Error::GeneratorOutOfRange { j, n });
        }
        let out = if eps == 0 {
            let flag = flip_flag(self.lattice(), self.flag(s.flag), j)?;
            let id = self.lookup_flag(&flag)?;
            ResolutionState { flag: id, ..*s }
        } else {
            self.phi_one(j, s)?
        };
        debug_assert!(self.check_state(&out).is_ok());
        Ok(out)
    }

    fn lookup_flag(&self, flag: &Flag) -> Result<FlagId> {
        self.flag_id(flag)
            .ok_or_else(|| Error::InvalidFlag(format!("{:?} is not a flag", flag.to_cells(self.lattice()))))
    }

    fn phi_one(&mut self, j: usize, s: &ResolutionState) -> Result<ResolutionState> {
        let flag = self.flags[s.flag as usize].clone();
        let fj = flag.at(j);
        let star = &self.stars[fj as usize];
        let at = star.index_of(flag.facet()).expect("F_0 contains F_j");
        let new_facet = star.members[self.pairing_in(s.family, fj).partner(at)];
        let mut cells = flag.cells().to_vec();
        cells[0] = new_facet;
        for (i, cell) in cells.iter_mut().enumerate().take(j).skip(1) {
            *cell = self.lc.face_by_labelset_id(fj, new_facet, self.lc.labelset_of(flag.at(i)))?;
        }
        let new_flag = self.lookup_flag(&Flag::new(cells))?;
        let family = self.conjugate_family(s.family, self.lc.labelset_of(fj))?;
        Ok(ResolutionState { flag: new_flag, family, h: s.h ^ (1 << (j - 1)) })
    }

    /// Tracked faces `F` with `c(F) ⊋ S`. Faces with `c(F) = S` are fixed
    /// by the update (both auxiliary faces equal `F`).
    fn update_slots(&mut self, s: LabelSet) -> Arc<[u32]> {
        if let Some(v) = self.update_cache.get(&s) {
            return v.clone();
        }
        let v: Arc<[u32]> = self
            .slot_cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| {
                let cs = self.lc.labelset_of(c);
                cs != s && cs.is_superset(s)
            })
            .map(|(i, _)| i as u32)
            .collect();
        self.update_cache.insert(s, v.clone());
        v
    }

    fn sigma_table(&mut self, slot: u32, s: LabelSet) -> Result<Arc<SigmaTable>> {
        if let Some(t) = self.sigma_cache.get(&(slot, s)) {
            return Ok(t.clone());
        }
        let f = self.slot_cells[slot as usize];
        let star = &self.stars[f as usize];
        let mut groups: Vec<(CellId, Vec<u16>)> = Vec::new();
        let mut member = Vec::with_capacity(star.len());
        for &g in &star.members {
            let h = self.lc.face_by_labelset_id(f, g, s)?;
            let gi = match groups.iter().position(|(c, _)| *c == h) {
                Some(i) => i,
                None => {
                    let to_f = self.stars[h as usize]
                        .members
                        .iter()
                        .map(|m| star.index_of(*m).expect("L_H ⊆ L_F") as u16)
                        .collect();
                    groups.push((h, to_f));
                    groups.len() - 1
                }
            };
            let pos = self.stars[h as usize].index_of(g).unwrap();
            member.push((gi as u16, pos as u16));
        }
        let t = Arc::new(SigmaTable { groups, member });
        self.sigma_cache.insert((slot, s), t.clone());
        Ok(t)
    }

    /// `Λ_F ↦ σ ∘ Λ_F ∘ σ` for every `F` with `c(F) ⊋ S`, where
    /// `σ(G) = Λ_H(G)` for the face `F ⊆ H ⊆ G` with `c(H) = S`. All new
    /// entries are computed from the old family.
    fn conjugate_family(&mut self, family: FamilyId, s: LabelSet) -> Result<FamilyId> {
        let slots = self.update_slots(s);
        let mut changed: Vec<(u32, u32)> = Vec::new();
        for &slot in slots.iter() {
            let table = self.sigma_table(slot, s)?;
            let f = self.slot_cells[slot as usize];
            let lam = self.pairing_in(family, f);
            let sigma: Vec<usize> = table
                .member
                .iter()
                .map(|&(gi, pos)| {
                    let (h, to_f) = &table.groups[gi as usize];
                    to_f[self.pairing_in(family, *h).partner(pos as usize)] as usize
                })
                .collect();
            let new: Box<[u16]> = (0..sigma.len()).map(|g| sigma[lam.partner(sigma[g])] as u16).collect();
            if *new == *lam.0 {
                continue;
            }
            let p = Pairing(new);
            if !p.is_valid_for(&self.stars[f as usize]) {
                return Err(Error::PairingBroken { center: self.lattice().cell(f).clone() });
            }
            changed.push((slot, self.pairings.intern(p)));
        }
        if changed.is_empty() {
            return Ok(family);
        }
        let mut chunk_ids = self.families.get(family).to_vec();
        let mut i = 0;
        while i < changed.len() {
            let c = changed[i].0 as usize / CHUNK;
            let mut chunk = *self.chunks.get(chunk_ids[c]);
            while i < changed.len() && changed[i].0 as usize / CHUNK == c {
                chunk[changed[i].0 as usize % CHUNK] = changed[i].1;
                i += 1;
            }
            chunk_ids[c] = self.chunks.intern(chunk);
        }
        Ok(self.families.intern(chunk_ids.into_boxed_slice()))
    }

    /// Cells of a flag, for reports.
    pub fn flag_cells(&self, id: FlagId) -> Vec<Cell> {
        self.flag(id).to_cells(self.lattice())
    }

    /// Number of flags whose `k`-th cell is `cell`.
    pub fn flags_through(&self, k: usize, cell: CellId) -> usize {
        self.flags.iter().filter(|f| f.at(k) == cell).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::labeling::{ensure_good, labeling_from_coloring, Provenance, UserLabeling};

    fn resolver(c: crate::complex::SimplicialComplex) -> Resolver {
        let pm = PseudoManifold::new(c).unwrap();
        Resolver::new(ensure_good(&pm, &UserLabeling::None).unwrap()).unwrap()
    }

    fn cell(vs: &[u32]) -> Cell {
        Cell::new(vs.iter().copied()).unwrap()
    }

    #[test]
    fn flag_counts() {
        let r = resolver(catalog::polygon(5));
        assert_eq!(r.flags().len(), 10);
        let r = resolver(catalog::polygon(2));
        assert_eq!(r.flags().len(), 4);
        let pm = PseudoManifold::new(catalog::tetrahedron_boundary()).unwrap();
        assert_eq!(enumerate_flags(&pm).len(), 24);
        let flags = enumerate_flags(&pm);
        assert!(flags.windows(2).all(|w| {
            let a = w[0].to_cells(pm.lattice());
            let b = w[1].to_cells(pm.lattice());
            a < b
        }));
    }

    #[test]
    fn flip_examples() {
        let pm = PseudoManifold::new(catalog::polygon(2)).unwrap();
        let lat = pm.lattice();
        let a = lat.face_id(&cell(&[0])).unwrap();
        let b = lat.face_id(&cell(&[1])).unwrap();
        let e = lat.facet_id(0);
        let f = flip_flag(lat, &Flag::new(vec![e, a]), 1).unwrap();
        assert_eq!(f, Flag::new(vec![e, b]));

        let pm = PseudoManifold::new(catalog::tetrahedron_boundary()).unwrap();
        let lat = pm.lattice();
        let abc = lat.lookup(&cell(&[0, 1, 2])).unwrap();
        let ab = lat.face_id(&cell(&[0, 1])).unwrap();
        let ac = lat.face_id(&cell(&[0, 2])).unwrap();
        let a = lat.face_id(&cell(&[0])).unwrap();
        let f = flip_flag(lat, &Flag::new(vec![abc, ab, a]), 1).unwrap();
        assert_eq!(f, Flag::new(vec![abc, ac, a]));
        for flag in enumerate_flags(&pm) {
            for j in 1..=2 {
                let g = flip_flag(lat, &flag, j).unwrap();
                assert_ne!(g, flag);
                assert_eq!(flip_flag(lat, &g, j).unwrap(), flag);
            }
        }
        assert!(matches!(
            flip_flag(lat, &Flag::new(vec![abc, ab, a]), 3),
            Err(Error::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn stars() {
        let pm = PseudoManifold::new(catalog::octahedron_boundary()).unwrap();
        let lab = labeling_from_coloring(&pm, &catalog::octahedron_coloring()).unwrap();
        let lc = LabeledComplex::new(pm, lab, Provenance::Direct).unwrap();
        let v = lc.lattice().face_id(&cell(&[0])).unwrap();
        let s = star_set(&lc, v).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.black.iter().filter(|b| **b).count(), 2);
        let e = lc.lattice().face_id(&cell(&[0, 2])).unwrap();
        let s = star_set(&lc, e).unwrap();
        assert_eq!(s.len(), 2);
        assert_ne!(s.black[0], s.black[1]);
        let p = canonical_pairing(&s);
        assert_eq!(p.0.as_ref(), &[1, 0]);
    }

    #[test]
    fn odd_cycle_star_is_not_bipartite() {
        // apex of the pentagonal bipyramid: star is a 5-cycle of triangles
        let pm = PseudoManifold::new(catalog::bipyramid(5)).unwrap();
        let lab = crate::labeling::GoodLabeling::new(
            pm.lattice().ridges().map(|r| (pm.lattice().cell(r).clone(), 0)).collect(),
        )
        .unwrap();
        // bypass verification: the check of interest is the star colouring
        let lc = LabeledComplex::new(pm.clone(), lab, Provenance::Direct);
        assert!(lc.is_err());
        let (sub, col) = crate::complex::barycentric_subdivision(&pm);
        let lab = labeling_from_coloring(&sub, &col).unwrap();
        let good = LabeledComplex::new(sub, lab, Provenance::Subdivided).unwrap();
        assert!(Resolver::new(good).is_ok());
    }

    #[test]
    fn canonical_pairing_is_valid() {
        let r = resolver(catalog::pinched_torus());
        for f in 0..r.lattice().num_faces() as CellId {
            let s = r.star(f);
            assert!(canonical_pairing(s).is_valid_for(s));
        }
    }

    #[test]
    fn polygon_initial_state() {
        let mut r = resolver(catalog::polygon(4));
        let s = r.initial_state(0).unwrap();
        assert_eq!(s.h, 0);
        let fam = r.family(s.family);
        assert_eq!(fam.0.len(), 4);
        assert!(fam.0.values().all(|p| p.0.as_ref() == [1, 0]));
        r.check_state(&s).unwrap();
    }

    #[test]
    fn two_gon_phi_one() {
        let mut r = resolver(catalog::polygon(2));
        let s = r.initial_state(0).unwrap();
        // flag 0 is (e, a); Λ_a swaps the two edges
        let t = r.phi(1, 1, &s).unwrap();
        assert_eq!(r.flag_cells(t.flag), vec![cell(&[0, 1]), cell(&[0])]);
        assert_eq!(r.flag(t.flag).facet(), r.lattice().facet_id(1));
        assert_eq!(t.h, 1);
        assert_eq!(t.family, s.family);
        assert_eq!(r.phi(1, 1, &t).unwrap(), s);
    }

    #[test]
    fn involutions_on_orbit_of_subdivided_sphere() {
        let mut r = resolver(catalog::tetrahedron_boundary());
        let s0 = r.initial_state(0).unwrap();
        let mut frontier = vec![s0];
        let mut seen = std::collections::HashSet::from([s0]);
        while let Some(s) = frontier.pop() {
            if seen.len() > 300 {
                break;
            }
            for j in 1..=2 {
                for eps in 0..2 {
                    let t = r.phi(j, eps, &s).unwrap();
                    assert_ne!(t, s);
                    assert_eq!(r.phi(j, eps, &t).unwrap(), s);
                    if seen.insert(t) {
                        frontier.push(t);
                    }
                }
            }
        }
    }
}
