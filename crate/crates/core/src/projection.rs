//! The projection `g: M → Z` and its degree.
//!
//! Cube `(t, s)` maps to the flag simplex of `s` with barycentric weights
//! `w_0 = Π(1 - t_i)` on `b(F_0)` and `w_j = t_j Π_{i>j}(1 - t_i)` on
//! `b(F_j)`. The degree is obtained by counting cubes per flag, never
//! numerically.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::complex::Cell;
use crate::cubes::{pattern_of, Component, CubeFaceKey, ManifoldReport, QuotientComplex};
use crate::labeling::Provenance;
use crate::error::{Error, Result};
use crate::states::{flip_flag, FlagId, ResolutionState, Resolver};

/// A point of a flag simplex of `Z` in barycentric coordinates with
/// respect to `b(F_0), ..., b(F_n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BarycentricPoint {
    pub flag: Vec<Cell>,
    pub weights: Vec<f64>,
}

/// Weights of `g` at cube coordinates `t = (t_1, ..., t_n)`.
pub fn g_weights(t: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut w = vec![0.0; n + 1];
    let mut tail = 1.0;
    for j in (1..=n).rev() {
        w[j] = t[j - 1] * tail;
        tail *= 1.0 - t[j - 1];
    }
    w[0] = tail;
    w
}

pub fn g_eval(res: &Resolver, s: &ResolutionState, t: &[f64]) -> BarycentricPoint {
    BarycentricPoint { flag: res.flag_cells(s.flag), weights: g_weights(t) }
}

/// Inverse of [`g_weights`] on the open simplex: `t_n = w_n`,
/// `t_j = w_j / Π_{i>j}(1 - t_i)`. `None` when a denominator vanishes.
pub fn cube_coordinates(w: &[f64]) -> Option<Vec<f64>> {
    let n = w.len().checked_sub(1)?;
    let mut t = vec![0.0; n];
    let mut tail = 1.0;
    for j in (1..=n).rev() {
        if tail == 0.0 {
            return None;
        }
        t[j - 1] = w[j] / tail;
        tail *= 1.0 - t[j - 1];
    }
    Some(t)
}

/// Signed and unsigned cube counts per flag of `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    /// `|r|`, the number of sheets over each flag simplex.
    pub degree: u64,
    /// +1 if cube orientations agree with `Z` over every flag, -1 if they
    /// all disagree. The overall sign depends on the seed cube's sign.
    pub relative_sign: i8,
    pub flags: usize,
    pub signed_counts: Vec<i64>,
    pub unsigned_counts: Vec<u64>,
}

/// Counts the cubes above each flag, signed by cube orientation against
/// the orientation of the flag simplex.
pub fn degree(res: &Resolver, comp: &Component, cube_signs: &[i8]) -> Result<DegreeReport> {
    let nf = res.flags().len();
    let mut signed = vec![0i64; nf];
    let mut unsigned = vec![0u64; nf];
    for (i, s) in comp.states().iter().enumerate() {
        let f = s.flag as usize;
        signed[f] += (cube_signs[i] * res.flag_sign(s.flag)) as i64;
        unsigned[f] += 1;
    }
    let r = signed[0];
    if let Some(f) = signed.iter().position(|c| *c != r) {
        return Err(Error::InconsistentDegree(format!(
            "flag 0 has signed count {r}, flag {f} has {}",
            signed[f]
        )));
    }
    if r == 0 {
        return Err(Error::InconsistentDegree("signed count is zero".into()));
    }
    Ok(DegreeReport {
        degree: r.unsigned_abs(),
        relative_sign: r.signum() as i8,
        flags: nf,
        signed_counts: signed,
        unsigned_counts: unsigned,
    })
}

/// A connected piece of the fiber of `g` over a barycenter `b(F_k)`, near
/// which `g` is a branched cover of degree `multiplicity`. Lies over the
/// codimension-2 skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchPoint {
    /// Position `k` in the flag: the fiber lies over `b(F_k)`.
    pub position: usize,
    pub cell: Cell,
    pub multiplicity: usize,
    /// Flags of `Z` through `cell` at position `k` that the piece lies
    /// over; fewer than `flags_through` only at singular faces.
    pub flags_covered: usize,
    pub flags_through: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoveringReport {
    /// Sheets above each flag simplex; equal everywhere when `uniform`.
    pub sheets: u64,
    pub uniform: bool,
    /// Gluings whose cubes do not project to the two flags adjacent
    /// across the corresponding wall.
    pub wall_violations: Vec<String>,
    /// Vertices over the interior of a facet or ridge with local degree
    /// other than 1, or with uneven sheet counts.
    pub local_violations: Vec<String>,
    pub branch_points: Vec<BranchPoint>,
    pub fibers_checked: usize,
}

impl CoveringReport {
    pub fn is_covering(&self) -> bool {
        self.uniform && self.wall_violations.is_empty() && self.local_violations.is_empty()
    }

    /// True if every branch point lies over a face of codimension ≥ 2.
    pub fn branching_off_skeleton_free(&self, n: usize) -> bool {
        self.branch_points.iter().all(|b| b.cell.dim() + 2 <= n)
    }
}

/// Pattern of the face of a cube that `g` collapses onto `b(F_k)`:
/// `t_k = 1`, `t_i = 0` for `i > k`, and `t_i` free for `i < k`.
fn fiber_pattern(n: usize, k: usize) -> usize {
    let free = (1u32 << k.saturating_sub(1)) - 1;
    let corner = if k == 0 { 0 } else { 1 << (k - 1) };
    pattern_of(n, corner, free)
}

/// Connected pieces of `g^{-1}(b(F_k))` over all cells at position `k`,
/// each given by the cubes whose fiber face belongs to the piece. Two
/// fiber faces touch iff they share a vertex of `M`.
fn fiber_components(q: &QuotientComplex, n: usize, k: usize) -> Vec<Vec<u32>> {
    let pat = fiber_pattern(n, k);
    let free: Vec<usize> = (1..k).collect();
    let mut parent: HashMap<u32, u32> = HashMap::new();
    fn find(parent: &mut HashMap<u32, u32>, x: u32) -> u32 {
        let mut r = x;
        while let Some(&p) = parent.get(&r) {
            if p == r {
                break;
            }
            r = p;
        }
        parent.insert(x, r);
        r
    }
    // vertex classes are offset so they do not collide with face classes
    let offset = q.num_classes() as u32;
    for cube in 0..q.num_cubes() {
        let face = q.class_of(CubeFaceKey { cube: cube as u32, pattern: pat as u32 });
        parent.entry(face).or_insert(face);
        for bits in 0..1u32 << free.len() {
            let mut p = pat;
            for (i, j) in free.iter().enumerate() {
                p = crate::cubes::set_digit(p, *j, (bits >> i & 1) as usize);
            }
            let v = offset + q.class_of(CubeFaceKey { cube: cube as u32, pattern: p as u32 });
            parent.entry(v).or_insert(v);
            let (a, b) = (find(&mut parent, face), find(&mut parent, v));
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
    }
    let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for cube in 0..q.num_cubes() {
        let face = q.class_of(CubeFaceKey { cube: cube as u32, pattern: pat as u32 });
        let root = find(&mut parent, face);
        groups.entry(root).or_default().push(cube as u32);
    }
    groups.into_values().collect()
}

/// Checks the covering property off the codimension-2 skeleton.
pub fn covering_check(res: &Resolver, comp: &Component, q: &QuotientComplex) -> CoveringReport {
    let n = res.dim();
    let lat = res.lattice();
    let mut rep = CoveringReport::default();

    let mut per_flag = vec![0u64; res.flags().len()];
    for s in comp.states() {
        per_flag[s.flag as usize] += 1;
    }
    rep.sheets = per_flag[0];
    rep.uniform = per_flag.iter().all(|c| *c == rep.sheets);

    for (i, s) in comp.states().iter().enumerate() {
        let u = res.flag(s.flag);
        for j in 1..=n {
            let t = res.flag(comp.state(comp.neighbor(i, j, 0)).flag);
            match flip_flag(lat, u, j) {
                Ok(f) if &f == t => {}
                _ => rep.wall_violations.push(format!("cube {i}: t_{j} = 0 not glued across the flag wall")),
            }
        }
        let t = res.flag(comp.state(comp.neighbor(i, 1, 1)).flag);
        if t.cells()[1..] != u.cells()[1..] || t.facet() == u.facet() {
            rep.wall_violations.push(format!("cube {i}: t_1 = 1 not glued across the ridge"));
        }
    }

    let mut through: HashMap<(usize, u32), usize> = HashMap::new();
    for f in res.flags() {
        for (k, c) in f.cells().iter().enumerate() {
            *through.entry((k, *c)).or_default() += 1;
        }
    }
    for k in 0..=n {
        for fiber in fiber_components(q, n, k) {
            rep.fibers_checked += 1;
            let mut hits: HashMap<FlagId, usize> = HashMap::new();
            let mut cells = fiber.iter().map(|&cube| {
                let s = comp.state(cube as usize);
                *hits.entry(s.flag).or_default() += 1;
                res.flag(s.flag).at(k)
            });
            let c = cells.next().unwrap();
            if cells.any(|d| d != c) {
                rep.local_violations.push(format!("fiber over position {k} maps to several cells"));
                continue;
            }
            let m = *hits.values().next().unwrap();
            // over a singular face a piece may cover only one local sheet of Z
            let all = through[&(k, c)];
            if hits.values().any(|h| *h != m) || (k <= 1 && hits.len() != all) {
                rep.local_violations.push(format!("uneven sheets near {}", lat.cell(c)));
                continue;
            }
            if k <= 1 && m != 1 {
                rep.local_violations.push(format!("local degree {m} over the interior of {}", lat.cell(c)));
            } else if m > 1 {
                rep.branch_points.push(BranchPoint {
                    position: k,
                    cell: lat.cell(c).clone(),
                    multiplicity: m,
                    flags_covered: hits.len(),
                    flags_through: all,
                });
            }
        }
    }
    rep
}

/// Machine-readable summary of one resolved component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizationReport {
    pub provenance: Provenance,
    pub dimension: usize,
    pub component_size: usize,
    pub face_counts: Vec<usize>,
    pub euler_characteristic: i64,
    pub manifold: bool,
    pub orientable: bool,
    /// The multiple `r` of the fundamental class realized by `g`.
    pub degree: u64,
    pub relative_sign: i8,
    pub covering: bool,
    pub branch_points: usize,
    /// Largest multiplicity among branch points, 1 if there are none.
    pub max_branching: usize,
}

pub fn realization_report(
    provenance: Provenance,
    manifold: &ManifoldReport,
    degree: &DegreeReport,
    covering: &CoveringReport,
) -> RealizationReport {
    RealizationReport {
        provenance,
        dimension: manifold.dim,
        component_size: manifold.cubes,
        face_counts: manifold.face_counts.clone(),
        euler_characteristic: manifold.euler_characteristic,
        manifold: manifold.is_manifold(),
        orientable: true,
        degree: degree.degree,
        relative_sign: degree.relative_sign,
        covering: covering.is_covering(),
        branch_points: covering.branch_points.len(),
        max_branching: covering.branch_points.iter().map(|b| b.multiplicity).max().unwrap_or(1),
    }
}
