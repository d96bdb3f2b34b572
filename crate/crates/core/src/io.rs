//! JSON file formats, run reports, and exports.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::census::{CensusReport, OrientedSphere};
use crate::complex::{Cell, OrientationAssignment, PseudoManifold, SimplicialComplex};
use crate::cubes::{build_quotient, orient_quotient, oriented_order_complex, pattern_digit, verify_manifold, Certification, Component};
use crate::error::{Error, Result};
use crate::labeling::{GoodLabeling, LabeledComplex, Provenance, UserLabeling};
use crate::pipeline::Resolution;
use crate::projection::{covering_check, degree, g_weights};
use crate::states::{Flag, ResolutionState, Resolver};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RidgeLabel {
    pub ridge: Vec<u32>,
    pub label: u32,
}

/// A complex on disk. `coloring` and `coordinates` are indexed by vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub dimension: usize,
    pub facets: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<RidgeLabel>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<Vec<f64>>>,
}

fn json_error(e: serde_json::Error) -> Error {
    let message = e.to_string();
    // serde reports unknown or missing fields by name inside backticks
    let field = message.split('`').nth(1).unwrap_or("").to_string();
    Error::Schema { field, line: e.line(), column: e.column(), message }
}

/// Parses JSON text, mapping syntax and type errors to [`Error::Schema`]
/// with line and column.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(json_error)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Lower-case hex SHA-256.
pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// A parsed and validated complex file.
#[derive(Clone, Debug)]
pub struct Input {
    pub pm: PseudoManifold,
    pub labeling: UserLabeling,
    pub coordinates: Option<Vec<Vec<f64>>>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ComplexFile = from_json(text)?;
        file.check_shape()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn emit(&self) -> String {
        to_json(self)
    }

    /// Structural checks that need no topology.
    fn check_shape(&self) -> Result<()> {
        for (i, f) in self.facets.iter().enumerate() {
            if f.len() != self.dimension + 1 {
                return Err(Error::schema(
                    format!("facets[{i}]"),
                    format!("{} vertices, dimension {} needs {}", f.len(), self.dimension, self.dimension + 1),
                ));
            }
            Cell::new(f.iter().copied()).map_err(|e| Error::schema(format!("facets[{i}]"), e.to_string()))?;
        }
        if let Some(o) = &self.orientation {
            if o.len() != self.facets.len() {
                return Err(Error::schema(
                    "orientation",
                    format!("{} signs for {} facets", o.len(), self.facets.len()),
                ));
            }
            if let Some(i) = o.iter().position(|s| s.abs() != 1) {
                return Err(Error::schema(format!("orientation[{i}]"), "signs must be 1 or -1"));
            }
        }
        let top = self.facets.iter().flatten().max().map_or(0, |v| *v as usize + 1);
        if let Some(c) = &self.coloring {
            if c.len() < top {
                return Err(Error::schema("coloring", format!("{} entries, vertices go up to {}", c.len(), top - 1)));
            }
        }
        if let Some(c) = &self.coordinates {
            if c.len() < top {
                return Err(Error::schema("coordinates", format!("{} entries, vertices go up to {}", c.len(), top - 1)));
            }
            if let Some(i) = c.iter().position(|p| p.is_empty() || p.len() > 3) {
                return Err(Error::schema(format!("coordinates[{i}]"), "points need 1 to 3 coordinates"));
            }
        }
        if let Some(l) = &self.labels {
            for (i, r) in l.iter().enumerate() {
                if r.ridge.len() != self.dimension {
                    return Err(Error::schema(format!("labels[{i}].ridge"), "not a ridge"));
                }
                Cell::new(r.ridge.iter().copied()).map_err(|e| Error::schema(format!("labels[{i}].ridge"), e.to_string()))?;
            }
        }
        Ok(())
    }

    /// The complex with facets in the order of the file, and signs
    /// permuted along with them.
    pub fn complex(&self) -> Result<(SimplicialComplex, Option<OrientationAssignment>)> {
        let cells: Vec<Cell> = self.facets.iter().map(|f| Cell::new(f.iter().copied())).collect::<Result<_>>()?;
        match &self.orientation {
            None => Ok((SimplicialComplex::new(self.dimension, cells)?, None)),
            Some(o) => {
                let (c, signs) = SimplicialComplex::with_payload(self.dimension, cells.into_iter().zip(o.iter().copied()).collect())?;
                Ok((c, Some(OrientationAssignment { signs })))
            }
        }
    }

    /// Validates the pseudo-manifold conditions, orientation and labels.
    pub fn to_input(&self) -> Result<Input> {
        let (complex, orientation) = self.complex()?;
        let pm = match orientation {
            Some(o) => PseudoManifold::with_orientation(complex, o)?,
            None => PseudoManifold::new(complex)?,
        };
        let labeling = match (&self.labels, &self.coloring) {
            (Some(l), _) => UserLabeling::Labels(GoodLabeling::new(
                l.iter().map(|r| Ok((Cell::new(r.ridge.iter().copied())?, r.label))).collect::<Result<_>>()?,
            )?),
            (None, Some(c)) => UserLabeling::Coloring(c.clone()),
            (None, None) => UserLabeling::None,
        };
        Ok(Input { pm, labeling, coordinates: self.coordinates.clone() })
    }

    pub fn from_pm(pm: &PseudoManifold) -> Self {
        ComplexFile {
            dimension: pm.dim(),
            facets: pm.complex().facets().iter().map(|f| f.vertices().to_vec()).collect(),
            orientation: Some(pm.orientation().signs.clone()),
            coloring: None,
            labels: None,
            coordinates: None,
        }
    }

    pub fn from_labeled(lc: &LabeledComplex) -> Self {
        ComplexFile {
            labels: Some(lc.labeling().iter().map(|(r, l)| RidgeLabel { ridge: r.vertices().to_vec(), label: l }).collect()),
            ..Self::from_pm(lc.pm())
        }
    }
}

/// A list of oriented spheres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrescriptionFile {
    pub dimension: usize,
    pub spheres: Vec<SphereEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereEntry {
    pub facets: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i8>>,
}

impl PrescriptionFile {
    pub fn parse(text: &str) -> Result<Self> {
        from_json(text)
    }

    pub fn spheres(&self) -> Result<Vec<OrientedSphere>> {
        self.spheres
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let file = ComplexFile {
                    dimension: self.dimension,
                    facets: s.facets.clone(),
                    orientation: s.orientation.clone(),
                    coloring: None,
                    labels: None,
                    coordinates: None,
                };
                file.check_shape().map_err(|e| match e {
                    Error::Schema { field, message, .. } => Error::schema(format!("spheres[{i}].{field}"), message),
                    e => e,
                })?;
                let (c, o) = file.complex()?;
                OrientedSphere::new(c, o)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub seed_flag: u32,
    pub max_states: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldSummary {
    pub verdict: bool,
    pub walls_two_sided: bool,
    pub vertex_links_checked: usize,
    pub face_links_checked: usize,
    pub vertex_link_certification: Certification,
    pub link_failures: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub r: u64,
    pub relative_sign: i8,
    pub flags: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringSummary {
    pub verdict: bool,
    pub sheets: u64,
    pub wall_violations: usize,
    pub local_violations: usize,
    /// Branch pieces by the dimension of the face of `Z` they lie over.
    pub branch_pieces_by_face_dim: BTreeMap<usize, usize>,
    pub max_multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    /// Whether the links of `M` pair off into mirror pairs on their own.
    pub self_paired: bool,
    pub link_classes: usize,
    pub residual_pairs: usize,
    pub detail: Option<String>,
}

impl CensusSummary {
    pub fn from_result(r: &Result<CensusReport>) -> Self {
        match r {
            Ok(rep) => CensusSummary {
                self_paired: true,
                link_classes: rep.class_sizes.len(),
                residual_pairs: rep.residual_pairs.len(),
                detail: None,
            },
            Err(e) => CensusSummary { self_paired: false, link_classes: 0, residual_pairs: 0, detail: Some(e.to_string()) },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreSummary {
    pub pairings: usize,
    pub chunks: usize,
    pub families: usize,
}

/// Wall-clock times in milliseconds. The only part of a report that is
/// not reproducible.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub label_ms: f64,
    pub explore_ms: f64,
    pub checks_ms: f64,
    pub total_ms: f64,
}

/// Everything `resolve` prints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub input_digest: String,
    pub options: RunOptions,
    pub provenance: Provenance,
    pub dimension: usize,
    pub component_size: usize,
    pub face_counts: Vec<usize>,
    pub euler_characteristic: i64,
    pub manifold: ManifoldSummary,
    pub orientable: bool,
    pub degree: DegreeSummary,
    pub covering: CoveringSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusSummary>,
    pub stores: StoreSummary,
    pub timing: Timing,
}

impl RunReport {
    pub fn new(res: &Resolution, input_digest: String, options: RunOptions, census: Option<CensusSummary>, timing: Timing) -> Self {
        let stats = res.resolver.store_stats();
        let mut by_dim = BTreeMap::new();
        for b in &res.covering.branch_points {
            *by_dim.entry(b.cell.dim()).or_insert(0) += 1;
        }
        RunReport {
            schema_version: SCHEMA_VERSION,
            input_digest,
            options,
            provenance: res.resolver.labeled().provenance(),
            dimension: res.resolver.dim(),
            component_size: res.component.len(),
            face_counts: res.quotient.face_counts().to_vec(),
            euler_characteristic: res.quotient.euler_characteristic(),
            manifold: ManifoldSummary {
                verdict: res.manifold.is_manifold(),
                walls_two_sided: res.manifold.wall_violations.is_empty(),
                vertex_links_checked: res.manifold.vertex_links_checked,
                face_links_checked: res.manifold.face_links_checked,
                vertex_link_certification: res.manifold.vertex_link_certification,
                link_failures: res.manifold.failures.len(),
            },
            orientable: true,
            degree: DegreeSummary {
                r: res.degree.degree,
                relative_sign: res.degree.relative_sign,
                flags: res.degree.flags,
            },
            covering: CoveringSummary {
                verdict: res.covering.is_covering(),
                sheets: res.covering.sheets,
                wall_violations: res.covering.wall_violations.len(),
                local_violations: res.covering.local_violations.len(),
                branch_pieces_by_face_dim: by_dim,
                max_multiplicity: res.covering.branch_points.iter().map(|b| b.multiplicity).max().unwrap_or(1),
            },
            census,
            stores: StoreSummary { pairings: stats.pairings, chunks: stats.chunks, families: stats.families },
            timing,
        }
    }

    /// The report with timing zeroed, for byte comparisons.
    pub fn without_timing(&self) -> Self {
        RunReport { timing: Timing::default(), ..self.clone() }
    }
}

/// Verdicts that `verify` recomputes from an export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub cubes: usize,
    pub face_counts: Vec<usize>,
    pub manifold: bool,
    pub orientable: bool,
    pub r: u64,
    pub covering: bool,
}

/// `M` as a list of cubes with their gluing partners, plus the labeled
/// complex `Z` it projects to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeExport {
    pub schema_version: u32,
    pub format: String,
    pub dimension: usize,
    pub base: ComplexFile,
    /// Flag of each cube as vertex lists `F_0, ..., F_n`.
    pub flags: Vec<Vec<Vec<u32>>>,
    pub parity: Vec<u32>,
    /// `partners[i][2(j-1) + ε]` is the cube across `t_j = ε`.
    pub partners: Vec<Vec<u32>>,
    pub verdicts: Verdicts,
}

pub fn verdicts_of(res: &Resolution) -> Verdicts {
    Verdicts {
        cubes: res.component.len(),
        face_counts: res.quotient.face_counts().to_vec(),
        manifold: res.manifold.is_manifold(),
        orientable: true,
        r: res.degree.degree,
        covering: res.covering.is_covering(),
    }
}

pub fn export_cubes(res: &Resolution) -> CubeExport {
    let n = res.resolver.dim();
    let comp = &res.component;
    CubeExport {
        schema_version: SCHEMA_VERSION,
        format: "cube-list".into(),
        dimension: n,
        base: ComplexFile::from_labeled(res.resolver.labeled()),
        flags: comp
            .states()
            .iter()
            .map(|s| res.resolver.flag_cells(s.flag).iter().map(|c| c.vertices().to_vec()).collect())
            .collect(),
        parity: comp.states().iter().map(|s| s.h).collect(),
        partners: (0..comp.len())
            .map(|i| (1..=n).flat_map(|j| (0..2).map(move |e| (i, j, e))).map(|(i, j, e)| comp.neighbor(i, j, e) as u32).collect())
            .collect(),
        verdicts: verdicts_of(res),
    }
}

/// Re-runs the quotient, manifold, orientation, degree and covering
/// checks on an exported cube list.
pub fn verify_export(ex: &CubeExport) -> Result<Verdicts> {
    let n = ex.dimension;
    let bad = |field: &str, msg: String| Error::schema(field, msg);
    if ex.format != "cube-list" {
        return Err(bad("format", format!("unknown format {:?}", ex.format)));
    }
    let k = ex.partners.len();
    if ex.flags.len() != k || ex.parity.len() != k {
        return Err(bad("flags", "flags, parity and partners differ in length".into()));
    }
    if let Some(i) = ex.partners.iter().position(|p| p.len() != 2 * n || p.iter().any(|c| *c as usize >= k)) {
        return Err(bad(&format!("partners[{i}]"), "wrong arity or out of range".into()));
    }
    let input = ex.base.to_input()?;
    let UserLabeling::Labels(lab) = input.labeling else {
        return Err(bad("base.labels", "export must carry the labeling".into()));
    };
    let resolver = Resolver::new(LabeledComplex::new(input.pm, lab, Provenance::Direct)?)?;
    let mut states = Vec::with_capacity(k);
    for (i, f) in ex.flags.iter().enumerate() {
        let ids: Vec<u32> = f
            .iter()
            .map(|c| {
                let cell = Cell::new(c.iter().copied())?;
                resolver.lattice().lookup(&cell).ok_or(Error::FaceNotPresent(cell))
            })
            .collect::<Result<_>>()?;
        let flag = resolver
            .flag_id(&Flag::new(ids))
            .ok_or_else(|| bad(&format!("flags[{i}]"), "not a flag of the base".into()))?;
        // families are not exported; the cube index keeps states distinct
        states.push(ResolutionState { flag, family: i as u32, h: ex.parity[i] });
    }
    let comp = Component::from_partners(n, states, |i, j, e| ex.partners[i][2 * (j - 1) + e as usize] as usize)?;
    let q = build_quotient(&comp);
    let manifold = verify_manifold(&q);
    let signs = orient_quotient(&q);
    let orientable = signs.is_ok();
    let (r, covering) = match &signs {
        Ok(s) => (degree(&resolver, &comp, s).map(|d| d.degree).unwrap_or(0), covering_check(&resolver, &comp, &q).is_covering()),
        Err(_) => (0, false),
    };
    Ok(Verdicts { cubes: k, face_counts: q.face_counts().to_vec(), manifold: manifold.is_manifold(), orientable, r, covering })
}

/// Deterministic 3D positions for the vertices of `pm`: points spread on
/// a sphere, relaxed by a spring model on the edge graph.
pub fn spring_embedding(pm: &PseudoManifold) -> BTreeMap<u32, [f64; 3]> {
    let verts: Vec<u32> = pm.complex().vertices().into_iter().collect();
    let idx: BTreeMap<u32, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let k = verts.len();
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut pos: Vec<[f64; 3]> = (0..k)
        .map(|i| {
            let y = 1.0 - 2.0 * (i as f64 + 0.5) / k as f64;
            let r = (1.0 - y * y).sqrt();
            let th = golden * i as f64;
            [r * th.cos(), y, r * th.sin()]
        })
        .collect();
    let mut edges = Vec::new();
    for f in pm.complex().facets() {
        let vs = f.vertices();
        for a in 0..vs.len() {
            for b in a + 1..vs.len() {
                edges.push((idx[&vs[a]], idx[&vs[b]]));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let ideal = (4.0 / k.max(1) as f64).sqrt();
    for _ in 0..200 {
        let mut force = vec![[0.0f64; 3]; k];
        for a in 0..k {
            for b in a + 1..k {
                let d: Vec<f64> = (0..3).map(|c| pos[a][c] - pos[b][c]).collect();
                let dist2 = d.iter().map(|x| x * x).sum::<f64>().max(1e-9);
                let push = ideal * ideal / dist2;
                for c in 0..3 {
                    force[a][c] += d[c] * push;
                    force[b][c] -= d[c] * push;
                }
            }
        }
        for &(a, b) in &edges {
            let d: Vec<f64> = (0..3).map(|c| pos[a][c] - pos[b][c]).collect();
            let dist = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            let pull = dist / ideal;
            for c in 0..3 {
                force[a][c] -= d[c] * pull;
                force[b][c] += d[c] * pull;
            }
        }
        for a in 0..k {
            for c in 0..3 {
                pos[a][c] += 0.05 * force[a][c].clamp(-1.0, 1.0);
            }
        }
    }
    verts.into_iter().zip(pos).collect()
}

/// OFF mesh of the oriented order complex of a surface `M`. Each vertex
/// of the order complex is a face of `M`; it is placed at `g` of the
/// center of that face, lifted to the coordinates of `Z`'s vertices.
pub fn export_off(res: &Resolution, input: &PseudoManifold, coordinates: Option<&[Vec<f64>]>) -> Result<String> {
    let n = res.resolver.dim();
    if n != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    let base: BTreeMap<u32, [f64; 3]> = match coordinates {
        Some(c) => input
            .complex()
            .vertices()
            .into_iter()
            .map(|v| {
                let p = &c[v as usize];
                (v, [p[0], p.get(1).copied().unwrap_or(0.0), p.get(2).copied().unwrap_or(0.0)])
            })
            .collect(),
        None => spring_embedding(input),
    };
    let mean = |vs: &[u32], at: &dyn Fn(u32) -> [f64; 3]| -> [f64; 3] {
        let mut p = [0.0; 3];
        for v in vs {
            let q = at(*v);
            for c in 0..3 {
                p[c] += q[c] / vs.len() as f64;
            }
        }
        p
    };
    // vertices of the complex actually resolved, in input coordinates
    let used = res.resolver.pm();
    let subdivided = res.resolver.labeled().provenance() == Provenance::Subdivided;
    let point_of = |v: u32| -> [f64; 3] {
        if subdivided {
            mean(input.lattice().cell(v).vertices(), &|w| base[&w])
        } else {
            base[&v]
        }
    };
    let q = &res.quotient;
    let mut coords = Vec::with_capacity(q.num_classes());
    for class in 0..q.num_classes() as u32 {
        let key = q.class_members(class).next().expect("classes are nonempty");
        let t: Vec<f64> = (1..=n)
            .map(|j| match pattern_digit(key.pattern as usize, j) {
                2 => 0.5,
                d => d as f64,
            })
            .collect();
        let w = g_weights(&t);
        let flag = res.resolver.flag(res.component.state(key.cube as usize).flag);
        let mut p = [0.0; 3];
        for (k, wk) in w.iter().enumerate() {
            let b = mean(used.lattice().cell(flag.at(k)).vertices(), &point_of);
            for c in 0..3 {
                p[c] += wk * b[c];
            }
        }
        coords.push(p);
    }
    let oc = oriented_order_complex(q, &res.cube_signs)?;
    let mut out = format!("OFF\n{} {} 0\n", coords.len(), oc.complex().facets().len());
    for p in &coords {
        out.push_str(&format!("{:.6} {:.6} {:.6}\n", p[0], p[1], p[2]));
    }
    for (f, s) in oc.complex().facets().iter().zip(&oc.orientation().signs) {
        let v = f.vertices();
        if *s > 0 {
            out.push_str(&format!("3 {} {} {}\n", v[0], v[1], v[2]));
        } else {
            out.push_str(&format!("3 {} {} {}\n", v[1], v[0], v[2]));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_triangle() {
        let f = ComplexFile::parse(r#"{"dimension": 1, "facets": [[0,1],[1,2],[2,0]]}"#).unwrap();
        let input = f.to_input().unwrap();
        assert_eq!(input.pm.complex().facets().len(), 3);
        let again = ComplexFile::parse(&f.emit()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn schema_errors() {
        let e = ComplexFile::parse(r#"{"dimension": 1, "facets": [[0,1],[1,1]]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref field, .. } if field == "facets[1]"), "{e}");
        let e = ComplexFile::parse(r#"{"dimension": 1, "facets": [[0,1],[1,0]], "orientation": [1]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref field, .. } if field == "orientation"), "{e}");
        let e = ComplexFile::parse("{\n  \"dimension\": 1,\n  \"facet\": []\n}").unwrap_err();
        match e {
            Error::Schema { line, field, .. } => {
                assert_eq!(line, 3);
                assert_eq!(field, "facet");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn orientation_follows_facets() {
        let f = ComplexFile::parse(r#"{"dimension": 1, "facets": [[1,2],[0,1],[0,2]], "orientation": [1, 1, -1]}"#).unwrap();
        let (c, o) = f.complex().unwrap();
        assert_eq!(c.facets()[0].vertices(), &[0, 1]);
        assert_eq!(o.unwrap().signs, vec![1, -1, 1]);
    }

    #[test]
    fn digest_is_hex() {
        assert_eq!(digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
