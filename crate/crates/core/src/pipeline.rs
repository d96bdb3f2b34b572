//! The whole resolution run: labeling, exploration, quotient, checks.

use crate::complex::{PseudoManifold, SimplicialComplex};
use crate::cubes::{build_quotient, explore_component, orient_quotient, verify_manifold, Component, ManifoldReport, QuotientComplex};
use crate::error::Result;
use crate::labeling::{ensure_good, UserLabeling};
use crate::projection::{covering_check, degree, realization_report, CoveringReport, DegreeReport, RealizationReport};
use crate::states::{FlagId, Resolver};

pub const DEFAULT_MAX_STATES: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct ResolveOptions {
    pub labeling: UserLabeling,
    pub seed_flag: FlagId,
    pub max_states: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { labeling: UserLabeling::None, seed_flag: 0, max_states: DEFAULT_MAX_STATES }
    }
}

/// Everything computed for one component.
#[derive(Debug)]
pub struct Resolution {
    /// The complex as given, before any subdivision.
    pub input: PseudoManifold,
    pub resolver: Resolver,
    pub component: Component,
    pub quotient: QuotientComplex,
    pub manifold: ManifoldReport,
    pub cube_signs: Vec<i8>,
    pub degree: DegreeReport,
    pub covering: CoveringReport,
}

impl Resolution {
    pub fn report(&self) -> RealizationReport {
        realization_report(self.resolver.labeled().provenance(), &self.manifold, &self.degree, &self.covering)
    }
}

/// Orients and validates `complex`, finds or builds a good labeling, and
/// resolves the component of the seed flag.
pub fn resolve(complex: SimplicialComplex, opts: &ResolveOptions) -> Result<Resolution> {
    let pm = PseudoManifold::new(complex)?;
    resolve_oriented(&pm, opts)
}

pub fn resolve_oriented(pm: &PseudoManifold, opts: &ResolveOptions) -> Result<Resolution> {
    let lc = ensure_good(pm, &opts.labeling)?;
    let mut resolver = Resolver::new(lc)?;
    let seed = resolver.initial_state(opts.seed_flag)?;
    let component = explore_component(&mut resolver, seed, opts.max_states)?;
    finish(pm.clone(), resolver, component)
}

/// Runs the quotient and all checks on an explored component.
pub fn finish(input: PseudoManifold, resolver: Resolver, component: Component) -> Result<Resolution> {
    let quotient = build_quotient(&component);
    let manifold = verify_manifold(&quotient);
    let cube_signs = orient_quotient(&quotient)?;
    let degree = degree(&resolver, &component, &cube_signs)?;
    let covering = covering_check(&resolver, &component, &quotient);
    Ok(Resolution { input, resolver, component, quotient, manifold, cube_signs, degree, covering })
}
