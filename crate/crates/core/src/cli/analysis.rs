//! The full pipeline for one graph, keeping every intermediate object so
//! that reports and verification checks can share it.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::bounds::{
    assemble_bounds, generic_intertwiner_rank, pair_orbits, rank_seeds, BoundReport, IntertwinerRankEstimate,
};
use crate::entangle::{coefficient_matrix, maximize_entropy, schmidt, ManifoldOptimum, OptimizerConfig, SchmidtData};
use crate::error::{Error, Result};
use crate::families::{cn_reference, kn_reference, FamilyReference};
use crate::graph::{FamilyKind, FamilySpec, Graph};
use crate::ground_space::{build_a1_basis, enumerate_ground_manifold, A1Basis, GroundManifold, SparseState};
use crate::perm_group::{
    automorphism_group, bipartition_stabilizer, burnside_orbit_count, family_automorphism_group,
    family_bipartition_stabilizer, Bipartition, PermGroup,
};

use super::AnalysisConfig;

/// Slack allowed between the computed entropy and the combined bound.
pub const BOUND_SLACK: f64 = 1e-9;

pub struct Analysis {
    pub graph: Graph,
    pub bip: Bipartition,
    pub gamma: PermGroup,
    pub gamma_a: PermGroup,
    /// How the groups were obtained.
    pub group_method: &'static str,
    pub manifold: Option<GroundManifold>,
    pub basis: Option<A1Basis>,
    pub optimum: Option<ManifoldOptimum>,
    /// The optimized state and its Schmidt data.
    pub state: Option<SparseState>,
    pub schmidt: Option<SchmidtData>,
    pub rank: Option<IntertwinerRankEstimate>,
    pub burnside_omega: Option<u64>,
    pub bounds: Option<BoundReport>,
    pub reference: Option<FamilyReference>,
    /// Sections that could not be computed, with the reason.
    pub unavailable: Vec<(String, String)>,
    /// Stage timings in milliseconds.
    pub timing: BTreeMap<String, f64>,
}

fn is_cap(err: &Error) -> bool {
    matches!(err, Error::CapExceeded { .. } | Error::DimensionOverflow { .. })
}

impl Analysis {
    /// Runs the pipeline. Cap overruns leave the affected sections empty and
    /// listed in `unavailable`; other failures are errors.
    pub fn run(graph: Graph, family: Option<&FamilySpec>, cfg: &AnalysisConfig) -> Result<Analysis> {
        cfg.validate()?;
        let bip = cfg.resolve_bipartition(graph.n())?;
        let mut timing = BTreeMap::new();
        let mut clock = Instant::now();
        let mut lap = |timing: &mut BTreeMap<String, f64>, name: &str| {
            timing.insert(name.to_string(), clock.elapsed().as_secs_f64() * 1e3);
            clock = Instant::now();
        };

        let fast = family.and_then(|spec| {
            let gamma = family_automorphism_group(spec, &graph, cfg.max_group)?;
            let gamma_a = family_bipartition_stabilizer(spec, &graph, &bip, cfg.max_group)?;
            Some((gamma, gamma_a))
        });
        let (gamma, gamma_a, group_method) = match fast {
            Some((g, ga)) => (g?, ga?, "family-closed-form"),
            None => (
                automorphism_group(&graph, cfg.max_group),
                bipartition_stabilizer(&graph, &bip, cfg.max_group)?,
                "refinement-search",
            ),
        };
        lap(&mut timing, "groups");

        let mut a = Analysis {
            graph,
            bip,
            gamma,
            gamma_a,
            group_method,
            manifold: None,
            basis: None,
            optimum: None,
            state: None,
            schmidt: None,
            rank: None,
            burnside_omega: None,
            bounds: None,
            reference: None,
            unavailable: Vec::new(),
            timing: BTreeMap::new(),
        };
        a.reference = family.and_then(|spec| a.family_reference(spec));

        match enumerate_ground_manifold(&a.graph, &a.gamma) {
            Ok(man) => a.manifold = Some(man),
            Err(e) if is_cap(&e) => {
                for section in ["ground", "schmidt", "optimum", "bounds"] {
                    a.unavailable.push((section.into(), e.to_string()));
                }
                a.timing = timing;
                return Ok(a);
            }
            Err(e) => return Err(e),
        }
        let man = a.manifold.as_ref().unwrap();
        let basis = build_a1_basis(man)?;
        lap(&mut timing, "ground_manifold");

        let opt_cfg = OptimizerConfig {
            restarts: cfg.restarts,
            seed: cfg.seed,
            ..OptimizerConfig::default()
        };
        match maximize_entropy(&basis, &a.bip, &opt_cfg) {
            Ok(opt) => {
                let psi = basis.combine(&opt.coeffs);
                let m = coefficient_matrix(&psi, &a.bip)?;
                a.schmidt = Some(schmidt(&m, cfg.rank_tol)?);
                a.state = Some(psi);
                a.optimum = Some(opt);
            }
            Err(e) if is_cap(&e) => {
                a.unavailable.push(("schmidt".into(), e.to_string()));
                a.unavailable.push(("optimum".into(), e.to_string()));
            }
            Err(e) => return Err(e),
        }
        a.basis = Some(basis);
        lap(&mut timing, "entanglement");

        if a.gamma_a.is_enumerated() {
            a.burnside_omega = burnside_orbit_count(&a.gamma_a, a.bip.part_a()).ok();
        }
        let abelian = Some(a.gamma_a.is_abelian());
        let rank = pair_orbits(&a.gamma_a, &a.bip)
            .and_then(|po| generic_intertwiner_rank(&po, &rank_seeds(cfg.seed, cfg.rank_seeds), cfg.rank_tol));
        match rank {
            Ok(est) => {
                let man = a.manifold.as_ref().unwrap();
                a.bounds = Some(assemble_bounds(man, &est, a.burnside_omega, abelian, a.graph.n()));
                a.rank = Some(est);
            }
            Err(e) if is_cap(&e) => a.unavailable.push(("bounds".into(), e.to_string())),
            Err(e) => return Err(e),
        }
        lap(&mut timing, "bounds");
        a.timing = timing;
        Ok(a)
    }

    fn family_reference(&self, spec: &FamilySpec) -> Option<FamilyReference> {
        let n = self.graph.n();
        if self.bip != Bipartition::first_half(n) || n % 2 != 0 || n < 4 {
            return None;
        }
        match spec.kind {
            FamilyKind::Cycle => cn_reference(n).ok(),
            FamilyKind::Complete => kn_reference(n).ok(),
            _ => None,
        }
    }

    /// Entropy of the optimized state in nats.
    pub fn entropy(&self) -> Option<f64> {
        self.schmidt.as_ref().map(|s| s.entropy)
    }

    /// Fails if the computed entropy exceeds the combined bound.
    pub fn check_bound(&self) -> Result<()> {
        if let (Some(s), Some(b)) = (self.entropy(), &self.bounds) {
            if s > b.combined_bound_nats + BOUND_SLACK {
                return Err(Error::BoundViolation {
                    entropy: s,
                    bound: b.combined_bound_nats,
                });
            }
        }
        Ok(())
    }

    /// Error to report when a section had to be skipped.
    pub fn cap_error(&self) -> Option<String> {
        self.unavailable.first().map(|(_, why)| why.clone())
    }
}
