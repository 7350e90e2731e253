//! Verification harness: runs the pipeline on a fixed family corpus and a
//! seeded random ensemble and checks the structural invariants on each.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::bounds::{abelian_schur_sum, pair_orbits};
use crate::entangle::{coefficient_matrix, factorization_residual, intertwiner_residual, is_pair_symmetric, schmidt};
use crate::error::Result;
use crate::families::{cn_reference, kn_reference};
use crate::graph::{generate_family, FamilyKind, FamilySpec, Graph};
use crate::ground_space::SparseState;
use crate::perm_group::{burnside_orbit_count, orbits_of_configs, Permutation};
use crate::seeding;

use super::analysis::{Analysis, BOUND_SLACK};
use super::AnalysisConfig;

/// Residual allowed in the numerical symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub analysis: AnalysisConfig,
    pub random_graphs: usize,
    pub max_random_n: usize,
    pub edge_prob: f64,
    /// Replace the first graph's automorphism generators with a
    /// non-automorphism (negative control).
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            analysis: AnalysisConfig::default(),
            random_graphs: 20,
            max_random_n: 10,
            edge_prob: 0.5,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub module: String,
    pub check: String,
    pub graph: String,
    pub seed: u64,
    pub passed: bool,
    /// Informational entries never fail the run.
    pub informational: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub graphs: usize,
    pub checks: Vec<Check>,
    pub failed: usize,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// `(graph, module/check, passed)` per check, for comparing runs.
    pub fn pattern(&self) -> Vec<(String, String, bool)> {
        self.checks
            .iter()
            .map(|c| (c.graph.clone(), format!("{}/{}", c.module, c.check), c.passed))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut t = String::new();
        for c in &self.checks {
            let tag = if c.informational {
                "INFO"
            } else if c.passed {
                "PASS"
            } else {
                "FAIL"
            };
            let _ = writeln!(t, "{tag} {}/{} [{}] {}", c.module, c.check, c.graph, c.detail);
        }
        let _ = writeln!(
            t,
            "{} graphs, {} checks, {} failed (seed {})",
            self.graphs,
            self.checks.iter().filter(|c| !c.informational).count(),
            self.failed,
            self.seed
        );
        t
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// The family corpus followed by the seeded random graphs.
pub fn corpus(cfg: &VerifyConfig) -> Result<Vec<(String, Graph, Option<FamilySpec>)>> {
    let mut specs: Vec<FamilySpec> = Vec::new();
    specs.extend((4..=12).step_by(2).map(FamilySpec::cycle));
    specs.extend([5, 7].map(FamilySpec::cycle));
    specs.extend((4..=10).step_by(2).map(FamilySpec::complete));
    specs.extend((2..=8).map(FamilySpec::path));
    for s in ["star:4", "star:7", "complete_bipartite:2,2", "complete_bipartite:2,4", "complete_bipartite:3,3", "complete_bipartite:3,5"] {
        specs.push(s.parse()?);
    }
    let mut out = Vec::new();
    for spec in specs {
        out.push((spec.to_string(), generate_family(&spec)?, Some(spec)));
    }
    let seed = cfg.analysis.seed;
    for i in 0..cfg.random_graphs {
        let mut rng = seeding::stream(seed, seeding::RANDOM_GRAPHS, i as u64);
        let n = rng.random_range(4..=cfg.max_random_n.max(4));
        let g = Graph::erdos_renyi(n, cfg.edge_prob, &mut rng)?;
        out.push((format!("random:{seed}:{i}:n{n}"), g, None));
    }
    Ok(out)
}

struct Recorder<'a> {
    checks: Vec<Check>,
    graph: &'a str,
    seed: u64,
}

impl Recorder<'_> {
    fn push(&mut self, module: &str, check: &str, passed: bool, informational: bool, detail: String) {
        self.checks.push(Check {
            module: module.into(),
            check: check.into(),
            graph: self.graph.to_string(),
            seed: self.seed,
            passed,
            informational,
            detail,
        });
    }

    fn check(&mut self, module: &str, check: &str, passed: bool, detail: String) {
        self.push(module, check, passed, false, detail);
    }

    fn info(&mut self, module: &str, check: &str, detail: String) {
        self.push(module, check, true, true, detail);
    }
}

/// First transposition that is not an automorphism, if any.
fn broken_generator(g: &Graph) -> Option<Permutation> {
    let n = g.n();
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .map(|(a, b)| Permutation::transposition(n, a, b))
        .find(|p| !p.preserves_edges(g))
}

fn generic_combination(r: usize) -> Vec<Complex64> {
    let c: Vec<Complex64> = (0..r).map(|k| Complex64::new(1.0 + k as f64, 0.5 * k as f64)).collect();
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    c.iter().map(|z| z / norm).collect()
}

fn check_graph(rec: &mut Recorder, a: &Analysis, spec: Option<&FamilySpec>, cfg: &AnalysisConfig) -> Result<()> {
    let g = &a.graph;
    let bip = &a.bip;

    let bad: Vec<String> = a
        .gamma
        .generators()
        .iter()
        .chain(a.gamma_a.generators())
        .filter(|p| !p.preserves_edges(g))
        .map(|p| p.to_string())
        .collect();
    let moves_a = a.gamma_a.generators().iter().any(|p| !p.stabilizes(bip.part_a()));
    rec.check(
        "perm_group",
        "edge-preservation",
        bad.is_empty() && !moves_a,
        if bad.is_empty() { "all generators preserve E".into() } else { format!("not automorphisms: {}", bad.join("; ")) },
    );

    if a.gamma_a.is_enumerated() {
        let burnside = burnside_orbit_count(&a.gamma_a, bip.part_a())?;
        let explicit = orbits_of_configs(&a.gamma_a, bip.part_a())?.len() as u64;
        rec.check(
            "perm_group",
            "burnside-vs-union-find (part A)",
            burnside == explicit,
            format!("Burnside {burnside}, union-find {explicit}"),
        );
    }
    if a.gamma.is_enumerated() && g.n() <= 20 {
        let burnside = burnside_orbit_count(&a.gamma, g.full_mask())?;
        let explicit = orbits_of_configs(&a.gamma, g.full_mask())?.len() as u64;
        rec.check(
            "perm_group",
            "burnside-vs-union-find (all vertices)",
            burnside == explicit,
            format!("Burnside {burnside}, union-find {explicit}"),
        );
    }

    let (Some(basis), Some(man)) = (&a.basis, &a.manifold) else {
        return Ok(());
    };
    let gamma_els = a.gamma.elements_or_generators();
    let invariant = basis.states.iter().all(|st| gamma_els.iter().all(|p| st.is_invariant_under(p)));
    rec.check(
        "ground_space",
        "a1-invariance",
        invariant,
        format!("{} A1 states x {} group elements", basis.r(), gamma_els.len()),
    );

    let generic = basis.combine(&generic_combination(basis.r()));
    let states: Vec<(&str, &SparseState)> = [("generic", Some(&generic)), ("optimum", a.state.as_ref())]
        .into_iter()
        .filter_map(|(k, s)| s.map(|s| (k, s)))
        .collect();
    let stab_els = a.gamma_a.elements_or_generators();
    let mut pair_ok = true;
    let mut worst_intertwiner: f64 = 0.0;
    let mut worst_factor: f64 = 0.0;
    let mut max_rank = 0;
    for (_, psi) in &states {
        let m = coefficient_matrix(psi, bip)?;
        for p in stab_els {
            pair_ok &= is_pair_symmetric(&m, p, bip)?;
            worst_intertwiner = worst_intertwiner.max(intertwiner_residual(&m, p, bip)?);
            worst_factor = worst_factor.max(factorization_residual(psi, p, bip)?);
        }
        max_rank = max_rank.max(schmidt(&m, cfg.rank_tol)?.rank);
    }
    rec.check("entangle", "pair-orbit-constancy", pair_ok, format!("{} stabilizer elements", stab_els.len()));
    rec.check(
        "entangle",
        "intertwiner",
        worst_intertwiner <= SYMMETRY_TOL,
        format!("max residual {worst_intertwiner:.3e}"),
    );
    rec.check(
        "entangle",
        "unitary-factorization",
        worst_factor <= SYMMETRY_TOL,
        format!("max residual {worst_factor:.3e}"),
    );

    if let (Some(est), Some(b)) = (&a.rank, &a.bounds) {
        rec.check("bounds", "seed-agreement", est.agreed, format!("ranks {:?}", est.ranks));
        let po = pair_orbits(&a.gamma_a, bip)?;
        let cap = po.orbit_count.min(1 << bip.a_size());
        rec.check(
            "bounds",
            "omega-range",
            est.omega_cap >= 1 && est.omega_cap <= cap,
            format!("Omega_A {} within [1, {cap}]", est.omega_cap),
        );
        rec.check(
            "bounds",
            "schmidt-rank-cap",
            max_rank <= est.omega_cap,
            format!("rank {max_rank} <= Omega_A {}", est.omega_cap),
        );
        if let Some(s) = a.entropy() {
            rec.check(
                "bounds",
                "validity",
                s <= b.combined_bound_nats + BOUND_SLACK,
                format!("S {s:.12} <= combined {:.12}", b.combined_bound_nats),
            );
        }
        if a.gamma_a.is_abelian() {
            match abelian_schur_sum(&a.gamma_a, bip) {
                Some(exact) => rec.check(
                    "bounds",
                    "abelian-schur-sum",
                    exact == est.omega_cap as u64,
                    format!("Omega_A {} vs character sum {exact}", est.omega_cap),
                ),
                None => rec.info("bounds", "abelian-schur-sum", "not applicable (group not tabulated)".into()),
            }
            if let Some(w) = a.burnside_omega {
                rec.info(
                    "bounds",
                    "omega-vs-orbit-count",
                    format!("Omega_A {} {} omega_A {w}", est.omega_cap, if est.omega_cap as u64 == w { "=" } else { "!=" }),
                );
            }
        }
    }

    if let (Some(spec), Some(s)) = (spec, a.entropy()) {
        let n = g.n();
        match spec.kind {
            FamilyKind::Cycle if n % 2 == 0 => {
                let r = cn_reference(n)?;
                rec.check("analytic_families", "cycle-entropy", (s - r.exact_entropy_nats).abs() <= 1e-12, format!("S {s:.15}"));
                rec.check(
                    "analytic_families",
                    "cycle-degeneracy-tight",
                    man.degeneracy() == 2 && a.bounds.as_ref().is_some_and(|b| (b.combined_bound_nats - s).abs() <= 1e-12),
                    format!("d = {}", man.degeneracy()),
                );
                if let Some(w) = a.burnside_omega {
                    let kind = if n % 4 == 0 { "formula" } else { "formula-vs-enumeration (n = 2 mod 4)" };
                    rec.check("analytic_families", "cycle-omega", w == r.omega_a, format!("{kind}: closed form {}, Burnside {w}", r.omega_a));
                }
            }
            FamilyKind::Complete if n % 2 == 0 => {
                let r = kn_reference(n)?;
                rec.check(
                    "analytic_families",
                    "complete-entropy",
                    (s - r.exact_entropy_nats).abs() <= 1e-10,
                    format!("S {s:.15}, closed form {:.15}", r.exact_entropy_nats),
                );
                if let Some(est) = &a.rank {
                    rec.check(
                        "analytic_families",
                        "complete-omega",
                        est.omega_cap == n / 2 + 1,
                        format!("Omega_A {} (expected {})", est.omega_cap, n / 2 + 1),
                    );
                }
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn verify(cfg: &VerifyConfig) -> Result<VerifySummary> {
    let graphs = corpus(cfg)?;
    let seed = cfg.analysis.seed;
    let mut checks = Vec::new();
    for (i, (label, graph, spec)) in graphs.iter().enumerate() {
        let mut rec = Recorder {
            checks: Vec::new(),
            graph: label,
            seed,
        };
        match Analysis::run(graph.clone(), spec.as_ref(), &cfg.analysis) {
            Ok(mut a) => {
                if cfg.inject_fault && i == 0 {
                    if let Some(bad) = broken_generator(graph) {
                        let mut gens = a.gamma.generators().to_vec();
                        gens.push(bad);
                        a.gamma = a.gamma.clone().with_generators(gens);
                    }
                }
                if let Err(e) = check_graph(&mut rec, &a, spec.as_ref(), &cfg.analysis) {
                    rec.check("cli_report", "checks", false, e.to_string());
                }
            }
            Err(e) => rec.check("cli_report", "pipeline", false, e.to_string()),
        }
        checks.extend(rec.checks);
    }
    let failed = checks.iter().filter(|c| !c.passed && !c.informational).count();
    Ok(VerifySummary {
        seed,
        graphs: graphs.len(),
        checks,
        failed,
    })
}
