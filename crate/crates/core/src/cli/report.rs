//! Serializable analysis report and its JSON, CSV and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::Result;
use crate::families::FamilyReference;

use super::analysis::Analysis;
use super::sweep::SweepRow;
use super::{AnalysisConfig, LogBase};

pub const SCHEMA_VERSION: u32 = 1;
/// Largest spectrum kept in reports; the rest is summed into a remainder.
pub const SPECTRUM_LIMIT: usize = 64;
/// Ground configurations are listed only up to this degeneracy.
pub const CONFIG_LIST_LIMIT: usize = 4096;

pub const STATUS_EXACT: &str = "exact (single symmetric ground state)";
pub const STATUS_LOWER_BOUND: &str = "lower bound on S_max, certified <= combined upper bound";

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub source: String,
    pub n: usize,
    pub m: usize,
    pub part_a: Vec<usize>,
    pub part_b: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub method: String,
    pub aut_order: String,
    pub aut_order_exact: bool,
    pub aut_enumerated: bool,
    pub aut_generators: Vec<String>,
    pub stabilizer_order: String,
    pub stabilizer_enumerated: bool,
    pub stabilizer_generators: Vec<String>,
    pub stabilizer_abelian: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroundSummary {
    pub maxcut: u32,
    pub ground_energy: i64,
    pub degeneracy: usize,
    pub r: usize,
    pub orbit_sizes: Vec<usize>,
    /// Ground configurations as bit masks (bit `i` set means spin up on `i`).
    pub configs: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSummary {
    pub entropy_nats: f64,
    pub entropy_bits: f64,
    pub rank: usize,
    /// Largest Schmidt coefficients, descending.
    pub schmidt_coeffs: Vec<f64>,
    /// Sum of the coefficients left out of `schmidt_coeffs`.
    pub remainder_mass: f64,
    pub total_coeffs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimumSummary {
    /// `[re, im]` per A1 basis state.
    pub coeffs: Vec<[f64; 2]>,
    pub entropy_nats: f64,
    pub entropy_bits: f64,
    pub restarts_used: usize,
    pub converged: bool,
    pub status: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Unavailable {
    pub section: String,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub version: String,
    pub seed: u64,
    pub config: AnalysisConfig,
    pub graph: GraphSummary,
    pub groups: GroupSummary,
    pub ground: Option<GroundSummary>,
    pub schmidt: Option<SpectrumSummary>,
    pub optimum: Option<OptimumSummary>,
    pub bounds: Option<BoundReport>,
    pub reference: Option<FamilyReference>,
    pub unavailable: Vec<Unavailable>,
    /// Wall-clock milliseconds per stage; the only nondeterministic field.
    pub timing: BTreeMap<String, f64>,
}

impl Report {
    pub fn from_analysis(a: &Analysis, source: &str, cfg: &AnalysisConfig) -> Report {
        let names = |gens: &[crate::perm_group::Permutation]| gens.iter().map(|g| g.to_string()).collect();
        let ground = a.manifold.as_ref().map(|man| GroundSummary {
            maxcut: man.maxcut,
            ground_energy: man.ground_energy,
            degeneracy: man.degeneracy(),
            r: man.r(),
            orbit_sizes: man.orbit_sizes(),
            configs: (man.degeneracy() <= CONFIG_LIST_LIMIT).then(|| man.configs.iter().map(|s| s.0).collect()),
        });
        let schmidt = a.schmidt.as_ref().map(|sd| {
            let kept = sd.schmidt_coeffs.len().min(SPECTRUM_LIMIT);
            SpectrumSummary {
                entropy_nats: sd.entropy,
                entropy_bits: sd.entropy_bits(),
                rank: sd.rank,
                schmidt_coeffs: sd.schmidt_coeffs[..kept].to_vec(),
                remainder_mass: sd.schmidt_coeffs[kept..].iter().sum(),
                total_coeffs: sd.schmidt_coeffs.len(),
            }
        });
        let optimum = a.optimum.as_ref().map(|opt| OptimumSummary {
            coeffs: opt.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            entropy_nats: opt.entropy,
            entropy_bits: opt.entropy / std::f64::consts::LN_2,
            restarts_used: opt.restarts_used,
            converged: opt.converged,
            status: if opt.coeffs.len() == 1 { STATUS_EXACT } else { STATUS_LOWER_BOUND }.to_string(),
        });
        Report {
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: cfg.seed,
            config: cfg.clone(),
            graph: GraphSummary {
                source: source.to_string(),
                n: a.graph.n(),
                m: a.graph.m(),
                part_a: a.bip.a_vertices().to_vec(),
                part_b: a.bip.b_vertices().to_vec(),
            },
            groups: GroupSummary {
                method: a.group_method.to_string(),
                aut_order: a.gamma.order().to_string(),
                aut_order_exact: a.gamma.order_is_exact(),
                aut_enumerated: a.gamma.is_enumerated(),
                aut_generators: names(a.gamma.generators()),
                stabilizer_order: a.gamma_a.order().to_string(),
                stabilizer_enumerated: a.gamma_a.is_enumerated(),
                stabilizer_generators: names(a.gamma_a.generators()),
                stabilizer_abelian: a.gamma_a.is_abelian(),
            },
            ground,
            schmidt,
            optimum,
            bounds: a.bounds.clone(),
            reference: a.reference.clone(),
            unavailable: a
                .unavailable
                .iter()
                .map(|(s, r)| Unavailable {
                    section: s.clone(),
                    reason: r.clone(),
                })
                .collect(),
            timing: a.timing.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self, base: LogBase) -> Result<String> {
        super::sweep::to_csv(&[SweepRow::from_report(self, base)])
    }

    pub fn to_text(&self, base: LogBase) -> String {
        let unit = base.unit();
        let v = |nats: f64| base.convert(nats);
        let mut t = String::new();
        let g = &self.graph;
        let _ = writeln!(t, "graph         {} (n = {}, m = {})", g.source, g.n, g.m);
        let _ = writeln!(t, "part A        {:?}", g.part_a);
        let gr = &self.groups;
        let _ = writeln!(t, "|Aut(G)|      {}{}", gr.aut_order, if gr.aut_order_exact { "" } else { " (lower bound)" });
        let _ = writeln!(
            t,
            "|Gamma_A|     {}{}",
            gr.stabilizer_order,
            if gr.stabilizer_abelian { " (abelian)" } else { "" }
        );
        if let Some(gs) = &self.ground {
            let _ = writeln!(t, "max cut       {} (ground energy {})", gs.maxcut, gs.ground_energy);
            let _ = writeln!(t, "degeneracy    {}", gs.degeneracy);
            let _ = writeln!(t, "A1 states     {}", gs.r);
        }
        if let Some(sd) = &self.schmidt {
            let _ = writeln!(t, "entropy       {:.12} {unit} (Schmidt rank {})", v(sd.entropy_nats), sd.rank);
        }
        if let Some(opt) = &self.optimum {
            let _ = writeln!(t, "optimizer     {}", opt.status);
        }
        if let Some(b) = &self.bounds {
            let _ = writeln!(t, "deg bound     {:.12} {unit}", v(b.degeneracy_bound_nats));
            let _ = writeln!(t, "auto bound    {:.12} {unit} (Omega_A = {})", v(b.automorphism_bound_nats), b.omega_cap);
            let _ = writeln!(t, "combined      {:.12} {unit} ({})", v(b.combined_bound_nats), b.regime);
            if let Some(w) = b.burnside_omega {
                let _ = writeln!(t, "omega_A       {w}");
            }
        }
        if let Some(r) = &self.reference {
            let _ = writeln!(t, "reference     {:.12} {unit} ({} closed form)", v(r.exact_entropy_nats), r.family);
        }
        for u in &self.unavailable {
            let _ = writeln!(t, "unavailable   {}: {}", u.section, u.reason);
        }
        t
    }
}
