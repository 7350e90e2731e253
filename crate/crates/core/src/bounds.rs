//! Upper bounds on the balanced-cut entanglement of admissible ground states.
//!
//! The degeneracy bound is `log min(2^{⌊n/2⌋}, d)`. The automorphism bound is
//! `log Ω_A`, where `Ω_A` is the largest rank of a matrix that is constant on
//! the diagonal `(α, β)`-orbits of the bipartition stabilizer. Every
//! admissible coefficient matrix is such a matrix, and a random one attains
//! the maximal rank with probability 1.

use nalgebra::DMatrix;
use petgraph::unionfind::UnionFind;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::entangle::numerical_rank;
use crate::error::{Error, Result};
use crate::ground_space::GroundManifold;
use crate::perm_group::{apply_perm, orbits_of_configs, Bipartition, PermGroup, Permutation};
use crate::seeding;

/// Largest pair space `2^{|A|+|B|}` handled by [`pair_orbits`].
pub const PAIR_SPACE_BITS: usize = 24;
/// Number of seeds for the generic rank unless configured otherwise.
pub const DEFAULT_RANK_SEEDS: usize = 5;

/// `log min(2^{⌊n/2⌋}, d)` in nats.
pub fn degeneracy_bound(d: u64, n: usize) -> f64 {
    let hilbert = (n / 2) as f64 * std::f64::consts::LN_2;
    if d == 0 {
        return 0.0;
    }
    hilbert.min((d as f64).ln())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairOrbitPartition {
    pub a_sites: usize,
    pub b_sites: usize,
    /// Row-major over `(α, β)`; ids are dense and numbered by first appearance.
    pub orbit_id: Vec<u32>,
    pub orbit_count: usize,
}

impl PairOrbitPartition {
    pub fn id(&self, alpha: usize, beta: usize) -> u32 {
        self.orbit_id[(alpha << self.b_sites) | beta]
    }
}

/// Orbits of `(α, β) ↦ (g(α), g(β))` for `g ∈ Γ_A`, from the generators.
pub fn pair_orbits(grp: &PermGroup, bip: &Bipartition) -> Result<PairOrbitPartition> {
    let (a, b) = (bip.a_size(), bip.b_size());
    if a + b > PAIR_SPACE_BITS {
        return Err(Error::CapExceeded {
            what: "pair orbit space",
            size: 1u128 << (a + b),
            cap: 1u128 << PAIR_SPACE_BITS,
        });
    }
    let size = 1usize << (a + b);
    let mut uf = UnionFind::<u32>::new(size);
    for g in grp.generators() {
        let (amap, bmap) = bip.induced_maps(g)?;
        for (alpha, &ga) in amap.iter().enumerate() {
            for (beta, &gb) in bmap.iter().enumerate() {
                uf.union(((alpha << b) | beta) as u32, ((ga as usize) << b | gb as usize) as u32);
            }
        }
    }
    let labels = uf.into_labeling();
    let mut dense = vec![u32::MAX; size];
    let mut orbit_id = Vec::with_capacity(size);
    let mut count = 0u32;
    for &root in &labels {
        if dense[root as usize] == u32::MAX {
            dense[root as usize] = count;
            count += 1;
        }
        orbit_id.push(dense[root as usize]);
    }
    Ok(PairOrbitPartition {
        a_sites: a,
        b_sites: b,
        orbit_id,
        orbit_count: count as usize,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntertwinerRankEstimate {
    /// Largest numerical rank over the seeds.
    pub omega_cap: usize,
    pub seeds: Vec<u64>,
    pub ranks: Vec<usize>,
    pub agreed: bool,
}

/// Seeds `master, master + 1, …` for the generic rank.
pub fn rank_seeds(master: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| master.wrapping_add(i)).collect()
}

/// One orbit-constant matrix with values drawn uniformly from `[0.5, 1.5]`.
pub fn random_intertwiner(po: &PairOrbitPartition, seed: u64) -> DMatrix<f64> {
    let mut rng = seeding::stream(seed, seeding::INTERTWINER, 0);
    let values: Vec<f64> = (0..po.orbit_count).map(|_| rng.random_range(0.5..=1.5)).collect();
    DMatrix::from_fn(1 << po.a_sites, 1 << po.b_sites, |alpha, beta| values[po.id(alpha, beta) as usize])
}

/// Numerical rank of a random orbit-constant matrix per seed.
pub fn generic_intertwiner_rank(po: &PairOrbitPartition, seeds: &[u64], rank_tol: f64) -> Result<IntertwinerRankEstimate> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let ranks: Vec<usize> = seeds
        .par_iter()
        .map(|&seed| {
            let m = random_intertwiner(po, seed);
            let (rows, cols) = m.shape();
            let svd = m.try_svd(false, false, f64::EPSILON, 10_000).ok_or(Error::SvdFailed { rows, cols })?;
            let sv: Vec<f64> = svd.singular_values.iter().cloned().collect();
            Ok(numerical_rank(&sv, rank_tol))
        })
        .collect::<Result<_>>()?;
    Ok(IntertwinerRankEstimate {
        omega_cap: *ranks.iter().max().unwrap(),
        agreed: ranks.iter().all(|&r| r == ranks[0]),
        seeds: seeds.to_vec(),
        ranks,
    })
}

/// Largest `e^k` candidate table tried when enumerating characters.
const CHARACTER_SEARCH_CAP: u64 = 1 << 16;
/// Largest group for which characters are enumerated.
const CHARACTER_GROUP_CAP: usize = 4096;

fn element_order(g: &Permutation) -> u64 {
    let mut p = g.clone();
    let mut k = 1;
    while !p.is_identity() {
        p = p.compose(g);
        k += 1;
    }
    k
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All characters of an abelian group as exponent tables: `χ(g) = ζ^{t[g]}`
/// with `ζ = e^{2πi/e}` for the exponent `e`, indexed like `elements`.
fn characters(elements: &[Permutation], gens: &[Permutation]) -> Option<Vec<Vec<u64>>> {
    let exponent = gens.iter().map(element_order).fold(1, |acc, o| acc / gcd(acc, o) * o);
    let candidates = exponent.checked_pow(gens.len() as u32)?;
    if candidates > CHARACTER_SEARCH_CAP {
        return None;
    }
    let index = |p: &Permutation| elements.binary_search(p).ok();
    let identity = index(&Permutation::identity(elements[0].degree()))?;
    let mut out = Vec::new();
    for code in 0..candidates {
        let t: Vec<u64> = (0..gens.len()).map(|i| code / exponent.pow(i as u32) % exponent).collect();
        let mut val = vec![u64::MAX; elements.len()];
        val[identity] = 0;
        let mut queue = std::collections::VecDeque::from([identity]);
        let mut consistent = true;
        'bfs: while let Some(h) = queue.pop_front() {
            for (g, &tg) in gens.iter().zip(&t) {
                let q = index(&g.compose(&elements[h]))?;
                let v = (val[h] + tg) % exponent;
                if val[q] == u64::MAX {
                    val[q] = v;
                    queue.push_back(q);
                } else if val[q] != v {
                    consistent = false;
                    break 'bfs;
                }
            }
        }
        if consistent {
            out.push(val);
        }
    }
    (out.len() == elements.len()).then_some(out)
}

/// Exact `Σ_χ min(m_χ^A, m_χ^B)` for an enumerated abelian `Γ_A`, where the
/// multiplicity of `χ` in the permutation representation on one side is the
/// number of orbits whose stabilizer lies in `ker χ`. `None` if `Γ_A` is not
/// enumerated, not abelian, or too large to tabulate.
pub fn abelian_schur_sum(grp: &PermGroup, bip: &Bipartition) -> Option<u64> {
    let elements = grp.elements().ok()?;
    if !grp.is_abelian() || elements.len() > CHARACTER_GROUP_CAP {
        return None;
    }
    let gens: Vec<Permutation> = grp.generators().iter().filter(|g| !g.is_identity()).cloned().collect();
    let chars = characters(elements, &gens)?;
    let stabilizers = |mask: u64| -> Option<Vec<Vec<usize>>> {
        let orbits = orbits_of_configs(grp, mask).ok()?;
        Some(
            orbits
                .iter()
                .map(|o| (0..elements.len()).filter(|&i| apply_perm(&elements[i], o[0]) == o[0]).collect())
                .collect(),
        )
    };
    let stab_a = stabilizers(bip.part_a())?;
    let stab_b = stabilizers(bip.part_b())?;
    let multiplicity = |chi: &[u64], stabs: &[Vec<usize>]| stabs.iter().filter(|s| s.iter().all(|&i| chi[i] == 0)).count() as u64;
    Some(chars.iter().map(|chi| multiplicity(chi, &stab_a).min(multiplicity(chi, &stab_b))).sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub degeneracy_bound_nats: f64,
    pub automorphism_bound_nats: f64,
    pub combined_bound_nats: f64,
    pub degeneracy_bound_bits: f64,
    pub automorphism_bound_bits: f64,
    pub combined_bound_bits: f64,
    pub omega_cap: usize,
    /// Orbit count of `Γ_A` on A-side configurations, when enumerable.
    pub burnside_omega: Option<u64>,
    /// Whether `Γ_A` is abelian; `None` when it was not enumerated.
    pub abelian: Option<bool>,
    pub regime: String,
    pub seeds: Vec<u64>,
    pub ranks: Vec<usize>,
    pub seeds_agreed: bool,
    pub method: String,
}

pub const RANK_METHOD: &str = "generic-intertwiner-rank";

pub fn regime(d: u64, n: usize) -> &'static str {
    if (n / 2) < 64 && d < 1u64 << (n / 2) {
        "degeneracy-limited"
    } else {
        "hilbert-limited"
    }
}

pub fn assemble_bounds(
    man: &GroundManifold,
    omega: &IntertwinerRankEstimate,
    burnside: Option<u64>,
    abelian: Option<bool>,
    n: usize,
) -> BoundReport {
    let d = man.degeneracy() as u64;
    let deg = degeneracy_bound(d, n);
    let auto = (omega.omega_cap.max(1) as f64).ln();
    let combined = deg.min(auto);
    let bits = |x: f64| x / std::f64::consts::LN_2;
    BoundReport {
        degeneracy_bound_nats: deg,
        automorphism_bound_nats: auto,
        combined_bound_nats: combined,
        degeneracy_bound_bits: bits(deg),
        automorphism_bound_bits: bits(auto),
        combined_bound_bits: bits(combined),
        omega_cap: omega.omega_cap,
        burnside_omega: burnside,
        abelian,
        regime: regime(d, n).to_string(),
        seeds: omega.seeds.clone(),
        ranks: omega.ranks.clone(),
        seeds_agreed: omega.agreed,
        method: RANK_METHOD.to_string(),
    }
}
