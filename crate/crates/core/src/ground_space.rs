//! Ground manifold of `H = Σ_{(i,j)∈E} σ^z_i σ^z_j`.
//!
//! Ground configurations are the maximum cuts. They are found by an
//! exhaustive Gray-code scan of all `2^n` masks, split into contiguous index
//! ranges that are reduced in parallel.
//!
//! Counting identity: with `S` the set of +1 sites, the cut value is
//! `Σ_{v∈S} popcount(adj[v] & !S)`; each crossing edge has exactly one
//! endpoint in `S`, so it is counted once. Flipping site `v` changes the cut
//! by `(same-side neighbors of v) − (opposite-side neighbors of v)`.

use num_complex::Complex64;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm_group::{apply_perm, PermGroup, Permutation, SpinConfig};

/// Largest vertex count the exhaustive scan accepts.
pub const SCAN_CAP: usize = 28;

const CHUNK_BITS: usize = 14;

/// `E(s) = Σ_{(i,j)∈E} s_i s_j`.
pub fn energy(graph: &Graph, s: SpinConfig) -> i64 {
    graph
        .edges()
        .iter()
        .map(|&(i, j)| (s.spin(i) * s.spin(j)) as i64)
        .sum()
}

/// Number of edges whose endpoints carry opposite spins.
pub fn cut_value(graph: &Graph, s: SpinConfig) -> u32 {
    let outside = !s.0 & graph.full_mask();
    let mut rest = s.0 & graph.full_mask();
    let mut cut = 0;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        cut += (graph.neighbors(v) & outside).count_ones();
    }
    cut
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundManifold {
    pub maxcut: u32,
    /// `m − 2·maxcut`.
    pub ground_energy: i64,
    /// All maximum-cut configurations, ascending.
    pub configs: Vec<SpinConfig>,
    /// Γ-orbits of `configs`, each ascending, ordered by smallest member.
    pub orbits: Vec<Vec<SpinConfig>>,
}

impl GroundManifold {
    pub fn degeneracy(&self) -> usize {
        self.configs.len()
    }

    /// Number of Γ-orbits, the dimension of the symmetric ground sector.
    pub fn r(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

/// Best cut and its configurations over one chunk of Gray-code indices.
fn scan_chunk(graph: &Graph, start: u64, end: u64) -> (u32, Vec<SpinConfig>) {
    let n = graph.n();
    let full = graph.full_mask();
    let adj = graph.adjacency();
    let mut mask = start ^ (start >> 1);
    let mut cut = cut_value(graph, SpinConfig(mask));
    let mut best = cut;
    let mut found = vec![SpinConfig(mask)];
    for t in start + 1..end {
        let v = t.trailing_zeros() as usize;
        debug_assert!(v < n);
        let same = if mask >> v & 1 == 1 { mask } else { !mask & full };
        let same_side = (adj[v] & same).count_ones();
        let other_side = adj[v].count_ones() - same_side;
        cut = cut + same_side - other_side;
        mask ^= 1 << v;
        if cut > best {
            best = cut;
            found.clear();
            found.push(SpinConfig(mask));
        } else if cut == best {
            found.push(SpinConfig(mask));
        }
    }
    (best, found)
}

fn merge(a: (u32, Vec<SpinConfig>), b: (u32, Vec<SpinConfig>)) -> (u32, Vec<SpinConfig>) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            let mut v = a.1;
            v.extend(b.1);
            (a.0, v)
        }
    }
}

/// Exact maximum cut and all optimal configurations.
pub fn max_cut_configs(graph: &Graph) -> Result<(u32, Vec<SpinConfig>)> {
    let n = graph.n();
    if n > SCAN_CAP {
        return Err(Error::CapExceeded {
            what: "exhaustive max-cut scan (vertices)",
            size: n as u128,
            cap: SCAN_CAP as u128,
        });
    }
    let total = 1u64 << n;
    let chunk = 1u64 << CHUNK_BITS.min(n);
    let (best, mut configs) = (0..total / chunk)
        .into_par_iter()
        .map(|c| scan_chunk(graph, c * chunk, (c + 1) * chunk))
        .reduce(|| (0, Vec::new()), merge);
    configs.sort_unstable();
    Ok((best, configs))
}

/// Scans for the ground manifold and splits it into orbits of the group
/// generated by `grp`'s generators.
pub fn enumerate_ground_manifold(graph: &Graph, grp: &PermGroup) -> Result<GroundManifold> {
    let (maxcut, configs) = max_cut_configs(graph)?;
    let orbits = config_orbits(&configs, grp.generators())?;
    Ok(GroundManifold {
        maxcut,
        ground_energy: graph.m() as i64 - 2 * maxcut as i64,
        configs,
        orbits,
    })
}

fn config_orbits(configs: &[SpinConfig], generators: &[Permutation]) -> Result<Vec<Vec<SpinConfig>>> {
    let mut uf = UnionFind::<u32>::new(configs.len());
    for g in generators {
        for (i, &s) in configs.iter().enumerate() {
            let image = apply_perm(g, s);
            let j = configs.binary_search(&image).map_err(|_| Error::NotAutomorphism {
                index: 0,
                reason: format!("{g} maps ground configuration {:#x} outside the manifold", s.0),
            })?;
            uf.union(i as u32, j as u32);
        }
    }
    let labels = uf.into_labeling();
    let mut buckets: Vec<Vec<SpinConfig>> = vec![Vec::new(); configs.len()];
    for (i, &root) in labels.iter().enumerate() {
        buckets[root as usize].push(configs[i]);
    }
    let mut orbits: Vec<Vec<SpinConfig>> = buckets.into_iter().filter(|b| !b.is_empty()).collect();
    orbits.sort();
    Ok(orbits)
}

/// A state as a list of `(configuration, amplitude)` terms.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    pub terms: Vec<(SpinConfig, Complex64)>,
}

impl SparseState {
    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    /// `U(g)|ψ⟩`, with terms re-sorted by configuration.
    pub fn permuted(&self, g: &Permutation) -> SparseState {
        let mut terms: Vec<_> = self.terms.iter().map(|&(s, a)| (apply_perm(g, s), a)).collect();
        terms.sort_by_key(|t| t.0);
        SparseState { terms }
    }

    /// Exact equality of `U(g)|ψ⟩` and `|ψ⟩` as term lists.
    pub fn is_invariant_under(&self, g: &Permutation) -> bool {
        let mut own = self.terms.clone();
        own.sort_by_key(|t| t.0);
        self.permuted(g) == SparseState { terms: own }
    }
}

/// Uniform superpositions over the Γ-orbits of the ground configurations.
#[derive(Clone, Debug)]
pub struct A1Basis {
    pub states: Vec<SparseState>,
}

impl A1Basis {
    pub fn r(&self) -> usize {
        self.states.len()
    }

    /// `Σ_k c_k |A_1^{(k)}⟩`. Orbits are disjoint, so terms never collide.
    pub fn combine(&self, coeffs: &[Complex64]) -> SparseState {
        let mut terms: Vec<(SpinConfig, Complex64)> = self
            .states
            .iter()
            .zip(coeffs)
            .flat_map(|(st, &c)| st.terms.iter().map(move |&(s, a)| (s, a * c)))
            .collect();
        terms.sort_by_key(|t| t.0);
        SparseState { terms }
    }
}

pub fn build_a1_basis(man: &GroundManifold) -> Result<A1Basis> {
    if man.orbits.is_empty() {
        return Err(Error::EmptyManifold);
    }
    let states = man
        .orbits
        .iter()
        .map(|orbit| {
            let amp = Complex64::new(1.0 / (orbit.len() as f64).sqrt(), 0.0);
            SparseState {
                terms: orbit.iter().map(|&s| (s, amp)).collect(),
            }
        })
        .collect();
    Ok(A1Basis { states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_family, FamilySpec};
    use crate::perm_group::{automorphism_group, DEFAULT_ENUMERATION_CAP};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn family(s: &str) -> Graph {
        generate_family(&s.parse::<FamilySpec>().unwrap()).unwrap()
    }

    fn manifold(g: &Graph) -> GroundManifold {
        enumerate_ground_manifold(g, &automorphism_group(g, DEFAULT_ENUMERATION_CAP)).unwrap()
    }

    /// Per-edge cut count, independent of the bitmask identity.
    fn naive_cut(g: &Graph, s: SpinConfig) -> u32 {
        g.edges().iter().filter(|&&(i, j)| s.spin(i) != s.spin(j)).count() as u32
    }

    fn random_graph(seed: u64, n: usize) -> Graph {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Graph::erdos_renyi(n, 0.5, &mut rng).unwrap()
    }

    #[test]
    fn energy_examples() {
        let k2 = family("path:2");
        assert_eq!(energy(&k2, SpinConfig(0b01)), -1);
        let c4 = family("cycle:4");
        assert_eq!(energy(&c4, SpinConfig(0b0101)), -4);
        for g in [c4, family("complete:5"), random_graph(3, 7)] {
            assert_eq!(energy(&g, SpinConfig(g.full_mask())), g.m() as i64);
        }
    }

    #[test]
    fn cut_identity_matches_naive_loop() {
        for seed in 0..10 {
            let g = random_graph(seed, 8);
            for s in 0..256u64 {
                let s = SpinConfig(s);
                assert_eq!(cut_value(&g, s), naive_cut(&g, s));
                assert_eq!(energy(&g, s), g.m() as i64 - 2 * naive_cut(&g, s) as i64);
            }
        }
    }

    #[test]
    fn scan_matches_brute_force() {
        for seed in 0..15 {
            let n = 3 + seed as usize % 14;
            let g = random_graph(seed, n);
            let best = (0..1u64 << n).map(|s| naive_cut(&g, SpinConfig(s))).max().unwrap();
            let expected: Vec<SpinConfig> = (0..1u64 << n)
                .map(SpinConfig)
                .filter(|&s| naive_cut(&g, s) == best)
                .collect();
            let (maxcut, configs) = max_cut_configs(&g).unwrap();
            assert_eq!(maxcut, best);
            assert_eq!(configs, expected);
        }
    }

    #[test]
    fn manifold_examples() {
        let man = manifold(&family("cycle:4"));
        assert_eq!(man.maxcut, 4);
        assert_eq!(man.configs, vec![SpinConfig(0b0101), SpinConfig(0b1010)]);
        assert_eq!(man.r(), 1);

        let man = manifold(&family("complete:4"));
        assert_eq!((man.degeneracy(), man.r()), (6, 1));

        let man = manifold(&family("path:2"));
        assert_eq!((man.maxcut, man.degeneracy(), man.ground_energy), (1, 2, -1));
    }

    #[test]
    fn scan_cap() {
        let g = Graph::new(29, [(0, 1)]).unwrap();
        assert!(matches!(max_cut_configs(&g), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn a1_basis_examples() {
        let basis = build_a1_basis(&manifold(&family("cycle:4"))).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(basis.r(), 1);
        let configs: Vec<_> = basis.states[0].terms.iter().map(|t| t.0).collect();
        assert_eq!(configs, vec![SpinConfig(0b0101), SpinConfig(0b1010)]);
        for (_, a) in &basis.states[0].terms {
            assert!((a - Complex64::new(h, 0.0)).norm() < 1e-15);
        }

        let basis = build_a1_basis(&manifold(&family("complete:4"))).unwrap();
        assert_eq!(basis.states[0].terms.len(), 6);
        for (s, a) in &basis.states[0].terms {
            assert_eq!(s.0.count_ones(), 2);
            assert!((a.re - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        }

        // P_3 has a reflection fixing both ground states: two singleton orbits.
        let basis = build_a1_basis(&manifold(&family("path:3"))).unwrap();
        assert_eq!(basis.r(), 2);
        assert!(basis.states.iter().all(|s| s.terms.len() == 1 && s.terms[0].1.re == 1.0));

        let empty = GroundManifold { maxcut: 0, ground_energy: 0, configs: vec![], orbits: vec![] };
        assert!(matches!(build_a1_basis(&empty), Err(Error::EmptyManifold)));
    }

    #[test]
    fn manifold_invariants() {
        for seed in 0..25 {
            let g = random_graph(500 + seed, 5 + seed as usize % 6);
            let grp = automorphism_group(&g, DEFAULT_ENUMERATION_CAP);
            let man = enumerate_ground_manifold(&g, &grp).unwrap();
            assert_eq!(man.orbits.iter().map(Vec::len).sum::<usize>(), man.degeneracy());
            if g.m() > 0 {
                assert_eq!(man.degeneracy() % 2, 0);
            }
            for s in &man.configs {
                assert!(man.configs.binary_search(&s.flipped(g.n())).is_ok());
            }
            if g.is_bipartite() {
                assert_eq!(man.maxcut as usize, g.m());
            }
            // Every A1 state is fixed by every group element.
            let basis = build_a1_basis(&man).unwrap();
            for p in grp.elements().unwrap() {
                for st in &basis.states {
                    assert!(st.is_invariant_under(p));
                }
                for orbit in &man.orbits {
                    for s in orbit {
                        assert!(orbit.binary_search(&apply_perm(p, *s)).is_ok());
                    }
                }
            }
            // Edge order does not matter.
            let mut edges = g.edges().to_vec();
            edges.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let h = Graph::new(g.n(), edges.into_iter().map(|(u, v)| (v, u))).unwrap();
            assert_eq!(enumerate_ground_manifold(&h, &grp).unwrap(), man);
        }
    }
}
