//! Vertex permutations, automorphism groups and their action on spin
//! configurations.
//!
//! Groups come out of an individualization-refinement search (see
//! [`search`]) that records a base and one transversal per base point, so the
//! order is always exact and the element list is a product of transversals.
//! The bipartition stabilizer is searched directly as the automorphism group
//! of the 2-colored graph instead of being filtered out of the full group.

mod family;
mod search;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::graph::{full_mask, Graph};

pub use family::{family_automorphism_group, family_bipartition_stabilizer};

/// Default limit on the number of group elements materialized.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// Largest number of masked configurations [`orbits_of_configs`] will index.
pub const ORBIT_CONFIG_CAP: u64 = 1 << 20;

/// A bijection of `0..n`; `image(i)` is g(i).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u8).collect(),
        }
    }

    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > crate::graph::MAX_VERTICES {
            return Err(Error::InvalidPermutation(format!("degree {n} above 64")));
        }
        let mut seen = 0u64;
        for &x in images {
            if x >= n || seen >> x & 1 == 1 {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen |= 1 << x;
        }
        Ok(Self {
            images: images.iter().map(|&x| x as u8).collect(),
        })
    }

    /// Transposition of `a` and `b` on `n` points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// Image of a vertex set.
    pub fn map_mask(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.images[i];
        }
        out
    }

    pub fn stabilizes(&self, mask: u64) -> bool {
        self.map_mask(mask) == mask
    }

    /// Whether `{(g(u), g(v)) : (u, v) ∈ E} = E`.
    pub fn preserves_edges(&self, graph: &Graph) -> bool {
        self.degree() == graph.n()
            && (0..graph.n()).all(|v| self.map_mask(graph.neighbors(v)) == graph.neighbors(self.image(v)))
    }

    /// Whether `self` and `other` commute.
    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Cycle lengths of the permutation restricted to `mask`.
    fn cycles_on(&self, mask: u64) -> Result<usize> {
        if !self.stabilizes(mask) {
            return Err(Error::NotStabilizing { mask });
        }
        let mut unseen = mask;
        let mut cycles = 0;
        while unseen != 0 {
            let start = unseen.trailing_zeros() as usize;
            let mut v = start;
            loop {
                unseen &= !(1u64 << v);
                v = self.image(v);
                if v == start {
                    break;
                }
            }
            cycles += 1;
        }
        Ok(cycles)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One-line image array, e.g. `g: 1 0 3 2`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g:")?;
        for x in &self.images {
            write!(f, " {x}")?;
        }
        Ok(())
    }
}

/// A spin configuration: bit `i` set means `s_i = +1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct SpinConfig(pub u64);

impl SpinConfig {
    pub fn spin(self, i: usize) -> i32 {
        if self.0 >> i & 1 == 1 {
            1
        } else {
            -1
        }
    }

    /// Global spin flip on `n` sites.
    pub fn flipped(self, n: usize) -> SpinConfig {
        SpinConfig(!self.0 & full_mask(n))
    }
}

/// Site permutation of a configuration: the spin on site `i` moves to `g(i)`.
pub fn apply_perm(p: &Permutation, s: SpinConfig) -> SpinConfig {
    SpinConfig(p.map_mask(s.0))
}

/// Number of cycles of `p` on the vertices of `mask`; `p` fixes exactly
/// `2^cycles` configurations supported there.
pub fn cycle_count_on(p: &Permutation, mask: u64) -> Result<usize> {
    p.cycles_on(mask)
}

/// Balanced split `V = A ⊔ B` with `|A| = ⌊n/2⌋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    n: usize,
    part_a: u64,
    a_vertices: Vec<usize>,
    b_vertices: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, a_vertices: &[usize]) -> Result<Self> {
        if n == 0 || n > crate::graph::MAX_VERTICES {
            return Err(Error::InvalidBipartition(format!("unsupported vertex count {n}")));
        }
        let mut part_a = 0u64;
        for &v in a_vertices {
            if v >= n {
                return Err(Error::InvalidBipartition(format!("vertex {v} out of range")));
            }
            if part_a >> v & 1 == 1 {
                return Err(Error::InvalidBipartition(format!("vertex {v} listed twice")));
            }
            part_a |= 1 << v;
        }
        if a_vertices.len() != n / 2 {
            return Err(Error::InvalidBipartition(format!(
                "|A| = {} but a balanced split of {n} vertices needs {}",
                a_vertices.len(),
                n / 2
            )));
        }
        Ok(Self::from_mask(n, part_a))
    }

    /// `A = {0, …, ⌊n/2⌋ − 1}`.
    pub fn first_half(n: usize) -> Self {
        Self::from_mask(n, full_mask(n / 2))
    }

    fn from_mask(n: usize, part_a: u64) -> Self {
        let part_b = !part_a & full_mask(n);
        Self {
            n,
            part_a,
            a_vertices: bits(part_a),
            b_vertices: bits(part_b),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn part_a(&self) -> u64 {
        self.part_a
    }

    pub fn part_b(&self) -> u64 {
        !self.part_a & full_mask(self.n)
    }

    pub fn a_vertices(&self) -> &[usize] {
        &self.a_vertices
    }

    pub fn b_vertices(&self) -> &[usize] {
        &self.b_vertices
    }

    pub fn a_size(&self) -> usize {
        self.a_vertices.len()
    }

    pub fn b_size(&self) -> usize {
        self.b_vertices.len()
    }

    /// Row index α: the A-spins of `s` packed densely in ascending vertex order.
    pub fn restrict_a(&self, s: SpinConfig) -> usize {
        pack(&self.a_vertices, s.0)
    }

    /// Column index β.
    pub fn restrict_b(&self, s: SpinConfig) -> usize {
        pack(&self.b_vertices, s.0)
    }

    /// Reassembles a configuration from its two restrictions.
    pub fn join(&self, alpha: usize, beta: usize) -> SpinConfig {
        SpinConfig(unpack(&self.a_vertices, alpha) | unpack(&self.b_vertices, beta))
    }

    /// Action of `p ∈ Γ_A` on packed side configurations: `(α ↦ g(α), β ↦ g(β))`.
    pub fn induced_maps(&self, p: &Permutation) -> Result<(Vec<u32>, Vec<u32>)> {
        if !p.stabilizes(self.part_a) {
            return Err(Error::NotStabilizing { mask: self.part_a });
        }
        Ok((side_map(p, &self.a_vertices), side_map(p, &self.b_vertices)))
    }
}

fn side_map(p: &Permutation, vertices: &[usize]) -> Vec<u32> {
    (0..1usize << vertices.len())
        .map(|x| pack(vertices, p.map_mask(unpack(vertices, x))) as u32)
        .collect()
}

fn bits(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

pub(crate) fn pack(vertices: &[usize], word: u64) -> usize {
    vertices
        .iter()
        .enumerate()
        .fold(0usize, |acc, (k, &v)| acc | (((word >> v) & 1) as usize) << k)
}

pub(crate) fn unpack(vertices: &[usize], packed: usize) -> u64 {
    vertices
        .iter()
        .enumerate()
        .fold(0u64, |acc, (k, &v)| acc | (((packed >> k) & 1) as u64) << v)
}

/// A permutation group given by generators, with the full element list when
/// the order is at most the enumeration cap.
#[derive(Clone, Debug)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Permutation>,
    elements: Option<Vec<Permutation>>,
    order: BigUint,
    order_exact: bool,
}

impl PermGroup {
    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            generators: Vec::new(),
            elements: Some(vec![Permutation::identity(n)]),
            order: BigUint::from(1u8),
            order_exact: true,
        }
    }

    /// Builds a group from a base's transversals: every element factors
    /// uniquely as `u_0 ∘ u_1 ∘ … ∘ u_{k-1}` with `u_i` from level `i`.
    pub(crate) fn from_transversals(
        n: usize,
        generators: Vec<Permutation>,
        transversals: Vec<Vec<Permutation>>,
        cap: usize,
    ) -> Self {
        let order = transversals
            .iter()
            .fold(BigUint::from(1u8), |acc, t| acc * BigUint::from(t.len()));
        let elements = if order <= BigUint::from(cap) {
            let mut elements = vec![Permutation::identity(n)];
            for level in transversals.iter().rev() {
                let mut next = Vec::with_capacity(elements.len() * level.len());
                for u in level {
                    for h in &elements {
                        next.push(u.compose(h));
                    }
                }
                elements = next;
            }
            elements.sort();
            Some(elements)
        } else {
            None
        };
        Self {
            n,
            generators,
            elements,
            order,
            order_exact: true,
        }
    }

    /// Builds a group from generators, enumerating the closure when it has at
    /// most `cap` elements. `known_order` is used when enumeration stops at
    /// the cap; without it the order is reported as a lower bound.
    pub fn from_generators(
        n: usize,
        generators: Vec<Permutation>,
        known_order: Option<BigUint>,
        cap: usize,
    ) -> Self {
        let generators: Vec<Permutation> = generators.into_iter().filter(|g| !g.is_identity()).collect();
        let skip_closure = known_order.as_ref().is_some_and(|o| *o > BigUint::from(cap));
        let closure = if skip_closure { None } else { closure(n, &generators, cap) };
        match closure {
            Some(elements) => Self {
                n,
                order: BigUint::from(elements.len()),
                order_exact: true,
                generators,
                elements: Some(elements),
            },
            None => Self {
                n,
                order_exact: known_order.is_some(),
                order: known_order.unwrap_or_else(|| BigUint::from(cap)),
                generators,
                elements: None,
            },
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// False when the order is only a lower bound.
    pub fn order_is_exact(&self) -> bool {
        self.order_exact
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    pub fn elements(&self) -> Result<&[Permutation]> {
        self.elements.as_deref().ok_or(Error::GroupNotEnumerated)
    }

    /// Generators when nothing better is available, otherwise every element.
    /// Invariance checks hold for the whole group iff they hold for these.
    pub fn elements_or_generators(&self) -> &[Permutation] {
        self.elements.as_deref().unwrap_or(&self.generators)
    }

    /// A group is abelian iff its generators commute pairwise.
    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    pub fn contains(&self, p: &Permutation) -> Option<bool> {
        self.elements.as_ref().map(|els| els.binary_search(p).is_ok())
    }

    /// Replaces the generator list; used to build deliberately broken groups
    /// for negative-control checks.
    pub fn with_generators(mut self, generators: Vec<Permutation>) -> Self {
        self.generators = generators;
        self
    }
}

fn closure(n: usize, generators: &[Permutation], cap: usize) -> Option<Vec<Permutation>> {
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(q);
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    Some(elements)
}

/// Γ = Aut(G).
pub fn automorphism_group(graph: &Graph, cap: usize) -> PermGroup {
    search::automorphisms(graph, &vec![0; graph.n()], cap)
}

/// Γ_A = {g ∈ Γ : g(A) = A}, found as the automorphism group of the graph with
/// A and B colored differently.
pub fn bipartition_stabilizer(graph: &Graph, bip: &Bipartition, cap: usize) -> Result<PermGroup> {
    if bip.n() != graph.n() {
        return Err(Error::InvalidBipartition(format!(
            "bipartition on {} vertices for a graph on {}",
            bip.n(),
            graph.n()
        )));
    }
    let colors: Vec<u32> = (0..graph.n()).map(|v| (bip.part_a() >> v & 1 == 0) as u32).collect();
    Ok(search::automorphisms(graph, &colors, cap))
}

/// Burnside count `(1/|G|) Σ_g 2^{cycles(g, mask)}` of the orbits on the
/// configurations supported on `mask`.
pub fn burnside_orbit_count(grp: &PermGroup, mask: u64) -> Result<u64> {
    let elements = grp.elements()?;
    let mut sum: u128 = 0;
    for g in elements {
        sum += 1u128 << cycle_count_on(g, mask)?;
    }
    let order = elements.len() as u128;
    if sum % order != 0 {
        return Err(Error::BurnsideDivisibility { sum, order });
    }
    Ok((sum / order) as u64)
}

/// Explicit orbit partition of the configurations on `mask`, via union-find
/// over generator moves. Orbits are sorted by their smallest member and each
/// orbit lists configurations in ascending order.
pub fn orbits_of_configs(grp: &PermGroup, mask: u64) -> Result<Vec<Vec<SpinConfig>>> {
    let vertices = bits(mask);
    if vertices.len() > 20 {
        return Err(Error::CapExceeded {
            what: "masked configurations",
            size: 1u128 << vertices.len(),
            cap: ORBIT_CONFIG_CAP as u128,
        });
    }
    let size = 1usize << vertices.len();
    let mut uf = UnionFind::<u32>::new(size);
    for g in grp.generators() {
        if !g.stabilizes(mask) {
            return Err(Error::NotStabilizing { mask });
        }
        let map = side_map(g, &vertices);
        for (x, &y) in map.iter().enumerate() {
            uf.union(x as u32, y);
        }
    }
    let labels = uf.into_labeling();
    let mut by_root: Vec<Vec<SpinConfig>> = vec![Vec::new(); size];
    for (x, &root) in labels.iter().enumerate() {
        by_root[root as usize].push(SpinConfig(unpack(&vertices, x)));
    }
    let mut orbits: Vec<Vec<SpinConfig>> = by_root.into_iter().filter(|o| !o.is_empty()).collect();
    for o in &mut orbits {
        o.sort();
    }
    orbits.sort();
    Ok(orbits)
}
