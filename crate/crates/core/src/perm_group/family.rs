//! Closed-form generators for cycles and complete graphs.
//!
//! Cycle: rotation and reflection generate D_n; the half-chain split is
//! stabilized only by the reflection reversing A. Complete graph: adjacent
//! transpositions generate S_n, and those within each side generate
//! S_|A| × S_|B|. Every emitted generator is checked against the graph.

use num_bigint::BigUint;

use super::{Bipartition, PermGroup, Permutation};
use crate::error::{Error, Result};
use crate::graph::{FamilyKind, FamilySpec, Graph};

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::from(1u8), |acc, i| acc * BigUint::from(i))
}

fn checked(graph: &Graph, gens: &[Permutation], stabilize: Option<u64>) -> Result<()> {
    for (index, g) in gens.iter().enumerate() {
        if !g.preserves_edges(graph) {
            return Err(Error::NotAutomorphism {
                index,
                reason: format!("{g} does not preserve the edge set"),
            });
        }
        if let Some(mask) = stabilize {
            if !g.stabilizes(mask) {
                return Err(Error::NotAutomorphism {
                    index,
                    reason: format!("{g} moves part A"),
                });
            }
        }
    }
    Ok(())
}

fn adjacent_transpositions(n: usize, vertices: &[usize]) -> Vec<Permutation> {
    vertices
        .windows(2)
        .map(|w| Permutation::transposition(n, w[0], w[1]))
        .collect()
}

/// Γ for a generated cycle or complete graph; `None` for other families.
pub fn family_automorphism_group(spec: &FamilySpec, graph: &Graph, cap: usize) -> Option<Result<PermGroup>> {
    let n = graph.n();
    let (gens, order) = match spec.kind {
        FamilyKind::Cycle => {
            let rotation: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
            let gens = vec![
                Permutation::from_images(&rotation).ok()?,
                Permutation::from_images(&reflection).ok()?,
            ];
            (gens, BigUint::from(2 * n))
        }
        FamilyKind::Complete => {
            let all: Vec<usize> = (0..n).collect();
            (adjacent_transpositions(n, &all), factorial(n))
        }
        _ => return None,
    };
    Some(checked(graph, &gens, None).map(|_| PermGroup::from_generators(n, gens, Some(order), cap)))
}

/// Γ_A for a generated complete graph (any split) or cycle (half-chain split
/// `A = {0..⌊n/2⌋-1}` only); `None` otherwise.
pub fn family_bipartition_stabilizer(
    spec: &FamilySpec,
    graph: &Graph,
    bip: &Bipartition,
    cap: usize,
) -> Option<Result<PermGroup>> {
    let n = graph.n();
    let (gens, order) = match spec.kind {
        FamilyKind::Cycle if *bip == Bipartition::first_half(n) => {
            let k = bip.a_size();
            let reflection: Vec<usize> = (0..n).map(|i| (k + n - 1 - i) % n).collect();
            (vec![Permutation::from_images(&reflection).ok()?], BigUint::from(2u8))
        }
        FamilyKind::Complete => {
            let mut gens = adjacent_transpositions(n, bip.a_vertices());
            gens.extend(adjacent_transpositions(n, bip.b_vertices()));
            (gens, factorial(bip.a_size()) * factorial(bip.b_size()))
        }
        _ => return None,
    };
    Some(checked(graph, &gens, Some(bip.part_a())).map(|_| PermGroup::from_generators(n, gens, Some(order), cap)))
}
