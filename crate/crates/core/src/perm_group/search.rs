//! Individualization-refinement search for automorphisms of a vertex-colored
//! graph.
//!
//! The left path individualizes a fixed base `b_0, b_1, …` (smallest
//! non-singleton cell, smallest label in it) until the coloring is discrete.
//! For each base level, deepest first, we look for automorphisms that fix
//! `b_0..b_{i-1}` and send `b_i` to each vertex of its cell, skipping targets
//! already reached by the orbit of the generators found so far. The orbit
//! representatives form the transversal of that level.

use super::{PermGroup, Permutation};
use crate::graph::Graph;

struct Refiner<'a> {
    graph: &'a Graph,
    initial: &'a [u32],
}

impl Refiner<'_> {
    fn n(&self) -> usize {
        self.graph.n()
    }

    /// Color refinement to the coarsest equitable partition finer than
    /// `colors`. New colors are ranks of `(color, sorted neighbor colors)`
    /// signatures, so the labels do not depend on vertex names.
    fn refine(&self, colors: &mut [u32]) {
        let n = self.n();
        let mut classes = distinct(colors);
        let mut sigs: Vec<(u32, Vec<u32>, usize)> = Vec::with_capacity(n);
        loop {
            sigs.clear();
            for v in 0..n {
                let mut nb = self.graph.neighbors(v);
                let mut around = Vec::with_capacity(nb.count_ones() as usize);
                while nb != 0 {
                    around.push(colors[nb.trailing_zeros() as usize]);
                    nb &= nb - 1;
                }
                around.sort_unstable();
                sigs.push((colors[v], around, v));
            }
            sigs.sort_unstable();
            let mut rank = 0u32;
            for i in 0..n {
                if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                    rank += 1;
                }
                colors[sigs[i].2] = rank;
            }
            let now = rank as usize + 1;
            if now == classes {
                break;
            }
            classes = now;
        }
    }

    fn individualize(&self, colors: &[u32], v: usize) -> Vec<u32> {
        let mut out = colors.to_vec();
        out[v] = self.n() as u32;
        self.refine(&mut out);
        out
    }

    fn is_automorphism(&self, p: &Permutation) -> bool {
        (0..self.n()).all(|v| self.initial[p.image(v)] == self.initial[v]) && p.preserves_edges(self.graph)
    }

    /// Searches below `right` for a leaf matching the left path from `depth`.
    fn descend(&self, left: &[Vec<u32>], base: &[usize], depth: usize, right: Vec<u32>) -> Option<Permutation> {
        if depth == base.len() {
            let leaf = &left[depth];
            let mut where_right = vec![0usize; self.n()];
            for (u, &c) in right.iter().enumerate() {
                where_right[c as usize] = u;
            }
            let images: Vec<usize> = leaf.iter().map(|&c| where_right[c as usize]).collect();
            let p = Permutation::from_images(&images).ok()?;
            return self.is_automorphism(&p).then_some(p);
        }
        let target = left[depth][base[depth]];
        for u in (0..self.n()).filter(|&u| right[u] == target) {
            let next = self.individualize(&right, u);
            if histogram(&next) != histogram(&left[depth + 1]) {
                continue;
            }
            if let Some(p) = self.descend(left, base, depth + 1, next) {
                return Some(p);
            }
        }
        None
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn histogram(colors: &[u32]) -> Vec<u32> {
    let mut h = vec![0u32; colors.len() + 1];
    for &c in colors {
        h[c as usize] += 1;
    }
    h
}

/// Smallest non-singleton cell (ties by color), and its smallest vertex.
fn target_vertex(colors: &[u32]) -> Option<usize> {
    let h = histogram(colors);
    let (color, _) = h
        .iter()
        .enumerate()
        .filter(|(_, &size)| size > 1)
        .min_by_key(|&(c, &size)| (size, c))?;
    colors.iter().position(|&c| c as usize == color)
}

/// Orbit of `point` under `gens`, with a representative mapping `point` to
/// each orbit member, listed in ascending order of the member.
fn orbit_with_reps(n: usize, point: usize, gens: &[Permutation]) -> Vec<Option<Permutation>> {
    let mut reps: Vec<Option<Permutation>> = vec![None; n];
    reps[point] = Some(Permutation::identity(n));
    let mut queue = std::collections::VecDeque::from([point]);
    while let Some(p) = queue.pop_front() {
        for h in gens {
            let q = h.image(p);
            if reps[q].is_none() {
                reps[q] = Some(h.compose(reps[p].as_ref().unwrap()));
                queue.push_back(q);
            }
        }
    }
    reps
}

pub(super) fn automorphisms(graph: &Graph, initial: &[u32], cap: usize) -> PermGroup {
    let n = graph.n();
    let refiner = Refiner { graph, initial };
    let mut start = initial.to_vec();
    refiner.refine(&mut start);
    let mut left = vec![start];
    let mut base = Vec::new();
    while let Some(b) = target_vertex(left.last().unwrap()) {
        base.push(b);
        let next = refiner.individualize(left.last().unwrap(), b);
        left.push(next);
    }

    let mut generators: Vec<Permutation> = Vec::new();
    let mut transversals: Vec<Vec<Permutation>> = vec![Vec::new(); base.len()];
    for level in (0..base.len()).rev() {
        let b = base[level];
        let cell: Vec<usize> = (0..n).filter(|&w| left[level][w] == left[level][b]).collect();
        let mut reps = orbit_with_reps(n, b, &generators);
        for &w in &cell {
            if reps[w].is_some() {
                continue;
            }
            let right = refiner.individualize(&left[level], w);
            if histogram(&right) != histogram(&left[level + 1]) {
                continue;
            }
            if let Some(g) = refiner.descend(&left, &base, level + 1, right) {
                generators.push(g);
                reps = orbit_with_reps(n, b, &generators);
            }
        }
        transversals[level] = reps.into_iter().flatten().collect();
    }
    PermGroup::from_transversals(n, generators, transversals, cap)
}
