//! Simple undirected graphs on at most 64 vertices.
//!
//! Vertices are dense labels `0..n`. Every vertex carries a neighbor bitmask so
//! that the enumeration and refinement kernels can work on machine words.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Hard limit on the vertex count imposed by the `u64` adjacency masks.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an edge iterator. Duplicate edges (in either
    /// orientation) collapse to one; self-loops and out-of-range labels are
    /// rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adjacency = vec![0u64; n];
        for &(u, v) in &set {
            adjacency[u] |= 1 << v;
            adjacency[v] |= 1 << u;
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adjacency
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adjacency[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones() as usize
    }

    /// Mask with the low `n` bits set.
    pub fn full_mask(&self) -> u64 {
        full_mask(self.n)
    }

    /// Whether the graph admits a proper 2-coloring.
    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let mut nb = self.adjacency[u];
                while nb != 0 {
                    let v = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        stack.push(v);
                    } else if side[v] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Serializes to the edge-list text format accepted by [`parse_edge_list`].
    /// The vertex count is always written so isolated vertices survive.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// G(n, p) random graph drawn from `rng`.
    pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        Self::new(n, edges)
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Parses the whitespace edge-list format.
///
/// Lines hold `u v` pairs of 0-based labels; `#` starts a comment. The first
/// non-comment line may be `n <count>` to declare the vertex count (needed for
/// isolated vertices); otherwise the count is one more than the largest label.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !seen_content && tokens.first() == Some(&"n") {
            seen_content = true;
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected `n <count>`".into(),
                });
            }
            declared = Some(parse_label(tokens[1], lineno)?);
            continue;
        }
        seen_content = true;
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected two vertex labels, found {}", tokens.len()),
            });
        }
        let u = parse_label(tokens[0], lineno)?;
        let v = parse_label(tokens[1], lineno)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        edges.push((u, v));
    }
    let implied = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < implied => {
            return Err(Error::VertexOutOfRange {
                vertex: implied - 1,
                n,
            })
        }
        Some(n) => n,
        None => implied,
    };
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Graph::new(n, edges)
}

fn parse_label(token: &str, line: usize) -> Result<usize> {
    if token.starts_with('-') {
        return Err(Error::Parse {
            line,
            msg: format!("negative vertex label `{token}`"),
        });
    }
    token.parse::<usize>().map_err(|_| Error::Parse {
        line,
        msg: format!("malformed vertex label `{token}`"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Path,
    Cycle,
    Complete,
    CompleteBipartite,
    Star,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Path => "path",
            FamilyKind::Cycle => "cycle",
            FamilyKind::Complete => "complete",
            FamilyKind::CompleteBipartite => "complete_bipartite",
            FamilyKind::Star => "star",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => FamilyKind::Path,
            "cycle" => FamilyKind::Cycle,
            "complete" => FamilyKind::Complete,
            "complete_bipartite" => FamilyKind::CompleteBipartite,
            "star" => FamilyKind::Star,
            other => return Err(Error::InvalidFamily(format!("unknown family `{other}`"))),
        })
    }
}

/// A named graph family with its size parameters, written `kind:params`
/// (`cycle:8`, `complete_bipartite:3,3`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub params: Vec<usize>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, params: Vec<usize>) -> Result<Self> {
        let spec = Self { kind, params };
        spec.validate()?;
        Ok(spec)
    }

    pub fn cycle(n: usize) -> Self {
        Self { kind: FamilyKind::Cycle, params: vec![n] }
    }

    pub fn complete(n: usize) -> Self {
        Self { kind: FamilyKind::Complete, params: vec![n] }
    }

    pub fn path(n: usize) -> Self {
        Self { kind: FamilyKind::Path, params: vec![n] }
    }

    fn validate(&self) -> Result<()> {
        let want = match self.kind {
            FamilyKind::CompleteBipartite => 2,
            _ => 1,
        };
        if self.params.len() != want {
            return Err(Error::InvalidFamily(format!(
                "{} takes {want} size parameter(s), got {}",
                self.kind.name(),
                self.params.len()
            )));
        }
        let min = if self.kind == FamilyKind::Cycle { 3 } else { 1 };
        if let Some(&p) = self.params.iter().find(|&&p| p < min) {
            return Err(Error::InvalidFamily(format!(
                "{} size must be at least {min}, got {p}",
                self.kind.name()
            )));
        }
        Ok(())
    }

    /// Vertex count of the generated graph.
    pub fn vertex_count(&self) -> usize {
        self.params.iter().sum()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}:{}", self.kind.name(), params.join(","))
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidFamily(format!("expected `kind:params`, got `{s}`")))?;
        let kind: FamilyKind = kind.trim().parse()?;
        let params = params
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidFamily(format!("bad size `{p}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(kind, params)
    }
}

/// Builds the graph of a family. Cycles use edges `(i, i+1 mod n)`, stars put
/// the center at vertex 0, and complete bipartite graphs place the first part
/// on the low labels.
pub fn generate_family(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    let n = spec.vertex_count();
    let edges: Vec<(usize, usize)> = match spec.kind {
        FamilyKind::Path => (1..n).map(|i| (i - 1, i)).collect(),
        FamilyKind::Cycle => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        FamilyKind::Complete => (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect(),
        FamilyKind::CompleteBipartite => {
            let a = spec.params[0];
            (0..a).flat_map(|u| (a..n).map(move |v| (u, v))).collect()
        }
        FamilyKind::Star => (1..n).map(|v| (0, v)).collect(),
    };
    Graph::new(n, edges)
}
