//! The graph `P_m^k`: k-tuples over `{1..m}`, adjacent when they differ by
//! one in exactly one coordinate.
//!
//! Vertices are ranked in mixed radix with the *last* coordinate as the most
//! significant digit:
//!
//! ```text
//! rank(x_1, .., x_k) = sum_i (x_i - 1) * m^(i-1)
//! ```
//!
//! Appending a coordinate `a` to a vertex of `P_m^(k-1)` therefore adds the
//! constant offset `(a - 1) * m^(k-1)`, so the `m` diagonal blocks of the
//! recursive signed matrices occupy contiguous rank ranges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on `m^k` for graph construction.
pub const DEFAULT_SIZE_CAP: u64 = 65_536;

/// The Cartesian power `P_m^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathPower {
    m: u32,
    k: u32,
    n_vertices: usize,
    strides: Vec<usize>,
}

impl PathPower {
    pub fn new(m: u32, k: u32) -> Result<Self> {
        Self::with_cap(m, k, DEFAULT_SIZE_CAP)
    }

    pub fn with_cap(m: u32, k: u32, cap: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("m must be >= 2, got {m}")));
        }
        if k < 1 {
            return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
        }
        let n = (m as u64)
            .checked_pow(k)
            .filter(|&n| n <= cap)
            .ok_or(Error::SizeCap { m, k, cap })?;
        let mut strides = Vec::with_capacity(k as usize);
        let mut s = 1usize;
        for _ in 0..k {
            strides.push(s);
            s *= m as usize;
        }
        Ok(Self {
            m,
            k,
            n_vertices: n as usize,
            strides,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of edges, `k (m-1) m^(k-1)`.
    pub fn n_edges(&self) -> usize {
        self.k as usize * (self.m as usize - 1) * self.n_vertices / self.m as usize
    }

    /// `m^i` for `i < k`.
    pub fn stride(&self, i: usize) -> usize {
        self.strides[i]
    }

    fn check_vertex(&self, v: &Vertex) -> Result<()> {
        if v.coords.len() != self.k as usize {
            return Err(Error::InvalidVertex(format!(
                "expected {} coordinates, got {}",
                self.k,
                v.coords.len()
            )));
        }
        if let Some(&c) = v.coords.iter().find(|&&c| c < 1 || c > self.m) {
            return Err(Error::InvalidVertex(format!(
                "coordinate {c} outside 1..={}",
                self.m
            )));
        }
        Ok(())
    }

    fn check_rank(&self, r: usize) -> Result<()> {
        if r >= self.n_vertices {
            return Err(Error::RankOutOfRange {
                rank: r as u64,
                n_vertices: self.n_vertices as u64,
            });
        }
        Ok(())
    }

    pub fn rank(&self, v: &Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(v
            .coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (c as usize - 1) * s)
            .sum())
    }

    pub fn unrank(&self, r: usize) -> Result<Vertex> {
        self.check_rank(r)?;
        let m = self.m as usize;
        let coords = self
            .strides
            .iter()
            .map(|&s| ((r / s) % m) as u32 + 1)
            .collect();
        Ok(Vertex { coords })
    }

    /// Two vertices are adjacent iff their 1-norm distance is exactly one.
    pub fn adjacent(&self, u: &Vertex, v: &Vertex) -> Result<bool> {
        if u.coords.len() != v.coords.len() {
            return Err(Error::DimensionMismatch {
                expected: u.coords.len(),
                got: v.coords.len(),
            });
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let dist: u64 = u
            .coords
            .iter()
            .zip(&v.coords)
            .map(|(&a, &b)| a.abs_diff(b) as u64)
            .sum();
        Ok(dist == 1)
    }

    pub fn adjacent_ranks(&self, a: usize, b: usize) -> bool {
        if a == b || a >= self.n_vertices || b >= self.n_vertices {
            return false;
        }
        let d = a.abs_diff(b);
        let m = self.m as usize;
        self.strides
            .iter()
            .position(|&s| s == d)
            .is_some_and(|i| {
                let s = self.strides[i];
                let (lo, hi) = (a.min(b), a.max(b));
                // Only the digit at position i may change, and by exactly one.
                (lo / s) % m + 1 == (hi / s) % m && lo / (s * m) == hi / (s * m)
            })
    }

    pub fn neighbors(&self, v: &Vertex) -> Result<Vec<Vertex>> {
        let r = self.rank(v)?;
        self.neighbor_ranks(r)
            .into_iter()
            .map(|n| self.unrank(n))
            .collect()
    }

    /// Ranks of the neighbours of `r`, sorted ascending.
    pub fn neighbor_ranks(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * self.k as usize);
        self.for_each_neighbor(r, |n| out.push(n));
        out.sort_unstable();
        out
    }

    /// Calls `f` on every neighbour of `r` (unordered).
    #[inline]
    pub fn for_each_neighbor(&self, r: usize, mut f: impl FnMut(usize)) {
        let m = self.m as usize;
        for &s in &self.strides {
            let digit = (r / s) % m;
            if digit > 0 {
                f(r - s);
            }
            if digit + 1 < m {
                f(r + s);
            }
        }
    }

    pub fn degree(&self, r: usize) -> usize {
        let mut d = 0;
        self.for_each_neighbor(r, |_| d += 1);
        d
    }

    /// Colour class of `r` under the bipartition by parity of the coordinate sum.
    pub fn parity(&self, r: usize) -> bool {
        let m = self.m as usize;
        self.strides.iter().map(|&s| (r / s) % m).sum::<usize>() % 2 == 1
    }

    /// Maximum degree of the subgraph induced by `s`.
    pub fn induced_max_degree(&self, s: &VertexSet) -> Result<usize> {
        if s.graph() != self {
            return Err(Error::InvalidParameter(
                "vertex set belongs to a different graph".into(),
            ));
        }
        s.induced_max_degree()
    }
}

/// A vertex of `P_m^k` as a tuple of 1-based coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    coords: Vec<u32>,
}

impl Vertex {
    pub fn new(coords: impl Into<Vec<u32>>) -> Self {
        Self {
            coords: coords.into(),
        }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }
}

impl From<&[u32]> for Vertex {
    fn from(c: &[u32]) -> Self {
        Self::new(c)
    }
}

/// A subset of the vertices of a [`PathPower`], stored as a bitset over ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    graph: PathPower,
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn empty(graph: &PathPower) -> Self {
        Self {
            graph: graph.clone(),
            words: vec![0; graph.n_vertices.div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(graph: &PathPower) -> Self {
        let mut s = Self::empty(graph);
        for r in 0..graph.n_vertices {
            s.insert(r);
        }
        s
    }

    pub fn from_ranks(graph: &PathPower, ranks: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(graph);
        for r in ranks {
            graph.check_rank(r)?;
            s.insert(r);
        }
        Ok(s)
    }

    pub fn from_vertices<'a>(
        graph: &PathPower,
        vertices: impl IntoIterator<Item = &'a Vertex>,
    ) -> Result<Self> {
        let mut s = Self::empty(graph);
        for v in vertices {
            s.insert(graph.rank(v)?);
        }
        Ok(s)
    }

    pub fn graph(&self) -> &PathPower {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, r: usize) -> bool {
        r < self.graph.n_vertices && self.words[r / 64] >> (r % 64) & 1 == 1
    }

    /// Inserts `r`; returns whether it was newly added. Panics if `r` is out of range.
    pub fn insert(&mut self, r: usize) -> bool {
        assert!(r < self.graph.n_vertices, "rank {r} out of range");
        let (w, b) = (r / 64, r % 64);
        let fresh = self.words[w] >> b & 1 == 0;
        self.words[w] |= 1 << b;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, r: usize) -> bool {
        if !self.contains(r) {
            return false;
        }
        self.words[r / 64] &= !(1 << (r % 64));
        self.len -= 1;
        true
    }

    /// Member ranks in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Self {
        let mut out = Self::empty(&self.graph);
        for r in 0..self.graph.n_vertices {
            if !self.contains(r) {
                out.insert(r);
            }
        }
        out
    }

    /// Number of members of `self` adjacent to `r`.
    pub fn neighbors_in(&self, r: usize) -> usize {
        let mut c = 0;
        self.graph.for_each_neighbor(r, |n| c += self.contains(n) as usize);
        c
    }

    pub fn induced_max_degree(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.iter().map(|r| self.neighbors_in(r)).max().unwrap_or(0))
    }

    pub fn is_independent(&self) -> bool {
        self.iter().all(|r| self.neighbors_in(r) == 0)
    }

    pub fn to_json(&self) -> VertexSetJson {
        VertexSetJson {
            m: self.graph.m,
            k: self.graph.k,
            ranks: self.ranks(),
        }
    }
}

/// Serialized form `{"m":int,"k":int,"ranks":[sorted ints]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSetJson {
    pub m: u32,
    pub k: u32,
    pub ranks: Vec<usize>,
}

impl VertexSetJson {
    pub fn into_set(self, cap: u64) -> Result<VertexSet> {
        let g = PathPower::with_cap(self.m, self.k, cap)?;
        VertexSet::from_ranks(&g, self.ranks)
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        VertexSetJson::deserialize(d)?
            .into_set(DEFAULT_SIZE_CAP)
            .map_err(serde::de::Error::custom)
    }
}
