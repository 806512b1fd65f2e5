//! Recursive signed adjacency matrices of `P_3^k` and `P_(2n)^k`.
//!
//! Both families share one recursion. With `A_1` the path signing whose
//! superdiagonal alternates `+1, -1, +1, ..`, the level-`k` matrix has `m`
//! diagonal blocks `A_(k-1), -A_(k-1), A_(k-1), ..` and off-diagonal identity
//! blocks `+I, -I, +I, ..`:
//!
//! ```text
//! A_k = D ⊗ A_(k-1) + A_1 ⊗ I,   D = diag(1, -1, 1, ..)
//! ```
//!
//! where the left Kronecker factor acts on the last coordinate (the most
//! significant rank digit). Because `D A_1 + A_1 D = 0` and `D^2 = I`, this
//! gives the exact identity `A_k^2 = I_m ⊗ A_(k-1)^2 + A_1^2 ⊗ I`. The
//! square is a Kronecker sum of `k` copies of `A_1^2` and so does not see the
//! factor order; the layout of `A_k` itself does, and is pinned by a test.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{PathPower, VertexSet, DEFAULT_SIZE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// Signings of `P_3^k`.
    Odd3,
    /// Signings of `P_(2n)^k`.
    Even,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd3 => "odd3",
            Parity::Even => "even",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd3" => Ok(Parity::Odd3),
            "even" => Ok(Parity::Even),
            _ => Err(Error::InvalidParameter(format!("unknown parity {s:?}"))),
        }
    }
}

impl Parity {
    /// Path length for this family; `n` is ignored for `Odd3`.
    pub fn path_len(self, n: u32) -> u32 {
        match self {
            Parity::Odd3 => 3,
            Parity::Even => 2 * n,
        }
    }
}

/// Symmetric `{0, ±1}` matrix stored in compressed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<i8>,
    parity: Parity,
    n: u32,
    k: u32,
}

impl SignedMatrix {
    fn from_rows(rows: Vec<Vec<(usize, i8)>>, parity: Parity, n: u32, k: u32) -> Self {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|&(c, _)| c);
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
            parity,
            n,
            k,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// `n` for even matrices (path length `2n`), 1 for `Odd3`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Stored (directed) nonzeros; twice the number of edges.
    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn path_power(&self) -> Result<PathPower> {
        PathPower::with_cap(self.parity.path_len(self.n), self.k, u64::MAX)
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    /// Entry at 0-based `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> i8 {
        if i >= self.dim || j >= self.dim {
            return 0;
        }
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[span.clone()].binary_search(&j) {
            Ok(p) => self.vals[span.start + p],
            Err(_) => 0,
        }
    }

    /// Copy with entry `(i, j)` (and `(j, i)`) overwritten; `0` removes it.
    pub fn with_entry(&self, i: usize, j: usize, v: i8) -> Self {
        let mut rows = self.to_rows();
        for (a, b) in [(i, j), (j, i)] {
            rows[a].retain(|&(c, _)| c != b);
            if v != 0 {
                rows[a].push((b, v));
            }
        }
        Self::from_rows(rows, self.parity, self.n, self.k)
    }

    fn to_rows(&self) -> Vec<Vec<(usize, i8)>> {
        (0..self.dim).map(|i| self.row(i).collect()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| self.row(i).all(|(j, v)| self.entry(j, i) == v))
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix {
            dim: self.dim,
            rows: (0..self.dim)
                .map(|i| self.row(i).map(|(j, v)| (j, v as i64)).collect())
                .collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for (j, v) in self.row(i) {
                d[(i, j)] = v as f64;
            }
        }
        d
    }

    /// Writes `%%MatrixMarket matrix coordinate integer symmetric` with the
    /// lower triangle, 1-based, column-major.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> Result<()> {
        let mut lower: Vec<(usize, usize, i8)> = (0..self.dim)
            .flat_map(|i| self.row(i).filter(move |&(j, _)| j < i).map(move |(j, v)| (i, j, v)))
            .collect();
        lower.sort_unstable_by_key(|&(i, j, _)| (j, i));
        writeln!(w, "%%MatrixMarket matrix coordinate integer symmetric")?;
        writeln!(
            w,
            "% signed adjacency matrix parity={} n={} k={}",
            self.parity, self.n, self.k
        )?;
        writeln!(w, "{} {} {}", self.dim, self.dim, lower.len())?;
        for (i, j, v) in lower {
            writeln!(w, "{} {} {}", i + 1, j + 1, v)?;
        }
        Ok(())
    }
}

/// Reads a symmetric integer coordinate Matrix Market file into an
/// [`IntMatrix`].
pub fn read_matrix_market<R: BufRead>(r: R) -> Result<IntMatrix> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))??;
    let h = header.to_ascii_lowercase();
    if !h.starts_with("%%matrixmarket matrix coordinate") {
        return Err(Error::Parse(format!("bad header {header:?}")));
    }
    let symmetric = h.contains("symmetric");
    let mut size: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<(usize, i64)>> = Vec::new();
    let mut seen = 0;
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        let num = |s: &str| s.parse::<i64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        match size {
            None => {
                if f.len() != 3 {
                    return Err(Error::Parse(format!("bad size line {t:?}")));
                }
                let (nr, nc, nz) = (num(f[0])? as usize, num(f[1])? as usize, num(f[2])? as usize);
                if nr != nc {
                    return Err(Error::Parse("matrix is not square".into()));
                }
                size = Some((nr, nz));
                rows = vec![Vec::new(); nr];
            }
            Some((dim, _)) => {
                if f.len() != 3 {
                    return Err(Error::Parse(format!("bad entry line {t:?}")));
                }
                let (i, j, v) = (num(f[0])?, num(f[1])?, num(f[2])?);
                if i < 1 || j < 1 || i as usize > dim || j as usize > dim {
                    return Err(Error::Parse(format!("entry ({i}, {j}) out of range")));
                }
                let (i, j) = (i as usize - 1, j as usize - 1);
                rows[i].push((j, v));
                if symmetric && i != j {
                    rows[j].push((i, v));
                }
                seen += 1;
            }
        }
    }
    let (dim, nz) = size.ok_or_else(|| Error::Parse("missing size line".into()))?;
    if seen != nz {
        return Err(Error::Parse(format!("expected {nz} entries, found {seen}")));
    }
    for row in &mut rows {
        row.sort_unstable_by_key(|&(c, _)| c);
    }
    Ok(IntMatrix { dim, rows })
}

/// Sparse square integer matrix for exact identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            rows: (0..dim).map(|i| vec![(i, 1)]).collect(),
        }
    }

    fn from_maps(dim: usize, maps: Vec<BTreeMap<usize, i64>>) -> Self {
        Self {
            dim,
            rows: maps
                .into_iter()
                .map(|m| m.into_iter().filter(|&(_, v)| v != 0).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map_or(0, |p| self.rows[i][p].1)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        let maps = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BTreeMap::new();
                for &(k, a) in row {
                    for &(j, b) in &other.rows[k] {
                        *acc.entry(j).or_insert(0) += a * b;
                    }
                }
                acc
            })
            .collect();
        Self::from_maps(self.dim, maps)
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        let maps = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, i64> = a.iter().copied().collect();
                for &(j, v) in b {
                    *acc.entry(j).or_insert(0) += v;
                }
                acc
            })
            .collect();
        Self::from_maps(self.dim, maps)
    }

    /// `self ⊗ other`, with `self` indexing the most significant digit.
    pub fn kron(&self, other: &IntMatrix) -> IntMatrix {
        let d = other.dim;
        let mut rows = Vec::with_capacity(self.dim * d);
        for arow in &self.rows {
            for brow in &other.rows {
                let mut row = Vec::with_capacity(arow.len() * brow.len());
                for &(ja, va) in arow {
                    for &(jb, vb) in brow {
                        row.push((ja * d + jb, va * vb));
                    }
                }
                rows.push(row);
            }
        }
        Self {
            dim: self.dim * d,
            rows,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[(i, j)] = v as f64;
            }
        }
        d
    }

    pub fn to_dense_i64(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.dim]; self.dim];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[i][j] = v;
            }
        }
        d
    }
}

/// `A_1` for `P_3`: `[[0,1,0],[1,0,-1],[0,-1,0]]`.
pub fn build_a1_odd3() -> SignedMatrix {
    alternating_path(3, Parity::Odd3, 1)
}

/// `A_1` for `P_(2n)`: `+1` on `(2i-1, 2i)`, `-1` on `(2i, 2i+1)` (1-based).
pub fn build_a1_even(n: u32) -> Result<SignedMatrix> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    Ok(alternating_path(2 * n, Parity::Even, n))
}

pub fn build_ak_odd3(k: u32) -> Result<SignedMatrix> {
    build_ak_odd3_with_cap(k, DEFAULT_SIZE_CAP)
}

pub fn build_ak_odd3_with_cap(k: u32, cap: u64) -> Result<SignedMatrix> {
    let g = PathPower::with_cap(3, k, cap)?;
    Ok(recursive(&build_a1_odd3(), &g))
}

pub fn build_ak_even(n: u32, k: u32) -> Result<SignedMatrix> {
    build_ak_even_with_cap(n, k, DEFAULT_SIZE_CAP)
}

pub fn build_ak_even_with_cap(n: u32, k: u32, cap: u64) -> Result<SignedMatrix> {
    let a1 = build_a1_even(n)?;
    let g = PathPower::with_cap(2 * n, k, cap)?;
    Ok(recursive(&a1, &g))
}

pub fn build(parity: Parity, n: u32, k: u32, cap: u64) -> Result<SignedMatrix> {
    match parity {
        Parity::Odd3 => build_ak_odd3_with_cap(k, cap),
        Parity::Even => build_ak_even_with_cap(n, k, cap),
    }
}

fn alternating_path(m: u32, parity: Parity, n: u32) -> SignedMatrix {
    let m = m as usize;
    let mut rows = vec![Vec::new(); m];
    for i in 0..m - 1 {
        let s = if i % 2 == 0 { 1 } else { -1 };
        rows[i].push((i + 1, s));
        rows[i + 1].push((i, s));
    }
    SignedMatrix::from_rows(rows, parity, n, 1)
}

fn recursive(a1: &SignedMatrix, g: &PathPower) -> SignedMatrix {
    let m = a1.dim();
    let mut cur: Vec<Vec<(usize, i8)>> = a1.to_rows();
    for _ in 1..g.k() {
        let block = cur.len();
        let mut next = Vec::with_capacity(block * m);
        for b in 0..m {
            let diag_sign: i8 = if b % 2 == 0 { 1 } else { -1 };
            for (i, row) in cur.iter().enumerate() {
                let mut r: Vec<(usize, i8)> = row
                    .iter()
                    .map(|&(j, v)| (b * block + j, diag_sign * v))
                    .collect();
                for (c, v) in a1.row(b) {
                    r.push((c * block + i, v));
                }
                next.push(r);
            }
        }
        cur = next;
    }
    SignedMatrix::from_rows(cur, a1.parity, a1.n, g.k())
}

/// True iff the nonzero pattern of `a` is exactly the adjacency of `g`.
pub fn check_support(a: &SignedMatrix, g: &PathPower) -> Result<bool> {
    if a.dim() != g.n_vertices() {
        return Err(Error::DimensionMismatch {
            expected: g.n_vertices(),
            got: a.dim(),
        });
    }
    for i in 0..a.dim() {
        if a.row(i).any(|(j, v)| v == 0 || !g.adjacent_ranks(i, j)) {
            return Ok(false);
        }
        if a.row(i).count() != g.degree(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compares `A_k^2` with `I_m ⊗ A_(k-1)^2 + A_1^2 ⊗ I` exactly.
pub fn square_identity_check(parity: Parity, n: u32, k: u32) -> Result<bool> {
    if k < 2 {
        return Err(Error::InvalidParameter("the squared identity needs k >= 2".into()));
    }
    let (a1, ak, prev) = match parity {
        Parity::Odd3 => (build_a1_odd3(), build_ak_odd3(k)?, build_ak_odd3(k - 1)?),
        Parity::Even => (build_a1_even(n)?, build_ak_even(n, k)?, build_ak_even(n, k - 1)?),
    };
    let lhs = ak.to_int().mul(&ak.to_int());
    let p = prev.to_int();
    let a = a1.to_int();
    let rhs = IntMatrix::identity(a1.dim())
        .kron(&p.mul(&p))
        .add(&a.mul(&a).kron(&IntMatrix::identity(prev.dim())));
    Ok(lhs == rhs)
}

/// Rows and columns of `a` restricted to `s`, in increasing rank order.
pub fn principal_submatrix(a: &SignedMatrix, s: &VertexSet) -> Result<DMatrix<f64>> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if s.graph().n_vertices() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: s.graph().n_vertices(),
        });
    }
    let ranks = s.ranks();
    let mut pos = vec![usize::MAX; a.dim()];
    for (p, &r) in ranks.iter().enumerate() {
        pos[r] = p;
    }
    let mut b = DMatrix::zeros(ranks.len(), ranks.len());
    for (p, &r) in ranks.iter().enumerate() {
        for (j, v) in a.row(r) {
            if pos[j] != usize::MAX {
                b[(p, pos[j])] = v as f64;
            }
        }
    }
    Ok(b)
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn bareiss_det(mut m: Vec<Vec<num_bigint::BigInt>>) -> num_bigint::BigInt {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};

    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
