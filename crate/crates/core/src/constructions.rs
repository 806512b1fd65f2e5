//! Explicit vertex sets: the coordinate-appending map, the maximum independent
//! sets `V_k` and the `(alpha + 1)`-vertex witness sets `X_k` for odd `m`.
//!
//! Both families are built by the same block recursion: the level-`k` set is
//! the union over `a = 1..m` of the level-`(k-1)` set (odd `a`) or its
//! complement (even `a`), with `a` appended as the last coordinate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{PathPower, VertexSet, DEFAULT_SIZE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    Vk,
    #[serde(rename = "vkc")]
    VkComplement,
    Xk,
    #[serde(rename = "xkc")]
    XkComplement,
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionKind::Vk => "vk",
            ConstructionKind::VkComplement => "vkc",
            ConstructionKind::Xk => "xk",
            ConstructionKind::XkComplement => "xkc",
        })
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vk" => Ok(Self::Vk),
            "vkc" => Ok(Self::VkComplement),
            "xk" => Ok(Self::Xk),
            "xkc" => Ok(Self::XkComplement),
            _ => Err(Error::InvalidParameter(format!("unknown construction kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub m: u32,
    pub k: u32,
    pub kind: ConstructionKind,
}

impl ConstructionSpec {
    pub fn new(m: u32, k: u32, kind: ConstructionKind) -> Result<Self> {
        if matches!(kind, ConstructionKind::Xk | ConstructionKind::XkComplement)
            && (m.is_multiple_of(2) || m < 3)
        {
            return Err(Error::InvalidParameter(format!(
                "X_k is only defined for odd m >= 3, got m = {m}"
            )));
        }
        Ok(Self { m, k, kind })
    }

    pub fn build(&self, cap: u64) -> Result<VertexSet> {
        let g = PathPower::with_cap(self.m, self.k, cap)?;
        let set = match self.kind {
            ConstructionKind::Vk | ConstructionKind::VkComplement => {
                alternating_blocks(&g, odd_positions(self.m))
            }
            ConstructionKind::Xk | ConstructionKind::XkComplement => {
                alternating_blocks(&g, witness_base(self.m))
            }
        };
        Ok(match self.kind {
            ConstructionKind::VkComplement | ConstructionKind::XkComplement => set.complement(),
            _ => set,
        })
    }
}

/// Appends coordinate `a` to every member of `s`.
pub fn q_map(s: &VertexSet, a: u32) -> Result<VertexSet> {
    q_map_with_cap(s, a, DEFAULT_SIZE_CAP)
}

pub fn q_map_with_cap(s: &VertexSet, a: u32, cap: u64) -> Result<VertexSet> {
    let g = s.graph();
    if a < 1 || a > g.m() {
        return Err(Error::InvalidParameter(format!(
            "appended coordinate {a} outside 1..={}",
            g.m()
        )));
    }
    let lifted = PathPower::with_cap(g.m(), g.k() + 1, cap)?;
    let offset = (a as usize - 1) * g.n_vertices();
    VertexSet::from_ranks(&lifted, s.iter().map(|r| r + offset))
}

/// `V_k`: the maximum independent set of size `ceil(m^k / 2)`.
pub fn build_vk(m: u32, k: u32) -> Result<VertexSet> {
    ConstructionSpec::new(m, k, ConstructionKind::Vk)?.build(DEFAULT_SIZE_CAP)
}

/// `X_k` in `P_(2n+1)^k`: `alpha + 1` vertices with induced maximum degree
/// 2 when `n = 1` and 1 otherwise.
pub fn build_xk(n: u32, k: u32) -> Result<VertexSet> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    ConstructionSpec::new(2 * n + 1, k, ConstructionKind::Xk)?.build(DEFAULT_SIZE_CAP)
}

/// `ceil(m^k / 2)`.
pub fn alpha_formula(m: u32, k: u32) -> u128 {
    let n = (m as u128).pow(k);
    n.div_ceil(2)
}

pub fn is_independent(s: &VertexSet) -> bool {
    s.is_independent()
}

/// `{1, 3, 5, ..}` as 0-based flags.
fn odd_positions(m: u32) -> Vec<bool> {
    (0..m).map(|i| i % 2 == 0).collect()
}

/// `{2, 4, .., 2n} ∪ {1, 2n+1}`.
fn witness_base(m: u32) -> Vec<bool> {
    (1..=m).map(|c| c % 2 == 0 || c == 1 || c == m).collect()
}

fn alternating_blocks(g: &PathPower, base: Vec<bool>) -> VertexSet {
    let m = g.m() as usize;
    let mut cur = base;
    for _ in 1..g.k() {
        let block = cur.len();
        let mut next = Vec::with_capacity(block * m);
        for b in 0..m {
            let flip = b % 2 == 1;
            next.extend(cur.iter().map(|&x| x ^ flip));
        }
        cur = next;
    }
    debug_assert_eq!(cur.len(), g.n_vertices());
    let mut s = VertexSet::empty(g);
    for (r, _) in cur.iter().enumerate().filter(|(_, &x)| x) {
        s.insert(r);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive pair scan, independent of the neighbour enumeration.
    fn independent_by_pairs(s: &VertexSet) -> bool {
        let g = s.graph();
        let r = s.ranks();
        for (i, &a) in r.iter().enumerate() {
            for &b in &r[i + 1..] {
                if g.adjacent(&g.unrank(a).unwrap(), &g.unrank(b).unwrap()).unwrap() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn q_map_examples() {
        let g = PathPower::new(3, 1).unwrap();
        let s = VertexSet::from_ranks(&g, [0, 2]).unwrap();
        let lifted = q_map(&s, 2).unwrap();
        let lg = lifted.graph().clone();
        let expect: Vec<usize> = [[1, 2], [3, 2]]
            .iter()
            .map(|c| lg.rank(&c[..].into()).unwrap())
            .collect();
        assert_eq!(lifted.ranks(), expect);
        assert!(q_map(&VertexSet::empty(&g), 3).unwrap().is_empty());
        assert!(q_map(&s, 0).is_err());
        assert!(q_map(&s, 4).is_err());
    }

    #[test]
    fn vk_examples() {
        let v = build_vk(3, 1).unwrap();
        assert_eq!(v.ranks(), vec![0, 2]);

        // Q^3: the even-weight class, 4 vertices.
        let v = build_vk(2, 3).unwrap();
        assert_eq!(v.len(), 4);
        let g = v.graph();
        for r in v.iter() {
            let c = g.unrank(r).unwrap();
            assert_eq!(c.coords().iter().map(|&x| x - 1).sum::<u32>() % 2, 0);
        }
        assert!(independent_by_pairs(&v));

        let v = build_vk(3, 2).unwrap();
        assert_eq!(v.len(), 5);
        assert!(independent_by_pairs(&v));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_formula(3, 2), 5);
        assert_eq!(alpha_formula(2, 4), 8);
        assert_eq!(alpha_formula(5, 2), 13);
        assert_eq!(alpha_formula(3, 40), 3u128.pow(40).div_ceil(2));
    }

    #[test]
    fn xk_examples() {
        let x = build_xk(1, 1).unwrap();
        assert_eq!(x.ranks(), vec![0, 1, 2]);
        assert_eq!(x.induced_max_degree().unwrap(), 2);

        let x = build_xk(2, 1).unwrap();
        assert_eq!(x.ranks(), vec![0, 1, 3, 4]);
        assert_eq!(x.len() as u128, alpha_formula(5, 1) + 1);
        assert_eq!(x.induced_max_degree().unwrap(), 1);
        assert!(!is_independent(&x));

        let x = build_xk(1, 2).unwrap();
        assert_eq!(x.len(), 6);
        assert_eq!(x.induced_max_degree().unwrap(), 2);
    }

    #[test]
    fn xk_requires_odd_m() {
        assert!(ConstructionSpec::new(4, 2, ConstructionKind::Xk).is_err());
        assert!(ConstructionSpec::new(4, 2, ConstructionKind::XkComplement).is_err());
        assert!(ConstructionSpec::new(4, 2, ConstructionKind::VkComplement).is_ok());
        assert!(build_xk(0, 1).is_err());
    }

    #[test]
    fn independence_examples() {
        assert!(is_independent(&build_vk(3, 3).unwrap()));
        let g = PathPower::new(4, 2).unwrap();
        assert!(is_independent(&VertexSet::from_ranks(&g, [5]).unwrap()));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(build_vk(2, 17), Err(Error::SizeCap { .. })));
        let spec = ConstructionSpec::new(3, 3, ConstructionKind::Vk).unwrap();
        assert!(spec.build(26).is_err());
    }

    #[test]
    fn xk_complement_degree_matches_for_k_ge_2() {
        for n in 1..=3 {
            for k in 2..=3 {
                let m = 2 * n + 1;
                let x = ConstructionSpec::new(m, k, ConstructionKind::Xk).unwrap().build(DEFAULT_SIZE_CAP).unwrap();
                let xc = ConstructionSpec::new(m, k, ConstructionKind::XkComplement)
                    .unwrap()
                    .build(DEFAULT_SIZE_CAP)
                    .unwrap();
                assert_eq!(
                    x.induced_max_degree().unwrap(),
                    xc.induced_max_degree().unwrap(),
                    "n={n} k={k}"
                );
            }
        }
        // At k = 1 the complement {3, 5, .., 2n-1} is independent.
        let xc1 = ConstructionSpec::new(5, 1, ConstructionKind::XkComplement)
            .unwrap()
            .build(DEFAULT_SIZE_CAP)
            .unwrap();
        assert_eq!(xc1.induced_max_degree().unwrap(), 0);
    }

    fn small_mk() -> impl Strategy<Value = (u32, u32)> {
        (2u32..8, 1u32..5).prop_filter("small", |(m, k)| (*m as u64).pow(*k) <= 2401)
    }

    proptest! {
        #[test]
        fn vk_is_maximum_size_independent((m, k) in small_mk()) {
            let v = build_vk(m, k).unwrap();
            prop_assert_eq!(v.len() as u128, alpha_formula(m, k));
            prop_assert!(v.is_independent());
            let vc = ConstructionSpec::new(m, k, ConstructionKind::VkComplement).unwrap().build(DEFAULT_SIZE_CAP).unwrap();
            prop_assert_eq!(vc.len() as u128, (m as u128).pow(k) / 2);
            prop_assert!(vc.is_independent());
        }

        #[test]
        fn xk_size_and_degree(n in 1u32..4, k in 1u32..5) {
            prop_assume!(((2 * n + 1) as u64).pow(k) <= 2401);
            let x = build_xk(n, k).unwrap();
            prop_assert_eq!(x.len() as u128, alpha_formula(2 * n + 1, k) + 1);
            prop_assert_eq!(x.induced_max_degree().unwrap(), if n == 1 { 2 } else { 1 });
        }

        #[test]
        fn q_map_preserves_independence(
            (m, k) in small_mk(),
            picks in prop::collection::vec(any::<u64>(), 0..60),
            a_seed in any::<u32>(),
        ) {
            prop_assume!((m as u64).pow(k + 1) <= 65536);
            let g = PathPower::new(m, k).unwrap();
            // Greedy independent set from random picks.
            let mut s = VertexSet::empty(&g);
            for p in picks {
                let r = (p % g.n_vertices() as u64) as usize;
                if s.neighbors_in(r) == 0 {
                    s.insert(r);
                }
            }
            prop_assert!(s.is_independent());
            let a = a_seed % m + 1;
            let lifted = q_map(&s, a).unwrap();
            prop_assert_eq!(lifted.len(), s.len());
            prop_assert!(lifted.is_independent());
        }
    }
}
