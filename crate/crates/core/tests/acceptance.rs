//! End-to-end acceptance criteria. Each test prints one PASS/FAIL line to
//! stderr (bypassing libtest capture) and then asserts.
//!
//! Everything is cross-checked against oracles defined in this file: graphs
//! built from explicit coordinates, signed matrices from an explicit sign
//! formula, bitmask searches and direct dense eigensolves.

use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pathgrid::constructions::{alpha_formula, build_xk};
use pathgrid::search::{
    brute_force_f, huang_bound_check, lower_bound_even, max_independent_set, FSearchOptions,
    SearchBudget, ValueKind,
};
use pathgrid::signed::{self, check_support, square_identity_check, Parity};
use pathgrid::spectral::{
    beta, charpoly_a1sq_check, composed_square_spectrum_even, fg_identity_check,
    interlacing_check, min_positive_eig_even, odd3_spectrum_check, Tolerances,
};
use pathgrid::{PathPower, VertexSet};

fn report(id: u32, name: &str, outcome: &Result<String, String>, elapsed: Duration) {
    let line = match outcome {
        Ok(detail) => format!("PASS criterion {id} {name} ({:.2?}) {detail}\n", elapsed),
        Err(why) => format!("FAIL criterion {id} {name} ({:.2?}) {why}\n", elapsed),
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn run(id: u32, name: &str, body: impl FnOnce() -> Result<String, String>) {
    let t = Instant::now();
    let outcome = body();
    report(id, name, &outcome, t.elapsed());
    if let Err(why) = outcome {
        panic!("criterion {id} ({name}) failed: {why}");
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)*));
        }
    };
}

// ---------------------------------------------------------------------------
// Oracles

/// Coordinates of rank `r`, 1-based, first coordinate least significant.
fn coords(r: usize, m: u32, k: u32) -> Vec<u32> {
    let mut r = r;
    (0..k)
        .map(|_| {
            let c = (r % m as usize) as u32 + 1;
            r /= m as usize;
            c
        })
        .collect()
}

struct Grid {
    m: u32,
    k: u32,
    n: usize,
    /// Pairs `(u, v, axis)` with `u < v` differing by one in `axis` only.
    edges: Vec<(usize, usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Grid {
    fn new(m: u32, k: u32) -> Self {
        let n = (m as usize).pow(k);
        let pts: Vec<Vec<u32>> = (0..n).map(|r| coords(r, m, k)).collect();
        let mut edges = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for u in 0..n {
            for v in u + 1..n {
                let diff: Vec<usize> = (0..k as usize).filter(|&i| pts[u][i] != pts[v][i]).collect();
                if diff.len() == 1 && pts[u][diff[0]].abs_diff(pts[v][diff[0]]) == 1 {
                    edges.push((u, v, diff[0]));
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
        }
        Grid { m, k, n, edges, adj }
    }

    fn masks(&self) -> Vec<u64> {
        assert!(self.n <= 64);
        self.adj.iter().map(|a| a.iter().fold(0u64, |w, &v| w | 1 << v)).collect()
    }

    fn max_degree_in(&self, members: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &v in members {
            inside[v] = true;
        }
        members
            .iter()
            .map(|&v| self.adj[v].iter().filter(|&&u| inside[u]).count())
            .max()
            .unwrap_or(0)
    }

    /// The signing: an edge along axis `i` between coordinates `t` and
    /// `t + 1` gets `(-1)^(t-1)` times `(-1)^(c_j - 1)` for every more
    /// significant axis `j > i`.
    fn signed_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v, i) in &self.edges {
            let (cu, cv) = (coords(u, self.m, self.k), coords(v, self.m, self.k));
            let t = cu[i].min(cv[i]);
            let mut e = (t - 1) % 2;
            for &c in &cu[i + 1..] {
                e += c - 1;
            }
            let s = if e % 2 == 0 { 1.0 } else { -1.0 };
            a[(u, v)] = s;
            a[(v, u)] = s;
        }
        a
    }
}

fn mis_oracle(cand: u64, adj: &[u64]) -> u32 {
    if cand == 0 {
        return 0;
    }
    let v = cand.trailing_zeros() as usize;
    let rest = cand & !(1 << v);
    if adj[v] & cand == 0 {
        return 1 + mis_oracle(rest, adj);
    }
    mis_oracle(rest, adj).max(1 + mis_oracle(rest & !adj[v], adj))
}

/// Minimum over all `size`-subsets of the induced maximum degree, by
/// Gosper's enumeration of bitmasks.
fn f_oracle(adj: &[u64], size: usize) -> usize {
    let n = adj.len();
    assert!(size <= n && n < 64);
    let mut best = usize::MAX;
    let mut s: u64 = (1u64 << size) - 1;
    while s < 1u64 << n {
        let mut d = 0;
        let mut bits = s;
        while bits != 0 && d < best {
            let v = bits.trailing_zeros() as usize;
            d = d.max((adj[v] & s).count_ones() as usize);
            bits &= bits - 1;
        }
        best = best.min(d);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    best
}

fn sorted_eigs(a: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = a.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn sym_defect(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    (0..n).map(|i| (sorted[i] + sorted[n - 1 - i]).abs()).fold(0.0, f64::max)
}

fn max_pointwise(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn beta_closed_form(n: u32) -> f64 {
    let s = (std::f64::consts::PI / (2.0 * (2 * n + 1) as f64)).sin();
    4.0 * s * s
}

fn ceil_sqrt(k: u64) -> u64 {
    (0..).find(|r| r * r >= k).unwrap()
}

fn lib_f(m: u32, k: u32) -> pathgrid::search::FResult {
    brute_force_f(
        &PathPower::new(m, k).unwrap(),
        1,
        &SearchBudget::default(),
        &FSearchOptions::default(),
    )
    .unwrap()
}

fn oracle_f(m: u32, k: u32) -> usize {
    let g = Grid::new(m, k);
    let adj = g.masks();
    let alpha = mis_oracle((1u64 << g.n) - 1, &adj) as usize;
    f_oracle(&adj, alpha + 1)
}

fn lib_matrix(parity: Parity, n: u32, k: u32) -> DMatrix<f64> {
    signed::build(parity, n, k, 1 << 16).unwrap().to_dense()
}

// ---------------------------------------------------------------------------
// Criteria

#[test]
fn criterion_1_independence_number() {
    run(1, "independence-number", || {
        let t = Instant::now();
        let inst = [(2, 1..=5), (3, 1..=3), (4, 1..=2), (5, 1..=2), (6, 1..=1), (7, 1..=1)];
        let mut count = 0;
        for (m, ks) in inst {
            for k in ks {
                let g = Grid::new(m, k);
                let closed = (g.n as u128).div_ceil(2);
                let oracle = mis_oracle((1u64 << g.n) - 1, &g.masks()) as u128;
                let lib = max_independent_set(&PathPower::new(m, k).unwrap(), &SearchBudget::default()).unwrap();
                ensure!(lib.proven_optimal, "search not proven for m={m} k={k}");
                ensure!(
                    lib.size as u128 == closed && oracle == closed && alpha_formula(m, k) == closed,
                    "m={m} k={k}: search {} oracle {oracle} formula {} closed {closed}",
                    lib.size,
                    alpha_formula(m, k)
                );
                ensure!(lib.witness.is_independent() && lib.witness.len() == lib.size, "bad witness m={m} k={k}");
                count += 1;
            }
        }
        ensure!(t.elapsed() < Duration::from_secs(30), "took {:?}", t.elapsed());
        Ok(format!("{count} instances"))
    });
}

#[test]
fn criterion_2_odd_exact_values() {
    run(2, "odd-exact-values", || {
        for (m, k) in [(3, 1), (3, 2)] {
            let r = lib_f(m, k);
            ensure!(r.value == Some(2) && r.kind == ValueKind::Exact, "f(P_{m}^{k}) = {:?} {:?}", r.value, r.kind);
            ensure!(oracle_f(m, k) == 2, "oracle disagrees for m={m} k={k}");
            let w = r.witness.unwrap();
            ensure!(w.len() == r.alpha + 1 && w.induced_max_degree().unwrap() == 2, "witness");
        }
        for (n, kmax, delta) in [(1u32, 5u32, 2usize), (2, 3, 1), (3, 3, 1)] {
            let m = 2 * n + 1;
            for k in 1..=kmax {
                let g = Grid::new(m, k);
                let x = build_xk(n, k).unwrap();
                let d = g.max_degree_in(&x.ranks());
                ensure!(d == delta, "Δ(X_{k}) = {d} for m={m}");
                ensure!(x.len() == g.n.div_ceil(2) + 1, "|X_{k}| = {} for m={m}", x.len());
            }
        }
        let t = Instant::now();
        let r = lib_f(5, 2);
        let took = t.elapsed();
        ensure!(r.value == Some(1) && r.kind == ValueKind::Exact, "f(P_5^2) = {:?} {:?}", r.value, r.kind);
        ensure!(took < Duration::from_secs(60), "f(P_5^2) took {took:?}");
        ensure!(oracle_f(5, 2) == 1, "oracle f(P_5^2) != 1");
        Ok(format!("f(P_5^2) search {:.2?}, {} nodes", took, r.subsets_examined))
    });
}

#[test]
fn criterion_3_odd_spectra() {
    run(3, "odd-spectra", || {
        let tol = 1e-8;
        for k in 1..=5 {
            let a = Grid::new(3, k).signed_matrix();
            ensure!(a == lib_matrix(Parity::Odd3, 1, k), "matrix layout differs at k={k}");
            let e = sorted_eigs(&a);
            let zeros = e.iter().filter(|l| l.abs() <= tol).count();
            let min_pos = e.iter().copied().filter(|&l| l > tol).fold(f64::INFINITY, f64::min);
            ensure!(zeros == 1, "k={k}: zero multiplicity {zeros}");
            ensure!((min_pos - 2f64.sqrt()).abs() <= tol, "k={k}: min positive {min_pos}");
            ensure!(sym_defect(&e) <= tol, "k={k}: symmetry defect {}", sym_defect(&e));
            let c = odd3_spectrum_check(k, tol).unwrap();
            ensure!(c.passed && c.zero_multiplicity == 1, "library check failed at k={k}: {c:?}");
        }
        Ok("k = 1..5".into())
    });
}

/// Interval halving on x^3 - 5x^2 + 6x - 1 over [0, 0.5].
fn cubic_root_oracle() -> f64 {
    let p = |x: f64| ((x - 5.0) * x + 6.0) * x - 1.0;
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    assert!(p(lo) < 0.0 && p(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_4_beta_values() {
    run(4, "beta-values", || {
        let b1 = beta(1, 1e-12).unwrap();
        ensure!(b1 == 1.0, "beta(1) = {b1}");
        let e2 = (beta(2, 1e-12).unwrap() - (3.0 - 5f64.sqrt()) / 2.0).abs();
        ensure!(e2 <= 1e-10, "beta(2) error {e2}");
        let e3 = (beta(3, 1e-12).unwrap() - cubic_root_oracle()).abs();
        ensure!(e3 <= 1e-10, "beta(3) error {e3}");
        for n in 1..=12 {
            let e = (beta(n, 1e-13).unwrap() - beta_closed_form(n)).abs();
            ensure!(e <= 1e-10, "beta({n}) off closed form by {e}");
        }
        for n in 1..=50 {
            ensure!(fg_identity_check(n).unwrap(), "fg identity fails at n={n}");
        }
        for n in 1..=8 {
            ensure!(charpoly_a1sq_check(n).unwrap(), "charpoly fails at n={n}");
        }
        Ok(format!("beta(2) err {e2:.1e}, beta(3) err {e3:.1e}"))
    });
}

#[test]
fn criterion_5_even_spectra() {
    run(5, "even-spectra", || {
        let tol = 1e-8;
        let t = Tolerances::default();
        let mut worst = 0.0f64;
        for n in 1..=3 {
            let m = 2 * n;
            let a1 = Grid::new(m, 1).signed_matrix();
            let base = sorted_eigs(&(&a1 * &a1));
            let b = beta_closed_form(n);
            let mut sums = vec![0.0];
            for k in 1..=3 {
                sums = sums.iter().flat_map(|s| base.iter().map(move |x| s + x)).collect();
                sums.sort_by(f64::total_cmp);

                let a = Grid::new(m, k).signed_matrix();
                ensure!(a == lib_matrix(Parity::Even, n, k), "matrix layout differs n={n} k={k}");
                let e = sorted_eigs(&a);
                let expect = (k as f64 * b).sqrt();
                let lib_min = min_positive_eig_even(n, k, &t).unwrap();
                let oracle_min = e.iter().copied().filter(|&l| l > 0.0).fold(f64::INFINITY, f64::min);
                ensure!((lib_min - expect).abs() <= tol, "n={n} k={k}: {lib_min} vs {expect}");
                ensure!((oracle_min - expect).abs() <= tol, "n={n} k={k}: dense {oracle_min} vs {expect}");
                let lib_root = (k as f64 * beta(n, 1e-13).unwrap()).sqrt();
                ensure!((lib_min - lib_root).abs() <= tol, "n={n} k={k}: vs sqrt(k beta)");
                ensure!(e.iter().all(|l| l.abs() > tol), "n={n} k={k}: eigenvalue near zero");
                ensure!(sym_defect(&e) <= tol, "n={n} k={k}: asymmetric spectrum");

                let dense_sq = sorted_eigs(&(&a * &a));
                let comp = composed_square_spectrum_even(n, k, &t).unwrap().eigenvalues;
                let d = max_pointwise(&dense_sq, &comp).max(max_pointwise(&dense_sq, &sums));
                ensure!(d <= 1e-7, "n={n} k={k}: composed vs dense {d}");
                worst = worst.max(d);
            }
        }
        Ok(format!("max composition distance {worst:.1e}"))
    });
}

#[test]
fn criterion_6_exact_integer_structure() {
    run(6, "exact-integer-structure", || {
        for n in 1..=3 {
            for k in [2, 3] {
                ensure!(square_identity_check(Parity::Even, n, k).unwrap(), "square identity n={n} k={k}");
                // Oracle: A_k^2 has (A_1^2)[u_i][v_i] wherever u, v agree off axis i.
                let m = 2 * n;
                let a1 = Grid::new(m, 1).signed_matrix();
                let a1sq = &a1 * &a1;
                let a = Grid::new(m, k).signed_matrix();
                let sq = &a * &a;
                let dim = sq.nrows();
                for u in 0..dim {
                    let cu = coords(u, m, k);
                    for v in 0..dim {
                        let cv = coords(v, m, k);
                        let diff: Vec<usize> = (0..k as usize).filter(|&i| cu[i] != cv[i]).collect();
                        let expect: f64 = match diff.len() {
                            0 => (0..k as usize).map(|i| a1sq[(cu[i] as usize - 1, cu[i] as usize - 1)]).sum(),
                            1 => a1sq[(cu[diff[0]] as usize - 1, cv[diff[0]] as usize - 1)],
                            _ => 0.0,
                        };
                        ensure!(sq[(u, v)] == expect, "A_{k}^2 entry ({u},{v}) n={n}");
                    }
                }
            }
        }
        let mut built = 0;
        let mut cases: Vec<(Parity, u32, u32)> = (1..=5).map(|k| (Parity::Odd3, 1, k)).collect();
        for n in 1..=3 {
            cases.extend((1..=3).map(|k| (Parity::Even, n, k)));
        }
        for (parity, n, k) in cases {
            let m = parity.path_len(n);
            let a = signed::build(parity, n, k, 1 << 16).unwrap();
            let g = PathPower::new(m, k).unwrap();
            ensure!(check_support(&a, &g).unwrap(), "support {parity} n={n} k={k}");
            let expect = 2 * k as usize * (m as usize - 1) * (m as usize).pow(k - 1);
            ensure!(a.nnz() == expect, "nnz {} != {expect} for {parity} n={n} k={k}", a.nnz());
            ensure!(Grid::new(m, k).edges.len() * 2 == expect, "edge count oracle");
            built += 1;
        }
        // A single flipped entry must break the support check.
        let a = signed::build_ak_even(2, 2).unwrap();
        let (j, _) = a.row(0).next().unwrap();
        let bad = a.with_entry(0, j, 0);
        ensure!(!check_support(&bad, &PathPower::new(4, 2).unwrap()).unwrap(), "corruption undetected");
        Ok(format!("{built} matrices"))
    });
}

#[test]
fn criterion_7_huang_bound_chain() {
    run(7, "huang-bound-chain", || {
        let tol = 1e-8;
        let mut min_slack = f64::INFINITY;
        for (seed, parity, n, k) in [(3u64, Parity::Odd3, 1, 2), (4, Parity::Even, 2, 2), (2, Parity::Even, 1, 4)] {
            let m = parity.path_len(n);
            let grid = Grid::new(m, k);
            let a = grid.signed_matrix();
            let lib_a = signed::build(parity, n, k, 1 << 16).unwrap();
            let g = PathPower::new(m, k).unwrap();
            let full = sorted_eigs(&a);
            let size = grid.n.div_ceil(2) + 1;
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ seed);
            for trial in 0..200 {
                let mut members = sample(&mut rng, grid.n, size).into_vec();
                members.sort_unstable();
                let sub = a.select_rows(&members).select_columns(&members);
                let se = sorted_eigs(&sub);
                let lam = *se.last().unwrap();
                let delta = grid.max_degree_in(&members);
                ensure!(delta as f64 >= lam - tol, "m={m} k={k} trial {trial}: Δ={delta} λ={lam}");
                min_slack = min_slack.min(delta as f64 - lam);
                // Cauchy interlacing, ascending order.
                let (big, small) = (full.len(), se.len());
                for i in 0..small {
                    ensure!(
                        full[i] <= se[i] + tol && se[i] <= full[i + big - small] + tol,
                        "interlacing fails m={m} k={k} trial {trial} i={i}"
                    );
                }
                let s = VertexSet::from_ranks(&g, members.iter().copied()).unwrap();
                let h = huang_bound_check(&lib_a, &s, tol).unwrap();
                ensure!(h.passed && h.max_degree == delta, "library bound check m={m} k={k}");
                ensure!(interlacing_check(&a, &sub, tol).unwrap(), "library interlacing m={m} k={k}");
            }
        }
        Ok(format!("600 subsets, min slack {min_slack:.3}"))
    });
}

#[test]
fn criterion_8_hypercube_bound() {
    run(8, "hypercube-bound", || {
        for k in 1..=25u32 {
            let lb = lower_bound_even(1, k).unwrap();
            ensure!(lb == ceil_sqrt(k as u64), "lower_bound_even(1,{k}) = {lb}");
        }
        let r = lib_f(2, 4);
        ensure!(r.value == Some(2) && r.kind == ValueKind::Exact, "f(Q^4) = {:?}", r.value);
        ensure!(oracle_f(2, 4) == 2, "oracle f(Q^4) != 2");
        Ok("f(Q^4) = 2".into())
    });
}

#[test]
fn criterion_9_even_lower_bound_consistency() {
    run(9, "even-lower-bound-consistency", || {
        let r = lib_f(4, 1);
        ensure!(r.value == Some(1) && r.kind == ValueKind::Exact, "f(P_4) = {:?}", r.value);
        ensure!(lower_bound_even(2, 2).unwrap() == 1, "lower_bound_even(2,2)");
        let mut rows = Vec::new();
        for (m, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (4, 1), (4, 2), (6, 1)] {
            let r = lib_f(m, k);
            let v = r.value.unwrap();
            ensure!(r.kind == ValueKind::Exact, "m={m} k={k} inconclusive");
            ensure!(v == oracle_f(m, k), "m={m} k={k}: search {v} vs oracle");
            let lb = lower_bound_even(m / 2, k).unwrap();
            let lb_closed = (k as f64 * beta_closed_form(m / 2)).sqrt().ceil() as u64;
            ensure!(lb == lb_closed, "m={m} k={k}: bound {lb} vs closed form {lb_closed}");
            ensure!(v as u64 >= lb, "m={m} k={k}: f = {v} < bound {lb}");
            rows.push(format!("f(P_{m}^{k})={v}>={lb}"));
        }
        Ok(rows.join(" "))
    });
}
