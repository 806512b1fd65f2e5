//! Exact integer polynomials, the `f_n` / `g_n` recurrences and `beta_n`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::signed::{bareiss_det, build_a1_even, IntMatrix};

/// Polynomial with exact integer coefficients in ascending degree. The zero
/// polynomial has no coefficients; otherwise the leading one is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        let mut p = Self {
            coeffs: coeffs.into_iter().collect(),
        };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)))
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x - c`.
    pub fn linear(c: i64) -> Self {
        Self::from_i64(&[-c, 1])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Interpolates the unique polynomial of degree `< points.len()` through
    /// `(i, values[i])`, `i = 0, 1, ..`. Errors if it is not integral.
    pub fn interpolate_at_naturals(values: &[BigInt]) -> Result<Self> {
        // Newton forward differences on the nodes 0, 1, .., d.
        let d = values.len();
        let mut diffs: Vec<BigRational> = values.iter().cloned().map(BigRational::from_integer).collect();
        let mut newton = Vec::with_capacity(d);
        for level in 0..d {
            newton.push(diffs[0].clone());
            for i in 0..d - level - 1 {
                diffs[i] = (&diffs[i + 1] - &diffs[i]) / BigRational::from_integer(BigInt::from(level + 1));
            }
        }
        // Expand sum_j c_j * x (x-1) .. (x-j+1).
        let mut out = vec![BigRational::zero(); d.max(1)];
        let mut basis = vec![BigRational::one()];
        for (j, c) in newton.iter().enumerate() {
            for (i, b) in basis.iter().enumerate() {
                out[i] += c * b;
            }
            // basis *= (x - j)
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b;
                next[i] -= b * BigRational::from_integer(BigInt::from(j));
            }
            basis = next;
        }
        let coeffs = out
            .into_iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::Parse(format!("non-integral interpolated coefficient {c}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        IntPolynomial::new((0..len).map(|i| {
            self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero)
        }))
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c))
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Shared three-term recurrence `p_k = (x - 2) p_(k-1) - p_(k-2)`.
fn recurrence(p0: IntPolynomial, p1: IntPolynomial, n: u32) -> IntPolynomial {
    if n == 0 {
        return p0;
    }
    let shift = IntPolynomial::linear(2);
    let (mut prev, mut cur) = (p0, p1);
    for _ in 1..n {
        let next = &(&shift * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `f_0 = 1`, `f_1 = x - 2`, `f_k = (x - 2) f_(k-1) - f_(k-2)`.
pub fn poly_f(n: u32) -> IntPolynomial {
    recurrence(IntPolynomial::one(), IntPolynomial::linear(2), n)
}

/// `g_0 = 1`, `g_1 = x - 1`, `g_k = (x - 2) g_(k-1) - g_(k-2)`.
pub fn poly_g(n: u32) -> IntPolynomial {
    recurrence(IntPolynomial::one(), IntPolynomial::linear(1), n)
}

/// `g_n == f_n + f_(n-1)` coefficientwise.
pub fn fg_identity_check(n: u32) -> Result<bool> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    Ok(poly_g(n) == &poly_f(n) + &poly_f(n - 1))
}

/// `g_n(x)` evaluated by the recurrence directly in floating point.
pub fn eval_g(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, x - 1.0);
    for _ in 1..n {
        let next = (x - 2.0) * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Bracketing grid for `beta`: spacing `4 / BETA_GRID_STEPS` on `(0, 4]`.
pub const BETA_GRID_STEPS: usize = 4000;
const BETA_MAX_REFINE: u32 = 3;

/// Smallest positive root of `g_n`, to within `tol`.
///
/// All `n` roots lie in `(0, 4)`. The root is bracketed on a uniform grid
/// after confirming that the grid sees exactly `n` sign changes (refining the
/// grid tenfold otherwise), then bisected.
pub fn beta(n: u32, tol: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let mut steps = BETA_GRID_STEPS;
    for _ in 0..=BETA_MAX_REFINE {
        let scan = scan_sign_changes(n, steps);
        if scan.roots == n as usize {
            let (lo, hi) = scan.first.expect("n >= 1 roots found");
            return Ok(bisect(n, lo, hi, tol));
        }
        steps *= 10;
    }
    Err(Error::Bracketing(format!(
        "g_{n} shows the wrong number of sign changes on (0, 4] even at {} grid points",
        steps / 10
    )))
}

struct Scan {
    roots: usize,
    /// First bracket; `lo == hi` for an exact zero on the grid.
    first: Option<(f64, f64)>,
}

fn scan_sign_changes(n: u32, steps: usize) -> Scan {
    let grid = |i: usize| 4.0 * i as f64 / steps as f64;
    let mut prev_sign = eval_g(n, 0.0).signum();
    let mut prev_x = 0.0;
    let mut after_zero = false;
    let mut scan = Scan {
        roots: 0,
        first: None,
    };
    for i in 1..=steps {
        let x = grid(i);
        let v = eval_g(n, x);
        if v == 0.0 {
            scan.roots += 1;
            scan.first.get_or_insert((x, x));
            after_zero = true;
        } else {
            if v.signum() != prev_sign && !after_zero {
                scan.roots += 1;
                scan.first.get_or_insert((prev_x, x));
            }
            prev_sign = v.signum();
            after_zero = false;
        }
        prev_x = x;
    }
    scan
}

fn bisect(n: u32, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    let lo_sign = eval_g(n, lo).signum();
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = eval_g(n, mid);
        if v == 0.0 {
            return mid;
        }
        if v.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact characteristic polynomial `det(xI - M)` of an integer matrix, by
/// fraction-free determinants at `x = 0..=dim` and interpolation.
pub fn charpoly_exact(m: &IntMatrix) -> Result<IntPolynomial> {
    let d = m.dim();
    let dense = m.to_dense_i64();
    let values: Vec<BigInt> = (0..=d as i64)
        .map(|x| {
            let shifted = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| BigInt::from(if i == j { x } else { 0 } - dense[i][j]))
                        .collect()
                })
                .collect();
            bareiss_det(shifted)
        })
        .collect();
    IntPolynomial::interpolate_at_naturals(&values)
}

/// `det(xI - A_1^2) == g_n(x)^2` exactly, for the even `A_1` of order `2n`.
pub fn charpoly_a1sq_check(n: u32) -> Result<bool> {
    let a = build_a1_even(n)?.to_int();
    let cp = charpoly_exact(&a.mul(&a))?;
    let g = poly_g(n);
    Ok(cp == &g * &g)
}
