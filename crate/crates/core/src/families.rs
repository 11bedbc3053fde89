//! Exact ground truth for the two infinite families: the `K_2`-gadget
//! graphs `G_n` and the weighted paths `X_n`.
//!
//! Everything factorial-sized is computed with big integers or big
//! rationals; only the final `sqrt(n)` factor is applied in floating point.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Integer polynomial, coefficients in ascending degree. The zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn shift(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(BigInt::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
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
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        IntPolynomial::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
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
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{a}x^{k}")?,
            }
        }
        Ok(())
    }
}

fn need(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::BadParam(format!("{what} needs n >= 1")))
    } else {
        Ok(())
    }
}

/// Characteristic polynomials of the leading principal submatrices of the
/// adjacency matrix of `X_n`: `p[k]` for size `2k`, `q[k]` for size `2k+1`.
///
/// `p_0 = 1`, `q_0 = x`,
/// `p_k = x q_{k-1} - k(n-k+1) p_{k-1}` for `1 <= k <= n`,
/// `q_k = x p_k - k(n-k) q_{k-1}` for `1 <= k <= n-1`.
#[derive(Debug, Clone)]
pub struct XnRecursion {
    pub n: usize,
    pub p: Vec<IntPolynomial>,
    pub q: Vec<IntPolynomial>,
}

pub fn xn_recursion(n: usize) -> Result<XnRecursion> {
    need(n, "xn_recursion")?;
    let x = IntPolynomial::x();
    let mut p = vec![IntPolynomial::one()];
    let mut q = vec![x.clone()];
    for k in 1..=n {
        let pk = &q[k - 1].shift() - &p[k - 1].scale(&BigInt::from(k * (n - k + 1)));
        p.push(pk);
        if k < n {
            let qk = &p[k].shift() - &q[k - 1].scale(&BigInt::from(k * (n - k)));
            q.push(qk);
        }
    }
    Ok(XnRecursion { n, p, q })
}

/// Characteristic polynomial of the adjacency matrix of `X_n`.
pub fn xn_charpoly(n: usize) -> Result<IntPolynomial> {
    Ok(xn_recursion(n)?.p.pop().expect("recursion has p_n"))
}

/// `prod_{k=1}^n (x^2 - k^2)`.
pub fn signed_square_product(n: usize) -> IntPolynomial {
    (1..=n as i64).fold(IntPolynomial::one(), |acc, k| {
        &acc * &IntPolynomial::from_i64(&[-(k * k), 0, 1])
    })
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// `(2n)! / (n! (n+1)!)`.
pub fn catalan(n: usize) -> BigInt {
    factorial(2 * n) / (factorial(n) * factorial(n + 1))
}

/// Rational part of `(E_{+-k})_{w_1, w_n}`:
/// `(-1)^{n-k} k^2 ((n-1)!)^2 binom(2n, n+k) / (2n)!`; the entry itself is
/// this times `sqrt(n)`.
pub fn xn_idempotent_entry_rational(n: usize, k: usize) -> Result<BigRational> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::BadParam(format!(
            "need 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let f = factorial(n - 1);
    let num = BigInt::from(k * k) * &f * &f * binomial(2 * n as i64, (n + k) as i64);
    let sign = if (n - k).is_multiple_of(2) { 1 } else { -1 };
    Ok(BigRational::new(num * sign, factorial(2 * n)))
}

/// `(E_{+-k})_{w_1, w_n}` for the adjacency matrix of `X_n`.
pub fn xn_idempotent_entry(n: usize, k: usize) -> Result<f64> {
    let r = xn_idempotent_entry_rational(n, k)?;
    Ok(r.to_f64().expect("finite rational") * (n as f64).sqrt())
}

/// Rational part of `B(A_n)_{w_1,w_n}`, i.e. `2 * 4^{n-1} / ((n+1) C_n)`;
/// the bound is this divided by `sqrt(n)`.
pub fn xn_bound_rational(n: usize) -> Result<BigRational> {
    need(n, "xn_bound")?;
    let num = BigInt::from(2) * BigInt::from(4).pow((n - 1) as u32);
    Ok(BigRational::new(num, BigInt::from(n + 1) * catalan(n)))
}

/// `B(A_n)_{w_1,w_n}` through the ratio recursion
/// `B(n+1) = 2 sqrt(n(n+1)) / (2n+1) * B(n)`, `B(1) = 1`.
pub fn xn_bound(n: usize) -> Result<f64> {
    need(n, "xn_bound")?;
    let mut b = 1.0;
    for m in 1..n {
        let m = m as f64;
        b *= 2.0 * (m * (m + 1.0)).sqrt() / (2.0 * m + 1.0);
    }
    Ok(b)
}

/// Closed-form `B(A_n)_{w_1,w_n} = 2 4^{n-1} / (sqrt(n) (n+1) C_n)`.
pub fn xn_bound_closed(n: usize) -> Result<f64> {
    Ok(xn_bound_rational(n)?.to_f64().expect("finite") / (n as f64).sqrt())
}

/// `sqrt(pi) / 2`, the limit of [`xn_bound`].
pub fn xn_bound_limit() -> f64 {
    PI.sqrt() / 2.0
}

#[derive(Debug, Clone, Serialize)]
pub struct XnFacts {
    pub n: usize,
    /// `n, n-1, ..., 1, -1, ..., -n`.
    pub eigenvalues: Vec<i64>,
    /// `(k, (E_{+-k})_{w_1,w_n})` for `k = 1..n`.
    pub idempotent_entries: Vec<(usize, f64)>,
    pub bound: f64,
    pub probability: f64,
    pub tau0: f64,
    /// Largest eigenvalue of the positive support.
    pub theta_s: i64,
    /// `pi * theta_s` reduced to `[0, 2 pi)`.
    pub phase: f64,
}

pub fn xn_facts(n: usize) -> Result<XnFacts> {
    need(n, "xn_facts")?;
    let n_i = n as i64;
    let eigenvalues: Vec<i64> = (1..=n_i).rev().chain((1..=n_i).map(|k| -k)).collect();
    let idempotent_entries = (1..=n)
        .map(|k| xn_idempotent_entry(n, k).map(|e| (k, e)))
        .collect::<Result<Vec<_>>>()?;
    let bound = xn_bound(n)?;
    // Entries are positive exactly for k of the parity of n, so the positive
    // support tops out at n itself. With theta_s = n every c_r = n - theta_r
    // and the gcd is 1, giving tau0 = pi. For n = 1 the pair is a single
    // vertex whose support {1, -1} is all positive and the walk returns at
    // multiples of pi.
    let theta_s = n_i;
    let tau0 = PI;
    let phase = (tau0 * theta_s as f64).rem_euclid(2.0 * PI);
    Ok(XnFacts {
        n,
        eigenvalues,
        idempotent_entries,
        bound,
        probability: bound * bound,
        tau0,
        theta_s,
        phase: if (2.0 * PI - phase) < 1e-9 {
            0.0
        } else {
            phase
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GnFacts {
    pub n: usize,
    /// `sqrt(2n+1), 1, 0, -1, -sqrt(2n+1)`; `+-1` have multiplicity `n - 1`
    /// and are absent for `n = 1`.
    pub spectrum: Vec<f64>,
    /// `2n / (2n+1)`.
    pub bound: f64,
    /// `2 n^2 / (4n^2 + 2n) + n / (2n+1)`, summed from the idempotents.
    pub bound_from_idempotents: f64,
    pub tau0: f64,
    /// Squarefree part of `2n+1` and the matching `g`, `g^2 D = 2n+1`.
    #[serde(rename = "D")]
    pub d: u64,
    pub g: u64,
}

pub fn gn_facts(n: usize) -> Result<GnFacts> {
    need(n, "gn_facts")?;
    let nf = n as f64;
    let r = (2.0 * nf + 1.0).sqrt();
    let d = crate::peak::squarefree_part(2 * n as u64 + 1);
    let g = (((2 * n + 1) as u64 / d) as f64).sqrt().round() as u64;
    Ok(GnFacts {
        n,
        spectrum: if n == 1 {
            vec![r, 0.0, -r]
        } else {
            vec![r, 1.0, 0.0, -1.0, -r]
        },
        bound: 2.0 * nf / (2.0 * nf + 1.0),
        bound_from_idempotents: 2.0 * nf * nf / (4.0 * nf * nf + 2.0 * nf) + nf / (2.0 * nf + 1.0),
        tau0: PI / r,
        d,
        g,
    })
}
