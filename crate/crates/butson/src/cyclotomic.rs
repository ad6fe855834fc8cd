//! Exact arithmetic in `Z[ζ_q]` with Galois multipliers.
//!
//! Elements are kept in group-ring form: a length-`q` integer vector
//! `(a_0, …, a_{q-1})` standing for `Σ a_i ζ_q^i` in `Z[x]/(x^q − 1)`.
//! Root-of-unity products and multiplier maps are plain index shifts in
//! this representation, so search kernels never allocate; reduction modulo
//! the cyclotomic polynomial `Φ_q` happens only when equality is decided.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use nalgebra::Complex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// An element of `Z[ζ_q]` in group-ring coefficient form.
///
/// `coeffs[i]` is the coefficient of `ζ_q^i`; the vector always has length
/// exactly `q`. Two elements are equal when their difference reduces to zero
/// modulo `Φ_q`, which [`PartialEq`] implements.
#[derive(Debug, Clone)]
pub struct CycElt {
    q: usize,
    coeffs: Vec<BigInt>,
}

impl CycElt {
    /// The zero element of `Z[ζ_q]`.
    pub fn zero(q: usize) -> Self {
        assert!(q >= 1, "q must be positive");
        CycElt {
            q,
            coeffs: vec![BigInt::zero(); q],
        }
    }

    /// The rational integer `m` as an element of `Z[ζ_q]`.
    pub fn integer(q: usize, m: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(q);
        z.coeffs[0] = m.into();
        z
    }

    /// The multiplicative identity.
    pub fn one(q: usize) -> Self {
        Self::integer(q, 1)
    }

    /// The root of unity `ζ_q^r` (exponent taken mod `q`).
    pub fn root(q: usize, r: i64) -> Self {
        let mut z = Self::zero(q);
        let idx = r.rem_euclid(q as i64) as usize;
        z.coeffs[idx] = BigInt::from(1);
        z
    }

    /// Build from an explicit coefficient vector of length `q`.
    pub fn from_coeffs(q: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != q {
            return Err(Error::LengthMismatch {
                left: coeffs.len(),
                right: q,
            });
        }
        Ok(CycElt { q, coeffs })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64_coeffs(q: usize, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(q, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Root order `q`.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Raw group-ring coefficients (not necessarily reduced).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Canonical representative: the remainder of the coefficient polynomial
    /// modulo `Φ_q`, padded back to length `q`. Idempotent; all indices at
    /// and above `deg Φ_q = φ(q)` are zero in the result.
    pub fn reduce_canonical(&self) -> CycElt {
        let ctx = reduce_ctx(self.q);
        let mut coeffs = self.coeffs.clone();
        ctx.reduce_big(&mut coeffs);
        CycElt { q: self.q, coeffs }
    }

    /// Whether the element is zero in `Z[ζ_q]`.
    pub fn is_zero(&self) -> bool {
        let ctx = reduce_ctx(self.q);
        if let Some(small) = to_i64_vec(&self.coeffs) {
            if let Some(ans) = ctx.is_zero_i64(&small) {
                return ans;
            }
        }
        let mut coeffs = self.coeffs.clone();
        ctx.reduce_big(&mut coeffs);
        coeffs.iter().all(BigInt::is_zero)
    }

    fn check_q(&self, other: &CycElt) -> Result<()> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch {
                left: self.q,
                right: other.q,
            });
        }
        Ok(())
    }

    /// Exact sum. Errors on mismatched root orders.
    pub fn add(&self, other: &CycElt) -> Result<CycElt> {
        self.check_q(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycElt { q: self.q, coeffs })
    }

    /// Exact difference.
    pub fn sub(&self, other: &CycElt) -> Result<CycElt> {
        self.check_q(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycElt { q: self.q, coeffs })
    }

    /// Additive inverse.
    pub fn neg(&self) -> CycElt {
        CycElt {
            q: self.q,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Exact product: cyclic convolution of the coefficient vectors.
    pub fn mul(&self, other: &CycElt) -> Result<CycElt> {
        self.check_q(other)?;
        let q = self.q;
        let mut coeffs = vec![BigInt::zero(); q];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % q;
                coeffs[k] += a * b;
            }
        }
        Ok(CycElt { q, coeffs })
    }

    /// The Galois multiplier `μ_k: Σ a_i ζ^i ↦ Σ a_i ζ^{ki}`.
    /// Requires `gcd(k, q) = 1`.
    pub fn apply_multiplier(&self, k: usize) -> Result<CycElt> {
        check_multiplier(k, self.q)?;
        let q = self.q;
        let mut coeffs = vec![BigInt::zero(); q];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[(i * k) % q] = a.clone();
        }
        Ok(CycElt { q, coeffs })
    }

    /// Complex conjugation, i.e. `μ_{q-1}`.
    pub fn conj(&self) -> CycElt {
        if self.q == 1 {
            return self.clone();
        }
        self.apply_multiplier(self.q - 1)
            .expect("q-1 is always coprime to q")
    }

    /// `|z|² = z · conj(z)`, exactly, in canonical form.
    pub fn norm_sq(&self) -> CycElt {
        self.mul(&self.conj())
            .expect("same modulus")
            .reduce_canonical()
    }

    /// The integer `m` when the canonical form is the constant `m`.
    pub fn as_integer(&self) -> Option<BigInt> {
        let red = self.reduce_canonical();
        if red.coeffs[1..].iter().all(BigInt::is_zero) {
            Some(red.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Standard embedding `ζ_q ↦ exp(2πi/q)`.
    pub fn embed(&self) -> Complex<f64> {
        let q = self.q as f64;
        let mut acc = Complex::new(0.0, 0.0);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * (i as f64) / q;
            let c = a.to_f64().expect("finite coefficient");
            acc += Complex::new(c * theta.cos(), c * theta.sin());
        }
        acc
    }

    /// Canonical coefficients as machine integers, when they fit.
    pub fn to_i64_coeffs(&self) -> Option<Vec<i64>> {
        self.reduce_canonical()
            .coeffs
            .iter()
            .map(BigInt::to_i64)
            .collect()
    }

    /// Canonical coefficient vector, usable as an ordering / grouping key.
    pub fn canonical_key(&self) -> Vec<BigInt> {
        self.reduce_canonical().coeffs
    }

    /// Scale by `ζ_q^r`: a cyclic shift of the coefficients.
    pub fn mul_root(&self, r: i64) -> CycElt {
        let q = self.q;
        let shift = r.rem_euclid(q as i64) as usize;
        let mut coeffs = vec![BigInt::zero(); q];
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs[(i + shift) % q] = a.clone();
        }
        CycElt { q, coeffs }
    }
}

impl PartialEq for CycElt {
    fn eq(&self, other: &Self) -> bool {
        if self.q != other.q {
            return false;
        }
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }
}

impl Eq for CycElt {}

impl std::fmt::Display for CycElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let red = self.reduce_canonical();
        let mut first = true;
        for (i, a) in red.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*z")?,
                _ => write!(f, "{a}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Validate that `k` is a legal multiplier index for root order `q`.
pub fn check_multiplier(k: usize, q: usize) -> Result<()> {
    if q == 0 || k == 0 || k.gcd(&q) != 1 {
        return Err(Error::InvalidMultiplier { k, q });
    }
    Ok(())
}

/// Multiplicative order of `k` modulo `q` (the `t` with `μ_k^t = id`).
pub fn multiplicative_order(k: usize, q: usize) -> Result<usize> {
    check_multiplier(k, q)?;
    if q == 1 {
        return Ok(1);
    }
    let mut t = 1usize;
    let mut acc = k % q;
    while acc != 1 {
        acc = (acc * k) % q;
        t += 1;
    }
    Ok(t)
}

/// Inverse of `a` modulo `q`, when `gcd(a, q) = 1`.
pub fn modular_inverse(a: usize, q: usize) -> Option<usize> {
    if q == 1 {
        return Some(0);
    }
    let a = (a % q) as i64;
    let q = q as i64;
    let e = a.extended_gcd(&q);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(q) as usize)
}

/// All divisors of `n`, ascending.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut d = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            d.push(i);
            if i != n / i {
                d.push(n / i);
            }
        }
        i += 1;
    }
    d.sort_unstable();
    d
}

/// Euler totient.
pub fn totient(n: usize) -> usize {
    let mut result = n;
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `q`-th cyclotomic polynomial `Φ_q`, as coefficients from degree 0 up
/// (monic). Computed by exact division of `x^q − 1` by the `Φ_d` for proper
/// divisors `d | q`, and cached per `q`.
pub fn cyclotomic_poly(q: usize) -> Arc<Vec<BigInt>> {
    static CACHE: LazyLock<Mutex<HashMap<usize, Arc<Vec<BigInt>>>>> =
        LazyLock::new(|| Mutex::new(HashMap::new()));
    if let Some(p) = CACHE.lock().unwrap().get(&q) {
        return p.clone();
    }
    let poly = Arc::new(compute_cyclotomic(q));
    CACHE.lock().unwrap().insert(q, poly.clone());
    poly
}

fn compute_cyclotomic(q: usize) -> Vec<BigInt> {
    assert!(q >= 1);
    if q == 1 {
        return vec![BigInt::from(-1), BigInt::from(1)];
    }
    // x^q - 1
    let mut num = vec![BigInt::zero(); q + 1];
    num[0] = BigInt::from(-1);
    num[q] = BigInt::from(1);
    for d in divisors(q) {
        if d == q {
            continue;
        }
        let div = cyclotomic_poly(d);
        num = poly_div_exact(&num, &div);
    }
    num
}

/// Exact division of integer polynomials; `b` must be monic and divide `a`.
fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let bd = b.len() - 1;
    debug_assert!(b[bd] == BigInt::from(1), "divisor must be monic");
    let mut rem: Vec<BigInt> = a.to_vec();
    let qd = a.len() - 1 - bd;
    let mut quot = vec![BigInt::zero(); qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + bd].clone();
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
    }
    debug_assert!(rem.iter().all(BigInt::is_zero), "division must be exact");
    quot
}

/// Per-`q` reduction context: `Φ_q` in both machine-size and exact forms.
pub(crate) struct ReduceCtx {
    pub deg: usize,
    phi_big: Arc<Vec<BigInt>>,
    phi_i64: Option<Vec<i64>>,
}

pub(crate) fn reduce_ctx(q: usize) -> Arc<ReduceCtx> {
    static CACHE: LazyLock<Mutex<HashMap<usize, Arc<ReduceCtx>>>> =
        LazyLock::new(|| Mutex::new(HashMap::new()));
    if let Some(ctx) = CACHE.lock().unwrap().get(&q) {
        return ctx.clone();
    }
    let phi_big = cyclotomic_poly(q);
    let phi_i64 = phi_big
        .iter()
        .map(BigInt::to_i64)
        .collect::<Option<Vec<i64>>>();
    let ctx = Arc::new(ReduceCtx {
        deg: phi_big.len() - 1,
        phi_big,
        phi_i64,
    });
    CACHE.lock().unwrap().insert(q, ctx.clone());
    ctx
}

impl ReduceCtx {
    /// Reduce a length-`q` coefficient vector modulo `Φ_q` in place.
    pub fn reduce_big(&self, coeffs: &mut [BigInt]) {
        let deg = self.deg;
        for i in (deg..coeffs.len()).rev() {
            if coeffs[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut coeffs[i]);
            for (j, pj) in self.phi_big.iter().take(deg).enumerate() {
                if !pj.is_zero() {
                    coeffs[i - deg + j] -= &c * pj;
                }
            }
        }
    }

    /// Fast zero test on machine-integer coefficients. Returns `None` when
    /// intermediate values would not fit in `i128` (caller falls back to the
    /// exact big-integer path).
    pub fn is_zero_i64(&self, coeffs: &[i64]) -> Option<bool> {
        let phi = self.phi_i64.as_deref()?;
        let deg = self.deg;
        let mut work: Vec<i128> = coeffs.iter().map(|&c| c as i128).collect();
        for i in (deg..work.len()).rev() {
            let c = work[i];
            if c == 0 {
                continue;
            }
            work[i] = 0;
            for j in 0..deg {
                let p = phi[j] as i128;
                if p != 0 {
                    let term = c.checked_mul(p)?;
                    work[i - deg + j] = work[i - deg + j].checked_sub(term)?;
                }
            }
        }
        Some(work.iter().all(|&c| c == 0))
    }
}

fn to_i64_vec(coeffs: &[BigInt]) -> Option<Vec<i64>> {
    coeffs.iter().map(BigInt::to_i64).collect()
}

/// Compare two elements by their canonical coefficient vectors
/// (lexicographic); the total order used to report λ tables.
pub fn canonical_cmp(a: &CycElt, b: &CycElt) -> std::cmp::Ordering {
    a.canonical_key().cmp(&b.canonical_key())
}
