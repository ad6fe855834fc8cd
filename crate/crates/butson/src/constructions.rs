//! Designed self-dual bent sequences: regular and Bush-type matrices,
//! Kronecker composition, and the Maiorana–McFarland-style families on
//! Fourier and group-invariant matrices.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bent::{verify_bent, BentSolution};
use crate::cyclotomic::{check_multiplier, modular_inverse, CycElt};
use crate::error::Error;
use crate::matrix::{index_to_vec, ButsonMatrix};
use crate::Result;

/// The all-one-direction sequence `u·1` on a regular matrix: a self-dual
/// bent sequence with trivial multiplier and `λ = σ`, the common row sum.
pub fn regular_bent(h: &ButsonMatrix, u: u32) -> Result<BentSolution> {
    let sigma = h.is_regular().ok_or(Error::NotRegular)?;
    let x = vec![u % h.q() as u32; h.n()];
    let lambda = verify_bent(h, &x, 1)?.ok_or(Error::NotRegular)?;
    debug_assert_eq!(lambda, sigma);
    Ok(BentSolution { x, k: 1, lambda })
}

/// Blockwise-constant sequences on a Bush-type matrix: for `H` of order
/// `block²` with the Bush block identity, every choice `u ∈ Z_q^block`
/// yields a self-dual bent sequence with trivial multiplier.
pub fn bush_bent(h: &ButsonMatrix, block: usize, u: &[u32]) -> Result<BentSolution> {
    if !h.is_bush_type(block)? {
        return Err(Error::NotBushType { block });
    }
    if u.len() != block {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: block,
        });
    }
    let q = h.q() as u32;
    let mut x = Vec::with_capacity(h.n());
    for &ui in u {
        x.extend(std::iter::repeat_n(ui % q, block));
    }
    let lambda = verify_bent(h, &x, 1)?.ok_or(Error::NotBushType { block })?;
    Ok(BentSolution { x, k: 1, lambda })
}

/// Kronecker composition of solutions: if `X` is bent for `H` and `Y` for
/// `K` with the same multiplier, `X ⊗ Y` is bent for `H ⊗ K` with
/// `λ = λ_X · λ_Y`. Exponents add on the product grid, first factor most
/// significant, matching [`ButsonMatrix::kronecker`].
pub fn kronecker_bent(a: &BentSolution, b: &BentSolution, q: usize) -> Result<BentSolution> {
    if a.lambda.q() != b.lambda.q() || a.lambda.q() != q {
        return Err(Error::ModulusMismatch {
            left: a.lambda.q(),
            right: b.lambda.q(),
        });
    }
    if a.k != b.k {
        return Err(Error::MultiplierMismatch {
            left: a.k,
            right: b.k,
        });
    }
    let qm = q as u32;
    let mut x = Vec::with_capacity(a.x.len() * b.x.len());
    for &xa in &a.x {
        for &xb in &b.x {
            x.push((xa + xb) % qm);
        }
    }
    let lambda = a.lambda.mul(&b.lambda)?;
    Ok(BentSolution { x, k: a.k, lambda })
}

/// Which matrix family carries the constructed sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MMVariant {
    /// `f(x₁,x₂) = x₁·φ(x₂)` on the Fourier matrix of order `q^{2m}`.
    Plain,
    /// `f(x₁,x₂) = x₁·φ(x₂) − x₁·x₂` on the group-invariant matrix.
    Shifted,
}

/// Parameters of a permutation-defined sequence family.
///
/// `phi` is the image table of a permutation of `Z_q^m`, with vectors
/// flattened least-significant coordinate first (so `phi[i]` is the flat
/// index of `φ(vec(i))`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MMSpec {
    pub q: usize,
    pub m: u32,
    pub variant: MMVariant,
    pub k: usize,
    pub phi: Vec<usize>,
}

impl MMSpec {
    /// The dilation family `φ(x) = d·x` for `gcd(d, q) = 1`.
    pub fn dilation(q: usize, m: u32, d: usize, variant: MMVariant, k: usize) -> Result<MMSpec> {
        check_multiplier(d, q).map_err(|_| Error::InvalidPermutation)?;
        let size = q.pow(m);
        let mlen = m as usize;
        let mut phi = Vec::with_capacity(size);
        let mut v = vec![0u32; mlen];
        for i in 0..size {
            index_to_vec(i, q, &mut v);
            let mut idx = 0usize;
            let mut base = 1usize;
            for &coord in v.iter() {
                idx += ((coord as usize * d) % q) * base;
                base *= q;
            }
            phi.push(idx);
        }
        let spec = MMSpec {
            q,
            m,
            variant,
            k,
            phi,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Check the permutation table, the multiplier, and (for the shifted
    /// variant) that the induced `f` is not the zero map.
    pub fn validate(&self) -> Result<()> {
        if self.q < 2 || self.m < 1 {
            return Err(Error::InvalidInput("require q >= 2 and m >= 1".into()));
        }
        check_multiplier(self.k, self.q)?;
        let size = self.q.pow(self.m);
        if self.phi.len() != size {
            return Err(Error::LengthMismatch {
                left: self.phi.len(),
                right: size,
            });
        }
        let mut seen = vec![false; size];
        for &img in &self.phi {
            if img >= size || seen[img] {
                return Err(Error::InvalidPermutation);
            }
            seen[img] = true;
        }
        if self.variant == MMVariant::Shifted {
            // f(x₁,x₂) = x₁·(φ(x₂) − x₂) is zero exactly when φ = id
            if self.phi.iter().enumerate().all(|(i, &img)| img == i) {
                return Err(Error::ZeroMap);
            }
        }
        Ok(())
    }

    fn f_table(&self) -> Vec<u32> {
        let q = self.q;
        let m = self.m as usize;
        let size = q.pow(self.m);
        let mut vecs: Vec<Vec<u32>> = Vec::with_capacity(size);
        let mut v = vec![0u32; m];
        for i in 0..size {
            index_to_vec(i, q, &mut v);
            vecs.push(v.clone());
        }
        let dot = |a: &[u32], b: &[u32]| -> u32 {
            let mut acc = 0u64;
            for (&x, &y) in a.iter().zip(b) {
                acc += x as u64 * y as u64;
            }
            (acc % q as u64) as u32
        };
        let mut table = Vec::with_capacity(size * size);
        for x2 in 0..size {
            for x1 in 0..size {
                // flat index of (x₁, x₂) is x1 + size·x2 (x₁ first)
                let val = match self.variant {
                    MMVariant::Plain => dot(&vecs[x1], &vecs[self.phi[x2]]),
                    MMVariant::Shifted => {
                        let a = dot(&vecs[x1], &vecs[self.phi[x2]]);
                        let b = dot(&vecs[x1], &vecs[x2]);
                        (a + q as u32 - b) % q as u32
                    }
                };
                table.push(val);
            }
        }
        table
    }
}

/// Build the matrix and the exponent vector for an [`MMSpec`]. Bentness
/// is *not* asserted; pair with [`check_mm_condition`] or
/// [`verify_bent`](crate::bent::verify_bent). The exponent at flat index
/// `(x₁, x₂)` is `f(x₁, x₂)` under the module's shared index ordering.
pub fn mm_sequence(spec: &MMSpec) -> Result<(ButsonMatrix, Vec<u32>)> {
    spec.validate()?;
    let h = match spec.variant {
        MMVariant::Plain => ButsonMatrix::fourier(spec.q, 2 * spec.m),
        MMVariant::Shifted => ButsonMatrix::group_invariant(spec.q, spec.m),
    };
    Ok((h, spec.f_table()))
}

/// Exhaustively check the algebraic condition equivalent to bentness:
///
/// - plain: `x₁·x₂ + k·φ(x₁)·φ(x₂) = 0` for all `x₁, x₂ ∈ Z_q^m`;
/// - shifted: `k·x₁·φ²(x₂) − (k+1)·x₁·φ(x₂) + x₁·x₂ = 0` for all pairs.
///
/// When the condition holds, the constructed sequence verifies with
/// `λ = q^m`.
pub fn check_mm_condition(spec: &MMSpec) -> Result<bool> {
    spec.validate()?;
    let q = spec.q;
    let m = spec.m as usize;
    let size = q.pow(spec.m);
    let mut vecs: Vec<Vec<u32>> = Vec::with_capacity(size);
    let mut v = vec![0u32; m];
    for i in 0..size {
        index_to_vec(i, q, &mut v);
        vecs.push(v.clone());
    }
    let dot = |a: usize, b: usize| -> u64 {
        let mut acc = 0u64;
        for (&x, &y) in vecs[a].iter().zip(&vecs[b]) {
            acc += x as u64 * y as u64;
        }
        acc
    };
    let k = spec.k as u64;
    let qq = q as u64;
    let ok = (0..size).into_par_iter().all(|x1| {
        (0..size).all(|x2| match spec.variant {
            MMVariant::Plain => {
                (dot(x1, x2) + k * dot(spec.phi[x1], spec.phi[x2])).is_multiple_of(qq)
            }
            MMVariant::Shifted => {
                let phi2 = spec.phi[spec.phi[x2]];
                let lhs = k * dot(x1, phi2) + dot(x1, x2);
                let rhs = (k + 1) * dot(x1, spec.phi[x2]);
                // compare mod q without negative values
                (lhs % qq + qq - rhs % qq).is_multiple_of(qq)
            }
        })
    });
    Ok(ok)
}

/// The multiplier sets that make dilations work:
/// `S1 = {−d⁻² mod q : gcd(d,q) = 1}` for the plain variant and
/// `S2 = {d⁻¹ mod q : gcd(d,q) = 1, d ≠ 1}` for the shifted one.
pub fn dilation_k_sets(q: usize) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut s1 = BTreeSet::new();
    let mut s2 = BTreeSet::new();
    for d in 1..q {
        if let Some(dinv) = modular_inverse(d, q) {
            let dsq_inv = (dinv * dinv) % q;
            s1.insert((q - dsq_inv % q) % q);
            if d != 1 {
                s2.insert(dinv);
            }
        }
    }
    (s1, s2)
}

/// λ for a satisfied condition: the rational integer `q^m`.
pub fn mm_lambda(q: usize, m: u32) -> CycElt {
    CycElt::integer(q, q.pow(m) as i64)
}
