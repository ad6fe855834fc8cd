//! Butson matrices in logarithmic form: exact verification, equivalence
//! transforms, construction generators, the text codec, and the attached
//! `Z_q` codes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cyclotomic::{check_multiplier, reduce_ctx, CycElt};
use crate::error::Error;
use crate::Result;

/// An `n×n` Butson-type matrix over the `q`-th roots of unity, stored in
/// logarithmic form: `H[i][j] = ζ_q^{L[i][j]}` with `0 ≤ L[i][j] < q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ButsonMatrix {
    n: usize,
    q: usize,
    log: Vec<u32>, // row-major, n*n entries in [0, q)
}

impl ButsonMatrix {
    /// Build from explicit log rows, validating the entry range.
    pub fn new(n: usize, q: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        if q < 1 || n < 1 {
            return Err(Error::InvalidInput("n and q must be positive".into()));
        }
        if rows.len() != n {
            return Err(Error::LengthMismatch {
                left: rows.len(),
                right: n,
            });
        }
        let mut log = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    left: row.len(),
                    right: n,
                });
            }
            for &e in row {
                if e as usize >= q {
                    return Err(Error::EntryOutOfRange { entry: e as i64, q });
                }
                log.push(e);
            }
        }
        Ok(ButsonMatrix { n, q, log })
    }

    /// Order of the matrix.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Root order.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Log entry at `(i, j)`.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.log[i * self.n + j]
    }

    /// Log row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.log[i * self.n..(i + 1) * self.n]
    }

    /// The 1×1 identity over the `q`-th roots (`A ⊗ I₁ = A`).
    pub fn scalar_one(q: usize) -> Self {
        ButsonMatrix {
            n: 1,
            q,
            log: vec![0],
        }
    }

    /// The Fourier-type matrix of order `q^r`: rows and columns indexed by
    /// `Z_q^r` in lexicographic order with the least-significant coordinate
    /// varying fastest, entry `x·y mod q`.
    pub fn fourier(q: usize, r: u32) -> Self {
        assert!(q >= 2 && r >= 1, "fourier requires q >= 2, r >= 1");
        let n = q.checked_pow(r).expect("fourier order q^r overflows usize");
        let mut log = vec![0u32; n * n];
        let mut xv = vec![0u32; r as usize];
        for x in 0..n {
            index_to_vec(x, q, &mut xv);
            let mut yv = vec![0u32; r as usize];
            for y in 0..n {
                index_to_vec(y, q, &mut yv);
                log[x * n + y] = dot_mod(&xv, &yv, q);
            }
        }
        ButsonMatrix { n, q, log }
    }

    /// The `Z_q^{2m}`-group-invariant matrix of order `q^{2m}`: rows and
    /// columns indexed by pairs `(x₁, x₂) ∈ Z_q^m × Z_q^m` (flattened with
    /// the same least-significant-first convention, `x₁` first), entry
    /// `(x₁−y₁)·(x₂−y₂) mod q`.
    pub fn group_invariant(q: usize, m: u32) -> Self {
        assert!(q >= 2 && m >= 1, "group_invariant requires q >= 2, m >= 1");
        let n = q
            .checked_pow(2 * m)
            .expect("group-invariant order q^{2m} overflows usize");
        let m = m as usize;
        let mut log = vec![0u32; n * n];
        let mut xv = vec![0u32; 2 * m];
        let mut yv = vec![0u32; 2 * m];
        let mut d1 = vec![0u32; m];
        let mut d2 = vec![0u32; m];
        for x in 0..n {
            index_to_vec(x, q, &mut xv);
            for y in 0..n {
                index_to_vec(y, q, &mut yv);
                for t in 0..m {
                    d1[t] = sub_mod(xv[t], yv[t], q);
                    d2[t] = sub_mod(xv[m + t], yv[m + t], q);
                }
                log[x * n + y] = dot_mod(&d1, &d2, q);
            }
        }
        ButsonMatrix { n, q, log }
    }

    /// Kronecker product; log entries add mod `q`. The first factor indexes
    /// the most significant block, matching the Fourier indexing so that
    /// `F_q ⊗ F_q = fourier(q, 2)` exactly.
    pub fn kronecker(&self, other: &ButsonMatrix) -> Result<ButsonMatrix> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch {
                left: self.q,
                right: other.q,
            });
        }
        let (na, nb, q) = (self.n, other.n, self.q as u32);
        let n = na * nb;
        let mut log = vec![0u32; n * n];
        for ia in 0..na {
            for ib in 0..nb {
                let i = ia * nb + ib;
                for ja in 0..na {
                    let ea = self.entry(ia, ja);
                    for jb in 0..nb {
                        let j = ja * nb + jb;
                        log[i * n + j] = (ea + other.entry(ib, jb)) % q;
                    }
                }
            }
        }
        Ok(ButsonMatrix { n, q: self.q, log })
    }

    /// Exact Butson verification: `HH* = nI` over `Z[ζ_q]`.
    ///
    /// For every row pair the multiset of entry differences must sum to zero
    /// in the ring; checked by reduction modulo `Φ_q`, never by floats.
    pub fn verify_butson(&self) -> bool {
        let n = self.n;
        let q = self.q;
        let ctx = reduce_ctx(q);
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        pairs.par_iter().all(|&(i, j)| {
            let mut counts = vec![0i64; q];
            let (ri, rj) = (self.row(i), self.row(j));
            for s in 0..n {
                let d = sub_mod(ri[s], rj[s], q);
                counts[d as usize] += 1;
            }
            match ctx.is_zero_i64(&counts) {
                Some(ans) => ans,
                None => counts_to_cyc(q, &counts).is_zero(),
            }
        })
    }

    /// Dephased equivalent form: scale row `i` by `ζ^{−L[i][0]}`, then
    /// column `j` by the negated resulting first row. First row and column
    /// of the output are all zeros.
    pub fn dephase(&self) -> ButsonMatrix {
        let (n, q) = (self.n, self.q);
        let mut log = vec![0u32; n * n];
        for i in 0..n {
            let ri = self.entry(i, 0);
            for j in 0..n {
                let col = sub_mod(self.entry(0, j), self.entry(0, 0), q);
                let e = sub_mod(self.entry(i, j), ri, q);
                log[i * n + j] = sub_mod(e, col, q);
            }
        }
        ButsonMatrix { n, q, log }
    }

    /// Common row/column sum as an exact ring element, when it exists.
    pub fn is_regular(&self) -> Option<CycElt> {
        let (n, q) = (self.n, self.q);
        let row_counts = |i: usize| {
            let mut c = vec![0i64; q];
            for j in 0..n {
                c[self.entry(i, j) as usize] += 1;
            }
            c
        };
        let col_counts = |j: usize| {
            let mut c = vec![0i64; q];
            for i in 0..n {
                c[self.entry(i, j) as usize] += 1;
            }
            c
        };
        let sigma = row_counts(0);
        let ctx = reduce_ctx(q);
        let equal = |a: &[i64], b: &[i64]| {
            let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            match ctx.is_zero_i64(&diff) {
                Some(ans) => ans,
                None => counts_to_cyc(q, &diff).is_zero(),
            }
        };
        for i in 1..n {
            if !equal(&row_counts(i), &sigma) {
                return None;
            }
        }
        for j in 0..n {
            if !equal(&col_counts(j), &sigma) {
                return None;
            }
        }
        Some(counts_to_cyc(q, &sigma))
    }

    /// Bush-type block identity: with `n = block²`, every `block×block`
    /// block `H_ij` must have all row sums and all column sums equal to
    /// `δ_ij · block` exactly.
    pub fn is_bush_type(&self, block: usize) -> Result<bool> {
        let (n, q) = (self.n, self.q);
        if block == 0 || block * block != n {
            return Err(Error::BlockMismatch { n, block });
        }
        let ctx = reduce_ctx(q);
        let target_ok = |counts: &[i64]| match ctx.is_zero_i64(counts) {
            Some(ans) => ans,
            None => counts_to_cyc(q, counts).is_zero(),
        };
        for bi in 0..block {
            for bj in 0..block {
                let delta = if bi == bj { block as i64 } else { 0 };
                for r in 0..block {
                    let mut counts = vec![0i64; q];
                    for c in 0..block {
                        counts[self.entry(bi * block + r, bj * block + c) as usize] += 1;
                    }
                    counts[0] -= delta;
                    if !target_ok(&counts) {
                        return Ok(false);
                    }
                }
                for c in 0..block {
                    let mut counts = vec![0i64; q];
                    for r in 0..block {
                        counts[self.entry(bi * block + r, bj * block + c) as usize] += 1;
                    }
                    counts[0] -= delta;
                    if !target_ok(&counts) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Apply the equivalence action `H ↦ P · H · Q*` for monomial `P`, `Q`.
    pub fn apply_monomials(&self, p: &MonomialMatrix, qm: &MonomialMatrix) -> Result<ButsonMatrix> {
        let (n, q) = (self.n, self.q);
        if p.size() != n || qm.size() != n {
            return Err(Error::LengthMismatch {
                left: p.size(),
                right: n,
            });
        }
        if p.q() != q || qm.q() != q {
            return Err(Error::ModulusMismatch {
                left: p.q(),
                right: q,
            });
        }
        let pinv = p.inverse_perm();
        let qinv = qm.inverse_perm();
        let mut log = vec![0u32; n * n];
        for i in 0..n {
            let src_row = pinv[i];
            for j in 0..n {
                let src_col = qinv[j];
                let e = self.entry(src_row, src_col) as i64 + p.diag[src_row] as i64
                    - qm.diag[src_col] as i64;
                log[i * n + j] = e.rem_euclid(q as i64) as u32;
            }
        }
        Ok(ButsonMatrix { n, q, log })
    }

    /// Scale column `j` by `ζ^{shift[j]}` (used by the bent transfer map).
    pub fn scale_columns(&self, shift: &[i64]) -> Result<ButsonMatrix> {
        let (n, q) = (self.n, self.q);
        if shift.len() != n {
            return Err(Error::LengthMismatch {
                left: shift.len(),
                right: n,
            });
        }
        let mut log = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let e = self.entry(i, j) as i64 + shift[j];
                log[i * n + j] = e.rem_euclid(q as i64) as u32;
            }
        }
        Ok(ButsonMatrix { n, q, log })
    }

    /// The row code `F_H`: the rows of `L(H)` as words over `Z_q`.
    pub fn row_code(&self) -> ZqCode {
        let words = (0..self.n).map(|i| self.row(i).to_vec()).collect();
        ZqCode {
            q: self.q,
            n: self.n,
            words,
        }
    }

    /// The full Butson Hadamard code `C_H = ∪_α (F_H + α·1)`, with
    /// duplicate words removed (set semantics) and sorted for determinism.
    pub fn full_code(&self) -> ZqCode {
        let (n, q) = (self.n, self.q);
        let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
        for i in 0..n {
            for alpha in 0..q as u32 {
                let w: Vec<u32> = self
                    .row(i)
                    .iter()
                    .map(|&e| (e + alpha) % q as u32)
                    .collect();
                set.insert(w);
            }
        }
        ZqCode {
            q,
            n,
            words: set.into_iter().collect(),
        }
    }

    /// Parse the text interchange format.
    ///
    /// Line 1: `n q`; lines 2..n+1: `n` space-separated log entries in
    /// `[0, q)`. Lines starting with `#` are comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            reason: format!("expected header `n q`, got {} fields", fields.len()),
                        });
                    }
                    let n = fields[0].parse::<usize>().map_err(|e| Error::Parse {
                        line: lineno + 1,
                        reason: format!("bad order: {e}"),
                    })?;
                    let q = fields[1].parse::<usize>().map_err(|e| Error::Parse {
                        line: lineno + 1,
                        reason: format!("bad root order: {e}"),
                    })?;
                    if n == 0 || q == 0 {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            reason: "n and q must be positive".into(),
                        });
                    }
                    header = Some((n, q));
                }
                Some((n, q)) => {
                    if rows.len() == n {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            reason: format!("more than {n} rows"),
                        });
                    }
                    if fields.len() != n {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            reason: format!(
                                "ragged row: expected {n} entries, got {}",
                                fields.len()
                            ),
                        });
                    }
                    let mut row = Vec::with_capacity(n);
                    for f in fields {
                        let e = f.parse::<i64>().map_err(|e| Error::Parse {
                            line: lineno + 1,
                            reason: format!("bad entry: {e}"),
                        })?;
                        if e < 0 || e >= q as i64 {
                            return Err(Error::Parse {
                                line: lineno + 1,
                                reason: format!("entry {e} out of range [0, {q})"),
                            });
                        }
                        row.push(e as u32);
                    }
                    rows.push(row);
                }
            }
        }
        let (n, q) = header.ok_or(Error::Parse {
            line: 0,
            reason: "empty input".into(),
        })?;
        if rows.len() != n {
            return Err(Error::Parse {
                line: 0,
                reason: format!("expected {n} rows, got {}", rows.len()),
            });
        }
        ButsonMatrix::new(n, q, rows)
    }

    /// Serialize to the text interchange format.
    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.q);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Build a `CycElt` from a vector of per-exponent multiplicities.
pub(crate) fn counts_to_cyc(q: usize, counts: &[i64]) -> CycElt {
    let coeffs = counts.iter().map(|&c| BigInt::from(c)).collect();
    CycElt::from_coeffs(q, coeffs).expect("length matches q")
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, q: usize) -> u32 {
    let q = q as u32;
    (a + q - b) % q
}

/// Decode `index` into a vector over `Z_q` under the crate-wide ordering:
/// lexicographic with the least-significant coordinate varying fastest.
/// This is the row/column convention of [`ButsonMatrix::fourier`] and
/// [`ButsonMatrix::group_invariant`].
pub fn index_to_vec(index: usize, q: usize, out: &mut [u32]) {
    let mut rem = index;
    for slot in out.iter_mut() {
        *slot = (rem % q) as u32;
        rem /= q;
    }
    debug_assert_eq!(rem, 0);
}

fn dot_mod(a: &[u32], b: &[u32], q: usize) -> u32 {
    let mut acc = 0u64;
    for (&x, &y) in a.iter().zip(b) {
        acc += x as u64 * y as u64;
    }
    (acc % q as u64) as u32
}

/// Words over `Z_q`: the codes `F_H` and `C_H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZqCode {
    q: usize,
    n: usize,
    words: Vec<Vec<u32>>,
}

impl ZqCode {
    /// Build from explicit words.
    pub fn new(q: usize, n: usize, words: Vec<Vec<u32>>) -> Result<Self> {
        for w in &words {
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    left: w.len(),
                    right: n,
                });
            }
            if let Some(&e) = w.iter().find(|&&e| e as usize >= q) {
                return Err(Error::EntryOutOfRange { entry: e as i64, q });
            }
        }
        Ok(ZqCode { q, n, words })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Whether the word set is closed under adding `α·1` for every `α`.
    /// This is the hypothesis behind the first-coordinate slice reduction
    /// in the covering-radius sweep.
    pub fn is_translate_closed(&self) -> bool {
        let set: BTreeSet<&[u32]> = self.words.iter().map(Vec::as_slice).collect();
        let q = self.q as u32;
        self.words.iter().all(|w| {
            (1..q).all(|alpha| {
                let t: Vec<u32> = w.iter().map(|&e| (e + alpha) % q).collect();
                set.contains(t.as_slice())
            })
        })
    }
}

/// A monomial matrix `P·D`: a permutation with root-of-unity scalings.
///
/// Entry convention: `M[i][j] = ζ_q^{diag[j]}` when `i = perm[j]`, zero
/// otherwise. `perm` maps source (column) index to target (row) index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    q: usize,
    pub perm: Vec<usize>,
    pub diag: Vec<u32>,
}

impl MonomialMatrix {
    /// Build from a permutation and diagonal exponents.
    pub fn new(q: usize, perm: Vec<usize>, diag: Vec<u32>) -> Result<Self> {
        let n = perm.len();
        if diag.len() != n {
            return Err(Error::LengthMismatch {
                left: diag.len(),
                right: n,
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidPermutation);
            }
            seen[p] = true;
        }
        if let Some(&e) = diag.iter().find(|&&e| e as usize >= q) {
            return Err(Error::EntryOutOfRange { entry: e as i64, q });
        }
        Ok(MonomialMatrix { q, perm, diag })
    }

    /// Identity matrix.
    pub fn identity(n: usize, q: usize) -> Self {
        MonomialMatrix {
            q,
            perm: (0..n).collect(),
            diag: vec![0; n],
        }
    }

    /// Scalar matrix `ζ_q^e · I`.
    pub fn scalar(n: usize, q: usize, e: u32) -> Self {
        MonomialMatrix {
            q,
            perm: (0..n).collect(),
            diag: vec![e % q as u32; n],
        }
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Inverse of the permutation part.
    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0usize; self.perm.len()];
        for (j, &i) in self.perm.iter().enumerate() {
            inv[i] = j;
        }
        inv
    }

    /// The conjugate transpose, which is the group inverse.
    pub fn inverse(&self) -> MonomialMatrix {
        let n = self.size();
        let q = self.q as u32;
        let mut perm = vec![0usize; n];
        let mut diag = vec![0u32; n];
        for j in 0..n {
            let i = self.perm[j];
            perm[i] = j;
            diag[i] = (q - self.diag[j] % q) % q;
        }
        MonomialMatrix {
            q: self.q,
            perm,
            diag,
        }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &MonomialMatrix) -> Result<MonomialMatrix> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch {
                left: self.q,
                right: other.q,
            });
        }
        let n = self.size();
        if other.size() != n {
            return Err(Error::LengthMismatch {
                left: other.size(),
                right: n,
            });
        }
        let q = self.q as u32;
        let mut perm = vec![0usize; n];
        let mut diag = vec![0u32; n];
        for j in 0..n {
            let t = other.perm[j];
            perm[j] = self.perm[t];
            diag[j] = (other.diag[j] + self.diag[t]) % q;
        }
        Ok(MonomialMatrix {
            q: self.q,
            perm,
            diag,
        })
    }

    /// Entrywise Galois multiplier: exponents scaled by `k`.
    pub fn apply_multiplier(&self, k: usize) -> Result<MonomialMatrix> {
        check_multiplier(k, self.q)?;
        let q = self.q as u64;
        let diag = self
            .diag
            .iter()
            .map(|&e| ((e as u64 * k as u64) % q) as u32)
            .collect();
        Ok(MonomialMatrix {
            q: self.q,
            perm: self.perm.clone(),
            diag,
        })
    }

    /// Act on an exponent vector: `(M·ζ^x)[perm[j]] = ζ^{diag[j] + x[j]}`.
    pub fn act_on_exponents(&self, x: &[u32]) -> Result<Vec<u32>> {
        let n = self.size();
        if x.len() != n {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: n,
            });
        }
        let q = self.q as u32;
        let mut out = vec![0u32; n];
        for j in 0..n {
            out[self.perm[j]] = (self.diag[j] + x[j]) % q;
        }
        Ok(out)
    }
}

/// The standard Bush-type BH(4,2): all-ones blocks on the diagonal,
/// `[[1,−1],[−1,1]]` off it. Shared by tests across modules.
#[cfg(test)]
pub(crate) fn bush_bh4() -> ButsonMatrix {
    ButsonMatrix::new(
        4,
        2,
        vec![
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_f3_matches_displayed_matrix() {
        let f3 = ButsonMatrix::fourier(3, 1);
        assert_eq!(f3.row(0), &[0, 0, 0]);
        assert_eq!(f3.row(1), &[0, 1, 2]);
        assert_eq!(f3.row(2), &[0, 2, 1]);
        assert!(f3.verify_butson());
    }

    #[test]
    fn all_ones_matrix_is_not_butson() {
        let m = ButsonMatrix::new(3, 3, vec![vec![0; 3]; 3]).unwrap();
        assert!(!m.verify_butson());
    }

    #[test]
    fn fourier_f6_verifies() {
        assert!(ButsonMatrix::fourier(6, 1).verify_butson());
    }

    #[test]
    fn kronecker_of_fouriers_is_higher_fourier() {
        let f2 = ButsonMatrix::fourier(2, 1);
        let k = f2.kronecker(&f2).unwrap();
        assert_eq!(k, ButsonMatrix::fourier(2, 2));
        assert!(k.verify_butson());
    }

    #[test]
    fn kronecker_with_trivial_factor() {
        let f3 = ButsonMatrix::fourier(3, 1);
        let one = ButsonMatrix::scalar_one(3);
        assert_eq!(f3.kronecker(&one).unwrap(), f3);
    }

    #[test]
    fn kronecker_f3_f3_verifies() {
        let f3 = ButsonMatrix::fourier(3, 1);
        let k = f3.kronecker(&f3).unwrap();
        assert_eq!(k.n(), 9);
        assert!(k.verify_butson());
    }

    #[test]
    fn kronecker_modulus_mismatch() {
        let f2 = ButsonMatrix::fourier(2, 1);
        let f3 = ButsonMatrix::fourier(3, 1);
        assert!(matches!(
            f2.kronecker(&f3),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn dephase_fixes_fourier() {
        let f5 = ButsonMatrix::fourier(5, 1);
        assert_eq!(f5.dephase(), f5);
    }

    #[test]
    fn dephase_removes_global_scalar() {
        let f3 = ButsonMatrix::fourier(3, 1);
        let scaled_rows: Vec<Vec<u32>> = (0..3)
            .map(|i| f3.row(i).iter().map(|&e| (e + 1) % 3).collect())
            .collect();
        let scaled = ButsonMatrix::new(3, 3, scaled_rows).unwrap();
        assert_eq!(scaled.dephase(), f3.dephase());
        let d = scaled.dephase();
        assert!(d.row(0).iter().all(|&e| e == 0));
        assert!((0..3).all(|i| d.entry(i, 0) == 0));
        assert!(d.verify_butson());
    }

    #[test]
    fn group_invariant_is_dephased_butson() {
        let g = ButsonMatrix::group_invariant(2, 1);
        assert!(g.verify_butson());
        let d = g.dephase();
        assert!(d.verify_butson());
        assert!(d.row(0).iter().all(|&e| e == 0));
    }

    #[test]
    fn group_invariant_translation_identity() {
        let q = 3usize;
        let g = ButsonMatrix::group_invariant(q, 1);
        let n = g.n();
        // L[(x+a)][(y+a)] = L[x][y] for every shift a of the index vector
        let m = 2usize;
        for a in 0..n {
            let mut av = vec![0u32; m];
            index_to_vec(a, q, &mut av);
            for x in 0..n {
                let mut xv = vec![0u32; m];
                index_to_vec(x, q, &mut xv);
                let xs: usize = (0..m)
                    .map(|t| (((xv[t] + av[t]) % q as u32) as usize) * q.pow(t as u32))
                    .sum();
                for y in 0..n {
                    let mut yv = vec![0u32; m];
                    index_to_vec(y, q, &mut yv);
                    let ys: usize = (0..m)
                        .map(|t| (((yv[t] + av[t]) % q as u32) as usize) * q.pow(t as u32))
                        .sum();
                    assert_eq!(g.entry(xs, ys), g.entry(x, y));
                }
            }
        }
    }

    #[test]
    fn regularity_of_group_invariant() {
        let g = ButsonMatrix::group_invariant(2, 1);
        let sigma = g.is_regular().expect("regular");
        assert_eq!(sigma, CycElt::integer(2, 2));
        // Fourier matrices are not regular: row sums differ
        assert!(ButsonMatrix::fourier(2, 1).is_regular().is_none());
    }

    #[test]
    fn regularity_is_permutation_invariant() {
        let g = ButsonMatrix::group_invariant(3, 1);
        let n = g.n();
        let perm: Vec<usize> = (0..n).map(|i| (i + 4) % n).collect();
        let p = MonomialMatrix::new(3, perm, vec![0; n]).unwrap();
        let id = MonomialMatrix::identity(n, 3);
        let moved = g.apply_monomials(&p, &id).unwrap();
        assert_eq!(moved.is_regular(), g.is_regular());
    }

    #[test]
    fn bush_type_detection() {
        let h = bush_bh4();
        assert!(h.verify_butson());
        assert!(h.is_bush_type(2).unwrap());
        assert!(!ButsonMatrix::fourier(2, 2).is_bush_type(2).unwrap());
        assert!(matches!(
            ButsonMatrix::fourier(3, 1).is_bush_type(2),
            Err(Error::BlockMismatch { n: 3, block: 2 })
        ));
    }

    #[test]
    fn codec_round_trip() {
        let m = ButsonMatrix::fourier(4, 1);
        let text = m.serialize();
        let back = ButsonMatrix::parse(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn codec_accepts_comments() {
        let text = "# a comment\n2 2\n0 0\n# interior comment\n0 1\n";
        let m = ButsonMatrix::parse(text).unwrap();
        assert_eq!(m, ButsonMatrix::fourier(2, 1));
    }

    #[test]
    fn codec_rejects_malformed() {
        assert!(matches!(
            ButsonMatrix::parse("2\n0 0\n0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            ButsonMatrix::parse("2 2\n0 0\n0 5\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            ButsonMatrix::parse("2 2\n0 0 1\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(ButsonMatrix::parse("").is_err());
    }

    #[test]
    fn full_code_of_f2_is_whole_space() {
        let c = ButsonMatrix::fourier(2, 1).full_code();
        assert_eq!(c.len(), 4);
        assert_eq!(c.words(), &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(c.is_translate_closed());
    }

    #[test]
    fn full_code_of_f4_has_sixteen_words() {
        let c = ButsonMatrix::fourier(4, 1).full_code();
        assert_eq!(c.len(), 16);
        assert!(c.is_translate_closed());
    }

    #[test]
    fn monomial_algebra() {
        let q = 4;
        let m = MonomialMatrix::new(q, vec![1, 2, 0], vec![1, 3, 2]).unwrap();
        let id = MonomialMatrix::identity(3, q);
        assert_eq!(m.compose(&m.inverse()).unwrap(), id);
        assert_eq!(m.inverse().compose(&m).unwrap(), id);
        let x = vec![0u32, 1, 2];
        let y = m.act_on_exponents(&x).unwrap();
        // entry j lands at perm[j] with diag[j] added
        assert_eq!(y[1], (1 + 0) % 4);
        assert_eq!(y[2], (3 + 1) % 4);
        assert_eq!(y[0], (2 + 2) % 4);
    }

    #[test]
    fn equivalence_preserves_butson() {
        let h = ButsonMatrix::fourier(3, 1);
        let p = MonomialMatrix::new(3, vec![2, 0, 1], vec![1, 2, 0]).unwrap();
        let qm = MonomialMatrix::new(3, vec![1, 2, 0], vec![2, 2, 1]).unwrap();
        let moved = h.apply_monomials(&p, &qm).unwrap();
        assert!(moved.verify_butson());
        // inverse transform recovers H
        let back = moved.apply_monomials(&p.inverse(), &qm.inverse()).unwrap();
        assert_eq!(back, h);
    }
}
