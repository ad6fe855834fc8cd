//! Self-dual bent sequences `HX = λ·μ_k(X)`: exact verification, the
//! exhaustive oracle, and the eigenspace search with greedy submatrix
//! selection.
//!
//! The eigenspace method folds the multiplier away: with `t` the order of
//! `k` mod `q`, any solution satisfies `W·X = Λ·X` for the exact product
//! matrix `W = Π_{i=0}^{t−1} μ_k^{t−1−i}(H)` and `Λ = Π μ_k^{t−1−i}(λ)`.
//! Floats only steer the search (nullspace bases, root rounding); every
//! candidate is accepted or rejected by exact arithmetic in `Z[ζ_q]`.

use std::collections::BTreeSet;

use nalgebra::{Complex, DMatrix, DVector};
use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cyclotomic::{
    canonical_cmp, check_multiplier, multiplicative_order, reduce_ctx, CycElt, ReduceCtx,
};
use crate::error::Error;
use crate::existence::compositions_iter;
use crate::matrix::{counts_to_cyc, index_to_vec, ButsonMatrix};
use crate::Result;

/// Singular values below `NULL_TOL · σ_max` count as zero when extracting
/// nullspace bases and numerical ranks.
const NULL_TOL: f64 = 1e-8;

/// A float entry `z` rounds to the root `ζ^e` only if `|z − ζ^e| ≤ ROUND_TOL`.
const ROUND_TOL: f64 = 1e-6;

/// Cluster radius when deduplicating eigenvalue targets.
const CLUSTER_TOL: f64 = 1e-6;

/// A verified self-dual bent sequence: `HX = λ·μ_k(X)` holds exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BentSolution {
    /// Exponent vector: `X = (ζ^{x_1}, …, ζ^{x_n})`.
    pub x: Vec<u32>,
    /// Multiplier index, coprime to `q`.
    pub k: usize,
    /// The exact coefficient, with `|λ|² = n`.
    pub lambda: CycElt,
}

impl BentSolution {
    /// JSON form per the interchange schema:
    /// `{"n":…, "q":…, "k":…, "x":[…], "lambda":[… q ints …]}`.
    pub fn to_json(&self, q: usize) -> serde_json::Value {
        let lambda: Vec<i64> = self
            .lambda
            .to_i64_coeffs()
            .expect("lambda coefficients fit i64 at any searchable scale");
        serde_json::json!({
            "n": self.x.len(),
            "q": q,
            "k": self.k,
            "x": self.x,
            "lambda": lambda,
        })
    }
}

/// Scratch buffers for the exact bent check, reusable across candidates.
struct BentChecker<'a> {
    h: &'a ButsonMatrix,
    k: usize,
    ctx: std::sync::Arc<ReduceCtx>,
    lambda: Vec<i64>,
    row: Vec<i64>,
}

impl<'a> BentChecker<'a> {
    fn new(h: &'a ButsonMatrix, k: usize) -> Self {
        BentChecker {
            h,
            k,
            ctx: reduce_ctx(h.q()),
            lambda: vec![0; h.q()],
            row: vec![0; h.q()],
        }
    }

    /// Exact check of `HX = λ·μ_k(X)`; returns the λ counts on success.
    ///
    /// Row 1 defines `λ := (HX)_1 · ζ^{−k·x_1}`; the remaining rows must
    /// match `λ·ζ^{k·x_i}` as elements of `Z[ζ_q]`.
    fn check(&mut self, x: &[u32]) -> Option<CycElt> {
        let h = self.h;
        let (n, q) = (h.n(), h.q());
        let qk = self.k % q;
        // λ from the first coordinate
        self.lambda.iter_mut().for_each(|c| *c = 0);
        let shift0 = (qk * x[0] as usize) % q;
        let row0 = h.row(0);
        for j in 0..n {
            let e = (row0[j] as usize + x[j] as usize) % q;
            // multiply by ζ^{−k·x_1}: shift exponents down
            self.lambda[(e + q - shift0) % q] += 1;
        }
        for i in 1..n {
            let shift = (qk * x[i] as usize) % q;
            self.row.iter_mut().for_each(|c| *c = 0);
            let rowi = h.row(i);
            for j in 0..n {
                let e = (rowi[j] as usize + x[j] as usize) % q;
                self.row[e] += 1;
            }
            // subtract λ·ζ^{k·x_i}
            for (d, &l) in self.lambda.iter().enumerate() {
                self.row[(d + shift) % q] -= l;
            }
            let zero = match self.ctx.is_zero_i64(&self.row) {
                Some(ans) => ans,
                None => counts_to_cyc(q, &self.row).is_zero(),
            };
            if !zero {
                return None;
            }
        }
        Some(counts_to_cyc(q, &self.lambda))
    }
}

/// Exact bent verification. Returns `Ok(Some(λ))` when `HX = λ·μ_k(X)`
/// holds in `Z[ζ_q]`, `Ok(None)` when the sequence is not bent for this
/// multiplier, and an error for `gcd(k, q) ≠ 1` or a length mismatch.
pub fn verify_bent(h: &ButsonMatrix, x: &[u32], k: usize) -> Result<Option<CycElt>> {
    check_multiplier(k, h.q())?;
    if x.len() != h.n() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: h.n(),
        });
    }
    let mut checker = BentChecker::new(h, k);
    Ok(checker.check(x))
}

/// Brute-force oracle: enumerate all of `Ω_q^n` and keep the verified
/// solutions, sorted lexicographically by exponent vector.
pub fn exhaustive_search(h: &ButsonMatrix, k: usize, budget: u128) -> Result<Vec<BentSolution>> {
    check_multiplier(k, h.q())?;
    let (n, q) = (h.n(), h.q());
    let total = (q as u128)
        .checked_pow(n as u32)
        .ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            budget,
        })?;
    if total > budget {
        return Err(Error::BudgetExceeded {
            required: total,
            budget,
        });
    }
    let total = total as u64;
    let mut solutions: Vec<BentSolution> = (0..total)
        .into_par_iter()
        .map_init(
            || (BentChecker::new(h, k), vec![0u32; n]),
            |(checker, x), idx| {
                index_to_vec(idx as usize, q, x);
                checker.check(x).map(|lambda| BentSolution {
                    x: x.clone(),
                    k,
                    lambda,
                })
            },
        )
        .flatten()
        .collect();
    solutions.sort_by(|a, b| a.x.cmp(&b.x));
    Ok(solutions)
}

/// Early-exit existence check: is there any self-dual bent sequence for
/// this multiplier? Sweeps `Ω_q^n` in parallel and stops at the first
/// verified hit.
pub fn any_bent(h: &ButsonMatrix, k: usize, budget: u128) -> Result<bool> {
    check_multiplier(k, h.q())?;
    let (n, q) = (h.n(), h.q());
    let total = (q as u128)
        .checked_pow(n as u32)
        .ok_or(Error::BudgetExceeded {
            required: u128::MAX,
            budget,
        })?;
    if total > budget {
        return Err(Error::BudgetExceeded {
            required: total,
            budget,
        });
    }
    let found = (0..total as u64)
        .into_par_iter()
        .map_init(
            || (BentChecker::new(h, k), vec![0u32; n]),
            |(checker, x), idx| {
                index_to_vec(idx as usize, q, x);
                checker.check(x).is_some()
            },
        )
        .any(|hit| hit);
    Ok(found)
}

/// Admissible coefficients: the distinct values of `Σ_r y_r ζ^r` over the
/// compositions `y` of `n` into `q` parts with `|λ|² = n` exactly, in
/// canonical-coefficient order.
pub fn candidate_lambdas(n: usize, q: usize, budget: u128) -> Result<Vec<CycElt>> {
    let iter = compositions_iter(n, q, budget)?;
    let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut out: Vec<CycElt> = Vec::new();
    let target = CycElt::integer(q, n as i64);
    for y in iter {
        let counts: Vec<i64> = y.iter().map(|&v| v as i64).collect();
        let z = counts_to_cyc(q, &counts);
        if z.norm_sq() != target {
            continue;
        }
        let key = z.canonical_key();
        if seen.insert(key) {
            out.push(z.reduce_canonical());
        }
    }
    out.sort_by(canonical_cmp);
    Ok(out)
}

/// Greedy full-rank column selection: starting from the first column, scan
/// left to right and keep any column that raises the numerical rank, until
/// `rank(B)` columns are held.
///
/// Errors with [`Error::ZeroFirstColumn`] when the first column is
/// numerically zero — in that case every vector in the row space has first
/// coordinate zero and no root-of-unity sequence can live there.
pub fn greedy_submatrix(b: &DMatrix<Complex<f64>>) -> Result<Vec<usize>> {
    let (l, n) = b.shape();
    if l == 0 || n == 0 {
        return Err(Error::InvalidInput("empty basis matrix".into()));
    }
    if b.column(0).norm() <= NULL_TOL {
        return Err(Error::ZeroFirstColumn);
    }
    let target = numerical_rank(b.clone());
    let mut selected = vec![0usize];
    let mut rank = 1usize;
    for c in 1..n {
        if rank == target {
            break;
        }
        let mut cols = selected.clone();
        cols.push(c);
        let sub = b.select_columns(cols.iter());
        let r = numerical_rank(sub);
        if r > rank {
            selected.push(c);
            rank = r;
        }
    }
    Ok(selected)
}

fn numerical_rank(m: DMatrix<Complex<f64>>) -> usize {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > NULL_TOL * max).count()
}

/// The exact product matrix `W = Π_{i=0}^{t−1} μ_k^{t−1−i}(H)` where `t`
/// is the multiplicative order of `k` mod `q`.
pub fn product_matrix(h: &ButsonMatrix, k: usize) -> Result<Vec<Vec<CycElt>>> {
    let t = multiplicative_order(k, h.q())?;
    let (n, q) = (h.n(), h.q());
    // powers k^e mod q for e = 0..t
    let mut kpow = vec![1usize; t];
    for e in 1..t {
        kpow[e] = (kpow[e - 1] * k) % q;
    }
    // acc starts as μ_k^{t−1}(H), then multiplies μ_k^{e}(H) for e = t−2..0.
    // Multiplying by a single-root matrix is a shift-and-add per entry.
    let mut acc: Vec<Vec<CycElt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = (h.entry(i, j) as usize * kpow[t - 1]) % q;
                    CycElt::root(q, e as i64)
                })
                .collect()
        })
        .collect();
    for step in (0..t - 1).rev() {
        let kp = kpow[step];
        let mut next: Vec<Vec<CycElt>> = vec![vec![CycElt::zero(q); n]; n];
        for (i, acc_row) in acc.iter().enumerate() {
            for (s, a) in acc_row.iter().enumerate() {
                for (j, slot) in next[i].iter_mut().enumerate() {
                    let e = (h.entry(s, j) as usize * kp) % q;
                    let term = a.mul_root(e as i64);
                    *slot = slot.add(&term).expect("same q");
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn embed_matrix(w: &[Vec<CycElt>]) -> DMatrix<Complex<f64>> {
    let n = w.len();
    DMatrix::from_fn(n, n, |i, j| w[i][j].embed())
}

/// Eigenvalue targets for the product matrix: the Galois-orbit products of
/// the exact candidate λ values when the composition budget allows, float
/// eigenvalue clusters of the embedded product matrix otherwise.
fn eigen_targets(
    h: &ButsonMatrix,
    k: usize,
    m: &DMatrix<Complex<f64>>,
    composition_budget: u128,
) -> Result<Vec<Complex<f64>>> {
    let (n, q) = (h.n(), h.q());
    let t = multiplicative_order(k, q)?;
    match candidate_lambdas(n, q, composition_budget) {
        Ok(cands) => {
            let mut targets = Vec::with_capacity(cands.len());
            for lam in &cands {
                let mut prod = CycElt::one(q);
                let mut kp = 1usize;
                for _ in 0..t {
                    prod = prod.mul(&lam.apply_multiplier(kp)?)?;
                    kp = (kp * k) % q;
                }
                targets.push(prod.embed());
            }
            Ok(cluster(targets))
        }
        Err(Error::BudgetExceeded { .. }) => {
            // Fall back to float eigenvalues via the real 2n×2n embedding;
            // it carries each eigenvalue of M together with its conjugate,
            // and spurious targets are harmless (they sieve to nothing).
            let dim = m.nrows();
            let mut real = DMatrix::zeros(2 * dim, 2 * dim);
            for i in 0..dim {
                for j in 0..dim {
                    let z = m[(i, j)];
                    real[(i, j)] = z.re;
                    real[(i, j + dim)] = -z.im;
                    real[(i + dim, j)] = z.im;
                    real[(i + dim, j + dim)] = z.re;
                }
            }
            let eigs: Vec<Complex<f64>> = real.complex_eigenvalues().iter().cloned().collect();
            Ok(cluster(eigs))
        }
        Err(e) => Err(e),
    }
}

fn cluster(mut values: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
    values.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut out: Vec<Complex<f64>> = Vec::new();
    for v in values {
        if out.iter().all(|c| (c - v).norm() > CLUSTER_TOL) {
            out.push(v);
        }
    }
    out
}

/// Eigenspace search: for each eigenvalue target `Λ` of the exact product
/// matrix, take a nullspace basis `B` of `(W − ΛI)`, pick an invertible
/// submatrix `B_l` greedily, sweep the `q^l` right-hand sides `Z ∈ Ω_q^l`,
/// extend each solution across the basis, round entries to roots of unity,
/// and keep exactly those candidates that pass [`verify_bent`].
///
/// On any instance where both complete, the output equals
/// [`exhaustive_search`] as a set.
pub fn eigenspace_search(h: &ButsonMatrix, k: usize, budget: u128) -> Result<Vec<BentSolution>> {
    eigenspace_search_with(h, k, budget, crate::DEFAULT_COMPOSITION_BUDGET)
}

/// [`eigenspace_search`] with an explicit composition budget for the exact
/// λ-target enumeration (the float-eigenvalue fallback engages beyond it).
pub fn eigenspace_search_with(
    h: &ButsonMatrix,
    k: usize,
    budget: u128,
    composition_budget: u128,
) -> Result<Vec<BentSolution>> {
    check_multiplier(k, h.q())?;
    let (n, q) = (h.n(), h.q());
    let w = product_matrix(h, k)?;
    let m = embed_matrix(&w);
    let targets = eigen_targets(h, k, &m, composition_budget)?;

    let mut found: Vec<BentSolution> = Vec::new();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    for target in targets {
        let shifted = {
            let mut s = m.clone();
            for i in 0..n {
                s[(i, i)] -= target;
            }
            s
        };
        let basis = nullspace_basis(&shifted, m.norm());
        let l = basis.nrows();
        if l == 0 {
            continue;
        }
        let cols = match greedy_submatrix(&basis) {
            Ok(cols) => cols,
            // all eigenvectors for this target have first coordinate zero
            Err(Error::ZeroFirstColumn) => continue,
            Err(e) => return Err(e),
        };
        let sweep = (q as u128)
            .checked_pow(cols.len() as u32)
            .ok_or(Error::BudgetExceeded {
                required: u128::MAX,
                budget,
            })?;
        if sweep > budget {
            return Err(Error::BudgetExceeded {
                required: sweep,
                budget,
            });
        }
        let bl = basis.select_columns(cols.iter());
        let lu = bl.transpose().lu();
        let basis_t = basis.transpose();
        let roots: Vec<Complex<f64>> = (0..q)
            .map(|e| {
                let theta = 2.0 * std::f64::consts::PI * e as f64 / q as f64;
                Complex::new(theta.cos(), theta.sin())
            })
            .collect();

        let lcount = cols.len();
        let mut zvec = vec![0u32; lcount];
        let mut checker = BentChecker::new(h, k);
        for zidx in 0..sweep as u64 {
            index_to_vec(zidx as usize, q, &mut zvec);
            let rhs = DVector::from_iterator(lcount, zvec.iter().map(|&e| roots[e as usize]));
            let coeff = match lu.solve(&rhs) {
                Some(c) => c,
                None => continue,
            };
            let full = &basis_t * &coeff;
            let mut x = vec![0u32; n];
            let mut ok = true;
            for (i, z) in full.iter().enumerate() {
                let arg = z.im.atan2(z.re);
                let e = (arg * q as f64 / (2.0 * std::f64::consts::PI)).round();
                let e = (e as i64).rem_euclid(q as i64) as usize;
                if (z - roots[e]).norm() > ROUND_TOL {
                    ok = false;
                    break;
                }
                x[i] = e as u32;
            }
            if !ok {
                continue;
            }
            if let Some(lambda) = checker.check(&x) {
                if seen.insert(x.clone()) {
                    found.push(BentSolution { x, k, lambda });
                }
            }
        }
    }
    found.sort_by(|a, b| a.x.cmp(&b.x));
    Ok(found)
}

/// Rows of the returned matrix form an orthonormal basis of the nullspace
/// of `m` at the relative singular-value cutoff [`NULL_TOL`]. `scale` is
/// the norm of the unshifted matrix: when the largest singular value is
/// negligible against it, `m` is the zero matrix up to float error and the
/// whole space is the nullspace.
fn nullspace_basis(m: &DMatrix<Complex<f64>>, scale: f64) -> DMatrix<Complex<f64>> {
    debug_assert_eq!(m.nrows(), m.ncols(), "product matrices are square");
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let max_sv = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if max_sv <= NULL_TOL * scale.max(1.0) {
        return DMatrix::identity(n, n);
    }
    let mut rows: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= NULL_TOL * max_sv)
        .collect();
    let l = rows.len();
    let mut basis = DMatrix::zeros(l, n);
    rows.sort_unstable();
    for (bi, &ri) in rows.iter().enumerate() {
        for c in 0..n {
            // x = conj(V^T row) solves m·x = 0
            basis[(bi, c)] = v_t[(ri, c)].conj();
        }
    }
    basis
}

/// A census row: one λ with its number of sequences.
#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub lambda: CycElt,
    pub count: usize,
}

/// Solutions grouped by exact λ, in canonical coefficient order.
#[derive(Debug, Clone)]
pub struct Census {
    pub k: usize,
    pub entries: Vec<CensusEntry>,
    pub total: usize,
}

/// Group a completed search by λ (canonical form).
pub fn census(k: usize, solutions: &[BentSolution]) -> Census {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<Vec<BigInt>, (CycElt, usize)> = BTreeMap::new();
    for sol in solutions {
        let key = sol.lambda.canonical_key();
        groups
            .entry(key)
            .and_modify(|(_, c)| *c += 1)
            .or_insert_with(|| (sol.lambda.reduce_canonical(), 1));
    }
    let entries: Vec<CensusEntry> = groups
        .into_values()
        .map(|(lambda, count)| CensusEntry { lambda, count })
        .collect();
    let total = solutions.len();
    Census { k, entries, total }
}

/// Transfer map from plain bent to self-dual bent with trivial multiplier:
/// given `HX = λ·ζ^y` (verified exactly), return `(HD, y)` with
/// `D = diag(ζ^{x−y})`, so that `y` is self-dual bent for `HD` with `k = 1`
/// and the same λ.
pub fn bent_to_selfdual(
    h: &ButsonMatrix,
    x: &[u32],
    y: &[u32],
) -> Result<(ButsonMatrix, Vec<u32>)> {
    let (n, q) = (h.n(), h.q());
    if x.len() != n || y.len() != n {
        return Err(Error::LengthMismatch {
            left: x.len().max(y.len()),
            right: n,
        });
    }
    // verify HX = λ·ζ^y for some λ, exactly
    let ctx = reduce_ctx(q);
    let mut lambda = vec![0i64; q];
    let row0 = h.row(0);
    for j in 0..n {
        let e = (row0[j] as usize + x[j] as usize) % q;
        lambda[(e + q - y[0] as usize) % q] += 1;
    }
    for i in 1..n {
        let mut row = vec![0i64; q];
        let rowi = h.row(i);
        for j in 0..n {
            let e = (rowi[j] as usize + x[j] as usize) % q;
            row[e] += 1;
        }
        for (d, &l) in lambda.iter().enumerate() {
            row[(d + y[i] as usize) % q] -= l;
        }
        let zero = match ctx.is_zero_i64(&row) {
            Some(ans) => ans,
            None => counts_to_cyc(q, &row).is_zero(),
        };
        if !zero {
            return Err(Error::NotBent);
        }
    }
    let shifts: Vec<i64> = (0..n).map(|j| x[j] as i64 - y[j] as i64).collect();
    let hd = h.scale_columns(&shifts)?;
    Ok((hd, y.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: usize, r: u32) -> ButsonMatrix {
        ButsonMatrix::fourier(q, r)
    }

    #[test]
    fn verify_bent_on_the_known_f3_solution() {
        let h = f(3, 1);
        let lambda = verify_bent(&h, &[0, 1, 1], 2).unwrap().expect("bent");
        assert_eq!(lambda, CycElt::from_i64_coeffs(3, &[1, 2, 0]).unwrap());
        assert_eq!(lambda.norm_sq().as_integer(), Some(BigInt::from(3)));
    }

    #[test]
    fn verify_bent_regular_all_ones() {
        let h = ButsonMatrix::group_invariant(2, 1);
        let lambda = verify_bent(&h, &[0, 0, 0, 0], 1).unwrap().expect("bent");
        assert_eq!(lambda, CycElt::integer(2, 2));
    }

    #[test]
    fn verify_bent_rejects_non_solution() {
        let h = f(2, 1);
        assert!(verify_bent(&h, &[0, 0], 1).unwrap().is_none());
    }

    #[test]
    fn verify_bent_rejects_bad_multiplier() {
        let h = f(4, 1);
        assert!(matches!(
            verify_bent(&h, &[0, 0, 0, 0], 2),
            Err(Error::InvalidMultiplier { .. })
        ));
    }

    #[test]
    fn exhaustive_bh22_is_empty() {
        let sols = exhaustive_search(&f(2, 1), 1, 1 << 20).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn exhaustive_f2xf2_census() {
        let h = f(2, 1).kronecker(&f(2, 1)).unwrap();
        let sols = exhaustive_search(&h, 1, 1 << 20).unwrap();
        let c = census(1, &sols);
        assert_eq!(c.entries.len(), 2, "two lambdas");
        assert!(c.entries.iter().all(|e| e.count == 2), "two sequences each");
        assert_eq!(c.total, 4);
        for e in &c.entries {
            assert_eq!(e.lambda.norm_sq().as_integer(), Some(BigInt::from(4)));
        }
    }

    #[test]
    fn any_bent_matches_search_emptiness() {
        for (h, ks) in [
            (f(2, 1), vec![1usize]),
            (f(3, 1), vec![1, 2]),
            (f(4, 1), vec![1, 3]),
        ] {
            for k in ks {
                let expect = !exhaustive_search(&h, k, 1 << 20).unwrap().is_empty();
                assert_eq!(any_bent(&h, k, 1 << 20).unwrap(), expect, "k={k}");
            }
        }
    }

    #[test]
    fn exhaustive_budget() {
        assert!(matches!(
            exhaustive_search(&f(5, 2), 1, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn candidate_lambda_values() {
        let c = candidate_lambdas(4, 2, 1 << 20).unwrap();
        let ints: Vec<BigInt> = c.iter().map(|z| z.as_integer().unwrap()).collect();
        assert_eq!(ints, vec![BigInt::from(-2), BigInt::from(2)]);

        assert!(candidate_lambdas(6, 3, 1 << 20).unwrap().is_empty());

        let c = candidate_lambdas(3, 3, 1 << 20).unwrap();
        assert!(!c.is_empty());
        assert!(c
            .iter()
            .all(|z| z.norm_sq().as_integer() == Some(BigInt::from(3))));
    }

    #[test]
    fn greedy_selects_independent_columns() {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        // identity pattern
        let b = DMatrix::from_row_slice(2, 2, &[one, zero, zero, one]);
        assert_eq!(greedy_submatrix(&b).unwrap(), vec![0, 1]);
        // dependent second column is skipped
        let b = DMatrix::from_row_slice(2, 4, &[one, one, zero, one, zero, zero, one, one]);
        assert_eq!(greedy_submatrix(&b).unwrap(), vec![0, 2]);
        // zero first column aborts
        let b = DMatrix::from_row_slice(2, 2, &[zero, one, zero, one]);
        assert!(matches!(greedy_submatrix(&b), Err(Error::ZeroFirstColumn)));
    }

    #[test]
    fn eigenspace_matches_exhaustive_on_f3() {
        let h = f(3, 1);
        for k in [1usize, 2] {
            let a = exhaustive_search(&h, k, 1 << 20).unwrap();
            let b = eigenspace_search(&h, k, 1 << 20).unwrap();
            assert_eq!(a, b, "k={k}");
        }
        let sols = eigenspace_search(&h, 2, 1 << 20).unwrap();
        assert!(sols.iter().any(|s| s.x == vec![0, 1, 1]));
    }

    #[test]
    fn eigenspace_matches_exhaustive_on_f2xf2() {
        let h = f(2, 1).kronecker(&f(2, 1)).unwrap();
        let a = exhaustive_search(&h, 1, 1 << 20).unwrap();
        let b = eigenspace_search(&h, 1, 1 << 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn eigenspace_matches_exhaustive_on_f4() {
        let h = f(4, 1);
        for k in [1usize, 3] {
            let a = exhaustive_search(&h, k, 1 << 20).unwrap();
            let b = eigenspace_search(&h, k, 1 << 20).unwrap();
            assert_eq!(a, b, "k={k}");
        }
    }

    #[test]
    fn scaling_law() {
        // if (x, k, λ) verifies then (x + s·1, k, λ·ζ^{s(1−k)}) verifies
        let h = f(3, 1);
        let sols = exhaustive_search(&h, 2, 1 << 20).unwrap();
        assert!(!sols.is_empty());
        let q = 3usize;
        for sol in &sols {
            for s in 0..q as u32 {
                let shifted: Vec<u32> = sol.x.iter().map(|&e| (e + s) % q as u32).collect();
                let lam = verify_bent(&h, &shifted, sol.k)
                    .unwrap()
                    .expect("shifted solution verifies");
                let twist = (s as i64) * (1 - sol.k as i64);
                assert_eq!(lam, sol.lambda.mul_root(twist));
            }
        }
    }

    #[test]
    fn all_lambdas_have_norm_n() {
        let h = f(4, 1);
        for k in [1usize, 3] {
            for sol in exhaustive_search(&h, k, 1 << 20).unwrap() {
                assert_eq!(
                    sol.lambda.norm_sq().as_integer(),
                    Some(BigInt::from(4)),
                    "k={k}"
                );
            }
        }
    }

    #[test]
    fn transfer_to_trivial_multiplier() {
        let h = f(3, 1);
        let x = [0u32, 1, 1];
        // y = exponents of μ₂(X)
        let y = [0u32, 2, 2];
        let (hd, yv) = bent_to_selfdual(&h, &x, &y).unwrap();
        assert!(hd.verify_butson());
        let lam = verify_bent(&hd, &yv, 1).unwrap().expect("self-dual");
        assert_eq!(lam, CycElt::from_i64_coeffs(3, &[1, 2, 0]).unwrap());
    }

    #[test]
    fn transfer_with_equal_vectors_is_identity() {
        // x = y needs HX = λ·ζ^x, i.e. a k=1 solution; then D = I
        let g = crate::matrix::ButsonMatrix::group_invariant(2, 1);
        let x = [0u32, 0, 0, 0];
        let (same, y) = bent_to_selfdual(&g, &x, &x).unwrap();
        assert_eq!(same, g);
        assert_eq!(y, x.to_vec());
    }

    #[test]
    fn transfer_requires_proportionality() {
        let h = f(2, 1);
        assert!(matches!(
            bent_to_selfdual(&h, &[0, 0], &[0, 0]),
            Err(Error::NotBent)
        ));
    }

    #[test]
    fn transfer_identity_case() {
        // any verified solution (x, k, λ): y = k·x mod q reproduces it
        let h = f(3, 1);
        let sols = exhaustive_search(&h, 2, 1 << 20).unwrap();
        for sol in &sols {
            let y: Vec<u32> = sol.x.iter().map(|&e| (2 * e) % 3).collect();
            let (hd, yv) = bent_to_selfdual(&h, &sol.x, &y).unwrap();
            let lam = verify_bent(&hd, &yv, 1).unwrap().expect("transferred");
            assert_eq!(lam, sol.lambda);
        }
    }

    #[test]
    fn census_sorted_by_canonical_lambda() {
        let h = f(3, 1);
        let sols = exhaustive_search(&h, 2, 1 << 20).unwrap();
        let c = census(2, &sols);
        let keys: Vec<Vec<BigInt>> = c.entries.iter().map(|e| e.lambda.canonical_key()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(c.total, sols.len());
    }
}
