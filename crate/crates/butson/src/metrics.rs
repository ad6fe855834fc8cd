//! Chinese-Euclidean geometry of Butson Hadamard codes: weights, covering
//! radius, distance spectrum, deviation, the spherical embedding with its
//! design strength, and the covering/size bounds.
//!
//! Weights are exact integers precisely for `q ∈ {1,2,3,4,6}`; everything
//! downstream carries an exactness flag so integral answers are never
//! reported as floats.

use rayon::prelude::*;

use crate::error::Error;
use crate::matrix::{index_to_vec, ButsonMatrix, ZqCode};
use crate::value::{sort_dedup, Scalar};
use crate::Result;

/// Per-residue Chinese-Euclidean weights `w[t] = 2 − 2·cos(2πt/q)`.
#[derive(Debug, Clone)]
pub struct WeightTable {
    q: usize,
    w: Vec<f64>,
    w_int: Option<Vec<u32>>,
}

impl WeightTable {
    pub fn new(q: usize) -> Self {
        assert!(q >= 1);
        let w: Vec<f64> = (0..q)
            .map(|t| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * t as f64 / q as f64).cos())
            .collect();
        let w_int = match q {
            1 => Some(vec![0]),
            2 => Some(vec![0, 4]),
            3 => Some(vec![0, 3, 3]),
            4 => Some(vec![0, 2, 4, 2]),
            6 => Some(vec![0, 1, 3, 4, 3, 1]),
            _ => None,
        };
        WeightTable { q, w, w_int }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Whether all weights are integers.
    pub fn integral(&self) -> bool {
        self.w_int.is_some()
    }

    pub fn weight(&self, t: u32) -> f64 {
        self.w[t as usize % self.q]
    }

    pub fn weight_int(&self, t: u32) -> Option<u32> {
        self.w_int.as_ref().map(|w| w[t as usize % self.q])
    }
}

/// Chinese-Euclidean distance `d_CE(u, v) = w_CE(u − v)`, exact when the
/// weight table is integral.
pub fn chinese_distance(u: &[u32], v: &[u32], tbl: &WeightTable) -> Result<Scalar> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let q = tbl.q() as u32;
    if let Some(w) = tbl.w_int.as_ref() {
        let mut acc = 0u64;
        for (&a, &b) in u.iter().zip(v) {
            acc += w[((a + q - b % q) % q) as usize] as u64;
        }
        Ok(Scalar::Exact(acc as i64))
    } else {
        let mut acc = 0f64;
        for (&a, &b) in u.iter().zip(v) {
            acc += tbl.w[((a + q - b % q) % q) as usize];
        }
        Ok(Scalar::Approx(acc))
    }
}

/// Outcome of a covering-radius computation.
#[derive(Debug, Clone)]
pub struct CoveringRadius {
    pub value: Scalar,
    /// Whether the first-coordinate slice reduction was applied.
    pub reduced: bool,
    /// Number of ambient vectors examined.
    pub examined: u128,
}

/// `r_CE(C) = max_x min_{c ∈ C} d_CE(x, c)` by sweep over the ambient
/// space.
///
/// When the code is closed under adding `α·1` (always true for `C_H`),
/// `d(x + α·1, C) = d(x, C)`, so the sweep fixes the first coordinate to
/// zero and examines `q^{n−1}` vectors; the closure is checked explicitly
/// before the reduction is used.
pub fn covering_radius(code: &ZqCode, budget: u128) -> Result<CoveringRadius> {
    let (n, q) = (code.n(), code.q());
    if code.is_empty() || n == 0 {
        return Err(Error::InvalidInput("empty code".into()));
    }
    let tbl = WeightTable::new(q);
    let reduced = code.is_translate_closed();
    let free = if reduced { n - 1 } else { n };
    let total = (q as u128)
        .checked_pow(free as u32)
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
    let words = code.words();
    let value = if let Some(w) = tbl.w_int.as_ref() {
        // exact integer sweep
        let max: u64 = (0..total as u64)
            .into_par_iter()
            .map_init(
                || vec![0u32; n],
                |x, idx| {
                    index_to_vec(idx as usize, q, &mut x[n - free..]);
                    let mut best = u64::MAX;
                    for c in words {
                        let mut acc = 0u64;
                        for i in 0..n {
                            acc += w[((x[i] + q as u32 - c[i]) % q as u32) as usize] as u64;
                            if acc >= best {
                                break;
                            }
                        }
                        best = best.min(acc);
                        if best == 0 {
                            break;
                        }
                    }
                    best
                },
            )
            .reduce(|| 0, u64::max);
        Scalar::Exact(max as i64)
    } else {
        let max: f64 = (0..total as u64)
            .into_par_iter()
            .map_init(
                || vec![0u32; n],
                |x, idx| {
                    index_to_vec(idx as usize, q, &mut x[n - free..]);
                    let mut best = f64::INFINITY;
                    for c in words {
                        let mut acc = 0f64;
                        for i in 0..n {
                            acc += tbl.w[((x[i] + q as u32 - c[i]) % q as u32) as usize];
                            if acc >= best {
                                break;
                            }
                        }
                        best = best.min(acc);
                    }
                    best
                },
            )
            .reduce(|| 0.0, f64::max);
        Scalar::Approx(max)
    };
    Ok(CoveringRadius {
        value,
        reduced,
        examined: total,
    })
}

/// Observed and predicted pairwise distance sets of `C_H`.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub observed: Vec<Scalar>,
    pub formula: Vec<Scalar>,
    pub contained: bool,
}

/// Brute-force pairwise Chinese distances of `C_H`, checked against the
/// predicted set `{2n} ∪ {2n(1 − cos 2πt/q) : t = 1…⌊q/2⌋}`.
pub fn distance_spectrum(m: &ButsonMatrix) -> SpectrumReport {
    let code = m.full_code();
    let tbl = WeightTable::new(m.q());
    let words = code.words();
    let mut observed = Vec::new();
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            observed.push(chinese_distance(&words[i], &words[j], &tbl).expect("equal lengths"));
        }
    }
    let observed = sort_dedup(observed, 1e-9);
    let formula = spectrum_formula(m.n(), m.q());
    let contained = observed.iter().all(|d| {
        formula.iter().any(|f| match (d, f) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (d.value() - f.value()).abs() <= 1e-9,
        })
    });
    SpectrumReport {
        observed,
        formula,
        contained,
    }
}

/// The predicted distance set of a Butson Hadamard code.
pub fn spectrum_formula(n: usize, q: usize) -> Vec<Scalar> {
    let tbl = WeightTable::new(q);
    let mut out = vec![if tbl.integral() {
        Scalar::Exact(2 * n as i64)
    } else {
        Scalar::Approx(2.0 * n as f64)
    }];
    for t in 1..=(q / 2) as u32 {
        out.push(match tbl.weight_int(t) {
            Some(w) => Scalar::Exact(n as i64 * w as i64),
            None => Scalar::Approx(n as f64 * tbl.weight(t)),
        });
    }
    sort_dedup(out, 1e-9)
}

/// Covering-radius bounds in the Chinese-Euclidean scale:
/// lower `2n − 2√n` (requires a bent sequence), upper `2n − √(2n)`
/// (requires even `q` and a dephased matrix). Raw values, no rounding.
pub fn covering_bounds(
    n: usize,
    q: usize,
    dephased: bool,
    has_bent: bool,
) -> (Option<f64>, Option<f64>) {
    let nf = n as f64;
    let lower = has_bent.then(|| 2.0 * nf - 2.0 * nf.sqrt());
    let upper = (q.is_multiple_of(2) && dephased).then(|| 2.0 * nf - (2.0 * nf).sqrt());
    (lower, upper)
}

/// Smallest value of `w_CE` attainable by a length-`n` vector that is at
/// least `bound`; defined only for integral weight tables. This is the
/// natural rounding of a real-valued bound to the weight lattice.
pub fn smallest_attainable_at_least(n: usize, q: usize, bound: f64) -> Option<u64> {
    let tbl = WeightTable::new(q);
    let w = tbl.w_int.as_ref()?;
    let maxw = *w.iter().max().unwrap() as usize;
    let cap = maxw * n;
    let mut attain = vec![false; cap + 1];
    attain[0] = true;
    for _ in 0..n {
        let mut next = vec![false; cap + 1];
        for (s, _) in attain.iter().enumerate().filter(|(_, &a)| a) {
            for &wi in w.iter() {
                let t = s + wi as usize;
                if t <= cap {
                    next[t] = true;
                }
            }
        }
        attain = next;
    }
    (0..=cap)
        .filter(|&s| attain[s] && s as f64 >= bound - 1e-9)
        .map(|s| s as u64)
        .next()
}

/// Deviation of `ζ^x` from the polyphase code `ζ^C`: the maximum modulus
/// of the hermitian inner products. For any verified bent sequence this is
/// exactly `√n`.
pub fn deviation(code: &ZqCode, x: &[u32]) -> Result<f64> {
    let (n, q) = (code.n(), code.q());
    if x.len() != n {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: n,
        });
    }
    let (cos, sin) = trig_tables(q);
    let mut best = 0f64;
    for y in code.words() {
        let mut re = 0f64;
        let mut im = 0f64;
        for i in 0..n {
            let d = ((x[i] + q as u32 - y[i]) % q as u32) as usize;
            re += cos[d];
            im += sin[d];
        }
        best = best.max(re.hypot(im));
    }
    Ok(best)
}

fn trig_tables(q: usize) -> (Vec<f64>, Vec<f64>) {
    let cos: Vec<f64> = (0..q)
        .map(|t| (2.0 * std::f64::consts::PI * t as f64 / q as f64).cos())
        .collect();
    let sin: Vec<f64> = (0..q)
        .map(|t| (2.0 * std::f64::consts::PI * t as f64 / q as f64).sin())
        .collect();
    (cos, sin)
}

/// A finite set of unit vectors in `R^dim`.
#[derive(Debug, Clone)]
pub struct SphericalPoints {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
}

/// Embed a `Z_q` code on the unit sphere in `R^{2n}`: coordinate `i` of a
/// word becomes the pair `(cos, sin)(2π·w_i/q)`, and the whole vector is
/// scaled by `1/√n`.
pub fn spherical_embed(code: &ZqCode) -> SphericalPoints {
    let (n, q) = (code.n(), code.q());
    let (cos, sin) = trig_tables(q);
    let scale = 1.0 / (n as f64).sqrt();
    let points = code
        .words()
        .iter()
        .map(|w| {
            let mut p = Vec::with_capacity(2 * n);
            for &e in w {
                p.push(cos[e as usize] * scale);
                p.push(sin[e as usize] * scale);
            }
            p
        })
        .collect();
    SphericalPoints { dim: 2 * n, points }
}

/// Minimum squared Euclidean distance of the point set.
pub fn min_sq_distance(s: &SphericalPoints) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..s.points.len() {
        for j in (i + 1)..s.points.len() {
            let d: f64 = s.points[i]
                .iter()
                .zip(&s.points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            best = best.min(d);
        }
    }
    best
}

const DESIGN_TOL: f64 = 1e-9;

/// Largest `t ∈ {1, 2}` whose design equations hold within `1e−9`
/// (0 when the center of mass is already off the origin):
/// 1-design: `Σ_x x_i = 0`; 2-design additionally
/// `Σ_x (x_i² − x_j²) = 0` and `Σ_x x_i·x_j = 0` for all `i ≠ j`.
pub fn design_strength(s: &SphericalPoints) -> u8 {
    let d = s.dim;
    let mut sums = vec![0f64; d];
    for p in &s.points {
        for (i, &v) in p.iter().enumerate() {
            sums[i] += v;
        }
    }
    if sums.iter().any(|v| v.abs() > DESIGN_TOL) {
        return 0;
    }
    let mut sq = vec![0f64; d];
    for p in &s.points {
        for (i, &v) in p.iter().enumerate() {
            sq[i] += v * v;
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            if (sq[i] - sq[j]).abs() > DESIGN_TOL {
                return 1;
            }
            let cross: f64 = s.points.iter().map(|p| p[i] * p[j]).sum();
            if cross.abs() > DESIGN_TOL {
                return 1;
            }
        }
    }
    2
}

/// Whether the point set equals its negation, with `1e−9` point matching.
pub fn is_antipodal(s: &SphericalPoints) -> bool {
    s.points.iter().all(|p| {
        s.points.iter().any(|cand| {
            p.iter()
                .zip(cand)
                .map(|(a, b)| (a + b) * (a + b))
                .sum::<f64>()
                .sqrt()
                <= DESIGN_TOL
        })
    })
}

/// A spherical covering-radius bound with the hypothesis that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereBound {
    pub value: f64,
    pub hypothesis: &'static str,
}

/// Best covering-radius bound on the unit sphere applicable to the
/// measured strength/antipodality of the point set:
/// antipodal or 1-design give `√2`; a 2-design gives `√(2(1 − 1/dim))`;
/// an antipodal 2-design sharpens to `√(2(1 − 1/√dim))`.
pub fn sphere_covering_bound(s: &SphericalPoints) -> Option<SphereBound> {
    let strength = design_strength(s);
    let antipodal = is_antipodal(s);
    let d = s.dim as f64;
    let mut candidates: Vec<SphereBound> = Vec::new();
    if antipodal {
        candidates.push(SphereBound {
            value: 2f64.sqrt(),
            hypothesis: "antipodal",
        });
    }
    if strength >= 1 {
        candidates.push(SphereBound {
            value: 2f64.sqrt(),
            hypothesis: "1-design",
        });
    }
    if strength >= 2 {
        candidates.push(SphereBound {
            value: (2.0 * (1.0 - 1.0 / d)).sqrt(),
            hypothesis: "2-design",
        });
        if antipodal {
            candidates.push(SphereBound {
                value: (2.0 * (1.0 - 1.0 / d.sqrt())).sqrt(),
                hypothesis: "antipodal 2-design",
            });
        }
    }
    candidates
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
}

/// The Levenshtein size bound
/// `L₃(s) = d(2 + (d+1)s)(1 − s) / (1 − d·s²)` for a spherical code in
/// dimension `d` with maximal inner product `s`, valid on
/// `s ∈ [0, 1/(√(d+3)+1))`.
pub fn levenshtein_l3(d: u64, s: f64) -> Result<f64> {
    let df = d as f64;
    let limit = 1.0 / ((df + 3.0).sqrt() + 1.0);
    if !(0.0..1.0).contains(&s) || s >= limit {
        return Err(Error::OutOfDomain { s, limit });
    }
    Ok(df * (2.0 + (df + 1.0) * s) * (1.0 - s) / (1.0 - df * s * s))
}
