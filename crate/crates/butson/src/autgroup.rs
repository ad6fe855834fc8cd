//! Graph encodings of the (strong) automorphism group: the digraphs
//! `G(H)`, `G'(H)` and `G^k(H)`, the expanded and associated designs, the
//! Θ map into permutation pairs, exact membership tests, a desk-scale
//! automorphism search by individualization–refinement, and decoding of
//! vertex permutations back to monomial matrices.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::bent::{verify_bent, BentSolution};
use crate::cyclotomic::check_multiplier;
use crate::error::Error;
use crate::matrix::{ButsonMatrix, MonomialMatrix};
use crate::Result;

/// Vertex classes of the encoding digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    /// `r(t, ζ^e)` — one per row and root.
    Row,
    /// `c(s, ζ^e)` — one per column and root.
    Col,
    /// `I(s, ζ^e)` — path midpoints, strong mode only.
    Mid,
}

/// Arc classes, by construction rule. The coloring refines the search but
/// never coarsens the group: each rule's arc set is recoverable from the
/// uncolored graph, and an uncolored mode is provided for cross-checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    RowCycle = 0,
    ColCycle = 1,
    Entry = 2,
    Path = 3,
}

/// Plain graph `G(H)` or strong graph `G^k(H)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphMode {
    Plain,
    Strong(usize),
}

/// The encoding digraph of a Butson matrix.
#[derive(Debug, Clone)]
pub struct Digraph {
    pub mode: GraphMode,
    n: usize,
    q: usize,
    matrix: ButsonMatrix,
    kinds: Vec<VertexKind>,
    arcs: Vec<(usize, usize, ArcKind)>,
    out_adj: Vec<Vec<Vec<usize>>>,          // [color][v] -> targets
    in_adj: Vec<Vec<Vec<usize>>>,           // [color][v] -> sources
    arc_sets: Vec<HashSet<(usize, usize)>>, // [color]
}

const ARC_COLORS: usize = 4;

impl Digraph {
    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize, ArcKind)] {
        &self.arcs
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    fn row_vertex(&self, t: usize, e: usize) -> usize {
        t * self.q + e
    }

    fn col_vertex(&self, s: usize, e: usize) -> usize {
        self.n * self.q + s * self.q + e
    }

    fn mid_vertex(&self, s: usize, e: usize) -> usize {
        2 * self.n * self.q + s * self.q + e
    }

    /// Human-readable vertex label, 1-based indices.
    pub fn label(&self, v: usize) -> String {
        let q = self.q;
        let nq = self.n * q;
        if v < nq {
            format!("r({},{})", v / q + 1, v % q)
        } else if v < 2 * nq {
            let w = v - nq;
            format!("c({},{})", w / q + 1, w % q)
        } else {
            let w = v - 2 * nq;
            format!("I({},{})", w / q + 1, w % q)
        }
    }

    /// Whether the vertex permutation `f` maps every arc to an arc of the
    /// same rule color.
    pub fn preserves_arcs(&self, f: &[usize]) -> bool {
        if f.len() != self.vertex_count() {
            return false;
        }
        self.arcs
            .iter()
            .all(|&(a, b, kind)| self.arc_sets[kind as usize].contains(&(f[a], f[b])))
    }

    /// Arc preservation ignoring colors (the literal digraph criterion).
    pub fn preserves_arcs_uncolored(&self, f: &[usize]) -> bool {
        if f.len() != self.vertex_count() {
            return false;
        }
        self.arcs
            .iter()
            .all(|&(a, b, _)| self.arc_sets.iter().any(|set| set.contains(&(f[a], f[b]))))
    }

    /// DOT export with vertex labels and arc rule classes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph butson {\n");
        for v in 0..self.vertex_count() {
            out.push_str(&format!("  v{} [label=\"{}\"];\n", v, self.label(v)));
        }
        for &(a, b, kind) in &self.arcs {
            out.push_str(&format!("  v{a} -> v{b} [kind=\"{}\"];\n", arc_name(kind)));
        }
        out.push_str("}\n");
        out
    }

    /// DIMACS-like export: a problem line, one vertex-color header line
    /// (class index per vertex), then 1-based `a <src> <dst> <color>`
    /// lines.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p digraph {} {}\n", self.vertex_count(), self.arc_count());
        let colors: Vec<String> = self
            .kinds
            .iter()
            .map(|k| match k {
                VertexKind::Row => "0".to_string(),
                VertexKind::Col => "1".to_string(),
                VertexKind::Mid => "2".to_string(),
            })
            .collect();
        out.push_str(&format!("colors {}\n", colors.join(" ")));
        for &(a, b, kind) in &self.arcs {
            out.push_str(&format!("a {} {} {}\n", a + 1, b + 1, kind as usize));
        }
        out
    }
}

fn arc_name(kind: ArcKind) -> &'static str {
    match kind {
        ArcKind::RowCycle => "row-cycle",
        ArcKind::ColCycle => "col-cycle",
        ArcKind::Entry => "entry",
        ArcKind::Path => "path",
    }
}

/// Build the encoding digraph of `H`.
///
/// Plain mode: `2qn` vertices; `qn` row-cycle arcs
/// `(r(t,x), r(t,ζx))`, `qn` column-cycle arcs, and `qn²` entry arcs
/// `(r(t,x), c(s, H_ts·x))`. Strong mode adds `qn` midpoints with the
/// path arcs `(r(s, x^k), I(s,x))` and `(I(s,x), c(s,x))`.
pub fn build_digraph(h: &ButsonMatrix, mode: GraphMode) -> Result<Digraph> {
    let (n, q) = (h.n(), h.q());
    if let GraphMode::Strong(k) = mode {
        check_multiplier(k, q)?;
    }
    let nverts = match mode {
        GraphMode::Plain => 2 * n * q,
        GraphMode::Strong(_) => 3 * n * q,
    };
    let mut kinds = Vec::with_capacity(nverts);
    for _ in 0..n * q {
        kinds.push(VertexKind::Row);
    }
    for _ in 0..n * q {
        kinds.push(VertexKind::Col);
    }
    if matches!(mode, GraphMode::Strong(_)) {
        for _ in 0..n * q {
            kinds.push(VertexKind::Mid);
        }
    }
    let mut g = Digraph {
        mode,
        n,
        q,
        matrix: h.clone(),
        kinds,
        arcs: Vec::new(),
        out_adj: vec![vec![Vec::new(); nverts]; ARC_COLORS],
        in_adj: vec![vec![Vec::new(); nverts]; ARC_COLORS],
        arc_sets: vec![HashSet::new(); ARC_COLORS],
    };
    let push = |g: &mut Digraph, a: usize, b: usize, kind: ArcKind| {
        g.arcs.push((a, b, kind));
        g.out_adj[kind as usize][a].push(b);
        g.in_adj[kind as usize][b].push(a);
        g.arc_sets[kind as usize].insert((a, b));
    };
    for t in 0..n {
        for e in 0..q {
            let a = g.row_vertex(t, e);
            let b = g.row_vertex(t, (e + 1) % q);
            push(&mut g, a, b, ArcKind::RowCycle);
        }
    }
    for s in 0..n {
        for e in 0..q {
            let a = g.col_vertex(s, e);
            let b = g.col_vertex(s, (e + 1) % q);
            push(&mut g, a, b, ArcKind::ColCycle);
        }
    }
    for t in 0..n {
        for s in 0..n {
            let l = h.entry(t, s) as usize;
            for e in 0..q {
                let a = g.row_vertex(t, e);
                let b = g.col_vertex(s, (l + e) % q);
                push(&mut g, a, b, ArcKind::Entry);
            }
        }
    }
    if let GraphMode::Strong(k) = mode {
        for s in 0..n {
            for e in 0..q {
                let y = (k * e) % q;
                let a = g.row_vertex(s, y);
                let m = g.mid_vertex(s, e);
                let b = g.col_vertex(s, e);
                push(&mut g, a, m, ArcKind::Path);
                push(&mut g, m, b, ArcKind::Path);
            }
        }
    }
    Ok(g)
}

/// The expanded design `E_H = [ζ^i H ζ^j]`: an `nq × nq` matrix of roots
/// of unity stored as exponents, block `(i, j)` holding `ζ^{i+j}·H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedDesign {
    pub size: usize,
    q: usize,
    exps: Vec<u32>,
}

impl ExpandedDesign {
    pub fn entry(&self, r: usize, c: usize) -> u32 {
        self.exps[r * self.size + c]
    }

    /// Whether simultaneous row/column permutations `(f1, f2)` fix the
    /// design entry-for-entry: `E[f1(r)][f2(c)] = E[r][c]`.
    pub fn fixed_by(&self, f1: &[usize], f2: &[usize]) -> bool {
        let m = self.size;
        if f1.len() != m || f2.len() != m {
            return false;
        }
        (0..m).all(|r| (0..m).all(|c| self.entry(f1[r], f2[c]) == self.entry(r, c)))
    }
}

/// The associated design `A_H`: the unit-entry indicator of `E_H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatedDesign {
    pub size: usize,
    bits: Vec<bool>,
}

impl AssociatedDesign {
    pub fn entry(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.size + c]
    }

    pub fn row_sum(&self, r: usize) -> usize {
        (0..self.size).filter(|&c| self.entry(r, c)).count()
    }
}

/// Build `E_H`. Point `(i, t)` (block exponent `i`, row `t`) has flat
/// index `i·n + t`.
pub fn expanded_design(h: &ButsonMatrix) -> ExpandedDesign {
    let (n, q) = (h.n(), h.q());
    let size = n * q;
    let mut exps = vec![0u32; size * size];
    for bi in 0..q {
        for t in 0..n {
            let r = bi * n + t;
            for bj in 0..q {
                for u in 0..n {
                    let c = bj * n + u;
                    exps[r * size + c] = ((bi + bj) as u32 + h.entry(t, u)) % q as u32;
                }
            }
        }
    }
    ExpandedDesign { size, q, exps }
}

/// Build `A_H` by zeroing every non-identity entry of `E_H`.
pub fn associated_design(h: &ButsonMatrix) -> AssociatedDesign {
    let e = expanded_design(h);
    let bits = e.exps.iter().map(|&x| x == 0).collect();
    AssociatedDesign { size: e.size, bits }
}

/// The Θ map on a monomial pair: permutations of the `nq` points of `E_H`.
///
/// With `X = Σ_ω ω·X_ω`, `θ⁽¹⁾(X) = Σ_ω T_ω ⊗ X_ω` sends point `(b, j)`
/// to `(b − e_j, π(j))` and `θ⁽²⁾(Y) = Σ_ω S_ω ⊗ Y_ω` sends `(b, j)` to
/// `(b + e_j, π(j))`. For `(X, Y) ∈ Aut(H)` the image pair fixes `E_H`.
pub fn theta_map(x: &MonomialMatrix, y: &MonomialMatrix) -> (Vec<usize>, Vec<usize>) {
    let n = x.size();
    let q = x.q();
    let mut p1 = vec![0usize; n * q];
    let mut p2 = vec![0usize; n * q];
    for b in 0..q {
        for j in 0..n {
            let src = b * n + j;
            let b1 = (b + q - x.diag[j] as usize % q) % q;
            p1[src] = b1 * n + x.perm[j];
            let b2 = (b + y.diag[j] as usize) % q;
            p2[src] = b2 * n + y.perm[j];
        }
    }
    (p1, p2)
}

/// Exact automorphism test: `P·H·Q* = H` over `Z[ζ_q]`.
pub fn is_automorphism(h: &ButsonMatrix, p: &MonomialMatrix, q: &MonomialMatrix) -> bool {
    match h.apply_monomials(p, q) {
        Ok(moved) => moved == *h,
        Err(_) => false,
    }
}

/// Exact strong-group test: `μ_k(M)·H = H·M`.
pub fn is_strong(h: &ButsonMatrix, m: &MonomialMatrix, k: usize) -> Result<bool> {
    check_multiplier(k, h.q())?;
    let (n, q) = (h.n(), h.q());
    if m.size() != n || m.q() != q {
        return Ok(false);
    }
    let pinv = m.inverse_perm();
    for (i, &p) in pinv.iter().enumerate() {
        for j in 0..n {
            // (μ_k(M)·H)[i][j] = ζ^{k·d_p} H[p][j]
            let lhs = (k as u64 * m.diag[p] as u64 + h.entry(p, j) as u64) % q as u64;
            // (H·M)[i][j] = H[i][perm[j]]·ζ^{d_j}
            let rhs = (h.entry(i, m.perm[j]) as u64 + m.diag[j] as u64) % q as u64;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Push a verified solution through a strong-group element: `M·X` is again
/// a solution with the same λ. Errors when `M ∉ SAut(H, k)`.
pub fn act_on_bent(
    m: &MonomialMatrix,
    sol: &BentSolution,
    h: &ButsonMatrix,
) -> Result<BentSolution> {
    if !is_strong(h, m, sol.k)? {
        return Err(Error::NotStrong { k: sol.k });
    }
    let x = m.act_on_exponents(&sol.x)?;
    let lambda = verify_bent(h, &x, sol.k)?.ok_or(Error::NotStrong { k: sol.k })?;
    debug_assert_eq!(lambda, sol.lambda);
    Ok(BentSolution {
        x,
        k: sol.k,
        lambda,
    })
}

// ---------------------------------------------------------------------------
// individualization–refinement automorphism search
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Partition {
    cells: Vec<Vec<usize>>,
}

impl Partition {
    fn from_classes(classes: &[usize]) -> Partition {
        let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in classes.iter().enumerate() {
            by_class.entry(c).or_default().push(v);
        }
        Partition {
            cells: by_class.into_values().collect(),
        }
    }

    fn unit(n: usize) -> Partition {
        Partition {
            cells: vec![(0..n).collect()],
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    fn first_nonsingleton(&self) -> Option<usize> {
        self.cells.iter().position(|c| c.len() > 1)
    }

    /// Move `vertex` to the front of cell `cell` as its own cell; the rest
    /// of the cell is appended at the end.
    fn individualize(&mut self, cell: usize, vertex: usize) {
        let old = std::mem::take(&mut self.cells[cell]);
        let rest: Vec<usize> = old.into_iter().filter(|&v| v != vertex).collect();
        self.cells[cell] = vec![vertex];
        self.cells.push(rest);
    }

    fn singleton_map(&self, image: &Partition) -> Vec<usize> {
        let n: usize = self.cells.iter().map(Vec::len).sum();
        let mut f = vec![usize::MAX; n];
        for (c, cell) in self.cells.iter().enumerate() {
            f[cell[0]] = image.cells[c][0];
        }
        f
    }
}

struct Refiner<'g> {
    g: &'g Digraph,
    colored: bool,
}

impl<'g> Refiner<'g> {
    /// Lockstep equitable refinement of a source/image partition pair.
    /// Returns `false` when the signature multisets of corresponding cells
    /// diverge, i.e. no automorphism is compatible with the pair.
    fn refine_pair(&self, a: &mut Partition, b: &mut Partition) -> bool {
        let n = self.g.vertex_count();
        let passes_colors: Vec<Vec<usize>> = if self.colored {
            (0..ARC_COLORS).map(|c| vec![c]).collect()
        } else {
            vec![(0..ARC_COLORS).collect()]
        };
        loop {
            let mut changed = false;
            let mut w = 0;
            while w < a.cells.len() {
                for colors in &passes_colors {
                    let mut in_w_a = vec![false; n];
                    for &v in &a.cells[w] {
                        in_w_a[v] = true;
                    }
                    let mut in_w_b = vec![false; n];
                    for &v in &b.cells[w] {
                        in_w_b[v] = true;
                    }
                    let sig_a = |v: usize| -> (u32, u32) {
                        let mut outd = 0;
                        let mut ind = 0;
                        for &c in colors {
                            outd +=
                                self.g.out_adj[c][v].iter().filter(|&&u| in_w_a[u]).count() as u32;
                            ind +=
                                self.g.in_adj[c][v].iter().filter(|&&u| in_w_a[u]).count() as u32;
                        }
                        (outd, ind)
                    };
                    let sig_b = |v: usize| -> (u32, u32) {
                        let mut outd = 0;
                        let mut ind = 0;
                        for &c in colors {
                            outd +=
                                self.g.out_adj[c][v].iter().filter(|&&u| in_w_b[u]).count() as u32;
                            ind +=
                                self.g.in_adj[c][v].iter().filter(|&&u| in_w_b[u]).count() as u32;
                        }
                        (outd, ind)
                    };
                    let mut c = 0;
                    while c < a.cells.len() {
                        let mut groups_a: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
                        for &v in &a.cells[c] {
                            groups_a.entry(sig_a(v)).or_default().push(v);
                        }
                        let mut groups_b: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
                        for &v in &b.cells[c] {
                            groups_b.entry(sig_b(v)).or_default().push(v);
                        }
                        if groups_a.len() != groups_b.len()
                            || groups_a
                                .iter()
                                .zip(&groups_b)
                                .any(|((ka, va), (kb, vb))| ka != kb || va.len() != vb.len())
                        {
                            return false;
                        }
                        if groups_a.len() > 1 {
                            changed = true;
                            let mut parts_a = groups_a.into_values();
                            let mut parts_b = groups_b.into_values();
                            a.cells[c] = parts_a.next().unwrap();
                            b.cells[c] = parts_b.next().unwrap();
                            for (pa, pb) in parts_a.zip(parts_b) {
                                a.cells.push(pa);
                                b.cells.push(pb);
                            }
                        }
                        c += 1;
                    }
                }
                w += 1;
            }
            if !changed {
                return true;
            }
        }
    }

    fn check(&self, f: &[usize]) -> bool {
        if self.colored {
            self.g.preserves_arcs(f)
        } else {
            self.g.preserves_arcs_uncolored(f)
        }
    }

    /// Depth-first completion: find one automorphism consistent with the
    /// partition pair, if any.
    fn find_one(&self, a: &Partition, b: &Partition) -> Option<Vec<usize>> {
        if a.is_discrete() {
            let f = a.singleton_map(b);
            return self.check(&f).then_some(f);
        }
        let cell = a.first_nonsingleton().unwrap();
        let v = a.cells[cell][0];
        for &u in &b.cells[cell] {
            let mut a2 = a.clone();
            let mut b2 = b.clone();
            a2.individualize(cell, v);
            b2.individualize(cell, u);
            if !self.refine_pair(&mut a2, &mut b2) {
                continue;
            }
            if let Some(f) = self.find_one(&a2, &b2) {
                return Some(f);
            }
        }
        None
    }

    /// Orbit–stabilizer generator collection: for the first branch vertex
    /// `v`, recurse on the stabilizer (`v → v`) and add one coset
    /// representative per alternative image that extends to an
    /// automorphism.
    fn generators(&self, a: &Partition, b: &Partition, gens: &mut Vec<Vec<usize>>) {
        if a.is_discrete() {
            return;
        }
        let cell = a.first_nonsingleton().unwrap();
        let v = a.cells[cell][0];
        {
            let mut a2 = a.clone();
            let mut b2 = b.clone();
            a2.individualize(cell, v);
            b2.individualize(cell, v);
            if self.refine_pair(&mut a2, &mut b2) {
                self.generators(&a2, &b2, gens);
            }
        }
        let candidates: Vec<usize> = b.cells[cell].iter().copied().filter(|&u| u != v).collect();
        for u in candidates {
            let mut a2 = a.clone();
            let mut b2 = b.clone();
            a2.individualize(cell, v);
            b2.individualize(cell, u);
            if !self.refine_pair(&mut a2, &mut b2) {
                continue;
            }
            if let Some(f) = self.find_one(&a2, &b2) {
                gens.push(f);
            }
        }
    }
}

/// Generating set of the automorphism group of the arc-colored digraph,
/// found by individualization–refinement backtracking. Every returned
/// permutation preserves arcs (and their rule colors); for a trivial group
/// the list is empty (the identity generates it).
pub fn digraph_automorphisms(g: &Digraph, budget: usize) -> Result<Vec<Vec<usize>>> {
    automorphisms_mode(g, budget, true)
}

/// Uncolored fallback: the literal digraph automorphism criterion, with
/// only the vertex classes as the initial invariant discovered by degrees.
pub fn digraph_automorphisms_uncolored(g: &Digraph, budget: usize) -> Result<Vec<Vec<usize>>> {
    automorphisms_mode(g, budget, false)
}

fn automorphisms_mode(g: &Digraph, budget: usize, colored: bool) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    if n > budget {
        return Err(Error::BudgetExceeded {
            required: n as u128,
            budget: budget as u128,
        });
    }
    let refiner = Refiner { g, colored };
    let mut a = if colored {
        let classes: Vec<usize> = g
            .kinds
            .iter()
            .map(|k| match k {
                VertexKind::Row => 0,
                VertexKind::Col => 1,
                VertexKind::Mid => 2,
            })
            .collect();
        Partition::from_classes(&classes)
    } else {
        Partition::unit(n)
    };
    let mut b = a.clone();
    if !refiner.refine_pair(&mut a, &mut b) {
        return Ok(Vec::new());
    }
    let mut gens = Vec::new();
    refiner.generators(&a, &b, &mut gens);
    Ok(gens)
}

/// Closure of a generating set under composition, up to `cap` elements
/// (identity included). `None` when the cap is exceeded.
pub fn group_closure(gens: &[Vec<usize>], n: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
    let identity: Vec<usize> = (0..n).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(identity.clone());
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    queue.push_back(identity);
    while let Some(f) = queue.pop_front() {
        for g in gens {
            let composed: Vec<usize> = (0..n).map(|i| g[f[i]]).collect();
            if seen.insert(composed.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(composed);
            }
        }
    }
    Some(seen.into_iter().collect())
}

/// Re-encode monomial matrices as a vertex permutation of the digraph,
/// inverting [`decode_digraph_perm`]: with `P = P₁D₁` the row vertices map
/// by `f(r(t, e)) = r(π(t), e − d_P[t])` and likewise for columns (and
/// midpoints in strong mode, which follow the column shifts).
pub fn encode_monomials(
    g: &Digraph,
    p: &MonomialMatrix,
    q_mat: &MonomialMatrix,
) -> Result<Vec<usize>> {
    let (n, q) = (g.n, g.q);
    if p.size() != n || q_mat.size() != n || p.q() != q || q_mat.q() != q {
        return Err(Error::LengthMismatch {
            left: p.size(),
            right: n,
        });
    }
    let mut f = vec![0usize; g.vertex_count()];
    for t in 0..n {
        let shift = (q as u32 - p.diag[t] % q as u32) % q as u32;
        for e in 0..q {
            f[g.row_vertex(t, e)] = g.row_vertex(p.perm[t], (e + shift as usize) % q);
        }
    }
    for s in 0..n {
        let shift = (q as u32 - q_mat.diag[s] % q as u32) % q as u32;
        for e in 0..q {
            f[g.col_vertex(s, e)] = g.col_vertex(q_mat.perm[s], (e + shift as usize) % q);
        }
    }
    if matches!(g.mode, GraphMode::Strong(_)) {
        for s in 0..n {
            let shift = (q as u32 - q_mat.diag[s] % q as u32) % q as u32;
            for e in 0..q {
                f[g.mid_vertex(s, e)] = g.mid_vertex(q_mat.perm[s], (e + shift as usize) % q);
            }
        }
    }
    Ok(f)
}

/// A decoded digraph automorphism.
#[derive(Debug, Clone)]
pub enum DecodedAut {
    /// Plain mode: `(P, Q)` with `P·H·Q* = H`.
    Pair(MonomialMatrix, MonomialMatrix),
    /// Strong mode: the single `M` with `μ_k(M)·H = H·M` (here `P = μ_k(Q)`
    /// and `M = Q`).
    Strong(MonomialMatrix),
}

/// Decode an arc-preserving vertex permutation into monomial matrices and
/// verify the matrix identity exactly before returning.
pub fn decode_digraph_perm(g: &Digraph, f: &[usize]) -> Result<DecodedAut> {
    let (n, q) = (g.n, g.q);
    if f.len() != g.vertex_count() {
        return Err(Error::DecodeFailed("length mismatch".into()));
    }
    // rows: f(r(t, e)) = r(t', (η_t + e) mod q)
    let mut row_perm = vec![0usize; n];
    let mut row_shift = vec![0u32; n];
    for t in 0..n {
        let img = f[g.row_vertex(t, 0)];
        if img >= n * q {
            return Err(Error::DecodeFailed(format!(
                "row vertex {} maps outside the row class",
                g.label(g.row_vertex(t, 0))
            )));
        }
        let (t2, eta) = (img / q, img % q);
        row_perm[t] = t2;
        row_shift[t] = eta as u32;
        for e in 0..q {
            let expect = g.row_vertex(t2, (eta + e) % q);
            if f[g.row_vertex(t, e)] != expect {
                return Err(Error::DecodeFailed(format!(
                    "cycle-inconsistent exponent shift on row {}",
                    t + 1
                )));
            }
        }
    }
    let mut col_perm = vec![0usize; n];
    let mut col_shift = vec![0u32; n];
    for s in 0..n {
        let img = f[g.col_vertex(s, 0)];
        if !(n * q..2 * n * q).contains(&img) {
            return Err(Error::DecodeFailed(format!(
                "column vertex {} maps outside the column class",
                g.label(g.col_vertex(s, 0))
            )));
        }
        let w = img - n * q;
        let (s2, zeta) = (w / q, w % q);
        col_perm[s] = s2;
        col_shift[s] = zeta as u32;
        for e in 0..q {
            let expect = g.col_vertex(s2, (zeta + e) % q);
            if f[g.col_vertex(s, e)] != expect {
                return Err(Error::DecodeFailed(format!(
                    "cycle-inconsistent exponent shift on column {}",
                    s + 1
                )));
            }
        }
    }
    let qq = q as u32;
    // P = P₁D₁ with t-th diagonal entry conj(y_t) = ζ^{−η_t}
    let p = MonomialMatrix::new(
        q,
        row_perm,
        row_shift.iter().map(|&e| (qq - e % qq) % qq).collect(),
    )?;
    let qm = MonomialMatrix::new(
        q,
        col_perm,
        col_shift.iter().map(|&e| (qq - e % qq) % qq).collect(),
    )?;
    match g.mode {
        GraphMode::Plain => {
            if !is_automorphism(&g.matrix, &p, &qm) {
                return Err(Error::DecodeFailed(
                    "decoded pair does not fix the matrix".into(),
                ));
            }
            Ok(DecodedAut::Pair(p, qm))
        }
        GraphMode::Strong(k) => {
            if p.perm != qm.perm {
                return Err(Error::DecodeFailed(
                    "strong permutation parts differ between rows and columns".into(),
                ));
            }
            if p != qm.apply_multiplier(k)? {
                return Err(Error::DecodeFailed("P ≠ μ_k(Q) in strong mode".into()));
            }
            if !is_strong(&g.matrix, &qm, k)? {
                return Err(Error::DecodeFailed(
                    "decoded matrix is not in the strong group".into(),
                ));
            }
            Ok(DecodedAut::Strong(qm))
        }
    }
}
