//! Symbolic calculus of the equal-length path-pair generators.
//!
//! A [`PathPair`] `(alpha, beta)` with `|alpha| = |beta|` and
//! `r(alpha) = r(beta)` stands for the word `s_alpha s_beta^*`. Products
//! follow the prefix rule
//!
//! ```text
//!   (alpha, beta) (mu, nu) = (alpha mu', nu)   if mu = beta mu'
//!                          = (alpha, nu beta') if beta = mu beta'
//!                          = 0                 otherwise
//! ```
//!
//! For the truncation by pairs of length `<= n` with common range `v`, the
//! map `phi` sends `(alpha, beta)` to the sum of matrix units
//! `e_{(alpha g)(beta g)}` over loops `g` at `v` with `|alpha g| <= n`, in
//! the matrix algebra indexed by the paths into `v` of length `<= n`. All
//! coefficients are exact complex rationals, so the homomorphism and
//! independence checks are equalities, not approximations.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::count::{count_class, count_through_set, CountError, PathClass};
use crate::graph::{FiniteGraph, GraphWindow, VertexId};

pub type Coeff = Complex<BigRational>;

fn coeff_one() -> Coeff {
    Complex::new(BigRational::one(), BigRational::zero())
}

#[derive(Debug, Error)]
pub enum AfError {
    #[error("window of radius {radius} is too small (needed {needed})")]
    WindowTooSmall { needed: usize, radius: usize },
    #[error("pair is not a generator of the requested truncation: {0}")]
    NotInOmega(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("generator set too large: {size} pairs exceed the cap {cap}")]
    OmegaTooLarge { size: usize, cap: usize },
    #[error(transparent)]
    Count(#[from] CountError),
}

/// A finite path: a start vertex and a consecutive edge sequence. The empty
/// path at `v` has length 0 and range `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    start: VertexId,
    end: VertexId,
    edges: Vec<crate::graph::EdgeId>,
}

impl Path {
    pub fn empty(v: VertexId) -> Path {
        Path { start: v, end: v, edges: Vec::new() }
    }

    /// Build from consecutive edge indices of `g`.
    pub fn from_edge_indices(g: &FiniteGraph, indices: &[usize]) -> Path {
        if indices.is_empty() {
            panic!("use Path::empty for length-0 paths");
        }
        let mut at = g.edge(indices[0]).src;
        let start = at;
        let mut edges = Vec::with_capacity(indices.len());
        for &i in indices {
            let e = g.edge(i);
            assert_eq!(e.src, at, "edges are not consecutive");
            edges.push(e.id);
            at = e.dst;
        }
        Path { start, end: at, edges }
    }

    pub fn source(&self) -> VertexId {
        self.start
    }

    pub fn range(&self) -> VertexId {
        self.end
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_ids(&self) -> &[crate::graph::EdgeId] {
        &self.edges
    }

    /// `self` followed by `other`; requires `r(self) = s(other)`.
    pub fn concat(&self, other: &Path) -> Path {
        assert_eq!(self.end, other.start, "paths are not composable");
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path { start: self.start, end: other.end, edges }
    }

    /// If `self` is a prefix of `other`, the remaining suffix.
    pub fn strip_prefix_of(&self, other: &Path) -> Option<Path> {
        if self.len() > other.len() || self.start != other.start {
            return None;
        }
        if self.edges[..] != other.edges[..self.len()] {
            return None;
        }
        if self.len() == other.len() {
            return Some(Path::empty(other.end));
        }
        // recover the suffix start: it is the range of self
        let mut suffix = Path {
            start: self.end,
            end: other.end,
            edges: other.edges[self.len()..].to_vec(),
        };
        // normalize: suffix of an empty prefix is the whole path
        if self.is_empty() {
            suffix.start = other.start;
        }
        Some(suffix)
    }

    /// Canonical display: `v` for the empty path at `v`, else the edge ids.
    pub fn display(&self) -> String {
        if self.is_empty() {
            format!("({})", self.start.0)
        } else {
            let ids: Vec<String> = self.edges.iter().map(|e| e.0.to_string()).collect();
            format!("[{}]", ids.join("."))
        }
    }
}

// canonical order: by length, then lexicographic edge ids, then start
impl Ord for Path {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len(), &self.edges, self.start).cmp(&(other.len(), &other.edges, other.start))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// The generator `s_alpha s_beta^*`: equal lengths, common range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathPair {
    pub alpha: Path,
    pub beta: Path,
}

impl PathPair {
    pub fn new(alpha: Path, beta: Path) -> PathPair {
        assert_eq!(alpha.len(), beta.len(), "pair legs must have equal length");
        assert_eq!(alpha.range(), beta.range(), "pair legs must share their range");
        PathPair { alpha, beta }
    }

    /// The vertex projection `p_v`, i.e. the pair of empty paths at `v`.
    pub fn projection(v: VertexId) -> PathPair {
        PathPair::new(Path::empty(v), Path::empty(v))
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn range(&self) -> VertexId {
        self.alpha.range()
    }

    pub fn display(&self) -> String {
        format!("{}{}*", self.alpha.display(), self.beta.display())
    }
}

/// Product of two generators; `None` is the zero product.
pub fn multiply(x: &PathPair, y: &PathPair) -> Option<PathPair> {
    if let Some(mu_rest) = x.beta.strip_prefix_of(&y.alpha) {
        // mu = beta mu': (alpha mu', nu)
        return Some(PathPair::new(x.alpha.concat(&mu_rest), y.beta.clone()));
    }
    if let Some(beta_rest) = y.alpha.strip_prefix_of(&x.beta) {
        // beta = mu beta': (alpha, nu beta')
        return Some(PathPair::new(x.alpha.clone(), y.beta.concat(&beta_rest)));
    }
    None
}

/// The adjoint `(s_alpha s_beta^*)^* = s_beta s_alpha^*`.
pub fn adjoint(x: &PathPair) -> PathPair {
    PathPair::new(x.beta.clone(), x.alpha.clone())
}

/// A finite formal combination of path pairs with exact complex-rational
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<PathPair, Coeff>,
}

impl AlgebraElement {
    pub fn zero() -> AlgebraElement {
        AlgebraElement::default()
    }

    pub fn from_pair(pair: PathPair) -> AlgebraElement {
        let mut el = AlgebraElement::zero();
        el.add_term(pair, coeff_one());
        el
    }

    pub fn add_term(&mut self, pair: PathPair, coeff: Coeff) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(pair).or_insert_with(Coeff::zero);
        *entry += coeff;
        if entry.is_zero() {
            // remove cancelled terms; re-borrow to drop the entry
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PathPair, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn adjoint(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (pair, c) in &self.terms {
            out.add_term(adjoint(pair), c.conj());
        }
        out
    }
}

/// The generator set of the truncation: all pairs with common range `v` and
/// equal length `<= n`. Cardinality `sum_k |E_r^k(v)|^2`.
pub fn omega(window: &GraphWindow, v: VertexId, n: usize) -> Result<Vec<PathPair>, AfError> {
    const CAP: usize = 200_000;
    let levels = paths_into(window, v, n)?;
    let size: usize = levels.iter().map(|l| l.len() * l.len()).sum();
    if size > CAP {
        return Err(AfError::OmegaTooLarge { size, cap: CAP });
    }
    let mut out = Vec::with_capacity(size);
    for level in &levels {
        for a in level {
            for b in level {
                out.push(PathPair::new(a.clone(), b.clone()));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Paths into `v` of each length `0..=n`, canonically sorted.
fn paths_into(window: &GraphWindow, v: VertexId, n: usize) -> Result<Vec<Vec<Path>>, AfError> {
    if !window.sufficient_for(n) {
        return Err(AfError::WindowTooSmall { needed: n, radius: window.radius() });
    }
    let g = window.graph();
    let mut levels: Vec<Vec<Path>> = vec![vec![Path::empty(v)]];
    for _ in 1..=n {
        let prev = levels.last().unwrap();
        let mut next = Vec::new();
        for p in prev {
            for e in g.in_edges_of(p.source()) {
                let head = Path {
                    start: e.src,
                    end: e.dst,
                    edges: vec![e.id],
                };
                next.push(head.concat(p));
            }
        }
        next.sort();
        levels.push(next);
    }
    Ok(levels)
}

/// Loops at `v` of each length `0..=n`, canonically sorted.
fn loops_at(window: &GraphWindow, v: VertexId, n: usize) -> Result<Vec<Vec<Path>>, AfError> {
    let levels = paths_into(window, v, n)?;
    Ok(levels
        .into_iter()
        .map(|level| level.into_iter().filter(|p| p.source() == v).collect())
        .collect())
}

/// A sparse matrix over exact complex rationals, rows and columns indexed by
/// the canonical list of paths into `v` of length `<= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    basis: Vec<Path>,
    entries: BTreeMap<(usize, usize), Coeff>,
}

impl SparseMatrix {
    pub fn zero(basis: Vec<Path>) -> SparseMatrix {
        SparseMatrix { basis, entries: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Coeff)> {
        self.entries.iter()
    }

    pub fn add(&mut self, row: usize, col: usize, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.entries.entry((row, col)).or_insert_with(Coeff::zero);
        *entry += c;
        if entry.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn scale(&self, c: &Coeff) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.basis.clone());
        for (&(i, j), val) in &self.entries {
            out.add(i, j, val * c);
        }
        out
    }

    pub fn plus(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.basis, other.basis);
        let mut out = self.clone();
        for (&(i, j), val) in &other.entries {
            out.add(i, j, val.clone());
        }
        out
    }

    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.basis, other.basis, "products need a common basis");
        // index other's rows for the sparse product
        let mut rows: BTreeMap<usize, Vec<(usize, &Coeff)>> = BTreeMap::new();
        for (&(i, j), c) in &other.entries {
            rows.entry(i).or_default().push((j, c));
        }
        let mut out = SparseMatrix::zero(self.basis.clone());
        for (&(i, k), a) in &self.entries {
            if let Some(row) = rows.get(&k) {
                for &(j, b) in row {
                    out.add(i, j, a * b);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zero(self.basis.clone());
        for (&(i, j), c) in &self.entries {
            out.add(j, i, c.conj());
        }
        out
    }
}

/// The matrix-unit image of one generator: the sum of `e_{(alpha g)(beta g)}`
/// over loops `g` at `v` with `|alpha g| <= n`.
pub fn phi(
    x: &PathPair,
    window: &GraphWindow,
    v: VertexId,
    n: usize,
) -> Result<SparseMatrix, AfError> {
    if x.range() != v || x.len() > n {
        return Err(AfError::NotInOmega(x.display()));
    }
    if !window.sufficient_for(2 * n) {
        return Err(AfError::WindowTooSmall { needed: 2 * n, radius: window.radius() });
    }
    let basis: Vec<Path> = paths_into(window, v, n)?.into_iter().flatten().collect();
    let index: BTreeMap<&Path, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let loops = loops_at(window, v, n - x.len())?;

    let mut mat = SparseMatrix::zero(basis.clone());
    for level in &loops {
        for g in level {
            let row = x.alpha.concat(g);
            let col = x.beta.concat(g);
            let (ri, ci) = (index[&row], index[&col]);
            mat.add(ri, ci, coeff_one());
        }
    }
    Ok(mat)
}

/// Linear extension of [`phi`] to formal combinations.
pub fn phi_element(
    x: &AlgebraElement,
    window: &GraphWindow,
    v: VertexId,
    n: usize,
) -> Result<SparseMatrix, AfError> {
    let basis: Vec<Path> = paths_into(window, v, n)?.into_iter().flatten().collect();
    let mut acc = SparseMatrix::zero(basis);
    for (pair, c) in x.terms() {
        let m = phi(pair, window, v, n)?;
        acc = acc.plus(&m.scale(c));
    }
    Ok(acc)
}

/// Report of the exact homomorphism check: `phi(xy) = phi(x) phi(y)` and
/// `phi(x^*) = phi(x)^*` over all generator pairs.
#[derive(Debug, Clone, Serialize)]
pub struct HomReport {
    pub omega_size: usize,
    pub products_checked: usize,
    pub adjoints_checked: usize,
    pub violations: Vec<String>,
    pub passed: bool,
}

pub fn verify_homomorphism(
    window: &GraphWindow,
    v: VertexId,
    n: usize,
) -> Result<HomReport, AfError> {
    let om = omega(window, v, n)?;
    let images: Vec<SparseMatrix> = om
        .iter()
        .map(|x| phi(x, window, v, n))
        .collect::<Result<_, _>>()?;
    let basis = images
        .first()
        .map(|m| m.basis().to_vec())
        .unwrap_or_default();

    let mut violations = Vec::new();
    for (xi, x) in om.iter().enumerate() {
        let adj_image = phi(&adjoint(x), window, v, n)?;
        if adj_image != images[xi].dagger() {
            violations.push(format!("phi({}*) != phi({})^*", x.display(), x.display()));
        }
        for (yi, y) in om.iter().enumerate() {
            let lhs = match multiply(x, y) {
                Some(p) => phi(&p, window, v, n)?,
                None => SparseMatrix::zero(basis.clone()),
            };
            let rhs = images[xi].matmul(&images[yi]);
            if lhs != rhs {
                violations.push(format!("phi({} . {}) != phi(.)phi(.)", x.display(), y.display()));
            }
        }
    }
    Ok(HomReport {
        omega_size: om.len(),
        products_checked: om.len() * om.len(),
        adjoints_checked: om.len(),
        passed: violations.is_empty(),
        violations,
    })
}

/// Report of the independence certificate: the matrix rank (over the exact
/// complex rationals) of the flattened images equals the generator count.
#[derive(Debug, Clone, Serialize)]
pub struct IndependenceReport {
    pub omega_size: usize,
    pub rank: usize,
    pub independent: bool,
}

/// Certify linear independence of the generator images. The hypothesis
/// requires at least two vertices: with a single vertex the summed-edge
/// relation `p_v = sum_e s_e s_e^*` makes the generators dependent in the
/// algebra, so the certificate would be vacuous and the check refuses to run.
pub fn verify_independence(
    window: &GraphWindow,
    v: VertexId,
    n: usize,
) -> Result<IndependenceReport, AfError> {
    if window.graph().vertex_count() < 2 {
        return Err(AfError::HypothesisViolated(
            "independence requires at least two vertices (not applicable to one-vertex graphs)".into(),
        ));
    }
    let om = omega(window, v, n)?;
    let dim = paths_into(window, v, n)?.iter().map(Vec::len).sum::<usize>();
    // each image flattens to a vector of length dim^2
    let mut rows: Vec<BTreeMap<usize, Coeff>> = Vec::with_capacity(om.len());
    for x in &om {
        let m = phi(x, window, v, n)?;
        let mut row = BTreeMap::new();
        for (&(i, j), c) in m.entries.iter() {
            row.insert(i * dim + j, c.clone());
        }
        rows.push(row);
    }
    let rank = sparse_rank(rows);
    Ok(IndependenceReport {
        omega_size: om.len(),
        rank,
        independent: rank == om.len(),
    })
}

/// Gaussian elimination over the complex rationals on sparse rows.
fn sparse_rank(mut rows: Vec<BTreeMap<usize, Coeff>>) -> usize {
    let mut rank = 0;
    // pivots: column -> row index into `reduced`
    let mut reduced: Vec<(usize, BTreeMap<usize, Coeff>)> = Vec::new();
    while let Some(mut row) = rows.pop() {
        while let Some((&col, _)) = row.iter().next() {
            match reduced.iter().find(|(c, _)| *c == col) {
                Some((_, pivot_row)) => {
                    // eliminate: row -= (row[col] / pivot[col]) * pivot_row
                    let factor = row[&col].clone() * inv(&pivot_row[&col]);
                    for (k, c) in pivot_row {
                        let entry = row.entry(*k).or_insert_with(Coeff::zero);
                        *entry -= &factor * c;
                    }
                    row.retain(|_, c| !c.is_zero());
                }
                None => {
                    reduced.push((col, row));
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn inv(c: &Coeff) -> Coeff {
    let d = &c.re * &c.re + &c.im * &c.im;
    Complex::new(&c.re / &d, -&c.im / &d)
}

/// Dimensions of the truncation: the generator count `sum_k |E_r^k(v)|^2`
/// against the matrix size `r(n) = sum_k |E_r^k(v)|` and its square. The two
/// coincide only when a single length contributes.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionReport {
    #[serde(serialize_with = "ser_biguint")]
    pub omega_cardinality: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub r_n: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub r_n_squared: BigUint,
    pub coincide: bool,
}

fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn dimension_report(
    window: &GraphWindow,
    v: VertexId,
    n: usize,
) -> Result<DimensionReport, AfError> {
    let range = count_class(window, v, PathClass::Range, n)?;
    let omega_cardinality: BigUint = range.counts.iter().map(|c| c * c).sum();
    let r_n: BigUint = range.counts.iter().sum();
    let r_n_squared = &r_n * &r_n;
    Ok(DimensionReport {
        coincide: omega_cardinality == r_n_squared,
        omega_cardinality,
        r_n,
        r_n_squared,
    })
}

/// The shift map on generators: prepend every length-1 path. A generator
/// whose legs have distinct sources is annihilated (no edge can extend both
/// legs at once).
pub fn phi_e(x: &AlgebraElement, window: &GraphWindow) -> Result<AlgebraElement, AfError> {
    let g = window.graph();
    let mut out = AlgebraElement::zero();
    for (pair, c) in x.terms() {
        let sa = pair.alpha.source();
        if sa != pair.beta.source() {
            continue;
        }
        if !window.in_edges_complete(sa) {
            return Err(AfError::WindowTooSmall {
                needed: window.radius() + 1,
                radius: window.radius(),
            });
        }
        for e in g.in_edges_of(sa) {
            let head = Path { start: e.src, end: e.dst, edges: vec![e.id] };
            out.add_term(
                PathPair::new(head.concat(&pair.alpha), head.concat(&pair.beta)),
                c.clone(),
            );
        }
    }
    Ok(out)
}

/// `l`-fold application of the shift map.
pub fn phi_e_power(
    x: &AlgebraElement,
    l: usize,
    window: &GraphWindow,
) -> Result<AlgebraElement, AfError> {
    let mut cur = x.clone();
    for _ in 0..l {
        cur = phi_e(&cur, window)?;
    }
    Ok(cur)
}

/// The two growth sequences behind the rank bounds: the cumulative range
/// count `r(n) = sum_{k<=n} |E_r^k(v)|` and the through-set count
/// `k_n = |paths of length n1 + n touching vset|`.
#[derive(Debug, Clone)]
pub struct RankBoundSequences {
    pub r_cumulative: Vec<BigUint>,
    pub k_n: Vec<BigUint>,
}

pub fn rank_bound_sequences(
    window: &GraphWindow,
    v: VertexId,
    vset: &[VertexId],
    n1: usize,
    n_max: usize,
) -> Result<RankBoundSequences, AfError> {
    let range = count_class(window, v, PathClass::Range, n_max)?;
    let mut r_cumulative = Vec::with_capacity(n_max + 1);
    let mut acc = BigUint::zero();
    for c in &range.counts {
        acc += c;
        r_cumulative.push(acc.clone());
    }
    let set = if vset.is_empty() { vec![v] } else { vset.to_vec() };
    let mut k_n = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max.saturating_sub(n1) {
        k_n.push(count_through_set(window, &set, n1 + n)?);
    }
    Ok(RankBoundSequences { r_cumulative, k_n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fibonacci_graph, Edge, EdgeId, GraphWindow};

    fn fib_window() -> GraphWindow {
        GraphWindow::whole(&fibonacci_graph())
    }

    fn pair_of_edges(g: &FiniteGraph, a: usize, b: usize) -> PathPair {
        PathPair::new(
            Path::from_edge_indices(g, &[a]),
            Path::from_edge_indices(g, &[b]),
        )
    }

    #[test]
    fn projection_acts_as_unit_on_matching_sources() {
        let g = fibonacci_graph();
        let a = VertexId(0);
        let b = VertexId(1);
        // y = s_e s_e* with s(e) = a
        let y = pair_of_edges(&g, 0, 0);
        assert_eq!(multiply(&PathPair::projection(a), &y), Some(y.clone()));
        // source mismatch annihilates: e3 starts at b
        let z = pair_of_edges(&g, 2, 2);
        assert_eq!(multiply(&PathPair::projection(a), &z), None);
        assert_eq!(multiply(&PathPair::projection(b), &z), Some(z));
    }

    #[test]
    fn product_follows_the_prefix_rule() {
        let g = fibonacci_graph();
        // x = s_e1 s_e3*, y = s_e3 s_e3*  ->  s_e1 s_e3*
        let x = pair_of_edges(&g, 0, 2);
        let y = pair_of_edges(&g, 2, 2);
        assert_eq!(multiply(&x, &y), Some(x.clone()));
    }

    #[test]
    fn adjoint_is_an_involution() {
        let g = fibonacci_graph();
        let x = pair_of_edges(&g, 0, 2);
        assert_eq!(adjoint(&adjoint(&x)), x);
        assert_eq!(adjoint(&x), pair_of_edges(&g, 2, 0));
        let p = PathPair::projection(VertexId(0));
        assert_eq!(adjoint(&p), p);
    }

    #[test]
    fn omega_cardinalities() {
        let w = fib_window();
        let a = VertexId(0);
        // |E_r^0(a)|^2 + |E_r^1(a)|^2 = 1 + 4
        assert_eq!(omega(&w, a, 1).unwrap().len(), 5);
        // + |E_r^2(a)|^2 = 9
        assert_eq!(omega(&w, a, 2).unwrap().len(), 14);
    }

    #[test]
    fn omega_of_a_source_vertex_is_the_projection() {
        // vertex with no incoming edges: only (v, v)
        let v = VertexId(0);
        let w = VertexId(1);
        let g = FiniteGraph::build(
            vec![v, w],
            vec![
                Edge { id: EdgeId(0), src: v, dst: w },
                Edge { id: EdgeId(1), src: w, dst: w },
            ],
        )
        .unwrap();
        let win = GraphWindow::whole(&g);
        let om = omega(&win, v, 3).unwrap();
        assert_eq!(om.len(), 1);
        assert_eq!(om[0], PathPair::projection(v));
    }

    #[test]
    fn phi_of_the_projection_sums_loop_units() {
        let w = fib_window();
        let a = VertexId(0);
        let m = phi(&PathPair::projection(a), &w, a, 1).unwrap();
        // loops at a of length <= 1: the empty path and e1
        assert_eq!(m.entries().count(), 2);
        for (&(i, j), c) in m.entries() {
            assert_eq!(i, j);
            assert_eq!(c, &coeff_one());
        }
    }

    #[test]
    fn phi_of_a_mixed_pair_has_one_unit() {
        let g = fibonacci_graph();
        let w = fib_window();
        let a = VertexId(0);
        let x = pair_of_edges(&g, 0, 2); // s_e1 s_e3*
        let m = phi(&x, &w, a, 1).unwrap();
        // only the empty loop fits |alpha g| <= 1
        assert_eq!(m.entries().count(), 1);
    }

    #[test]
    fn phi_rejects_pairs_outside_the_truncation() {
        let g = fibonacci_graph();
        let w = fib_window();
        // range b, not a
        let x = pair_of_edges(&g, 1, 1);
        assert!(matches!(phi(&x, &w, VertexId(0), 2), Err(AfError::NotInOmega(_))));
        // too long for the truncation level
        let long = PathPair::new(
            Path::from_edge_indices(&g, &[0, 0]),
            Path::from_edge_indices(&g, &[1, 2]),
        );
        assert!(matches!(phi(&long, &w, VertexId(0), 1), Err(AfError::NotInOmega(_))));
    }

    #[test]
    fn omega_needs_a_sufficient_window() {
        let (o, _) = crate::families::salama_2_8();
        let root = crate::graph::GraphOracle::root(&o);
        let w = crate::graph::materialize(&o, &[root], 2).unwrap();
        assert!(matches!(
            omega(&w, root, 5),
            Err(AfError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn phi_of_zero_is_zero() {
        let w = fib_window();
        let a = VertexId(0);
        let m = phi_element(&AlgebraElement::zero(), &w, a, 2).unwrap();
        assert_eq!(m.entries().count(), 0);
    }

    #[test]
    fn homomorphism_on_fibonacci() {
        let w = fib_window();
        let rep = verify_homomorphism(&w, VertexId(0), 2).unwrap();
        assert!(rep.passed, "violations: {:?}", rep.violations);
        assert_eq!(rep.omega_size, 14);
    }

    #[test]
    fn independence_on_fibonacci() {
        let w = fib_window();
        let rep = verify_independence(&w, VertexId(0), 2).unwrap();
        assert!(rep.independent);
        assert_eq!(rep.rank, 14);
    }

    #[test]
    fn independence_is_not_applicable_to_one_vertex_graphs() {
        let v = VertexId(0);
        let g = FiniteGraph::build(
            vec![v],
            vec![
                Edge { id: EdgeId(0), src: v, dst: v },
                Edge { id: EdgeId(1), src: v, dst: v },
            ],
        )
        .unwrap();
        let w = GraphWindow::whole(&g);
        assert!(matches!(
            verify_independence(&w, v, 2),
            Err(AfError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn dimension_report_on_fibonacci() {
        let w = fib_window();
        let rep = dimension_report(&w, VertexId(0), 1).unwrap();
        assert_eq!(rep.omega_cardinality, BigUint::from(5u32));
        assert_eq!(rep.r_n, BigUint::from(3u32));
        assert_eq!(rep.r_n_squared, BigUint::from(9u32));
        assert!(!rep.coincide);
    }

    #[test]
    fn dimension_report_coincides_for_a_source_vertex() {
        let v = VertexId(0);
        let w = VertexId(1);
        let g = FiniteGraph::build(
            vec![v, w],
            vec![
                Edge { id: EdgeId(0), src: v, dst: w },
                Edge { id: EdgeId(1), src: w, dst: w },
            ],
        )
        .unwrap();
        let win = GraphWindow::whole(&g);
        let rep = dimension_report(&win, v, 1).unwrap();
        assert_eq!(rep.omega_cardinality, BigUint::from(1u32));
        assert!(rep.coincide);
    }

    #[test]
    fn dimension_report_on_the_two_cycle() {
        let a = VertexId(0);
        let b = VertexId(1);
        let g = FiniteGraph::build(
            vec![a, b],
            vec![
                Edge { id: EdgeId(0), src: a, dst: b },
                Edge { id: EdgeId(1), src: b, dst: a },
            ],
        )
        .unwrap();
        let w = GraphWindow::whole(&g);
        let rep = dimension_report(&w, a, 1).unwrap();
        assert_eq!(rep.omega_cardinality, BigUint::from(2u32));
        assert_eq!(rep.r_n, BigUint::from(2u32));
        assert_eq!(rep.r_n_squared, BigUint::from(4u32));
        assert!(!rep.coincide);
    }

    #[test]
    fn shift_map_prepends_incoming_edges() {
        let w = fib_window();
        let a = VertexId(0);
        let out = phi_e(&AlgebraElement::from_pair(PathPair::projection(a)), &w).unwrap();
        // edges into a: e1 and e3 -> s_e1 s_e1* + s_e3 s_e3*
        assert_eq!(out.len(), 2);
        for (pair, c) in out.terms() {
            assert_eq!(pair.alpha, pair.beta);
            assert_eq!(pair.len(), 1);
            assert_eq!(c, &coeff_one());
        }
    }

    #[test]
    fn shift_map_annihilates_sourceless_generators() {
        // s(e) has no incoming edges -> zero
        let v = VertexId(0);
        let w = VertexId(1);
        let g = FiniteGraph::build(
            vec![v, w],
            vec![
                Edge { id: EdgeId(0), src: v, dst: w },
                Edge { id: EdgeId(1), src: w, dst: w },
            ],
        )
        .unwrap();
        let win = GraphWindow::whole(&g);
        let x = AlgebraElement::from_pair(PathPair::new(
            Path::from_edge_indices(&g, &[0]),
            Path::from_edge_indices(&g, &[0]),
        ));
        assert!(phi_e(&x, &win).unwrap().is_zero());
    }

    #[test]
    fn shift_map_requires_backward_coverage() {
        // the window must fully know the in-edges of every source in the
        // element; a vertex reachable only forwards is refused
        let (o, _) = crate::families::salama_2_8();
        let root = crate::graph::GraphOracle::root(&o);
        let w = crate::graph::materialize(&o, &[root], 1).unwrap();
        let b1 = crate::graph::GraphOracle::out_edges(&o, root)
            .iter()
            .map(|e| e.dst)
            .find(|&u| u != root)
            .unwrap();
        assert!(!w.in_edges_complete(b1));
        let x = AlgebraElement::from_pair(PathPair::projection(b1));
        assert!(matches!(phi_e(&x, &w), Err(AfError::WindowTooSmall { .. })));
        // the root itself is backward-covered at radius 1
        let ok = AlgebraElement::from_pair(PathPair::projection(root));
        assert!(phi_e(&ok, &w).is_ok());
    }

    #[test]
    fn shift_powers_compose() {
        let w = fib_window();
        let a = VertexId(0);
        let x = AlgebraElement::from_pair(PathPair::projection(a));
        let twice = phi_e(&phi_e(&x, &w).unwrap(), &w).unwrap();
        let power = phi_e_power(&x, 2, &w).unwrap();
        assert_eq!(twice, power);
    }

    #[test]
    fn multiply_is_associative_on_omega_two() {
        let two_cycle = FiniteGraph::build(
            vec![VertexId(0), VertexId(1)],
            vec![
                Edge { id: EdgeId(0), src: VertexId(0), dst: VertexId(1) },
                Edge { id: EdgeId(1), src: VertexId(1), dst: VertexId(0) },
            ],
        )
        .unwrap();
        let graphs = vec![
            fibonacci_graph(),
            two_cycle,
            crate::families::random_strongly_connected(4, 0.4, 11),
        ];
        for g in &graphs {
            let w = GraphWindow::whole(g);
            let om = omega(&w, VertexId(0), 2).unwrap();
            for x in &om {
                for y in &om {
                    for z in &om {
                        let lhs = multiply(x, y).and_then(|xy| multiply(&xy, z));
                        let rhs = multiply(y, z).and_then(|yz| multiply(x, &yz));
                        assert_eq!(lhs, rhs, "associativity at {} {} {}", x.display(), y.display(), z.display());
                    }
                }
            }
        }
    }
}
