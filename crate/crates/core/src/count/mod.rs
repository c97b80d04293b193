//! Exact big-integer path-class counters.
//!
//! For a distinguished vertex `v` the six path classes of length `n` are:
//!
//! | class         | paths counted                                              |
//! |---------------|------------------------------------------------------------|
//! | `Through`     | paths with `v` among their vertices                        |
//! | `Source`      | paths with source `v`                                      |
//! | `SourceStar`  | paths from `v` whose edges never re-enter `v`              |
//! | `Range`       | paths with range `v`                                       |
//! | `RangeStar`   | paths into `v` whose edges never leave `v`                 |
//! | `Loop`        | paths from `v` back to `v`                                 |
//!
//! Length-0 conventions: every class contains the empty path at `v`, so all
//! series start with 1. Counts are exact in the ambient (possibly infinite)
//! graph whenever the window is sufficient for the requested length; see
//! [`GraphWindow::sufficient_for`].

pub mod enumerate;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{FiniteGraph, GraphWindow, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathClass {
    Through,
    Source,
    SourceStar,
    Range,
    RangeStar,
    Loop,
}

impl PathClass {
    pub fn name(&self) -> &'static str {
        match self {
            PathClass::Through => "through",
            PathClass::Source => "source",
            PathClass::SourceStar => "source-star",
            PathClass::Range => "range",
            PathClass::RangeStar => "range-star",
            PathClass::Loop => "loop",
        }
    }

    pub fn parse(s: &str) -> Option<PathClass> {
        Some(match s {
            "through" => PathClass::Through,
            "source" => PathClass::Source,
            "source-star" => PathClass::SourceStar,
            "range" => PathClass::Range,
            "range-star" => PathClass::RangeStar,
            "loop" => PathClass::Loop,
            _ => return None,
        })
    }
}

#[derive(Debug, Error)]
pub enum CountError {
    #[error("window of radius {radius} is too small for counts up to length {needed}")]
    WindowTooSmall { needed: usize, radius: usize },
    #[error("vertex {0:?} is not admissible for this window (not in the base set)")]
    VertexNotInBase(VertexId),
}

/// The exact sequence `n -> a_n` of one path class at one vertex.
#[derive(Debug, Clone)]
pub struct CountSeries {
    pub vertex: VertexId,
    pub class: PathClass,
    pub counts: Vec<BigUint>,
    /// Radius of the window the counts were taken on; `None` for a saturated
    /// window. Exactness in the ambient graph needs radius >= n_max.
    pub window_radius: Option<usize>,
}

impl CountSeries {
    pub fn n_max(&self) -> usize {
        self.counts.len() - 1
    }
}

/// First-return loop counts: `f[m]` is the number of loops at `v` of length
/// `m` whose only visits to `v` are the two endpoints. Independent oracle for
/// the `Loop` series through the renewal identity
/// `|E_l^n(v)| = sum_m f_m |E_l^{n-m}(v)|`.
#[derive(Debug, Clone)]
pub struct FirstReturnSeries {
    pub vertex: VertexId,
    /// Index 0 is unused and always zero.
    pub counts: Vec<BigUint>,
}

fn check_window(window: &GraphWindow, v: VertexId, n_max: usize) -> Result<(), CountError> {
    if !window.sufficient_for(n_max) {
        return Err(CountError::WindowTooSmall {
            needed: n_max,
            radius: window.radius(),
        });
    }
    if !window.admits_vertex(v) {
        return Err(CountError::VertexNotInBase(v));
    }
    Ok(())
}

/// One step of the forward DP: `next[w] = sum over edges u->w of cur[u]`.
/// With `forbid_enter` set, transitions landing on that vertex are dropped.
fn fwd_step(g: &FiniteGraph, cur: &[BigUint], forbid_enter: Option<usize>) -> Vec<BigUint> {
    let mut next = vec![BigUint::zero(); g.vertex_count()];
    for (u, cu) in cur.iter().enumerate() {
        if cu.is_zero() {
            continue;
        }
        for &ei in g.out_edge_indices(u) {
            let w = g.dense(g.edge(ei).dst);
            if forbid_enter == Some(w) {
                continue;
            }
            next[w] += cu;
        }
    }
    next
}

/// One step of the backward DP: `next[u] = sum over edges u->w of cur[w]`,
/// so that after `k` steps from `delta_v`, `cur[u]` counts length-k paths
/// `u -> v`. With `forbid_exit` set, transitions leaving that vertex are
/// dropped.
fn bwd_step(g: &FiniteGraph, cur: &[BigUint], forbid_exit: Option<usize>) -> Vec<BigUint> {
    let mut next = vec![BigUint::zero(); g.vertex_count()];
    for (u, nu) in next.iter_mut().enumerate() {
        if forbid_exit == Some(u) {
            continue;
        }
        for &ei in g.out_edge_indices(u) {
            let w = g.dense(g.edge(ei).dst);
            if !cur[w].is_zero() {
                *nu += &cur[w];
            }
        }
    }
    next
}

fn delta(g: &FiniteGraph, v: VertexId) -> Vec<BigUint> {
    let mut d = vec![BigUint::zero(); g.vertex_count()];
    d[g.dense(v)] = BigUint::one();
    d
}

fn sum(v: &[BigUint]) -> BigUint {
    v.iter().sum()
}

/// Exact counts of one path class at `v` for all lengths `0..=n_max`.
pub fn count_class(
    window: &GraphWindow,
    v: VertexId,
    class: PathClass,
    n_max: usize,
) -> Result<CountSeries, CountError> {
    check_window(window, v, n_max)?;
    let g = window.graph();
    let vd = g.dense(v);

    let counts = match class {
        PathClass::Source | PathClass::Loop => {
            let mut cur = delta(g, v);
            let mut counts = Vec::with_capacity(n_max + 1);
            for _ in 0..=n_max {
                counts.push(match class {
                    PathClass::Source => sum(&cur),
                    _ => cur[vd].clone(),
                });
                cur = fwd_step(g, &cur, None);
            }
            counts
        }
        PathClass::SourceStar => {
            let mut cur = delta(g, v);
            let mut counts = Vec::with_capacity(n_max + 1);
            for _ in 0..=n_max {
                counts.push(sum(&cur));
                cur = fwd_step(g, &cur, Some(vd));
            }
            counts
        }
        PathClass::Range => {
            let mut cur = delta(g, v);
            let mut counts = Vec::with_capacity(n_max + 1);
            for _ in 0..=n_max {
                counts.push(sum(&cur));
                cur = bwd_step(g, &cur, None);
            }
            counts
        }
        PathClass::RangeStar => {
            let mut cur = delta(g, v);
            let mut counts = Vec::with_capacity(n_max + 1);
            for _ in 0..=n_max {
                counts.push(sum(&cur));
                cur = bwd_step(g, &cur, Some(vd));
            }
            counts
        }
        PathClass::Through => {
            // First-visit decomposition: |E^n(v)| = sum_k |E_r^k(v*)| |E_s^{n-k}(v)|.
            let range_star = count_class(window, v, PathClass::RangeStar, n_max)?;
            let source = count_class(window, v, PathClass::Source, n_max)?;
            let counts: Vec<BigUint> = (0..=n_max)
                .map(|n| {
                    (0..=n)
                        .map(|k| &range_star.counts[k] * &source.counts[n - k])
                        .sum()
                })
                .collect();
            debug_assert_eq!(
                counts,
                through_marked(window, v, n_max)?,
                "through counts: first-visit convolution and marked DP disagree"
            );
            counts
        }
    };

    Ok(CountSeries {
        vertex: v,
        class,
        counts,
        window_radius: (!window.is_saturated()).then(|| window.radius()),
    })
}

/// Independent route to the `Through` counts: all paths inside the window
/// minus the paths avoiding `v`. Exact for paths touching `v` because every
/// ambient path of admissible length that touches `v` lies in the window.
pub fn through_marked(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
) -> Result<Vec<BigUint>, CountError> {
    check_window(window, v, n_max)?;
    let g = window.graph();
    let vd = g.dense(v);

    let mut all = vec![BigUint::one(); g.vertex_count()];
    let mut avoid: Vec<BigUint> = (0..g.vertex_count())
        .map(|u| if u == vd { BigUint::zero() } else { BigUint::one() })
        .collect();
    let mut counts = Vec::with_capacity(n_max + 1);
    for _ in 0..=n_max {
        counts.push(sum(&all) - sum(&avoid));
        all = fwd_step(g, &all, None);
        avoid = fwd_step(g, &avoid, Some(vd));
    }
    Ok(counts)
}

/// First-return loop counts at `v` for lengths `1..=n_max`.
pub fn first_return_counts(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
) -> Result<FirstReturnSeries, CountError> {
    check_window(window, v, n_max)?;
    let g = window.graph();
    let vd = g.dense(v);

    // cur[u] after j steps = number of length-j paths u -> v with no edge
    // leaving v, i.e. visiting v only at the terminal end.
    let mut cur = delta(g, v);
    let mut counts = vec![BigUint::zero(); n_max + 1];
    for slot in counts.iter_mut().skip(1) {
        // prepend one edge v -> u to a blocked path u -> v of length m-1
        let mut f = BigUint::zero();
        for &ei in g.out_edge_indices(vd) {
            let u = g.dense(g.edge(ei).dst);
            f += &cur[u];
        }
        *slot = f;
        cur = bwd_step(g, &cur, Some(vd));
    }
    Ok(FirstReturnSeries { vertex: v, counts })
}

/// Check the renewal identity between a loop series and its first-return
/// series: `loop[n] = sum_{m=1..n} f[m] loop[n-m]` for all `1 <= n <= n_max`.
pub fn renewal_identity_holds(loops: &CountSeries, first: &FirstReturnSeries) -> bool {
    let n_max = loops.n_max().min(first.counts.len() - 1);
    for n in 1..=n_max {
        let rhs: BigUint = (1..=n).map(|m| &first.counts[m] * &loops.counts[n - m]).sum();
        if rhs != loops.counts[n] {
            return false;
        }
    }
    true
}

/// Report of the first-visit factorization check
/// `|E^n(v)| = sum_k |E_r^k(v*)| |E_s^{n-k}(v)|`, verified as big-integer
/// equality with the marked-DP route on the left-hand side.
#[derive(Debug, Clone)]
pub struct ConvolutionReport {
    pub vertex: VertexId,
    pub n_max: usize,
    pub passed: bool,
    /// Failing lengths with both sides, empty when the identity holds.
    pub failures: Vec<(usize, BigUint, BigUint)>,
}

pub fn convolution_check(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
) -> Result<ConvolutionReport, CountError> {
    let lhs = through_marked(window, v, n_max)?;
    let range_star = count_class(window, v, PathClass::RangeStar, n_max)?;
    let source = count_class(window, v, PathClass::Source, n_max)?;
    let mut failures = Vec::new();
    for (n, lhs_n) in lhs.iter().enumerate() {
        let rhs: BigUint = (0..=n)
            .map(|k| &range_star.counts[k] * &source.counts[n - k])
            .sum();
        if &rhs != lhs_n {
            failures.push((n, lhs_n.clone(), rhs));
        }
    }
    Ok(ConvolutionReport {
        vertex: v,
        n_max,
        passed: failures.is_empty(),
        failures,
    })
}

/// Exact count of length-`n` paths touching at least one vertex of `vset`,
/// via the first-touch decomposition. No path is counted twice: the first
/// touch position and vertex are determined by the path.
pub fn count_through_set(
    window: &GraphWindow,
    vset: &[VertexId],
    n: usize,
) -> Result<BigUint, CountError> {
    if !window.sufficient_for(n) {
        return Err(CountError::WindowTooSmall {
            needed: n,
            radius: window.radius(),
        });
    }
    for &v in vset {
        if !window.admits_vertex(v) {
            return Err(CountError::VertexNotInBase(v));
        }
    }
    let g = window.graph();
    let in_set: Vec<bool> = {
        let mut m = vec![false; g.vertex_count()];
        for &v in vset {
            m[g.dense(v)] = true;
        }
        m
    };

    let mut total = BigUint::zero();
    for &v in vset {
        // b[j][u]: length-j paths u -> v whose vertices before the endpoint
        // avoid vset entirely.
        let mut b = delta(g, v);
        // forward counts from v, unrestricted
        let mut fwd = delta(g, v);
        let mut fwd_sums = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            fwd_sums.push(sum(&fwd));
            fwd = fwd_step(g, &fwd, None);
        }

        for k in 0..=n {
            if k > 0 {
                // extend blocked paths by one edge on the source side
                let mut next = vec![BigUint::zero(); g.vertex_count()];
                for u in 0..g.vertex_count() {
                    if in_set[u] {
                        continue;
                    }
                    for &ei in g.out_edge_indices(u) {
                        let w = g.dense(g.edge(ei).dst);
                        if !b[w].is_zero() {
                            next[u] += &b[w];
                        }
                    }
                }
                b = next;
            }
            let b_total = sum(&b);
            if !b_total.is_zero() {
                total += b_total * &fwd_sums[n - k];
            }
        }
    }
    Ok(total)
}
