//! Growth-rate estimation and the entropy quantities and identities.
//!
//! All entropies are natural-log growth rates of count series:
//! loop entropy from the `Loop` class, block entropy from `Source`, co-block
//! entropy from `Range` (equivalently, block entropy of the transposed
//! graph), and the inverse convergence radii of the starred series.
//!
//! Estimation from a finite prefix extrapolates the tail of
//! `x_n = log(a_n)/n` along an arithmetic subsequence. For series of the
//! dominant form `a_n ~ C λ^n` the two-point extrapolation
//! `x_N + (x_N - x_{N-s}) (N-s)/s` cancels the `log(C)/n` term exactly, which
//! the plain tail maximum does not; the raw sequence is always kept for
//! diagnostics. Loop series are supported on a sub-semigroup, so the default
//! stride is the gcd of the gaps between nonzero loop counts.

mod spectral;

pub use spectral::{spectral_radius, SpectralOutcome};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::count::{count_class, CountError, CountSeries, PathClass};
use crate::graph::{materialize, FiniteGraph, GraphError, GraphOracle, GraphWindow, VertexId};

#[derive(Debug, Error)]
pub enum EntropyError {
    #[error("every count in the estimation tail is zero")]
    AllZeroTail,
    #[error("series too short for estimation: n_max = {n_max}, need at least 4")]
    SeriesTooShort { n_max: usize },
    #[error("graph is not irreducible")]
    NotIrreducible,
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    TailMax,
    StrideSubsequence,
    ExactSpectral,
    ExactClosedForm,
}

impl EstimateMethod {
    pub fn name(&self) -> &'static str {
        match self {
            EstimateMethod::TailMax => "tail_max",
            EstimateMethod::StrideSubsequence => "stride_subsequence",
            EstimateMethod::ExactSpectral => "exact_spectral",
            EstimateMethod::ExactClosedForm => "exact_closed_form",
        }
    }
}

/// A growth-rate value in nats with its diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub method: EstimateMethod,
    pub stride: Option<usize>,
    /// Tail window of indices the value was computed from.
    pub n_range: (usize, usize),
    /// The full raw sequence `(n, log(a_n)/n)` over the nonzero support.
    pub raw: Vec<(usize, f64)>,
    /// Number of zero counts skipped in `1..=n_max`.
    pub skipped: usize,
}

/// Natural log of a big integer, stable for values beyond f64 range.
pub fn ln_biguint(a: &BigUint) -> f64 {
    let bits = a.bits();
    if bits <= 512 {
        return num_traits::ToPrimitive::to_f64(a).expect("fits f64 range").ln();
    }
    let shift = bits - 53;
    let top = a >> shift;
    let m = num_traits::ToPrimitive::to_f64(&top).expect("53-bit mantissa fits");
    m.ln() + shift as f64 * std::f64::consts::LN_2
}

fn two_point_limit(n1: usize, x1: f64, n2: usize, x2: f64) -> f64 {
    debug_assert!(n1 < n2);
    x2 + (x2 - x1) * n1 as f64 / (n2 - n1) as f64
}

/// Growth-rate estimate of a count series `a_0..a_N`.
///
/// With an explicit `stride` the estimate restricts to the arithmetic
/// subsequence through the last nonzero index and extrapolates its last two
/// tail points; with fewer than two usable points it falls back to the tail
/// maximum.
///
/// With `stride` unset the period of the series is detected from the data:
/// starting from the gcd of the support gaps, candidate strides are screened
/// by comparing the short-span and long-span slopes of `log a_n` along the
/// candidate subsequence (they agree only when the subsequence is free of
/// periodic jumps), and the estimate is the maximum of the per-class
/// extrapolations, matching the limsup over residue classes. The tail window
/// covers the last `tail_fraction` of indices.
pub fn growth_rate(
    counts: &[BigUint],
    stride: Option<usize>,
    tail_fraction: f64,
) -> Result<EntropyEstimate, EntropyError> {
    assert!(tail_fraction > 0.0 && tail_fraction <= 1.0);
    let n_max = counts.len().saturating_sub(1);
    if n_max < 4 {
        return Err(EntropyError::SeriesTooShort { n_max });
    }

    let support: Vec<usize> = (1..=n_max).filter(|&n| !counts[n].is_zero()).collect();
    if support.is_empty() {
        return Err(EntropyError::AllZeroTail);
    }
    let skipped = n_max - support.len();
    let raw: Vec<(usize, f64)> = support
        .iter()
        .map(|&n| (n, ln_biguint(&counts[n]) / n as f64))
        .collect();

    let last = *support.last().unwrap();
    let lo = ((1.0 - tail_fraction) * last as f64).ceil() as usize;
    let x = |n: usize| ln_biguint(&counts[n]) / n as f64;

    let (value, method, s, range) = match stride.map(|s| s.max(1)) {
        Some(s) => {
            let class: Vec<usize> = support.iter().copied().filter(|&n| n % s == last % s).collect();
            let mut tail: Vec<usize> = class.iter().copied().filter(|&n| n >= lo).collect();
            if tail.len() < 2 {
                let take = class.len().min(2);
                tail = class[class.len() - take..].to_vec();
            }
            if tail.len() >= 2 {
                let n2 = tail[tail.len() - 1];
                let n1 = tail[tail.len() - 2];
                (
                    two_point_limit(n1, x(n1), n2, x(n2)),
                    EstimateMethod::StrideSubsequence,
                    s,
                    (tail[0], n2),
                )
            } else {
                (x(tail[0]), EstimateMethod::TailMax, s, (tail[0], tail[0]))
            }
        }
        None => {
            let s = choose_stride(counts, &support);
            // limsup over residue classes: extrapolate each class separately
            // and take the maximum
            let mut best: Option<f64> = None;
            let mut used_lo = last;
            let mut used_hi = 0;
            for r in 0..s {
                let class: Vec<usize> = support.iter().copied().filter(|&n| n % s == r).collect();
                if class.len() < 2 {
                    continue;
                }
                let n2 = class[class.len() - 1];
                let n1 = class[class.len() - 2];
                if n2 < lo.saturating_sub(s) {
                    continue; // the class died out before the tail window
                }
                let est = two_point_limit(n1, x(n1), n2, x(n2));
                best = Some(best.map_or(est, |b: f64| b.max(est)));
                used_lo = used_lo.min(n1);
                used_hi = used_hi.max(n2);
            }
            match best {
                Some(v) => (v, EstimateMethod::StrideSubsequence, s, (used_lo, used_hi)),
                None => (x(last), EstimateMethod::TailMax, s, (last, last)),
            }
        }
    };

    Ok(EntropyEstimate {
        value: value.max(0.0),
        method,
        stride: Some(s),
        n_range: range,
        raw,
        skipped,
    })
}

/// Pick the estimation stride for an un-strided series. A candidate stride
/// is acceptable when, along its subsequence through the last support point,
/// the slope of `log a_n` over the last step agrees with the slope over a
/// long span: periodic multiplicative structure (counts of the form
/// `C_{n mod d} λ^n`) breaks this for strides that are not multiples of `d`.
fn choose_stride(counts: &[BigUint], support: &[usize]) -> usize {
    let s0 = detect_stride(support);
    let last = *support.last().unwrap();
    if support.len() < 3 {
        return s0;
    }
    let cap = (last / 5).clamp(1, 16).max(s0);
    let candidates: Vec<usize> = (1..).map(|m| s0 * m).take_while(|&s| s <= cap).collect();
    let candidates = if candidates.is_empty() { vec![s0] } else { candidates };

    // smallest stride whose subsequence is free of periodic jumps; otherwise
    // the one closest to it
    let mut best = (f64::INFINITY, s0);
    for &s in &candidates {
        if let Some((defect, scale)) = stride_defect(counts, support, s) {
            if defect <= 0.02 * scale.max(0.5) {
                return s;
            }
            if defect < best.0 {
                best = (defect, s);
            }
        }
    }
    best.1
}

/// `(|short-span slope - long-span slope|, |short slope|)` of `log a_n`
/// along the stride-`s` subsequence through the last support point; `None`
/// when the subsequence is too short to compare.
fn stride_defect(counts: &[BigUint], support: &[usize], s: usize) -> Option<(f64, f64)> {
    let last = *support.last().unwrap();
    let class: Vec<usize> = support.iter().copied().filter(|&n| n % s == last % s).collect();
    if class.len() < 3 {
        return None;
    }
    let ln = |n: usize| ln_biguint(&counts[n]);
    let n2 = class[class.len() - 1];
    let n1 = class[class.len() - 2];
    let short = (ln(n2) - ln(n1)) / (n2 - n1) as f64;
    // long baseline: from the class point nearest to the middle
    let mid_target = n2 / 2;
    let p0 = *class
        .iter()
        .min_by_key(|&&n| n.abs_diff(mid_target))
        .unwrap();
    if p0 >= n1 {
        return None;
    }
    let long = (ln(n2) - ln(p0)) / (n2 - p0) as f64;
    Some(((short - long).abs(), short.abs()))
}

/// The plain tail maximum of `log(a_n)/n`, for diagnostics and comparisons.
pub fn tail_max_rate(
    counts: &[BigUint],
    stride: Option<usize>,
    tail_fraction: f64,
) -> Result<EntropyEstimate, EntropyError> {
    let mut est = growth_rate(counts, stride, tail_fraction)?;
    let s = est.stride.unwrap_or(1);
    let (lo, hi) = est.n_range;
    let value = est
        .raw
        .iter()
        .filter(|(n, _)| *n >= lo && *n <= hi && n % s == hi % s)
        .map(|&(_, x)| x)
        .fold(f64::NEG_INFINITY, f64::max);
    est.value = value.max(0.0);
    est.method = EstimateMethod::TailMax;
    Ok(est)
}

fn detect_stride(support: &[usize]) -> usize {
    let mut g = 0usize;
    for pair in support.windows(2) {
        g = g.gcd(&(pair[1] - pair[0]));
        if g == 1 {
            return 1;
        }
    }
    g.max(1)
}

/// Stride for the entropy estimators: gcd of gaps between nonzero loop
/// counts at `v` (the loop series lives on a sub-semigroup of lengths).
pub fn loop_stride(loop_series: &CountSeries) -> usize {
    let support: Vec<usize> = (1..loop_series.counts.len())
        .filter(|&n| !loop_series.counts[n].is_zero())
        .collect();
    if support.len() < 2 {
        1
    } else {
        detect_stride(&support)
    }
}

const TAIL_FRACTION: f64 = 0.25;

/// Loop entropy: growth rate of the loop counts at `v`.
pub fn loop_entropy(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
) -> Result<EntropyEstimate, EntropyError> {
    let loops = count_class(window, v, PathClass::Loop, n_max)?;
    let stride = loop_stride(&loops);
    growth_rate(&loops.counts, Some(stride), TAIL_FRACTION)
}

/// Block entropy: growth rate of the source counts at `v`.
pub fn block_entropy(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
) -> Result<EntropyEstimate, EntropyError> {
    let loops = count_class(window, v, PathClass::Loop, n_max)?;
    let series = count_class(window, v, PathClass::Source, n_max)?;
    growth_rate(&series.counts, Some(loop_stride(&loops)), TAIL_FRACTION)
}

/// Co-block entropy: growth rate of the range counts at `v` (the block
/// entropy of the edge-reversed graph).
pub fn coblock_entropy(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
) -> Result<EntropyEstimate, EntropyError> {
    let loops = count_class(window, v, PathClass::Loop, n_max)?;
    let series = count_class(window, v, PathClass::Range, n_max)?;
    growth_rate(&series.counts, Some(loop_stride(&loops)), TAIL_FRACTION)
}

/// Growth rate of the through counts at `v`.
pub fn through_growth(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
) -> Result<EntropyEstimate, EntropyError> {
    let series = count_class(window, v, PathClass::Through, n_max)?;
    growth_rate(&series.counts, None, TAIL_FRACTION)
}

/// A growth estimate labeled as the log of an inverse convergence radius.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadiusInverse {
    /// e.g. `log R^-1 (source-star series)`
    pub quantity: String,
    pub estimate: EntropyEstimate,
}

/// Identical numerics to [`growth_rate`], labeled as `log R^-1` of the
/// generating series of the class.
pub fn radius_inverse(
    series: &CountSeries,
    stride: Option<usize>,
) -> Result<RadiusInverse, EntropyError> {
    let estimate = growth_rate(&series.counts, stride, TAIL_FRACTION)?;
    Ok(RadiusInverse {
        quantity: format!("log R^-1 ({} series)", series.class.name()),
        estimate,
    })
}

/// Exact entropy of a finite graph: log of the spectral radius of its edge
/// matrix. Graphs without a cycle have spectral radius 0 and entropy 0 by
/// convention.
pub fn finite_entropy(g: &FiniteGraph) -> EntropyEstimate {
    let m = g.edge_matrix();
    let r = match spectral_radius(&m) {
        SpectralOutcome::Value(r) => r,
        SpectralOutcome::NoCycle => 0.0,
    };
    // an integer nonnegative matrix has spectral radius 0 or >= 1
    let value = if r < 0.5 { 0.0 } else { r.ln() };
    EntropyEstimate {
        value,
        method: EstimateMethod::ExactSpectral,
        stride: None,
        n_range: (0, 0),
        raw: Vec::new(),
        skipped: 0,
    }
}

/// One side of a two-sided identity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs_name: String,
    pub lhs: f64,
    pub rhs_name: String,
    pub rhs: f64,
    pub gap: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(lhs_name: &str, lhs: f64, rhs_name: &str, rhs: f64, tol: f64) -> Self {
        let gap = (lhs - rhs).abs();
        IdentityCheck {
            lhs_name: lhs_name.into(),
            lhs,
            rhs_name: rhs_name.into(),
            rhs,
            gap,
            passed: gap <= tol,
        }
    }
}

/// Report of the block-entropy maximum identity
/// `h_b = max(log R^-1 of the source-star series, h_l)` and its transposed
/// twin `h_b(t) = max(log R^-1 of the range-star series, h_l)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prop32Report {
    pub h_l: f64,
    pub h_b: f64,
    pub r_inv_source_star: f64,
    pub h_b_t: f64,
    pub r_inv_range_star: f64,
    pub direct: IdentityCheck,
    pub transposed: IdentityCheck,
    pub passed: bool,
}

pub fn prop32_check(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
    tol: f64,
) -> Result<Prop32Report, EntropyError> {
    let loops = count_class(window, v, PathClass::Loop, n_max)?;
    let stride = loop_stride(&loops);
    let h_l = growth_rate(&loops.counts, Some(stride), TAIL_FRACTION)?.value;
    let h_b = block_entropy(window, v, n_max)?.value;
    let h_b_t = coblock_entropy(window, v, n_max)?.value;

    let source_star = count_class(window, v, PathClass::SourceStar, n_max)?;
    let range_star = count_class(window, v, PathClass::RangeStar, n_max)?;
    // starred series may vanish identically (no escaping paths); the radius
    // is then infinite and the log inverse is 0
    let r_inv_s = match growth_rate(&source_star.counts, None, TAIL_FRACTION) {
        Ok(e) => e.value,
        Err(EntropyError::AllZeroTail) => 0.0,
        Err(e) => return Err(e),
    };
    let r_inv_r = match growth_rate(&range_star.counts, None, TAIL_FRACTION) {
        Ok(e) => e.value,
        Err(EntropyError::AllZeroTail) => 0.0,
        Err(e) => return Err(e),
    };

    let direct = IdentityCheck::new("h_b", h_b, "max(log R^-1 source-star, h_l)", r_inv_s.max(h_l), tol);
    let transposed = IdentityCheck::new(
        "h_b(transpose)",
        h_b_t,
        "max(log R^-1 range-star, h_l)",
        r_inv_r.max(h_l),
        tol,
    );
    let passed = direct.passed && transposed.passed;
    Ok(Prop32Report {
        h_l,
        h_b,
        r_inv_source_star: r_inv_s,
        h_b_t,
        r_inv_range_star: r_inv_r,
        direct,
        transposed,
        passed,
    })
}

/// Report of the finite irreducible coherence check: loop, block and
/// co-block estimates and the exact spectral value agree pairwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prop35aReport {
    pub h_l: f64,
    pub h_b: f64,
    pub h_b_t: f64,
    pub spectral: f64,
    pub max_pairwise_gap: f64,
    pub passed: bool,
}

pub fn prop35a_check(
    g: &FiniteGraph,
    v: VertexId,
    n_max: usize,
    tol: f64,
) -> Result<Prop35aReport, EntropyError> {
    if !g.is_irreducible() {
        return Err(EntropyError::NotIrreducible);
    }
    let window = GraphWindow::whole(g);
    let h_l = loop_entropy(&window, v, n_max)?.value;
    let h_b = block_entropy(&window, v, n_max)?.value;
    let h_b_t = coblock_entropy(&window, v, n_max)?.value;
    let spectral = finite_entropy(g).value;
    let vals = [h_l, h_b, h_b_t, spectral];
    let mut gap: f64 = 0.0;
    for a in &vals {
        for b in &vals {
            gap = gap.max((a - b).abs());
        }
    }
    Ok(Prop35aReport {
        h_l,
        h_b,
        h_b_t,
        spectral,
        max_pairwise_gap: gap,
        passed: gap <= tol,
    })
}

/// Report of the through-growth identity: the growth rate of the through
/// counts equals `max(h_b, h_b(t))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Prop35bReport {
    pub through: f64,
    pub h_b: f64,
    pub h_b_t: f64,
    pub check: IdentityCheck,
    pub passed: bool,
}

pub fn prop35b_check(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
    tol: f64,
) -> Result<Prop35bReport, EntropyError> {
    let through = through_growth(window, v, n_max)?.value;
    let h_b = block_entropy(window, v, n_max)?.value;
    let h_b_t = coblock_entropy(window, v, n_max)?.value;
    let check = IdentityCheck::new("through growth", through, "max(h_b, h_b_t)", h_b.max(h_b_t), tol);
    let passed = check.passed;
    Ok(Prop35bReport {
        through,
        h_b,
        h_b_t,
        check,
        passed,
    })
}

/// One entry of the finite-subgraph supremum sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubgraphEntry {
    pub radius: usize,
    pub scc_vertices: usize,
    pub scc_edges: usize,
    /// Exact spectral entropy of the strongly connected component of the
    /// root inside the window; 0 when the component carries no cycle.
    pub value: f64,
}

/// For each radius, the spectral entropy of the strongly connected component
/// of `v` inside the window. Non-decreasing in the radius; its limit is the
/// supremum of the finite-subgraph entropies, i.e. the loop entropy.
pub fn subgraph_supremum(
    oracle: &dyn GraphOracle,
    v: VertexId,
    radii: &[usize],
) -> Result<Vec<SubgraphEntry>, EntropyError> {
    let mut entries = Vec::with_capacity(radii.len());
    for &radius in radii {
        let window = materialize(oracle, &[v], radius)?;
        let g = window.graph();
        let comps = g.scc();
        let vd = g.dense(v);
        let comp = comps
            .into_iter()
            .find(|c| c.contains(&vd))
            .expect("v lies in some component");
        let sub = g.induced(&comp);
        let value = finite_entropy(&sub).value;
        entries.push(SubgraphEntry {
            radius,
            scc_vertices: sub.vertex_count(),
            scc_edges: sub.edge_count(),
            value,
        });
    }
    Ok(entries)
}

/// The sandwich report: `lower = h_l <= invariant <= upper = max(h_b, h_b_t)`,
/// with `exact` set when the two sides meet within tolerance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichReport {
    pub vertex: VertexId,
    pub n_max: usize,
    pub tolerance: f64,
    pub h_l: EntropyEstimate,
    pub h_b: EntropyEstimate,
    pub h_b_t: EntropyEstimate,
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

pub fn sandwich(
    oracle: &dyn GraphOracle,
    v: VertexId,
    n_max: usize,
    tol: f64,
) -> Result<SandwichReport, EntropyError> {
    let window = materialize(oracle, &[v], n_max)?;
    sandwich_on_window(&window, v, n_max, tol)
}

pub fn sandwich_on_window(
    window: &GraphWindow,
    v: VertexId,
    n_max: usize,
    tol: f64,
) -> Result<SandwichReport, EntropyError> {
    let h_l = loop_entropy(window, v, n_max)?;
    let h_b = block_entropy(window, v, n_max)?;
    let h_b_t = coblock_entropy(window, v, n_max)?;
    let lower = h_l.value;
    let upper = h_b.value.max(h_b_t.value);
    Ok(SandwichReport {
        vertex: v,
        n_max,
        tolerance: tol,
        exact: (upper - lower).abs() <= tol,
        lower,
        upper,
        h_l,
        h_b,
        h_b_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::salama_2_8;
    use crate::graph::{fibonacci_graph, Edge, EdgeId};

    fn synthetic(lambda: u64, c: u64, n_max: usize) -> Vec<BigUint> {
        (0..=n_max)
            .map(|n| BigUint::from(c) * BigUint::from(lambda).pow(n as u32))
            .collect()
    }

    #[test]
    fn geometric_series_is_recovered_exactly() {
        for lambda in [1u64, 2, 8] {
            for c in [1u64, 7] {
                for n_max in [50usize, 60] {
                    let counts = synthetic(lambda, c, n_max);
                    for stride in [None, Some(1), Some(3)] {
                        let est = growth_rate(&counts, stride, 0.25).unwrap();
                        assert!(
                            (est.value - (lambda as f64).ln()).abs() < 1e-6,
                            "lambda {lambda} c {c} stride {stride:?}: got {}",
                            est.value
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn scaling_leaves_the_estimate_unchanged() {
        let counts = synthetic(3, 1, 50);
        let scaled: Vec<BigUint> = counts.iter().map(|c| c * BigUint::from(11u32)).collect();
        let a = growth_rate(&counts, None, 0.25).unwrap().value;
        let b = growth_rate(&scaled, None, 0.25).unwrap().value;
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn all_zero_tail_errors() {
        let mut counts = vec![BigUint::zero(); 11];
        counts[0] = BigUint::from(1u32);
        assert!(matches!(
            growth_rate(&counts, None, 0.25),
            Err(EntropyError::AllZeroTail)
        ));
    }

    #[test]
    fn short_series_errors() {
        let counts = vec![BigUint::from(1u32); 3];
        assert!(matches!(
            growth_rate(&counts, None, 0.25),
            Err(EntropyError::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn eventually_zero_series_estimates_zero() {
        // counts 1,1,0,0,...: the support ends, the estimate is 0
        let mut counts = vec![BigUint::zero(); 11];
        counts[0] = BigUint::from(1u32);
        counts[1] = BigUint::from(1u32);
        let est = growth_rate(&counts, None, 0.25).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn strided_support_is_detected() {
        // support 2, 4, 6, ...: counts 2^(n/2) at even n
        let mut counts = vec![BigUint::zero(); 41];
        counts[0] = BigUint::from(1u32);
        for n in (2..=40).step_by(2) {
            counts[n] = BigUint::from(2u64).pow(n as u32 / 2);
        }
        let est = growth_rate(&counts, None, 0.25).unwrap();
        assert_eq!(est.stride, Some(2));
        assert!((est.value - 0.5 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn fibonacci_entropies_agree_with_the_golden_ratio() {
        let g = fibonacci_graph();
        let w = GraphWindow::whole(&g);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let a = VertexId(0);
        for est in [
            loop_entropy(&w, a, 40).unwrap(),
            block_entropy(&w, a, 40).unwrap(),
            coblock_entropy(&w, a, 40).unwrap(),
        ] {
            assert!((est.value - phi.ln()).abs() < 1e-2, "got {}", est.value);
        }
        let spectral = finite_entropy(&g);
        assert!((spectral.value - phi.ln()).abs() < 1e-9);
    }

    #[test]
    fn single_vertex_loops_have_log_m_entropy() {
        for m in [1u64, 2, 5] {
            let v = VertexId(0);
            let edges = (0..m)
                .map(|j| Edge { id: EdgeId(j), src: v, dst: v })
                .collect();
            let g = crate::graph::FiniteGraph::build(vec![v], edges).unwrap();
            let e = finite_entropy(&g);
            assert!((e.value - (m as f64).ln()).abs() < 1e-10, "m = {m}");
        }
    }

    #[test]
    fn two_cycle_everything_is_zero() {
        let a = VertexId(0);
        let b = VertexId(1);
        let g = crate::graph::FiniteGraph::build(
            vec![a, b],
            vec![
                Edge { id: EdgeId(0), src: a, dst: b },
                Edge { id: EdgeId(1), src: b, dst: a },
            ],
        )
        .unwrap();
        assert_eq!(finite_entropy(&g).value, 0.0);
        let w = GraphWindow::whole(&g);
        let rep = prop35a_check(&g, a, 20, 0.01).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.spectral, 0.0);
        assert!(prop32_check(&w, a, 20, 0.01).unwrap().passed);
        assert!(prop35b_check(&w, a, 20, 0.01).unwrap().passed);
        assert_eq!(through_growth(&w, a, 20).unwrap().value, 0.0);
        // source-star counts are 0/1 and eventually zero: estimate 0
        let s = count_class(&w, a, PathClass::SourceStar, 10).unwrap();
        let est = growth_rate(&s.counts, None, 0.25).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn e28_sandwich_stays_open() {
        // loop entropy log 2 strictly below block entropy log 8: the bounds
        // do not meet and the report must say so
        let (o, _) = salama_2_8();
        let rep = sandwich(&o, VertexId(0), 60, 0.05).unwrap();
        assert!(!rep.exact);
        assert!((rep.lower - 2f64.ln()).abs() < 0.05);
        assert!((rep.upper - 8f64.ln()).abs() < 0.05);
        assert!(rep.lower <= rep.upper + rep.tolerance);
    }

    #[test]
    fn e28_through_growth_matches_the_block_maximum() {
        let (o, _) = salama_2_8();
        let v = VertexId(0);
        let w = crate::graph::materialize(&o, &[v], 60).unwrap();
        let rep = prop35b_check(&w, v, 60, 0.05).unwrap();
        assert!(rep.passed);
        assert!((rep.through - 8f64.ln()).abs() < 0.05);
    }

    #[test]
    fn fibonacci_supremum_saturates_immediately() {
        let g = fibonacci_graph();
        let entries = subgraph_supremum(&g, VertexId(0), &[2]).unwrap();
        let phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert_eq!(entries.len(), 1);
        assert!((entries[0].value - phi).abs() < 1e-9);
    }

    #[test]
    fn prop35a_requires_irreducibility() {
        let g = crate::graph::FiniteGraph::build(
            vec![VertexId(0), VertexId(1)],
            vec![Edge { id: EdgeId(0), src: VertexId(0), dst: VertexId(1) }],
        )
        .unwrap();
        assert!(matches!(
            prop35a_check(&g, VertexId(0), 10, 0.1),
            Err(EntropyError::NotIrreducible)
        ));
    }

    #[test]
    fn fibonacci_prop_checks_pass() {
        let g = fibonacci_graph();
        let w = GraphWindow::whole(&g);
        let a = VertexId(0);
        assert!(prop32_check(&w, a, 40, 0.02).unwrap().passed);
        assert!(prop35a_check(&g, a, 40, 0.05).unwrap().passed);
        assert!(prop35b_check(&w, a, 40, 0.05).unwrap().passed);
    }

    #[test]
    fn sandwich_on_fibonacci_collapses() {
        let g = fibonacci_graph();
        let rep = sandwich(&g, VertexId(0), 40, 0.05).unwrap();
        assert!(rep.exact);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((rep.lower - phi.ln()).abs() < 0.02);
        assert!(rep.lower <= rep.upper + rep.tolerance);
    }

    #[test]
    fn ray_graph_supremum_is_zero() {
        // 0 -> 1 -> 2 -> ...: no cycles anywhere
        struct Ray;
        impl GraphOracle for Ray {
            fn root(&self) -> VertexId {
                VertexId(0)
            }
            fn out_edges(&self, v: VertexId) -> Vec<Edge> {
                vec![Edge { id: EdgeId(v.0), src: v, dst: VertexId(v.0 + 1) }]
            }
            fn in_edges(&self, v: VertexId) -> Vec<Edge> {
                if v.0 == 0 {
                    vec![]
                } else {
                    vec![Edge { id: EdgeId(v.0 - 1), src: VertexId(v.0 - 1), dst: v }]
                }
            }
        }
        let entries = subgraph_supremum(&Ray, VertexId(0), &[3, 6]).unwrap();
        assert_eq!(entries.len(), 2);
        assert!(entries.iter().all(|e| e.value == 0.0));
    }

    #[test]
    fn e28_radius_inverse_examples() {
        let (o, _) = salama_2_8();
        let v = VertexId(0);
        let w = crate::graph::materialize(&o, &[v], 60).unwrap();
        // escaping paths branch 8 ways along the ray
        let source_star = count_class(&w, v, PathClass::SourceStar, 60).unwrap();
        let ri = radius_inverse(&source_star, None).unwrap();
        assert!((ri.estimate.value - 8f64.ln()).abs() < 0.02, "got {}", ri.estimate.value);
        assert!(ri.quantity.contains("source-star"));
        // arrivals are throttled by the return trunk
        let w100 = crate::graph::materialize(&o, &[v], 100).unwrap();
        let range_star = count_class(&w100, v, PathClass::RangeStar, 100).unwrap();
        let ri = radius_inverse(&range_star, Some(4)).unwrap();
        assert!((ri.estimate.value - 8f64.ln() / 4.0).abs() < 0.02);
    }

    #[test]
    fn e28_supremum_is_monotone() {
        let (o, _) = salama_2_8();
        let entries = subgraph_supremum(&o, VertexId(0), &[5, 9, 13]).unwrap();
        for w in entries.windows(2) {
            assert!(w[1].value >= w[0].value - 1e-12);
        }
        assert!((entries.last().unwrap().value - 2f64.ln()).abs() < 0.1);
    }
}
