//! Built-in graph families and family specification files.
//!
//! The central generator is the Salama graph `E_{r,l}`: a bottom ray
//! `0 = b0 -> b1 -> b2 -> ...` with `r_k` parallel edges from `b_{k-1}` to
//! `b_k`, one edge from `b_k` up to a return vertex `v_k`, and a single
//! shared descending trunk through all the `v_k` back to `0`; the chain from
//! `v_k` down to `v_{k-1}` has length `l_k - l_{k-1}` (and `l_1 - 1` from
//! `v_1` to `0`), plus an optional self-loop at `0`.
//!
//! Consequently the first-return loops at `0` have lengths
//! `{1 (self-loop)} ∪ {k + l_k}` with multiplicities `r_1 r_2 ... r_k`, so
//! the loop growth rate is governed by the smallest positive root of the
//! first-return series `F(x) = x + sum_k (r_1...r_k) x^{k+l_k} = 1`, which
//! this module can evaluate exactly in rational arithmetic.

use std::collections::HashMap;
use std::path::Path as FsPath;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, EdgeId, FiniteGraph, GraphError, GraphOracle, VertexId};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("cannot parse family specification: {0}")]
    ParseError(String),
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A positive-integer sequence `k -> s_k` (k >= 1) in closed form.
///
/// Parse syntax: `const:c`, `affine:a,b` (meaning `a*k + b`), or
/// `list:v1,v2,...;+d` (the explicit prefix, continued arithmetically with
/// step `d` past the end).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeqSpec {
    Const(u64),
    Affine { slope: u64, offset: u64 },
    List { prefix: Vec<u64>, tail_step: u64 },
}

impl SeqSpec {
    pub fn eval(&self, k: u64) -> u64 {
        assert!(k >= 1, "sequences are indexed from 1");
        match self {
            SeqSpec::Const(c) => *c,
            SeqSpec::Affine { slope, offset } => slope
                .checked_mul(k)
                .and_then(|x| x.checked_add(*offset))
                .expect("sequence value overflows u64"),
            SeqSpec::List { prefix, tail_step } => {
                let n = prefix.len() as u64;
                if k <= n {
                    prefix[(k - 1) as usize]
                } else {
                    prefix
                        .last()
                        .expect("list spec has an empty prefix")
                        .checked_add(tail_step.checked_mul(k - n).expect("overflow"))
                        .expect("sequence value overflows u64")
                }
            }
        }
    }

    pub fn parse(s: &str) -> Result<SeqSpec, FamilyError> {
        let bad = |d: &str| FamilyError::ParseError(format!("bad sequence spec {s:?}: {d}"));
        if let Some(rest) = s.strip_prefix("const:") {
            let c = rest.trim().parse().map_err(|_| bad("expected const:<int>"))?;
            return Ok(SeqSpec::Const(c));
        }
        if let Some(rest) = s.strip_prefix("affine:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                return Err(bad("expected affine:<slope>,<offset>"));
            }
            let slope = parts[0].trim().parse().map_err(|_| bad("bad slope"))?;
            let offset = parts[1].trim().parse().map_err(|_| bad("bad offset"))?;
            return Ok(SeqSpec::Affine { slope, offset });
        }
        if let Some(rest) = s.strip_prefix("list:") {
            let (vals, step) = match rest.split_once(";+") {
                Some((v, d)) => (v, d.trim().parse().map_err(|_| bad("bad tail step"))?),
                None => (rest, 0),
            };
            let prefix: Result<Vec<u64>, _> = vals.split(',').map(|t| t.trim().parse()).collect();
            let prefix = prefix.map_err(|_| bad("bad list entry"))?;
            if prefix.is_empty() {
                return Err(bad("empty list"));
            }
            return Ok(SeqSpec::List { prefix, tail_step: step });
        }
        Err(bad("expected const:, affine: or list:"))
    }

    pub fn display(&self) -> String {
        match self {
            SeqSpec::Const(c) => format!("const:{c}"),
            SeqSpec::Affine { slope, offset } => format!("affine:{slope},{offset}"),
            SeqSpec::List { prefix, tail_step } => {
                let vals: Vec<String> = prefix.iter().map(|v| v.to_string()).collect();
                if *tail_step == 0 {
                    format!("list:{}", vals.join(","))
                } else {
                    format!("list:{};+{}", vals.join(","), tail_step)
                }
            }
        }
    }

    /// The value and start index from which the sequence is constant, if it
    /// eventually is.
    fn eventually_const(&self) -> Option<(u64, u64)> {
        match self {
            SeqSpec::Const(c) => Some((*c, 1)),
            SeqSpec::Affine { slope: 0, offset } => Some((*offset, 1)),
            SeqSpec::Affine { .. } => None,
            SeqSpec::List { prefix, tail_step: 0 } => {
                Some((*prefix.last().unwrap(), prefix.len() as u64))
            }
            SeqSpec::List { .. } => None,
        }
    }

    /// The step and start index from which the sequence is arithmetic, if it
    /// eventually is.
    fn eventually_arithmetic(&self) -> Option<(u64, u64)> {
        match self {
            SeqSpec::Const(_) => Some((0, 1)),
            SeqSpec::Affine { slope, .. } => Some((*slope, 1)),
            SeqSpec::List { prefix, tail_step } => Some((*tail_step, prefix.len() as u64)),
        }
    }
}

/// Parameters of a Salama graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SalamaParams {
    /// `r_k`: multiplicity of the parallel edges `b_{k-1} -> b_k`.
    pub r: SeqSpec,
    /// `l_k`: cumulative return-chain lengths; must satisfy `l_k + 1 <= l_{k+1}`.
    pub l: SeqSpec,
    /// Whether the self-loop at vertex `0` is present.
    pub base_loop: bool,
}

impl SalamaParams {
    pub fn validate(&self) -> Result<(), FamilyError> {
        const PROBE: u64 = 512;
        for k in 1..=PROBE {
            let rk = self.r.eval(k);
            if rk < 1 {
                return Err(FamilyError::InvalidParams(format!("r_{k} = 0")));
            }
            if rk >= 1 << 24 {
                return Err(FamilyError::InvalidParams(format!(
                    "r_{k} = {rk} exceeds the supported multiplicity 2^24"
                )));
            }
            if self.l.eval(k) < 1 {
                return Err(FamilyError::InvalidParams(format!("l_{k} = 0")));
            }
            if k > 1 && self.l.eval(k - 1) + 1 > self.l.eval(k) {
                return Err(FamilyError::InvalidParams(format!(
                    "monotonicity violated: l_{} + 1 > l_{}",
                    k - 1,
                    k
                )));
            }
        }
        // structural monotonicity beyond the probe window
        match &self.l {
            SeqSpec::Const(_) => {
                return Err(FamilyError::InvalidParams(
                    "l must be strictly increasing; const is not".into(),
                ))
            }
            SeqSpec::Affine { slope, .. } if *slope == 0 => {
                return Err(FamilyError::InvalidParams(
                    "l must be strictly increasing; zero slope is not".into(),
                ))
            }
            SeqSpec::List { tail_step, .. } if *tail_step == 0 => {
                return Err(FamilyError::InvalidParams(
                    "l must be strictly increasing; a constant tail is not".into(),
                ))
            }
            _ => {}
        }
        Ok(())
    }
}

const RAY_KIND: u64 = 0;
const TRUNK_KIND: u64 = 1;

const E_SELF: u64 = 0;
const E_RAY: u64 = 1;
const E_HOP: u64 = 2;
const E_TRUNK: u64 = 3;

fn ray(k: u64) -> VertexId {
    VertexId(k << 1 | RAY_KIND)
}

fn trunk(d: u64) -> VertexId {
    debug_assert!(d >= 1);
    VertexId((d - 1) << 1 | TRUNK_KIND)
}

fn edge_id(kind: u64, a: u64, j: u64) -> EdgeId {
    // id packing limits; r_k < 2^24 is enforced by SalamaParams::validate
    assert!(a < 1 << 36 && j < 1 << 24, "edge id field overflow");
    EdgeId(kind << 60 | a << 24 | j)
}

/// Oracle for a Salama graph. Pure and deterministic in the parameters.
#[derive(Debug, Clone)]
pub struct SalamaOracle {
    params: SalamaParams,
}

impl SalamaOracle {
    pub fn params(&self) -> &SalamaParams {
        &self.params
    }

    fn r(&self, k: u64) -> u64 {
        self.params.r.eval(k)
    }

    fn l(&self, k: u64) -> u64 {
        self.params.l.eval(k)
    }

    /// Where the hop edge from `b_k` lands: the trunk vertex at distance
    /// `l_k - 1` from `0`, which is `0` itself when `l_k = 1`.
    fn hop_target(&self, k: u64) -> VertexId {
        let d = self.l(k) - 1;
        if d == 0 {
            ray(0)
        } else {
            trunk(d)
        }
    }

    /// The `k` with `l_k = target`, if any (binary search; `l` is strictly
    /// increasing).
    fn k_with_l(&self, target: u64) -> Option<u64> {
        let mut hi = 1u64;
        while self.l(hi) < target {
            hi = hi.checked_mul(2).expect("l search overflow");
        }
        let mut lo = 1u64;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.l(mid) < target {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if self.l(lo) == target {
            Some(lo)
        } else {
            None
        }
    }

    fn decode(&self, v: VertexId) -> (u64, u64) {
        (v.0 & 1, v.0 >> 1)
    }
}

impl GraphOracle for SalamaOracle {
    fn root(&self) -> VertexId {
        ray(0)
    }

    fn out_edges(&self, v: VertexId) -> Vec<Edge> {
        let (kind, idx) = self.decode(v);
        let mut out = Vec::new();
        if kind == RAY_KIND {
            let k = idx;
            if k == 0 && self.params.base_loop {
                out.push(Edge { id: edge_id(E_SELF, 0, 0), src: v, dst: v });
            }
            for j in 0..self.r(k + 1) {
                out.push(Edge { id: edge_id(E_RAY, k + 1, j), src: v, dst: ray(k + 1) });
            }
            if k >= 1 {
                out.push(Edge { id: edge_id(E_HOP, k, 0), src: v, dst: self.hop_target(k) });
            }
        } else {
            let d = idx + 1;
            let dst = if d == 1 { ray(0) } else { trunk(d - 1) };
            out.push(Edge { id: edge_id(E_TRUNK, d, 0), src: v, dst });
        }
        out
    }

    fn in_edges(&self, v: VertexId) -> Vec<Edge> {
        let (kind, idx) = self.decode(v);
        let mut inn = Vec::new();
        if kind == RAY_KIND {
            let k = idx;
            if k == 0 {
                if self.params.base_loop {
                    inn.push(Edge { id: edge_id(E_SELF, 0, 0), src: v, dst: v });
                }
                inn.push(Edge { id: edge_id(E_TRUNK, 1, 0), src: trunk(1), dst: v });
                if let Some(h) = self.k_with_l(1) {
                    inn.push(Edge { id: edge_id(E_HOP, h, 0), src: ray(h), dst: v });
                }
            } else {
                for j in 0..self.r(k) {
                    inn.push(Edge { id: edge_id(E_RAY, k, j), src: ray(k - 1), dst: v });
                }
            }
        } else {
            let d = idx + 1;
            inn.push(Edge { id: edge_id(E_TRUNK, d + 1, 0), src: trunk(d + 1), dst: v });
            if let Some(h) = self.k_with_l(d + 1) {
                inn.push(Edge { id: edge_id(E_HOP, h, 0), src: ray(h), dst: v });
            }
        }
        inn
    }

    fn label(&self, v: VertexId) -> Option<String> {
        let (kind, idx) = self.decode(v);
        Some(if kind == RAY_KIND {
            if idx == 0 {
                "0".to_string()
            } else {
                format!("b{idx}")
            }
        } else {
            let d = idx + 1;
            match self.k_with_l(d + 1) {
                Some(k) => format!("v{k}"),
                None => format!("t{d}"),
            }
        })
    }
}

/// Build a validated Salama oracle.
pub fn salama(params: SalamaParams) -> Result<SalamaOracle, FamilyError> {
    params.validate()?;
    Ok(SalamaOracle { params })
}

/// Exact value of the first-return series
/// `F(x) = [base_loop] x + sum_{k>=1} (r_1...r_k) x^{k+l_k}` at a rational
/// `x`, provided the parameters are eventually geometric (r eventually
/// constant, l eventually arithmetic) and the tail ratio is < 1.
pub fn first_return_series_at(params: &SalamaParams, x: &BigRational) -> Option<BigRational> {
    let (r_const, r_from) = params.r.eventually_const()?;
    let (l_step, l_from) = params.l.eventually_arithmetic()?;
    if x <= &BigRational::zero() {
        return None;
    }
    let stable = r_from.max(l_from);

    let pow = |e: u64| -> BigRational {
        let mut acc = BigRational::one();
        for _ in 0..e {
            acc *= x;
        }
        acc
    };

    let mut total = if params.base_loop { x.clone() } else { BigRational::zero() };
    let mut multiplicity = BigRational::one();
    for k in 1..=stable {
        multiplicity *= BigRational::from(BigInt::from(params.r.eval(k)));
        total += &multiplicity * pow(k + params.l.eval(k));
    }
    // beyond `stable` the term ratio is constant: q = r_const * x^(1 + l_step)
    let q = BigRational::from(BigInt::from(r_const)) * pow(1 + l_step);
    if q.abs() >= BigRational::one() {
        return None; // divergent tail
    }
    let k = stable + 1;
    let first_tail = multiplicity
        * BigRational::from(BigInt::from(params.r.eval(k)))
        * pow(k + params.l.eval(k));
    total += first_tail / (BigRational::one() - q);
    Some(total)
}

/// Family metadata. `known_entropies` is never consumed by the estimators;
/// it only feeds comparisons in reports and tests.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub name: String,
    pub params: String,
    pub asserted_irreducible: bool,
    pub asserted_locally_finite: bool,
    pub known_entropies: Option<KnownEntropies>,
}

/// Reference entropy values (nats) with a provenance note describing the
/// closed-form computation they come from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KnownEntropies {
    pub h_l: f64,
    pub h_b: f64,
    pub h_b_t: f64,
    pub provenance: String,
}

/// The ray graph with 8-fold branching and return chains `l_k = 3k + 1`:
/// loop entropy `log 2`, block entropy `log 8`, co-block entropy `log 2`.
///
/// The loop value is exact: the first-return series is
/// `F(x) = x + sum 8^k x^{4k+1}` and `F(1/2) = 1` in rational arithmetic
/// (equivalently, `8x^4 + x - 1` has root `1/2`).
pub fn salama_2_8() -> (SalamaOracle, FamilyDescriptor) {
    let params = SalamaParams {
        r: SeqSpec::Const(8),
        l: SeqSpec::Affine { slope: 3, offset: 1 },
        base_loop: true,
    };
    let oracle = salama(params.clone()).expect("built-in parameters are valid");
    let desc = FamilyDescriptor {
        name: "salama_2_8".into(),
        params: format!("r={}, l={}, base_loop=true", params.r.display(), params.l.display()),
        asserted_irreducible: true,
        asserted_locally_finite: true,
        known_entropies: Some(KnownEntropies {
            h_l: 2f64.ln(),
            h_b: 8f64.ln(),
            h_b_t: 2f64.ln(),
            provenance: "first-return series x + sum 8^k x^(4k+1) equals 1 at x = 1/2 (loop, exact); \
                         ray branching factor 8 (block); return-trunk bottleneck (co-block = loop)"
                .into(),
        }),
    };
    (oracle, desc)
}

/// The collapsing family: a Salama graph with loop and block entropy both
/// `log p`, so the sandwich pins the invariant at `log p` exactly.
///
/// Parameters: `l_k = k + 1`, `r_1 = p (p-1)^2`, `r_k = p` for `k >= 2`, with
/// the self-loop at `0`. The first-return series is then
/// `F(x) = x + p(p-1)^2 x^3 + p^2(p-1)^2 x^5 + ...` and `F(1/p) = 1` exactly,
/// which is verified in rational arithmetic at construction time.
pub fn salama_pp(p: u64) -> Result<(SalamaOracle, FamilyDescriptor), FamilyError> {
    if p < 2 {
        return Err(FamilyError::InvalidParams(format!("p must be >= 2, got {p}")));
    }
    let r1 = p * (p - 1) * (p - 1);
    let params = SalamaParams {
        r: SeqSpec::List { prefix: vec![r1, p], tail_step: 0 },
        l: SeqSpec::Affine { slope: 1, offset: 1 },
        base_loop: true,
    };
    let rho = BigRational::new(BigInt::one(), BigInt::from(p));
    let value = first_return_series_at(&params, &rho)
        .ok_or_else(|| FamilyError::InvalidParams("first-return series does not converge".into()))?;
    if value != BigRational::one() {
        return Err(FamilyError::InvalidParams(format!(
            "renewal identity failed at 1/{p}: F = {value}"
        )));
    }
    let oracle = salama(params.clone())?;
    let log_p = (p as f64).ln();
    let desc = FamilyDescriptor {
        name: format!("salama_pp({p})"),
        params: format!("r={}, l={}, base_loop=true", params.r.display(), params.l.display()),
        asserted_irreducible: true,
        asserted_locally_finite: true,
        known_entropies: Some(KnownEntropies {
            h_l: log_p,
            h_b: log_p,
            h_b_t: log_p,
            provenance: format!(
                "first-return series sums to 1 at x = 1/{p} (verified exactly at construction); \
                 ray branching rate {p} matches, so loop and block growth coincide"
            ),
        }),
    };
    Ok((oracle, desc))
}

/// Deterministic random strongly connected graph: a random cyclic backbone on
/// the vertices plus density-sampled extra edges. Deterministic in the seed;
/// when `density > 0` the result has at least one vertex of out-degree >= 2.
pub fn random_strongly_connected(n_vertices: usize, density: f64, seed: u64) -> FiniteGraph {
    assert!(n_vertices >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<u64> = (0..n_vertices as u64).collect();
    perm.shuffle(&mut rng);

    let mut edges = Vec::new();
    let mut next_id = 0u64;
    let mut push = |edges: &mut Vec<Edge>, src: u64, dst: u64| {
        edges.push(Edge {
            id: EdgeId(next_id),
            src: VertexId(src),
            dst: VertexId(dst),
        });
        next_id += 1;
    };

    let mut present: HashMap<(u64, u64), ()> = HashMap::new();
    for i in 0..n_vertices {
        let src = perm[i];
        let dst = perm[(i + 1) % n_vertices];
        push(&mut edges, src, dst);
        present.insert((src, dst), ());
    }

    for u in 0..n_vertices as u64 {
        for w in 0..n_vertices as u64 {
            let roll: f64 = rng.gen();
            if roll < density && !present.contains_key(&(u, w)) {
                push(&mut edges, u, w);
                present.insert((u, w), ());
            }
        }
    }

    // honor the branching guarantee when density permits it
    if density > 0.0 {
        let mut outdeg = vec![0usize; n_vertices];
        for e in &edges {
            outdeg[e.src.0 as usize] += 1;
        }
        if outdeg.iter().all(|&d| d <= 1) {
            let src = perm[0];
            let dst = perm[2 % n_vertices];
            push(&mut edges, src, dst);
        }
    }

    let vertices: Vec<VertexId> = (0..n_vertices as u64).map(VertexId).collect();
    let g = FiniteGraph::build(vertices, edges).expect("generated graph is valid");
    debug_assert!(g.is_irreducible());
    g
}

/// Either an explicit finite graph or an oracle for an infinite family.
pub enum GraphSource {
    Finite(FiniteGraph),
    Salama(SalamaOracle),
}

impl GraphSource {
    pub fn as_oracle(&self) -> &dyn GraphOracle {
        match self {
            GraphSource::Finite(g) => g,
            GraphSource::Salama(o) => o,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteGraph> {
        match self {
            GraphSource::Finite(g) => Some(g),
            GraphSource::Salama(_) => None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilySpecFile {
    family: String,
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    p: Option<u64>,
    #[serde(default)]
    r: Option<String>,
    #[serde(default)]
    l: Option<String>,
    #[serde(default)]
    base_loop: Option<bool>,
    #[serde(default)]
    path: Option<String>,
}

/// Load a family from a JSON specification file. Dispatches on the `family`
/// field: `salama_2_8`, `salama_pp` (`p`), `salama` (`r`, `l`, `base_loop`)
/// or `finite` (`path` to an edge-list file, relative to the spec file).
pub fn load_family(path: &FsPath) -> Result<(GraphSource, FamilyDescriptor), FamilyError> {
    let text = std::fs::read_to_string(path)?;
    let spec: FamilySpecFile =
        serde_json::from_str(&text).map_err(|e| FamilyError::ParseError(e.to_string()))?;
    let require = |field: Option<String>, name: &str| {
        field.ok_or_else(|| FamilyError::ParseError(format!("family {:?} requires {name}", spec.family)))
    };

    let (source, mut desc) = match spec.family.as_str() {
        "salama_2_8" => {
            let (o, d) = salama_2_8();
            (GraphSource::Salama(o), d)
        }
        "salama_pp" => {
            let p = spec
                .p
                .ok_or_else(|| FamilyError::ParseError("family \"salama_pp\" requires p".into()))?;
            let (o, d) = salama_pp(p)?;
            (GraphSource::Salama(o), d)
        }
        "salama" => {
            let r = SeqSpec::parse(&require(spec.r.clone(), "r")?)?;
            let l = SeqSpec::parse(&require(spec.l.clone(), "l")?)?;
            let params = SalamaParams {
                r,
                l,
                base_loop: spec.base_loop.unwrap_or(false),
            };
            let display = format!(
                "r={}, l={}, base_loop={}",
                params.r.display(),
                params.l.display(),
                params.base_loop
            );
            let o = salama(params)?;
            (
                GraphSource::Salama(o),
                FamilyDescriptor {
                    name: "salama".into(),
                    params: display,
                    asserted_irreducible: true,
                    asserted_locally_finite: true,
                    known_entropies: None,
                },
            )
        }
        "finite" => {
            let rel = require(spec.path.clone(), "path")?;
            let file = match path.parent() {
                Some(dir) => dir.join(&rel),
                None => FsPath::new(&rel).to_path_buf(),
            };
            let text = std::fs::read_to_string(&file)?;
            let g = crate::graph::io::parse_edge_list(&text)?;
            let desc = FamilyDescriptor {
                name: "finite".into(),
                params: rel,
                asserted_irreducible: g.is_irreducible(),
                asserted_locally_finite: true,
                known_entropies: None,
            };
            (GraphSource::Finite(g), desc)
        }
        other => return Err(FamilyError::UnknownFamily(other.to_string())),
    };

    if let Some(label) = spec.label {
        desc.name = label;
    }
    Ok((source, desc))
}
