//! Serialization of series, estimates and reports.
//!
//! Reports are deterministic: big integers print in decimal, reals are
//! rounded to 12 significant digits before serialization, and key order is
//! fixed by the struct definitions.

use num_bigint::BigUint;
use serde::Serialize;

use crate::af::AlgebraElement;
use crate::count::CountSeries;
use crate::entropy::{EntropyEstimate, SandwichReport};

/// Round to 12 significant digits; keeps report bytes stable across runs.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor();
    let scale = 10f64.powf(11.0 - mag);
    (x * scale).round() / scale
}

/// CSV form of a count series: `n,count` rows with a header.
pub fn count_series_csv(series: &CountSeries) -> String {
    let mut out = String::from("n,count\n");
    for (n, c) in series.counts.iter().enumerate() {
        out.push_str(&format!("{n},{c}\n"));
    }
    out
}

/// JSON form of a count series; counts are decimal strings to avoid any
/// precision loss in consumers.
#[derive(Debug, Serialize)]
pub struct CountSeriesJson {
    pub vertex: String,
    pub class: String,
    pub counts: Vec<String>,
}

impl CountSeriesJson {
    pub fn new(series: &CountSeries, vertex_label: String) -> Self {
        CountSeriesJson {
            vertex: vertex_label,
            class: series.class.name().to_string(),
            counts: series.counts.iter().map(BigUint::to_string).collect(),
        }
    }
}

/// The growth-estimate report schema:
/// `{quantity, value_nats, value_bits, method, stride, n_range, raw, provenance}`.
#[derive(Debug, Serialize)]
pub struct EstimateJson {
    pub quantity: String,
    pub value_nats: f64,
    pub value_bits: f64,
    pub method: String,
    pub stride: Option<usize>,
    pub n_range: (usize, usize),
    pub raw: Vec<(usize, f64)>,
    pub provenance: Option<String>,
}

impl EstimateJson {
    pub fn new(quantity: impl Into<String>, est: &EntropyEstimate, provenance: Option<String>) -> Self {
        EstimateJson {
            quantity: quantity.into(),
            value_nats: round_sig(est.value),
            value_bits: round_sig(est.value / std::f64::consts::LN_2),
            method: est.method.name().to_string(),
            stride: est.stride,
            n_range: est.n_range,
            raw: est.raw.iter().map(|&(n, x)| (n, round_sig(x))).collect(),
            provenance,
        }
    }
}

/// CSV form of the raw growth sequence for external plotting.
pub fn estimate_raw_csv(est: &EntropyEstimate) -> String {
    let mut out = String::from("n,log_count_over_n\n");
    for &(n, x) in &est.raw {
        out.push_str(&format!("{n},{}\n", round_sig(x)));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct SandwichJson {
    pub vertex: String,
    pub n_max: usize,
    pub tolerance: f64,
    pub lower_nats: f64,
    pub upper_nats: f64,
    pub lower_bits: f64,
    pub upper_bits: f64,
    pub exact: bool,
    pub h_l: EstimateJson,
    pub h_b: EstimateJson,
    pub h_b_t: EstimateJson,
    pub provenance: Option<String>,
}

impl SandwichJson {
    pub fn new(rep: &SandwichReport, vertex_label: String, provenance: Option<String>) -> Self {
        SandwichJson {
            vertex: vertex_label,
            n_max: rep.n_max,
            tolerance: rep.tolerance,
            lower_nats: round_sig(rep.lower),
            upper_nats: round_sig(rep.upper),
            lower_bits: round_sig(rep.lower / std::f64::consts::LN_2),
            upper_bits: round_sig(rep.upper / std::f64::consts::LN_2),
            exact: rep.exact,
            h_l: EstimateJson::new("loop entropy", &rep.h_l, None),
            h_b: EstimateJson::new("block entropy", &rep.h_b, None),
            h_b_t: EstimateJson::new("co-block entropy", &rep.h_b_t, None),
            provenance,
        }
    }
}

/// JSON form of an algebra element:
/// `[{alpha: [edge ids], beta: [edge ids], re: "p/q", im: "p/q"}, ...]`.
pub fn algebra_element_json(el: &AlgebraElement) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = el
        .terms()
        .map(|(pair, c)| {
            serde_json::json!({
                "alpha": pair.alpha.edge_ids().iter().map(|e| e.0).collect::<Vec<_>>(),
                "beta": pair.beta.edge_ids().iter().map(|e| e.0).collect::<Vec<_>>(),
                "re": c.re.to_string(),
                "im": c.im.to_string(),
            })
        })
        .collect();
    serde_json::Value::Array(terms)
}

/// Coordinate-list CSV of a sparse matrix with path-string headers.
pub fn sparse_matrix_csv(m: &crate::af::SparseMatrix) -> String {
    let mut out = String::from("row_path,col_path,re,im\n");
    for (&(i, j), c) in m.entries() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            m.basis()[i].display(),
            m.basis()[j].display(),
            c.re,
            c.im
        ));
    }
    out
}
