//! Dataset-level complexity: six measure families summarizing how
//! tangled a binary classification problem is before any model is fit.

mod balance;
mod dimension;
mod feature;
mod linearity;
mod network;
mod neighborhood;

pub use balance::{balance_dataset_measures, BalanceDatasetMeasures};
pub use dimension::{dimensionality_measures, DimensionalityMeasures};
pub use feature::{feature_measures, FeatureMeasures};
pub use linearity::{linearity_measures, LinearityMeasures};
pub use neighborhood::{neighborhood_dataset_measures, NeighborhoodDatasetMeasures};
pub use network::{network_measures, NetworkMeasures};

use crate::data::Dataset;
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// Column order shared by [`ComplexityProfile::values`], the CSV form,
/// and correlation reports.
pub const COMPLEXITY_NAMES: [&str; 22] = [
    "F1", "F1v", "F2", "F3", "F4", "L1", "L2", "L3", "N1", "N2", "N3", "N4", "T1", "LSC",
    "Density", "ClsCoef", "Hubs", "T2", "T3", "T4", "C1", "C2",
];

/// The full dataset complexity vector. Every measure is oriented so that
/// larger values mean a harder dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    #[serde(rename = "F1")]
    pub f1: f64,
    #[serde(rename = "F1v")]
    pub f1v: f64,
    #[serde(rename = "F2")]
    pub f2: f64,
    #[serde(rename = "F3")]
    pub f3: f64,
    #[serde(rename = "F4")]
    pub f4: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "L3")]
    pub l3: f64,
    #[serde(rename = "N1")]
    pub n1: f64,
    #[serde(rename = "N2")]
    pub n2: f64,
    #[serde(rename = "N3")]
    pub n3: f64,
    #[serde(rename = "N4")]
    pub n4: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "LSC")]
    pub lsc: f64,
    #[serde(rename = "Density")]
    pub density: f64,
    #[serde(rename = "ClsCoef")]
    pub cls_coef: f64,
    #[serde(rename = "Hubs")]
    pub hubs: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "T3")]
    pub t3: f64,
    #[serde(rename = "T4")]
    pub t4: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
}

impl ComplexityProfile {
    /// Measure values in [`COMPLEXITY_NAMES`] order.
    pub fn values(&self) -> [f64; 22] {
        [
            self.f1, self.f1v, self.f2, self.f3, self.f4, self.l1, self.l2, self.l3, self.n1,
            self.n2, self.n3, self.n4, self.t1, self.lsc, self.density, self.cls_coef, self.hubs,
            self.t2, self.t3, self.t4, self.c1, self.c2,
        ]
    }

    /// Header for multi-dataset batch CSVs: `dataset` plus one column
    /// per measure.
    pub fn csv_header() -> String {
        let mut out = String::from("dataset");
        for name in COMPLEXITY_NAMES {
            out.push(',');
            out.push_str(name);
        }
        out
    }

    pub fn csv_row(&self, dataset_id: &str) -> String {
        use std::fmt::Write as _;
        let mut out = String::from(dataset_id);
        for v in self.values() {
            let _ = write!(out, ",{v}");
        }
        out
    }
}

/// Compute all six measure families. The seed drives the interpolated
/// sets behind L3 and N4; everything else is deterministic in the data.
pub fn complexity_profile(data: &Dataset, seed: u64) -> Result<ComplexityProfile> {
    let f = feature_measures(data)?;
    let l = linearity_measures(data, seed)?;
    let nb = neighborhood_dataset_measures(data, seed)?;
    let net = network_measures(data)?;
    let dim = dimensionality_measures(data);
    let bal = balance_dataset_measures(data);
    Ok(ComplexityProfile {
        f1: f.f1,
        f1v: f.f1v,
        f2: f.f2,
        f3: f.f3,
        f4: f.f4,
        l1: l.l1,
        l2: l.l2,
        l3: l.l3,
        n1: nb.n1,
        n2: nb.n2,
        n3: nb.n3,
        n4: nb.n4,
        t1: nb.t1,
        lsc: nb.lsc,
        density: net.density,
        cls_coef: net.cls_coef,
        hubs: net.hubs,
        t2: dim.t2,
        t3: dim.t3,
        t4: dim.t4,
        c1: bal.c1,
        c2: bal.c2,
    })
}
