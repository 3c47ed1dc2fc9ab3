//! Per-instance hardness: the cross-validated pool estimate (IH) with its
//! dataset aggregates (DSH, IDSH), and the fifteen instance-hardness
//! measures computed from data structure alone.

mod context;
mod estimate;
mod measures;

pub use context::MeasureContext;
pub(crate) use context::prim_mst;
pub use estimate::{
    dsh, estimate_ih, evaluate_pool, idsh, idsh_from_records, HardnessReport, InstanceHardness,
    PoolEvaluation, DEFAULT_K,
};
pub use measures::{
    balance_measures, feature_overlap_measure, instance_measures, likelihood_measures,
    neighborhood_measures, tree_measures, BalanceMeasures, InstanceMeasureRow,
    NeighborhoodMeasures, TreeMeasures, MEASURE_NAMES,
};
