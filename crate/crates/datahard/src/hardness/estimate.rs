use crate::data::{
    apply_normalizer, fit_normalizer, stratified_folds, Dataset, EvaluationPlan, NormKind,
};
use crate::error::{Error, Result};
use crate::hardness::context::MeasureContext;
use crate::hardness::measures::{instance_measures, InstanceMeasureRow};
use crate::learners::{fit, mcc, LearnerSpec, PredictionRecord};
use crate::preprocess::{
    resample, select_features, FeatureSelectSpec, ResampleMethod, ResampleSpec, SelectMethod,
};
use crate::rng::{derive, derived_rng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Default neighborhood size for the measure context.
pub const DEFAULT_K: usize = 5;

/// Every test-time prediction made while cross-validating a pool, plus the
/// bookkeeping needed to aggregate them.
#[derive(Debug, Clone)]
pub struct PoolEvaluation {
    pub records: Vec<PredictionRecord>,
    /// Column names for the per-learner breakdown, deduplicated.
    pub learners: Vec<String>,
    pub n_instances: usize,
    pub repeats: usize,
    pub folds: usize,
    /// Per-learner fit failures that did not sink a whole fold.
    pub warnings: Vec<String>,
}

/// Run the pool through repeated stratified cross-validation with the
/// baseline per-fold pipeline: standard normalization, correlation-based
/// feature selection, then SMOTE on the training side only. Every learner
/// sees the same prepared folds. A learner that fails to fit is recorded
/// and skipped; a fold where every learner fails is an error.
pub fn evaluate_pool(
    data: &Dataset,
    pool: &[LearnerSpec],
    plan: &EvaluationPlan,
) -> Result<PoolEvaluation> {
    if pool.is_empty() {
        return Err(Error::InvalidArgument("empty learner pool".into()));
    }
    if plan.repeats < 1 {
        return Err(Error::InvalidArgument("plan needs at least one repeat".into()));
    }
    data.require_both_classes()?;

    // Fold assignment per repeat, derived so each repeat reshuffles.
    let mut jobs = Vec::new();
    for r in 0..plan.repeats {
        let mut rng = derived_rng(plan.seed, "cv-repeat", &[r as u64]);
        let folds = stratified_folds(data, plan.folds, &mut rng)?;
        for f in 0..plan.folds {
            let test: Vec<usize> = folds[f].clone();
            let train: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .flat_map(|(_, members)| members.iter().copied())
                .collect();
            jobs.push((r, f, train, test));
        }
    }

    let outcomes: Result<Vec<_>> = jobs
        .into_par_iter()
        .map(|(r, f, train_idx, test_idx)| run_fold(data, pool, plan, r, f, &train_idx, &test_idx))
        .collect();
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for (fold_records, fold_warnings) in outcomes? {
        records.extend(fold_records);
        warnings.extend(fold_warnings);
    }
    Ok(PoolEvaluation {
        records,
        learners: learner_column_names(pool),
        n_instances: data.n_instances(),
        repeats: plan.repeats,
        folds: plan.folds,
        warnings,
    })
}

/// Prepare one fold's data, fit every learner, and predict its test rows.
fn run_fold(
    data: &Dataset,
    pool: &[LearnerSpec],
    plan: &EvaluationPlan,
    r: usize,
    f: usize,
    train_idx: &[usize],
    test_idx: &[usize],
) -> Result<(Vec<PredictionRecord>, Vec<String>)> {
    let fold_err = |reason: String| Error::FoldFailed {
        repeat: r,
        fold: f,
        reason,
    };
    let stage = format!("{}-r{r}f{f}", data.id());
    let prepared = (|| -> Result<(Dataset, Dataset)> {
        let train = data.subset(train_idx, format!("{stage}-train"))?;
        let test = data.subset(test_idx, format!("{stage}-test"))?;
        let norm = fit_normalizer(&train, NormKind::Standard);
        let train = apply_normalizer(&norm, &train)?;
        let test = apply_normalizer(&norm, &test)?;
        let selection = select_features(
            &train,
            &FeatureSelectSpec::new(SelectMethod::Cfs, derive(plan.seed, "cv-cfs", &[r as u64, f as u64])),
        )?;
        let test = test.select_features(&selection.kept, format!("{stage}-test"))?;
        let balanced = resample(
            &selection.data,
            &ResampleSpec {
                method: ResampleMethod::Smote,
                k: 5,
                seed: derive(plan.seed, "cv-smote", &[r as u64, f as u64]),
                target_ratio: 1.0,
            },
        )?;
        Ok((balanced.data, test))
    })()
    .map_err(|e| fold_err(format!("pipeline: {e}")))?;
    let (train, test) = prepared;

    let mut records = Vec::new();
    let mut warnings = Vec::new();
    let mut fitted_any = false;
    let mut last_failure = String::new();
    for (j, spec) in pool.iter().enumerate() {
        let predictions = fit(spec, &train).and_then(|model| model.predict_dataset(&test));
        match predictions {
            Ok(predicted) => {
                fitted_any = true;
                for (pos, &i) in test_idx.iter().enumerate() {
                    records.push(PredictionRecord {
                        instance: i,
                        repeat: r,
                        fold: f,
                        learner: j,
                        predicted: predicted[pos],
                        actual: data.label(i),
                    });
                }
            }
            Err(e) => {
                last_failure = e.to_string();
                warnings.push(format!(
                    "repeat {r} fold {f}: {} failed: {e}",
                    spec.algorithm.name()
                ));
            }
        }
    }
    if !fitted_any {
        return Err(fold_err(format!("every learner failed; last: {last_failure}")));
    }
    Ok((records, warnings))
}

/// Display names for the pool's report columns; repeated algorithms get a
/// positional suffix so the columns stay distinct.
fn learner_column_names(pool: &[LearnerSpec]) -> Vec<String> {
    let mut seen = std::collections::HashMap::new();
    pool.iter()
        .map(|spec| {
            let base = spec.algorithm.name().to_string();
            let n = seen.entry(base.clone()).or_insert(0usize);
            *n += 1;
            if *n == 1 {
                base
            } else {
                format!("{base}_{n}")
            }
        })
        .collect()
}

/// One instance's slice of a hardness report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceHardness {
    pub index: usize,
    pub label: u8,
    /// Fraction of (repeat × learner) test-time predictions that were wrong.
    pub ih: f64,
    pub measures: InstanceMeasureRow,
    /// Per-learner misclassification fraction, pool order.
    pub learner_ih: Vec<f64>,
}

/// Instance hardness for a whole dataset: the cross-validated estimate,
/// the fifteen structural measures, and the per-learner breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessReport {
    pub dataset_id: String,
    pub learners: Vec<String>,
    pub instances: Vec<InstanceHardness>,
}

impl HardnessReport {
    /// CSV with one row per instance: index, true label, ih, the fifteen
    /// measures, then one `ih_<learner>` column per pool member.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("index,label,ih");
        for name in crate::hardness::measures::MEASURE_NAMES {
            out.push(',');
            out.push_str(name);
        }
        for learner in &self.learners {
            let _ = write!(out, ",ih_{learner}");
        }
        out.push('\n');
        for row in &self.instances {
            let _ = write!(out, "{},{},{}", row.index, row.label, row.ih);
            for v in row.measures.values() {
                let _ = write!(out, ",{v}");
            }
            for v in &row.learner_ih {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidArgument(format!("report serialization: {e}")))
    }
}

/// Estimate instance hardness over the pool and attach the structural
/// measures (neighborhood size `k`). The plan's seed drives fold shuffles,
/// pipeline resampling, and the measure context's pruning split alike.
pub fn estimate_ih(
    data: &Dataset,
    pool: &[LearnerSpec],
    plan: &EvaluationPlan,
    k: usize,
) -> Result<HardnessReport> {
    let evaluation = evaluate_pool(data, pool, plan)?;
    report_from_evaluation(data, &evaluation, k, plan.seed)
}

/// Build the per-instance report from an already-run pool evaluation,
/// so one evaluation can feed both the report and [`idsh_from_records`].
pub fn report_from_evaluation(
    data: &Dataset,
    evaluation: &PoolEvaluation,
    k: usize,
    seed: u64,
) -> Result<HardnessReport> {
    let ctx = MeasureContext::build(data, k, seed)?;
    let measures = instance_measures(data, &ctx)?;
    Ok(assemble_report(data, evaluation, measures))
}

fn assemble_report(
    data: &Dataset,
    evaluation: &PoolEvaluation,
    measures: Vec<InstanceMeasureRow>,
) -> HardnessReport {
    let n = data.n_instances();
    let p = evaluation.learners.len();
    // wrong / total per instance and per (instance, learner); totals track
    // actual predictions so a skipped learner shrinks the denominator
    // instead of counting as correct.
    let mut wrong = vec![0usize; n];
    let mut total = vec![0usize; n];
    let mut wrong_l = vec![vec![0usize; p]; n];
    let mut total_l = vec![vec![0usize; p]; n];
    for rec in &evaluation.records {
        total[rec.instance] += 1;
        total_l[rec.instance][rec.learner] += 1;
        if rec.predicted != rec.actual {
            wrong[rec.instance] += 1;
            wrong_l[rec.instance][rec.learner] += 1;
        }
    }
    let ratio = |w: usize, t: usize| if t == 0 { 0.0 } else { w as f64 / t as f64 };
    let instances = (0..n)
        .map(|i| InstanceHardness {
            index: i,
            label: data.label(i),
            ih: ratio(wrong[i], total[i]),
            measures: measures[i],
            learner_ih: (0..p).map(|j| ratio(wrong_l[i][j], total_l[i][j])).collect(),
        })
        .collect();
    HardnessReport {
        dataset_id: data.id().to_string(),
        learners: evaluation.learners.clone(),
        instances,
    }
}

/// DataSet Hardness: the mean instance hardness.
pub fn dsh(report: &HardnessReport) -> Result<f64> {
    if report.instances.is_empty() {
        return Err(Error::InvalidArgument("empty hardness report".into()));
    }
    Ok(report.instances.iter().map(|r| r.ih).sum::<f64>() / report.instances.len() as f64)
}

/// Imbalanced DataSet Hardness: one minus the pool-mean MCC, where each
/// learner's MCC is pooled over the test folds within a repeat and then
/// averaged across repeats.
pub fn idsh(data: &Dataset, pool: &[LearnerSpec], plan: &EvaluationPlan) -> Result<f64> {
    idsh_from_records(&evaluate_pool(data, pool, plan)?)
}

pub fn idsh_from_records(evaluation: &PoolEvaluation) -> Result<f64> {
    let p = evaluation.learners.len();
    if p == 0 {
        return Err(Error::InvalidArgument("empty learner pool".into()));
    }
    let mut pool_mean = 0.0;
    for j in 0..p {
        let mut repeat_sum = 0.0;
        let mut repeats_seen = 0;
        for r in 0..evaluation.repeats {
            let mut actual = Vec::new();
            let mut predicted = Vec::new();
            for rec in &evaluation.records {
                if rec.learner == j && rec.repeat == r {
                    actual.push(rec.actual);
                    predicted.push(rec.predicted);
                }
            }
            if actual.is_empty() {
                continue; // learner failed every fold of this repeat
            }
            repeat_sum += mcc(&actual, &predicted)?;
            repeats_seen += 1;
        }
        if repeats_seen > 0 {
            pool_mean += repeat_sum / repeats_seen as f64;
        }
        // A learner with no successful repeat contributes MCC 0.
    }
    Ok(1.0 - pool_mean / p as f64)
}
