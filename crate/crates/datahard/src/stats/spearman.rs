use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Correlation strength bands over |ρ|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationBand {
    VeryWeak,
    Weak,
    Moderate,
    Strong,
    VeryStrong,
}

impl CorrelationBand {
    pub fn of(rho: f64) -> Self {
        match rho.abs() {
            r if r < 0.2 => CorrelationBand::VeryWeak,
            r if r < 0.4 => CorrelationBand::Weak,
            r if r < 0.6 => CorrelationBand::Moderate,
            r if r < 0.8 => CorrelationBand::Strong,
            _ => CorrelationBand::VeryStrong,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CorrelationBand::VeryWeak => "very weak",
            CorrelationBand::Weak => "weak",
            CorrelationBand::Moderate => "moderate",
            CorrelationBand::Strong => "strong",
            CorrelationBand::VeryStrong => "very strong",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpearmanResult {
    pub rho: f64,
    pub p_value: f64,
    pub n: usize,
    pub band: CorrelationBand,
    /// Set when an input was constant, making ρ undefined (reported as 0).
    pub degenerate: bool,
}

/// Midranks: ranks 1..n with ties sharing their average rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let (mx, my) = (
        x.iter().sum::<f64>() / n,
        y.iter().sum::<f64>() / n,
    );
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / (sxx * syy).sqrt())
    }
}

/// Spearman rank correlation ρ alone; 0 when either input is constant.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(spearman(x, y)?.rho)
}

/// Spearman rank correlation with a two-sided p-value from the Student-t
/// approximation t = ρ√((n−2)/(1−ρ²)). |ρ| = 1 gives p = 0; a constant
/// input gives ρ = 0, p = 1, and the degeneracy flag.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<SpearmanResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "correlation needs at least 2 observations".into(),
        ));
    }
    let rho = pearson(&midranks(x), &midranks(y));
    let (rho, degenerate) = match rho {
        Some(r) => (r.clamp(-1.0, 1.0), false),
        None => (0.0, true),
    };
    let p_value = if degenerate {
        1.0
    } else if rho.abs() >= 1.0 - 1e-12 {
        0.0
    } else if n <= 2 {
        1.0
    } else {
        let df = (n - 2) as f64;
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
        2.0 * (1.0 - dist.cdf(t.abs()))
    };
    Ok(SpearmanResult {
        rho,
        p_value,
        n,
        band: CorrelationBand::of(rho),
        degenerate,
    })
}
