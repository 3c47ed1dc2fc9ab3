use crate::error::{Error, Result};

/// Matthews correlation coefficient of binary predictions, in [−1, 1].
///
/// If any marginal of the confusion matrix is zero the score is 0, the
/// value a random-guess classifier would earn in expectation.
pub fn mcc(true_labels: &[u8], predicted: &[u8]) -> Result<f64> {
    if true_labels.len() != predicted.len() {
        return Err(Error::LengthMismatch(true_labels.len(), predicted.len()));
    }
    if true_labels.is_empty() {
        return Err(Error::InvalidArgument("mcc of empty sequences".into()));
    }
    let (mut tp, mut tn, mut fp, mut r#fn) = (0f64, 0f64, 0f64, 0f64);
    for (&y, &p) in true_labels.iter().zip(predicted) {
        match (y, p) {
            (1, 1) => tp += 1.0,
            (0, 0) => tn += 1.0,
            (0, 1) => fp += 1.0,
            _ => r#fn += 1.0,
        }
    }
    let denom = (tp + fp) * (tp + r#fn) * (tn + fp) * (tn + r#fn);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((tp * tn - fp * r#fn) / denom.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn perfect_is_one() {
        assert_relative_eq!(mcc(&[0, 1, 0, 1], &[0, 1, 0, 1]).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_predictions_are_zero() {
        assert_relative_eq!(mcc(&[0, 1, 0, 1], &[1, 1, 1, 1]).unwrap(), 0.0);
        assert_relative_eq!(mcc(&[0, 1, 0, 1], &[0, 0, 0, 0]).unwrap(), 0.0);
    }

    #[test]
    fn hand_computed_confusion() {
        // TP=4, TN=3, FP=1, FN=2 → (12−2)/√(5·6·4·5) = 10/√600.
        let y = [1, 1, 1, 1, 1, 1, 0, 0, 0, 0];
        let p = [1, 1, 1, 1, 0, 0, 0, 0, 0, 1];
        assert_relative_eq!(
            mcc(&y, &p).unwrap(),
            10.0 / 600f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn length_mismatch_errors() {
        assert!(mcc(&[0, 1], &[0]).is_err());
    }
}
