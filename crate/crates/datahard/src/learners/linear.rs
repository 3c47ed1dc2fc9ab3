use crate::data::Dataset;

/// A fitted linear decision function `w·x + b`.
#[derive(Debug, Clone)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn decision(&self, row: &[f64]) -> f64 {
        self.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>() + self.bias
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        u8::from(self.decision(row) > 0.0)
    }
}

const EPOCHS_DEFAULT: usize = 200;
const LAMBDA_DEFAULT: f64 = 1e-4;

fn learning_rate(epoch: usize) -> f64 {
    0.5 / (1.0 + 0.05 * epoch as f64)
}

/// Deterministic full-batch gradient descent on L2-regularized logistic
/// loss, starting from zero weights. The bias is not regularized.
pub fn train_logistic(train: &Dataset, epochs: usize, lambda: f64) -> LinearModel {
    train_batch(train, epochs, lambda, |margin| {
        // d/dz log(1 + e^{-z}) = -1 / (1 + e^{z})
        -1.0 / (1.0 + margin.exp())
    })
}

/// Deterministic full-batch subgradient descent on L2-regularized hinge
/// loss (a linear soft-margin SVM), starting from zero weights.
pub fn train_linear_svm(train: &Dataset, epochs: usize, lambda: f64) -> LinearModel {
    train_batch(train, epochs, lambda, |margin| {
        if margin < 1.0 {
            -1.0
        } else {
            0.0
        }
    })
}

pub fn train_logistic_default(train: &Dataset) -> LinearModel {
    train_logistic(train, EPOCHS_DEFAULT, LAMBDA_DEFAULT)
}

pub fn train_linear_svm_default(train: &Dataset) -> LinearModel {
    train_linear_svm(train, EPOCHS_DEFAULT, LAMBDA_DEFAULT)
}

/// Shared loop: `dloss(margin)` is dL/d(margin) for margin = y±·(w·x+b).
fn train_batch(
    train: &Dataset,
    epochs: usize,
    lambda: f64,
    dloss: impl Fn(f64) -> f64,
) -> LinearModel {
    let (n, m) = (train.n_instances(), train.n_features());
    let mut model = LinearModel {
        weights: vec![0.0; m],
        bias: 0.0,
    };
    let inv_n = 1.0 / n as f64;
    for epoch in 0..epochs {
        let mut grad_w = vec![0.0; m];
        let mut grad_b = 0.0;
        for i in 0..n {
            let row = train.row(i);
            let y = if train.label(i) == 1 { 1.0 } else { -1.0 };
            let g = dloss(y * model.decision(row)) * y * inv_n;
            if g != 0.0 {
                for (gw, &x) in grad_w.iter_mut().zip(row) {
                    *gw += g * x;
                }
                grad_b += g;
            }
        }
        let lr = learning_rate(epoch);
        for (w, gw) in model.weights.iter_mut().zip(&grad_w) {
            *w -= lr * (gw + lambda * *w);
        }
        model.bias -= lr * grad_b;
    }
    model
}
