use crate::data::Dataset;
use crate::rng::Rng;
use rand::Rng as _;

/// One-hidden-layer perceptron: tanh hidden units, sigmoid output,
/// trained by seeded mini-batch gradient descent on cross-entropy.
#[derive(Debug, Clone)]
pub struct MlpState {
    /// hidden × input
    w1: Vec<Vec<f64>>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: f64,
}

pub struct MlpConfig {
    pub hidden: usize,
    pub epochs: usize,
    pub batch: usize,
    pub learning_rate: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden: 10,
            epochs: 200,
            batch: 32,
            learning_rate: 0.1,
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl MlpState {
    pub fn fit(train: &Dataset, config: &MlpConfig, rng: &mut Rng) -> Self {
        let (n, m) = (train.n_instances(), train.n_features());
        let h = config.hidden;
        // Xavier-uniform initialization, drawn in a fixed order.
        let lim1 = (6.0 / (m + h) as f64).sqrt();
        let lim2 = (6.0 / (h + 1) as f64).sqrt();
        let mut state = MlpState {
            w1: (0..h)
                .map(|_| (0..m).map(|_| rng.gen_range(-lim1..lim1)).collect())
                .collect(),
            b1: vec![0.0; h],
            w2: (0..h).map(|_| rng.gen_range(-lim2..lim2)).collect(),
            b2: 0.0,
        };

        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..config.epochs {
            for k in (1..n).rev() {
                let j = rng.gen_range(0..=k);
                order.swap(k, j);
            }
            for batch in order.chunks(config.batch) {
                state.step(train, batch, config.learning_rate);
            }
        }
        state
    }

    fn step(&mut self, train: &Dataset, batch: &[usize], lr: f64) {
        let h = self.b1.len();
        let m = self.w1[0].len();
        let scale = 1.0 / batch.len() as f64;
        let mut g_w1 = vec![vec![0.0; m]; h];
        let mut g_b1 = vec![0.0; h];
        let mut g_w2 = vec![0.0; h];
        let mut g_b2 = 0.0;
        for &i in batch {
            let row = train.row(i);
            let (hidden, out) = self.forward(row);
            // Sigmoid + cross-entropy: d(loss)/d(z_out) = out − y.
            let delta_out = out - f64::from(train.label(i));
            for (j, &a) in hidden.iter().enumerate() {
                g_w2[j] += delta_out * a;
                let delta_h = delta_out * self.w2[j] * (1.0 - a * a);
                for (gw, &x) in g_w1[j].iter_mut().zip(row) {
                    *gw += delta_h * x;
                }
                g_b1[j] += delta_h;
            }
            g_b2 += delta_out;
        }
        for j in 0..h {
            for (w, g) in self.w1[j].iter_mut().zip(&g_w1[j]) {
                *w -= lr * scale * g;
            }
            self.b1[j] -= lr * scale * g_b1[j];
            self.w2[j] -= lr * scale * g_w2[j];
        }
        self.b2 -= lr * scale * g_b2;
    }

    fn forward(&self, row: &[f64]) -> (Vec<f64>, f64) {
        let hidden: Vec<f64> = self
            .w1
            .iter()
            .zip(&self.b1)
            .map(|(w, b)| (w.iter().zip(row).map(|(w, x)| w * x).sum::<f64>() + b).tanh())
            .collect();
        let z = self.w2.iter().zip(&hidden).map(|(w, a)| w * a).sum::<f64>() + self.b2;
        (hidden, sigmoid(z))
    }

    pub fn predict_row(&self, row: &[f64]) -> u8 {
        u8::from(self.forward(row).1 >= 0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng;

    #[test]
    fn learns_xor() {
        let d = Dataset::from_rows(
            &[vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]],
            &[0, 1, 1, 0],
            "xor",
        )
        .unwrap();
        let config = MlpConfig {
            epochs: 2000,
            ..Default::default()
        };
        let mlp = MlpState::fit(&d, &config, &mut rng(3));
        let correct = (0..4)
            .filter(|&i| mlp.predict_row(d.row(i)) == d.label(i))
            .count();
        assert_eq!(correct, 4);
    }

    #[test]
    fn seeded_training_reproduces() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![(i % 7) as f64, (i % 5) as f64]).collect();
        let labels: Vec<u8> = (0..30).map(|i| u8::from(i % 3 == 0)).collect();
        let d = Dataset::from_rows(&rows, &labels, "t").unwrap();
        let a = MlpState::fit(&d, &MlpConfig::default(), &mut rng(9));
        let b = MlpState::fit(&d, &MlpConfig::default(), &mut rng(9));
        for i in 0..30 {
            assert_eq!(a.predict_row(d.row(i)), b.predict_row(d.row(i)));
        }
        assert_eq!(a.w1, b.w1);
    }
}
