use super::{state_of, ExactError, GeneratorMatrix};
use crate::harris::SpinConfig;

/// Poisson tail mass left out of the uniformization series.
const TAIL: f64 = 1e-12;

/// Law of `eta_t` started from the configuration `eta0`.
pub fn transient_distribution(q: &GeneratorMatrix, eta0: &SpinConfig, t: f64) -> Result<Vec<f64>, ExactError> {
    if eta0.len() != q.vertex_count() {
        return Err(ExactError::LengthMismatch { got: eta0.len(), expected: q.vertex_count() });
    }
    let mut p0 = vec![0.0; q.dimension()];
    p0[state_of(eta0) as usize] = 1.0;
    transient_from(q, &p0, t)
}

/// `p0 exp(tQ)` by uniformization with rate `max exit rate + 1`.
pub fn transient_from(q: &GeneratorMatrix, p0: &[f64], t: f64) -> Result<Vec<f64>, ExactError> {
    if !(t >= 0.0) {
        return Err(ExactError::NegativeTime(t));
    }
    let total: f64 = p0.iter().sum();
    if p0.len() != q.dimension() || p0.iter().any(|&p| p < 0.0) || (total - 1.0).abs() > 1e-9 {
        return Err(ExactError::NotADistribution(q.dimension()));
    }
    if t == 0.0 {
        return Ok(p0.to_vec());
    }
    let lambda = q.max_exit_rate() + 1.0;
    let mean = lambda * t;
    let mut term = p0.to_vec();
    let mut out = vec![0.0; p0.len()];
    let mut log_weight = -mean;
    let mut covered = 0.0;
    let mut k = 0u64;
    loop {
        let w = log_weight.exp();
        if w > 0.0 {
            out.iter_mut().zip(&term).for_each(|(o, v)| *o += w * v);
        }
        covered += w;
        if k as f64 > mean && 1.0 - covered < TAIL {
            break;
        }
        // term <- term (I + Q / lambda)
        let step = q.left_multiply(&term);
        term.iter_mut().zip(&step).for_each(|(v, s)| *v += s / lambda);
        k += 1;
        log_weight += mean.ln() - (k as f64).ln();
    }
    Ok(out)
}

/// `(1/2) sum |p - q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
