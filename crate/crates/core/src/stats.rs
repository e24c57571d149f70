//! Small descriptive statistics used across the metrics.

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard deviation with divisor `n`.
pub fn population_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

/// Whether all values are equal up to `rel_tol` of their magnitude. Used to
/// tell a true zero spread from floating-point residue.
pub fn is_constant(xs: &[f64], rel_tol: f64) -> bool {
    let scale = xs.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    population_std(xs) <= rel_tol * scale
}
