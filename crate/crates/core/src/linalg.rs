//! Dense vector helpers over `f64` slices.

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

pub fn sub(u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn add_assign(acc: &mut [f64], v: &[f64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

pub fn axpy(acc: &mut [f64], alpha: f64, v: &[f64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += alpha * b;
    }
}

pub fn scale(u: &[f64], alpha: f64) -> Vec<f64> {
    u.iter().map(|a| a * alpha).collect()
}

/// `u / ‖u‖`, or `None` for the zero vector.
pub fn normalized(u: &[f64]) -> Option<Vec<f64>> {
    let n = norm(u);
    (n > 0.0).then(|| scale(u, 1.0 / n))
}

/// Arithmetic mean of equally sized vectors. Panics on an empty iterator.
pub fn mean<'a, I>(vectors: I) -> Vec<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut it = vectors.into_iter();
    let first = it.next().expect("mean of an empty collection");
    let mut acc = first.to_vec();
    let mut count = 1usize;
    for v in it {
        add_assign(&mut acc, v);
        count += 1;
    }
    let inv = 1.0 / count as f64;
    acc.iter_mut().for_each(|a| *a *= inv);
    acc
}

/// Angle between two nonzero vectors in degrees, folded to `[0, 90]` so that
/// sign-free directions compare equal.
pub fn folded_angle_degrees(u: &[f64], v: &[f64]) -> f64 {
    let c = (dot(u, v) / (norm(u) * norm(v))).abs().min(1.0);
    c.acos().to_degrees()
}
