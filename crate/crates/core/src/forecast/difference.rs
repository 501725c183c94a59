use std::ops::{Add, Sub};

use super::ForecastError;

/// Applies `(1 - B)^d`. Returns the differenced series and the first value
/// of each intermediate level, which [`integrate`] needs to undo it.
pub fn difference<T>(series: &[T], d: usize) -> Result<(Vec<T>, Vec<T>), ForecastError>
where
    T: Copy + Sub<Output = T>,
{
    if series.len() <= d {
        return Err(ForecastError::SeriesTooShort { needed: d + 1, got: series.len() });
    }
    let mut level = series.to_vec();
    let mut initials = Vec::with_capacity(d);
    for _ in 0..d {
        initials.push(level[0]);
        level = level.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok((level, initials))
}

/// Inverse of [`difference`]: cumulative sums seeded with `initials`,
/// innermost level first. Exact for integers.
pub fn integrate<T>(differenced: &[T], initials: &[T], d: usize) -> Result<Vec<T>, ForecastError>
where
    T: Copy + Add<Output = T>,
{
    if initials.len() != d {
        return Err(ForecastError::LengthMismatch { expected: d, got: initials.len() });
    }
    let mut level = differenced.to_vec();
    for &start in initials.iter().rev() {
        let mut next = Vec::with_capacity(level.len() + 1);
        let mut acc = start;
        next.push(acc);
        for &v in &level {
            acc = acc + v;
            next.push(acc);
        }
        level = next;
    }
    Ok(level)
}
