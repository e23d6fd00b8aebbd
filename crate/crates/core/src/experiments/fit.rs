use crate::error::{Error, Result};
use crate::scalar::Real;

/// Least-squares fit of `log(rmse) = intercept + slope * log(dt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Sample standard deviation of the slopes fitted to each batch
    /// (±1 sd, not a confidence interval). Zero with fewer than two batches.
    pub slope_stderr: T,
    /// `exp(intercept)`.
    pub error_constant: T,
    /// Number of `(dt, rmse)` points that survived the zero filter.
    pub points: usize,
}

/// Ordinary least squares `y = intercept + slope * x`; needs two distinct `x`.
pub(crate) fn least_squares<T: Real>(xs: &[T], ys: &[T]) -> Result<(T, T)> {
    debug_assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return Err(Error::Fit(format!("need at least 2 points, have {}", xs.len())));
    }
    let n = T::from_count(xs.len());
    let mean_x = xs.iter().copied().sum::<T>() / n;
    let mean_y = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|&x| (x - mean_x) * (x - mean_x)).sum();
    let sxy: T = xs.iter().zip(ys).map(|(&x, &y)| (x - mean_x) * (y - mean_y)).sum();
    if !(sxx > T::zero()) {
        return Err(Error::Fit("step sizes are not distinct".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, mean_y - slope * mean_x))
}

fn log_points<T: Real>(dts: &[T], rmses: impl Iterator<Item = T>) -> (Vec<T>, Vec<T>) {
    dts.iter().zip(rmses).filter(|(_, r)| *r > T::zero()).map(|(&dt, r)| (dt.ln(), r.ln())).unzip()
}

/// Fits the pooled RMSEs and, for error bars, each batch separately.
///
/// `batch_rmses[i]` holds the per-batch RMSEs at `dts[i]`. Points with zero
/// RMSE are dropped; batches whose fit fails do not contribute to the spread.
pub fn fit_rate<T: Real>(dts: &[T], rmses: &[T], batch_rmses: &[Vec<T>]) -> Result<RateFit<T>> {
    if dts.len() != rmses.len() || (!batch_rmses.is_empty() && batch_rmses.len() != dts.len()) {
        return Err(Error::Fit("dt, rmse and batch tables differ in length".into()));
    }
    if dts.iter().any(|&dt| !(dt > T::zero())) {
        return Err(Error::Fit("step sizes must be positive".into()));
    }
    let (xs, ys) = log_points(dts, rmses.iter().copied());
    let (slope, intercept) = least_squares(&xs, &ys)?;

    let batches = batch_rmses.first().map_or(0, Vec::len);
    let slopes: Vec<T> = (0..batches)
        .filter_map(|b| {
            let (bx, by) = log_points(dts, batch_rmses.iter().map(|row| row[b]));
            least_squares(&bx, &by).ok().map(|(s, _)| s)
        })
        .collect();
    let slope_stderr = if slopes.len() < 2 {
        T::zero()
    } else {
        let k = T::from_count(slopes.len());
        let mean = slopes.iter().copied().sum::<T>() / k;
        (slopes.iter().map(|&s| (s - mean) * (s - mean)).sum::<T>() / (k - T::one())).sqrt()
    };
    Ok(RateFit { slope, intercept, slope_stderr, error_constant: intercept.exp(), points: xs.len() })
}

/// The constant `C` of `rmse ~ C dt^slope` from an unconstrained fit.
pub fn estimate_error_constant<T: Real>(fit: &RateFit<T>) -> T {
    fit.intercept.exp()
}
