//! Ordinary least squares helpers shared by the estimators and suites.

/// Least-squares line `y ≈ slope·x + intercept`. `None` for fewer than two
/// points or a degenerate abscissa.
pub fn ols(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..n {
        sxx += (xs[i] - mx).powi(2);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if sxx <= f64::MIN_POSITIVE {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Least-squares slope of a line through the origin.
pub fn ols_through_origin(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    if xs.is_empty() || sxx <= f64::MIN_POSITIVE {
        return None;
    }
    Some(xs.iter().zip(ys).map(|(x, y)| x * y).sum::<f64>() / sxx)
}

/// Number of leading samples dropped as transient (10%).
pub fn transient_len(n: usize) -> usize {
    n / 10
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let (m, b) = ols(&xs, &ys).unwrap();
        assert!((m - 2.5).abs() < 1e-14 && (b + 1.0).abs() < 1e-14);
        assert!((ols_through_origin(&xs, &xs.map(|x| 3.0 * x)).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(ols(&[1.0], &[1.0]).is_none());
        assert!(ols(&[1.0, 1.0], &[0.0, 2.0]).is_none());
        assert!(ols_through_origin(&[], &[]).is_none());
    }
}
