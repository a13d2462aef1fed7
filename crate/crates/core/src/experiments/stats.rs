//! Small statistics helpers for survival curves.

/// Weighted least-squares fit of a nonincreasing sequence (pool adjacent
/// violators). Entries with zero weight are left out of the fit and come
/// back as NaN.
pub fn isotonic_decreasing(values: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(values.len(), weights.len());
    // blocks of (weighted mean, weight, count)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::new();
    let idx: Vec<usize> = (0..values.len()).filter(|&i| weights[i] > 0.0).collect();
    for &i in &idx {
        blocks.push((values[i], weights[i], 1));
        while blocks.len() > 1 {
            let (m2, w2, c2) = blocks[blocks.len() - 1];
            let (m1, w1, c1) = blocks[blocks.len() - 2];
            if m1 >= m2 {
                break;
            }
            blocks.pop();
            let w = w1 + w2;
            *blocks.last_mut().unwrap() = ((m1 * w1 + m2 * w2) / w, w, c1 + c2);
        }
    }
    let mut out = vec![f64::NAN; values.len()];
    let mut it = idx.iter();
    for (m, _, c) in blocks {
        for _ in 0..c {
            out[*it.next().unwrap()] = m;
        }
    }
    out
}

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// First `x` where the nonincreasing curve `(xs, ys)` drops below `level`,
/// linearly interpolated. `None` when the curve starts below `level` or never
/// drops below it. NaN entries are skipped.
pub fn crossing(xs: &[f64], ys: &[f64], level: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| y.is_finite())
        .map(|(&x, &y)| (x, y))
        .collect();
    let j = pts.iter().position(|&(_, y)| y < level)?;
    if j == 0 {
        return None;
    }
    let (x0, y0) = pts[j - 1];
    let (x1, y1) = pts[j];
    Some(x0 + (y0 - level) / (y0 - y1) * (x1 - x0))
}

/// Ordinary least squares `y = slope·x + intercept`; `None` with fewer than
/// two distinct `x`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Empirical quantile by linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}
