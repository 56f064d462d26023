//! First-maximum detection on sampled curves.

/// A detected maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Time (or abscissa) of the maximum after quadratic refinement.
    pub time: f64,
    /// Height of the refined maximum of the (smoothed) curve.
    pub value: f64,
    /// Largest raw sample within one smoothing width of the peak.
    pub raw_value: f64,
    /// Index of the discrete maximum.
    pub index: usize,
}

/// Centred moving average: each sample is replaced by the mean of all
/// samples whose abscissa lies within `width/2` of it.  `width ≤ 0` returns
/// the input unchanged.
pub fn moving_average(xs: &[f64], ys: &[f64], width: f64) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len(), "abscissae and values must have equal length");
    if !(width > 0.0) {
        return ys.to_vec();
    }
    let half = 0.5 * width;
    let mut out = Vec::with_capacity(ys.len());
    let (mut lo, mut hi, mut sum) = (0usize, 0usize, 0.0);
    for i in 0..xs.len() {
        while hi < xs.len() && xs[hi] <= xs[i] + half {
            sum += ys[hi];
            hi += 1;
        }
        while xs[lo] < xs[i] - half {
            sum -= ys[lo];
            lo += 1;
        }
        out.push(sum / (hi - lo) as f64);
    }
    out
}

/// First discrete local maximum above `threshold` of the curve smoothed with
/// [`moving_average`] of `width`, refined by the parabola through the three
/// bracketing samples.  `None` means nothing arrived in the window.
pub fn first_maximum(xs: &[f64], ys: &[f64], width: f64, threshold: f64) -> Option<Peak> {
    let s = moving_average(xs, ys, width);
    let i = (1..s.len().saturating_sub(1)).find(|&i| s[i] > threshold && s[i] >= s[i - 1] && s[i] > s[i + 1])?;
    let (time, value) = parabola_vertex([xs[i - 1], xs[i], xs[i + 1]], [s[i - 1], s[i], s[i + 1]]);
    let reach = width.max(xs[i + 1] - xs[i - 1]);
    let raw_value = xs
        .iter()
        .zip(ys)
        .filter(|(&x, _)| (x - time).abs() <= reach)
        .map(|(_, &y)| y)
        .fold(f64::NEG_INFINITY, f64::max);
    Some(Peak { time, value, raw_value, index: i })
}

/// Vertex of the parabola through three points (middle one highest).
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d2 - d1) / (x[2] - x[0]);
    if a >= 0.0 {
        return (x[1], y[1]);
    }
    let b = d1 - a * (x[0] + x[1]);
    let xv = (-b / (2.0 * a)).clamp(x[0], x[2]);
    let yv = y[1] + (xv - x[1]) * (d1 + a * (xv - x[0]));
    (xv, yv.max(y[1]))
}
