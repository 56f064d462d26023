//! Small least-squares fits used to summarise sweeps.

use nalgebra::{DMatrix, DVector};

/// Coefficients `(a, b, c)` of `f(x) = 1 + a x + b x² + c x³` minimising the
/// squared error to `(xs, ys)`.  Needs at least three distinct nonzero
/// abscissae.
pub fn fit_perturbation_cubic(xs: &[f64], ys: &[f64]) -> Option<[f64; 3]> {
    let mut distinct: Vec<f64> = xs.iter().copied().filter(|&x| x != 0.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 || xs.len() != ys.len() {
        return None;
    }
    let a = DMatrix::from_fn(xs.len(), 3, |i, j| xs[i].powi(j as i32 + 1));
    let b = DVector::from_iterator(ys.len(), ys.iter().map(|y| y - 1.0));
    let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
    Some([sol[0], sol[1], sol[2]])
}

/// Line shape `amplitude / (1 + ((x − center)/width)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lorentzian {
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
    /// Root-mean-square relative residual of the fit over the data.
    pub relative_rms: f64,
}

impl Lorentzian {
    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude / (1.0 + ((x - self.center) / self.width).powi(2))
    }
}

/// Fit a Lorentzian through the positive samples: its reciprocal is a
/// quadratic in `x`, fitted linearly.  `None` if fewer than three positive
/// samples remain or the quadratic does not open upwards.
pub fn fit_lorentzian(xs: &[f64], ys: &[f64]) -> Option<Lorentzian> {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).filter(|(_, &y)| y > 0.0).map(|(&x, &y)| (x, y)).collect();
    if pts.len() < 3 {
        return None;
    }
    // Weight by y² so the fit minimises relative error in y, not in 1/y.
    let a = DMatrix::from_fn(pts.len(), 3, |i, j| pts[i].0.powi(j as i32) * pts[i].1);
    let b = DVector::from_iterator(pts.len(), pts.iter().map(|_| 1.0));
    let q = a.svd(true, true).solve(&b, 1e-14).ok()?;
    let (alpha, beta, delta) = (q[0], q[1], q[2]);
    if !(delta > 0.0) {
        return None;
    }
    let center = -beta / (2.0 * delta);
    let inv_amp = alpha - beta * beta / (4.0 * delta);
    if !(inv_amp > 0.0) {
        return None;
    }
    let amplitude = 1.0 / inv_amp;
    let width = (inv_amp / delta).sqrt();
    let mut fit = Lorentzian { amplitude, center, width, relative_rms: 0.0 };
    let ss: f64 = pts.iter().map(|&(x, y)| ((fit.eval(x) - y) / y).powi(2)).sum();
    fit.relative_rms = (ss / pts.len() as f64).sqrt();
    Some(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cubic_recovers_its_generator() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.05).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 + 0.02 * x - 1.6 * x * x + 1.6 * x * x * x).collect();
        let [a, b, c] = fit_perturbation_cubic(&xs, &ys).unwrap();
        assert_abs_diff_eq!(a, 0.02, epsilon = 1e-9);
        assert_abs_diff_eq!(b, -1.6, epsilon = 1e-9);
        assert_abs_diff_eq!(c, 1.6, epsilon = 1e-9);
        assert!(fit_perturbation_cubic(&[0.0, 0.1, 0.2], &[1.0, 0.9, 0.8]).is_none());
    }

    #[test]
    fn lorentzian_recovers_its_generator() {
        let truth = Lorentzian { amplitude: 0.3, center: 1.1, width: 0.4, relative_rms: 0.0 };
        let xs: Vec<f64> = (0..30).map(|i| 1.0 + i as f64 * 0.07).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| truth.eval(x)).collect();
        let fit = fit_lorentzian(&xs, &ys).unwrap();
        assert_abs_diff_eq!(fit.amplitude, 0.3, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.center, 1.1, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.width, 0.4, epsilon = 1e-9);
        assert!(fit.relative_rms < 1e-9);
    }
}
