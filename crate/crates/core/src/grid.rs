//! Uniform periodic momentum grids and the spectral derivative on them.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// `n` points p_k = −p_max + 2·p_max·k/n, periodic with period 2·p_max.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec1D {
    n: usize,
    p_max: f64,
}

impl GridSpec1D {
    pub fn new(n: usize, p_max: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two ≥ 8, got {n}"
            )));
        }
        if !(p_max.is_finite() && p_max > 0.0) {
            return Err(Error::InvalidGrid(format!("p_max must be > 0, got {p_max}")));
        }
        Ok(Self { n, p_max })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.p_max / self.n as f64
    }

    pub fn period(&self) -> f64 {
        2.0 * self.p_max
    }

    pub fn point(&self, k: usize) -> f64 {
        -self.p_max + 2.0 * self.p_max * k as f64 / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    /// Index range covering the central 80% of the points.
    pub fn interior(&self) -> std::ops::Range<usize> {
        let skip = self.n / 10;
        skip..self.n - skip
    }

    /// Same grid with twice the points.
    pub fn refined(&self) -> Self {
        Self {
            n: self.n * 2,
            p_max: self.p_max,
        }
    }

    /// Angular wavenumbers conjugate to p in FFT order, Nyquist mode zeroed.
    fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        let base = std::f64::consts::TAU / self.period();
        (0..n)
            .map(|j| {
                if j == n / 2 {
                    0.0
                } else if j < n / 2 {
                    base * j as f64
                } else {
                    base * (j - n) as f64
                }
            })
            .collect()
    }
}

/// First-derivative operator on a periodic grid via the FFT.
///
/// Plans are built once; the operator can be reused across many inputs of
/// the grid's size.
#[derive(Clone)]
pub struct SpectralDerivative {
    grid: GridSpec1D,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    multipliers: Vec<Complex64>,
}

impl SpectralDerivative {
    pub fn new(grid: GridSpec1D) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n();
        let norm = 1.0 / n as f64;
        let multipliers = grid
            .wavenumbers()
            .into_iter()
            .map(|k| Complex64::new(0.0, k * norm))
            .collect();
        Self {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            multipliers,
        }
    }

    pub fn grid(&self) -> &GridSpec1D {
        &self.grid
    }

    /// Differentiates `values` in place.
    pub fn apply_in_place(&self, values: &mut [Complex64]) -> Result<()> {
        if values.len() != self.grid.n() {
            return Err(Error::InvalidGrid(format!(
                "function has {} samples, grid has {}",
                values.len(),
                self.grid.n()
            )));
        }
        // The grid starts at −p_max rather than 0; that is a pure shift, so
        // the derivative multiplier is unaffected.
        self.forward.process(values);
        for (v, m) in values.iter_mut().zip(&self.multipliers) {
            *v *= m;
        }
        self.inverse.process(values);
        Ok(())
    }

    pub fn apply(&self, values: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = values.to_vec();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }
}

/// Discrete L2 norm over an index range (grid-spacing factor omitted).
pub fn l2_norm(values: &[Complex64], range: std::ops::Range<usize>) -> f64 {
    values[range].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_validation() {
        assert!(GridSpec1D::new(4, 1.0).is_err());
        assert!(GridSpec1D::new(12, 1.0).is_err());
        assert!(GridSpec1D::new(16, 0.0).is_err());
        let g = GridSpec1D::new(16, 2.0).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.point(0), -2.0);
        assert_eq!(g.point(8), 0.0);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let g = GridSpec1D::new(64, 3.0).unwrap();
        let d = SpectralDerivative::new(g);
        let out = d.apply(&vec![Complex64::new(2.5, -1.0); 64]).unwrap();
        assert!(out.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn fundamental_sine_mode_is_exact() {
        let g = GridSpec1D::new(32, 5.0).unwrap();
        let d = SpectralDerivative::new(g);
        let k = 2.0 * PI / g.period();
        let f: Vec<_> = g.points().iter().map(|&p| Complex64::new((k * p).sin(), 0.0)).collect();
        let out = d.apply(&f).unwrap();
        for (p, z) in g.points().iter().zip(&out) {
            assert!((z.re - k * (k * p).cos()).abs() < 1e-14);
            assert!(z.im.abs() < 1e-14);
        }
    }

    #[test]
    fn gaussian_derivative_matches_analytic() {
        let g = GridSpec1D::new(1024, 20.0).unwrap();
        let d = SpectralDerivative::new(g);
        let f: Vec<_> = g.points().iter().map(|&p| Complex64::new((-p * p / 2.0).exp(), 0.0)).collect();
        let out = d.apply(&f).unwrap();
        let err = g
            .points()
            .iter()
            .zip(&out)
            .map(|(&p, z)| (z - Complex64::new(-p * (-p * p / 2.0).exp(), 0.0)).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-8, "max error {err:e}");
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let d = SpectralDerivative::new(GridSpec1D::new(16, 1.0).unwrap());
        assert!(d.apply(&[Complex64::new(0.0, 0.0); 8]).is_err());
    }
}
