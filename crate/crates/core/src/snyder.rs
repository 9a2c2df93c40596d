//! Deformed position operators acting on momentum-space grid functions.
//!
//! In one dimension the position is x̂ = iħ(1 + (a·p/ħ)²)·∂/∂p, with the
//! coefficient to the left of the derivative. In two dimensions
//! x̂_i = iħ(δ_ij + (a/ħ)²·p_i·p_j)·∂/∂p_j. Residuals of the bracket
//! identities are measured on the interior 80% of the grid, where periodic
//! wrap of the spectral derivative is negligible for boundary-safe test
//! functions.

use num_complex::Complex64;

use crate::grid::{l2_norm, GridSpec1D, SpectralDerivative};
use crate::{Error, PhysicalParams, Result};

/// Acceptance bound for the 1-D deformed Heisenberg residual.
pub const HEISENBERG_TOL: f64 = 1e-7;
/// Acceptance bound for the 2-D coordinate and mixed residuals.
pub const COMMUTATOR_2D_TOL: f64 = 1e-6;
/// Required improvement per grid doubling above the floor.
pub const REFINEMENT_FACTOR: f64 = 4.0;
/// Residuals at or below this are treated as converged.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Row-major n×n samples; index `(i, j)` is (p_x = p_i, p_y = p_j).
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction2D {
    n: usize,
    values: Vec<Complex64>,
}

impl GridFunction2D {
    pub fn from_fn(grid: &GridSpec1D, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let pts = grid.points();
        let n = grid.n();
        let mut values = Vec::with_capacity(n * n);
        for &px in &pts {
            for &py in &pts {
                values.push(f(px, py));
            }
        }
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Multiplies pointwise by `w(p_x, p_y)`.
    fn weighted(&self, grid: &GridSpec1D, w: impl Fn(f64, f64) -> Complex64) -> Self {
        let pts = grid.points();
        let n = self.n;
        let mut values = self.values.clone();
        for (i, &px) in pts.iter().enumerate() {
            for (j, &py) in pts.iter().enumerate() {
                values[i * n + j] *= w(px, py);
            }
        }
        Self { n, values }
    }

    fn interior_norm(&self, grid: &GridSpec1D) -> f64 {
        let r = grid.interior();
        let n = self.n;
        r.clone()
            .flat_map(|i| r.clone().map(move |j| i * n + j))
            .map(|k| self.values[k].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

fn check_len(grid: &GridSpec1D, len: usize) -> Result<()> {
    if len != grid.n() {
        return Err(Error::InvalidGrid(format!(
            "function has {len} samples, grid has {}",
            grid.n()
        )));
    }
    Ok(())
}

pub fn spectral_derivative(f: &[Complex64], grid: &GridSpec1D) -> Result<Vec<Complex64>> {
    SpectralDerivative::new(*grid).apply(f)
}

/// ∂f/∂p_x or ∂f/∂p_y on an n×n grid.
pub fn spectral_derivative_2d(
    f: &GridFunction2D,
    grid: &GridSpec1D,
    axis: Axis,
) -> Result<GridFunction2D> {
    check_len(grid, f.n)?;
    let d = SpectralDerivative::new(*grid);
    Ok(derivative_2d(&d, f, axis))
}

fn derivative_2d(d: &SpectralDerivative, f: &GridFunction2D, axis: Axis) -> GridFunction2D {
    let n = f.n;
    let mut values = f.values.clone();
    match axis {
        Axis::Y => {
            for row in values.chunks_mut(n) {
                d.apply_in_place(row).expect("row length equals grid size");
            }
        }
        Axis::X => {
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                for i in 0..n {
                    col[i] = values[i * n + j];
                }
                d.apply_in_place(&mut col).expect("column length equals grid size");
                for i in 0..n {
                    values[i * n + j] = col[i];
                }
            }
        }
    }
    GridFunction2D { n, values }
}

/// 1 + (a·p_k/ħ)² at every grid point. Exactly 1.0 when a = 0.
pub fn deformation_coefficients(grid: &GridSpec1D, params: &PhysicalParams) -> Vec<f64> {
    grid.points()
        .iter()
        .map(|&p| {
            let u = params.a * p / params.hbar;
            1.0 + u * u
        })
        .collect()
}

fn apply_1d(
    d: &SpectralDerivative,
    coeffs: &[f64],
    hbar: f64,
    f: &[Complex64],
) -> Vec<Complex64> {
    let mut out = f.to_vec();
    d.apply_in_place(&mut out).expect("length checked by caller");
    for (z, &c) in out.iter_mut().zip(coeffs) {
        *z *= I * (hbar * c);
    }
    out
}

/// iħ·(1 + (a·p/ħ)²)·∂f/∂p.
pub fn snyder_position_apply_1d(
    f: &[Complex64],
    grid: &GridSpec1D,
    params: &PhysicalParams,
) -> Result<Vec<Complex64>> {
    check_len(grid, f.len())?;
    let d = SpectralDerivative::new(*grid);
    Ok(apply_1d(&d, &deformation_coefficients(grid, params), params.hbar, f))
}

/// Relative residual of [x̂, p] = iħ(1 + (a·p/ħ)²) applied to `f`.
pub fn heisenberg_residual_1d(
    grid: &GridSpec1D,
    params: &PhysicalParams,
    f: &[Complex64],
) -> Result<f64> {
    check_len(grid, f.len())?;
    let d = SpectralDerivative::new(*grid);
    let coeffs = deformation_coefficients(grid, params);
    let pts = grid.points();
    let pf: Vec<Complex64> = f.iter().zip(&pts).map(|(z, &p)| z * p).collect();
    let x_pf = apply_1d(&d, &coeffs, params.hbar, &pf);
    let x_f = apply_1d(&d, &coeffs, params.hbar, f);
    let residual: Vec<Complex64> = (0..grid.n())
        .map(|k| x_pf[k] - pts[k] * x_f[k] - I * (params.hbar * coeffs[k]) * f[k])
        .collect();
    let r = grid.interior();
    Ok(l2_norm(&residual, r.clone()) / l2_norm(f, r))
}

/// iħ·(δ_ij + (a/ħ)²·p_i·p_j)·∂f/∂p_j for i = `axis`.
pub fn snyder_position_apply_2d(
    f: &GridFunction2D,
    grid: &GridSpec1D,
    params: &PhysicalParams,
    axis: Axis,
) -> Result<GridFunction2D> {
    check_len(grid, f.n)?;
    let d = SpectralDerivative::new(*grid);
    let dx = derivative_2d(&d, f, Axis::X);
    let dy = derivative_2d(&d, f, Axis::Y);
    Ok(position_2d(grid, params, axis, &dx, &dy))
}

fn position_2d(
    grid: &GridSpec1D,
    params: &PhysicalParams,
    axis: Axis,
    dx: &GridFunction2D,
    dy: &GridFunction2D,
) -> GridFunction2D {
    let b = (params.a / params.hbar).powi(2);
    let pts = grid.points();
    let n = grid.n();
    let ih = I * params.hbar;
    let mut values = Vec::with_capacity(n * n);
    for (i, &px) in pts.iter().enumerate() {
        for (j, &py) in pts.iter().enumerate() {
            let k = i * n + j;
            let (cx, cy) = match axis {
                Axis::X => (1.0 + b * px * px, b * px * py),
                Axis::Y => (b * px * py, 1.0 + b * py * py),
            };
            values.push(ih * (dx.values[k] * cx + dy.values[k] * cy));
        }
    }
    GridFunction2D { n, values }
}

/// Applies x̂ or ŷ, reusing one set of FFT plans.
struct Position2D<'a> {
    grid: &'a GridSpec1D,
    params: &'a PhysicalParams,
    d: SpectralDerivative,
}

impl Position2D<'_> {
    fn apply(&self, f: &GridFunction2D, axis: Axis) -> GridFunction2D {
        let dx = derivative_2d(&self.d, f, Axis::X);
        let dy = derivative_2d(&self.d, f, Axis::Y);
        position_2d(self.grid, self.params, axis, &dx, &dy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorResiduals2D {
    /// ‖[x̂,ŷ]f − (i a²/ħ)·L̂_z f‖ / ‖f‖.
    pub r_xy: f64,
    /// ‖x̂(p_y f) − p_y·x̂f − iħ(a/ħ)²·p_x·p_y·f‖ / ‖f‖.
    pub r_mixed: f64,
    /// Sign s in L̂_z = s·iħ(p_y∂_x − p_x∂_y) that minimized r_xy.
    pub lz_sign: f64,
}

impl CommutatorResiduals2D {
    pub fn passed(&self) -> bool {
        self.r_xy <= COMMUTATOR_2D_TOL && self.r_mixed <= COMMUTATOR_2D_TOL
    }
}

/// Residuals of the 2-D coordinate bracket and the mixed Heisenberg bracket.
pub fn coordinate_commutator_residual_2d(
    grid: &GridSpec1D,
    params: &PhysicalParams,
    f: &GridFunction2D,
) -> Result<CommutatorResiduals2D> {
    check_len(grid, f.n)?;
    let op = Position2D {
        grid,
        params,
        d: SpectralDerivative::new(*grid),
    };
    let norm_f = f.interior_norm(grid);

    let xy = op.apply(&op.apply(f, Axis::Y), Axis::X);
    let yx = op.apply(&op.apply(f, Axis::X), Axis::Y);
    let bracket = xy.zip_map(&yx, |a, b| a - b);

    // L̂_z f = iħ(p_y ∂_x f − p_x ∂_y f) for sign +1.
    let dx = derivative_2d(&op.d, f, Axis::X).weighted(grid, |_, py| Complex64::new(py, 0.0));
    let dy = derivative_2d(&op.d, f, Axis::Y).weighted(grid, |px, _| Complex64::new(px, 0.0));
    let lz = dx.zip_map(&dy, |a, b| I * params.hbar * (a - b));
    let lz_coeff = I * (params.a * params.a / params.hbar);

    let mut best = (f64::INFINITY, 1.0);
    for sign in [1.0, -1.0] {
        let res = bracket.zip_map(&lz, |b, l| b - lz_coeff * sign * l);
        let r = res.interior_norm(grid) / norm_f;
        if r < best.0 {
            best = (r, sign);
        }
    }

    let b = (params.a / params.hbar).powi(2);
    let py_f = f.weighted(grid, |_, py| Complex64::new(py, 0.0));
    let x_py_f = op.apply(&py_f, Axis::X);
    let py_x_f = op.apply(f, Axis::X).weighted(grid, |_, py| Complex64::new(py, 0.0));
    let expected = f.weighted(grid, |px, py| I * (params.hbar * b * px * py));
    let mixed = x_py_f
        .zip_map(&py_x_f, |a, c| a - c)
        .zip_map(&expected, |a, e| a - e);

    Ok(CommutatorResiduals2D {
        r_xy: best.0,
        r_mixed: mixed.interior_norm(grid) / norm_f,
        lz_sign: best.1,
    })
}

/// exp(−(p − center)²/(2·width²)) sampled on the grid.
pub fn gaussian_1d(grid: &GridSpec1D, center: f64, width: f64) -> Vec<Complex64> {
    grid.points()
        .iter()
        .map(|&p| {
            let u = (p - center) / width;
            Complex64::new((-0.5 * u * u).exp(), 0.0)
        })
        .collect()
}

pub fn gaussian_2d(grid: &GridSpec1D, center: (f64, f64), width: f64) -> GridFunction2D {
    GridFunction2D::from_fn(grid, |px, py| {
        let u = (px - center.0) / width;
        let v = (py - center.1) / width;
        Complex64::new((-0.5 * (u * u + v * v)).exp(), 0.0)
    })
}

/// Whether a Gaussian of this center and width is resolved (width ≥ 8Δp) and
/// decays to negligible size (|center| + 6·width ≤ p_max) on the grid.
pub fn is_boundary_safe(grid: &GridSpec1D, center: f64, width: f64) -> bool {
    width >= 8.0 * grid.spacing() && center.abs() + 6.0 * width <= grid.p_max()
}

/// One row of a grid-refinement study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefinementPoint {
    pub n: usize,
    pub residual: f64,
}

/// Each doubling must cut the residual by `REFINEMENT_FACTOR`, unless the
/// finer residual is already at the floor.
pub fn refinement_is_monotone(points: &[RefinementPoint], floor: f64) -> bool {
    points.windows(2).all(|w| {
        let (coarse, fine) = (w[0].residual, w[1].residual);
        fine <= floor || fine * REFINEMENT_FACTOR <= coarse
    })
}
