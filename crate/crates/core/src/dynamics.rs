//! Free Dirac wave packets in one momentum dimension.
//!
//! Momentum points along z and the state keeps all four spinor components,
//! so H(p) = c·α_z·p + β·mc². Each momentum mode evolves with the closed
//! form exp(−iH(p)t/ħ) = cos(Et/ħ)·I − i·sin(Et/ħ)·H(p)/E, which makes the
//! evolution exact up to rounding. Position is x̂ = iħ∂/∂p, evaluated with the
//! spectral derivative.
//!
//! All sums over modes run in index order, so results are bit-identical from
//! run to run.

use num_complex::Complex64;

use crate::gamma::{build_dirac_set, DiracMatrixSet};
use crate::grid::{GridSpec1D, SpectralDerivative};
use crate::matrix::{hermitian_eig, ComplexMatrix};
use crate::series::TimeSeries;
use crate::{Error, PhysicalParams, Result};

pub type Spinor = [Complex64; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Safety factor on the two-samples-per-period requirement of
/// [`position_series`].
pub const SAMPLING_SAFETY: f64 = 4.0;

/// α_z·v for the Dirac-form α_z = [[0, σ_z], [σ_z, 0]].
fn alpha_z(v: &Spinor) -> Spinor {
    [v[2], -v[3], v[0], -v[1]]
}

fn beta(v: &Spinor) -> Spinor {
    [v[0], v[1], -v[2], -v[3]]
}

/// H(p)·v without forming the matrix.
fn apply_h(params: &PhysicalParams, p: f64, v: &Spinor) -> Spinor {
    let a = alpha_z(v);
    let b = beta(v);
    let cp = params.c * p;
    let mc2 = params.rest_energy();
    std::array::from_fn(|i| a[i] * cp + b[i] * mc2)
}

fn dot(u: &Spinor, v: &Spinor) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(v: &Spinor) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Clone, Debug)]
pub struct ModeHamiltonian {
    pub p: f64,
    pub h: ComplexMatrix,
    pub energy: f64,
}

/// H(p) = c·α_z·p + β·mc² as a 4×4 matrix.
pub fn mode_hamiltonian(set: &DiracMatrixSet, params: &PhysicalParams, p: f64) -> ModeHamiltonian {
    ModeHamiltonian {
        p,
        h: set.hamiltonian(params, [0.0, 0.0, p]),
        energy: params.energy(p),
    }
}

/// Λ± = (I ± H(p)/E(p))/2.
pub fn energy_projectors(params: &PhysicalParams, p: f64) -> (ComplexMatrix, ComplexMatrix) {
    let set = build_dirac_set(params);
    let mode = mode_hamiltonian(&set, params, p);
    let id = ComplexMatrix::identity(4);
    let h_over_e = mode.h.scale_real(1.0 / mode.energy);
    (
        (&id + &h_over_e).scale_real(0.5),
        (&id - &h_over_e).scale_real(0.5),
    )
}

/// Λ±·v evaluated directly.
fn project(params: &PhysicalParams, p: f64, v: &Spinor, positive: bool) -> Spinor {
    let hv = apply_h(params, p, v);
    let e = params.energy(p);
    let s = if positive { 1.0 } else { -1.0 };
    std::array::from_fn(|i| 0.5 * (v[i] + hv[i] * (s / e)))
}

/// The Zitterbewegung operator (iħc/2)·(α_z − c·p·H⁻¹)·H⁻¹ at momentum p.
pub fn zb_matrix(set: &DiracMatrixSet, params: &PhysicalParams, p: f64) -> Result<ComplexMatrix> {
    if !(params.m > 0.0) {
        return Err(Error::Massless);
    }
    let mode = mode_hamiltonian(set, params, p);
    let h_inv = mode.h.scale_real(1.0 / (mode.energy * mode.energy));
    let inner = &set.alpha[2] - &h_inv.scale_real(params.c * p);
    Ok((&inner * &h_inv).scale(I * (0.5 * params.hbar * params.c)))
}

/// Largest singular value of a matrix, via the eigenvalues of M†M.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let mtm = &m.adjoint() * m;
    hermitian_eig(&mtm)
        .expect("M†M is Hermitian")
        .values
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0)
        .sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PacketMode {
    Mixed,
    Positive,
    Negative,
}

impl std::str::FromStr for PacketMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mixed" => Ok(Self::Mixed),
            "positive" => Ok(Self::Positive),
            "negative" => Ok(Self::Negative),
            other => Err(format!("unknown packet mode `{other}` (mixed|positive|negative)")),
        }
    }
}

impl std::fmt::Display for PacketMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Mixed => "mixed",
            Self::Positive => "positive",
            Self::Negative => "negative",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketSpec {
    pub p0: f64,
    pub sigma_p: f64,
    pub mode: PacketMode,
    pub spinor_seed: Spinor,
}

/// Spinor amplitudes ψ̃(p_k) on a momentum grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorMomentumField {
    grid: GridSpec1D,
    amps: Vec<Spinor>,
    params: PhysicalParams,
}

impl SpinorMomentumField {
    pub fn from_amplitudes(grid: GridSpec1D, params: PhysicalParams, amps: Vec<Spinor>) -> Result<Self> {
        if amps.len() != grid.n() {
            return Err(Error::InvalidGrid(format!(
                "{} amplitudes for a grid of {}",
                amps.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, amps, params })
    }

    pub fn grid(&self) -> &GridSpec1D {
        &self.grid
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn amplitudes(&self) -> &[Spinor] {
        &self.amps
    }

    /// Σ_k |ψ̃(p_k)|²·Δp.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(norm_sqr).sum::<f64>() * self.grid.spacing()
    }

    /// ⟨H⟩ = Σ_k ψ̃†H(p_k)ψ̃·Δp.
    pub fn expect_energy(&self) -> f64 {
        self.mode_sum(|p, v| dot(v, &apply_h(&self.params, p, v))).re
    }

    /// Norm of the Λ₊ and Λ₋ parts.
    pub fn energy_weights(&self) -> (f64, f64) {
        let dp = self.grid.spacing();
        let mut plus = 0.0;
        let mut minus = 0.0;
        for (k, v) in self.amps.iter().enumerate() {
            let p = self.grid.point(k);
            plus += norm_sqr(&project(&self.params, p, v, true));
            minus += norm_sqr(&project(&self.params, p, v, false));
        }
        (plus * dp, minus * dp)
    }

    fn mode_sum(&self, f: impl Fn(f64, &Spinor) -> Complex64) -> Complex64 {
        let mut acc = ZERO;
        for (k, v) in self.amps.iter().enumerate() {
            acc += f(self.grid.point(k), v);
        }
        acc * self.grid.spacing()
    }
}

/// Gaussian envelope exp(−(p − p0)²/(4σ_p²)) times the seed spinor, projected
/// per `mode` and normalized to one.
pub fn init_packet(
    grid: &GridSpec1D,
    params: &PhysicalParams,
    spec: &PacketSpec,
) -> Result<SpinorMomentumField> {
    let dp = grid.spacing();
    if !(spec.sigma_p >= 8.0 * dp) {
        return Err(Error::BoundaryUnsafe(format!(
            "sigma_p = {} must be at least 8·Δp = {}",
            spec.sigma_p,
            8.0 * dp
        )));
    }
    if !(spec.p0.abs() + 6.0 * spec.sigma_p <= grid.p_max()) {
        return Err(Error::BoundaryUnsafe(format!(
            "|p0| + 6·sigma_p = {} exceeds p_max = {}",
            spec.p0.abs() + 6.0 * spec.sigma_p,
            grid.p_max()
        )));
    }
    let mut amps: Vec<Spinor> = grid
        .points()
        .iter()
        .map(|&p| {
            let u = p - spec.p0;
            let env = (-(u * u) / (4.0 * spec.sigma_p * spec.sigma_p)).exp();
            let v = spec.spinor_seed.map(|z| z * env);
            match spec.mode {
                PacketMode::Mixed => v,
                PacketMode::Positive => project(params, p, &v, true),
                PacketMode::Negative => project(params, p, &v, false),
            }
        })
        .collect();
    let norm = amps.iter().map(norm_sqr).sum::<f64>() * dp;
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "spinor_seed",
            reason: format!("packet has zero norm after {} projection", spec.mode),
        });
    }
    let s = 1.0 / norm.sqrt();
    for v in &mut amps {
        *v = v.map(|z| z * s);
    }
    Ok(SpinorMomentumField {
        grid: *grid,
        amps,
        params: *params,
    })
}

fn evolve_mode(params: &PhysicalParams, p: f64, v: &Spinor, t: f64) -> Spinor {
    let e = params.energy(p);
    let (s, c) = (e * t / params.hbar).sin_cos();
    let hv = apply_h(params, p, v);
    let k = -I * (s / e);
    std::array::from_fn(|i| v[i] * c + hv[i] * k)
}

/// exp(−iH(p)t/ħ) applied mode by mode.
pub fn evolve(field: &SpinorMomentumField, t: f64) -> SpinorMomentumField {
    let amps = field
        .amps
        .iter()
        .enumerate()
        .map(|(k, v)| evolve_mode(&field.params, field.grid.point(k), v, t))
        .collect();
    SpinorMomentumField { amps, ..field.clone() }
}

/// Multiplies by exp(−iεp/ħ), shifting the packet by +ε in position.
pub fn translate(field: &SpinorMomentumField, eps: f64) -> SpinorMomentumField {
    let amps = field
        .amps
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let phase = Complex64::from_polar(1.0, -eps * field.grid.point(k) / field.params.hbar);
            v.map(|z| z * phase)
        })
        .collect();
    SpinorMomentumField { amps, ..field.clone() }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositionExpectation {
    /// Re⟨ψ̃|iħ∂/∂p|ψ̃⟩.
    pub value: f64,
    /// Im part; a diagnostic that vanishes for boundary-safe states.
    pub imaginary: f64,
}

/// Reusable evaluator of ⟨iħ∂/∂p⟩; holds the FFT plans and scratch space.
pub struct PositionProbe {
    d: SpectralDerivative,
    scratch: [Vec<Complex64>; 4],
}

impl PositionProbe {
    pub fn new(grid: GridSpec1D) -> Self {
        let n = grid.n();
        Self {
            d: SpectralDerivative::new(grid),
            scratch: std::array::from_fn(|_| vec![ZERO; n]),
        }
    }

    pub fn measure(&mut self, params: &PhysicalParams, amps: &[Spinor]) -> PositionExpectation {
        let grid = *self.d.grid();
        assert_eq!(amps.len(), grid.n());
        for (c, buf) in self.scratch.iter_mut().enumerate() {
            for (slot, v) in buf.iter_mut().zip(amps) {
                *slot = v[c];
            }
            self.d.apply_in_place(buf).expect("scratch sized to grid");
        }
        let mut acc = ZERO;
        for (k, v) in amps.iter().enumerate() {
            for c in 0..4 {
                acc += v[c].conj() * self.scratch[c][k];
            }
        }
        let x = acc * I * (params.hbar * grid.spacing());
        PositionExpectation {
            value: x.re,
            imaginary: x.im,
        }
    }
}

pub fn expect_position(field: &SpinorMomentumField) -> PositionExpectation {
    PositionProbe::new(field.grid).measure(&field.params, &field.amps)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZbDecomposition {
    /// ⟨c²·p·H⁻¹⟩: the drift velocity.
    pub drift_rate: f64,
    /// ⟨(iħc/2)(α_z − c·p·H⁻¹)H⁻¹⟩: the oscillatory offset.
    pub zb_offset: Complex64,
}

/// Splits the position operator into drift and Zitterbewegung parts in the
/// state evolved to time `t`.
pub fn zb_decomposition(field: &SpinorMomentumField, t: f64) -> Result<ZbDecomposition> {
    let params = field.params;
    if !(params.m > 0.0) {
        return Err(Error::Massless);
    }
    let evolved = evolve(field, t);
    let c = params.c;
    let drift = evolved.mode_sum(|p, v| {
        let e2 = params.energy(p).powi(2);
        let hv = apply_h(&params, p, v);
        dot(v, &hv) * (c * c * p / e2)
    });
    let zb = evolved.mode_sum(|p, v| {
        let e2 = params.energy(p).powi(2);
        // (α_z − cp·H/E²)·(H/E²)·v
        let h_inv_v = apply_h(&params, p, v).map(|z| z / e2);
        let a = alpha_z(&h_inv_v);
        let b = apply_h(&params, p, &h_inv_v);
        let w: Spinor = std::array::from_fn(|i| a[i] - b[i] * (c * p / e2));
        dot(v, &w) * (I * (0.5 * params.hbar * c))
    });
    Ok(ZbDecomposition {
        drift_rate: drift.re,
        zb_offset: zb,
    })
}

/// Minimum sample count for [`position_series`] over `[0, t_max]`.
pub fn required_samples(params: &PhysicalParams, t_max: f64) -> usize {
    let periods = t_max * params.zitterbewegung_frequency() / std::f64::consts::TAU;
    (SAMPLING_SAFETY * 2.0 * periods).ceil().max(2.0) as usize
}

/// ⟨x⟩ at `n_samples` uniform instants in [0, t_max], each from the initial
/// state evolved directly to that instant.
pub fn position_series(field: &SpinorMomentumField, t_max: f64, n_samples: usize) -> Result<TimeSeries> {
    if t_max == 0.0 {
        return Ok(TimeSeries::uniform(0.0, 0.0, vec![expect_position(field).value]));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_max",
            reason: format!("must be ≥ 0, got {t_max}"),
        });
    }
    let required = required_samples(&field.params, t_max);
    if n_samples < required {
        return Err(Error::Undersampled {
            got: n_samples,
            required,
        });
    }
    let params = field.params;
    let energies: Vec<f64> = (0..field.grid.n()).map(|k| params.energy(field.grid.point(k))).collect();
    // (H/E)·ψ̃₀ per mode; ψ̃(t) = cos(Et)·ψ̃₀ − i·sin(Et)·(H/E)ψ̃₀.
    let h_psi: Vec<Spinor> = field
        .amps
        .iter()
        .enumerate()
        .map(|(k, v)| apply_h(&params, field.grid.point(k), v).map(|z| z / energies[k]))
        .collect();
    let dt = t_max / (n_samples - 1) as f64;
    let mut probe = PositionProbe::new(field.grid);
    let mut state = field.amps.clone();
    let mut values = Vec::with_capacity(n_samples);
    for s in 0..n_samples {
        let t = s as f64 * dt;
        for (k, slot) in state.iter_mut().enumerate() {
            let (sn, cs) = (energies[k] * t / params.hbar).sin_cos();
            let v = &field.amps[k];
            let hv = &h_psi[k];
            *slot = std::array::from_fn(|i| v[i] * cs - I * hv[i] * sn);
        }
        values.push(probe.measure(&params, &state).value);
    }
    Ok(TimeSeries::uniform(0.0, dt, values))
}
