//! Dirac matrices and the finite-dimensional coordinate representation.
//!
//! The 4×4 matrices use the Dirac block form: β = diag(I, −I) and α_i with
//! σ_i in both off-diagonal blocks. Coordinates are represented as
//! x̂_i = κ·a·α_i and t̂ = κ_t·(a/c)·β. Brackets of these define the
//! angular-momentum and boost generators, which are then checked for spin-½
//! spectra and Lorentz closure. Metric signature is (+, −, −, −).

use std::fmt;

use num_complex::Complex64;

use crate::matrix::{anticommutator, commutator, hermitian_eig, kron, ComplexMatrix};
use crate::{PhysicalParams, Result};

pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Tolerance for identities that are exact in the 4×4 algebra.
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for closure relations at a searched normalization.
pub const CLOSURE_TOL: f64 = 1e-10;

/// Search box half-width and step for κ, κ_t.
pub const SEARCH_HALF_WIDTH: f64 = 2.0;
pub const SEARCH_STEP: f64 = 1.0 / 16.0;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Levi-Civita symbol ε_{ijk} for indices in 0..3.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// The cyclic index pairs (x,y)→z, (y,z)→x, (z,x)→y.
pub const CYCLIC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

const AXIS: [&str; 3] = ["x", "y", "z"];

pub fn pauli() -> [ComplexMatrix; 3] {
    let o = re(0.0);
    let l = re(1.0);
    [
        ComplexMatrix::from_rows([[o, l], [l, o]]),
        ComplexMatrix::from_rows([[o, -I], [I, o]]),
        ComplexMatrix::from_rows([[l, o], [o, -l]]),
    ]
}

#[derive(Clone, Debug)]
pub struct DiracMatrixSet {
    pub beta: ComplexMatrix,
    pub alpha: [ComplexMatrix; 3],
    /// γ⁰ = β, γ^i = β·α_i.
    pub gamma: [ComplexMatrix; 4],
    /// Σ_i = diag(σ_i, σ_i).
    pub sigma_big: [ComplexMatrix; 3],
    /// S_i = (ħ/2)·Σ_i.
    pub spin: [ComplexMatrix; 3],
    pub pauli: [ComplexMatrix; 3],
}

pub fn build_dirac_set(params: &PhysicalParams) -> DiracMatrixSet {
    let pauli = pauli();
    let i2 = ComplexMatrix::identity(2);
    let sz = &pauli[2];
    let sx = &pauli[0];
    let beta = kron(sz, &i2);
    let alpha = pauli.clone().map(|s| kron(sx, &s));
    let sigma_big = pauli.clone().map(|s| kron(&i2, &s));
    let spin = sigma_big.clone().map(|s| s.scale_real(params.hbar / 2.0));
    let gamma = [
        beta.clone(),
        &beta * &alpha[0],
        &beta * &alpha[1],
        &beta * &alpha[2],
    ];
    DiracMatrixSet {
        beta,
        alpha,
        gamma,
        sigma_big,
        spin,
        pauli,
    }
}

impl DiracMatrixSet {
    /// H(p) = c·(α·p) + β·mc².
    pub fn hamiltonian(&self, params: &PhysicalParams, p: [f64; 3]) -> ComplexMatrix {
        let mut h = self.beta.scale_real(params.rest_energy());
        for (a, &pi) in self.alpha.iter().zip(&p) {
            if pi != 0.0 {
                h = &h + &a.scale_real(params.c * pi);
            }
        }
        h
    }
}

/// One verified relation: its residual and the bound it must meet.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl RelationCheck {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, {:.3e}, {}",
            self.name,
            self.residual,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct AlgebraReport {
    pub relations: Vec<RelationCheck>,
}

impl AlgebraReport {
    pub fn max_residual(&self) -> f64 {
        self.relations.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.relations.iter().all(RelationCheck::passed)
    }
}

impl fmt::Display for AlgebraReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.relations {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// {γ^μ, γ^ν} = 2η^{μν}·I₄ over the 10 unordered pairs.
pub fn verify_clifford(set: &DiracMatrixSet) -> AlgebraReport {
    let id = ComplexMatrix::identity(4);
    let mut relations = Vec::with_capacity(10);
    for mu in 0..4 {
        for nu in mu..4 {
            let anti = anticommutator(&set.gamma[mu], &set.gamma[nu])
                .expect("gamma matrices are 4×4");
            let eta = if mu == nu { METRIC[mu] } else { 0.0 };
            let target = id.scale_real(2.0 * eta);
            relations.push(RelationCheck {
                name: format!("{{γ{mu},γ{nu}}} = 2η{mu}{nu}"),
                residual: anti.distance(&target),
                tolerance: EXACT_TOL,
            });
        }
    }
    AlgebraReport { relations }
}

#[derive(Clone, Debug)]
pub struct CoordinateRep {
    pub t_hat: ComplexMatrix,
    pub x_hat: [ComplexMatrix; 3],
    pub kappa: Complex64,
    pub kappa_t: Complex64,
    pub params: PhysicalParams,
}

/// x̂_i = κ·a·α_i, t̂ = κ_t·(a/c)·β.
pub fn coordinate_rep(
    set: &DiracMatrixSet,
    params: &PhysicalParams,
    kappa: Complex64,
    kappa_t: Complex64,
) -> CoordinateRep {
    let xs = kappa * params.a;
    let ts = kappa_t * (params.a / params.c);
    CoordinateRep {
        t_hat: set.beta.scale(ts),
        x_hat: set.alpha.clone().map(|a| a.scale(xs)),
        kappa,
        kappa_t,
        params: *params,
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    /// Angular momentum L_i (units of ħ).
    pub l: [ComplexMatrix; 3],
    /// Boost generators M_i (units of ħ).
    pub m: [ComplexMatrix; 3],
}

impl GeneratorSet {
    pub fn zero() -> Self {
        let z = ComplexMatrix::zeros(4);
        Self {
            l: [z.clone(), z.clone(), z.clone()],
            m: [z.clone(), z.clone(), z],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.l.iter().chain(&self.m).all(ComplexMatrix::is_zero)
    }
}

/// Solves the coordinate brackets for the generators:
/// L_k = (ħ/(i a²))·[x̂_i, x̂_j] over cyclic (i, j, k) and
/// M_i = (ħc/(i a²))·[t̂, x̂_i].
///
/// With a = 0 the coordinates commute and all generators are zero.
pub fn extract_generators(rep: &CoordinateRep) -> GeneratorSet {
    let p = &rep.params;
    if p.a == 0.0 {
        return GeneratorSet::zero();
    }
    let a2 = p.a * p.a;
    let l_scale = re(p.hbar / a2) / I;
    let m_scale = re(p.hbar * p.c / a2) / I;
    let mut gens = GeneratorSet::zero();
    for (i, j, k) in CYCLIC {
        let br = commutator(&rep.x_hat[i], &rep.x_hat[j]).expect("4×4");
        gens.l[k] = br.scale(l_scale);
    }
    for i in 0..3 {
        let br = commutator(&rep.t_hat, &rep.x_hat[i]).expect("4×4");
        gens.m[i] = br.scale(m_scale);
    }
    gens
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinSpectrum {
    /// Ascending eigenvalues of L_x, L_y, L_z.
    pub eigenvalues: [Vec<f64>; 3],
}

impl SpinSpectrum {
    /// True when every L_i has spectrum {−ħ/2 ×2, +ħ/2 ×2}.
    pub fn is_spin_half(&self, hbar: f64) -> bool {
        let want = [-hbar / 2.0, -hbar / 2.0, hbar / 2.0, hbar / 2.0];
        self.eigenvalues.iter().all(|ev| {
            ev.len() == 4
                && ev
                    .iter()
                    .zip(&want)
                    .all(|(x, w)| (x - w).abs() <= EXACT_TOL * hbar)
        })
    }

    /// Largest deviation from the spin-½ pattern, in units of ħ.
    pub fn spin_half_deviation(&self, hbar: f64) -> f64 {
        let want = [-0.5, -0.5, 0.5, 0.5];
        self.eigenvalues
            .iter()
            .flat_map(|ev| ev.iter().zip(&want).map(|(x, w)| (x / hbar - w).abs()))
            .fold(0.0, f64::max)
    }
}

pub fn spin_spectrum(gen: &GeneratorSet) -> Result<SpinSpectrum> {
    let mut out: [Vec<f64>; 3] = Default::default();
    for (slot, l) in out.iter_mut().zip(&gen.l) {
        *slot = hermitian_eig(l)?.values;
    }
    Ok(SpinSpectrum { eigenvalues: out })
}

#[derive(Clone, Debug)]
pub struct LorentzReport {
    pub report: AlgebraReport,
    /// All generators vanish; closure holds only as 0 = 0.
    pub degenerate: bool,
}

impl LorentzReport {
    pub fn max_residual(&self) -> f64 {
        self.report.max_residual()
    }
}

/// Checks [J_i,J_j] = iε_{ijk}J_k, [J_i,K_j] = iε_{ijk}K_k and
/// [K_i,K_j] = −iε_{ijk}J_k over the cyclic pairs, with J = L/ħ and
/// K = M/ħ.
pub fn verify_lorentz_algebra(gen: &GeneratorSet, hbar: f64) -> LorentzReport {
    let j = gen.l.clone().map(|m| m.scale_real(1.0 / hbar));
    let k = gen.m.clone().map(|m| m.scale_real(1.0 / hbar));
    let mut relations = Vec::with_capacity(9);
    let mut push = |name: String, lhs: ComplexMatrix, rhs: ComplexMatrix| {
        relations.push(RelationCheck {
            name,
            residual: lhs.distance(&rhs),
            tolerance: CLOSURE_TOL,
        });
    };
    for (a, b, c) in CYCLIC {
        let (sa, sb, sc) = (AXIS[a], AXIS[b], AXIS[c]);
        push(
            format!("[J{sa},J{sb}] = iJ{sc}"),
            commutator(&j[a], &j[b]).expect("4×4"),
            j[c].scale(I),
        );
        push(
            format!("[J{sa},K{sb}] = iK{sc}"),
            commutator(&j[a], &k[b]).expect("4×4"),
            k[c].scale(I),
        );
        push(
            format!("[K{sa},K{sb}] = -iJ{sc}"),
            commutator(&k[a], &k[b]).expect("4×4"),
            j[c].scale(-I),
        );
    }
    LorentzReport {
        report: AlgebraReport { relations },
        degenerate: gen.is_zero(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizationFit {
    pub kappa: Complex64,
    pub kappa_t: Complex64,
    /// ‖[x̂,ŷ] − (i a²/ħ)·S_z‖_F at the fitted κ.
    pub bracket_residual: f64,
    /// Lorentz closure residual at the fitted (κ, κ_t).
    pub closure_residual: f64,
}

impl NormalizationFit {
    pub fn residual(&self) -> f64 {
        self.bracket_residual.max(self.closure_residual)
    }

    pub fn fits(&self) -> bool {
        self.residual() <= CLOSURE_TOL
    }
}

/// Residual of [x̂, ŷ] = (i a²/ħ)·L_z with L_z taken as the Dirac spin S_z.
pub fn bracket_residual(set: &DiracMatrixSet, params: &PhysicalParams, kappa: Complex64) -> f64 {
    let rep = coordinate_rep(set, params, kappa, re(0.0));
    let lhs = commutator(&rep.x_hat[0], &rep.x_hat[1]).expect("4×4");
    let rhs = set.spin[2].scale(I * (params.a * params.a / params.hbar));
    lhs.distance(&rhs)
}

pub fn closure_residual(
    set: &DiracMatrixSet,
    params: &PhysicalParams,
    kappa: Complex64,
    kappa_t: Complex64,
) -> f64 {
    let rep = coordinate_rep(set, params, kappa, kappa_t);
    verify_lorentz_algebra(&extract_generators(&rep), params.hbar).max_residual()
}

/// Finds κ from the [x̂, ŷ] bracket, then κ_t from Lorentz closure at that κ.
///
/// Each search scans the complex square [−2, 2]² at step 1/16, visiting real
/// then imaginary parts in descending order and keeping strict improvements
/// only (so ties resolve toward larger Re, then larger Im). The best grid
/// point is then polished by golden-section passes along each axis.
pub fn solve_normalization(set: &DiracMatrixSet, params: &PhysicalParams) -> NormalizationFit {
    let kappa = complex_search(|k| bracket_residual(set, params, k));
    let kappa_t = complex_search(|kt| closure_residual(set, params, kappa, kt));
    NormalizationFit {
        kappa,
        kappa_t,
        bracket_residual: bracket_residual(set, params, kappa),
        closure_residual: closure_residual(set, params, kappa, kappa_t),
    }
}

fn complex_search(f: impl Fn(Complex64) -> f64) -> Complex64 {
    let steps = (2.0 * SEARCH_HALF_WIDTH / SEARCH_STEP).round() as i32;
    let mut best = re(SEARCH_HALF_WIDTH) + I * SEARCH_HALF_WIDTH;
    let mut best_r = f64::INFINITY;
    for ir in 0..=steps {
        let x = SEARCH_HALF_WIDTH - ir as f64 * SEARCH_STEP;
        for ii in 0..=steps {
            let y = SEARCH_HALF_WIDTH - ii as f64 * SEARCH_STEP;
            let z = Complex64::new(x, y);
            let r = f(z);
            if r < best_r {
                best_r = r;
                best = z;
            }
        }
    }
    for _ in 0..3 {
        if best_r == 0.0 {
            break;
        }
        let x = golden_section(|x| f(Complex64::new(x, best.im)), best.re - SEARCH_STEP, best.re + SEARCH_STEP);
        let cand = Complex64::new(x, best.im);
        let r = f(cand);
        if r < best_r {
            best_r = r;
            best = cand;
        }
        let y = golden_section(|y| f(Complex64::new(best.re, y)), best.im - SEARCH_STEP, best.im + SEARCH_STEP);
        let cand = Complex64::new(best.re, y);
        let r = f(cand);
        if r < best_r {
            best_r = r;
            best = cand;
        }
    }
    best
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (hi - lo).abs() <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Deformation {
    Space,
    Time,
}

/// Factor multiplying iħ in the deformed Heisenberg bracket:
/// 1 + (a·p/ħ)² for space, 1 − (a·p/(ħc))² for time.
pub fn deformation_factor(params: &PhysicalParams, p: f64, which: Deformation) -> f64 {
    match which {
        Deformation::Space => {
            let u = params.a * p / params.hbar;
            1.0 + u * u
        }
        Deformation::Time => {
            let u = params.a * p / (params.hbar * params.c);
            1.0 - u * u
        }
    }
}

/// Coefficient of iħ in [x, p_y] = [y, p_x]: (a/ħ)²·p₁·p₂.
pub fn mixed_deformation_rhs(params: &PhysicalParams, p1: f64, p2: f64) -> f64 {
    let r = params.a / params.hbar;
    r * r * p1 * p2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Orbital rotation about `axis` acting on H(p):
/// sign · iħ·ε_{ljk}·p_j·∂H/∂p_k = sign · iħc·ε_{ljk}·p_j·α_k.
///
/// H is linear in p, so this is exact.
pub fn orbital_action(
    set: &DiracMatrixSet,
    params: &PhysicalParams,
    p: [f64; 3],
    axis: usize,
    sign: Sign,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4);
    for j in 0..3 {
        for k in 0..3 {
            let e = levi_civita(axis, j, k);
            if e != 0.0 && p[j] != 0.0 {
                out = &out + &set.alpha[k].scale_real(e * p[j]);
            }
        }
    }
    out.scale(I * (sign.value() * params.hbar * params.c))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovarianceResidual {
    /// ‖ℒH‖_F: the orbital rotation alone.
    pub orbital: f64,
    /// ‖ℒH + [H, S]‖_F: orbital plus spin.
    pub total: f64,
    pub sign: Sign,
}

impl CovarianceResidual {
    pub fn covariant(&self) -> bool {
        self.total <= EXACT_TOL
    }
}

fn covariance_with_sign(
    set: &DiracMatrixSet,
    params: &PhysicalParams,
    p: [f64; 3],
    axis: usize,
    sign: Sign,
) -> CovarianceResidual {
    let h = set.hamiltonian(params, p);
    let orb = orbital_action(set, params, p, axis, sign);
    let spin = commutator(&h, &set.spin[axis]).expect("4×4");
    CovarianceResidual {
        orbital: orb.frobenius_norm(),
        total: (&orb + &spin).frobenius_norm(),
        sign,
    }
}

/// Fixes the orbital-action sign as the one that cancels the spin term at a
/// transverse probe momentum.
pub fn calibrate_orbital_sign(set: &DiracMatrixSet, params: &PhysicalParams) -> Sign {
    let probe = [1.0 / params.c, 0.0, 0.0];
    let plus = covariance_with_sign(set, params, probe, 2, Sign::Plus).total;
    let minus = covariance_with_sign(set, params, probe, 2, Sign::Minus).total;
    if plus <= minus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Rotation covariance of H(p) about `axis` (0, 1, 2 for x, y, z).
///
/// The orbital part alone fails for momentum transverse to the axis; adding
/// the spin commutator [H, S_axis] cancels it.
pub fn rotation_covariance_check(
    set: &DiracMatrixSet,
    params: &PhysicalParams,
    p: [f64; 3],
    axis: usize,
) -> CovarianceResidual {
    assert!(axis < 3, "axis must be 0, 1 or 2");
    let sign = calibrate_orbital_sign(set, params);
    covariance_with_sign(set, params, p, axis, sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural_set() -> (DiracMatrixSet, PhysicalParams) {
        let p = PhysicalParams::natural();
        (build_dirac_set(&p), p)
    }

    /// Plain triple-loop product, independent of `ComplexMatrix::mul`.
    fn naive_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let n = a.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[i * n + j] += a.entries()[i * n + k] * b.entries()[k * n + j];
                }
            }
        }
        ComplexMatrix::from_row_major(out)
    }

    fn naive_comm(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        &naive_mul(a, b) - &naive_mul(b, a)
    }

    #[test]
    fn block_structure_entries() {
        let (s, _) = natural_set();
        assert_eq!(s.beta[(0, 0)], re(1.0));
        assert_eq!(s.beta[(2, 2)], re(-1.0));
        assert_eq!(s.alpha[0][(0, 3)], re(1.0));
        // σ_y in both off-diagonal blocks.
        assert_eq!(s.alpha[1][(0, 3)], -I);
        assert_eq!(s.alpha[1][(3, 0)], I);
        assert_eq!(s.alpha[1][(2, 1)], -I);
        for a in &s.alpha {
            assert!(a.is_hermitian());
        }
        for g in &s.gamma[1..] {
            assert!(g.distance(&g.adjoint().scale_real(-1.0)) == 0.0);
        }
    }

    #[test]
    fn alpha_commutator_is_twice_i_sigma() {
        let (s, _) = natural_set();
        for (i, j, k) in CYCLIC {
            let oracle = naive_comm(&s.alpha[i], &s.alpha[j]);
            let got = commutator(&s.alpha[i], &s.alpha[j]).unwrap();
            assert_eq!(got, oracle);
            assert!(got.distance(&s.sigma_big[k].scale(2.0 * I)) == 0.0);
        }
    }

    #[test]
    fn spin_matrices_close_su2() {
        let p = PhysicalParams::new(0.7, 1.0, 1.0, 1.0).unwrap();
        let s = build_dirac_set(&p);
        for (i, j, k) in CYCLIC {
            let lhs = commutator(&s.spin[i], &s.spin[j]).unwrap();
            let rhs = s.spin[k].scale(I * p.hbar);
            assert!(lhs.distance(&rhs) <= 1e-12);
        }
        let ev = hermitian_eig(&s.spin[2]).unwrap().values;
        assert_eq!(ev, vec![-0.35, -0.35, 0.35, 0.35]);
    }

    #[test]
    fn clifford_relations_hold() {
        let (s, _) = natural_set();
        let rep = verify_clifford(&s);
        assert_eq!(rep.relations.len(), 10);
        assert!(rep.passed());
        assert_eq!(rep.max_residual(), 0.0);
        let g01 = naive_mul(&s.gamma[0], &s.gamma[1]);
        let g10 = naive_mul(&s.gamma[1], &s.gamma[0]);
        assert!((&g01 + &g10).is_zero());
    }

    #[test]
    fn coordinate_rep_examples() {
        let (s, p) = natural_set();
        let zero = coordinate_rep(&s, &p, re(0.0), re(0.0));
        assert!(zero.x_hat.iter().all(ComplexMatrix::is_zero));
        let unit = coordinate_rep(&s, &p, re(1.0), re(0.0));
        assert_eq!(unit.x_hat[0], s.alpha[0]);
        let half = coordinate_rep(&s, &p, re(0.5), re(0.0));
        let br = commutator(&half.x_hat[0], &half.x_hat[1]).unwrap();
        assert!(br.distance(&s.sigma_big[2].scale(0.5 * I)) < 1e-15);
    }

    #[test]
    fn normalization_is_half_for_any_length() {
        for a in [1e-3, 0.5, 1.0, 3.0, 17.0] {
            let p = PhysicalParams::natural().with_length(a);
            let s = build_dirac_set(&p);
            let fit = solve_normalization(&s, &p);
            assert!((fit.kappa - re(0.5)).norm() <= 1e-8, "a={a}: κ={}", fit.kappa);
            assert!((fit.kappa_t - 0.5 * I).norm() <= 1e-8, "a={a}: κ_t={}", fit.kappa_t);
            assert!(fit.residual() <= CLOSURE_TOL);
        }
    }

    #[test]
    fn degenerate_alpha_has_no_fit() {
        let (mut s, p) = natural_set();
        s.alpha = [ComplexMatrix::zeros(4), ComplexMatrix::zeros(4), ComplexMatrix::zeros(4)];
        let fit = solve_normalization(&s, &p);
        let expected = s.sigma_big[2].scale(0.5 * I * p.a * p.a).frobenius_norm();
        assert!((fit.residual() - expected).abs() < 1e-15);
        assert!(!fit.fits());
    }

    #[test]
    fn generators_at_canonical_normalization() {
        let (s, p) = natural_set();
        let rep = coordinate_rep(&s, &p, re(0.5), 0.5 * I);
        let g = extract_generators(&rep);
        for k in 0..3 {
            assert!(g.l[k].distance(&s.spin[k]) < 1e-15);
            // [β, α_i] = 2γ^i, so M_i = −2iħκκ_t·γ^i = (ħ/2)·γ^i here.
            assert!(g.m[k].distance(&s.gamma[k + 1].scale_real(0.5)) < 1e-15);
        }
        let zero = extract_generators(&coordinate_rep(&s, &p, re(0.0), 0.5 * I));
        assert!(zero.is_zero());
    }

    #[test]
    fn spin_spectrum_scales_quadratically_in_kappa() {
        let (s, p) = natural_set();
        let canon = extract_generators(&coordinate_rep(&s, &p, re(0.5), 0.5 * I));
        let spec = spin_spectrum(&canon).unwrap();
        assert!(spec.is_spin_half(p.hbar));
        let doubled = extract_generators(&coordinate_rep(&s, &p, re(1.0), 0.5 * I));
        let spec2 = spin_spectrum(&doubled).unwrap();
        for ev in &spec2.eigenvalues {
            for (x, w) in ev.iter().zip([-2.0, -2.0, 2.0, 2.0]) {
                assert!((x - w).abs() < 1e-13);
            }
        }
        assert!(!spec2.is_spin_half(p.hbar));
        let zero = spin_spectrum(&GeneratorSet::zero()).unwrap();
        assert!(zero.eigenvalues.iter().all(|ev| ev.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn spin_spectrum_rejects_non_hermitian() {
        let mut g = GeneratorSet::zero();
        g.l[0][(0, 1)] = re(1.0);
        assert!(spin_spectrum(&g).is_err());
    }

    #[test]
    fn lorentz_closure_examples() {
        let (s, p) = natural_set();
        let canon = extract_generators(&coordinate_rep(&s, &p, re(0.5), 0.5 * I));
        let rep = verify_lorentz_algebra(&canon, p.hbar);
        assert_eq!(rep.report.relations.len(), 9);
        assert!(rep.max_residual() <= 1e-12);
        assert!(!rep.degenerate);

        let real_t = extract_generators(&coordinate_rep(&s, &p, re(0.5), re(0.5)));
        let bad = verify_lorentz_algebra(&real_t, p.hbar);
        // [K_x,K_y] = 2iκ_t²Σ_z against −(i/2)Σ_z: residual |2κ_t² + ½|·‖Σ_z‖ = 2.
        assert!((bad.max_residual() - 2.0).abs() < 1e-14);

        let zero = verify_lorentz_algebra(&GeneratorSet::zero(), p.hbar);
        assert_eq!(zero.max_residual(), 0.0);
        assert!(zero.degenerate);
    }

    #[test]
    fn deformation_factor_examples() {
        let p = PhysicalParams::with_compton_length(1.0, 1.0, 1.0).unwrap();
        assert_eq!(deformation_factor(&p, p.m * p.c, Deformation::Space), 2.0);
        let p0 = p.with_length(0.0);
        assert_eq!(deformation_factor(&p0, 123.0, Deformation::Space), 1.0);
        assert_eq!(deformation_factor(&p0, 123.0, Deformation::Time), 1.0);
        assert_eq!(deformation_factor(&p.with_length(1.0), 2.0, Deformation::Space), 5.0);
        assert_eq!(deformation_factor(&p, 0.5, Deformation::Time), 0.75);
    }

    #[test]
    fn mixed_rhs_examples() {
        let p = PhysicalParams::natural();
        assert_eq!(mixed_deformation_rhs(&p, 1.0, 1.0), 1.0);
        assert_eq!(mixed_deformation_rhs(&p, 0.0, 7.0), 0.0);
        let q = PhysicalParams::with_compton_length(2.0, 3.0, 5.0).unwrap();
        let mc = q.m * q.c;
        assert!((mixed_deformation_rhs(&q, mc, mc) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn covariance_examples() {
        let (s, p) = natural_set();
        let r = rotation_covariance_check(&s, &p, [0.0, 0.0, 1.0], 2);
        assert_eq!((r.orbital, r.total), (0.0, 0.0));
        let r = rotation_covariance_check(&s, &p, [1.0, 0.0, 0.0], 2);
        assert!((r.orbital - 2.0).abs() < 1e-15);
        assert!(r.total <= 1e-12);
        assert_eq!(r.sign, Sign::Plus);
        let r = rotation_covariance_check(&s, &p, [0.0, 0.0, 0.0], 0);
        assert_eq!((r.orbital, r.total), (0.0, 0.0));
    }

    #[test]
    fn wrong_orbital_sign_breaks_covariance() {
        let (s, p) = natural_set();
        let r = covariance_with_sign(&s, &p, [0.3, -0.8, 0.1], 2, Sign::Minus);
        assert!(r.total > 1.0);
    }

    #[test]
    fn levi_civita_is_antisymmetric() {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(levi_civita(i, j, k), -levi_civita(j, i, k));
                    assert_eq!(levi_civita(i, j, k), levi_civita(j, k, i));
                }
            }
        }
    }
}
