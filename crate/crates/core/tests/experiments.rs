use std::f64::consts::PI;

use chronon_core::dynamics::{
    init_packet, position_series, zb_decomposition, PacketMode, PacketSpec, Spinor, SpinorMomentumField,
};
use chronon_core::grid::GridSpec1D;
use chronon_core::series::{amplitude_at, measure_oscillation, sliding_average};
use chronon_core::{Complex64, PhysicalParams};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ALPHA_Z_SEED: Spinor = [ONE, ZERO, ONE, ZERO];
const NOISE: f64 = 5e-10;

fn packet(params: &PhysicalParams, p0: f64, mode: PacketMode, seed: Spinor) -> SpinorMomentumField {
    let spec = PacketSpec {
        p0,
        sigma_p: 0.1,
        mode,
        spinor_seed: seed,
    };
    init_packet(&GridSpec1D::new(4096, 20.0).unwrap(), params, &spec).unwrap()
}

#[test]
fn rest_packet_oscillates_at_twice_rest_energy() {
    let params = PhysicalParams::natural();
    let s = position_series(&packet(&params, 0.0, PacketMode::Mixed, ALPHA_Z_SEED), 50.0, 4096).unwrap();
    let osc = measure_oscillation(&s, NOISE).unwrap();
    assert!(osc.detected);
    assert!((osc.omega - 2.0).abs() <= 0.02, "omega {}", osc.omega);
    assert!(osc.amplitude <= 0.5 && osc.amplitude > 0.4, "amplitude {}", osc.amplitude);
}

#[test]
fn frequency_scales_with_mass() {
    let params = PhysicalParams::with_compton_length(1.0, 1.0, 2.0).unwrap();
    let s = position_series(&packet(&params, 0.0, PacketMode::Mixed, ALPHA_Z_SEED), 50.0, 4096).unwrap();
    let osc = measure_oscillation(&s, NOISE).unwrap();
    assert!((osc.omega - 4.0).abs() <= 0.04, "omega {}", osc.omega);
    assert!(osc.amplitude <= 0.25, "amplitude {}", osc.amplitude);
}

#[test]
fn positive_projection_removes_the_oscillation() {
    let params = PhysicalParams::natural();
    let mixed = position_series(&packet(&params, 0.0, PacketMode::Mixed, ALPHA_Z_SEED), 50.0, 4096).unwrap();
    let pos = position_series(&packet(&params, 0.0, PacketMode::Positive, ALPHA_Z_SEED), 50.0, 4096).unwrap();
    assert!(!measure_oscillation(&pos, NOISE).unwrap().detected);
    let residual = amplitude_at(&pos, 2.0);
    assert!(residual <= 1e-8, "positive packet component {residual}");
    let ratio = measure_oscillation(&mixed, NOISE).unwrap().amplitude / residual;
    assert!(ratio >= 1e6, "ratio {ratio}");
}

#[test]
fn beta_eigenvector_seed_has_no_longitudinal_jitter_at_rest() {
    // (1,0,0,0) mixes energies but ⟨α_z⟩ cancels between ±p at p0 = 0.
    let params = PhysicalParams::natural();
    let field = packet(&params, 0.0, PacketMode::Mixed, [ONE, ZERO, ZERO, ZERO]);
    let (plus, minus) = field.energy_weights();
    assert!(plus > 0.0 && minus > 0.0);
    let s = position_series(&field, 50.0, 4096).unwrap();
    assert!(s.values().iter().all(|x| x.abs() <= 1e-12));
}

#[test]
fn averaging_suppresses_the_jitter() {
    let params = PhysicalParams::natural();
    let s = position_series(&packet(&params, 0.0, PacketMode::Mixed, ALPHA_Z_SEED), 50.0, 4096).unwrap();
    let ratio = |w: f64| {
        let avg = sliding_average(&s, w).unwrap();
        let t = avg.times();
        amplitude_at(&avg, 2.0) / amplitude_at(&s.restricted(t[0], t[t.len() - 1]), 2.0)
    };
    assert!(1.0 / ratio(PI) >= 100.0);
    let sin1 = 1f64.sin();
    assert!((ratio(1.0) - sin1).abs() <= 0.05 * sin1);
}

#[test]
fn averaged_slope_is_the_drift_velocity() {
    let params = PhysicalParams::natural();
    let p0 = 0.5;
    for mode in [PacketMode::Positive, PacketMode::Mixed] {
        let field = packet(&params, p0, mode, ALPHA_Z_SEED);
        let drift = zb_decomposition(&field, 0.0).unwrap().drift_rate;
        let s = position_series(&field, 50.0, 4096).unwrap();
        let period = PI * params.hbar / params.energy(p0);
        let (_, slope) = sliding_average(&s, period).unwrap().linear_fit();
        assert!((slope - drift).abs() <= 1e-4 * drift.abs(), "{mode}: slope {slope}, drift {drift}");
    }
}

#[test]
fn jitter_amplitude_respects_compton_bound() {
    let params = PhysicalParams::natural();
    let field = packet(&params, 0.0, PacketMode::Mixed, ALPHA_Z_SEED);
    for k in 0..20 {
        let z = zb_decomposition(&field, 0.37 * k as f64).unwrap().zb_offset;
        assert!(z.norm() <= 0.5 + 1e-12);
    }
}
