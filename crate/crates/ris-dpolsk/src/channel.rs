//! The surface-scattered dual-polarized channel: path-loss gain, per-unit
//! path phases, polarization rotation, noise, and two signal paths — the
//! per-unit full-matrix cascade and the algebraically simplified effective
//! wave. Keeping both lets the simplified path (used by the hot simulation
//! loop) be checked against the brute-force construction.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{
    link_geometry, path_phase, unit_positions, wave_vector, LinkGeometry, RisFrame, Scenario,
};
use crate::modem::RisPhaseConfig;
use crate::polarization::{apply_rotation, rotation_matrix, JonesVector};

/// Directivity exponent of a square half-wavelength reflecting unit in the
/// plate-scattering model.
const UNIT_DIRECTIVITY_EXPONENT: f64 = 0.285;

/// Link-level quantities derived once per run: the effective channel gain,
/// every unit's path phase, the coherently combined amplitude, and the
/// average received SNR.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkBudget {
    /// Effective channel gain of the surface-scattered link (dimensionless).
    pub eta: f64,
    /// Per-unit effective path phases ψ_m (rad, unwrapped), length M.
    pub psi: Vec<f64>,
    /// Coherently combined amplitude α = M·η·√p_t (√W).
    pub alpha: f64,
    /// Average received SNR γ = α²/(2σ²) (linear). Infinite for noiseless
    /// scenarios; defined as 0 when both signal and noise are zero.
    pub gamma: f64,
}

/// Effective channel gain: plate-scattering path loss over both legs with
/// the unit's directivity taper,
/// η = (Δ·√(G_t·G_r) / (4π·r1·r2)) · [cos ζ1 · cos ζ2]^0.285.
pub fn effective_gain(scenario: &Scenario, geom: &LinkGeometry) -> Result<f64> {
    if geom.r1 * geom.r2 == 0.0 {
        return Err(Error::DegenerateGeometry {
            reason: "zero-length link leg".into(),
        });
    }
    let cos1 = geom.zeta1.cos();
    let cos2 = geom.zeta2.cos();
    debug_assert!(cos1 > 0.0 && cos2 > 0.0, "endpoints must face the surface");
    let spread = scenario.unit_area() * (scenario.tx_gain * scenario.rx_gain).sqrt()
        / (4.0 * std::f64::consts::PI * geom.r1 * geom.r2);
    Ok(spread * (cos1 * cos2).powf(UNIT_DIRECTIVITY_EXPONENT))
}

/// Per-unit effective path phases ψ_m: the plane-wave phase accumulated over
/// the unit's offset for the arrival direction plus the departure direction.
/// Offsets are expressed in the surface frame, matching the wave vectors.
pub fn path_phases(
    scenario: &Scenario,
    positions: &[nalgebra::Vector3<f64>],
    geom: &LinkGeometry,
) -> Vec<f64> {
    let frame = RisFrame::from_normal(&scenario.ris_normal);
    let q1 = wave_vector(
        geom.arrival_elevation,
        geom.arrival_azimuth,
        scenario.carrier_wavelength,
    );
    let q2 = wave_vector(
        geom.departure_elevation,
        geom.departure_azimuth,
        scenario.carrier_wavelength,
    );
    positions
        .iter()
        .map(|p| {
            let g = frame.to_local(&(p - scenario.ris_center));
            path_phase(&g, &q1) + path_phase(&g, &q2)
        })
        .collect()
}

/// Derives the full link budget for a scenario: geometry, gain, path phases,
/// combined amplitude, and SNR.
pub fn link_budget(scenario: &Scenario) -> Result<LinkBudget> {
    scenario.validate()?;
    let geom = link_geometry(scenario)?;
    let eta = effective_gain(scenario, &geom)?;
    let positions = unit_positions(scenario);
    let psi = path_phases(scenario, &positions, &geom);
    let alpha = scenario.num_units() as f64 * eta * scenario.tx_power.sqrt();
    let gamma = if scenario.noise_power == 0.0 {
        // Noiseless: infinite SNR, except in the doubly degenerate
        // no-signal-no-noise case, which is pinned to zero to avoid NaN.
        if alpha == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        alpha * alpha / (2.0 * scenario.noise_power)
    };
    Ok(LinkBudget { eta, psi, alpha, gamma })
}

/// One circularly-symmetric complex Gaussian noise draw per polarization
/// component, each of total variance `sigma2` (σ²/2 per real/imaginary
/// part). Exactly zero when `sigma2` is zero.
pub fn noise_sample<R: Rng + ?Sized>(sigma2: f64, rng: &mut R) -> JonesVector {
    let sd = (sigma2 / 2.0).sqrt();
    let n0: f64 = rng.sample(StandardNormal);
    let n1: f64 = rng.sample(StandardNormal);
    let n2: f64 = rng.sample(StandardNormal);
    let n3: f64 = rng.sample(StandardNormal);
    JonesVector::new(
        Complex64::new(sd * n0, sd * n1),
        Complex64::new(sd * n2, sd * n3),
    )
}

/// The effective scattered wave leaving the surface under one phase
/// configuration:
/// u = √(η²·p_t/2) · Σ_m e^{j(φ_{m,H} − ψ_m)} · [e^{jΔφ_m}, 1]ᵀ.
pub fn effective_scattered_wave(
    config: &RisPhaseConfig,
    budget: &LinkBudget,
    scenario: &Scenario,
) -> Result<JonesVector> {
    if config.len() != budget.psi.len() {
        return Err(Error::ConfigSizeMismatch {
            expected: budget.psi.len(),
            got: config.len(),
        });
    }
    let scale = (budget.eta * budget.eta * scenario.tx_power / 2.0).sqrt();
    let mut v = Complex64::new(0.0, 0.0);
    let mut h = Complex64::new(0.0, 0.0);
    for (unit, &psi) in config.units().iter().zip(&budget.psi) {
        let common = Complex64::from_polar(1.0, unit.phi_h - psi);
        v += common * Complex64::from_polar(1.0, unit.phi_v - unit.phi_h);
        h += common;
    }
    Ok(JonesVector::new(scale * v, scale * h))
}

/// Received signal y = A(β)·u + w: the scattered wave after the link's
/// polarization rotation plus receiver noise.
pub fn received_signal(u: &JonesVector, beta: f64, noise: &JonesVector) -> JonesVector {
    apply_rotation(&rotation_matrix(beta), u) + *noise
}

/// Brute-force construction of the full 2×2 channel matrix: the sum over
/// units of (receiver leg) · (unit phase pair) · (source leg), with the
/// gain split symmetrically across the legs and the polarization rotation
/// on the receiver leg. Serves as the independent oracle for
/// [`effective_scattered_wave`].
pub fn assemble_full_channel(
    config: &RisPhaseConfig,
    scenario: &Scenario,
    geom: &LinkGeometry,
    positions: &[nalgebra::Vector3<f64>],
) -> Result<Matrix2<Complex64>> {
    if config.len() != positions.len() {
        return Err(Error::ConfigSizeMismatch {
            expected: positions.len(),
            got: config.len(),
        });
    }
    let frame = RisFrame::from_normal(&scenario.ris_normal);
    let q1 = wave_vector(
        geom.arrival_elevation,
        geom.arrival_azimuth,
        scenario.carrier_wavelength,
    );
    let q2 = wave_vector(
        geom.departure_elevation,
        geom.departure_azimuth,
        scenario.carrier_wavelength,
    );
    let rho = effective_gain(scenario, geom)?.sqrt();
    let a = rotation_matrix(scenario.rotation_angle);
    let a_complex = Matrix2::new(
        Complex64::new(a[(0, 0)], 0.0),
        Complex64::new(a[(0, 1)], 0.0),
        Complex64::new(a[(1, 0)], 0.0),
        Complex64::new(a[(1, 1)], 0.0),
    );
    let mut sum = Matrix2::<Complex64>::zeros();
    for (unit, p) in config.units().iter().zip(positions) {
        let g = frame.to_local(&(p - scenario.ris_center));
        let mu1 = path_phase(&g, &q1);
        let mu2 = path_phase(&g, &q2);
        let h1 = Matrix2::from_diagonal_element(Complex64::from_polar(rho, -mu1));
        let phi_m = Matrix2::from_diagonal(&Vector2::new(
            Complex64::from_polar(1.0, unit.phi_v),
            Complex64::from_polar(1.0, unit.phi_h),
        ));
        let h2 = a_complex * Complex64::from_polar(rho, -mu2);
        sum += h2 * phi_m * h1;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::tests::reference_scenario;
    use crate::modem::{beamforming_config, dpolsk_slot_config};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use nalgebra::Vector3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn reference_layout_gain_matches_hand_evaluation() {
        let s = reference_scenario();
        let geom = link_geometry(&s).unwrap();
        // Hand-evaluated: Δ=2.5e-3 m², G=10^0.3, r1=r2=70.710678 m,
        // cos ζ = 1/√2 on both legs.
        let eta = effective_gain(&s, &geom).unwrap();
        assert_relative_eq!(eta, 6.515782689535244e-8, max_relative = 1e-12);
    }

    #[test]
    fn boresight_drops_the_directivity_taper() {
        let mut s = reference_scenario();
        s.source_position = s.ris_center + Vector3::x() * 30.0;
        s.receiver_position = s.ris_center + Vector3::x() * 55.0;
        let geom = link_geometry(&s).unwrap();
        let eta = effective_gain(&s, &geom).unwrap();
        let bare = s.unit_area() * (s.tx_gain * s.rx_gain).sqrt()
            / (4.0 * PI * geom.r1 * geom.r2);
        assert_relative_eq!(eta, bare, max_relative = 1e-12);
    }

    #[test]
    fn gain_is_inverse_in_each_leg_distance() {
        let s = reference_scenario();
        let mut far = s.clone();
        // Doubling the receiver leg along the same ray keeps ζ2 and halves η.
        far.receiver_position = s.ris_center + (s.receiver_position - s.ris_center) * 2.0;
        let eta_near = effective_gain(&s, &link_geometry(&s).unwrap()).unwrap();
        let eta_far = effective_gain(&far, &link_geometry(&far).unwrap()).unwrap();
        assert_relative_eq!(eta_far, eta_near / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn gain_is_symmetric_in_the_mirror_layout() {
        let s = reference_scenario();
        let mut swapped = s.clone();
        std::mem::swap(&mut swapped.source_position, &mut swapped.receiver_position);
        let a = effective_gain(&s, &link_geometry(&s).unwrap()).unwrap();
        let b = effective_gain(&swapped, &link_geometry(&swapped).unwrap()).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-14);
    }

    #[test]
    fn center_unit_has_zero_path_phase() {
        let mut s = reference_scenario();
        s.num_units_rows = 1;
        s.num_units_cols = 1;
        let geom = link_geometry(&s).unwrap();
        let psi = path_phases(&s, &unit_positions(&s), &geom);
        assert_eq!(psi, vec![0.0]);
    }

    #[test]
    fn single_offset_unit_composes_the_two_leg_phases() {
        let mut s = reference_scenario();
        s.source_position = Vector3::new(40.0, -10.0, 5.0);
        s.receiver_position = Vector3::new(30.0, 80.0, 10.0);
        s.num_units_rows = 1;
        s.num_units_cols = 2;
        let geom = link_geometry(&s).unwrap();
        let positions = unit_positions(&s);
        let psi = path_phases(&s, &positions, &geom);
        // Independent re-composition through the public pieces.
        let frame = RisFrame::from_normal(&s.ris_normal);
        let q1 = wave_vector(geom.arrival_elevation, geom.arrival_azimuth, s.carrier_wavelength);
        let q2 = wave_vector(geom.departure_elevation, geom.departure_azimuth, s.carrier_wavelength);
        for (p, &got) in positions.iter().zip(&psi) {
            let g = frame.to_local(&(p - s.ris_center));
            assert_relative_eq!(got, path_phase(&g, &q1) + path_phase(&g, &q2), max_relative = 1e-14);
        }
        // Hand-evaluated two-term values for this skewed layout.
        assert_relative_eq!(psi[0], 0.22275487061957566, max_relative = 1e-10);
        let delta = crate::modem::wrap_phase(psi[1] - psi[0]);
        assert_relative_eq!(delta, 5.837675565940435, max_relative = 1e-10);
    }

    #[test]
    fn mirror_layout_paths_share_one_phase() {
        // In the mirror-symmetric reference layout the arrival and departure
        // in-plane phase gradients cancel, so every unit's ψ is zero.
        let mut s = reference_scenario();
        s.num_units_rows = 2;
        s.num_units_cols = 3;
        let geom = link_geometry(&s).unwrap();
        for psi in path_phases(&s, &unit_positions(&s), &geom) {
            assert_abs_diff_eq!(psi, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn noise_is_exactly_zero_without_noise_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = noise_sample(0.0, &mut rng);
        assert_eq!(w.power(), 0.0);
    }

    #[test]
    fn noise_statistics_match_the_model() {
        let sigma2 = 0.37;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 1_000_000;
        let (mut pv, mut ph) = (0.0, 0.0);
        let mut cross = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let w = noise_sample(sigma2, &mut rng);
            pv += w.v.norm_sqr();
            ph += w.h.norm_sqr();
            cross += w.v * w.h.conj();
        }
        let nf = n as f64;
        // Per-component power within 1 % of σ².
        assert_relative_eq!(pv / nf, sigma2, max_relative = 0.01);
        assert_relative_eq!(ph / nf, sigma2, max_relative = 0.01);
        // Components uncorrelated: normalized cross term under 1 %.
        assert!((cross / nf).norm() / sigma2 < 0.01);
    }

    #[test]
    fn beamformed_wave_hits_the_textbook_form() {
        let s = reference_scenario();
        let budget = link_budget(&s).unwrap();
        let expected = budget.alpha / 2f64.sqrt();

        let u = effective_scattered_wave(&beamforming_config(&budget.psi, 0.0), &budget, &s).unwrap();
        assert_relative_eq!(u.v.re, expected, max_relative = 1e-12);
        assert_abs_diff_eq!(u.v.im, 0.0, epsilon = expected * 1e-12);
        assert_relative_eq!(u.h.re, expected, max_relative = 1e-12);

        let u = effective_scattered_wave(&beamforming_config(&budget.psi, PI), &budget, &s).unwrap();
        assert_relative_eq!(u.v.re, -expected, max_relative = 1e-12);
        assert_relative_eq!(u.h.re, expected, max_relative = 1e-12);
    }

    #[test]
    fn scattered_wave_matches_a_term_by_term_sum() {
        let mut s = reference_scenario();
        s.num_units_rows = 2;
        s.num_units_cols = 4;
        let budget = link_budget(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let pairs: Vec<(f64, f64)> =
            (0..8).map(|_| (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))).collect();
        let cfg = RisPhaseConfig::new(pairs.clone());
        let u = effective_scattered_wave(&cfg, &budget, &s).unwrap();
        // Brute-force sum written out independently of the implementation.
        let scale = (budget.eta * budget.eta * s.tx_power / 2.0).sqrt();
        let mut v = Complex64::new(0.0, 0.0);
        let mut h = Complex64::new(0.0, 0.0);
        for (&(phi_v, phi_h), &psi) in pairs.iter().zip(&budget.psi) {
            v += Complex64::from_polar(scale, phi_v - psi);
            h += Complex64::from_polar(scale, phi_h - psi);
        }
        assert_relative_eq!(u.v.re, v.re, max_relative = 1e-12, epsilon = scale * 1e-12);
        assert_relative_eq!(u.v.im, v.im, max_relative = 1e-12, epsilon = scale * 1e-12);
        assert_relative_eq!(u.h.re, h.re, max_relative = 1e-12, epsilon = scale * 1e-12);
        assert_relative_eq!(u.h.im, h.im, max_relative = 1e-12, epsilon = scale * 1e-12);
    }

    #[test]
    fn scattered_wave_rejects_wrong_config_size() {
        let s = reference_scenario();
        let budget = link_budget(&s).unwrap();
        let cfg = RisPhaseConfig::new([(0.0, 0.0); 3]);
        assert!(matches!(
            effective_scattered_wave(&cfg, &budget, &s),
            Err(Error::ConfigSizeMismatch { .. })
        ));
    }

    #[test]
    fn modulation_never_costs_beamforming_gain() {
        let s = reference_scenario();
        let budget = link_budget(&s).unwrap();
        for d in [false, true] {
            let u =
                effective_scattered_wave(&dpolsk_slot_config(d, &budget.psi), &budget, &s).unwrap();
            assert_relative_eq!(u.norm(), budget.alpha, max_relative = 1e-12);
        }
    }

    #[test]
    fn beamforming_beats_random_configs() {
        let mut s = reference_scenario();
        s.num_units_rows = 3;
        s.num_units_cols = 4;
        let budget = link_budget(&s).unwrap();
        let m = s.num_units();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let cfg = RisPhaseConfig::new(
                (0..m).map(|_| (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))),
            );
            let u = effective_scattered_wave(&cfg, &budget, &s).unwrap();
            assert!(u.norm() < budget.alpha);
        }
    }

    #[test]
    fn config_is_two_pi_periodic_downstream() {
        let s = reference_scenario();
        let budget = link_budget(&s).unwrap();
        let shifted: Vec<f64> = budget.psi.iter().map(|p| p + TAU).collect();
        let a = effective_scattered_wave(&beamforming_config(&budget.psi, 0.4), &budget, &s).unwrap();
        let b = effective_scattered_wave(&beamforming_config(&shifted, 0.4), &budget, &s).unwrap();
        assert_relative_eq!(a.v.re, b.v.re, max_relative = 1e-12, epsilon = budget.alpha * 1e-12);
        assert_relative_eq!(a.v.im, b.v.im, max_relative = 1e-12, epsilon = budget.alpha * 1e-12);
        assert_relative_eq!(a.h.re, b.h.re, max_relative = 1e-12, epsilon = budget.alpha * 1e-12);
        assert_relative_eq!(a.h.im, b.h.im, max_relative = 1e-12, epsilon = budget.alpha * 1e-12);
    }

    #[test]
    fn received_signal_edges() {
        let u = JonesVector::new(Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.25));
        let w = JonesVector::new(Complex64::new(0.1, -0.2), Complex64::new(0.3, 0.0));
        let y = received_signal(&u, 0.0, &JonesVector::ZERO);
        assert_eq!(y, u);
        let y = received_signal(&JonesVector::ZERO, 1.234, &w);
        assert_eq!(y, w);
        // The rotation is orthogonal: the signal part keeps its norm.
        for beta in [0.0, 0.7, 2.9, -1.1] {
            let y = received_signal(&u, beta, &w);
            let signal = y + w.scale(Complex64::new(-1.0, 0.0));
            assert_relative_eq!(signal.norm(), u.norm(), max_relative = 1e-12);
        }
    }

    #[test]
    fn single_unit_identity_channel() {
        let mut s = reference_scenario();
        s.num_units_rows = 1;
        s.num_units_cols = 1;
        s.rotation_angle = 0.0;
        let geom = link_geometry(&s).unwrap();
        let positions = unit_positions(&s);
        let cfg = RisPhaseConfig::new([(0.0, 0.0)]);
        let h = assemble_full_channel(&cfg, &s, &geom, &positions).unwrap();
        // Center unit: zero path phase, so H is η times the identity.
        let eta = effective_gain(&s, &geom).unwrap();
        assert_relative_eq!(h[(0, 0)].re, eta, max_relative = 1e-12);
        assert_abs_diff_eq!(h[(0, 0)].im, 0.0, epsilon = eta * 1e-12);
        assert_abs_diff_eq!(h[(0, 1)].norm(), 0.0, epsilon = eta * 1e-12);
        assert_abs_diff_eq!(h[(1, 0)].norm(), 0.0, epsilon = eta * 1e-12);
        assert_relative_eq!(h[(1, 1)].re, eta, max_relative = 1e-12);
    }

    #[test]
    fn each_summand_carries_the_full_gain() {
        // Unit phase pairs are unitary and the rotation is orthogonal, so a
        // single unit's matrix has Frobenius norm η·√2 regardless of phases.
        let mut s = reference_scenario();
        s.num_units_rows = 1;
        s.num_units_cols = 1;
        s.rotation_angle = 1.1;
        let geom = link_geometry(&s).unwrap();
        let positions = unit_positions(&s);
        let eta = effective_gain(&s, &geom).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let cfg =
                RisPhaseConfig::new([(rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))]);
            let h = assemble_full_channel(&cfg, &s, &geom, &positions).unwrap();
            let frob = h.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            assert_relative_eq!(frob, eta * 2f64.sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn full_matrix_and_simplified_paths_agree() {
        // The module's central correctness check: for arbitrary (not just
        // beamforming) configurations, H·x with x = √(p_t/2)·[1,1]ᵀ equals
        // A(β)·u from the simplified path.
        let mut s = reference_scenario();
        s.source_position = Vector3::new(40.0, -10.0, 5.0);
        s.receiver_position = Vector3::new(30.0, 80.0, 10.0);
        s.num_units_rows = 2;
        s.num_units_cols = 3;
        s.rotation_angle = -0.83;
        let geom = link_geometry(&s).unwrap();
        let positions = unit_positions(&s);
        let budget = link_budget(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let cfg = RisPhaseConfig::new(
                (0..s.num_units()).map(|_| (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))),
            );
            let h = assemble_full_channel(&cfg, &s, &geom, &positions).unwrap();
            let x = Vector2::from_element(Complex64::new((s.tx_power / 2.0).sqrt(), 0.0));
            let via_matrix = h * x;
            let u = effective_scattered_wave(&cfg, &budget, &s).unwrap();
            let via_simplified = apply_rotation(&rotation_matrix(s.rotation_angle), &u);
            let err = ((via_matrix[0] - via_simplified.v).norm_sqr()
                + (via_matrix[1] - via_simplified.h).norm_sqr())
            .sqrt();
            let scale = via_simplified.norm().max((via_matrix[0].norm_sqr() + via_matrix[1].norm_sqr()).sqrt());
            assert!(err <= 1e-10 * scale, "relative mismatch {}", err / scale);
        }
    }

    #[test]
    fn snr_scales_with_the_squared_unit_count() {
        let mut small = reference_scenario();
        small.num_units_rows = 1;
        small.num_units_cols = 1;
        let mut large = small.clone();
        large.num_units_cols = 5;
        let a = link_budget(&small).unwrap();
        let b = link_budget(&large).unwrap();
        assert_relative_eq!(b.gamma / a.gamma, 25.0, max_relative = 1e-12);
        assert_relative_eq!(b.alpha / a.alpha, 5.0, max_relative = 1e-12);
    }

    #[test]
    fn budget_internal_consistency() {
        let s = reference_scenario();
        let b = link_budget(&s).unwrap();
        assert!(b.eta > 0.0);
        assert_eq!(b.psi.len(), s.num_units());
        assert_relative_eq!(
            b.alpha,
            s.num_units() as f64 * b.eta * s.tx_power.sqrt(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            b.gamma,
            b.alpha * b.alpha / (2.0 * s.noise_power),
            max_relative = 1e-12
        );
    }

    #[test]
    fn zero_power_budgets_avoid_nan() {
        let mut s = reference_scenario();
        s.noise_power = 0.0;
        assert_eq!(link_budget(&s).unwrap().gamma, f64::INFINITY);
        s.tx_power = 0.0;
        assert_eq!(link_budget(&s).unwrap().gamma, 0.0);
        s.noise_power = 2.5e-13;
        assert_eq!(link_budget(&s).unwrap().gamma, 0.0);
    }
}
