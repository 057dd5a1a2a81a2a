//! Surface phase programming: joint beamforming + polarization control, the
//! differential encoder, and the per-slot phase rules for both signaling
//! schemes.
//!
//! Bits are `bool`s (`true` = 1). The per-unit phase pair determines both
//! where the scattered energy goes (common phase, beamforming) and the
//! polarization state it carries (vertical/horizontal phase difference).

use std::f64::consts::{PI, TAU};

/// Induced phase pair of one reflecting unit, each wrapped to [0, 2π).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitPhases {
    /// Phase applied to the vertical polarization (rad).
    pub phi_v: f64,
    /// Phase applied to the horizontal polarization (rad).
    pub phi_h: f64,
}

impl UnitPhases {
    /// Vertical-minus-horizontal phase difference, wrapped to [0, 2π). This
    /// is the knob that selects the polarization state of the scattered wave.
    pub fn delta_phi(&self) -> f64 {
        wrap_phase(self.phi_v - self.phi_h)
    }
}

/// One phase configuration of the whole surface for one scattering slot.
#[derive(Clone, Debug, PartialEq)]
pub struct RisPhaseConfig {
    units: Vec<UnitPhases>,
}

impl RisPhaseConfig {
    /// Builds a configuration from raw (vertical, horizontal) phase pairs,
    /// wrapping every value into [0, 2π).
    pub fn new(pairs: impl IntoIterator<Item = (f64, f64)>) -> Self {
        RisPhaseConfig {
            units: pairs
                .into_iter()
                .map(|(v, h)| UnitPhases { phi_v: wrap_phase(v), phi_h: wrap_phase(h) })
                .collect(),
        }
    }

    pub fn units(&self) -> &[UnitPhases] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }
}

/// Reduces an angle into [0, 2π). `rem_euclid` alone can round a tiny
/// negative input back up to exactly 2π, so that edge is folded to 0.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Running differential-encoder state: the most recent encoded bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DifferentialState {
    d_prev: bool,
}

impl DifferentialState {
    pub fn new(d_init: bool) -> Self {
        DifferentialState { d_prev: d_init }
    }

    /// Absorbs one information bit and returns the encoded bit
    /// d_k = b_k ⊕ d_{k−1}.
    pub fn push(&mut self, b: bool) -> bool {
        self.d_prev ^= b;
        self.d_prev
    }

    pub fn current(&self) -> bool {
        self.d_prev
    }
}

/// Phase rule that points the scattered beam at the receiver: the horizontal
/// phase cancels each unit's path phase and the vertical phase adds a common
/// offset `delta_phi` on top, so all M contributions combine coherently while
/// sharing one polarization state.
pub fn beamforming_config(psi: &[f64], delta_phi: f64) -> RisPhaseConfig {
    RisPhaseConfig::new(psi.iter().map(|&p| (p + delta_phi, p)))
}

/// Differentially encodes a bit stream: d_k = b_k ⊕ d_{k−1}, starting from
/// `d_init`. Output length equals input length.
pub fn differential_encode(bits: &[bool], d_init: bool) -> Vec<bool> {
    let mut state = DifferentialState::new(d_init);
    bits.iter().map(|&b| state.push(b)).collect()
}

/// Slot rule for the differential scheme: beamform, and pick the
/// polarization state from the encoded bit — slant 45° (Δφ = 0) for d = 1,
/// slant −45° (Δφ = π) for d = 0.
pub fn dpolsk_slot_config(d_k: bool, psi: &[f64]) -> RisPhaseConfig {
    let delta_phi = if d_k { 0.0 } else { PI };
    beamforming_config(psi, delta_phi)
}

/// Slot rule for the coherent benchmark: identical mapping, driven by the
/// raw information bit with no differential pre-coding.
pub fn cpolsk_slot_config(b_k: bool, psi: &[f64]) -> RisPhaseConfig {
    dpolsk_slot_config(b_k, psi)
}
