//! Monte Carlo BER engine: streams bits through the modeled link slot by
//! slot, detects, counts errors, and attaches Wilson confidence intervals
//! and the matching theory value to each result row.
//!
//! Reproducibility contract: every random draw comes from a counter-based
//! substream keyed by (master seed, purpose, slot index), so results are
//! bit-identical regardless of how the slot range is chunked across
//! threads. Work is split into fixed-size chunks (never sized by worker
//! count) and reduced with a commutative sum of error counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::channel::{effective_gain, effective_scattered_wave, link_budget, noise_sample, LinkBudget};
use crate::error::{Error, Result};
use crate::geometry::{link_geometry, Scenario};
use crate::modem::{cpolsk_slot_config, dpolsk_slot_config};
use crate::polarization::{
    apply_rotation, cpolsk_detect, dpolsk_detect, rotation_matrix, stokes, JonesVector,
};
use crate::quadrature::QuadratureSpec;
use crate::theory::{cpolsk_ber, dpolsk_ber};

/// Modulation scheme selector.
#[derive(Clone, Copy, Debug, Eq, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Differential encoding in polarization-state changes, non-coherent
    /// Stokes-space detection; needs no rotation knowledge.
    Dpolsk,
    /// Coherent polarization keying; the receiver de-rotates with its
    /// (possibly erroneous) rotation estimate before deciding.
    Cpolsk,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scheme::Dpolsk => f.write_str("dpolsk"),
            Scheme::Cpolsk => f.write_str("cpolsk"),
        }
    }
}

/// Everything one Monte Carlo run needs.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub scheme: Scheme,
    pub scenario: Scenario,
    /// Number of data bits (the differential scheme adds one pilot slot).
    pub num_bits: u64,
    /// Master seed; all substreams derive from it.
    pub master_seed: u64,
    /// Std-dev (rad) of the receiver's rotation-estimate error. Only the
    /// coherent scheme consumes it.
    pub sigma_e: f64,
    /// Draw one estimation error for the whole run instead of per slot.
    pub sigma_e_per_burst: bool,
    /// Differential reference bit carried by the pilot slot.
    pub d_init: bool,
}

impl RunSpec {
    /// Validates the run parameters and the embedded scenario.
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.num_bits == 0 {
            return Err(Error::validation("run.num_bits", "must be at least 1"));
        }
        if !(self.sigma_e >= 0.0 && self.sigma_e.is_finite()) {
            return Err(Error::validation(
                "run.sigma_e",
                "must be finite and nonnegative",
            ));
        }
        Ok(())
    }
}

/// One BER result row: the operating point, the simulated estimate with its
/// 95 % Wilson interval, and the matching theoretical value.
#[derive(Clone, Debug, PartialEq)]
pub struct BerRecord {
    /// Total surface area M·Δ (m²).
    pub area_m2: f64,
    /// Number of reflecting units.
    pub num_units: usize,
    /// Average received SNR (linear).
    pub gamma_linear: f64,
    /// Average received SNR (dB).
    pub gamma_db: f64,
    /// errors_count / trials.
    pub ber_simulated: f64,
    pub errors_count: u64,
    /// Number of data bits simulated.
    pub trials: u64,
    /// Lower edge of the 95 % Wilson interval.
    pub ci_low: f64,
    /// Upper edge of the 95 % Wilson interval.
    pub ci_high: f64,
    /// Theoretical BER of the run's scheme at this SNR.
    pub ber_theory: f64,
}

/// Fixed slot-chunk size for parallel execution. Results never depend on
/// it, but it must not depend on the worker count either, so it is a
/// constant rather than a heuristic.
const CHUNK: usize = 65_536;

/// Substream purposes; each (purpose, slot) pair owns an independent
/// ChaCha stream.
const PURPOSE_BIT: u8 = 1;
const PURPOSE_NOISE: u8 = 2;
const PURPOSE_EST: u8 = 3;

/// The RNG for one (purpose, slot) substream: the master seed and purpose
/// tag form the ChaCha key, the slot index selects the stream.
fn slot_rng(master_seed: u64, purpose: u8, slot: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8] = purpose;
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(slot);
    rng
}

/// The data bit carried in a given slot.
fn slot_bit(master_seed: u64, slot: u64) -> bool {
    slot_rng(master_seed, PURPOSE_BIT, slot).gen()
}

/// 95 % two-sided Wilson score interval for `errors` out of `trials`.
///
/// Panics on contract violations (errors > trials, zero trials, confidence
/// outside (0, 1)); these are programming errors, not data conditions.
pub fn wilson_interval(errors: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials >= 1, "wilson_interval needs at least one trial");
    assert!(errors <= trials, "more errors than trials");
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must be in (0, 1)"
    );
    let z = Normal::new(0.0, 1.0)
        .expect("unit normal")
        .inverse_cdf(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Theoretical BER of a scheme at SNR γ, using default quadrature
/// tolerances for the differential double integral.
pub fn ber_theory(scheme: Scheme, gamma: f64) -> Result<f64> {
    match scheme {
        Scheme::Cpolsk => Ok(cpolsk_ber(gamma)),
        Scheme::Dpolsk => dpolsk_ber(gamma, &QuadratureSpec::default()),
    }
}

/// Near-square grid factorization for a requested unit count:
/// rows = ⌊√M⌋, cols = ⌈M/rows⌉. The realized count rows·cols may slightly
/// exceed the request; far-field results depend on the count only through
/// the combined amplitude, so the shape is cosmetic but fixed.
pub fn grid_for_units(m: usize) -> (usize, usize) {
    assert!(m >= 1, "grid needs at least one unit");
    let mut rows = (m as f64).sqrt() as usize;
    // Guard against floating-point sqrt landing one off.
    while (rows + 1) * (rows + 1) <= m {
        rows += 1;
    }
    while rows * rows > m {
        rows -= 1;
    }
    (rows, m.div_ceil(rows))
}

/// Rescales the transmit power so the scenario's average received SNR hits
/// `gamma` exactly: p_t = 2γσ²/(M·η)².
pub fn with_target_snr(scenario: &Scenario, gamma: f64) -> Result<Scenario> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::validation(
            "run.target_snr",
            "must be finite and nonnegative",
        ));
    }
    scenario.validate()?;
    let eta = effective_gain(scenario, &link_geometry(scenario)?)?;
    let m = scenario.num_units() as f64;
    let mut out = scenario.clone();
    out.tx_power = 2.0 * gamma * scenario.noise_power / (m * eta).powi(2);
    Ok(out)
}

/// Runs the spec's scheme and returns its result row.
pub fn run(spec: &RunSpec) -> Result<BerRecord> {
    match spec.scheme {
        Scheme::Dpolsk => run_dpolsk(spec),
        Scheme::Cpolsk => run_cpolsk(spec),
    }
}

/// Differential run: a pilot slot carrying `d_init` followed by one slot
/// per data bit; each detection compares the received Stokes vectors of
/// two successive slots. Slot k ≥ 1 carries bit k; the pilot is slot 0 and
/// is excluded from the trial count.
pub fn run_dpolsk(spec: &RunSpec) -> Result<BerRecord> {
    spec.validate()?;
    if spec.scheme != Scheme::Dpolsk {
        return Err(Error::validation(
            "run.scheme",
            "differential runner invoked with a non-differential spec",
        ));
    }
    let budget = link_budget(&spec.scenario)?;
    let sigma2 = spec.scenario.noise_power;
    let seed = spec.master_seed;

    // The scattered wave takes one of two values per slot; rotate both once.
    let rot = rotation_matrix(spec.scenario.rotation_angle);
    let rotated_u: [JonesVector; 2] = [
        apply_rotation(&rot, &effective_scattered_wave(&dpolsk_slot_config(false, &budget.psi), &budget, &spec.scenario)?),
        apply_rotation(&rot, &effective_scattered_wave(&dpolsk_slot_config(true, &budget.psi), &budget, &spec.scenario)?),
    ];
    let received_stokes = |d: bool, slot: u64| {
        let mut rng = slot_rng(seed, PURPOSE_NOISE, slot);
        let w = noise_sample(sigma2, &mut rng);
        stokes(&(rotated_u[d as usize] + w)).sub()
    };

    let n = usize::try_from(spec.num_bits).expect("bit count fits in memory");

    // Pass 1: draw every data bit (slots 1..=n) and record each chunk's
    // XOR, the amount by which it advances the differential state.
    let mut bits = vec![false; n];
    let chunk_xors: Vec<bool> = bits
        .par_chunks_mut(CHUNK)
        .enumerate()
        .map(|(c, slice)| {
            let mut xor = false;
            for (i, b) in slice.iter_mut().enumerate() {
                *b = slot_bit(seed, (1 + c * CHUNK + i) as u64);
                xor ^= *b;
            }
            xor
        })
        .collect();

    // Exclusive prefix scan: the differential state entering each chunk.
    let mut entering = Vec::with_capacity(chunk_xors.len());
    let mut acc = spec.d_init;
    for xor in &chunk_xors {
        entering.push(acc);
        acc ^= xor;
    }

    // Pass 2: detect each chunk independently. A chunk re-derives only its
    // lead-in slot (the last slot of the previous chunk, or the pilot);
    // per-slot noise substreams make that recomputation exact.
    let errors: u64 = bits
        .par_chunks(CHUNK)
        .zip(entering.par_iter())
        .enumerate()
        .map(|(c, (slice, &d_entering))| {
            let first_slot = (1 + c * CHUNK) as u64;
            let mut d_prev = d_entering;
            let mut s_prev = received_stokes(d_prev, first_slot - 1);
            let mut errs = 0u64;
            for (i, &bit) in slice.iter().enumerate() {
                let d = d_prev ^ bit;
                let s = received_stokes(d, first_slot + i as u64);
                if dpolsk_detect(&s, &s_prev) != bit {
                    errs += 1;
                }
                s_prev = s;
                d_prev = d;
            }
            errs
        })
        .sum();

    make_record(spec, &budget, errors)
}

/// Coherent run: one slot per bit (slots 0..n), the receiver de-rotates
/// with β̂ = β + ε before deciding. ε is drawn per slot by default, or once
/// per run in per-burst mode.
pub fn run_cpolsk(spec: &RunSpec) -> Result<BerRecord> {
    spec.validate()?;
    if spec.scheme != Scheme::Cpolsk {
        return Err(Error::validation(
            "run.scheme",
            "coherent runner invoked with a non-coherent spec",
        ));
    }
    let budget = link_budget(&spec.scenario)?;
    let sigma2 = spec.scenario.noise_power;
    let beta = spec.scenario.rotation_angle;
    let seed = spec.master_seed;

    let rot = rotation_matrix(beta);
    let rotated_u: [JonesVector; 2] = [
        apply_rotation(&rot, &effective_scattered_wave(&cpolsk_slot_config(false, &budget.psi), &budget, &spec.scenario)?),
        apply_rotation(&rot, &effective_scattered_wave(&cpolsk_slot_config(true, &budget.psi), &budget, &spec.scenario)?),
    ];
    let estimate_error = |slot: u64| -> f64 {
        let draw: f64 = slot_rng(seed, PURPOSE_EST, slot).sample(StandardNormal);
        spec.sigma_e * draw
    };
    let burst_error = spec.sigma_e_per_burst.then(|| estimate_error(0));

    let n = spec.num_bits;
    let num_chunks = n.div_ceil(CHUNK as u64);
    let errors: u64 = (0..num_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK as u64;
            let end = n.min(start + CHUNK as u64);
            let mut errs = 0u64;
            for slot in start..end {
                let bit = slot_bit(seed, slot);
                let mut rng = slot_rng(seed, PURPOSE_NOISE, slot);
                let w = noise_sample(sigma2, &mut rng);
                let y = rotated_u[bit as usize] + w;
                let beta_hat = beta + burst_error.unwrap_or_else(|| estimate_error(slot));
                if cpolsk_detect(&y, beta_hat) != bit {
                    errs += 1;
                }
            }
            errs
        })
        .sum();

    make_record(spec, &budget, errors)
}

/// Assembles the result row for a finished run.
fn make_record(spec: &RunSpec, budget: &LinkBudget, errors: u64) -> Result<BerRecord> {
    let trials = spec.num_bits;
    let ber = errors as f64 / trials as f64;
    let (ci_low, ci_high) = wilson_interval(errors, trials, 0.95);
    Ok(BerRecord {
        area_m2: spec.scenario.ris_area(),
        num_units: spec.scenario.num_units(),
        gamma_linear: budget.gamma,
        gamma_db: 10.0 * budget.gamma.log10(),
        ber_simulated: ber,
        errors_count: errors,
        trials,
        ci_low,
        ci_high,
        ber_theory: ber_theory(spec.scheme, budget.gamma)?,
    })
}

/// Runs the base spec's scheme once per requested area. Each area maps to
/// M = round(area/Δ) units arranged on the near-square grid; the record
/// reports the realized count and realized area M·Δ.
pub fn sweep_area(areas: &[f64], base: &RunSpec) -> Result<Vec<BerRecord>> {
    let unit_area = base.scenario.unit_area();
    let mut records = Vec::with_capacity(areas.len());
    for &area in areas {
        if !(area > 0.0) || (area / unit_area).round() < 1.0 {
            return Err(Error::AreaTooSmall {
                area_m2: area,
                unit_area_m2: unit_area,
            });
        }
        let m = (area / unit_area).round() as usize;
        let (rows, cols) = grid_for_units(m);
        let mut spec = base.clone();
        spec.scenario.num_units_rows = rows;
        spec.scenario.num_units_cols = cols;
        records.push(run(&spec)?);
    }
    Ok(records)
}
