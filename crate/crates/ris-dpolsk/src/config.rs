//! JSON configuration: scenario, run, sweep, and output blocks with
//! engineering units (dBi, dBm, degrees) at the boundary. All conversions
//! to linear/SI happen exactly once, here; the rest of the library never
//! sees a decibel.
//!
//! Every field has a default, so `{}` is a complete config: the reference
//! link (mirror-symmetric 50 m legs, 0.1 m carrier, half-wavelength units,
//! 3 dBi antennas, 8 dBm transmit, −96 dBm noise, 30° rotation) with a
//! 21×22-unit surface and a seven-point area sweep.

use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Scenario;
use crate::simulation::Scheme;

/// Power ratio from decibels: 10^{x/10}.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Watts from dB-milliwatts: 10^{x/10} mW.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

/// Top-level configuration document. Unknown keys are rejected so typos
/// can't silently fall back to defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: ScenarioConfig,
    pub run: RunConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

/// Scenario block: geometry in meters, gains in dBi, powers in dBm, the
/// rotation angle in degrees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub source_position_m: [f64; 3],
    pub receiver_position_m: [f64; 3],
    pub ris_center_m: [f64; 3],
    pub ris_normal: [f64; 3],
    pub unit_side_m: f64,
    pub num_units_rows: usize,
    pub num_units_cols: usize,
    pub carrier_wavelength_m: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub tx_power_dbm: f64,
    pub noise_power_dbm: f64,
    pub rotation_beta_deg: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            source_position_m: [50.0, 0.0, 0.0],
            receiver_position_m: [50.0, 100.0, 0.0],
            ris_center_m: [0.0, 50.0, 0.0],
            ris_normal: [1.0, 0.0, 0.0],
            unit_side_m: 0.05,
            num_units_rows: 21,
            num_units_cols: 22,
            carrier_wavelength_m: 0.1,
            tx_gain_dbi: 3.0,
            rx_gain_dbi: 3.0,
            tx_power_dbm: 8.0,
            noise_power_dbm: -96.0,
            rotation_beta_deg: 30.0,
        }
    }
}

/// Run block: which schemes to simulate and the Monte Carlo knobs.
/// `num_bits` is signed so that a negative count reaches validation (with
/// a field-named error) instead of dying inside the JSON parser.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schemes: Vec<Scheme>,
    pub num_bits: i64,
    pub master_seed: u64,
    /// Rotation-estimate error std-devs to sweep (coherent scheme only).
    pub sigma_e_deg: Vec<f64>,
    pub sigma_e_per_burst: bool,
    pub d_init: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schemes: vec![Scheme::Dpolsk, Scheme::Cpolsk],
            num_bits: 100_000,
            master_seed: 1,
            sigma_e_deg: vec![0.0],
            sigma_e_per_burst: false,
            d_init: true,
        }
    }
}

/// Sweep block: total surface areas to simulate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub areas_m2: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        // Multiples of the default unit area that factor exactly into
        // r×(r+1) near-square grids: 156, 240, 342, 462, 600, 756, 930
        // units, spanning SNRs from ≈ 1 dB to ≈ 17 dB.
        Self {
            areas_m2: vec![0.39, 0.6, 0.855, 1.155, 1.5, 1.89, 2.325],
        }
    }
}

/// Output block: optional CSV destination and float precision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// CSV path; stdout when absent.
    pub csv_path: Option<String>,
    /// Significant digits for emitted floats.
    pub precision: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            csv_path: None,
            precision: 12,
        }
    }
}

impl ConfigFile {
    /// Converts the scenario block to internal linear/SI units and runs the
    /// structural validation.
    pub fn to_scenario(&self) -> Result<Scenario> {
        let sc = &self.scenario;
        let scenario = Scenario {
            source_position: Vector3::from(sc.source_position_m),
            receiver_position: Vector3::from(sc.receiver_position_m),
            ris_center: Vector3::from(sc.ris_center_m),
            ris_normal: Vector3::from(sc.ris_normal),
            unit_side: sc.unit_side_m,
            num_units_rows: sc.num_units_rows,
            num_units_cols: sc.num_units_cols,
            carrier_wavelength: sc.carrier_wavelength_m,
            tx_gain: db_to_linear(sc.tx_gain_dbi),
            rx_gain: db_to_linear(sc.rx_gain_dbi),
            tx_power: dbm_to_watts(sc.tx_power_dbm),
            noise_power: dbm_to_watts(sc.noise_power_dbm),
            rotation_angle: sc.rotation_beta_deg.to_radians(),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Validates the non-scenario blocks; error messages name the offending
    /// field with its block prefix.
    pub fn validate(&self) -> Result<()> {
        self.to_scenario()?;
        if self.run.schemes.is_empty() {
            return Err(Error::validation("run.schemes", "must name at least one scheme"));
        }
        if self.run.num_bits < 1 {
            return Err(Error::validation("run.num_bits", "must be at least 1"));
        }
        for &s in &self.run.sigma_e_deg {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::validation(
                    "run.sigma_e_deg",
                    "entries must be finite and nonnegative",
                ));
            }
        }
        for &a in &self.sweep.areas_m2 {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::validation(
                    "sweep.areas_m2",
                    "entries must be finite and positive",
                ));
            }
        }
        if self.output.precision < 1 || self.output.precision > 17 {
            return Err(Error::validation(
                "output.precision",
                "must be between 1 and 17 significant digits",
            ));
        }
        Ok(())
    }

    /// Number of data bits as the unsigned count the simulator wants.
    /// Call only after [`ConfigFile::validate`].
    pub fn num_bits(&self) -> u64 {
        self.run.num_bits as u64
    }
}

/// Reads, parses, and validates a JSON config file.
pub fn parse_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)?;
    let config: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::io::Write;

    #[test]
    fn decibel_conversions_are_exact() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_eq!(db_to_linear(10.0), 10.0);
        assert_relative_eq!(db_to_linear(3.0), 1.9952623149688795, max_relative = 1e-15);
        assert_eq!(dbm_to_watts(0.0), 1e-3);
        assert_relative_eq!(dbm_to_watts(8.0), 6.309573444801933e-3, max_relative = 1e-15);
        assert_relative_eq!(dbm_to_watts(-96.0), 2.51188643150958e-13, max_relative = 1e-15);
    }

    #[test]
    fn empty_document_yields_the_full_default() {
        let parsed: ConfigFile = serde_json::from_str("{}").unwrap();
        assert_eq!(parsed, ConfigFile::default());
        parsed.validate().unwrap();
    }

    #[test]
    fn default_scenario_matches_the_reference_link() {
        let s = ConfigFile::default().to_scenario().unwrap();
        let reference = crate::geometry::tests::reference_scenario();
        assert_eq!(s, reference);
        // Spot the converted powers explicitly.
        assert_relative_eq!(s.tx_power, 6.309573444801933e-3, max_relative = 1e-15);
        assert_relative_eq!(s.noise_power, 2.51188643150958e-13, max_relative = 1e-15);
        assert_relative_eq!(s.rotation_angle, std::f64::consts::PI / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn partial_blocks_take_per_field_defaults() {
        // Noise power omitted from a present scenario block: the default
        // −96 dBm still applies.
        let parsed: ConfigFile =
            serde_json::from_str(r#"{"scenario": {"tx_power_dbm": 11.0}}"#).unwrap();
        let s = parsed.to_scenario().unwrap();
        assert_relative_eq!(s.noise_power, 2.51188643150958e-13, max_relative = 1e-15);
        assert_relative_eq!(s.tx_power, dbm_to_watts(11.0), max_relative = 1e-15);
    }

    #[test]
    fn json_round_trip_preserves_the_config() {
        let original = ConfigFile::default();
        let text = serde_json::to_string_pretty(&original).unwrap();
        let reparsed: ConfigFile = serde_json::from_str(&text).unwrap();
        assert_eq!(original, reparsed);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"scenario": {"bogus": 1}}"#).is_err());
        assert!(serde_json::from_str::<ConfigFile>(r#"{"runs": {}}"#).is_err());
    }

    #[test]
    fn negative_bit_count_names_the_field() {
        let parsed: ConfigFile =
            serde_json::from_str(r#"{"run": {"num_bits": -5}}"#).unwrap();
        match parsed.validate() {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "run.num_bits"),
            other => panic!("expected a named validation error, got {other:?}"),
        }
    }

    #[test]
    fn bad_block_values_name_their_fields() {
        let cases: [(&str, &str); 4] = [
            (r#"{"run": {"schemes": []}}"#, "run.schemes"),
            (r#"{"run": {"sigma_e_deg": [-1.0]}}"#, "run.sigma_e_deg"),
            (r#"{"sweep": {"areas_m2": [0.0]}}"#, "sweep.areas_m2"),
            (r#"{"output": {"precision": 0}}"#, "output.precision"),
        ];
        for (text, expected) in cases {
            let parsed: ConfigFile = serde_json::from_str(text).unwrap();
            match parsed.validate() {
                Err(Error::Validation { field, .. }) => assert_eq!(field, expected),
                other => panic!("{text}: expected validation error, got {other:?}"),
            }
        }
    }

    #[test]
    fn parse_config_reads_files_and_reports_io() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, r#"{{"run": {{"num_bits": 500, "master_seed": 9}}}}"#).unwrap();
        let config = parse_config(file.path()).unwrap();
        assert_eq!(config.run.num_bits, 500);
        assert_eq!(config.run.master_seed, 9);

        assert!(matches!(
            parse_config(Path::new("/nonexistent/config.json")),
            Err(Error::Io(_))
        ));

        let mut bad = tempfile::NamedTempFile::new().unwrap();
        write!(bad, "not json").unwrap();
        assert!(matches!(parse_config(bad.path()), Err(Error::Parse(_))));
    }
}
