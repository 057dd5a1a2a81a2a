//! Scene layout: distances, incidence/departure angles, plane-wave vectors,
//! and per-unit path phases for the surface-scattered link.
//!
//! The surface has its own right-handed frame: the normal is local x, grid
//! columns span local y, grid rows span local z. Elevation/azimuth angles and
//! wave vectors are always expressed in that frame.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Unit-norm tolerance for the surface normal.
const NORMAL_TOL: f64 = 1e-12;

/// Full physical description of one link: endpoint positions, surface layout,
/// RF powers and gains, and the polarization rotation angle of the
/// surface-to-receiver leg.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    /// Source antenna position (m).
    pub source_position: Vector3<f64>,
    /// Receiver antenna position (m).
    pub receiver_position: Vector3<f64>,
    /// Geometric center of the reflecting surface (m).
    pub ris_center: Vector3<f64>,
    /// Unit normal of the surface plane; both endpoints must lie strictly on
    /// this side.
    pub ris_normal: Vector3<f64>,
    /// Side length of one square reflecting unit (m); unit area is side².
    pub unit_side: f64,
    /// Grid rows (units along local z).
    pub num_units_rows: usize,
    /// Grid columns (units along local y).
    pub num_units_cols: usize,
    /// Carrier wavelength (m).
    pub carrier_wavelength: f64,
    /// Transmit antenna gain (linear).
    pub tx_gain: f64,
    /// Receive antenna gain (linear).
    pub rx_gain: f64,
    /// Transmit power (W). Zero is allowed (no-signal runs).
    pub tx_power: f64,
    /// Noise power per polarization component (W). Zero is allowed
    /// (noiseless runs).
    pub noise_power: f64,
    /// Polarization rotation angle β of the surface-to-receiver leg (rad).
    pub rotation_angle: f64,
}

impl Scenario {
    /// Total number of reflecting units M = rows · cols.
    pub fn num_units(&self) -> usize {
        self.num_units_rows * self.num_units_cols
    }

    /// Physical area of one reflecting unit (m²).
    pub fn unit_area(&self) -> f64 {
        self.unit_side * self.unit_side
    }

    /// Total physical surface area M · Δ (m²).
    pub fn ris_area(&self) -> f64 {
        self.num_units() as f64 * self.unit_area()
    }

    /// Checks every structural invariant; error messages name the field.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("source_position", &self.source_position),
            ("receiver_position", &self.receiver_position),
            ("ris_center", &self.ris_center),
            ("ris_normal", &self.ris_normal),
        ] {
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::validation(name, "components must be finite"));
            }
        }
        if (self.ris_normal.norm() - 1.0).abs() > NORMAL_TOL {
            return Err(Error::validation(
                "ris_normal",
                format!("must have unit norm, got {}", self.ris_normal.norm()),
            ));
        }
        if !(self.unit_side.is_finite() && self.unit_side > 0.0) {
            return Err(Error::validation("unit_side", "must be positive"));
        }
        if self.num_units_rows == 0 {
            return Err(Error::validation("num_units_rows", "must be at least 1"));
        }
        if self.num_units_cols == 0 {
            return Err(Error::validation("num_units_cols", "must be at least 1"));
        }
        if !(self.carrier_wavelength.is_finite() && self.carrier_wavelength > 0.0) {
            return Err(Error::validation("carrier_wavelength", "must be positive"));
        }
        if !(self.tx_gain.is_finite() && self.tx_gain > 0.0) {
            return Err(Error::validation("tx_gain", "must be positive"));
        }
        if !(self.rx_gain.is_finite() && self.rx_gain > 0.0) {
            return Err(Error::validation("rx_gain", "must be positive"));
        }
        if !(self.tx_power.is_finite() && self.tx_power >= 0.0) {
            return Err(Error::validation("tx_power", "must be finite and non-negative"));
        }
        if !(self.noise_power.is_finite() && self.noise_power >= 0.0) {
            return Err(Error::validation("noise_power", "must be finite and non-negative"));
        }
        if !self.rotation_angle.is_finite() {
            return Err(Error::validation("rotation_angle", "must be finite"));
        }
        // Both endpoints strictly on the normal side of the surface plane,
        // so the incidence/departure angles stay in [0, pi/2).
        for (name, pos) in [
            ("source_position", &self.source_position),
            ("receiver_position", &self.receiver_position),
        ] {
            if (pos - self.ris_center).dot(&self.ris_normal) <= 0.0 {
                return Err(Error::validation(
                    name,
                    "must lie strictly on the surface-normal side of the surface plane",
                ));
            }
        }
        Ok(())
    }
}

/// Distances and angles of one concrete link, all derived from a [`Scenario`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkGeometry {
    /// Source-to-surface distance (m).
    pub r1: f64,
    /// Surface-to-receiver distance (m).
    pub r2: f64,
    /// Angle between the surface normal and the incident direction (rad).
    pub zeta1: f64,
    /// Angle between the surface normal and the departure direction (rad).
    pub zeta2: f64,
    /// Elevation of the arrival direction in the surface frame (rad).
    pub arrival_elevation: f64,
    /// Azimuth of the arrival direction in the surface frame (rad).
    pub arrival_azimuth: f64,
    /// Elevation of the departure direction in the surface frame (rad).
    pub departure_elevation: f64,
    /// Azimuth of the departure direction in the surface frame (rad).
    pub departure_azimuth: f64,
}

/// Right-handed orthonormal frame attached to the surface: `local_x` is the
/// normal, the grid spans `local_y` (columns) and `local_z` (rows).
#[derive(Clone, Copy, Debug)]
pub struct RisFrame {
    pub local_x: Vector3<f64>,
    pub local_y: Vector3<f64>,
    pub local_z: Vector3<f64>,
}

impl RisFrame {
    /// Builds the frame from the surface normal. The in-plane axes are
    /// anchored to global +z (so a vertical surface keeps its rows vertical),
    /// falling back to global +y when the normal is (anti)parallel to z.
    pub fn from_normal(normal: &Vector3<f64>) -> Self {
        let local_x = normal.normalize();
        let helper = if local_x.z.abs() > 1.0 - 1e-9 {
            Vector3::y()
        } else {
            Vector3::z()
        };
        let local_y = helper.cross(&local_x).normalize();
        let local_z = local_x.cross(&local_y);
        RisFrame { local_x, local_y, local_z }
    }

    /// Expresses a global-frame vector in surface-frame coordinates.
    pub fn to_local(&self, v: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(v.dot(&self.local_x), v.dot(&self.local_y), v.dot(&self.local_z))
    }
}

/// Positions of all reflecting units: a regular rows × cols grid centered at
/// `ris_center`, spacing `unit_side`, lying in the plane orthogonal to the
/// normal. Row-major ordering (index m = row · cols + col); offsets are
/// computed as index · spacing − half-extent so large grids accumulate no
/// drift.
pub fn unit_positions(scenario: &Scenario) -> Vec<Vector3<f64>> {
    let frame = RisFrame::from_normal(&scenario.ris_normal);
    let rows = scenario.num_units_rows;
    let cols = scenario.num_units_cols;
    let side = scenario.unit_side;
    let row_half = (rows as f64 - 1.0) / 2.0;
    let col_half = (cols as f64 - 1.0) / 2.0;
    let mut positions = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let dy = (c as f64 - col_half) * side;
            let dz = (r as f64 - row_half) * side;
            positions.push(scenario.ris_center + frame.local_y * dy + frame.local_z * dz);
        }
    }
    positions
}

/// Distances and angles of the two link legs. Angles are expressed in the
/// surface frame; elevation is measured from the surface plane toward local
/// z, azimuth around it via the two-argument arctangent (no quadrant
/// ambiguity).
pub fn link_geometry(scenario: &Scenario) -> Result<LinkGeometry> {
    let frame = RisFrame::from_normal(&scenario.ris_normal);
    let d1 = scenario.source_position - scenario.ris_center;
    let d2 = scenario.receiver_position - scenario.ris_center;
    let (r1, r2) = (d1.norm(), d2.norm());
    if r1 == 0.0 {
        return Err(Error::DegenerateGeometry {
            reason: "source coincides with the surface center".into(),
        });
    }
    if r2 == 0.0 {
        return Err(Error::DegenerateGeometry {
            reason: "receiver coincides with the surface center".into(),
        });
    }
    let u1 = frame.to_local(&(d1 / r1));
    let u2 = frame.to_local(&(d2 / r2));
    let angles = |u: Vector3<f64>| {
        let zeta = u.x.clamp(-1.0, 1.0).acos();
        let elevation = u.z.clamp(-1.0, 1.0).asin();
        let azimuth = u.y.atan2(u.x);
        (zeta, elevation, azimuth)
    };
    let (zeta1, arrival_elevation, arrival_azimuth) = angles(u1);
    let (zeta2, departure_elevation, departure_azimuth) = angles(u2);
    Ok(LinkGeometry {
        r1,
        r2,
        zeta1,
        zeta2,
        arrival_elevation,
        arrival_azimuth,
        departure_elevation,
        departure_azimuth,
    })
}

/// Plane-wave vector for a propagation direction given by elevation/azimuth
/// in the surface frame: (2π/λ)·[cos φ cos θ, sin φ cos θ, sin θ].
pub fn wave_vector(elevation: f64, azimuth: f64, wavelength: f64) -> Vector3<f64> {
    let k = 2.0 * std::f64::consts::PI / wavelength;
    Vector3::new(
        k * azimuth.cos() * elevation.cos(),
        k * azimuth.sin() * elevation.cos(),
        k * elevation.sin(),
    )
}

/// Phase accumulated by a plane wave over the offset `g_m` (surface-frame
/// coordinates of one unit): the inner product g_mᵀq. Not wrapped; callers
/// reduce mod 2π where needed.
pub fn path_phase(g_m: &Vector3<f64>, q: &Vector3<f64>) -> f64 {
    g_m.dot(q)
}
