//! Theoretical bit-error rates: the coherent scheme's closed form and the
//! differential scheme's double integral over the noise-perturbed Stokes
//! geometry, evaluated with adaptive quadrature.
//!
//! The differential BER integrates, over the uniform phase mismatch δ and a
//! normalized noise coordinate t, the probability that the noisy Stokes
//! vector crosses the decision plane. The t-coordinate's density `f_eta` and
//! the crossing-angle CDF `f_theta_cdf` are closed-form in the SNR γ.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::quadrature::{try_integrate, QuadratureSpec};

/// Closed-form BER of the coherent scheme: ½·e^{−γ}.
pub fn cpolsk_ber(gamma: f64) -> f64 {
    0.5 * (-gamma).exp()
}

/// Density of the normalized noise coordinate t ∈ ℝ at SNR γ:
/// ½·(1+t²)^{−3/2} · e^{−γ(1 − t/√(1+t²))} · [1 + γ(1 + t/√(1+t²))].
pub fn f_eta(t: f64, gamma: f64) -> f64 {
    let hyp = (1.0 + t * t).sqrt();
    let s = t / hyp;
    0.5 * (1.0 / (1.0 + t * t)).powf(1.5) * (-gamma * (1.0 - s)).exp() * (1.0 + gamma * (1.0 + s))
}

/// CDF of the decision-plane crossing angle ϑ ∈ [0, π] at SNR γ:
/// 1 − ½·e^{−γ(1−cos ϑ)}·(1 + cos ϑ). Exactly 0 at ϑ=0 and 1 at ϑ=π.
pub fn f_theta_cdf(theta: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain {
            what: format!("crossing angle {theta} rad outside [0, π]"),
        });
    }
    let c = theta.cos();
    Ok(1.0 - 0.5 * (-gamma * (1.0 - c)).exp() * (1.0 + c))
}

/// Inverse cotangent mapped into (0, π), so the crossing angle always lies
/// in the CDF's domain; negative arguments land beyond π/2.
fn acot(x: f64) -> f64 {
    FRAC_PI_2 - x.atan()
}

/// Total mass of [`f_eta`] over ℝ, via the compactifying substitution
/// t = tan ξ. Equals 1 for every γ; exposed as a numerical self-check.
pub fn f_eta_total_mass(gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    let density = |xi: f64| {
        let t = xi.tan();
        f_eta(t, gamma) * (1.0 + t * t)
    };
    let lower = try_integrate(|xi| Ok(density(xi)), -FRAC_PI_2, 0.0, spec)?;
    let upper = try_integrate(|xi| Ok(density(xi)), 0.0, FRAC_PI_2, spec)?;
    Ok(lower + upper)
}

/// Theoretical BER of the differential scheme at SNR γ:
///
///   1/(2π) · ∫₀^{2π} ∫₀^{∞}  f_eta(t) · [1 − F_ϑ(acot(cos δ / t))] dt dδ
/// + 1/(2π) · ∫₀^{2π} ∫_{−∞}^{0} f_eta(t) ·      F_ϑ(acot(cos δ / t))  dt dδ.
///
/// Each half-line in t is compactified with t = tan ξ (Jacobian 1+t²); the
/// outer integral is split where cos δ changes sign, since the crossing
/// angle has a kink there. Inner integrals run at a tenth of the requested
/// tolerance so the nested error budget is dominated by the outer rule.
/// The result is clamped to the meaningful range [0, ½].
pub fn dpolsk_ber(gamma: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::Domain {
            what: format!("SNR must be nonnegative, got {gamma}"),
        });
    }
    if gamma.is_infinite() {
        return Ok(0.0);
    }
    spec.validate()?;
    let inner_spec = QuadratureSpec {
        rel_tol: spec.rel_tol / 10.0,
        abs_tol: spec.abs_tol / 10.0,
        max_depth: spec.max_depth,
    };

    let outer_piece = |lo: f64, hi: f64| {
        try_integrate(
            |delta: f64| {
                let c = delta.cos();
                // t > 0: an error occurs when the crossing angle is NOT
                // exceeded, weight 1 − F_ϑ.
                let positive = try_integrate(
                    |xi: f64| {
                        let t = xi.tan();
                        let weight = 1.0 - f_theta_cdf(acot(c / t), gamma)?;
                        Ok(f_eta(t, gamma) * (1.0 + t * t) * weight)
                    },
                    0.0,
                    FRAC_PI_2,
                    &inner_spec,
                )?;
                // t < 0: the complementary event, weight F_ϑ.
                let negative = try_integrate(
                    |xi: f64| {
                        let t = xi.tan();
                        let weight = f_theta_cdf(acot(c / t), gamma)?;
                        Ok(f_eta(t, gamma) * (1.0 + t * t) * weight)
                    },
                    -FRAC_PI_2,
                    0.0,
                    &inner_spec,
                )?;
                Ok(positive + negative)
            },
            lo,
            hi,
            spec,
        )
    };

    let total = outer_piece(0.0, FRAC_PI_2)?
        + outer_piece(FRAC_PI_2, 3.0 * FRAC_PI_2)?
        + outer_piece(3.0 * FRAC_PI_2, TAU)?;
    Ok((total / TAU).clamp(0.0, 0.5))
}
