//! Globally adaptive Gauss–Kronrod quadrature.
//!
//! A 15-point Kronrod rule with embedded 7-point Gauss rule supplies a value
//! and an error estimate per interval; a worst-first heap repeatedly bisects
//! the interval with the largest estimated error until the global estimate
//! meets the requested tolerance. Node/weight values and the error-rescaling
//! heuristic follow the classic QUADPACK QK15 kernel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for adaptive quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on the integral estimate.
    pub rel_tol: f64,
    /// Absolute tolerance on the integral estimate.
    pub abs_tol: f64,
    /// Maximum bisection depth for any single interval.
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_depth: 50,
        }
    }
}

impl QuadratureSpec {
    /// Checks that both tolerances are strictly positive and at least one
    /// subdivision is allowed.
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::validation(
                "quadrature.rel_tol",
                "must be strictly positive",
            ));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::validation(
                "quadrature.abs_tol",
                "must be strictly positive",
            ));
        }
        if self.max_depth == 0 {
            return Err(Error::validation(
                "quadrature.max_depth",
                "must allow at least one subdivision",
            ));
        }
        Ok(())
    }
}

/// Abscissae of the 15-point Kronrod rule on [-1, 1]; even indices are the
/// Kronrod extension points, odd indices the embedded 7-point Gauss nodes,
/// and the final entry the shared center.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

/// Weights of the embedded 7-point Gauss rule; `WG[j]` pairs with `XGK[2j+1]`
/// and the last entry with the center node.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Weights of the 15-point Kronrod rule, aligned with `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// QUADPACK's error-rescaling heuristic: the raw Gauss/Kronrod difference is
/// sharpened against the scale of the integrand's variation (`resasc`) and
/// floored at the roundoff level of the absolute integral (`resabs`).
fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err.abs();
    if resasc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(floor);
    }
    scaled
}

/// One 15-point Kronrod evaluation over [a, b]: returns the integral
/// estimate and its error estimate. Integrand failures abort the rule.
fn kronrod_15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half_length = 0.5 * (b - a);

    let f_center = f(center)?;
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    let mut result_gauss = WG[3] * f_center;
    let mut result_kronrod = WGK[7] * f_center;
    let mut resabs = result_kronrod.abs();

    for j in 0..3 {
        let jtw = 2 * j + 1;
        let abscissa = half_length * XGK[jtw];
        let fval1 = f(center - abscissa)?;
        let fval2 = f(center + abscissa)?;
        fv1[jtw] = fval1;
        fv2[jtw] = fval2;
        let fsum = fval1 + fval2;
        result_gauss += WG[j] * fsum;
        result_kronrod += WGK[jtw] * fsum;
        resabs += WGK[jtw] * (fval1.abs() + fval2.abs());
    }

    for j in 0..4 {
        let jtwm1 = 2 * j;
        let abscissa = half_length * XGK[jtwm1];
        let fval1 = f(center - abscissa)?;
        let fval2 = f(center + abscissa)?;
        fv1[jtwm1] = fval1;
        fv2[jtwm1] = fval2;
        let fsum = fval1 + fval2;
        result_kronrod += WGK[jtwm1] * fsum;
        resabs += WGK[jtwm1] * (fval1.abs() + fval2.abs());
    }

    let mean = 0.5 * result_kronrod;
    let mut resasc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = result_kronrod * half_length;
    resabs *= half_length.abs();
    resasc *= half_length.abs();
    let err = rescale_error((result_kronrod - result_gauss) * half_length, resabs, resasc);
    Ok((value, err))
}

/// A pending interval in the worst-first refinement queue.
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptively integrates a fallible integrand over [a, b] to the spec's
/// tolerances. Returns `Convergence` with the best estimate and its error
/// bound if the budget runs out, and propagates integrand errors as-is.
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if a == b {
        return Ok(0.0);
    }

    let (value, error) = kronrod_15(&mut f, a, b)?;
    let mut total_value = value;
    let mut total_error = error;
    let mut heap = BinaryHeap::new();
    heap.push(Interval {
        a,
        b,
        value,
        error,
        depth: 0,
    });

    loop {
        let tolerance = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_error <= tolerance {
            return Ok(total_value);
        }
        // Heap is never empty here: total_error > 0 implies at least one
        // interval is still queued.
        let worst = heap.pop().expect("non-empty refinement queue");
        if worst.depth >= spec.max_depth {
            return Err(Error::Convergence {
                estimate: total_value,
                error_bound: total_error,
                rel_tol: spec.rel_tol,
                abs_tol: spec.abs_tol,
                subdivisions: heap.len() + 1,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = kronrod_15(&mut f, worst.a, mid)?;
        let (rv, re) = kronrod_15(&mut f, mid, worst.b)?;
        total_value += lv + rv - worst.value;
        total_error += le + re - worst.error;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
            depth: worst.depth + 1,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
            depth: worst.depth + 1,
        });
    }
}

/// [`try_integrate`] for infallible integrands.
pub fn integrate<F>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, spec)
}
