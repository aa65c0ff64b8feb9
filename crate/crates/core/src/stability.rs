//! Sector and order checks for the generating symbol `δ^α`.
//!
//! Two routes evaluate `z_τ^α = τ^{−α} δ^α(e^{−zτ})`:
//!
//! * the boundary locus, `Σ_{j≤M} ω_j e^{−ijφ}` on the unit circle, summed
//!   for all `φ` at once by FFT;
//! * the closed form with `Li` from the τ₈ approximant, on the truncated
//!   contour `Γ^τ_{θ,κ}` where the power series diverges.
//!
//! Both report the largest principal `|arg|` of the sampled symbol. That
//! alone misses a path that crosses the negative real axis between samples
//! of opposite sign, so the report also carries the largest argument
//! continued along each piece of the path. A sampled check cannot certify
//! the continuum; the locus report carries the truncation error as an
//! angular uncertainty.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lk_weights::{symbol_delta_alpha, weights_explicit, SchemeParams, SymbolBackend};
use crate::special_functions::{gamma, ComplexArgument, SERIES_MAX_MODULUS};

/// Default truncation of the unit-circle series.
pub const DEFAULT_TRUNCATION: usize = 200_000;

/// Truncated sector contour: the arc `κ e^{iψ}`, `|ψ| ≤ θ`, and the rays
/// `r e^{±iθ}`, `κ ≤ r ≤ π/(τ sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourSpec {
    pub theta: f64,
    pub kappa: f64,
    pub tau: f64,
    pub n_ray: usize,
    pub n_arc: usize,
}

impl ContourSpec {
    pub fn new(theta: f64, kappa: f64, tau: f64, n_ray: usize, n_arc: usize) -> Result<Self> {
        if !(theta > PI / 2.0 && theta < PI) {
            return Err(Error::domain(
                "ContourSpec",
                format!("theta = {theta} outside (π/2, π)"),
            ));
        }
        if !(kappa > 0.0 && tau > 0.0) {
            return Err(Error::domain(
                "ContourSpec",
                "kappa and tau must be positive",
            ));
        }
        if kappa >= Self::ray_end(theta, tau) {
            return Err(Error::domain(
                "ContourSpec",
                "kappa exceeds the truncated ray length",
            ));
        }
        if n_ray < 2 || n_arc < 2 {
            return Err(Error::domain(
                "ContourSpec",
                "need at least two samples per piece",
            ));
        }
        Ok(Self {
            theta,
            kappa,
            tau,
            n_ray,
            n_arc,
        })
    }

    fn ray_end(theta: f64, tau: f64) -> f64 {
        PI / (tau * theta.sin())
    }

    /// Sample points, arc first, then the upper and lower rays outward.
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.n_arc + 2 * self.n_ray);
        for i in 0..self.n_arc {
            let psi = -self.theta + 2.0 * self.theta * i as f64 / (self.n_arc - 1) as f64;
            pts.push(Complex64::from_polar(self.kappa, psi));
        }
        let ratio = (Self::ray_end(self.theta, self.tau) / self.kappa).ln();
        for sign in [1.0, -1.0] {
            for i in 0..self.n_ray {
                let r = self.kappa * (ratio * i as f64 / (self.n_ray - 1) as f64).exp();
                pts.push(Complex64::from_polar(r, sign * self.theta));
            }
        }
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusSample {
    /// `z` on the contour, or `ξ = e^{−iφ}` for the locus.
    pub point: Complex64,
    pub symbol: Complex64,
    /// Principal argument in `(−π, π]`.
    pub arg: f64,
    /// Angular uncertainty from truncation, zero where not applicable.
    pub arg_uncertainty: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LocusMethod {
    Locus,
    Tau8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusReport {
    pub k: usize,
    pub alpha: f64,
    pub method: LocusMethod,
    #[serde(skip)]
    pub samples: Vec<LocusSample>,
    /// Largest `|arg|` over the samples.
    pub theta0_estimate: f64,
    /// `max(|arg| + uncertainty) < π`.
    pub contained: bool,
    /// Largest `|arg|` with the argument continued along each path piece;
    /// above `π` the sampled path crosses the negative real axis.
    pub max_continuous_arg: f64,
    pub max_arg_uncertainty: f64,
    /// Truncation `M` of the unit-circle series.
    #[serde(rename = "M")]
    pub truncation: Option<usize>,
    /// `C M^{−α}` with `C` fitted from the partial sums.
    pub tail_estimate: Option<f64>,
    /// Largest relative gap to the direct-series route where it applies.
    pub cross_check_max_rel: Option<f64>,
}

impl LocusReport {
    fn assemble(
        params: SchemeParams,
        method: LocusMethod,
        samples: Vec<LocusSample>,
        pieces: &[Range<usize>],
        truncation: Option<usize>,
        tail_estimate: Option<f64>,
        cross_check_max_rel: Option<f64>,
    ) -> Self {
        let max_continuous_arg = pieces
            .iter()
            .flat_map(|piece| continuous_args(&samples[piece.clone()]))
            .fold(0.0f64, |m, a| m.max(a.abs()));
        let theta0_estimate = samples.iter().fold(0.0f64, |m, s| m.max(s.arg.abs()));
        let worst = samples
            .iter()
            .fold(0.0f64, |m, s| m.max(s.arg.abs() + s.arg_uncertainty));
        let max_arg_uncertainty = samples.iter().fold(0.0f64, |m, s| m.max(s.arg_uncertainty));
        Self {
            k: params.k(),
            alpha: params.alpha(),
            method,
            theta0_estimate,
            contained: worst < PI,
            max_continuous_arg,
            max_arg_uncertainty,
            samples,
            truncation,
            tail_estimate,
            cross_check_max_rel,
        }
    }
}

/// Unit-circle locus `Σ_{j≤M} ω_j e^{−ijφ}` at `φ = 2πq/n_phi`,
/// `q = 1..n_phi−1`.
///
/// For large `j` the weights keep one sign and decrease in magnitude, so by
/// Abel summation the dropped tail is at most `2|ω_{M+1}|/|1−ξ|` at each
/// sample.
pub fn boundary_locus(
    params: SchemeParams,
    n_phi: usize,
    truncation: usize,
) -> Result<LocusReport> {
    if n_phi < 16 {
        return Err(Error::domain(
            "boundary_locus",
            format!("n_phi = {n_phi} below 16"),
        ));
    }
    if truncation < 10 * params.k() {
        return Err(Error::domain(
            "boundary_locus",
            format!("truncation {truncation} too small"),
        ));
    }
    let weights = weights_explicit(params, truncation + 2)?;
    let omega = weights.omegas();
    let len = (truncation + 1).div_ceil(n_phi) * n_phi;
    let mut buf: Vec<Complex64> = omega[..=truncation]
        .iter()
        .map(|&w| Complex64::new(w, 0.0))
        .collect();
    buf.resize(len, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);

    let next = omega[truncation + 1].abs();
    let stride = len / n_phi;
    let samples = (1..n_phi)
        .map(|q| {
            let phi = 2.0 * PI * q as f64 / n_phi as f64;
            let xi = Complex64::from_polar(1.0, -phi);
            let value = buf[q * stride];
            let tail = 2.0 * next / (2.0 * (0.5 * phi).sin()).abs();
            LocusSample {
                point: xi,
                symbol: value,
                arg: value.arg(),
                arg_uncertainty: (tail / value.norm()).min(1.0).asin(),
            }
        })
        .collect();

    let s_last = weights.partial_sum(truncation);
    let s_decade = weights.partial_sum(truncation / 10);
    let tail_estimate = if params.alpha() < 1.0 {
        // s_m ≈ C m^{−α}; the two fits agree when the tail is asymptotic
        let c_last = s_last * (truncation as f64).powf(params.alpha());
        let c_decade = s_decade * ((truncation / 10) as f64).powf(params.alpha());
        Some(c_last.abs().max(c_decade.abs()) * (truncation as f64).powf(-params.alpha()))
    } else {
        Some(s_last.abs())
    };
    Ok(LocusReport::assemble(
        params,
        LocusMethod::Locus,
        samples,
        std::slice::from_ref(&(0..n_phi - 1)),
        Some(truncation),
        tail_estimate,
        None,
    ))
}

/// Arguments on a continuous branch along `samples`, starting from the
/// principal value of the first.
fn continuous_args(samples: &[LocusSample]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(samples.len());
    for s in samples {
        let next = match out.last() {
            Some(&p) => p + (s.arg - p + PI).rem_euclid(2.0 * PI) - PI,
            None => s.arg,
        };
        out.push(next);
    }
    out
}

/// Smallest `Re(zτ)` at which the direct series is used for cross-checks.
const CROSS_CHECK_MIN_RE: f64 = 1e-3;

/// `z_τ^α` on `Γ^τ_{θ,κ}` through the τ₈ closed form, cross-checked
/// against the direct series where `Re(zτ) ≥ 0.001`.
pub fn sector_check_tau8(params: SchemeParams, contour: &ContourSpec) -> Result<LocusReport> {
    let tau = contour.tau;
    let scale = tau.powf(-params.alpha());
    let evaluated: Vec<(LocusSample, Option<f64>)> = contour
        .points()
        .into_par_iter()
        .map(|z| {
            let ztau = z * tau;
            let arg = ComplexArgument::from_ztau(ztau);
            let value = symbol_delta_alpha(params, &arg, SymbolBackend::Tau8)? * scale;
            let check = if ztau.re >= CROSS_CHECK_MIN_RE && arg.xi().norm() < SERIES_MAX_MODULUS {
                let tol = series_tolerance(params, ztau)?;
                let series =
                    symbol_delta_alpha(params, &arg, SymbolBackend::PolylogSeries { tol })? * scale;
                Some((series - value).norm() / series.norm())
            } else {
                None
            };
            Ok((
                LocusSample {
                    point: z,
                    symbol: value,
                    arg: value.arg(),
                    arg_uncertainty: 0.0,
                },
                check,
            ))
        })
        .collect::<Result<_>>()?;
    let cross = evaluated
        .iter()
        .filter_map(|(_, c)| *c)
        .fold(None, |m: Option<f64>, c| Some(m.map_or(c, |m| m.max(c))));
    let samples = evaluated.into_iter().map(|(s, _)| s).collect();
    let (arc, ray) = (contour.n_arc, contour.n_ray);
    // the rays start where the arc ends, so each piece starts near arg 0
    let pieces = [0..arc, arc..arc + ray, arc + ray..arc + 2 * ray];
    Ok(LocusReport::assemble(
        params,
        LocusMethod::Tau8,
        samples,
        &pieces,
        None,
        None,
        cross,
    ))
}

/// Absolute series tolerance scaled to the largest polylog in the closed
/// form, `Γ(k+1−α)|zτ|^{α−k−1}`.
fn series_tolerance(params: SchemeParams, ztau: Complex64) -> Result<f64> {
    let k = params.k() as f64;
    let lead = gamma(k + 1.0 - params.alpha())? * ztau.norm().powf(params.alpha() - k - 1.0);
    Ok(1e-12 * lead.max(1.0))
}

/// Least-squares slope of `ln r(h)` against `ln h` for
/// `r(h) = |δ^α(e^{−h}) − h^α|`, the symbol summed from the weights.
///
/// Points with `r < 1e−13` are at the round-off floor and are dropped.
pub fn expansion_order_fit(params: SchemeParams, h_values: &[f64]) -> Result<f64> {
    const OP: &str = "expansion_order_fit";
    const NOISE_FLOOR: f64 = 1e-13;
    if h_values.len() < 4 {
        return Err(Error::domain(OP, "at least four step sizes are required"));
    }
    if h_values.iter().any(|&h| !(1e-3..=0.5).contains(&h)) {
        return Err(Error::domain(OP, "step sizes must lie in [1e-3, 0.5]"));
    }
    if h_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain(OP, "step sizes must be strictly decreasing"));
    }
    let h_min = h_values[h_values.len() - 1];
    // e^{−hM} below 1e−20 at the smallest h
    let terms = (46.0 / h_min).ceil() as usize + params.k() + 1;
    let weights = weights_explicit(params, terms)?;
    let mut points = Vec::new();
    for &h in h_values {
        let arg = ComplexArgument::from_ztau(Complex64::new(h, 0.0));
        let delta = symbol_delta_alpha(params, &arg, SymbolBackend::WeightSum(&weights))?;
        let r = (delta - h.powf(params.alpha())).norm();
        if r >= NOISE_FLOOR {
            points.push((h.ln(), r.ln()));
        }
    }
    if points.len() < 3 {
        return Err(Error::domain(
            OP,
            format!("only {} points above the noise floor", points.len()),
        ));
    }
    Ok(least_squares_slope(&points))
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(k: usize, alpha: f64) -> SchemeParams {
        SchemeParams::new(k, alpha).unwrap()
    }

    #[test]
    fn contour_validation() {
        assert!(ContourSpec::new(0.4 * PI, 1.0, 0.01, 10, 10).is_err());
        assert!(ContourSpec::new(0.55 * PI, -1.0, 0.01, 10, 10).is_err());
        assert!(ContourSpec::new(0.55 * PI, 1e4, 0.01, 10, 10).is_err());
        let c = ContourSpec::new(0.55 * PI, 1.0, 0.01, 10, 8).unwrap();
        let pts = c.points();
        assert_eq!(pts.len(), 28);
        let top = pts.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        assert!(top <= PI / 0.01 * (1.0 + 1e-12));
    }

    #[test]
    fn locus_is_conjugate_symmetric_and_bdf1_is_contained() {
        let r = boundary_locus(params(1, 0.5), 64, 20_000).unwrap();
        assert!(r.contained);
        let n = r.samples.len();
        for q in 0..n {
            let a = r.samples[q].symbol;
            let b = r.samples[n - 1 - q].symbol;
            assert!((a.conj() - b).norm() < 1e-9 * a.norm().max(1.0));
        }
    }

    #[test]
    fn locus_approaches_origin_near_phi_zero() {
        let r = boundary_locus(params(2, 0.5), 4096, 200_000).unwrap();
        assert!(r.samples[0].symbol.norm() < 0.1);
        assert!(r.samples[0].symbol.norm() < r.samples[200].symbol.norm());
    }

    #[test]
    fn bdf6_critical_angle() {
        // BDF6 is A(17.84°)-stable
        let r = boundary_locus(params(6, 1.0), 1 << 16, 1000).unwrap();
        let angle = (PI - r.theta0_estimate).to_degrees();
        assert!((angle - 17.84).abs() < 0.05, "{angle}");
        assert!(r.contained);
    }

    #[test]
    fn tau8_contour_examples() {
        let c = ContourSpec::new(0.55 * PI, 1.0, 0.01, 200, 64).unwrap();
        let r4 = sector_check_tau8(params(4, 0.2), &c).unwrap();
        assert!(r4.contained && r4.max_continuous_arg < PI);
        assert!(r4.cross_check_max_rel.unwrap() < 1e-8);
        // principal arguments stay inside, but the continued argument shows
        // the path winding across the negative axis near the ray ends
        let r6 = sector_check_tau8(params(6, 0.8), &c).unwrap();
        assert!(r6.contained);
        assert!(r6.max_continuous_arg > PI);
        let narrow = ContourSpec::new(0.51 * PI, 1.0, 0.01, 200, 64).unwrap();
        let r6n = sector_check_tau8(params(6, 0.8), &narrow).unwrap();
        assert!(r6n.contained && r6n.max_continuous_arg < PI);
    }

    #[test]
    fn fit_rejects_bad_ladders() {
        let p = params(1, 0.5);
        assert!(expansion_order_fit(p, &[0.2, 0.1, 0.05]).is_err());
        assert!(expansion_order_fit(p, &[0.1, 0.2, 0.05, 0.01]).is_err());
        assert!(expansion_order_fit(p, &[0.9, 0.2, 0.05, 0.01]).is_err());
    }

    #[test]
    fn first_order_fit() {
        let s = expansion_order_fit(params(1, 0.5), &[0.2, 0.1, 0.05, 0.025]).unwrap();
        assert!((1.9..=2.1).contains(&s), "{s}");
    }

    #[test]
    fn unwrapping_exposes_axis_crossing() {
        // a path from e^{2i} to e^{-2.8i} through the negative real axis
        let samples: Vec<LocusSample> = (0..40)
            .map(|i| {
                let t = 2.0 + 1.5 * i as f64 / 39.0;
                let w = Complex64::from_polar(1.0, t);
                LocusSample {
                    point: w,
                    symbol: w,
                    arg: w.arg(),
                    arg_uncertainty: 0.0,
                }
            })
            .collect();
        assert!(samples.iter().all(|s| s.arg.abs() <= PI));
        let cont = continuous_args(&samples);
        assert!((cont[39] - 3.5).abs() < 1e-12);
    }

    #[test]
    fn slope_of_exact_power() {
        let pts: Vec<(f64, f64)> = (1..6).map(|i| (i as f64, 3.0 * i as f64 + 1.0)).collect();
        assert!((least_squares_slope(&pts) - 3.0).abs() < 1e-14);
    }
}
