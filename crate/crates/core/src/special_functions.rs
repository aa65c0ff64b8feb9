//! Scalar special functions: gamma, Dirichlet eta, Riemann zeta and the
//! polylogarithm `Li_p(ξ) = Σ_{j≥1} ξ^j / j^p` (Bose–Einstein integral).
//!
//! Three polylogarithm backends are provided:
//!
//! * [`polylog_series`] – the defining power series, `|ξ| < 0.999`;
//! * [`polylog_singular_expansion`] – `Γ(1−p)(zτ)^{p−1} + Σ_j (−1)^j ζ(p−j)(zτ)^j/j!`
//!   in the exponent variable `zτ`, `ξ = e^{−zτ}`;
//! * [`polylog_tau8`] – the order-8 rational (τ₈) approximant of the regular
//!   part of that expansion, which continues `Li_p(e^{−zτ})` to `Re zτ < 0`.
//!
//! All fractional powers use the principal branch, `arg ∈ (−π, π]`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Radius of convergence (in `zτ`) of the regular part of the singular
/// expansion: `Li_p(e^{−x})` is singular at `x = ±2πi`.
pub const EXPANSION_RADIUS: f64 = 2.0 * PI;

/// Largest `|ξ|` accepted by [`polylog_series`].
pub const SERIES_MAX_MODULUS: f64 = 0.999;

const SERIES_MAX_TERMS: usize = 50_000_000;

/// Order `p` of a polylogarithm `Li_p`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PolylogOrder(f64);

impl PolylogOrder {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::domain(
                "PolylogOrder",
                format!("order {p} is not finite"),
            ));
        }
        Ok(Self(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `true` for `p ∈ {1, 2, 3, …}`, where `Γ(1−p)` has a pole and the
    /// singular expansion takes a logarithmic form instead.
    pub fn is_positive_integer(self) -> bool {
        self.0 >= 1.0 && self.0.fract() == 0.0
    }

    fn require_expansion_order(self, op: &'static str) -> Result<f64> {
        if self.is_positive_integer() {
            return Err(Error::domain(
                op,
                format!("order p = {} is a positive integer", self.0),
            ));
        }
        Ok(self.0)
    }
}

/// Argument of `Li_p`, either `ξ` alone or `ξ = e^{−zτ}` together with `zτ`.
///
/// Carrying `zτ` keeps the branch of `(zτ)^{p−1}` unambiguous and lets the
/// exponent-based backends avoid `ln ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArgument {
    xi: Complex64,
    ztau: Option<Complex64>,
}

impl ComplexArgument {
    pub fn from_xi(xi: Complex64) -> Self {
        Self { xi, ztau: None }
    }

    pub fn from_ztau(ztau: Complex64) -> Self {
        Self {
            xi: (-ztau).exp(),
            ztau: Some(ztau),
        }
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    pub fn ztau(&self) -> Option<Complex64> {
        self.ztau
    }

    /// `zτ` if carried, otherwise the principal `−ln ξ`.
    pub fn ztau_or_log(&self) -> Complex64 {
        self.ztau.unwrap_or_else(|| -self.xi.ln())
    }

    /// `1 − ξ`, computed without cancellation when `zτ` is known and small.
    pub fn one_minus_xi(&self) -> Complex64 {
        match self.ztau {
            Some(z) => -expm1(-z),
            None => Complex64::new(1.0, 0.0) - self.xi,
        }
    }
}

/// `e^z − 1` without cancellation for small `|z|`.
pub fn expm1(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        // Horner on Σ z^n/n!; 25 terms exceed double precision for |z| < 1/2.
        let mut acc = Complex64::new(1.0, 0.0);
        for n in (2..=26).rev() {
            acc = Complex64::new(1.0, 0.0) + z * acc / n as f64;
        }
        z * acc
    } else {
        z.exp() - 1.0
    }
}

/// The gamma function `Γ(x)` for real `x > −20`.
///
/// Nonpositive integers are poles and yield [`Error::Pole`].
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > -20.0) || !x.is_finite() {
        return Err(Error::domain(
            "gamma",
            format!("argument {x} outside (−20, ∞)"),
        ));
    }
    if x <= 0.0 && x.fract() == 0.0 {
        return Err(Error::Pole { op: "gamma", at: x });
    }
    if x.fract() == 0.0 && x <= 23.0 {
        // (x−1)! is exact in f64 up to 22!
        return Ok((1..x as u64).map(|n| n as f64).product());
    }
    Ok(gamma_by_recurrence(x))
}

/// Γ on `[1, 2)` from statrs, moved to `x` by `Γ(x+1) = xΓ(x)`.
///
/// The Lanczos form loses about one digit near `x ≈ 16`; the reduction keeps
/// the relative error at a few ulps per recurrence step.
fn gamma_by_recurrence(x: f64) -> f64 {
    if x > 60.0 {
        return statrs::function::gamma::gamma(x);
    }
    let mut y = x;
    let mut scale = 1.0;
    while y >= 2.0 {
        y -= 1.0;
        scale *= y;
    }
    while y < 1.0 {
        scale /= y;
        y += 1.0;
    }
    scale * statrs::function::gamma::gamma(y)
}

/// Γ without the lower guard, for the reflection formula of ζ where the
/// argument is `1 − s ≥ 1`.
fn gamma_unchecked(x: f64) -> f64 {
    gamma_by_recurrence(x)
}

/// Dirichlet eta `η(p) = Σ_{n≥1} (−1)^{n−1} n^{−p}` (entire in `p`).
///
/// Uses Borwein's accelerated alternating sum for `p ≥ 0` and the
/// functional equation of ζ for `p < 0`.
pub fn dirichlet_eta(p: f64) -> f64 {
    if p >= 0.0 {
        eta_borwein(p)
    } else {
        (1.0 - (2.0f64).powf(1.0 - p)) * zeta_reflected(p)
    }
}

/// Riemann zeta `ζ(p) = η(p) / (1 − 2^{1−p})`, `p ≠ 1`.
pub fn riemann_zeta(p: f64) -> Result<f64> {
    if p == 1.0 {
        return Err(Error::Pole {
            op: "riemann_zeta",
            at: p,
        });
    }
    if !p.is_finite() {
        return Err(Error::domain(
            "riemann_zeta",
            format!("argument {p} is not finite"),
        ));
    }
    if p >= 0.0 {
        Ok(eta_borwein(p) / one_minus_two_pow(1.0 - p))
    } else {
        Ok(zeta_reflected(p))
    }
}

/// `1 − 2^x`, accurate when `x` is near zero.
fn one_minus_two_pow(x: f64) -> f64 {
    -(x * LN_2).exp_m1()
}

/// `ζ(s)` for `s < 0` from `ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)`.
fn zeta_reflected(s: f64) -> f64 {
    debug_assert!(s < 0.0);
    let t = 1.0 - s;
    // ζ(t), t > 1.
    let zeta_t = eta_borwein(t) / one_minus_two_pow(1.0 - t);
    let sin = sin_half_pi(s);
    (2.0f64).powf(s) * PI.powf(s - 1.0) * sin * gamma_unchecked(t) * zeta_t
}

/// `sin(πs/2)`, exactly zero at even integers.
fn sin_half_pi(s: f64) -> f64 {
    // Reduce s modulo 4 so the argument handed to sin stays in [0, 2π).
    let r = s.rem_euclid(4.0);
    if r == 0.0 || r == 2.0 {
        0.0
    } else {
        (0.5 * PI * r).sin()
    }
}

/// Borwein's algorithm for η(s); error below `3 / (3+√8)^n` for `s ≥ 0`.
fn eta_borwein(s: f64) -> f64 {
    const N: usize = 40;
    let n = N as f64;
    let mut d = [0.0f64; N + 1];
    let mut term = 1.0 / n;
    let mut acc = term;
    d[0] = n * acc;
    for (i, di) in d.iter_mut().enumerate().skip(1) {
        let fi = i as f64;
        term *= 4.0 * (n + fi - 1.0) * (n - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        *di = n * acc;
    }
    let dn = d[N];
    let mut sum = 0.0;
    for k in (0..N).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (d[k] - dn) / ((k + 1) as f64).powf(s);
    }
    -sum / dn
}

/// The seven-term rational acceleration of the alternating series,
///
/// `η(p) ≈ Σ_{l=1}^{7} w_l l^p S_l / Σ_{l=1}^{7} w_l l^p`,
/// `w = (1, 36, 315, 1120, 1890, 1512, 462)`, `S_l = Σ_{j≤l} (−1)^{j−1} j^{−p}`.
///
/// Exact at `p = 0, −1`, accurate to ~1e−8 for `p ∈ [0, 3]`, but the error
/// grows to O(1) below `p ≈ −5`; [`dirichlet_eta`] is the accurate
/// evaluator.
pub fn dirichlet_eta_seven_term(p: f64) -> f64 {
    const W: [f64; 7] = [1.0, 36.0, 315.0, 1120.0, 1890.0, 1512.0, 462.0];
    let mut partial = 0.0;
    let mut num = 0.0;
    let mut den = 0.0;
    for (idx, w) in W.iter().enumerate() {
        let l = (idx + 1) as f64;
        let sign = if idx % 2 == 0 { 1.0 } else { -1.0 };
        partial += sign * l.powf(-p);
        let weight = w * l.powf(p);
        num += weight * partial;
        den += weight;
    }
    num / den
}

/// `Li_p(ξ)` by direct summation of `Σ ξ^j / j^p`, for `|ξ| < 0.999`.
///
/// Summation stops once the terms are in their monotone decaying regime
/// (`j > p/(−ln|ξ|)` for `p < 0`) and the geometric tail bound
/// `|t_j| · |ξ|/(1−|ξ|) · (1+2/j)^{|p|}` drops below `tol`.
pub fn polylog_series(p: PolylogOrder, xi: Complex64, tol: f64) -> Result<Complex64> {
    let r = xi.norm();
    if !(r < SERIES_MAX_MODULUS) {
        return Err(Error::domain(
            "polylog_series",
            format!("|xi| = {r} is not below {SERIES_MAX_MODULUS}"),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(
            "polylog_series",
            format!("tolerance {tol} must be positive"),
        ));
    }
    if r == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let p = p.value();
    let log_xi = xi.ln();
    let monotone_from = if p < 0.0 {
        (-p / -r.ln()).ceil() as usize
    } else {
        1
    };
    let geometric = r / (1.0 - r);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for j in 1..=SERIES_MAX_TERMS {
        let jf = j as f64;
        // ξ^j by recurrence, re-anchored to limit drift
        power = if j % 1024 == 0 {
            (log_xi * jf).exp()
        } else {
            power * xi
        };
        let term = power * jf.powf(-p);
        sum += term;
        if j >= monotone_from {
            let bound = term.norm() * geometric * (1.0 + 2.0 / jf).powf(p.abs());
            if bound < tol {
                return Ok(sum);
            }
        }
    }
    Err(Error::NoConvergence {
        op: "polylog_series",
        terms: SERIES_MAX_TERMS,
    })
}

fn check_ztau(op: &'static str, ztau: Complex64) -> Result<()> {
    if ztau == Complex64::new(0.0, 0.0) {
        return Err(Error::domain(
            op,
            "ztau = 0 is the singular point of (ztau)^(p-1)",
        ));
    }
    if !(ztau.norm() < EXPANSION_RADIUS) {
        return Err(Error::domain(
            op,
            format!(
                "|ztau| = {} outside the convergence disk |ztau| < 2π",
                ztau.norm()
            ),
        ));
    }
    Ok(())
}

/// `Γ(1−p)(zτ)^{p−1}`, principal branch.
fn singular_term(p: f64, ztau: Complex64) -> Result<Complex64> {
    let g = gamma(1.0 - p)?;
    Ok((ztau.ln() * (p - 1.0)).exp() * g)
}

/// `Li_p(e^{−zτ}) ≈ Γ(1−p)(zτ)^{p−1} + Σ_{j<terms} (−1)^j ζ(p−j)(zτ)^j/j!`.
pub fn polylog_singular_expansion(
    p: PolylogOrder,
    ztau: Complex64,
    terms: usize,
) -> Result<Complex64> {
    const OP: &str = "polylog_singular_expansion";
    let pv = p.require_expansion_order(OP)?;
    check_ztau(OP, ztau)?;
    if terms == 0 {
        return Err(Error::domain(OP, "at least one series term is required"));
    }
    let mut regular = Complex64::new(0.0, 0.0);
    // (−zτ)^j / j!
    let mut power = Complex64::new(1.0, 0.0);
    for j in 0..terms {
        if j > 0 {
            power *= -ztau / j as f64;
        }
        let z = riemann_zeta(pv - j as f64)?;
        regular += power * z;
    }
    Ok(singular_term(pv, ztau)? + regular)
}

/// τ₈ rational approximant `Li_p(e^{−zτ}) ≈ Γ(1−p)(zτ)^{p−1} + Φ(zτ)/Ψ(zτ)`
/// with `b_i = ζ(p−i)`, `i = 0..8`.
///
/// `Φ/Ψ` reproduces the Taylor series of the regular part through `(zτ)^7`.
pub fn polylog_tau8(p: PolylogOrder, ztau: Complex64) -> Result<Complex64> {
    const OP: &str = "polylog_tau8";
    let pv = p.require_expansion_order(OP)?;
    check_ztau(OP, ztau)?;
    let mut b = [0.0f64; 9];
    for (i, bi) in b.iter_mut().enumerate() {
        *bi = riemann_zeta(pv - i as f64)?;
        if *bi == 0.0 {
            return Err(Error::domain(
                OP,
                format!("zeta({}) vanishes", pv - i as f64),
            ));
        }
    }
    let (phi, psi) = tau8_polynomials(&b, ztau);
    if psi.norm() <= f64::EPSILON * (1.0 + phi.norm()) {
        return Err(Error::DenominatorZero {
            re: ztau.re,
            im: ztau.im,
        });
    }
    Ok(singular_term(pv, ztau)? + phi / psi)
}

/// Coefficients of `Φ` and `Ψ` for given `b_0..b_8`, lowest degree first.
pub fn tau8_coefficients(b: &[f64; 9]) -> ([f64; 8], [f64; 9]) {
    let [b0, b1, b2, b3, b4, b5, b6, b7, b8] = *b;
    let r = |num: f64, den: f64, bi: f64| num * b8 / (den * bi);
    let psi = [
        1.0,
        r(8.0, 15.0, b7),
        r(2.0, 15.0, b6),
        r(4.0, 195.0, b5),
        r(1.0, 312.0, b4),
        r(1.0, 6435.0, b3),
        r(1.0, 128700.0, b2),
        r(1.0, 4054050.0, b1),
        r(1.0, 259459200.0, b0),
    ];
    let phi = [
        b0,
        -(b1 - b0 * r(8.0, 15.0, b7)),
        b2 / 2.0 + b0 * r(2.0, 15.0, b6) - b1 * r(8.0, 15.0, b7),
        -(b3 / 6.0 - b0 * r(4.0, 195.0, b5) + b1 * r(2.0, 15.0, b6) - b2 * r(4.0, 15.0, b7)),
        b4 / 24.0 + b0 * r(1.0, 312.0, b4) - b1 * r(4.0, 195.0, b5) + b2 * r(1.0, 15.0, b6)
            - b3 * r(4.0, 45.0, b7),
        -(b5 / 120.0 - b0 * r(1.0, 6435.0, b3) + b1 * r(1.0, 312.0, b4) - b2 * r(2.0, 195.0, b5)
            + b3 * r(1.0, 45.0, b6)
            - b4 * r(1.0, 45.0, b7)),
        b6 / 720.0 + b0 * r(1.0, 128700.0, b2) - b1 * r(1.0, 6435.0, b3) + b2 * r(1.0, 624.0, b4)
            - b3 * r(2.0, 585.0, b5)
            + b4 * r(1.0, 180.0, b6)
            - b5 * r(1.0, 225.0, b7),
        -(b7 / 5040.0 - b0 * r(1.0, 4054050.0, b1) + b1 * r(1.0, 128700.0, b2)
            - b2 * r(1.0, 12870.0, b3)
            + b3 * r(1.0, 1872.0, b4)
            - b4 * r(1.0, 1170.0, b5)
            + b5 * r(1.0, 900.0, b6)
            - b6 * r(1.0, 1350.0, b7)),
    ];
    (phi, psi)
}

fn tau8_polynomials(b: &[f64; 9], x: Complex64) -> (Complex64, Complex64) {
    let (phi_c, psi_c) = tau8_coefficients(b);
    let horner = |c: &[f64]| {
        c.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * x + ci)
    };
    (horner(&phi_c), horner(&psi_c))
}
