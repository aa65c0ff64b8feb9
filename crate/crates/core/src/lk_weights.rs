//! Convolution-quadrature weights of the L_k approximation of the Caputo
//! derivative,
//!
//! `τ^{−α} Σ_{j=1}^{n} ω^(k)_{n−j} V^j`,
//!
//! together with the starting-step correction coefficients and the
//! generating function `δ^α(ξ) = Σ_j ω_j ξ^j`.
//!
//! Every weight is a combination of `(k+1)`-th backward differences of
//! `x^{m−α}`:
//!
//! `ω^(k)_j = Σ_{m=1}^{k} b^(k)_{k+1−m} ρ_k(j, m) / Γ(m+1−α)`,
//! `ρ_k(j, m) = Σ_{i=0}^{min(j+1,k+1)} C(k+1,i) (−1)^i (j+1−i)^{m−α}`,
//!
//! where a zero base contributes zero. At `α = 1` the weights are the BDF_k
//! coefficients.

mod quadrature;
mod stencil;
mod tables;

use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

pub use quadrature::weights_quadrature_oracle;
pub use tables::Rational;

use crate::error::{Error, Result};
use crate::special_functions::{
    gamma, polylog_series, polylog_tau8, ComplexArgument, PolylogOrder,
};
use stencil::Stencil;

pub const MAX_ORDER: usize = 6;

/// Interpolation order `k` and fractional order `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeParams {
    k: usize,
    alpha: f64,
}

impl SchemeParams {
    /// `1 ≤ k ≤ 6`, `0 < α ≤ 1`.
    pub fn new(k: usize, alpha: f64) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&k) {
            return Err(Error::domain(
                "SchemeParams",
                format!("order k = {k} outside 1..=6"),
            ));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(
                "SchemeParams",
                format!("alpha = {alpha} outside (0, 1]"),
            ));
        }
        Ok(Self { k, alpha })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Weights `ω_0 … ω_{M−1}` for one `(k, α)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    params: SchemeParams,
    omegas: Vec<f64>,
}

impl WeightSequence {
    pub fn params(&self) -> SchemeParams {
        self.params
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// `Σ_{j≤m} ω_j`.
    pub fn partial_sum(&self, m: usize) -> f64 {
        let mut acc = Neumaier::default();
        for &w in &self.omegas[..=m.min(self.omegas.len() - 1)] {
            acc.add(w);
        }
        acc.total()
    }
}

fn check_terms(op: &'static str, params: SchemeParams, n_terms: usize) -> Result<()> {
    if n_terms < params.k + 1 {
        return Err(Error::domain(
            op,
            format!(
                "n_terms = {n_terms} must be at least k+1 = {}",
                params.k + 1
            ),
        ));
    }
    Ok(())
}

fn binomial_stencil(k: usize) -> &'static Stencil {
    static CACHE: OnceLock<Vec<Stencil>> = OnceLock::new();
    &CACHE.get_or_init(|| (1..=MAX_ORDER).map(Stencil::binomial).collect())[k - 1]
}

fn explicit_stencil(k: usize) -> &'static Stencil {
    static CACHE: OnceLock<Vec<Stencil>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        tables::EXPLICIT
            .iter()
            .map(|row| Stencil::new(row.stencil))
            .collect()
    })[k - 1]
}

/// `ρ_k(j, l, m)` with `l = min(j+1, k+1)`; a zero base contributes 0.
pub fn rho(k: usize, j: usize, alpha: f64, m: usize) -> f64 {
    binomial_stencil(k).eval(j as u64 + 1, m as f64 - alpha)
}

/// Weights from the closed-form rows: for each power `m−α` (highest first)
/// the `(k+1)`-point stencil applied to `(j+1)^{m−α}, j^{m−α}, …`, with the
/// leading rows `j < k` keeping only the positive bases.
pub fn weights_explicit(params: SchemeParams, n_terms: usize) -> Result<WeightSequence> {
    check_terms("weights_explicit", params, n_terms)?;
    let (k, alpha) = (params.k, params.alpha);
    let row = &tables::EXPLICIT[k - 1];
    let stencil = explicit_stencil(k);
    let scaled: Vec<(f64, f64)> = row
        .multipliers
        .iter()
        .enumerate()
        .map(|(idx, &mult)| {
            let power = (k - idx) as f64;
            gamma(power + 1.0 - alpha).map(|g| (power - alpha, mult / g))
        })
        .collect::<Result<_>>()?;
    let omegas = (0..n_terms)
        .map(|j| {
            scaled
                .iter()
                .map(|&(beta, coef)| coef * stencil.eval(j as u64 + 1, beta))
                .sum()
        })
        .collect();
    Ok(WeightSequence { params, omegas })
}

/// Weights from the `ρ_k` sums and the exact multipliers `b^(k)`.
pub fn weights_generic(params: SchemeParams, n_terms: usize) -> Result<WeightSequence> {
    check_terms("weights_generic", params, n_terms)?;
    let (k, alpha) = (params.k, params.alpha);
    let b = GeneratingCoeffs::new(k)?.b;
    let coef: Vec<f64> = (1..=k)
        .map(|m| Ok(rational_to_f64(&b[k - m]) / gamma(m as f64 + 1.0 - alpha)?))
        .collect::<Result<_>>()?;
    let omegas = (0..n_terms)
        .map(|j| (1..=k).map(|m| coef[m - 1] * rho(k, j, alpha, m)).sum())
        .collect();
    Ok(WeightSequence { params, omegas })
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Row `k` of the classical BDF coefficients, `j = 0..k`.
pub fn bdf_row(k: usize) -> Result<Vec<Rational>> {
    if !(1..=MAX_ORDER).contains(&k) {
        return Err(Error::domain(
            "bdf_row",
            format!("order k = {k} outside 1..=6"),
        ));
    }
    Ok(tables::to_rationals(tables::BDF[k - 1]))
}

/// Starting-step correction coefficients for one order `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionSet {
    k: usize,
    a: Vec<Rational>,
    d: Vec<Vec<Rational>>,
}

impl CorrectionSet {
    pub fn new(k: usize) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&k) {
            return Err(Error::domain(
                "CorrectionSet",
                format!("order k = {k} outside 1..=6"),
            ));
        }
        Ok(Self {
            k,
            a: tables::to_rationals(tables::CORRECTION_A[k - 1]),
            d: tables::CORRECTION_D[k - 1]
                .iter()
                .map(|row| tables::to_rationals(row))
                .collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `a^(k)_n`, `1 ≤ n ≤ k`.
    pub fn a(&self, n: usize) -> Result<Rational> {
        if !(1..=self.k).contains(&n) {
            return Err(Error::domain(
                "correction_a",
                format!("n = {n} outside 1..={}", self.k),
            ));
        }
        Ok(self.a[n - 1])
    }

    /// `d^(k)_{l,n}`, `1 ≤ l ≤ k−1`, `1 ≤ n ≤ k`.
    pub fn d(&self, l: usize, n: usize) -> Result<Rational> {
        if !(1..self.k).contains(&l) || !(1..=self.k).contains(&n) {
            return Err(Error::domain(
                "correction_d",
                format!("(l, n) = ({l}, {n}) outside 1..{} x 1..={}", self.k, self.k),
            ));
        }
        Ok(self.d[l - 1][n - 1])
    }

    pub fn a_f64(&self, n: usize) -> Result<f64> {
        self.a(n).map(|r| rational_to_f64(&r))
    }

    pub fn d_f64(&self, l: usize, n: usize) -> Result<f64> {
        self.d(l, n).map(|r| rational_to_f64(&r))
    }
}

pub fn correction_a(k: usize, n: usize) -> Result<Rational> {
    CorrectionSet::new(k)?.a(n)
}

pub fn correction_d(k: usize, l: usize, n: usize) -> Result<Rational> {
    if k < 2 {
        return Err(Error::domain(
            "correction_d",
            "d coefficients exist only for k ≥ 2",
        ));
    }
    CorrectionSet::new(k)?.d(l, n)
}

/// Coefficients of the closed form of the generating function.
///
/// `b` are the multipliers of `ρ_k`; `bbar` are the Taylor coefficients
/// `(1−e^{−h})^{k+1} e^h = Σ_{j≥1} b̄_j h^{k+j}`, `j = 1..k+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingCoeffs {
    pub b: Vec<Rational>,
    pub bbar: Vec<Rational>,
}

impl GeneratingCoeffs {
    pub fn new(k: usize) -> Result<Self> {
        if !(1..=MAX_ORDER).contains(&k) {
            return Err(Error::domain(
                "GeneratingCoeffs",
                format!("order k = {k} outside 1..=6"),
            ));
        }
        Ok(Self {
            b: tables::to_rationals(tables::GENERATING_B[k - 1]),
            bbar: taylor_bbar(k),
        })
    }
}

fn taylor_bbar(k: usize) -> Vec<Rational> {
    let degree = 2 * k + 1;
    let mut exp_pos = vec![Rational::zero(); degree + 1];
    let mut fact = Rational::one();
    for (n, slot) in exp_pos.iter_mut().enumerate() {
        if n > 0 {
            fact *= Rational::from_integer(n as i128);
        }
        *slot = fact.recip();
    }
    // 1 − e^{−h}
    let one_minus: Vec<Rational> = exp_pos
        .iter()
        .enumerate()
        .map(|(n, c)| match n {
            0 => Rational::zero(),
            _ if n % 2 == 1 => *c,
            _ => -*c,
        })
        .collect();
    let mul = |a: &[Rational], b: &[Rational]| {
        let mut out = vec![Rational::zero(); degree + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(degree + 1 - i) {
                out[i + j] += *x * *y;
            }
        }
        out
    };
    let mut prod = exp_pos.clone();
    for _ in 0..=k {
        prod = mul(&prod, &one_minus);
    }
    prod[k + 1..=degree].to_vec()
}

/// Route used by [`symbol_delta_alpha`].
#[derive(Debug, Clone, Copy)]
pub enum SymbolBackend<'a> {
    /// `Σ_j ω_j ξ^j` over the supplied weights.
    WeightSum(&'a WeightSequence),
    /// Closed form with `Li` from the direct series.
    PolylogSeries { tol: f64 },
    /// Closed form with `Li` from the τ₈ approximant; needs `zτ`.
    Tau8,
}

/// `δ^α(ξ) = ((1−ξ)^{k+1}/ξ) Σ_{j=1}^{k} b_{k+1−j} Li_{α−j}(ξ) / Γ(j+1−α)`.
pub fn symbol_delta_alpha(
    params: SchemeParams,
    arg: &ComplexArgument,
    backend: SymbolBackend<'_>,
) -> Result<Complex64> {
    const OP: &str = "symbol_delta_alpha";
    let xi = arg.xi();
    match backend {
        SymbolBackend::WeightSum(weights) => {
            if weights.params != params {
                return Err(Error::domain(
                    OP,
                    "weights were built for different parameters",
                ));
            }
            if xi.norm() > 1.0 {
                return Err(Error::domain(OP, "weight sum requires |xi| <= 1"));
            }
            Ok(power_series(weights.omegas(), xi))
        }
        SymbolBackend::PolylogSeries { tol } => {
            closed_form(params, arg, |p| polylog_series(p, xi, tol))
        }
        SymbolBackend::Tau8 => {
            let ztau = arg
                .ztau()
                .ok_or_else(|| Error::domain(OP, "the tau8 route needs ztau"))?;
            closed_form(params, arg, |p| polylog_tau8(p, ztau))
        }
    }
}

fn closed_form(
    params: SchemeParams,
    arg: &ComplexArgument,
    li: impl Fn(PolylogOrder) -> Result<Complex64>,
) -> Result<Complex64> {
    let k = params.k;
    let b = GeneratingCoeffs::new(k)?.b;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 1..=k {
        let p = PolylogOrder::new(params.alpha - j as f64)?;
        let coef = rational_to_f64(&b[k - j]) / gamma(j as f64 + 1.0 - params.alpha)?;
        sum += li(p)? * coef;
    }
    Ok(arg.one_minus_xi().powu(k as u32 + 1) / arg.xi() * sum)
}

/// `Σ_j c_j ξ^j` with compensated summation.
pub fn power_series(coeffs: &[f64], xi: Complex64) -> Complex64 {
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    let mut power = Complex64::new(1.0, 0.0);
    for &c in coeffs {
        let t = power * c;
        re.add(t.re);
        im.add(t.im);
        power *= xi;
    }
    Complex64::new(re.total(), im.total())
}

/// Neumaier's compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
