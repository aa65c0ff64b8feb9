//! Evaluation of `Σ_i s_i (top − i)^β` for a signed difference stencil `s`.
//!
//! The literal sum of a `(k+1)`-th difference cancels catastrophically for
//! large `top`: the terms are `O(top^β)` while the result is
//! `O(top^{β−k−1})`. Once every base is at least one, the sum is instead
//! expanded about the stencil centre,
//!
//! `Σ s_i (c + d_i)^β = c^β Σ_n C(β, n) Σ_i s_i (d_i / c)^n`,
//! `c = top − K/2`, `d_i = K/2 − i`,
//!
//! whose low moments vanish exactly. Moments up to `EXACT_MOMENTS` are
//! integers and are formed in `i128`.

use dashu_float::{round::mode::HalfEven, FBig};
use num_traits::ToPrimitive;

type Wide = FBig<HalfEven>;

const EXACT_MOMENTS: usize = 40;
const MAX_TERMS: usize = 4000;
const REL_STOP: f64 = 1e-17;
const WIDE_BITS: usize = 160;

#[derive(Debug, Clone)]
pub(crate) struct Stencil {
    coeffs: Vec<i64>,
    /// `Σ_i s_i (K − 2i)^n`, exact.
    moments: Vec<f64>,
}

impl Stencil {
    pub fn new(coeffs: &[i64]) -> Self {
        let width = (coeffs.len() - 1) as i128;
        let moments = (0..=EXACT_MOMENTS)
            .map(|n| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, &s)| s as i128 * (width - 2 * i as i128).pow(n as u32))
                    .sum::<i128>()
                    .to_f64()
                    .unwrap_or(f64::NAN)
            })
            .collect();
        Self {
            coeffs: coeffs.to_vec(),
            moments,
        }
    }

    /// Alternating binomial stencil of width `k+1`.
    pub fn binomial(k: usize) -> Self {
        let mut row = vec![1i64];
        for i in 1..=k + 1 {
            let prev = row[i - 1];
            row.push(-prev * (k + 2 - i) as i64 / i as i64);
        }
        Self::new(&row)
    }

    pub fn width(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `Σ_{i: top−i > 0} s_i (top − i)^β`; a zero base contributes 0.
    pub fn eval(&self, top: u64, beta: f64) -> f64 {
        if top as usize > self.width() {
            self.eval_centred(top as f64, beta)
        } else {
            self.eval_direct(top, beta)
        }
    }

    /// Literal sum, carried in 160-bit floats: the leading rows still cancel
    /// by several digits.
    pub fn eval_direct(&self, top: u64, beta: f64) -> f64 {
        let wide = |x: f64| Wide::try_from(x).map(|v| v.with_precision(WIDE_BITS).value());
        let Ok(beta_w) = wide(beta) else {
            return f64::NAN;
        };
        let mut sum = Wide::ZERO.with_precision(WIDE_BITS).value();
        for (i, &s) in self
            .coeffs
            .iter()
            .enumerate()
            .take_while(|&(i, _)| (i as u64) < top)
        {
            let base = top - i as u64;
            let p = if base == 1 {
                Wide::ONE
            } else {
                match wide(base as f64) {
                    Ok(b) => (b.ln() * &beta_w).exp(),
                    Err(_) => return f64::NAN,
                }
            };
            sum += p * Wide::from(s);
        }
        sum.to_f64().value()
    }

    fn eval_centred(&self, top: f64, beta: f64) -> f64 {
        let half = 0.5 * self.width() as f64;
        let c = top - half;
        let inv_2c = 0.5 / c;
        let ratios: Vec<f64> = (0..self.coeffs.len())
            .map(|i| (half - i as f64) / c)
            .collect();
        let mut powers = vec![1.0f64; self.coeffs.len()];
        let mut scale = 1.0f64;
        let mut binom = 1.0f64;
        let mut sum = 0.0f64;
        let mut prev = f64::INFINITY;
        for n in 0..MAX_TERMS {
            if n > 0 {
                binom *= (beta - (n - 1) as f64) / n as f64;
                scale *= inv_2c;
                for (p, r) in powers.iter_mut().zip(&ratios) {
                    *p *= r;
                }
            }
            let moment = if n <= EXACT_MOMENTS {
                self.moments[n] * scale
            } else {
                self.coeffs
                    .iter()
                    .zip(&powers)
                    .map(|(&s, p)| s as f64 * p)
                    .sum()
            };
            let term = binom * moment;
            sum += term;
            if n > self.width() && term.abs() + prev.abs() <= REL_STOP * sum.abs() {
                break;
            }
            prev = term;
        }
        c.powf(beta) * sum
    }
}
