//! Independent weight evaluation by numerical integration of the
//! Lagrange-derivative kernels.

use std::sync::OnceLock;

use super::SchemeParams;
use crate::error::{Error, Result};
use crate::special_functions::gamma;

const GAUSS_POINTS: usize = 64;
const SINGULAR_PANELS: usize = 48;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, by Newton iteration on `P_n`.
fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_POINTS;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for m in 2..=n {
                    let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

fn integrate(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * x
        .iter()
        .zip(w)
        .map(|(&xi, &wi)| wi * f(mid + half * xi))
        .sum::<f64>()
}

/// `Q_{k,i}(s) = Σ_{m≠i} 1/(m−i) Π_{i'≠i,m} (s+i'−1)/(i'−i)`, the derivative
/// factor of the Lagrange basis polynomial attached to `V^{j−i}` on the
/// unit interval.
pub(crate) fn lagrange_derivative_factor(k: usize, i: usize, s: f64) -> f64 {
    let mut total = 0.0;
    for m in (0..=k).filter(|&m| m != i) {
        let mut prod = 1.0 / (m as f64 - i as f64);
        for ip in (0..=k).filter(|&ip| ip != i && ip != m) {
            prod *= (s + ip as f64 - 1.0) / (ip as f64 - i as f64);
        }
        total += prod;
    }
    total
}

/// `ω^(k)_m` from `Σ_{i≤min(m,k)} Γ(1−α)^{−1} ∫_0^1 (m−i+1−s)^{−α} Q_{k,i}(s) ds`.
///
/// The `m − i = 0` kernel is singular at `s = 1`; it is integrated in
/// `u = (1−s)^{1−α}` over geometrically graded panels towards `u = 0`.
pub fn weights_quadrature_oracle(params: SchemeParams, m: usize) -> Result<f64> {
    let (k, alpha) = (params.k(), params.alpha());
    if alpha >= 1.0 {
        return Err(Error::domain(
            "weights_quadrature_oracle",
            "the J-integral kernel requires alpha < 1",
        ));
    }
    let scale = 1.0 / gamma(1.0 - alpha)?;
    let mut total = 0.0;
    for i in 0..=m.min(k) {
        let shift = (m - i) as f64;
        let integral = if m == i {
            let expo = 1.0 / (1.0 - alpha);
            let f = |u: f64| expo * lagrange_derivative_factor(k, i, 1.0 - u.powf(expo));
            let mut acc = 0.0;
            let mut hi = 1.0;
            for _ in 0..SINGULAR_PANELS {
                let lo = 0.5 * hi;
                acc += integrate(lo, hi, f);
                hi = lo;
            }
            acc + integrate(0.0, hi, f)
        } else {
            integrate(0.0, 1.0, |s| {
                (shift + 1.0 - s).powf(-alpha) * lagrange_derivative_factor(k, i, s)
            })
        };
        total += integral;
    }
    Ok(scale * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials() {
        for deg in [0, 5, 31, 127] {
            let got = integrate(0.0, 1.0, |x| x.powi(deg));
            assert!(
                (got - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14,
                "degree {deg}"
            );
        }
    }

    #[test]
    fn derivative_factors_form_a_partition_of_zero() {
        // Σ_i ℓ_i ≡ 1 so the derivatives sum to zero
        for k in 1..=6 {
            for s in [0.0, 0.3, 0.77, 1.0] {
                let sum: f64 = (0..=k).map(|i| lagrange_derivative_factor(k, i, s)).sum();
                assert!(sum.abs() < 1e-12, "k={k} s={s}");
            }
        }
    }

    #[test]
    fn first_order_factors() {
        assert_eq!(lagrange_derivative_factor(1, 0, 0.4), 1.0);
        assert_eq!(lagrange_derivative_factor(1, 1, 0.4), -1.0);
    }
}
