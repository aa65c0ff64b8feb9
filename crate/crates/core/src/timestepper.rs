//! Standard and corrected L_k time stepping for the shifted problem
//!
//! `∂_t^α V − A V = A v + f(t)`, `V(0) = 0`, `u = V + v`.
//!
//! Step `n` solves `(τ^{−α} ω_0 I − A) V^n = b^n − τ^{−α} Σ_{j<n} ω_{n−j} V^j`
//! with the system matrix factorized once per run.
//!
//! The corrected scheme modifies the first `k` right-hand sides. Written
//! with the truncation term
//! `R_k(t_n) = f(t_n) − f(0) − Σ_{l=1}^{k−1} t_n^l/l! ∂_t^l f(0)`, step
//! `n ≤ k` reads
//!
//! `(1 + a_n)(A v + f(0)) + Σ_{l=1}^{k−1} (t_n^l/l! + d_{l,n} τ^l) ∂_t^l f(0) + R_k(t_n)`.
//!
//! Substituting `R_k` cancels the Taylor terms, leaving
//!
//! `(1 + a_n) A v + a_n f(0) + f(t_n) + Σ_{l=1}^{k−1} d_{l,n} τ^l ∂_t^l f(0)`,
//!
//! and for `n > k` the same substitution gives `A v + f(t_n)`. The solver
//! uses the collapsed form; [`rhs_literal`] keeps the uncollapsed one.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lk_weights::{weights_explicit, CorrectionSet, SchemeParams, WeightSequence};

/// Source term evaluated at `(t, interior node index)`.
pub type Source = Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>;

const PIVOT_RATIO_MIN: f64 = 1e-14;

#[derive(Clone)]
pub struct ProblemSpec {
    pub alpha: f64,
    pub k: usize,
    pub t_final: f64,
    pub n_steps: usize,
    /// Discrete operator `A`; any square size, including `1×1`.
    pub operator: DMatrix<f64>,
    pub v: DVector<f64>,
    pub source: Source,
    /// `∂_t^l f(·, 0)` for `l = 0, 1, …`; the corrected scheme needs `l < k`.
    pub source_derivs_at_zero: Vec<DVector<f64>>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("alpha", &self.alpha)
            .field("k", &self.k)
            .field("t_final", &self.t_final)
            .field("n_steps", &self.n_steps)
            .field("dim", &self.v.len())
            .field("derivs", &self.source_derivs_at_zero.len())
            .finish()
    }
}

impl ProblemSpec {
    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn tau(&self) -> f64 {
        self.t_final / self.n_steps as f64
    }

    pub fn params(&self) -> Result<SchemeParams> {
        SchemeParams::new(self.k, self.alpha)
    }

    fn source_vec(&self, t: f64) -> DVector<f64> {
        DVector::from_fn(self.dim(), |i, _| (self.source)(t, i))
    }

    fn validate(&self, corrected: bool) -> Result<SchemeParams> {
        let params = self.params()?;
        if !(self.alpha < 1.0) {
            return Err(Error::Config(format!(
                "alpha = {} must be below 1",
                self.alpha
            )));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!(
                "final time {} must be positive",
                self.t_final
            )));
        }
        if self.n_steps < self.k.max(1) {
            return Err(Error::Config(format!(
                "N = {} steps is fewer than k = {}",
                self.n_steps, self.k
            )));
        }
        let m = self.dim();
        if self.operator.nrows() != m || self.operator.ncols() != m {
            return Err(Error::Config(format!(
                "operator is {}x{}, expected {m}x{m}",
                self.operator.nrows(),
                self.operator.ncols()
            )));
        }
        if let Some(bad) = self.source_derivs_at_zero.iter().find(|d| d.len() != m) {
            return Err(Error::Config(format!(
                "source derivative has length {}, expected {m}",
                bad.len()
            )));
        }
        if corrected && self.source_derivs_at_zero.len() < self.k {
            return Err(Error::Config(format!(
                "corrected scheme needs {} source derivatives at t = 0, got {}",
                self.k,
                self.source_derivs_at_zero.len()
            )));
        }
        Ok(params)
    }
}

/// `V^0 … V^N` and the final-time solution `u^N = V^N + v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionHistory {
    pub tau: f64,
    pub states: Vec<DVector<f64>>,
    pub u_final: DVector<f64>,
}

/// `Σ_{j=1}^{n−1} ω_{n−j} V^j`, accumulated in increasing `j`.
pub fn history_convolution(
    weights: &WeightSequence,
    states: &[DVector<f64>],
    n: usize,
) -> DVector<f64> {
    let dim = states.first().map_or(0, |s| s.len());
    let omega = weights.omegas();
    let mut acc = DVector::zeros(dim);
    for j in 1..n {
        acc.axpy(omega[n - j], &states[j], 1.0);
    }
    acc
}

/// Right-hand side of step `n` in collapsed form.
pub fn rhs_collapsed(
    p: &ProblemSpec,
    corrections: Option<&CorrectionSet>,
    av: &DVector<f64>,
    n: usize,
) -> Result<DVector<f64>> {
    let tau = p.tau();
    let mut rhs = av + p.source_vec(n as f64 * tau);
    if let Some(cs) = corrections {
        if n <= p.k {
            let a = cs.a_f64(n)?;
            rhs.axpy(a, av, 1.0);
            rhs.axpy(a, &p.source_derivs_at_zero[0], 1.0);
            for l in 1..p.k {
                let d = cs.d_f64(l, n)?;
                rhs.axpy(d * tau.powi(l as i32), &p.source_derivs_at_zero[l], 1.0);
            }
        }
    }
    Ok(rhs)
}

/// Right-hand side of step `n` of the corrected scheme with the Taylor
/// terms and `R_k(t_n)` kept separate.
pub fn rhs_literal(
    p: &ProblemSpec,
    corrections: &CorrectionSet,
    av: &DVector<f64>,
    n: usize,
) -> Result<DVector<f64>> {
    let tau = p.tau();
    let t = n as f64 * tau;
    let f0 = &p.source_derivs_at_zero[0];
    let taylor_coef = |l: usize| t.powi(l as i32) / (1..=l).map(|i| i as f64).product::<f64>();

    let mut remainder = p.source_vec(t) - f0;
    for l in 1..p.k {
        remainder.axpy(-taylor_coef(l), &p.source_derivs_at_zero[l], 1.0);
    }

    let a = if n <= p.k { corrections.a_f64(n)? } else { 0.0 };
    let mut rhs = (av + f0) * (1.0 + a);
    for l in 1..p.k {
        let d = if n <= p.k {
            corrections.d_f64(l, n)?
        } else {
            0.0
        };
        rhs.axpy(
            taylor_coef(l) + d * tau.powi(l as i32),
            &p.source_derivs_at_zero[l],
            1.0,
        );
    }
    Ok(rhs + remainder)
}

pub fn solve_standard(p: &ProblemSpec) -> Result<SolutionHistory> {
    let params = p.validate(false)?;
    march(p, params, None)
}

pub fn solve_corrected(p: &ProblemSpec) -> Result<SolutionHistory> {
    let params = p.validate(true)?;
    let cs = CorrectionSet::new(p.k)?;
    march(p, params, Some(&cs))
}

fn march(
    p: &ProblemSpec,
    params: SchemeParams,
    corrections: Option<&CorrectionSet>,
) -> Result<SolutionHistory> {
    let n_steps = p.n_steps;
    let tau = p.tau();
    let scale = tau.powf(-p.alpha);
    let weights = weights_explicit(params, n_steps + 1)?;
    let dim = p.dim();

    let system = DMatrix::identity(dim, dim) * (scale * weights.omegas()[0]) - &p.operator;
    let lu = system.lu();
    let diag = lu.u().diagonal();
    let (lo, hi) = diag.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), x| {
        (lo.min(x.abs()), hi.max(x.abs()))
    });
    let ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    if !(ratio > PIVOT_RATIO_MIN) {
        return Err(Error::SingularSystem { pivot_ratio: ratio });
    }

    let av = &p.operator * &p.v;
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(DVector::zeros(dim));
    for n in 1..=n_steps {
        let mut rhs = rhs_collapsed(p, corrections, &av, n)?;
        rhs.axpy(-scale, &history_convolution(&weights, &states, n), 1.0);
        let next = lu
            .solve(&rhs)
            .ok_or(Error::SingularSystem { pivot_ratio: ratio })?;
        if next.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                step: n,
                steps: n_steps,
            });
        }
        states.push(next);
    }
    let u_final = &states[n_steps] + &p.v;
    Ok(SolutionHistory {
        tau,
        states,
        u_final,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_problem(k: usize, alpha: f64, n: usize, lambda: f64, v: f64) -> ProblemSpec {
        ProblemSpec {
            alpha,
            k,
            t_final: 1.0,
            n_steps: n,
            operator: DMatrix::from_element(1, 1, lambda),
            v: DVector::from_element(1, v),
            source: Arc::new(|_, _| 0.0),
            source_derivs_at_zero: vec![DVector::zeros(1); k],
        }
    }

    #[test]
    fn convolution_small_cases() {
        let w = weights_explicit(SchemeParams::new(2, 0.5).unwrap(), 6).unwrap();
        let states: Vec<_> = (0..5).map(|_| DVector::from_element(1, 1.0)).collect();
        assert_eq!(history_convolution(&w, &states, 1)[0], 0.0);
        assert_eq!(history_convolution(&w, &states, 2)[0], w.omegas()[1]);
        let o = w.omegas();
        let want = o[4] + o[3] + o[2] + o[1];
        assert!((history_convolution(&w, &states, 5)[0] - want).abs() < 1e-15);
    }

    #[test]
    fn too_few_steps_rejected() {
        let p = scalar_problem(4, 0.5, 3, -1.0, 1.0);
        assert!(matches!(solve_standard(&p), Err(Error::Config(_))));
    }

    #[test]
    fn missing_derivatives_rejected() {
        let mut p = scalar_problem(3, 0.5, 10, -1.0, 1.0);
        p.source_derivs_at_zero.truncate(1);
        assert!(solve_standard(&p).is_ok());
        assert!(matches!(solve_corrected(&p), Err(Error::Config(_))));
    }

    #[test]
    fn singular_system_detected() {
        // τ^{−α} ω_0 − λ = 0
        let probe = scalar_problem(1, 0.5, 4, 0.0, 1.0);
        let w0 = weights_explicit(probe.params().unwrap(), 2)
            .unwrap()
            .omegas()[0];
        let lambda = probe.tau().powf(-0.5) * w0;
        let p = scalar_problem(1, 0.5, 4, lambda, 1.0);
        assert!(matches!(
            solve_standard(&p),
            Err(Error::SingularSystem { .. })
        ));
    }

    #[test]
    fn first_order_correction_only_touches_step_one() {
        let mut p = scalar_problem(1, 0.5, 8, -2.0, 1.0);
        p.source = Arc::new(|t, _| 1.0 + t);
        p.source_derivs_at_zero = vec![DVector::from_element(1, 1.0)];
        let cs = CorrectionSet::new(1).unwrap();
        let av = &p.operator * &p.v;
        let r_std = rhs_collapsed(&p, None, &av, 1).unwrap();
        let r_cor = rhs_collapsed(&p, Some(&cs), &av, 1).unwrap();
        assert!((r_cor[0] - r_std[0] - 0.5 * (av[0] + 1.0)).abs() < 1e-15);
        for n in 2..=8 {
            assert_eq!(
                rhs_collapsed(&p, None, &av, n).unwrap(),
                rhs_collapsed(&p, Some(&cs), &av, n).unwrap()
            );
        }
    }

    #[test]
    fn scalar_relaxation_tracks_mittag_leffler() {
        // E_{1/2}(−1) = e·erfc(1)
        let exact = 0.427_583_576_155_807_004_41;
        let h = solve_standard(&scalar_problem(1, 0.5, 1024, -1.0, 1.0)).unwrap();
        assert!((h.u_final[0] - exact).abs() < 5e-2);
        assert_eq!(h.states[0][0], 0.0);
    }
}
