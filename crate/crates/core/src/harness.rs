//! Time-refinement studies on the nonsmooth benchmark problem
//!
//! `v(x) = √(1−x²)`, `f(x,t) = (t+1)^8 (1 + χ_(0,1)(x))` on `(−1, 1)`.
//!
//! Errors are differences of final-time solutions on successive step
//! counts, measured on a shared spatial grid, and observed orders are
//! `ln(e_coarse/e_fine)/ln 2`.

use std::sync::Arc;

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spatial::{cgl_grid, laplacian_dirichlet, SpectralGrid};
use crate::timestepper::{solve_corrected, solve_standard, ProblemSpec, SolutionHistory};

/// Difference norms below this are treated as round-off limited.
pub const ERROR_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Standard,
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "cc", alias = "clenshaw_curtis")]
    ClenshawCurtis,
    #[serde(rename = "rms")]
    Rms,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub k: usize,
    pub alpha: f64,
    #[serde(rename = "T", default = "default_t_final")]
    pub t_final: f64,
    pub n_list: Vec<usize>,
    pub nodes: usize,
    pub scheme: Scheme,
    #[serde(default = "default_norm")]
    pub norm: NormKind,
}

fn default_t_final() -> f64 {
    1.0
}

fn default_norm() -> NormKind {
    NormKind::ClenshawCurtis
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.len() < 3 {
            return Err(Error::Config(
                "a study needs at least three step counts".into(),
            ));
        }
        if let Some(w) = self.n_list.windows(2).find(|w| w[1] != 2 * w[0]) {
            return Err(Error::Config(format!(
                "step counts must double: {} is followed by {}",
                w[0], w[1]
            )));
        }
        if self.nodes < 2 {
            return Err(Error::Config(format!(
                "nodes = {} must be at least 2",
                self.nodes
            )));
        }
        Ok(())
    }
}

/// `1 + χ_(0,1)(x)`, with χ vanishing at both interval ends.
fn source_profile(x: f64) -> f64 {
    if x > 0.0 && x < 1.0 {
        2.0
    } else {
        1.0
    }
}

/// The benchmark problem on the interior CGL nodes of degree `nodes`.
pub fn example1_problem(
    alpha: f64,
    k: usize,
    nodes: usize,
    n_steps: usize,
    t_final: f64,
) -> Result<ProblemSpec> {
    let grid = cgl_grid(nodes)?;
    let lap = laplacian_dirichlet(&grid);
    let profile: Vec<f64> = grid
        .interior_nodes()
        .iter()
        .map(|&x| source_profile(x))
        .collect();
    let v = DVector::from_iterator(
        grid.interior_len(),
        grid.interior_nodes().iter().map(|&x| (1.0 - x * x).sqrt()),
    );
    // ∂_t^l (t+1)^8 at t = 0 is 8!/(8−l)!
    let derivs = (0..k.max(1))
        .map(|l| {
            let falling: f64 = (0..l).map(|i| (8 - i) as f64).product();
            DVector::from_iterator(profile.len(), profile.iter().map(|g| falling * g))
        })
        .collect();
    let shared = Arc::new(profile);
    Ok(ProblemSpec {
        alpha,
        k,
        t_final,
        n_steps,
        operator: lap.into_matrix(),
        v,
        source: Arc::new(move |t, i| (t + 1.0).powi(8) * shared[i]),
        source_derivs_at_zero: derivs,
    })
}

/// Discrete `L²(−1,1)` norm of a vector on the interior nodes.
pub fn discrete_l2_norm(vec: &DVector<f64>, grid: &SpectralGrid, mode: NormKind) -> f64 {
    match mode {
        NormKind::ClenshawCurtis => {
            let w = grid.clenshaw_curtis_weights();
            vec.iter()
                .zip(&w[1..grid.degree()])
                .map(|(x, wi)| wi * x * x)
                .sum::<f64>()
                .sqrt()
        }
        NormKind::Rms => (2.0 / grid.degree() as f64 * vec.norm_squared()).sqrt(),
    }
}

/// `ln(e_coarse/e_fine)/ln 2`, or `None` unless both errors are positive.
pub fn convergence_rate(e_coarse: f64, e_fine: f64) -> Option<f64> {
    (e_coarse > 0.0 && e_fine > 0.0).then(|| (e_coarse / e_fine).ln() / std::f64::consts::LN_2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub k: usize,
    pub alpha: f64,
    pub scheme: Scheme,
    pub nodes: usize,
    pub norm: NormKind,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub n_list: Vec<usize>,
    /// `‖u^{N_i} − u^{N_{i+1}}‖`.
    pub errors: Vec<f64>,
    /// `rates[i]` compares `errors[i]` with `errors[i+1]`.
    pub rates: Vec<Option<f64>>,
    pub floor_flags: Vec<bool>,
    /// `k+1−α` for the corrected scheme, 1 for the standard one.
    pub theoretical_order: f64,
}

impl ConvergenceReport {
    fn from_errors(cfg: &ExperimentConfig, errors: Vec<f64>) -> Self {
        let floor_flags: Vec<bool> = errors.iter().map(|&e| e < ERROR_FLOOR).collect();
        let rates = errors
            .windows(2)
            .zip(floor_flags.windows(2))
            .map(|(e, f)| {
                if f[0] || f[1] {
                    None
                } else {
                    convergence_rate(e[0], e[1])
                }
            })
            .collect();
        let theoretical_order = match cfg.scheme {
            Scheme::Standard => 1.0,
            Scheme::Corrected => cfg.k as f64 + 1.0 - cfg.alpha,
        };
        Self {
            k: cfg.k,
            alpha: cfg.alpha,
            scheme: cfg.scheme,
            nodes: cfg.nodes,
            norm: cfg.norm,
            t_final: cfg.t_final,
            n_list: cfg.n_list.clone(),
            errors,
            rates,
            floor_flags,
            theoretical_order,
        }
    }

    /// Rates that are not floor limited.
    pub fn defined_rates(&self) -> Vec<f64> {
        self.rates.iter().flatten().copied().collect()
    }

    /// `log2(e_first/e_last)/(levels−1)` over the unflagged errors.
    pub fn mean_rate(&self) -> Option<f64> {
        let kept: Vec<f64> = self
            .errors
            .iter()
            .zip(&self.floor_flags)
            .filter(|(_, &f)| !f)
            .map(|(&e, _)| e)
            .collect();
        if kept.len() < 2 {
            return None;
        }
        convergence_rate(kept[0], kept[kept.len() - 1]).map(|r| r / (kept.len() - 1) as f64)
    }

    pub fn finest_rate(&self) -> Option<f64> {
        self.rates.iter().rev().flatten().next().copied()
    }
}

/// Solves one benchmark run with the configured scheme.
pub fn run_single(cfg: &ExperimentConfig, n_steps: usize) -> Result<SolutionHistory> {
    let problem = example1_problem(cfg.alpha, cfg.k, cfg.nodes, n_steps, cfg.t_final)?;
    let solved = match cfg.scheme {
        Scheme::Standard => solve_standard(&problem),
        Scheme::Corrected => solve_corrected(&problem),
    };
    solved.map_err(|e| Error::Run {
        k: cfg.k,
        alpha: cfg.alpha,
        n: n_steps,
        source: Box::new(e),
    })
}

/// Runs every step count in parallel and reduces in list order.
pub fn run_convergence_study(cfg: &ExperimentConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let grid = cgl_grid(cfg.nodes)?;
    let finals: Vec<DVector<f64>> = cfg
        .n_list
        .par_iter()
        .map(|&n| run_single(cfg, n).map(|h| h.u_final))
        .collect::<Result<_>>()?;
    let errors = finals
        .windows(2)
        .map(|w| discrete_l2_norm(&(&w[0] - &w[1]), &grid, cfg.norm))
        .collect();
    Ok(ConvergenceReport::from_errors(cfg, errors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n_list: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            k: 2,
            alpha: 0.5,
            t_final: 1.0,
            n_list,
            nodes: 16,
            scheme: Scheme::Corrected,
            norm: NormKind::ClenshawCurtis,
        }
    }

    #[test]
    fn rate_formula() {
        assert!((convergence_rate(4e-4, 1e-4).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(convergence_rate(1e-3, 1e-3).unwrap(), 0.0);
        assert!(convergence_rate(0.0, 1e-3).is_none());
        assert!(convergence_rate(1e-3, -1.0).is_none());
        let mean = convergence_rate(4.8406e-4, 2.8839e-5).unwrap() / 4.0;
        assert!((mean - 1.0173).abs() < 1e-4);
    }

    #[test]
    fn example_data() {
        let p = example1_problem(0.5, 4, 8, 10, 1.0).unwrap();
        let grid = cgl_grid(8).unwrap();
        let x = grid.interior_nodes();
        assert_eq!(x[3], 0.0);
        assert_eq!(p.v[3], 1.0);
        for (i, &xi) in x.iter().enumerate() {
            let g = if xi > 0.0 { 2.0 } else { 1.0 };
            assert_eq!(p.source_derivs_at_zero[0][i], g);
            assert_eq!(p.source_derivs_at_zero[3][i], 336.0 * g);
            assert_eq!((p.source)(1.0, i), 256.0 * g);
        }
        assert_eq!(p.source_derivs_at_zero.len(), 4);
    }

    #[test]
    fn norms() {
        let grid = cgl_grid(200).unwrap();
        let zero = DVector::zeros(199);
        assert_eq!(
            discrete_l2_norm(&zero, &grid, NormKind::ClenshawCurtis),
            0.0
        );
        let ones = DVector::from_element(199, 1.0);
        let n = discrete_l2_norm(&ones, &grid, NormKind::ClenshawCurtis);
        assert!((n - 2f64.sqrt()).abs() < 1e-3);
        let v = DVector::from_fn(199, |i, _| (i as f64).sin());
        for mode in [NormKind::ClenshawCurtis, NormKind::Rms] {
            let a = discrete_l2_norm(&(&v * -3.0), &grid, mode);
            let b = 3.0 * discrete_l2_norm(&v, &grid, mode);
            assert!((a - b).abs() <= 1e-15 * b);
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg(vec![10, 20, 40]).validate().is_ok());
        assert!(cfg(vec![10, 20]).validate().is_err());
        assert!(cfg(vec![10, 20, 30]).validate().is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let c = cfg(vec![20, 40, 80]);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"corrected\"") && text.contains("\"cc\""));
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn floor_flags_suppress_rates() {
        let c = cfg(vec![10, 20, 40, 80]);
        let r = ConvergenceReport::from_errors(&c, vec![1e-6, 1e-8, 1e-12]);
        assert_eq!(r.floor_flags, vec![false, false, true]);
        assert!(r.rates[0].is_some() && r.rates[1].is_none());
        assert_eq!(r.finest_rate(), r.rates[0]);
    }

    #[test]
    fn small_study_runs() {
        let r = run_convergence_study(&cfg(vec![8, 16, 32])).unwrap();
        assert_eq!(r.errors.len(), 2);
        assert_eq!(r.rates.len(), 1);
        assert!(r.errors.iter().all(|e| e.is_finite() && *e > 0.0));
    }
}
