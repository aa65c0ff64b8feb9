//! Chebyshev–Gauss–Lobatto collocation on `[−1, 1]`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Nodes `x_i = cos(iπ/P)`, `i = 0..P`, in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    degree: usize,
    nodes: Vec<f64>,
}

impl SpectralGrid {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn interior_nodes(&self) -> &[f64] {
        &self.nodes[1..self.degree]
    }

    pub fn interior_len(&self) -> usize {
        self.degree - 1
    }

    /// `x_i − x_j = 2 sin(π(i+j)/2P) sin(π(j−i)/2P)`, free of cancellation.
    fn node_gap(&self, i: usize, j: usize) -> f64 {
        let p = self.degree as f64;
        2.0 * (PI * (i + j) as f64 / (2.0 * p)).sin()
            * (PI * (j as f64 - i as f64) / (2.0 * p)).sin()
    }

    /// Clenshaw–Curtis quadrature weights at all `P+1` nodes.
    pub fn clenshaw_curtis_weights(&self) -> Vec<f64> {
        let n = self.degree;
        let nf = n as f64;
        let mut w = vec![0.0; n + 1];
        let mut v = vec![1.0; n - 1];
        let theta = |i: usize| PI * i as f64 / nf;
        if n.is_multiple_of(2) {
            w[0] = 1.0 / (nf * nf - 1.0);
            w[n] = w[0];
            for k in 1..n / 2 {
                let kf = k as f64;
                for (idx, vi) in v.iter_mut().enumerate() {
                    *vi -= 2.0 * (2.0 * kf * theta(idx + 1)).cos() / (4.0 * kf * kf - 1.0);
                }
            }
            for (idx, vi) in v.iter_mut().enumerate() {
                *vi -= (nf * theta(idx + 1)).cos() / (nf * nf - 1.0);
            }
        } else {
            w[0] = 1.0 / (nf * nf);
            w[n] = w[0];
            for k in 1..=(n - 1) / 2 {
                let kf = k as f64;
                for (idx, vi) in v.iter_mut().enumerate() {
                    *vi -= 2.0 * (2.0 * kf * theta(idx + 1)).cos() / (4.0 * kf * kf - 1.0);
                }
            }
        }
        for (idx, vi) in v.iter().enumerate() {
            w[idx + 1] = 2.0 * vi / nf;
        }
        w
    }
}

/// CGL grid of degree `P ≥ 2`.
pub fn cgl_grid(degree: usize) -> Result<SpectralGrid> {
    if degree < 2 {
        return Err(Error::domain(
            "cgl_grid",
            format!("degree {degree} must be at least 2"),
        ));
    }
    let p = degree as f64;
    // sin form is exactly odd-symmetric about the midpoint
    let nodes = (0..=degree)
        .map(|i| (PI * (p - 2.0 * i as f64) / (2.0 * p)).sin())
        .collect();
    Ok(SpectralGrid { degree, nodes })
}

/// First-derivative collocation matrix, diagonal by the negative-sum rule.
pub fn diff_matrix(grid: &SpectralGrid) -> DMatrix<f64> {
    let n = grid.degree;
    let c = |i: usize| {
        let base = if i == 0 || i == n { 2.0 } else { 1.0 };
        if i.is_multiple_of(2) {
            base
        } else {
            -base
        }
    };
    let mut d = DMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        let mut row_sum = 0.0;
        for j in (0..=n).filter(|&j| j != i) {
            let v = c(i) / c(j) / grid.node_gap(i, j);
            d[(i, j)] = v;
            row_sum += v;
        }
        d[(i, i)] = -row_sum;
    }
    d
}

/// Second-derivative operator on interior nodes with homogeneous Dirichlet
/// data.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianOperator {
    grid: SpectralGrid,
    matrix: DMatrix<f64>,
}

impl LaplacianOperator {
    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

/// `(D·D)` with the boundary rows and columns removed.
pub fn laplacian_dirichlet(grid: &SpectralGrid) -> LaplacianOperator {
    let d = diff_matrix(grid);
    let d2 = &d * &d;
    let m = grid.interior_len();
    let matrix = d2.view((1, 1), (m, m)).into_owned();
    LaplacianOperator {
        grid: grid.clone(),
        matrix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_abs(v: &DVector<f64>) -> f64 {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn small_grids() {
        assert_eq!(cgl_grid(2).unwrap().nodes(), &[1.0, 0.0, -1.0]);
        let g = cgl_grid(4).unwrap();
        let h = 0.5f64.sqrt();
        for (a, b) in g.nodes().iter().zip([1.0, h, 0.0, -h, -1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(cgl_grid(1).is_err());
    }

    #[test]
    fn symmetry_and_ordering() {
        let g = cgl_grid(17).unwrap();
        let x = g.nodes();
        assert_eq!(x[0], 1.0);
        assert_eq!(x[17], -1.0);
        for i in 0..=17 {
            assert_eq!(x[i], -x[17 - i]);
        }
        assert!(x.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn derivative_of_low_degree_polynomials() {
        let g = cgl_grid(8).unwrap();
        let d = diff_matrix(&g);
        let x = DVector::from_column_slice(g.nodes());
        let ones = DVector::from_element(9, 1.0);
        assert!(max_abs(&(&d * &ones)) < 1e-13);
        assert!(max_abs(&(&d * &x - &ones)) < 1e-12);
        let x5 = x.map(|t| t.powi(5));
        let dx5 = x.map(|t| 5.0 * t.powi(4));
        assert!(max_abs(&(&d * x5 - dx5)) < 1e-10);
    }

    #[test]
    fn laplacian_on_quadratic_and_sine() {
        for p in [8, 16, 33] {
            let g = cgl_grid(p).unwrap();
            let lap = laplacian_dirichlet(&g);
            let v = DVector::from_iterator(p - 1, g.interior_nodes().iter().map(|x| 1.0 - x * x));
            let r = lap.apply(&v).add_scalar(2.0);
            assert!(max_abs(&r) < 1e-10 * (p * p) as f64, "P = {p}");
        }
        let g = cgl_grid(24).unwrap();
        let lap = laplacian_dirichlet(&g);
        let s = DVector::from_iterator(23, g.interior_nodes().iter().map(|x| (PI * x).sin()));
        let err = lap.apply(&s) + s * (PI * PI);
        assert!(max_abs(&err) < 1e-8);
    }

    #[test]
    fn dirichlet_spectrum() {
        for p in [16, 32, 64] {
            let lap = laplacian_dirichlet(&cgl_grid(p).unwrap());
            let eig = lap.matrix().complex_eigenvalues();
            let scale = eig.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            for z in eig.iter() {
                assert!(z.re < 0.0, "P = {p}: {z}");
                assert!(z.im.abs() < 1e-8 * scale, "P = {p}: {z}");
            }
            if p == 32 {
                let smallest = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
                let want = -PI * PI / 4.0;
                assert!(((smallest - want) / want).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn clenshaw_curtis_integrates_polynomials() {
        for p in [4, 7, 16, 31] {
            let g = cgl_grid(p).unwrap();
            let w = g.clenshaw_curtis_weights();
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13);
            let x4: f64 = w.iter().zip(g.nodes()).map(|(wi, x)| wi * x.powi(4)).sum();
            assert!((x4 - 0.4).abs() < 1e-13, "P = {p}");
        }
    }

    proptest! {
        #[test]
        fn polynomial_exactness(p in 4usize..40, coeffs in proptest::collection::vec(-1.0f64..1.0, 41)) {
            let g = cgl_grid(p).unwrap();
            let d = diff_matrix(&g);
            let c = &coeffs[..=p];
            let eval = |x: f64| c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci);
            let deval = |x: f64| {
                c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (i, &ci)| acc * x + i as f64 * ci)
            };
            let u = DVector::from_iterator(p + 1, g.nodes().iter().map(|&x| eval(x)));
            let du = DVector::from_iterator(p + 1, g.nodes().iter().map(|&x| deval(x)));
            let err = max_abs(&(&d * u - &du));
            prop_assert!(err <= 1e-9 * (p * p) as f64 * max_abs(&du).max(1.0));
        }
    }
}
