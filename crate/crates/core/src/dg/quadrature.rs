//! Gauss–Legendre and Gauss–Lobatto rules on the reference cell `[-1/2, 1/2]`.
//!
//! Weights are normalised to the unit cell length, so they sum to one.

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_{-1/2}^{1/2} f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    fn from_unit_interval(mut nodes: Vec<f64>, mut weights: Vec<f64>) -> Self {
        // sort ascending and map [-1, 1] -> [-1/2, 1/2]
        let mut idx: Vec<usize> = (0..nodes.len()).collect();
        idx.sort_by(|&a, &b| nodes[a].total_cmp(&nodes[b]));
        let sorted_n: Vec<f64> = idx.iter().map(|&i| 0.5 * nodes[i]).collect();
        let sorted_w: Vec<f64> = idx.iter().map(|&i| 0.5 * weights[i]).collect();
        nodes.clear();
        weights.clear();
        Self { nodes: sorted_n, weights: sorted_w }
    }
}

/// Legendre `P_n(x)` and `P_n'(x)` on `[-1, 1]` by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = if (x * x - 1.0).abs() < 1e-300 {
        // P_n'(±1) = (±1)^{n-1} n(n+1)/2
        let sign = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        sign * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * p - p_prev) / (x * x - 1.0)
    };
    (p, dp)
}

/// `n`-point Gauss–Legendre rule, exact to degree `2n - 1`.
pub fn gauss_legendre_rule(n: usize) -> Result<QuadratureRule> {
    if n < 1 {
        return Err(Error::InvalidArgument("Gauss-Legendre rule needs n >= 1".into()));
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < NEWTON_TOL {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    Ok(QuadratureRule::from_unit_interval(nodes, weights))
}

/// `n`-point Gauss–Lobatto rule including both endpoints, exact to degree `2n - 3`.
pub fn gauss_lobatto_rule(n: usize) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::InvalidArgument("Gauss-Lobatto rule needs N >= 2".into()));
    }
    let m = n - 1;
    let mf = m as f64;
    let mut nodes = vec![-1.0];
    // interior nodes are the roots of P_m'
    for j in 1..m {
        let mut x = -(std::f64::consts::PI * j as f64 / mf).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre(m, x);
            let ddp = (2.0 * x * dp - mf * (mf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / ddp;
            x -= dx;
            if dx.abs() < NEWTON_TOL {
                break;
            }
        }
        nodes.push(x);
    }
    nodes.push(1.0);
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre(m, x);
            2.0 / (mf * (mf + 1.0) * p * p)
        })
        .collect();
    Ok(QuadratureRule::from_unit_interval(nodes, weights))
}

/// Smallest Lobatto size `N >= 2` with `2N - 3 >= k`.
pub fn test_set_size(k: usize) -> usize {
    ((k + 3).div_ceil(2)).max(2)
}
