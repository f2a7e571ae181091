//! Orthonormal Legendre basis on `[-1/2, 1/2]`.
//!
//! `phi_j(xi) = sqrt(2j + 1) P_j(2 xi)`, so `∫ phi_i phi_j = delta_ij` over the
//! reference cell and `phi_0 = 1`. The cell average of a modal expansion is
//! therefore exactly its zeroth coefficient.

use super::quadrature::legendre;

#[inline]
pub fn basis_value(j: usize, xi: f64) -> f64 {
    ((2 * j + 1) as f64).sqrt() * legendre(j, 2.0 * xi).0
}

#[inline]
pub fn basis_derivative(j: usize, xi: f64) -> f64 {
    2.0 * ((2 * j + 1) as f64).sqrt() * legendre(j, 2.0 * xi).1
}

/// Basis values (and derivatives) tabulated at a fixed node set.
#[derive(Debug, Clone)]
pub struct BasisTable {
    n_modes: usize,
    nodes: Vec<f64>,
    values: Vec<f64>,
    derivatives: Vec<f64>,
}

impl BasisTable {
    pub fn new(degree: usize, nodes: &[f64]) -> Self {
        let n_modes = degree + 1;
        let mut values = Vec::with_capacity(nodes.len() * n_modes);
        let mut derivatives = Vec::with_capacity(nodes.len() * n_modes);
        for &xi in nodes {
            for j in 0..n_modes {
                values.push(basis_value(j, xi));
                derivatives.push(basis_derivative(j, xi));
            }
        }
        Self { n_modes, nodes: nodes.to_vec(), values, derivatives }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    #[inline]
    pub fn values_at(&self, node: usize) -> &[f64] {
        &self.values[node * self.n_modes..(node + 1) * self.n_modes]
    }

    #[inline]
    pub fn derivatives_at(&self, node: usize) -> &[f64] {
        &self.derivatives[node * self.n_modes..(node + 1) * self.n_modes]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::quadrature::gauss_legendre_rule;

    #[test]
    fn orthonormal() {
        let rule = gauss_legendre_rule(8).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let g = rule.integrate(|x| basis_value(i, x) * basis_value(j, x));
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g - e).abs() < 1e-14, "({i},{j}) -> {g}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for j in 0..5 {
            for &x in &[-0.4, -0.1, 0.0, 0.27, 0.49] {
                let fd = (basis_value(j, x + h) - basis_value(j, x - h)) / (2.0 * h);
                assert!((fd - basis_derivative(j, x)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn table_rows() {
        let t = BasisTable::new(2, &[-0.5, 0.5]);
        assert_eq!(t.values_at(0)[0], 1.0);
        assert!((t.values_at(1)[1] - 3f64.sqrt()).abs() < 1e-15);
        assert!((t.values_at(0)[1] + 3f64.sqrt()).abs() < 1e-15);
        assert!((t.values_at(1)[2] - 5f64.sqrt()).abs() < 1e-15);
    }
}
