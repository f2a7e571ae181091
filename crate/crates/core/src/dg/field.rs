use super::basis::{basis_value, BasisTable};
use super::quadrature::gauss_legendre_rule;
use crate::error::{Error, Result};
use crate::euler::ConservedState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Periodic,
    /// Zero-order extrapolation: the ghost state is the boundary cell average.
    Outflow,
}

/// Uniform mesh of `[a, b]`; cell `i` covers `[a + i h, a + (i + 1) h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh1D {
    a: f64,
    b: f64,
    n_cells: usize,
    boundary: BoundaryKind,
}

impl Mesh1D {
    pub fn new(a: f64, b: f64, n_cells: usize, boundary: BoundaryKind) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidArgument("mesh needs at least one cell".into()));
        }
        if !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid domain [{a}, {b}]")));
        }
        Ok(Self { a, b, n_cells, boundary })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn boundary(&self) -> BoundaryKind {
        self.boundary
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n_cells as f64
    }

    pub fn cell_left(&self, cell: usize) -> f64 {
        self.a + cell as f64 * self.h()
    }

    pub fn cell_center(&self, cell: usize) -> f64 {
        self.a + (cell as f64 + 0.5) * self.h()
    }

    /// Physical coordinate of reference point `xi` in `cell`.
    pub fn x_at(&self, cell: usize, xi: f64) -> f64 {
        self.cell_center(cell) + xi * self.h()
    }

    /// Cell containing `x` and the reference coordinate of `x` in it.
    /// Points on an interior face belong to the right cell; `b` belongs to the last.
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if !(x >= self.a && x <= self.b) {
            return None;
        }
        let h = self.h();
        let cell = (((x - self.a) / h).floor() as usize).min(self.n_cells - 1);
        let xi = ((x - self.cell_center(cell)) / h).clamp(-0.5, 0.5);
        Some((cell, xi))
    }
}

/// Piecewise polynomials of degree `k` for the three conserved variables.
///
/// Coefficients are stored cell-major, then variable, then mode:
/// `coeffs[(cell * 3 + var) * (k + 1) + mode]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DGField {
    degree: usize,
    n_cells: usize,
    coeffs: Vec<f64>,
}

impl DGField {
    pub fn zeros(degree: usize, n_cells: usize) -> Self {
        Self { degree, n_cells, coeffs: vec![0.0; n_cells * 3 * (degree + 1)] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_modes(&self) -> usize {
        self.degree + 1
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// All `3 (k + 1)` coefficients of one cell.
    #[inline]
    pub fn cell(&self, cell: usize) -> &[f64] {
        let n = 3 * self.n_modes();
        &self.coeffs[cell * n..(cell + 1) * n]
    }

    #[inline]
    pub fn cell_mut(&mut self, cell: usize) -> &mut [f64] {
        let n = 3 * self.n_modes();
        &mut self.coeffs[cell * n..(cell + 1) * n]
    }

    #[inline]
    pub fn mode(&self, cell: usize, var: usize, mode: usize) -> f64 {
        self.coeffs[(cell * 3 + var) * self.n_modes() + mode]
    }

    #[inline]
    pub fn set_mode(&mut self, cell: usize, var: usize, mode: usize, value: f64) {
        let n = self.n_modes();
        self.coeffs[(cell * 3 + var) * n + mode] = value;
    }

    /// Exact cell mean, read from the zeroth mode.
    pub fn cell_average(&self, cell: usize) -> Result<ConservedState> {
        if cell >= self.n_cells {
            return Err(Error::InvalidArgument(format!(
                "cell {cell} out of range (n_cells = {})",
                self.n_cells
            )));
        }
        Ok(self.average(cell))
    }

    #[inline]
    pub(crate) fn average(&self, cell: usize) -> ConservedState {
        ConservedState::new(self.mode(cell, 0, 0), self.mode(cell, 1, 0), self.mode(cell, 2, 0))
    }

    /// Evaluate the expansion of `cell` at reference point `xi`.
    pub fn evaluate(&self, cell: usize, xi: f64) -> ConservedState {
        let n = self.n_modes();
        let c = self.cell(cell);
        let mut out = [0.0; 3];
        for j in 0..n {
            let phi = basis_value(j, xi);
            for (v, o) in out.iter_mut().enumerate() {
                *o += c[v * n + j] * phi;
            }
        }
        ConservedState::from_array(out)
    }

    /// Evaluate at a tabulated node.
    #[inline]
    pub fn evaluate_node(&self, cell: usize, table: &BasisTable, node: usize) -> ConservedState {
        eval_cell(self.cell(cell), self.n_modes(), table.values_at(node))
    }

    /// `sum_i h * average_i` for each conserved variable.
    pub fn totals(&self, h: f64) -> [f64; 3] {
        let mut t = [0.0; 3];
        for cell in 0..self.n_cells {
            for (v, tv) in t.iter_mut().enumerate() {
                *tv += h * self.mode(cell, v, 0);
            }
        }
        t
    }

    /// `sum_i a_i x_i` over fields of identical shape.
    pub fn linear_combination(terms: &[(f64, &DGField)]) -> DGField {
        let (_, first) = terms[0];
        let mut out = DGField::zeros(first.degree, first.n_cells);
        for &(a, f) in terms {
            assert_eq!(f.coeffs.len(), out.coeffs.len(), "field shape mismatch");
            for (o, x) in out.coeffs.iter_mut().zip(&f.coeffs) {
                *o += a * x;
            }
        }
        out
    }
}

#[inline]
pub(crate) fn eval_cell(coeffs: &[f64], n_modes: usize, phi: &[f64]) -> ConservedState {
    let mut out = [0.0; 3];
    for (v, o) in out.iter_mut().enumerate() {
        let c = &coeffs[v * n_modes..(v + 1) * n_modes];
        *o = c.iter().zip(phi).map(|(a, b)| a * b).sum();
    }
    ConservedState::from_array(out)
}

/// Piecewise L² projection of `w0` onto degree-`k` polynomials, using
/// `k + 2` Gauss–Legendre nodes per cell.
pub fn l2_project<F>(w0: F, mesh: &Mesh1D, k: usize) -> DGField
where
    F: Fn(f64) -> ConservedState,
{
    l2_project_with(w0, mesh, k, k + 2)
}

/// As [`l2_project`] with an explicit number of quadrature nodes (`>= k + 1`).
pub fn l2_project_with<F>(w0: F, mesh: &Mesh1D, k: usize, n_quad: usize) -> DGField
where
    F: Fn(f64) -> ConservedState,
{
    let rule = gauss_legendre_rule(n_quad.max(k + 1)).expect("n_quad >= 1");
    let table = BasisTable::new(k, &rule.nodes);
    let mut field = DGField::zeros(k, mesh.n_cells());
    let n = k + 1;
    for cell in 0..mesh.n_cells() {
        let c = field.cell_mut(cell);
        for (q, (&xi, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let state = w0(mesh.x_at(cell, xi)).to_array();
            let phi = table.values_at(q);
            for (v, sv) in state.iter().enumerate() {
                for j in 0..n {
                    c[v * n + j] += w * sv * phi[j];
                }
            }
        }
    }
    field
}
