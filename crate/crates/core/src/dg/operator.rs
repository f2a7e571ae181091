//! Semi-discrete DG operator `dW/dt = L(W)` with a global Lax–Friedrichs flux.

use super::basis::BasisTable;
use super::field::{eval_cell, BoundaryKind, DGField, Mesh1D};
use super::quadrature::{gauss_legendre_rule, QuadratureRule};
use crate::error::{Error, Result};
use crate::euler::{flux_raw, max_signal_speed, physical_flux, ConservedState};

/// `(F(wL) + F(wR)) / 2 - alpha (wR - wL) / 2`.
pub fn lax_friedrichs_flux(
    left: ConservedState,
    right: ConservedState,
    alpha: f64,
    gamma: f64,
) -> Result<[f64; 3]> {
    let fl = physical_flux(left, gamma)?;
    let fr = physical_flux(right, gamma)?;
    Ok(lf_combine(fl, fr, left, right, alpha))
}

#[inline]
fn lf_combine(
    fl: [f64; 3],
    fr: [f64; 3],
    left: ConservedState,
    right: ConservedState,
    alpha: f64,
) -> [f64; 3] {
    let (l, r) = (left.to_array(), right.to_array());
    [0, 1, 2].map(|v| 0.5 * (fl[v] + fr[v]) - 0.5 * alpha * (r[v] - l[v]))
}

/// Precomputed tables for evaluating `L(W)` at a fixed degree.
#[derive(Debug, Clone)]
pub struct DgOperator {
    degree: usize,
    gamma: f64,
    volume_rule: QuadratureRule,
    volume: BasisTable,
    faces: BasisTable,
}

impl DgOperator {
    /// Volume integrals use `k + 1` Gauss–Legendre nodes.
    pub fn new(degree: usize, gamma: f64) -> Self {
        let volume_rule = gauss_legendre_rule(degree + 1).expect("degree + 1 >= 1");
        let volume = BasisTable::new(degree, &volume_rule.nodes);
        let faces = BasisTable::new(degree, &[-0.5, 0.5]);
        Self { degree, gamma, volume_rule, volume, faces }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Residual `L(W)` in the same modal layout as `field`.
    pub fn apply(&self, field: &DGField, mesh: &Mesh1D, alpha: f64) -> Result<DGField> {
        let mut out = DGField::zeros(field.degree(), field.n_cells());
        self.apply_into(field, mesh, alpha, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(
        &self,
        field: &DGField,
        mesh: &Mesh1D,
        alpha: f64,
        out: &mut DGField,
    ) -> Result<()> {
        assert_eq!(field.degree(), self.degree, "operator/field degree mismatch");
        assert_eq!(field.n_cells(), mesh.n_cells(), "field/mesh size mismatch");
        let n_cells = field.n_cells();
        let n = field.n_modes();
        let gamma = self.gamma;
        let h = mesh.h();

        let traces: Vec<(ConservedState, ConservedState)> = (0..n_cells)
            .map(|c| {
                let coeffs = field.cell(c);
                (eval_cell(coeffs, n, self.faces.values_at(0)), eval_cell(coeffs, n, self.faces.values_at(1)))
            })
            .collect();

        let flux_of = |cell: usize, w: ConservedState| -> Result<[f64; 3]> {
            physical_flux(w, gamma).map_err(|e| Error::SpatialOperator { cell, source: Box::new(e) })
        };

        // interface j sits between cells j - 1 and j
        let mut face_flux = Vec::with_capacity(n_cells + 1);
        for j in 0..=n_cells {
            let (lcell, rcell) = match (j, mesh.boundary()) {
                (0, BoundaryKind::Periodic) => (n_cells - 1, 0),
                (0, BoundaryKind::Outflow) => (0, 0),
                (j, BoundaryKind::Periodic) if j == n_cells => (n_cells - 1, 0),
                (j, BoundaryKind::Outflow) if j == n_cells => (n_cells - 1, n_cells - 1),
                (j, _) => (j - 1, j),
            };
            // outflow ghosts hold the boundary cell's average
            let wl = if j == 0 && mesh.boundary() == BoundaryKind::Outflow {
                field.average(0)
            } else {
                traces[lcell].1
            };
            let wr = if j == n_cells && mesh.boundary() == BoundaryKind::Outflow {
                field.average(n_cells - 1)
            } else {
                traces[rcell].0
            };
            let fl = flux_of(lcell, wl)?;
            let fr = flux_of(rcell, wr)?;
            face_flux.push(lf_combine(fl, fr, wl, wr, alpha));
        }

        let phi_left = self.faces.values_at(0);
        let phi_right = self.faces.values_at(1);
        let inv_h = 1.0 / h;
        for c in 0..n_cells {
            let coeffs = field.cell(c);
            let mut acc = vec![0.0; 3 * n];
            for (q, &wq) in self.volume_rule.weights.iter().enumerate() {
                let w = eval_cell(coeffs, n, self.volume.values_at(q));
                if w.rho == 0.0 {
                    return Err(Error::SpatialOperator { cell: c, source: Box::new(Error::ZeroDensity) });
                }
                let f = flux_raw(w, gamma);
                let dphi = self.volume.derivatives_at(q);
                for v in 0..3 {
                    for j in 0..n {
                        acc[v * n + j] += wq * f[v] * dphi[j];
                    }
                }
            }
            let (fl, fr) = (face_flux[c], face_flux[c + 1]);
            let dst = out.cell_mut(c);
            for v in 0..3 {
                for j in 0..n {
                    dst[v * n + j] =
                        inv_h * (acc[v * n + j] - fr[v] * phi_right[j] + fl[v] * phi_left[j]);
                }
            }
        }
        Ok(())
    }
}

/// `L(W)` for a one-off evaluation; time stepping reuses a [`DgOperator`].
pub fn spatial_operator(field: &DGField, mesh: &Mesh1D, gamma: f64, alpha: f64) -> Result<DGField> {
    DgOperator::new(field.degree(), gamma).apply(field, mesh, alpha)
}

/// Largest `|u| + c` over the tabulated nodes of every cell.
pub fn global_signal_speed(field: &DGField, table: &BasisTable, gamma: f64) -> Result<f64> {
    let mut speed: f64 = 0.0;
    for c in 0..field.n_cells() {
        for node in 0..table.n_nodes() {
            let w = field.evaluate_node(c, table, node);
            let s = max_signal_speed(w, gamma)
                .map_err(|e| Error::SpatialOperator { cell: c, source: Box::new(e) })?;
            speed = speed.max(s);
        }
    }
    Ok(speed)
}
