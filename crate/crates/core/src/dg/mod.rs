//! Discretisation: mesh, modal Legendre space, quadrature and the DG residual.

pub mod basis;
pub mod field;
pub mod operator;
pub mod quadrature;

pub use basis::BasisTable;
pub use field::{l2_project, l2_project_with, BoundaryKind, DGField, Mesh1D};
pub use operator::{global_signal_speed, lax_friedrichs_flux, spatial_operator, DgOperator};
pub use quadrature::{gauss_legendre_rule, gauss_lobatto_rule, test_set_size, QuadratureRule};
