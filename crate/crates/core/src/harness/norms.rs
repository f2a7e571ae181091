//! Density error norms, total variation and shock location.

use crate::dg::{gauss_legendre_rule, DGField, Mesh1D};
use crate::error::{Error, Result};
use crate::limiter::TestSet;

/// `(L∞, L¹)` density error against `reference`, sampled at `k + 1`
/// Gauss–Legendre nodes per cell.
pub fn error_norms<F: Fn(f64) -> f64>(field: &DGField, mesh: &Mesh1D, reference: F) -> (f64, f64) {
    let rule = gauss_legendre_rule(field.degree() + 1).expect("k + 1 >= 1");
    let h = mesh.h();
    let (mut linf, mut l1) = (0.0f64, 0.0);
    for c in 0..field.n_cells() {
        for (&xi, &w) in rule.nodes.iter().zip(&rule.weights) {
            let e = (field.evaluate(c, xi).rho - reference(mesh.x_at(c, xi))).abs();
            linf = linf.max(e);
            l1 += h * w * e;
        }
    }
    (linf, l1)
}

/// Pointwise density of a (finer) DG solution, for use as an error reference
/// on a mesh covering the same domain.
pub fn fine_grid_reference<'a>(
    fine: &'a DGField,
    fine_mesh: &'a Mesh1D,
    coarse_mesh: &Mesh1D,
) -> Result<impl Fn(f64) -> f64 + 'a> {
    let tol = 1e-12 * (fine_mesh.b() - fine_mesh.a());
    if (fine_mesh.a() - coarse_mesh.a()).abs() > tol || (fine_mesh.b() - coarse_mesh.b()).abs() > tol {
        return Err(Error::Resampling(format!(
            "reference covers [{}, {}], target covers [{}, {}]",
            fine_mesh.a(),
            fine_mesh.b(),
            coarse_mesh.a(),
            coarse_mesh.b()
        )));
    }
    if fine.n_cells() != fine_mesh.n_cells() {
        return Err(Error::Resampling("reference field does not match its mesh".into()));
    }
    Ok(move |x: f64| {
        let x = x.clamp(fine_mesh.a(), fine_mesh.b());
        let (c, xi) = fine_mesh.locate(x).expect("clamped into domain");
        fine.evaluate(c, xi).rho
    })
}

/// Total variation of the density sampled at the test nodes, in order.
pub fn density_total_variation(field: &DGField, test_set: &TestSet) -> f64 {
    let table = test_set.table();
    let mut prev: Option<f64> = None;
    let mut tv = 0.0;
    for c in 0..field.n_cells() {
        for i in 0..table.n_nodes() {
            let rho = field.evaluate_node(c, table, i).rho;
            if let Some(p) = prev {
                tv += (rho - p).abs();
            }
            prev = Some(rho);
        }
    }
    tv
}

/// Rightmost point where the cell-average density falls through `level`,
/// linearly interpolated between cell centres.
pub fn shock_position(field: &DGField, mesh: &Mesh1D, level: f64) -> Option<f64> {
    (0..field.n_cells().saturating_sub(1)).rev().find_map(|c| {
        let (a, b) = (field.average(c).rho, field.average(c + 1).rho);
        (a >= level && b < level).then(|| {
            let t = (a - level) / (a - b);
            mesh.cell_center(c) + t * mesh.h()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{l2_project, BoundaryKind};
    use crate::euler::ConservedState;

    fn mesh(n: usize) -> Mesh1D {
        Mesh1D::new(0.0, 1.0, n, BoundaryKind::Periodic).unwrap()
    }

    #[test]
    fn identical_and_offset() {
        let m = mesh(10);
        let f = l2_project(|x| ConservedState::new(1.0 + x, 0.0, 1.0), &m, 2);
        let (li, l1) = error_norms(&f, &m, |x| 1.0 + x);
        assert!(li < 1e-14 && l1 < 1e-14);
        let (li, l1) = error_norms(&f, &m, |x| 1.0 + x - 0.25);
        assert!((li - 0.25).abs() < 1e-14 && (l1 - 0.25).abs() < 1e-14);
    }

    #[test]
    fn fine_reference_checks_domain() {
        let fine_m = mesh(40);
        let fine = l2_project(|x| ConservedState::new(2.0 + x * x, 0.0, 1.0), &fine_m, 2);
        let coarse_m = mesh(10);
        let coarse = l2_project(|x| ConservedState::new(2.0 + x * x, 0.0, 1.0), &coarse_m, 2);
        let reference = fine_grid_reference(&fine, &fine_m, &coarse_m).unwrap();
        let (li, _) = error_norms(&coarse, &coarse_m, reference);
        assert!(li < 1e-13);
        let other = Mesh1D::new(0.0, 2.0, 10, BoundaryKind::Periodic).unwrap();
        assert!(matches!(fine_grid_reference(&fine, &fine_m, &other), Err(Error::Resampling(_))));
    }

    #[test]
    fn step_tv_and_shock() {
        let m = Mesh1D::new(0.0, 1.0, 10, BoundaryKind::Outflow).unwrap();
        let f = l2_project(|x| ConservedState::new(if x < 0.6 { 3.0 } else { 1.0 }, 0.0, 1.0), &m, 1);
        let ts = TestSet::gauss_lobatto(1);
        assert!((density_total_variation(&f, &ts) - 2.0).abs() < 1e-12);
        let x = shock_position(&f, &m, 2.0).unwrap();
        assert!((x - 0.6).abs() < 1e-12, "{x}");
        assert!(shock_position(&f, &m, 5.0).is_none());
    }
}
