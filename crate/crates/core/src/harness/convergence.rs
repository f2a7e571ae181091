use super::config::RunConfig;
use super::norms::error_norms;
use super::run::run;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    pub error_linf: f64,
    /// `log2(e(N/2) / e(N))`; `None` on the first row or when undefined.
    pub order_linf: Option<f64>,
    pub error_l1: f64,
    pub order_l1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Mesh size and message of the run that aborted, if any.
    pub failure: Option<(usize, String)>,
}

impl ConvergenceTable {
    pub fn l1_orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order_l1).collect()
    }
}

fn order(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > 0.0 && fine > 0.0).then(|| (coarse / fine).log2())
}

/// Append rows with orders attached to the finer mesh.
pub fn rows_from_errors(errors: &[(usize, f64, f64)]) -> Vec<ConvergenceRow> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(errors.len());
    for &(n_cells, linf, l1) in errors {
        let prev = rows.last();
        rows.push(ConvergenceRow {
            n_cells,
            error_linf: linf,
            order_linf: prev.and_then(|p| order(p.error_linf, linf)),
            error_l1: l1,
            order_l1: prev.and_then(|p| order(p.error_l1, l1)),
        });
    }
    rows
}

/// Run `template` on each cell count and measure density errors against the
/// exact solution at the final time.
pub fn convergence_study(template: &RunConfig, cells: &[usize]) -> Result<ConvergenceTable> {
    if cells.len() < 2 {
        return Err(Error::Config("convergence study needs at least two meshes".into()));
    }
    if cells.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Config("each cell count must double the previous one".into()));
    }
    let mut errors = Vec::with_capacity(cells.len());
    let mut failure = None;
    for &n in cells {
        let mut cfg = template.clone();
        cfg.n_cells = n;
        match run(&cfg) {
            Ok(out) => {
                let t = out.t_final;
                let preset = &out.preset;
                if preset.exact(0.0, t).is_none() {
                    return Err(Error::Config(format!(
                        "problem {} has no exact solution to converge against",
                        cfg.problem.name()
                    )));
                }
                let (linf, l1) =
                    error_norms(out.field(), &out.mesh, |x| preset.exact(x, t).expect("checked").rho);
                errors.push((n, linf, l1));
            }
            Err(e) => {
                failure = Some((n, e.to_string()));
                break;
            }
        }
    }
    Ok(ConvergenceTable { rows: rows_from_errors(&errors), failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_from_errors() {
        let rows = rows_from_errors(&[(8, 1.0, 8.0), (16, 0.25, 1.0), (32, 0.0, 0.125)]);
        assert_eq!(rows[0].order_l1, None);
        assert!((rows[1].order_l1.unwrap() - 3.0).abs() < 1e-15);
        assert!((rows[1].order_linf.unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(rows[2].order_linf, None);
    }

    #[test]
    fn exact_method_has_blank_orders() {
        let rows = rows_from_errors(&[(8, 0.0, 0.0), (16, 0.0, 0.0)]);
        assert!(rows.iter().all(|r| r.order_l1.is_none() && r.order_linf.is_none()));
    }

    #[test]
    fn rejects_bad_mesh_sequences() {
        let c = RunConfig::default();
        assert!(convergence_study(&c, &[8]).is_err());
        assert!(convergence_study(&c, &[8, 12]).is_err());
    }
}
