//! CSV output. Numbers are written with 17 significant digits so that
//! parsing a file recovers the printed values exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::convergence::ConvergenceRow;
use crate::dg::{DGField, Mesh1D};
use crate::error::{Error, Result};
use crate::euler::{pressure_raw, q_functional, specific_entropy, InvariantRegion};
use crate::limiter::{CellLimiterReport, TestSet};
use crate::time::StepDiagnostics;

pub const SOLUTION_HEADER: &str = "x,rho,u,p,E,s,q,theta_last";
pub const TABLE_HEADER: &str = "n_cells,error_linf,order_linf,error_l1,order_l1";
pub const DIAGNOSTICS_HEADER: &str = "step,t,dt,cfl_number,min_theta,activated_cells,theta1_active,\
theta2_active,theta3_active,fallback_passes,total_rho,total_m,total_E,min_average_entropy";
pub const EXACT_HEADER: &str = "x,rho,u,p,E";

#[inline]
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.into(), source })?;
    }
    fs::write(path, text).map_err(|source| Error::Io { path: path.into(), source })
}

/// Where to sample a solution for output.
#[derive(Debug, Clone)]
pub enum SampleDensity {
    /// The Gauss–Lobatto test nodes of each cell.
    TestNodes,
    /// `n` equispaced points per cell, endpoints included (`n >= 2`).
    Uniform(usize),
}

pub fn solution_csv(
    field: &DGField,
    mesh: &Mesh1D,
    region: &InvariantRegion,
    reports: &[CellLimiterReport],
    sample: &SampleDensity,
) -> String {
    let nodes: Vec<f64> = match sample {
        SampleDensity::TestNodes => TestSet::gauss_lobatto(field.degree()).nodes().to_vec(),
        SampleDensity::Uniform(n) => {
            let n = (*n).max(2);
            (0..n).map(|i| -0.5 + i as f64 / (n - 1) as f64).collect()
        }
    };
    let gamma = region.gamma();
    let mut out = String::from(SOLUTION_HEADER);
    out.push('\n');
    for c in 0..field.n_cells() {
        let theta = reports.get(c).map_or(1.0, |r| r.theta);
        for &xi in &nodes {
            let w = field.evaluate(c, xi);
            let p = pressure_raw(w, gamma);
            let s = specific_entropy(w, gamma).unwrap_or(f64::NAN);
            let q = q_functional(w, region).unwrap_or(f64::NAN);
            let cols = [mesh.x_at(c, xi), w.rho, w.m / w.rho, p, w.energy, s, q, theta];
            let line: Vec<String> = cols.iter().map(|&v| fmt_num(v)).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
    }
    out
}

pub fn emit_solution_csv(
    field: &DGField,
    mesh: &Mesh1D,
    region: &InvariantRegion,
    reports: &[CellLimiterReport],
    sample: &SampleDensity,
    path: &Path,
) -> Result<()> {
    write_file(path, &solution_csv(field, mesh, region, reports, sample))
}

pub fn table_csv(rows: &[ConvergenceRow]) -> String {
    let opt = |o: Option<f64>| o.map(fmt_num).unwrap_or_default();
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n_cells,
            fmt_num(r.error_linf),
            opt(r.order_linf),
            fmt_num(r.error_l1),
            opt(r.order_l1)
        );
    }
    out
}

pub fn emit_table_csv(rows: &[ConvergenceRow], path: &Path) -> Result<()> {
    write_file(path, &table_csv(rows))
}

pub fn diagnostics_csv(diags: &[StepDiagnostics]) -> String {
    let mut out = String::from(DIAGNOSTICS_HEADER);
    out.push('\n');
    for d in diags {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            d.step,
            fmt_num(d.t),
            fmt_num(d.dt),
            fmt_num(d.cfl_number),
            fmt_num(d.min_theta),
            d.activated_cells,
            d.theta1_active,
            d.theta2_active,
            d.theta3_active,
            d.fallback_passes,
            fmt_num(d.total_rho),
            fmt_num(d.total_m),
            fmt_num(d.total_energy),
            fmt_num(d.min_average_entropy)
        );
    }
    out
}

pub fn emit_diagnostics_csv(diags: &[StepDiagnostics], path: &Path) -> Result<()> {
    write_file(path, &diagnostics_csv(diags))
}

/// `x, rho, u, p, E` rows.
pub fn exact_csv(rows: &[(f64, crate::euler::PrimitiveState)], gamma: f64) -> String {
    let mut out = String::from(EXACT_HEADER);
    out.push('\n');
    for &(x, w) in rows {
        let e = w.to_conserved(gamma).energy;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_num(x),
            fmt_num(w.rho),
            fmt_num(w.u),
            fmt_num(w.p),
            fmt_num(e)
        );
    }
    out
}

pub fn emit_exact_csv(rows: &[(f64, crate::euler::PrimitiveState)], gamma: f64, path: &Path) -> Result<()> {
    write_file(path, &exact_csv(rows, gamma))
}
