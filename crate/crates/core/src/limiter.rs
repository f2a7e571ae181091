//! Explicit invariant-region-preserving limiter.
//!
//! Each cell polynomial is pulled toward its own average,
//!
//! ```text
//! w~(x) = theta w(x) + (1 - theta) w_bar,   theta = min{1, theta1, theta2, theta3},
//! theta1 = (rho_bar - eps) / (rho_bar - rho_min)
//! theta2 = (p(w_bar) - eps) / (p(w_bar) - p_min)
//! theta3 = -q(w_bar) / (q_max - q(w_bar))
//! ```
//!
//! with the extrema taken over the Gauss–Lobatto test set of the cell. One
//! `theta` is shared by all three conserved variables, and only modes of
//! order >= 1 are touched, so the average is preserved bit for bit.

use crate::dg::{gauss_lobatto_rule, test_set_size, BasisTable, DGField};
use crate::error::{Error, Result};
use crate::euler::{pressure_raw, q_from_pressure, ConservedState, InvariantRegion};

/// Slack on `q <= 0` when checking limited node values; absorbs round-off in
/// `ln` near the entropy floor.
pub const Q_TOLERANCE: f64 = 1e-12;

/// Fallback halvings of `theta` before giving up on a cell.
const MAX_FALLBACK_PASSES: u32 = 5;

/// Re-evaluations of the explicit theta on an already rescaled polynomial.
const COMPOSED_PASSES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimiterKind {
    None,
    /// `theta = min{1, theta1, theta2}`.
    Positivity,
    /// `theta = min{1, theta1, theta2, theta3}`.
    Irp,
}

impl std::str::FromStr for LimiterKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "positivity" | "pp" => Ok(Self::Positivity),
            "irp" => Ok(Self::Irp),
            _ => Err(Error::Config(format!("unknown limiter '{s}'"))),
        }
    }
}

impl std::fmt::Display for LimiterKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::Positivity => "positivity",
            Self::Irp => "irp",
        })
    }
}

/// Points where admissibility is enforced, with the basis tabulated there.
#[derive(Debug, Clone)]
pub struct TestSet {
    table: BasisTable,
    first_weight: f64,
}

impl TestSet {
    /// The `N`-point Gauss–Lobatto set with `2N - 3 >= k`.
    pub fn gauss_lobatto(degree: usize) -> Self {
        let rule = gauss_lobatto_rule(test_set_size(degree)).expect("N >= 2");
        Self { table: BasisTable::new(degree, &rule.nodes), first_weight: rule.weights[0] }
    }

    /// Arbitrary reference points; `first_weight` is meaningless here and set to NaN.
    pub fn from_nodes(degree: usize, nodes: &[f64]) -> Self {
        Self { table: BasisTable::new(degree, nodes), first_weight: f64::NAN }
    }

    pub fn table(&self) -> &BasisTable {
        &self.table
    }

    pub fn nodes(&self) -> &[f64] {
        self.table.nodes()
    }

    /// First Lobatto weight on the unit reference cell (`w_hat_1`).
    pub fn first_weight(&self) -> f64 {
        self.first_weight
    }
}

/// Extrema over a cell's test set. `q_max` is `+inf` when some node has
/// non-positive density or pressure; `q_max_defined` ignores those nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestSetExtrema {
    pub rho_min: f64,
    pub p_min: f64,
    pub q_max: f64,
    pub q_max_defined: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellLimiterReport {
    pub theta: f64,
    /// `+inf` when the corresponding constraint was already satisfied.
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub rho_min: f64,
    pub p_min: f64,
    pub q_max: f64,
    pub activated: bool,
    /// Safety-net halvings applied after the explicit formula.
    pub fallback_passes: u32,
}

impl CellLimiterReport {
    fn identity(ext: TestSetExtrema) -> Self {
        Self {
            theta: 1.0,
            theta1: f64::INFINITY,
            theta2: f64::INFINITY,
            theta3: f64::INFINITY,
            rho_min: ext.rho_min,
            p_min: ext.p_min,
            q_max: ext.q_max,
            activated: false,
            fallback_passes: 0,
        }
    }
}

pub fn test_set_extrema(
    field: &DGField,
    cell: usize,
    region: &InvariantRegion,
    test_set: &TestSet,
) -> TestSetExtrema {
    let table = test_set.table();
    extrema_of((0..table.n_nodes()).map(|i| field.evaluate_node(cell, table, i)), region)
}

fn extrema_of<I: Iterator<Item = ConservedState>>(states: I, region: &InvariantRegion) -> TestSetExtrema {
    let mut ext = TestSetExtrema {
        rho_min: f64::INFINITY,
        p_min: f64::INFINITY,
        q_max: f64::NEG_INFINITY,
        q_max_defined: f64::NEG_INFINITY,
    };
    for w in states {
        let p = pressure_raw(w, region.gamma());
        ext.rho_min = ext.rho_min.min(w.rho);
        ext.p_min = ext.p_min.min(p);
        match q_from_pressure(w.rho, p, region) {
            Ok(q) => {
                ext.q_max = ext.q_max.max(q);
                ext.q_max_defined = ext.q_max_defined.max(q);
            }
            Err(_) => ext.q_max = f64::INFINITY,
        }
    }
    ext
}

/// `theta` for one cell from its average and test-set extrema.
///
/// Fails when the average is not strictly inside the region; that means the
/// time step or the scheme broke the cell-average invariance, and limiting
/// cannot repair it.
pub fn compute_theta(
    avg: ConservedState,
    ext: TestSetExtrema,
    region: &InvariantRegion,
    kind: LimiterKind,
    cell: usize,
) -> Result<CellLimiterReport> {
    let mut report = CellLimiterReport::identity(ext);
    if kind == LimiterKind::None {
        return Ok(report);
    }
    let eps = region.eps();
    let p_bar = pressure_raw(avg, region.gamma());
    let outside = |q: f64| Error::AverageOutsideRegion { cell, rho: avg.rho, p: p_bar, q };
    if !(avg.rho > eps && p_bar > eps) {
        return Err(outside(f64::NAN));
    }
    let q_bar = q_from_pressure(avg.rho, p_bar, region)?;
    if kind == LimiterKind::Irp && !(q_bar < 0.0) {
        return Err(outside(q_bar));
    }

    if ext.rho_min < eps {
        report.theta1 = (avg.rho - eps) / (avg.rho - ext.rho_min);
    }
    if ext.p_min < eps {
        report.theta2 = (p_bar - eps) / (p_bar - ext.p_min);
    }
    if kind == LimiterKind::Irp && ext.q_max_defined > Q_TOLERANCE {
        report.theta3 = -q_bar / (ext.q_max_defined - q_bar);
    }
    report.theta = 1f64.min(report.theta1).min(report.theta2).min(report.theta3);
    report.activated = report.theta < 1.0;
    Ok(report)
}

/// Scale every mode of order >= 1 by `theta`, for all three variables.
pub fn apply_limiter(field: &mut DGField, cell: usize, theta: f64) {
    if theta == 1.0 {
        return;
    }
    let n = field.n_modes();
    let c = field.cell_mut(cell);
    for v in 0..3 {
        for j in 1..n {
            c[v * n + j] *= theta;
        }
    }
}

fn node_states(field: &DGField, cell: usize, test_set: &TestSet) -> Vec<ConservedState> {
    let table = test_set.table();
    (0..table.n_nodes()).map(|i| field.evaluate_node(cell, table, i)).collect()
}

fn admissible(states: &[ConservedState], region: &InvariantRegion, kind: LimiterKind) -> bool {
    let eps = region.eps();
    states.iter().all(|&w| {
        let p = pressure_raw(w, region.gamma());
        w.rho >= eps
            && p >= eps
            && (kind != LimiterKind::Irp
                || matches!(q_from_pressure(w.rho, p, region), Ok(q) if q <= Q_TOLERANCE))
    })
}

/// Limit one cell in place.
///
/// The explicit theta relies on `p` being concave and `q` being defined along
/// the segment from each test node to the mean. That fails at nodes with
/// non-positive density or pressure, so the formula is re-evaluated on the
/// rescaled polynomial and composed with the previous theta: once density is
/// fixed, pressure is concave; once pressure is fixed, `q` is defined.
/// Anything still inadmissible after that is round-off, handled by halving
/// theta a bounded number of times.
pub fn limit_cell(
    field: &mut DGField,
    cell: usize,
    region: &InvariantRegion,
    kind: LimiterKind,
    test_set: &TestSet,
) -> Result<CellLimiterReport> {
    let avg = field.average(cell);
    let ext = test_set_extrema(field, cell, region, test_set);
    let mut report = compute_theta(avg, ext, region, kind, cell)?;
    if kind == LimiterKind::None || !report.activated {
        return Ok(report);
    }
    let original: Vec<f64> = field.cell(cell).to_vec();
    let rescale = |field: &mut DGField, theta: f64| {
        field.cell_mut(cell).copy_from_slice(&original);
        apply_limiter(field, cell, theta);
    };
    apply_limiter(field, cell, report.theta);

    for _ in 0..COMPOSED_PASSES {
        let states = node_states(field, cell, test_set);
        if admissible(&states, region, kind) {
            return Ok(report);
        }
        let next = compute_theta(avg, extrema_of(states.into_iter(), region), region, kind, cell)?;
        if next.theta >= 1.0 {
            break;
        }
        report.theta *= next.theta;
        report.theta1 = report.theta1.min(report.theta * next.theta1 / next.theta);
        report.theta2 = report.theta2.min(report.theta * next.theta2 / next.theta);
        report.theta3 = report.theta3.min(report.theta * next.theta3 / next.theta);
        rescale(field, report.theta);
    }

    while !admissible(&node_states(field, cell, test_set), region, kind) {
        if report.fallback_passes == MAX_FALLBACK_PASSES {
            return Err(Error::LimiterFailure { cell });
        }
        report.fallback_passes += 1;
        report.theta *= 0.5;
        rescale(field, report.theta);
    }
    Ok(report)
}

/// Limit every cell; returns one report per cell.
pub fn limit_field(
    field: &mut DGField,
    region: &InvariantRegion,
    kind: LimiterKind,
    test_set: &TestSet,
) -> Result<Vec<CellLimiterReport>> {
    (0..field.n_cells()).map(|c| limit_cell(field, c, region, kind, test_set)).collect()
}

/// Aggregate view of one limiting pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterSummary {
    pub min_theta: f64,
    pub activated_cells: usize,
    pub theta1_active: usize,
    pub theta2_active: usize,
    pub theta3_active: usize,
    pub fallback_passes: u32,
}

impl Default for LimiterSummary {
    fn default() -> Self {
        Self {
            min_theta: 1.0,
            activated_cells: 0,
            theta1_active: 0,
            theta2_active: 0,
            theta3_active: 0,
            fallback_passes: 0,
        }
    }
}

impl LimiterSummary {
    pub fn from_reports(reports: &[CellLimiterReport]) -> Self {
        let mut s = Self::default();
        for r in reports {
            s.min_theta = s.min_theta.min(r.theta);
            s.activated_cells += r.activated as usize;
            s.theta1_active += r.theta1.is_finite() as usize;
            s.theta2_active += r.theta2.is_finite() as usize;
            s.theta3_active += r.theta3.is_finite() as usize;
            s.fallback_passes += r.fallback_passes;
        }
        s
    }
}
