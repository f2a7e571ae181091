//! SSP time stepping around the DG operator and the limiter.
//!
//! The steppers are generic over [`SemiDiscrete`] so the same code drives the
//! full DG system and scalar model problems in the tests.

use std::collections::VecDeque;

use crate::dg::{global_signal_speed, DGField, DgOperator, Mesh1D};
use crate::error::{Error, Result};
use crate::euler::{pressure_raw, InvariantRegion};
use crate::limiter::{limit_field, CellLimiterReport, LimiterKind, LimiterSummary, TestSet};

/// Vector-space operations the steppers need.
pub trait LinearState: Clone {
    fn linear_combination(terms: &[(f64, &Self)]) -> Self;
}

impl LinearState for DGField {
    fn linear_combination(terms: &[(f64, &Self)]) -> Self {
        DGField::linear_combination(terms)
    }
}

impl LinearState for f64 {
    fn linear_combination(terms: &[(f64, &Self)]) -> Self {
        terms.iter().map(|(a, x)| a * **x).sum()
    }
}

impl LinearState for Vec<f64> {
    fn linear_combination(terms: &[(f64, &Self)]) -> Self {
        let mut out = vec![0.0; terms[0].1.len()];
        for (a, x) in terms {
            for (o, xi) in out.iter_mut().zip(x.iter()) {
                *o += a * xi;
            }
        }
        out
    }
}

/// `dW/dt = L(W)` plus the post-processing applied after a stage or step.
pub trait SemiDiscrete {
    type State: LinearState;

    fn residual(&mut self, state: &Self::State) -> Result<Self::State>;

    fn limit(&mut self, _state: &mut Self::State) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Rk3,
    Ms3,
}

impl Integrator {
    /// Largest multiple of the forward-Euler step that keeps every stage a
    /// convex combination of admissible forward-Euler steps.
    pub fn ssp_coefficient(self) -> f64 {
        match self {
            Integrator::Rk3 => 1.0,
            // the W^n term is a forward-Euler step of length 3 dt
            Integrator::Ms3 => 1.0 / 3.0,
        }
    }

    pub fn default_cfl_fraction(self) -> f64 {
        match self {
            Integrator::Rk3 => 1.0,
            Integrator::Ms3 => 0.9,
        }
    }
}

impl std::str::FromStr for Integrator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk3" => Ok(Self::Rk3),
            "ms3" | "ms" => Ok(Self::Ms3),
            _ => Err(Error::Config(format!("unknown integrator '{s}'"))),
        }
    }
}

impl std::fmt::Display for Integrator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Integrator::Rk3 => "rk3",
            Integrator::Ms3 => "ms3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimiterPlacement {
    PerStage,
    PerStep,
}

impl std::str::FromStr for LimiterPlacement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_stage" | "stage" => Ok(Self::PerStage),
            "per_step" | "step" => Ok(Self::PerStep),
            _ => Err(Error::Config(format!("unknown limiter placement '{s}'"))),
        }
    }
}

impl std::fmt::Display for LimiterPlacement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::PerStage => "per_stage",
            Self::PerStep => "per_step",
        })
    }
}

fn rk3_from_residual<S: SemiDiscrete>(
    sys: &mut S,
    w: &S::State,
    r0: &S::State,
    dt: f64,
    placement: LimiterPlacement,
) -> Result<S::State> {
    let per_stage = placement == LimiterPlacement::PerStage;
    let mut w1 = S::State::linear_combination(&[(1.0, w), (dt, r0)]);
    if per_stage {
        sys.limit(&mut w1)?;
    }
    let r1 = sys.residual(&w1)?;
    let mut w2 = S::State::linear_combination(&[(0.75, w), (0.25, &w1), (0.25 * dt, &r1)]);
    if per_stage {
        sys.limit(&mut w2)?;
    }
    let r2 = sys.residual(&w2)?;
    let mut next =
        S::State::linear_combination(&[(1.0 / 3.0, w), (2.0 / 3.0, &w2), (2.0 / 3.0 * dt, &r2)]);
    sys.limit(&mut next)?;
    Ok(next)
}

/// One step of the three-stage, third-order SSP Runge–Kutta method.
pub fn ssp_rk3_step<S: SemiDiscrete>(
    sys: &mut S,
    w: &S::State,
    dt: f64,
    placement: LimiterPlacement,
) -> Result<S::State> {
    let r0 = sys.residual(w)?;
    rk3_from_residual(sys, w, &r0, dt, placement)
}

/// The last four solution levels and their residuals, all at one fixed `dt`.
#[derive(Debug, Clone)]
pub struct MultistepHistory<T> {
    dt: f64,
    entries: VecDeque<(T, T)>,
}

impl<T: LinearState> MultistepHistory<T> {
    pub fn new(dt: f64) -> Self {
        Self { dt, entries: VecDeque::with_capacity(4) }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True once `W^{n-3}` is available.
    pub fn is_full(&self) -> bool {
        self.entries.len() == 4
    }

    /// Append the newest level `(W^n, L(W^n))`, dropping anything older than `W^{n-3}`.
    pub fn push(&mut self, state: T, residual: T) {
        if self.entries.len() == 4 {
            self.entries.pop_front();
        }
        self.entries.push_back((state, residual));
    }
}

/// `W^{n+1} = 16/27 (W^n + 3 dt L(W^n)) + 11/27 (W^{n-3} + 12/11 dt L(W^{n-3}))`,
/// limited afterwards. The newest history entry is `W^n`.
pub fn ssp_ms3_step<S: SemiDiscrete>(
    sys: &mut S,
    history: &MultistepHistory<S::State>,
    dt: f64,
) -> Result<S::State> {
    if dt != history.dt {
        return Err(Error::NonConstantStep { dt, frozen: history.dt });
    }
    if !history.is_full() {
        return Err(Error::InvalidArgument("multistep history needs four levels".into()));
    }
    let (w3, r3) = &history.entries[0];
    let (wn, rn) = &history.entries[3];
    let mut next = S::State::linear_combination(&[
        (16.0 / 27.0, wn),
        (16.0 / 9.0 * dt, rn),
        (11.0 / 27.0, w3),
        (4.0 / 9.0 * dt, r3),
    ]);
    sys.limit(&mut next)?;
    Ok(next)
}

/// Advance `w` by one multistep step, bootstrapping with RK3 until the history
/// holds four levels.
pub fn multistep_advance<S: SemiDiscrete>(
    sys: &mut S,
    history: &mut MultistepHistory<S::State>,
    w: &S::State,
    dt: f64,
    placement: LimiterPlacement,
) -> Result<S::State> {
    if dt != history.dt {
        return Err(Error::NonConstantStep { dt, frozen: history.dt });
    }
    let r = sys.residual(w)?;
    history.push(w.clone(), r);
    if history.is_full() {
        ssp_ms3_step(sys, history, dt)
    } else {
        let (_, r) = history.entries.back().expect("just pushed");
        let r = r.clone();
        rk3_from_residual(sys, w, &r, dt, placement)
    }
}

/// Time-step selection from `lambda * max(|u| + c) <= w_hat_1 / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeController {
    pub cfl_fraction: f64,
    pub ssp_coefficient: f64,
    pub w_hat_1: f64,
    pub t: f64,
    pub t_final: f64,
    pub dt: f64,
    pub step_index: usize,
}

impl TimeController {
    pub fn new(cfl_fraction: f64, w_hat_1: f64, t_final: f64) -> Self {
        Self { cfl_fraction, ssp_coefficient: 1.0, w_hat_1, t: 0.0, t_final, dt: 0.0, step_index: 0 }
    }

    /// Target `lambda * speed` used to pick `dt`.
    pub fn bound(&self) -> f64 {
        self.cfl_fraction * self.hard_bound()
    }

    /// Largest `lambda * speed` for which cell averages stay admissible.
    pub fn hard_bound(&self) -> f64 {
        self.ssp_coefficient * 0.5 * self.w_hat_1
    }

    /// Step for the given global signal speed, clipped to land on `t_final`.
    pub fn compute_dt(&self, max_speed: f64, h: f64) -> Result<f64> {
        if !(max_speed > 0.0) {
            return Err(Error::DegenerateSpeed(max_speed));
        }
        let dt = self.bound() * h / max_speed;
        Ok(if self.t + dt >= self.t_final { self.t_final - self.t } else { dt })
    }

    pub fn lambda(&self, h: f64) -> f64 {
        self.dt / h
    }
}

/// Parameters of a single DG run that do not depend on the problem data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub limiter: LimiterKind,
    pub integrator: Integrator,
    pub placement: LimiterPlacement,
    pub cfl_fraction: f64,
    pub t_final: f64,
}

impl EvolveConfig {
    pub fn new(limiter: LimiterKind, integrator: Integrator, t_final: f64) -> Self {
        Self {
            limiter,
            integrator,
            placement: LimiterPlacement::PerStage,
            cfl_fraction: integrator.default_cfl_fraction(),
            t_final,
        }
    }
}

/// One row of the per-step diagnostic time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    /// `lambda * max(|u| + c)` for the step.
    pub cfl_number: f64,
    /// Smallest theta over every limiter pass in the step.
    pub min_theta: f64,
    /// Largest per-pass counts over the limiter passes of the step.
    pub activated_cells: usize,
    pub theta1_active: usize,
    pub theta2_active: usize,
    pub theta3_active: usize,
    pub fallback_passes: u32,
    pub total_rho: f64,
    pub total_m: f64,
    pub total_energy: f64,
    /// Minimum over cells of `s(w_bar)`; NaN if some average is not positive.
    pub min_average_entropy: f64,
}

#[derive(Debug, Clone)]
pub struct EvolveOutput {
    pub field: DGField,
    pub diagnostics: Vec<StepDiagnostics>,
    /// Reports of the last limiter pass, one per cell.
    pub last_reports: Vec<CellLimiterReport>,
}

impl EvolveOutput {
    pub fn steps(&self) -> usize {
        self.diagnostics.last().map_or(0, |d| d.step)
    }

    pub fn min_average_entropy(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.min_average_entropy).fold(f64::INFINITY, f64::min)
    }
}

/// The DG semi-discretisation with limiting, as seen by the steppers.
pub struct DgSystem<'a> {
    op: DgOperator,
    mesh: &'a Mesh1D,
    region: InvariantRegion,
    kind: LimiterKind,
    test_set: TestSet,
    alpha: f64,
    passes: Vec<LimiterSummary>,
    last_reports: Vec<CellLimiterReport>,
}

impl<'a> DgSystem<'a> {
    pub fn new(degree: usize, mesh: &'a Mesh1D, region: InvariantRegion, kind: LimiterKind) -> Self {
        Self {
            op: DgOperator::new(degree, region.gamma()),
            mesh,
            region,
            kind,
            test_set: TestSet::gauss_lobatto(degree),
            alpha: 0.0,
            passes: Vec::new(),
            last_reports: Vec::new(),
        }
    }

    pub fn test_set(&self) -> &TestSet {
        &self.test_set
    }

    pub fn set_alpha(&mut self, alpha: f64) {
        self.alpha = alpha;
    }

    /// Global `max(|u| + c)` over the test nodes.
    pub fn signal_speed(&self, field: &DGField) -> Result<f64> {
        global_signal_speed(field, self.test_set.table(), self.region.gamma())
    }
}

impl SemiDiscrete for DgSystem<'_> {
    type State = DGField;

    fn residual(&mut self, state: &DGField) -> Result<DGField> {
        self.op.apply(state, self.mesh, self.alpha)
    }

    fn limit(&mut self, state: &mut DGField) -> Result<()> {
        let reports = limit_field(state, &self.region, self.kind, &self.test_set)?;
        self.passes.push(LimiterSummary::from_reports(&reports));
        self.last_reports = reports;
        Ok(())
    }
}

fn min_average_entropy(field: &DGField, gamma: f64) -> f64 {
    let mut s_min = f64::INFINITY;
    for c in 0..field.n_cells() {
        let w = field.average(c);
        let p = pressure_raw(w, gamma);
        if !(w.rho > 0.0 && p > 0.0) {
            return f64::NAN;
        }
        s_min = s_min.min(p.ln() - gamma * w.rho.ln());
    }
    s_min
}

/// Limit the initial projection, then march to `t_final`.
///
/// RK3 runs pick `dt` adaptively every step. Multistep runs freeze `dt` from
/// the initial signal speed, rounded down so an integer number of steps lands
/// on `t_final`, and abort if the CFL bound is later exceeded.
pub fn evolve(
    config: &EvolveConfig,
    mesh: &Mesh1D,
    region: InvariantRegion,
    initial: DGField,
) -> Result<EvolveOutput> {
    let degree = initial.degree();
    let gamma = region.gamma();
    let h = mesh.h();
    let mut sys = DgSystem::new(degree, mesh, region, config.limiter);
    let mut ctl = TimeController::new(config.cfl_fraction, sys.test_set.first_weight(), config.t_final);
    ctl.ssp_coefficient = config.integrator.ssp_coefficient();
    let abort = |step: usize, t: f64| move |e: Error| Error::Aborted { step, t, source: Box::new(e) };

    let mut field = initial;
    sys.limit(&mut field).map_err(abort(0, 0.0))?;
    let mut diagnostics = Vec::new();
    let record = |sys: &mut DgSystem, field: &DGField, ctl: &TimeController, cfl_number: f64| {
        let passes = std::mem::take(&mut sys.passes);
        let totals = field.totals(h);
        StepDiagnostics {
            step: ctl.step_index,
            t: ctl.t,
            dt: ctl.dt,
            cfl_number,
            min_theta: passes.iter().map(|p| p.min_theta).fold(1.0, f64::min),
            activated_cells: passes.iter().map(|p| p.activated_cells).max().unwrap_or(0),
            theta1_active: passes.iter().map(|p| p.theta1_active).max().unwrap_or(0),
            theta2_active: passes.iter().map(|p| p.theta2_active).max().unwrap_or(0),
            theta3_active: passes.iter().map(|p| p.theta3_active).max().unwrap_or(0),
            fallback_passes: passes.iter().map(|p| p.fallback_passes).sum(),
            total_rho: totals[0],
            total_m: totals[1],
            total_energy: totals[2],
            min_average_entropy: min_average_entropy(field, gamma),
        }
    };
    diagnostics.push(record(&mut sys, &field, &ctl, 0.0));

    if config.t_final <= 0.0 {
        return Ok(EvolveOutput { field, diagnostics, last_reports: sys.last_reports });
    }

    let mut history = None;
    let mut n_fixed_steps = 0usize;
    if config.integrator == Integrator::Ms3 {
        let speed = sys.signal_speed(&field).map_err(abort(0, 0.0))?;
        let dt_max = ctl.compute_dt(speed, h).map_err(abort(0, 0.0))?;
        n_fixed_steps = (config.t_final / dt_max).ceil().max(1.0) as usize;
        history = Some(MultistepHistory::new(config.t_final / n_fixed_steps as f64));
    }

    while ctl.t < config.t_final {
        let step = ctl.step_index + 1;
        let speed = sys.signal_speed(&field).map_err(abort(step, ctl.t))?;
        sys.set_alpha(speed);
        ctl.dt = match &history {
            Some(hist) => hist.dt(),
            None => ctl.compute_dt(speed, h).map_err(abort(step, ctl.t))?,
        };
        let cfl_number = ctl.lambda(h) * speed;
        if cfl_number > ctl.hard_bound() * (1.0 + 1e-12) {
            return Err(abort(step, ctl.t)(Error::CflViolation {
                step,
                value: cfl_number,
                bound: ctl.hard_bound(),
            }));
        }
        field = match history.as_mut() {
            Some(hist) => multistep_advance(&mut sys, hist, &field, ctl.dt, config.placement),
            None => ssp_rk3_step(&mut sys, &field, ctl.dt, config.placement),
        }
        .map_err(abort(step, ctl.t))?;
        ctl.step_index = step;
        ctl.t = if history.is_some() {
            if step == n_fixed_steps {
                config.t_final
            } else {
                step as f64 * ctl.dt
            }
        } else if ctl.t + ctl.dt >= config.t_final {
            config.t_final
        } else {
            ctl.t + ctl.dt
        };
        diagnostics.push(record(&mut sys, &field, &ctl, cfl_number));
    }
    Ok(EvolveOutput { field, diagnostics, last_reports: sys.last_reports })
}
