use super::config::RunConfig;
use super::presets::Preset;
use crate::dg::{gauss_legendre_rule, l2_project, DGField, Mesh1D};
use crate::error::Result;
use crate::euler::{entropy_floor_from_initial, InvariantRegion};
use crate::time::{evolve, EvolveOutput};

/// Samples per cell used to estimate the entropy floor of the initial data.
pub const ENTROPY_SAMPLES_PER_CELL: usize = 32;

/// Amount by which the working entropy floor sits below the sampled one.
///
/// Constant states at exactly the sampled minimum would otherwise have
/// `q(w_bar) = 0` up to round-off and fail the strict-interior test on
/// their cell averages.
pub const ENTROPY_FLOOR_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: RunConfig,
    pub preset: Preset,
    pub mesh: Mesh1D,
    pub region: InvariantRegion,
    /// Sampled minimum of the initial entropy, before the slack.
    pub s0: f64,
    pub t_final: f64,
    pub evolution: EvolveOutput,
}

impl RunOutput {
    pub fn field(&self) -> &DGField {
        &self.evolution.field
    }
}

/// Sampled `inf_x s(w0(x))` over Gauss–Legendre nodes plus both endpoints of
/// every cell.
pub fn sampled_entropy_floor(preset: &Preset, mesh: &Mesh1D) -> Result<f64> {
    let rule = gauss_legendre_rule(ENTROPY_SAMPLES_PER_CELL)?;
    let mut xs = Vec::with_capacity(mesh.n_cells() * (rule.len() + 2));
    for c in 0..mesh.n_cells() {
        xs.push(mesh.x_at(c, -0.5));
        xs.extend(rule.nodes.iter().map(|&xi| mesh.x_at(c, xi)));
        // the right endpoint belongs to the data's right-hand state
        xs.push(mesh.x_at(c, 0.5));
    }
    let gamma = preset.gamma;
    entropy_floor_from_initial(
        xs.into_iter().map(|x| {
            let w = preset.initial_primitive(x);
            (w.rho, w.p)
        }),
        gamma,
    )
}

pub fn initial_field(preset: &Preset, mesh: &Mesh1D, degree: usize) -> DGField {
    l2_project(|x| preset.initial(x), mesh, degree)
}

/// Project, limit and evolve one configuration.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    config.validate()?;
    let preset = Preset::new(config.problem, config.gamma)?;
    let mesh = Mesh1D::new(preset.domain.0, preset.domain.1, config.n_cells, preset.boundary)?;
    let s0 = sampled_entropy_floor(&preset, &mesh)?;
    let region = InvariantRegion::new(config.gamma, s0 - ENTROPY_FLOOR_SLACK, config.epsilon)?;
    let t_final = config.t_final.unwrap_or(preset.t_final);
    let initial = initial_field(&preset, &mesh, config.degree);
    let evolution = evolve(&config.evolve_config(t_final), &mesh, region, initial)?;
    Ok(RunOutput { config: config.clone(), preset, mesh, region, s0, t_final, evolution })
}
