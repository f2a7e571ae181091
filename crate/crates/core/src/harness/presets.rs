//! Benchmark problems: the smooth density wave, the Lax and Shu–Osher shock
//! tubes, and user-supplied Riemann data.

use std::f64::consts::PI;

use super::config::Problem;
use crate::dg::BoundaryKind;
use crate::error::Result;
use crate::euler::{ConservedState, PrimitiveState};
use crate::riemann::{exact_state, solve_star, RiemannProblem, StarState};

pub const LAX_LEFT: ConservedState = ConservedState::new(0.445, 0.311, 8.928);
pub const LAX_RIGHT: ConservedState = ConservedState::new(0.5, 0.0, 1.4275);

/// Cell count of the Shu–Osher self-reference run.
pub const SHU_OSHER_REFERENCE_CELLS: usize = 2560;

/// Where error norms get their reference from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferencePolicy {
    Exact,
    FineGrid,
}

/// A problem instance bound to a particular `gamma`.
#[derive(Debug, Clone)]
pub struct Preset {
    pub problem: Problem,
    pub gamma: f64,
    pub domain: (f64, f64),
    pub boundary: BoundaryKind,
    pub t_final: f64,
    riemann: Option<(RiemannProblem, StarState)>,
}

impl Preset {
    pub fn new(problem: Problem, gamma: f64) -> Result<Self> {
        let (domain, boundary, t_final, riemann) = match problem {
            Problem::SmoothAdvection => ((0.0, 1.0), BoundaryKind::Periodic, 1.0, None),
            Problem::Lax => {
                let rp = RiemannProblem::from_conserved(LAX_LEFT, LAX_RIGHT, gamma, 0.0)?;
                ((-2.0, 2.0), BoundaryKind::Outflow, 0.5, Some((rp, solve_star(&rp)?)))
            }
            Problem::ShuOsher => ((-5.0, 5.0), BoundaryKind::Outflow, 1.8, None),
            Problem::Riemann { left, right, x0, domain } => {
                let rp = RiemannProblem::new(left, right, gamma, x0)?;
                // long enough to develop the fan, short enough to stay inside the domain
                let (lo, hi) = domain;
                let speeds = crate::riemann::wave_speeds(&rp, &solve_star(&rp)?);
                let reach = speeds.iter().map(|s| s.abs()).fold(1e-12, f64::max);
                let t = 0.8 * (x0 - lo).min(hi - x0) / reach;
                (domain, BoundaryKind::Outflow, t, Some((rp, solve_star(&rp)?)))
            }
        };
        Ok(Self { problem, gamma, domain, boundary, t_final, riemann })
    }

    pub fn initial_primitive(&self, x: f64) -> PrimitiveState {
        match self.problem {
            Problem::SmoothAdvection => PrimitiveState::new(1.0 + 0.5 * (2.0 * PI * x).sin(), 1.0, 1.0),
            Problem::ShuOsher => {
                if x < -4.0 {
                    PrimitiveState::new(3.857143, 2.629369, 10.3333)
                } else {
                    PrimitiveState::new(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
                }
            }
            Problem::Lax | Problem::Riemann { .. } => {
                let (rp, _) = self.riemann.as_ref().expect("riemann preset");
                if x < rp.x0 {
                    rp.left
                } else {
                    rp.right
                }
            }
        }
    }

    pub fn initial(&self, x: f64) -> ConservedState {
        match self.problem {
            // keep the tabulated conserved values bit-exact
            Problem::Lax => {
                if x < 0.0 {
                    LAX_LEFT
                } else {
                    LAX_RIGHT
                }
            }
            _ => self.initial_primitive(x).to_conserved(self.gamma),
        }
    }

    /// Exact solution, where one is known.
    pub fn exact(&self, x: f64, t: f64) -> Option<PrimitiveState> {
        match self.problem {
            Problem::SmoothAdvection => {
                Some(PrimitiveState::new(1.0 + 0.5 * (2.0 * PI * (x - t)).sin(), 1.0, 1.0))
            }
            Problem::ShuOsher => None,
            Problem::Lax | Problem::Riemann { .. } => {
                let (rp, star) = self.riemann.as_ref().expect("riemann preset");
                Some(exact_state(rp, star, x, t))
            }
        }
    }

    pub fn riemann(&self) -> Option<&(RiemannProblem, StarState)> {
        self.riemann.as_ref()
    }

    pub fn reference_policy(&self) -> ReferencePolicy {
        match self.problem {
            Problem::ShuOsher => ReferencePolicy::FineGrid,
            _ => ReferencePolicy::Exact,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_values() {
        let p = Preset::new(Problem::SmoothAdvection, 1.4).unwrap();
        assert_eq!(p.exact(0.25, 0.25).unwrap().rho, 1.0);
        assert_eq!(p.boundary, BoundaryKind::Periodic);

        let p = Preset::new(Problem::Lax, 1.4).unwrap();
        let left = p.initial_primitive(-1.0);
        assert_eq!(left.rho, 0.445);
        assert!((left.u - 0.698_876).abs() < 1e-6);
        assert!((left.p - 3.527_730).abs() < 1e-6);
        assert_eq!(p.initial(-1.0), LAX_LEFT);
        assert_eq!(p.initial(1.0), LAX_RIGHT);
        assert_eq!((p.domain, p.t_final), ((-2.0, 2.0), 0.5));

        let p = Preset::new(Problem::ShuOsher, 1.4).unwrap();
        assert_eq!(p.initial_primitive(0.0).rho, 1.0);
        assert_eq!(p.initial_primitive(-4.5).u, 2.629369);
        assert_eq!(p.reference_policy(), ReferencePolicy::FineGrid);
        assert!(p.exact(0.0, 1.0).is_none());
    }

    #[test]
    fn custom_riemann_time_keeps_waves_inside() {
        let p = Preset::new(
            Problem::Riemann {
                left: PrimitiveState::new(1.0, 0.0, 1.0),
                right: PrimitiveState::new(0.125, 0.0, 0.1),
                x0: 0.0,
                domain: (-1.0, 1.0),
            },
            1.4,
        )
        .unwrap();
        assert!(p.t_final > 0.0);
        let far = p.exact(0.999, p.t_final).unwrap();
        assert_eq!(far, PrimitiveState::new(0.125, 0.0, 0.1));
    }
}
