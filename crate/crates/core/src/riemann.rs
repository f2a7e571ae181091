//! Exact solution of the 1D Euler Riemann problem for an ideal gas.
//!
//! The star pressure solves `f_L(p) + f_R(p) + (u_R - u_L) = 0`, where each
//! `f_K` is the Rankine–Hugoniot branch for `p > p_K` and the isentropic
//! branch otherwise. Newton iterations are kept inside a bisection bracket.

use crate::dg::{gauss_legendre_rule, Mesh1D};
use crate::error::{Error, Result};
use crate::euler::{ConservedState, PrimitiveState};

const MAX_ITER: usize = 200;
const RESIDUAL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannProblem {
    pub left: PrimitiveState,
    pub right: PrimitiveState,
    pub gamma: f64,
    /// Initial discontinuity location.
    pub x0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarState {
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    Shock,
    Rarefaction,
}

impl StarState {
    pub fn left_wave(&self, problem: &RiemannProblem) -> Wave {
        if self.p_star > problem.left.p {
            Wave::Shock
        } else {
            Wave::Rarefaction
        }
    }

    pub fn right_wave(&self, problem: &RiemannProblem) -> Wave {
        if self.p_star > problem.right.p {
            Wave::Shock
        } else {
            Wave::Rarefaction
        }
    }
}

impl RiemannProblem {
    pub fn new(left: PrimitiveState, right: PrimitiveState, gamma: f64, x0: f64) -> Result<Self> {
        if !(left.rho > 0.0 && right.rho > 0.0) {
            return Err(Error::InvalidArgument("Riemann states need positive density".into()));
        }
        if !(left.p >= 0.0 && right.p >= 0.0) {
            return Err(Error::InvalidArgument("Riemann states need non-negative pressure".into()));
        }
        if !(gamma > 1.0) {
            return Err(Error::InvalidArgument(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self { left, right, gamma, x0 })
    }

    /// Build from conserved left/right states.
    pub fn from_conserved(left: ConservedState, right: ConservedState, gamma: f64, x0: f64) -> Result<Self> {
        Self::new(left.to_primitive(gamma)?, right.to_primitive(gamma)?, gamma, x0)
    }
}

/// `f_K(p)` and `f_K'(p)` for one side.
fn side_function(p: f64, state: PrimitiveState, gamma: f64) -> (f64, f64) {
    let PrimitiveState { rho, p: pk, .. } = state;
    if p > pk {
        let a = 2.0 / ((gamma + 1.0) * rho);
        let b = (gamma - 1.0) / (gamma + 1.0) * pk;
        let root = (a / (p + b)).sqrt();
        ((p - pk) * root, root * (1.0 - 0.5 * (p - pk) / (p + b)))
    } else {
        let c = state.sound_speed(gamma);
        let z = (gamma - 1.0) / (2.0 * gamma);
        let ratio = p / pk;
        (
            2.0 * c / (gamma - 1.0) * (ratio.powf(z) - 1.0),
            ratio.powf(-(gamma + 1.0) / (2.0 * gamma)) / (rho * c),
        )
    }
}

/// `f_L(p) + f_R(p) + u_R - u_L`, increasing in `p`.
pub fn pressure_function(problem: &RiemannProblem, p: f64) -> f64 {
    let (fl, _) = side_function(p, problem.left, problem.gamma);
    let (fr, _) = side_function(p, problem.right, problem.gamma);
    fl + fr + problem.right.u - problem.left.u
}

fn two_rarefaction_guess(problem: &RiemannProblem) -> f64 {
    let g = problem.gamma;
    let (l, r) = (problem.left, problem.right);
    let (cl, cr) = (l.sound_speed(g), r.sound_speed(g));
    let z = (g - 1.0) / (2.0 * g);
    let num = cl + cr - 0.5 * (g - 1.0) * (r.u - l.u);
    let den = cl / l.p.powf(z) + cr / r.p.powf(z);
    (num / den).powf(1.0 / z)
}

pub fn solve_star(problem: &RiemannProblem) -> Result<StarState> {
    let g = problem.gamma;
    let (l, r) = (problem.left, problem.right);
    let (cl, cr) = (l.sound_speed(g), r.sound_speed(g));
    if 2.0 / (g - 1.0) * (cl + cr) <= r.u - l.u {
        return Err(Error::Vacuum);
    }

    let f = |p: f64| {
        let (fl, dl) = side_function(p, l, g);
        let (fr, dr) = side_function(p, r, g);
        (fl + fr + r.u - l.u, dl + dr)
    };

    // f(0+) < 0 without vacuum; grow the upper end until f > 0
    let mut lo = 0.0;
    let mut hi = l.p.max(r.p).max(1e-300);
    let mut iter = 0;
    while f(hi).0 < 0.0 {
        lo = hi;
        hi *= 2.0;
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::NoConvergence(MAX_ITER));
        }
    }

    let guess = two_rarefaction_guess(problem);
    let mut p = if guess.is_finite() && guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    let scale = 1.0 + cl + cr + l.u.abs() + r.u.abs();
    let mut converged = false;
    for _ in 0..MAX_ITER {
        let (val, d) = f(p);
        if val.abs() <= RESIDUAL_TOL * scale {
            converged = true;
            break;
        }
        if val < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let newton = p - val / d;
        p = if newton > lo && newton < hi && newton.is_finite() { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_ITER));
    }

    let (fl, _) = side_function(p, l, g);
    let (fr, _) = side_function(p, r, g);
    let u_star = 0.5 * (l.u + r.u) + 0.5 * (fr - fl);
    let gm = (g - 1.0) / (g + 1.0);
    let star_density = |k: PrimitiveState| {
        if p > k.p {
            let ratio = p / k.p;
            k.rho * (ratio + gm) / (gm * ratio + 1.0)
        } else {
            k.rho * (p / k.p).powf(1.0 / g)
        }
    };
    Ok(StarState {
        p_star: p,
        u_star,
        rho_star_left: star_density(l),
        rho_star_right: star_density(r),
    })
}

/// Sample the self-similar solution at `xi = (x - x0) / t`.
pub fn sample(problem: &RiemannProblem, star: &StarState, xi: f64) -> PrimitiveState {
    let g = problem.gamma;
    let (l, r) = (problem.left, problem.right);
    let gp = (g + 1.0) / (2.0 * g);
    let gm = (g - 1.0) / (2.0 * g);
    if xi <= star.u_star {
        let cl = l.sound_speed(g);
        if star.p_star > l.p {
            let speed = l.u - cl * (gp * star.p_star / l.p + gm).sqrt();
            if xi <= speed {
                l
            } else {
                PrimitiveState::new(star.rho_star_left, star.u_star, star.p_star)
            }
        } else {
            let head = l.u - cl;
            let c_star = cl * (star.p_star / l.p).powf(gm);
            let tail = star.u_star - c_star;
            if xi <= head {
                l
            } else if xi >= tail {
                PrimitiveState::new(star.rho_star_left, star.u_star, star.p_star)
            } else {
                let c = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * (l.u - xi));
                let u = 2.0 / (g + 1.0) * (cl + 0.5 * (g - 1.0) * l.u + xi);
                let rho = l.rho * (c / cl).powf(2.0 / (g - 1.0));
                let p = l.p * (c / cl).powf(2.0 * g / (g - 1.0));
                PrimitiveState::new(rho, u, p)
            }
        }
    } else {
        let cr = r.sound_speed(g);
        if star.p_star > r.p {
            let speed = r.u + cr * (gp * star.p_star / r.p + gm).sqrt();
            if xi >= speed {
                r
            } else {
                PrimitiveState::new(star.rho_star_right, star.u_star, star.p_star)
            }
        } else {
            let head = r.u + cr;
            let c_star = cr * (star.p_star / r.p).powf(gm);
            let tail = star.u_star + c_star;
            if xi >= head {
                r
            } else if xi <= tail {
                PrimitiveState::new(star.rho_star_right, star.u_star, star.p_star)
            } else {
                let c = 2.0 / (g + 1.0) * (cr - 0.5 * (g - 1.0) * (r.u - xi));
                let u = 2.0 / (g + 1.0) * (-cr + 0.5 * (g - 1.0) * r.u + xi);
                let rho = r.rho * (c / cr).powf(2.0 / (g - 1.0));
                let p = r.p * (c / cr).powf(2.0 * g / (g - 1.0));
                PrimitiveState::new(rho, u, p)
            }
        }
    }
}

/// Exact solution at `(x, t)`; `t = 0` returns the initial data.
pub fn exact_state(problem: &RiemannProblem, star: &StarState, x: f64, t: f64) -> PrimitiveState {
    if t <= 0.0 {
        return if x < problem.x0 { problem.left } else { problem.right };
    }
    sample(problem, star, (x - problem.x0) / t)
}

/// Signed speeds of the wave fronts, left to right: left head, left tail
/// (equal for a shock), contact, right tail, right head.
pub fn wave_speeds(problem: &RiemannProblem, star: &StarState) -> [f64; 5] {
    let g = problem.gamma;
    let (l, r) = (problem.left, problem.right);
    let gp = (g + 1.0) / (2.0 * g);
    let gm = (g - 1.0) / (2.0 * g);
    let (cl, cr) = (l.sound_speed(g), r.sound_speed(g));
    let (lh, lt) = if star.p_star > l.p {
        let s = l.u - cl * (gp * star.p_star / l.p + gm).sqrt();
        (s, s)
    } else {
        (l.u - cl, star.u_star - cl * (star.p_star / l.p).powf(gm))
    };
    let (rt, rh) = if star.p_star > r.p {
        let s = r.u + cr * (gp * star.p_star / r.p + gm).sqrt();
        (s, s)
    } else {
        (star.u_star + cr * (star.p_star / r.p).powf(gm), r.u + cr)
    };
    [lh, lt, star.u_star, rt, rh]
}

/// Cell averages of the exact conserved solution, by `samples_per_cell`-point
/// Gauss–Legendre quadrature in each cell.
pub fn reference_on_mesh(
    problem: &RiemannProblem,
    star: &StarState,
    mesh: &Mesh1D,
    t: f64,
    samples_per_cell: usize,
) -> Result<Vec<ConservedState>> {
    let rule = gauss_legendre_rule(samples_per_cell)?;
    Ok((0..mesh.n_cells())
        .map(|c| {
            let mut acc = [0.0; 3];
            for (&xi, &w) in rule.nodes.iter().zip(&rule.weights) {
                let s = exact_state(problem, star, mesh.x_at(c, xi), t).to_conserved(problem.gamma);
                for (a, v) in acc.iter_mut().zip(s.to_array()) {
                    *a += w * v;
                }
            }
            ConservedState::from_array(acc)
        })
        .collect())
}
