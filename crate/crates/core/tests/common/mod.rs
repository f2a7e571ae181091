//! Generators, oracles and property checks shared by the property tests and
//! the acceptance run.
#![allow(dead_code)]

use irp_dg::dg::DGField;
use irp_dg::euler::{
    pressure, q_functional, specific_entropy, ConservedState, InvariantRegion, PrimitiveState,
};
use irp_dg::limiter::{limit_cell, test_set_extrema, LimiterKind, TestSet, Q_TOLERANCE};
use irp_dg::riemann::{sample, solve_star, wave_speeds, RiemannProblem, StarState, Wave};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const GAMMA: f64 = 1.4;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; good enough for test data
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// A single-cell field with an admissible average and random higher modes.
pub struct LimiterCase {
    pub field: DGField,
    pub region: InvariantRegion,
    pub kind: LimiterKind,
}

/// `adversarial` cases use large higher modes, so most test nodes leave the
/// region.
pub fn limiter_case(rng: &mut ChaCha8Rng, adversarial: bool) -> LimiterCase {
    let degree = rng.gen_range(1..=3);
    let rho = log_uniform(rng, 0.05, 5.0);
    let u = rng.gen_range(-3.0..3.0);
    let p = log_uniform(rng, 0.01, 10.0);
    let avg = PrimitiveState::new(rho, u, p).to_conserved(GAMMA);
    let s_bar = specific_entropy(avg, GAMMA).unwrap();
    let s0 = s_bar - log_uniform(rng, 1e-8, 3.0);
    let eps = if rng.gen_bool(0.7) { 1e-13 } else { rng.gen_range(0.0..0.5) * rho.min(p) + 1e-13 };
    let region = InvariantRegion::new(GAMMA, s0, eps).unwrap();
    let kind = if rng.gen_bool(0.8) { LimiterKind::Irp } else { LimiterKind::Positivity };

    let amp = if adversarial { log_uniform(rng, 0.5, 5.0) } else { log_uniform(rng, 1e-3, 3.0) };
    let c = (GAMMA * p / rho).sqrt();
    let scales = [rho, avg.m.abs().max(rho * c), avg.energy];
    let mut field = DGField::zeros(degree, 1);
    for (var, value) in avg.to_array().into_iter().enumerate() {
        field.set_mode(0, var, 0, value);
        for j in 1..=degree {
            field.set_mode(0, var, j, amp * scales[var] * normal(rng) / j as f64);
        }
    }
    LimiterCase { field, region, kind }
}

fn node_check(field: &DGField, region: &InvariantRegion, kind: LimiterKind, ts: &TestSet) -> Result<(), String> {
    for &xi in ts.nodes() {
        let w = field.evaluate(0, xi);
        let p = pressure(w, GAMMA).map_err(|e| e.to_string())?;
        if !(w.rho >= region.eps() && p >= region.eps()) {
            return Err(format!("node {xi}: rho={} p={p} below eps={}", w.rho, region.eps()));
        }
        if kind == LimiterKind::Irp {
            let q = q_functional(w, region).map_err(|e| e.to_string())?;
            if !(q <= Q_TOLERANCE) {
                return Err(format!("node {xi}: q={q}"));
            }
        }
    }
    Ok(())
}

/// Average preservation, containment, idempotence, theta range, and
/// monotonicity: pre-shrinking the deviation from the mean by `a` never
/// yields a smaller overall scaling than limiting directly.
pub fn check_limiter(case: &LimiterCase, shrink: f64) -> Result<(), String> {
    let LimiterCase { field, region, kind } = case;
    let ts = TestSet::gauss_lobatto(field.degree());
    let mut limited = field.clone();
    let report = limit_cell(&mut limited, 0, region, *kind, &ts).map_err(|e| e.to_string())?;

    let before = field.cell_average(0).unwrap().to_array();
    let after = limited.cell_average(0).unwrap().to_array();
    for v in 0..3 {
        if (before[v] - after[v]).abs() > 1e-15 * before[v].abs() {
            return Err(format!("average changed in var {v}: {} -> {}", before[v], after[v]));
        }
    }
    if !(report.theta > 0.0 && report.theta <= 1.0) {
        return Err(format!("theta = {}", report.theta));
    }
    node_check(&limited, region, *kind, &ts)?;

    let mut again = limited.clone();
    let second = limit_cell(&mut again, 0, region, *kind, &ts).map_err(|e| e.to_string())?;
    if second.theta != 1.0 || again.coeffs() != limited.coeffs() {
        return Err(format!("not idempotent: second theta = {}", second.theta));
    }

    // Shrinking toward the mean never needs a smaller effective scaling.
    let mut shrunk = field.clone();
    irp_dg::limiter::apply_limiter(&mut shrunk, 0, shrink);
    let r2 = limit_cell(&mut shrunk, 0, region, *kind, &ts).map_err(|e| e.to_string())?;
    let exact_q = test_set_extrema(field, 0, region, &ts).q_max.is_finite();
    if report.fallback_passes == 0 && r2.fallback_passes == 0 && exact_q {
        if shrink < report.theta * (1.0 - 1e-9) && r2.theta != 1.0 {
            return Err(format!("shrinking below theta={} still limited: {}", report.theta, r2.theta));
        }
        if shrink > report.theta && shrink * r2.theta < report.theta * (1.0 - 1e-9) {
            return Err(format!(
                "theta not monotone: a={shrink} theta_a={} theta={}",
                r2.theta, report.theta
            ));
        }
    }
    Ok(())
}

pub const DENSE_SAMPLES: usize = 33;

/// Random polynomial that is admissible on a dense sample of its cell, with
/// `s0` and `eps` placed on the sampled boundary so the test is tight.
pub fn admissible_polynomial(rng: &mut ChaCha8Rng) -> (DGField, InvariantRegion) {
    loop {
        let degree = rng.gen_range(1..=3);
        let rho = log_uniform(rng, 0.05, 5.0);
        let u = rng.gen_range(-3.0..3.0);
        let p = log_uniform(rng, 0.01, 10.0);
        let avg = PrimitiveState::new(rho, u, p).to_conserved(GAMMA);
        let amp = log_uniform(rng, 1e-4, 0.5);
        let c = (GAMMA * p / rho).sqrt();
        let scales = [rho, avg.m.abs().max(rho * c), avg.energy];
        let mut field = DGField::zeros(degree, 1);
        for (var, value) in avg.to_array().into_iter().enumerate() {
            field.set_mode(0, var, 0, value);
            for j in 1..=degree {
                field.set_mode(0, var, j, amp * scales[var] * normal(rng) / j as f64);
            }
        }
        let samples: Vec<ConservedState> = (0..DENSE_SAMPLES)
            .map(|i| field.evaluate(0, -0.5 + i as f64 / (DENSE_SAMPLES - 1) as f64))
            .collect();
        let mut rho_min = f64::INFINITY;
        let mut p_min = f64::INFINITY;
        let mut s_min = f64::INFINITY;
        let mut ok = true;
        for w in &samples {
            match (pressure(*w, GAMMA), w.rho > 0.0) {
                (Ok(p), true) if p > 0.0 => {
                    rho_min = rho_min.min(w.rho);
                    p_min = p_min.min(p);
                    s_min = s_min.min(p.ln() - GAMMA * w.rho.ln());
                }
                _ => ok = false,
            }
        }
        if !ok {
            continue;
        }
        let eps = rho_min.min(p_min);
        return (field, InvariantRegion::new(GAMMA, s_min, eps).unwrap());
    }
}

/// The average of a polynomial that is admissible on the dense sample lies
/// strictly inside the region.
pub fn check_interior_average(field: &DGField, region: &InvariantRegion) -> Result<(), String> {
    let avg = field.cell_average(0).unwrap();
    let p = pressure(avg, GAMMA).map_err(|e| e.to_string())?;
    let q = q_functional(avg, region).map_err(|e| e.to_string())?;
    if avg.rho > region.eps() && p > region.eps() && q < 0.0 {
        Ok(())
    } else {
        Err(format!("average not interior: rho={} p={p} q={q} eps={}", avg.rho, region.eps()))
    }
}

/// Random non-vacuum Riemann data, including strong pressure ratios.
pub fn riemann_case(rng: &mut ChaCha8Rng) -> RiemannProblem {
    loop {
        let l = PrimitiveState::new(log_uniform(rng, 0.01, 10.0), rng.gen_range(-5.0..5.0), log_uniform(rng, 1e-3, 1e3));
        let r = PrimitiveState::new(log_uniform(rng, 0.01, 10.0), rng.gen_range(-5.0..5.0), log_uniform(rng, 1e-3, 1e3));
        let (cl, cr) = (l.sound_speed(GAMMA), r.sound_speed(GAMMA));
        // keep a margin from the vacuum boundary
        if 2.0 / (GAMMA - 1.0) * (cl + cr) > 1.05 * (r.u - l.u) {
            return RiemannProblem::new(l, r, GAMMA, 0.0).unwrap();
        }
    }
}

/// Star pressure and velocity by plain bisection on the wave curves.
pub fn oracle_star(left: PrimitiveState, right: PrimitiveState, g: f64) -> (f64, f64) {
    let branch = |p: f64, k: PrimitiveState| -> f64 {
        let c = (g * k.p / k.rho).sqrt();
        if p <= k.p {
            2.0 * c / (g - 1.0) * ((p / k.p).powf((g - 1.0) / (2.0 * g)) - 1.0)
        } else {
            let big_a = 2.0 / ((g + 1.0) * k.rho);
            let big_b = (g - 1.0) / (g + 1.0) * k.p;
            (p - k.p) * (big_a / (p + big_b)).sqrt()
        }
    };
    let f = |p: f64| branch(p, left) + branch(p, right) + right.u - left.u;
    let mut lo = 1e-300_f64;
    let mut hi = 1e12_f64;
    assert!(f(lo) < 0.0 && f(hi) > 0.0, "oracle bracket");
    for _ in 0..2000 {
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let u = 0.5 * (left.u + right.u) + 0.5 * (branch(p, right) - branch(p, left));
    (p, u)
}

fn flux(w: PrimitiveState, g: f64) -> [f64; 3] {
    let e = w.p / (g - 1.0) + 0.5 * w.rho * w.u * w.u;
    [w.rho * w.u, w.rho * w.u * w.u + w.p, (e + w.p) * w.u]
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(1e-300)
}

/// Solver vs oracle, jump conditions, entropy conditions and self-similarity.
pub fn check_riemann(problem: &RiemannProblem, tol: f64) -> Result<(), String> {
    let g = problem.gamma;
    let star = solve_star(problem).map_err(|e| e.to_string())?;
    let (p_ref, u_ref) = oracle_star(problem.left, problem.right, g);
    let u_scale = problem.left.sound_speed(g) + problem.right.sound_speed(g) + problem.left.u.abs() + problem.right.u.abs();
    if rel(star.p_star, p_ref, p_ref) > tol || rel(star.u_star, u_ref, u_scale) > tol {
        return Err(format!("star ({}, {}) vs oracle ({p_ref}, {u_ref})", star.p_star, star.u_star));
    }
    check_jumps(problem, &star)?;
    check_self_similar(problem, &star)
}

fn check_jumps(problem: &RiemannProblem, star: &StarState) -> Result<(), String> {
    let g = problem.gamma;
    let speeds = wave_speeds(problem, star);
    let s = |w: PrimitiveState| w.p.ln() - g * w.rho.ln();
    let sides = [
        (star.left_wave(problem), problem.left, PrimitiveState::new(star.rho_star_left, star.u_star, star.p_star), speeds[0], speeds[1]),
        (star.right_wave(problem), problem.right, PrimitiveState::new(star.rho_star_right, star.u_star, star.p_star), speeds[4], speeds[3]),
    ];
    for (wave, outer, inner, head, tail) in sides {
        match wave {
            Wave::Shock => {
                let (wo, wi) = (outer.to_conserved(g).to_array(), inner.to_conserved(g).to_array());
                let (fo, fi) = (flux(outer, g), flux(inner, g));
                for v in 0..3 {
                    let lhs = head * (wi[v] - wo[v]);
                    let rhs = fi[v] - fo[v];
                    let scale = fi[v].abs() + fo[v].abs() + (head * wi[v]).abs() + (head * wo[v]).abs();
                    if rel(lhs, rhs, scale) > 1e-10 {
                        return Err(format!("Rankine-Hugoniot residual in var {v}: {lhs} vs {rhs}"));
                    }
                }
                if !(s(inner) > s(outer) - 1e-12) {
                    return Err(format!("entropy decreases across shock: {} -> {}", s(outer), s(inner)));
                }
            }
            Wave::Rarefaction => {
                for i in 0..=16 {
                    let xi = head + (tail - head) * i as f64 / 16.0;
                    let w = sample(problem, star, xi);
                    if rel(s(w), s(outer), 1.0 + s(outer).abs()) > 1e-12 {
                        return Err(format!("entropy varies in fan: {} vs {}", s(w), s(outer)));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_self_similar(problem: &RiemannProblem, star: &StarState) -> Result<(), String> {
    use irp_dg::riemann::exact_state;
    let speeds = wave_speeds(problem, star);
    let span = speeds[4].abs().max(speeds[0].abs()) * 1.2 + 1.0;
    for i in 0..=40 {
        let x = -span + 2.0 * span * i as f64 / 40.0;
        let a = exact_state(problem, star, x, 1.0);
        let b = exact_state(problem, star, 2.5 * x, 2.5);
        let d = (a.rho - b.rho).abs() + (a.u - b.u).abs() + (a.p - b.p).abs();
        if d > 1e-12 * (1.0 + a.rho + a.u.abs() + a.p) {
            return Err(format!("not self-similar at x={x}"));
        }
    }
    Ok(())
}
