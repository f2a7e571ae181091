//! Ideal-gas thermodynamics for the 1D Euler system.
//!
//! States are stored in conserved form `(rho, m, E)`. Nothing here enforces
//! admissibility at construction: the limiter has to be able to look at
//! states with negative density or pressure and pull them back.
//!
//! The invariant region is
//!
//! ```text
//! Sigma^eps = { rho >= eps, p >= eps, q <= 0 },   q = (s0 - s) * rho,
//! ```
//!
//! with `s = ln(p / rho^gamma)`. `p` is concave and `q` is convex in the
//! conserved variables, so the region is convex.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Default admissibility floor for density and pressure.
pub const DEFAULT_EPSILON: f64 = 1e-13;

/// Default adiabatic exponent (air).
pub const DEFAULT_GAMMA: f64 = 1.4;

/// Conserved state `w = (rho, m, E)` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState {
    pub rho: f64,
    pub m: f64,
    pub energy: f64,
}

/// Primitive state `(rho, u, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl ConservedState {
    pub const fn new(rho: f64, m: f64, energy: f64) -> Self {
        Self { rho, m, energy }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.rho, self.m, self.energy]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_primitive(self, gamma: f64) -> Result<PrimitiveState> {
        let p = pressure(self, gamma)?;
        Ok(PrimitiveState {
            rho: self.rho,
            u: self.m / self.rho,
            p,
        })
    }
}

impl PrimitiveState {
    pub const fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }

    pub fn to_conserved(self, gamma: f64) -> ConservedState {
        ConservedState {
            rho: self.rho,
            m: self.rho * self.u,
            energy: 0.5 * self.rho * self.u * self.u + self.p / (gamma - 1.0),
        }
    }

    pub fn sound_speed(self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }
}

impl Add for ConservedState {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.rho + o.rho, self.m + o.m, self.energy + o.energy)
    }
}

impl Sub for ConservedState {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.rho - o.rho, self.m - o.m, self.energy - o.energy)
    }
}

impl Mul<ConservedState> for f64 {
    type Output = ConservedState;
    fn mul(self, w: ConservedState) -> ConservedState {
        ConservedState::new(self * w.rho, self * w.m, self * w.energy)
    }
}

/// `(gamma, s0, eps)`: everything needed to decide membership in `Sigma^eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantRegion {
    gamma: f64,
    s0: f64,
    eps: f64,
}

impl InvariantRegion {
    pub fn new(gamma: f64, s0: f64, eps: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::InvalidArgument(format!("gamma must exceed 1, got {gamma}")));
        }
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        if !s0.is_finite() {
            return Err(Error::InvalidArgument(format!("entropy floor must be finite, got {s0}")));
        }
        Ok(Self { gamma, s0, eps })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// `p = (gamma - 1)(E - m^2 / (2 rho))`.
pub fn pressure(w: ConservedState, gamma: f64) -> Result<f64> {
    if w.rho == 0.0 {
        return Err(Error::ZeroDensity);
    }
    Ok(pressure_raw(w, gamma))
}

#[inline]
pub(crate) fn pressure_raw(w: ConservedState, gamma: f64) -> f64 {
    (gamma - 1.0) * (w.energy - 0.5 * w.m * w.m / w.rho)
}

#[inline]
fn entropy_raw(rho: f64, p: f64, gamma: f64) -> f64 {
    p.ln() - gamma * rho.ln()
}

/// `s = ln(p / rho^gamma)`.
pub fn specific_entropy(w: ConservedState, gamma: f64) -> Result<f64> {
    let p = pressure(w, gamma)?;
    if !(w.rho > 0.0 && p > 0.0) {
        return Err(Error::Domain { quantity: "entropy", rho: w.rho, p });
    }
    Ok(entropy_raw(w.rho, p, gamma))
}

/// `q = (s0 - s) rho`; non-positive exactly when `s >= s0`.
pub fn q_functional(w: ConservedState, region: &InvariantRegion) -> Result<f64> {
    let p = pressure(w, region.gamma)?;
    q_from_pressure(w.rho, p, region)
}

/// `q` when the pressure is already known.
pub(crate) fn q_from_pressure(rho: f64, p: f64, region: &InvariantRegion) -> Result<f64> {
    if !(rho > 0.0 && p > 0.0) {
        return Err(Error::Domain { quantity: "q", rho, p });
    }
    Ok((region.s0 - entropy_raw(rho, p, region.gamma)) * rho)
}

/// Membership in `Sigma^eps`. `q` is only evaluated once `rho` and `p` pass.
pub fn in_region(w: ConservedState, region: &InvariantRegion) -> bool {
    if !(w.rho >= region.eps) {
        return false;
    }
    let p = pressure_raw(w, region.gamma);
    if !(p >= region.eps) {
        return false;
    }
    matches!(q_from_pressure(w.rho, p, region), Ok(q) if q <= 0.0)
}

/// Membership in the interior `Sigma^eps_0` (all inequalities strict).
pub fn in_region_interior(w: ConservedState, region: &InvariantRegion) -> bool {
    if !(w.rho > region.eps) {
        return false;
    }
    let p = pressure_raw(w, region.gamma);
    if !(p > region.eps) {
        return false;
    }
    matches!(q_from_pressure(w.rho, p, region), Ok(q) if q < 0.0)
}

/// Euler flux `(m, rho u^2 + p, (E + p) u)`.
pub fn physical_flux(w: ConservedState, gamma: f64) -> Result<[f64; 3]> {
    if w.rho == 0.0 {
        return Err(Error::ZeroDensity);
    }
    Ok(flux_raw(w, gamma))
}

#[inline]
pub(crate) fn flux_raw(w: ConservedState, gamma: f64) -> [f64; 3] {
    let u = w.m / w.rho;
    let p = pressure_raw(w, gamma);
    [w.m, w.m * u + p, (w.energy + p) * u]
}

/// `|u| + c`, the largest characteristic speed magnitude of a state.
pub fn max_signal_speed(w: ConservedState, gamma: f64) -> Result<f64> {
    let p = pressure(w, gamma)?;
    if !(w.rho > 0.0 && p >= 0.0) {
        return Err(Error::Domain { quantity: "signal speed", rho: w.rho, p });
    }
    Ok((w.m / w.rho).abs() + (gamma * p / w.rho).sqrt())
}

/// Minimum of `ln(p0 / rho0^gamma)` over sampled `(rho0, p0)` pairs.
pub fn entropy_floor_from_initial<I>(samples: I, gamma: f64) -> Result<f64>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut floor: Option<f64> = None;
    for (rho, p) in samples {
        if !(rho > 0.0 && p > 0.0) {
            return Err(Error::Domain { quantity: "initial entropy", rho, p });
        }
        let s = entropy_raw(rho, p, gamma);
        floor = Some(floor.map_or(s, |f: f64| f.min(s)));
    }
    floor.ok_or_else(|| Error::InvalidArgument("empty sample set for entropy floor".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const G: f64 = 1.4;

    fn prim(rho: f64, u: f64, p: f64) -> ConservedState {
        PrimitiveState::new(rho, u, p).to_conserved(G)
    }

    #[test]
    fn pressure_examples() {
        assert_relative_eq!(pressure(ConservedState::new(1.0, 0.0, 2.5), G).unwrap(), 1.0);
        let lax = ConservedState::new(0.445, 0.311, 8.928);
        // 0.4 * (8.928 - 0.096721 / 0.89) = 3.52772989...
        assert_relative_eq!(pressure(lax, G).unwrap(), 3.527_729_89, epsilon = 1e-8);
        assert_eq!(pressure(ConservedState::new(1.0, 1.0, 0.5), G).unwrap(), 0.0);
        assert!(matches!(pressure(ConservedState::new(0.0, 1.0, 1.0), G), Err(Error::ZeroDensity)));
    }

    #[test]
    fn entropy_examples() {
        assert!(specific_entropy(ConservedState::new(1.0, 0.0, 2.5), G).unwrap().abs() < 1e-15);
        let s = specific_entropy(prim(2.0, 0.0, 1.0), G).unwrap();
        assert_relative_eq!(s, -1.4 * 2f64.ln(), epsilon = 1e-14);
        assert_relative_eq!(s, -0.970_406, epsilon = 1e-6);
        let s = specific_entropy(prim(0.5, 0.0, 0.5f64.powf(1.4)), G).unwrap();
        assert!(s.abs() < 1e-14);
        assert!(specific_entropy(prim(1.0, 0.0, -1.0), G).is_err());
        assert!(specific_entropy(ConservedState::new(-1.0, 0.0, 1.0), G).is_err());
    }

    #[test]
    fn q_examples() {
        let r = InvariantRegion::new(G, -1.0, DEFAULT_EPSILON).unwrap();
        assert_relative_eq!(q_functional(prim(1.0, 0.0, 1.0), &r).unwrap(), -1.0);
        let w = prim(0.7, 0.3, 2.0);
        let at_floor = InvariantRegion::new(G, specific_entropy(w, G).unwrap(), 1e-13).unwrap();
        assert!(q_functional(w, &at_floor).unwrap().abs() < 1e-15);
        assert!(q_functional(ConservedState::new(1.0, 0.0, -1.0), &r).is_err());
    }

    #[test]
    fn region_membership() {
        let r = InvariantRegion::new(G, -1.0, 1e-13).unwrap();
        let w = prim(1.0, 0.0, 1.0);
        assert!(in_region(w, &r) && in_region_interior(w, &r));
        assert!(!in_region(ConservedState::new(-0.1, 0.0, 1.0), &r));
        // s = ln(1/2^1.4) ~ -0.97; a floor of s + 0.25 gives q = 0.5 with rho = 2
        let w = prim(2.0, 0.0, 1.0);
        let s = specific_entropy(w, G).unwrap();
        let tight = InvariantRegion::new(G, s + 0.25, 1e-13).unwrap();
        assert_relative_eq!(q_functional(w, &tight).unwrap(), 0.5, epsilon = 1e-14);
        assert!(!in_region(w, &tight));
        // on the boundary: in region, not interior
        let w = ConservedState::new(1.0, 0.0, 2.5);
        let edge = InvariantRegion::new(G, specific_entropy(w, G).unwrap(), 1e-13).unwrap();
        assert!(in_region(w, &edge));
        assert!(!in_region_interior(w, &edge));
        // negative pressure short-circuits before q
        assert!(!in_region(ConservedState::new(1.0, 2.0, 1.0), &r));
    }

    #[test]
    fn region_rejects_bad_parameters() {
        assert!(InvariantRegion::new(1.0, 0.0, 1e-13).is_err());
        assert!(InvariantRegion::new(1.4, 0.0, 0.0).is_err());
        assert!(InvariantRegion::new(1.4, f64::NAN, 1e-13).is_err());
    }

    #[test]
    fn flux_examples() {
        let f = physical_flux(ConservedState::new(1.0, 0.0, 2.5), G).unwrap();
        assert_eq!((f[0], f[2]), (0.0, 0.0));
        assert_relative_eq!(f[1], 1.0, epsilon = 1e-15);
        let f = physical_flux(ConservedState::new(1.0, 1.0, 2.5), G).unwrap();
        assert_relative_eq!(f[0], 1.0);
        assert_relative_eq!(f[1], 1.8, epsilon = 1e-15);
        assert_relative_eq!(f[2], 3.3, epsilon = 1e-15);
        let f = physical_flux(ConservedState::new(0.3, 0.0, 7.0), G).unwrap();
        assert_eq!((f[0], f[2]), (0.0, 0.0));
        assert!(physical_flux(ConservedState::new(0.0, 0.0, 1.0), G).is_err());
    }

    #[test]
    fn signal_speed_examples() {
        assert_relative_eq!(max_signal_speed(prim(1.0, 0.0, 1.0), G).unwrap(), 1.183_216, epsilon = 1e-6);
        assert_relative_eq!(max_signal_speed(prim(1.0, 1.0, 0.0), G).unwrap(), 1.0);
        let lax = ConservedState::new(0.445, 0.311, 8.928);
        // u = 0.698876, c = sqrt(1.4 * 3.5277299 / 0.445) = 3.331438
        assert_relative_eq!(max_signal_speed(lax, G).unwrap(), 4.030_314, epsilon = 1e-6);
        assert!(max_signal_speed(ConservedState::new(1.0, 0.0, -1.0), G).is_err());
        let w = prim(0.8, -0.4, 1.3);
        let scaled = 2.0 * w;
        assert_relative_eq!(
            max_signal_speed(w, G).unwrap(),
            max_signal_speed(scaled, G).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn entropy_floor_examples() {
        assert_eq!(entropy_floor_from_initial([(1.0, 1.0); 5], G).unwrap(), 0.0);
        assert!(entropy_floor_from_initial(std::iter::empty(), G).is_err());
        assert!(entropy_floor_from_initial([(1.0, 0.0)], G).is_err());

        // dense-grid oracle for rho0 = 1 + sin(2 pi x)/2, p0 = 1
        let n = 200_001;
        let s0 = entropy_floor_from_initial(
            (0..n).map(|i| {
                let x = i as f64 / (n - 1) as f64;
                (1.0 + 0.5 * (2.0 * std::f64::consts::PI * x).sin(), 1.0)
            }),
            G,
        )
        .unwrap();
        assert_relative_eq!(s0, -1.4 * 1.5f64.ln(), epsilon = 1e-9);
        assert_relative_eq!(s0, -0.567_651, epsilon = 1e-6);

        // Lax data: min over the two constant states
        let left = ConservedState::new(0.445, 0.311, 8.928);
        let right = ConservedState::new(0.5, 0.0, 1.4275);
        let pl = pressure(left, G).unwrap();
        let pr = pressure(right, G).unwrap();
        assert_relative_eq!(pr, 0.571, epsilon = 1e-14);
        let s0 = entropy_floor_from_initial([(0.445, pl), (0.5, pr)], G).unwrap();
        let sr = 0.571f64.ln() - 1.4 * 0.5f64.ln();
        assert_relative_eq!(s0, sr, epsilon = 1e-14);
        assert!(pl.ln() - 1.4 * 0.445f64.ln() > sr);
    }

    #[test]
    fn round_trip_primitive() {
        let p = PrimitiveState::new(0.125, -0.75, 0.1);
        let back = p.to_conserved(G).to_primitive(G).unwrap();
        assert_relative_eq!(back.rho, p.rho, max_relative = 1e-14);
        assert_relative_eq!(back.u, p.u, max_relative = 1e-14);
        assert_relative_eq!(back.p, p.p, max_relative = 1e-14);
    }
}
