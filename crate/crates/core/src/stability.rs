//! Two-port stability: Rollett K, the μ single-parameter test, and the
//! stability circles in the load and source reflection planes.

use std::fmt;

use thiserror::Error;

use crate::complex::{Complex, SmithCircle};
use crate::touchstone::TwoPortS;

/// `|S12·S21|` below this is treated as a unilateral device.
pub const UNILATERAL_TOL: f64 = 1e-15;
/// Circle denominators `| |Sii|² - |Δ|² |` below this have no finite circle.
pub const CIRCLE_DENOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error(
        "μ-test denominator vanishes (|S22 - Δ·S11*| and |S12·S21| both below {UNILATERAL_TOL:e})"
    )]
    DegenerateDenominator,
    #[error("{0} stability boundary is a straight line (|Sii|² = |Δ|²); no finite circle")]
    DegenerateCircle(Port),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    /// Γ_L plane; boundary where |Γ_in| = 1.
    Load,
    /// Γ_S plane; boundary where |Γ_out| = 1.
    Source,
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Port::Load => "load",
            Port::Source => "source",
        })
    }
}

/// Which side of a stability circle holds the stable terminations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Inside,
    Outside,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Inside => "inside",
            Region::Outside => "outside",
        })
    }
}

/// `Δ = S11·S22 - S12·S21`.
pub fn determinant(s: &TwoPortS) -> Complex {
    s.s11 * s.s22 - s.s12 * s.s21
}

/// Rollett stability factor.
///
/// For a unilateral device (`|S12·S21| < 1e-15`) this returns an infinite
/// sentinel whose sign follows the numerator, which then equals
/// `(1 - |S11|²)(1 - |S22|²)`.
pub fn rollett_k(s: &TwoPortS) -> f64 {
    let delta = determinant(s);
    let num = 1.0 - s.s11.norm_sqr() - s.s22.norm_sqr() + delta.norm_sqr();
    let loop_gain = (s.s12 * s.s21).norm();
    if loop_gain < UNILATERAL_TOL {
        return if num >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
    }
    num / (2.0 * loop_gain)
}

fn mu_generic(sii: Complex, sjj: Complex, s: &TwoPortS) -> Result<f64, StabilityError> {
    let delta = determinant(s);
    let a = (sjj - delta * sii.conj()).norm();
    let b = (s.s12 * s.s21).norm();
    if a < UNILATERAL_TOL && b < UNILATERAL_TOL {
        return Err(StabilityError::DegenerateDenominator);
    }
    Ok((1.0 - sii.norm_sqr()) / (a + b))
}

/// Edwards–Sinsky μ = (1 - |S11|²) / (|S22 - Δ·S11*| + |S12·S21|).
///
/// Equals the distance from the Γ_L-plane origin to the nearest unstable load;
/// μ > 1 exactly when the device is unconditionally stable.
pub fn mu_factor(s: &TwoPortS) -> Result<f64, StabilityError> {
    mu_generic(s.s11, s.s22, s)
}

/// The dual μ′ = (1 - |S22|²) / (|S11 - Δ·S22*| + |S12·S21|), measured in
/// the Γ_S plane.
pub fn mu_prime_factor(s: &TwoPortS) -> Result<f64, StabilityError> {
    mu_generic(s.s22, s.s11, s)
}

/// Stability circle in the load (|Γ_in| = 1) or source (|Γ_out| = 1) plane.
pub fn stability_circle(s: &TwoPortS, port: Port) -> Result<SmithCircle, StabilityError> {
    let delta = determinant(s);
    let (sii, sjj) = match port {
        Port::Load => (s.s22, s.s11),
        Port::Source => (s.s11, s.s22),
    };
    let den = sii.norm_sqr() - delta.norm_sqr();
    if den.abs() <= CIRCLE_DENOM_TOL {
        return Err(StabilityError::DegenerateCircle(port));
    }
    let center = (sii - delta * sjj.conj()).conj() / den;
    let radius = ((s.s12 * s.s21) / den).norm();
    SmithCircle::new(center, radius).map_err(|_| StabilityError::DegenerateCircle(port))
}

/// Stable side of a stability circle.
///
/// The origin of the load plane is stable iff |S11| < 1 (|S22| < 1 for the
/// source plane); the stable region is whichever side of the circle agrees
/// with the origin's classification. A zero-radius circle is `Outside`.
pub fn stable_region(s: &TwoPortS, port: Port) -> Result<Region, StabilityError> {
    let circle = stability_circle(s, port)?;
    Ok(region_for(s, port, &circle))
}

fn region_for(s: &TwoPortS, port: Port, circle: &SmithCircle) -> Region {
    if circle.radius == 0.0 {
        return Region::Outside;
    }
    let origin_stable = match port {
        Port::Load => s.s11.norm() < 1.0,
        Port::Source => s.s22.norm() < 1.0,
    };
    let origin_inside = circle.center.norm() < circle.radius;
    if origin_inside == origin_stable {
        Region::Inside
    } else {
        Region::Outside
    }
}

/// Stability metrics and circles for one device.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub delta: Complex,
    pub k: f64,
    /// Load-plane μ; ±∞ when the μ denominator vanishes.
    pub mu: f64,
    /// Source-plane μ′.
    pub mu_prime: f64,
    pub unconditional: bool,
    /// `None` when the boundary degenerates to a line.
    pub load_circle: Option<SmithCircle>,
    pub source_circle: Option<SmithCircle>,
    pub load_stable_region: Option<Region>,
    pub source_stable_region: Option<Region>,
}

impl StabilityReport {
    /// True when neither stability circle's boundary touches the closed unit
    /// disc. Missing (line) boundaries count as touching.
    pub fn circles_clear_of_chart(&self) -> bool {
        [self.load_circle, self.source_circle]
            .iter()
            .all(|c| c.is_some_and(|c| c.clearance_from_unit_disc() > 0.0))
    }
}

fn mu_or_sentinel(r: Result<f64, StabilityError>, numerator: f64) -> f64 {
    r.unwrap_or(if numerator > 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    })
}

/// Aggregates Δ, K, μ, μ′, the stability circles and their stable sides.
///
/// `unconditional` is the K–Δ test: `K > 1 && |Δ| < 1`.
pub fn stability_report(s: &TwoPortS) -> StabilityReport {
    let delta = determinant(s);
    let k = rollett_k(s);
    let mu = mu_or_sentinel(mu_factor(s), 1.0 - s.s11.norm_sqr());
    let mu_prime = mu_or_sentinel(mu_prime_factor(s), 1.0 - s.s22.norm_sqr());
    let load_circle = stability_circle(s, Port::Load).ok();
    let source_circle = stability_circle(s, Port::Source).ok();
    StabilityReport {
        delta,
        k,
        mu,
        mu_prime,
        unconditional: k > 1.0 && delta.norm() < 1.0,
        load_stable_region: load_circle.map(|c| region_for(s, Port::Load, &c)),
        source_stable_region: source_circle.map(|c| region_for(s, Port::Source, &c)),
        load_circle,
        source_circle,
    }
}

/// Whether a termination on `port` keeps the opposite port's reflection
/// magnitude below one (and is itself passive).
pub fn is_stable_termination(s: &TwoPortS, port: Port, gamma: Complex) -> bool {
    if gamma.norm() >= 1.0 {
        return false;
    }
    let (sii, sjj) = match port {
        Port::Load => (s.s11, s.s22),
        Port::Source => (s.s22, s.s11),
    };
    let den = 1.0 - sjj * gamma;
    if den.norm() < 1e-12 {
        return false;
    }
    (sii + s.s12 * s.s21 * gamma / den).norm() < 1.0
}
