//! Complex-scalar and Smith-chart geometry primitives.
//!
//! Public angles are in degrees, normalized to (-180, 180]. Everything else in
//! the crate works on [`Complex`] values in the reflection-coefficient plane.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used for every S-parameter and reflection coefficient.
pub type Complex = Complex64;

/// Distance from `Γ = ±1` below which impedance/admittance maps are singular.
pub const TOL_SINGULAR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("singular point: Γ = {0} maps to an infinite value")]
    SingularPoint(Complex),
    #[error("invalid polar value: {0}")]
    InvalidPolar(String),
    #[error("invalid circle: {0}")]
    InvalidCircle(String),
}

/// Normalizes an angle in degrees to (-180, 180].
pub fn normalize_deg(angle: f64) -> f64 {
    let mut a = angle % 360.0;
    if a <= -180.0 {
        a += 360.0;
    } else if a > 180.0 {
        a -= 360.0;
    }
    a
}

/// Magnitude and angle (degrees) of a complex value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarForm {
    pub magnitude: f64,
    pub angle_deg: f64,
}

impl PolarForm {
    pub fn new(magnitude: f64, angle_deg: f64) -> Result<Self, GeometryError> {
        if !magnitude.is_finite() || magnitude < 0.0 || !angle_deg.is_finite() {
            return Err(GeometryError::InvalidPolar(format!(
                "magnitude {magnitude}, angle {angle_deg}"
            )));
        }
        Ok(Self {
            magnitude,
            angle_deg,
        })
    }

    pub fn to_complex(self) -> Complex {
        polar_to_complex(self)
    }
}

impl From<Complex> for PolarForm {
    fn from(z: Complex) -> Self {
        Self {
            magnitude: z.norm(),
            angle_deg: normalize_deg(z.arg().to_degrees()),
        }
    }
}

/// Renders as the `MAG<ANGLE` literal accepted by [`FromStr`].
impl fmt::Display for PolarForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{:.*}<{:.*}", p, self.magnitude, p, self.angle_deg),
            None => write!(f, "{}<{}", self.magnitude, self.angle_deg),
        }
    }
}

/// Parses `"MAG<ANGLE"` (angle in degrees), whitespace allowed around `<`.
impl FromStr for PolarForm {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::InvalidPolar(format!("expected MAG<ANGLE, got {s:?}"));
        let (mag, ang) = s.split_once('<').ok_or_else(bad)?;
        let magnitude: f64 = mag.trim().parse().map_err(|_| bad())?;
        let angle_deg: f64 = ang.trim().parse().map_err(|_| bad())?;
        Self::new(magnitude, angle_deg)
    }
}

/// `re = mag·cos(angle)`, `im = mag·sin(angle)`.
pub fn polar_to_complex(p: PolarForm) -> Complex {
    Complex::from_polar(p.magnitude, p.angle_deg.to_radians())
}

/// Shorthand for building a complex value from magnitude and degrees.
pub fn polar_deg(magnitude: f64, angle_deg: f64) -> Complex {
    Complex::from_polar(magnitude, angle_deg.to_radians())
}

/// Parses a `MAG<ANGLE` literal straight to a complex value.
pub fn parse_gamma(s: &str) -> Result<Complex, GeometryError> {
    s.parse::<PolarForm>().map(polar_to_complex)
}

/// Formats a complex value as `MAG<ANGLE`.
pub fn format_gamma(z: Complex) -> String {
    PolarForm::from(z).to_string()
}

/// `z = (1 + Γ) / (1 - Γ)`.
pub fn gamma_to_normalized_impedance(gamma: Complex) -> Result<Complex, GeometryError> {
    let den = Complex::new(1.0, 0.0) - gamma;
    if den.norm() <= TOL_SINGULAR {
        return Err(GeometryError::SingularPoint(gamma));
    }
    Ok((1.0 + gamma) / den)
}

/// `Γ = (z - 1) / (z + 1)`.
pub fn normalized_impedance_to_gamma(z: Complex) -> Result<Complex, GeometryError> {
    let den = z + 1.0;
    if den.norm() <= TOL_SINGULAR {
        return Err(GeometryError::SingularPoint(z));
    }
    Ok((z - 1.0) / den)
}

/// `y = (1 - Γ) / (1 + Γ)`.
pub fn normalized_admittance(gamma: Complex) -> Result<Complex, GeometryError> {
    let den = 1.0 + gamma;
    if den.norm() <= TOL_SINGULAR {
        return Err(GeometryError::SingularPoint(gamma));
    }
    Ok((Complex::new(1.0, 0.0) - gamma) / den)
}

/// A circle in the reflection-coefficient plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmithCircle {
    pub center: Complex,
    pub radius: f64,
}

impl SmithCircle {
    pub fn new(center: Complex, radius: f64) -> Result<Self, GeometryError> {
        if !(radius.is_finite() && radius >= 0.0)
            || !center.re.is_finite()
            || !center.im.is_finite()
        {
            return Err(GeometryError::InvalidCircle(format!(
                "center {center}, radius {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    /// Boundary point at parameter angle `theta` (radians).
    pub fn point_at(&self, theta: f64) -> Complex {
        self.center + Complex::from_polar(self.radius, theta)
    }

    /// `n` boundary points, uniformly spaced in angle starting at 0.
    pub fn sample(&self, n: usize) -> Vec<Complex> {
        (0..n)
            .map(|k| self.point_at(std::f64::consts::TAU * k as f64 / n as f64))
            .collect()
    }

    pub fn contains(&self, p: Complex) -> bool {
        (p - self.center).norm() < self.radius
    }

    /// Signed distance from `p` to the boundary (negative inside).
    pub fn signed_distance(&self, p: Complex) -> f64 {
        (p - self.center).norm() - self.radius
    }

    /// Smallest distance between this circle's boundary and the closed unit
    /// disc. Positive when the boundary never touches the Smith chart, whether
    /// the circle lies beside the chart or encloses it.
    pub fn clearance_from_unit_disc(&self) -> f64 {
        (self.center.norm() - self.radius).abs() - 1.0
    }
}
