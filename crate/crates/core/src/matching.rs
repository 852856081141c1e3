//! Matching-network synthesis and microstrip realization.
//!
//! Networks are lossless and use uniform-impedance lines: the series line and
//! the shunt stub share the system impedance. Lengths are electrical degrees
//! at the design frequency.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::complex::{Complex, TOL_SINGULAR};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Synthesized networks must reproduce their target to this accuracy.
pub const MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchingError {
    #[error("target |Γ| = {0} is not reachable with a passive network")]
    UnreachableTarget(f64),
    #[error("resistances must be positive and finite (got {r_in} and {r_out})")]
    InvalidResistance { r_in: f64, r_out: f64 },
    #[error("reference impedance {0} must be positive")]
    InvalidImpedance(f64),
    #[error("outside microstrip model range: {0}")]
    OutOfModelRange(String),
    #[error("synthesized network misses target by {0:e}")]
    VerificationFailed(f64),
}

/// Transmission (ABCD) matrix of a two-port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abcd {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Abcd {
    pub fn identity() -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    /// Lossless line of characteristic impedance `z0` and electrical length `deg`.
    pub fn line(z0: f64, deg: f64) -> Self {
        let (s, c) = deg.to_radians().sin_cos();
        Self {
            a: Complex::new(c, 0.0),
            b: Complex::new(0.0, z0 * s),
            c: Complex::new(0.0, s / z0),
            d: Complex::new(c, 0.0),
        }
    }

    pub fn shunt(y: Complex) -> Self {
        Self {
            c: y,
            ..Self::identity()
        }
    }

    /// `self` followed by `next`.
    pub fn cascade(&self, next: &Abcd) -> Abcd {
        Abcd {
            a: self.a * next.a + self.b * next.c,
            b: self.a * next.b + self.b * next.d,
            c: self.c * next.a + self.d * next.c,
            d: self.c * next.b + self.d * next.d,
        }
    }

    pub fn input_impedance(&self, load: Complex) -> Complex {
        (self.a * load + self.b) / (self.c * load + self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StubKind {
    Open,
    Short,
}

impl StubKind {
    /// Input admittance of a stub with characteristic impedance `z0`.
    pub fn admittance(self, z0: f64, deg: f64) -> Complex {
        let t = deg.to_radians().tan();
        match self {
            StubKind::Open => Complex::new(0.0, t / z0),
            StubKind::Short => Complex::new(0.0, -1.0 / (z0 * t)),
        }
    }

    /// Shortest stub length in [0, 180) degrees giving normalized susceptance `b`.
    fn length_for(self, b: f64) -> f64 {
        let rad = match self {
            StubKind::Open => b.atan2(1.0),
            StubKind::Short => (-1.0f64).atan2(b),
        };
        wrap_half_turn(rad.to_degrees())
    }
}

impl fmt::Display for StubKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StubKind::Open => "open",
            StubKind::Short => "short",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Line toward the device, shunt stub across the termination.
    SeriesLineShuntStub,
    QuarterWave,
    Identity,
}

/// One element of a network, ordered from the device toward the termination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NetworkElement {
    SeriesLine { z0: f64, deg: f64 },
    ShuntStub { kind: StubKind, z0: f64, deg: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingNetwork {
    pub topology: Topology,
    /// Series line length, degrees in [0, 360).
    pub series_line_deg: f64,
    /// Stub length, degrees in [0, 180); zero when there is no stub.
    pub stub_deg: f64,
    pub stub_kind: Option<StubKind>,
    /// Characteristic impedance of the lines, ohms.
    pub line_z0: f64,
    /// Termination the network is designed to sit on, ohms.
    pub termination: f64,
    /// Reflection looking into the network from the device side.
    pub achieved_gamma: Complex,
}

impl MatchingNetwork {
    pub fn elements(&self) -> Vec<NetworkElement> {
        match self.topology {
            Topology::Identity => Vec::new(),
            Topology::QuarterWave => vec![NetworkElement::SeriesLine {
                z0: self.line_z0,
                deg: self.series_line_deg,
            }],
            Topology::SeriesLineShuntStub => vec![
                NetworkElement::SeriesLine {
                    z0: self.line_z0,
                    deg: self.series_line_deg,
                },
                NetworkElement::ShuntStub {
                    kind: self.stub_kind.unwrap_or(StubKind::Open),
                    z0: self.line_z0,
                    deg: self.stub_deg,
                },
            ],
        }
    }

    pub fn abcd(&self) -> Abcd {
        self.elements().iter().fold(Abcd::identity(), |acc, el| {
            let next = match *el {
                NetworkElement::SeriesLine { z0, deg } => Abcd::line(z0, deg),
                NetworkElement::ShuntStub { kind, z0, deg } => {
                    Abcd::shunt(kind.admittance(z0, deg))
                }
            };
            acc.cascade(&next)
        })
    }

    /// Reflection seen from the device side with the network terminated in its
    /// design termination, computed by ABCD cascade.
    pub fn input_gamma(&self) -> Complex {
        let zin = self
            .abcd()
            .input_impedance(Complex::new(self.termination, 0.0));
        (zin - self.termination) / (zin + self.termination)
    }
}

fn wrap_half_turn(deg: f64) -> f64 {
    let d = deg.rem_euclid(180.0);
    if d >= 180.0 - 1e-12 {
        0.0
    } else {
        d
    }
}

/// Both series-line/shunt-stub solutions for `target`, unverified.
pub fn stub_solutions(
    target: Complex,
    z0: f64,
    kind: StubKind,
) -> Result<[MatchingNetwork; 2], MatchingError> {
    if !(z0.is_finite() && z0 > 0.0) {
        return Err(MatchingError::InvalidImpedance(z0));
    }
    let rho = target.norm();
    if !(rho < 1.0 - TOL_SINGULAR) {
        return Err(MatchingError::UnreachableTarget(rho));
    }
    // A shunt susceptance b across z0 gives Γ1 = -jb / (2 + jb), |Γ1| = |b|/√(4 + b²).
    let b_mag = 2.0 * rho / (1.0 - rho * rho).sqrt();
    Ok([b_mag, -b_mag].map(|b| {
        let gamma1 = Complex::new(0.0, -b) / Complex::new(2.0, b);
        // The line rotates Γ1 clockwise by twice its electrical length.
        let line = wrap_half_turn((gamma1.arg() - target.arg()).to_degrees() / 2.0);
        MatchingNetwork {
            topology: Topology::SeriesLineShuntStub,
            series_line_deg: line,
            stub_deg: kind.length_for(b),
            stub_kind: Some(kind),
            line_z0: z0,
            termination: z0,
            achieved_gamma: target,
        }
    }))
}

/// Series line plus shunt stub presenting `target` when terminated in `z0`.
///
/// Of the two solutions the one with the shorter line wins, then the shorter
/// stub. The returned `achieved_gamma` comes from an ABCD cascade of the
/// chosen network.
pub fn single_stub_match(
    target: Complex,
    z0: f64,
    kind: StubKind,
) -> Result<MatchingNetwork, MatchingError> {
    if target.norm() < 1e-15 {
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(MatchingError::InvalidImpedance(z0));
        }
        return Ok(MatchingNetwork {
            topology: Topology::Identity,
            series_line_deg: 0.0,
            stub_deg: 0.0,
            stub_kind: None,
            line_z0: z0,
            termination: z0,
            achieved_gamma: Complex::new(0.0, 0.0),
        });
    }
    let [p, q] = stub_solutions(target, z0, kind)?;
    let shorter = |a: &MatchingNetwork, b: &MatchingNetwork| {
        if (a.series_line_deg - b.series_line_deg).abs() > 1e-9 {
            a.series_line_deg < b.series_line_deg
        } else {
            a.stub_deg <= b.stub_deg
        }
    };
    let mut net = if shorter(&p, &q) { p } else { q };
    net.achieved_gamma = net.input_gamma();
    let miss = (net.achieved_gamma - target).norm();
    if !(miss < MATCH_TOL) {
        return Err(MatchingError::VerificationFailed(miss));
    }
    Ok(net)
}

/// λ/4 line matching resistance `r_out` (the termination) to `r_in`.
pub fn quarter_wave_transformer(r_in: f64, r_out: f64) -> Result<MatchingNetwork, MatchingError> {
    let ok = |r: f64| r.is_finite() && r > 0.0;
    if !(ok(r_in) && ok(r_out)) {
        return Err(MatchingError::InvalidResistance { r_in, r_out });
    }
    let mut net = MatchingNetwork {
        topology: Topology::QuarterWave,
        series_line_deg: 90.0,
        stub_deg: 0.0,
        stub_kind: None,
        line_z0: (r_in * r_out).sqrt(),
        termination: r_out,
        achieved_gamma: Complex::new(0.0, 0.0),
    };
    net.achieved_gamma = net.input_gamma();
    Ok(net)
}

/// Quasi-static effective permittivity of a microstrip with ratio `w/h`.
pub fn effective_permittivity(w_over_h: f64, eps_r: f64) -> f64 {
    (eps_r + 1.0) / 2.0 + (eps_r - 1.0) / 2.0 / (1.0 + 12.0 / w_over_h).sqrt()
}

/// Characteristic impedance and effective permittivity of a microstrip.
pub fn microstrip_analysis(
    width_mm: f64,
    eps_r: f64,
    h_mm: f64,
) -> Result<(f64, f64), MatchingError> {
    if !(width_mm > 0.0 && h_mm > 0.0 && eps_r >= 1.0) {
        return Err(MatchingError::OutOfModelRange(format!(
            "w = {width_mm} mm, h = {h_mm} mm, εr = {eps_r}"
        )));
    }
    let u = width_mm / h_mm;
    let eps_eff = effective_permittivity(u, eps_r);
    let z0 = if u <= 1.0 {
        60.0 / eps_eff.sqrt() * (8.0 / u + u / 4.0).ln()
    } else {
        120.0 * PI / (eps_eff.sqrt() * (u + 1.393 + 0.667 * (u + 1.444).ln()))
    };
    Ok((z0, eps_eff))
}

/// Strip width (mm) and effective permittivity for a target impedance.
pub fn microstrip_synthesis(z0: f64, eps_r: f64, h_mm: f64) -> Result<(f64, f64), MatchingError> {
    if !(10.0..=200.0).contains(&z0) {
        return Err(MatchingError::OutOfModelRange(format!(
            "Z0 = {z0} Ω (model covers 10..200 Ω)"
        )));
    }
    if !(eps_r.is_finite() && eps_r >= 1.0) {
        return Err(MatchingError::OutOfModelRange(format!("εr = {eps_r}")));
    }
    if !(h_mm.is_finite() && h_mm > 0.0) {
        return Err(MatchingError::OutOfModelRange(format!("h = {h_mm} mm")));
    }
    let a = z0 / 60.0 * ((eps_r + 1.0) / 2.0).sqrt()
        + (eps_r - 1.0) / (eps_r + 1.0) * (0.23 + 0.11 / eps_r);
    let narrow = 8.0 * a.exp() / ((2.0 * a).exp() - 2.0);
    let u = if narrow > 0.0 && narrow <= 2.0 {
        narrow
    } else {
        let b = 377.0 * PI / (2.0 * z0 * eps_r.sqrt());
        2.0 / PI
            * (b - 1.0 - (2.0 * b - 1.0).ln()
                + (eps_r - 1.0) / (2.0 * eps_r) * ((b - 1.0).ln() + 0.39 - 0.61 / eps_r))
    };
    if !(u.is_finite() && u > 0.0) {
        return Err(MatchingError::OutOfModelRange(format!(
            "no width for Z0 = {z0} Ω, εr = {eps_r}"
        )));
    }
    Ok((u * h_mm, effective_permittivity(u, eps_r)))
}

/// Physical length (mm) of `length_deg` electrical degrees at `f_hz`.
///
/// Expects `f_hz > 0` and `eps_eff >= 1`.
pub fn electrical_to_physical(length_deg: f64, f_hz: f64, eps_eff: f64) -> f64 {
    length_deg / 360.0 * SPEED_OF_LIGHT / (f_hz * eps_eff.sqrt()) * 1e3
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Substrate {
    pub eps_r: f64,
    pub height_mm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicrostripLine {
    pub width_mm: f64,
    pub length_mm: f64,
    pub eps_r: f64,
    pub substrate_height_mm: f64,
    pub eps_eff: f64,
    pub z0: f64,
}

impl MicrostripLine {
    pub fn design(
        z0: f64,
        substrate: Substrate,
        length_deg: f64,
        f_hz: f64,
    ) -> Result<Self, MatchingError> {
        if !(f_hz.is_finite() && f_hz > 0.0) {
            return Err(MatchingError::OutOfModelRange(format!(
                "frequency {f_hz} Hz"
            )));
        }
        let (width_mm, eps_eff) = microstrip_synthesis(z0, substrate.eps_r, substrate.height_mm)?;
        Ok(Self {
            width_mm,
            length_mm: electrical_to_physical(length_deg, f_hz, eps_eff),
            eps_r: substrate.eps_r,
            substrate_height_mm: substrate.height_mm,
            eps_eff,
            z0,
        })
    }
}

/// λ/4 high-impedance bias feed. Its radial-stub termination is carried by
/// name only; there is no field model behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasFeed {
    pub line_z0: f64,
    pub electrical_deg: f64,
    /// Physical length on the substrate, or in air without one.
    pub length_mm: f64,
    pub width_mm: Option<f64>,
    pub termination: &'static str,
}

pub fn bias_feed(
    line_z0: f64,
    f_hz: f64,
    substrate: Option<Substrate>,
) -> Result<BiasFeed, MatchingError> {
    let (width_mm, eps_eff) = match substrate {
        Some(sub) => {
            let (w, e) = microstrip_synthesis(line_z0, sub.eps_r, sub.height_mm)?;
            (Some(w), e)
        }
        None => (None, 1.0),
    };
    Ok(BiasFeed {
        line_z0,
        electrical_deg: 90.0,
        length_mm: electrical_to_physical(90.0, f_hz, eps_eff),
        width_mm,
        termination: "radial_stub",
    })
}
