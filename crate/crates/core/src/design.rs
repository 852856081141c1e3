//! Single-frequency amplifier design: choose the source termination, derive
//! the load, confirm stability and synthesize both matching networks.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::complex::Complex;
use crate::gain::{
    available_gain, from_db, gamma_out, max_available_gain, transducer_gain, GainError,
};
use crate::matching::{
    bias_feed, single_stub_match, BiasFeed, MatchingError, MatchingNetwork, StubKind, Substrate,
};
use crate::noise::{db_to_factor, noise_circle, noise_figure, NoiseError, NoiseParameters};
use crate::stability::{
    determinant, is_stable_termination, stability_report, Port, StabilityReport,
};
use crate::touchstone::{sample_at, SweepTable, TouchstoneError, TwoPortS};

const GOLDEN_TOL_RAD: f64 = 1e-6;
const BOUNDARY_SCAN: usize = 720;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("sampling: {0}")]
    Sample(#[from] TouchstoneError),
    #[error("gain: {0}")]
    Gain(#[from] GainError),
    #[error("noise: {0}")]
    Noise(#[from] NoiseError),
    #[error("matching: {0}")]
    Matching(#[from] MatchingError),
    #[error("stability: device is not unconditionally stable (K = {k:.4}, |Δ| = {delta_mag:.4}, μ = {mu:.4})")]
    NotUnconditionallyStable { k: f64, delta_mag: f64, mu: f64 },
    #[error("source selection: noise parameters required for objective {0}")]
    NoiseParametersRequired(Objective),
    #[error("source selection: infeasible specification: {0}")]
    InfeasibleSpec(String),
    #[error("load selection: no stable load termination inside the Smith chart")]
    NoStableLoad,
    #[error("specification: design z0 {spec} Ω differs from the S-parameter reference {data} Ω")]
    ReferenceMismatch { spec: f64, data: f64 },
    #[error(
        "gain check: transducer gain {achieved_db:.3} dB is below the required {required_db:.3} dB"
    )]
    GainBelowMinimum { achieved_db: f64, required_db: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    MaxGain,
    MinNoise,
    GainAtNfCap,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::MaxGain => "max_gain",
            Objective::MinNoise => "min_noise",
            Objective::GainAtNfCap => "gain_at_nf_cap",
        })
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "max_gain" => Ok(Objective::MaxGain),
            "min_noise" => Ok(Objective::MinNoise),
            "gain_at_nf_cap" => Ok(Objective::GainAtNfCap),
            other => Err(format!(
                "unknown objective {other:?} (expected max_gain, min_noise or gain_at_nf_cap)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpec {
    pub frequency_hz: f64,
    /// Noise-factor cap (linear).
    pub nf_max: Option<f64>,
    /// Minimum transducer gain (linear).
    pub gain_min: Option<f64>,
    pub objective: Objective,
    pub z0: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("config line {line}: {msg}")]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

/// Parses `"3.0GHz"`, `"2.4 MHz"`, `"3e9"` (hertz when unitless).
pub fn parse_frequency(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let split = t
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
        .unwrap_or(t.len());
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid frequency {s:?}"))?;
    let scale = match unit.trim().to_ascii_lowercase().as_str() {
        "" | "hz" => 1.0,
        "khz" => 1e3,
        "mhz" => 1e6,
        "ghz" => 1e9,
        other => return Err(format!("unknown frequency unit {other:?}")),
    };
    let hz = value * scale;
    if !(hz.is_finite() && hz > 0.0) {
        return Err(format!("frequency must be positive, got {s:?}"));
    }
    Ok(hz)
}

impl DesignSpec {
    /// Reads `key=value` lines: `freq`, `objective`, `nf_max_db`, `gain_min_db`,
    /// `z0`. Blank lines and `#` comments are ignored; `freq` is required.
    pub fn parse_config(text: &str) -> Result<Self, ConfigError> {
        let mut frequency_hz = None;
        let mut nf_max = None;
        let mut gain_min = None;
        let mut objective = Objective::MaxGain;
        let mut z0 = 50.0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| ConfigError { line, msg };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {content:?}")))?;
            let value = value.trim();
            let number = |v: &str| -> Result<f64, ConfigError> {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| err(format!("invalid number {v:?}")))
            };
            match key.trim() {
                "freq" => frequency_hz = Some(parse_frequency(value).map_err(err)?),
                "objective" => objective = value.parse().map_err(err)?,
                "nf_max_db" if !value.is_empty() => {
                    let db = number(value)?;
                    if db < 0.0 {
                        return Err(err(format!("nf_max_db must be >= 0, got {db}")));
                    }
                    nf_max = Some(db_to_factor(db));
                }
                "gain_min_db" if !value.is_empty() => gain_min = Some(from_db(number(value)?)),
                "nf_max_db" | "gain_min_db" => {}
                "z0" => {
                    let v = number(value.trim_end_matches("ohm").trim())?;
                    if v <= 0.0 {
                        return Err(err(format!("z0 must be positive, got {v}")));
                    }
                    z0 = v;
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        let frequency_hz = frequency_hz.ok_or(ConfigError {
            line: 0,
            msg: "missing required key freq".into(),
        })?;
        Ok(Self {
            frequency_hz,
            nf_max,
            gain_min,
            objective,
            z0,
        })
    }
}

fn require_unconditional(s: &TwoPortS) -> Result<(), DesignError> {
    let r = stability_report(s);
    if r.unconditional {
        Ok(())
    } else {
        Err(DesignError::NotUnconditionallyStable {
            k: r.k,
            delta_mag: r.delta.norm(),
            mu: r.mu,
        })
    }
}

/// Root of `C·Γ² - B·Γ + C* = 0`-style match equation lying inside the unit
/// disc: `Γ = (B - √(B² - 4|C|²)) / (2C)`, evaluated in rationalized form.
fn match_root(b: f64, c: Complex) -> Option<Complex> {
    let disc = b * b - 4.0 * c.norm_sqr();
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let candidates = [b + root, b - root]
        .into_iter()
        .filter(|den| den.abs() > 0.0)
        .map(|den| 2.0 * c.conj() / den);
    candidates
        .filter(|g| g.norm() < 1.0)
        .min_by(|x, y| x.norm().total_cmp(&y.norm()))
}

/// Source and load reflections that conjugately match both ports at once.
pub fn simultaneous_conjugate_match(s: &TwoPortS) -> Result<(Complex, Complex), DesignError> {
    require_unconditional(s)?;
    let delta = determinant(s);
    let b1 = 1.0 + s.s11.norm_sqr() - s.s22.norm_sqr() - delta.norm_sqr();
    let b2 = 1.0 + s.s22.norm_sqr() - s.s11.norm_sqr() - delta.norm_sqr();
    let c1 = s.s11 - delta * s.s22.conj();
    let c2 = s.s22 - delta * s.s11.conj();
    let unstable = || {
        let r = stability_report(s);
        DesignError::NotUnconditionallyStable {
            k: r.k,
            delta_mag: r.delta.norm(),
            mu: r.mu,
        }
    };
    let gms = if c1.norm() == 0.0 {
        Some(Complex::new(0.0, 0.0))
    } else {
        match_root(b1, c1)
    };
    let gml = if c2.norm() == 0.0 {
        Some(Complex::new(0.0, 0.0))
    } else {
        match_root(b2, c2)
    };
    Ok((gms.ok_or_else(unstable)?, gml.ok_or_else(unstable)?))
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximizes available gain over the noise circle `F = nf_max`, restricted to
/// stable source terminations.
fn best_on_noise_boundary(
    s: &TwoPortS,
    np: &NoiseParameters,
    nf_max: f64,
) -> Result<Complex, DesignError> {
    let circle = noise_circle(np, nf_max)?;
    if circle.radius == 0.0 {
        return Ok(circle.center);
    }
    let gain_at = |theta: f64| {
        let g = circle.point_at(theta);
        if !is_stable_termination(s, Port::Source, g) {
            return f64::NEG_INFINITY;
        }
        available_gain(s, g).unwrap_or(f64::NEG_INFINITY)
    };
    let step = std::f64::consts::TAU / BOUNDARY_SCAN as f64;
    let (best_k, best_gain) = (0..BOUNDARY_SCAN)
        .map(|k| (k, gain_at(k as f64 * step)))
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (k, g)| if g > acc.1 { (k, g) } else { acc },
        );
    if best_gain == f64::NEG_INFINITY {
        return Err(DesignError::InfeasibleSpec(format!(
            "the NF = {:.3} dB noise circle has no stable source termination",
            10.0 * nf_max.log10()
        )));
    }
    let center = best_k as f64 * step;
    let (theta, refined) = golden_max(gain_at, center - step, center + step, GOLDEN_TOL_RAD);
    Ok(if refined >= best_gain {
        circle.point_at(theta)
    } else {
        circle.point_at(center)
    })
}

/// Source reflection for the requested objective.
///
/// `GainAtNfCap` keeps the simultaneous-match point when it already meets the
/// noise cap; otherwise the optimum lies on the cap's noise circle and is
/// found by a 720-point scan refined with golden-section search.
pub fn select_source_gamma(
    s: &TwoPortS,
    np: Option<&NoiseParameters>,
    spec: &DesignSpec,
) -> Result<Complex, DesignError> {
    match spec.objective {
        Objective::MaxGain => Ok(simultaneous_conjugate_match(s)?.0),
        Objective::MinNoise => {
            let np = np.ok_or(DesignError::NoiseParametersRequired(spec.objective))?;
            Ok(np.gamma_opt)
        }
        Objective::GainAtNfCap => {
            let np = np.ok_or(DesignError::NoiseParametersRequired(spec.objective))?;
            let nf_max = spec.nf_max.ok_or_else(|| {
                DesignError::InfeasibleSpec("objective gain_at_nf_cap needs nf_max_db".into())
            })?;
            if nf_max < np.f_min {
                return Err(DesignError::InfeasibleSpec(format!(
                    "noise cap {:.3} dB is below the device minimum {:.3} dB",
                    10.0 * nf_max.log10(),
                    10.0 * np.f_min.log10()
                )));
            }
            if stability_report(s).unconditional {
                let (gms, _) = simultaneous_conjugate_match(s)?;
                if noise_figure(np, gms)? <= nf_max {
                    return Ok(gms);
                }
            }
            if np.r_n == 0.0 {
                // Every source gives F_min, so the cap cannot bind; gain is
                // unbounded without unconditional stability.
                return Err(DesignError::InfeasibleSpec(
                    "r_n = 0 leaves available gain unbounded on a potentially unstable device"
                        .into(),
                ));
            }
            best_on_noise_boundary(s, np, nf_max)
        }
    }
}

/// Resolution of the fallback load search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadScan {
    pub angular: usize,
    pub radial: usize,
}

impl Default for LoadScan {
    fn default() -> Self {
        Self {
            angular: 720,
            radial: 50,
        }
    }
}

/// Load reflection for a chosen source: the conjugate of Γ_out when that is a
/// stable load, otherwise the stable load with the highest transducer gain on
/// a polar grid.
pub fn conjugate_load(s: &TwoPortS, gamma_s: Complex) -> Result<Complex, DesignError> {
    conjugate_load_with(s, gamma_s, LoadScan::default())
}

pub fn conjugate_load_with(
    s: &TwoPortS,
    gamma_s: Complex,
    scan: LoadScan,
) -> Result<Complex, DesignError> {
    if gamma_s.norm() >= 1.0 {
        return Err(GainError::InvalidTermination(gamma_s.norm()).into());
    }
    let conj = gamma_out(s, gamma_s)?.conj();
    if is_stable_termination(s, Port::Load, conj) {
        return Ok(conj);
    }
    let mut best: Option<(f64, Complex)> = None;
    let mut consider = |gl: Complex| {
        if !is_stable_termination(s, Port::Load, gl) {
            return;
        }
        if let Ok(gt) = transducer_gain(s, gamma_s, gl) {
            if best.is_none_or(|(g, _)| gt > g) {
                best = Some((gt, gl));
            }
        }
    };
    for j in 0..scan.angular {
        let theta = std::f64::consts::TAU * j as f64 / scan.angular as f64;
        for i in 0..scan.radial {
            let r = 0.99 * (scan.radial - i) as f64 / scan.radial as f64;
            consider(Complex::from_polar(r, theta));
        }
    }
    consider(Complex::new(0.0, 0.0));
    best.map(|(_, g)| g).ok_or(DesignError::NoStableLoad)
}

/// Tuning knobs beyond the [`DesignSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignOptions {
    pub stub_kind: StubKind,
    pub load_scan: LoadScan,
    /// Characteristic impedance of the λ/4 bias line.
    pub bias_line_z0: f64,
    pub substrate: Option<Substrate>,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self {
            stub_kind: StubKind::Open,
            load_scan: LoadScan::default(),
            bias_line_z0: 100.0,
            substrate: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub frequency_hz: f64,
    pub objective: Objective,
    pub s: TwoPortS,
    pub gamma_s: Complex,
    pub gamma_l: Complex,
    /// Transducer gain (linear).
    pub gt: f64,
    /// Available gain at `gamma_s` (linear).
    pub ga: f64,
    /// Maximum available gain, when the device is unconditionally stable.
    pub mag: Option<f64>,
    /// Noise factor at `gamma_s`; `None` without noise parameters.
    pub nf: Option<f64>,
    pub stability: StabilityReport,
    pub source_network: MatchingNetwork,
    pub load_network: MatchingNetwork,
    pub bias_feed: BiasFeed,
}

pub fn design_amplifier(
    sweep: &SweepTable,
    np: Option<&NoiseParameters>,
    spec: &DesignSpec,
) -> Result<DesignReport, DesignError> {
    design_amplifier_with(sweep, np, spec, &DesignOptions::default())
}

pub fn design_amplifier_with(
    sweep: &SweepTable,
    np: Option<&NoiseParameters>,
    spec: &DesignSpec,
    options: &DesignOptions,
) -> Result<DesignReport, DesignError> {
    let s = sample_at(sweep, spec.frequency_hz)?;
    if (s.z0 - spec.z0).abs() > 1e-9 * spec.z0 {
        return Err(DesignError::ReferenceMismatch {
            spec: spec.z0,
            data: s.z0,
        });
    }
    let stability = stability_report(&s);
    if spec.objective == Objective::MaxGain {
        require_unconditional(&s)?;
    }

    let gamma_s = select_source_gamma(&s, np, spec)?;
    if !is_stable_termination(&s, Port::Source, gamma_s) {
        return Err(DesignError::InfeasibleSpec(format!(
            "selected source termination {} is in the unstable source region",
            crate::complex::format_gamma(gamma_s)
        )));
    }
    let gamma_l = conjugate_load_with(&s, gamma_s, options.load_scan)?;

    let gt = transducer_gain(&s, gamma_s, gamma_l)?;
    let ga = available_gain(&s, gamma_s)?;
    let mag = max_available_gain(&s).ok();
    let nf = np.map(|np| noise_figure(np, gamma_s)).transpose()?;
    if let Some(min) = spec.gain_min {
        if gt < min {
            return Err(DesignError::GainBelowMinimum {
                achieved_db: 10.0 * gt.log10(),
                required_db: 10.0 * min.log10(),
            });
        }
    }

    let source_network = single_stub_match(gamma_s, spec.z0, options.stub_kind)?;
    let load_network = single_stub_match(gamma_l, spec.z0, options.stub_kind)?;
    let bias_feed = bias_feed(options.bias_line_z0, spec.frequency_hz, options.substrate)?;

    Ok(DesignReport {
        frequency_hz: spec.frequency_hz,
        objective: spec.objective,
        s,
        gamma_s,
        gamma_l,
        gt,
        ga,
        mag,
        nf,
        stability,
        source_network,
        load_network,
        bias_feed,
    })
}
