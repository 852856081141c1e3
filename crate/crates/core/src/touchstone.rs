//! Touchstone v1 two-port S-parameter files.
//!
//! Data rows are `f S11 S21 S12 S22`, each parameter written as a pair whose
//! meaning depends on the option-line format (`MA`, `RI` or `DB`, angles in
//! degrees). Frequencies are stored in hertz and S-parameters as rectangular
//! complex values.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::complex::{polar_deg, Complex};

/// Default reference impedance when the option line omits `R`.
pub const DEFAULT_Z0: f64 = 50.0;

/// Grid frequencies closer than this (Hz) to a query are returned as-is.
pub const FREQ_MATCH_TOL_HZ: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TouchstoneError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unsupported format: {msg}")]
    UnsupportedFormat { line: usize, msg: String },
    #[error("line {line}: frequency {freq_hz} Hz does not increase past {prev_hz} Hz")]
    NonMonotonicFrequency {
        line: usize,
        prev_hz: f64,
        freq_hz: f64,
    },
    #[error("no data rows in sweep")]
    EmptySweep,
    #[error("frequency {freq_hz} Hz outside sweep range [{min_hz}, {max_hz}] Hz")]
    OutOfRange {
        freq_hz: f64,
        min_hz: f64,
        max_hz: f64,
    },
    #[error("invalid network data: {0}")]
    Invalid(String),
}

/// Scattering matrix of a two-port at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortS {
    pub s11: Complex,
    pub s12: Complex,
    pub s21: Complex,
    pub s22: Complex,
    /// Reference impedance in ohms.
    pub z0: f64,
}

impl TwoPortS {
    pub fn new(
        s11: Complex,
        s12: Complex,
        s21: Complex,
        s22: Complex,
        z0: f64,
    ) -> Result<Self, TouchstoneError> {
        let finite = [s11, s12, s21, s22]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(TouchstoneError::Invalid("non-finite S-parameter".into()));
        }
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(TouchstoneError::Invalid(format!(
                "reference impedance {z0}"
            )));
        }
        Ok(Self {
            s11,
            s12,
            s21,
            s22,
            z0,
        })
    }

    /// Builds from `(magnitude, degrees)` pairs in the order S11, S21, S12, S22.
    pub fn from_polar_deg(
        s11: (f64, f64),
        s21: (f64, f64),
        s12: (f64, f64),
        s22: (f64, f64),
        z0: f64,
    ) -> Result<Self, TouchstoneError> {
        let p = |(m, a): (f64, f64)| polar_deg(m, a);
        Self::new(p(s11), p(s12), p(s21), p(s22), z0)
    }

    /// Parameters in Touchstone column order.
    fn columns(&self) -> [Complex; 4] {
        [self.s11, self.s21, self.s12, self.s22]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub frequency_hz: f64,
    pub s: TwoPortS,
}

/// Frequency-ordered two-port data sharing one reference impedance.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    points: Vec<SweepPoint>,
    z0: f64,
}

impl SweepTable {
    pub fn new(points: Vec<SweepPoint>, z0: f64) -> Result<Self, TouchstoneError> {
        if points.is_empty() {
            return Err(TouchstoneError::EmptySweep);
        }
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(TouchstoneError::Invalid(format!(
                "reference impedance {z0}"
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if !(p.frequency_hz.is_finite() && p.frequency_hz > 0.0) {
                return Err(TouchstoneError::Invalid(format!(
                    "frequency {} Hz",
                    p.frequency_hz
                )));
            }
            if i > 0 && p.frequency_hz <= points[i - 1].frequency_hz {
                return Err(TouchstoneError::NonMonotonicFrequency {
                    line: i + 1,
                    prev_hz: points[i - 1].frequency_hz,
                    freq_hz: p.frequency_hz,
                });
            }
        }
        Ok(Self { points, z0 })
    }

    /// Single-frequency table.
    pub fn single(frequency_hz: f64, s: TwoPortS) -> Result<Self, TouchstoneError> {
        Self::new(vec![SweepPoint { frequency_hz, s }], s.z0)
    }

    pub fn points(&self) -> &[SweepPoint] {
        &self.points
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn f_min(&self) -> f64 {
        self.points[0].frequency_hz
    }

    pub fn f_max(&self) -> f64 {
        self.points[self.points.len() - 1].frequency_hz
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    /// Magnitude, angle.
    Ma,
    /// Real, imaginary.
    Ri,
    /// 20·log10 magnitude, angle.
    Db,
}

impl DataFormat {
    fn keyword(self) -> &'static str {
        match self {
            DataFormat::Ma => "MA",
            DataFormat::Ri => "RI",
            DataFormat::Db => "DB",
        }
    }

    fn decode(self, a: f64, b: f64) -> Complex {
        match self {
            DataFormat::Ri => Complex::new(a, b),
            DataFormat::Ma => polar_deg(a, b),
            DataFormat::Db => polar_deg(10f64.powf(a / 20.0), b),
        }
    }

    fn encode(self, z: Complex) -> (f64, f64) {
        match self {
            DataFormat::Ri => (z.re, z.im),
            DataFormat::Ma => (z.norm(), z.arg().to_degrees()),
            DataFormat::Db => (20.0 * z.norm().log10(), z.arg().to_degrees()),
        }
    }
}

impl fmt::Display for DataFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FreqUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    fn scale(self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            FreqUnit::Hz => "Hz",
            FreqUnit::KHz => "kHz",
            FreqUnit::MHz => "MHz",
            FreqUnit::GHz => "GHz",
        }
    }
}

struct Options {
    unit: FreqUnit,
    format: DataFormat,
    z0: f64,
}

fn parse_option_line(body: &str, line: usize) -> Result<Options, TouchstoneError> {
    let syntax = |msg: String| TouchstoneError::Syntax { line, msg };
    let mut unit = None;
    let mut format = None;
    let mut param = None;
    let mut z0 = None;
    let mut tokens = body.split_whitespace();
    while let Some(tok) = tokens.next() {
        let lower = tok.to_ascii_lowercase();
        let slot_taken = |what: &str| syntax(format!("duplicate {what} in option line: {tok:?}"));
        match lower.as_str() {
            "hz" | "khz" | "mhz" | "ghz" => {
                if unit.is_some() {
                    return Err(slot_taken("frequency unit"));
                }
                unit = Some(match lower.as_str() {
                    "hz" => FreqUnit::Hz,
                    "khz" => FreqUnit::KHz,
                    "mhz" => FreqUnit::MHz,
                    _ => FreqUnit::GHz,
                });
            }
            "ma" | "ri" | "db" => {
                if format.is_some() {
                    return Err(slot_taken("data format"));
                }
                format = Some(match lower.as_str() {
                    "ma" => DataFormat::Ma,
                    "ri" => DataFormat::Ri,
                    _ => DataFormat::Db,
                });
            }
            "s" | "y" | "z" | "h" | "g" => {
                if param.is_some() {
                    return Err(slot_taken("parameter type"));
                }
                param = Some(lower);
            }
            "r" => {
                if z0.is_some() {
                    return Err(slot_taken("reference impedance"));
                }
                let value = tokens
                    .next()
                    .ok_or_else(|| syntax("option R needs a value".into()))?;
                let r: f64 = value
                    .parse()
                    .map_err(|_| syntax(format!("invalid reference impedance {value:?}")))?;
                if !(r.is_finite() && r > 0.0) {
                    return Err(syntax(format!(
                        "reference impedance must be positive, got {r}"
                    )));
                }
                z0 = Some(r);
            }
            _ => return Err(syntax(format!("unknown option {tok:?}"))),
        }
    }
    if let Some(p) = param {
        if p != "s" {
            return Err(TouchstoneError::UnsupportedFormat {
                line,
                msg: format!("parameter type {} (only S is supported)", p.to_uppercase()),
            });
        }
    }
    Ok(Options {
        unit: unit.unwrap_or(FreqUnit::GHz),
        format: format.unwrap_or(DataFormat::Ma),
        z0: z0.unwrap_or(DEFAULT_Z0),
    })
}

/// Parses Touchstone v1 two-port content.
///
/// A trailing noise-parameter block (five-column rows after the S data) is
/// skipped.
pub fn parse_touchstone(text: &str) -> Result<SweepTable, TouchstoneError> {
    let mut options: Option<Options> = None;
    let mut points: Vec<SweepPoint> = Vec::new();
    let mut in_noise_block = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            return Err(TouchstoneError::UnsupportedFormat {
                line,
                msg: format!("Touchstone v2 keyword {content:?}"),
            });
        }
        if let Some(body) = content.strip_prefix('#') {
            // Only the first option line counts.
            if options.is_none() {
                options = Some(parse_option_line(body, line)?);
            }
            continue;
        }
        let opts = match &options {
            Some(o) => o,
            None => options.insert(Options {
                unit: FreqUnit::GHz,
                format: DataFormat::Ma,
                z0: DEFAULT_Z0,
            }),
        };

        let values = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| TouchstoneError::Syntax {
                        line,
                        msg: format!("invalid number {tok:?}"),
                    })
            })
            .collect::<Result<Vec<f64>, _>>()?;

        match values.len() {
            9 if !in_noise_block => {}
            5 if !points.is_empty() => {
                in_noise_block = true;
                continue;
            }
            3 => {
                return Err(TouchstoneError::UnsupportedFormat {
                    line,
                    msg: "one-port data (only two-port files are supported)".into(),
                })
            }
            n => {
                return Err(TouchstoneError::Syntax {
                    line,
                    msg: format!("expected 9 values per two-port data row, found {n}"),
                })
            }
        }

        let frequency_hz = values[0] * opts.unit.scale();
        if frequency_hz <= 0.0 {
            return Err(TouchstoneError::Syntax {
                line,
                msg: format!("frequency must be positive, got {}", values[0]),
            });
        }
        if let Some(prev) = points.last() {
            if frequency_hz <= prev.frequency_hz {
                return Err(TouchstoneError::NonMonotonicFrequency {
                    line,
                    prev_hz: prev.frequency_hz,
                    freq_hz: frequency_hz,
                });
            }
        }
        let c = |k: usize| opts.format.decode(values[1 + 2 * k], values[2 + 2 * k]);
        let s = TwoPortS::new(c(0), c(2), c(1), c(3), opts.z0).map_err(|e| {
            TouchstoneError::Syntax {
                line,
                msg: e.to_string(),
            }
        })?;
        points.push(SweepPoint { frequency_hz, s });
    }

    let z0 = options.map_or(DEFAULT_Z0, |o| o.z0);
    SweepTable::new(points, z0)
}

/// Writes a table as Touchstone v1 text: one option line, one row per point.
pub fn serialize_touchstone(table: &SweepTable, format: DataFormat) -> String {
    let f_min = table.f_min();
    let unit = [FreqUnit::GHz, FreqUnit::MHz, FreqUnit::KHz]
        .into_iter()
        .find(|u| f_min >= u.scale())
        .unwrap_or(FreqUnit::Hz);

    let mut out = String::new();
    let _ = writeln!(out, "# {} S {} R {}", unit.keyword(), format, table.z0());
    for p in table.points() {
        let _ = write!(out, "{}", p.frequency_hz / unit.scale());
        for z in p.s.columns() {
            let (a, b) = format.encode(z);
            let _ = write!(out, " {a} {b}");
        }
        out.push('\n');
    }
    out
}

fn wrap_pi(x: f64) -> f64 {
    let mut a = x % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

fn interp_param(a: Complex, b: Complex, t: f64) -> Complex {
    let mag = a.norm() + t * (b.norm() - a.norm());
    // Nearest-branch unwrapping: assumes less than 180° of phase change per step.
    let phase = a.arg() + t * wrap_pi(b.arg() - a.arg());
    Complex::from_polar(mag, phase)
}

/// S-parameters at `frequency_hz`: the grid point itself when within 1 Hz,
/// otherwise linear interpolation in magnitude and unwrapped phase.
pub fn sample_at(table: &SweepTable, frequency_hz: f64) -> Result<TwoPortS, TouchstoneError> {
    let points = table.points();
    if let Some(p) = points
        .iter()
        .find(|p| (p.frequency_hz - frequency_hz).abs() <= FREQ_MATCH_TOL_HZ)
    {
        return Ok(p.s);
    }
    if !(frequency_hz >= table.f_min() && frequency_hz <= table.f_max()) {
        return Err(TouchstoneError::OutOfRange {
            freq_hz: frequency_hz,
            min_hz: table.f_min(),
            max_hz: table.f_max(),
        });
    }
    let hi = points.partition_point(|p| p.frequency_hz < frequency_hz);
    let (p0, p1) = (&points[hi - 1], &points[hi]);
    let t = (frequency_hz - p0.frequency_hz) / (p1.frequency_hz - p0.frequency_hz);
    let (a, b) = (p0.s, p1.s);
    Ok(TwoPortS {
        s11: interp_param(a.s11, b.s11, t),
        s12: interp_param(a.s12, b.s12, t),
        s21: interp_param(a.s21, b.s21, t),
        s22: interp_param(a.s22, b.s22, t),
        z0: table.z0(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::PolarForm;

    const N420: &str =
        "! N420 at 3 GHz\n# GHz S MA R 50\n3.0 0.499 151.5 4.426 51.4 0.084 37.3 0.161 -120.6\n";

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn parses_n420_point() {
        let t = parse_touchstone(N420).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.f_min(), 3.0e9);
        assert_eq!(t.z0(), 50.0);
        let s = t.points()[0].s;
        assert!(close(s.s11, polar_deg(0.499, 151.5), 1e-15));
        assert!(close(s.s21, polar_deg(4.426, 51.4), 1e-15));
        assert!(close(s.s12, polar_deg(0.084, 37.3), 1e-15));
        assert!(close(s.s22, polar_deg(0.161, -120.6), 1e-15));
    }

    #[test]
    fn parses_ri_identity_row() {
        let t = parse_touchstone("# Hz S RI R 50\n1 1 0 0 0 0 0 1 0\n").unwrap();
        let p = t.points()[0];
        assert_eq!(p.frequency_hz, 1.0);
        assert_eq!(p.s.s11, Complex::new(1.0, 0.0));
        assert_eq!(p.s.s21, Complex::new(0.0, 0.0));
        assert_eq!(p.s.s12, Complex::new(0.0, 0.0));
        assert_eq!(p.s.s22, Complex::new(1.0, 0.0));
    }

    #[test]
    fn db_format_and_default_reference() {
        let t = parse_touchstone("# MHz S DB\n100 -6.0206 0 20 90 -40 0 0 0\n").unwrap();
        assert_eq!(t.z0(), 50.0);
        let s = t.points()[0].s;
        assert!((s.s11.norm() - 0.5).abs() < 1e-5);
        assert!(close(s.s21, Complex::new(0.0, 10.0), 1e-12));
        assert!((s.s12.norm() - 0.01).abs() < 1e-15);
        assert_eq!(t.f_min(), 1e8);
    }

    #[test]
    fn comment_only_is_empty_sweep() {
        let err =
            parse_touchstone("! nothing here\n# GHz S MA R 50\n! still nothing\n").unwrap_err();
        assert_eq!(err, TouchstoneError::EmptySweep);
    }

    #[test]
    fn rejects_non_monotonic() {
        let text = "# GHz S MA R 50\n2 0 0 1 0 0 0 0 0\n1 0 0 1 0 0 0 0 0\n";
        assert!(matches!(
            parse_touchstone(text),
            Err(TouchstoneError::NonMonotonicFrequency { line: 3, .. })
        ));
    }

    #[test]
    fn rejects_other_parameter_types_and_v2() {
        assert!(matches!(
            parse_touchstone("# GHz Y MA R 50\n1 0 0 0 0 0 0 0 0\n"),
            Err(TouchstoneError::UnsupportedFormat { line: 1, .. })
        ));
        assert!(matches!(
            parse_touchstone("[Version] 2.0\n# GHz S MA R 50\n"),
            Err(TouchstoneError::UnsupportedFormat { line: 1, .. })
        ));
        assert!(matches!(
            parse_touchstone("# GHz S MA R 50\n1 0.5 0\n"),
            Err(TouchstoneError::UnsupportedFormat { line: 2, .. })
        ));
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(
            parse_touchstone("# GHz S MA R 50\n1 0 0 1 0 0 0 0\n"),
            Err(TouchstoneError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_touchstone("# GHz S MA R 50\n\n1 0 0 1 x 0 0 0 0\n"),
            Err(TouchstoneError::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn option_line_mutations_name_the_line() {
        let bad = [
            "# GHz S MA R",
            "# GHz S MA R abc",
            "# GHz S MA R -50",
            "# GHz GHz S MA R 50",
            "# GHz S S MA R 50",
            "# GHz S MA RI R 50",
            "# GHz S MA R 50 R 75",
            "# THz S MA R 50",
            "# GHz S XY R 50",
            "# GHz S MA Q 50",
        ];
        for opt in bad {
            let text = format!("! header\n{opt}\n3 0 0 1 0 0 0 0 0\n");
            let err = parse_touchstone(&text).unwrap_err();
            assert!(
                matches!(err, TouchstoneError::Syntax { line: 2, .. }),
                "{opt:?} gave {err:?}"
            );
            assert!(err.to_string().starts_with("line 2:"));
        }
    }

    #[test]
    fn skips_trailing_noise_block() {
        let text = "# GHz S MA R 50\n2 0.5 0 2 0 0.1 0 0.5 0\n3 0.5 0 2 0 0.1 0 0.5 0\n2 0.5 0.6 120 0.3\n3 0.6 0.5 130 0.3\n";
        let t = parse_touchstone(text).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn serialize_single_point() {
        let t = parse_touchstone(N420).unwrap();
        let text = serialize_touchstone(&t, DataFormat::Ma);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "# GHz S MA R 50");
        let back = parse_touchstone(&text).unwrap();
        let s11 = PolarForm::from(back.points()[0].s.s11);
        assert_eq!(format!("{:.3}", s11.magnitude), "0.499");
        assert_eq!(format!("{:.1}", s11.angle_deg), "151.5");
    }

    #[test]
    fn cross_format_round_trip() {
        let t = parse_touchstone(N420).unwrap();
        let ri = parse_touchstone(&serialize_touchstone(&t, DataFormat::Ri)).unwrap();
        let ma = parse_touchstone(&serialize_touchstone(&ri, DataFormat::Ma)).unwrap();
        let (a, b) = (t.points()[0].s, ma.points()[0].s);
        for (x, y) in [
            (a.s11, b.s11),
            (a.s12, b.s12),
            (a.s21, b.s21),
            (a.s22, b.s22),
        ] {
            assert!((x - y).norm() <= 1e-9 * x.norm());
        }
    }

    fn two_point(mag0: f64, mag1: f64) -> SweepTable {
        let s = |m: f64| {
            TwoPortS::from_polar_deg((0.5, 10.0), (m, 50.0), (0.1, 20.0), (0.2, -30.0), 50.0)
                .unwrap()
        };
        SweepTable::new(
            vec![
                SweepPoint {
                    frequency_hz: 2.9e9,
                    s: s(mag0),
                },
                SweepPoint {
                    frequency_hz: 3.1e9,
                    s: s(mag1),
                },
            ],
            50.0,
        )
        .unwrap()
    }

    #[test]
    fn sample_exact_and_interpolated() {
        let t = parse_touchstone(N420).unwrap();
        assert_eq!(sample_at(&t, 3.0e9).unwrap(), t.points()[0].s);
        assert_eq!(sample_at(&t, 3.0e9 + 0.5).unwrap(), t.points()[0].s);

        let same = two_point(4.0, 4.0);
        let mid = sample_at(&same, 3.0e9).unwrap();
        assert!(close(mid.s21, same.points()[0].s.s21, 1e-12));

        let t = two_point(4.0, 4.426);
        let mid = sample_at(&t, 3.0e9).unwrap();
        assert!((mid.s21.norm() - 4.213).abs() < 1e-9);
    }

    #[test]
    fn sample_unwraps_phase_across_branch_cut() {
        let s = |a: f64| {
            TwoPortS::from_polar_deg((0.5, a), (1.0, 0.0), (0.1, 0.0), (0.2, 0.0), 50.0).unwrap()
        };
        let t = SweepTable::new(
            vec![
                SweepPoint {
                    frequency_hz: 1e9,
                    s: s(170.0),
                },
                SweepPoint {
                    frequency_hz: 2e9,
                    s: s(-170.0),
                },
            ],
            50.0,
        )
        .unwrap();
        let mid = sample_at(&t, 1.5e9).unwrap();
        assert!((PolarForm::from(mid.s11).angle_deg - 180.0).abs() < 1e-9);
    }

    #[test]
    fn sample_out_of_range() {
        let t = two_point(4.0, 4.426);
        assert!(matches!(
            sample_at(&t, 2.0e9),
            Err(TouchstoneError::OutOfRange { .. })
        ));
        assert!(matches!(
            sample_at(&t, 3.2e9),
            Err(TouchstoneError::OutOfRange { .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_s() -> impl Strategy<Value = TwoPortS> {
            let c = (0.001..5.0f64, -179.9..179.9f64).prop_map(|(m, a)| polar_deg(m, a));
            (c.clone(), c.clone(), c.clone(), c)
                .prop_map(|(a, b, c, d)| TwoPortS::new(a, b, c, d, 50.0).unwrap())
        }

        proptest! {
            #[test]
            fn interpolation_is_exact_at_grid_and_monotone(m0 in 0.01..10.0f64, m1 in 0.01..10.0f64, t in 0.0..1.0f64) {
                let table = two_point(m0, m1);
                prop_assert_eq!(sample_at(&table, 2.9e9).unwrap(), table.points()[0].s);
                prop_assert_eq!(sample_at(&table, 3.1e9).unwrap(), table.points()[1].s);
                let m = sample_at(&table, 2.9e9 + t * 0.2e9).unwrap().s21.norm();
                prop_assert!(m >= m0.min(m1) - 1e-12 && m <= m0.max(m1) + 1e-12);
            }

            #[test]
            fn serialize_parse_round_trip(points in proptest::collection::vec(arb_s(), 1..6), f0 in 1.0..1e10f64, fmt_idx in 0usize..3) {
                let format = [DataFormat::Ma, DataFormat::Ri, DataFormat::Db][fmt_idx];
                let table = SweepTable::new(
                    points.iter().enumerate().map(|(i, s)| SweepPoint { frequency_hz: f0 * (1.0 + i as f64), s: *s }).collect(),
                    50.0,
                ).unwrap();
                let back = parse_touchstone(&serialize_touchstone(&table, format)).unwrap();
                prop_assert_eq!(back.len(), table.len());
                for (a, b) in table.points().iter().zip(back.points()) {
                    prop_assert!((a.frequency_hz - b.frequency_hz).abs() <= 1e-9 * a.frequency_hz);
                    for (x, y) in a.s.columns().iter().zip(b.s.columns()) {
                        prop_assert!((x - y).norm() <= 1e-9 * x.norm());
                    }
                }
            }
        }
    }
}
