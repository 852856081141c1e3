//! Two-port noise figure, constant-noise circles and cascaded noise factor.
//!
//! Noise factors are linear (F ≥ 1). `NF = 10·log10(F)` only at the edges.

use thiserror::Error;

use crate::complex::{normalized_admittance, Complex, SmithCircle};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoiseError {
    #[error("invalid noise parameters: {0}")]
    InvalidParameters(String),
    #[error("source termination |Γ_s| = {0} is not passive (must be < 1)")]
    InvalidSource(f64),
    #[error("admittance form is singular at Γ = -1")]
    SingularPoint,
    #[error("noise factor {target} is below the device minimum {f_min}")]
    BelowMinimum { target: f64, f_min: f64 },
    #[error("noise resistance is zero: no finite circle for F = {0} above F_min")]
    UndefinedParameter(f64),
    #[error("cascade needs at least one stage")]
    EmptyCascade,
    #[error("invalid cascade stage: {0}")]
    InvalidStage(String),
}

pub fn factor_to_db(f: f64) -> f64 {
    10.0 * f.log10()
}

pub fn db_to_factor(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Device noise parameters referenced to the system impedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParameters {
    /// Minimum noise factor (linear).
    pub f_min: f64,
    /// Equivalent noise resistance normalized to z0.
    pub r_n: f64,
    /// Source reflection coefficient giving `f_min`.
    pub gamma_opt: Complex,
}

impl NoiseParameters {
    pub fn new(f_min: f64, r_n: f64, gamma_opt: Complex) -> Result<Self, NoiseError> {
        if !(f_min.is_finite() && f_min >= 1.0) {
            return Err(NoiseError::InvalidParameters(format!(
                "F_min = {f_min} (must be >= 1)"
            )));
        }
        if !(r_n.is_finite() && r_n >= 0.0) {
            return Err(NoiseError::InvalidParameters(format!(
                "r_n = {r_n} (must be >= 0)"
            )));
        }
        if !(gamma_opt.norm() < 1.0) {
            return Err(NoiseError::InvalidParameters(format!(
                "|Γ_opt| = {} (must be < 1)",
                gamma_opt.norm()
            )));
        }
        Ok(Self {
            f_min,
            r_n,
            gamma_opt,
        })
    }

    /// From `NF_min` in dB and an unnormalized noise resistance in ohms.
    pub fn from_db_ohms(
        nf_min_db: f64,
        rn_ohms: f64,
        z0: f64,
        gamma_opt: Complex,
    ) -> Result<Self, NoiseError> {
        Self::new(db_to_factor(nf_min_db), rn_ohms / z0, gamma_opt)
    }
}

/// Noise factor for source reflection `gamma_s`:
///
/// ```text
/// F = F_min + 4 r_n |Γs - Γopt|² / ((1 - |Γs|²) |1 + Γopt|²)
/// ```
pub fn noise_figure(np: &NoiseParameters, gamma_s: Complex) -> Result<f64, NoiseError> {
    let m = gamma_s.norm();
    if !(m < 1.0) {
        return Err(NoiseError::InvalidSource(m));
    }
    let excess = 4.0 * np.r_n * (gamma_s - np.gamma_opt).norm_sqr()
        / ((1.0 - m * m) * (1.0 + np.gamma_opt).norm_sqr());
    Ok(np.f_min + excess)
}

/// Same quantity via normalized admittances, `F = F_min + (r_n/g_s)|y_s - y_opt|²`.
pub fn noise_figure_admittance_form(
    np: &NoiseParameters,
    gamma_s: Complex,
) -> Result<f64, NoiseError> {
    let m = gamma_s.norm();
    if !(m < 1.0) {
        return Err(NoiseError::InvalidSource(m));
    }
    let y_s = normalized_admittance(gamma_s).map_err(|_| NoiseError::SingularPoint)?;
    let y_opt = normalized_admittance(np.gamma_opt).map_err(|_| NoiseError::SingularPoint)?;
    Ok(np.f_min + np.r_n / y_s.re * (y_s - y_opt).norm_sqr())
}

/// Noise-circle parameter `N = (F - F_min)|1 + Γopt|² / (4 r_n)`.
pub fn noise_circle_parameter(np: &NoiseParameters, f_target: f64) -> Result<f64, NoiseError> {
    if !(f_target >= np.f_min) {
        return Err(NoiseError::BelowMinimum {
            target: f_target,
            f_min: np.f_min,
        });
    }
    if f_target == np.f_min {
        return Ok(0.0);
    }
    if np.r_n == 0.0 {
        return Err(NoiseError::UndefinedParameter(f_target));
    }
    Ok((f_target - np.f_min) * (1.0 + np.gamma_opt).norm_sqr() / (4.0 * np.r_n))
}

/// Locus of source terminations with noise factor `f_target` (linear).
pub fn noise_circle(np: &NoiseParameters, f_target: f64) -> Result<SmithCircle, NoiseError> {
    let n = noise_circle_parameter(np, f_target)?;
    let center = np.gamma_opt / (1.0 + n);
    let radius = (n * n + n * (1.0 - np.gamma_opt.norm_sqr())).sqrt() / (1.0 + n);
    SmithCircle::new(center, radius).map_err(|e| NoiseError::InvalidParameters(e.to_string()))
}

/// One stage of a receiver chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CascadeStage {
    /// Noise factor (linear).
    pub f: f64,
    /// Available gain (linear).
    pub g: f64,
}

impl CascadeStage {
    pub fn new(f: f64, g: f64) -> Result<Self, NoiseError> {
        if !(f.is_finite() && f >= 1.0) {
            return Err(NoiseError::InvalidStage(format!(
                "noise factor {f} (must be >= 1)"
            )));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(NoiseError::InvalidStage(format!("gain {g} (must be > 0)")));
        }
        Ok(Self { f, g })
    }

    pub fn from_db(nf_db: f64, gain_db: f64) -> Result<Self, NoiseError> {
        Self::new(db_to_factor(nf_db), db_to_factor(gain_db))
    }
}

/// Per-stage terms of the Friis sum: `(F_i - 1) / (G_1 ⋯ G_{i-1})`, with the
/// first entry being `F_1` itself.
pub fn friis_contributions(stages: &[CascadeStage]) -> Result<Vec<f64>, NoiseError> {
    let first = stages.first().ok_or(NoiseError::EmptyCascade)?;
    let mut out = Vec::with_capacity(stages.len());
    out.push(first.f);
    let mut gain = first.g;
    for st in &stages[1..] {
        out.push((st.f - 1.0) / gain);
        gain *= st.g;
    }
    Ok(out)
}

/// Total noise factor of cascaded stages (Friis).
pub fn friis_cascade(stages: &[CascadeStage]) -> Result<f64, NoiseError> {
    Ok(friis_contributions(stages)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::polar_deg;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn sample_np() -> NoiseParameters {
        NoiseParameters::new(1.5, 0.2, c(0.3, 0.0)).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(NoiseParameters::new(0.9, 0.2, c(0.0, 0.0)).is_err());
        assert!(NoiseParameters::new(1.2, -0.1, c(0.0, 0.0)).is_err());
        assert!(NoiseParameters::new(1.2, 0.1, c(1.0, 0.0)).is_err());
        let np = NoiseParameters::from_db_ohms(0.0, 10.0, 50.0, c(0.0, 0.0)).unwrap();
        assert_eq!((np.f_min, np.r_n), (1.0, 0.2));
    }

    #[test]
    fn noise_figure_examples() {
        let np = sample_np();
        assert_eq!(noise_figure(&np, np.gamma_opt).unwrap(), np.f_min);
        let quiet = NoiseParameters { r_n: 0.0, ..np };
        assert_eq!(noise_figure(&quiet, c(-0.4, 0.6)).unwrap(), np.f_min);
        // 1.5 + 4·0.2·0.09 / (1·1.69)
        let f = noise_figure(&np, c(0.0, 0.0)).unwrap();
        assert!((f - 1.5426).abs() < 1e-4);
        assert!((f - (1.5 + 0.072 / 1.69)).abs() < 1e-15);
        assert!(matches!(
            noise_figure(&np, c(1.0, 0.0)),
            Err(NoiseError::InvalidSource(_))
        ));
    }

    #[test]
    fn admittance_form_examples() {
        let np = NoiseParameters::new(1.3, 0.4, c(0.0, 0.0)).unwrap();
        assert_eq!(noise_figure_admittance_form(&np, c(0.0, 0.0)).unwrap(), 1.3);
        let np = sample_np();
        let edge = noise_figure_admittance_form(&np, c(0.999999, 0.0)).unwrap();
        let eq8 = noise_figure(&np, c(0.999999, 0.0)).unwrap();
        assert!(edge > 1e4);
        assert!((edge - eq8).abs() <= 1e-6 * eq8);
    }

    #[test]
    fn admittance_form_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10_000 {
            let np = NoiseParameters::new(
                rng.gen_range(1.0..4.0),
                rng.gen_range(0.0..2.0),
                polar_deg(rng.gen_range(0.0..0.95), rng.gen_range(-180.0..180.0)),
            )
            .unwrap();
            let gs = polar_deg(rng.gen_range(0.0..0.95), rng.gen_range(-180.0..180.0));
            let a = noise_figure(&np, gs).unwrap();
            let b = noise_figure_admittance_form(&np, gs).unwrap();
            assert!((a - b).abs() <= 1e-10 * a);
        }
    }

    #[test]
    fn noise_circle_examples() {
        let np = sample_np();
        let c0 = noise_circle(&np, np.f_min).unwrap();
        assert_eq!(c0.radius, 0.0);
        assert_eq!(c0.center, np.gamma_opt);
        let at_origin = NoiseParameters::new(1.2, 0.3, c(0.0, 0.0)).unwrap();
        let c1 = noise_circle(&at_origin, 1.2).unwrap();
        assert_eq!((c1.center, c1.radius), (c(0.0, 0.0), 0.0));

        let target = noise_figure(&np, c(0.0, 0.0)).unwrap();
        let circle = noise_circle(&np, target).unwrap();
        assert!(circle.signed_distance(c(0.0, 0.0)).abs() < 1e-6);

        assert!(matches!(
            noise_circle(&np, 1.4),
            Err(NoiseError::BelowMinimum { .. })
        ));
        let quiet = NoiseParameters { r_n: 0.0, ..np };
        assert!(matches!(
            noise_circle(&quiet, 2.0),
            Err(NoiseError::UndefinedParameter(_))
        ));
    }

    #[test]
    fn noise_circle_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..100 {
            let np = NoiseParameters::new(
                rng.gen_range(1.0..3.0),
                rng.gen_range(0.01..1.5),
                polar_deg(rng.gen_range(0.0..0.9), rng.gen_range(-180.0..180.0)),
            )
            .unwrap();
            let target = np.f_min + rng.gen_range(0.01..3.0);
            let circle = noise_circle(&np, target).unwrap();
            for p in circle.sample(360) {
                let f = noise_figure(&np, p).unwrap();
                assert!((f - target).abs() <= 1e-9 * target);
            }
        }
    }

    #[test]
    fn minimum_is_at_gamma_opt() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let np = NoiseParameters::new(1.4, 0.3, polar_deg(0.5, 60.0)).unwrap();
        let mut best = (f64::INFINITY, c(0.0, 0.0));
        for _ in 0..10_000 {
            let gs = polar_deg(
                rng.gen_range(0.0f64..1.0).sqrt() * 0.999,
                rng.gen_range(-180.0..180.0),
            );
            let f = noise_figure(&np, gs).unwrap();
            assert!(f >= np.f_min);
            if f < best.0 {
                best = (f, gs);
            }
        }
        assert!((best.1 - np.gamma_opt).norm() < 0.05);
    }

    #[test]
    fn friis_examples() {
        let s = |f, g| CascadeStage::new(f, g).unwrap();
        assert_eq!(friis_cascade(&[s(2.5, 7.0)]).unwrap(), 2.5);
        assert_eq!(friis_cascade(&[s(2.0, 10.0), s(3.0, 5.0)]).unwrap(), 2.2);
        let swapped = friis_cascade(&[s(3.0, 10.0), s(2.0, 10.0)]).unwrap();
        assert!((swapped - 3.1).abs() < 1e-15);
        assert_eq!(friis_cascade(&[]), Err(NoiseError::EmptyCascade));
        assert!(CascadeStage::new(0.5, 1.0).is_err());
        assert!(CascadeStage::new(1.5, 0.0).is_err());
    }

    #[test]
    fn friis_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..1000 {
            let n = rng.gen_range(1..5);
            let mut stages: Vec<CascadeStage> = (0..n)
                .map(|_| {
                    CascadeStage::new(rng.gen_range(1.0..10.0), rng.gen_range(0.1..1000.0)).unwrap()
                })
                .collect();
            let base = friis_cascade(&stages).unwrap();
            let mut longer = stages.clone();
            longer.push(
                CascadeStage::new(rng.gen_range(1.001..10.0), rng.gen_range(0.1..100.0)).unwrap(),
            );
            assert!(friis_cascade(&longer).unwrap() > base);
            stages[0].g *= rng.gen_range(1.0..10.0);
            assert!(friis_cascade(&stages).unwrap() <= base);
        }
    }
}
