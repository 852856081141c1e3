//! Power gains of a terminated two-port and constant-available-gain circles.
//!
//! Gains are linear power ratios throughout; convert with [`to_db`] at the
//! presentation boundary.

use thiserror::Error;

use crate::complex::{Complex, SmithCircle};
use crate::stability::{determinant, rollett_k, UNILATERAL_TOL};
use crate::touchstone::TwoPortS;

/// Denominators `|1 - Sii·Γ|` below this are singular terminations.
pub const TERMINATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GainError {
    #[error("singular termination: {0}")]
    SingularTermination(String),
    #[error("termination |Γ| = {0} is not passive (must be < 1)")]
    InvalidTermination(f64),
    #[error("unilateral figure of merit needs |S11|, |S22| < 1 (got {s11_mag}, {s22_mag})")]
    ActiveMismatch { s11_mag: f64, s22_mag: f64 },
    #[error("available gain {target} is not reachable (circle discriminant {discriminant} < 0)")]
    UnreachableGain { target: f64, discriminant: f64 },
    #[error("device is not unconditionally stable (K = {k}, |Δ| = {delta_mag}); maximum stable gain is {msg}")]
    ConditionallyStable { k: f64, delta_mag: f64, msg: f64 },
    #[error("device is unilateral; maximum unilateral transducer gain is {gtu_max}")]
    Unilateral { gtu_max: f64 },
}

pub fn to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn check_passive(gamma: Complex) -> Result<(), GainError> {
    let m = gamma.norm();
    if m < 1.0 {
        Ok(())
    } else {
        Err(GainError::InvalidTermination(m))
    }
}

/// `Γ_in = S11 + S12·S21·Γ_L / (1 - S22·Γ_L)`.
pub fn gamma_in(s: &TwoPortS, gamma_l: Complex) -> Result<Complex, GainError> {
    let den = 1.0 - s.s22 * gamma_l;
    if den.norm() <= TERMINATION_TOL {
        return Err(GainError::SingularTermination(format!(
            "1 - S22·Γ_L vanishes at Γ_L = {gamma_l}"
        )));
    }
    Ok(s.s11 + s.s12 * s.s21 * gamma_l / den)
}

/// `Γ_out = S22 + S12·S21·Γ_S / (1 - S11·Γ_S)`.
pub fn gamma_out(s: &TwoPortS, gamma_s: Complex) -> Result<Complex, GainError> {
    let den = 1.0 - s.s11 * gamma_s;
    if den.norm() <= TERMINATION_TOL {
        return Err(GainError::SingularTermination(format!(
            "1 - S11·Γ_S vanishes at Γ_S = {gamma_s}"
        )));
    }
    Ok(s.s22 + s.s12 * s.s21 * gamma_s / den)
}

/// Transducer power gain for passive source and load terminations.
pub fn transducer_gain(s: &TwoPortS, gamma_s: Complex, gamma_l: Complex) -> Result<f64, GainError> {
    check_passive(gamma_s)?;
    check_passive(gamma_l)?;
    let den = (1.0 - s.s11 * gamma_s) * (1.0 - s.s22 * gamma_l) - s.s12 * s.s21 * gamma_s * gamma_l;
    if den.norm() <= TERMINATION_TOL {
        return Err(GainError::SingularTermination(
            "transducer gain denominator vanishes".into(),
        ));
    }
    Ok((1.0 - gamma_s.norm_sqr()) * s.s21.norm_sqr() * (1.0 - gamma_l.norm_sqr()) / den.norm_sqr())
}

/// Transducer gain with S12 forced to zero.
pub fn unilateral_transducer_gain(
    s: &TwoPortS,
    gamma_s: Complex,
    gamma_l: Complex,
) -> Result<f64, GainError> {
    check_passive(gamma_s)?;
    check_passive(gamma_l)?;
    let ds = 1.0 - s.s11 * gamma_s;
    let dl = 1.0 - s.s22 * gamma_l;
    if ds.norm() <= TERMINATION_TOL || dl.norm() <= TERMINATION_TOL {
        return Err(GainError::SingularTermination(
            "unilateral gain denominator vanishes".into(),
        ));
    }
    Ok(
        (1.0 - gamma_s.norm_sqr()) / ds.norm_sqr() * s.s21.norm_sqr() * (1.0 - gamma_l.norm_sqr())
            / dl.norm_sqr(),
    )
}

/// Unilateral figure of merit and the bounds it places on `G_T / G_TU`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnilateralAssessment {
    pub u: f64,
    pub lower_bound: f64,
    /// Infinite when `u >= 1`.
    pub upper_bound: f64,
    pub lower_db: f64,
    pub upper_db: f64,
}

pub fn unilateral_assessment(s: &TwoPortS) -> Result<UnilateralAssessment, GainError> {
    let (m11, m22) = (s.s11.norm(), s.s22.norm());
    if m11 >= 1.0 || m22 >= 1.0 {
        return Err(GainError::ActiveMismatch {
            s11_mag: m11,
            s22_mag: m22,
        });
    }
    let u = m11 * s.s12.norm() * s.s21.norm() * m22 / ((1.0 - m11 * m11) * (1.0 - m22 * m22));
    let lower_bound = 1.0 / (1.0 + u).powi(2);
    let upper_bound = if u < 1.0 {
        1.0 / (1.0 - u).powi(2)
    } else {
        f64::INFINITY
    };
    Ok(UnilateralAssessment {
        u,
        lower_bound,
        upper_bound,
        lower_db: to_db(lower_bound),
        upper_db: to_db(upper_bound),
    })
}

/// Available power gain for source termination `gamma_s`, evaluated as
///
/// ```text
/// G_A = |S21|² (1 - |Γs|²) / ((1 - |(S22 - ΔΓs)/(1 - S11Γs)|²) |1 - S11Γs|²)
/// ```
pub fn available_gain(s: &TwoPortS, gamma_s: Complex) -> Result<f64, GainError> {
    check_passive(gamma_s)?;
    let delta = determinant(s);
    let den_in = 1.0 - s.s11 * gamma_s;
    if den_in.norm() <= TERMINATION_TOL {
        return Err(GainError::SingularTermination(format!(
            "1 - S11·Γ_S vanishes at Γ_S = {gamma_s}"
        )));
    }
    let out = (s.s22 - delta * gamma_s) / den_in;
    let den = (1.0 - out.norm_sqr()) * den_in.norm_sqr();
    if den.abs() <= TERMINATION_TOL {
        return Err(GainError::SingularTermination(format!(
            "|Γ_out| = 1 at Γ_S = {gamma_s}"
        )));
    }
    Ok(s.s21.norm_sqr() * (1.0 - gamma_s.norm_sqr()) / den)
}

/// Locus of source terminations with available gain `g_target` (linear).
pub fn available_gain_circle(s: &TwoPortS, g_target: f64) -> Result<SmithCircle, GainError> {
    let s21_sq = s.s21.norm_sqr();
    if !(g_target > 0.0 && g_target.is_finite()) || s21_sq == 0.0 {
        return Err(GainError::UnreachableGain {
            target: g_target,
            discriminant: f64::NAN,
        });
    }
    let delta = determinant(s);
    let ga = g_target / s21_sq;
    let c1 = s.s11 - delta * s.s22.conj();
    let loop_gain = (s.s12 * s.s21).norm();
    // 2·K·|S12 S21| written out so unilateral devices stay finite.
    let two_k_loop = 1.0 - s.s11.norm_sqr() - s.s22.norm_sqr() + delta.norm_sqr();
    let den = 1.0 + ga * (s.s11.norm_sqr() - delta.norm_sqr());
    if den.abs() <= TERMINATION_TOL {
        return Err(GainError::UnreachableGain {
            target: g_target,
            discriminant: f64::NAN,
        });
    }
    let mut disc = 1.0 - two_k_loop * ga + loop_gain * loop_gain * ga * ga;
    if disc < 0.0 {
        // Rounding at the maximum-gain point leaves tiny negative values.
        if disc > -1e-10 {
            disc = 0.0;
        } else {
            return Err(GainError::UnreachableGain {
                target: g_target,
                discriminant: disc,
            });
        }
    }
    let center = ga * c1.conj() / den;
    SmithCircle::new(center, disc.sqrt() / den.abs()).map_err(|_| GainError::UnreachableGain {
        target: g_target,
        discriminant: disc,
    })
}

/// `|S21|² / ((1 - |S11|²)(1 - |S22|²))`: the conjugately matched unilateral gain.
pub fn max_unilateral_gain(s: &TwoPortS) -> f64 {
    s.s21.norm_sqr() / ((1.0 - s.s11.norm_sqr()) * (1.0 - s.s22.norm_sqr()))
}

/// Maximum stable gain `|S21 / S12|`.
pub fn max_stable_gain(s: &TwoPortS) -> f64 {
    s.s21.norm() / s.s12.norm()
}

/// Maximum available gain `|S21/S12| (K - √(K² - 1))`.
///
/// Defined only for unconditionally stable devices (`K >= 1`, `|Δ| < 1`);
/// otherwise the error carries the maximum stable gain instead.
pub fn max_available_gain(s: &TwoPortS) -> Result<f64, GainError> {
    if (s.s12 * s.s21).norm() < UNILATERAL_TOL {
        return Err(GainError::Unilateral {
            gtu_max: max_unilateral_gain(s),
        });
    }
    let k = rollett_k(s);
    let delta_mag = determinant(s).norm();
    let msg = max_stable_gain(s);
    if !(k >= 1.0 && delta_mag < 1.0) {
        return Err(GainError::ConditionallyStable { k, delta_mag, msg });
    }
    Ok(msg * (k - (k * k - 1.0).sqrt()))
}
