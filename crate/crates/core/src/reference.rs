//! Reference device data.

use crate::touchstone::TwoPortS;

/// Design frequency of the reference low-noise amplifier.
pub const N420_FREQUENCY_HZ: f64 = 3.0e9;

/// Touchstone text of the reference transistor at 3 GHz, 50 Ω.
pub const N420_S2P: &str = include_str!("../data/n420.s2p");

/// Infineon N420 S-parameters at 3 GHz: S11 0.499∠151.5°, S21 4.426∠51.4°,
/// S12 0.084∠37.3°, S22 0.161∠−120.6°.
pub fn n420() -> TwoPortS {
    TwoPortS::from_polar_deg(
        (0.499, 151.5),
        (4.426, 51.4),
        (0.084, 37.3),
        (0.161, -120.6),
        50.0,
    )
    .expect("reference data is finite")
}
