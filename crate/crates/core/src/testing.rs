//! Random device generators for unit tests.

use rand::Rng;

use crate::complex::polar_deg;
use crate::stability::stability_report;
use crate::touchstone::TwoPortS;

pub use crate::reference::n420;

/// Random S-matrix with every |Sij| ≤ `max_mag` (S21 up to 5x that).
pub fn random_device(rng: &mut impl Rng, max_mag: f64) -> TwoPortS {
    let mut p = |scale: f64| {
        polar_deg(
            rng.gen_range(0.0..max_mag * scale),
            rng.gen_range(-180.0..180.0),
        )
    };
    let s11 = p(1.0);
    let s12 = p(1.0);
    let s21 = p(1.0);
    let s22 = p(1.0);
    TwoPortS::new(s11, s12, s21, s22, 50.0).unwrap()
}

/// Unconditionally stable device with transistor-like magnitudes, K > 1.001.
pub fn random_stable_device(rng: &mut impl Rng) -> TwoPortS {
    loop {
        let mut p =
            |lo: f64, hi: f64| polar_deg(rng.gen_range(lo..hi), rng.gen_range(-180.0..180.0));
        let s = TwoPortS::new(p(0.05, 0.9), p(0.01, 0.2), p(0.5, 6.0), p(0.05, 0.9), 50.0).unwrap();
        let r = stability_report(&s);
        if r.unconditional && r.k > 1.001 {
            return s;
        }
    }
}
