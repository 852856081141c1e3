#![allow(dead_code)]

use lna_core::complex::polar_deg;
use lna_core::stability::stability_report;
use lna_core::{NoiseParameters, TwoPortS};
use rand::Rng;

pub fn random_device(rng: &mut impl Rng, max_mag: f64) -> TwoPortS {
    let mut p = || polar_deg(rng.gen_range(0.0..max_mag), rng.gen_range(-180.0..180.0));
    let (s11, s12, s21, s22) = (p(), p(), p(), p());
    TwoPortS::new(s11, s12, s21, s22, 50.0).unwrap()
}

/// Transistor-like unconditionally stable device (K > 1.001).
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

pub fn random_noise_parameters(rng: &mut impl Rng) -> NoiseParameters {
    NoiseParameters::new(
        rng.gen_range(1.0..3.0),
        rng.gen_range(0.02..1.5),
        polar_deg(rng.gen_range(0.0..0.9), rng.gen_range(-180.0..180.0)),
    )
    .unwrap()
}
