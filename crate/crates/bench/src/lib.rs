//! Fixtures shared by the benchmarks.

use lna_core::reference::n420;
use lna_core::touchstone::SweepPoint;
use lna_core::{
    polar_deg, serialize_touchstone, DataFormat, NoiseParameters, SweepTable, TwoPortS,
};

/// A smooth synthetic sweep of `n` points from 1 to 6 GHz around the
/// reference device.
pub fn synthetic_sweep(n: usize) -> SweepTable {
    let base = n420();
    let points = (0..n)
        .map(|i| {
            let t = i as f64 / (n.max(2) - 1) as f64;
            let f = 1e9 + 5e9 * t;
            let rot = polar_deg(1.0, -60.0 * (t - 0.4));
            let s = TwoPortS::new(
                base.s11 * rot,
                base.s12 * (0.8 + 0.4 * t),
                base.s21 * rot * (1.3 - 0.5 * t),
                base.s22 * rot,
                50.0,
            )
            .expect("finite entries");
            SweepPoint { frequency_hz: f, s }
        })
        .collect();
    SweepTable::new(points, 50.0).expect("monotonic sweep")
}

pub fn synthetic_s2p(n: usize) -> String {
    serialize_touchstone(&synthetic_sweep(n), DataFormat::Ma)
}

pub fn noise_parameters() -> NoiseParameters {
    NoiseParameters::new(1.15, 0.2, polar_deg(0.5, 150.0)).expect("valid noise parameters")
}
