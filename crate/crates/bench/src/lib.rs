//! Shared fixtures for the criterion benchmarks.

use ptbrach::{build_system, dilate, DilatedSystem, PTParams, PTSystem};

/// A generic point and one close to the exceptional point.
pub fn fixtures() -> Vec<(&'static str, PTSystem, DilatedSystem)> {
    [
        ("alpha=pi/6", PTParams::new(0.0, 1.0, std::f64::consts::FRAC_PI_6)),
        ("epsilon=0.01", PTParams::from_epsilon(0.0, 1.0, 0.01)),
    ]
    .into_iter()
    .map(|(name, p)| {
        let sys = build_system(p.expect("admitted")).expect("builds");
        let ds = dilate(&sys).expect("dilates");
        (name, sys, ds)
    })
    .collect()
}
