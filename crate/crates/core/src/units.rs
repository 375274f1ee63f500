//! GHz <-> rad/ps conversion. User-facing GHz values are ordinary
//! frequencies: omega = 2 pi nu * 1e-3 rad/ps.

use std::f64::consts::TAU;

pub fn ghz_to_rad_per_ps(nu_ghz: f64) -> f64 {
    TAU * nu_ghz * 1e-3
}

pub fn rad_per_ps_to_ghz(omega: f64) -> f64 {
    omega / TAU * 1e3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_ghz() {
        // 2 pi * 6e-3 = 0.0376991...
        let w = ghz_to_rad_per_ps(6.0);
        assert!((w - 0.037_699_111_843_077_52).abs() < 1e-15);
        assert!((w - 0.0377).abs() < 1e-4);
        assert!((rad_per_ps_to_ghz(w) - 6.0).abs() < 1e-12);
    }
}
