//! Scaled complex exponential integral `e^z E1(z)`, needed for the Laplace
//! transform of the exponentially cut-off ohmic correlation function.
//!
//! Principal branch, cut along the negative real axis. On the cut the sign
//! of the imaginary zero selects the side: `+0.0` gives the limit from the
//! upper half-plane.

use crate::C64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `e^z E1(z)` for complex `z != 0`.
pub fn exp_e1(z: C64) -> C64 {
    let r = z.norm();
    if r <= 2.0 {
        return z.exp() * e1_series(z);
    }
    if r >= 40.0 {
        return exp_e1_asymptotic(z);
    }
    if z.re < 0.0 && z.im.abs() < z.re.abs() {
        // Near the cut the continued fraction converges slowly; the power
        // series loses at most exp(0.3 |z|) to cancellation here.
        return z.exp() * e1_series(z);
    }
    exp_e1_continued_fraction(z)
}

fn e1_series(z: C64) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    for k in 1..500 {
        term *= -z / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - z.ln() - sum
}

fn exp_e1_asymptotic(z: C64) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    let mut term = z.inv();
    for k in 1..60 {
        sum += term;
        let next = -term * (k as f64) / z;
        if next.norm() >= term.norm() || next.norm() < 1e-18 * sum.norm() {
            break;
        }
        term = next;
    }
    sum
}

/// Modified Lentz evaluation of
/// `1/(z+1- 1/(z+3- 4/(z+5- ...)))`.
fn exp_e1_continued_fraction(z: C64) -> C64 {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut cc = C64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..20_000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = (b + d * a).inv();
        cc = b + a / cc;
        if cc.norm() < tiny {
            cc = C64::new(tiny, 0.0);
        }
        let del = cc * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // E1(z) = int_1^inf e^{-z t}/t dt for Re z > 0, by substitution
    // t = 1/u: int_0^1 e^{-z/u} / u du; composite Gauss-Legendre.
    fn e1_quadrature(z: C64) -> C64 {
        let nodes = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.0, 0.568_888_888_888_888_9),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        // integrate over t in [1, 200] (tail negligible for Re z >= 0.5)
        let n = 20_000;
        let h = 199.0 / n as f64;
        let mut sum = C64::new(0.0, 0.0);
        for k in 0..n {
            let a = 1.0 + k as f64 * h;
            for (x, w) in nodes {
                let t = a + 0.5 * h * (x + 1.0);
                sum += (-z * t).exp() / t * (0.5 * h * w);
            }
        }
        sum
    }

    #[test]
    fn real_reference_values() {
        // E1(1) and Ei(1)
        let v = exp_e1(C64::new(1.0, 0.0)) * (-1.0f64).exp();
        assert!((v.re - 0.219_383_934_395_520_27).abs() < 1e-15);
        let v = exp_e1(C64::new(-1.0, 0.0)) * 1.0f64.exp();
        assert!((v.re + 1.895_117_816_355_936_8).abs() < 1e-14);
        assert!((v.im + std::f64::consts::PI).abs() < 1e-14);
        let v = exp_e1(C64::new(-1.0, -0.0)) * 1.0f64.exp();
        assert!((v.im - std::f64::consts::PI).abs() < 1e-14);
        // E1(10) = 4.156968929685324e-6
        let v = exp_e1(C64::new(10.0, 0.0)) * (-10.0f64).exp();
        assert!(((v.re - 4.156_968_929_685_324e-6) / 4.156_968_929_685_324e-6).abs() < 1e-13);
    }

    #[test]
    fn matches_quadrature_in_right_half_plane() {
        for z in [
            C64::new(0.5, 0.3),
            C64::new(1.5, -2.5),
            C64::new(3.0, 7.0),
            C64::new(0.7, -12.0),
            C64::new(25.0, 3.0),
        ] {
            let want = e1_quadrature(z) * z.exp();
            assert!(rel(exp_e1(z), want) < 1e-10, "z = {z}");
        }
    }

    #[test]
    fn continuous_across_region_boundaries() {
        for arg in [0.3f64, 1.2, 2.0, 2.35, 2.36, 2.9, -1.0, -2.5] {
            for r in [1.999, 2.001, 39.99, 40.01] {
                let z = C64::from_polar(r, arg);
                let a = exp_e1(z);
                let b = exp_e1(z * (1.0 + 1e-9));
                assert!(rel(a, b) < 1e-7, "r = {r}, arg = {arg}");
            }
        }
        // series vs continued fraction on overlapping ground; the series
        // loses about exp(|z| + Re z) ulps to cancellation
        for z in [C64::new(3.0, 1.0), C64::new(-2.5, 3.0), C64::new(5.0, -4.0)] {
            let s = z.exp() * e1_series(z);
            let cf = exp_e1_continued_fraction(z);
            let budget = 1e-15 * (z.norm() + z.re).exp();
            assert!(rel(s, cf) < budget.max(1e-12), "z = {z}: {}", rel(s, cf));
        }
    }
}
