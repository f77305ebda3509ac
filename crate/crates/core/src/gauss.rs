//! Standard-normal functions and the truncated-Gaussian corrections used by
//! the TrueSkill updates.
//!
//! The `v`/`w` functions return the mean shift and the relative variance
//! reduction of a unit Gaussian centred at `t` after truncation: to `(a, ∞)`
//! for a win, to `(-a, a)` for a draw.

use core::f64::consts::FRAC_1_SQRT_2;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Beyond this distance into the lower tail the direct ratio `pdf/cdf` is
/// replaced by the continued fraction for the Mills ratio.
const TAIL_SWITCH: f64 = 30.0;
const CF_TERMS: u32 = 60;

/// Mean and variance of a univariate Gaussian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub mean: f64,
    pub variance: f64,
}

impl Gaussian {
    pub fn new(mean: f64, std_dev: f64) -> Self {
        Self { mean, variance: std_dev * std_dev }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

pub fn std_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn std_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Φ(x)` without cancellation.
pub fn std_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Quantile of the standard normal.
///
/// Acklam's rational approximation followed by one Newton step on the
/// lower-tail form.
pub fn std_inv_cdf(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if p > 0.5 {
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] =
        [-5.447_609_879_822_406e1, 1.615_858_368_580_409e2, -1.556_989_798_598_866e2, 6.680_131_188_771_972e1, -1.328_068_155_288_572e1];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [7.784_695_709_041_462e-3, 3.224_671_290_700_398e-1, 2.445_134_137_142_996, 3.754_408_661_907_416];
    const P_LOW: f64 = 0.024_25;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    let density = std_pdf(x);
    if density > 0.0 {
        x - (std_cdf(x) - p) / density
    } else {
        x
    }
}

/// Mills ratio `(1 - Φ(z)) / φ(z)`.
pub fn mills_ratio(z: f64) -> f64 {
    if z >= TAIL_SWITCH {
        return 1.0 / (z + mills_tail(z));
    }
    let density = std_pdf(z);
    if density == 0.0 {
        return f64::INFINITY;
    }
    std_sf(z) / density
}

/// The inner continued fraction `1/(z + 2/(z + 3/(z + …)))`, so that the Mills
/// ratio is `1/(z + mills_tail(z))`.
fn mills_tail(z: f64) -> f64 {
    let mut acc = z;
    for k in (3..=CF_TERMS).rev() {
        acc = z + f64::from(k) / acc;
    }
    1.0 / (z + 2.0 / acc)
}

/// Win-case corrections `(v, w)` at `t - a`.
fn win_corrections(x: f64) -> (f64, f64) {
    if x < -TAIL_SWITCH {
        // v = pdf(x)/cdf(x) = z + K with z = -x; then v + x = K.
        let z = -x;
        let k = mills_tail(z);
        let v = z + k;
        return (v, v * k);
    }
    let v = std_pdf(x) / std_cdf(x);
    (v, v * (v + x))
}

/// Mean shift for a win with performance difference `t` and margin `a`.
pub fn v_win(t: f64, a: f64) -> f64 {
    win_corrections(t - a).0
}

/// Variance reduction factor for a win; always in `[0, 1)`.
pub fn w_win(t: f64, a: f64) -> f64 {
    win_corrections(t - a).1
}

/// Draw-case corrections `(v, w)`, computed on `u = |t|` with Mills ratios so
/// that neither tail underflows.
fn draw_corrections(t: f64, a: f64) -> Result<(f64, f64)> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(a > 0.0) {
        return Err(Error::NonPositiveMargin(a));
    }
    let u = t.abs();
    let decay = (-2.0 * u * a).exp();
    let denom = mills_ratio(u - a) - mills_ratio(u + a) * decay;
    let magnitude = (1.0 - decay) / denom;
    let v = if t > 0.0 { -magnitude } else { magnitude };
    let w = v * v + ((a + u) * decay + (a - u)) / denom;
    Ok((v, w))
}

/// Mean shift for a draw; odd in `t`.
pub fn v_draw(t: f64, a: f64) -> Result<f64> {
    draw_corrections(t, a).map(|(v, _)| v)
}

/// Variance reduction factor for a draw; even in `t`.
pub fn w_draw(t: f64, a: f64) -> Result<f64> {
    draw_corrections(t, a).map(|(_, w)| w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn closed_form_points() {
        assert_eq!(std_cdf(0.0), 0.5);
        assert!(close(std_pdf(0.0), 1.0 / (2.0 * core::f64::consts::PI).sqrt(), 1e-16));
        assert!(close(std_inv_cdf(0.975).unwrap(), 1.959_963_984_540_054, 1e-12));
        assert!(close(std_cdf(1.0), 0.841_344_746_068_542_9, 1e-15));
    }

    #[test]
    fn inv_cdf_rejects_outside_unit_interval() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(std_inv_cdf(p).is_err());
        }
    }

    #[test]
    fn inv_cdf_round_trip() {
        let mut x = -8.0;
        while x <= 0.0 {
            let back = std_inv_cdf(std_cdf(x)).unwrap();
            assert!(close(back, x, 1e-9), "x={x} back={back}");
            x += 0.01;
        }
        for k in 1..1024 {
            let p = f64::from(k) / 1024.0;
            assert_eq!(std_inv_cdf(1.0 - p).unwrap(), -std_inv_cdf(p).unwrap());
        }
    }

    #[test]
    fn win_corrections_at_origin() {
        assert!(close(v_win(0.0, 0.0), 0.797_884_560_802_865_4, 1e-12));
        assert!(close(w_win(0.0, 0.0), core::f64::consts::FRAC_2_PI, 1e-12));
    }

    #[test]
    fn win_corrections_vanish_far_ahead() {
        assert!(v_win(40.0, 0.0) < 1e-300);
        assert!(w_win(40.0, 0.0) < 1e-300);
        assert!(v_win(10.0, 0.0) < 1e-20);
    }

    #[test]
    fn win_tail_is_continuous_across_switch() {
        for x in [-TAIL_SWITCH + 1e-9, -25.0, -20.0] {
            let (v, w) = win_corrections(x);
            let k = mills_tail(-x);
            assert!(close(v, -x + k, 1e-10), "x={x}");
            assert!(close(w, (-x + k) * k, 1e-10), "x={x}");
        }
        let (v, w) = win_corrections(-1e6);
        assert!(v > 0.0 && w > 0.0 && w < 1.0);
    }

    #[test]
    fn draw_corrections_known_values() {
        assert_eq!(v_draw(0.0, 1.0).unwrap(), 0.0);
        assert!(close(w_draw(0.0, 1.0).unwrap(), 0.708_874_905_227_206_8, 1e-12));
        assert!(close(v_draw(0.5, 1.0).unwrap(), -0.356_272_884_177_059_7, 1e-12));
        assert!(close(w_draw(0.5, 1.0).unwrap(), 0.719_751_849_848_774_9, 1e-12));
        assert_eq!(v_draw(0.5, 1.0).unwrap(), -v_draw(-0.5, 1.0).unwrap());
    }

    #[test]
    fn draw_requires_positive_margin() {
        assert_eq!(v_draw(0.0, 0.0), Err(Error::NonPositiveMargin(0.0)));
        assert!(w_draw(1.0, -1.0).is_err());
    }

    #[test]
    fn draw_far_tails_stay_finite() {
        for t in [-60.0, -20.0, 20.0, 60.0] {
            let (v, w) = draw_corrections(t, 0.5).unwrap();
            assert!(v.is_finite() && w.is_finite(), "t={t}");
            assert!(w > 0.0 && w < 1.0, "t={t} w={w}");
        }
    }
}
