//! Standard normal density, distribution function and quantile.
//!
//! The distribution function goes through a rational-approximation erfc
//! (Cody's CALERF coefficients) so that both tails keep full relative
//! accuracy; the quantile uses Acklam's approximation polished by Newton
//! steps against the erfc-based tail.

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// Standard normal density φ(x).
#[inline]
pub fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function Φ(x).
#[inline]
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal survival function 1 − Φ(x), accurate in the upper tail.
#[inline]
pub fn std_normal_sf(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

// Cody rational approximations for erf/erfc, |relative error| < 1e-15.
const ERF_A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const ERF_B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];
const ERF_C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const ERF_D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];
const ERF_P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const ERF_Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];
const SQRT_PI_INV: f64 = 5.641_895_835_477_563e-1; // 1/sqrt(pi)

fn erf_small(x: f64) -> f64 {
    // |x| <= 0.46875
    let z = x * x;
    let mut num = ERF_A[4] * z;
    let mut den = z;
    for i in 0..3 {
        num = (num + ERF_A[i]) * z;
        den = (den + ERF_B[i]) * z;
    }
    x * (num + ERF_A[3]) / (den + ERF_B[3])
}

fn erfc_mid(y: f64) -> f64 {
    // 0.46875 <= y <= 4
    let mut num = ERF_C[8] * y;
    let mut den = y;
    for i in 0..7 {
        num = (num + ERF_C[i]) * y;
        den = (den + ERF_D[i]) * y;
    }
    let r = (num + ERF_C[7]) / (den + ERF_D[7]);
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * r
}

fn erfc_large(y: f64) -> f64 {
    // y > 4
    let z = 1.0 / (y * y);
    let mut num = ERF_P[5] * z;
    let mut den = z;
    for i in 0..4 {
        num = (num + ERF_P[i]) * z;
        den = (den + ERF_Q[i]) * z;
    }
    let mut r = z * (num + ERF_P[4]) / (den + ERF_Q[4]);
    r = (SQRT_PI_INV - r) / y;
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp() * r
}

/// Complementary error function, full relative accuracy for positive arguments.
pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= 0.46875 {
        return 1.0 - erf_small(x);
    }
    let tail = if y <= 4.0 { erfc_mid(y) } else { erfc_large(y) };
    if x < 0.0 {
        2.0 - tail
    } else {
        tail
    }
}

// Acklam's rational approximation to the normal quantile, |rel err| < 1.2e-9.
fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

/// Standard normal quantile Φ⁻¹(p) for p in (0, 1).
///
/// Acklam's approximation refined with two Newton steps against the
/// tail-accurate distribution function, so that Φ(Φ⁻¹(p)) = p to
/// near machine precision across the whole open interval.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "normal quantile requires p in (0,1), got {p}"
        )));
    }
    let mut x = acklam(p);
    for _ in 0..2 {
        let dens = std_normal_pdf(x);
        if dens == 0.0 {
            break;
        }
        // Residual Φ(x) − p, evaluated in whichever tail is accurate.
        let resid = if p <= 0.5 {
            std_normal_cdf(x) - p
        } else {
            (1.0 - p) - std_normal_sf(x)
        };
        x -= resid / dens;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Simpson-rule oracle for ∫₀ᵇ φ(x) dx, independent of the erfc path.
    fn simpson_phi(b: f64, n: usize) -> f64 {
        let h = b / n as f64;
        let mut s = std_normal_pdf(0.0) + std_normal_pdf(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * std_normal_pdf(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn cdf_at_zero_is_half() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
    }

    #[test]
    fn cdf_upper_tail() {
        // 1 − Φ(10) < 1e-23
        assert!(std_normal_sf(10.0) < 1e-23);
        assert!(std_normal_sf(10.0) > 0.0);
        assert!(std_normal_cdf(10.0) <= 1.0);
    }

    #[test]
    fn cdf_matches_quadrature_oracle() {
        // Φ(1.96) computed by high-resolution Simpson quadrature of the density.
        let oracle = 0.5 + simpson_phi(1.96, 20_000);
        assert!((std_normal_cdf(1.96) - oracle).abs() < 1e-13);
        assert!((std_normal_cdf(1.96) - 0.975_002_104_851_78).abs() < 1e-11);
    }

    #[test]
    fn cdf_monotone() {
        let mut prev = 0.0;
        for i in -600..=600 {
            let v = std_normal_cdf(i as f64 * 0.01);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn quantile_at_half_is_zero() {
        assert_eq!(std_normal_quantile(0.5).unwrap(), 0.0);
    }

    #[test]
    fn quantile_symmetry() {
        // dyadic p so that 1 - p is exactly representable and the mirror
        // identity is testable at full precision
        for &p in &[0.25, 0.125, 0.0009765625, 9.313225746154785e-10] {
            let a = std_normal_quantile(p).unwrap();
            let b = std_normal_quantile(1.0 - p).unwrap();
            assert!((a + b).abs() < 1e-12, "p={p}: {a} vs {b}");
        }
    }

    #[test]
    fn quantile_matches_bisection_oracle() {
        // Invert the cdf by plain bisection, independently of Acklam/Newton.
        let p = 0.975;
        let (mut lo, mut hi) = (0.0, 4.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if std_normal_cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let q = std_normal_quantile(p).unwrap();
        assert!((q - oracle).abs() < 1e-12);
        assert!((q - 1.959_963_984_540_054).abs() < 1e-12);
    }

    #[test]
    fn quantile_roundtrip_fine_grid() {
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            let x = std_normal_quantile(p).unwrap();
            assert!(
                (std_normal_cdf(x) - p).abs() < 1e-12,
                "p={p} x={x} cdf={}",
                std_normal_cdf(x)
            );
        }
        // deep tails round-trip in the accurate direction
        for &p in &[1e-300, 1e-60, 1e-12, 1.0 - 1e-12] {
            let x = std_normal_quantile(p).unwrap();
            let back = if p <= 0.5 {
                std_normal_cdf(x)
            } else {
                1.0 - std_normal_sf(x)
            };
            assert!(
                (back - p).abs() <= 1e-10 * p.max(1e-320) + 1e-300,
                "p={p} back={back}"
            );
        }
    }

    #[test]
    fn quantile_rejects_out_of_range() {
        assert!(std_normal_quantile(0.0).is_err());
        assert!(std_normal_quantile(1.0).is_err());
        assert!(std_normal_quantile(-0.2).is_err());
        assert!(std_normal_quantile(f64::NAN).is_err());
    }
}
