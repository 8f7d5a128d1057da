//! Log-Gamma and Euler Beta function.

use crate::error::{Error, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> T {
    debug_assert!(x > T::zero());
    if x < T::c(0.5) {
        // reflection keeps the Lanczos sum in its accurate range
        let pi = T::PI();
        return pi.ln() - (pi * x).sin().ln() - ln_gamma(T::one() - x);
    }
    if x >= T::c(10.0) {
        return stirling(x) + stirling_correction(x);
    }
    let x = x - T::one();
    let mut acc = T::c(LANCZOS_COEF[0]);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::c(c) / (x + T::from_usize_lossy(k));
    }
    let t = x + T::c(LANCZOS_G + 0.5);
    T::c(LN_SQRT_2PI) + (x + T::c(0.5)) * t.ln() - t + acc.ln()
}

fn stirling<T: Real>(x: T) -> T {
    (x - T::c(0.5)) * x.ln() - x + T::c(LN_SQRT_2PI)
}

/// `ln Γ(x) - stirling(x)` for `x >= 10`.
fn stirling_correction<T: Real>(x: T) -> T {
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv = x.recip();
    let inv2 = inv * inv;
    let mut acc = T::zero();
    for &c in C.iter().rev() {
        acc = acc * inv2 + T::c(c);
    }
    acc * inv
}

/// `ln B(a, b)`, arranged to avoid cancellation when either argument is large.
pub fn ln_beta<T: Real>(a: T, b: T) -> Result<T> {
    if !(a > T::zero()) || !(b > T::zero()) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "beta requires positive finite arguments, got ({a}, {b})"
        )));
    }
    let (p, q) = if a < b { (a, b) } else { (b, a) };
    let ten = T::c(10.0);
    let s = p + q;
    let v = if p >= ten {
        let corr = stirling_correction(p) + stirling_correction(q) - stirling_correction(s);
        -T::c(0.5) * q.ln()
            + T::c(LN_SQRT_2PI)
            + corr
            + (p - T::c(0.5)) * (p / s).ln()
            + q * (-p / s).ln_1p()
    } else if q >= ten {
        let corr = stirling_correction(q) - stirling_correction(s);
        ln_gamma(p) + corr + p - p * s.ln() + (q - T::c(0.5)) * (-p / s).ln_1p()
    } else {
        ln_gamma(p) + ln_gamma(q) - ln_gamma(s)
    };
    Ok(v)
}

/// Euler Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta<T: Real>(a: T, b: T) -> Result<T> {
    ln_beta(a, b).map(T::exp)
}
