use crate::{Error, Result, C64};

// Lanczos approximation, g = 7, 9 coefficients.
const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn lanczos_log_gamma(z: C64) -> C64 {
    // valid for Re z >= 0.5; argument shifted so the series sees z-1
    let zm1 = z - 1.0;
    let mut acc = C64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    let t = zm1 + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (zm1 + 0.5) * t.ln() - t + acc.ln()
}

/// Principal-branch log Gamma(z) for complex z.
///
/// Errors with [`Error::GammaPole`] at the poles z = 0, -1, -2, ...
pub fn log_gamma(z: C64) -> Result<C64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::GammaPole(z));
    }
    if z.re >= 0.5 {
        Ok(lanczos_log_gamma(z))
    } else {
        // reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        let pi = std::f64::consts::PI;
        let sin_piz = (pi * z).sin();
        Ok(C64::new(pi, 0.0).ln() - sin_piz.ln() - lanczos_log_gamma(1.0 - z))
    }
}

/// Pochhammer symbol (a)_n = a (a+1) ... (a+n-1), computed as a finite
/// product so poles of Gamma are harmless.
pub fn pochhammer(a: C64, n: usize) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    for k in 0..n {
        p *= a + k as f64;
    }
    p
}
