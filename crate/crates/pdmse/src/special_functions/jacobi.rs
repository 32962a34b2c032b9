use crate::{Error, Result, C64};

const MAX_DEGREE: usize = 64;

/// Jacobi polynomial P_n^{(alpha,beta)}(x) with complex parameters and
/// argument.
///
/// Uses the three-term degree recurrence; when a recurrence divisor
/// 2m(m+alpha+beta)(2m+alpha+beta-2) vanishes for some intermediate degree
/// (possible for the complex parameter families used here), falls back to
/// the explicit binomial sum, which has no singular denominators.
pub fn jacobi_eval(n: usize, alpha: C64, beta: C64, x: C64) -> Result<C64> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeLimit(n, MAX_DEGREE));
    }
    let ab = alpha + beta;
    let scale = 1.0 + ab.norm();
    for m in 2..=n {
        let d1 = ab + m as f64;
        let d2 = ab + (2 * m) as f64 - 2.0;
        if d1.norm() < 1e-9 * scale || d2.norm() < 1e-9 * scale {
            return Ok(binomial_sum(n, alpha, beta, x));
        }
    }
    Ok(recurrence(n, alpha, beta, x))
}

fn recurrence(n: usize, alpha: C64, beta: C64, x: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    if n == 0 {
        return one;
    }
    let ab = alpha + beta;
    let mut pm1 = one;
    let mut p = (alpha - beta) / 2.0 + (one + ab / 2.0) * x;
    for m in 2..=n {
        let mf = m as f64;
        let c1 = 2.0 * mf * (ab + mf) * (ab + 2.0 * mf - 2.0);
        let c2 = (ab + 2.0 * mf - 1.0) * (alpha * alpha - beta * beta);
        let c3 = (ab + 2.0 * mf - 2.0) * (ab + 2.0 * mf - 1.0) * (ab + 2.0 * mf);
        let c4 = 2.0 * (alpha + mf - 1.0) * (beta + mf - 1.0) * (ab + 2.0 * mf);
        let next = ((c2 + c3 * x) * p - c4 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    p
}

// P_n^{(a,b)}(x) = 2^{-n} sum_k C(n+a, k) C(n+b, n-k) (x-1)^{n-k} (x+1)^k
fn binomial_sum(n: usize, alpha: C64, beta: C64, x: C64) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..=n {
        let t = complex_binom(alpha + n as f64, k)
            * complex_binom(beta + n as f64, n - k)
            * (x - 1.0).powu((n - k) as u32)
            * (x + 1.0).powu(k as u32);
        sum += t;
    }
    sum / 2.0f64.powi(n as i32)
}

fn complex_binom(a: C64, k: usize) -> C64 {
    let mut p = C64::new(1.0, 0.0);
    for j in 0..k {
        p *= (a - j as f64) / (j + 1) as f64;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_is_one() {
        let v = jacobi_eval(0, C64::new(2.5, 1.0), C64::new(-0.5, 0.0), C64::new(0.3, 0.7));
        assert_eq!(v.unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn degree_one_closed_form() {
        let (a, b, x) = (C64::new(1.5, 0.5), C64::new(-0.5, -0.25), C64::new(0.4, 0.1));
        let expect = (a - b) / 2.0 + (C64::new(1.0, 0.0) + (a + b) / 2.0) * x;
        let v = jacobi_eval(1, a, b, x).unwrap();
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn recurrence_matches_binomial_sum() {
        let (a, b, x) = (C64::new(0.7, 0.2), C64::new(1.3, -0.4), C64::new(0.25, 0.5));
        for n in 0..10 {
            let r = recurrence(n, a, b, x);
            let s = binomial_sum(n, a, b, x);
            assert!((r - s).norm() < 1e-10 * (1.0 + r.norm()), "n = {n}: {r} vs {s}");
        }
    }

    #[test]
    fn degree_limit_guard() {
        assert!(jacobi_eval(65, C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.5, 0.0)).is_err());
    }
}
