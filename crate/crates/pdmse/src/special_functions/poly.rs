use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::C64;

/// Exact bivariate polynomial in (y, Lambda) with rational coefficients.
///
/// Keys are (degree in y, degree in Lambda); zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    coeffs: BTreeMap<(u32, u32), BigRational>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    dy: u32,
    #[serde(rename = "dL")]
    dl: u32,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::default();
        p.add_term(0, 0, c);
        p
    }

    /// Monomial c * y^dy * Lambda^dl.
    pub fn term(dy: u32, dl: u32, c: BigRational) -> Self {
        let mut p = Self::default();
        p.add_term(dy, dl, c);
        p
    }

    pub fn term_i64(dy: u32, dl: u32, c: i64) -> Self {
        Self::term(dy, dl, BigRational::from_integer(BigInt::from(c)))
    }

    fn add_term(&mut self, dy: u32, dl: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry((dy, dl)).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&(dy, dl));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, dy: u32, dl: u32) -> BigRational {
        self.coeffs.get(&(dy, dl)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.coeffs.iter()
    }

    pub fn degree_y(&self) -> u32 {
        self.coeffs.keys().map(|&(dy, _)| dy).max().unwrap_or(0)
    }

    pub fn degree_lambda(&self) -> u32 {
        self.coeffs.keys().map(|&(_, dl)| dl).max().unwrap_or(0)
    }

    /// Partial derivative with respect to y.
    pub fn diff_y(&self) -> Self {
        let mut out = Self::default();
        for (&(dy, dl), c) in &self.coeffs {
            if dy > 0 {
                out.add_term(dy - 1, dl, c * BigRational::from_integer(BigInt::from(dy)));
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::default();
        for (&k, v) in &self.coeffs {
            out.add_term(k.0, k.1, v * c);
        }
        out
    }

    /// Specialize Lambda = 0, returning the coefficient vector in y.
    pub fn at_lambda_zero(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree_y() as usize + 1];
        for (&(dy, dl), c) in &self.coeffs {
            if dl == 0 {
                v[dy as usize] = c.clone();
            }
        }
        v
    }

    pub fn eval_f64(&self, y: f64, lambda: f64) -> f64 {
        let mut acc = 0.0;
        for (&(dy, dl), c) in &self.coeffs {
            acc += rational_to_f64(c) * y.powi(dy as i32) * lambda.powi(dl as i32);
        }
        acc
    }

    pub fn eval_complex(&self, y: C64, lambda: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for (&(dy, dl), c) in &self.coeffs {
            acc += rational_to_f64(c) * y.powu(dy) * lambda.powu(dl);
        }
        acc
    }

    /// Exact division by a univariate polynomial in Lambda (coefficients
    /// `divisor[j]` multiply Lambda^j). Returns None when the division
    /// leaves a remainder.
    pub fn div_exact_lambda(&self, divisor: &[BigRational]) -> Option<Self> {
        let dlead = divisor.iter().rposition(|c| !c.is_zero())?;
        let lead = &divisor[dlead];
        let mut out = Self::default();
        // divide the Lambda-polynomial attached to each power of y
        for dy in 0..=self.degree_y() {
            let mut num: Vec<BigRational> = (0..=self.degree_lambda())
                .map(|dl| self.coeff(dy, dl))
                .collect();
            let mut quo: Vec<BigRational> = Vec::new();
            while let Some(nlead) = num.iter().rposition(|c| !c.is_zero()) {
                if nlead < dlead {
                    return None;
                }
                let q = &num[nlead] / lead;
                let shift = nlead - dlead;
                for (j, d) in divisor.iter().enumerate().take(dlead + 1) {
                    num[shift + j] = &num[shift + j] - &q * d;
                }
                if quo.len() <= shift {
                    quo.resize(shift + 1, BigRational::zero());
                }
                quo[shift] = q;
            }
            for (dl, c) in quo.into_iter().enumerate() {
                out.add_term(dy, dl as u32, c);
            }
        }
        Some(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .coeffs
            .iter()
            .map(|(&(dy, dl), c)| TermJson {
                dy,
                dl,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        serde_json::to_value(PolyJson { terms }).expect("poly serialization")
    }

    pub fn from_json(v: &serde_json::Value) -> Option<Self> {
        let pj: PolyJson = serde_json::from_value(v.clone()).ok()?;
        let mut p = Self::default();
        for t in pj.terms {
            let num: BigInt = t.num.parse().ok()?;
            let den: BigInt = t.den.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            p.add_term(t.dy, t.dl, BigRational::new(num, den));
        }
        Some(p)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    // exact for the coefficient sizes used here; falls back to string
    // parsing for very large integers
    let num = r.numer();
    let den = r.denom();
    match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
        (Ok(n), Ok(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            // scale both down by a common power of two via bit length
            let shift = (num.bits().max(den.bits()) as i64 - 900).max(0) as u64;
            let n = num >> shift;
            let d = den >> shift;
            let nf: f64 = n.to_string().parse().unwrap_or(f64::NAN);
            let df: f64 = d.to_string().parse().unwrap_or(f64::NAN);
            nf / df
        }
    }
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: Self) -> BivariatePoly {
        let mut out = self.clone();
        for (&k, v) in &rhs.coeffs {
            out.add_term(k.0, k.1, v.clone());
        }
        out
    }
}

impl Sub for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: Self) -> BivariatePoly {
        let mut out = self.clone();
        for (&k, v) in &rhs.coeffs {
            out.add_term(k.0, k.1, -v.clone());
        }
        out
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: Self) -> BivariatePoly {
        let mut out = BivariatePoly::default();
        for (&(ay, al), ac) in &self.coeffs {
            for (&(by, bl), bc) in &rhs.coeffs {
                out.add_term(ay + by, al + bl, ac * bc);
            }
        }
        out
    }
}

impl BivariatePoly {
    /// Absolute value of the largest coefficient, as f64 (diagnostics).
    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| rational_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }
}
