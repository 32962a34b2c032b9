//! Quasi-exactly-solvable sextic-csch family: b -> c parameter maps,
//! constraint (cubic) solving, closed-form energies and wavefunctions for
//! the three ansatz cases, and residual verification.
//!
//! The coefficients and energy of every solution come from an independent
//! substitute-and-collect oracle: with u = csch(x sqrt(lambda)) / sqrt(lambda)
//! and psi = f(u) exp(-g(u)), the transformed problem is the flat operator
//! -1/2 psi'' + V(u) psi = E psi on u > 0, and collecting powers of u in
//! (1/2)(f'' - 2 f' g' + f (g'^2 - g'')) / f fixes c_1..c_6 and E. The
//! printed relations are compared against the oracle and any mismatch is
//! emitted as a discrepancy record, never silently corrected. Known records:
//! the ground-state exponent prints csch^1/(4 lambda^2) where the oracle
//! forces csch^4/(4 lambda^2); the case-2 c_1 really does carry the root
//! a_0 (confirmed, not a typo); the case-2 printed energy drops a 2 b_1/a_0
//! term when b_1 != 0; the case-3 c_4 prints 2 b_2 + 9/2 for
//! 2 b_2 + (9/2) b_3^2; and the case-3 branch labels pair a_0+- with the
//! opposite printed energy sign.

use crate::numerics::{second_derivative, Coordinate, Grid, GridFunction};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QesCase {
    C1,
    C2a,
    C2b,
    C3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
    None,
}

#[derive(Debug, Clone, Copy)]
pub struct QesConfig {
    pub case: QesCase,
    pub b1: C64,
    pub b2: C64,
    pub b3: C64,
    /// Fixed to 1/4 by c6 = 1/2 and normalizability.
    pub b4: f64,
    pub lambda: f64,
}

impl QesConfig {
    pub fn new(case: QesCase, b1: C64, b2: C64, b3: C64, lambda: f64) -> Result<Self> {
        if lambda <= 0.0 {
            return Err(Error::Config("QES family needs lambda > 0".into()));
        }
        let zero = |v: C64| v.norm() < 1e-14;
        match case {
            QesCase::C2a if !(zero(b1) && zero(b3)) => {
                return Err(Error::Constraint("case 2a forces b1 = b3 = 0".into()))
            }
            QesCase::C2b if !zero(b1) => {
                return Err(Error::Constraint("case 2b forces b1 = 0".into()))
            }
            QesCase::C3 if !zero(b1) => {
                // b1 is determined by (b2, b3) in case 3
                return Err(Error::Constraint("case 3 derives b1 from (b2, b3)".into()));
            }
            _ => {}
        }
        Ok(QesConfig { case, b1, b2, b3, b4: 0.25, lambda })
    }
}

#[derive(Debug, Clone)]
pub struct DiscrepancyRecord {
    pub equation: String,
    pub printed: String,
    pub derived: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct QesSolution {
    pub c: [C64; 6],
    pub e: C64,
    pub a0: C64,
    pub a1: C64,
    pub branch: Branch,
    pub b: [C64; 4],
    /// The polynomial factor f of psi = f(u) e^{-g(u)}, low power first.
    pub f: Vec<C64>,
    /// Remainder norm of the substitute-and-collect division; ~0 when the
    /// constraint equations are satisfied.
    pub constraint_residual: f64,
    pub discrepancies: Vec<DiscrepancyRecord>,
}

// --- dense complex polynomials in u (index = power) ---

fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

fn poly_diff(a: &[C64]) -> Vec<C64> {
    if a.len() <= 1 {
        return vec![C64::new(0.0, 0.0)];
    }
    (1..a.len()).map(|i| a[i] * (i as f64)).collect()
}

// divide by a monic polynomial; returns (quotient, remainder)
fn poly_divrem(num: &[C64], den: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let d = den.len() - 1;
    let mut rem = num.to_vec();
    if rem.len() <= d {
        return (vec![C64::new(0.0, 0.0)], rem);
    }
    let mut quot = vec![C64::new(0.0, 0.0); rem.len() - d];
    for i in (d..rem.len()).rev() {
        let q = rem[i];
        quot[i - d] = q;
        for j in 0..=d {
            rem[i - d + j] -= q * den[j];
        }
    }
    rem.truncate(d.max(1));
    (quot, rem)
}

fn poly_eval(a: &[C64], u: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &coeff in a.iter().rev() {
        acc = acc * u + coeff;
    }
    acc
}

/// Substitute psi = f e^{-g} into -1/2 psi'' + (V - E) psi = 0 and collect:
/// (V - E) f = 1/2 (f'' - 2 f' g' + f (g'^2 - g'')). Division by f yields
/// V - E (so c_k and E); the remainder is the constraint on the f roots.
fn collect(f: &[C64], b: &[C64; 4]) -> (Vec<C64>, Vec<C64>) {
    let g: Vec<C64> = vec![C64::new(0.0, 0.0), b[0], b[1], b[2], b[3]];
    let gp = poly_diff(&g);
    let gpp = poly_diff(&gp);
    let fp = poly_diff(f);
    let fpp = poly_diff(&fp);
    let mut n = poly_sub(&fpp, &poly_mul(&poly_mul(&[C64::new(2.0, 0.0)], &fp), &gp));
    n = poly_sub(&n, &poly_mul(f, &poly_sub(&gpp, &poly_mul(&gp, &gp))));
    for v in n.iter_mut() {
        *v *= 0.5;
    }
    poly_divrem(&n, f)
}

fn finish(
    cfg: &QesConfig,
    f: Vec<C64>,
    a0: C64,
    a1: C64,
    branch: Branch,
    discrepancies: Vec<DiscrepancyRecord>,
) -> QesSolution {
    let b = [cfg.b1, cfg.b2, cfg.b3, C64::new(cfg.b4, 0.0)];
    let b_eff = if cfg.case == QesCase::C3 {
        // case 3 forces b1 = 2 b3 (b2 - b3^2)
        [2.0 * cfg.b3 * (cfg.b2 - cfg.b3 * cfg.b3), cfg.b2, cfg.b3, b[3]]
    } else {
        b
    };
    let (q, rem) = collect(&f, &b_eff);
    let mut c = [C64::new(0.0, 0.0); 6];
    for k in 1..=6 {
        c[k - 1] = *q.get(k).unwrap_or(&C64::new(0.0, 0.0));
    }
    let e = -q[0];
    let constraint_residual = rem.iter().map(|r| r.norm()).fold(0.0, f64::max);
    QesSolution { c, e, a0, a1, branch, b: b_eff, f, constraint_residual, discrepancies }
}

fn e35_record() -> DiscrepancyRecord {
    DiscrepancyRecord {
        equation: "e35".into(),
        printed: "exponent term csch(x sqrt(lambda)) / (4 lambda^2)".into(),
        derived: "exponent term csch^4(x sqrt(lambda)) / (4 lambda^2)".into(),
        detail: "oracle: only the quartic power reproduces c6 = 1/2; implemented \
                 oracle-consistent, print logged"
            .into(),
    }
}

/// Case 1 (f = 1): Eqs. (e38)/(e37), confirmed by the oracle.
pub fn qes_case1(cfg: &QesConfig) -> Result<QesSolution> {
    if cfg.case != QesCase::C1 {
        return Err(Error::Config("qes_case1 wants case C1".into()));
    }
    let zero = C64::new(0.0, 0.0);
    let mut sol = finish(cfg, vec![C64::new(1.0, 0.0)], zero, zero, Branch::None, vec![e35_record()]);
    // printed Eq. (e38)/(e37) check
    let (b1, b2, b3, b4) = (cfg.b1, cfg.b2, cfg.b3, C64::new(cfg.b4, 0.0));
    let printed = [
        -3.0 * b3 + 2.0 * b1 * b2,
        -6.0 * b4 + 3.0 * b1 * b3 + 2.0 * b2 * b2,
        4.0 * b1 * b4 + 6.0 * b2 * b3,
        8.0 * b2 * b4 + 4.5 * b3 * b3,
        12.0 * b3 * b4,
        8.0 * b4 * b4,
    ];
    push_c_records(&mut sol, &printed, "e38");
    push_e_record(&mut sol, b2 - 0.5 * b1 * b1, "e37", "E = b2 - b1^2/2");
    Ok(sol)
}

fn push_c_records(sol: &mut QesSolution, printed: &[C64; 6], eq: &str) {
    for k in 0..6 {
        if (sol.c[k] - printed[k]).norm() > 1e-10 * (1.0 + printed[k].norm()) {
            sol.discrepancies.push(DiscrepancyRecord {
                equation: eq.into(),
                printed: format!("c{} = {}", k + 1, printed[k]),
                derived: format!("c{} = {}", k + 1, sol.c[k]),
                detail: "oracle coefficient differs from print".into(),
            });
        }
    }
}

fn push_e_record(sol: &mut QesSolution, printed_e: C64, eq: &str, formula: &str) {
    if (sol.e - printed_e).norm() > 1e-10 * (1.0 + printed_e.norm()) {
        sol.discrepancies.push(DiscrepancyRecord {
            equation: eq.into(),
            printed: format!("{formula} = {printed_e}"),
            derived: format!("E = {}", sol.e),
            detail: "oracle energy differs from print".into(),
        });
    }
}

// all roots of a0^3 + p2 a0^2 + p1 a0 + p0 (complex Cardano)
fn cubic_roots(p2: C64, p1: C64, p0: C64) -> Vec<C64> {
    let third = 1.0 / 3.0;
    let sh = p2 * third;
    // depressed: t^3 + p t + q, a0 = t - p2/3
    let p = p1 - p2 * p2 * third;
    let q = 2.0 * sh * sh * sh - sh * p1 + p0;
    let disc = (q * q * 0.25 + p * p * p / 27.0).sqrt();
    let mut cand = q * (-0.5) + disc;
    if cand.norm() < 1e-14 {
        cand = q * (-0.5) - disc;
    }
    let omega = C64::new(-0.5, 0.75f64.sqrt());
    let mut roots = Vec::new();
    if cand.norm() < 1e-14 {
        roots.push(-sh);
        roots.push(-sh);
        roots.push(-sh);
    } else {
        let mut w = cand.powf(third);
        for _ in 0..3 {
            roots.push(w - p / (3.0 * w) - sh);
            w *= omega;
        }
    }
    // deduplicate
    let mut out: Vec<C64> = Vec::new();
    for r in roots {
        if out.iter().all(|o| (o - r).norm() > 1e-12 * (1.0 + r.norm())) {
            out.push(r);
        }
    }
    out
}

/// Case 2 (f = u + a0): Eq. (qesc) cubic for a0, coefficients per Eq. (e34)
/// (the a0 term included), energies from the oracle.
pub fn qes_case2(cfg: &QesConfig) -> Result<Vec<QesSolution>> {
    if !matches!(cfg.case, QesCase::C2a | QesCase::C2b) {
        return Err(Error::Config("qes_case2 wants case C2a or C2b".into()));
    }
    let (b1, b2, b3) = (cfg.b1, cfg.b2, cfg.b3);
    let roots = cubic_roots(-3.0 * b3, 2.0 * b2, -b1);
    let mut kept: Vec<(C64, Branch)> = Vec::new();
    match cfg.case {
        QesCase::C2a => {
            // nonzero roots +-i sqrt(2 b2); need b2 > 0 for imaginary a0
            if !(b2.im == 0.0 && b2.re > 0.0) {
                return Err(Error::Constraint(
                    "case 2a has no PT-valid root unless b2 > 0".into(),
                ));
            }
            for r in roots {
                if r.norm() > 1e-12 {
                    let br = if r.im > 0.0 { Branch::Plus } else { Branch::Minus };
                    kept.push((r, br));
                }
            }
        }
        QesCase::C2b => {
            // a0 = (3 b3 +- sqrt(9 b3^2 - 8 b2)) / 2; drop the a0 = 0 root
            let disc = (9.0 * b3 * b3 - 8.0 * b2).sqrt();
            for r in roots {
                if r.norm() <= 1e-12 {
                    continue;
                }
                let br = if (2.0 * r - 3.0 * b3 - disc).norm() < (2.0 * r - 3.0 * b3 + disc).norm()
                {
                    Branch::Plus
                } else {
                    Branch::Minus
                };
                kept.push((r, br));
            }
        }
        _ => unreachable!(),
    }
    kept.sort_by_key(|(_, br)| matches!(br, Branch::Minus));
    let mut out = Vec::new();
    for (a0, branch) in kept {
        let f = vec![a0, C64::new(1.0, 0.0)];
        let mut sol = finish(cfg, f, a0, C64::new(0.0, 0.0), branch, vec![e35_record()]);
        // printed Eq. (e34) including the a0 term in c1 — confirmed required
        let printed = [
            a0 + 2.0 * b1 * b2 - 6.0 * b3,
            3.0 * b1 * b3 + 2.0 * b2 * b2 - C64::new(2.5, 0.0),
            b1 + 6.0 * b2 * b3,
            2.0 * b2 + 4.5 * b3 * b3,
            3.0 * b3,
            C64::new(0.5, 0.0),
        ];
        sol.discrepancies.push(DiscrepancyRecord {
            equation: "e34".into(),
            printed: "c1 = a0 + 2 b1 b2 - 6 b3 (potential coefficient depends on the \
                      ansatz root a0)"
                .into(),
            derived: format!("c1 = {} with a0 = {a0}", sol.c[0]),
            detail: if (sol.c[0] - printed[0]).norm() < 1e-10 {
                "oracle: the a0 term is required for the residual to vanish; \
                 not a typo"
                    .into()
            } else {
                "oracle: c1 differs from the printed Eq. (e34)".into()
            },
        });
        push_c_records(&mut sol, &printed, "e34");
        push_e_record(
            &mut sol,
            -0.5 * b1 * b1 + 3.0 * b2 - 3.0 * a0 * b3 + a0 * a0,
            "e33",
            "E = -b1^2/2 + 3 b2 - 3 a0 b3 + a0^2",
        );
        out.push(sol);
    }
    Ok(out)
}

/// Case 3 (f = u^2 + a1 u + a0): a1 = 2 b3, b1 = 2 b3 (b2 - b3^2),
/// a0 branches per Eq. (qesc1); energies from the oracle (the printed
/// Eq. (e29) labels attach the opposite branch sign).
pub fn qes_case3(cfg: &QesConfig) -> Result<(QesSolution, QesSolution)> {
    if cfg.case != QesCase::C3 {
        return Err(Error::Config("qes_case3 wants case C3".into()));
    }
    let (b2, b3) = (cfg.b2, cfg.b3);
    let a1 = 2.0 * b3;
    let disc = ((2.0 * b2 - 3.0 * b3 * b3).powu(2) + 2.0).sqrt();
    let build = |sign: f64, branch: Branch| {
        let a0 = 0.5 * (2.0 * b2 - b3 * b3 + sign * disc);
        let f = vec![a0, a1, C64::new(1.0, 0.0)];
        let mut sol = finish(cfg, f, a0, a1, branch, vec![e35_record()]);
        // printed Eq. (qesv2) coefficients
        let printed = [
            b3 * (4.0 * b2 * b2 - 4.0 * b2 * b3 * b3 - 7.0),
            2.0 * (b2 * b2 + 3.0 * b2 * b3 * b3 - 3.0 * b3.powu(4)) - C64::new(3.5, 0.0),
            2.0 * b3 * (4.0 * b2 - b3 * b3),
            2.0 * b2 + C64::new(4.5, 0.0),
            3.0 * b3,
            C64::new(0.5, 0.0),
        ];
        push_c_records(&mut sol, &printed, "qesv2");
        if (sol.c[3] - printed[3]).norm() > 1e-10 {
            if let Some(rec) = sol.discrepancies.iter_mut().find(|r| {
                r.equation == "qesv2" && r.printed.starts_with("c4")
            }) {
                rec.detail =
                    "print drops the b3^2 factor: c4 = 2 b2 + (9/2) b3^2".into();
            }
        }
        let e_printed = -2.0 * b3 * b3 * (b2 - b3 * b3).powu(2) + 3.0 * b2
            - b3 * b3
            + sign * disc;
        push_e_record(&mut sol, e_printed, "e29", "E(+-) as printed");
        if sol.discrepancies.iter().any(|r| r.equation == "e29") {
            sol.discrepancies.push(DiscrepancyRecord {
                equation: "e29".into(),
                printed: "E+- paired with a0+-".into(),
                derived: "E-+ paired with a0+- (energy set identical)".into(),
                detail: "oracle: branch labels are swapped between Eqs. (qesc1) \
                         and (e29)"
                    .into(),
            });
        }
        sol
    };
    Ok((build(1.0, Branch::Plus), build(-1.0, Branch::Minus)))
}

/// All solutions for a config, in branch order (CLI entry point).
pub fn qes_solutions(cfg: &QesConfig) -> Result<Vec<QesSolution>> {
    match cfg.case {
        QesCase::C1 => Ok(vec![qes_case1(cfg)?]),
        QesCase::C2a | QesCase::C2b => qes_case2(cfg),
        QesCase::C3 => {
            let (p, m) = qes_case3(cfg)?;
            Ok(vec![p, m])
        }
    }
}

fn u_of_x(lambda: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Domain(x));
    }
    let sl = lambda.sqrt();
    Ok(1.0 / (sl * (sl * x).sinh()))
}

/// V(x) = sum c_k lambda^{-k/2} csch^k(x sqrt(lambda)) (Eq. (qesp)).
pub fn qes_potential_eval(sol: &QesSolution, lambda: f64, x: f64) -> Result<C64> {
    let u = C64::new(u_of_x(lambda, x)?, 0.0);
    let mut acc = C64::new(0.0, 0.0);
    let mut up = C64::new(1.0, 0.0);
    for k in 0..6 {
        up *= u;
        acc += sol.c[k] * up;
    }
    Ok(acc)
}

/// psi in the flat coordinate: f(u) exp(-g(u)).
pub fn qes_wavefunction_u(sol: &QesSolution, u: f64) -> C64 {
    let uu = C64::new(u, 0.0);
    let g = sol.b[0] * uu
        + sol.b[1] * uu * uu
        + sol.b[2] * uu * uu * uu
        + sol.b[3] * uu * uu * uu * uu;
    poly_eval(&sol.f, uu) * (-g).exp()
}

/// psi(x) through u = csch(x sqrt(lambda)) / sqrt(lambda) (Eqs.
/// (e36)/(e35)/(e30), with the oracle-consistent csch^4 exponent).
pub fn qes_wavefunction(sol: &QesSolution, lambda: f64, x: f64) -> Result<C64> {
    Ok(qes_wavefunction_u(sol, u_of_x(lambda, x)?))
}

/// Sup-norm residual of -1/2 psi'' + (V - E) psi in the flat coordinate,
/// relative to max |psi|. The grid gives the x window (lo, hi) and the point
/// count; sampling is uniform in u over [u(hi), u(lo)].
pub fn qes_residual(sol: &QesSolution, cfg: &QesConfig, grid: &Grid) -> Result<f64> {
    let u_lo = u_of_x(cfg.lambda, grid.hi)?;
    let u_hi = u_of_x(cfg.lambda, grid.lo)?;
    let ugrid = Grid::new(Coordinate::Z, u_lo, u_hi, grid.npoints)?;
    let psi = GridFunction::sample(&ugrid, |u| qes_wavefunction_u(sol, u));
    let d2 = second_derivative(&psi)?;
    let mut pot: Vec<C64> = Vec::with_capacity(ugrid.npoints);
    for u in ugrid.points() {
        let uu = C64::new(u, 0.0);
        let mut acc = -sol.e;
        let mut up = C64::new(1.0, 0.0);
        for k in 0..6 {
            up *= uu;
            acc += sol.c[k] * up;
        }
        pot.push(acc);
    }
    let mut worst = 0.0f64;
    for i in 3..ugrid.npoints - 3 {
        let r = (-0.5 * d2.values[i] + pot[i] * psi.values[i]).norm();
        worst = worst.max(r);
    }
    Ok(worst / psi.sup_norm())
}

/// PT signature of a solution: c2, c4, c6 real and c1, c3, c5 purely
/// imaginary, giving V(x) = conj(V(-x)).
pub fn pt_symmetric(sol: &QesSolution) -> bool {
    let tol = 1e-10;
    sol.c[1].im.abs() < tol
        && sol.c[3].im.abs() < tol
        && sol.c[5].im.abs() < tol
        && sol.c[0].re.abs() < tol
        && sol.c[2].re.abs() < tol
        && sol.c[4].re.abs() < tol
}
