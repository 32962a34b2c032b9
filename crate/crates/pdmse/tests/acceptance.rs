//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Criterion 6 is expected to fail for the Table-2 row-3 and
//! row-4 families, whose discretized operators carry no discrete branch near
//! the printed levels; the failure is reported honestly rather than masked.

use num_bigint::BigInt;
use num_rational::BigRational;
use pdmse::model_catalog::*;
use pdmse::numerics::{inner_product_mu, Coordinate, Grid, DEFAULT_NPOINTS};
use pdmse::qes_engine::*;
use pdmse::special_functions::*;
use pdmse::susy_engine::*;
use pdmse::C64;
use std::time::Instant;

fn p511() -> ModelParams {
    ModelParams { a: 5.0, b: 1.0, lambda: 1.0, alpha: 1.0, row4_compat: false }
}

fn report(criterion: usize, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn criterion_01_row1_triple_agreement() {
    let t0 = Instant::now();
    let p = p511();
    let closed: Vec<C64> =
        (0..5).map(|n| energy_level(ModelId::T1R1, &p, n).unwrap()).collect();
    let shape = shape_invariance_spectrum(ModelId::T1R1, &p, 4).unwrap();
    let numeric = numeric_spectrum(ModelId::T1R1, &p, 5).unwrap();
    let mut worst = 0.0f64;
    for n in 0..5 {
        let denom = closed[n].norm().max(1.0);
        worst = worst
            .max((closed[n] - shape[n]).norm() / denom)
            .max((closed[n] - numeric[n]).norm() / denom)
            .max((shape[n] - numeric[n]).norm() / denom);
    }
    let dt = t0.elapsed().as_secs_f64();
    report(
        1,
        worst < 1e-6 && dt < 30.0,
        &format!("row-1 (5,1,1) closed/shape/numeric, worst rel dev {worst:.3e}, {dt:.1}s"),
    );
}

#[test]
fn criterion_02_hermite_three_routes() {
    let t0 = Instant::now();
    let mut pass = true;
    for n in 0..=24 {
        let r = deformed_hermite(n, HermiteRoute::Rodrigues).unwrap();
        pass &= r == deformed_hermite(n, HermiteRoute::Generating).unwrap();
        pass &= r == deformed_hermite(n, HermiteRoute::Recursion).unwrap();
        pass &= r.at_lambda_zero() == classical_hermite(n);
    }
    let dt = t0.elapsed().as_secs_f64();
    report(
        2,
        pass && dt < 10.0,
        &format!("three routes exactly equal for n <= 24, classical limit exact, {dt:.1}s"),
    );
}

fn classical_hermite(n: usize) -> Vec<BigRational> {
    let mut prev = vec![rat(1, 1)];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![rat(0, 1), rat(2, 1)];
    for m in 1..n {
        let mut next = vec![rat(0, 1); m + 2];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += c * rat(2, 1);
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= c * rat(2 * m as i64, 1);
        }
        prev = cur;
        cur = next;
    }
    cur
}

#[test]
fn criterion_03_hermite_jacobi_bridge() {
    let ys = [rat(-2, 1), rat(-1, 1), rat(3, 10), rat(7, 10), rat(2, 1)];
    let lams = [rat(1, 10), rat(-1, 10), rat(1, 4), rat(-1, 4), rat(1, 2), rat(-1, 2)];
    let mut worst = 0.0f64;
    for n in 0..=12 {
        for y in &ys {
            for l in &lams {
                worst = worst.max(bridge_residual_exact(n, y, l).unwrap());
            }
        }
    }
    report(
        3,
        worst < 1e-10,
        &format!("bridge identity n <= 12 over the y/Lambda grid, worst rel dev {worst:.3e}"),
    );
}

#[test]
fn criterion_04_orthonormality() {
    let p = p511();
    let grid = default_z_grid(ModelId::T1R1, &p, Some(DEFAULT_NPOINTS)).unwrap();
    let psi: Vec<_> = (0..4)
        .map(|n| sample_wavefunction_z(ModelId::T1R1, &p, n, &grid).unwrap())
        .collect();
    let mut worst = 0.0f64;
    for m in 0..4 {
        for n in 0..4 {
            let ip = inner_product_mu(&psi[m], &psi[n], 0.0).unwrap();
            let want = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((ip - C64::new(want, 0.0)).norm());
        }
    }
    report(
        4,
        worst < 1e-6,
        &format!("normalized psi_n orthonormal under dmu for m,n <= 3, worst dev {worst:.3e}"),
    );
}

#[test]
fn criterion_05_susy_factorization_and_ladder() {
    let p = p511();
    let grid = default_z_grid(ModelId::T1R1, &p, None).unwrap();
    let spec = SuperpotentialSpec::family(ModelId::T1R1, p).unwrap();

    let mut worst_resid = 0.0f64;
    for n in 0..=3 {
        let e = energy_level(ModelId::T1R1, &p, n).unwrap();
        worst_resid =
            worst_resid.max(factorization_residual(ModelId::T1R1, &p, n, e, &grid).unwrap());
    }

    // Eq. (e50): psi_1(a0) from the raising operator on psi_0(a1)
    let psi0_a1 = sample_wavefunction_z(ModelId::T1R1, &spec.step().params, 0, &grid).unwrap();
    let raised = apply_ladder(Ladder::Raise, &spec, &psi0_a1).unwrap();
    let psi1 = sample_wavefunction_z(ModelId::T1R1, &p, 1, &grid).unwrap();
    let num = inner_product_mu(&raised, &psi1, 0.0).unwrap().norm();
    let d1 = inner_product_mu(&raised, &raised, 0.0).unwrap().re.sqrt();
    let d2 = inner_product_mu(&psi1, &psi1, 0.0).unwrap().re.sqrt();
    let overlap = num / (d1 * d2);

    // Eq. (e19): E_{n+1}(a0) = E_n(a1) + R(a0)
    let mut worst_shift = 0.0f64;
    for n in 0..=3 {
        let lhs = energy_level(ModelId::T1R1, &p, n + 1).unwrap();
        let rhs = energy_level(ModelId::T1R1, &spec.step().params, n).unwrap()
            + spec.remainder();
        worst_shift = worst_shift.max((lhs - rhs).norm() / lhs.norm().max(1.0));
    }

    report(
        5,
        worst_resid < 1e-6 && overlap > 1.0 - 1e-8 && worst_shift < 1e-6,
        &format!(
            "factorization residual {worst_resid:.3e}, ladder overlap {overlap:.12}, \
             e19 shift dev {worst_shift:.3e}"
        ),
    );
}

#[test]
fn criterion_06_pt_real_spectra_all_six_families() {
    let cases = [
        (ModelId::T2R1, 1.0),
        (ModelId::T2R2, 1.0),
        (ModelId::T2R3, 1.0),
        (ModelId::T2R4, 1.0),
        (ModelId::T2R5, -1.0),
        (ModelId::T2R6, -1.0),
    ];
    let mut failures: Vec<String> = Vec::new();
    for (id, lambda) in cases {
        let t0 = Instant::now();
        let p = ModelParams { a: 5.0, b: 1.0, lambda, ..Default::default() };
        let k = 4.min(descriptor(id, &p).unwrap().level_bound.map_or(4, |b| b + 1));
        let nums = match numeric_spectrum(id, &p, k) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{}: solver error {e:?}", id.name()));
                continue;
            }
        };
        let dt = t0.elapsed().as_secs_f64();
        if dt >= 60.0 {
            failures.push(format!("{}: {dt:.1}s per family", id.name()));
        }
        for (n, num) in nums.iter().enumerate() {
            let cl = energy_level(id, &p, n).unwrap().re;
            if num.im.abs() >= 1e-8 * (1.0 + num.re.abs())
                || (num.re - cl).abs() / cl.abs().max(1.0) >= 1e-5
            {
                failures.push(format!(
                    "{} n = {n}: numeric {num} vs closed {cl}",
                    id.name()
                ));
            }
        }
    }
    report(
        6,
        failures.is_empty(),
        &if failures.is_empty() {
            "all six Table-2 families real and matching closed forms".into()
        } else {
            format!(
                "t2r1/t2r2/t2r5/t2r6 pass; deviations: {}",
                failures.join("; ")
            )
        },
    );
}

#[test]
fn criterion_07_qes_cases() {
    let zero = C64::new(0.0, 0.0);
    let grid = Grid::new(Coordinate::Z, 0.05, 12.0, 4001).unwrap();
    let configs = [
        QesConfig::new(QesCase::C1, zero, C64::new(1.0, 0.0), zero, 1.0).unwrap(),
        QesConfig::new(QesCase::C2a, zero, C64::new(2.0, 0.0), zero, 1.0).unwrap(),
        QesConfig::new(QesCase::C3, zero, zero, zero, 1.0).unwrap(),
    ];
    let mut worst = 0.0f64;
    let mut have_e34 = false;
    let mut have_e35 = false;
    for cfg in &configs {
        for sol in qes_solutions(cfg).unwrap() {
            worst = worst.max(qes_residual(&sol, cfg, &grid).unwrap());
            have_e34 |= sol.discrepancies.iter().any(|d| d.equation == "e34");
            have_e35 |= sol.discrepancies.iter().any(|d| d.equation == "e35");
        }
    }
    report(
        7,
        worst < 1e-7 && have_e34 && have_e35,
        &format!(
            "cases 1/2a/3 residual {worst:.3e}; symbolic records e34 {have_e34}, e35 {have_e35}"
        ),
    );
}

#[test]
fn criterion_08_broken_susy() {
    let p = ModelParams { a: 2.0, b: -1.0, lambda: -1.0, ..p511() };
    let e0 = broken_susy_energy(&p, BrokenCase::ApBn, 0).unwrap();
    let closed_ok = (e0 - C64::new(15.0, 0.0)).norm() < 1e-12;
    let resid = broken_susy_residual(&p, BrokenCase::ApBn, 0, 4001).unwrap();
    let (em, ep) = broken_partner_spectra(&p, 3).unwrap();
    let mut worst_deg = 0.0f64;
    for (m, pl) in em.iter().zip(&ep) {
        worst_deg = worst_deg.max((m - pl).norm() / m.norm().max(1.0));
    }
    report(
        8,
        closed_ok && resid < 1e-6 && worst_deg < 1e-6,
        &format!(
            "(2,-1,|1|): E_0 = {} (closed 15), residual {resid:.3e}, \
             H-/H+ degeneracy dev {worst_deg:.3e}",
            e0.re
        ),
    );
}

#[test]
fn criterion_09_harmonic_limit() {
    let rows = harmonic_limit_report(1.0, &[1e-1, 1e-2, 1e-3, 1e-4]).unwrap();
    let monotone = rows.windows(2).all(|w| w[1].v_deviation < w[0].v_deviation);
    let overlap = rows[2].psi0_overlap;
    let n0 = rows[3].n0_prime;
    let pi_qtr = std::f64::consts::PI.powf(-0.25);
    report(
        9,
        monotone && overlap > 1.0 - 1e-4 && (n0 - pi_qtr).abs() < 1e-3,
        &format!(
            "V convergence monotone {monotone}, psi_0 overlap {overlap:.8} at 1e-3, \
             N'_0 = {n0:.6} vs pi^(-1/4) = {pi_qtr:.6}"
        ),
    );
}

#[test]
fn criterion_10_full_verify_gate() {
    let t0 = Instant::now();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_pdmse"))
        .arg("verify")
        .output()
        .expect("binary should launch");
    let dt = t0.elapsed().as_secs_f64();
    report(
        10,
        out.status.code() == Some(0) && dt < 300.0,
        &format!("`pdmse verify` exit {:?}, {dt:.1}s", out.status.code()),
    );
}
