//! QES family: coefficient maps and energies against hand substitution,
//! residual oracle on the flat-coordinate operator, discrepancy records,
//! and PT structure.

use pdmse::numerics::{Coordinate, Grid};
use pdmse::qes_engine::*;
use pdmse::C64;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

fn zero() -> C64 {
    re(0.0)
}

fn resid_grid(npoints: usize) -> Grid {
    Grid::new(Coordinate::Z, 0.05, 12.0, npoints).unwrap()
}

#[test]
fn case1_b2_only() {
    let cfg = QesConfig::new(QesCase::C1, zero(), re(1.0), zero(), 1.0).unwrap();
    let sol = qes_case1(&cfg).unwrap();
    let want = [0.0, 0.5, 0.0, 2.0, 0.0, 0.5];
    for (k, w) in want.iter().enumerate() {
        assert!((sol.c[k] - re(*w)).norm() < 1e-12, "c{} = {}", k + 1, sol.c[k]);
    }
    assert!((sol.e - re(1.0)).norm() < 1e-12);
    let r = qes_residual(&sol, &cfg, &resid_grid(4001)).unwrap();
    assert!(r < 1e-7, "residual {r}");
    // only the e35 exponent record; the printed Eq. (e38) map is confirmed
    assert!(sol.discrepancies.iter().all(|d| d.equation == "e35"));
    assert_eq!(sol.discrepancies.len(), 1);
}

#[test]
fn case1_all_b_zero() {
    let cfg = QesConfig::new(QesCase::C1, zero(), zero(), zero(), 1.0).unwrap();
    let sol = qes_case1(&cfg).unwrap();
    let want = [0.0, -1.5, 0.0, 0.0, 0.0, 0.5];
    for (k, w) in want.iter().enumerate() {
        assert!((sol.c[k] - re(*w)).norm() < 1e-12);
    }
    assert!(sol.e.norm() < 1e-12);
}

#[test]
fn case1_pt_regime() {
    // b1 = 0.2i, b2 = 1, b3 = 0.1i: c1, c3, c5 imaginary, E = 1.02 real
    let cfg = QesConfig::new(QesCase::C1, im(0.2), re(1.0), im(0.1), 1.0).unwrap();
    let sol = qes_case1(&cfg).unwrap();
    assert!((sol.e - re(1.02)).norm() < 1e-12, "E = {}", sol.e);
    assert!(pt_symmetric(&sol));
}

#[test]
fn case2a_both_branches() {
    let cfg = QesConfig::new(QesCase::C2a, zero(), re(2.0), zero(), 1.0).unwrap();
    let sols = qes_case2(&cfg).unwrap();
    assert_eq!(sols.len(), 2);
    for sol in &sols {
        assert!((sol.e - re(2.0)).norm() < 1e-10, "E = {}", sol.e);
        assert!((sol.a0.re).abs() < 1e-12 && (sol.a0.im.abs() - 2.0).abs() < 1e-12);
        assert!((sol.c[0] - sol.a0).norm() < 1e-12, "c1 = a0 fails");
        assert!(pt_symmetric(sol));
        assert!(sol.constraint_residual < 1e-12);
        let r = qes_residual(sol, &cfg, &resid_grid(4001)).unwrap();
        assert!(r < 1e-7, "residual {r}");
        // the a0-term confirmation record is always present
        assert!(sol.discrepancies.iter().any(|d| d.equation == "e34"));
    }
    assert_eq!(sols[0].branch, Branch::Plus);
    assert_eq!(sols[1].branch, Branch::Minus);
    // the two potentials differ only in the sign of the imaginary csch^1 term
    for k in 1..6 {
        assert!((sols[0].c[k] - sols[1].c[k]).norm() < 1e-12);
    }
    assert!((sols[0].c[0] + sols[1].c[0]).norm() < 1e-12);
}

#[test]
fn case2a_needs_positive_b2() {
    let cfg = QesConfig::new(QesCase::C2a, zero(), re(-1.0), zero(), 1.0).unwrap();
    assert!(qes_case2(&cfg).is_err());
}

#[test]
fn case2b_imaginary_branches() {
    // b3 = 0.5i, b2 = 1: both a0 branches purely imaginary
    let cfg = QesConfig::new(QesCase::C2b, zero(), re(1.0), im(0.5), 1.0).unwrap();
    let sols = qes_case2(&cfg).unwrap();
    assert_eq!(sols.len(), 2);
    let s = 10.25f64.sqrt();
    let want = [0.5 * (1.5 + s), 0.5 * (1.5 - s)];
    for (sol, w) in sols.iter().zip(want) {
        assert!(sol.a0.re.abs() < 1e-12, "a0 = {}", sol.a0);
        assert!((sol.a0.im - w).abs() < 1e-12, "a0 = {} want {w}i", sol.a0);
        assert!(sol.e.im.abs() < 1e-12, "E = {}", sol.e);
        let r = qes_residual(sol, &cfg, &resid_grid(4001)).unwrap();
        assert!(r < 1e-7, "residual {r}");
    }
}

#[test]
fn case3_b2_b3_zero() {
    let cfg = QesConfig::new(QesCase::C3, zero(), zero(), zero(), 1.0).unwrap();
    let (p, m) = qes_case3(&cfg).unwrap();
    let s2 = 2.0f64.sqrt();
    // energy set {+sqrt2, -sqrt2}; the oracle pairs a0+ with E = -sqrt2
    assert!((p.a0 - re(s2 / 2.0)).norm() < 1e-12);
    assert!((m.a0 + re(s2 / 2.0)).norm() < 1e-12);
    let mut es = [p.e.re, m.e.re];
    es.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((es[0] + s2).abs() < 1e-12 && (es[1] - s2).abs() < 1e-12);
    for sol in [&p, &m] {
        assert!(sol.constraint_residual < 1e-12);
        let r = qes_residual(sol, &cfg, &resid_grid(4001)).unwrap();
        assert!(r < 1e-7, "residual {r}");
        // branch-pairing record emitted
        assert!(sol.discrepancies.iter().any(|d| d.equation == "e29"));
    }
}

#[test]
fn case3_b2_one() {
    let cfg = QesConfig::new(QesCase::C3, zero(), re(1.0), zero(), 1.0).unwrap();
    let (p, m) = qes_case3(&cfg).unwrap();
    let s6 = 6.0f64.sqrt();
    assert!((p.a0 - re(0.5 * (2.0 + s6))).norm() < 1e-12);
    let mut es = [p.e.re, m.e.re];
    es.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!((es[0] - (3.0 - s6)).abs() < 1e-12);
    assert!((es[1] - (3.0 + s6)).abs() < 1e-12);
    for sol in [&p, &m] {
        let r = qes_residual(sol, &cfg, &resid_grid(4001)).unwrap();
        assert!(r < 1e-7, "residual {r}");
    }
}

#[test]
fn case3_imaginary_b3_reality() {
    // two distinct real eigenvalues, gap >= 2 sqrt(2)
    let cfg = QesConfig::new(QesCase::C3, zero(), re(1.0), im(0.3), 1.0).unwrap();
    let (p, m) = qes_case3(&cfg).unwrap();
    assert!(p.e.im.abs() < 1e-12 && m.e.im.abs() < 1e-12);
    assert!((p.e - m.e).norm() >= 2.0 * 2.0f64.sqrt() - 1e-12);
    assert!(pt_symmetric(&p) && pt_symmetric(&m));
    // c4 record: print drops the b3^2 factor
    assert!(p
        .discrepancies
        .iter()
        .any(|d| d.equation == "qesv2" && d.printed.starts_with("c4")));
    for sol in [&p, &m] {
        let r = qes_residual(sol, &cfg, &resid_grid(4001)).unwrap();
        assert!(r < 1e-7, "residual {r}");
    }
}

#[test]
fn pt_parity_of_case2a_wavefunction() {
    // conj(psi(-x)) = -psi(x)
    let cfg = QesConfig::new(QesCase::C2a, zero(), re(2.0), zero(), 1.0).unwrap();
    let sol = &qes_case2(&cfg).unwrap()[0];
    for &x in &[0.3, 0.9, 2.0, 5.0] {
        let plus = qes_wavefunction(sol, 1.0, x).unwrap();
        let minus = qes_wavefunction(sol, 1.0, -x).unwrap();
        assert!((minus.conj() + plus).norm() < 1e-10, "x = {x}");
    }
}

#[test]
fn potential_decays_and_is_pt() {
    let cfg = QesConfig::new(QesCase::C2a, zero(), re(2.0), zero(), 1.0).unwrap();
    let sol = &qes_case2(&cfg).unwrap()[0];
    assert!(qes_potential_eval(sol, 1.0, 20.0).unwrap().norm() < 1e-7);
    assert!(qes_potential_eval(sol, 1.0, 0.0).is_err());
    for &x in &[0.2, 1.0, 3.0] {
        let v = qes_potential_eval(sol, 1.0, x).unwrap();
        let vm = qes_potential_eval(sol, 1.0, -x).unwrap();
        assert!((vm.conj() - v).norm() < 1e-10 * (1.0 + v.norm()));
    }
}

#[test]
fn lambda_covariance_of_residual() {
    // rescaling lambda with the x window scaled by 1/sqrt(lambda) leaves the
    // residual invariant
    let mk = |lambda: f64, npoints: usize| {
        let cfg = QesConfig::new(QesCase::C1, zero(), re(1.0), zero(), lambda).unwrap();
        let sol = qes_case1(&cfg).unwrap();
        let sl = lambda.sqrt();
        let grid = Grid::new(Coordinate::Z, 0.05 / sl, 12.0 / sl, npoints).unwrap();
        qes_residual(&sol, &cfg, &grid).unwrap()
    };
    // point counts chosen so both runs share the same flat-coordinate spacing
    let (r1, r4) = (mk(1.0, 8001), mk(4.0, 4001));
    assert!((r1 - r4).abs() < 1e-9, "r(1) = {r1}, r(4) = {r4}");
}
