//! SUSY layer: partner potentials against the catalog, shape-invariance
//! spectra against closed forms, ladder operators against closed
//! eigenfunctions, and the broken-SUSY box.

use pdmse::model_catalog::*;
use pdmse::numerics::{inner_product_mu, Coordinate, Grid, GridFunction, DEFAULT_NPOINTS};
use pdmse::susy_engine::*;
use pdmse::C64;

fn p511() -> ModelParams {
    ModelParams { a: 5.0, b: 1.0, lambda: 1.0, alpha: 1.0, row4_compat: false }
}

#[test]
fn partner_minus_matches_catalog_potential() {
    // V- = W^2 - W' sqrt(F) reproduces the table potential pointwise
    let cases = [
        (ModelId::T1R1, p511()),
        (ModelId::T1R5, ModelParams { lambda: -1.0, ..p511() }),
        (ModelId::T2R1, p511()),
    ];
    for (id, p) in cases {
        let spec = SuperpotentialSpec::family(id, p).unwrap();
        for &x in &[-0.7, -0.2, 0.3, 0.8] {
            let vm = partner_potential_eval(&spec, Sector::Minus, x).unwrap();
            let vc = potential_eval(id, &p, x).unwrap();
            assert!((vm - vc).norm() < 1e-12, "{} x = {x}: {vm} vs {vc}", id.name());
        }
    }
}

#[test]
fn shape_invariance_matches_closed_energies() {
    let cases = [
        (ModelId::T1R1, p511()),
        (ModelId::T1R2, p511()),
        (ModelId::T1R3, ModelParams { a: 3.0, b: 64.0, ..p511() }),
        (ModelId::T1R4, ModelParams { b: 8.0, ..p511() }),
        (ModelId::T1R5, ModelParams { lambda: -1.0, ..p511() }),
        (ModelId::T1R6, ModelParams { lambda: -1.0, ..p511() }),
        (ModelId::T2R1, p511()),
        (ModelId::T2R2, p511()),
        (ModelId::T2R5, ModelParams { lambda: -1.0, ..p511() }),
        (ModelId::T2R6, ModelParams { lambda: -1.0, ..p511() }),
    ];
    for (id, p) in cases {
        let nmax = descriptor(id, &p).unwrap().level_bound.map_or(8, |b| b.min(8));
        let tele = shape_invariance_spectrum(id, &p, nmax).unwrap();
        for (n, t) in tele.iter().enumerate() {
            let cl = energy_level(id, &p, n).unwrap();
            assert!(
                (t - cl).norm() < 1e-9 * (1.0 + cl.norm()),
                "{} n = {n}: telescoped {t} vs closed {cl}",
                id.name()
            );
        }
    }
}

#[test]
fn step_remap_row1() {
    // Eq. (e19): a1 = (A - sqrt(lambda), B)
    let spec = SuperpotentialSpec::family(ModelId::T1R1, p511()).unwrap();
    let s = spec.step();
    assert!((s.params.a - 4.0).abs() < 1e-15);
    assert!((s.params.b - 1.0).abs() < 1e-15);
    assert!((spec.remainder() - C64::new(9.0, 0.0)).norm() < 1e-12);
}

#[test]
fn ground_state_annihilated_by_a() {
    let p = p511();
    let spec = SuperpotentialSpec::family(ModelId::T1R1, p).unwrap();
    let grid = default_z_grid(ModelId::T1R1, &p, None).unwrap();
    let psi0 = sample_wavefunction_z(ModelId::T1R1, &p, 0, &grid).unwrap();
    let apsi = apply_ladder(Ladder::Lower, &spec, &psi0).unwrap();
    let n = apsi.values.len();
    let sup = apsi.values[3..n - 3].iter().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(sup / psi0.sup_norm() < 1e-6, "|a psi_0| = {sup}");
}

#[test]
fn raising_operator_builds_psi1() {
    // Eq. (e50): psi_1(a0) prop a^dag(a0) psi_0(a1)
    let p = p511();
    let spec = SuperpotentialSpec::family(ModelId::T1R1, p).unwrap();
    let grid = default_z_grid(ModelId::T1R1, &p, None).unwrap();
    let psi0_a1 =
        sample_wavefunction_z(ModelId::T1R1, &spec.step().params, 0, &grid).unwrap();
    let raised = apply_ladder(Ladder::Raise, &spec, &psi0_a1).unwrap();
    let psi1 = sample_wavefunction_z(ModelId::T1R1, &p, 1, &grid).unwrap();
    let num = inner_product_mu(&raised, &psi1, 0.0).unwrap().norm();
    let d1 = inner_product_mu(&raised, &raised, 0.0).unwrap().re.sqrt();
    let d2 = inner_product_mu(&psi1, &psi1, 0.0).unwrap().re.sqrt();
    let overlap = num / (d1 * d2);
    assert!(overlap > 1.0 - 1e-8, "overlap = {overlap}");
}

#[test]
fn factorization_residual_small() {
    // ||a^dag a psi_n - E_n psi_n|| / ||psi_n|| < 1e-6 for n <= 3
    let p = p511();
    let grid = default_z_grid(ModelId::T1R1, &p, None).unwrap();
    for n in 0..=3 {
        let e = energy_level(ModelId::T1R1, &p, n).unwrap();
        let r = factorization_residual(ModelId::T1R1, &p, n, e, &grid).unwrap();
        assert!(r < 1e-6, "n = {n}: residual {r}");
    }
}

#[test]
fn ground_state_from_w_row1_normalizable() {
    let spec = SuperpotentialSpec::family(ModelId::T1R1, p511()).unwrap();
    let grid = Grid::new(Coordinate::X, -60.0, 60.0, 8001).unwrap();
    let gs = ground_state_from_w(&spec, &grid).unwrap();
    assert!(gs.normalizable);
    // matches the closed form up to the dmu-norm convention
    let closed = GridFunction::sample(&grid, |x| {
        wavefunction_eval(ModelId::T1R1, &p511(), 0, x).unwrap()
    });
    let num = inner_product_mu(&gs.psi, &closed, 1.0).unwrap().norm();
    let d1 = inner_product_mu(&gs.psi, &gs.psi, 1.0).unwrap().re.sqrt();
    let d2 = inner_product_mu(&closed, &closed, 1.0).unwrap().re.sqrt();
    assert!(num / (d1 * d2) > 1.0 - 1e-8);
}

#[test]
fn broken_box_ground_state_not_normalizable() {
    // the SUSY-breaking signal: exp(-int sqrt(m) W) diverges at x = 0
    let p = ModelParams { a: 2.0, b: -1.0, lambda: -1.0, ..p511() };
    let spec = SuperpotentialSpec::broken_box(p).unwrap();
    let grid = Grid::new(Coordinate::X, 1e-3, 1.0 - 1e-3, 4001).unwrap();
    let gs = ground_state_from_w(&spec, &grid).unwrap();
    assert!(!gs.normalizable);
}

#[test]
fn broken_susy_closed_spectrum() {
    let p = ModelParams { a: 2.0, b: -1.0, lambda: -1.0, ..p511() };
    let e = broken_susy_spectrum(&p, BrokenCase::ApBn, 3).unwrap();
    for (got, want) in e.iter().zip([15.0, 35.0, 63.0]) {
        assert!((got - C64::new(want, 0.0)).norm() < 1e-12);
    }
    assert!(e[0].re > 0.0, "broken SUSY: E_0 must be positive");
}

#[test]
fn broken_susy_residuals() {
    let apbn = ModelParams { a: 2.0, b: -1.0, lambda: -1.0, ..p511() };
    for n in 0..=2 {
        let r = broken_susy_residual(&apbn, BrokenCase::ApBn, n, 4001).unwrap();
        assert!(r < 1e-6, "ApBn n = {n}: residual {r}");
    }
    let anbp = ModelParams { a: -1.0, b: 2.0, lambda: -1.0, ..p511() };
    for n in 0..=2 {
        let r = broken_susy_residual(&anbp, BrokenCase::AnBp, n, 4001).unwrap();
        assert!(r < 1e-6, "AnBp n = {n}: residual {r}");
    }
}

#[test]
fn broken_partner_degeneracy() {
    // H- and H+ share their full spectrum when SUSY is broken
    let p = ModelParams { a: 2.0, b: -1.0, lambda: -1.0, ..p511() };
    let (em, ep) = broken_partner_spectra(&p, 3).unwrap();
    for (n, (m, pl)) in em.iter().zip(&ep).enumerate() {
        assert!(
            (m - pl).norm() < 1e-6 * (1.0 + m.norm()),
            "n = {n}: H- {m} vs H+ {pl}"
        );
        let cl = broken_susy_energy(&p, BrokenCase::ApBn, n).unwrap();
        assert!(
            (m - cl).norm() < 1e-6 * (1.0 + cl.norm()),
            "n = {n}: numeric {m} vs closed {cl}"
        );
    }
}

#[test]
fn e49_rayleigh_quotient_report() {
    // Eq. (e49) is reported, not asserted: the Rayleigh quotient of
    // a^dag(a0) psi_0(a1) under H-(a0) against both printed candidates
    let p = p511();
    let grid = default_z_grid(ModelId::T1R1, &p, Some(DEFAULT_NPOINTS)).unwrap();
    let rep = e49_report(ModelId::T1R1, &p, &grid).unwrap();
    assert!(rep.rayleigh.re.is_finite());
    println!(
        "e49: rayleigh = {}, R(a0) = {}, R(a1) = {}",
        rep.rayleigh, rep.r_a0, rep.r_a1
    );
}
