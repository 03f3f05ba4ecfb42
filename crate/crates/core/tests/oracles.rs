//! Independent-oracle equivalence for the closed-form response chain:
//! every analytic shortcut is checked against a brute-force dense solve
//! over randomized parameter draws.

use fanoring::constants::HBAR;
use fanoring::materials::{
    coupling_chi, coupling_g, coupling_i, coupling_j, derive_mnp_at_resonance, drude_permittivity,
    q1_closed_form, q2_closed_form, q_general, MaterialParams, Orientation, QDParams,
};
use fanoring::metamolecule::{analytic_polarizability, Drive, MetamoleculeParams};
use fanoring::nanoring::{
    bare_ring_dipole, build_ring_system, ring_couplings, solve_ring, DriveField, RingGeometry,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_material(rng: &mut ChaCha8Rng) -> MaterialParams {
    MaterialParams {
        omega_p: rng.gen_range(8e15..2e16),
        gamma: rng.gen_range(5e12..8e13),
        eps_inf: rng.gen_range(1.5..8.0),
        eps_b: rng.gen_range(1.0..4.0),
        mu_b: rng.gen_range(0.8..1.2),
    }
}

fn random_metamolecule(rng: &mut ChaCha8Rng) -> (MaterialParams, MetamoleculeParams) {
    let mat = random_material(rng);
    let radius = rng.gen_range(5e-9..30e-9);
    let mnp = derive_mnp_at_resonance(&mat, radius).unwrap();
    let delta = rng.gen_range(-3e14..3e14);
    let qd = QDParams::new(
        rng.gen_range(0.3e-9..1.5e-9),
        mnp.omega_0 - delta,
        rng.gen_range(1e9..5e11),
    )
    .unwrap();
    let orient = if rng.gen_bool(0.5) { Orientation::Parallel } else { Orientation::Perpendicular };
    let d = rng.gen_range(2.0 * radius..5.0 * radius);
    let p = MetamoleculeParams::new(
        &mat,
        mnp,
        qd,
        d,
        orient,
        Drive::EnergyMev(rng.gen_range(1e-5..1e-3)),
    )
    .unwrap();
    (mat, p)
}

/// Dense 2x2 solve of the weak-field Maxwell-Bloch system, written against
/// nalgebra's generic LU rather than the closed form under test.
fn dense_mb_polarizability(p: &MetamoleculeParams, omega: f64) -> C64 {
    let e0 = p.field_amplitude().unwrap();
    let (d0v, dxv) = p.detunings(omega);
    let m = DMatrix::<C64>::from_row_slice(
        2,
        2,
        &[
            C64::new(p.mnp.gamma_0 / 2.0, d0v),
            C64::new(-p.g, 0.0),
            C64::new(p.g, 0.0),
            C64::new(p.qd.gamma_x / 2.0, dxv),
        ],
    );
    let rhs = DVector::from_column_slice(&[
        C64::i() * p.chi * e0 / HBAR,
        C64::i() * p.qd.mu * e0 / HBAR,
    ]);
    let sol = m.lu().solve(&rhs).expect("2x2 system is regular");
    (p.chi.conj() * sol[0] + p.qd.mu * sol[1]) / e0
}

#[test]
fn analytic_polarizability_vs_dense_solve_1000_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for i in 0..1000 {
        let (_, p) = random_metamolecule(&mut rng);
        let omega = p.mnp.omega_0 * rng.gen_range(0.8..1.2);
        let dense = dense_mb_polarizability(&p, omega);
        let closed = analytic_polarizability(&p, omega).unwrap();
        let rel = (dense - closed).norm() / dense.norm();
        assert!(rel < 1e-10, "draw {i}: relative deviation {rel:.3e}");
    }
}

#[test]
fn frohlich_condition_over_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..200 {
        let mut mat = random_material(&mut rng);
        mat.gamma = 0.0;
        let w0 = mat.lsp_resonance();
        let eps = drude_permittivity(&mat, w0).unwrap();
        assert!((eps.re + 2.0 * mat.eps_b).abs() < 1e-10 * mat.eps_b);
    }
}

#[test]
fn q_general_vs_printed_closed_forms_geometry_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..500 {
        let mat = random_material(&mut rng);
        let radius = rng.gen_range(10e-9..100e-9);
        let omega = rng.gen_range(2e15..6e15);
        let k = mat.wavenumber(omega);
        let q1 = q_general(radius, 4, 0, 1, k, &mat).unwrap();
        let q2 = q_general(radius, 4, 0, 2, k, &mat).unwrap();
        let c1 = q1_closed_form(radius, k, &mat);
        let c2 = q2_closed_form(radius, k, &mat);
        assert!((q1 - c1).norm() < 1e-10 * c1.norm());
        assert!((q2 - c2).norm() < 1e-10 * c2.norm());
    }
}

/// Dense circulant solve of the bare N-site ring.
fn dense_bare_ring(geom: &RingGeometry, mat: &MaterialParams, radius_mnp: f64, omega: f64, h0: f64) -> C64 {
    let mnp = derive_mnp_at_resonance(mat, radius_mnp).unwrap();
    let n = geom.n_sites;
    let k = mat.wavenumber(omega);
    let chi = coupling_chi(&mnp, mat);
    let mut a = DMatrix::<C64>::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            a[(r, c)] = if r == c {
                C64::new(mnp.gamma_0 / 2.0, mnp.omega_0 - omega)
            } else {
                C64::i() * coupling_j(&mnp, mat, q_general(geom.r1, n, r, c, k, mat).unwrap())
            };
        }
    }
    let e0 = DriveField { h0 }.azimuthal_field(omega, geom.r1);
    let rhs = DVector::from_element(n, C64::i() * chi * e0 / HBAR);
    let sol = a.lu().solve(&rhs).unwrap();
    chi.conj() * sol[0]
}

#[test]
fn ring_closed_form_vs_dense_circulant_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for _ in 0..300 {
        let mat = random_material(&mut rng);
        let r1 = rng.gen_range(20e-9..80e-9);
        let geom = RingGeometry::new(*[2usize, 3, 4, 5].iter().nth(rng.gen_range(0..4)).unwrap(), r1, r1 / 6.0)
            .unwrap();
        let radius_mnp = rng.gen_range(5e-9..r1 / 3.0);
        let mnp = derive_mnp_at_resonance(&mat, radius_mnp).unwrap();
        let omega = mnp.omega_0 * rng.gen_range(0.85..1.1);
        let closed = bare_ring_dipole(&geom, &mnp, &mat, omega, 1.0).unwrap();
        let dense = dense_bare_ring(&geom, &mat, radius_mnp, omega, 1.0);
        let rel = (closed - dense).norm() / dense.norm();
        assert!(rel < 1e-10, "relative deviation {rel:.3e}");
    }
}

/// Stacked 8x8 dense solve of the loaded ring.
fn stacked_ring(sys_a: &DMatrix<C64>, sys_b: &DMatrix<C64>, sys_d: &DMatrix<C64>, c: &DVector<C64>, e: &DVector<C64>) -> DVector<C64> {
    let mut m = DMatrix::<C64>::zeros(8, 8);
    let mut rhs = DVector::<C64>::zeros(8);
    for r in 0..4 {
        for cc in 0..4 {
            m[(r, cc)] = sys_a[(r, cc)];
            m[(r, cc + 4)] = -sys_b[(r, cc)];
            m[(r + 4, cc)] = sys_b[(r, cc)];
            m[(r + 4, cc + 4)] = sys_d[(r, cc)];
        }
        rhs[r] = c[r];
        rhs[r + 4] = e[r];
    }
    m.lu().solve(&rhs).unwrap()
}

#[test]
fn block_elimination_vs_stacked_solve_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for _ in 0..300 {
        let mat = random_material(&mut rng);
        let r1 = rng.gen_range(25e-9..60e-9);
        let geom = RingGeometry::new(4, r1, rng.gen_range(3e-9..r1 / 3.0)).unwrap();
        let mnp = derive_mnp_at_resonance(&mat, rng.gen_range(5e-9..15e-9)).unwrap();
        let qd = QDParams::new(
            rng.gen_range(0.3e-9..1.5e-9),
            mnp.omega_0 - rng.gen_range(0.0..3e14),
            rng.gen_range(1e10..5e11),
        )
        .unwrap();
        let omega = mnp.omega_0 * rng.gen_range(0.9..1.05);
        let coup = ring_couplings(&geom, &mnp, &qd, &mat, omega).unwrap();
        let sys = build_ring_system(&geom, &mnp, &qd, &mat, &coup, omega, 1.0).unwrap();
        let sol = solve_ring(&sys).unwrap();

        let a = DMatrix::from_fn(4, 4, |r, c| sys.a[(r, c)]);
        let b = DMatrix::from_fn(4, 4, |r, c| sys.b[(r, c)]);
        let d = DMatrix::from_fn(4, 4, |r, c| sys.d[(r, c)]);
        let cv = DVector::from_fn(4, |r, _| sys.c_vec[r]);
        let ev = DVector::from_fn(4, |r, _| sys.e_vec[r]);
        let stacked = stacked_ring(&a, &b, &d, &cv, &ev);
        let p_ref = sys.chi.conj() * stacked[0];
        let q_ref = sys.mu * stacked[4];
        assert!((sol.p_mnp - p_ref).norm() < 1e-10 * p_ref.norm().max(1e-300));
        assert!((sol.p_qd - q_ref).norm() < 1e-10 * q_ref.norm().max(1e-300));
        assert!(sol.site_spread() < 1e-10);
    }
}

#[test]
fn coupling_g_sign_tracks_orientation_over_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for _ in 0..200 {
        let mat = random_material(&mut rng);
        let mnp = derive_mnp_at_resonance(&mat, rng.gen_range(5e-9..30e-9)).unwrap();
        let qd = QDParams::new(rng.gen_range(0.2e-9..2e-9), mnp.omega_0, 8e10).unwrap();
        let d = rng.gen_range(2.0 * mnp.radius..1e-7);
        let perp = coupling_g(&qd, &mnp, d, Orientation::Perpendicular).unwrap();
        let par = coupling_g(&qd, &mnp, d, Orientation::Parallel).unwrap();
        assert!(perp < 0.0 && par > 0.0);
        assert!((par + 2.0 * perp).abs() <= 1e-12 * par.abs());
    }
}

#[test]
fn ring_coupling_chain_matches_direct_reevaluation() {
    // J and I from the q_general chain equal a from-scratch evaluation of
    // the printed closed forms over random rings
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for _ in 0..200 {
        let mat = random_material(&mut rng);
        let mnp = derive_mnp_at_resonance(&mat, rng.gen_range(5e-9..20e-9)).unwrap();
        let qd = QDParams::new(rng.gen_range(0.3e-9..1.2e-9), mnp.omega_0, 8e10).unwrap();
        let r = rng.gen_range(20e-9..70e-9);
        let omega = rng.gen_range(3e15..5.5e15);
        let k = mat.wavenumber(omega);
        let j1 = coupling_j(&mnp, &mat, q_general(r, 4, 0, 1, k, &mat).unwrap());
        let expected = -12.0 * std::f64::consts::PI
            * fanoring::constants::EPS_0
            * mat.eps_b
            * mat.eps_b
            * mnp.radius.powi(3)
            * mnp.eta
            * q1_closed_form(r, k, &mat);
        assert!((j1 - expected).norm() < 1e-10 * expected.norm());
        let i2 = coupling_i(&qd, q_general(r, 4, 0, 2, k, &mat).unwrap());
        let expected_i = qd.mu * qd.mu / HBAR * q2_closed_form(r, k, &mat);
        assert!((i2 - expected_i).norm() < 1e-10 * expected_i.norm());
    }
}
