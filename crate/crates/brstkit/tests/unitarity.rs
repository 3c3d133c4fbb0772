use brstkit::fock::{FreeFields, GradedSpace};
use brstkit::lie::{load_preset, SymplecticRep};
use brstkit::ops::{basis_state, Op, State};
use brstkit::scalar::Scalar;
use brstkit::unitarity::{
    apply_s, apply_sigma, check_op_adjoint, check_positive_definite, check_quaternionic, check_spin_statistics, hermitian, hermitian_monomial, mode_adjoint, rho, rho_monomial,
};
use num_traits::{One, Zero};

fn sb() -> FreeFields {
    FreeFields::bosons(&SymplecticRep::doublets(&load_preset("sl2").unwrap(), 1).unwrap())
}

fn scaled(m: Vec<(u16, i32)>, c: Scalar) -> State {
    let mut s = State::new();
    s.insert(m, c);
    s
}

fn clean(s: State) -> State {
    s.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

#[test]
fn sigma_phases() {
    let ff = sb();
    assert_eq!(apply_sigma(&ff, &basis_state(&vec![])), basis_state(&vec![]));
    assert_eq!(apply_sigma(&ff, &basis_state(&vec![(0, -1)])), scaled(vec![(0, -1)], Scalar::i()));
    // R = 1
    assert_eq!(apply_sigma(&ff, &basis_state(&vec![(0, -1), (1, -1)])), scaled(vec![(0, -1), (1, -1)], Scalar::int(-1)));
}

#[test]
fn rho_on_boson_products() {
    let ff = sb();
    let rep = SymplecticRep::doublets(&load_preset("sl2").unwrap(), 1).unwrap();
    assert_eq!(rho(&ff, &basis_state(&vec![])), basis_state(&vec![]));
    // rho(q^a_{-1}|0>) = -Omega_ab q^b_{-1}|0>
    for a in 0..2u16 {
        let mut want = State::new();
        for b in 0..2u16 {
            let c = Scalar::real(-rep.omega[a as usize][b as usize].clone());
            if !c.is_zero() {
                want.insert(vec![(b, -1)], c);
            }
        }
        assert_eq!(clean(rho_monomial(&ff, &vec![(a, -1)])), want);
    }
    // two factors: (-1)^2 Omega_{0b} Omega_{1c} q^b q^c = Omega_01 Omega_10 q^1 q^0
    let got = clean(rho_monomial(&ff, &vec![(0, -1), (1, -1)]));
    let c = Scalar::real(&rep.omega[0][1] * &rep.omega[1][0]);
    assert_eq!(got, scaled(vec![(0, -1), (1, -1)], c));
}

#[test]
fn rho_squares_to_s() {
    let g = load_preset("sl2").unwrap();
    let ff = sb().tensor(&FreeFields::ghosts(&g));
    let gl = ff.ghosts.clone().unwrap();
    let eta = basis_state(&vec![(gl.gen(true, 0), -1)]);
    assert_eq!(clean(rho(&ff, &rho(&ff, &eta))), clean(apply_s(&ff, &eta)));
    assert_eq!(clean(apply_s(&ff, &eta)), scaled(vec![(gl.gen(true, 0), -1)], Scalar::int(-1)));
    let sp = GradedSpace::enumerate(&ff, 4, 100_000).unwrap();
    check_quaternionic(&ff, &sp).unwrap();
    check_spin_statistics(&ff, &sp).unwrap();
}

#[test]
fn hermitian_form_basics() {
    let ff = sb();
    assert_eq!(hermitian_monomial(&ff, &vec![], &vec![]), Scalar::one());
    assert_eq!(hermitian_monomial(&ff, &vec![(0, -1)], &vec![(0, -1)]), Scalar::one());
    let sp = GradedSpace::enumerate(&ff, 4, 10_000).unwrap();
    let states: Vec<_> = sp.blocks.iter().flat_map(|(g, b)| b.states.iter().map(move |m| (*g, m.clone()))).collect();
    for (gx, x) in &states {
        for (gy, y) in &states {
            let v = hermitian(&ff, &basis_state(x), &basis_state(y));
            if (gx.h2, gx.r2) != (gy.h2, gy.r2) {
                assert!(v.is_zero());
            }
            assert_eq!(v, hermitian(&ff, &basis_state(y), &basis_state(x)).conj());
        }
    }
}

#[test]
fn mode_adjoints_from_the_table() {
    let ff = sb();
    let rep = SymplecticRep::doublets(&load_preset("sl2").unwrap(), 1).unwrap();
    // (q^a_{-1})^dagger = Omega_ab q^b_0
    for a in 0..2u16 {
        let terms: Vec<(Scalar, Vec<(u16, i32)>)> = (0..2u16).map(|b| (Scalar::real(rep.omega[a as usize][b as usize].clone()), vec![(b, 0)])).filter(|(c, _)| !c.is_zero()).collect();
        assert_eq!(mode_adjoint(&ff, (a, -1)).words, Op::from_terms(terms).words);
    }
    let g = load_preset("sl2").unwrap();
    let full = ff.tensor(&FreeFields::ghosts(&g));
    let sp = GradedSpace::enumerate(&full, 4, 100_000).unwrap();
    for md in [(0u16, -1), (1, -2), (0, 1), (2, -1), (5, -1), (3, 1), (4, 2)] {
        check_op_adjoint(&full, &sp, &Op::mode(md)).unwrap();
    }
}

#[test]
fn free_fields_are_positive_definite() {
    let g = load_preset("sl2").unwrap();
    for ff in [sb(), FreeFields::ghosts(&g)] {
        let sp = GradedSpace::enumerate(&ff, 4, 100_000).unwrap();
        for v in check_positive_definite(&ff, &sp) {
            assert_eq!(v.verdict, "positive", "{}", v.grade);
        }
    }
}

#[test]
fn flipped_omega_fails_at_weight_half() {
    // flip the sign of Omega in the adjoint table only, keeping the commutators
    let mut ff = sb();
    for row in ff.adj.iter_mut() {
        for x in row.iter_mut() {
            *x = -x.clone();
        }
    }
    let sp = GradedSpace::enumerate(&ff, 2, 1000).unwrap();
    let verdicts = check_positive_definite(&ff, &sp);
    let first = verdicts.iter().find(|v| v.verdict != "positive").unwrap();
    assert_eq!(first.grade, "(h=1/2, R=1/2, d=0)");
    assert_eq!(first.verdict, "negative");
    assert_eq!(first.witness.as_deref(), Some("leading minor 1 = -1 (state q1_{-1} |0>)"));
}
