use brstkit::brst::{split_qs, RelativeComplex};
use brstkit::config::{nf4, triv};
use brstkit::fock::FreeFields;
use brstkit::hl::{check_comoment, check_pva_kahler, gr_modes, hl_sector, Field, HlError, HlRing, Koszul};
use brstkit::lie::{load_preset, SymplecticRep};
use brstkit::ops::{basis_state, Op, State};
use brstkit::scalar::Scalar;
use num_traits::Zero;

fn sb() -> (FreeFields, SymplecticRep) {
    let r = SymplecticRep::doublets(&load_preset("sl2").unwrap(), 1).unwrap();
    (FreeFields::bosons(&r), r)
}

fn clean(s: State) -> State {
    s.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

#[test]
fn graded_modes_split_by_r_degree() {
    let (ff, r) = sb();
    for n in -2..=2 {
        let y = gr_modes(&ff, Some(&r), Field::Gen(0), n, 4);
        assert_eq!(y.plus.is_zero(), n >= 0, "n={n}");
        match y.minus {
            Some(m) => assert_eq!(m.words, Op::mode((0, n)).words),
            None => assert!(n < 0),
        }
        let v = gr_modes(&ff, None, Field::Vacuum, n, 4);
        assert!(v.minus.map_or(true, |m| m.is_zero()));
    }
    // Y- of J_A at n = 0 rotates q by -T_A
    for a in 0..3 {
        let j = gr_modes(&ff, Some(&r), Field::Current(a), 0, 4);
        assert!(j.plus.is_zero());
        let jm = j.minus.unwrap().prepared();
        for b in 0..2 {
            let out = jm.apply(&ff, &basis_state(&vec![(b as u16, -1)]));
            for c in 0..2 {
                let got = out.get(&vec![(c as u16, -1)]).cloned().unwrap_or_else(Scalar::zero);
                assert_eq!(got, -r.rep[a][b][c].clone());
            }
        }
    }
}

#[test]
fn free_field_hl_rings() {
    let (ff, _) = sb();
    let hl = HlRing::build(&ff, 3).unwrap();
    assert_eq!(hl.dims_by_degree(), vec![1, 2, 3, 4]);
    let q = |a: u16| basis_state(&vec![(a, -1)]);
    assert_eq!(clean(hl.bracket(&q(0), &q(1))), basis_state(&vec![]).into_iter().map(|(m, _)| (m, ff.pairing[0][1].clone())).collect());
    assert_eq!(clean(hl.bracket(&q(1), &q(0))), basis_state(&vec![]).into_iter().map(|(m, _)| (m, ff.pairing[1][0].clone())).collect());
    assert!(clean(hl.bracket(&q(0), &q(0))).is_empty());
    assert!(hl.check_axioms(2).iter().all(|c| c.ok));
    assert!(hl.check_against_modes(2).ok);

    let gh = HlRing::build(&FreeFields::ghosts(&load_preset("u1").unwrap()), 3).unwrap();
    assert_eq!(gh.dims_by_degree(), vec![1, 1, 0, 0]);
}

#[test]
fn bps_violation_is_rejected() {
    let (mut ff, _) = sb();
    ff.gens[0].d = 2;
    assert!(matches!(HlRing::build(&ff, 2), Err(HlError::Bps(..))));
}

#[test]
fn koszul_reduction() {
    let u1 = load_preset("u1").unwrap();
    let (rows, checks) = Koszul::new(&u1, None).reduce(3);
    assert!(checks.iter().all(|c| c.ok));
    let coh: Vec<usize> = rows.iter().filter(|r| r.cohomology > 0).map(|r| r.cohomology).collect();
    assert_eq!(coh, vec![1, 1]);

    let m = nf4().validate().unwrap();
    let rep = m.bosons.clone().unwrap();
    assert!(check_comoment(&rep, &m.g).ok);
    let k = Koszul::new(&m.g, Some(&rep));
    // weight count on Sym^2 of 8 doublets: mult(0) - mult(2) = 8*8 - 8*9/2
    let oracle = 8 * 8 - 8 * 9 / 2;
    assert_eq!(k.quadratic_invariants(), oracle);
    let (rows, checks) = k.reduce(2);
    assert!(checks.iter().all(|c| c.ok));
    let top = rows.iter().find(|r| r.degree == 2 && r.d == 0).unwrap();
    assert_eq!(top.cohomology, oracle);
}

#[test]
fn trivial_model_pva_checks() {
    let m = triv().validate().unwrap();
    let cx = RelativeComplex::build(m.gauge().unwrap(), m.h2_max, 100_000).unwrap();
    let o = cx.operators().unwrap();
    assert!(split_qs(&cx, &o.qp).q.is_zero() && split_qs(&cx, &o.qm).q.is_zero());
    for c in check_pva_kahler(&cx, &o) {
        assert!(c.ok, "{}", c.name);
    }
    for r in hl_sector(&cx, &o) {
        assert_eq!((r.cohomology, r.harmonic), (r.chain, r.chain));
    }
}
