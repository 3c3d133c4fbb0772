use brstkit::brst::{r_part, word_r_shift2};
use brstkit::fock::{FreeFields, GradedSpace};
use brstkit::lie::{check_twice_critical, load_preset, SymplecticRep};
use brstkit::ops::{apply_mode, basis_state, check_relation, extract_central_charge, extract_level, matter_current, stress_tensor, Op};
use brstkit::scalar::Scalar;
use num_traits::Zero;

fn doublets(n: usize) -> (brstkit::lie::LieAlgebra, SymplecticRep) {
    let g = load_preset("sl2").unwrap();
    let r = SymplecticRep::doublets(&g, n).unwrap();
    (g, r)
}

/// `Tr(T_a T_b)` in the defining representation of the sl2 preset.
fn defining_trace(a: usize, b: usize) -> Scalar {
    let g = load_preset("sl2").unwrap();
    let t = g.defining.unwrap();
    let mut s = Scalar::zero();
    for i in 0..2 {
        for j in 0..2 {
            s += &(&t[a][i][j] * &t[b][j][i]);
        }
    }
    s
}

#[test]
fn generator_modes_on_the_vacuum_module() {
    let (g, r) = doublets(1);
    let sb = FreeFields::bosons(&r);
    // q^1_0 q^2_{-1} |0> = Omega^{12} |0>
    assert_eq!(apply_mode(&sb, (0, 0), &vec![(1, -1)]), vec![(vec![], sb.pairing[0][1].clone())]);
    assert!(apply_mode(&sb, (0, 0), &vec![]).is_empty());

    let sf = FreeFields::ghosts(&g);
    let gl = sf.ghosts.clone().unwrap();
    let sp = GradedSpace::enumerate(&sf, 4, 10_000).unwrap();
    for a in 0..3 {
        for b in sp.blocks.values() {
            for m in &b.states {
                assert!(apply_mode(&sf, (gl.gen(true, a), 0), m).is_empty());
                assert!(apply_mode(&sf, (gl.gen(false, a), 0), m).is_empty());
            }
        }
        for b in 0..3 {
            // eta^{+,A}_1 eta^{-,B}_{-1} |0> = K^{AB} |0>
            let out = apply_mode(&sf, (gl.gen(true, a), 1), &vec![(gl.gen(false, b), -1)]);
            let want = Scalar::real(g.k_inv[a][b].clone());
            let got = out.iter().find(|(m, _)| m.is_empty()).map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero);
            assert_eq!(got, want, "A={a} B={b}");
        }
    }
}

#[test]
fn virasoro_zero_mode_measures_weight() {
    let (g, r) = doublets(1);
    let ff = FreeFields::bosons(&r).tensor(&FreeFields::ghosts(&g));
    let sp = GradedSpace::enumerate(&ff, 4, 100_000).unwrap();
    let l0 = stress_tensor(&ff, 0, 4).prepared();
    for (gr, b) in &sp.blocks {
        for m in &b.states {
            let v = l0.apply(&ff, &basis_state(m));
            assert!(v.iter().all(|(x, c)| x == m || c.is_zero()));
            assert_eq!(v.get(m).cloned().unwrap_or_else(Scalar::zero), Scalar::frac(gr.h2, 2));
        }
    }
    // [L_0, q^a_{-1}] = 1/2 q^a_{-1}
    for a in 0..2 {
        let q = Op::mode((a, -1));
        assert_eq!(check_relation(&ff, &sp, 3, &l0, &q, 1, &q.scale(&Scalar::frac(1, 2)).prepared()), None);
    }
    // [X, X] = 0 for even X
    assert_eq!(check_relation(&ff, &sp, 4, &l0, &l0, 1, &Op::zero()), None);
}

#[test]
fn current_zero_modes_rotate_the_bosons() {
    let (g, r) = doublets(2);
    let ff = FreeFields::bosons(&r);
    for a in 0..g.dim {
        let j0 = matter_current(&ff, &r, 0, a, 0, 2).prepared();
        assert!(j0.apply(&ff, &basis_state(&vec![])).values().all(|c| c.is_zero()));
        for b in 0..r.dim {
            let out = j0.apply(&ff, &basis_state(&vec![(b as u16, -1)]));
            for c in 0..r.dim {
                let got = out.get(&vec![(c as u16, -1)]).cloned().unwrap_or_else(Scalar::zero);
                assert_eq!(got, -r.rep[a][b][c].clone(), "J_{a},0 q^{b}: coefficient of q^{c}");
            }
        }
    }
}

#[test]
fn levels_follow_the_number_of_doublets() {
    // each doublet contributes -Tr/2, so eight give -4 Tr = -2 h^v Tr
    for copies in [1, 4, 8] {
        let (g, r) = doublets(copies);
        let ff = FreeFields::bosons(&r);
        let cur = |a: usize, n: i32| matter_current(&ff, &r, 0, a, n, 2).prepared();
        let k = extract_level(&ff, &cur, g.dim);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(k[a][b], &defining_trace(a, b) * &Scalar::frac(-(copies as i64), 2), "{copies} doublets k[{a}][{b}]");
            }
        }
        assert_eq!(check_twice_critical(Some(&r), &g).twice_critical, copies == 8);
    }
    // u1 without matter has no currents
    let ff = FreeFields::ghosts(&load_preset("u1").unwrap());
    assert!(extract_level(&ff, &|_, _| Op::zero(), 1)[0][0].is_zero());
}

#[test]
fn central_charges_are_additive() {
    let (g, r1) = doublets(1);
    assert_eq!(extract_central_charge(&FreeFields::bosons(&r1)), Scalar::int(-1));
    assert_eq!(extract_central_charge(&FreeFields::ghosts(&load_preset("u1").unwrap())), Scalar::int(-2));
    let (_, r8) = doublets(8);
    let sb = FreeFields::bosons(&r8);
    let sf = FreeFields::ghosts(&g);
    assert_eq!(extract_central_charge(&sb), Scalar::int(-8));
    assert_eq!(extract_central_charge(&sf), Scalar::int(-6));
    assert_eq!(extract_central_charge(&sb.tensor(&sf)), Scalar::int(-14));
}

#[test]
fn r_degree_components() {
    let (g, r) = doublets(1);
    let ff = FreeFields::bosons(&r);
    assert_eq!(word_r_shift2(&[(0, -1)]), 1);
    assert!(stress_tensor(&ff, 0, 4).words.iter().all(|(_, w)| word_r_shift2(w) == 0));
    for a in 0..g.dim {
        for n in -2..=2 {
            let j = matter_current(&ff, &r, 0, a, n, 4);
            // only R-shifts 1, 0, -1 occur
            assert!(j.words.iter().all(|(_, w)| [-2, 0, 2].contains(&word_r_shift2(w))));
            let top = r_part(&ff, &j, 2);
            assert_eq!(top.is_zero(), n >= 0, "J^[1]_{a},{n}");
        }
    }
}
