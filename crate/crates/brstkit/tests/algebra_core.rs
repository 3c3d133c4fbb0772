use brstkit::lie::{check_twice_critical, dmul, dsub, load_preset, LieAlgebra, SymplecticRep};
use brstkit::scalar::{rat, Rat, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn jacobi_violation(g: &LieAlgebra) -> Option<(usize, usize, usize, usize)> {
    let n = g.dim;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    let mut s = Rat::zero();
                    for d in 0..n {
                        s += &g.f[a][b][d] * &g.f[d][c][e] + &g.f[b][c][d] * &g.f[d][a][e] + &g.f[c][a][d] * &g.f[d][b][e];
                    }
                    if !s.is_zero() {
                        return Some((a, b, c, e));
                    }
                }
            }
        }
    }
    None
}

#[test]
fn presets_satisfy_jacobi_and_invariance() {
    for name in ["u1", "sl2", "sl3", "sl2+u1", "sl2+sl2"] {
        let g = load_preset(name).unwrap();
        assert_eq!(jacobi_violation(&g), None, "{name}");
        for a in 0..g.dim {
            for b in 0..g.dim {
                assert_eq!(g.k[a][b], g.k[b][a]);
                for c in 0..g.dim {
                    assert_eq!(g.f[a][b][c], -g.f[b][a][c].clone(), "{name}");
                    // f_abc = f_ab^d K_dc totally antisymmetric
                    assert_eq!(g.f_low(a, b, c), g.f_low(b, c, a), "{name} ({a},{b},{c})");
                }
            }
        }
    }
}

#[test]
fn sl2_structure_constants_come_from_the_matrices() {
    let g = load_preset("sl2").unwrap();
    assert_eq!(g.dim, 3);
    assert_eq!(g.factors[0].dual_coxeter, Some(2));
    let t = g.defining.as_ref().unwrap();
    for a in 0..3 {
        for b in 0..3 {
            let comm = dsub(&dmul(&t[a], &t[b]), &dmul(&t[b], &t[a]));
            for i in 0..2 {
                for j in 0..2 {
                    let mut want = Scalar::zero();
                    for c in 0..3 {
                        want += &(&Scalar::real(g.f[a][b][c].clone()) * &t[c][i][j]);
                    }
                    assert_eq!(comm[i][j], want);
                }
            }
        }
    }
}

#[test]
fn u1_preset() {
    let g = load_preset("u1").unwrap();
    assert_eq!(g.dim, 1);
    assert!(g.f[0][0][0].is_zero());
    assert_eq!(g.k, vec![vec![Rat::one()]]);
}

#[test]
fn broken_antisymmetry_is_reported_with_indices() {
    let z = || vec![vec![Rat::zero(); 3]; 3];
    let mut f = vec![z(), z(), z()];
    f[0][1][2] = Rat::one();
    f[1][0][2] = Rat::one();
    let k = (0..3).map(|i| (0..3).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    assert_eq!(LieAlgebra::from_raw(f, k).unwrap_err().to_string(), "antisymmetry violated at (1,2,3)");
}

#[test]
fn only_eight_doublets_are_twice_critical() {
    let g = load_preset("sl2").unwrap();
    for copies in 1..=10 {
        let rep = SymplecticRep::doublets(&g, copies).unwrap();
        rep.validate(&g).unwrap();
        let r = check_twice_critical(Some(&rep), &g);
        assert_eq!(r.twice_critical, copies == 8, "{copies} copies: {r}");
    }
    assert!(check_twice_critical(None, &load_preset("u1").unwrap()).twice_critical);
    assert!(!check_twice_critical(None, &g).twice_critical);
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| Scalar::new(rat(a, b), rat(c, d)))
}

proptest! {
    #[test]
    fn gaussian_rationals_form_a_field(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        if !y.is_zero() {
            prop_assert_eq!(&(&x / &y) * &y, x.clone());
            prop_assert_eq!(&y * &y.inv(), Scalar::one());
        }
        prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
    }
}
