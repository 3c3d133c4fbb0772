use std::collections::BTreeMap;

use brstkit::brst::{check_explicit_split, check_good_action, check_kahler, check_split, RelativeComplex};
use brstkit::config::{nf4, triv};
use brstkit::ops::basis_state;
use brstkit::scalar::Scalar;
use num_traits::Zero;

const BUDGET: usize = 2_000_000;

/// sl2 weight-space count of the invariants in the vacuum module of 8 doublets and the sl2
/// ghosts: per `(h2, d)`, `mult(weight 0) - mult(weight 2)`.
fn invariant_oracle(h2_max: i64) -> BTreeMap<(i64, i64), usize> {
    // (h2, d, weight) -> multiplicity
    let mut series: BTreeMap<(i64, i64, i64), i64> = BTreeMap::new();
    series.insert((0, 0, 0), 1);
    let mut factors = Vec::new();
    for level in (1..=h2_max).step_by(2) {
        for w in [1, -1] {
            for _ in 0..8 {
                factors.push((false, level, 0, w));
            }
        }
    }
    for level in (2..=h2_max).step_by(2) {
        for d in [1, -1] {
            for w in [2, 0, -2] {
                factors.push((true, level, d, w));
            }
        }
    }
    for (odd, h, d, w) in factors {
        let mut next = series.clone();
        for (&(h0, d0, w0), &m) in &series {
            let mut k = 1;
            while h0 + k * h <= h2_max && (!odd || k == 1) {
                *next.entry((h0 + k * h, d0 + k * d, w0 + k * w)).or_insert(0) += m;
                k += 1;
            }
        }
        series = next;
    }
    let mut out = BTreeMap::new();
    for (&(h, d, w), &m) in &series {
        if w == 0 {
            let top = series.get(&(h, d, 2)).copied().unwrap_or(0);
            if m - top > 0 {
                out.insert((h, d), (m - top) as usize);
            }
        }
    }
    out
}

fn nf4_complex(h2: i64) -> RelativeComplex {
    let m = nf4().validate().unwrap().with_h_max(&format!("{}/2", h2)).unwrap();
    RelativeComplex::build(m.gauge().unwrap(), h2, BUDGET).unwrap()
}

#[test]
fn relative_dimensions_match_the_weight_count() {
    let cx = nf4_complex(4);
    assert_eq!(cx.dims().into_iter().filter(|(_, n)| *n > 0).collect::<BTreeMap<_, _>>(), invariant_oracle(4));
    assert_eq!(cx.dims().get(&(1, 0)).copied().unwrap_or(0), 0);
    assert_eq!(cx.dims()[&(2, 0)], 28);
}

#[test]
fn trivial_model_keeps_every_state_and_has_no_differential() {
    let m = triv().validate().unwrap();
    let cx = RelativeComplex::build(m.gauge().unwrap(), m.h2_max, BUDGET).unwrap();
    let mut ambient = BTreeMap::new();
    for (g, b) in &cx.space.blocks {
        *ambient.entry((g.h2, g.d)).or_insert(0) += b.len();
    }
    assert_eq!(cx.dims(), ambient);
    let o = cx.operators().unwrap();
    assert!(o.qp.is_zero() && o.qm.is_zero() && o.lap.is_zero());
    for c in check_kahler(&cx, &o).into_iter().chain(check_split(&cx, &o)) {
        assert!(c.ok, "{}: {:?}", c.name, c.witness);
    }
    for c in check_good_action(&cx.gauge, m.h2_max) {
        assert!(c.ok, "{}", c.name);
    }
}

#[test]
fn sl2_triple_on_ghost_states() {
    let m = nf4().validate().unwrap();
    let gauge = m.gauge().unwrap();
    let (pi, l, _) = gauge.sl2_triple(&gauge.all_indices(), 4);
    let (pi, l) = (pi.prepared(), l.prepared());
    let vac = basis_state(&vec![]);
    assert!(l.apply(&gauge.ff, &vac).values().all(|c| c.is_zero()));
    for a in 0..3 {
        // Pi counts eta^- minus eta^+
        for (plus, eig) in [(false, 1), (true, -1)] {
            let st = basis_state(&vec![(gauge.gl.gen(plus, a), -1)]);
            let mut want = st.clone();
            want.values_mut().for_each(|c| *c = Scalar::int(eig));
            let got: brstkit::ops::State = pi.apply(&gauge.ff, &st).into_iter().filter(|(_, c)| !c.is_zero()).collect();
            assert_eq!(got, want);
        }
    }
}

#[test]
fn differential_identities_hold_on_nf4() {
    let cx = nf4_complex(4);
    let o = cx.operators().unwrap();
    assert!(!o.qp.is_zero());
    let checks = check_kahler(&cx, &o).into_iter().chain(check_split(&cx, &o)).chain(check_explicit_split(&cx, &o).unwrap());
    for c in checks {
        assert!(c.ok, "{}: {:?}", c.name, c.witness);
    }
}

#[test]
fn good_action_and_its_failure_when_rho_flips_the_current() {
    let m = nf4().validate().unwrap();
    let gauge = m.gauge().unwrap();
    for c in check_good_action(&gauge, 4) {
        assert!(c.ok, "{}: {:?}", c.name, c.witness);
    }
    // rho' = i rho flips the sign of every bilinear, so rho(J) = -J
    let mut bad = gauge.clone();
    for row in bad.ff.conj.iter_mut() {
        for x in row.iter_mut() {
            *x = &*x * &Scalar::i();
        }
    }
    let checks = check_good_action(&bad, 4);
    assert!(checks[0].ok && checks[1].ok);
    assert!(!checks[2].ok);
    assert_eq!(checks[2].witness.as_deref(), Some("rho(J_1) != J_1"));
}
