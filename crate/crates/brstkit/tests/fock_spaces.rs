use brstkit::config::{nf4, triv};
use brstkit::fock::{FockError, FreeFields, Grade, GradedSpace};
use brstkit::lie::{load_preset, SymplecticRep};

/// Coefficients of `prod_k (1 - q^{w_k})^{-n}` (bosons) or `prod_k (1 + q^{w_k})^n` (fermions) in
/// powers of `q^{1/2}`, up to `q^{top/2}`.
fn partition_oracle(n: usize, odd: bool, top: usize) -> Vec<u64> {
    let mut series = vec![0u64; top + 1];
    series[0] = 1;
    // doubled weights: 1, 3, 5, ... for bosons, 2, 4, ... for fermions
    let weights: Vec<usize> = if odd { (1..).map(|k| 2 * k).take_while(|&w| w <= top).collect() } else { (0..).map(|k| 2 * k + 1).take_while(|&w| w <= top).collect() };
    for w in weights {
        for _ in 0..n {
            if odd {
                for e in (w..=top).rev() {
                    series[e] += series[e - w];
                }
            } else {
                for e in w..=top {
                    series[e] += series[e - w];
                }
            }
        }
    }
    series
}

fn dims_by_weight(sp: &GradedSpace) -> Vec<u64> {
    let ch = sp.character();
    (0..=sp.h2_max).map(|h2| ch.dim_at_h(h2) as u64).collect()
}

#[test]
fn boson_dimensions_match_partition_count() {
    let g = load_preset("sl2").unwrap();
    for copies in [1, 2, 3] {
        let ff = FreeFields::bosons(&SymplecticRep::doublets(&g, copies).unwrap());
        let sp = GradedSpace::enumerate(&ff, 6, 1_000_000).unwrap();
        assert_eq!(dims_by_weight(&sp), partition_oracle(2 * copies, false, 6), "{copies} doublets");
    }
}

#[test]
fn fermion_dimensions_match_partition_count() {
    for name in ["u1", "sl2", "sl2+u1"] {
        let g = load_preset(name).unwrap();
        let sp = GradedSpace::enumerate(&FreeFields::ghosts(&g), 6, 1_000_000).unwrap();
        assert_eq!(dims_by_weight(&sp), partition_oracle(2 * g.dim, true, 6), "{name}");
    }
    let sl2 = GradedSpace::enumerate(&FreeFields::ghosts(&load_preset("sl2").unwrap()), 2, 100).unwrap();
    assert_eq!(sl2.character().dim_at_h(2), 6);
}

#[test]
fn tensor_product_multiplies_characters() {
    let g = load_preset("sl2").unwrap();
    let b = FreeFields::bosons(&SymplecticRep::doublets(&g, 2).unwrap());
    let f = FreeFields::ghosts(&g);
    let sp = GradedSpace::enumerate(&b.tensor(&f), 5, 1_000_000).unwrap();
    let (sb, sf) = (partition_oracle(4, false, 5), partition_oracle(6, true, 5));
    let want: Vec<u64> = (0..=5).map(|e| (0..=e).map(|i| sb[i] * sf[e - i]).sum()).collect();
    assert_eq!(dims_by_weight(&sp), want);
}

#[test]
fn low_grades_and_characters() {
    let g = load_preset("sl2").unwrap();
    let sb = FreeFields::bosons(&SymplecticRep::doublets(&g, 1).unwrap());
    let sp = GradedSpace::enumerate(&sb, 1, 100).unwrap();
    assert_eq!(sp.block(&Grade { h2: 1, r2: 1, d: 0 }).unwrap().len(), 2);
    assert_eq!(sp.block(&Grade::vacuum()).unwrap().states, vec![vec![]]);
    assert_eq!(sp.character().series(), "1 + 2·q^{1/2} t^{1/2}");

    let sf = FreeFields::ghosts(&load_preset("u1").unwrap());
    assert_eq!(GradedSpace::enumerate(&sf, 2, 100).unwrap().character().series(), "1 + q t^{1/2} z + q t^{1/2} z^{-1}");
    assert_eq!(GradedSpace::enumerate(&FreeFields::empty(), 0, 1).unwrap().character().series(), "1");
}

#[test]
fn shipped_configs_obey_spin_statistics_and_bps() {
    for (c, h2) in [(nf4(), 3), (triv(), 4)] {
        let m = c.validate().unwrap();
        let ff = m.free_fields();
        let sp = GradedSpace::enumerate(&ff, h2, 1_000_000).unwrap();
        for (g, b) in &sp.blocks {
            assert!(g.h2 >= 0 && g.r2 >= 0);
            assert!(g.bps(), "{g}");
            for s in &b.states {
                assert_eq!(ff.grade(s), *g);
                // Grassmann parity = 2(h + R) mod 2
                assert_eq!(ff.parity(s) as i64 % 2, (g.h2 + g.r2) % 2, "{}", ff.fmt_monomial(s));
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let m = nf4().validate().unwrap();
    let ff = m.free_fields();
    let a = GradedSpace::enumerate(&ff, 3, 1_000_000).unwrap();
    let b = GradedSpace::enumerate(&ff, 3, 1_000_000).unwrap();
    for ((ga, ba), (gb, bb)) in a.blocks.iter().zip(&b.blocks) {
        assert_eq!(ga, gb);
        assert_eq!(ba.states, bb.states);
    }
}

#[test]
fn budget_error_names_the_grade() {
    let g = load_preset("sl2").unwrap();
    let ff = FreeFields::bosons(&SymplecticRep::doublets(&g, 1).unwrap());
    match GradedSpace::enumerate(&ff, 8, 5) {
        Err(FockError::Budget { budget, grade }) => {
            assert_eq!(budget, 5);
            assert!(grade.h2 > 0);
        }
        Ok(_) => panic!("budget not enforced"),
    }
}
