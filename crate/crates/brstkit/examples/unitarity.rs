//! Hermitian form, conjugations and positivity on the vacuum module, plus the good-action
//! conditions on the moment map.
//!
//! `cargo run --release --example unitarity -- 3` (argument is 2h_max).

use brstkit::brst::{check_good_action, Gauge};
use brstkit::fock::{FreeFields, GradedSpace};
use brstkit::lie::{load_preset, SymplecticRep};
use brstkit::suite::{unitarity, System};
use brstkit::unitarity::check_positive_definite;

fn main() {
    let h2: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let g = load_preset("sl2").unwrap();
    let rep = SymplecticRep::doublets(&g, 8).unwrap();
    let gauge = Gauge::new(g.clone(), Some(rep.clone()), false).unwrap();
    let sp = GradedSpace::enumerate(&gauge.ff, h2, 2_000_000).unwrap();
    let sys = System { name: "sl2 + 8 doublets".into(), ff: &gauge.ff, action: Some((&g, &rep)) };
    for c in unitarity(&sys, &sp).into_iter().chain(check_good_action(&gauge, h2)) {
        println!("{} {}{}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.witness.map(|w| format!(": {w}")).unwrap_or_default());
    }

    // the wrong sign in the adjoint table is caught at the first boson
    let mut bad = FreeFields::bosons(&SymplecticRep::doublets(&g, 1).unwrap());
    for row in bad.adj.iter_mut() {
        for x in row.iter_mut() {
            *x = -x.clone();
        }
    }
    let sp = GradedSpace::enumerate(&bad, 2, 1000).unwrap();
    for v in check_positive_definite(&bad, &sp) {
        println!("flipped adjoint {}: {}{}", v.grade, v.verdict, v.witness.map(|w| format!(" ({w})")).unwrap_or_default());
    }
}
