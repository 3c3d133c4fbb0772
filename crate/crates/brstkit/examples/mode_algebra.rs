//! Mode algebra of the free fields: brackets, Virasoro and affine currents, levels and central
//! charges for sl2 with n doublets.
//!
//! `cargo run --release --example mode_algebra -- 8` (argument is the number of doublets).

use brstkit::fock::FreeFields;
use brstkit::lie::{check_twice_critical, load_preset, SymplecticRep};
use brstkit::suite::{invariants, mode_algebra, System};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let g = load_preset("sl2").unwrap();
    let rep = SymplecticRep::doublets(&g, n).unwrap();
    let ff = FreeFields::bosons(&rep).tensor(&FreeFields::ghosts(&g));
    let inv = invariants(&ff, Some((&g, &rep)));
    println!("{n} doublets: c = {}, level / K = {}", inv.central_charge, inv.level_over_k.as_deref().unwrap_or("not proportional"));
    println!("{}", check_twice_critical(Some(&rep), &g));

    let sys = System { name: format!("sl2 + {n} doublets"), ff: &ff, action: Some((&g, &rep)) };
    // brackets are checked on states up to h = 1
    for c in mode_algebra(&sys, 2).unwrap() {
        println!("{} {}{}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.witness.map(|w| format!(": {w}")).unwrap_or_default());
    }
}
