//! Hall-Littlewood rings of free fields and the Koszul model of the sl2 reduction with eight
//! doublets, compared with the HL sector of the BRST complex.
//!
//! `cargo run --release --example hl_koszul -- 2` (argument is 2h_max for the complex).

use brstkit::brst::{Gauge, RelativeComplex};
use brstkit::fock::FreeFields;
use brstkit::hl::{check_comoment, check_pva_kahler, hl_sector, HlRing, Koszul};
use brstkit::lie::{load_preset, SymplecticRep};
use brstkit::scalar::rat_int;

fn main() {
    let h2: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);

    let eps = vec![vec![rat_int(0), rat_int(1)], vec![rat_int(-1), rat_int(0)]];
    let c2 = SymplecticRep::new(eps, Vec::new(), vec![0, 0]).unwrap();
    let sb = HlRing::build(&FreeFields::bosons(&c2), 3).unwrap();
    println!("HL(Sb[C^2]) dims by degree: {:?}", sb.dims_by_degree());
    for c in sb.check_axioms(2).into_iter().chain([sb.check_against_modes(2)]) {
        println!("  {} {}", if c.ok { "ok  " } else { "FAIL" }, c.name);
    }
    let u1 = load_preset("u1").unwrap();
    let sf = HlRing::build(&FreeFields::ghosts(&u1), 3).unwrap();
    println!("HL(Sf[C^2 x u1]) dims by degree: {:?}", sf.dims_by_degree());

    let g = load_preset("sl2").unwrap();
    let rep = SymplecticRep::doublets(&g, 8).unwrap();
    let c = check_comoment(&rep, &g);
    println!("{} {}", if c.ok { "ok  " } else { "FAIL" }, c.name);
    let kz = Koszul::new(&g, Some(&rep));
    println!("Sym^2(C^16)^G = {}", kz.quadratic_invariants());
    let (rows, checks) = kz.reduce(h2 as usize);
    for r in &rows {
        println!("  Koszul degree {} R {} d {}: invariants {}, cohomology {}", r.degree, r.r, r.d, r.invariants, r.cohomology);
    }
    for c in checks.iter().filter(|c| !c.ok) {
        println!("  FAIL {}", c.name);
    }

    let cx = RelativeComplex::build(Gauge::new(g, Some(rep), false).unwrap(), h2, 1_000_000).unwrap();
    let ops = cx.operators().unwrap();
    for r in hl_sector(&cx, &ops) {
        println!("  HL sector h {} R {} d {}: chain {}, H(Q+) {}, harmonic {}", r.h, r.r, r.d, r.chain, r.cohomology, r.harmonic);
    }
    for c in check_pva_kahler(&cx, &ops) {
        println!("  {} {}{}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.witness.map(|w| format!(": {w}")).unwrap_or_default());
    }
}
