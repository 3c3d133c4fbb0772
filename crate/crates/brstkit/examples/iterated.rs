//! Iterated cohomology for two decoupled copies of the sl2 theory with eight doublets,
//! compared with the product of the single-copy cohomology.
//!
//! `cargo run --release --example iterated -- 2` (argument is 2h_max).

use brstkit::brst::{Gauge, RelativeComplex};
use brstkit::hodge::{cohomology_table, iterated_cohomology, kunneth};
use brstkit::lie::{load_preset, SymplecticRep};

fn main() {
    let h2: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let sl2 = load_preset("sl2").unwrap();
    let nf4 = SymplecticRep::doublets(&sl2, 8).unwrap();
    let single = RelativeComplex::build(Gauge::new(sl2.clone(), Some(nf4.clone()), false).unwrap(), h2, 1_000_000).unwrap();
    let one = cohomology_table(&single).unwrap();

    let g = load_preset("sl2+sl2").unwrap();
    let matter = SymplecticRep::direct_sum(&nf4, &nf4).unwrap();
    let cx = RelativeComplex::build(Gauge::new(g.clone(), Some(matter), false).unwrap(), h2, 1_000_000).unwrap();
    let parts: Vec<Vec<usize>> = (0..g.factors.len()).map(|i| g.factor_range(i).collect()).collect();
    let (rows, checks) = iterated_cohomology(&cx, &parts).unwrap();
    let product = kunneth(&one, &one, h2);
    println!("   h   d  iterated  total  product");
    for r in &rows {
        let p = product.get(&(r.h2, r.d)).copied().unwrap_or(0);
        println!("{:>4} {:>3} {:>9} {:>6} {:>8}", r.h, r.d, r.iterated, r.total, p);
    }
    for c in &checks {
        println!("{} {}", if c.ok { "ok  " } else { "FAIL" }, c.name);
    }
}
