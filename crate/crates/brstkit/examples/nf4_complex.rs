//! Build the sl2 gauge theory with eight doublets and run the Kahler-package checks.
//!
//! `cargo run --release --example nf4_complex -- 3` (argument is 2h_max).

use brstkit::brst::{check_explicit_split, check_kahler, check_split, Gauge, RelativeComplex};
use brstkit::fock::half;
use brstkit::lie::{load_preset, SymplecticRep};
use std::time::Instant;

fn main() {
    let h2: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let g = load_preset("sl2").unwrap();
    let rep = SymplecticRep::doublets(&g, 8).unwrap();
    let t = Instant::now();
    let cx = RelativeComplex::build(Gauge::new(g, Some(rep), false).unwrap(), h2, 1_000_000).unwrap();
    println!("ambient dim {}, built in {:?}", cx.space.dim(), t.elapsed());
    for ((h, d), n) in cx.dims() {
        println!("  h = {:>3}  d = {:>2}  dim {}", half(h), d, n);
    }
    let t = Instant::now();
    let ops = cx.operators().unwrap();
    println!("operators in {:?}", t.elapsed());
    let t = Instant::now();
    let mut checks = check_kahler(&cx, &ops);
    checks.extend(check_split(&cx, &ops));
    checks.extend(check_explicit_split(&cx, &ops).unwrap());
    for c in &checks {
        println!("{} {}{}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.witness.as_deref().map(|w| format!(": {w}")).unwrap_or_default());
    }
    println!("checks in {:?}", t.elapsed());
}
