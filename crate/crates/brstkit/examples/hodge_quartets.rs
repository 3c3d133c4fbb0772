//! Hodge decompositions, quartets, the Q-Q+ lemma, USp(2) and formality for the sl2 theory
//! with eight doublets.
//!
//! `cargo run --release --example hodge_quartets -- 3` (argument is 2h_max).

use brstkit::brst::{Check, Gauge, RelativeComplex};
use brstkit::hodge::{check_ddc_lemma, formality_dims, hodge_report, quartet_decompose, usp2_on_cohomology};
use brstkit::lie::{load_preset, SymplecticRep};

fn report(checks: &[Check]) {
    let bad: Vec<_> = checks.iter().filter(|c| !c.ok).collect();
    println!("  {} checks, {} failed", checks.len(), bad.len());
    for c in bad {
        println!("  FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
    }
}

fn main() {
    let h2: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let g = load_preset("sl2").unwrap();
    let rep = SymplecticRep::doublets(&g, 8).unwrap();
    let cx = RelativeComplex::build(Gauge::new(g, Some(rep), false).unwrap(), h2, 1_000_000).unwrap();
    let ops = cx.operators().unwrap();

    let hr = hodge_report(&cx, &ops);
    println!("   h   d  chain  harm  Q+  Qb+  Q-  Qb-  H-  H+  quartets");
    for r in &hr.rows {
        println!(
            "{:>4} {:>3} {:>6} {:>5} {:>3} {:>4} {:>3} {:>4} {:>3} {:>3} {:>9}",
            r.h, r.d, r.chain, r.harmonic, r.im_q_plus, r.im_qbar_plus, r.im_q_minus, r.im_qbar_minus, r.h_minus, r.h_plus, r.quartets
        );
    }
    report(&hr.checks);

    for h in cx.slices.keys() {
        let q = quartet_decompose(&cx, &ops, *h).unwrap();
        let mut evs: Vec<_> = q.quartets.iter().map(|x| x.eigenvalue.clone().unwrap_or("?".into())).collect();
        evs.dedup();
        println!("h = {}: {} harmonic, {} quartets, eigenvalues {:?}", q.h, q.harmonic, q.quartets.len(), evs);
        for n in &q.notes {
            println!("  note: {n}");
        }
        report(&q.checks);
    }

    let (_, c) = check_ddc_lemma(&cx, &ops);
    println!("Q-Q+ lemma");
    report(&c);
    let (blocks, c) = usp2_on_cohomology(&cx, &ops);
    println!("USp(2) on harmonic states");
    for b in &blocks {
        println!("  h = {}: Pi weights {:?}", b.h, b.weights);
    }
    report(&c);
    let (_, c) = formality_dims(&cx, &ops);
    println!("formality");
    report(&c);
}
