//! Graded Fock spaces of symplectic bosons and bc ghosts, and their characters.
//!
//! `cargo run --release --example fock_characters -- 4` (argument is 2h_max).

use brstkit::fock::{half, FreeFields, GradedSpace};
use brstkit::lie::{load_preset, SymplecticRep};

fn main() {
    let h2: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let g = load_preset("sl2").unwrap();
    let sb = FreeFields::bosons(&SymplecticRep::doublets(&g, 1).unwrap());
    let sf = FreeFields::ghosts(&g);
    for (name, ff) in [("Sb[C^2]", &sb), ("Sf[C^2 x sl2]", &sf)] {
        let sp = GradedSpace::enumerate(ff, h2, 1_000_000).unwrap();
        println!("{name}: {}", sp.character().series());
    }

    let full = FreeFields::bosons(&SymplecticRep::doublets(&g, 8).unwrap()).tensor(&sf);
    let sp = GradedSpace::enumerate(&full, h2, 2_000_000).unwrap();
    println!("eight doublets and ghosts, {} states up to h = {}", sp.dim(), half(h2));
    for (gr, b) in &sp.blocks {
        println!("  {gr}  dim {}", b.len());
    }
    // a few basis states of the first block at h = 1
    if let Some((gr, b)) = sp.blocks.iter().find(|(gr, _)| gr.h2 == 2) {
        let names: Vec<String> = b.states.iter().take(4).map(|m| full.fmt_monomial(m)).collect();
        println!("  e.g. at {gr}: {}", names.join(", "));
    }
}
