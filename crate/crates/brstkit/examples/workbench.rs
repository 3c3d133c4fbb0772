//! Drive the workbench from code: load a JSON config, run commands and print the reports.
//!
//! `cargo run --release --example workbench -- path/to/config.json` (defaults to CFG-TRIV).

use brstkit::config::{triv, ComplexConfig};
use brstkit::workbench::{run, Command, Options, Suite};

fn main() {
    let config = match std::env::args().nth(1) {
        Some(p) => ComplexConfig::load(std::path::Path::new(&p)).unwrap_or_else(|e| panic!("{e}")),
        None => triv(),
    };
    let model = config.validate().unwrap_or_else(|e| panic!("{e}"));
    let opts = Options::default();
    for cmd in [Command::Basis, Command::Cohomology, Command::Verify(Suite::Algebra)] {
        let report = run(cmd, &model, &opts).unwrap();
        println!("== {} (exit {})", cmd.name(), report.exit_code());
        print!("{}", report.to_csv());
    }
    println!("== config");
    println!("{}", config.to_json());
}
