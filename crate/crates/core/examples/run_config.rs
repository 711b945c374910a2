//! Drive the config runner from code: load a preset, tweak it and write
//! the artifacts to a directory.
//!
//! `cargo run --example run_config -- [preset] [out-dir]`

use zeno_lab::cli::{apply_override, preset, run_config, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "zeno".into());
    let out = args.next().unwrap_or_else(|| "zeno-lab-out/example".into());

    let mut doc = preset(&name).ok_or_else(|| format!("no preset named {name}"))?;
    apply_override(&mut doc, "output.formats=[\"csv\",\"json\"]")?;
    let cfg = ExperimentConfig::from_value(doc)?;
    println!("{}", serde_json::to_string_pretty(&cfg)?);

    let report = run_config(&cfg, Some(out.as_ref()), None)?;
    for c in &report.outcome.summary.checks {
        println!("{:<28} {:>12.4e}  {}", c.name, c.value, if c.passed { "ok" } else { "FAILED" });
    }
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    std::process::exit(report.exit_code());
}
