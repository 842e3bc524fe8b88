mod args;
mod commands;
mod input;

use args::{Args, Format};
use clap::Parser;
use commands::{run, RunConfig};

fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let format = args.format;
    let cfg = RunConfig::new(args)?;
    let report = run(&cfg)?;
    match format {
        Format::Text => print!("{}", report.text),
        Format::Structured => println!("{}", serde_json::to_string_pretty(&report.data)?),
    }
    Ok(())
}
