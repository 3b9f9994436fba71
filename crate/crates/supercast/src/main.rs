use clap::Parser;
use supercast::cli::{execute, Args};

fn main() -> anyhow::Result<()> {
    let plan = Args::parse().plan()?;
    execute(&plan)
}
