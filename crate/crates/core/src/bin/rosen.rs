use clap::Parser;
use rosen::run::{run, write_artifacts, Command, OutputFormat, RunArgs};
use std::process::ExitCode;

/// Experiments on Rosen continued fractions and Hecke groups.
#[derive(Parser)]
#[command(name = "rosen", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[command(flatten)]
    args: RunArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.args.resolve(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let res = run(&cfg);
    let mut stdout = std::io::stdout().lock();
    match write_artifacts(&cfg, &res, &mut stdout) {
        Ok(Some(path)) => eprintln!("wrote {}", path.display()),
        Ok(None) if cfg.format == OutputFormat::Csv => {
            eprintln!("{}", serde_json::to_string(&res.manifest).expect("serializable"));
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(2);
        }
    }
    if let Some(o) = &res.output {
        for n in &o.notes {
            eprintln!("{n}");
        }
    }
    if let Some(err) = &res.manifest.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(res.exit_code as u8)
}
