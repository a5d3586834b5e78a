use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use orthocartan_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    let text = out.certificate.to_json_string();
    let written = match &cli.opts.output {
        Some(path) => std::fs::write(path, text + "\n"),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    };
    if let Err(e) = written {
        eprintln!("orthocartan: cannot write certificate: {e}");
        return ExitCode::from(2);
    }
    if let Some(msg) = &out.certificate.error {
        eprintln!("orthocartan: {msg}");
    }
    ExitCode::from(out.exit_code)
}
