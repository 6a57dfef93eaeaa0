use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use obstruct::cli::{self, Cli, Output};

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { cli::EXIT_INVALID } else { cli::EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let (text, code) = match cli::run(&args) {
        Ok(Output::Json(v)) => (serde_json::to_string_pretty(&v).expect("json"), cli::EXIT_OK),
        Ok(Output::Text { text, success }) => (text, if success { cli::EXIT_OK } else { cli::EXIT_FAILURE }),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(cli::exit_code(&e) as u8);
        }
    };
    if let Err(e) = emit(&args, &text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(cli::EXIT_FAILURE as u8);
    }
    ExitCode::from(code as u8)
}
