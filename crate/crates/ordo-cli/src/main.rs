mod args;
mod commands;
mod io;
mod report;
mod verify;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    let (text, code) = match commands::run(cli.command) {
        Ok(commands::Output::Report(out)) => {
            (serde_json::to_string_pretty(&out.body).expect("json value serializes"), out.code)
        }
        Ok(commands::Output::Raw(text)) => (text, 0),
        Err(e) => {
            eprintln!("error: {e}");
            let body = serde_json::json!({ "schema": report::SCHEMA, "error": e.to_string() });
            (body.to_string(), 2)
        }
    };
    let mut stdout = std::io::stdout().lock();
    // A closed pipe leaves nothing useful to report.
    let _ = writeln!(stdout, "{}", text.trim_end());
    ExitCode::from(code)
}
