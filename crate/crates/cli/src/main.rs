use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cyclespace_cli::{run, Cli, EXIT_INPUT};

fn write_file(path: &std::path::Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let args: Vec<_> = std::env::args_os().collect();
    let outcome = run(args.clone());
    // flags are re-read here only to locate output files
    let cli = Cli::try_parse_from(&args).ok();
    let json_target = cli.as_ref().and_then(|c| c.json.clone());
    let to_stdout = json_target.as_deref().is_some_and(|p| p.as_os_str() == "-");

    let mut code = outcome.code;
    if outcome.code == 0 && !to_stdout {
        print!("{}", outcome.text);
    } else {
        eprint!("{}", outcome.text);
    }
    if let Some(target) = json_target {
        if !outcome.report.is_null() {
            let text = serde_json::to_string_pretty(&outcome.report).expect("plain data");
            if to_stdout {
                let _ = writeln!(std::io::stdout(), "{text}");
            } else if let Err(e) = write_file(&target, &(text + "\n")) {
                eprintln!("error: {e}");
                code = EXIT_INPUT;
            }
        }
    }
    if let (Some(path), Some(dot)) = (cli.and_then(|c| c.dot), outcome.dot) {
        if let Err(e) = write_file(&path, &dot) {
            eprintln!("error: {e}");
            code = EXIT_INPUT;
        }
    }
    ExitCode::from(code as u8)
}
