use std::process::ExitCode;

use chronon_cli::{config::OUTPUT_DIR_ENV, execute, parse_config, write_outputs, RunError, EXIT_CHECK_FAILED, EXIT_PASS};

fn run() -> Result<i32, RunError> {
    let env_dir = std::env::var(OUTPUT_DIR_ENV).ok();
    let cfg = parse_config(std::env::args_os().skip(1), env_dir.as_deref())?;
    let out = execute(&cfg)?;
    print!("{}", out.report);
    let written = write_outputs(&cfg, &out)?;
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    Ok(if out.report.passed() { EXIT_PASS } else { EXIT_CHECK_FAILED })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(RunError::Usage(e)) => {
            let _ = e.print();
            ExitCode::from(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("chronon: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
