use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use paradd::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((config, report)) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(config.output_format).as_bytes());
            let code = report.exit_code();
            if code != 0 {
                eprintln!("paradd: check failed");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("paradd: {}", e);
            ExitCode::from(2)
        }
    }
}
