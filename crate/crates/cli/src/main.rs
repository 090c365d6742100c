use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use logsphere_cli::args::Cli;
use logsphere_cli::commands::execute;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };

    if let Ok(v) = std::env::var("LOGSPHERE_THREADS") {
        match v.parse::<usize>() {
            Ok(threads) if threads > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global()
                {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            _ => {
                eprintln!("error: LOGSPHERE_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(1);
            }
        }
    }

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = execute(cli.command, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
