use std::io::Write;
use std::process::ExitCode;

use squo_cli::{parse, run, CliError, Parsed};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let (cli, overrides) = match parse(std::env::args().collect()) {
        Ok(Parsed::Run(cli, overrides)) => (cli, overrides),
        Ok(Parsed::Info(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&e),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &overrides, &mut out) {
        Ok(()) => {
            let _ = out.flush();
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
