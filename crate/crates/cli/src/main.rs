mod cli;
mod commands;
mod selftest;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use commands::{Envelope, Failure, Output};

fn open_out(cli: &Cli) -> std::io::Result<Box<dyn Write>> {
    Ok(match &cli.out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<(Output, bool), Failure> {
    let ok = |o| Ok((o, true));
    match &cli.command {
        Command::Avg(a) => ok(commands::avg(a)?),
        Command::Densities(a) => ok(commands::densities(a)?),
        Command::DeltaDist(a) => ok(commands::delta_dist(a)?),
        Command::Maximality(a) => ok(commands::maximality(a)?),
        Command::Splitting(a) => ok(commands::splitting(a)?),
        Command::CountDetk(a) => ok(commands::count_detk(a)?),
        Command::Pi(a) => ok(commands::pi(a)?),
        Command::Sample(a) => ok(commands::sample(a, out)?),
        Command::Selftest(a) => {
            let report = selftest::run(a.quick);
            let passed = report.passed;
            let warnings = report
                .suites
                .iter()
                .filter(|s| s.failures > 0)
                .map(|s| format!("{}: {} of {} checks failed", s.name, s.failures, s.checks))
                .collect::<Vec<_>>();
            let mut env = Envelope::new("selftest", a, report)?;
            env.warnings = warnings;
            Ok((Output::Envelope(env), passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let mut out = match open_out(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: cannot open output: {e}");
            return ExitCode::from(1);
        }
    };
    let result = run(&cli, &mut *out).and_then(|(output, passed)| {
        match output {
            Output::Envelope(env) => {
                let s = if cli.pretty {
                    serde_json::to_string_pretty(&env)
                } else {
                    serde_json::to_string(&env)
                }
                .map_err(|e| Failure::Compute(e.to_string()))?;
                writeln!(out, "{s}")?;
            }
            Output::Text(t) => write!(out, "{t}")?,
        }
        out.flush()?;
        Ok(passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
