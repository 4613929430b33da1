mod args;
mod emit;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use homlab_core::LabError;

use args::{Cli, Format};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = match run::run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                LabError::BudgetExceeded(_) => EXIT_BUDGET,
                _ => EXIT_BAD_INPUT,
            });
        }
    };
    if cli.global.timing {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for r in &mut report.records {
            r.insert("wall_time_ms".into(), serde_json::json!(ms));
        }
    }

    let written = (|| -> io::Result<()> {
        let mut sink: Box<dyn Write> = match &cli.global.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        match (&report.graph_text, cli.global.format) {
            (Some(text), Format::Text) => sink.write_all(text.as_bytes())?,
            _ => emit::write_records(&mut sink, cli.global.format, &report.records)?,
        }
        sink.flush()
    })();
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_BAD_INPUT);
    }

    if report.records.iter().any(emit::is_failure) {
        ExitCode::from(EXIT_FAILED_CHECK)
    } else {
        ExitCode::SUCCESS
    }
}
