#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod output;

use clap::error::ErrorKind;
use clap::Parser;

use crate::cli::Cli;
use crate::commands::dispatch;

fn main() {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {} worker threads: {e}", args.jobs);
            std::process::exit(1);
        }
    };
    if let Err(e) = pool.install(|| dispatch(&args.command)) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
