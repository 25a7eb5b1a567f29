use clap::Parser;

use bounce_cli::{prob_command, Cli, Command};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => bounce_cli::run::execute(args).map(|path| {
            println!("{}", path.display());
        }),
        Command::Analyze(args) => bounce_cli::analyze::execute(args).map(|out| {
            print!("{out}");
        }),
        Command::Prob(args) => prob_command(&args).map(|out| {
            print!("{out}");
        }),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
