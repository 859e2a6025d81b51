use clap::Parser;

fn main() {
    let cli = oplab::cli::Cli::parse();
    std::process::exit(oplab::cli::run(cli));
}
