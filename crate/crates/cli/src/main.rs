use clap::Parser;

fn main() {
    let cli = sminima_cli::Cli::parse();
    std::process::exit(sminima_cli::run(&cli));
}
