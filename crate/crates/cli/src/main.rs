use clap::Parser;

fn main() {
    let cli = polar_cli::Cli::parse();
    let code = polar_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
