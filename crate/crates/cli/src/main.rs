use clap::Parser;

fn main() {
    let cli = bragg_ent::Cli::parse();
    if let Err(e) = bragg_ent::run(cli) {
        eprintln!("bragg-ent: {e}");
        std::process::exit(e.exit_code());
    }
}
