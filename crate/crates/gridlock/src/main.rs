use clap::Parser;

fn main() {
    let config = gridlock::cli::RunConfig::parse();
    match gridlock::cli::run(&config) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}
