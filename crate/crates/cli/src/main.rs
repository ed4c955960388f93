use clap::Parser;
use ewl_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let code = match ewl_cli::execute(&cli).and_then(|out| out.write()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ewl: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
