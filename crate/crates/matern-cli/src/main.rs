fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if let Err(e) = matern_cli::run(&argv) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
