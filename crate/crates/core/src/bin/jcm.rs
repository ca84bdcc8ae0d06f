use clap::Parser;
use jcm_core::cli::{run, Cli};

fn configure_threads() {
    let Ok(raw) = std::env::var("JCM_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        Err(_) => {
            eprintln!("jcm: ignoring JCM_THREADS={raw:?}, expected a non-negative integer");
        }
    }
}

fn main() {
    let cli = Cli::parse();
    configure_threads();
    if let Err(e) = run(cli) {
        eprintln!("jcm: {e}");
        std::process::exit(e.exit_code());
    }
}
