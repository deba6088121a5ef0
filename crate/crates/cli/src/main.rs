use std::io::Write;

use annulus_spectra_cli::{run_cli, Env};

fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let code = run_cli(std::env::args_os(), &Env::from_process(), &mut out, &mut stderr.lock());
    if out.flush().is_err() && code == 0 {
        std::process::exit(annulus_spectra_cli::EXIT_CONFIG);
    }
    std::process::exit(code);
}
