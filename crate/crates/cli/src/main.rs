use std::io::Write;

fn main() {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = wpvol_cli::commands::main_with(std::env::args_os(), |k| std::env::var(k).ok(), &mut out, &mut std::io::stderr());
    let _ = out.flush();
    std::process::exit(code);
}
