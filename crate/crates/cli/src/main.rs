use std::io::IsTerminal;

fn main() {
    let color = std::env::var_os(morphplan_cli::NO_COLOR_VAR).is_none() && std::io::stdout().is_terminal();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = morphplan_cli::run_styled(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock(), color);
    std::process::exit(code);
}
