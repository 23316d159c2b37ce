use std::io;

fn main() {
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    let code = levelpath_cli::main_with_args(std::env::args_os(), &mut stdout, &mut stderr);
    std::process::exit(code);
}
