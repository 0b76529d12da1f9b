use std::process::ExitCode;

fn main() -> ExitCode {
    let out = ctrlmeas_cli::run(std::env::args_os());
    print!("{}", out.stdout);
    if !out.stdout.ends_with('\n') {
        println!();
    }
    ExitCode::from(out.exit_code as u8)
}
