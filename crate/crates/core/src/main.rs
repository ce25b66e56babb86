use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    // Checking and evaluation recurse over the term; give them room.
    let worker = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(|| fcci::driver::run(std::env::args_os()))
        .expect("spawn worker thread");
    let out = match worker.join() {
        Ok(out) => out,
        Err(_) => {
            eprintln!("error[E501]: internal error");
            return ExitCode::from(5);
        }
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.status as u8)
}
