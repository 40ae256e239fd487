use std::io::Write;

fn main() {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    // Deep derivations recurse; give the worker a generous stack.
    let out = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(move || sr_core::frontend::run_cli(args))
        .expect("spawn worker")
        .join()
        .expect("worker panicked");
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(out.code);
}
