//! The full pipeline through the command-line entry point.

fn main() {
    let disks = std::env::args().nth(1).unwrap_or_else(|| "4".into());
    let (stdout, stderr, code) = finsheaf::cli::run(["finsheaf", "reproduce", "--disks", disks.as_str()]);
    print!("{stdout}");
    eprint!("{stderr}");
    std::process::exit(code);
}
