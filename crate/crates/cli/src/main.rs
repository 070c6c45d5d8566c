use std::io::Write;

fn main() {
    let cap = std::env::var(seifert_census_cli::CAP_ENV).ok();
    let out = seifert_census_cli::run(std::env::args_os(), cap.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
