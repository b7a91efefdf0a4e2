use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let max_rank = std::env::var(wfesets_cli::MAX_RANK_ENV).ok();
    let out = wfesets_cli::execute(std::env::args_os(), &mut std::io::stdin(), max_rank);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.status as u8)
}
