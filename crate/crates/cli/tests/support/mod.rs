//! Golden-file runner shared by the golden and acceptance targets.
//!
//! Each `tests/golden/NAME.args` holds one shell-quoted argument line. The
//! expected stdout lives in `NAME.stdout` and the exit status in `NAME.status`.
//! Set `WFESETS_BLESS=1` to rewrite the expected files.

use std::fs;
use std::path::{Path, PathBuf};

use wfesets_cli::{execute, Outcome};

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs one argument line in-process with the rank cap set to 3.
pub fn run(line: &str) -> Outcome {
    let mut args = vec!["wfesets".to_string()];
    args.extend(shlex::split(line).expect("bad args line"));
    execute(args, &mut std::io::empty(), Some("3".into()))
}

fn cases() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = fs::read_dir(golden_dir())
        .unwrap()
        .filter_map(|e| {
            let path = e.unwrap().path();
            (path.extension()? == "args").then(|| {
                let name = path.file_stem().unwrap().to_string_lossy().into_owned();
                (name, fs::read_to_string(&path).unwrap().trim_end().to_string())
            })
        })
        .collect();
    out.sort();
    out
}

/// Runs every case twice. Returns the number of cases, or the mismatches.
pub fn check_golden() -> Result<usize, Vec<String>> {
    // Fixture paths in the args files are relative to the crate root.
    std::env::set_current_dir(env!("CARGO_MANIFEST_DIR")).unwrap();
    let bless = std::env::var_os("WFESETS_BLESS").is_some();
    let dir = golden_dir();
    let mut failures = Vec::new();
    let all = cases();
    for (name, line) in &all {
        let got = run(line);
        let again = run(line);
        if (got.status, &got.stdout) != (again.status, &again.stdout) {
            failures.push(format!("{name}: output differs between runs"));
        }
        let stdout_path = dir.join(format!("{name}.stdout"));
        let status_path = dir.join(format!("{name}.status"));
        if bless {
            fs::write(&stdout_path, &got.stdout).unwrap();
            fs::write(&status_path, format!("{}\n", got.status)).unwrap();
            continue;
        }
        let want_stdout = fs::read_to_string(&stdout_path).unwrap_or_default();
        let want_status: i32 = fs::read_to_string(&status_path).map(|s| s.trim().parse().unwrap()).unwrap_or(-1);
        if got.stdout != want_stdout || got.status != want_status {
            failures.push(format!(
                "{name}: status {} (want {want_status})\n  got:  {}\n  want: {}",
                got.status,
                got.stdout.trim_end(),
                want_stdout.trim_end()
            ));
        }
    }
    if failures.is_empty() { Ok(all.len()) } else { Err(failures) }
}

/// Canonical output fed back into `canon` comes out byte-identical.
pub fn canon_round_trip(input: &str) -> Result<(), String> {
    let first = run(&format!("canon {}", shlex::try_quote(input).unwrap()));
    if first.status != 0 {
        return Err(format!("canon {input:?} exited {}", first.status));
    }
    let json: serde_json::Value = serde_json::from_str(&first.stdout).map_err(|e| e.to_string())?;
    let second = run(&format!("canon {}", shlex::try_quote(&json.to_string()).unwrap()));
    if first.stdout != second.stdout {
        return Err(format!("canon {input:?}: {} then {}", first.stdout.trim_end(), second.stdout.trim_end()));
    }
    Ok(())
}
