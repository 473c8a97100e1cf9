use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use wait_timeout::ChildExt;

use super::{OptionDescriptor, RawOutput, Result, SolverKind, SystemError, KEEP_TEMP_ENV};

fn io(e: std::io::Error) -> SystemError {
    SystemError::Io(e.to_string())
}

/// clingo reports 10 (sat), 20 (unsat) and 30 (sat, search exhausted);
/// DLV exits 0 on normal completion.
fn exit_ok(kind: SolverKind, code: i32) -> bool {
    match kind {
        SolverKind::Clingo => matches!(code, 0 | 10 | 20 | 30),
        SolverKind::Dlv | SolverKind::Reference => code == 0,
    }
}

fn drain(mut r: impl Read + Send + 'static) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        let _ = r.read_to_end(&mut buf);
        String::from_utf8_lossy(&buf).into_owned()
    })
}

pub(super) fn run_external(
    kind: SolverKind,
    exe: &Path,
    input: &str,
    options: &[OptionDescriptor],
    timeout: Option<Duration>,
) -> Result<RawOutput> {
    let mut file = tempfile::Builder::new()
        .prefix("asp-embed-")
        .suffix(".lp")
        .tempfile()
        .map_err(io)?;
    file.write_all(input.as_bytes()).map_err(io)?;
    file.flush().map_err(io)?;

    let args: Vec<String> = options.iter().flat_map(OptionDescriptor::to_args).collect();
    log::debug!(
        "running {} {:?} {}",
        exe.display(),
        args,
        file.path().display()
    );
    let mut child = Command::new(exe)
        .args(&args)
        .arg(file.path())
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => SystemError::SolverNotFound(exe.to_path_buf()),
            _ => io(e),
        })?;
    let out = drain(child.stdout.take().expect("piped"));
    let err = drain(child.stderr.take().expect("piped"));

    let status = match timeout {
        Some(t) => match child.wait_timeout(t).map_err(io)? {
            Some(s) => s,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(SystemError::Timeout(t));
            }
        },
        None => child.wait().map_err(io)?,
    };
    let stdout = out.join().unwrap_or_default();
    let stderr = err.join().unwrap_or_default();

    if std::env::var_os(KEEP_TEMP_ENV).is_some() {
        match file.keep() {
            Ok((_, path)) => log::info!("kept solver input {}", path.display()),
            Err(e) => log::warn!("could not keep solver input: {e}"),
        }
    }

    let code = status.code();
    match code {
        Some(c) if exit_ok(kind, c) => Ok(RawOutput {
            stdout,
            stderr,
            exit_code: code,
        }),
        _ => Err(SystemError::NonzeroExit { code, stderr }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_tables() {
        for c in [0, 10, 20, 30] {
            assert!(exit_ok(SolverKind::Clingo, c));
        }
        assert!(!exit_ok(SolverKind::Clingo, 65));
        assert!(exit_ok(SolverKind::Dlv, 0));
        assert!(!exit_ok(SolverKind::Dlv, 10));
    }

    #[test]
    fn missing_binary() {
        let r = run_external(
            SolverKind::Clingo,
            Path::new("/nonexistent/clingo"),
            "a.",
            &[],
            None,
        );
        assert!(matches!(r, Err(SystemError::SolverNotFound(_))));
    }
}
