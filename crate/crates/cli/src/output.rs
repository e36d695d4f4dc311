//! CSV and JSON writers with atomic replacement of the target file.

use std::io::Write;
use std::path::Path;

use oscillab_core::Trajectory;
use serde::Serialize;

use crate::error::CliError;

/// Shortest decimal that parses back to the same double.
pub fn format_f64(v: f64) -> String {
    let mut buf = ryu::Buffer::new();
    buf.format(v).to_string()
}

pub fn trajectory_csv<const N: usize>(traj: &Trajectory<N>, fields: [&str; N]) -> String {
    let mut out = String::with_capacity(32 * (N + 1) * (traj.len() + 1));
    out.push('t');
    for f in fields {
        out.push(',');
        out.push_str(f);
    }
    out.push('\n');
    let mut buf = ryu::Buffer::new();
    for (t, y) in traj.iter() {
        out.push_str(buf.format(t));
        for v in y {
            out.push(',');
            out.push_str(buf.format(*v));
        }
        out.push('\n');
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use oscillab_core::{IntegratorConfig, SystemTag, TerminationReason, TrajectoryMeta};

    #[test]
    fn round_trip_formatting() {
        for &v in &[0.1, 1.0 / 3.0, -2.5e-300, 1e21, 0.0, 123456.789] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_f64(0.1), "0.1");
    }

    #[test]
    fn csv_layout() {
        let traj = Trajectory {
            times: vec![0.0, 0.5],
            states: vec![[1.0, 0.0], [0.25, -1.0 / 3.0]],
            meta: TrajectoryMeta {
                system: SystemTag::Ml1d,
                parameters: vec![],
                config: IntegratorConfig::default(),
                termination: TerminationReason::ReachedT1,
                accepted_steps: 1,
                rejected_steps: 0,
            },
        };
        let csv = trajectory_csv(&traj, ["x", "v"]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x,v");
        assert_eq!(lines[1], "0.0,1.0,0.0");
        let last: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(last, vec![0.5, 0.25, -1.0 / 3.0]);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.txt");
        write_atomic(&p, "first").unwrap();
        write_atomic(&p, "second").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(write_atomic(&dir.path().join("missing/out.txt"), "x").is_err());
    }
}
