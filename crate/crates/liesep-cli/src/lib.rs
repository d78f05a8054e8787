//! JSON front end for `liesep-core`: operator definitions in, stage reports
//! and golden expectation files out.

pub mod definition;
pub mod error;
pub mod examples;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

pub use error::CliError;

/// Environment variable holding the sampling precision in decimal digits.
pub const DIGITS_ENV: &str = "LIESEP_DIGITS";
pub const DEFAULT_DIGITS: u32 = 30;

pub fn digits_from_env() -> Result<u32, CliError> {
    match std::env::var(DIGITS_ENV) {
        Err(_) => Ok(DEFAULT_DIGITS),
        Ok(s) => match s.trim().parse::<u32>() {
            Ok(d) if (15..=1000).contains(&d) => Ok(d),
            _ => Err(CliError::new("invalid_precision", format!("{}={} must be an integer in 15..=1000", DIGITS_ENV, s))),
        },
    }
}

/// Pretty JSON with a trailing newline. Keys are sorted.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{}.{}.tmp", name, std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Keys of `expected` that differ from the report, as `stage.key` paths.
/// `expected.symbolic.<stage>.<key>` is compared with
/// `report.stages.<stage>.payload.<key>`, and `expected.separability` with
/// the per-system verdicts.
pub fn golden_mismatches(report: &Value, expected: &Value) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(sym) = expected["symbolic"].as_object() {
        for (stage, keys) in sym {
            let payload = &report["stages"][stage]["payload"];
            for (k, v) in keys.as_object().into_iter().flatten() {
                if &payload[k] != v {
                    out.push(format!("{}.{}", stage, k));
                }
            }
        }
    }
    if let Some(verdicts) = expected["separability"].as_object() {
        let systems = report["stages"]["separability"]["payload"]["systems"].as_array();
        for (sys, verdict) in verdicts {
            let got = systems.and_then(|a| a.iter().find(|e| e["system"] == sys.as_str())).map(|e| &e["verdict"]);
            if got != Some(verdict) {
                out.push(format!("separability.{}", sys));
            }
        }
    }
    out
}
