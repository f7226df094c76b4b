use crate::{Exit, Failure};
use num_complex::Complex64;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(fs::Permissions::from_mode(0o644)).map_err(fail)?;
    }
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Prints the report and writes it to `out` when given.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let text = to_json(value);
    if let Some(path) = out {
        write_atomic(path, text.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::new(Exit::Usage, format!("malformed {}: {e}", path.display())))
}

pub fn parse_budget(s: &str) -> Result<usize, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("invalid budget {s:?}"))?;
    if v.is_finite() && v >= 1.0 && v.fract() == 0.0 && v <= 1e12 {
        Ok(v as usize)
    } else {
        Err(format!("budget must be a positive integer, got {s:?}"))
    }
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|_| format!("invalid seed {s:?}"))
}

/// `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().ok().filter(|x| x.is_finite());
    match parts[..] {
        [re] => num(re).map(|re| Complex64::new(re, 0.0)),
        [re, im] => num(re).zip(num(im)).map(|(re, im)| Complex64::new(re, im)),
        _ => None,
    }
    .ok_or_else(|| format!("expected re or re,im, got {s:?}"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Radii(pub Vec<f64>);

/// `start:end[:step]` (inclusive, default step 1) or a comma list.
pub fn parse_radii(s: &str) -> Result<Radii, String> {
    let bad = || format!("expected start:end[:step] or a comma list of radii, got {s:?}");
    let num = |t: &str| t.trim().parse::<f64>().ok().filter(|x| x.is_finite());
    let radii = if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(num).collect::<Option<_>>().ok_or_else(bad)?;
        let (a, b, step) = match parts[..] {
            [a, b] => (a, b, 1.0),
            [a, b, step] => (a, b, step),
            _ => return Err(bad()),
        };
        if !(step > 0.0 && b >= a) {
            return Err(bad());
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        (0..=n).map(|k| a + step * k as f64).collect()
    } else {
        s.split(',').map(num).collect::<Option<Vec<f64>>>().ok_or_else(bad)?
    };
    if radii.len() < 2 || radii[0] <= 0.0 || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("need at least two increasing positive radii, got {s:?}"));
    }
    Ok(Radii(radii))
}
