//! Window loading from `--window FILE` or `--y-hat SPEC`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use primeframe::spectral::parse_complex;
use primeframe::{find_generator, idft, Domain, Signal};

/// Parses `"0:1, 2:1, 3:0.5+2i"` into a length-`p` spectrum. Missing indices are zero.
pub fn parse_y_hat(spec: &str, p: u64) -> Result<Vec<Complex64>, String> {
    let mut values = vec![Complex64::new(0.0, 0.0); p as usize];
    let mut seen = vec![false; p as usize];
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (idx, val) = item.split_once(':').ok_or_else(|| format!("expected index:value, found `{item}`"))?;
        let idx: u64 = idx.trim().parse().map_err(|_| format!("bad index `{}`", idx.trim()))?;
        if idx >= p {
            return Err(format!("index {idx} out of range 0..{p}"));
        }
        if std::mem::replace(&mut seen[idx as usize], true) {
            return Err(format!("index {idx} given twice"));
        }
        let v = parse_complex(val.trim()).ok_or_else(|| format!("bad complex value `{}`", val.trim()))?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(format!("non-finite value at index {idx}"));
        }
        values[idx as usize] = v;
    }
    Ok(values)
}

/// Returns the time-domain window. Frequency-domain input is inverted.
pub fn load_window(window: Option<&Path>, y_hat: Option<&str>, p: Option<u64>) -> Result<Signal, String> {
    let signal = match (window, y_hat) {
        (Some(_), Some(_)) => return Err("--window and --y-hat are mutually exclusive".into()),
        (None, None) => return Err("a window is required: pass --window FILE or --y-hat SPEC".into()),
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let s = Signal::parse_text(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            if let Some(p) = p.filter(|&p| p != s.p()) {
                return Err(format!("--p {p} disagrees with window file p={}", s.p()));
            }
            s
        }
        (None, Some(spec)) => {
            let p = p.ok_or("--y-hat requires --p")?;
            let ctx = find_generator(p).map_err(|e| e.to_string())?;
            let values = parse_y_hat(spec, p)?;
            Signal::new(&ctx, values, Domain::Frequency).map_err(|e| e.to_string())?
        }
    };
    Ok(match signal.domain() {
        Domain::Time => signal,
        Domain::Frequency => idft(&signal),
    })
}
