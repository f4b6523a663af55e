//! Plain-text signal format.
//!
//! ```text
//! p=7 domain=freq
//! 0 1.0 0.0
//! 1 1.0 0.0
//! ...
//! ```
//!
//! One `index re im` line per entry, every index in `0..p` exactly once, in
//! any order. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{Domain, Signal};
use crate::error::{Error, Result};
use crate::zmod::find_generator;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

impl Signal {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let tag = match self.domain() {
            Domain::Time => "time",
            Domain::Frequency => "freq",
        };
        writeln!(out, "p={} domain={}", self.p(), tag).unwrap();
        for (k, v) in self.values().iter().enumerate() {
            writeln!(out, "{} {:?} {:?}", k, v.re, v.im).unwrap();
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Signal> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut p = None;
        let mut domain = None;
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("p", v)) => p = Some(v.parse::<u64>().map_err(|_| parse_err(hline, format!("bad prime `{v}`")))?),
                Some(("domain", "time")) => domain = Some(Domain::Time),
                Some(("domain", "freq")) => domain = Some(Domain::Frequency),
                _ => return Err(parse_err(hline, format!("unexpected header token `{tok}`"))),
            }
        }
        let p = p.ok_or_else(|| parse_err(hline, "header is missing p=<p>"))?;
        let domain = domain.ok_or_else(|| parse_err(hline, "header is missing domain=<time|freq>"))?;
        let ctx = find_generator(p).map_err(|e| parse_err(hline, e.to_string()))?;

        let mut values: Vec<Option<Complex64>> = vec![None; ctx.len()];
        for (ln, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [idx, re, im] = fields[..] else {
                return Err(parse_err(ln, "expected `index re im`"));
            };
            let idx: usize = idx.parse().map_err(|_| parse_err(ln, format!("bad index `{idx}`")))?;
            let re: f64 = re.parse().map_err(|_| parse_err(ln, format!("bad real part `{re}`")))?;
            let im: f64 = im.parse().map_err(|_| parse_err(ln, format!("bad imaginary part `{im}`")))?;
            if idx >= ctx.len() {
                return Err(parse_err(ln, format!("index {idx} out of range 0..{p}")));
            }
            if values[idx].is_some() {
                return Err(parse_err(ln, format!("index {idx} given twice")));
            }
            values[idx] = Some(Complex64::new(re, im));
        }
        if let Some(missing) = values.iter().position(Option::is_none) {
            return Err(parse_err(0, format!("index {missing} missing")));
        }
        Signal::new(&ctx, values.into_iter().map(Option::unwrap).collect(), domain)
    }
}

/// Parses `re`, `re+imi`, `re-imi`, `imi` or `i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split before the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re.parse::<f64>().ok()?, im))
}

/// `0.1234+0.5678i` style rendering at a fixed number of decimals.
pub fn format_complex(v: Complex64, decimals: usize) -> String {
    let re = if v.re == 0.0 { 0.0 } else { v.re };
    let im = if v.im == 0.0 { 0.0 } else { v.im };
    let im_str = format!("{:.*}", decimals, im.abs());
    let zero_im = im_str.chars().all(|c| c == '0' || c == '.');
    if zero_im {
        format!("{:.*}", decimals, re)
    } else {
        let sign = if im < 0.0 { '-' } else { '+' };
        format!("{:.*}{}{}i", decimals, re, sign, im_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let ctx = find_generator(5).unwrap();
        let s = Signal::from_fn(&ctx, Domain::Frequency, |k| Complex64::new(k as f64 / 3.0, -0.1 * k as f64));
        let back = Signal::parse_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn whitespace_tolerant_any_order() {
        let text = "  p=3   domain=time \n\n 2  0.5 1\n# comment\n0 1 0\n\t1 0 -2  \n";
        let s = Signal::parse_text(text).unwrap();
        assert_eq!(s.values(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, -2.0), Complex64::new(0.5, 1.0)]);
        assert_eq!(s.domain(), Domain::Time);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Signal::parse_text("").is_err());
        assert!(Signal::parse_text("p=4 domain=time\n").is_err());
        assert!(Signal::parse_text("p=3 domain=space\n").is_err());
        assert!(Signal::parse_text("p=3 domain=time\n0 1 0\n1 1 0\n").is_err());
        assert!(Signal::parse_text("p=3 domain=time\n0 1 0\n1 1 0\n1 1 0\n2 0 0\n").is_err());
        assert!(Signal::parse_text("p=3 domain=time\n0 1 0\n1 1 0\n3 0 0\n").is_err());
        assert!(Signal::parse_text("p=3 domain=time\n0 1\n1 1 0\n2 0 0\n").is_err());
        assert!(Signal::parse_text("p=3 domain=time\n0 nan 0\n1 1 0\n2 0 0\n").is_err());
    }

    #[test]
    fn complex_literals() {
        let c = Complex64::new;
        assert_eq!(parse_complex("1"), Some(c(1.0, 0.0)));
        assert_eq!(parse_complex("-0.5"), Some(c(-0.5, 0.0)));
        assert_eq!(parse_complex("1+2i"), Some(c(1.0, 2.0)));
        assert_eq!(parse_complex("1.5-2i"), Some(c(1.5, -2.0)));
        assert_eq!(parse_complex("-3i"), Some(c(0.0, -3.0)));
        assert_eq!(parse_complex("i"), Some(c(0.0, 1.0)));
        assert_eq!(parse_complex("1e-3+2e+1i"), Some(c(1e-3, 20.0)));
        assert_eq!(parse_complex(" 2 + i "), Some(c(2.0, 1.0)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn complex_rendering() {
        assert_eq!(format_complex(Complex64::new(0.27312, 0.45951), 4), "0.2731+0.4595i");
        assert_eq!(format_complex(Complex64::new(-0.0467, -0.5325), 4), "-0.0467-0.5325i");
        assert_eq!(format_complex(Complex64::new(0.3682, 1e-17), 4), "0.3682");
    }
}
