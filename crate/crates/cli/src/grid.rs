//! `--p` grid parsing: `a..b:step`, a comma list, or a single value.
//!
//! Ranges are stepped in integer units of the finest decimal place that
//! appears in `a`, `b` or `step`, so `0.1..0.9:0.1` yields exactly
//! `0.1, 0.2, ..., 0.9` as written.

use empo_core::distributions::GeometricParam;

fn decimals(s: &str) -> usize {
    s.split_once('.').map_or(0, |(_, frac)| frac.len())
}

fn parse_p(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: '{s}'"))?;
    GeometricParam::new(v).map_err(|e| e.to_string())?;
    Ok(v)
}

fn to_units(s: &str, places: usize) -> Result<i64, String> {
    let s = s.trim();
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let mut digits = String::from(if int.is_empty() { "0" } else { int });
    digits.push_str(frac);
    digits.extend(std::iter::repeat_n('0', places - frac.len()));
    digits.parse().map_err(|_| format!("not a decimal: '{s}'"))
}

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    let values = if let Some((range, step)) = spec.split_once(':') {
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| format!("expected a..b:step, got '{spec}'"))?;
        let places = decimals(lo.trim())
            .max(decimals(hi.trim()))
            .max(decimals(step.trim()));
        let (a, b, h) = (
            to_units(lo, places)?,
            to_units(hi, places)?,
            to_units(step, places)?,
        );
        if h <= 0 {
            return Err(format!("step must be positive, got '{}'", step.trim()));
        }
        if b < a {
            return Err(format!("empty range '{spec}'"));
        }
        let scale = 10f64.powi(places as i32);
        let mut out = Vec::new();
        let mut u = a;
        while u <= b {
            // integer units / 10^places rounds to the same double as the decimal literal
            out.push(u as f64 / scale);
            u += h;
        }
        for &p in &out {
            GeometricParam::new(p).map_err(|e| e.to_string())?;
        }
        out
    } else {
        spec.split(',')
            .map(parse_p)
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err("p values must be strictly increasing".into());
    }
    Ok(values)
}
