//! Parsing of numeric lists and ranges given on the command line.
//!
//! Accepted forms:
//! - a single value: `0.32`
//! - a comma list: `0,0.1,0.2`
//! - a list closed by an ellipsis: `1,10,20,...,100` continues with the step of
//!   the last two listed values up to and including the final value
//! - a range `start:stop:step`, inclusive of start and exclusive of stop

use bb84_keyrate::keyrate::grid;

pub fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range {s:?} must look like start:stop:step"));
        }
        let v = parts
            .iter()
            .map(|p| parse_f64(p))
            .collect::<Result<Vec<_>, _>>()?;
        if !(v[2] > 0.0) {
            return Err(format!("range {s:?} needs a positive step"));
        }
        if v[1] < v[0] {
            return Err(format!("range {s:?} has stop below start"));
        }
        return Ok(grid(v[0], v[1], v[2]));
    }
    let items: Vec<&str> = s.split(',').map(str::trim).collect();
    if let Some(pos) = items.iter().position(|i| *i == "...") {
        if pos < 2 || pos + 2 != items.len() {
            return Err(format!(
                "{s:?}: an ellipsis needs two values before it and exactly one after"
            ));
        }
        let head = items[..pos]
            .iter()
            .map(|p| parse_f64(p))
            .collect::<Result<Vec<_>, _>>()?;
        let last = parse_f64(items[pos + 1])?;
        let step = head[pos - 1] - head[pos - 2];
        if !(step > 0.0) || last < head[pos - 1] {
            return Err(format!(
                "{s:?}: ellipsis must continue an increasing sequence"
            ));
        }
        let mut out = head.clone();
        let start = head[pos - 1];
        let n = ((last - start) / step + 1e-9).floor() as usize;
        out.extend((1..=n).map(|i| start + i as f64 * step));
        return Ok(out);
    }
    items.iter().map(|p| parse_f64(p)).collect()
}

pub fn parse_block_lengths(s: &str) -> Result<Vec<usize>, String> {
    parse_floats(s)?
        .into_iter()
        .map(|v| {
            let r = v.round();
            if (v - r).abs() > 1e-9 || r < 1.0 {
                Err(format!("block length {v} is not a positive integer"))
            } else {
                Ok(r as usize)
            }
        })
        .collect()
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| format!("{s:?} is not a number: {e}"))
}
