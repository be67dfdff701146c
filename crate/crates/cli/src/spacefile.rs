//! File formats: space files, cost tables, and the small value parsers.
//!
//! A space file declares a base:
//!
//! ```text
//! # comment
//! points 4
//! open 0
//! open 0 1
//! ```
//!
//! Line 1 is `points <n>`; every other line is `open` followed by sorted
//! point indices (an empty list is the empty set). Blank lines and `#`
//! comments are ignored. A cost table file is `(m+1)` lines of `(n+1)`
//! space-separated decimals; fractions like `3/2` are also accepted.

use num_rational::Ratio;
use sheafcomp::builtin::{GridCost, MonadicFn};
use sheafcomp::{Base, OpenSet, Rat, Topology};

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, line)| (k + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
}

/// Upper bound on declared point counts; rejects absurd files before any
/// allocation happens.
const MAX_POINTS: usize = 1 << 20;

/// Parses a space file into a base. Errors carry the offending line number.
pub fn parse_space(text: &str) -> Result<Base, String> {
    let mut lines = significant_lines(text);
    let (first_no, first) = lines.next().ok_or("empty space file")?;
    let point_count: usize = first
        .strip_prefix("points")
        .ok_or(format!("line {first_no}: expected `points <n>`"))?
        .trim()
        .parse()
        .map_err(|_| format!("line {first_no}: expected `points <n>`"))?;
    if point_count > MAX_POINTS {
        return Err(format!(
            "line {first_no}: {point_count} points exceeds the maximum of {MAX_POINTS}"
        ));
    }

    let mut elements = Vec::new();
    for (no, line) in lines {
        let rest = line
            .strip_prefix("open")
            .ok_or(format!("line {no}: expected `open <indices>`"))?;
        if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
            return Err(format!("line {no}: expected `open <indices>`"));
        }
        let mut indices = Vec::new();
        for token in rest.split_whitespace() {
            let index: usize = token
                .parse()
                .map_err(|_| format!("line {no}: `{token}` is not a point index"))?;
            if index >= point_count {
                return Err(format!(
                    "line {no}: point {index} is outside the declared {point_count} points"
                ));
            }
            indices.push(index);
        }
        elements.push(OpenSet::from_indices(point_count, indices));
    }
    Ok(Base::new(point_count, elements))
}

/// Renders a lattice in space-file form, one `open` line per open in
/// canonical order. Feeding the output back through [`parse_space`]
/// regenerates the same lattice.
pub fn render_opens(topology: &Topology) -> String {
    let mut out = format!("points {}\n", topology.point_count());
    for open in topology.opens() {
        out.push_str("open");
        for p in open.iter() {
            out.push_str(&format!(" {p}"));
        }
        out.push('\n');
    }
    out
}

/// Parses a decimal (`-1.25`) or fraction (`-5/4`) into an exact rational.
pub fn parse_rational(token: &str) -> Result<Rat, String> {
    let fail = || format!("`{token}` is not a number");
    if let Some((num, den)) = token.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| fail())?;
        let den: i64 = den.trim().parse().map_err(|_| fail())?;
        if den == 0 {
            return Err(format!("`{token}` has a zero denominator"));
        }
        return Ok(Ratio::new(num, den));
    }
    let (sign, body) = match token.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, token),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail());
    }
    let digits_ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(fail());
    }
    let mut numer: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| fail())?
    };
    let mut denom: i64 = 1;
    for c in frac_part.chars() {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add(i64::from(c as u8 - b'0')))
            .ok_or(format!("`{token}` is out of range"))?;
        denom = denom
            .checked_mul(10)
            .ok_or(format!("`{token}` is out of range"))?;
    }
    Ok(Ratio::new(sign * numer, denom))
}

/// Parses a cost table: rectangular rows of rationals.
pub fn parse_cost_table(text: &str) -> Result<GridCost<Rat>, String> {
    let mut rows = Vec::new();
    for (no, line) in significant_lines(text) {
        let row = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("line {no}: {e}"))?;
        rows.push(row);
    }
    GridCost::from_rows(rows).map_err(|e| e.to_string())
}

/// Parses a slope function spec: `identity`, `pow:<k>`, or
/// `table:v0,v1,…` (one value per field element).
pub fn parse_monadic(spec: &str) -> Result<MonadicFn, String> {
    if spec == "identity" {
        return Ok(MonadicFn::Identity);
    }
    if let Some(k) = spec.strip_prefix("pow:") {
        let k: u32 = k
            .parse()
            .map_err(|_| format!("`{k}` is not an exponent"))?;
        return Ok(MonadicFn::Power(k));
    }
    if let Some(body) = spec.strip_prefix("table:") {
        let values = body
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("`{v}` is not a field element"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(MonadicFn::Table(values));
    }
    Err(format!(
        "`{spec}` is not a function spec (expected identity, pow:<k>, or table:v0,v1,…)"
    ))
}
