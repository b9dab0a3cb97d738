//! Angles written as plain numbers or as rational multiples of π.
//!
//! Accepted forms: `0.5`, `-1e-3`, `1/3`, `pi`, `-pi`, `pi/4`, `3pi/4`,
//! `3*pi/4`, `0.5pi`, `π/8`. Whitespace and case are ignored.

use crate::error::{CliError, Result};

pub fn parse_angle(input: &str) -> Result<f64> {
    let bad = || CliError::InvalidArgument(format!("cannot parse angle `{input}`"));
    let s: String = input
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_lowercase()
        .replace('π', "pi");
    if s.is_empty() {
        return Err(bad());
    }
    let value = match s.split_once("pi") {
        Some((coef, rest)) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let k = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let den = match rest {
                "" => 1.0,
                r => r.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
            };
            k * std::f64::consts::PI / den
        }
        None => match s.split_once('/') {
            Some((num, den)) => num.parse::<f64>().map_err(|_| bad())? / den.parse::<f64>().map_err(|_| bad())?,
            None => s.parse::<f64>().map_err(|_| bad())?,
        },
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}
