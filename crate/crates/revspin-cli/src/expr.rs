//! Flag-value grammars. Angles are plain decimals or multiples of pi
//! written [N]pi[/D]; spins are integers or twice-odd fractions such
//! as "3/2".

use revspin_core::HalfInt;
use std::f64::consts::PI;
use std::fmt;

/// An angle-valued flag. Keeps the source text so that formatting a
/// parsed angle reparses to the identical value.
#[derive(Clone, Debug)]
pub struct Angle {
    text: String,
    radians: f64,
}

impl Angle {
    pub fn parse(text: &str) -> Result<Angle, String> {
        let trimmed = text.trim();
        let (sign, body) = match trimmed.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, trimmed),
        };
        let magnitude = match body.find("pi") {
            Some(split) => {
                let coefficient = &body[..split];
                let tail = &body[split + 2..];
                let num = if coefficient.is_empty() {
                    1.0
                } else {
                    parse_decimal(coefficient)?
                };
                if tail.is_empty() {
                    num * PI
                } else if let Some(digits) = tail.strip_prefix('/') {
                    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(format!("denominator {digits:?} is not a positive integer"));
                    }
                    let den: u32 = digits
                        .parse()
                        .map_err(|_| format!("denominator {digits:?} is too large"))?;
                    if den == 0 {
                        return Err("division by zero in angle".to_owned());
                    }
                    num * PI / f64::from(den)
                } else {
                    return Err(format!("unexpected {tail:?} after pi"));
                }
            }
            None => parse_decimal(body)?,
        };
        Ok(Angle { text: trimmed.to_owned(), radians: sign * magnitude })
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn parse_decimal(text: &str) -> Result<f64, String> {
    let shape_ok = !text.is_empty()
        && text.bytes().any(|b| b.is_ascii_digit())
        && text.bytes().all(|b| b.is_ascii_digit() || b == b'.')
        && text.bytes().filter(|&b| b == b'.').count() <= 1;
    if !shape_ok {
        return Err(format!("{text:?} is not a decimal literal"));
    }
    text.parse::<f64>().map_err(|e| format!("{text:?}: {e}"))
}

/// Parses the half-integer grammar: an integer, or ODD/2.
pub fn parse_half_int(text: &str) -> Result<HalfInt, String> {
    let trimmed = text.trim();
    if let Some(numerator) = trimmed.strip_suffix("/2") {
        let twice: i32 = numerator
            .parse()
            .map_err(|_| format!("{trimmed:?} is not a half-integer"))?;
        Ok(HalfInt::from_twice(twice))
    } else {
        let whole: i32 = trimmed
            .parse()
            .map_err(|_| format!("{trimmed:?} is not a half-integer"))?;
        Ok(HalfInt::from_int(whole))
    }
}
