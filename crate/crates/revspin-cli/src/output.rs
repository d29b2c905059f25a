//! Deterministic CSV rendering. Floats carry 12 significant digits,
//! positional inside [1e-4, 1e6) and scientific outside; rows end in a
//! bare LF.

/// Formats one float cell.
pub fn fmt_value(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let magnitude = x.abs();
    if !(1e-4..1e6).contains(&magnitude) {
        format!("{x:.11e}")
    } else {
        let exponent = magnitude.log10().floor() as i32;
        let decimals = (11 - exponent) as usize;
        format!("{x:.decimals$}")
    }
}

/// CSV accumulator with a fixed header row.
pub struct Csv {
    buffer: String,
}

impl Csv {
    pub fn new(header: &str) -> Csv {
        let mut buffer = String::with_capacity(256);
        buffer.push_str(header);
        buffer.push('\n');
        Csv { buffer }
    }

    pub fn row<I>(&mut self, cells: I)
    where
        I: IntoIterator<Item = String>,
    {
        let mut first = true;
        for cell in cells {
            if !first {
                self.buffer.push(',');
            }
            self.buffer.push_str(&cell);
            first = false;
        }
        self.buffer.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buffer
    }
}
