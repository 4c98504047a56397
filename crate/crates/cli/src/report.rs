use num_traits::Zero;
use zeitlin_core::rational::decimal_string;
use zeitlin_core::Rational;

/// Renders a float with the same significant-digit style as the exact
/// decimal companions, by way of its exact binary rational value.
pub fn float_decimal(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    match Rational::from_float(v) {
        Some(r) => decimal_string(&r, digits),
        None => "nan".to_string(),
    }
}

/// Decimal companion of an exact rational.
pub fn ratio_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        "0".to_string()
    } else {
        decimal_string(r, digits)
    }
}

/// Accumulates output lines and emits them in one write, so rows appear
/// in computation order no matter how the work was scheduled.
#[derive(Debug, Default)]
pub struct Emitter {
    lines: Vec<String>,
}

impl Emitter {
    pub fn push(&mut self, line: String) {
        self.lines.push(line);
    }

    pub fn finish(self) -> String {
        let mut out = self.lines.join("\n");
        if !out.is_empty() {
            out.push('\n');
        }
        out
    }
}

pub fn csv_row(cells: &[String]) -> String {
    cells.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use zeitlin_core::rational::parse_ratio;

    #[test]
    fn float_and_exact_companions_agree() {
        let exact = parse_ratio("3/4").unwrap();
        assert_eq!(ratio_decimal(&exact, 15), "0.75");
        assert_eq!(float_decimal(0.75, 15), "0.75");
        assert_eq!(float_decimal(0.0, 15), "0");
        assert_eq!(float_decimal(1.0 / 3.0, 6), "0.333333");
    }

    #[test]
    fn emitter_keeps_push_order() {
        let mut e = Emitter::default();
        e.push("a,b".to_string());
        e.push("c,d".to_string());
        assert_eq!(e.finish(), "a,b\nc,d\n");
    }
}
