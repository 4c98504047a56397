use crate::error::CliError;

/// Parses an index list written as a single value (`"7"`), an inclusive
/// range (`"2..32"`), a comma list (`"32,64,128"`), or any comma mix of
/// the two. Order is kept as written; ranges expand ascending.
pub fn parse_list(spec: &str, what: &str) -> Result<Vec<u32>, CliError> {
    let bad = |piece: &str| {
        CliError::usage(format!("cannot read {what} value `{piece}` (expected e.g. 7, 2..32, or 32,64,128)"))
    };
    let mut out = Vec::new();
    for piece in spec.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(bad(piece));
        }
        match piece.split_once("..") {
            None => out.push(piece.parse::<u32>().map_err(|_| bad(piece))?),
            Some((a, b)) => {
                let lo: u32 = a.trim().parse().map_err(|_| bad(piece))?;
                let hi: u32 = b.trim().parse().map_err(|_| bad(piece))?;
                if lo > hi {
                    return Err(CliError::usage(format!("empty {what} range `{piece}`")));
                }
                out.extend(lo..=hi);
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::usage(format!("no {what} values given")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singles_ranges_and_lists() {
        assert_eq!(parse_list("7", "N").unwrap(), vec![7]);
        assert_eq!(parse_list("2..5", "N").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_list("32,64,128", "N").unwrap(), vec![32, 64, 128]);
        assert_eq!(parse_list("1..3,9", "l").unwrap(), vec![1, 2, 3, 9]);
    }

    #[test]
    fn malformed_specs_are_usage_errors() {
        for bad in ["", "x", "3..", "..4", "5..3", "1,,2", "2.5"] {
            let err = parse_list(bad, "N").unwrap_err();
            assert_eq!(err.code, 2, "{bad}");
        }
    }
}
