use crate::CliError;

/// Parses `start:step:end` (inclusive, values `start + i·step`) or a comma
/// separated list. An empty string is an empty grid.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| CliError::Input(format!("grid value {s:?} is not a finite number")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, step, end] => {
            let (start, step, end) = (number(start)?, number(step)?, number(end)?);
            if !(step > 0.0) || end < start {
                return Err(CliError::Input(
                    "range grid needs step > 0 and end ≥ start".into(),
                ));
            }
            // tolerate round-off so 0:0.05:1 includes 1
            let count = ((end - start) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|i| start + i as f64 * step).collect())
        }
        [_] => text.split(',').map(number).collect(),
        _ => Err(CliError::Input(format!(
            "grid {text:?} is neither start:step:end nor a comma list"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let g = parse_grid("0:0.05:1").unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0], 0.0);
        assert!((g[20] - 1.0).abs() < 1e-12);
        assert_eq!(parse_grid("0:0.3:1").unwrap().len(), 4);
        assert_eq!(parse_grid("2:1:2").unwrap(), vec![2.0]);
    }

    #[test]
    fn lists_and_empty() {
        assert_eq!(parse_grid("0, 0.5,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_grid("").unwrap().is_empty());
        assert!(parse_grid("  ").unwrap().is_empty());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("0:0:1").is_err());
        assert!(parse_grid("1:0.1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("nan").is_err());
    }
}
