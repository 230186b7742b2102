//! `a:b:count` grids and comma-separated mixes.

use crate::{usage, CliError};

/// Inclusive equally spaced grid from `a:b:count`, `count ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(usage(format!("grid must look like a:b:count, got '{text}'")));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| usage(format!("bad grid bound '{s}'")));
        let start = num(parts[0])?;
        let end = num(parts[1])?;
        let count: usize = parts[2].trim().parse().map_err(|_| usage(format!("bad grid count '{}'", parts[2])))?;
        if count < 2 {
            return Err(usage("grid count must be at least 2"));
        }
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(usage(format!("grid needs finite a < b, got {start}:{end}")));
        }
        Ok(Self { start, end, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.end } else { self.start + step * i as f64 }).collect()
    }
}

/// Comma-separated mix, normalised to unit length.
pub fn parse_mix(text: &str) -> Result<Vec<f64>, CliError> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| usage(format!("bad mix entry '{s}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    let len = values.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(len > 0.0) || !len.is_finite() {
        return Err(usage("mix must be a non-zero vector"));
    }
    Ok(values.iter().map(|x| x / len).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = GridSpec::parse("0.1:2.0:20").unwrap();
        let p = g.points();
        assert_eq!(p.len(), 20);
        assert_eq!(p[0], 0.1);
        assert_eq!(p[19], 2.0);
    }

    #[test]
    fn grid_rejects() {
        for bad in ["1:2", "1:2:1", "2:1:5", "a:2:3", "0:inf:3"] {
            assert!(GridSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn mix_is_normalised() {
        let m = parse_mix("1, 1").unwrap();
        assert!((m[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(parse_mix("0,0").is_err());
        assert!(parse_mix("1,x").is_err());
    }
}
