//! One-dimensional parameter grids, written `lo:hi:count[:log]`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub log: bool,
}

impl Grid {
    pub fn linear(lo: f64, hi: f64, count: usize) -> Self {
        Self { lo, hi, count, log: false }
    }

    pub fn log(lo: f64, hi: f64, count: usize) -> Self {
        Self { lo, hi, count, log: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::arg("grid needs at least one point"));
        }
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.hi < self.lo {
            return Err(Error::arg(format!("grid bounds [{}, {}] invalid", self.lo, self.hi)));
        }
        if self.count > 1 && self.hi == self.lo {
            return Err(Error::arg("grid with several points needs hi > lo"));
        }
        if self.log && self.lo <= 0.0 {
            return Err(Error::arg("log grid needs positive bounds"));
        }
        Ok(())
    }

    /// Grid values; endpoints are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let last = self.count - 1;
        (0..self.count)
            .map(|k| {
                if k == 0 {
                    self.lo
                } else if k == last {
                    self.hi
                } else {
                    let f = k as f64 / last as f64;
                    if self.log {
                        (self.lo.ln() + f * (self.hi.ln() - self.lo.ln())).exp()
                    } else {
                        self.lo + f * (self.hi - self.lo)
                    }
                }
            })
            .collect()
    }
}

impl TryFrom<String> for Grid {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        g.to_string()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::arg(format!("grid `{s}` is not lo:hi:count[:log|lin]"));
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let log = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") | Some("linear") => false,
            Some("log") => true,
            Some(_) => return Err(bad()),
        };
        let g = Grid { lo, hi, count, log };
        g.validate()?;
        Ok(g)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.lo, self.hi, self.count, if self.log { "log" } else { "lin" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_values() {
        let g: Grid = "1e-3:1e3:13:log".parse().unwrap();
        let v = g.values();
        assert_eq!(v.len(), 13);
        assert_eq!(v[0], 1e-3);
        assert_eq!(v[12], 1e3);
        assert!((v[6] - 1.0).abs() < 1e-12);
        assert!((v[1] / v[0] - 10f64.sqrt()).abs() < 1e-9);
        let lin: Grid = "0:1:5".parse().unwrap();
        assert_eq!(lin.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(lin.to_string().parse::<Grid>().unwrap(), lin);
    }

    #[test]
    fn rejects_bad_grids() {
        for s in ["1:0:3", "0:1:3:log", "a:b:c", "0:1", "0:1:0", "1:1:3"] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
    }
}
