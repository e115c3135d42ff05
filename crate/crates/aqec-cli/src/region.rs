//! Region literals.
//!
//! ```text
//! empty            the empty region
//! all:<k>          every k-qubit region
//! logical-x:<j>    support of the j-th logical X
//! logical-z:<j>    support of the j-th logical Z
//! 0,3,4            explicit qubits (commas or spaces)
//! ```

use aqec::codes::CodeSpace;
use aqec::geometry::Region;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, Result};

/// Largest number of regions a single `all:<k>` literal may expand to.
pub const MAX_EXPANSION: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionSpec {
    Sites(Vec<usize>),
    Literal(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegionLiteral {
    Empty,
    AllOfSize(usize),
    LogicalX(usize),
    LogicalZ(usize),
    Sites(Vec<usize>),
}

pub fn parse_region_literal(s: &str) -> Result<RegionLiteral> {
    let s = s.trim();
    if s == "empty" {
        return Ok(RegionLiteral::Empty);
    }
    let index = |rest: &str, what: &str| -> Result<usize> {
        rest.trim().parse().or_else(|_| config_err(format!("bad {what} index in region literal {s:?}")))
    };
    if let Some(rest) = s.strip_prefix("all:") {
        return Ok(RegionLiteral::AllOfSize(index(rest, "size")?));
    }
    if let Some(rest) = s.strip_prefix("logical-x:") {
        return Ok(RegionLiteral::LogicalX(index(rest, "logical")?));
    }
    if let Some(rest) = s.strip_prefix("logical-z:") {
        return Ok(RegionLiteral::LogicalZ(index(rest, "logical")?));
    }
    let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        return config_err(format!("empty region literal {s:?}; write \"empty\" for the empty region"));
    }
    let sites = parts
        .iter()
        .map(|p| p.parse::<usize>().or_else(|_| config_err(format!("bad qubit {p:?} in region literal {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionLiteral::Sites(sites))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl RegionLiteral {
    pub fn expand(&self, space: &CodeSpace) -> Result<Vec<Region>> {
        let lay = space.layout();
        let n = space.num_qubits();
        let logical = |j: usize, x: bool| -> Result<Vec<Region>> {
            let pairs = space.logical_pairs();
            let Some(pair) = pairs.get(j) else {
                return config_err(format!("code has {} logical qubits, no logical {j}", pairs.len()));
            };
            let p = if x { &pair.x } else { &pair.z };
            Ok(vec![Region::new(lay, p.support())?])
        };
        match self {
            RegionLiteral::Empty => Ok(vec![Region::empty(lay)]),
            RegionLiteral::LogicalX(j) => logical(*j, true),
            RegionLiteral::LogicalZ(j) => logical(*j, false),
            RegionLiteral::Sites(s) => {
                if let Some(q) = s.iter().find(|&&q| q >= n) {
                    return config_err(format!("qubit {q} is outside the {n}-qubit code"));
                }
                Ok(vec![Region::new(lay, s.iter().copied())?])
            }
            RegionLiteral::AllOfSize(k) => {
                if *k > n {
                    return config_err(format!("no {k}-qubit regions in a {n}-qubit code"));
                }
                if binomial(n, *k) > MAX_EXPANSION {
                    return config_err(format!("all:{k} expands to more than {MAX_EXPANSION} regions"));
                }
                let mut out = Vec::new();
                let mut pick: Vec<usize> = (0..*k).collect();
                loop {
                    out.push(Region::new(lay, pick.iter().copied())?);
                    // next combination in lexicographic order
                    let Some(i) = (0..*k).rev().find(|&i| pick[i] < n - k + i) else { break };
                    pick[i] += 1;
                    for j in i + 1..*k {
                        pick[j] = pick[j - 1] + 1;
                    }
                }
                Ok(out)
            }
        }
    }
}

impl RegionSpec {
    pub fn literal(&self) -> Result<RegionLiteral> {
        match self {
            RegionSpec::Sites(s) => Ok(RegionLiteral::Sites(s.clone())),
            RegionSpec::Literal(s) => parse_region_literal(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use aqec::codes::zoo;

    #[test]
    fn literals_parse() {
        assert_eq!(parse_region_literal("empty").unwrap(), RegionLiteral::Empty);
        assert_eq!(parse_region_literal(" all:2 ").unwrap(), RegionLiteral::AllOfSize(2));
        assert_eq!(parse_region_literal("logical-z:1").unwrap(), RegionLiteral::LogicalZ(1));
        assert_eq!(parse_region_literal("0, 3 4").unwrap(), RegionLiteral::Sites(vec![0, 3, 4]));
        for bad in ["", "all:", "all:x", "0,-1", "q1", "logical-y:0"] {
            assert!(parse_region_literal(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn all_expands_to_every_subset() {
        let code = zoo::five_qubit();
        assert_eq!(RegionLiteral::AllOfSize(2).expand(&code).unwrap().len(), 10);
        assert_eq!(RegionLiteral::AllOfSize(0).expand(&code).unwrap().len(), 1);
        assert_eq!(RegionLiteral::AllOfSize(5).expand(&code).unwrap()[0].len(), 5);
        assert!(RegionLiteral::AllOfSize(6).expand(&code).is_err());
        assert!(RegionLiteral::Sites(vec![5]).expand(&code).is_err());
        assert!(RegionLiteral::LogicalX(1).expand(&code).is_err());
    }

    #[test]
    fn spec_json_forms() {
        let a: RegionSpec = serde_json::from_str("[0, 2]").unwrap();
        let b: RegionSpec = serde_json::from_str("\"0,2\"").unwrap();
        assert_eq!(a.literal().unwrap(), b.literal().unwrap());
        assert!(serde_json::from_str::<RegionSpec>("{\"x\": 1}").is_err());
    }
}
