//! Text format for stabilizer generators and the JSON layout sidecar.
//!
//! ```text
//! aqec-stabilizer v1
//! n=5
//! # one generator per line: x bits | z bits
//! 10010|01100
//! ```

use serde::{Deserialize, Serialize};

use super::gf2::BitRow;
use super::pauli::Pauli;
use super::space::CodeSpace;
use super::stabilizer::StabilizerCode;
use crate::error::{Error, Result};
use crate::geometry::{Lattice, Layout, SiteMetric};

pub const STABILIZER_MAGIC: &str = "aqec-stabilizer v1";
pub const MAX_TEXT_QUBITS: usize = 64;

fn parse_err<T>(line: usize, msg: impl std::fmt::Display) -> Result<T> {
    Err(Error::Parse(format!("line {line}: {msg}")))
}

pub fn parse_stabilizer_text(text: &str) -> Result<StabilizerCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, l)) if l == STABILIZER_MAGIC => {}
        Some((i, l)) => return parse_err(i, format!("expected header {STABILIZER_MAGIC:?}, found {l:?}")),
        None => return Err(Error::Parse("empty stabilizer file".into())),
    }
    let n = match lines.next() {
        Some((i, l)) => match l.strip_prefix("n=").map(|v| v.trim().parse::<usize>()) {
            Some(Ok(n)) if (1..=MAX_TEXT_QUBITS).contains(&n) => n,
            _ => return parse_err(i, format!("expected n=<1..{MAX_TEXT_QUBITS}>, found {l:?}")),
        },
        None => return Err(Error::Parse("missing qubit count".into())),
    };
    let mut gens = Vec::new();
    for (i, l) in lines {
        let Some((xs, zs)) = l.split_once('|') else {
            return parse_err(i, "generator needs the form xbits|zbits");
        };
        let bits = |s: &str| -> Result<BitRow> {
            let s = s.trim();
            if s.len() != n {
                return parse_err(i, format!("expected {n} bits, found {}", s.len()));
            }
            let mut r = BitRow::zeros(n);
            for (q, ch) in s.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => r.set(q, true),
                    _ => return parse_err(i, format!("bad bit {ch:?}")),
                }
            }
            Ok(r)
        };
        gens.push(Pauli::from_bits(bits(xs)?, bits(zs)?));
    }
    StabilizerCode::new(n, gens).map_err(|e| Error::Parse(e.to_string()))
}

pub fn stabilizer_to_text(code: &StabilizerCode) -> String {
    let n = code.num_qubits();
    let mut out = format!("{STABILIZER_MAGIC}\nn={n}\n");
    for g in code.generators() {
        let bits = |r: &BitRow| (0..n).map(|q| if r.get(q) { '1' } else { '0' }).collect::<String>();
        out.push_str(&format!("{}|{}\n", bits(g.x_bits()), bits(g.z_bits())));
    }
    out
}

/// Geometry of a code read from disk: the lattice and each qubit's coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutSidecar {
    pub name: String,
    pub lattice: Lattice,
    pub qubits: Vec<Vec<usize>>,
}

impl LayoutSidecar {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let side: LayoutSidecar = serde_json::from_str(s)?;
        side.lattice.validate()?;
        Ok(side)
    }

    pub fn to_layout(&self) -> Result<Layout> {
        let sites = self
            .qubits
            .iter()
            .map(|c| {
                self.lattice
                    .site_at(c)
                    .ok_or_else(|| Error::InvalidArgument(format!("qubit coordinates {c:?} are off the lattice")))
            })
            .collect::<Result<Vec<_>>>()?;
        Layout::new(self.name.clone(), self.lattice.clone(), sites)
    }

    pub fn from_layout(layout: &Layout) -> Self {
        LayoutSidecar {
            name: layout.name.clone(),
            lattice: layout.lattice.clone(),
            qubits: (0..layout.num_sites()).map(|q| layout.coords(q)).collect(),
        }
    }
}

/// Code from its text file and optional sidecar; without a sidecar the qubits sit on an open chain.
pub fn load_code(name: &str, text: &str, sidecar: Option<&str>) -> Result<CodeSpace> {
    let code = parse_stabilizer_text(text)?;
    let layout = match sidecar {
        Some(s) => LayoutSidecar::from_json_str(s)?.to_layout()?,
        None => Layout::full(name, Lattice::open(1, code.num_qubits())?),
    };
    CodeSpace::from_stabilizer(name, code, layout)
}
