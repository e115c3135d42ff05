//! Pauli operators `i^phase X^x Z^z` on n qubits.

use std::fmt;

use super::gf2::BitRow;
use crate::error::{Error, Result};
use crate::linalg::{c, zeros, CMat, C64};

/// Largest qubit count for which a Pauli is applied to dense vectors.
pub const MAX_DENSE_QUBITS: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pauli {
    x: BitRow,
    z: BitRow,
    phase: u8,
}

fn i_pow(p: u8) -> C64 {
    match p % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    }
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        Pauli { x: BitRow::zeros(n), z: BitRow::zeros(n), phase: 0 }
    }

    /// Hermitian Pauli from its bit words; Y positions get the phase that makes it Hermitian.
    pub fn from_bits(x: BitRow, z: BitRow) -> Self {
        assert_eq!(x.len(), z.len());
        let mut p = Pauli { x, z, phase: 0 };
        p.phase = (p.y_count() % 4) as u8;
        p
    }

    pub fn from_symplectic(v: &BitRow) -> Self {
        let n = v.len() / 2;
        let x = v.select(&(0..n).collect::<Vec<_>>());
        let z = v.select(&(n..2 * n).collect::<Vec<_>>());
        Self::from_bits(x, z)
    }

    /// Single-qubit letter on qubit `q`.
    pub fn single(n: usize, q: usize, letter: char) -> Result<Self> {
        let mut x = BitRow::zeros(n);
        let mut z = BitRow::zeros(n);
        match letter {
            'I' => {}
            'X' => x.set(q, true),
            'Z' => z.set(q, true),
            'Y' => {
                x.set(q, true);
                z.set(q, true);
            }
            _ => return Err(Error::Parse(format!("unknown Pauli letter {letter:?}"))),
        }
        Ok(Self::from_bits(x, z))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = if let Some(rest) = s.strip_prefix("-i") {
            (3u8, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else {
            (0, s)
        };
        if body.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        let n = body.chars().count();
        let mut x = BitRow::zeros(n);
        let mut z = BitRow::zeros(n);
        for (q, ch) in body.chars().enumerate() {
            match ch.to_ascii_uppercase() {
                'I' | '_' => {}
                'X' => x.set(q, true),
                'Z' => z.set(q, true),
                'Y' => {
                    x.set(q, true);
                    z.set(q, true);
                }
                other => return Err(Error::Parse(format!("unknown Pauli letter {other:?}"))),
            }
        }
        let mut p = Self::from_bits(x, z);
        p.phase = (p.phase + sign) % 4;
        Ok(p)
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitRow {
        &self.x
    }

    pub fn z_bits(&self) -> &BitRow {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    fn y_count(&self) -> usize {
        self.x.ones().filter(|&q| self.z.get(q)).count()
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize) % 2 == self.y_count() % 2
    }

    /// `[x | z]` of length 2n.
    pub fn symplectic(&self) -> BitRow {
        let n = self.num_qubits();
        let mut v = BitRow::zeros(2 * n);
        for q in self.x.ones() {
            v.set(q, true);
        }
        for q in self.z.ones() {
            v.set(n + q, true);
        }
        v
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits()).filter(|&q| self.x.get(q) || self.z.get(q)).collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn commutes_with(&self, other: &Pauli) -> bool {
        self.x.dot(&other.z) == other.x.dot(&self.z)
    }

    pub fn mul(&self, other: &Pauli) -> Pauli {
        assert_eq!(self.num_qubits(), other.num_qubits());
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        let swap = if self.z.dot(&other.x) { 2 } else { 0 };
        Pauli { x, z, phase: (self.phase + other.phase + swap) % 4 }
    }

    /// Hermitian representative of the same X/Z pattern.
    pub fn hermitian_form(&self) -> Pauli {
        Self::from_bits(self.x.clone(), self.z.clone())
    }

    fn masks(&self) -> (usize, usize) {
        let n = self.num_qubits();
        assert!(n <= MAX_DENSE_QUBITS, "dense Pauli action needs at most {MAX_DENSE_QUBITS} qubits");
        let mut xm = 0usize;
        let mut zm = 0usize;
        for q in self.x.ones() {
            xm |= 1 << q;
        }
        for q in self.z.ones() {
            zm |= 1 << q;
        }
        (xm, zm)
    }

    /// Column `i` maps to row `i ^ x` with coefficient `i^p (-1)^{z.i}`.
    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let (xm, zm) = self.masks();
        assert_eq!(psi.len(), 1 << self.num_qubits());
        let ph = i_pow(self.phase);
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        for (i, &a) in psi.iter().enumerate() {
            let s = if (zm & i).count_ones() % 2 == 1 { -ph } else { ph };
            out[i ^ xm] = s * a;
        }
        out
    }

    pub fn to_matrix(&self) -> CMat {
        let (xm, zm) = self.masks();
        let d = 1usize << self.num_qubits();
        let ph = i_pow(self.phase);
        let mut m = zeros(d, d);
        for i in 0..d {
            let s = if (zm & i).count_ones() % 2 == 1 { -ph } else { ph };
            m[(i ^ xm, i)] = s;
        }
        m
    }

    /// Left multiplication `P * M` for a dense matrix on the same qubits.
    pub fn left_mul(&self, m: &CMat) -> CMat {
        let (xm, zm) = self.masks();
        let ph = i_pow(self.phase);
        let mut out = zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            let s = if (zm & i).count_ones() % 2 == 1 { -ph } else { ph };
            for j in 0..m.ncols() {
                out[(i ^ xm, j)] = s * m[(i, j)];
            }
        }
        out
    }

    /// Pauli on the listed positions only, as an operator on `positions.len()` qubits.
    pub fn restrict(&self, positions: &[usize]) -> Pauli {
        Pauli::from_bits(self.x.select(positions), self.z.select(positions))
    }

    /// Relabel qubit `q` as `map[q]` in a system of `n` qubits.
    pub fn relabel(&self, map: &[usize], n: usize) -> Pauli {
        let mut x = BitRow::zeros(n);
        let mut z = BitRow::zeros(n);
        for q in self.x.ones() {
            x.set(map[q], true);
        }
        for q in self.z.ones() {
            z.set(map[q], true);
        }
        Pauli { x, z, phase: self.phase }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let extra = (self.phase as usize + 4 - self.y_count() % 4) % 4;
        f.write_str(match extra {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        })?;
        for q in 0..self.num_qubits() {
            let ch = match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// All 4^m Hermitian Paulis on m qubits, identity first.
pub fn all_paulis(m: usize) -> Vec<Pauli> {
    (0..1usize << (2 * m))
        .map(|code| {
            let mut x = BitRow::zeros(m);
            let mut z = BitRow::zeros(m);
            for q in 0..m {
                match (code >> (2 * q)) & 3 {
                    1 => x.set(q, true),
                    2 => z.set(q, true),
                    3 => {
                        x.set(q, true);
                        z.set(q, true);
                    }
                    _ => {}
                }
            }
            Pauli::from_bits(x, z)
        })
        .collect()
}
