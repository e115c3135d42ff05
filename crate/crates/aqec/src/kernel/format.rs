//! Binary and JSON encodings of [`StateMatrix`].
//!
//! Binary layout, little endian: `b"AQSM"`, `u64` dimension, `u32` label count,
//! `u32` labels, then `dim²` row-major `(re, im)` pairs of `f64`.

use serde::{Deserialize, Serialize};

use super::state::StateMatrix;
use crate::error::{Error, Result};
use crate::linalg::{c, CMat};

pub const MAGIC: &[u8; 4] = b"AQSM";
/// Largest dimension accepted when decoding (12 qubits).
pub const MAX_DECODE_DIM: u64 = 1 << 12;

pub fn encode(state: &StateMatrix) -> Vec<u8> {
    let d = state.dim();
    let mut out = Vec::with_capacity(16 + 4 * state.labels().len() + 16 * d * d);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(d as u64).to_le_bytes());
    out.extend_from_slice(&(state.labels().len() as u32).to_le_bytes());
    for &l in state.labels() {
        out.extend_from_slice(&(l as u32).to_le_bytes());
    }
    let m = state.matrix();
    for i in 0..d {
        for j in 0..d {
            out.extend_from_slice(&m[(i, j)].re.to_le_bytes());
            out.extend_from_slice(&m[(i, j)].im.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() < n {
            return Err(Error::Parse("truncated state matrix".into()));
        }
        let (head, rest) = self.buf.split_at(n);
        self.buf = rest;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        let v = f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes"));
        if !v.is_finite() {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        Ok(v)
    }
}

pub fn decode(bytes: &[u8]) -> Result<StateMatrix> {
    let mut r = Reader { buf: bytes };
    if r.take(4)? != MAGIC {
        return Err(Error::Parse("bad magic".into()));
    }
    let dim = r.u64()?;
    if dim == 0 || dim > MAX_DECODE_DIM {
        return Err(Error::Parse(format!("dimension {dim} out of range")));
    }
    let nlabels = r.u32()? as usize;
    if nlabels > 12 {
        return Err(Error::Parse(format!("{nlabels} labels is too many")));
    }
    let labels = (0..nlabels).map(|_| r.u32().map(|l| l as usize)).collect::<Result<Vec<_>>>()?;
    let d = dim as usize;
    if r.buf.len() != 16 * d * d {
        return Err(Error::Parse(format!("expected {} payload bytes, found {}", 16 * d * d, r.buf.len())));
    }
    let mut m = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let re = r.f64()?;
            let im = r.f64()?;
            m[(i, j)] = c(re, im);
        }
    }
    StateMatrix::new(labels, m).map_err(|e| Error::Parse(e.to_string()))
}

/// Debug form `{"sites": [...], "re": [[...]], "im": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub sites: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

pub fn to_json(state: &StateMatrix) -> StateJson {
    let m = state.matrix();
    let d = state.dim();
    StateJson {
        sites: state.labels().to_vec(),
        re: (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect(),
        im: (0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect(),
    }
}

pub fn from_json(j: &StateJson) -> Result<StateMatrix> {
    let d = j.re.len();
    if d as u64 > MAX_DECODE_DIM || j.im.len() != d || j.re.iter().chain(&j.im).any(|row| row.len() != d) {
        return Err(Error::Parse("re/im must be square and of equal shape".into()));
    }
    let m = CMat::from_fn(d, d, |a, b| c(j.re[a][b], j.im[a][b]));
    StateMatrix::new(j.sites.clone(), m).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json_string(state: &StateMatrix) -> Result<String> {
    Ok(serde_json::to_string(&to_json(state))?)
}

pub fn from_json_str(s: &str) -> Result<StateMatrix> {
    let j: StateJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    from_json(&j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::random::{random_density, seeded};
    use proptest::prelude::*;

    #[test]
    fn rejects_malformed_bytes() {
        assert!(decode(b"").is_err());
        assert!(decode(b"XXXX").is_err());
        let mut bytes = encode(&random_density(&[0], 1, &mut seeded(0)));
        bytes.pop();
        assert!(decode(&bytes).is_err());
        let mut huge = MAGIC.to_vec();
        huge.extend_from_slice(&u64::MAX.to_le_bytes());
        assert!(decode(&huge).is_err());
    }

    #[test]
    fn json_rejects_ragged_rows() {
        assert!(from_json_str(r#"{"sites":[0],"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#).is_err());
        assert!(from_json_str("not json").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn round_trips(seed in any::<u64>(), m in 0usize..4) {
            let labels: Vec<usize> = (0..m).map(|i| 2 * i + 1).collect();
            let s = random_density(&labels, 2, &mut seeded(seed));
            let back = decode(&encode(&s)).unwrap();
            prop_assert_eq!(back.labels(), s.labels());
            prop_assert_eq!(back.matrix(), s.matrix());
            let j = from_json_str(&to_json_string(&s).unwrap()).unwrap();
            prop_assert_eq!(j.matrix(), s.matrix());
        }
    }
}
