//! Channels in factored Kraus form `K_j = L · core_j · R_j†`, plus an optional completion
//! `X ↦ Tr(Q X) ω` with `Q = I − F F†` and `ω = E E†`.

use crate::error::{invalid, Error, Result};
use crate::kernel::tensor::{deposit_table, positions};
use crate::linalg::{adjoint, axpy, eigh, identity, max_abs_diff, sub, trace, zeros, CMat, C64};

/// Dense Kraus operators are materialised only up to this many entries each.
pub const MAX_DENSE_KRAUS_ENTRIES: usize = 1 << 24;
/// Trace-preservation and unitality checks need `d_in` at most this.
pub const MAX_DENSE_CHECK_DIM: usize = 1 << 12;

#[derive(Clone, Debug)]
pub struct KrausTerm {
    pub core: CMat,
    pub right: usize,
}

#[derive(Clone, Debug)]
pub struct Completion {
    /// Columns span the part of the input that the Kraus terms cover.
    pub f: CMat,
    /// `ω = omega omega†` is the state prepared on the uncovered part.
    pub omega: CMat,
}

#[derive(Clone, Debug)]
pub struct QuantumChannel {
    label: String,
    input: Vec<usize>,
    output: Vec<usize>,
    left: CMat,
    terms: Vec<KrausTerm>,
    rights: Vec<CMat>,
    completion: Option<Completion>,
    warnings: Vec<String>,
}

fn sorted(sites: &[usize]) -> Result<Vec<usize>> {
    let mut v = sites.to_vec();
    v.sort_unstable();
    let len = v.len();
    v.dedup();
    if v.len() != len {
        return invalid("site list has repeats");
    }
    Ok(v)
}

impl QuantumChannel {
    #[allow(clippy::too_many_arguments)]
    pub fn factored(
        label: impl Into<String>,
        input: &[usize],
        output: &[usize],
        left: CMat,
        terms: Vec<KrausTerm>,
        rights: Vec<CMat>,
        completion: Option<Completion>,
    ) -> Result<Self> {
        let input = sorted(input)?;
        let output = sorted(output)?;
        let (d_in, d_out) = (1usize << input.len(), 1usize << output.len());
        if left.nrows() != d_out {
            return invalid(format!("left factor has {} rows, output dimension is {d_out}", left.nrows()));
        }
        for r in &rights {
            if r.nrows() != d_in {
                return invalid(format!("right factor has {} rows, input dimension is {d_in}", r.nrows()));
            }
        }
        for t in &terms {
            let Some(r) = rights.get(t.right) else { return invalid("Kraus term points at a missing right factor") };
            if t.core.nrows() != left.ncols() || t.core.ncols() != r.ncols() {
                return invalid("Kraus core has the wrong shape");
            }
        }
        if let Some(c) = &completion {
            if c.f.nrows() != d_in || c.omega.nrows() != d_out {
                return invalid("completion factors have the wrong shape");
            }
        }
        Ok(QuantumChannel { label: label.into(), input, output, left, terms, rights, completion, warnings: vec![] })
    }

    /// Channel from dense Kraus operators (each `d_out x d_in`).
    pub fn from_kraus(label: impl Into<String>, input: &[usize], output: &[usize], kraus: Vec<CMat>) -> Result<Self> {
        let d_in = 1usize << input.len();
        let d_out = 1usize << output.len();
        for k in &kraus {
            if k.nrows() != d_out || k.ncols() != d_in {
                return invalid(format!("Kraus operator is {}x{}, expected {d_out}x{d_in}", k.nrows(), k.ncols()));
            }
        }
        let terms = kraus.into_iter().map(|core| KrausTerm { core, right: 0 }).collect();
        Self::factored(label, input, output, identity(d_out), terms, vec![identity(d_in)], None)
    }

    /// Identity on `sites`.
    pub fn identity(sites: &[usize]) -> Result<Self> {
        let d = 1usize << sites.len();
        Self::from_kraus("identity", sites, sites, vec![identity(d)])
    }

    /// Keeps `input` and prepares `omega` on the extra output sites `erased`.
    pub fn fixed_garbage(erased: &[usize], input: &[usize], omega: &CMat) -> Result<Self> {
        let mut output: Vec<usize> = erased.iter().chain(input).copied().collect();
        output.sort_unstable();
        let pe = positions(&output, &sorted(erased)?)?;
        let pi = positions(&output, &sorted(input)?)?;
        let de = deposit_table(&pe);
        let di = deposit_table(&pi);
        if omega.nrows() != de.len() {
            return invalid("garbage state has the wrong dimension");
        }
        let (vals, vecs) = eigh(omega)?;
        let mut kraus = Vec::new();
        for (m, &p) in vals.iter().enumerate() {
            if p <= 1e-15 {
                continue;
            }
            let mut k = zeros(1 << output.len(), di.len());
            for b in 0..di.len() {
                for a in 0..de.len() {
                    k[(de[a] | di[b], b)] = vecs[(a, m)] * p.sqrt();
                }
            }
            kraus.push(k);
        }
        Self::from_kraus("fixed-garbage", input, &output, kraus)
    }

    pub fn with_warning(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn input_sites(&self) -> &[usize] {
        &self.input
    }

    pub fn output_sites(&self) -> &[usize] {
        &self.output
    }

    pub fn input_dim(&self) -> usize {
        1 << self.input.len()
    }

    pub fn output_dim(&self) -> usize {
        1 << self.output.len()
    }

    pub fn left(&self) -> &CMat {
        &self.left
    }

    pub fn terms(&self) -> &[KrausTerm] {
        &self.terms
    }

    pub fn rights(&self) -> &[CMat] {
        &self.rights
    }

    pub fn completion(&self) -> Option<&Completion> {
        self.completion.as_ref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn completion_projector(&self) -> Option<CMat> {
        self.completion.as_ref().map(|c| sub(&identity(self.input_dim()), &(&c.f * adjoint(&c.f))))
    }

    /// Every Kraus operator as a dense `d_out x d_in` matrix, completion included.
    pub fn kraus_dense(&self) -> Result<Vec<CMat>> {
        if self.input_dim() * self.output_dim() > MAX_DENSE_KRAUS_ENTRIES {
            return Err(Error::Capacity("Kraus operators too large to materialise".into()));
        }
        let mut out: Vec<CMat> =
            self.terms.iter().map(|t| &self.left * &t.core * adjoint(&self.rights[t.right])).collect();
        if let (Some(c), Some(q)) = (&self.completion, self.completion_projector()) {
            let (vals, vecs) = eigh(&q)?;
            for (j, &l) in vals.iter().enumerate() {
                if l <= 1e-14 {
                    continue;
                }
                let s = l.sqrt();
                for e in 0..c.omega.ncols() {
                    out.push(CMat::from_fn(self.output_dim(), self.input_dim(), |a, b| {
                        c.omega[(a, e)] * vecs[(b, j)].conj() * s
                    }));
                }
            }
        }
        Ok(out)
    }

    /// Stinespring isometry `Σ_j K_j ⊗ |j⟩` with the environment as the slow index.
    pub fn stinespring(&self) -> Result<CMat> {
        let ks = self.kraus_dense()?;
        let (d_out, d_in) = (self.output_dim(), self.input_dim());
        Ok(CMat::from_fn(d_out * ks.len(), d_in, |r, c| ks[r / d_out][(r % d_out, c)]))
    }

    fn check_dim(&self) -> Result<()> {
        if self.input_dim() > MAX_DENSE_CHECK_DIM {
            return Err(Error::Capacity("dense channel check limited to 12 input qubits".into()));
        }
        Ok(())
    }

    pub fn apply(&self, x: &CMat) -> Result<CMat> {
        self.check_dim()?;
        if x.nrows() != self.input_dim() || x.ncols() != self.input_dim() {
            return invalid("input operator has the wrong dimension");
        }
        let mut out = zeros(self.output_dim(), self.output_dim());
        for t in &self.terms {
            let k = &self.left * &t.core * adjoint(&self.rights[t.right]);
            out += &k * x * adjoint(&k);
        }
        if let (Some(c), Some(q)) = (&self.completion, self.completion_projector()) {
            let w = trace(&(&q * x));
            axpy(&mut out, w, &(&c.omega * adjoint(&c.omega)));
        }
        Ok(out)
    }

    /// Heisenberg-picture map `Y ↦ Σ K† Y K + Tr(ω Y) Q`.
    pub fn adjoint_apply(&self, y: &CMat) -> Result<CMat> {
        self.check_dim()?;
        if y.nrows() != self.output_dim() || y.ncols() != self.output_dim() {
            return invalid("output operator has the wrong dimension");
        }
        let mut out = zeros(self.input_dim(), self.input_dim());
        for t in &self.terms {
            let k = &self.left * &t.core * adjoint(&self.rights[t.right]);
            out += adjoint(&k) * y * &k;
        }
        if let (Some(c), Some(q)) = (&self.completion, self.completion_projector()) {
            let w = trace(&(adjoint(&c.omega) * y * &c.omega));
            axpy(&mut out, w, &q);
        }
        Ok(out)
    }

    /// `max |Σ K†K − I|`.
    pub fn trace_preservation_defect(&self) -> Result<f64> {
        let id = identity(self.output_dim());
        Ok(max_abs_diff(&self.adjoint_apply(&id)?, &identity(self.input_dim())))
    }

    /// First prepares `omega` on `sites` (part of the input), then runs this channel.
    pub fn compose_prepare(&self, sites: &[usize], omega: &CMat) -> Result<QuantumChannel> {
        let sites = sorted(sites)?;
        let new_input: Vec<usize> = self.input.iter().copied().filter(|s| !sites.contains(s)).collect();
        if new_input.len() + sites.len() != self.input.len() {
            return invalid("prepared sites must be channel inputs");
        }
        let pa = positions(&self.input, &sites)?;
        let pc = positions(&self.input, &new_input)?;
        let da = deposit_table(&pa);
        let dc = deposit_table(&pc);
        if omega.nrows() != da.len() {
            return invalid("prepared state has the wrong dimension");
        }
        let (vals, vecs) = eigh(omega)?;
        let modes: Vec<(f64, usize)> = vals.iter().enumerate().filter(|(_, &p)| p > 1e-15).map(|(m, &p)| (p, m)).collect();
        // (e_m ⊗ I)† R, weighted by √p_m
        let contract = |r: &CMat, p: f64, m: usize| {
            CMat::from_fn(dc.len(), r.ncols(), |c, s| {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..da.len() {
                    acc += vecs[(a, m)].conj() * r[(da[a] | dc[c], s)];
                }
                acc * p.sqrt()
            })
        };
        let mut rights = Vec::new();
        let mut terms = Vec::new();
        for (ri, r) in self.rights.iter().enumerate() {
            for &(p, m) in &modes {
                rights.push(contract(r, p, m));
                let idx = rights.len() - 1;
                for t in self.terms.iter().filter(|t| t.right == ri) {
                    terms.push(KrausTerm { core: t.core.clone(), right: idx });
                }
            }
        }
        let completion = match &self.completion {
            None => None,
            Some(c) => {
                let blocks: Vec<CMat> = modes.iter().map(|&(p, m)| contract(&c.f, p, m)).collect();
                Some(Completion { f: crate::linalg::hcat(&blocks), omega: c.omega.clone() })
            }
        };
        let mut out = QuantumChannel::factored(
            format!("{}∘prepare", self.label),
            &new_input,
            &self.output,
            self.left.clone(),
            terms,
            rights,
            completion,
        )?;
        out.warnings = self.warnings.clone();
        Ok(out)
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::random::{random_density, seeded};
    use crate::linalg::scale_re;

    #[test]
    fn garbage_channel_is_trace_preserving() {
        let omega = scale_re(&identity(2), 0.5);
        let ch = QuantumChannel::fixed_garbage(&[0], &[1, 2], &omega).unwrap();
        assert!(ch.trace_preservation_defect().unwrap() < 1e-12);
        assert_eq!(ch.output_sites(), &[0, 1, 2]);
        let rho = random_density(&[1, 2], 2, &mut seeded(3));
        let out = ch.apply(rho.matrix()).unwrap();
        assert!((trace(&out).re - 1.0).abs() < 1e-12);
        let unital = ch.adjoint_apply(&identity(8)).unwrap();
        assert!(max_abs_diff(&unital, &identity(4)) < 1e-12);
    }

    #[test]
    fn stinespring_is_an_isometry() {
        let omega = random_density(&[0], 2, &mut seeded(5)).into_matrix();
        let ch = QuantumChannel::fixed_garbage(&[0], &[1], &omega).unwrap();
        let v = ch.stinespring().unwrap();
        assert!(max_abs_diff(&(adjoint(&v) * &v), &identity(2)) < 1e-12);
    }

    #[test]
    fn preparing_an_input_matches_the_product() {
        // identity channel on {0,1}; preparing ω on 0 must equal garbage on 0
        let id = QuantumChannel::identity(&[0, 1]).unwrap();
        let omega = random_density(&[0], 2, &mut seeded(9)).into_matrix();
        let prep = id.compose_prepare(&[0], &omega).unwrap();
        let garb = QuantumChannel::fixed_garbage(&[0], &[1], &omega).unwrap();
        let rho = random_density(&[1], 2, &mut seeded(1)).into_matrix();
        assert!(max_abs_diff(&prep.apply(&rho).unwrap(), &garb.apply(&rho).unwrap()) < 1e-12);
        assert!(prep.trace_preservation_defect().unwrap() < 1e-12);
    }

    #[test]
    fn rejects_mismatched_kraus() {
        assert!(QuantumChannel::from_kraus("bad", &[0], &[0, 1], vec![identity(2)]).is_err());
    }
}
