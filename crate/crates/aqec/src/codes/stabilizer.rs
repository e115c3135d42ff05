//! Stabilizer groups, logical operators and distance.

use super::gf2::{nullspace, rank, BitRow, Span};
use super::pauli::Pauli;
use crate::error::{invalid, Error, Result};

/// Weight minimisation over stabilizer cosets enumerates at most 2^this elements.
pub const MAX_COSET_ENUMERATION_BITS: usize = 20;
/// Distance by region enumeration refuses larger systems unless forced.
pub const MAX_DISTANCE_QUBITS: usize = 30;

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    n: usize,
    generators: Vec<Pauli>,
}

/// A conjugate pair of logical operators, `X̄ Z̄ = -Z̄ X̄`.
#[derive(Clone, Debug)]
pub struct LogicalPair {
    pub x: Pauli,
    pub z: Pauli,
}

fn symplectic_form(a: &BitRow, b: &BitRow, n: usize) -> bool {
    let mut acc = false;
    for q in 0..n {
        acc ^= (a.get(q) && b.get(n + q)) ^ (a.get(n + q) && b.get(q));
    }
    acc
}

impl StabilizerCode {
    pub fn new(n: usize, generators: Vec<Pauli>) -> Result<Self> {
        if n == 0 {
            return invalid("a code needs at least one qubit");
        }
        for (i, g) in generators.iter().enumerate() {
            if g.num_qubits() != n {
                return invalid(format!("generator {i} acts on {} qubits, expected {n}", g.num_qubits()));
            }
            if !g.is_hermitian() {
                return invalid(format!("generator {i} ({g}) is not Hermitian"));
            }
            if g.is_identity_up_to_phase() {
                return invalid(format!("generator {i} is proportional to the identity"));
            }
            for (j, h) in generators.iter().enumerate().take(i) {
                if !g.commutes_with(h) {
                    return invalid(format!("generators {j} and {i} anticommute"));
                }
            }
        }
        let rows: Vec<BitRow> = generators.iter().map(Pauli::symplectic).collect();
        if rank(&rows) != generators.len() {
            return invalid("generators are not independent");
        }
        Ok(StabilizerCode { n, generators })
    }

    pub fn from_strings(gens: &[&str]) -> Result<Self> {
        let paulis = gens.iter().map(|s| Pauli::parse(s)).collect::<Result<Vec<_>>>()?;
        let n = paulis.first().map_or(0, Pauli::num_qubits);
        Self::new(n, paulis)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_logical(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn generators(&self) -> &[Pauli] {
        &self.generators
    }

    fn rows(&self) -> Vec<BitRow> {
        self.generators.iter().map(Pauli::symplectic).collect()
    }

    /// Whether the X/Z pattern of `p` lies in the stabilizer group (phase ignored).
    pub fn in_stabilizer_group(&self, p: &Pauli) -> bool {
        Span::new(&self.rows()).contains(&p.symplectic())
    }

    pub fn commutes_with_all(&self, p: &Pauli) -> bool {
        self.generators.iter().all(|g| g.commutes_with(p))
    }

    /// Canonical conjugate pairs, each member minimised in weight over its stabilizer coset
    /// when the coset is small enough to enumerate.
    pub fn logical_operators(&self) -> Vec<LogicalPair> {
        let n = self.n;
        let rows = self.rows();
        // v commutes with g iff v . swap(g) = 0
        let swapped: Vec<BitRow> = rows
            .iter()
            .map(|g| {
                let mut s = BitRow::zeros(2 * n);
                for q in 0..n {
                    s.set(q, g.get(n + q));
                    s.set(n + q, g.get(q));
                }
                s
            })
            .collect();
        let normalizer = nullspace(&swapped, 2 * n);
        let mut span = Span::new(&rows);
        let mut pool: Vec<BitRow> = Vec::new();
        for v in normalizer {
            if span.push(&v) {
                pool.push(v);
            }
        }
        let mut pairs = Vec::new();
        while let Some(a) = pool.pop() {
            let Some(bi) = pool.iter().position(|b| symplectic_form(&a, b, n)) else {
                continue;
            };
            let b = pool.swap_remove(bi);
            for c in pool.iter_mut() {
                if symplectic_form(c, &b, n) {
                    c.xor_assign(&a);
                }
                if symplectic_form(c, &a, n) {
                    c.xor_assign(&b);
                }
            }
            pairs.push((a, b));
        }
        pairs.reverse();
        let stab = Span::new(&rows);
        pairs
            .into_iter()
            .map(|(a, b)| LogicalPair {
                x: Pauli::from_symplectic(&self.lighten(&a, &stab)),
                z: Pauli::from_symplectic(&self.lighten(&b, &stab)),
            })
            .collect()
    }

    fn lighten(&self, v: &BitRow, stab: &Span) -> BitRow {
        let basis = stab.basis();
        let r = basis.len();
        let n = self.n;
        let weight = |w: &BitRow| (0..n).filter(|&q| w.get(q) || w.get(n + q)).count();
        if r > MAX_COSET_ENUMERATION_BITS {
            return v.clone();
        }
        let mut cur = v.clone();
        let mut best = (weight(&cur), cur.clone());
        // Gray-code walk over the coset
        for step in 1u64..(1u64 << r) {
            let bit = step.trailing_zeros() as usize;
            cur.xor_assign(&basis[bit]);
            let w = weight(&cur);
            if w < best.0 {
                best = (w, cur.clone());
            }
        }
        best.1
    }

    fn restricted_rank(&self, cols: &[usize]) -> usize {
        let n = self.n;
        let sel: Vec<usize> = cols.iter().copied().chain(cols.iter().map(|&q| n + q)).collect();
        let rows: Vec<BitRow> = self.rows().iter().map(|r| r.select(&sel)).collect();
        rank(&rows)
    }

    /// Number of independent nontrivial logical operators supported inside `region`.
    pub fn logical_count_on(&self, region: &[usize]) -> usize {
        let outside: Vec<usize> = (0..self.n).filter(|q| !region.contains(q)).collect();
        let r = self.generators.len();
        let on = 2 * region.len() - self.restricted_rank(region);
        let stab_inside = r - self.restricted_rank(&outside);
        on - stab_inside
    }

    pub fn region_supports_logical(&self, region: &[usize]) -> bool {
        self.logical_count_on(region) > 0
    }

    /// Smallest region that supports a nontrivial logical operator.
    pub fn distance(&self) -> Result<usize> {
        self.distance_with_limit(MAX_DISTANCE_QUBITS)
    }

    pub fn distance_with_limit(&self, max_qubits: usize) -> Result<usize> {
        if self.n > max_qubits {
            return Err(Error::Capacity(format!("distance by enumeration limited to {max_qubits} qubits, code has {}", self.n)));
        }
        if self.num_logical() == 0 {
            return invalid("a code without logical qubits has no distance");
        }
        for size in 1..=self.n {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                if self.region_supports_logical(&idx) {
                    return Ok(size);
                }
                let mut i = size;
                while i > 0 && idx[i - 1] == self.n - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        Ok(self.n)
    }

    /// Generators relabelled by a qubit permutation.
    pub fn relabel(&self, map: &[usize]) -> Result<StabilizerCode> {
        StabilizerCode::new(self.n, self.generators.iter().map(|g| g.relabel(map, self.n)).collect())
    }

    /// Whether a qubit permutation maps the stabilizer group onto itself.
    pub fn is_symmetry(&self, map: &[usize]) -> bool {
        let span = Span::new(&self.rows());
        self.generators.iter().all(|g| {
            let h = g.relabel(map, self.n);
            span.contains(&h.symplectic()) && {
                // phase must also match the group element with that pattern
                self.group_phase(&h) == Some(h.phase())
            }
        })
    }

    /// Phase of the stabilizer group element with the X/Z pattern of `p`.
    fn group_phase(&self, p: &Pauli) -> Option<u8> {
        let all: Vec<usize> = (0..2 * self.n).collect();
        let combo = self.combination(&p.symplectic(), &all)?;
        Some(self.product(&combo).phase())
    }

    fn product(&self, combo: &BitRow) -> Pauli {
        let mut prod = Pauli::identity(self.n);
        for i in combo.ones() {
            prod = prod.mul(&self.generators[i]);
        }
        prod
    }

    /// Generator subset whose product matches `target` on the symplectic columns `cols`.
    fn combination(&self, target: &BitRow, cols: &[usize]) -> Option<BitRow> {
        let r = self.generators.len();
        let mut aug: Vec<(BitRow, BitRow)> = self
            .rows()
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut e = BitRow::zeros(r);
                e.set(i, true);
                (row.select(cols), e)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut rank_row = 0;
        for c in 0..cols.len() {
            let Some(p) = (rank_row..aug.len()).find(|&i| aug[i].0.get(c)) else { continue };
            aug.swap(rank_row, p);
            let piv = aug[rank_row].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != rank_row && row.0.get(c) {
                    row.0.xor_assign(&piv.0);
                    row.1.xor_assign(&piv.1);
                }
            }
            pivots.push(c);
            rank_row += 1;
        }
        let mut x = target.select(cols);
        let mut combo = BitRow::zeros(r);
        for (i, &c) in pivots.iter().enumerate() {
            if x.get(c) {
                x.xor_assign(&aug[i].0);
                combo.xor_assign(&aug[i].1);
            }
        }
        x.is_zero().then_some(combo)
    }

    /// Whether `p`, phase included, is an element of the stabilizer group.
    pub fn stabilizer_contains(&self, p: &Pauli) -> bool {
        self.group_phase(p) == Some(p.phase())
    }

    /// `p` times a stabilizer element, chosen to act trivially on `avoid`; `None` if impossible.
    /// The result acts on the code space exactly as `p` does.
    pub fn clean_off(&self, p: &Pauli, avoid: &[usize]) -> Option<Pauli> {
        let n = self.n;
        let cols: Vec<usize> = avoid.iter().copied().chain(avoid.iter().map(|&q| n + q)).collect();
        let combo = self.combination(&p.symplectic(), &cols)?;
        Some(p.mul(&self.product(&combo)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_qubit() -> StabilizerCode {
        StabilizerCode::from_strings(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).unwrap()
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(StabilizerCode::from_strings(&["XI", "ZI"]).is_err());
        assert!(StabilizerCode::from_strings(&["ZZ", "ZZ"]).is_err());
        assert!(StabilizerCode::from_strings(&["iZZ"]).is_err());
    }

    #[test]
    fn five_qubit_logicals() {
        let code = five_qubit();
        assert_eq!(code.num_logical(), 1);
        let pairs = code.logical_operators();
        assert_eq!(pairs.len(), 1);
        let p = &pairs[0];
        assert!(code.commutes_with_all(&p.x) && code.commutes_with_all(&p.z));
        assert!(!p.x.commutes_with(&p.z));
        assert!(!code.in_stabilizer_group(&p.x));
        assert_eq!(p.x.weight(), 3);
        assert_eq!(code.distance().unwrap(), 3);
    }

    #[test]
    fn logical_count_matches_brute_force() {
        let code = five_qubit();
        let all = super::super::pauli::all_paulis(5);
        for mask in 0usize..32 {
            let region: Vec<usize> = (0..5).filter(|q| mask >> q & 1 == 1).collect();
            let brute = all.iter().any(|p| {
                p.support().iter().all(|q| region.contains(q))
                    && code.commutes_with_all(p)
                    && !code.in_stabilizer_group(p)
            });
            assert_eq!(code.region_supports_logical(&region), brute, "region {region:?}");
        }
    }

    #[test]
    fn cyclic_shift_is_a_symmetry() {
        let code = five_qubit();
        assert!(code.is_symmetry(&[1, 2, 3, 4, 0]));
        assert!(!code.is_symmetry(&[1, 0, 2, 3, 4]));
    }

    #[test]
    fn cleaning_moves_logicals_off_a_region() {
        let code = five_qubit();
        let logicals = code.logical_operators();
        for pair in &logicals {
            for p in [&pair.x, &pair.z] {
                let v = code.clean_off(p, &[0, 1]).unwrap();
                assert!(v.support().iter().all(|&q| q >= 2), "{v}");
                assert!(code.stabilizer_contains(&p.mul(&v)));
            }
        }
        // three qubits of the five-qubit code carry a logical
        let x = &logicals[0].x;
        let carriers = (0..5).filter(|&q| x.support().contains(&q)).collect::<Vec<_>>();
        let rest: Vec<usize> = (0..5).filter(|q| !carriers.contains(q)).collect();
        assert!(code.clean_off(x, &rest).is_some());
        assert!(code.stabilizer_contains(&Pauli::identity(5)));
        assert!(!code.stabilizer_contains(&code.generators()[0].clone().with_phase(2)));
    }
}
