//! Dense GF(2) linear algebra on packed rows.

/// Packed bit row of fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut r = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            r.set(i, b);
        }
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        let m = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &BitRow) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Keeps only the listed columns, in order.
    pub fn select(&self, cols: &[usize]) -> BitRow {
        let mut r = BitRow::zeros(cols.len());
        for (j, &c) in cols.iter().enumerate() {
            r.set(j, self.get(c));
        }
        r
    }
}

/// Row echelon form; returns the pivot column of each nonzero row, rows reordered in place.
pub fn row_reduce(rows: &mut Vec<BitRow>) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[BitRow]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Basis of { x : row · x = 0 for every row }.
pub fn nullspace(rows: &[BitRow], cols: usize) -> Vec<BitRow> {
    let mut m = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = BitRow::zeros(cols);
            x.set(f, true);
            for (row, &p) in m.iter().zip(&pivots) {
                if row.get(f) {
                    x.set(p, true);
                }
            }
            x
        })
        .collect()
}

/// Reduced echelon basis that answers span-membership queries.
#[derive(Clone, Debug)]
pub struct Span {
    rows: Vec<BitRow>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(rows: &[BitRow]) -> Self {
        let mut m = rows.to_vec();
        let pivots = row_reduce(&mut m);
        Span { rows: m, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &BitRow) -> BitRow {
        let mut x = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if x.get(p) {
                x.xor_assign(row);
            }
        }
        x
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn push(&mut self, v: &BitRow) -> bool {
        if self.contains(v) {
            return false;
        }
        let mut rows = self.rows.clone();
        rows.push(v.clone());
        *self = Span::new(&rows);
        true
    }

    pub fn basis(&self) -> &[BitRow] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(bits: &str) -> BitRow {
        BitRow::from_bools(&bits.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_nullspace() {
        let m = vec![row("1100"), row("0110"), row("1010")];
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &m {
                assert!(!r.dot(v));
            }
        }
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut a = BitRow::zeros(130);
        a.set(0, true);
        a.set(129, true);
        let mut b = BitRow::zeros(130);
        b.set(129, true);
        assert!(a.dot(&b));
        assert_eq!(a.count_ones(), 2);
        let span = Span::new(&[a.clone(), b.clone()]);
        let mut c = a.clone();
        c.xor_assign(&b);
        assert!(span.contains(&c));
    }

    proptest! {
        #[test]
        fn rank_nullity(bits in proptest::collection::vec(any::<bool>(), 40)) {
            let rows: Vec<BitRow> = bits.chunks(8).map(BitRow::from_bools).collect();
            let r = rank(&rows);
            let ns = nullspace(&rows, 8);
            prop_assert_eq!(r + ns.len(), 8);
            prop_assert_eq!(rank(&ns), ns.len());
            let span = Span::new(&rows);
            for x in &rows {
                prop_assert!(span.contains(x));
            }
        }
    }
}
