//! Dense linear algebra over F2 with bit-packed rows.
//!
//! Everything here is exact and deterministic: pivots are always chosen at
//! the smallest available column index, so reduced forms, kernel bases and
//! quotient representatives are reproducible across runs.

/// Bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        if bit {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn toggle(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        for (w, word) in self.words.iter().enumerate() {
            if *word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn from_mask(len: usize, mask: u64) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if mask >> i & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// Dense matrix over F2, stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    /// Matrix whose j-th column is `cols_vecs[j]`.
    pub fn from_columns(cols_vecs: &[BitVec], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols_vecs.len());
        for (j, v) in cols_vecs.iter().enumerate() {
            debug_assert_eq!(v.len(), rows);
            for i in v.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.data[i].set(j, bit);
    }

    pub fn toggle(&mut self, i: usize, j: usize) {
        self.data[i].toggle(j);
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.data[i].ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in self.data[i].ones() {
                out.data[i].xor_assign(&other.data[k]);
            }
        }
        out
    }

    /// Matrix-vector product (vector of length `cols`).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len());
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.data[i].words.iter().zip(&v.words) {
                acc ^= a & b;
            }
            if acc.count_ones() % 2 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    /// Row-reduce in place; returns the pivot columns in increasing order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.data.swap(r, p);
            let pivot_row = self.data[r].clone();
            for (i, row) in self.data.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column, in
    /// increasing order of the free column index.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_set.contains(&f) {
                continue;
            }
            let mut x = BitVec::zeros(self.cols);
            x.set(f, true);
            for (row_idx, &p) in pivots.iter().enumerate() {
                if m.get(row_idx, f) {
                    x.set(p, true);
                }
            }
            basis.push(x);
        }
        basis
    }

    /// One solution of `self * x = b` with all free variables set to zero.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows);
        let mut m = BitMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            let mut row = BitVec::zeros(self.cols + 1);
            for j in self.data[i].ones() {
                row.set(j, true);
            }
            if b.get(i) {
                row.set(self.cols, true);
            }
            m.data[i] = row;
        }
        let pivots = m.rref_in_place();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (row_idx, &p) in pivots.iter().enumerate() {
            if m.get(row_idx, self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in &self.data {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}

/// Quotient of a span by a subspace, with explicit coset representatives.
///
/// Built from a spanning set of the subspace and a spanning set of the
/// ambient space (which must contain the subspace). Representatives are the
/// ambient vectors that survive reduction, taken in input order, so the
/// basis is deterministic.
pub struct Quotient {
    n: usize,
    reps: Vec<BitVec>,
    rows: Vec<(BitVec, BitVec)>, // (reduced vector, rep-coordinate tag)
    pivot_of: Vec<Option<usize>>,
    tag_cap: usize,
}

impl Quotient {
    pub fn new(sub: &[BitVec], ambient: &[BitVec], n: usize) -> Quotient {
        let tag_cap = ambient.len();
        let mut q = Quotient {
            n,
            reps: Vec::new(),
            rows: Vec::new(),
            pivot_of: vec![None; n],
            tag_cap,
        };
        for v in sub {
            let mut w = v.clone();
            let mut tag = BitVec::zeros(tag_cap);
            q.reduce(&mut w, &mut tag);
            q.insert(w, BitVec::zeros(tag_cap));
        }
        for v in ambient {
            let mut w = v.clone();
            let mut tag = BitVec::zeros(tag_cap);
            q.reduce(&mut w, &mut tag);
            if !w.is_zero() {
                let idx = q.reps.len();
                q.reps.push(v.clone());
                tag.toggle(idx);
                q.insert(w, tag);
            }
        }
        q
    }

    fn reduce(&self, v: &mut BitVec, tag: &mut BitVec) {
        while let Some(p) = v.first_one() {
            match self.pivot_of[p] {
                Some(r) => {
                    let (row, rtag) = &self.rows[r];
                    v.xor_assign(row);
                    tag.xor_assign(rtag);
                }
                None => break,
            }
        }
    }

    fn insert(&mut self, v: BitVec, tag: BitVec) {
        if let Some(p) = v.first_one() {
            self.pivot_of[p] = Some(self.rows.len());
            self.rows.push((v, tag));
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[BitVec] {
        &self.reps
    }

    pub fn ambient_len(&self) -> usize {
        self.n
    }

    /// Coordinates of `v` with respect to the coset representatives, or
    /// `None` if `v` does not lie in the ambient span.
    pub fn coords(&self, v: &BitVec) -> Option<BitVec> {
        let mut w = v.clone();
        let mut tag = BitVec::zeros(self.tag_cap);
        self.reduce(&mut w, &mut tag);
        if !w.is_zero() {
            return None;
        }
        let mut out = BitVec::zeros(self.reps.len());
        for i in tag.ones() {
            if i < self.reps.len() {
                out.set(i, true);
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let mut m = BitMatrix::zeros(3, 3);
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 1, true);
        m.set(1, 2, true);
        m.set(2, 0, true);
        m.set(2, 2, true);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_solves() {
        // x1 + x2 = 0 over F2^3 has kernel {(1,1,0),(0,0,1)}.
        let mut m = BitMatrix::zeros(1, 3);
        m.set(0, 0, true);
        m.set(0, 1, true);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let mut m = BitMatrix::zeros(2, 2);
        m.set(0, 0, true);
        m.set(1, 0, true);
        let mut b = BitVec::zeros(2);
        b.set(0, true);
        assert!(m.solve(&b).is_none());
        b.set(1, true);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn quotient_reps_and_coords() {
        // Ambient spanned by e1,e2,e3; subspace spanned by e1+e2.
        let sub = vec![{
            let mut v = BitVec::zeros(3);
            v.set(0, true);
            v.set(1, true);
            v
        }];
        let amb: Vec<BitVec> = (0..3).map(|i| BitVec::unit(3, i)).collect();
        let q = Quotient::new(&sub, &amb, 3);
        assert_eq!(q.dim(), 2);
        // e1 and e2 are the same coset.
        let c1 = q.coords(&BitVec::unit(3, 0)).unwrap();
        let c2 = q.coords(&BitVec::unit(3, 1)).unwrap();
        assert_eq!(c1, c2);
        let c3 = q.coords(&BitVec::unit(3, 2)).unwrap();
        assert_ne!(c1, c3);
    }

    #[test]
    fn mul_matches_mul_vec() {
        let mut a = BitMatrix::zeros(2, 3);
        a.set(0, 0, true);
        a.set(0, 2, true);
        a.set(1, 1, true);
        let mut b = BitMatrix::zeros(3, 2);
        b.set(0, 0, true);
        b.set(2, 0, true);
        b.set(1, 1, true);
        let ab = a.mul(&b);
        for j in 0..2 {
            assert_eq!(ab.column(j), a.mul_vec(&b.column(j)));
        }
    }
}
