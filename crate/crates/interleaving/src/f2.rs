//! Dense linear algebra over the two-element field.

use std::fmt;

/// A bit vector of fixed length, packed in 64-bit words.
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

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, w) in self.words.iter().enumerate() {
            if *w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |i| self.get(*i))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A matrix over F2, stored as rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
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

    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, v % 2 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.data[i].set(j, bit);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in self.data[i].ones() {
                out.data[i].xor_with(&rhs.data[k]);
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            a.xor_with(b);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        row_reduce(&mut rows, self.cols).len()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{r:?}")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form in place; returns the pivot column of each kept row.
/// Zero rows are dropped.
pub fn row_reduce(rows: &mut Vec<BitVec>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_with(&pivot);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows over `cols` unknowns.
pub fn nullspace(rows: &[BitVec], cols: usize) -> Vec<BitVec> {
    let mut reduced = rows.to_vec();
    let pivots = row_reduce(&mut reduced, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !is_pivot[*c]) {
        let mut v = BitVec::zeros(cols);
        v.set(free, true);
        for (row, &p) in reduced.iter().zip(&pivots) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}

/// One solution of `A x = b`, or `None` if inconsistent.
/// Each equation is a row of `A` paired with its right-hand side bit.
pub fn solve(equations: &[(BitVec, bool)], cols: usize) -> Option<BitVec> {
    // Augment with the right-hand side as column `cols`.
    let mut rows: Vec<BitVec> = equations
        .iter()
        .map(|(r, b)| {
            let mut a = BitVec::zeros(cols + 1);
            for i in r.ones() {
                a.set(i, true);
            }
            a.set(cols, *b);
            a
        })
        .collect();
    let pivots = row_reduce(&mut rows, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = BitVec::zeros(cols);
    for (row, &p) in rows.iter().zip(&pivots) {
        if row.get(cols) {
            x.set(p, true);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: &[u8]) -> BitVec {
        let mut v = BitVec::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            v.set(i, *b == 1);
        }
        v
    }

    #[test]
    fn product_and_identity() {
        let a = Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]], 3);
        let i3 = Matrix::identity(3);
        assert_eq!(a.mul(&i3), a);
        let b = Matrix::from_rows(&[vec![1, 0], vec![1, 1], vec![0, 1]], 2);
        // [1 1 0; 0 1 1] * [1 0; 1 1; 0 1] = [0 1; 1 0] over F2
        assert_eq!(a.mul(&b), Matrix::from_rows(&[vec![0, 1], vec![1, 0]], 2));
    }

    #[test]
    fn rank_over_f2() {
        let m = Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 3);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::identity(5).rank(), 5);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let rows = vec![bv(&[1, 1, 0, 0]), bv(&[0, 1, 1, 0])];
        let ns = nullspace(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot = r.ones().filter(|i| v.get(*i)).count() % 2;
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let eqs = vec![(bv(&[1, 1, 0]), true), (bv(&[0, 1, 1]), false)];
        let x = solve(&eqs, 3).unwrap();
        for (r, b) in &eqs {
            assert_eq!(r.ones().filter(|i| x.get(*i)).count() % 2 == 1, *b);
        }
        let bad = vec![(bv(&[1, 1]), true), (bv(&[1, 1]), false)];
        assert!(solve(&bad, 2).is_none());
    }

    #[test]
    fn wide_vectors_cross_word_boundary() {
        let mut v = BitVec::zeros(130);
        v.set(129, true);
        v.set(64, true);
        assert_eq!(v.first_one(), Some(64));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![64, 129]);
    }
}
