//! Dense exact matrices over a `Field` context, with the elimination
//! primitives everything downstream leans on: rref, solving, null spaces,
//! subspace arithmetic, Hessenberg characteristic polynomials.

use crate::field::Field;

#[derive(Clone, PartialEq, Debug)]
pub struct Mat<K: Field> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<K::Elem>,
}

impl<K: Field> Mat<K> {
    pub fn zero(k: &K, rows: usize, cols: usize) -> Mat<K> {
        Mat {
            rows,
            cols,
            data: vec![k.zero(); rows * cols],
        }
    }

    pub fn identity(k: &K, n: usize) -> Mat<K> {
        let mut m = Mat::zero(k, n, n);
        for i in 0..n {
            m.set(i, i, k.one());
        }
        m
    }

    pub fn from_rows(k: &K, rows: Vec<Vec<K::Elem>>) -> Mat<K> {
        if rows.is_empty() {
            return Mat::zero(k, 0, 0);
        }
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols));
        Mat {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self, k: &K) -> bool {
        self.data.iter().all(|x| k.is_zero(x))
    }

    pub fn add(&self, k: &K, other: &Mat<K>) -> Mat<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| k.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, k: &K, other: &Mat<K>) -> Mat<K> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| k.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &K, c: &K::Elem) -> Mat<K> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| k.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, k: &K, other: &Mat<K>) -> Mat<K> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Mat::zero(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = k.mul(a, other.get(l, j));
                    let cur = out.get(i, j).clone();
                    out.set(i, j, k.add(&cur, &t));
                }
            }
        }
        out
    }

    pub fn apply(&self, k: &K, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = k.zero();
                for j in 0..self.cols {
                    acc = k.add(&acc, &k.mul(self.get(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self, k: &K) -> Mat<K> {
        let mut out = Mat::zero(k, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self, k: &K) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !k.is_zero(self.get(i, c))) else {
                continue;
            };
            for j in 0..self.cols {
                self.data.swap(r * self.cols + j, pr * self.cols + j);
            }
            let inv = k.inv(self.get(r, c)).unwrap();
            for j in c..self.cols {
                let v = k.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i != r && !k.is_zero(self.get(i, c)) {
                    let f = self.get(i, c).clone();
                    for j in c..self.cols {
                        let v = k.sub(self.get(i, j), &k.mul(&f, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, k: &K) -> usize {
        let mut m = self.clone();
        m.rref(k).len()
    }

    /// Any particular solution x of `self * x = b`, if consistent.
    pub fn solve(&self, k: &K, b: &[K::Elem]) -> Option<Vec<K::Elem>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Mat::zero(k, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref(k);
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![k.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    /// A basis of the right null space, as matrix rows.
    pub fn nullspace(&self, k: &K) -> Mat<K> {
        let mut m = self.clone();
        let pivots = m.rref(k);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::new();
        for &f in &free {
            let mut v = vec![k.zero(); self.cols];
            v[f] = k.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = k.neg(m.get(r, f));
            }
            rows.push(v);
        }
        Mat::from_rows_sized(k, rows, self.cols)
    }

    pub fn from_rows_sized(k: &K, rows: Vec<Vec<K::Elem>>, cols: usize) -> Mat<K> {
        if rows.is_empty() {
            Mat::zero(k, 0, cols)
        } else {
            let m = Mat::from_rows(k, rows);
            assert_eq!(m.cols, cols);
            m
        }
    }

    /// Inverse of a square matrix, if invertible.
    pub fn inverse(&self, k: &K) -> Option<Mat<K>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(k, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, k.one());
        }
        let pivots = aug.rref(k);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Mat::zero(k, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(out)
    }

    /// Characteristic polynomial of a square matrix, monic, coefficients
    /// ascending: det(lambda I - self). Hessenberg reduction with pivoting,
    /// so it is exact over any field.
    pub fn charpoly(&self, k: &K) -> Vec<K::Elem> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return vec![k.one()];
        }
        let mut h = self.clone();
        // Reduce to upper Hessenberg by similarity transformations.
        for m in 0..n.saturating_sub(2) {
            let pivot = ((m + 1)..n).find(|&i| !k.is_zero(h.get(i, m)));
            let Some(p) = pivot else { continue };
            if p != m + 1 {
                for j in 0..n {
                    h.data.swap(p * n + j, (m + 1) * n + j);
                }
                for i in 0..n {
                    h.data.swap(i * n + p, i * n + (m + 1));
                }
            }
            let inv = k.inv(h.get(m + 1, m)).unwrap();
            for i in (m + 2)..n {
                if k.is_zero(h.get(i, m)) {
                    continue;
                }
                let f = k.mul(h.get(i, m), &inv);
                for j in 0..n {
                    let v = k.sub(h.get(i, j), &k.mul(&f, h.get(m + 1, j)));
                    h.set(i, j, v);
                }
                for l in 0..n {
                    let v = k.add(h.get(l, m + 1), &k.mul(&f, h.get(l, i)));
                    h.set(l, m + 1, v);
                }
            }
        }
        // p_0 = 1; p_m = (x - h[m-1][m-1]) p_{m-1}
        //            - sum_{i<m} h[i-1][m-1] (prod_{j=i}^{m-1} h[j][j-1]) p_{i-1}.
        let mut polys: Vec<Vec<K::Elem>> = vec![vec![k.one()]];
        for m in 1..=n {
            let mut pm = poly_shift_mul(k, &polys[m - 1], &k.neg(h.get(m - 1, m - 1)));
            let mut prod = k.one();
            for i in (1..m).rev() {
                // After the loop step below, prod = h[i][i-1] * ... * h[m-1][m-2].
                prod = k.mul(&prod, h.get(i, i - 1));
                let coeff = k.mul(h.get(i - 1, m - 1), &prod);
                if !k.is_zero(&coeff) {
                    let term = poly_scale(k, &polys[i - 1], &coeff);
                    pm = poly_sub(k, &pm, &term);
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }
}

fn poly_scale<K: Field>(k: &K, p: &[K::Elem], c: &K::Elem) -> Vec<K::Elem> {
    p.iter().map(|a| k.mul(a, c)).collect()
}

fn poly_sub<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| k.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| k.zero());
            k.sub(&x, &y)
        })
        .collect()
}

/// (x + c) * p.
fn poly_shift_mul<K: Field>(k: &K, p: &[K::Elem], c: &K::Elem) -> Vec<K::Elem> {
    let mut out = vec![k.zero(); p.len() + 1];
    for (i, a) in p.iter().enumerate() {
        out[i + 1] = k.add(&out[i + 1], a);
        out[i] = k.add(&out[i], &k.mul(a, c));
    }
    out
}

/// A row space kept in reduced echelon form, supporting membership tests.
#[derive(Clone, Debug)]
pub struct Subspace<K: Field> {
    pub basis: Mat<K>,
    pivots: Vec<usize>,
}

impl<K: Field> Subspace<K> {
    pub fn new(k: &K, dim: usize) -> Subspace<K> {
        Subspace {
            basis: Mat::zero(k, 0, dim),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(k: &K, rows: Vec<Vec<K::Elem>>, dim: usize) -> Subspace<K> {
        let mut m = Mat::from_rows_sized(k, rows, dim);
        let pivots = m.rref(k);
        let rank = pivots.len();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        Subspace { basis: m, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` lies in
    /// the subspace.
    pub fn reduce(&self, k: &K, v: &[K::Elem]) -> Vec<K::Elem> {
        let mut v = v.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            if !k.is_zero(&v[c]) {
                let f = v[c].clone();
                for j in 0..v.len() {
                    let t = k.mul(&f, self.basis.get(r, j));
                    v[j] = k.sub(&v[j], &t);
                }
            }
        }
        v
    }

    pub fn contains(&self, k: &K, v: &[K::Elem]) -> bool {
        self.reduce(k, v).iter().all(|x| k.is_zero(x))
    }

    pub fn contains_all(&self, k: &K, other: &Subspace<K>) -> bool {
        (0..other.basis.rows).all(|i| self.contains(k, other.basis.row(i)))
    }

    /// Coordinates of `v` in the echelon basis, if it lies in the subspace.
    pub fn coordinates(&self, k: &K, v: &[K::Elem]) -> Option<Vec<K::Elem>> {
        if !self.contains(k, v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c].clone()).collect())
    }

    /// Inserts a vector; returns true if the dimension grew.
    pub fn insert(&mut self, k: &K, v: &[K::Elem]) -> bool {
        let red = self.reduce(k, v);
        let Some(lead) = red.iter().position(|x| !k.is_zero(x)) else {
            return false;
        };
        let inv = k.inv(&red[lead]).unwrap();
        let mut row: Vec<K::Elem> = red.iter().map(|x| k.mul(x, &inv)).collect();
        // Re-reduce existing rows against the new one to stay in rref.
        let pos = self.pivots.iter().position(|&c| c > lead).unwrap_or(self.pivots.len());
        for r in 0..self.basis.rows {
            if !k.is_zero(self.basis.get(r, lead)) {
                let f = self.basis.get(r, lead).clone();
                for j in 0..row.len() {
                    let t = k.mul(&f, &row[j]);
                    let v = k.sub(self.basis.get(r, j), &t);
                    self.basis.set(r, j, v);
                }
            }
        }
        let cols = self.basis.cols;
        let mut data = std::mem::take(&mut self.basis.data);
        let at = pos * cols;
        for (off, x) in row.drain(..).enumerate() {
            data.insert(at + off, x);
        }
        self.basis.data = data;
        self.basis.rows += 1;
        self.pivots.insert(pos, lead);
        true
    }

    pub fn row_vecs(&self) -> Vec<Vec<K::Elem>> {
        (0..self.basis.rows).map(|i| self.basis.row(i).to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    #[test]
    fn solve_and_nullspace_f3() {
        let f3 = PrimeField::new(3).unwrap();
        let a = Mat::from_rows(
            &f3,
            vec![vec![1, 2, 0], vec![0, 1, 1]],
        );
        let x = a.solve(&f3, &[2, 1]).unwrap();
        assert_eq!(a.apply(&f3, &x), vec![2, 1]);
        let ns = a.nullspace(&f3);
        assert_eq!(ns.rows, 1);
        assert!(a.mul(&f3, &ns.transpose(&f3)).is_zero(&f3));
    }

    #[test]
    fn inverse_rationals() {
        let q = Rationals;
        let a = Mat::from_rows(
            &q,
            vec![
                vec![q.from_i64(2), q.from_i64(1)],
                vec![q.from_i64(1), q.from_i64(1)],
            ],
        );
        let inv = a.inverse(&q).unwrap();
        assert_eq!(a.mul(&q, &inv), Mat::identity(&q, 2));
    }

    #[test]
    fn charpoly_known_cases() {
        let f2 = PrimeField::new(2).unwrap();
        // Nilpotent Jordan block: x^2.
        let n = Mat::from_rows(&f2, vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(n.charpoly(&f2), vec![0, 0, 1]);
        // Companion matrix of x^2 + x + 1 over F2.
        let c = Mat::from_rows(&f2, vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(c.charpoly(&f2), vec![1, 1, 1]);
        let q = Rationals;
        let m = Mat::from_rows(
            &q,
            vec![
                vec![q.from_i64(1), q.from_i64(2)],
                vec![q.from_i64(3), q.from_i64(4)],
            ],
        );
        // x^2 - 5x - 2
        assert_eq!(
            m.charpoly(&q),
            vec![q.from_i64(-2), q.from_i64(-5), q.from_i64(1)]
        );
    }

    #[test]
    fn subspace_membership() {
        let f2 = PrimeField::new(2).unwrap();
        let mut s = Subspace::new(&f2, 3);
        assert!(s.insert(&f2, &[1, 1, 0]));
        assert!(s.insert(&f2, &[0, 1, 1]));
        assert!(!s.insert(&f2, &[1, 0, 1]));
        assert!(s.contains(&f2, &[1, 0, 1]));
        assert!(!s.contains(&f2, &[1, 0, 0]));
        assert_eq!(s.coordinates(&f2, &[1, 0, 1]).unwrap().len(), 2);
    }

    proptest! {
        #[test]
        fn prop_solve_roundtrip_f5(entries in proptest::collection::vec(0u64..5, 12), rhs in proptest::collection::vec(0u64..5, 3)) {
            let f5 = PrimeField::new(5).unwrap();
            let a = Mat::<PrimeField> { rows: 3, cols: 4, data: entries };
            let b = a.apply(&f5, &[rhs[0], rhs[1], rhs[2], 0].to_vec()[..4].to_vec());
            // A consistent system must solve and reproduce b.
            let x = a.solve(&f5, &b).unwrap();
            prop_assert_eq!(a.apply(&f5, &x), b);
        }

        #[test]
        fn prop_charpoly_by_cayley_hamilton_f3(entries in proptest::collection::vec(0u64..3, 9)) {
            let f3 = PrimeField::new(3).unwrap();
            let a = Mat::<PrimeField> { rows: 3, cols: 3, data: entries };
            let cp = a.charpoly(&f3);
            // Cayley-Hamilton: the matrix satisfies its characteristic polynomial.
            let mut acc = Mat::zero(&f3, 3, 3);
            let mut pow = Mat::identity(&f3, 3);
            for c in &cp {
                acc = acc.add(&f3, &pow.scale(&f3, c));
                pow = pow.mul(&f3, &a);
            }
            prop_assert!(acc.is_zero(&f3));
        }
    }
}
