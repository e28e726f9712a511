//! Dense linear algebra over one level of a [`FieldTower`].
//!
//! Elimination pivots on the first nonzero entry of each column. Empty
//! matrices follow the usual conventions: `det` of a 0x0 matrix is 1 and the
//! rank of anything empty is 0.

use crate::error::{Error, Result};
use crate::fields::{Elem, FieldTower, Gf, Level};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub level: Level,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Mat {
    pub fn new(level: Level, rows: usize, cols: usize, data: Vec<u32>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Mat {
            level,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(level: Level, rows: usize, cols: usize) -> Mat {
        Mat {
            level,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(level: Level, n: usize) -> Mat {
        let mut m = Mat::zeros(level, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row vectors; all rows must share a length. `cols` is only
    /// consulted when `rows` is empty.
    pub fn from_rows(level: Level, rows: &[Vec<u32>], cols: usize) -> Result<Mat> {
        let cols = rows.first().map_or(cols, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Mat {
            level,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.level, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Principal submatrix on `range x range`.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let mut out = Mat::zeros(self.level, rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, tower: &FieldTower, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        let f = tower.field(self.level);
        let mut out = Mat::zeros(self.level, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal assembly; all blocks share this level.
    pub fn block_diag(level: Level, blocks: &[&Mat]) -> Mat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(level, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn det(&self, tower: &FieldTower) -> Result<u32> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(det_in(tower.field(self.level), self))
    }

    pub fn det_elem(&self, tower: &FieldTower) -> Result<Elem> {
        self.det(tower).map(|v| Elem::new(self.level, v))
    }

    pub fn rank(&self, tower: &FieldTower) -> usize {
        rref(tower.field(self.level), self).1.len()
    }

    /// `(rank, right kernel)`: the kernel rows `k` satisfy `self · kᵀ = 0`.
    pub fn rank_kernel(&self, tower: &FieldTower) -> (usize, Subspace) {
        let f = tower.field(self.level);
        let (red, pivots) = rref(f, self);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let kernel_rows: Vec<Vec<u32>> = free
            .iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(red.get(r, fc));
                }
                v
            })
            .collect();
        let kernel = Mat::from_rows(self.level, &kernel_rows, self.cols).unwrap();
        (pivots.len(), Subspace::span(tower, &kernel))
    }

    pub fn inverse(&self, tower: &FieldTower) -> Result<Option<Mat>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let f = tower.field(self.level);
        let mut aug = Mat::zeros(self.level, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (red, pivots) = rref_cols(f, &aug, n);
        if pivots.len() < n {
            return Ok(None);
        }
        Ok(Some(red.submatrix(0..n, n..2 * n)))
    }

    /// Solves `self · x = b` for square invertible `self`.
    pub fn solve(&self, tower: &FieldTower, b: &[u32]) -> Result<Option<Vec<u32>>> {
        let inv = match self.inverse(tower)? {
            Some(inv) => inv,
            None => return Ok(None),
        };
        let col = Mat::new(self.level, b.len(), 1, b.to_vec())?;
        Ok(Some(inv.mul(tower, &col)?.data))
    }

    pub fn format_rows(&self, tower: &FieldTower) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|&v| tower.format(Elem::new(self.level, v)))
                    .collect()
            })
            .collect()
    }
}

fn det_in(f: &Gf, m: &Mat) -> u32 {
    let n = m.rows;
    let mut a = m.data.clone();
    let mut det = 1u32;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r * n + c] != 0) else {
            return 0;
        };
        if p != c {
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let pivot = a[c * n + c];
        det = f.mul(det, pivot);
        let pinv = f.inv(pivot).unwrap();
        for r in c + 1..n {
            let factor = f.mul(a[r * n + c], pinv);
            if factor == 0 {
                continue;
            }
            for j in c..n {
                a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[c * n + j]));
            }
        }
    }
    det
}

fn rref(f: &Gf, m: &Mat) -> (Mat, Vec<usize>) {
    rref_cols(f, m, m.cols)
}

/// Reduced row echelon form, pivoting only within the first `limit` columns.
fn rref_cols(f: &Gf, m: &Mat, limit: usize) -> (Mat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..limit {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| a.get(r, c) != 0) else {
            continue;
        };
        if p != row {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, row * a.cols + j);
            }
        }
        let pinv = f.inv(a.get(row, c)).unwrap();
        for j in 0..a.cols {
            let v = f.mul(a.get(row, j), pinv);
            a.set(row, j, v);
        }
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let factor = a.get(r, c);
            if factor == 0 {
                continue;
            }
            for j in 0..a.cols {
                let v = f.sub(a.get(r, j), f.mul(factor, a.get(row, j)));
                a.set(r, j, v);
            }
        }
        pivots.push(c);
        row += 1;
    }
    (a, pivots)
}

/// `p_{2k} - wᵀM⁻¹w` for `H = [[M, w], [w'ᵀ, c]]`, i.e. `c - w'ᵀ M⁻¹ w` with
/// `M` the leading `(n-1)x(n-1)` block. A 1x1 `H` returns its entry.
pub fn schur_residual(tower: &FieldTower, h: &Mat) -> Result<u32> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows,
            cols: h.cols,
        });
    }
    let n = h.rows;
    if n == 0 {
        return Err(Error::SingularLeadingBlock);
    }
    let f = tower.field(h.level);
    let m = h.submatrix(0..n - 1, 0..n - 1);
    let w: Vec<u32> = (0..n - 1).map(|i| h.get(i, n - 1)).collect();
    let z = m.solve(tower, &w)?.ok_or(Error::SingularLeadingBlock)?;
    let quad = f.sum((0..n - 1).map(|i| f.mul(h.get(n - 1, i), z[i])));
    Ok(f.sub(h.get(n - 1, n - 1), quad))
}

/// A subspace of `level^ambient_dim`, stored as a reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: Mat,
}

impl Subspace {
    /// Row space of `m`.
    pub fn span(tower: &FieldTower, m: &Mat) -> Subspace {
        let (red, pivots) = rref(tower.field(m.level), m);
        let basis = red.submatrix(0..pivots.len(), 0..m.cols);
        Subspace {
            ambient_dim: m.cols,
            basis,
        }
    }

    pub fn zero(level: Level, ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Mat::zeros(level, 0, ambient_dim),
        }
    }

    pub fn full(level: Level, ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Mat::identity(level, ambient_dim),
        }
    }

    pub fn level(&self) -> Level {
        self.basis.level
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn contains(&self, tower: &FieldTower, v: &[u32]) -> bool {
        let mut rows = self.basis.row_vecs();
        rows.push(v.to_vec());
        let stacked = Mat::from_rows(self.level(), &rows, self.ambient_dim).unwrap();
        stacked.rank(tower) == self.dim()
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        if self.level() != other.level() {
            return Err(Error::LevelMismatch(self.level(), other.level()));
        }
        Ok(())
    }

    /// `a + b`
    pub fn sum(&self, tower: &FieldTower, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        Ok(Subspace::span(
            tower,
            &Mat::from_rows(self.level(), &rows, self.ambient_dim)?,
        ))
    }

    /// `a ∩ b`, from the left kernel of the stacked bases: `xA + yB = 0`
    /// gives `xA ∈ a ∩ b`.
    pub fn intersect(&self, tower: &FieldTower, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let f = tower.field(self.level());
        let (da, db) = (self.dim(), other.dim());
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        let stacked = Mat::from_rows(self.level(), &rows, self.ambient_dim)?;
        let (_, left_kernel) = stacked.transpose().rank_kernel(tower);
        let vecs: Vec<Vec<u32>> = left_kernel
            .basis
            .row_vecs()
            .iter()
            .map(|z| {
                (0..self.ambient_dim)
                    .map(|j| f.sum((0..da).map(|i| f.mul(z[i], self.basis.get(i, j)))))
                    .collect()
            })
            .collect();
        debug_assert!(left_kernel.dim() <= da.min(db));
        Ok(Subspace::span(
            tower,
            &Mat::from_rows(self.level(), &vecs, self.ambient_dim)?,
        ))
    }

    /// Orthogonal complement under the bilinear form with Gram matrix
    /// `form` on the ambient standard basis: `{y : x · form · yᵀ = 0 ∀x}`.
    pub fn orthogonal(&self, tower: &FieldTower, form: &Mat) -> Result<Subspace> {
        if form.rows != self.ambient_dim || form.cols != self.ambient_dim {
            return Err(Error::AmbientMismatch(self.ambient_dim, form.rows));
        }
        let pairings = self.basis.mul(tower, form)?;
        Ok(pairings.rank_kernel(tower).1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> FieldTower {
        FieldTower::new(5, 1, 2).unwrap()
    }

    fn random_mat(rng: &mut ChaCha8Rng, level: Level, order: u32, r: usize, c: usize) -> Mat {
        Mat::new(
            level,
            r,
            c,
            (0..r * c).map(|_| rng.random_range(0..order)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn det_examples() {
        let t = f5();
        let g = Mat::new(Level::Mid, 2, 2, vec![4, 1, 1, 3]).unwrap();
        assert_eq!(g.det(&t).unwrap(), 1);
        assert_eq!(Mat::identity(Level::Mid, 4).det(&t).unwrap(), 1);
        let rep = Mat::new(Level::Mid, 3, 3, vec![1, 2, 3, 4, 0, 1, 1, 2, 3]).unwrap();
        assert_eq!(rep.det(&t).unwrap(), 0);
        assert_eq!(Mat::zeros(Level::Mid, 0, 0).det(&t).unwrap(), 1);
        assert_eq!(
            Mat::zeros(Level::Mid, 2, 3).det(&t),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn det_matches_leibniz_expansion() {
        // independent oracle: permutation expansion
        fn leibniz(f: &Gf, m: &Mat) -> u32 {
            let n = m.rows();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut acc = 0;
            fn rec(f: &Gf, m: &Mat, k: usize, perm: &mut Vec<usize>, acc: &mut u32) {
                let n = perm.len();
                if k == n {
                    let inversions = (0..n)
                        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                        .filter(|&(i, j)| perm[i] > perm[j])
                        .count();
                    let mut term = (0..n).fold(1, |t, i| f.mul(t, m.get(i, perm[i])));
                    if inversions % 2 == 1 {
                        term = f.neg(term);
                    }
                    *acc = f.add(*acc, term);
                    return;
                }
                for i in k..n {
                    perm.swap(k, i);
                    rec(f, m, k + 1, perm, acc);
                    perm.swap(k, i);
                }
            }
            rec(f, m, 0, &mut perm, &mut acc);
            acc
        }
        let t = FieldTower::new(7, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 0..6 {
            for _ in 0..10 {
                let m = random_mat(&mut rng, Level::Top, 49, n, n);
                assert_eq!(m.det(&t).unwrap(), leibniz(t.top(), &m));
            }
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let t = FieldTower::new(7, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=6 {
            for _ in 0..20 {
                let a = random_mat(&mut rng, Level::Top, 49, n, n);
                let b = random_mat(&mut rng, Level::Top, 49, n, n);
                let ab = a.mul(&t, &b).unwrap();
                let lhs = ab.det(&t).unwrap();
                let rhs = t.top().mul(a.det(&t).unwrap(), b.det(&t).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rank_kernel_examples() {
        let t = f5();
        let (r, k) = Mat::zeros(Level::Mid, 2, 2).rank_kernel(&t);
        assert_eq!((r, k.dim()), (0, 2));
        let g = Mat::new(Level::Mid, 2, 2, vec![4, 1, 1, 3]).unwrap();
        let (r, k) = g.rank_kernel(&t);
        assert_eq!((r, k.dim()), (2, 0));
    }

    #[test]
    fn rank_nullity_random_f13() {
        let t = FieldTower::new(13, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_mat(&mut rng, Level::Mid, 13, 3, 5);
            let (rank, ker) = m.rank_kernel(&t);
            assert_eq!(rank + ker.dim(), 5);
            for k in ker.basis.row_vecs() {
                let col = Mat::new(Level::Mid, 5, 1, k).unwrap();
                assert!(m.mul(&t, &col).unwrap().is_zero());
            }
            // row space enumeration: |rowspace| = 13^rank
            let mut seen = std::collections::HashSet::new();
            for a in 0..13 {
                for b in 0..13 {
                    for c in 0..13 {
                        let v: Vec<u32> = (0..5)
                            .map(|j| {
                                let f = t.mid();
                                f.sum([
                                    f.mul(a, m.get(0, j)),
                                    f.mul(b, m.get(1, j)),
                                    f.mul(c, m.get(2, j)),
                                ])
                            })
                            .collect();
                        seen.insert(v);
                    }
                }
            }
            assert_eq!(seen.len(), 13usize.pow(rank as u32));
        }
    }

    #[test]
    fn intersection_examples() {
        let t = f5();
        let a = Subspace::span(
            &t,
            &Mat::new(Level::Mid, 2, 4, vec![1, 0, 0, 0, 0, 1, 0, 0]).unwrap(),
        );
        let b = Subspace::span(
            &t,
            &Mat::new(Level::Mid, 2, 4, vec![0, 0, 1, 0, 0, 0, 0, 1]).unwrap(),
        );
        assert_eq!(a.intersect(&t, &a).unwrap(), a);
        assert_eq!(a.intersect(&t, &b).unwrap().dim(), 0);
        let c = Subspace::zero(Level::Mid, 3);
        assert_eq!(a.intersect(&t, &c), Err(Error::AmbientMismatch(4, 3)));
    }

    #[test]
    fn grassmann_formula_random() {
        let t = FieldTower::new(3, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let n = rng.random_range(1..7);
            let ra = rng.random_range(0..=n);
            let rb = rng.random_range(0..=n);
            let a = Subspace::span(&t, &random_mat(&mut rng, Level::Mid, 3, ra, n));
            let b = Subspace::span(&t, &random_mat(&mut rng, Level::Mid, 3, rb, n));
            let i = a.intersect(&t, &b).unwrap();
            let s = a.sum(&t, &b).unwrap();
            assert_eq!(a.dim() + b.dim(), i.dim() + s.dim());
            for v in i.basis.row_vecs() {
                assert!(a.contains(&t, &v) && b.contains(&t, &v));
            }
        }
    }

    #[test]
    fn schur_examples() {
        let t = FieldTower::new(13, 1, 2).unwrap();
        let h = Mat::new(Level::Mid, 2, 2, vec![1, 0, 0, 7]).unwrap();
        assert_eq!(schur_residual(&t, &h).unwrap(), 7);
        let h1 = Mat::new(Level::Mid, 1, 1, vec![9]).unwrap();
        assert_eq!(schur_residual(&t, &h1).unwrap(), 9);
        let sing = Mat::new(Level::Mid, 2, 2, vec![0, 1, 1, 1]).unwrap();
        assert_eq!(schur_residual(&t, &sing), Err(Error::SingularLeadingBlock));
    }

    #[test]
    fn schur_times_leading_det_is_det() {
        let t = FieldTower::new(13, 1, 2).unwrap();
        let f = t.mid();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 100 {
            let n = rng.random_range(1..6);
            let h = random_mat(&mut rng, Level::Mid, 13, n, n);
            let m = h.submatrix(0..n - 1, 0..n - 1);
            let dm = m.det(&t).unwrap();
            if dm == 0 {
                assert_eq!(schur_residual(&t, &h), Err(Error::SingularLeadingBlock));
                continue;
            }
            assert_eq!(
                f.mul(schur_residual(&t, &h).unwrap(), dm),
                h.det(&t).unwrap()
            );
            checked += 1;
        }
    }

    #[test]
    fn inverse_round_trip() {
        let t = FieldTower::new(7, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let n = rng.random_range(1..6);
            let m = random_mat(&mut rng, Level::Top, 49, n, n);
            match m.inverse(&t).unwrap() {
                Some(inv) => assert_eq!(m.mul(&t, &inv).unwrap(), Mat::identity(Level::Top, n)),
                None => assert_eq!(m.det(&t).unwrap(), 0),
            }
        }
    }
}
