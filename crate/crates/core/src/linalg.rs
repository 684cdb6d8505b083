//! Deterministic exact linear algebra over the ground field.
//!
//! Dense matrices with exact scalars; reduced row echelon form with a fixed
//! pivot rule (first nonzero column, topmost row, leading entry normalized
//! to 1) so that every derived basis is canonical and reproducible.

use crate::error::Error;
use crate::quiver::{Path, PathVector};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of a row reduction: the RREF matrix, its pivot columns, and rank.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Result of solving `Ax = b`: the canonical pivot solution (free variables
/// set to zero) if the system is consistent, plus the nullity of `A`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub solution: Option<Vec<Scalar>>,
    pub nullity: usize,
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        Matrix {
            field,
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Scalar> {
        self.row(i).to_vec()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn scale_row(&mut self, i: usize, s: &Scalar) {
        for k in 0..self.cols {
            let v = self.get(i, k) * s;
            self.set(i, k, v);
        }
    }

    // row_i -= f * row_src
    fn eliminate(&mut self, i: usize, src: usize, f: &Scalar) {
        for k in 0..self.cols {
            let delta = self.get(src, k) * f;
            let v = self.get(i, k) - &delta;
            self.set(i, k, v);
        }
    }

    /// Reduced row echelon form. Deterministic and idempotent.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    m.eliminate(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical pivot solution of `self · x = b` with free variables zero,
    /// or `None` when inconsistent. Also reports the nullity of `self`.
    pub fn solve(&self, b: &[Scalar]) -> Solution {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = Matrix::zero(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let red = aug.rref();
        let rank_a = red.pivots.iter().filter(|&&c| c < self.cols).count();
        let nullity = self.cols - rank_a;
        if red.pivots.iter().any(|&c| c == self.cols) {
            return Solution {
                solution: None,
                nullity,
            };
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &col) in red.pivots.iter().enumerate() {
            x[col] = red.matrix.get(row, self.cols).clone();
        }
        Solution {
            solution: Some(x),
            nullity,
        }
    }

    /// Canonical basis of the right nullspace, one row per basis vector,
    /// ordered by ascending free column.
    pub fn nullspace(&self) -> Matrix {
        let red = self.rref();
        let pivot_set: Vec<usize> = red.pivots.clone();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![self.field.zero(); self.cols];
            v[fc] = self.field.one();
            for (row, &pc) in pivot_set.iter().enumerate() {
                v[pc] = -red.matrix.get(row, fc);
            }
            rows.push(v);
        }
        if rows.is_empty() {
            Matrix::zero(self.field, 0, self.cols)
        } else {
            Matrix::from_rows(self.field, rows)
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }
}

/// A subspace of the span of an ordered path basis (one degree, one vertex
/// block), held as a canonical RREF basis with no zero rows.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace {
    ambient: Vec<Path>,
    basis: Matrix,
}

impl Subspace {
    /// Canonicalizes a spanning set of coordinate rows.
    pub fn from_rows(ambient: Vec<Path>, field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Subspace {
        let n = ambient.len();
        let m = if rows.is_empty() {
            Matrix::zero(field, 0, n)
        } else {
            Matrix::from_rows(field, rows)
        };
        let red = m.rref();
        let mut kept = Vec::with_capacity(red.rank);
        for i in 0..red.rank {
            kept.push(red.matrix.row_vec(i));
        }
        let basis = if kept.is_empty() {
            Matrix::zero(field, 0, n)
        } else {
            Matrix::from_rows(field, kept)
        };
        Subspace { ambient, basis }
    }

    pub fn from_spanning(ambient: Vec<Path>, field: FieldSpec, vectors: &[PathVector]) -> Subspace {
        let rows = vectors
            .iter()
            .map(|v| v.to_coords(&ambient, field))
            .collect();
        Subspace::from_rows(ambient, field, rows)
    }

    pub fn ambient(&self) -> &[Path] {
        &self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        // basis is RREF with no zero rows, so the pivot of row i is its
        // first nonzero column
        (0..self.basis.rows())
            .map(|i| {
                (0..self.basis.cols())
                    .find(|&j| !self.basis.get(i, j).is_zero())
                    .unwrap()
            })
            .collect()
    }

    pub fn basis_vectors(&self, degree: usize) -> Vec<PathVector> {
        (0..self.dim())
            .map(|i| PathVector::from_coords(degree, &self.ambient, self.basis.row(i)))
            .collect()
    }

    /// Reduces a coordinate vector modulo the basis; the remainder is zero
    /// exactly when the vector lies in the subspace.
    pub fn reduce(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.ambient.len());
        let mut rem = coords.to_vec();
        for (row, &pc) in self.pivot_columns().iter().enumerate() {
            if rem[pc].is_zero() {
                continue;
            }
            let f = rem[pc].clone();
            for j in 0..rem.len() {
                let delta = self.basis.get(row, j) * &f;
                rem[j] = &rem[j] - &delta;
            }
        }
        rem
    }

    pub fn contains(&self, v: &PathVector) -> bool {
        let coords = v.to_coords(&self.ambient, self.field());
        self.reduce(&coords).iter().all(Scalar::is_zero)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, Error> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        let mut rows = Vec::new();
        for i in 0..self.dim() {
            rows.push(self.basis.row_vec(i));
        }
        for i in 0..other.dim() {
            rows.push(other.basis.row_vec(i));
        }
        Ok(Subspace::from_rows(
            self.ambient.clone(),
            self.field(),
            rows,
        ))
    }

    /// Canonical basis of the intersection, computed from the nullspace of
    /// the stacked coordinate matrix.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, Error> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        let field = self.field();
        let (ru, rv) = (self.dim(), other.dim());
        let amb = self.ambient.len();
        // columns: coefficients (a | b) with a·U = b·V
        let mut stacked = Matrix::zero(field, amb, ru + rv);
        for j in 0..ru {
            for k in 0..amb {
                stacked.set(k, j, self.basis.get(j, k).clone());
            }
        }
        for j in 0..rv {
            for k in 0..amb {
                stacked.set(k, ru + j, -other.basis.get(j, k));
            }
        }
        let null = stacked.nullspace();
        let mut rows = Vec::with_capacity(null.rows());
        for i in 0..null.rows() {
            let mut vec = vec![field.zero(); amb];
            for j in 0..ru {
                let a = null.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..amb {
                    let delta = self.basis.get(j, k) * a;
                    vec[k] = &vec[k] + &delta;
                }
            }
            rows.push(vec);
        }
        let result = Subspace::from_rows(self.ambient.clone(), field, rows);
        debug_assert_eq!(
            result.dim() + self.sum(other)?.dim(),
            self.dim() + other.dim(),
            "intersection dimension formula violated"
        );
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{enumerate_paths, Arrow, Quiver};
    use proptest::prelude::*;

    fn qmat(rows: Vec<Vec<i64>>) -> Matrix {
        let f = FieldSpec::Rationals;
        Matrix::from_rows(
            f,
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| f.from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_collapses_dependent_rows() {
        let red = qmat(vec![vec![2, 4], vec![1, 2]]).rref();
        assert_eq!(red.rank, 1);
        assert_eq!(red.pivots, vec![0]);
        assert!(red.matrix.get(0, 0).is_one());
        assert_eq!(red.matrix.get(0, 1).to_string(), "2");
    }

    #[test]
    fn rref_identity_fixed() {
        let id = Matrix::identity(FieldSpec::Rationals, 3);
        let red = id.rref();
        assert_eq!(red.rank, 3);
        assert_eq!(red.matrix, id);
    }

    #[test]
    fn rref_mod_two() {
        let f = FieldSpec::PrimeField(2);
        let m = Matrix::from_rows(
            f,
            vec![
                vec![f.from_int(1), f.from_int(1)],
                vec![f.from_int(1), f.from_int(-1)],
            ],
        );
        let red = m.rref();
        assert_eq!(red.rank, 1);
        assert_eq!(red.matrix.row(0)[1].to_string(), "1");
    }

    #[test]
    fn solve_pivot_convention() {
        let f = FieldSpec::Rationals;
        let a = qmat(vec![vec![1, 1]]);
        let sol = a.solve(&[f.from_int(1)]);
        assert_eq!(sol.nullity, 1);
        let x = sol.solution.unwrap();
        assert!(x[0].is_one());
        assert!(x[1].is_zero());
    }

    #[test]
    fn solve_inconsistent() {
        let f = FieldSpec::Rationals;
        let a = qmat(vec![vec![1], vec![0]]);
        let sol = a.solve(&[f.from_int(0), f.from_int(1)]);
        assert!(sol.solution.is_none());
    }

    #[test]
    fn solve_identity() {
        let f = FieldSpec::Rationals;
        let a = Matrix::identity(f, 2);
        let sol = a.solve(&[f.from_int(3), f.from_int(5)]);
        assert_eq!(sol.nullity, 0);
        let x = sol.solution.unwrap();
        assert_eq!(x[0].to_string(), "3");
        assert_eq!(x[1].to_string(), "5");
    }

    fn loops(n: usize) -> Quiver {
        let names = ["x", "y", "z", "w"];
        Quiver::new(
            vec!["v".into()],
            (0..n)
                .map(|i| Arrow {
                    name: names[i].into(),
                    origin: 0,
                    terminus: 0,
                })
                .collect(),
        )
        .unwrap()
    }

    fn span(ambient: &[Path], rows: Vec<Vec<i64>>) -> Subspace {
        let f = FieldSpec::Rationals;
        Subspace::from_rows(
            ambient.to_vec(),
            f,
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| f.from_int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn intersect_standard_basis() {
        let q = loops(3);
        let ambient = enumerate_paths(&q, 1, None);
        let u = span(&ambient, vec![vec![1, 0, 0], vec![0, 1, 0]]);
        let v = span(&ambient, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        let w = u.intersect(&v).unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w.basis().get(0, 1).is_one());
    }

    #[test]
    fn intersect_self_is_identity() {
        let q = loops(2);
        let ambient = enumerate_paths(&q, 1, None);
        let u = span(&ambient, vec![vec![1, 2]]);
        let w = u.intersect(&u).unwrap();
        assert_eq!(w, u);
    }

    #[test]
    fn intersect_transverse_lines() {
        let q = loops(2);
        let ambient = enumerate_paths(&q, 1, None);
        let u = span(&ambient, vec![vec![1, 1]]);
        let v = span(&ambient, vec![vec![1, -1]]);
        assert_eq!(u.intersect(&v).unwrap().dim(), 0);
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let q = loops(2);
        let a1 = enumerate_paths(&q, 1, None);
        let a2 = enumerate_paths(&q, 2, None);
        let u = span(&a1, vec![vec![1, 0]]);
        let v = span(&a2, vec![vec![1, 0, 0, 0]]);
        assert!(matches!(u.intersect(&v), Err(Error::AmbientMismatch)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rref_idempotent(entries in proptest::collection::vec(-5i64..=5, 12)) {
            let m = qmat(entries.chunks(4).map(|r| r.to_vec()).collect());
            let once = m.rref();
            let twice = once.matrix.rref();
            prop_assert_eq!(&once.matrix, &twice.matrix);
            prop_assert_eq!(once.rank, twice.rank);
        }

        #[test]
        fn rank_plus_nullity(entries in proptest::collection::vec(-5i64..=5, 12)) {
            let m = qmat(entries.chunks(3).map(|r| r.to_vec()).collect());
            let rank = m.rank();
            let nullity = m.nullspace().rows();
            prop_assert_eq!(rank + nullity, m.cols());
        }

        #[test]
        fn intersect_commutative_and_contained(
            a in proptest::collection::vec(-3i64..=3, 8),
            b in proptest::collection::vec(-3i64..=3, 8),
        ) {
            let q = loops(4);
            let ambient = enumerate_paths(&q, 1, None);
            let u = span(&ambient, a.chunks(4).map(|r| r.to_vec()).collect());
            let v = span(&ambient, b.chunks(4).map(|r| r.to_vec()).collect());
            let uv = u.intersect(&v).unwrap();
            let vu = v.intersect(&u).unwrap();
            prop_assert_eq!(&uv, &vu);
            for w in uv.basis_vectors(1) {
                prop_assert!(u.contains(&w));
                prop_assert!(v.contains(&w));
            }
        }
    }
}
