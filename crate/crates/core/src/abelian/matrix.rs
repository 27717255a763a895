//! Dense integer matrices and Smith normal form.

use std::fmt;

use num_integer::Integer;
use num_traits::Signed;
use serde::ser::SerializeStruct;
use serde::Serialize;

/// Integer scalars usable in [`Matrix`].
pub trait Scalar: Integer + Signed + Clone + fmt::Debug + fmt::Display {}

impl<T: Integer + Signed + Clone + fmt::Debug + fmt::Display> Scalar for T {}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a `rows x columns.len()` matrix from column vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
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

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &T) {
        for c in 0..self.cols {
            let v = self[(src, c)].clone() * k.clone();
            self[(dst, c)] = self[(dst, c)].clone() + v;
        }
    }

    /// `col[dst] += k * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &T) {
        for r in 0..self.rows {
            let v = self[(r, src)].clone() * k.clone();
            self[(r, dst)] = self[(r, dst)].clone() + v;
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            self[(r, c)] = -self[(r, c)].clone();
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.cols + c]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.cols + c]
    }
}

/// A finitely generated abelian group `Z^free_rank + Z/d_1 + ... + Z/d_k`
/// with `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Invariants<T> {
    pub free_rank: usize,
    pub torsion: Vec<T>,
}

impl<T: Scalar> Invariants<T> {
    pub fn free(rank: usize) -> Self {
        Invariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum, renormalized to a divisibility chain.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut torsion: Vec<T> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        normalize_chain(&mut torsion);
        Invariants {
            free_rank: self.free_rank + other.free_rank,
            torsion: strip_units(torsion),
        }
    }

    /// Dimension of `G ⊗ Z/2` over `Z/2`.
    pub fn rank_mod2(&self) -> usize {
        let two = T::one() + T::one();
        self.free_rank
            + self
                .torsion
                .iter()
                .filter(|d| d.is_multiple_of(&two))
                .count()
    }
}

impl<T: Scalar> fmt::Display for Invariants<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl<T: Scalar> Serialize for Invariants<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AbelianInvariants", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        // Torsion coefficients as strings would be lossless for bignums, but
        // every realistic coefficient fits; keep JSON numbers when possible.
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|d| {
                let text = d.to_string();
                text.parse::<u64>()
                    .map(serde_json::Value::from)
                    .unwrap_or(serde_json::Value::String(text))
            })
            .collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

fn normalize_chain<T: Scalar>(d: &mut [T]) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let (g, l) = (d[i].gcd(&d[j]), d[i].lcm(&d[j]));
            d[i] = g;
            d[j] = l;
        }
    }
}

fn strip_units<T: Scalar>(d: Vec<T>) -> Vec<T> {
    d.into_iter().filter(|x| !x.is_one()).collect()
}

/// Nonzero invariant factors of `m`, as a divisibility chain.
pub fn smith_diagonal<T: Scalar>(m: &Matrix<T>) -> Vec<T> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // Pivot of least absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for r in k..rows {
            for c in k..cols {
                if !a[(r, c)].is_zero()
                    && best.is_none_or(|(br, bc)| a[(r, c)].abs() < a[(br, bc)].abs())
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        a.swap_rows(k, pr);
        a.swap_cols(k, pc);
        // Reduce the pivot row and column; restart if a smaller remainder appears.
        let mut clean = true;
        for r in k + 1..rows {
            if !a[(r, k)].is_zero() {
                let q = a[(r, k)].div_floor(&a[(k, k)]);
                a.add_row_multiple(r, k, &-q);
                if !a[(r, k)].is_zero() {
                    clean = false;
                }
            }
        }
        for c in k + 1..cols {
            if !a[(k, c)].is_zero() {
                let q = a[(k, c)].div_floor(&a[(k, k)]);
                a.add_col_multiple(c, k, &-q);
                if !a[(k, c)].is_zero() {
                    clean = false;
                }
            }
        }
        if clean {
            diag.push(a[(k, k)].abs());
            k += 1;
        }
    }
    normalize_chain(&mut diag);
    diag
}

/// Invariants of the cokernel `Z^rows / (column span of m)`.
pub fn snf<T: Scalar>(m: &Matrix<T>) -> Invariants<T> {
    let diag = smith_diagonal(m);
    Invariants {
        free_rank: m.rows() - diag.len(),
        torsion: strip_units(diag),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn mi(rows: Vec<Vec<i64>>) -> Matrix<i64> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn examples() {
        let a = snf(&mi(vec![vec![2, 0], vec![0, 0]]));
        assert_eq!((a.free_rank, a.torsion.clone()), (1, vec![2]));
        assert_eq!(a.to_string(), "Z + Z/2");
        let b = snf(&mi(vec![vec![1, 2], vec![3, 4]]));
        assert_eq!((b.free_rank, b.torsion), (0, vec![2]));
        let z = snf(&Matrix::<i64>::zeros(3, 0));
        assert_eq!(z.to_string(), "Z^3");
    }

    #[test]
    fn chain_is_normalized() {
        // diag(2, 3) = Z/6
        assert_eq!(snf(&mi(vec![vec![2, 0], vec![0, 3]])).torsion, vec![6]);
        // diag(4, 6) = Z/2 + Z/12
        assert_eq!(snf(&mi(vec![vec![4, 0], vec![0, 6]])).torsion, vec![2, 12]);
        let s = Invariants {
            free_rank: 2,
            torsion: vec![2i64, 2],
        };
        assert_eq!(s.to_string(), "Z^2 + Z/2 + Z/2");
        assert_eq!(Invariants::<i64>::free(0).to_string(), "0");
    }

    #[test]
    fn bigint_matches_i64() {
        let m = mi(vec![vec![6, 4, 2], vec![10, -8, 12], vec![3, 3, 9]]);
        let big = m.map(|x| BigInt::from(*x));
        let small = snf(&m);
        let large = snf(&big);
        assert_eq!(small.free_rank, large.free_rank);
        assert_eq!(
            small
                .torsion
                .iter()
                .map(|x| BigInt::from(*x))
                .collect::<Vec<_>>(),
            large.torsion
        );
    }

    #[test]
    fn bigint_handles_large_entries() {
        let huge = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62);
        let m = Matrix::from_rows(vec![
            vec![huge.clone(), BigInt::from(0)],
            vec![BigInt::from(0), huge.clone() * 3],
        ]);
        let inv = snf(&m);
        assert_eq!(inv.torsion, vec![huge.clone(), huge * 3]);
    }

    #[test]
    fn json_shape() {
        let inv = Invariants {
            free_rank: 2,
            torsion: vec![BigInt::from(2)],
        };
        assert_eq!(
            serde_json::to_string(&inv).unwrap(),
            r#"{"free_rank":2,"torsion":[2]}"#
        );
    }
}
