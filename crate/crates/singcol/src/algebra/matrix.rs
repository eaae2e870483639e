use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{fmt_rational, parse_rational, q, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(cols: usize, data: Vec<Vec<Rational>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        RationalMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_i64(data: &[Vec<i64>]) -> Self {
        let cols = data.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            data.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> (RationalMatrix, usize, Vec<usize>) {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = Rational::one() / &m[r][c];
            for x in m[r].iter_mut() {
                *x *= &inv;
            }
            let pr = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        (
            RationalMatrix {
                rows: self.rows,
                cols: self.cols,
                data: m,
            },
            rank,
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Nonzero rows of the RREF.
    pub fn row_space_basis(&self) -> RationalMatrix {
        let (m, rank, _) = self.rref();
        RationalMatrix {
            rows: rank,
            cols: self.cols,
            data: m.data.into_iter().take(rank).collect(),
        }
    }
}

/// Sparse row: column → nonzero value.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Reduced echelon basis of the span of sparse rows; each output row has
/// leading entry 1 at its pivot, sorted by pivot.
pub fn sparse_rref(rows: &[SparseRow]) -> Vec<SparseRow> {
    let mut basis: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for r in rows {
        let mut r = r.clone();
        loop {
            let Some((&c, _)) = r.iter().find(|(c, _)| basis.contains_key(c)) else {
                break;
            };
            let f = r[&c].clone();
            axpy(&mut r, &basis[&c], &(-f));
        }
        let Some((&c, v)) = r.iter().next() else {
            continue;
        };
        let inv = Rational::one() / v;
        for x in r.values_mut() {
            *x *= &inv;
        }
        for b in basis.values_mut() {
            if let Some(f) = b.get(&c).cloned() {
                axpy(b, &r, &(-f));
            }
        }
        basis.insert(c, r);
    }
    basis.into_values().collect()
}

/// `r += f * s`.
pub fn axpy(r: &mut SparseRow, s: &SparseRow, f: &Rational) {
    for (c, v) in s {
        let d = f * v;
        let zero = match r.get_mut(c) {
            Some(e) => {
                *e += d;
                e.is_zero()
            }
            None => {
                if !d.is_zero() {
                    r.insert(*c, d);
                }
                false
            }
        };
        if zero {
            r.remove(c);
        }
    }
}

/// JSON carrier: rationals as strings `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn new(columns: Vec<String>, m: &RationalMatrix) -> Self {
        MatrixJson {
            columns,
            rows: m
                .rows()
                .iter()
                .map(|r| r.iter().map(fmt_rational).collect())
                .collect(),
        }
    }

    pub fn matrix(&self) -> Option<RationalMatrix> {
        let data: Option<Vec<Vec<Rational>>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect())
            .collect();
        let data = data?;
        if data.iter().any(|r| r.len() != self.columns.len()) {
            return None;
        }
        Some(RationalMatrix::from_rows(self.columns.len(), data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use proptest::prelude::*;

    #[test]
    fn identity_is_fixed() {
        let i = RationalMatrix::identity(3);
        let (r, rank, piv) = i.rref();
        assert_eq!(r, i);
        assert_eq!(rank, 3);
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn dependent_rows() {
        let m = RationalMatrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        let (r, rank, piv) = m.rref();
        assert_eq!(r, RationalMatrix::from_i64(&[vec![1, 2], vec![0, 0]]));
        assert_eq!(rank, 1);
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn json_roundtrip() {
        let m = RationalMatrix::from_rows(2, vec![vec![q(1), Rational::new(3.into(), 4.into())]]);
        let j = MatrixJson::new(vec!["1".into(), "x".into()], &m);
        let s = serde_json::to_string(&j).unwrap();
        let back: MatrixJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.matrix().unwrap(), m);
    }

    /// Fraction-free elimination on integers followed by normalization; an
    /// independent route to the RREF.
    fn bareiss_rref(a: &[Vec<i64>]) -> Vec<Vec<Rational>> {
        let mut m: Vec<Vec<BigInt>> = a
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let (rows, cols) = (m.len(), m[0].len());
        let mut piv = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| m[i][c] != BigInt::from(0)) else {
                continue;
            };
            m.swap(r, p);
            for i in 0..rows {
                if i != r && m[i][c] != BigInt::from(0) {
                    let (a, b) = (m[r][c].clone(), m[i][c].clone());
                    for j in 0..cols {
                        m[i][j] = &a * &m[i][j] - &b * &m[r][j];
                    }
                    let g = m[i].iter().fold(BigInt::from(0), |g, x| g.gcd(x));
                    if g != BigInt::from(0) {
                        for x in m[i].iter_mut() {
                            *x = &*x / &g;
                        }
                    }
                }
            }
            piv.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        let mut out = vec![vec![Rational::zero(); cols]; rows];
        for (i, &c) in piv.iter().enumerate() {
            for j in 0..cols {
                out[i][j] = Rational::new(m[i][j].clone(), m[i][c].clone());
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_fraction_free(a in prop::collection::vec(prop::collection::vec(-4i64..=4, 8), 5)) {
            let m = RationalMatrix::from_i64(&a);
            let (r, _, _) = m.rref();
            prop_assert_eq!(r.rows().to_vec(), bareiss_rref(&a));
        }

        #[test]
        fn idempotent_and_rank(a in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..6)) {
            let m = RationalMatrix::from_i64(&a);
            let (r, rank, _) = m.rref();
            let (r2, rank2, _) = r.rref();
            prop_assert_eq!(&r, &r2);
            prop_assert_eq!(rank, rank2);
            prop_assert_eq!(rank, m.transpose().rank());
            prop_assert_eq!(rank, m.row_space_basis().transpose().rank());
        }

        #[test]
        fn sparse_agrees_with_dense(a in prop::collection::vec(prop::collection::vec(-3i64..=3, 7), 1..7)) {
            let m = RationalMatrix::from_i64(&a);
            let sparse: Vec<SparseRow> = a.iter().map(|r| {
                r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c, q(v))).collect()
            }).collect();
            let s = sparse_rref(&sparse);
            let d = m.row_space_basis();
            prop_assert_eq!(s.len(), d.nrows());
            for (sr, dr) in s.iter().zip(d.rows()) {
                let dense: Vec<Rational> = (0..7).map(|c| sr.get(&c).cloned().unwrap_or_else(Rational::zero)).collect();
                prop_assert_eq!(&dense, dr);
            }
        }
    }
}
