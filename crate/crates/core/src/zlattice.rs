//! Exact integer linear algebra: column Hermite normal form, lattice
//! membership and intersection of affine lattices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Mismatch("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect(),
        })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Mismatch(format!("column of length {}, expected {rows}", col.len())));
            }
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.cols {
            return Err(Error::Mismatch(format!("vector of length {}, expected {}", x.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `[self | rhs]`.
    pub fn hcat(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::Mismatch(format!("row counts {} and {}", self.rows, rhs.rows)));
        }
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(rhs.row(r));
        }
        Ok(IntMatrix { rows: self.rows, cols, data })
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn col_negate(&mut self, a: usize) {
        for r in 0..self.rows {
            let v = &mut self.data[r * self.cols + a];
            *v = -std::mem::take(v);
        }
    }

    /// `col_a -= k * col_b`.
    fn col_axpy(&mut self, a: usize, k: &BigInt, b: usize) {
        for r in 0..self.rows {
            let sub = k * &self.data[r * self.cols + b];
            self.data[r * self.cols + a] -= sub;
        }
    }

    /// Replaces `(col_a, col_b)` by `(x col_a + y col_b, z col_a + w col_b)`.
    fn col_mix(&mut self, a: usize, b: usize, [x, y, z, w]: [&BigInt; 4]) {
        for r in 0..self.rows {
            let va = &self.data[r * self.cols + a];
            let vb = &self.data[r * self.cols + b];
            let na = x * va + y * vb;
            let nb = z * va + w * vb;
            self.data[r * self.cols + a] = na;
            self.data[r * self.cols + b] = nb;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `H = A·U` with `U` unimodular and `H` in column Hermite normal form.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, column)` of each pivot; pivot columns are `0..rank`.
    pub pivots: Vec<(usize, usize)>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero columns of `H`: a canonical basis of the column lattice.
    pub fn basis(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (0..self.rank()).map(|c| self.h.column(c)).collect();
        IntMatrix::from_columns(self.h.rows, &cols).expect("columns share the row count")
    }
}

/// Column-style Hermite normal form.
///
/// Pivots are positive, lie in strictly increasing rows, columns are zero
/// above their pivot row, and entries left of a pivot lie in `[0, pivot)`.
/// Columns past the rank are zero.
pub fn hnf(a: &IntMatrix) -> Hnf {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for i in 0..h.rows {
        if r == h.cols {
            break;
        }
        for c in r + 1..h.cols {
            if h.get(i, c).is_zero() {
                continue;
            }
            if h.get(i, r).is_zero() {
                h.col_swap(r, c);
                u.col_swap(r, c);
                continue;
            }
            let (p, q) = (h.get(i, r).clone(), h.get(i, c).clone());
            let e = p.extended_gcd(&q);
            let (g, x, y) = if e.gcd.is_negative() { (-e.gcd, -e.x, -e.y) } else { (e.gcd, e.x, e.y) };
            let z = -(&q / &g);
            let w = &p / &g;
            h.col_mix(r, c, [&x, &y, &z, &w]);
            u.col_mix(r, c, [&x, &y, &z, &w]);
        }
        if h.get(i, r).is_zero() {
            continue;
        }
        if h.get(i, r).is_negative() {
            h.col_negate(r);
            u.col_negate(r);
        }
        let pivot = h.get(i, r).clone();
        for c in 0..r {
            let k = h.get(i, c).div_floor(&pivot);
            if !k.is_zero() {
                h.col_axpy(c, &k, r);
                u.col_axpy(c, &k, r);
            }
        }
        pivots.push((i, r));
        r += 1;
    }
    Hnf { h, u, pivots }
}

/// Why `A x = b` has no integer solution: the first row whose residual
/// after forward substitution is nonzero (no pivot) or not divisible by its pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Infeasibility {
    pub row: usize,
    pub residual: BigInt,
    pub pivot: Option<BigInt>,
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pivot {
            Some(p) => write!(f, "row {}: residual {} not divisible by pivot {}", self.row, self.residual, p),
            None => write!(f, "row {}: residual {} outside the span (no pivot)", self.row, self.residual),
        }
    }
}

/// Solves `A x = b` over the integers.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Result<std::result::Result<Vec<BigInt>, Infeasibility>> {
    if b.len() != a.rows {
        return Err(Error::Mismatch(format!("right-hand side of length {}, expected {}", b.len(), a.rows)));
    }
    let f = hnf(a);
    let mut residual = b.to_vec();
    let mut y = vec![BigInt::zero(); a.cols];
    let mut next = f.pivots.iter().peekable();
    for i in 0..a.rows {
        match next.peek() {
            Some(&&(pi, pc)) if pi == i => {
                next.next();
                let pivot = f.h.get(i, pc);
                let (quot, rem) = residual[i].div_rem(pivot);
                if !rem.is_zero() {
                    return Ok(Err(Infeasibility { row: i, residual: residual[i].clone(), pivot: Some(pivot.clone()) }));
                }
                for (r, res) in residual.iter_mut().enumerate().skip(i) {
                    let hv = f.h.get(r, pc);
                    if !hv.is_zero() {
                        *res -= &quot * hv;
                    }
                }
                y[pc] = quot;
            }
            _ => {
                if !residual[i].is_zero() {
                    return Ok(Err(Infeasibility { row: i, residual: residual[i].clone(), pivot: None }));
                }
            }
        }
    }
    let x = f.u.mul_vec(&y)?;
    debug_assert_eq!(a.mul_vec(&x)?, b);
    Ok(Ok(x))
}

/// Some integer `x` with `A x = b`, or `None`.
pub fn member(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    Ok(solve(a, b)?.ok())
}

/// Whether `b1 + G1·ℤ^p` and `b2 + G2·ℤ^r` meet.
pub fn affine_intersects(b1: &[BigInt], g1: &IntMatrix, b2: &[BigInt], g2: &IntMatrix) -> Result<bool> {
    affine_intersection(b1, g1, b2, g2).map(|r| r.is_ok())
}

/// Like [`affine_intersects`], returning the combined coefficients `(m, m')`
/// or the infeasibility certificate of `[G1 | -G2] (m, m') = b2 - b1`.
pub fn affine_intersection(
    b1: &[BigInt],
    g1: &IntMatrix,
    b2: &[BigInt],
    g2: &IntMatrix,
) -> Result<std::result::Result<Vec<BigInt>, Infeasibility>> {
    if b1.len() != b2.len() || g1.rows() != b1.len() || g2.rows() != b2.len() {
        return Err(Error::Mismatch("affine lattices of different dimensions".into()));
    }
    let stacked = g1.hcat(&g2.neg())?;
    let rhs: Vec<BigInt> = b2.iter().zip(b1).map(|(x, y)| x - y).collect();
    solve(&stacked, &rhs)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if a.rows != a.cols {
        return Err(Error::Mismatch("determinant of a non-square matrix".into()));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn check_hnf_shape(f: &Hnf) {
        let h = &f.h;
        for (k, &(row, col)) in f.pivots.iter().enumerate() {
            assert_eq!(col, k);
            assert!(h.get(row, col).is_positive());
            for r in 0..row {
                assert!(h.get(r, col).is_zero());
            }
            for c in 0..col {
                assert!(!h.get(row, c).is_negative() && h.get(row, c) < h.get(row, col));
            }
            if k > 0 {
                assert!(row > f.pivots[k - 1].0);
            }
        }
        for c in f.rank()..h.cols() {
            assert!(h.column(c).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn hnf_identity_and_zero() {
        let f = hnf(&IntMatrix::identity(3));
        assert_eq!(f.h, IntMatrix::identity(3));
        assert_eq!(f.u, IntMatrix::identity(3));
        let z = IntMatrix::zeros(2, 3);
        let f = hnf(&z);
        assert_eq!(f.h, z);
        assert_eq!(f.u, IntMatrix::identity(3));
        assert_eq!(f.rank(), 0);
    }

    #[test]
    fn hnf_row_vector() {
        let a = mat(&[vec![2, 4]]);
        let f = hnf(&a);
        assert_eq!(f.h, mat(&[vec![2, 0]]));
        assert_eq!(determinant(&f.u).unwrap().abs(), BigInt::one());
        assert_eq!(a.mul(&f.u).unwrap(), f.h);
    }

    #[test]
    fn hnf_known_example() {
        let a = mat(&[vec![3, 3, 1], vec![0, 1, 0], vec![0, 0, 19]]);
        let f = hnf(&a);
        check_hnf_shape(&f);
        assert_eq!(a.mul(&f.u).unwrap(), f.h);
        assert_eq!(f.rank(), 3);
        // determinant of the lattice is preserved
        assert_eq!(determinant(&f.h).unwrap().abs(), determinant(&a).unwrap().abs());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&mat(&[vec![1, 2], vec![3, 4]])).unwrap(), BigInt::from(-2));
        assert_eq!(determinant(&mat(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(
            determinant(&mat(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]])).unwrap(),
            BigInt::from(6)
        );
        assert_eq!(determinant(&mat(&[vec![1, 2], vec![2, 4]])).unwrap(), BigInt::zero());
    }

    #[test]
    fn member_examples() {
        let b = v(&[3, -7, 2]);
        assert_eq!(member(&IntMatrix::identity(3), &b).unwrap(), Some(b.clone()));
        assert_eq!(member(&mat(&[vec![2], vec![0]]), &v(&[1, 0])).unwrap(), None);
        assert!(member(&mat(&[vec![2], vec![0]]), &v(&[1])).is_err());
        let r = solve(&mat(&[vec![2], vec![0]]), &v(&[1, 0])).unwrap().unwrap_err();
        assert_eq!(r, Infeasibility { row: 0, residual: 1.into(), pivot: Some(2.into()) });
        let r = solve(&mat(&[vec![2], vec![0]]), &v(&[2, 5])).unwrap().unwrap_err();
        assert_eq!(r.pivot, None);
        assert_eq!(r.row, 1);
    }

    #[test]
    fn affine_examples() {
        let z = IntMatrix::zeros(2, 1);
        let e1 = v(&[1, 0]);
        let o = v(&[0, 0]);
        assert!(affine_intersects(&e1, &z, &e1, &z).unwrap());
        assert!(!affine_intersects(&o, &z, &e1, &z).unwrap());
        let g1 = mat(&[vec![1], vec![0]]);
        assert!(affine_intersects(&o, &g1, &e1, &z).unwrap());
        assert!(affine_intersects(&o, &g1, &v(&[1]), &z).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            prop::collection::vec(-4i64..=4, r * c).prop_map(move |d| {
                let rows: Vec<Vec<i64>> = d.chunks(c).map(<[i64]>::to_vec).collect();
                IntMatrix::from_rows(&rows).unwrap()
            })
        })
    }

    // Exhaustive search over small coefficient boxes.
    fn brute_member(a: &IntMatrix, b: &[BigInt], bound: i64) -> bool {
        let c = a.cols();
        let mut x = vec![-bound; c];
        loop {
            let xv: Vec<BigInt> = x.iter().map(|&t| BigInt::from(t)).collect();
            if a.mul_vec(&xv).unwrap() == b {
                return true;
            }
            let mut k = 0;
            while k < c && x[k] == bound {
                x[k] = -bound;
                k += 1;
            }
            if k == c {
                return false;
            }
            x[k] += 1;
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn hnf_is_a_unimodular_transform(a in arb_matrix(4, 5)) {
            let f = hnf(&a);
            prop_assert_eq!(a.mul(&f.u).unwrap(), f.h.clone());
            prop_assert_eq!(determinant(&f.u).unwrap().abs(), BigInt::one());
            for (k, &(row, col)) in f.pivots.iter().enumerate() {
                prop_assert_eq!(col, k);
                prop_assert!(f.h.get(row, col).is_positive());
                for c in 0..col {
                    prop_assert!(!f.h.get(row, c).is_negative());
                    prop_assert!(f.h.get(row, c) < f.h.get(row, col));
                }
                for r in 0..row {
                    prop_assert!(f.h.get(r, col).is_zero());
                }
            }
            for c in f.rank()..a.cols() {
                prop_assert!(f.h.column(c).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn hnf_is_invariant_under_column_operations(a in arb_matrix(3, 4), i in 0usize..4, j in 0usize..4, k in -3i64..=3) {
            prop_assume!(i < a.cols() && j < a.cols() && i != j);
            let mut b = a.clone();
            b.col_axpy(i, &BigInt::from(k), j);
            b.col_swap(i, j);
            prop_assert_eq!(hnf(&a).basis(), hnf(&b).basis());
        }

        #[test]
        fn member_agrees_with_search(a in arb_matrix(2, 2), x in prop::collection::vec(-2i64..=2, 2), shift in prop::collection::vec(-1i64..=1, 2)) {
            let xv: Vec<BigInt> = x.iter().take(a.cols()).map(|&t| BigInt::from(t)).collect();
            let inside = a.mul_vec(&xv).unwrap();
            let sol = member(&a, &inside).unwrap().expect("image point is a member");
            prop_assert_eq!(a.mul_vec(&sol).unwrap(), inside.clone());
            let b: Vec<BigInt> = inside.iter().zip(&shift).map(|(p, s)| p + s).collect();
            let found = member(&a, &b).unwrap();
            if let Some(sol) = &found {
                prop_assert_eq!(&a.mul_vec(sol).unwrap(), &b);
            }
            // entries at most 4 in absolute value keep a witness inside the box when one exists
            if brute_member(&a, &b, 12) {
                prop_assert!(found.is_some());
            }
        }
    }
}
