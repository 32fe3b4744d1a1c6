//! Smith normal form over ℤ.
//!
//! [`smith_normal_form`] returns unimodular `U`, `V` with `U·M·V = D`, where
//! `D` is diagonal, nonnegative and satisfies `d₁ | d₂ | …`. Pivoting always
//! picks the entry of smallest absolute value and reduces with rounded
//! quotients, which keeps intermediate growth small.
//!
//! [`invariant_factors`] computes only the diagonal, on a sparse
//! representation; it is the fast path for canonical forms and the bar
//! complex oracle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::matrix::IntMatrix;
use crate::scalar::{Checked, Overflow, Scalar};

/// Result of a Smith normal form computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    /// Inverse of `u`, tracked alongside it.
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero diagonal entries `d₁ | d₂ | … | d_rank`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Computes `U·M·V = D` with unimodular `U`, `V`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    match DenseElim::<i128>::load(m).and_then(DenseElim::run) {
        Ok(e) => e.finish(),
        Err(Overflow) => DenseElim::<BigInt>::load(m)
            .and_then(DenseElim::run)
            .expect("bigint elimination cannot overflow")
            .finish(),
    }
}

struct DenseElim<S> {
    rows: usize,
    cols: usize,
    a: Vec<Vec<S>>,
    u: Vec<Vec<S>>,
    u_inv: Vec<Vec<S>>,
    v: Vec<Vec<S>>,
    rank: usize,
}

fn identity<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

fn to_matrix<S: Scalar>(rows: usize, cols: usize, a: &[Vec<S>]) -> IntMatrix {
    let data = a.iter().flat_map(|r| r.iter().map(S::to_big)).collect();
    IntMatrix::from_row_major(rows, cols, data).expect("shape is consistent")
}

impl<S: Scalar> DenseElim<S> {
    fn load(m: &IntMatrix) -> Checked<Self> {
        let mut a = Vec::with_capacity(m.rows());
        for r in 0..m.rows() {
            let row: Option<Vec<S>> = m.row(r).iter().map(S::from_big).collect();
            a.push(row.ok_or(Overflow)?);
        }
        Ok(DenseElim {
            rows: m.rows(),
            cols: m.cols(),
            a,
            u: identity(m.rows()),
            u_inv: identity(m.rows()),
            v: identity(m.cols()),
            rank: 0,
        })
    }

    fn finish(self) -> SmithForm {
        SmithForm {
            u: to_matrix(self.rows, self.rows, &self.u),
            u_inv: to_matrix(self.rows, self.rows, &self.u_inv),
            d: to_matrix(self.rows, self.cols, &self.a),
            v: to_matrix(self.cols, self.cols, &self.v),
            rank: self.rank,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        for row in &mut self.v {
            row.swap(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) -> Checked<()> {
        for x in &mut self.a[i] {
            *x = x.neg()?;
        }
        for x in &mut self.u[i] {
            *x = x.neg()?;
        }
        for row in &mut self.u_inv {
            row[i] = row[i].neg()?;
        }
        Ok(())
    }

    /// `row[dst] += c * row[src]`
    fn row_axpy(&mut self, dst: usize, src: usize, c: &S) -> Checked<()> {
        fn axpy<S: Scalar>(m: &mut [Vec<S>], dst: usize, src: usize, c: &S) -> Checked<()> {
            let (d, s) = if dst < src {
                let (lo, hi) = m.split_at_mut(src);
                (&mut lo[dst], &hi[0])
            } else {
                let (lo, hi) = m.split_at_mut(dst);
                (&mut hi[0], &lo[src])
            };
            for (x, y) in d.iter_mut().zip(s.iter()) {
                if !y.is_zero() {
                    *x = x.add_mul(c, y)?;
                }
            }
            Ok(())
        }
        axpy(&mut self.a, dst, src, c)?;
        axpy(&mut self.u, dst, src, c)?;
        let nc = c.neg()?;
        for row in &mut self.u_inv {
            if !row[dst].is_zero() {
                row[src] = row[src].add_mul(&nc, &row[dst])?;
            }
        }
        Ok(())
    }

    /// `col[dst] += c * col[src]`
    fn col_axpy(&mut self, dst: usize, src: usize, c: &S) -> Checked<()> {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            if !row[src].is_zero() {
                row[dst] = row[dst].add_mul(c, &row[src])?;
            }
        }
        Ok(())
    }

    fn min_abs_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs_lt(&self.a[bi][bj])) {
                    best = Some((i, j));
                    if x.is_unit() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn min_abs_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        for i in t + 1..self.rows {
            let x = &self.a[i][t];
            if !x.is_zero() && (self.a[best.0][best.1].is_zero() || x.abs_lt(&self.a[best.0][best.1])) {
                best = (i, t);
            }
        }
        for j in t + 1..self.cols {
            let x = &self.a[t][j];
            if !x.is_zero() && (self.a[best.0][best.1].is_zero() || x.abs_lt(&self.a[best.0][best.1])) {
                best = (t, j);
            }
        }
        best
    }

    fn run(mut self) -> Checked<Self> {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.min_abs_in(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].quo_round(&self.a[t][t])?;
                    self.row_axpy(i, t, &q.neg()?)?;
                    clean &= self.a[i][t].is_zero();
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].quo_round(&self.a[t][t])?;
                    self.col_axpy(j, t, &q.neg()?)?;
                    clean &= self.a[t][j].is_zero();
                }
                if !clean {
                    let (i, j) = self.min_abs_in_cross(t);
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                let p = self.a[t][t].clone();
                let offender = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| !p.divides(&self.a[i][j])));
                match offender {
                    Some(i) => self.row_axpy(t, i, &S::one())?,
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t)?;
            }
            t += 1;
        }
        self.rank = t;
        Ok(self)
    }
}

/// Diagonal of the Smith normal form, without transforms.
///
/// Returns the nonzero invariant factors `d₁ | … | d_rank` (units included).
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let columns: Vec<Vec<(usize, BigInt)>> = (0..m.cols())
        .map(|c| {
            (0..m.rows())
                .filter(|&r| !Zero::is_zero(&m[(r, c)]))
                .map(|r| (r, m[(r, c)].clone()))
                .collect()
        })
        .collect();
    sparse_invariant_factors(m.rows(), &columns)
}

/// Invariant factors of a sparse matrix given column by column as
/// `(row, value)` pairs.
pub fn sparse_invariant_factors(rows: usize, columns: &[Vec<(usize, BigInt)>]) -> Vec<BigInt> {
    let diag = match SparseElim::<i128>::load(rows, columns).and_then(SparseElim::run) {
        Ok(d) => d,
        Err(Overflow) => SparseElim::<BigInt>::load(rows, columns)
            .and_then(SparseElim::run)
            .expect("bigint elimination cannot overflow"),
    };
    diagonal_to_chain(diag)
}

/// Rank of a sparse matrix (number of nonzero invariant factors).
pub fn sparse_rank(rows: usize, columns: &[Vec<(usize, BigInt)>]) -> usize {
    sparse_invariant_factors(rows, columns).len()
}

/// Turns the nonzero diagonal of an equivalent diagonal matrix into the
/// divisibility chain of its Smith form.
pub fn diagonal_to_chain(diag: Vec<BigInt>) -> Vec<BigInt> {
    let units = diag.iter().filter(|d| d.is_one()).count();
    let mut rest: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
    rest.sort();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            if rest[i].is_one() {
                break;
            }
            let g = rest[i].gcd(&rest[j]);
            if g != rest[i] {
                let l = &rest[i] / &g * &rest[j];
                rest[i] = g;
                rest[j] = l;
            }
        }
    }
    rest.sort();
    let mut out = vec![<BigInt as One>::one(); units];
    out.extend(rest);
    out
}

struct SparseElim<S> {
    cols: Vec<Vec<(usize, S)>>,
    row_index: Vec<Vec<usize>>,
    row_alive: Vec<bool>,
    diag: Vec<BigInt>,
}

fn entry<S>(col: &[(usize, S)], r: usize) -> Option<&S> {
    col.binary_search_by_key(&r, |e| e.0).ok().map(|k| &col[k].1)
}

/// `dst += c * src` on sorted sparse vectors; reports rows that became nonzero.
fn sparse_axpy<S: Scalar>(
    dst: &[(usize, S)],
    c: &S,
    src: &[(usize, S)],
    new_rows: &mut Vec<usize>,
) -> Checked<Vec<(usize, S)>> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        if j == src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
            out.push(dst[i].clone());
            i += 1;
        } else if i == dst.len() || src[j].0 < dst[i].0 {
            let v = S::zero().add_mul(c, &src[j].1)?;
            if !v.is_zero() {
                new_rows.push(src[j].0);
                out.push((src[j].0, v));
            }
            j += 1;
        } else {
            let v = dst[i].1.add_mul(c, &src[j].1)?;
            if !v.is_zero() {
                out.push((dst[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

impl<S: Scalar> SparseElim<S> {
    fn load(rows: usize, columns: &[Vec<(usize, BigInt)>]) -> Checked<Self> {
        let mut cols = Vec::with_capacity(columns.len());
        let mut row_index = vec![Vec::new(); rows];
        for (c, col) in columns.iter().enumerate() {
            let mut v: Vec<(usize, S)> = Vec::with_capacity(col.len());
            for (r, x) in col {
                if !Zero::is_zero(x) {
                    v.push((*r, S::from_big(x).ok_or(Overflow)?));
                    row_index[*r].push(c);
                }
            }
            v.sort_by_key(|e| e.0);
            cols.push(v);
        }
        Ok(SparseElim {
            cols,
            row_index,
            row_alive: vec![true; rows],
            diag: Vec::new(),
        })
    }

    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let mut row_count = vec![0usize; self.row_alive.len()];
        for col in &self.cols {
            for (r, _) in col {
                row_count[*r] += 1;
            }
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in col {
                let cost = (row_count[*r] - 1) * (col.len() - 1);
                let better = match best {
                    None => true,
                    Some((br, bc, bcost)) => {
                        let b = entry(&self.cols[bc], br).expect("pivot entry present");
                        x.abs_lt(b) || (!b.abs_lt(x) && cost < bcost)
                    }
                };
                if better {
                    best = Some((*r, c, cost));
                    if x.is_unit() && cost == 0 {
                        return Some((*r, c));
                    }
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }

    fn run(mut self) -> Checked<Vec<BigInt>> {
        while let Some((r, c)) = self.choose_pivot() {
            let p = entry(&self.cols[c], r).expect("pivot").clone();
            // clear row r with column operations
            let mut row_clean = true;
            let others: Vec<usize> = std::mem::take(&mut self.row_index[r]);
            let mut kept = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for c2 in others {
                if c2 == c || !seen.insert(c2) {
                    continue;
                }
                let Some(x) = entry(&self.cols[c2], r).cloned() else { continue };
                let q = x.quo_round(&p)?.neg()?;
                let mut new_rows = Vec::new();
                let updated = sparse_axpy(&self.cols[c2], &q, &self.cols[c], &mut new_rows)?;
                self.cols[c2] = updated;
                for nr in new_rows {
                    if nr != r {
                        self.row_index[nr].push(c2);
                    }
                }
                if entry(&self.cols[c2], r).is_some() {
                    row_clean = false;
                    kept.push(c2);
                }
            }
            kept.push(c);
            self.row_index[r] = kept;
            if !row_clean {
                continue;
            }
            // row r now meets only column c: row operations touch column c alone
            let col = std::mem::take(&mut self.cols[c]);
            let mut rest = Vec::new();
            for (r2, x) in col {
                if r2 == r {
                    continue;
                }
                let q = x.quo_round(&p)?;
                let rem = x.add_mul(&q.neg()?, &p)?;
                if !rem.is_zero() {
                    rest.push((r2, rem));
                }
            }
            if rest.is_empty() {
                self.row_alive[r] = false;
                self.row_index[r].clear();
                self.diag.push(num_traits::Signed::abs(&p.to_big()));
            } else {
                rest.push((r, p));
                rest.sort_by_key(|e| e.0);
                self.cols[c] = rest;
            }
        }
        Ok(self.diag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(mat: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(mat);
        assert_eq!(&(&s.u * mat) * &s.v, s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(mat.rows()));
        assert!(s.d.is_diagonal());
        s
    }

    #[test]
    fn diag_two_three() {
        let s = check(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), big(&[1, 6]));
    }

    #[test]
    fn zero_matrix_is_fixed() {
        let s = check(&IntMatrix::zeros(2, 2));
        assert_eq!(s.rank, 0);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
        assert!(s.d.is_zero());
    }

    #[test]
    fn two_by_two_chain() {
        let s = check(&m(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), big(&[2, 4]));
    }

    #[test]
    fn empty_shapes() {
        let s = check(&IntMatrix::zeros(0, 3));
        assert_eq!((s.rank, s.v.rows()), (0, 3));
        let s = check(&IntMatrix::zeros(2, 0));
        assert_eq!(s.u, IntMatrix::identity(2));
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let huge = BigInt::from(i128::MAX) * BigInt::from(3);
        let mut a = IntMatrix::zeros(2, 2);
        a[(0, 0)] = huge.clone();
        a[(0, 1)] = BigInt::from(i128::MAX);
        a[(1, 1)] = BigInt::from(5);
        let s = check(&a);
        assert_eq!(s.rank, 2);
        assert_eq!(invariant_factors(&a), s.diagonal());
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[vec![4, 6, 0], vec![6, 9, 3], vec![0, 3, 12]]);
        assert_eq!(invariant_factors(&a), check(&a).diagonal());
    }

    #[test]
    fn chain_normalisation() {
        assert_eq!(diagonal_to_chain(big(&[6, 4, 1, 10])), big(&[1, 2, 2, 60]));
        assert_eq!(diagonal_to_chain(big(&[2, 3])), big(&[1, 6]));
    }
}
