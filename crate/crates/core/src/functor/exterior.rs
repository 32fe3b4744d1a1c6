//! Exterior powers `Λⁿ(A)` on strictly increasing generator tuples.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::group::Presentation;
use crate::hom::Homomorphism;
use crate::matrix::IntMatrix;

/// Strictly increasing `n`-tuples from `0..l`, in lexicographic order.
pub fn increasing_tuples(l: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, l: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in start..l {
            if l - a < n - cur.len() {
                break;
            }
            cur.push(a);
            rec(a + 1, l, n, cur, out);
            cur.pop();
        }
    }
    rec(0, l, n, &mut cur, &mut out);
    out
}

/// `Λⁿ(ℤ^l / R) = Λⁿ(ℤ^l) / (R ∧ Λⁿ⁻¹(ℤ^l))`.
pub fn lambda(n: usize, a: &Presentation) -> Presentation {
    let l = a.gens();
    if n == 0 {
        return Presentation::free(1);
    }
    let basis = increasing_tuples(l, n);
    let index: HashMap<&[usize], usize> = basis.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let rel = a.relations();
    let mut seen = BTreeSet::new();
    for c in 0..rel.cols() {
        let r: Vec<(usize, &BigInt)> = (0..l).filter(|&i| !rel[(i, c)].is_zero()).map(|i| (i, &rel[(i, c)])).collect();
        for t in increasing_tuples(l, n - 1) {
            let mut col: Vec<(usize, BigInt)> = Vec::new();
            for &(a_idx, coeff) in &r {
                if t.contains(&a_idx) {
                    continue;
                }
                let below = t.iter().filter(|&&x| x < a_idx).count();
                let mut s = t.clone();
                s.insert(below, a_idx);
                let v = if below % 2 == 0 { coeff.clone() } else { -coeff };
                col.push((index[s.as_slice()], v));
            }
            if col.is_empty() {
                continue;
            }
            col.sort_by_key(|e| e.0);
            if col[0].1.is_negative() {
                for e in &mut col {
                    e.1 = -&e.1;
                }
            }
            seen.insert(col);
        }
    }
    let cols: Vec<Vec<BigInt>> = seen
        .into_iter()
        .map(|col| {
            let mut v = vec![BigInt::zero(); basis.len()];
            for (i, x) in col {
                v[i] = x;
            }
            v
        })
        .collect();
    Presentation::new(basis.len(), IntMatrix::from_columns(basis.len(), &cols)).expect("row count matches")
}

/// Matrix of `n × n` minors, rows and columns indexed by increasing tuples.
pub fn compound_matrix(m: &IntMatrix, n: usize) -> IntMatrix {
    let rows = increasing_tuples(m.rows(), n);
    let cols = increasing_tuples(m.cols(), n);
    let mut out = IntMatrix::zeros(rows.len(), cols.len());
    for (j, t) in cols.iter().enumerate() {
        if !t.is_empty() && t.iter().all(|&c| (0..m.rows()).all(|r| m[(r, c)].is_zero())) {
            continue;
        }
        for (i, s) in rows.iter().enumerate() {
            out[(i, j)] = minor(m, s, t);
        }
    }
    out
}

fn minor(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    match rows.len() {
        0 => BigInt::from(1),
        1 => m[(rows[0], cols[0])].clone(),
        2 => &m[(rows[0], cols[0])] * &m[(rows[1], cols[1])] - &m[(rows[0], cols[1])] * &m[(rows[1], cols[0])],
        _ => m
            .select_rows(rows.iter().copied())
            .select_cols(cols.iter().copied())
            .determinant()
            .expect("square minor"),
    }
}

/// `Λⁿ(f)`.
pub fn lambda_induced(n: usize, f: &Homomorphism) -> Homomorphism {
    let s = lambda(n, f.source());
    let t = lambda(n, f.target());
    lambda_induced_between(n, f, &s, &t)
}

pub fn lambda_induced_between(n: usize, f: &Homomorphism, source: &Presentation, target: &Presentation) -> Homomorphism {
    Homomorphism::unchecked(source.clone(), target.clone(), compound_matrix(f.matrix(), n))
}

/// `H₂(A) ≅ Λ²(A)`.
pub fn h2_group(a: &Presentation) -> Presentation {
    lambda(2, a)
}
