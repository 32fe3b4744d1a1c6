#![allow(dead_code)]

use abelim::{Homomorphism, IntMatrix, Presentation};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

/// Cyclic moduli, `0` standing for `ℤ`.
pub fn moduli(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(prop_oneof![1 => Just(0u64), 4 => 1u64..=12], 0..=max_len)
}

pub fn finite_moduli(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=12, 0..=max_len)
}

pub fn cyclics(m: &[u64]) -> Presentation {
    Presentation::cyclics(m.iter().map(|&d| BigInt::from(d)))
}

/// Entry `(j, i)` scaled so that the generator of `ℤ/e` lands in the
/// subgroup of `ℤ/d` it may map to.
fn admissible(d: u64, e: u64, k: i64) -> i64 {
    match (d, e) {
        (0, 0) => k,
        (0, _) => 0,
        _ => k * (d / d.gcd(&e)) as i64,
    }
}

/// A homomorphism between cyclic decompositions from raw coefficients.
pub fn hom_from(src: &[u64], tgt: &[u64], coeffs: &[i64]) -> Homomorphism {
    let rows: Vec<Vec<i64>> = tgt
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            src.iter()
                .enumerate()
                .map(|(i, &e)| admissible(d, e, coeffs[(j * src.len() + i) % coeffs.len().max(1)]))
                .collect()
        })
        .collect();
    let m = if rows.is_empty() || src.is_empty() {
        IntMatrix::zeros(tgt.len(), src.len())
    } else {
        IntMatrix::from_rows(&rows).unwrap()
    };
    Homomorphism::new(cyclics(src), cyclics(tgt), m).unwrap()
}

pub fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..=16)
}

/// `(source moduli, target moduli, coefficients)`.
pub fn hom_parts() -> impl Strategy<Value = (Vec<u64>, Vec<u64>, Vec<i64>)> {
    (moduli(3), moduli(3), coeffs())
}

/// A surjection `tgt ⊕ extra → tgt`: the identity on `tgt`, arbitrary on `extra`.
pub fn surjection(tgt: &[u64], extra: &[u64], coeffs: &[i64]) -> Homomorphism {
    let src: Vec<u64> = tgt.iter().chain(extra).copied().collect();
    let tail = hom_from(extra, tgt, coeffs);
    let mut m = IntMatrix::zeros(tgt.len(), src.len());
    for j in 0..tgt.len() {
        m[(j, j)] = BigInt::from(1);
        for i in 0..extra.len() {
            m[(j, tgt.len() + i)] = tail.matrix()[(j, i)].clone();
        }
    }
    Homomorphism::new(cyclics(&src), cyclics(tgt), m).unwrap()
}

/// The same group as `cyclics(m)` behind a change of basis `P` and with
/// redundant relations appended.
pub fn scrambled(m: &[u64], basis: &IntMatrix, extra: &[i64]) -> Presentation {
    let a = cyclics(m);
    let r = basis.checked_mul(a.relations()).unwrap();
    let mut cols: Vec<Vec<BigInt>> = r.columns().collect();
    if !cols.is_empty() {
        for (k, &c) in extra.iter().enumerate() {
            let j = k % cols.len();
            let mut col = cols[j].clone();
            for x in col.iter_mut() {
                *x *= c;
            }
            let other = &cols[(j + 1) % cols.len()];
            for (x, y) in col.iter_mut().zip(other) {
                *x += y;
            }
            cols.push(col);
        }
    }
    Presentation::new(m.len(), IntMatrix::from_columns(m.len(), &cols)).unwrap()
}

/// A unimodular `n × n` matrix from elementary row operations.
pub fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    if n < 2 {
        return p;
    }
    for &(a, b, c) in ops {
        let (a, b) = (a % n, b % n);
        if a == b {
            continue;
        }
        for col in 0..n {
            let v = p[(b, col)].clone() * c;
            p[(a, col)] += v;
        }
    }
    p
}

pub fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..8)
}
