//! Brute-force group homology of small finite abelian groups from the
//! normalized bar complex.
//!
//! This is deliberately independent of the functor code: it only needs an
//! addition table, and it is used as ground truth for it.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{CanonicalForm, Presentation};
use crate::snf::{sparse_invariant_factors, sparse_rank};

/// Default cap on the number of bar generators in the top degree.
pub const DEFAULT_BUDGET: u128 = 200_000;

/// A finite abelian group given by its full addition table.
#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    labels: Vec<String>,
    add: Vec<Vec<usize>>,
    zero: usize,
}

impl FiniteGroupTable {
    /// Checks associativity, commutativity, the identity and inverses.
    pub fn new(labels: Vec<String>, add: Vec<Vec<usize>>, zero: usize) -> Result<Self> {
        let n = labels.len();
        let bad = |what: &str| Err(Error::NotWellDefined(format!("addition table: {what}")));
        if n == 0 || zero >= n || add.len() != n || add.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("shape");
        }
        for a in 0..n {
            if add[a][zero] != a {
                return bad("identity");
            }
            if !(0..n).any(|b| add[a][b] == zero) {
                return bad("inverses");
            }
            for b in 0..n {
                if add[a][b] != add[b][a] {
                    return bad("commutativity");
                }
                for c in 0..n {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return bad("associativity");
                    }
                }
            }
        }
        Ok(FiniteGroupTable { labels, add, zero })
    }

    /// `ℤ/m₁ × … × ℤ/m_k`, elements listed in mixed radix order.
    pub fn cyclic_product(moduli: &[u64]) -> Result<Self> {
        if moduli.iter().any(|&m| m == 0) {
            return Err(Error::NotWellDefined("cyclic factor of order 0".into()));
        }
        let order: usize = moduli.iter().map(|&m| m as usize).product();
        let decode = |mut x: usize| -> Vec<usize> {
            moduli
                .iter()
                .rev()
                .map(|&m| {
                    let d = x % m as usize;
                    x /= m as usize;
                    d
                })
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect()
        };
        let encode = |v: &[usize]| v.iter().zip(moduli).fold(0usize, |acc, (&d, &m)| acc * m as usize + d);
        let elems: Vec<Vec<usize>> = (0..order).map(decode).collect();
        let add = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| {
                        let s: Vec<usize> = a
                            .iter()
                            .zip(b)
                            .zip(moduli)
                            .map(|((x, y), &m)| (x + y) % m as usize)
                            .collect();
                        encode(&s)
                    })
                    .collect()
            })
            .collect();
        let labels = elems
            .iter()
            .map(|e| format!("({})", e.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        Self::new(labels, add, 0)
    }

    /// Addition table of a finite presented group, via its invariant factors.
    pub fn from_presentation(a: &Presentation) -> Result<Self> {
        let cf = a.canonical_form();
        if !cf.is_finite() {
            return Err(Error::NotWellDefined("the bar oracle needs a finite group".into()));
        }
        let moduli: Option<Vec<u64>> = cf.invariant_factors.iter().map(|d| u64::try_from(d).ok()).collect();
        Self::cyclic_product(&moduli.ok_or_else(|| Error::NotWellDefined("group too large".into()))?)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    fn nonzero(&self) -> Vec<usize> {
        (0..self.order()).filter(|&x| x != self.zero).collect()
    }
}

/// The normalized bar complex `C_k = ℤ[(A∖0)^k]` with coefficients in `ℤ`.
pub struct BarComplex<'a> {
    group: &'a FiniteGroupTable,
    nonzero: Vec<usize>,
    position: Vec<usize>,
}

type SparseColumn = Vec<(usize, BigInt)>;

impl<'a> BarComplex<'a> {
    pub fn new(group: &'a FiniteGroupTable) -> Self {
        let nonzero = group.nonzero();
        let mut position = vec![usize::MAX; group.order()];
        for (i, &x) in nonzero.iter().enumerate() {
            position[x] = i;
        }
        BarComplex {
            group,
            nonzero,
            position,
        }
    }

    /// Number of basis elements in degree `k`.
    pub fn rank(&self, k: u32) -> u128 {
        (self.nonzero.len() as u128).pow(k)
    }

    fn decode(&self, mut idx: usize, k: u32) -> Vec<usize> {
        let q = self.nonzero.len();
        let mut out = vec![0; k as usize];
        for slot in out.iter_mut().rev() {
            *slot = self.nonzero[idx % q];
            idx /= q;
        }
        out
    }

    /// Index of a tuple, or `None` when an entry is zero (degenerate).
    fn encode(&self, tuple: &[usize]) -> Option<usize> {
        let q = self.nonzero.len();
        tuple.iter().try_fold(0usize, |acc, &g| {
            (g != self.group.zero).then(|| acc * q + self.position[g])
        })
    }

    /// Column of `d_k` at basis element `idx`.
    fn boundary_column(&self, idx: usize, k: u32) -> SparseColumn {
        let g = self.decode(idx, k);
        let k = k as usize;
        let mut terms: Vec<(usize, i64)> = Vec::with_capacity(k + 1);
        let mut push = |t: &[usize], s: i64| {
            if let Some(i) = self.encode(t) {
                terms.push((i, s));
            }
        };
        push(&g[1..], 1);
        for i in 0..k.saturating_sub(1) {
            let mut t = Vec::with_capacity(k - 1);
            t.extend_from_slice(&g[..i]);
            t.push(self.group.add(g[i], g[i + 1]));
            t.extend_from_slice(&g[i + 2..]);
            push(&t, if (i + 1) % 2 == 0 { 1 } else { -1 });
        }
        push(&g[..k - 1], if k % 2 == 0 { 1 } else { -1 });
        terms.sort_unstable_by_key(|t| t.0);
        let mut col: SparseColumn = Vec::with_capacity(terms.len());
        for (i, s) in terms {
            match col.last_mut() {
                Some((j, v)) if *j == i => *v += s,
                _ => col.push((i, BigInt::from(s))),
            }
        }
        col.retain(|(_, v)| v != &BigInt::ZERO);
        col
    }

    /// `d_k : C_k → C_{k−1}` as sparse columns.
    pub fn differential(&self, k: u32) -> Vec<SparseColumn> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let n = self.rank(k) as usize;
        (0..n).into_par_iter().map(|idx| self.boundary_column(idx, k)).collect()
    }

    /// `C_k(f)` for a homomorphism given as an element map.
    pub fn chain_map(&self, target: &BarComplex<'_>, f: &[usize], k: u32) -> Vec<SparseColumn> {
        let n = self.rank(k) as usize;
        (0..n)
            .into_par_iter()
            .map(|idx| {
                let g = self.decode(idx, k);
                let image: Vec<usize> = g.iter().map(|&x| f[x]).collect();
                target
                    .encode(&image)
                    .map(|i| vec![(i, BigInt::one())])
                    .unwrap_or_default()
            })
            .collect()
    }
}

fn compose_is_zero(first: &[SparseColumn], second: &[SparseColumn]) -> bool {
    first.par_iter().all(|col| {
        let mut acc: std::collections::BTreeMap<usize, BigInt> = Default::default();
        for (mid, v) in col {
            for (row, w) in &second[*mid] {
                *acc.entry(*row).or_default() += v * w;
            }
        }
        acc.values().all(|x| x == &BigInt::ZERO)
    })
}

/// `H_n(A; ℤ)` from the normalized bar complex.
///
/// Fails with [`Error::BudgetExceeded`] when `(|A| − 1)^(n+1)` exceeds
/// `budget`.
pub fn bar_homology(a: &FiniteGroupTable, n: u32, budget: u128) -> Result<CanonicalForm> {
    let bar = BarComplex::new(a);
    let generators = bar.rank(n + 1);
    if generators > budget {
        return Err(Error::BudgetExceeded { generators, budget });
    }
    let d_n = bar.differential(n);
    let d_next = bar.differential(n + 1);
    assert!(compose_is_zero(&d_next, &d_n), "bar differential does not square to zero");
    let rows_n = if n == 0 { 0 } else { bar.rank(n - 1) as usize };
    let rank_n = sparse_rank(rows_n, &d_n);
    let factors = sparse_invariant_factors(bar.rank(n) as usize, &d_next);
    let free = bar.rank(n) as usize - rank_n - factors.len();
    Ok(CanonicalForm::from_cyclics(free, factors))
}
