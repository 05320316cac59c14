//! Partitions in a box and the Schubert calculus built on them.
//!
//! Schubert classes of `Gr(k, n)` are indexed by partitions fitting a
//! `k × (n − k)` box. Products are computed by expanding one factor with the
//! Jacobi–Trudi determinant into special classes `σ_m` and applying the Pieri
//! rule repeatedly; box truncation happens at every step.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{ChowError, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition, stripping trailing zeros. Fails if the parts are
    /// not weakly decreasing.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ChowError::InvalidPartition(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The single-row partition `(m)`.
    pub fn row(m: u32) -> Self {
        if m == 0 {
            Self::empty()
        } else {
            Partition(vec![m])
        }
    }

    /// The single-column partition `(1^i)`.
    pub fn column(i: usize) -> Self {
        Partition(vec![1; i])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        let parts = (0..first)
            .map(|j| self.0.iter().filter(|&&p| p > j).count() as u32)
            .collect::<Vec<_>>();
        Partition(parts)
    }
}

impl Ord for Partition {
    /// Weight first, then lexicographically descending: `(2) < (1,1)`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A `rows × cols` rectangle; `BoxShape::new(k, n - k)` presents `Gr(k, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxShape {
    rows: usize,
    cols: u32,
}

impl BoxShape {
    pub fn new(rows: usize, cols: u32) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(ChowError::InvalidBox { rows, cols });
        }
        Ok(BoxShape { rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> u32 {
        self.cols
    }

    /// Number of cells, i.e. the dimension of the Grassmannian.
    pub fn area(&self) -> u32 {
        self.rows as u32 * self.cols
    }

    /// The full box, indexing the point class.
    pub fn full(&self) -> Partition {
        Partition(vec![self.cols; self.rows])
    }

    /// All partitions fitting the box, in canonical order.
    pub fn partitions(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.rows);
        fill_box(self.rows, self.cols, &mut cur, &mut out);
        out.sort();
        out
    }

    /// Partitions of weight `d` fitting the box, in canonical order.
    pub fn partitions_of_weight(&self, d: u32) -> Vec<Partition> {
        self.partitions()
            .into_iter()
            .filter(|p| p.weight() == d)
            .collect()
    }
}

fn fill_box(rows_left: usize, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    out.push(Partition(cur.clone()));
    if rows_left == 0 {
        return;
    }
    for p in 1..=max_part {
        cur.push(p);
        fill_box(rows_left - 1, p, cur, out);
        cur.pop();
    }
}

pub fn fits_in_box(lambda: &Partition, shape: &BoxShape) -> bool {
    lambda.len() <= shape.rows && lambda.part(0) <= shape.cols
}

/// The box complement `λᶜ_i = cols − λ_{rows+1−i}`.
pub fn complement_in_box(lambda: &Partition, shape: &BoxShape) -> Result<Partition> {
    if !fits_in_box(lambda, shape) {
        return Err(ChowError::NotInBox {
            partition: lambda.clone(),
            rows: shape.rows,
            cols: shape.cols,
        });
    }
    let parts: Vec<u32> = (0..shape.rows)
        .map(|i| shape.cols - lambda.part(shape.rows - 1 - i))
        .collect();
    Partition::new(parts)
}

/// All `μ ⊇ λ` fitting the box with `μ/λ` a horizontal strip of size `m`.
pub fn pieri_multiply(lambda: &Partition, m: u32, shape: &BoxShape) -> Vec<Partition> {
    let mut out = Vec::new();
    if !fits_in_box(lambda, shape) {
        return out;
    }
    let rows = shape.rows.min(lambda.len() + 1);
    let mut cur = Vec::with_capacity(rows);
    pieri_rows(lambda, shape, rows, 0, m, &mut cur, &mut out);
    out.sort();
    out
}

fn pieri_rows(
    lambda: &Partition,
    shape: &BoxShape,
    rows: usize,
    i: usize,
    remaining: u32,
    cur: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if i == rows {
        if remaining == 0 {
            let mut parts = cur.clone();
            while parts.last() == Some(&0) {
                parts.pop();
            }
            out.push(Partition(parts));
        }
        return;
    }
    let lo = lambda.part(i);
    // Horizontal strip: μ_i ≤ λ_{i−1}; the first row is bounded by the box.
    let hi = if i == 0 { shape.cols } else { lambda.part(i - 1).min(shape.cols) };
    if lo > hi {
        return;
    }
    let hi = hi.min(lo + remaining);
    for v in lo..=hi {
        cur.push(v);
        pieri_rows(lambda, shape, rows, i + 1, remaining - (v - lo), cur, out);
        cur.pop();
    }
}

/// A signed polynomial in the special classes `σ_1, σ_2, …`.
///
/// Keys are multisets of special indices, sorted descending, with `σ_0 = 1`
/// dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpecialPolynomial {
    terms: BTreeMap<Vec<u32>, i64>,
}

impl SpecialPolynomial {
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, factors: &[u32]) -> i64 {
        let mut key = factors.to_vec();
        key.retain(|&m| m != 0);
        key.sort_unstable_by(|a, b| b.cmp(a));
        self.terms.get(&key).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for SpecialPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (key, &c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let abs = c.unsigned_abs();
            if abs != 1 || key.is_empty() {
                write!(f, "{abs}")?;
            }
            let body = key.iter().map(|m| format!("s{m}")).collect::<Vec<_>>().join("*");
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

/// Jacobi–Trudi expansion `σ_λ = det(σ_{λ_i + j − i})`.
pub fn giambelli_expand(lambda: &Partition) -> SpecialPolynomial {
    let k = lambda.len();
    let mut terms: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    let mut perm: Vec<usize> = (0..k).collect();
    permutations(&mut perm, 0, 1, &mut |p, sign| {
        let mut key = Vec::with_capacity(k);
        for (i, &j) in p.iter().enumerate() {
            let idx = lambda.part(i) as i64 + j as i64 - i as i64;
            if idx < 0 {
                return;
            }
            if idx > 0 {
                key.push(idx as u32);
            }
        }
        key.sort_unstable_by(|a, b| b.cmp(a));
        *terms.entry(key).or_insert(0) += sign;
    });
    terms.retain(|_, v| *v != 0);
    SpecialPolynomial { terms }
}

fn permutations(p: &mut [usize], start: usize, sign: i64, visit: &mut impl FnMut(&[usize], i64)) {
    if start == p.len() {
        visit(p, sign);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        let s = if i == start { sign } else { -sign };
        permutations(p, start + 1, s, visit);
        p.swap(start, i);
    }
}

/// Structure constants `c^ν_{λμ}` of `σ_λ · σ_μ` in the box.
pub fn schubert_product(
    lambda: &Partition,
    mu: &Partition,
    shape: &BoxShape,
) -> Result<BTreeMap<Partition, u64>> {
    for p in [lambda, mu] {
        if !fits_in_box(p, shape) {
            return Err(ChowError::NotInBox {
                partition: p.clone(),
                rows: shape.rows,
                cols: shape.cols,
            });
        }
    }
    // Expand the factor with the smaller determinant.
    let (base, expanded) = if lambda.len() < mu.len() { (mu, lambda) } else { (lambda, mu) };
    let mut total: HashMap<Partition, i64> = HashMap::new();
    if base.weight() + expanded.weight() > shape.area() {
        return Ok(BTreeMap::new());
    }
    for (factors, coeff) in giambelli_expand(expanded).terms() {
        let mut cur: HashMap<Partition, i64> = HashMap::from([(base.clone(), coeff)]);
        for &m in factors {
            let mut next: HashMap<Partition, i64> = HashMap::new();
            for (p, c) in &cur {
                for q in pieri_multiply(p, m, shape) {
                    *next.entry(q).or_insert(0) += c;
                }
            }
            cur = next;
            if cur.is_empty() {
                break;
            }
        }
        for (p, c) in cur {
            *total.entry(p).or_insert(0) += c;
        }
    }
    let mut out = BTreeMap::new();
    for (p, c) in total {
        match c.cmp(&0) {
            Ordering::Equal => {}
            Ordering::Greater => {
                out.insert(p, c as u64);
            }
            Ordering::Less => {
                return Err(ChowError::Internal(format!(
                    "negative structure constant {c} at {p} for {lambda}·{mu}"
                )))
            }
        }
    }
    Ok(out)
}
