//! Polynomials in the Chern classes `c_1 … c_k` of the dual tautological
//! subbundle `E*` on `Gr(k, n)`, and the change of basis from Schubert
//! classes.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{ChowError, Result};
use crate::graded::Rational;
use crate::space::{GradedElement, Space};

/// Exponent vector: `exps[i]` is the power of `c_{i+1}`.
pub type Monomial = Vec<u32>;

fn weighted_degree(m: &[u32]) -> usize {
    m.iter().enumerate().map(|(i, &e)| (i + 1) * e as usize).sum()
}

/// Monomials in `c_1..c_k` of weighted degree `d`, in display order
/// (`c_1`-degree descending, then `c_2`, …).
pub fn monomials_of_degree(d: usize, k: usize) -> Vec<Monomial> {
    fn rec(d: usize, var: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == 0 {
            if d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = var;
        for e in 0..=d / w {
            cur[var - 1] = e as u32;
            rec(d - e * w, var - 1, cur, out);
        }
        cur[var - 1] = 0;
    }
    let mut out = Vec::new();
    if k == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u32; k];
    rec(d, k, &mut cur, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

pub fn monomial_string(m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("c{}", i + 1) } else { format!("c{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// A rational polynomial in `c_1(E*) … c_k(E*)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChernPolynomial {
    vars: usize,
    terms: BTreeMap<Reverse<Monomial>, Rational>,
}

impl ChernPolynomial {
    pub fn new(vars: usize) -> Self {
        ChernPolynomial { vars, terms: BTreeMap::new() }
    }

    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::new(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, mut m: Monomial, c: Rational) {
        m.resize(self.vars.max(m.len()), 0);
        self.vars = m.len();
        let key = Reverse(m);
        let v = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        let mut key = m.to_vec();
        key.resize(self.vars.max(key.len()), 0);
        self.terms.get(&Reverse(key)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in display order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().map(|(Reverse(m), c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial_strings(&self) -> Vec<String> {
        self.terms().map(|(m, _)| monomial_string(m)).collect()
    }

    pub fn coefficient_strings(&self) -> Vec<String> {
        self.terms().map(|(_, c)| c.to_string()).collect()
    }

    /// Reinterprets a polynomial written in `c_i(E)` as one in `c_i(E*)`,
    /// using `c_i(E) = (−1)^i c_i(E*)`.
    pub fn from_sub_convention(&self) -> ChernPolynomial {
        let mut out = Self::new(self.vars);
        for (m, c) in self.terms() {
            let sign = if weighted_degree(m) % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(m.clone(), sign);
        }
        out
    }

    /// Expands into the Schubert basis of `Gr(k, n)`, `c_i(E*) = σ_{(1^i)}`.
    pub fn evaluate(&self, space: &Space) -> Result<GradedElement> {
        let mut out = GradedElement::zero(space);
        for (m, c) in self.terms() {
            out = &out + &monomial_class(space, m)?.scale(c);
        }
        Ok(out)
    }
}

impl fmt::Display for ChernPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let body = monomial_string(m);
            if body == "1" {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{abs}{body}")?;
            }
        }
        Ok(())
    }
}

fn monomial_class(space: &Space, m: &[u32]) -> Result<GradedElement> {
    let mut out = GradedElement::one(space);
    for (i, &e) in m.iter().enumerate() {
        if e > 0 {
            out = &out * &space.dual_sub_chern(i + 1)?.pow(e);
        }
    }
    Ok(out)
}

/// Writes a homogeneous degree-`d` class on `Gr(k, n)` as a polynomial in
/// `c_i(E*)`. Requires `d ≤ n − k`, where the monomials of degree `d` form a
/// basis.
pub fn express_in_chern_monomials(space: &Space, x: &GradedElement, d: usize) -> Result<ChernPolynomial> {
    let (k, n) = space.grassmannian_params().ok_or_else(|| {
        ChowError::WrongSpaceKind(format!("{} is not a Grassmannian", space.name()))
    })?;
    if x.space() != space {
        return Err(ChowError::SpaceMismatch);
    }
    if !x.is_homogeneous_of(d) {
        return Err(ChowError::DegreeMismatch { expected: d, found: x.min_degree().unwrap_or(0) });
    }
    if d > n - k {
        return Err(ChowError::SingularConversion(d));
    }
    let monomials = monomials_of_degree(d, k);
    let range = space.degree_range(d);
    let size = range.len();
    if monomials.len() != size {
        return Err(ChowError::SingularConversion(d));
    }
    // Columns: Schubert expansions of the monomials; augmented with x.
    let mut mat = vec![vec![Rational::zero(); size + 1]; size];
    for (j, m) in monomials.iter().enumerate() {
        let class = monomial_class(space, m)?;
        for (idx, c) in class.indexed_terms() {
            mat[idx - range.start][j] = c;
        }
    }
    for (idx, c) in x.indexed_terms() {
        mat[idx - range.start][size] = c;
    }
    let sol = solve(mat, size).ok_or(ChowError::SingularConversion(d))?;
    let poly = ChernPolynomial::from_terms(k, monomials.into_iter().zip(sol));
    // Round trip.
    if poly.evaluate(space)? != *x {
        return Err(ChowError::Internal("Chern monomial conversion does not round-trip".into()));
    }
    Ok(poly)
}

/// Gauss–Jordan elimination on an augmented `size × (size + 1)` matrix.
fn solve(mut mat: Vec<Vec<Rational>>, size: usize) -> Option<Vec<Rational>> {
    for col in 0..size {
        let pivot = (col..size).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot);
        let inv = mat[col][col].recip();
        for v in mat[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = mat[col].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *v -= &factor * p;
                }
            }
        }
    }
    Some(mat.into_iter().map(|row| row[size].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::rat;
    use crate::partition::Partition;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn monomial_order() {
        let m: Vec<String> = monomials_of_degree(3, 3).iter().map(|m| monomial_string(m)).collect();
        assert_eq!(m, vec!["c1^3", "c1*c2", "c3"]);
        let m: Vec<String> = monomials_of_degree(4, 4).iter().map(|m| monomial_string(m)).collect();
        assert_eq!(m, vec!["c1^4", "c1^2*c2", "c1*c3", "c2^2", "c4"]);
        assert_eq!(monomials_of_degree(0, 2), vec![vec![0, 0]]);
    }

    #[test]
    fn conversions_on_gr_3_10() {
        let g = Space::grassmannian(3, 10).unwrap();
        let c1 = express_in_chern_monomials(&g, &g.sigma(&p(&[1])).unwrap(), 1).unwrap();
        assert_eq!(c1.to_string(), "c1");
        let c3 = express_in_chern_monomials(&g, &g.sigma(&p(&[1, 1, 1])).unwrap(), 3).unwrap();
        assert_eq!(c3.to_string(), "c3");
        // σ_3 = h_3 in the E* variables: c1^3 − 2c1c2 + c3.
        let s3 = express_in_chern_monomials(&g, &g.sigma(&p(&[3])).unwrap(), 3).unwrap();
        assert_eq!(s3.coefficient(&[3, 0, 0]), rat(1));
        assert_eq!(s3.coefficient(&[1, 1, 0]), rat(-2));
        assert_eq!(s3.coefficient(&[0, 0, 1]), rat(1));
        assert_eq!(s3.to_string(), "c1^3 - 2c1*c2 + c3");
    }

    #[test]
    fn conversion_errors() {
        let g = Space::grassmannian(2, 4).unwrap();
        let x = g.sigma(&p(&[2, 1])).unwrap();
        assert!(matches!(express_in_chern_monomials(&g, &x, 3), Err(ChowError::SingularConversion(3))));
        assert!(express_in_chern_monomials(&g, &x, 2).is_err());
        let p2 = Space::projective(2);
        assert!(express_in_chern_monomials(&p2, &GradedElement::one(&p2), 0).is_err());
    }

    #[test]
    fn conversion_round_trips() {
        let g = Space::grassmannian(3, 8).unwrap();
        for d in 0..=5 {
            for idx in g.degree_range(d) {
                let x = GradedElement::from_label(&g, &g.label(idx), &rat(1)).unwrap();
                let poly = express_in_chern_monomials(&g, &x, d).unwrap();
                assert_eq!(poly.evaluate(&g).unwrap(), x);
            }
        }
    }

    #[test]
    fn sign_convention_normalisation() {
        let sub = ChernPolynomial::from_terms(
            3,
            [(vec![3, 0, 0], rat(20)), (vec![1, 1, 0], rat(-110)), (vec![0, 0, 1], rat(-49))],
        );
        let dual = sub.from_sub_convention();
        assert_eq!(dual.to_string(), "-20c1^3 + 110c1*c2 + 49c3");
        assert_eq!(dual.from_sub_convention(), sub);
    }
}
