//! Test-only oracles: a naive multivariate polynomial ring over Q, the
//! fundamental theorem of symmetric polynomials, and Schur polynomials from
//! semistandard tableaux.

#![allow(dead_code)]

use std::collections::BTreeMap;

use chowkit::graded::{rat, ClassAlgebra};
use chowkit::{GradedElement, Partition, Rational, Space};
use num_traits::Zero;

/// Polynomial in `vars` variables; keys are exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub vars: usize,
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(vars: usize) -> Self {
        Poly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, rat(1))
    }

    pub fn var(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(e, rat(1));
        p
    }

    /// `Σ a_i x_i`.
    pub fn linear(vars: usize, coeffs: &[i64]) -> Self {
        let mut p = Self::zero(vars);
        for (i, &a) in coeffs.iter().enumerate() {
            p = p.plus(&Self::var(vars, i).scaled(&rat(a)));
        }
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        let v = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree_part(&self, d: u32) -> Poly {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// Weighted degree part, variable `i` having weight `i + 1`.
    pub fn weighted_part(&self, d: u32) -> Poly {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            let w: u32 = e.iter().enumerate().map(|(i, &x)| (i as u32 + 1) * x).sum();
            if w == d {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Self::one(self.vars), |acc, _| acc.times(self))
    }

    /// Drops terms of total degree above `d`.
    pub fn truncate(&self, d: u32) -> Poly {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() <= d {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }
}

impl ClassAlgebra for Poly {
    fn zero_like(&self) -> Self {
        Self::zero(self.vars)
    }

    fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&rat(-1)))
    }

    fn times(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }
}

/// Elementary symmetric polynomial `e_j(x_1..x_k)`.
pub fn elementary(k: usize, j: usize) -> Poly {
    let mut out = Poly::zero(k);
    for mask in 0u32..(1 << k) {
        if mask.count_ones() as usize == j {
            let e = (0..k).map(|i| (mask >> i) & 1).collect();
            out.add_term(e, rat(1));
        }
    }
    out
}

/// Rewrites a symmetric polynomial in `k` roots as a polynomial in
/// `e_1..e_k` (variable `i` of the result is `e_{i+1}`).
pub fn symmetric_to_elementary(p: &Poly) -> Poly {
    let k = p.vars;
    let es: Vec<Poly> = (1..=k).map(|j| elementary(k, j)).collect();
    let mut rest = p.clone();
    let mut out = Poly::zero(k);
    while let Some((lead, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        assert!(lead.windows(2).all(|w| w[0] >= w[1]), "not symmetric: leading exponent {lead:?}");
        let mut exps = vec![0u32; k];
        let mut prod = Poly::one(k);
        for j in 0..k {
            let next = if j + 1 < k { lead[j + 1] } else { 0 };
            exps[j] = lead[j] - next;
            prod = prod.times(&es[j].pow(exps[j]));
        }
        out.add_term(exps, c.clone());
        rest = rest.minus(&prod.scaled(&c));
    }
    out
}

/// Evaluates a polynomial in `c_1..c_k` on a space, given the classes.
pub fn evaluate(p: &Poly, space: &Space, classes: &[GradedElement]) -> GradedElement {
    let mut out = GradedElement::zero(space);
    for (e, c) in &p.terms {
        let mut term = GradedElement::constant(space, c);
        for (i, &x) in e.iter().enumerate() {
            term = &term * &classes[i].pow(x);
        }
        out = &out + &term;
    }
    out
}

/// Total Chern class `Π (1 + ℓ)` over the given linear forms in the roots.
pub fn chern_of_roots(vars: usize, roots: &[Poly]) -> Poly {
    roots.iter().fold(Poly::one(vars), |acc, l| acc.times(&Poly::one(vars).plus(l)))
}

/// Roots of `Sym^d` of a bundle with roots `x_1..x_k`.
pub fn sym_roots(k: usize, d: u32) -> Vec<Poly> {
    fn rec(k: usize, start: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur[i] += 1;
            rec(k, i, left - 1, cur, out);
            cur[i] -= 1;
        }
    }
    let mut exps = Vec::new();
    rec(k, 0, d, &mut vec![0; k], &mut exps);
    exps.into_iter()
        .map(|e| Poly::linear(k, &e.iter().map(|&x| x as i64).collect::<Vec<_>>()))
        .collect()
}

/// Schur polynomial `s_λ(x_1..x_k)` as a sum over semistandard tableaux.
pub fn schur(lambda: &[u32], k: usize) -> Poly {
    let shape: Vec<usize> = lambda.iter().map(|&x| x as usize).filter(|&x| x > 0).collect();
    let cells: Vec<(usize, usize)> =
        shape.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c))).collect();
    let mut out = Poly::zero(k);
    let mut grid: Vec<Vec<u32>> = shape.iter().map(|&l| vec![0; l]).collect();
    fn fill(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<u32>>,
        k: usize,
        out: &mut Poly,
    ) {
        if idx == cells.len() {
            let mut e = vec![0u32; k];
            for row in grid.iter() {
                for &v in row {
                    e[v as usize - 1] += 1;
                }
            }
            out.add_term(e, rat(1));
            return;
        }
        let (r, c) = cells[idx];
        let lo_row = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_col = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for v in lo_row.max(lo_col)..=k as u32 {
            grid[r][c] = v;
            fill(idx + 1, cells, grid, k, out);
        }
        grid[r][c] = 0;
    }
    fill(0, &cells, &mut grid, k, &mut out);
    out
}

/// Expands a symmetric polynomial in the Schur basis (at most `k` rows).
pub fn schur_expand(p: &Poly) -> BTreeMap<Vec<u32>, Rational> {
    let k = p.vars;
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    while let Some((lead, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        rest = rest.minus(&schur(&lead, k).scaled(&c));
        out.insert(lead, c);
    }
    out
}

pub fn part(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}
