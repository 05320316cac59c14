//! Enumerative checks for the self-map of the Fano variety `X = F_r(Y)` of
//! `r`-planes in a cubic hypersurface `Y ⊂ P^n`, `n + 1 = C(r+3, 2)`.
//!
//! Only characteristic-class shadows are computed; `X`, `Y` and the map
//! itself are never modelled.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::chern_poly::{express_in_chern_monomials, ChernPolynomial};
use crate::error::{ChowError, Result};
use crate::graded::{rat, Rational, TruncatedSeries};
use crate::space::{GradedElement, Space};
use crate::sheaf::Sheaf;

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `h^0(P^a, O(d)) = C(a + d, d)`.
pub fn sections_on_projective(a: u64, d: u64) -> u64 {
    binomial(a + d, d)
}

/// `r`, `n = C(r+3, 2) − 1` and `N = dim X = (r+1)(n−r) − C(r+3, 3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VoisinParams {
    pub r: u64,
    pub n: u64,
    pub dim_x: u64,
}

impl VoisinParams {
    pub fn new(r: u64) -> Self {
        let n = binomial(r + 3, 2) - 1;
        let dim_x = (r + 1) * (n - r) - binomial(r + 3, 3);
        VoisinParams { r, n, dim_x }
    }

    /// `m = n − r − 1`, dimension of the projective space of `(r+1)`-planes
    /// through a fixed `r`-plane.
    pub fn residual_dim(&self) -> u64 {
        self.n - self.r - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimsReport {
    pub params: VoisinParams,
    /// `δ_k = 2 h^0(P^r, O(3)) − h^0(P^{k−1}, O(3))` for `k = 1..=r+1`.
    pub deltas: Vec<u64>,
    /// `dim I = N + h^0(P^n, O(3)) − r − 2`.
    pub dim_incidence: u64,
    /// Relative dimension `n − (r+1)(r+2)/2` of the stratum map.
    pub relative_dim: u64,
    pub fix_codim: u64,
}

pub fn dims_report(r: u64) -> Result<DimsReport> {
    let params = VoisinParams::new(r);
    let cubics_on_plane = sections_on_projective(r, 3);
    let deltas = (1..=r + 1)
        .map(|k| 2 * cubics_on_plane - sections_on_projective(k - 1, 3))
        .collect();
    let dim_incidence = params.dim_x + sections_on_projective(params.n, 3) - r - 2;
    let relative_dim = params.n - (r + 1) * (r + 2) / 2;
    if relative_dim != r + 1 {
        return Err(ChowError::Audit(format!(
            "relative dimension {relative_dim} differs from r + 1 = {}",
            r + 1
        )));
    }
    Ok(DimsReport { params, deltas, dim_incidence, relative_dim, fix_codim: r + 1 })
}

/// Degree of the self-map computed two ways, plus a third through the
/// projective bundle `P(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoisinDegree {
    pub r: u64,
    /// Closed series quotient.
    pub series_route: BigInt,
    /// `2^{r+1} Σ 2^i s_i(F) c_{m−i}(Sym² F)` on `P^m`.
    pub segre_route: BigInt,
    /// `p_*(c(S^{⊗2})^{-1} · p*c(Sym² F))` on `P(F)`, when computed.
    pub bundle_route: Option<BigInt>,
    pub degree: BigInt,
}

fn divide_exact(x: &Rational, d: &BigInt, what: &str) -> Result<BigInt> {
    let q = x / Rational::from_integer(d.clone());
    if !q.is_integer() {
        return Err(ChowError::Audit(format!("{what}: {x} is not divisible by {d}")));
    }
    Ok(q.to_integer())
}

fn two_pow(e: u64) -> BigInt {
    BigInt::one() << e as usize
}

/// Degree-`m` coefficient of
/// `2^{r+1} (1+2h)^{(r+1)(r+2)/2} (1+4h)^{r+1} (1+6h) / ((1+2h)^{r+1} (1+6h))`,
/// divided by `deg f = 2^m`.
pub fn degree_series_route(r: u64) -> Result<BigInt> {
    let p = VoisinParams::new(r);
    let m = p.residual_dim() as usize;
    let lin = |a: i64| TruncatedSeries::linear(a, m);
    let num = lin(2)
        .pow(((r + 1) * (r + 2) / 2) as i64)?
        .mul(&lin(4).pow((r + 1) as i64)?)?
        .mul(&lin(6))?;
    let den = lin(2).pow((r + 1) as i64)?.mul(&lin(6))?;
    let quotient = num.mul(&den.pow(-1)?)?;
    let top = quotient.coefficient(m) * Rational::from_integer(two_pow(r + 1));
    divide_exact(&top, &two_pow(m as u64), "series route")
}

/// `F = O(1)^{r+1} ⊕ O(3)` on `P^m`.
fn pulled_back_bundle(space: &Space, r: u64) -> Result<Sheaf> {
    let mut f = Sheaf::twisting(space, 3)?;
    for _ in 0..=r {
        f = f.sum(&Sheaf::twisting(space, 1)?)?;
    }
    Ok(f)
}

pub fn degree_segre_route(r: u64) -> Result<BigInt> {
    let p = VoisinParams::new(r);
    let m = p.residual_dim() as usize;
    let base = Space::projective(m);
    let f = pulled_back_bundle(&base, r)?;
    let sym2 = f.sym(2)?;
    // Σ_i 2^i s_i(F) is s(F) with h ↦ 2h.
    let twisted_segre = f.segre_series().scale_by_degree(&rat(2));
    let product = (&twisted_segre * sym2.total_chern()).homogeneous_part(m);
    let top = base.integrate(&product)? * Rational::from_integer(two_pow(r + 1));
    divide_exact(&top, &two_pow(m as u64), "Segre route")
}

/// Degree-`n` part of `p_*(c(S^{⊗2})^{-1} · p* c(Sym² F))` on `P(F) → P^m`.
pub fn degree_bundle_route(r: u64) -> Result<BigInt> {
    let p = VoisinParams::new(r);
    let m = p.residual_dim() as usize;
    let base = Space::projective(m);
    let f = pulled_back_bundle(&base, r)?;
    let sym2 = f.sym(2)?;
    let bundle = f.projectivize()?;
    // Tautological line S ⊂ p*F has c_1(S) = −ζ; S^{⊗2} has c = 1 − 2ζ.
    let zeta = bundle.zeta_power(1)?;
    let s2 = Sheaf::line_bundle(&bundle, &zeta.scale(&rat(-2)))?;
    let integrand = &s2.segre_series() * sym2.pullback_to_bundle(&bundle)?.total_chern();
    let top = bundle.integrate(&integrand.homogeneous_part(bundle.dim()))?;
    divide_exact(&top, &two_pow(m as u64), "projective-bundle route")
}

/// Degree of the self-map; fails unless the routes agree.
pub fn voisin_degree(r: u64) -> Result<VoisinDegree> {
    let series_route = degree_series_route(r)?;
    let segre_route = degree_segre_route(r)?;
    if series_route != segre_route {
        return Err(ChowError::Audit(format!(
            "degree routes disagree at r = {r}: series {series_route}, Segre {segre_route}"
        )));
    }
    Ok(VoisinDegree { r, degree: series_route.clone(), series_route, segre_route, bundle_route: None })
}

/// [`voisin_degree`] with the projective-bundle route as a third check.
pub fn voisin_degree_all_routes(r: u64) -> Result<VoisinDegree> {
    let mut d = voisin_degree(r)?;
    let bundle = degree_bundle_route(r)?;
    if bundle != d.degree {
        return Err(ChowError::Audit(format!(
            "projective-bundle route gives {bundle}, expected {} at r = {r}",
            d.degree
        )));
    }
    d.bundle_route = Some(bundle);
    Ok(d)
}

/// `deg Ψ = λ²` for the eigenvalue `λ = (−2)^{r+1}` on the canonical form.
pub fn eigen_crosscheck(r: u64) -> Result<bool> {
    let lambda = BigInt::from(-2).pow((r + 1) as u32);
    Ok(voisin_degree(r)?.degree == &lambda * &lambda)
}

/// Rank audit of one Euler-class factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFactor {
    pub name: &'static str,
    pub expected_rank: usize,
}

#[derive(Clone, Debug)]
pub struct FixedLocus {
    pub params: VoisinParams,
    pub factors: Vec<EulerFactor>,
    /// Degree of the product of the Euler classes on the product space.
    pub integrand_degree: usize,
    /// Class of the fixed locus in `c_i(E*)` of `Gr(r+1, n+1)`.
    pub class: ChernPolynomial,
}

/// Class of the fixed locus in `CH^{r+1}`, as a polynomial in `c_i(E*)`.
///
/// Pushes
/// `e(E*⊗(V−F)) · e((F*−E*)⊗Sym²E*) · e((F*−E*)^{⊗2}⊗E*)`
/// from `Gr(r+1, n+1) × Gr(r+2, n+1)` to the first factor. The product is
/// taken modulo first-factor degrees above `r + 1`, which the pushforward
/// never sees.
pub fn fixed_locus_class(r: u64) -> Result<FixedLocus> {
    if !(1..=3).contains(&r) {
        return Err(ChowError::Audit(format!("fixed locus supported for r in 1..=3, got {r}")));
    }
    let params = VoisinParams::new(r);
    let r_us = r as usize;
    let v = (params.n + 1) as usize;
    let planes = Space::grassmannian(r_us + 1, v)?;
    let tangent = Space::grassmannian(r_us + 2, v)?;
    let prod = Space::product_capped(&planes, &tangent, r_us + 1)?;

    let e_sub = Sheaf::tautological_sub(&planes)?;
    let e_dual_base = e_sub.dual();
    let sym2_base = e_dual_base.sym(2)?;
    let e_dual = e_dual_base.pullback_first(&prod)?;
    let sym2 = sym2_base.pullback_first(&prod)?;
    let f = Sheaf::tautological_sub(&tangent)?.pullback_second(&prod)?;
    let f_dual = f.dual();
    let trivial = Sheaf::trivial(&prod, v);
    let relative = f_dual.difference(&e_dual)?;

    let first = e_dual.tensor(&trivial.difference(&f)?)?;
    let second = relative.tensor(&sym2)?;
    let third = relative.tensor(&relative)?.tensor(&e_dual)?;

    let factors = vec![
        EulerFactor { name: "E*(V-F)", expected_rank: (r_us + 1) * (v - (r_us + 2)) },
        EulerFactor { name: "(F*-E*)Sym2E*", expected_rank: (r_us + 1) * (r_us + 2) / 2 },
        EulerFactor { name: "(F*-E*)^2E*", expected_rank: r_us + 1 },
    ];
    let total_rank: usize = factors.iter().map(|f| f.expected_rank).sum();
    if total_rank != tangent.dim() + r_us + 1 {
        return Err(ChowError::Audit(format!(
            "Euler factor ranks sum to {total_rank}, expected dim Gr(r+2, n+1) + r + 1 = {}",
            tangent.dim() + r_us + 1
        )));
    }
    let e1 = first.euler_class(factors[0].expected_rank)?;
    let e2 = second.euler_class(factors[1].expected_rank)?;
    let e3 = third.euler_class(factors[2].expected_rank)?;
    let integrand = &(&e1 * &e2) * &e3;
    if !integrand.is_homogeneous_of(total_rank) {
        return Err(ChowError::Audit("Euler class product is not homogeneous".into()));
    }
    let pushed = prod.pushforward_to_first_factor(&integrand)?;
    if !pushed.is_homogeneous_of(r_us + 1) {
        return Err(ChowError::Audit(format!("pushforward is not of degree {}", r + 1)));
    }
    let class = express_in_chern_monomials(&planes, &pushed, r_us + 1)?;
    Ok(FixedLocus { params, factors, integrand_degree: total_rank, class })
}

/// `c_1` bookkeeping for `Ψ*h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiPullback {
    pub r: u64,
    /// `c_1(F)` in units of `h`.
    pub c1_f: Rational,
    /// `c_1(Ψ*E)` in units of `h`.
    pub c1_psi_e: Rational,
    /// `Ψ*h = ratio · h`.
    pub ratio: i64,
}

/// Runs the exact sequences
/// `0 → F → V_{n+1} → Sym²E* → 0` and `0 → Ψ*E → F → (F/E)*⊗(F/E)* → 0`
/// on a one-generator ring with `c_1(E) = −h`.
pub fn psi_star_h(r: u64) -> Result<PsiPullback> {
    if r < 1 {
        return Err(ChowError::Audit("Psi*h bookkeeping needs r >= 1".into()));
    }
    let params = VoisinParams::new(r);
    let ring = Space::projective(1);
    let h = ring.hyperplane()?;
    let e = Sheaf::from_chern(&ring, (r + 1) as i64, &(&GradedElement::one(&ring) - &h))?;
    let v = Sheaf::trivial(&ring, (params.n + 1) as usize);
    let f = v.difference(&e.dual().sym(2)?)?;
    if f.rank() != (r + 2) as i64 {
        return Err(ChowError::Audit(format!("rank F = {}, expected r + 2", f.rank())));
    }
    let quotient = f.difference(&e)?;
    let q_dual = quotient.dual();
    let psi_e = f.difference(&q_dual.tensor(&q_dual)?)?;
    if psi_e.rank() != e.rank() {
        return Err(ChowError::Audit("rank of the pulled-back bundle changed".into()));
    }
    let c1_e = e.c1_degree()?;
    let c1_f = f.c1_degree()?;
    let c1_psi_e = psi_e.c1_degree()?;
    let ratio = &c1_psi_e / &c1_e;
    if !ratio.is_integer() {
        return Err(ChowError::Audit(format!("non-integral ratio {ratio}")));
    }
    let ratio = ratio
        .to_integer()
        .to_i64()
        .ok_or_else(|| ChowError::Internal("ratio overflows".into()))?;
    Ok(PsiPullback { r, c1_f, c1_psi_e, ratio })
}

/// Codimensions of `{rank ≤ ρ}` in a space of symmetric forms on a rank-`m`
/// bundle, for `ρ = m−1, …, 1`: `C(m − ρ + 1, 2)`.
pub fn rank_strata_codims(m: u64) -> Result<Vec<u64>> {
    if m < 2 {
        return Err(ChowError::Audit(format!("form rank must be at least 2, got {m}")));
    }
    Ok((1..m).rev().map(|rho| binomial(m - rho + 1, 2)).collect())
}

/// Degree of the degeneracy hypersurface of a symmetric map `V → V* ⊗ L` on
/// projective space: `c_1` of `(det V)^{-1} ⊗ det(V* ⊗ L)`, i.e.
/// `−2 c_1(V) + rank(V) c_1(L)`.
pub fn det_degree(v: &Sheaf, l: &Sheaf) -> Result<i64> {
    if l.rank() != 1 {
        return Err(ChowError::RankMismatch { expected: 1, actual: l.rank() });
    }
    let target = v.dual().tensor(l)?.det()?;
    let hom = v.det()?.dual().tensor(&target)?;
    let d = hom.c1_degree()?;
    if !d.is_integer() {
        return Err(ChowError::Internal(format!("non-integral degree {d}")));
    }
    d.to_integer().to_i64().ok_or_else(|| ChowError::Internal("degree overflows".into()))
}

/// The `5 × 5` and `4 × 4` determinantal degrees on `P^5`: `(7, 4)`.
pub fn determinant_degrees() -> Result<(i64, i64)> {
    let p5 = Space::projective(5);
    let l = Sheaf::twisting(&p5, 1)?;
    let big = Sheaf::twisting(&p5, -1)?.sum(&Sheaf::trivial(&p5, 4))?;
    let small = Sheaf::trivial(&p5, 4);
    Ok((det_degree(&big, &l)?, det_degree(&small, &l)?))
}
