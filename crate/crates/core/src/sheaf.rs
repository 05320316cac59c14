//! Virtual bundles and their characteristic classes.
//!
//! A [`Sheaf`] is stored through its Chern character, which is additive on
//! sums and multiplicative on tensor products, so the same code handles
//! honest bundles and formal differences. Total Chern classes are recovered
//! with the Newton identities on demand.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::error::{ChowError, Result};
use crate::graded::{newton_e_from_p, newton_p_from_e, rat, ratio, Rational};
use crate::space::{GradedElement, Label, Space};

/// A class in K-theory of a [`Space`]: integer rank and Chern character.
#[derive(Clone)]
pub struct Sheaf {
    rank: i64,
    ch: GradedElement,
    chern: OnceLock<GradedElement>,
}

impl fmt::Debug for Sheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sheaf")
            .field("space", &self.ch.space().name())
            .field("rank", &self.rank)
            .field("ch", &self.ch)
            .finish()
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

impl Sheaf {
    /// Builds from rank and a total Chern class with constant term 1.
    pub fn from_chern(space: &Space, rank: i64, total_chern: &GradedElement) -> Result<Sheaf> {
        if total_chern.space() != space {
            return Err(ChowError::SpaceMismatch);
        }
        if total_chern.homogeneous_part(0) != GradedElement::one(space) {
            return Err(ChowError::NotUnit(total_chern.homogeneous_part(0).to_string()));
        }
        let dim = space.dim();
        let e: Vec<GradedElement> = (1..=dim).map(|d| total_chern.homogeneous_part(d)).collect();
        let p = newton_p_from_e(&e);
        let mut ch = GradedElement::constant(space, &rat(rank));
        for (k, pk) in p.iter().enumerate() {
            let kf = Rational::from_integer(factorial(k + 1));
            ch = &ch + &pk.scale(&kf.recip());
        }
        let chern = OnceLock::new();
        let _ = chern.set(total_chern.clone());
        Ok(Sheaf { rank, ch, chern })
    }

    /// Builds from a Chern character; the rank is its degree-0 part.
    pub fn from_chern_character(ch: GradedElement) -> Result<Sheaf> {
        let r = ch.coefficient_at(0);
        if !r.is_integer() {
            return Err(ChowError::Internal(format!("non-integral rank {r}")));
        }
        let rank = r
            .to_integer()
            .to_i64()
            .ok_or_else(|| ChowError::Internal("rank overflows i64".into()))?;
        Ok(Sheaf { rank, ch, chern: OnceLock::new() })
    }

    pub fn line_bundle(space: &Space, c1: &GradedElement) -> Result<Sheaf> {
        if c1.space() != space {
            return Err(ChowError::SpaceMismatch);
        }
        if !c1.is_homogeneous_of(1) {
            return Err(ChowError::DegreeMismatch { expected: 1, found: c1.min_degree().unwrap_or(0) });
        }
        Self::from_chern(space, 1, &(&GradedElement::one(space) + c1))
    }

    /// `O(a)` on projective space.
    pub fn twisting(space: &Space, a: i64) -> Result<Sheaf> {
        Self::line_bundle(space, &space.hyperplane()?.scale(&rat(a)))
    }

    pub fn trivial(space: &Space, m: usize) -> Sheaf {
        let ch = GradedElement::constant(space, &rat(m as i64));
        let chern = OnceLock::new();
        let _ = chern.set(GradedElement::one(space));
        Sheaf { rank: m as i64, ch, chern }
    }

    /// Tautological subbundle `E` of `Gr(k, n)`: `c_i(E) = (−1)^i σ_{(1^i)}`.
    pub fn tautological_sub(space: &Space) -> Result<Sheaf> {
        let (k, _) = space.grassmannian_params().ok_or_else(|| {
            ChowError::WrongSpaceKind(format!("{} is not a Grassmannian", space.name()))
        })?;
        let mut c = GradedElement::one(space);
        for i in 1..=k {
            let ci = space.dual_sub_chern(i)?;
            c = if i % 2 == 0 { &c + &ci } else { &c - &ci };
        }
        Self::from_chern(space, k as i64, &c)
    }

    /// Tautological quotient `Q` of `Gr(k, n)`: `c_i(Q) = σ_{(i)}`.
    pub fn tautological_quotient(space: &Space) -> Result<Sheaf> {
        let (k, n) = space.grassmannian_params().ok_or_else(|| {
            ChowError::WrongSpaceKind(format!("{} is not a Grassmannian", space.name()))
        })?;
        let mut c = GradedElement::one(space);
        for i in 1..=(n - k) {
            c = &c + &space.quotient_chern(i)?;
        }
        Self::from_chern(space, (n - k) as i64, &c)
    }

    pub fn space(&self) -> &Space {
        self.ch.space()
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn chern_character(&self) -> &GradedElement {
        &self.ch
    }

    /// Power sums `p_k = k!·ch_k` for `k = 1..=up_to`.
    fn power_sums(&self, up_to: usize) -> Vec<GradedElement> {
        (1..=up_to)
            .map(|k| {
                let kf = Rational::from_integer(factorial(k));
                self.ch.homogeneous_part(k).scale(&kf)
            })
            .collect()
    }

    /// `c_1 … c_up_to` from the Chern character.
    fn chern_classes_up_to(&self, up_to: usize) -> Vec<GradedElement> {
        if let Some(c) = self.chern.get() {
            return (1..=up_to).map(|d| c.homogeneous_part(d)).collect();
        }
        newton_e_from_p(&self.power_sums(up_to.min(self.space().dim())))
    }

    /// Total Chern class, truncated at the dimension of the space.
    pub fn total_chern(&self) -> &GradedElement {
        self.chern.get_or_init(|| {
            let space = self.space();
            self.chern_classes_up_to(space.dim())
                .iter()
                .fold(GradedElement::one(space), |acc, c| &acc + c)
        })
    }

    pub fn chern_class(&self, i: usize) -> GradedElement {
        self.total_chern().homogeneous_part(i)
    }

    fn same_space(&self, other: &Sheaf) -> Result<()> {
        if self.space() != other.space() {
            return Err(ChowError::SpaceMismatch);
        }
        Ok(())
    }

    pub fn dual(&self) -> Sheaf {
        Sheaf {
            rank: self.rank,
            ch: self.ch.scale_by_degree(&rat(-1)),
            chern: OnceLock::new(),
        }
    }

    pub fn sum(&self, other: &Sheaf) -> Result<Sheaf> {
        self.same_space(other)?;
        Ok(Sheaf { rank: self.rank + other.rank, ch: &self.ch + &other.ch, chern: OnceLock::new() })
    }

    pub fn difference(&self, other: &Sheaf) -> Result<Sheaf> {
        self.same_space(other)?;
        Ok(Sheaf { rank: self.rank - other.rank, ch: &self.ch - &other.ch, chern: OnceLock::new() })
    }

    pub fn tensor(&self, other: &Sheaf) -> Result<Sheaf> {
        self.same_space(other)?;
        Ok(Sheaf { rank: self.rank * other.rank, ch: &self.ch * &other.ch, chern: OnceLock::new() })
    }

    /// Adams operation `ψ^k`: `ch_d ↦ k^d ch_d`.
    pub fn adams(&self, k: u32) -> Result<Sheaf> {
        if !(2..=3).contains(&k) {
            return Err(ChowError::UnsupportedAdams(k));
        }
        Ok(Sheaf {
            rank: self.rank,
            ch: self.ch.scale_by_degree(&rat(k as i64)),
            chern: OnceLock::new(),
        })
    }

    /// `Sym^2` and `Sym^3` through Adams operations:
    /// `ch Sym² = (ch² + ψ²ch)/2`, `ch Sym³ = (ch³ + 3 ch·ψ²ch + 2 ψ³ch)/6`.
    pub fn sym(&self, k: u32) -> Result<Sheaf> {
        let ch = &self.ch;
        let out = match k {
            2 => {
                let psi2 = self.adams(2)?;
                (&(ch * ch) + &psi2.ch).scale(&ratio(1, 2))
            }
            3 => {
                let psi2 = self.adams(2)?;
                let psi3 = self.adams(3)?;
                let cube = &(ch * ch) * ch;
                let mixed = (ch * &psi2.ch).scale(&rat(3));
                (&(&cube + &mixed) + &psi3.ch.scale(&rat(2))).scale(&ratio(1, 6))
            }
            _ => return Err(ChowError::UnsupportedSym(k)),
        };
        let sheaf = Sheaf::from_chern_character(out)?;
        let r = self.rank;
        let expected = match k {
            2 => r * (r + 1) / 2,
            _ => r * (r + 1) * (r + 2) / 6,
        };
        if sheaf.rank != expected {
            return Err(ChowError::Internal(format!(
                "Sym^{k} of rank {r} has rank {}, expected {expected}",
                sheaf.rank
            )));
        }
        Ok(sheaf)
    }

    /// Determinant line bundle, `c_1(det E) = c_1(E)`.
    pub fn det(&self) -> Result<Sheaf> {
        Sheaf::line_bundle(self.space(), &self.chern_class(1))
    }

    /// `s(E) = 1/c(E)`.
    pub fn segre_series(&self) -> GradedElement {
        self.total_chern().unit_inverse().expect("total Chern class is a unit")
    }

    /// Degree-`expected_rank` part of the total Chern class; fails unless the
    /// virtual rank equals `expected_rank`.
    pub fn euler_class(&self, expected_rank: usize) -> Result<GradedElement> {
        if self.rank != expected_rank as i64 {
            return Err(ChowError::RankMismatch { expected: expected_rank as i64, actual: self.rank });
        }
        if expected_rank == 0 {
            return Ok(GradedElement::one(self.space()));
        }
        if expected_rank > self.space().dim() {
            return Ok(GradedElement::zero(self.space()));
        }
        Ok(self
            .chern_classes_up_to(expected_rank)
            .pop()
            .unwrap_or_else(|| GradedElement::zero(self.space())))
    }

    /// `pr₁*` onto a product whose first factor is this sheaf's space.
    pub fn pullback_first(&self, product: &Space) -> Result<Sheaf> {
        Ok(Sheaf { rank: self.rank, ch: product.pullback_first(&self.ch)?, chern: OnceLock::new() })
    }

    /// `pr₂*` onto a product whose second factor is this sheaf's space.
    pub fn pullback_second(&self, product: &Space) -> Result<Sheaf> {
        Ok(Sheaf { rank: self.rank, ch: product.pullback_second(&self.ch)?, chern: OnceLock::new() })
    }

    /// `p*` onto a projective bundle over this sheaf's space.
    pub fn pullback_to_bundle(&self, bundle: &Space) -> Result<Sheaf> {
        Ok(Sheaf { rank: self.rank, ch: bundle.pullback_from_base(&self.ch)?, chern: OnceLock::new() })
    }

    /// `P(E)` for an honest bundle of positive rank.
    pub fn projectivize(&self) -> Result<Space> {
        if self.rank <= 0 {
            return Err(ChowError::WrongSpaceKind(format!(
                "cannot projectivize a class of rank {}",
                self.rank
            )));
        }
        let rank = self.rank as usize;
        let chern: Vec<GradedElement> = (1..=rank).map(|i| self.chern_class(i)).collect();
        let c = self.total_chern();
        if (rank + 1..=self.space().dim()).any(|d| !c.homogeneous_part(d).is_zero()) {
            return Err(ChowError::WrongSpaceKind(
                "Chern classes above the rank do not vanish".into(),
            ));
        }
        Space::projective_bundle(self.space(), rank, &chern)
    }

    /// Coefficient of `h` in `c_1`, for sheaves on projective space.
    pub fn c1_degree(&self) -> Result<Rational> {
        self.space().hyperplane()?;
        Ok(self.chern_class(1).coefficient(&Label::Power(1)))
    }
}
