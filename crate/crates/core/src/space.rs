//! Chow-ring presentations: projective space, Grassmannians, products of two
//! of those, and projective bundles, with integration and pushforwards.
//!
//! Every space assigns a dense index to its basis, sorted by degree, so the
//! degree-`d` part of an element is a contiguous index range. Elements store a
//! common denominator and integer numerators; arithmetic on numerators never
//! touches a gcd until the final normalisation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{ChowError, Result};
use crate::graded::{ClassAlgebra, Rational};
use crate::partition::{schubert_product, BoxShape, Partition};

static NEXT_SPACE_ID: AtomicU64 = AtomicU64::new(1);

/// A basis label of some space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `h^i` on projective space.
    Power(u32),
    /// A Schubert class `σ_λ`.
    Schubert(Partition),
    /// `pr₁*a · pr₂*b` on a product.
    Pair(Box<Label>, Box<Label>),
    /// `ζ^k · p*b` on a projective bundle.
    Bundle { zeta: u32, base: Box<Label> },
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Power(0) => write!(f, "1"),
            Label::Power(1) => write!(f, "h"),
            Label::Power(i) => write!(f, "h^{i}"),
            Label::Schubert(p) => write!(f, "s{p}"),
            Label::Pair(a, b) => write!(f, "{a}⊗{b}"),
            Label::Bundle { zeta, base } => write!(f, "z^{zeta}·{base}"),
        }
    }
}

type Constants = Arc<[(u32, i64)]>;

struct GrassData {
    k: usize,
    n: usize,
    shape: BoxShape,
    basis: Vec<Partition>,
    index: HashMap<Partition, u32>,
    table: RwLock<HashMap<(u32, u32), Constants>>,
}

struct ProductData {
    first: Space,
    second: Space,
    first_cap: usize,
    pairs: Vec<(u32, u32)>,
    lookup: Vec<u32>,
}

struct BundleData {
    base: Space,
    rank: usize,
    /// `c_1(F) … c_rank(F)` on the base.
    chern: Vec<GradedElement>,
    /// `s_0(F) … s_{dim base}(F)`.
    segre: Vec<GradedElement>,
    pairs: Vec<(u32, u32)>,
    lookup: Vec<u32>,
}

enum Kind {
    Projective,
    Grassmannian(GrassData),
    Product(ProductData),
    Bundle(BundleData),
}

struct SpaceInner {
    id: u64,
    dim: usize,
    kind: Kind,
    degrees: Vec<u32>,
    /// `offsets[d]..offsets[d + 1]` is the degree-`d` index range.
    offsets: Vec<usize>,
}

/// A Chow ring with a graded basis. Cheap to clone; identity is by id.
#[derive(Clone)]
pub struct Space(Arc<SpaceInner>);

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space#{}({})", self.0.id, self.name())
    }
}

fn offsets_from(degrees: &[u32], dim: usize) -> Vec<usize> {
    let mut offsets = vec![0usize; dim + 2];
    for &d in degrees {
        offsets[d as usize + 1] += 1;
    }
    for d in 1..offsets.len() {
        offsets[d] += offsets[d - 1];
    }
    offsets
}

impl Space {
    fn build(dim: usize, kind: Kind, degrees: Vec<u32>) -> Space {
        debug_assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
        let offsets = offsets_from(&degrees, dim);
        Space(Arc::new(SpaceInner {
            id: NEXT_SPACE_ID.fetch_add(1, Ordering::Relaxed),
            dim,
            kind,
            degrees,
            offsets,
        }))
    }

    /// `P^m` with basis `1, h, …, h^m`.
    pub fn projective(m: usize) -> Space {
        Self::build(m, Kind::Projective, (0..=m as u32).collect())
    }

    /// `Gr(k, n)` of `k`-planes in an `n`-dimensional space, Schubert basis.
    pub fn grassmannian(k: usize, n: usize) -> Result<Space> {
        if k == 0 || k >= n {
            return Err(ChowError::InvalidGrassmannian { k, n });
        }
        let shape = BoxShape::new(k, (n - k) as u32)?;
        let basis = shape.partitions();
        let index = basis.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let degrees = basis.iter().map(|p| p.weight()).collect();
        let data = GrassData { k, n, shape, basis, index, table: RwLock::new(HashMap::new()) };
        Ok(Self::build(k * (n - k), Kind::Grassmannian(data), degrees))
    }

    /// `A × B` for projective spaces or Grassmannians.
    pub fn product(first: &Space, second: &Space) -> Result<Space> {
        Self::product_capped(first, second, first.dim())
    }

    /// `A × B` modulo the ideal of classes whose first-factor degree exceeds
    /// `first_cap`. Pushforward to `A` is exact in degrees `≤ first_cap`.
    pub fn product_capped(first: &Space, second: &Space, first_cap: usize) -> Result<Space> {
        for f in [first, second] {
            if !matches!(f.0.kind, Kind::Projective | Kind::Grassmannian(_)) {
                return Err(ChowError::WrongSpaceKind(format!(
                    "product factors must be projective spaces or Grassmannians, got {}",
                    f.name()
                )));
            }
        }
        let cap = first_cap.min(first.dim());
        let dim = cap + second.dim();
        let nb = second.basis_size();
        let mut pairs = Vec::new();
        let mut degrees = Vec::new();
        for d in 0..=dim {
            for da in 0..=cap.min(d) {
                let db = d - da;
                if db > second.dim() {
                    continue;
                }
                for a in first.degree_range(da) {
                    for b in second.degree_range(db) {
                        pairs.push((a as u32, b as u32));
                        degrees.push(d as u32);
                    }
                }
            }
        }
        let mut lookup = vec![u32::MAX; first.basis_size() * nb];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            lookup[a as usize * nb + b as usize] = i as u32;
        }
        let data = ProductData {
            first: first.clone(),
            second: second.clone(),
            first_cap: cap,
            pairs,
            lookup,
        };
        Ok(Self::build(dim, Kind::Product(data), degrees))
    }

    /// `P(F) → B` for a rank-`rank` bundle with Chern classes `chern[i] = c_{i+1}(F)`.
    ///
    /// Ring: `CH(B)[ζ] / (ζ^r + c_1 ζ^{r−1} + … + c_r)`, `ζ = c_1(O(1))`.
    pub fn projective_bundle(base: &Space, rank: usize, chern: &[GradedElement]) -> Result<Space> {
        if rank == 0 {
            return Err(ChowError::WrongSpaceKind("projective bundle of rank 0".into()));
        }
        let mut classes = Vec::with_capacity(rank);
        for i in 0..rank {
            let c = match chern.get(i) {
                Some(c) => {
                    base.check(c)?;
                    if !c.is_homogeneous_of(i + 1) {
                        return Err(ChowError::DegreeMismatch {
                            expected: i + 1,
                            found: c.min_degree().unwrap_or(0),
                        });
                    }
                    c.clone()
                }
                None => GradedElement::zero(base),
            };
            classes.push(c);
        }
        if chern[rank.min(chern.len())..].iter().any(|c| !c.is_zero()) {
            return Err(ChowError::WrongSpaceKind(
                "Chern classes above the rank must vanish".into(),
            ));
        }
        let mut total = GradedElement::one(base);
        for c in &classes {
            total = &total + c;
        }
        let inv = total.unit_inverse()?;
        let segre = (0..=base.dim()).map(|d| inv.homogeneous_part(d)).collect();

        let dim = base.dim() + rank - 1;
        let nb = base.basis_size();
        let mut pairs = Vec::new();
        let mut degrees = Vec::new();
        for d in 0..=dim {
            for k in 0..rank.min(d + 1) {
                let db = d - k;
                if db > base.dim() {
                    continue;
                }
                for b in base.degree_range(db) {
                    pairs.push((k as u32, b as u32));
                    degrees.push(d as u32);
                }
            }
        }
        let mut lookup = vec![u32::MAX; rank * nb];
        for (i, &(k, b)) in pairs.iter().enumerate() {
            lookup[k as usize * nb + b as usize] = i as u32;
        }
        let data = BundleData { base: base.clone(), rank, chern: classes, segre, pairs, lookup };
        Ok(Self::build(dim, Kind::Bundle(data), degrees))
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn basis_size(&self) -> usize {
        self.0.degrees.len()
    }

    pub fn name(&self) -> String {
        match &self.0.kind {
            Kind::Projective => format!("P^{}", self.dim()),
            Kind::Grassmannian(g) => format!("Gr({},{})", g.k, g.n),
            Kind::Product(p) => {
                let cap = if p.first_cap < p.first.dim() {
                    format!(" [first degree <= {}]", p.first_cap)
                } else {
                    String::new()
                };
                format!("{} x {}{cap}", p.first.name(), p.second.name())
            }
            Kind::Bundle(b) => format!("P(rank {}) over {}", b.rank, b.base.name()),
        }
    }

    /// `(k, n)` when this is `Gr(k, n)`.
    pub fn grassmannian_params(&self) -> Option<(usize, usize)> {
        match &self.0.kind {
            Kind::Grassmannian(g) => Some((g.k, g.n)),
            _ => None,
        }
    }

    pub fn is_projective(&self) -> bool {
        matches!(self.0.kind, Kind::Projective)
    }

    /// First-factor degree cap of a product.
    pub fn first_cap(&self) -> Option<usize> {
        match &self.0.kind {
            Kind::Product(p) => Some(p.first_cap),
            _ => None,
        }
    }

    pub fn factors(&self) -> Option<(&Space, &Space)> {
        match &self.0.kind {
            Kind::Product(p) => Some((&p.first, &p.second)),
            _ => None,
        }
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        self.0.degrees[idx] as usize
    }

    /// Basis indices of degree `d` (empty past the dimension).
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        if d > self.dim() {
            let n = self.basis_size();
            return n..n;
        }
        self.0.offsets[d]..self.0.offsets[d + 1]
    }

    pub fn basis_in_degree(&self, d: usize) -> Vec<Label> {
        self.degree_range(d).map(|i| self.label(i)).collect()
    }

    pub fn label(&self, idx: usize) -> Label {
        match &self.0.kind {
            Kind::Projective => Label::Power(idx as u32),
            Kind::Grassmannian(g) => Label::Schubert(g.basis[idx].clone()),
            Kind::Product(p) => {
                let (a, b) = p.pairs[idx];
                Label::Pair(
                    Box::new(p.first.label(a as usize)),
                    Box::new(p.second.label(b as usize)),
                )
            }
            Kind::Bundle(b) => {
                let (k, i) = b.pairs[idx];
                Label::Bundle { zeta: k, base: Box::new(b.base.label(i as usize)) }
            }
        }
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        match (&self.0.kind, label) {
            (Kind::Projective, Label::Power(i)) => {
                (*i as usize <= self.dim()).then_some(*i as usize)
            }
            (Kind::Grassmannian(g), Label::Schubert(p)) => g.index.get(p).map(|&i| i as usize),
            (Kind::Product(p), Label::Pair(a, b)) => {
                let a = p.first.index_of(a)?;
                let b = p.second.index_of(b)?;
                let i = p.lookup[a * p.second.basis_size() + b];
                (i != u32::MAX).then_some(i as usize)
            }
            (Kind::Bundle(d), Label::Bundle { zeta, base }) => {
                if *zeta as usize >= d.rank {
                    return None;
                }
                let b = d.base.index_of(base)?;
                Some(d.lookup[*zeta as usize * d.base.basis_size() + b] as usize)
            }
            _ => None,
        }
    }

    fn top_index(&self) -> Option<usize> {
        let r = self.degree_range(self.dim());
        match &self.0.kind {
            Kind::Product(p) if p.first_cap < p.first.dim() => None,
            _ => (r.len() == 1).then_some(r.start),
        }
    }

    fn check(&self, x: &GradedElement) -> Result<()> {
        if x.space != *self {
            return Err(ChowError::SpaceMismatch);
        }
        Ok(())
    }

    /// Structure constants of two basis elements of a projective space or
    /// Grassmannian.
    fn basis_product(&self, i: u32, j: u32) -> Constants {
        match &self.0.kind {
            Kind::Projective => {
                let d = i + j;
                if d as usize <= self.dim() {
                    Arc::from(vec![(d, 1i64)])
                } else {
                    Arc::from(Vec::new())
                }
            }
            Kind::Grassmannian(g) => {
                let key = if i <= j { (i, j) } else { (j, i) };
                if let Some(c) = g.table.read().expect("table lock").get(&key) {
                    return c.clone();
                }
                let prod = schubert_product(&g.basis[key.0 as usize], &g.basis[key.1 as usize], &g.shape)
                    .expect("basis partitions fit the box");
                let mut consts: Vec<(u32, i64)> =
                    prod.into_iter().map(|(p, c)| (g.index[&p], c as i64)).collect();
                consts.sort_unstable();
                let consts: Constants = Arc::from(consts);
                g.table.write().expect("table lock").entry(key).or_insert(consts).clone()
            }
            _ => unreachable!("basis products are only tabulated for factor spaces"),
        }
    }

    // ---- Chern generators -------------------------------------------------

    /// The hyperplane class `h` on `P^m`.
    pub fn hyperplane(&self) -> Result<GradedElement> {
        if !self.is_projective() {
            return Err(ChowError::WrongSpaceKind(format!("{} is not a projective space", self.name())));
        }
        if self.dim() == 0 {
            return Ok(GradedElement::zero(self));
        }
        Ok(GradedElement::basis(self, 1))
    }

    /// The Schubert class `σ_λ`.
    pub fn sigma(&self, lambda: &Partition) -> Result<GradedElement> {
        match &self.0.kind {
            Kind::Grassmannian(g) => match g.index.get(lambda) {
                Some(&i) => Ok(GradedElement::basis(self, i as usize)),
                None => Err(ChowError::NotInBox {
                    partition: lambda.clone(),
                    rows: g.shape.rows(),
                    cols: g.shape.cols(),
                }),
            },
            _ => Err(ChowError::WrongSpaceKind(format!("{} is not a Grassmannian", self.name()))),
        }
    }

    /// `c_i(E*) = σ_{(1^i)}` for the tautological subbundle `E`.
    pub fn dual_sub_chern(&self, i: usize) -> Result<GradedElement> {
        let (k, _) = self.grassmannian_params().ok_or_else(|| {
            ChowError::WrongSpaceKind(format!("{} is not a Grassmannian", self.name()))
        })?;
        if i > k {
            return Ok(GradedElement::zero(self));
        }
        self.sigma(&Partition::column(i))
    }

    /// `c_i(Q) = σ_{(i)}` for the tautological quotient `Q`.
    pub fn quotient_chern(&self, i: usize) -> Result<GradedElement> {
        let (k, n) = self.grassmannian_params().ok_or_else(|| {
            ChowError::WrongSpaceKind(format!("{} is not a Grassmannian", self.name()))
        })?;
        if i > n - k {
            return Ok(GradedElement::zero(self));
        }
        self.sigma(&Partition::row(i as u32))
    }

    // ---- Integration and pushforward ----------------------------------------

    /// Degree of the zero-dimensional part; 0 below the top degree.
    pub fn integrate(&self, x: &GradedElement) -> Result<Rational> {
        self.check(x)?;
        if let Kind::Bundle(b) = &self.0.kind {
            let pushed = self.projbundle_pushforward(x)?;
            return b.base.integrate(&pushed);
        }
        Ok(match self.top_index() {
            Some(i) => x.coefficient_at(i),
            None => Rational::zero(),
        })
    }

    /// `pr₁*` from the first factor of a product.
    pub fn pullback_first(&self, x: &GradedElement) -> Result<GradedElement> {
        let p = self.product_data()?;
        p.first.check(x)?;
        let nb = p.second.basis_size();
        let terms = x
            .terms
            .iter()
            .filter_map(|(a, c)| {
                let i = p.lookup[*a as usize * nb];
                (i != u32::MAX).then(|| (i, c.clone()))
            })
            .collect();
        Ok(GradedElement::from_sorted(self, x.denom.clone(), terms))
    }

    /// `pr₂*` from the second factor of a product.
    pub fn pullback_second(&self, x: &GradedElement) -> Result<GradedElement> {
        let p = self.product_data()?;
        p.second.check(x)?;
        let nb = p.second.basis_size();
        let mut terms: Vec<(u32, BigInt)> = x
            .terms
            .iter()
            .map(|(b, c)| (p.lookup[*b as usize], c.clone()))
            .collect();
        debug_assert!(nb > 0);
        terms.sort_unstable_by_key(|t| t.0);
        Ok(GradedElement::from_sorted(self, x.denom.clone(), terms))
    }

    /// Integration along the fibres of `pr₁`: `(λ, μ) ↦ λ` when `μ` is the
    /// point class of the second factor.
    pub fn pushforward_to_first_factor(&self, x: &GradedElement) -> Result<GradedElement> {
        let p = self.product_data()?;
        self.check(x)?;
        let top_b = p.second.top_index().expect("factor has a point class") as u32;
        let mut terms: Vec<(u32, BigInt)> = x
            .terms
            .iter()
            .filter_map(|(i, c)| {
                let (a, b) = p.pairs[*i as usize];
                (b == top_b).then(|| (a, c.clone()))
            })
            .collect();
        terms.sort_unstable_by_key(|t| t.0);
        Ok(GradedElement::from_sorted(&p.first, x.denom.clone(), terms))
    }

    fn product_data(&self) -> Result<&ProductData> {
        match &self.0.kind {
            Kind::Product(p) => Ok(p),
            _ => Err(ChowError::WrongSpaceKind(format!("{} is not a product", self.name()))),
        }
    }

    fn bundle_data(&self) -> Result<&BundleData> {
        match &self.0.kind {
            Kind::Bundle(b) => Ok(b),
            _ => Err(ChowError::WrongSpaceKind(format!("{} is not a projective bundle", self.name()))),
        }
    }

    /// Base space of a projective bundle.
    pub fn bundle_base(&self) -> Result<&Space> {
        Ok(&self.bundle_data()?.base)
    }

    /// Fibre rank `r` of a projective bundle `P(F)`, `rank F = r`.
    pub fn bundle_rank(&self) -> Result<usize> {
        Ok(self.bundle_data()?.rank)
    }

    /// `p*` from the base of a projective bundle.
    pub fn pullback_from_base(&self, x: &GradedElement) -> Result<GradedElement> {
        let b = self.bundle_data()?;
        b.base.check(x)?;
        let terms = x.terms.iter().map(|(i, c)| (b.lookup[*i as usize], c.clone())).collect::<Vec<_>>();
        let mut terms = terms;
        terms.sort_unstable_by_key(|t| t.0);
        Ok(GradedElement::from_sorted(self, x.denom.clone(), terms))
    }

    /// `ζ^k`, reduced by the bundle relation.
    pub fn zeta_power(&self, k: usize) -> Result<GradedElement> {
        let b = self.bundle_data()?;
        let mut poly = vec![GradedElement::zero(&b.base); k + 1];
        poly[k] = GradedElement::one(&b.base);
        Ok(self.reduce_zeta_poly(b, poly))
    }

    /// `p_*` for a projective bundle: `ζ^k · p*α ↦ s_{k−r+1}(F) · α`.
    pub fn projbundle_pushforward(&self, x: &GradedElement) -> Result<GradedElement> {
        let b = self.bundle_data()?;
        self.check(x)?;
        let top = (b.rank - 1) as u32;
        let mut terms: Vec<(u32, BigInt)> = x
            .terms
            .iter()
            .filter_map(|(i, c)| {
                let (k, j) = b.pairs[*i as usize];
                (k == top).then(|| (j, c.clone()))
            })
            .collect();
        terms.sort_unstable_by_key(|t| t.0);
        Ok(GradedElement::from_sorted(&b.base, x.denom.clone(), terms))
    }

    /// `p_*(ζ^k · p*α) = s_{k−r+1}(F) · α` evaluated directly from the Segre series.
    pub fn push_zeta_power(&self, k: usize, alpha: &GradedElement) -> Result<GradedElement> {
        let b = self.bundle_data()?;
        b.base.check(alpha)?;
        if k + 1 < b.rank {
            return Ok(GradedElement::zero(&b.base));
        }
        let j = k + 1 - b.rank;
        match b.segre.get(j) {
            Some(s) => Ok(s * alpha),
            None => Ok(GradedElement::zero(&b.base)),
        }
    }

    /// Segre classes `s_0(F) … s_{dim B}(F)` of the bundle defining `P(F)`.
    pub fn bundle_segre(&self) -> Result<&[GradedElement]> {
        Ok(&self.bundle_data()?.segre)
    }

    fn reduce_zeta_poly(&self, b: &BundleData, mut poly: Vec<GradedElement>) -> GradedElement {
        let r = b.rank;
        for m in (r..poly.len()).rev() {
            let top = std::mem::replace(&mut poly[m], GradedElement::zero(&b.base));
            if top.is_zero() {
                continue;
            }
            for i in 1..=r {
                let t = &b.chern[i - 1] * &top;
                poly[m - i] = &poly[m - i] - &t;
            }
        }
        poly.truncate(r);
        let nb = b.base.basis_size();
        let mut out = GradedElement::zero(self);
        for (k, coeff) in poly.into_iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let terms = coeff
                .terms
                .iter()
                .map(|(i, c)| (b.lookup[k * nb + *i as usize], c.clone()))
                .collect::<Vec<_>>();
            let mut terms = terms;
            terms.sort_unstable_by_key(|t| t.0);
            out = &out + &GradedElement::from_sorted(self, coeff.denom.clone(), terms);
        }
        out
    }
}

/// A sparse exact-rational class on a [`Space`].
#[derive(Clone)]
pub struct GradedElement {
    space: Space,
    /// Positive common denominator, coprime to the numerators jointly.
    denom: BigInt,
    /// Sorted by index, no zeros.
    terms: Vec<(u32, BigInt)>,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.denom == other.denom && self.terms == other.terms
    }
}

impl Eq for GradedElement {}

impl fmt::Debug for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (label, c)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{label}")?;
        }
        Ok(())
    }
}

impl GradedElement {
    pub fn zero(space: &Space) -> Self {
        GradedElement { space: space.clone(), denom: BigInt::one(), terms: Vec::new() }
    }

    pub fn one(space: &Space) -> Self {
        Self::basis(space, 0)
    }

    /// Rational multiple of the identity.
    pub fn constant(space: &Space, c: &Rational) -> Self {
        Self::one(space).scale(c)
    }

    fn basis(space: &Space, idx: usize) -> Self {
        GradedElement {
            space: space.clone(),
            denom: BigInt::one(),
            terms: vec![(idx as u32, BigInt::one())],
        }
    }

    pub fn from_label(space: &Space, label: &Label, coeff: &Rational) -> Result<Self> {
        let idx = space.index_of(label).ok_or_else(|| {
            ChowError::WrongSpaceKind(format!("label {label} is not in the basis of {}", space.name()))
        })?;
        Ok(Self::basis(space, idx).scale(coeff))
    }

    /// Builds from sorted unique indices and numerators over `denom`.
    fn from_sorted(space: &Space, denom: BigInt, terms: Vec<(u32, BigInt)>) -> Self {
        let mut x = GradedElement { space: space.clone(), denom, terms };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        self.terms.retain(|(_, c)| !c.is_zero());
        if self.terms.is_empty() {
            self.denom = BigInt::one();
            return;
        }
        if self.denom.is_negative() {
            self.denom = -&self.denom;
            for (_, c) in &mut self.terms {
                *c = -&*c;
            }
        }
        if self.denom.is_one() {
            return;
        }
        let mut g = self.denom.clone();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                return;
            }
        }
        self.denom /= &g;
        for (_, c) in &mut self.terms {
            *c /= &g;
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient_at(&self, idx: usize) -> Rational {
        match self.terms.binary_search_by_key(&(idx as u32), |t| t.0) {
            Ok(p) => Rational::new(self.terms[p].1.clone(), self.denom.clone()),
            Err(_) => Rational::zero(),
        }
    }

    pub fn coefficient(&self, label: &Label) -> Rational {
        match self.space.index_of(label) {
            Some(i) => self.coefficient_at(i),
            None => Rational::zero(),
        }
    }

    /// Nonzero terms as `(label, coefficient)` in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (Label, Rational)> + '_ {
        self.terms
            .iter()
            .map(|(i, c)| (self.space.label(*i as usize), Rational::new(c.clone(), self.denom.clone())))
    }

    /// Nonzero terms as `(basis index, coefficient)`.
    pub fn indexed_terms(&self) -> impl Iterator<Item = (usize, Rational)> + '_ {
        self.terms
            .iter()
            .map(|(i, c)| (*i as usize, Rational::new(c.clone(), self.denom.clone())))
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.first().map(|(i, _)| self.space.degree_of(*i as usize))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.last().map(|(i, _)| self.space.degree_of(*i as usize))
    }

    /// True for zero as well.
    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.terms.iter().all(|(i, _)| self.space.degree_of(*i as usize) == d)
    }

    fn slice_range(&self, lo: usize, hi: usize) -> GradedElement {
        let a = self.terms.partition_point(|t| (t.0 as usize) < lo);
        let b = self.terms.partition_point(|t| (t.0 as usize) < hi);
        Self::from_sorted(&self.space, self.denom.clone(), self.terms[a..b].to_vec())
    }

    pub fn homogeneous_part(&self, d: usize) -> GradedElement {
        let r = self.space.degree_range(d);
        self.slice_range(r.start, r.end)
    }

    /// Components of degree `≤ d`.
    pub fn truncated(&self, d: usize) -> GradedElement {
        let end = self.space.degree_range(d + 1).start;
        self.slice_range(0, end)
    }

    pub fn scale(&self, c: &Rational) -> GradedElement {
        if c.is_zero() {
            return Self::zero(&self.space);
        }
        let terms = self.terms.iter().map(|(i, n)| (*i, n * c.numer())).collect();
        Self::from_sorted(&self.space, &self.denom * c.denom(), terms)
    }

    /// Multiplies the degree-`d` component by `t^d`.
    pub fn scale_by_degree(&self, t: &Rational) -> GradedElement {
        let dim = self.space.dim();
        let mut out = Self::zero(&self.space);
        let mut power = Rational::one();
        for d in 0..=dim {
            let part = self.homogeneous_part(d);
            if !part.is_zero() {
                out = &out + &part.scale(&power);
            }
            power *= t;
        }
        out
    }

    fn combine(&self, other: &Self, negate: bool) -> GradedElement {
        let l = self.denom.lcm(&other.denom);
        let fa = &l / &self.denom;
        let fb = &l / &other.denom;
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let b_val = |c: &BigInt| if negate { -(c * &fb) } else { c * &fb };
        while i < self.terms.len() || j < other.terms.len() {
            let ia = self.terms.get(i).map(|t| t.0);
            let ib = other.terms.get(j).map(|t| t.0);
            match (ia, ib) {
                (Some(x), Some(y)) if x == y => {
                    terms.push((x, &self.terms[i].1 * &fa + b_val(&other.terms[j].1)));
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    terms.push((x, &self.terms[i].1 * &fa));
                    i += 1;
                }
                (Some(x), None) => {
                    terms.push((x, &self.terms[i].1 * &fa));
                    i += 1;
                }
                (_, Some(y)) => {
                    terms.push((y, b_val(&other.terms[j].1)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Self::from_sorted(&self.space, l, terms)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.space.check(other)?;
        Ok(self.combine(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.space.check(other)?;
        Ok(self.combine(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.space.check(other)?;
        Ok(multiply(self, other))
    }

    /// Inverse of a class with constant term 1 (e.g. Segre from Chern).
    pub fn unit_inverse(&self) -> Result<GradedElement> {
        let c0 = self.homogeneous_part(0);
        if c0 != GradedElement::one(&self.space) {
            return Err(ChowError::NotUnit(format!("{c0}")));
        }
        let dim = self.space.dim();
        let parts: Vec<GradedElement> = (0..=dim).map(|d| self.homogeneous_part(d)).collect();
        let mut inv: Vec<GradedElement> = vec![GradedElement::one(&self.space)];
        for k in 1..=dim {
            let mut acc = GradedElement::zero(&self.space);
            for i in 1..=k {
                if !parts[i].is_zero() && !inv[k - i].is_zero() {
                    acc = &acc - &(&parts[i] * &inv[k - i]);
                }
            }
            inv.push(acc);
        }
        Ok(inv.iter().fold(GradedElement::zero(&self.space), |a, b| &a + b))
    }

    /// `x^e` for `e ≥ 0`.
    pub fn pow(&self, e: u32) -> GradedElement {
        let mut acc = GradedElement::one(&self.space);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// Dense accumulator over a contiguous index window.
struct Accumulator {
    start: usize,
    slots: Vec<BigInt>,
}

impl Accumulator {
    fn new(start: usize, end: usize) -> Self {
        Accumulator { start, slots: vec![BigInt::zero(); end.saturating_sub(start)] }
    }

    #[inline]
    fn add(&mut self, idx: usize, v: &BigInt, c: i64) {
        let slot = &mut self.slots[idx - self.start];
        if c == 1 {
            *slot += v;
        } else {
            *slot += v * c;
        }
    }

    fn into_terms(self) -> Vec<(u32, BigInt)> {
        let start = self.start;
        self.slots
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| ((start + i) as u32, c))
            .collect()
    }
}

fn multiply(x: &GradedElement, y: &GradedElement) -> GradedElement {
    let space = &x.space;
    let (Some(lx), Some(ly)) = (x.min_degree(), y.min_degree()) else {
        return GradedElement::zero(space);
    };
    let hx = x.max_degree().unwrap_or(0);
    let hy = y.max_degree().unwrap_or(0);
    let lo = lx + ly;
    if lo > space.dim() {
        return GradedElement::zero(space);
    }
    let hi = (hx + hy).min(space.dim());
    let window_start = space.degree_range(lo).start;
    let window_end = space.degree_range(hi).end;
    let denom = &x.denom * &y.denom;

    match &space.0.kind {
        Kind::Projective | Kind::Grassmannian(_) => {
            let mut acc = Accumulator::new(window_start, window_end);
            for (i, a) in &x.terms {
                let di = space.degree_of(*i as usize);
                for (j, b) in &y.terms {
                    if di + space.degree_of(*j as usize) > space.dim() {
                        break;
                    }
                    let consts = space.basis_product(*i, *j);
                    if consts.is_empty() {
                        continue;
                    }
                    let ab = a * b;
                    for &(k, c) in consts.iter() {
                        acc.add(k as usize, &ab, c);
                    }
                }
            }
            GradedElement::from_sorted(space, denom, acc.into_terms())
        }
        Kind::Product(p) => multiply_product(space, p, x, y, denom, window_start, window_end),
        Kind::Bundle(b) => {
            let split = |e: &GradedElement| -> Vec<GradedElement> {
                let mut parts = vec![Vec::new(); b.rank];
                for (i, c) in &e.terms {
                    let (k, j) = b.pairs[*i as usize];
                    parts[k as usize].push((j, c.clone()));
                }
                parts
                    .into_iter()
                    .map(|mut t| {
                        t.sort_unstable_by_key(|t| t.0);
                        GradedElement::from_sorted(&b.base, e.denom.clone(), t)
                    })
                    .collect()
            };
            let xs = split(x);
            let ys = split(y);
            let mut poly = vec![GradedElement::zero(&b.base); 2 * b.rank - 1];
            for (k1, a) in xs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k2, c) in ys.iter().enumerate() {
                    if !c.is_zero() {
                        poly[k1 + k2] = &poly[k1 + k2] + &(a * c);
                    }
                }
            }
            space.reduce_zeta_poly(b, poly)
        }
    }
}

fn multiply_product(
    space: &Space,
    p: &ProductData,
    x: &GradedElement,
    y: &GradedElement,
    denom: BigInt,
    window_start: usize,
    window_end: usize,
) -> GradedElement {
    // Group by first-factor index: x = Σ_a σ_a ⊗ x_a.
    fn group<'a>(p: &ProductData, e: &'a GradedElement) -> BTreeMap<u32, Vec<(u32, &'a BigInt)>> {
        let mut g: BTreeMap<u32, Vec<(u32, &BigInt)>> = BTreeMap::new();
        for (i, c) in &e.terms {
            let (a, b) = p.pairs[*i as usize];
            g.entry(a).or_default().push((b, c));
        }
        g
    }
    let gx = group(p, x);
    let gy = group(p, y);
    let nb = p.second.basis_size();
    let dim_b = p.second.dim();
    let mut acc = Accumulator::new(window_start, window_end);
    let mut inner = vec![BigInt::zero(); nb];
    let mut touched: Vec<usize> = Vec::new();
    for (&a1, xs) in &gx {
        let da1 = p.first.degree_of(a1 as usize);
        for (&a2, ys) in &gy {
            if da1 + p.first.degree_of(a2 as usize) > p.first_cap {
                continue;
            }
            let ca = p.first.basis_product(a1, a2);
            if ca.is_empty() {
                continue;
            }
            for &(b1, v1) in xs {
                let db1 = p.second.degree_of(b1 as usize);
                for &(b2, v2) in ys {
                    if db1 + p.second.degree_of(b2 as usize) > dim_b {
                        break;
                    }
                    let cb = p.second.basis_product(b1, b2);
                    if cb.is_empty() {
                        continue;
                    }
                    let v = v1 * v2;
                    for &(k, c) in cb.iter() {
                        let slot = &mut inner[k as usize];
                        if slot.is_zero() {
                            touched.push(k as usize);
                        }
                        *slot += &v * c;
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &kb in &touched {
                let v = std::mem::take(&mut inner[kb]);
                if v.is_zero() {
                    continue;
                }
                for &(ka, c) in ca.iter() {
                    let idx = p.lookup[ka as usize * nb + kb];
                    debug_assert!(idx != u32::MAX);
                    acc.add(idx as usize, &v, c);
                }
            }
            touched.clear();
        }
    }
    GradedElement::from_sorted(space, denom, acc.into_terms())
}

impl Add for &GradedElement {
    type Output = GradedElement;
    /// Panics if the operands live on different spaces; see [`GradedElement::try_add`].
    fn add(self, rhs: &GradedElement) -> GradedElement {
        self.try_add(rhs).expect("space mismatch in addition")
    }
}

impl Sub for &GradedElement {
    type Output = GradedElement;
    fn sub(self, rhs: &GradedElement) -> GradedElement {
        self.try_sub(rhs).expect("space mismatch in subtraction")
    }
}

impl Mul for &GradedElement {
    type Output = GradedElement;
    fn mul(self, rhs: &GradedElement) -> GradedElement {
        self.try_mul(rhs).expect("space mismatch in multiplication")
    }
}

impl Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        let terms = self.terms.iter().map(|(i, c)| (*i, -c)).collect();
        GradedElement { space: self.space.clone(), denom: self.denom.clone(), terms }
    }
}

impl ClassAlgebra for GradedElement {
    fn zero_like(&self) -> Self {
        GradedElement::zero(&self.space)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Rational) -> Self {
        self.scale(c)
    }
}
