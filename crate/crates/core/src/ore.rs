//! The operator ring D = K[δ₁,…,δ_m] with δᵢ·a = a·δᵢ + ∂ᵢ(a).
//!
//! A ring may also carry central commutative "tag" variables (used for
//! elimination); they behave like derivations that annihilate K.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::coeffield::{scale_by, FieldElement, FieldError, FieldSpec};
use crate::parse::{parse_expr, Expr, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OreError {
    #[error("operators belong to different operator rings")]
    SpecMismatch,
    #[error("the zero operator has no leading term")]
    ZeroOperator,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("unknown symbol '{name}' at {position}")]
    UnknownSymbol { name: String, position: usize },
    #[error("division at {position}: the divisor must be a nonzero coefficient")]
    DivisionByOperator { position: usize },
    #[error("invalid term order: {0}")]
    InvalidOrder(String),
}

/// Exponent vector (e₁,…,e_n) of a monomial δ₁^{e₁}⋯δ_n^{e_n}.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exps: Vec<u32>) -> Self {
        MultiIndex(exps)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree Σeᵢ.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// `self − other`; caller guarantees `other | self`.
    pub fn saturating_sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.saturating_sub(*b))
                .collect(),
        )
    }

    pub fn push(&self, e: u32) -> MultiIndex {
        let mut v = self.0.clone();
        v.push(e);
        MultiIndex(v)
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// Monomial order on [`MultiIndex`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TermOrder {
    /// Total degree first, ties broken lexicographically along `precedence`
    /// (first entry is the largest variable).
    GradedLex { precedence: Vec<usize> },
    /// Degree in the central variable `tag` first, then `base`.
    BlockElimination { tag: usize, base: Box<TermOrder> },
}

impl TermOrder {
    /// Graded lex with δ₁ > δ₂ > … > δ_n.
    pub fn graded_lex(n: usize) -> Self {
        TermOrder::GradedLex {
            precedence: (0..n).collect(),
        }
    }

    /// Parse a precedence such as `"dx > dy"`; unlisted derivations follow
    /// in declaration order.
    pub fn parse(text: &str, spec: &FieldSpec) -> Result<Self, OreError> {
        let mut precedence = Vec::new();
        for name in text.split('>').map(str::trim).filter(|s| !s.is_empty()) {
            let i = spec
                .derivation_index(name)
                .ok_or_else(|| OreError::InvalidOrder(format!("unknown derivation '{name}'")))?;
            if precedence.contains(&i) {
                return Err(OreError::InvalidOrder(format!("'{name}' listed twice")));
            }
            precedence.push(i);
        }
        for i in 0..spec.num_derivations() {
            if !precedence.contains(&i) {
                precedence.push(i);
            }
        }
        Ok(TermOrder::GradedLex { precedence })
    }

    pub fn elimination(tag: usize, base: TermOrder) -> Self {
        TermOrder::BlockElimination {
            tag,
            base: Box::new(base),
        }
    }

    /// True if the order compares total degree (over its non-tag variables) first.
    pub fn is_graded(&self) -> bool {
        matches!(self, TermOrder::GradedLex { .. })
    }

    /// The graded order underneath any elimination blocks.
    pub fn base(&self) -> &TermOrder {
        match self {
            TermOrder::GradedLex { .. } => self,
            TermOrder::BlockElimination { base, .. } => base.base(),
        }
    }

    /// Variables this order ranks; must be exactly the ring's variables.
    fn covered(&self) -> Vec<usize> {
        match self {
            TermOrder::GradedLex { precedence } => precedence.clone(),
            TermOrder::BlockElimination { tag, base } => {
                let mut v = base.covered();
                v.push(*tag);
                v
            }
        }
    }

    pub fn validate(&self, nvars: usize) -> Result<(), OreError> {
        let mut v = self.covered();
        v.sort_unstable();
        if v != (0..nvars).collect::<Vec<_>>() {
            return Err(OreError::InvalidOrder(format!(
                "order must rank each of the {nvars} ring variables exactly once"
            )));
        }
        Ok(())
    }

    pub fn cmp(&self, a: &MultiIndex, b: &MultiIndex) -> Ordering {
        match self {
            TermOrder::GradedLex { precedence } => {
                let da: u32 = precedence.iter().map(|&i| a.0[i]).sum();
                let db: u32 = precedence.iter().map(|&i| b.0[i]).sum();
                da.cmp(&db).then_with(|| {
                    precedence
                        .iter()
                        .map(|&i| a.0[i].cmp(&b.0[i]))
                        .find(|o| o.is_ne())
                        .unwrap_or(Ordering::Equal)
                })
            }
            TermOrder::BlockElimination { tag, base } => {
                a.0[*tag].cmp(&b.0[*tag]).then_with(|| base.cmp(a, b))
            }
        }
    }

    /// Human-readable form such as `grlex(dx > dy)`.
    pub fn describe(&self, names: &[String]) -> String {
        match self {
            TermOrder::GradedLex { precedence } => format!(
                "grlex({})",
                precedence
                    .iter()
                    .map(|&i| names[i].as_str())
                    .collect::<Vec<_>>()
                    .join(" > ")
            ),
            TermOrder::BlockElimination { tag, base } => {
                format!("elim({}; {})", names[*tag], base.describe(names))
            }
        }
    }
}

/// A coefficient field together with the number of central tag variables.
#[derive(Debug, PartialEq, Eq)]
pub struct OreRing {
    field: Arc<FieldSpec>,
    tags: usize,
}

impl OreRing {
    pub fn new(field: FieldSpec) -> Arc<Self> {
        Arc::new(OreRing {
            field: Arc::new(field),
            tags: 0,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Number of derivations m.
    pub fn num_derivations(&self) -> usize {
        self.field.num_derivations()
    }

    pub fn num_tags(&self) -> usize {
        self.tags
    }

    /// m plus the number of tag variables.
    pub fn nvars(&self) -> usize {
        self.num_derivations() + self.tags
    }

    /// The same field with one additional central variable appended.
    pub fn with_extra_tag(&self) -> Arc<OreRing> {
        Arc::new(OreRing {
            field: Arc::clone(&self.field),
            tags: self.tags + 1,
        })
    }

    /// The same field with all tag variables dropped.
    pub fn untagged(&self) -> Arc<OreRing> {
        Arc::new(OreRing {
            field: Arc::clone(&self.field),
            tags: 0,
        })
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut names = self.field.derivation_names().to_vec();
        for t in 0..self.tags {
            names.push(if t == 0 { "w".into() } else { format!("w{t}") });
        }
        names
    }

    pub fn default_order(&self) -> TermOrder {
        TermOrder::graded_lex(self.nvars())
    }

    fn same(a: &Arc<OreRing>, b: &Arc<OreRing>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// An element of D: a finite map from multi-indices to nonzero coefficients.
#[derive(Clone)]
pub struct OreOperator {
    ring: Arc<OreRing>,
    terms: BTreeMap<MultiIndex, FieldElement>,
}

impl PartialEq for OreOperator {
    fn eq(&self, other: &Self) -> bool {
        OreRing::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for OreOperator {}

impl fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OreOperator({})",
            self.render(&self.ring.default_order())
        )
    }
}

impl OreOperator {
    pub fn zero(ring: &Arc<OreRing>) -> Self {
        OreOperator {
            ring: Arc::clone(ring),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<OreRing>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &Arc<OreRing>, c: FieldElement) -> Self {
        Self::monomial(ring, MultiIndex::zero(ring.nvars()), c)
    }

    pub fn monomial(ring: &Arc<OreRing>, idx: MultiIndex, c: FieldElement) -> Self {
        assert_eq!(idx.len(), ring.nvars(), "multi-index length mismatch");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(idx, c);
        }
        OreOperator {
            ring: Arc::clone(ring),
            terms,
        }
    }

    /// The operator δᵢ (or the tag variable when `i ≥ m`).
    pub fn delta(ring: &Arc<OreRing>, i: usize) -> Self {
        Self::monomial(ring, MultiIndex::unit(ring.nvars(), i), ring.field().one())
    }

    pub fn from_terms(
        ring: &Arc<OreRing>,
        terms: impl IntoIterator<Item = (MultiIndex, FieldElement)>,
    ) -> Self {
        let mut op = Self::zero(ring);
        for (idx, c) in terms {
            op.add_term(idx, c);
        }
        op
    }

    pub fn ring(&self) -> &Arc<OreRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree of a stored index; −1 for the zero operator.
    pub fn order(&self) -> i64 {
        self.terms
            .keys()
            .map(|k| i64::from(k.order()))
            .max()
            .unwrap_or(-1)
    }

    /// True for a nonzero element of K.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Option<&FieldElement> {
        self.terms.get(idx)
    }

    fn add_term(&mut self, idx: MultiIndex, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = &*slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    fn check_ring(&self, other: &OreOperator) -> Result<(), OreError> {
        if OreRing::same(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(OreError::SpecMismatch)
        }
    }

    /// Leading index and coefficient under `ord`.
    pub fn leading_term(&self, ord: &TermOrder) -> Result<(MultiIndex, FieldElement), OreError> {
        self.leading_ref(ord)
            .map(|(i, c)| (i.clone(), c.clone()))
            .ok_or(OreError::ZeroOperator)
    }

    pub(crate) fn leading_ref(&self, ord: &TermOrder) -> Option<(&MultiIndex, &FieldElement)> {
        self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0))
    }

    pub fn leading_index(&self, ord: &TermOrder) -> Option<MultiIndex> {
        self.leading_ref(ord).map(|(i, _)| i.clone())
    }

    /// Left multiplication by a coefficient: c·f.
    pub fn scale_left(&self, c: &FieldElement) -> OreOperator {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        OreOperator {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(i, a)| (i.clone(), c * a)).collect(),
        }
    }

    /// `lc⁻¹·f`, so the leading coefficient becomes 1. Zero stays zero.
    pub fn monic(&self, ord: &TermOrder) -> OreOperator {
        match self.leading_ref(ord) {
            Some((_, c)) if !c.is_one() => self.scale_left(&c.inv().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// True if some term involves a tag variable.
    pub fn has_tag(&self) -> bool {
        let m = self.ring.num_derivations();
        self.terms.keys().any(|k| k.0[m..].iter().any(|&e| e > 0))
    }

    /// Re-home this operator in `ring`, padding or truncating indices.
    /// Truncation requires the dropped tag exponents to be zero.
    pub fn transfer(&self, ring: &Arc<OreRing>) -> OreOperator {
        assert!(Arc::ptr_eq(&self.ring.field, &ring.field) || self.ring.field == ring.field);
        let n = ring.nvars();
        let terms = self.terms.iter().map(|(k, c)| {
            let mut e = k.0.clone();
            if e.len() > n {
                assert!(e[n..].iter().all(|&x| x == 0), "tag variable present");
                e.truncate(n);
            } else {
                e.resize(n, 0);
            }
            (MultiIndex(e), c.clone())
        });
        OreOperator {
            ring: Arc::clone(ring),
            terms: terms.collect(),
        }
    }

    /// Multiply on the left by the central variable `tag`.
    pub fn shift_tag(&self, tag: usize) -> OreOperator {
        OreOperator {
            ring: Arc::clone(&self.ring),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let mut e = k.clone();
                    e.0[tag] += 1;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// `(c·δ^α) · self`, expanded with the multinomial Leibniz rule
    /// δ^α·b = Σ_{κ≤α} C(α,κ) ∂^κ(b) δ^{α−κ}.
    pub fn left_mul_term(&self, alpha: &MultiIndex, c: &FieldElement) -> OreOperator {
        let mut cache = DerivCache::default();
        self.left_mul_term_cached(alpha, c, &mut cache)
    }

    fn left_mul_term_cached(
        &self,
        alpha: &MultiIndex,
        c: &FieldElement,
        cache: &mut DerivCache,
    ) -> OreOperator {
        let mut out = Self::zero(&self.ring);
        if c.is_zero() {
            return out;
        }
        let m = self.ring.num_derivations();
        let kappas = sub_indices(alpha, m);
        for (beta, b) in &self.terms {
            for kappa in &kappas {
                let d = cache.get(self.ring.field(), beta, b, kappa);
                if d.is_zero() {
                    continue;
                }
                let coeff = scale_by(&(c * &d), &multi_binomial(alpha, kappa));
                let idx = &alpha.saturating_sub(kappa) + beta;
                out.add_term(idx, coeff);
            }
        }
        out
    }

    /// Canonical text: terms in descending `ord`, e.g. `dx^2 - (x + 1)*dy`.
    pub fn render(&self, ord: &TermOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let names = self.ring.var_names();
        let syms = self.ring.field().symbol_names();
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| ord.cmp(b.0, a.0));
        let mut out = String::new();
        for (k, (idx, c)) in terms.into_iter().enumerate() {
            let neg = c.looks_negative(syms);
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_index(idx, &names);
            let cs = mag.render(syms);
            let simple = !mag.is_polynomial() || mag.numerator().num_terms() == 1;
            if mono.is_empty() {
                if simple {
                    out.push_str(&cs);
                } else {
                    out.push_str(&format!("({cs})"));
                }
            } else if mag.is_one() {
                out.push_str(&mono);
            } else if simple {
                out.push_str(&format!("{cs}*{mono}"));
            } else {
                out.push_str(&format!("({cs})*{mono}"));
            }
        }
        out
    }
}

fn render_index(idx: &MultiIndex, names: &[String]) -> String {
    idx.0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                names[i].clone()
            } else {
                format!("{}^{}", names[i], e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// All κ ≤ α whose tag components (positions ≥ m) are zero.
fn sub_indices(alpha: &MultiIndex, m: usize) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zero(alpha.len())];
    for i in 0..m {
        let mut next = Vec::new();
        for base in &out {
            for e in 0..=alpha.0[i] {
                let mut k = base.clone();
                k.0[i] = e;
                next.push(k);
            }
        }
        out = next;
    }
    out
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

fn multi_binomial(alpha: &MultiIndex, kappa: &MultiIndex) -> BigInt {
    alpha
        .0
        .iter()
        .zip(&kappa.0)
        .map(|(&a, &k)| binomial(a, k))
        .product()
}

/// Memo of iterated derivatives ∂^κ(b) keyed by the term index β.
#[derive(Default)]
struct DerivCache {
    map: HashMap<(MultiIndex, MultiIndex), FieldElement>,
}

impl DerivCache {
    fn get(
        &mut self,
        field: &FieldSpec,
        beta: &MultiIndex,
        b: &FieldElement,
        kappa: &MultiIndex,
    ) -> FieldElement {
        if kappa.is_zero() {
            return b.clone();
        }
        let key = (beta.clone(), kappa.clone());
        if let Some(v) = self.map.get(&key) {
            return v.clone();
        }
        let i = kappa.0.iter().position(|&e| e > 0).unwrap();
        let mut lower = kappa.clone();
        lower.0[i] -= 1;
        let prev = self.get(field, beta, b, &lower);
        let v = if prev.is_zero() {
            prev
        } else {
            field.derive(&prev, i)
        };
        self.map.insert(key, v.clone());
        v
    }
}

impl Add for &OreOperator {
    type Output = OreOperator;
    /// Panics if the operands live in different rings; see [`op_add`].
    fn add(self, rhs: &OreOperator) -> OreOperator {
        op_add(self, rhs).expect("operator ring mismatch")
    }
}

impl Sub for &OreOperator {
    type Output = OreOperator;
    fn sub(self, rhs: &OreOperator) -> OreOperator {
        self + &(-rhs)
    }
}

impl Neg for &OreOperator {
    type Output = OreOperator;
    fn neg(self) -> OreOperator {
        OreOperator {
            ring: Arc::clone(&self.ring),
            terms: self.terms.iter().map(|(i, c)| (i.clone(), -c)).collect(),
        }
    }
}

impl Mul for &OreOperator {
    type Output = OreOperator;
    /// Panics if the operands live in different rings; see [`op_mul`].
    fn mul(self, rhs: &OreOperator) -> OreOperator {
        op_mul(self, rhs).expect("operator ring mismatch")
    }
}

/// Coefficientwise sum.
pub fn op_add(f: &OreOperator, g: &OreOperator) -> Result<OreOperator, OreError> {
    f.check_ring(g)?;
    let (mut big, small) = if f.terms.len() >= g.terms.len() {
        (f.clone(), g)
    } else {
        (g.clone(), f)
    };
    for (i, c) in &small.terms {
        big.add_term(i.clone(), c.clone());
    }
    Ok(big)
}

/// Product f·g in D (composition: g is applied first).
pub fn op_mul(f: &OreOperator, g: &OreOperator) -> Result<OreOperator, OreError> {
    f.check_ring(g)?;
    let mut cache = DerivCache::default();
    let mut out = OreOperator::zero(&f.ring);
    for (alpha, a) in &f.terms {
        let part = g.left_mul_term_cached(alpha, a, &mut cache);
        for (i, c) in part.terms {
            out.add_term(i, c);
        }
    }
    Ok(out)
}

/// Result of [`right_reduce`]: `f = Σ cofactors[i]·G[i] + remainder`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub remainder: OreOperator,
    pub cofactors: Vec<OreOperator>,
}

/// Reduce `f` modulo the left ideal generated by `divisors`, dividing on
/// the right. Reducer choice is the first divisor whose leading index
/// divides the current leading index.
pub fn right_reduce(
    f: &OreOperator,
    divisors: &[OreOperator],
    ord: &TermOrder,
) -> Result<Reduction, OreError> {
    for g in divisors {
        f.check_ring(g)?;
        if g.is_zero() {
            return Err(OreError::ZeroOperator);
        }
    }
    let (remainder, cofactors) = reduce_impl(f, divisors, ord, true);
    Ok(Reduction {
        remainder,
        cofactors: cofactors.expect("tracked"),
    })
}

/// Remainder only; divisors must be nonzero and share `f`'s ring.
pub(crate) fn reduce_remainder(
    f: &OreOperator,
    divisors: &[OreOperator],
    ord: &TermOrder,
) -> OreOperator {
    reduce_impl(f, divisors, ord, false).0
}

fn reduce_impl(
    f: &OreOperator,
    divisors: &[OreOperator],
    ord: &TermOrder,
    track: bool,
) -> (OreOperator, Option<Vec<OreOperator>>) {
    let ring = &f.ring;
    let mut cofactors = track.then(|| vec![OreOperator::zero(ring); divisors.len()]);
    // A unit divisor generates all of D.
    if let Some(k) = divisors.iter().position(OreOperator::is_unit) {
        if let Some(cof) = cofactors.as_mut() {
            let c = divisors[k].terms.values().next().unwrap();
            let inv = OreOperator::constant(ring, c.inv().expect("unit"));
            cof[k] = f * &inv;
        }
        return (OreOperator::zero(ring), cofactors);
    }
    let heads: Vec<(MultiIndex, FieldElement)> = divisors
        .iter()
        .map(|g| {
            let (i, c) = g.leading_ref(ord).expect("nonzero divisor");
            (i.clone(), c.inv().expect("nonzero"))
        })
        .collect();
    let mut p = f.clone();
    let mut rem = OreOperator::zero(ring);
    while let Some((alpha, c)) = p.leading_ref(ord).map(|(i, c)| (i.clone(), c.clone())) {
        match heads.iter().position(|(lm, _)| lm.divides(&alpha)) {
            Some(k) => {
                let shift = alpha.saturating_sub(&heads[k].0);
                let q = &c * &heads[k].1;
                let t = divisors[k].left_mul_term(&shift, &q);
                p = &p - &t;
                debug_assert!(p.coefficient(&alpha).is_none());
                if let Some(cof) = cofactors.as_mut() {
                    cof[k].add_term(shift, q);
                }
            }
            None => {
                p.terms.remove(&alpha);
                rem.terms.insert(alpha, c);
            }
        }
    }
    (rem, cofactors)
}

/// True iff the left-to-right product of `factors` equals `l`.
pub fn verify_factorization(l: &OreOperator, factors: &[OreOperator]) -> Result<bool, OreError> {
    let Some((first, rest)) = factors.split_first() else {
        return Ok(false);
    };
    let mut prod = first.clone();
    for f in rest {
        prod = op_mul(&prod, f)?;
    }
    l.check_ring(&prod)?;
    Ok(prod == *l)
}

/// True iff A·P ∈ D·B, i.e. `u ↦ P(u)` maps solutions of B into solutions of A.
pub fn verify_intertwine(
    a: &OreOperator,
    p: &OreOperator,
    b: &OreOperator,
    ord: &TermOrder,
) -> Result<bool, OreError> {
    if b.is_zero() {
        return Err(OreError::ZeroOperator);
    }
    let ap = op_mul(a, p)?;
    Ok(right_reduce(&ap, std::slice::from_ref(b), ord)?
        .remainder
        .is_zero())
}

/// Parse operator text such as `(dx+1)*(dx + x*dy)`.
pub fn parse_operator(text: &str, ring: &Arc<OreRing>) -> Result<OreOperator, OreError> {
    parse_operator_with(text, ring, &HashMap::new())
}

/// As [`parse_operator`], resolving extra identifiers from `bindings`.
pub fn parse_operator_with(
    text: &str,
    ring: &Arc<OreRing>,
    bindings: &HashMap<String, OreOperator>,
) -> Result<OreOperator, OreError> {
    let e = parse_expr(text)?;
    eval_operator(&e, ring, bindings)
}

pub fn eval_operator(
    e: &Expr,
    ring: &Arc<OreRing>,
    bindings: &HashMap<String, OreOperator>,
) -> Result<OreOperator, OreError> {
    let field = ring.field();
    let rec = |x: &Expr| eval_operator(x, ring, bindings);
    Ok(match e {
        Expr::Int(n) => OreOperator::constant(
            ring,
            FieldElement::from_rational(field.nvars(), n.clone().into()),
        ),
        Expr::Ident { name, position } => {
            if let Some(i) = field.derivation_index(name) {
                OreOperator::delta(ring, i)
            } else if let Some(c) = field.symbol(name) {
                OreOperator::constant(ring, c)
            } else if let Some(op) = bindings.get(name) {
                op.check_ring(&OreOperator::zero(ring))?;
                op.clone()
            } else {
                return Err(OreError::UnknownSymbol {
                    name: name.clone(),
                    position: *position,
                });
            }
        }
        Expr::Neg(a) => -&rec(a)?,
        Expr::Add(a, b) => op_add(&rec(a)?, &rec(b)?)?,
        Expr::Sub(a, b) => op_add(&rec(a)?, &-&rec(b)?)?,
        Expr::Mul(a, b) => op_mul(&rec(a)?, &rec(b)?)?,
        Expr::Div { lhs, rhs, position } => {
            let d = rec(rhs)?;
            let c = match d.terms.iter().next() {
                Some((k, c)) if d.terms.len() == 1 && k.is_zero() => c.clone(),
                _ => {
                    return Err(OreError::DivisionByOperator {
                        position: *position,
                    })
                }
            };
            let inv = OreOperator::constant(ring, c.inv()?);
            op_mul(&rec(lhs)?, &inv)?
        }
        Expr::Pow(a, n) => {
            let base = rec(a)?;
            let mut acc = OreOperator::one(ring);
            for _ in 0..*n {
                acc = op_mul(&acc, &base)?;
            }
            acc
        }
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::coeffield::load_spec;

    pub(crate) fn ring_xy() -> Arc<OreRing> {
        OreRing::new(load_spec("derivations: dx, dy\nvariables: x, y").unwrap())
    }

    pub(crate) fn op(ring: &Arc<OreRing>, s: &str) -> OreOperator {
        parse_operator(s, ring).unwrap()
    }

    pub(crate) const LANDAU: &str = "dx^3 + x*dx^2*dy + 2*dx^2 + 2*(x+1)*dx*dy + dx + (x+2)*dy";

    #[test]
    fn commutation_rule() {
        let r = ring_xy();
        assert_eq!(op(&r, "dx*x"), op(&r, "x*dx + 1"));
        assert_eq!(op(&r, "dy*x"), op(&r, "x*dy"));
    }

    #[test]
    fn product_examples() {
        let r = ring_xy();
        assert_eq!(op(&r, "(dx + x)*(dx - x)"), op(&r, "dx^2 - (x^2 + 1)"));
        assert_eq!(op(&r, "(dx+1)*(dx+1)*(dx + x*dy)"), op(&r, LANDAU));
        let f = op(&r, "dx + 1");
        assert_eq!(&f + &OreOperator::zero(&r), f);
        assert_eq!(op(&r, "(dx + 1) + (dx - 1)"), op(&r, "2*dx"));
    }

    #[test]
    fn leading_terms() {
        let r = ring_xy();
        let ord = TermOrder::graded_lex(2);
        let (i, c) = op(&r, LANDAU).leading_term(&ord).unwrap();
        assert_eq!(i.exponents(), &[3, 0]);
        assert!(c.is_one());
        let l1 = op(
            &r,
            "x*dx^2*dy + x^2*dx*dy^2 - dx^2 - dx*dy + x^2*dy^2 - dx - dy - x*dy",
        );
        let (i, c) = l1.leading_term(&ord).unwrap();
        assert_eq!(i.exponents(), &[2, 1]);
        assert_eq!(c, r.field().symbol("x").unwrap());
        let k = op(&r, "x^2 + 1");
        assert_eq!(k.leading_term(&ord).unwrap().0, MultiIndex::zero(2));
        assert_eq!(
            OreOperator::zero(&r).leading_term(&ord),
            Err(OreError::ZeroOperator)
        );
    }

    #[test]
    fn reduction_examples() {
        let r = ring_xy();
        let ord = TermOrder::graded_lex(2);
        let red = right_reduce(&op(&r, LANDAU), &[op(&r, "dx + 1")], &ord).unwrap();
        assert!(red.remainder.is_zero());
        assert_eq!(red.cofactors[0], op(&r, "dx^2 + x*dx*dy + dx + (x+2)*dy"));

        let f = op(&r, "x*dx*dy + dy^2");
        let red = right_reduce(&f, std::slice::from_ref(&f), &ord).unwrap();
        assert!(red.remainder.is_zero());
        assert!(red.cofactors[0].is_unit() && red.cofactors[0] == OreOperator::one(&r));

        let red = right_reduce(&op(&r, "dx^2 - (x^2+1)"), &[op(&r, "dx - x")], &ord).unwrap();
        assert!(red.remainder.is_zero());
        assert_eq!(red.cofactors[0], op(&r, "dx + x"));
    }

    #[test]
    fn reducing_by_a_unit_gives_zero() {
        let r = ring_xy();
        let ord = TermOrder::graded_lex(2);
        let f = op(&r, "dx^2*dy + x");
        let g = op(&r, "3*x");
        let red = right_reduce(&f, &[op(&r, "dy"), g.clone()], &ord).unwrap();
        assert!(red.remainder.is_zero());
        assert_eq!(&red.cofactors[1] * &g, f);
    }

    #[test]
    fn factorization_checks() {
        let r = ring_xy();
        let l = op(&r, LANDAU);
        let f = |s: &str| op(&r, s);
        assert!(verify_factorization(&l, &[f("dx+1"), f("dx+1"), f("dx + x*dy")]).unwrap());
        assert!(
            verify_factorization(&l, &[f("dx^2 + x*dx*dy + dx + (x+2)*dy"), f("dx+1")]).unwrap()
        );
        assert!(!verify_factorization(&l, &[f("dx+1"), f("dx + x*dy")]).unwrap());
    }

    #[test]
    fn spec_mismatch_detected() {
        let a = ring_xy();
        let b = OreRing::new(load_spec("derivations: dx, dt\nvariables: x, t").unwrap());
        assert_eq!(
            op_add(&op(&a, "dx"), &op(&b, "dx")),
            Err(OreError::SpecMismatch)
        );
        assert_eq!(
            op_mul(&op(&a, "dx"), &op(&b, "dx")),
            Err(OreError::SpecMismatch)
        );
    }

    #[test]
    fn parser_errors() {
        let r = ring_xy();
        assert!(matches!(
            parse_operator("dx + q", &r),
            Err(OreError::UnknownSymbol { position: 5, .. })
        ));
        assert!(matches!(
            parse_operator("x/dx", &r),
            Err(OreError::DivisionByOperator { position: 1 })
        ));
        assert!(matches!(
            parse_operator("dx +", &r),
            Err(OreError::Parse(_))
        ));
        assert!(parse_operator("0", &r).unwrap().is_zero());
    }

    #[test]
    fn division_is_right_multiplication_by_the_inverse() {
        let r = ring_xy();
        assert_eq!(op(&r, "1/x*dx"), op(&r, "(1/x)*dx"));
        // dx∘(1/x) = (1/x)dx − 1/x²
        assert_eq!(op(&r, "dx/x"), op(&r, "1/x*dx - 1/x^2"));
    }

    #[test]
    fn canonical_rendering() {
        let r = ring_xy();
        let ord = TermOrder::graded_lex(2);
        let l1 = op(
            &r,
            "x*dx^2*dy + x^2*dx*dy^2 - dx^2 - dx*dy + x^2*dy^2 - dx - dy - x*dy",
        );
        assert_eq!(
            l1.render(&ord),
            "x*dx^2*dy + x^2*dx*dy^2 - dx^2 - dx*dy + x^2*dy^2 - dx - (x + 1)*dy"
        );
        assert_eq!(
            op(&r, "(2/x)*dx - 1/(x+1)").render(&ord),
            "2/x*dx - 1/(x + 1)"
        );
        assert_eq!(OreOperator::zero(&r).render(&ord), "0");
    }

    #[test]
    fn term_order_grlex() {
        let ord = TermOrder::graded_lex(2);
        let mi = |a: u32, b: u32| MultiIndex::new(vec![a, b]);
        assert_eq!(ord.cmp(&mi(1, 1), &mi(2, 0)), Ordering::Less);
        assert_eq!(ord.cmp(&mi(0, 3), &mi(2, 0)), Ordering::Greater);
        assert_eq!(ord.cmp(&mi(2, 1), &mi(1, 2)), Ordering::Greater);
        let rev = TermOrder::GradedLex {
            precedence: vec![1, 0],
        };
        assert_eq!(rev.cmp(&mi(2, 1), &mi(1, 2)), Ordering::Less);
    }
}
