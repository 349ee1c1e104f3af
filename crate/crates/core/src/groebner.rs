//! Left Gröbner bases in D and the left-ideal algebra built on them.
//!
//! Reduction always divides on the right (`f − q·g`), so everything computed
//! here describes left ideals D·g₁ + … + D·g_r. Intersections adjoin one
//! central tag variable `w` and eliminate it: I ∩ J = (w·I + (1−w)·J) ∩ D.

use std::sync::Arc;

use thiserror::Error;

use crate::ore::{
    reduce_remainder, right_reduce, MultiIndex, OreError, OreOperator, OreRing, TermOrder,
};

/// Default cap on the number of S-pairs one completion may process.
pub const DEFAULT_PAIR_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error("S-pair budget of {budget} exceeded")]
    ResourceExceeded { budget: usize },
    #[error("a left ideal needs at least one generator")]
    EmptyIdeal,
}

/// A left ideal given by generators.
#[derive(Clone, Debug, PartialEq)]
pub struct LeftIdeal {
    ring: Arc<OreRing>,
    generators: Vec<OreOperator>,
}

impl LeftIdeal {
    pub fn new(generators: Vec<OreOperator>) -> Result<Self, GroebnerError> {
        let first = generators.first().ok_or(GroebnerError::EmptyIdeal)?;
        let ring = Arc::clone(first.ring());
        for g in &generators[1..] {
            if g.ring() != &ring && **g.ring() != *ring {
                return Err(OreError::SpecMismatch.into());
            }
        }
        Ok(LeftIdeal { ring, generators })
    }

    pub fn principal(f: OreOperator) -> Self {
        LeftIdeal {
            ring: Arc::clone(f.ring()),
            generators: vec![f],
        }
    }

    pub fn unit(ring: &Arc<OreRing>) -> Self {
        Self::principal(OreOperator::one(ring))
    }

    pub fn zero(ring: &Arc<OreRing>) -> Self {
        Self::principal(OreOperator::zero(ring))
    }

    pub fn ring(&self) -> &Arc<OreRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[OreOperator] {
        &self.generators
    }
}

impl From<&GroebnerBasis> for LeftIdeal {
    fn from(b: &GroebnerBasis) -> Self {
        if b.elements.is_empty() {
            LeftIdeal::zero(&b.ring)
        } else {
            LeftIdeal {
                ring: Arc::clone(&b.ring),
                generators: b.elements.clone(),
            }
        }
    }
}

/// A reduced, monic left Gröbner basis tagged with its order.
///
/// The zero ideal has no elements; the unit ideal is `{1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    ring: Arc<OreRing>,
    elements: Vec<OreOperator>,
    order: TermOrder,
    reduced: bool,
}

impl GroebnerBasis {
    pub fn elements(&self) -> &[OreOperator] {
        &self.elements
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn ring(&self) -> &Arc<OreRing> {
        &self.ring
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_unit()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_indices(&self) -> Vec<MultiIndex> {
        self.elements
            .iter()
            .map(|g| {
                g.leading_index(&self.order)
                    .expect("basis elements are nonzero")
            })
            .collect()
    }

    pub fn render(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|g| g.render(&self.order))
            .collect()
    }

    /// Reduce `f` modulo this basis; the remainder is a normal form.
    pub fn normal_form(&self, f: &OreOperator) -> OreOperator {
        if self.elements.is_empty() {
            return f.clone();
        }
        reduce_remainder(f, &self.elements, &self.order)
    }
}

/// True iff `f` lies in the left ideal with basis `b`.
pub fn member(f: &OreOperator, b: &GroebnerBasis) -> bool {
    f.is_zero() || b.normal_form(f).is_zero()
}

/// True iff the two bases describe the same left ideal (mutual membership).
pub fn same_ideal(a: &GroebnerBasis, b: &GroebnerBasis) -> bool {
    a.elements.iter().all(|g| member(g, b)) && b.elements.iter().all(|g| member(g, a))
}

/// `Some(g)` when the reduced basis is a single operator.
pub fn principal_generator(b: &GroebnerBasis) -> Option<OreOperator> {
    match b.elements.as_slice() {
        [g] => Some(g.clone()),
        _ => None,
    }
}

/// S-polynomial of two monic operators with leading indices `a` and `b`.
pub fn s_polynomial(
    f: &OreOperator,
    g: &OreOperator,
    ord: &TermOrder,
) -> Result<OreOperator, OreError> {
    let (a, ca) = f.leading_term(ord)?;
    let (b, cb) = g.leading_term(ord)?;
    let l = a.lcm(&b);
    let lf = f.left_mul_term(&l.saturating_sub(&a), &ca.inv()?);
    let lg = g.left_mul_term(&l.saturating_sub(&b), &cb.inv()?);
    Ok(&lf - &lg)
}

/// Buchberger completion and the ideal operations, under a fixed order.
#[derive(Clone, Debug)]
pub struct Engine {
    order: TermOrder,
    pair_budget: usize,
}

struct Pair {
    i: usize,
    j: usize,
    lcm: MultiIndex,
}

impl Engine {
    pub fn new(order: TermOrder) -> Self {
        Engine {
            order,
            pair_budget: DEFAULT_PAIR_BUDGET,
        }
    }

    pub fn with_pair_budget(mut self, budget: usize) -> Self {
        self.pair_budget = budget;
        self
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn pair_budget(&self) -> usize {
        self.pair_budget
    }

    /// Reduced monic left Gröbner basis of the ideal generated by `gens`.
    pub fn buchberger(&self, gens: &[OreOperator]) -> Result<GroebnerBasis, GroebnerError> {
        let ideal = LeftIdeal::new(gens.to_vec())?;
        self.basis(&ideal)
    }

    pub fn basis(&self, ideal: &LeftIdeal) -> Result<GroebnerBasis, GroebnerError> {
        let ring = ideal.ring();
        self.order.validate(ring.nvars())?;
        let ord = &self.order;
        let unit = || GroebnerBasis {
            ring: Arc::clone(ring),
            elements: vec![OreOperator::one(ring)],
            order: ord.clone(),
            reduced: true,
        };

        let mut basis: Vec<OreOperator> = Vec::new();
        let mut heads: Vec<MultiIndex> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let push = |g: OreOperator,
                    basis: &mut Vec<OreOperator>,
                    heads: &mut Vec<MultiIndex>,
                    pairs: &mut Vec<Pair>| {
            let g = g.monic(ord);
            let lm = g.leading_index(ord).unwrap();
            let j = basis.len();
            for (i, h) in heads.iter().enumerate() {
                pairs.push(Pair {
                    i,
                    j,
                    lcm: h.lcm(&lm),
                });
            }
            basis.push(g);
            heads.push(lm);
        };

        for g in ideal.generators() {
            let h = if basis.is_empty() {
                g.clone()
            } else {
                reduce_remainder(g, &basis, ord)
            };
            if h.is_zero() {
                continue;
            }
            if h.is_unit() {
                return Ok(unit());
            }
            push(h, &mut basis, &mut heads, &mut pairs);
        }

        let mut processed = 0usize;
        while !pairs.is_empty() {
            let k = (0..pairs.len())
                .min_by(|&a, &b| {
                    ord.cmp(&pairs[a].lcm, &pairs[b].lcm)
                        .then_with(|| (pairs[a].j, pairs[a].i).cmp(&(pairs[b].j, pairs[b].i)))
                })
                .unwrap();
            let pair = pairs.swap_remove(k);
            processed += 1;
            if processed > self.pair_budget {
                return Err(GroebnerError::ResourceExceeded {
                    budget: self.pair_budget,
                });
            }
            let s = s_polynomial(&basis[pair.i], &basis[pair.j], ord)?;
            let h = reduce_remainder(&s, &basis, ord);
            if h.is_zero() {
                continue;
            }
            if h.is_unit() {
                return Ok(unit());
            }
            push(h, &mut basis, &mut heads, &mut pairs);
        }

        Ok(GroebnerBasis {
            ring: Arc::clone(ring),
            elements: interreduce(basis, ord),
            order: ord.clone(),
            reduced: true,
        })
    }

    /// Basis of I + J.
    pub fn ideal_sum(&self, i: &LeftIdeal, j: &LeftIdeal) -> Result<GroebnerBasis, GroebnerError> {
        let mut gens = i.generators().to_vec();
        gens.extend_from_slice(j.generators());
        self.buchberger(&gens)
    }

    /// Basis of I ∩ J via a central tag variable `w`:
    /// the `w`-free part of a block-elimination basis of w·I + (1−w)·J.
    pub fn ideal_intersect(
        &self,
        i: &LeftIdeal,
        j: &LeftIdeal,
    ) -> Result<GroebnerBasis, GroebnerError> {
        let ring = i.ring();
        if ring != j.ring() && **ring != **j.ring() {
            return Err(OreError::SpecMismatch.into());
        }
        let ext = ring.with_extra_tag();
        let tag = ext.nvars() - 1;
        let mut gens = Vec::new();
        for f in i.generators() {
            gens.push(f.transfer(&ext).shift_tag(tag));
        }
        for g in j.generators() {
            let g = g.transfer(&ext);
            gens.push(&g - &g.shift_tag(tag));
        }
        let elim = Engine {
            order: TermOrder::elimination(tag, self.order.clone()),
            pair_budget: self.pair_budget,
        };
        let big = elim.buchberger(&gens)?;
        let free: Vec<OreOperator> = big
            .elements
            .iter()
            .filter(|g| !g.has_tag())
            .map(|g| g.transfer(ring))
            .collect();
        if free.is_empty() {
            return self.basis(&LeftIdeal::zero(ring));
        }
        self.buchberger(&free)
    }

    /// True iff every generator of `i` is a left multiple of `r`.
    pub fn check_right_factor(
        &self,
        i: &LeftIdeal,
        r: &OreOperator,
    ) -> Result<bool, GroebnerError> {
        if r.is_zero() {
            return Err(OreError::ZeroOperator.into());
        }
        for g in i.generators() {
            if !right_reduce(g, std::slice::from_ref(r), &self.order)?
                .remainder
                .is_zero()
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Minimize leading indices, fully reduce each element by the others, sort
/// ascending by leading index.
fn interreduce(basis: Vec<OreOperator>, ord: &TermOrder) -> Vec<OreOperator> {
    let mut items: Vec<(MultiIndex, OreOperator)> = basis
        .into_iter()
        .map(|g| (g.leading_index(ord).unwrap(), g))
        .collect();
    items.sort_by(|a, b| ord.cmp(&a.0, &b.0));
    let mut kept: Vec<(MultiIndex, OreOperator)> = Vec::new();
    for (lm, g) in items {
        if !kept.iter().any(|(h, _)| h.divides(&lm)) {
            kept.push((lm, g));
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for k in 0..kept.len() {
        let others: Vec<OreOperator> = kept
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, (_, g))| g.clone())
            .collect();
        let g = &kept[k].1;
        let (lm, lc) = g.leading_term(ord).unwrap();
        // Keep the head, reduce the tail.
        let head = OreOperator::monomial(g.ring(), lm, lc);
        let tail = g - &head;
        let tail = if others.is_empty() {
            tail
        } else {
            reduce_remainder(&tail, &others, ord)
        };
        out.push((&head + &tail).monic(ord));
    }
    out
}
