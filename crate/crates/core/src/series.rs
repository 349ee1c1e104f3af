//! Normal series of solution groups, stored as increasing chains of ideals.
//!
//! A chain I₀ ⊆ I₁ ⊆ … ⊆ I_r = D encodes G₀ ⊇ G₁ ⊇ … ⊇ G_r = {0} with G_i the
//! solutions of I_i. Sums of groups are intersections of ideals and
//! intersections of groups are sums of ideals. Quotient gauges follow the
//! additivity a_τ(G_i) = a_τ(G_i/G_{i+1}) + a_τ(G_{i+1}) at the chain's type.
//!
//! Isogenies are never constructed: equal quotient-gauge multisets are only
//! reported as consistent with a Jordan–Hölder correspondence.

use std::fmt;

use thiserror::Error;

use crate::gauge::{analyze_basis, Gauge, GaugeError, GaugeReport};
use crate::groebner::{member, same_ideal, Engine, GroebnerBasis, GroebnerError, LeftIdeal};
use crate::ore::{op_mul, OreError, OreOperator, TermOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("a factorization needs at least one factor")]
    EmptyFactorList,
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("the two chains do not start at the same ideal")]
    MismatchedTop,
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Ore(#[from] OreError),
}

/// An increasing sequence of left ideals, each stored as a reduced basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    ideals: Vec<GroebnerBasis>,
    factors: Option<Vec<OreOperator>>,
    order: TermOrder,
}

impl Chain {
    /// Compute bases for `ideals`; containment is checked by [`Chain::validate`].
    pub fn from_ideals(ideals: &[LeftIdeal], engine: &Engine) -> Result<Chain, SeriesError> {
        let bases = ideals
            .iter()
            .map(|i| engine.basis(i))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Chain {
            ideals: bases,
            factors: None,
            order: engine.order().clone(),
        })
    }

    fn from_bases(ideals: Vec<GroebnerBasis>, order: TermOrder) -> Chain {
        Chain {
            ideals,
            factors: None,
            order,
        }
    }

    pub fn ideals(&self) -> &[GroebnerBasis] {
        &self.ideals
    }

    pub fn factors(&self) -> Option<&[OreOperator]> {
        self.factors.as_deref()
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    /// Number of steps r.
    pub fn len(&self) -> usize {
        self.ideals.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// Nonempty, ends at the unit ideal, and I_i ⊆ I_{i+1} generator by generator.
    pub fn validate(&self) -> Result<(), SeriesError> {
        let last = self
            .ideals
            .last()
            .ok_or_else(|| SeriesError::InvalidChain("the chain has no ideals".into()))?;
        if !last.is_unit() {
            return Err(SeriesError::InvalidChain(
                "the last ideal must be the unit ideal".into(),
            ));
        }
        for (k, w) in self.ideals.windows(2).enumerate() {
            if let Some(g) = w[0].elements().iter().find(|g| !member(g, &w[1])) {
                return Err(SeriesError::InvalidChain(format!(
                    "ideal {k} is not contained in ideal {}: {} is not a member",
                    k + 1,
                    g.render(&self.order)
                )));
            }
        }
        Ok(())
    }
}

/// I_i = ⟨F_{i+1}⋯F_r⟩ for i < r and I_r = ⟨1⟩.
pub fn chain_from_right_factorization(
    factors: &[OreOperator],
    engine: &Engine,
) -> Result<Chain, SeriesError> {
    let last = factors.last().ok_or(SeriesError::EmptyFactorList)?;
    if let Some(k) = factors.iter().position(OreOperator::is_zero) {
        return Err(SeriesError::InvalidChain(format!(
            "factor {} is zero",
            k + 1
        )));
    }
    let ring = last.ring();
    let mut suffixes = vec![OreOperator::one(ring)];
    for f in factors.iter().rev() {
        let p = op_mul(f, suffixes.last().unwrap())?;
        suffixes.push(p);
    }
    suffixes.reverse();
    let ideals: Vec<LeftIdeal> = suffixes.into_iter().map(LeftIdeal::principal).collect();
    let mut chain = Chain::from_ideals(&ideals, engine)?;
    chain.factors = Some(factors.to_vec());
    chain.validate()?;
    Ok(chain)
}

/// Ideal of the sum of the solution groups of `i` and `j`.
pub fn group_sum(
    i: &LeftIdeal,
    j: &LeftIdeal,
    engine: &Engine,
) -> Result<GroebnerBasis, SeriesError> {
    Ok(engine.ideal_intersect(i, j)?)
}

/// Ideal of the intersection of the solution groups of `i` and `j`.
pub fn group_intersect(
    i: &LeftIdeal,
    j: &LeftIdeal,
    engine: &Engine,
) -> Result<GroebnerBasis, SeriesError> {
    Ok(engine.ideal_sum(i, j)?)
}

/// Gauge of a quotient G_i/G_{i+1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuotientGauge {
    /// Type equal to the chain's τ.
    Exact(Gauge),
    /// Type strictly below the given τ; a_τ does not drop.
    TypeBelow(i64),
}

impl QuotientGauge {
    pub fn exact(&self) -> Option<Gauge> {
        match self {
            QuotientGauge::Exact(g) => Some(*g),
            QuotientGauge::TypeBelow(_) => None,
        }
    }
}

impl fmt::Display for QuotientGauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientGauge::Exact(g) => write!(f, "{g}"),
            QuotientGauge::TypeBelow(t) => write!(f, "type < {t}"),
        }
    }
}

/// a_τ of `g` at type `tau`, zero when `g` has smaller type.
fn level(g: Gauge, tau: i64) -> i64 {
    if g.tau == tau {
        g.a_tau
    } else {
        0
    }
}

fn quotient(upper: Gauge, lower: Gauge, tau: i64) -> QuotientGauge {
    let drop = level(upper, tau) - level(lower, tau);
    if drop > 0 {
        QuotientGauge::Exact(Gauge::new(tau, drop))
    } else {
        QuotientGauge::TypeBelow(tau)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport {
    pub steps: Vec<GaugeReport>,
    /// Type of G₀.
    pub tau: i64,
    pub quotients: Vec<QuotientGauge>,
    /// Every group except the last has type τ.
    pub constant_tau: bool,
    /// a_τ strictly decreases along the chain.
    pub strictly_decreasing: bool,
    /// Per quotient, a note when a known argument gives almost simplicity.
    pub annotations: Vec<Option<String>>,
}

pub const ALMOST_SIMPLE_NOTE: &str =
    "order-1 factor in two derivations with quotient gauge (1, 1): almost simple";

impl SeriesReport {
    pub fn gauges(&self) -> Vec<Gauge> {
        self.steps.iter().map(|s| s.gauge).collect()
    }

    /// Quotients of type τ, sorted.
    pub fn exact_quotients(&self) -> Vec<Gauge> {
        let mut v: Vec<Gauge> = self
            .quotients
            .iter()
            .filter_map(QuotientGauge::exact)
            .collect();
        v.sort();
        v
    }
}

impl fmt::Display for SeriesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(f, "G{i}: gauge {}  omega(s) = {}", s.gauge, s.omega)?;
            if let Some(q) = self.quotients.get(i) {
                write!(f, "  G{i}/G{}: {q}", i + 1)?;
                if let Some(Some(a)) = self.annotations.get(i) {
                    write!(f, "  [{a}]")?;
                }
                writeln!(f)?;
            }
        }
        writeln!(f, "constant type: {}", self.constant_tau)?;
        write!(f, "strictly decreasing: {}", self.strictly_decreasing)
    }
}

/// Per-step gauges and quotient gauges of a chain.
pub fn analyze(chain: &Chain) -> Result<SeriesReport, SeriesError> {
    chain.validate()?;
    let steps = chain
        .ideals
        .iter()
        .map(|b| analyze_basis(b.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let gauges: Vec<Gauge> = steps.iter().map(|s| s.gauge).collect();
    let tau = gauges[0].tau;
    let quotients: Vec<QuotientGauge> = gauges
        .windows(2)
        .map(|w| quotient(w[0], w[1], tau))
        .collect();
    let constant_tau = gauges[..gauges.len() - 1].iter().all(|g| g.tau == tau);
    let strictly_decreasing = quotients.iter().all(|q| q.exact().is_some());
    let m = chain
        .ideals
        .first()
        .map(|b| b.ring().num_derivations())
        .unwrap_or(0);
    let annotations = quotients
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let f = chain.factors.as_ref()?.get(i)?;
            (m == 2 && f.order() == 1 && *q == QuotientGauge::Exact(Gauge::new(1, 1)))
                .then(|| ALMOST_SIMPLE_NOTE.to_string())
        })
        .collect();
    Ok(SeriesReport {
        steps,
        tau,
        quotients,
        constant_tau,
        strictly_decreasing,
        annotations,
    })
}

/// How one original step splits in a refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepPairing {
    pub step: usize,
    /// Quotient gauges of the sub-steps j = 0, …, s−1 before collapsing.
    pub substeps: Vec<QuotientGauge>,
    /// Sub-steps whose quotient has the chain's type.
    pub tau_substeps: Vec<usize>,
}

/// Sub-step (i, j) on the first side against (j, i) on the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Correspondence {
    pub i: usize,
    pub j: usize,
    pub first: QuotientGauge,
    pub second: QuotientGauge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Refinement {
    /// Refinements with consecutive equal ideals collapsed.
    pub first: Chain,
    pub second: Chain,
    /// The refinements reduced to steps whose quotients have type τ.
    pub first_coarse: Chain,
    pub second_coarse: Chain,
    pub first_pairing: Vec<StepPairing>,
    pub second_pairing: Vec<StepPairing>,
    pub correspondences: Vec<Correspondence>,
}

/// grid[i][j] = I_{i+1} ∩ (J_j + I_i), running from I_i (j = 0) to I_{i+1}.
fn grid(
    a: &Chain,
    b: &Chain,
    engine: &Engine,
) -> Result<Vec<Vec<(GroebnerBasis, Gauge)>>, SeriesError> {
    let mut out = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let lower = LeftIdeal::from(&a.ideals[i]);
        let upper = LeftIdeal::from(&a.ideals[i + 1]);
        let mut row = Vec::with_capacity(b.ideals.len());
        for jb in &b.ideals {
            let s = engine.ideal_sum(&LeftIdeal::from(jb), &lower)?;
            let g = engine.ideal_intersect(&upper, &LeftIdeal::from(&s))?;
            let gauge = analyze_basis(g.clone())?.gauge;
            row.push((g, gauge));
        }
        out.push(row);
    }
    Ok(out)
}

fn collapse(
    items: impl IntoIterator<Item = (GroebnerBasis, Gauge)>,
) -> Vec<(GroebnerBasis, Gauge)> {
    let mut out: Vec<(GroebnerBasis, Gauge)> = Vec::new();
    for (b, g) in items {
        if out.last().is_some_and(|(p, _)| same_ideal(p, &b)) {
            continue;
        }
        out.push((b, g));
    }
    out
}

/// Keep the first ideal at each positive a_τ level, then the unit ideal.
fn coarsen(items: &[(GroebnerBasis, Gauge)], tau: i64) -> Vec<GroebnerBasis> {
    let mut out: Vec<GroebnerBasis> = Vec::new();
    let mut current: Option<i64> = None;
    for (b, g) in items {
        let l = level(*g, tau);
        if l > 0 && current != Some(l) {
            out.push(b.clone());
            current = Some(l);
        }
    }
    if let Some((last, _)) = items.last() {
        if out.last() != Some(last) {
            out.push(last.clone());
        }
    }
    out
}

fn pairing(g: &[Vec<(GroebnerBasis, Gauge)>], tau: i64) -> Vec<StepPairing> {
    g.iter()
        .enumerate()
        .map(|(step, row)| {
            let substeps: Vec<QuotientGauge> = row
                .windows(2)
                .map(|w| quotient(w[0].1, w[1].1, tau))
                .collect();
            let tau_substeps = substeps
                .iter()
                .enumerate()
                .filter(|(_, q)| q.exact().is_some())
                .map(|(j, _)| j)
                .collect();
            StepPairing {
                step,
                substeps,
                tau_substeps,
            }
        })
        .collect()
}

/// Refine two chains with a common top against each other.
pub fn refine(a: &Chain, b: &Chain, engine: &Engine) -> Result<Refinement, SeriesError> {
    a.validate()?;
    b.validate()?;
    if !same_ideal(&a.ideals[0], &b.ideals[0]) {
        return Err(SeriesError::MismatchedTop);
    }
    let tau = analyze_basis(a.ideals[0].clone())?.gauge.tau;
    let ga = grid(a, b, engine)?;
    let gb = grid(b, a, engine)?;

    let side = |g: &[Vec<(GroebnerBasis, Gauge)>], top: &GroebnerBasis| {
        let mut flat = Vec::new();
        if g.is_empty() {
            let gauge = analyze_basis(top.clone())?.gauge;
            flat.push((top.clone(), gauge));
        }
        for row in g {
            flat.extend(row.iter().cloned());
        }
        Ok::<_, SeriesError>(collapse(flat))
    };
    let fa = side(&ga, &a.ideals[0])?;
    let fb = side(&gb, &b.ideals[0])?;

    let mut correspondences = Vec::new();
    for (i, row) in ga.iter().enumerate() {
        for j in 0..row.len() - 1 {
            let first = quotient(row[j].1, row[j + 1].1, tau);
            let second = quotient(gb[j][i].1, gb[j][i + 1].1, tau);
            if first.exact().is_some() || second.exact().is_some() {
                correspondences.push(Correspondence {
                    i,
                    j,
                    first,
                    second,
                });
            }
        }
    }

    let order = engine.order().clone();
    Ok(Refinement {
        first_coarse: Chain::from_bases(coarsen(&fa, tau), order.clone()),
        second_coarse: Chain::from_bases(coarsen(&fb, tau), order.clone()),
        first: Chain::from_bases(fa.into_iter().map(|x| x.0).collect(), order.clone()),
        second: Chain::from_bases(fb.into_iter().map(|x| x.0).collect(), order),
        first_pairing: pairing(&ga, tau),
        second_pairing: pairing(&gb, tau),
        correspondences,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Inconsistent => "INCONSISTENT",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub verdict: Verdict,
    pub first: Vec<Gauge>,
    pub second: Vec<Gauge>,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[Gauge]| {
            v.iter()
                .map(Gauge::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self.verdict {
            Verdict::Consistent => write!(
                f,
                "CONSISTENT with a Jordan-Hölder correspondence: quotient gauges {{{}}}",
                show(&self.first)
            ),
            Verdict::Inconsistent => write!(
                f,
                "INCONSISTENT: quotient gauges {{{}}} vs {{{}}}",
                show(&self.first),
                show(&self.second)
            ),
        }
    }
}

/// Multiset equality of the type-τ quotient gauges.
pub fn compare_quotient_gauges(a: &SeriesReport, b: &SeriesReport) -> Comparison {
    let first = a.exact_quotients();
    let second = b.exact_quotients();
    let verdict = if first == second {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    Comparison {
        verdict,
        first,
        second,
    }
}
