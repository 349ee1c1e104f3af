//! Staircases, Hilbert counts, dimension polynomials and gauges.
//!
//! A left ideal in one differential indeterminate is summarized by the
//! minimal leading exponents E of a reduced basis under a graded order. The
//! number of monomials of total degree ≤ s outside E + ℕᵐ is eventually
//! ω(s) = Σ aᵢ·C(s+i, i), and the gauge is (τ, a_τ) with τ = deg ω.
//!
//! Only the gauge is a birational invariant; ω itself depends on the
//! presentation and is exposed for inspection.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::groebner::{Engine, GroebnerBasis, GroebnerError, LeftIdeal};
use crate::ore::{MultiIndex, TermOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaugeError {
    #[error("expected {expected} derivations, found {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("staircases need a graded term order, got {0}")]
    NotGraded(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// Minimal antichain of leading exponents in ℕᵐ, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Staircase {
    m: usize,
    leading_exponents: Vec<MultiIndex>,
}

impl Staircase {
    /// Keep the divisibility-minimal elements of `indices`.
    pub fn new(m: usize, indices: impl IntoIterator<Item = MultiIndex>) -> Self {
        let mut all: Vec<MultiIndex> = indices.into_iter().collect();
        for e in &all {
            assert_eq!(e.len(), m, "index length must equal m");
        }
        all.sort_by_key(|e| (e.order(), e.clone()));
        all.dedup();
        let mut kept: Vec<MultiIndex> = Vec::new();
        for e in all {
            if !kept.iter().any(|k| k.divides(&e)) {
                kept.push(e);
            }
        }
        kept.sort();
        Staircase {
            m,
            leading_exponents: kept,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn leading_exponents(&self) -> &[MultiIndex] {
        &self.leading_exponents
    }

    pub fn is_empty(&self) -> bool {
        self.leading_exponents.is_empty()
    }

    /// True if `idx` lies in E + ℕᵐ.
    pub fn covers(&self, idx: &MultiIndex) -> bool {
        self.leading_exponents.iter().any(|e| e.divides(idx))
    }

    /// Total degree of lcm(E), or 0 for E = ∅.
    pub fn lcm_order(&self) -> u32 {
        self.leading_exponents
            .iter()
            .fold(MultiIndex::zero(self.m), |acc, e| acc.lcm(e))
            .order()
    }
}

/// ω(s) = Σ aᵢ·C(s+i, i), equal to the Hilbert count for all s ≥ `valid_from`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumericalPolynomial {
    pub binomial_coefficients: Vec<i64>,
    pub valid_from: u64,
}

impl NumericalPolynomial {
    pub fn eval(&self, s: i64) -> i64 {
        self.binomial_coefficients
            .iter()
            .enumerate()
            .map(|(i, a)| a * binom_poly(s + i as i64, i as u32))
            .sum()
    }

    /// Coefficients c₀, c₁, … of ω(s) = Σ cₖ·sᵏ.
    pub fn monomial_coefficients(&self) -> Vec<BigRational> {
        let n = self.binomial_coefficients.len();
        let mut out = vec![BigRational::zero(); n.max(1)];
        for (i, &a) in self.binomial_coefficients.iter().enumerate() {
            if a == 0 {
                continue;
            }
            // C(s+i, i) = Π_{k=1..i} (s+k)/k
            let mut p = vec![BigRational::one()];
            for k in 1..=i {
                let mut q = vec![BigRational::zero(); p.len() + 1];
                for (d, c) in p.iter().enumerate() {
                    q[d + 1] += c;
                    q[d] += c * BigRational::from_integer(BigInt::from(k));
                }
                let inv = BigRational::new(BigInt::one(), BigInt::from(k));
                p = q.into_iter().map(|c| c * &inv).collect();
            }
            for (d, c) in p.into_iter().enumerate() {
                out[d] += c * BigRational::from_integer(BigInt::from(a));
            }
        }
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Expanded form in `s`, e.g. `2*s + 2`.
    pub fn render(&self) -> String {
        let coeffs = self.monomial_coefficients();
        let mut out = String::new();
        for (d, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match (d, mag.is_one()) {
                (0, _) => fmt_rational(&mag),
                (_, true) => power(d),
                (_, false) => format!("{}*{}", fmt_rational(&mag), power(d)),
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn power(d: usize) -> String {
    if d == 1 {
        "s".to_string()
    } else {
        format!("s^{d}")
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for NumericalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Differential type and typical differential dimension, ordered
/// lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gauge {
    pub tau: i64,
    pub a_tau: i64,
}

impl Gauge {
    pub const TRIVIAL: Gauge = Gauge { tau: -1, a_tau: 0 };

    pub fn new(tau: i64, a_tau: i64) -> Self {
        Gauge { tau, a_tau }
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.tau, self.a_tau)
    }
}

/// C(n, k) as a polynomial in n, evaluated at an arbitrary integer.
fn binom_poly(n: i64, k: u32) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 0..k as i128 {
        num *= n as i128 - j;
        den *= j + 1;
    }
    (num / den) as i64
}

/// Minimal leading exponents of a basis computed under a graded order.
pub fn staircase_of(b: &GroebnerBasis) -> Result<Staircase, GaugeError> {
    if !b.order().is_graded() {
        return Err(GaugeError::NotGraded(
            b.order().describe(&b.ring().var_names()),
        ));
    }
    Ok(Staircase::new(b.ring().nvars(), b.leading_indices()))
}

/// Monomials of total degree ≤ s outside E + ℕᵐ.
pub fn hilbert_count(e: &Staircase, s: u64) -> u64 {
    fn walk(e: &Staircase, cur: &mut Vec<u32>, left: u32, out: &mut u64) {
        if cur.len() == e.m {
            if !e.covers(&MultiIndex::new(cur.clone())) {
                *out += 1;
            }
            return;
        }
        for k in 0..=left {
            cur.push(k);
            walk(e, cur, left - k, out);
            cur.pop();
        }
    }
    if e.is_empty() {
        return binom_poly(s as i64 + e.m as i64, e.m as u32) as u64;
    }
    let mut out = 0;
    walk(e, &mut Vec::with_capacity(e.m), s as u32, &mut out);
    out
}

/// Fit the binomial-basis coefficients through `m+1` counts starting at `s0`.
fn fit(e: &Staircase, s0: u64) -> Vec<i64> {
    let n = e.m + 1;
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            let s = (s0 + r as u64) as i64;
            let mut row: Vec<BigRational> = (0..n)
                .map(|i| {
                    BigRational::from_integer(BigInt::from(binom_poly(s + i as i64, i as u32)))
                })
                .collect();
            row.push(BigRational::from_integer(BigInt::from(hilbert_count(
                e, s as u64,
            ))));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .expect("nonsingular");
        rows.swap(col, p);
        let piv = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = &*x / &piv;
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    rows.iter()
        .map(|row| {
            let v = &row[n];
            assert!(v.is_integer(), "binomial coefficients are integral");
            v.to_integer().to_i64().expect("coefficient fits in i64")
        })
        .collect()
}

fn trim(mut a: Vec<i64>) -> Vec<i64> {
    while a.len() > 1 && a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Smallest s* such that ω agrees with the Hilbert count on [s*, ∞).
/// Agreement is guaranteed from max(0, |lcm E| − m) on.
fn valid_from(e: &Staircase, coeffs: &[i64]) -> u64 {
    let probe = NumericalPolynomial {
        binomial_coefficients: coeffs.to_vec(),
        valid_from: 0,
    };
    let mut v = (e.lcm_order() as i64 - e.m as i64).max(0) as u64;
    while v > 0 && probe.eval(v as i64 - 1) == hilbert_count(e, v - 1) as i64 {
        v -= 1;
    }
    v
}

/// Eventual polynomial of `hilbert_count` by fit-and-verify.
pub fn dimension_polynomial(e: &Staircase) -> NumericalPolynomial {
    let m = e.m as u64;
    let bound = (e.lcm_order() as u64).saturating_sub(m);
    let mut s0 = 0u64;
    loop {
        let coeffs = fit(e, s0);
        let probe = NumericalPolynomial {
            binomial_coefficients: coeffs.clone(),
            valid_from: s0,
        };
        let last = (s0 + 2 * m + 2).max(bound + m + 1);
        let first_bad =
            (s0 + m + 1..=last).find(|&s| probe.eval(s as i64) != hilbert_count(e, s) as i64);
        match first_bad {
            None => {
                let valid = valid_from(e, &coeffs);
                return NumericalPolynomial {
                    binomial_coefficients: trim(coeffs),
                    valid_from: valid,
                };
            }
            Some(_) => s0 += 1,
        }
    }
}

/// Closed form for m = 2: with i₁ the least i-exponent and j_t the least
/// j-exponent in E, d = i₁ + j_t and W the uncovered points of the quarter
/// plane (i₁, j_t) + ℕ², ω(s) = d·s + (3d − d²)/2 + |W|.
pub fn dimension_polynomial_m2(e: &Staircase) -> Result<NumericalPolynomial, GaugeError> {
    if e.m != 2 {
        return Err(GaugeError::WrongArity {
            expected: 2,
            found: e.m,
        });
    }
    if e.is_empty() {
        return Ok(NumericalPolynomial {
            binomial_coefficients: vec![0, 0, 1],
            valid_from: 0,
        });
    }
    let pts: Vec<(u32, u32)> = e
        .leading_exponents
        .iter()
        .map(|x| (x.exponents()[0], x.exponents()[1]))
        .collect();
    let i1 = pts.iter().map(|p| p.0).min().unwrap();
    let jt = pts.iter().map(|p| p.1).min().unwrap();
    let imax = pts.iter().map(|p| p.0).max().unwrap();
    let jmax = pts.iter().map(|p| p.1).max().unwrap();
    let mut w = 0i64;
    for i in i1..imax.max(i1 + 1) {
        for j in jt..jmax.max(jt + 1) {
            if !e.covers(&MultiIndex::new(vec![i, j])) {
                w += 1;
            }
        }
    }
    let d = (i1 + jt) as i64;
    let coeffs = trim(vec![(d - d * d) / 2 + w, d]);
    let valid = valid_from(e, &coeffs);
    Ok(NumericalPolynomial {
        binomial_coefficients: coeffs,
        valid_from: valid,
    })
}

/// τ = largest i with aᵢ ≠ 0 and a_τ; ω ≡ 0 gives (−1, 0).
pub fn gauge_of(omega: &NumericalPolynomial) -> Gauge {
    match omega
        .binomial_coefficients
        .iter()
        .enumerate()
        .rev()
        .find(|(_, a)| **a != 0)
    {
        Some((i, &a)) => Gauge::new(i as i64, a),
        None => Gauge::TRIVIAL,
    }
}

/// Everything `gauge_of_ideal` computes along the way.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeReport {
    pub basis: GroebnerBasis,
    pub staircase: Staircase,
    pub omega: NumericalPolynomial,
    pub gauge: Gauge,
}

pub fn analyze_ideal(i: &LeftIdeal, engine: &Engine) -> Result<GaugeReport, GaugeError> {
    let basis = engine.basis(i)?;
    analyze_basis(basis)
}

pub fn analyze_basis(basis: GroebnerBasis) -> Result<GaugeReport, GaugeError> {
    if basis.ring().num_tags() != 0 {
        return Err(GaugeError::WrongArity {
            expected: basis.ring().num_derivations(),
            found: basis.ring().nvars(),
        });
    }
    let staircase = staircase_of(&basis)?;
    let omega = dimension_polynomial(&staircase);
    let gauge = gauge_of(&omega);
    Ok(GaugeReport {
        basis,
        staircase,
        omega,
        gauge,
    })
}

/// Gauge of the solution group of `i`.
pub fn gauge_of_ideal(i: &LeftIdeal, ord: &TermOrder) -> Result<Gauge, GaugeError> {
    Ok(analyze_ideal(i, &Engine::new(ord.clone()))?.gauge)
}
