//! Sparse multivariate polynomials over ℚ.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order is
//! lexicographic with variable 0 most significant. The gcd is a recursive
//! primitive-PRS over `ℚ[x₀][x₁]…`, which is plenty for the small coefficient
//! fields that operator computations run over.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector of a polynomial monomial.
pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The polynomial consisting of the single variable `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: Exponents, c: BigRational) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().iter().all(|&e| e == 0),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Value of a constant polynomial (zero for the zero polynomial).
    pub fn constant_value(&self) -> Option<BigRational> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.terms
                .values()
                .next()
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exponents, &BigRational)> {
        self.terms.last_key_value()
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn mul_term(&self, e: &[u32], c: &BigRational) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(f, a)| (f.iter().zip(e).map(|(x, y)| x + y).collect(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `v`.
    pub fn partial(&self, v: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[v] -= 1;
            out.add_term(f, c * BigRational::from_integer(BigInt::from(e[v])));
        }
        out
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "exact division by the zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if m.iter().zip(&dm).any(|(a, b)| a < b) {
                return None;
            }
            let tm: Exponents = m.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let tc = c / &dc;
            rem = &rem - &d.mul_term(&tm, &tc);
            quot.add_term(tm, tc);
        }
        Some(quot)
    }

    /// Scale so that the lexicographic leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            Some(c) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Split into coefficients with respect to variable `v` (index = degree).
    fn to_univariate(&self, v: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(self.nvars); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let d = f[v] as usize;
            f[v] = 0;
            out[d].add_term(f, c.clone());
        }
        trim(&mut out);
        out
    }

    fn from_univariate(coeffs: &[Poly], v: usize, nvars: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        for (d, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut f = e.clone();
                f[v] += d as u32;
                out.add_term(f, a.clone());
            }
        }
        out
    }

    /// Monic greatest common divisor. `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Poly::one(a.nvars);
        }
        if a == b {
            return a.monic();
        }
        let n = a.nvars;
        if a.terms.len() == 1 || b.terms.len() == 1 {
            return monomial_gcd(a, b);
        }
        // A variable present in only one argument only contributes content.
        if let Some(v) = (0..n).find(|&v| (a.degree_in(v) > 0) != (b.degree_in(v) > 0)) {
            return if a.degree_in(v) == 0 {
                Poly::gcd(a, &content(&b.to_univariate(v)))
            } else {
                Poly::gcd(&content(&a.to_univariate(v)), b)
            };
        }
        let v = (0..n)
            .filter(|&v| a.degree_in(v) > 0)
            .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
            .expect("non-constant polynomial has a variable");
        let ua = a.to_univariate(v);
        let ub = b.to_univariate(v);
        if specialized_gcd_is_constant(&ua, &ub, v) {
            // No factor involves v: fold the coefficients, smaller side first.
            let (small, big) = if a.terms.len() <= b.terms.len() {
                (&ua, &ub)
            } else {
                (&ub, &ua)
            };
            let mut g = content(small);
            for c in big {
                if g.is_one() {
                    break;
                }
                g = Poly::gcd(&g, c);
            }
            return g;
        }
        if let Some(g) = heuristic_gcd(&integer_form(a), &integer_form(b)) {
            return g.monic();
        }
        let ca = content(&ua);
        let cb = content(&ub);
        let c = Poly::gcd(&ca, &cb);
        let pa = divide_all(&ua, &ca);
        let pb = divide_all(&ub, &cb);
        let g = prs_gcd(pa, pb);
        (&Poly::from_univariate(&g, v, n) * &c).monic()
    }

    /// Sets variable `v` to `value`.
    fn substitute(&self, v: usize, value: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let d = std::mem::take(&mut f[v]);
            out.add_term(f, c * num_traits::pow(value.clone(), d as usize));
        }
        out
    }

    /// Value at a point; `point[v]` is ignored when `skip == Some(v)`.
    fn eval_except(&self, point: &[BigRational], skip: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut k = c.clone();
            for (i, &d) in e.iter().enumerate() {
                if i != skip && d > 0 {
                    k *= num_traits::pow(point[i].clone(), d as usize);
                }
            }
            let mut f = vec![0; self.nvars];
            f[skip] = e[skip];
            out.add_term(f, k);
        }
        out
    }

    /// Human-readable rendering; terms in descending graded-lex order.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (i, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = c.abs();
            let mono = render_monomial(e, names);
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{mag}*{mono}");
            }
        }
        out
    }
}

fn render_monomial(e: &[u32], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], k)),
        }
    }
    parts.join("*")
}

fn trim(u: &mut Vec<Poly>) {
    while u.last().is_some_and(Poly::is_zero) {
        u.pop();
    }
}

fn content(u: &[Poly]) -> Poly {
    let mut by_size: Vec<&Poly> = u.iter().filter(|c| !c.is_zero()).collect();
    by_size.sort_by_key(|c| c.terms.len());
    let mut g = Poly::zero(u[0].nvars);
    for c in by_size {
        g = Poly::gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// gcd when one side is a single term: the shared power product.
fn monomial_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut e = vec![u32::MAX; a.nvars];
    for p in [a, b] {
        for k in p.terms.keys() {
            for (x, y) in e.iter_mut().zip(k) {
                *x = (*x).min(*y);
            }
        }
    }
    Poly::monomial(e, BigRational::one())
}

/// True if specializing every variable but `v` proves that `a` and `b`
/// share no factor involving `v`. The specialization keeps both
/// leading coefficients nonzero, so it can only overestimate the degree.
fn specialized_gcd_is_constant(a: &[Poly], b: &[Poly], v: usize) -> bool {
    let n = a[0].nvars;
    for attempt in 0..3i64 {
        let point: Vec<BigRational> = (0..n)
            .map(|i| BigRational::from_integer(BigInt::from(3 + 7 * i as i64 + 13 * attempt)))
            .collect();
        let spec = |u: &[Poly]| -> Vec<BigRational> {
            u.iter()
                .map(|c| {
                    c.eval_except(&point, v)
                        .constant_value()
                        .unwrap_or_else(BigRational::zero)
                })
                .collect()
        };
        let (sa, sb) = (spec(a), spec(b));
        if sa.last().is_some_and(Zero::is_zero) || sb.last().is_some_and(Zero::is_zero) {
            continue;
        }
        return univariate_gcd_degree(sa, sb) == 0;
    }
    false
}

fn univariate_gcd_degree(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> usize {
    let trim = |u: &mut Vec<BigRational>| {
        while u.last().is_some_and(Zero::is_zero) {
            u.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let q = a.last().unwrap() / b.last().unwrap();
            let k = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[i + k] -= &q * c;
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Integer multiple of `p` with coprime coefficients.
fn integer_form(p: &Poly) -> Poly {
    let den = p
        .terms
        .values()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let num = p.terms.values().fold(BigInt::zero(), |g, c| {
        g.gcd(&(c.numer() * &den / c.denom()))
    });
    p.scale(&BigRational::new(den, num))
}

fn integer_content(p: &Poly) -> BigInt {
    p.terms
        .values()
        .fold(BigInt::zero(), |g, c| g.gcd(c.numer()))
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms
        .values()
        .map(|c| c.numer().abs())
        .max()
        .unwrap_or_default()
}

/// gcd over the integers by evaluation at a large integer and ξ-adic
/// reconstruction. `None` if every attempt fails the trial division.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let n = a.nvars;
    let c = integer_content(a).gcd(&integer_content(b));
    let scale = BigRational::from_integer(c.clone());
    if a.is_constant() || b.is_constant() {
        return Some(Poly::constant(n, scale));
    }
    let pa = a.scale(&BigRational::from_integer(integer_content(a)).recip());
    let pb = b.scale(&BigRational::from_integer(integer_content(b)).recip());
    let v = (0..n).find(|&v| pa.degree_in(v) > 0 || pb.degree_in(v) > 0)?;
    let mut xi: BigInt = BigInt::from(2) * max_norm(&pa).min(max_norm(&pb)) + 29;
    for _ in 0..6 {
        let point = BigRational::from_integer(xi.clone());
        let ea = pa.substitute(v, &point);
        let eb = pb.substitute(v, &point);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(gamma) = heuristic_gcd(&ea, &eb) {
                let g = xi_adic(&gamma, v, &xi);
                if !g.is_zero() {
                    let g = g.scale(&BigRational::from_integer(integer_content(&g)).recip());
                    if pa.exact_div(&g).is_some() && pb.exact_div(&g).is_some() {
                        return Some(g.scale(&scale));
                    }
                }
            }
        }
        xi = xi * 73794u32 / 27011u32;
    }
    None
}

/// Reads the symmetric base-`xi` digits of `gamma` as coefficients of `v`.
fn xi_adic(gamma: &Poly, v: usize, xi: &BigInt) -> Poly {
    let half = xi / 2;
    let mut h = gamma.clone();
    let mut out = Poly::zero(gamma.nvars);
    let mut k = 0;
    while !h.is_zero() {
        let mut digit = Poly::zero(gamma.nvars);
        for (e, c) in &h.terms {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            digit.add_term(e.clone(), BigRational::from_integer(r));
        }
        h = (&h - &digit).scale(&BigRational::from_integer(xi.clone()).recip());
        for (e, c) in digit.terms {
            let mut f = e;
            f[v] = k;
            out.add_term(f, c);
        }
        k += 1;
    }
    out
}

fn divide_all(u: &[Poly], c: &Poly) -> Vec<Poly> {
    u.iter()
        .map(|x| x.exact_div(c).expect("content divides every coefficient"))
        .collect()
}

/// Primitive part with a normalized (monic) leading coefficient.
fn primitive(u: &[Poly]) -> Vec<Poly> {
    let c = content(u);
    let mut p = divide_all(u, &c);
    let lc = p.last().unwrap().leading_coefficient().unwrap().clone();
    if !lc.is_one() {
        let inv = lc.recip();
        p = p.iter().map(|x| x.scale(&inv)).collect();
    }
    p
}

/// Pseudo-remainder of `a` by `b` in the univariate representation.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    while !r.is_empty() && r.len() > db {
        let k = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + k] = &r[i + k] - &(&lr * bc);
        }
        debug_assert!(r.last().unwrap().is_zero());
        trim(&mut r);
    }
    r
}

fn prs_gcd(a: Vec<Poly>, b: Vec<Poly>) -> Vec<Poly> {
    let (mut r0, mut r1) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    loop {
        let r = prem(&r0, &r1);
        if r.is_empty() {
            return primitive(&r1);
        }
        if r.len() == 1 {
            return vec![Poly::one(r[0].nvars)];
        }
        r0 = r1;
        r1 = primitive(&r);
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        big
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            for (f, b) in &rhs.terms {
                out.add_term(e.iter().zip(f).map(|(x, y)| x + y).collect(), a * b);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var(2, 0)
    }
    fn y() -> Poly {
        Poly::var(2, 1)
    }
    fn c(n: i64) -> Poly {
        Poly::from_int(2, n)
    }

    #[test]
    fn exact_division() {
        // (x² − 1)/(x − 1) = x + 1
        let num = &(&x() * &x()) - &c(1);
        let den = &x() - &c(1);
        assert_eq!(num.exact_div(&den).unwrap(), &x() + &c(1));
        assert!(x().exact_div(&(&x() + &c(1))).is_none());
    }

    #[test]
    fn gcd_univariate_and_bivariate() {
        let a = &(&x() - &c(1)) * &(&x() + &c(2));
        let b = &(&x() - &c(1)) * &(&x() + &c(3));
        assert_eq!(Poly::gcd(&a, &b), &x() - &c(1));

        let common = &(&x() * &y()) + &c(1);
        let a = &common * &(&x() + &y());
        let b = &common.scale(&BigRational::from_integer(3.into())) * &(&x() - &y());
        assert_eq!(Poly::gcd(&a, &b), common);

        assert!(Poly::gcd(&x(), &y()).is_one());
        assert_eq!(Poly::gcd(&c(0), &(&x() * &c(4))), x());
    }

    #[test]
    fn gcd_with_content_in_other_variable() {
        // y·(x+1) and y²·(x+2): gcd y
        let a = &y() * &(&x() + &c(1));
        let b = &(&y() * &y()) * &(&x() + &c(2));
        assert_eq!(Poly::gcd(&a, &b), y());
    }

    #[test]
    fn gcd_of_high_powers() {
        let u = &(&x() - &y().scale(&BigRational::new(2.into(), 3.into()))) + &c(5);
        let v = &(&x() * &y()) + &c(1);
        let w = &x() + &y();
        let a = &u.pow(9) * &v.pow(2);
        let b = &(&u.pow(6) * &v) * &w.pow(3);
        assert_eq!(Poly::gcd(&a, &b), (&u.pow(6) * &v).monic());
        assert!(
            heuristic_gcd(&integer_form(&v.pow(4)), &integer_form(&w.pow(4)))
                .unwrap()
                .is_one()
        );
    }

    #[test]
    fn partial_derivative() {
        let p = &(&x() * &x()) * &y();
        assert_eq!(p.partial(0), &(&x() * &y()) * &c(2));
        assert_eq!(p.partial(1), &x() * &x());
    }

    #[test]
    fn rendering() {
        let names = vec!["x".to_string(), "y".to_string()];
        let p = &(&(&x() * &x()) - &(&y() * &c(2))) + &c(1);
        assert_eq!(p.render(&names), "x^2 - 2*y + 1");
    }
}
