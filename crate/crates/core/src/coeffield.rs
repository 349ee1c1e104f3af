//! The coefficient field K = ℚ(x₁,…,x_p, g₁,…,g_q) with commuting derivations.
//!
//! Base variables, constants and auxiliary generators are all polynomial
//! variables of one ring; what distinguishes them is the derivation table,
//! which records ∂ᵢ(v) for every derivation `i` and every symbol `v`. A constant
//! is a generator whose table row is identically zero.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::parse::{is_identifier, parse_expr, Expr, ParseError};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Expr {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("generator '{generator}' has no derivation table entry for '{derivation}'")]
    Closure {
        generator: String,
        derivation: String,
    },
    #[error("duplicate name '{0}'")]
    DuplicateName(String),
    #[error("unknown symbol '{name}' at {position}")]
    UnknownSymbol { name: String, position: usize },
    #[error("derivation '{name}' at {position} cannot appear in a coefficient")]
    NotACoefficient { name: String, position: usize },
    #[error("division by zero")]
    DivisionByZero,
}

/// Exact element of K in canonical form.
///
/// The denominator is monic with respect to the lexicographic order on
/// monomials (so its leading coefficient is positive) and coprime to the
/// numerator; zero is `0/1`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement {
    num: Poly,
    den: Poly,
}

impl FieldElement {
    pub fn zero(nvars: usize) -> Self {
        FieldElement {
            num: Poly::zero(nvars),
            den: Poly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(Poly::one(nvars))
    }

    pub fn from_int(nvars: usize, n: i64) -> Self {
        Self::from_poly(Poly::from_int(nvars, n))
    }

    pub fn from_rational(nvars: usize, q: BigRational) -> Self {
        Self::from_poly(Poly::constant(nvars, q))
    }

    pub fn from_poly(num: Poly) -> Self {
        let den = Poly::one(num.nvars());
        FieldElement { num, den }
    }

    /// Build `num/den` and normalize.
    pub fn new(num: Poly, den: Poly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero(num.nvars());
        }
        if let Some(c) = den.constant_value() {
            let inv = c.recip();
            return FieldElement {
                num: num.scale(&inv),
                den: Poly::one(num.nvars()),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient().unwrap().clone();
        if lc.is_one() {
            FieldElement { num, den }
        } else {
            let inv = lc.recip();
            FieldElement {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// `num/den` already in lowest terms; only fix the denominator's scale.
    fn with_monic_den(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coefficient().unwrap().clone();
        if lc.is_one() {
            FieldElement { num, den }
        } else {
            let inv = lc.recip();
            FieldElement {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    /// Re-normalize; the identity on values built through this API.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        FieldElement {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars());
        }
        FieldElement {
            num: self.num.scale(&BigRational::from_integer(k.clone())),
            den: self.den.clone(),
        }
    }

    /// True when the displayed form starts with a minus sign.
    pub fn looks_negative(&self, names: &[String]) -> bool {
        self.render(names).starts_with('-')
    }

    /// Render with integer numerator and denominator sharing no integer
    /// factor, e.g. `(x + 1)/(2*x^2 + 1)`.
    pub fn render(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.render(names);
        }
        let k = joint_normalizer(&self.num, &self.den);
        let num = self.num.scale(&k);
        let den = self.den.scale(&k);
        let num_s = if num.num_terms() > 1 {
            format!("({})", num.render(names))
        } else {
            num.render(names)
        };
        let den_s = den.render(names);
        if den.num_terms() > 1 || den_s.contains('*') {
            format!("{num_s}/({den_s})")
        } else {
            format!("{num_s}/{den_s}")
        }
    }
}

/// Positive rational `k` making `k·num` and `k·den` integral with no common
/// integer factor.
fn joint_normalizer(num: &Poly, den: &Poly) -> BigRational {
    use num_integer::Integer;
    let mut den_lcm = BigInt::one();
    for (_, c) in num.terms().chain(den.terms()) {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut num_gcd = BigInt::zero();
    for (_, c) in num.terms().chain(den.terms()) {
        num_gcd = num_gcd.gcd(&(c * BigRational::from_integer(den_lcm.clone())).to_integer());
    }
    BigRational::new(den_lcm, num_gcd)
}

/// (n/d)' for coprime n, d with polynomial derivatives n', d'.
///
/// With h = gcd(d, d'), d = h·e and d' = h·k, the derivative is
/// (n'·e − n·k)/(d·e), and only factors of h can still cancel.
fn quotient_rule(n: &Poly, d: &Poly, dn: &Poly, dd: &Poly) -> FieldElement {
    let h = Poly::gcd(d, dd);
    let e = d.exact_div(&h).expect("gcd divides");
    let k = dd.exact_div(&h).expect("gcd divides");
    let mut top = &(dn * &e) - &(n * &k);
    if top.is_zero() {
        return FieldElement::zero(n.nvars());
    }
    let mut den = d * &e;
    if !h.is_constant() {
        loop {
            let hd = Poly::gcd(&den, &h);
            let g = Poly::gcd(&top, &hd);
            if g.is_constant() {
                break;
            }
            top = top.exact_div(&g).expect("gcd divides");
            den = den.exact_div(&g).expect("gcd divides");
        }
    }
    FieldElement::with_monic_den(top, den)
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return FieldElement::from_poly(num);
            }
            return FieldElement::normalized(num, self.den.clone());
        }
        // With g = gcd(d₁, d₂), only factors of g can cancel.
        let g = Poly::gcd(&self.den, &rhs.den);
        let d1 = self.den.exact_div(&g).expect("gcd divides");
        let d2 = rhs.den.exact_div(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        if num.is_zero() {
            return FieldElement::zero(self.nvars());
        }
        let h = Poly::gcd(&num, &g);
        let num = num.exact_div(&h).expect("gcd divides");
        let den = &d1 * &rhs.den.exact_div(&h).expect("gcd divides");
        FieldElement::with_monic_den(num, den)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self + &(-rhs)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        if self.is_zero() || rhs.is_zero() {
            return FieldElement::zero(self.nvars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return FieldElement::from_poly(&self.num * &rhs.num);
        }
        let g1 = Poly::gcd(&self.num, &rhs.den);
        let g2 = Poly::gcd(&rhs.num, &self.den);
        let q = |a: &Poly, g: &Poly| a.exact_div(g).expect("gcd divides");
        let num = &q(&self.num, &g1) * &q(&rhs.num, &g2);
        let den = &q(&self.den, &g2) * &q(&rhs.den, &g1);
        FieldElement::with_monic_den(num, den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Variable,
    Constant,
    Generator,
}

/// Coefficient-field declaration: derivations, symbols and the derivation
/// table `table[i][v] = ∂ᵢ(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    derivations: Vec<String>,
    symbols: Vec<String>,
    kinds: Vec<SymbolKind>,
    table: Vec<Vec<FieldElement>>,
}

impl FieldSpec {
    pub fn builder() -> FieldSpecBuilder {
        FieldSpecBuilder::default()
    }

    pub fn num_derivations(&self) -> usize {
        self.derivations.len()
    }

    pub fn derivation_names(&self) -> &[String] {
        &self.derivations
    }

    pub fn derivation_index(&self, name: &str) -> Option<usize> {
        self.derivations.iter().position(|d| d == name)
    }

    /// Names of all polynomial variables of K (variables, constants, generators).
    pub fn symbol_names(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    pub fn symbol_kind(&self, v: usize) -> SymbolKind {
        self.kinds[v]
    }

    pub fn nvars(&self) -> usize {
        self.symbols.len()
    }

    /// ∂ᵢ of symbol `v` as recorded in the table.
    pub fn table_entry(&self, i: usize, v: usize) -> &FieldElement {
        &self.table[i][v]
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.nvars())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(self.nvars())
    }

    pub fn int(&self, n: i64) -> FieldElement {
        FieldElement::from_int(self.nvars(), n)
    }

    pub fn symbol(&self, name: &str) -> Option<FieldElement> {
        self.symbol_index(name)
            .map(|v| FieldElement::from_poly(Poly::var(self.nvars(), v)))
    }

    fn derive_poly(&self, p: &Poly, i: usize) -> FieldElement {
        let mut acc = self.zero();
        for v in 0..self.nvars() {
            let entry = &self.table[i][v];
            if entry.is_zero() || p.degree_in(v) == 0 {
                continue;
            }
            let part = FieldElement::from_poly(p.partial(v));
            acc = &acc + &(&part * entry);
        }
        acc
    }

    /// Apply derivation `i` (quotient rule plus table substitution).
    pub fn derive(&self, a: &FieldElement, i: usize) -> FieldElement {
        assert!(i < self.num_derivations(), "derivation index out of range");
        if a.is_constant() {
            return self.zero();
        }
        let dn = self.derive_poly(&a.num, i);
        if a.den.is_one() {
            return dn;
        }
        let dd = self.derive_poly(&a.den, i);
        if dn.den.is_one() && dd.den.is_one() {
            return quotient_rule(&a.num, &a.den, &dn.num, &dd.num);
        }
        let den = FieldElement::from_poly(a.den.clone());
        // (n'·d − n·d') / d²
        let top = &(&dn * &den) - &(&FieldElement::from_poly(a.num.clone()) * &dd);
        let den_sq = FieldElement::from_poly(&a.den * &a.den);
        top.checked_div(&den_sq).expect("nonzero denominator")
    }

    /// Evaluate a coefficient expression.
    pub fn eval(&self, e: &Expr) -> Result<FieldElement, FieldError> {
        Ok(match e {
            Expr::Int(n) => {
                FieldElement::from_rational(self.nvars(), BigRational::from_integer(n.clone()))
            }
            Expr::Ident { name, position } => match self.symbol(name) {
                Some(v) => v,
                None if self.derivation_index(name).is_some() => {
                    return Err(FieldError::NotACoefficient {
                        name: name.clone(),
                        position: *position,
                    })
                }
                None => {
                    return Err(FieldError::UnknownSymbol {
                        name: name.clone(),
                        position: *position,
                    })
                }
            },
            Expr::Neg(a) => -&self.eval(a)?,
            Expr::Add(a, b) => &self.eval(a)? + &self.eval(b)?,
            Expr::Sub(a, b) => &self.eval(a)? - &self.eval(b)?,
            Expr::Mul(a, b) => &self.eval(a)? * &self.eval(b)?,
            Expr::Div { lhs, rhs, .. } => self.eval(lhs)?.checked_div(&self.eval(rhs)?)?,
            Expr::Pow(a, n) => self.eval(a)?.pow(*n),
        })
    }

    /// Parse and evaluate a coefficient expression such as `c*(1 + T^2)`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement, FieldError> {
        let e = parse_expr(text).map_err(|source| FieldError::Expr { line: 0, source })?;
        self.eval(&e)
    }

    pub fn render(&self, a: &FieldElement) -> String {
        a.render(&self.symbols)
    }
}

/// Programmatic construction of a [`FieldSpec`].
#[derive(Debug, Default, Clone)]
pub struct FieldSpecBuilder {
    derivations: Vec<String>,
    symbols: Vec<(String, SymbolKind)>,
    attachments: Vec<(String, Option<String>)>,
    entries: Vec<(String, String, String)>,
}

impl FieldSpecBuilder {
    pub fn derivation(mut self, name: &str) -> Self {
        self.derivations.push(name.to_string());
        self
    }

    /// A base variable; `attached` names the derivation with ∂(x) = 1.
    /// `None` falls back to a derivation named `d<name>` if one exists.
    pub fn variable(mut self, name: &str, attached: Option<&str>) -> Self {
        self.symbols.push((name.to_string(), SymbolKind::Variable));
        self.attachments
            .push((name.to_string(), attached.map(str::to_string)));
        self
    }

    /// A base variable annihilated by every derivation.
    pub fn detached_variable(mut self, name: &str) -> Self {
        self.symbols.push((name.to_string(), SymbolKind::Variable));
        self.attachments
            .push((name.to_string(), Some(String::new())));
        self
    }

    pub fn constant(mut self, name: &str) -> Self {
        self.symbols.push((name.to_string(), SymbolKind::Constant));
        self
    }

    pub fn generator(mut self, name: &str) -> Self {
        self.symbols.push((name.to_string(), SymbolKind::Generator));
        self
    }

    /// Table entry `derivation(symbol) = expr`.
    pub fn entry(mut self, derivation: &str, symbol: &str, expr: &str) -> Self {
        self.entries
            .push((derivation.to_string(), symbol.to_string(), expr.to_string()));
        self
    }

    pub fn build(self) -> Result<FieldSpec, FieldError> {
        self.build_with_lines(&[])
    }

    fn build_with_lines(self, entry_lines: &[usize]) -> Result<FieldSpec, FieldError> {
        let mut seen = HashSet::new();
        for name in self
            .derivations
            .iter()
            .chain(self.symbols.iter().map(|(s, _)| s))
        {
            if !is_identifier(name) {
                return Err(FieldError::Syntax {
                    line: 0,
                    message: format!("'{name}' is not an identifier"),
                });
            }
            if !seen.insert(name.clone()) {
                return Err(FieldError::DuplicateName(name.clone()));
            }
        }
        let m = self.derivations.len();
        let n = self.symbols.len();
        let mut spec = FieldSpec {
            derivations: self.derivations,
            symbols: self.symbols.iter().map(|(s, _)| s.clone()).collect(),
            kinds: self.symbols.iter().map(|(_, k)| *k).collect(),
            table: vec![vec![FieldElement::zero(n); n]; m],
        };
        let mut defined = vec![vec![false; n]; m];
        for (name, attached) in &self.attachments {
            let v = spec.symbol_index(name).unwrap();
            let target = match attached {
                Some(d) if d.is_empty() => None,
                Some(d) => {
                    Some(
                        spec.derivation_index(d)
                            .ok_or_else(|| FieldError::UnknownSymbol {
                                name: d.clone(),
                                position: 0,
                            })?,
                    )
                }
                None => spec.derivation_index(&format!("d{name}")),
            };
            for (i, row) in defined.iter_mut().enumerate() {
                row[v] = true;
                if Some(i) == target {
                    spec.table[i][v] = FieldElement::one(n);
                }
            }
        }
        for v in 0..n {
            if spec.kinds[v] == SymbolKind::Constant {
                for row in defined.iter_mut() {
                    row[v] = true;
                }
            }
        }
        for (k, (d, s, text)) in self.entries.iter().enumerate() {
            let line = entry_lines.get(k).copied().unwrap_or(0);
            let i = spec
                .derivation_index(d)
                .ok_or_else(|| FieldError::UnknownSymbol {
                    name: d.clone(),
                    position: 0,
                })?;
            let v = spec
                .symbol_index(s)
                .ok_or_else(|| FieldError::UnknownSymbol {
                    name: s.clone(),
                    position: 0,
                })?;
            if spec.kinds[v] == SymbolKind::Constant {
                return Err(FieldError::Syntax {
                    line,
                    message: format!("'{s}' is a constant; its derivatives are zero"),
                });
            }
            let e = parse_expr(text).map_err(|source| FieldError::Expr { line, source })?;
            spec.table[i][v] = spec.eval(&e)?;
            defined[i][v] = true;
        }
        for v in 0..n {
            for i in 0..m {
                if !defined[i][v] {
                    return Err(FieldError::Closure {
                        generator: spec.symbols[v].clone(),
                        derivation: spec.derivations[i].clone(),
                    });
                }
            }
        }
        Ok(spec)
    }
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Load a field declaration block.
///
/// ```text
/// derivations: dx, dt
/// variables: x, t          # x:dx attaches explicitly, x:- detaches
/// constants: c
/// generators: T
/// dx(T) = c*(1 + T^2)
/// dt(T) = 0
/// ```
///
/// `#` starts a comment. Every generator needs an entry for every derivation.
pub fn load_spec(text: &str) -> Result<FieldSpec, FieldError> {
    let mut b = FieldSpec::builder();
    let mut entry_lines = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content
            .split_once(':')
            .filter(|(k, _)| is_identifier(k.trim()))
        {
            match key.trim() {
                "derivations" => {
                    for d in split_list(value) {
                        b = b.derivation(&d);
                    }
                }
                "variables" => {
                    for item in split_list(value) {
                        b = match item.split_once(':') {
                            Some((name, "-")) => b.detached_variable(name.trim()),
                            Some((name, d)) => b.variable(name.trim(), Some(d.trim())),
                            None => b.variable(&item, None),
                        };
                    }
                }
                "constants" => {
                    for c in split_list(value) {
                        b = b.constant(&c);
                    }
                }
                "generators" => {
                    for g in split_list(value) {
                        b = b.generator(&g);
                    }
                }
                other => {
                    return Err(FieldError::Syntax {
                        line,
                        message: format!("unknown key '{other}'"),
                    })
                }
            }
            continue;
        }
        // derivation(symbol) = expression
        let Some((lhs, rhs)) = content.split_once('=') else {
            return Err(FieldError::Syntax {
                line,
                message: format!("cannot parse '{content}'"),
            });
        };
        let lhs = lhs.trim();
        let parsed = lhs
            .strip_suffix(')')
            .and_then(|s| s.split_once('('))
            .map(|(d, s)| (d.trim(), s.trim()))
            .filter(|(d, s)| is_identifier(d) && is_identifier(s));
        let Some((d, s)) = parsed else {
            return Err(FieldError::Syntax {
                line,
                message: format!("expected 'derivation(symbol) = expr', found '{lhs}'"),
            });
        };
        b = b.entry(d, s, rhs.trim());
        entry_lines.push(line);
    }
    b.build_with_lines(&entry_lines)
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "derivations: {}", self.derivations.join(", "))?;
        for (v, name) in self.symbols.iter().enumerate() {
            for (i, d) in self.derivations.iter().enumerate() {
                let e = &self.table[i][v];
                if !e.is_zero() {
                    writeln!(f, "{d}({name}) = {}", e.render(&self.symbols))?;
                }
            }
        }
        Ok(())
    }
}

/// Binomial-style helper used by operator multiplication: `k·a` for integer `k`.
pub(crate) fn scale_by(a: &FieldElement, k: &BigInt) -> FieldElement {
    if k.is_one() {
        a.clone()
    } else {
        a.scale_int(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> FieldSpec {
        load_spec("derivations: dx, dy\nvariables: x, y\n").unwrap()
    }

    pub(crate) fn tan_field() -> FieldSpec {
        load_spec(
            "derivations: dx, dt
             variables: x, t
             constants: c
             generators: T
             dx(T) = c*(1 + T^2)
             dt(T) = 0",
        )
        .unwrap()
    }

    #[test]
    fn default_attachment_is_by_name() {
        let k = xy();
        let x = k.symbol_index("x").unwrap();
        let y = k.symbol_index("y").unwrap();
        assert!(k.table_entry(0, x).is_one());
        assert!(k.table_entry(0, y).is_zero());
        assert!(k.table_entry(1, y).is_one());
        assert!(k.table_entry(1, x).is_zero());
    }

    #[test]
    fn tan_generator_table() {
        let k = tan_field();
        let t = k.symbol("T").unwrap();
        assert_eq!(k.derive(&t, 0), k.parse_element("c*(1+T^2)").unwrap());
        assert!(k.derive(&t, 1).is_zero());
        assert!(k.derive(&k.symbol("c").unwrap(), 0).is_zero());
    }

    #[test]
    fn incomplete_table_is_a_closure_error() {
        let err = load_spec("derivations: dx, dt\nvariables: x, t\ngenerators: g\ndx(g) = g")
            .unwrap_err();
        assert_eq!(
            err,
            FieldError::Closure {
                generator: "g".into(),
                derivation: "dt".into()
            }
        );
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = load_spec("derivations: dx, dx\nvariables: x").unwrap_err();
        assert_eq!(err, FieldError::DuplicateName("dx".into()));
        let err = load_spec("derivations: dx\nvariables: x\nconstants: x").unwrap_err();
        assert_eq!(err, FieldError::DuplicateName("x".into()));
    }

    #[test]
    fn malformed_spec_is_a_syntax_error() {
        assert!(matches!(
            load_spec("derivations: dx\nnonsense here"),
            Err(FieldError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            load_spec("derivations: dx\nvariables: x\ngenerators: g\ndx(g) = g +"),
            Err(FieldError::Expr { line: 4, .. })
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let k = xy();
        let e = |s: &str| k.parse_element(s).unwrap();
        assert!((&e("x/(x+1)") + &e("1/(x+1)")).is_one());
        assert!((&e("1/x") * &e("x")).is_one());
        assert_eq!(e("(x^2 - 1)/(x - 1)"), e("x + 1"));
        assert_eq!(
            e("x").checked_div(&k.zero()),
            Err(FieldError::DivisionByZero)
        );
        assert!(matches!(
            k.parse_element("dx"),
            Err(FieldError::NotACoefficient { .. })
        ));
        assert!(matches!(
            k.parse_element("z"),
            Err(FieldError::UnknownSymbol { .. })
        ));
    }

    #[test]
    fn canonical_denominator_sign() {
        let k = xy();
        let a = k.parse_element("1/(-2*x - 2)").unwrap();
        assert!(a.denominator().leading_coefficient().unwrap().is_one());
        assert_eq!(a, k.parse_element("-1/(2*(x+1))").unwrap());
        assert_eq!(a.render(k.symbol_names()), "-1/(2*x + 2)");
    }

    #[test]
    fn derivative_examples() {
        let k = xy();
        let e = |s: &str| k.parse_element(s).unwrap();
        assert_eq!(k.derive(&e("x^2"), 0), e("2*x"));
        assert_eq!(k.derive(&e("1/x"), 0), e("-1/x^2"));
        assert!(k.derive(&e("x^2"), 1).is_zero());
    }
}
