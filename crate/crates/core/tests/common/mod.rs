#![allow(dead_code)]

use std::sync::Arc;

use deltagroup::{
    load_spec, FieldElement, FieldSpec, MultiIndex, OreOperator, OreRing, Staircase, TermOrder,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const LANDAU: &str = "dx^3 + x*dx^2*dy + 2*dx^2 + 2*(x+1)*dx*dy + dx + (x+2)*dy";
pub const L1: &str = "x*dx^2*dy + x^2*dx*dy^2 - dx^2 - dx*dy + x^2*dy^2 - dx - dy - x*dy";
pub const L2: &str =
    "dx^3 - x^2*dx*dy^2 + 3*dx^2 + 2*x*dx*dy + 3*dx*dy - x^2*dy^2 + 2*dx + 2*x*dy + 3*dy";
pub const CARTAN: &str = "x*dx^3 - x^2*dx^2*dt - 2*dx^2 - x*dx*dt + x^2*dt^2 + 2*dt";

pub const TAN_FIELD: &str = "derivations: dx, dt
variables: x, t
constants: c
generators: T, lam
dx(T) = c*(1 + T^2)
dt(T) = 0
dx(lam) = -c*T*lam
dt(lam) = c^2*lam";

pub fn xy_field() -> FieldSpec {
    load_spec("derivations: dx, dy\nvariables: x, y").unwrap()
}

pub fn xt_field() -> FieldSpec {
    load_spec("derivations: dx, dt\nvariables: x, t").unwrap()
}

pub fn x_field() -> FieldSpec {
    load_spec("derivations: dx\nvariables: x").unwrap()
}

pub fn tan_field() -> FieldSpec {
    load_spec(TAN_FIELD).unwrap()
}

pub fn ring(spec: FieldSpec) -> Arc<OreRing> {
    OreRing::new(spec)
}

pub fn op(r: &Arc<OreRing>, s: &str) -> OreOperator {
    deltagroup::parse_operator(s, r).unwrap()
}

pub fn grlex(r: &Arc<OreRing>) -> TermOrder {
    TermOrder::graded_lex(r.num_derivations())
}

/// Σ c·Π symbol^e over the given terms.
pub fn poly_from(spec: &FieldSpec, terms: &[(i64, Vec<u32>)]) -> FieldElement {
    let names = spec.symbol_names().to_vec();
    let mut acc = spec.zero();
    for (c, exps) in terms {
        let mut t = spec.int(*c);
        for (name, &e) in names.iter().zip(exps) {
            t = &t * &spec.symbol(name).unwrap().pow(e);
        }
        acc = &acc + &t;
    }
    acc
}

/// Random polynomial with small coefficients and degree ≤ `deg` per symbol.
pub fn random_poly(
    rng: &mut ChaCha8Rng,
    spec: &FieldSpec,
    deg: u32,
    nterms: usize,
) -> FieldElement {
    let n = spec.nvars();
    let terms: Vec<(i64, Vec<u32>)> = (0..rng.gen_range(1..=nterms))
        .map(|_| {
            (
                rng.gen_range(-3..=3),
                (0..n).map(|_| rng.gen_range(0..=deg)).collect(),
            )
        })
        .collect();
    poly_from(spec, &terms)
}

/// Random ratio of polynomials, possibly zero.
pub fn random_element(rng: &mut ChaCha8Rng, spec: &FieldSpec) -> FieldElement {
    let num = random_poly(rng, spec, 2, 3);
    let mut den = random_poly(rng, spec, 1, 2);
    while den.is_zero() {
        den = random_poly(rng, spec, 1, 2);
    }
    num.checked_div(&den).unwrap()
}

fn random_nonzero_coefficient(
    rng: &mut ChaCha8Rng,
    spec: &FieldSpec,
    rational: bool,
) -> FieldElement {
    loop {
        let c = if rational {
            random_element(rng, spec)
        } else {
            random_poly(rng, spec, 1, 2)
        };
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random nonzero operator of order ≤ `max_order` with at most `nterms` terms.
pub fn random_operator(
    rng: &mut ChaCha8Rng,
    r: &Arc<OreRing>,
    max_order: u32,
    nterms: usize,
    rational: bool,
) -> OreOperator {
    let m = r.num_derivations();
    loop {
        let mut f = OreOperator::zero(r);
        for _ in 0..rng.gen_range(1..=nterms) {
            let mut e = vec![0u32; m];
            let total = rng.gen_range(0..=max_order);
            for _ in 0..total {
                e[rng.gen_range(0..m)] += 1;
            }
            let c = random_nonzero_coefficient(rng, r.field(), rational);
            f = &f + &OreOperator::monomial(r, MultiIndex::new(e), c);
        }
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_staircase(rng: &mut ChaCha8Rng, m: usize) -> Staircase {
    let k = rng.gen_range(0..=4);
    let pts = (0..k).map(|_| MultiIndex::new((0..m).map(|_| rng.gen_range(0..=4)).collect()));
    Staircase::new(m, pts)
}

/// Σ_{S⊆E} (−1)^{|S|} C(s − |lcm S| + m, m), with C(n, m) = 0 for n < m.
pub fn inclusion_exclusion(e: &Staircase, s: u64) -> i64 {
    let m = e.m();
    let pts = e.leading_exponents();
    let binom = |n: i64| -> i64 {
        if n < m as i64 {
            return 0;
        }
        let mut v: i128 = 1;
        for j in 0..m as i128 {
            v = v * (n as i128 - j) / (j + 1);
        }
        v as i64
    };
    let mut total = 0;
    for mask in 0u32..(1 << pts.len()) {
        let mut l = MultiIndex::zero(m);
        for (k, p) in pts.iter().enumerate() {
            if mask >> k & 1 == 1 {
                l = l.lcm(p);
            }
        }
        let c = binom(s as i64 - l.order() as i64 + m as i64);
        total += if mask.count_ones() % 2 == 0 { c } else { -c };
    }
    total
}
