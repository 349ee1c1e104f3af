//! Command dispatch over a session's bindings.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use deltagroup::gauge::{analyze_basis, analyze_ideal};
use deltagroup::groebner::DEFAULT_PAIR_BUDGET;
use deltagroup::{
    analyze, chain_from_right_factorization, compare_quotient_gauges, dimension_polynomial,
    dimension_polynomial_m2, gauge_of, hilbert_count, load_spec, member, op_mul, parse_operator,
    principal_generator, refine, right_reduce, verify_factorization, verify_intertwine, Chain,
    Engine, GroebnerBasis, LeftIdeal, MultiIndex, OreOperator, OreRing, Staircase, TermOrder,
};

use crate::report::{
    staircase_rows, ComparisonRow, CorrespondenceRow, Omega, PairingRow, Payload, SeriesTable,
};
use crate::CliError;

#[derive(Clone, Debug)]
pub enum Value {
    Operator(OreOperator),
    Ideal(LeftIdeal),
    Chain(Chain),
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Overrides the session's `order:` line.
    pub order: Option<String>,
    pub pair_budget: Option<usize>,
}

pub struct Interpreter {
    ring: Arc<OreRing>,
    engine: Engine,
    bindings: BTreeMap<String, Value>,
}

/// Split on whitespace outside `()`, `<>` and `{}`.
pub fn tokenize(text: &str) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut stack = Vec::new();
    for ch in text.chars() {
        match ch {
            '(' | '<' | '{' => stack.push(ch),
            ')' | '>' | '}' => {
                let open = match ch {
                    ')' => '(',
                    '>' => '<',
                    _ => '{',
                };
                if stack.pop() != Some(open) {
                    return Err(CliError::Invalid(format!("unbalanced '{ch}' in '{text}'")));
                }
            }
            _ => {}
        }
        if ch.is_whitespace() && stack.is_empty() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push(ch);
        }
    }
    if !stack.is_empty() {
        return Err(CliError::Invalid(format!("unclosed bracket in '{text}'")));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

/// Split on commas outside parentheses.
fn split_commas(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(text[start..k].trim());
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts.retain(|p| !p.is_empty());
    parts
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn arity(cmd: &str, args: &[String], min: usize, max: Option<usize>) -> Result<(), CliError> {
    let ok = args.len() >= min && max.is_none_or(|m| args.len() <= m);
    if ok {
        Ok(())
    } else {
        let want = match max {
            Some(m) if m == min => format!("{min}"),
            Some(m) => format!("{min} to {m}"),
            None => format!("at least {min}"),
        };
        Err(CliError::Invalid(format!(
            "{cmd} takes {want} arguments, got {}",
            args.len()
        )))
    }
}

impl Interpreter {
    pub fn new(
        field_text: &str,
        session_order: Option<&str>,
        opts: &Options,
    ) -> Result<Self, CliError> {
        let spec = load_spec(field_text)?;
        let ring = OreRing::new(spec);
        let order = match opts.order.as_deref().or(session_order) {
            Some(o) => TermOrder::parse(o, ring.field())?,
            None => ring.default_order(),
        };
        let engine =
            Engine::new(order).with_pair_budget(opts.pair_budget.unwrap_or(DEFAULT_PAIR_BUDGET));
        Ok(Interpreter {
            ring,
            engine,
            bindings: BTreeMap::new(),
        })
    }

    pub fn ring(&self) -> &Arc<OreRing> {
        &self.ring
    }

    pub fn binding(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.bindings.iter()
    }

    fn order(&self) -> &TermOrder {
        self.engine.order()
    }

    fn render(&self, f: &OreOperator) -> String {
        f.render(self.order())
    }

    fn operator_bindings(&self) -> HashMap<String, OreOperator> {
        self.bindings
            .iter()
            .filter_map(|(k, v)| match v {
                Value::Operator(f) => Some((k.clone(), f.clone())),
                _ => None,
            })
            .collect()
    }

    fn parse_op(&self, text: &str) -> Result<OreOperator, CliError> {
        Ok(deltagroup::ore::parse_operator_with(
            text,
            &self.ring,
            &self.operator_bindings(),
        )?)
    }

    fn operator(&self, tok: &str) -> Result<OreOperator, CliError> {
        match self.bindings.get(tok) {
            Some(Value::Operator(f)) => Ok(f.clone()),
            Some(_) => Err(CliError::Invalid(format!("'{tok}' is not an operator"))),
            None => self.parse_op(tok),
        }
    }

    fn ideal(&self, tok: &str) -> Result<LeftIdeal, CliError> {
        match self.bindings.get(tok) {
            Some(Value::Ideal(i)) => Ok(i.clone()),
            Some(Value::Operator(f)) => Ok(LeftIdeal::principal(f.clone())),
            Some(Value::Chain(_)) => Err(CliError::Invalid(format!(
                "'{tok}' is a chain, not an ideal"
            ))),
            None => match tok.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
                Some(inner) => {
                    let gens = split_commas(inner)
                        .into_iter()
                        .map(|g| self.parse_op(g))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(LeftIdeal::new(gens)?)
                }
                None => Ok(LeftIdeal::principal(self.parse_op(tok)?)),
            },
        }
    }

    fn chain(&self, tok: &str) -> Result<Chain, CliError> {
        match self.bindings.get(tok) {
            Some(Value::Chain(c)) => Ok(c.clone()),
            Some(_) => Err(CliError::Invalid(format!("'{tok}' is not a chain"))),
            None => Err(CliError::Invalid(format!("no chain named '{tok}'"))),
        }
    }

    fn staircase_literal(&self, tok: &str) -> Result<Staircase, CliError> {
        let inner = tok
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| CliError::Invalid(format!("bad staircase '{tok}'")))?;
        let m = self.ring.num_derivations();
        let mut pts = Vec::new();
        for p in split_commas(inner) {
            let body = p
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| CliError::Invalid(format!("bad staircase point '{p}'")))?;
            let e = body
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Invalid(format!("bad staircase point '{p}'")))?;
            if e.len() != m {
                return Err(CliError::Invalid(format!(
                    "staircase point '{p}' needs {m} entries"
                )));
            }
            pts.push(MultiIndex::new(e));
        }
        Ok(Staircase::new(m, pts))
    }

    fn bind(&mut self, name: &str, v: Value) -> Result<(), CliError> {
        if !is_name(name) {
            return Err(CliError::Invalid(format!("'{name}' is not a valid name")));
        }
        if self.ring.field().symbol_index(name).is_some()
            || self.ring.field().derivation_index(name).is_some()
        {
            return Err(CliError::Invalid(format!("'{name}' is a field symbol")));
        }
        self.bindings.insert(name.to_string(), v);
        Ok(())
    }

    fn basis_payload(&self, b: &GroebnerBasis) -> Payload {
        Payload::Basis {
            order: self.order().describe(&self.ring.var_names()),
            elements: b.render(),
            leading_indices: b
                .leading_indices()
                .iter()
                .map(|i| i.exponents().to_vec())
                .collect(),
        }
    }

    fn ideal_text(&self, i: &LeftIdeal) -> Vec<String> {
        i.generators().iter().map(|g| self.render(g)).collect()
    }

    /// Runs a `NAME = RHS` definition; a leading `chain` makes a chain.
    pub fn define(&mut self, text: &str) -> Result<Payload, CliError> {
        let (lhs, rhs) = text
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("expected NAME = ..., got '{text}'")))?;
        let lhs = lhs.trim();
        let rhs = rhs.trim();
        if let Some(name) = lhs.strip_prefix("chain ") {
            return self.define_chain(name.trim(), rhs);
        }
        if rhs.starts_with('<') {
            let i = self.ideal(rhs)?;
            let text = self.ideal_text(&i);
            self.bind(lhs, Value::Ideal(i))?;
            return Ok(Payload::Defined {
                name: lhs.to_string(),
                object: "ideal".into(),
                text,
            });
        }
        let f = self.parse_op(rhs)?;
        let text = vec![self.render(&f)];
        self.bind(lhs, Value::Operator(f))?;
        Ok(Payload::Defined {
            name: lhs.to_string(),
            object: "operator".into(),
            text,
        })
    }

    fn define_chain(&mut self, name: &str, rhs: &str) -> Result<Payload, CliError> {
        let toks = tokenize(rhs)?;
        let (kind, args) = toks
            .split_first()
            .ok_or_else(|| CliError::Invalid("chain needs 'factors' or 'ideals'".into()))?;
        let chain = match kind.as_str() {
            "factors" => {
                let fs = args
                    .iter()
                    .map(|a| self.operator(a))
                    .collect::<Result<Vec<_>, _>>()?;
                chain_from_right_factorization(&fs, &self.engine)?
            }
            "ideals" => {
                let is = args
                    .iter()
                    .map(|a| self.ideal(a))
                    .collect::<Result<Vec<_>, _>>()?;
                Chain::from_ideals(&is, &self.engine)?
            }
            other => {
                return Err(CliError::Invalid(format!(
                    "chain kind must be 'factors' or 'ideals', got '{other}'"
                )))
            }
        };
        let payload = Payload::Chain {
            name: name.to_string(),
            ideals: chain.ideals().iter().map(GroebnerBasis::render).collect(),
            factors: chain
                .factors()
                .map(|fs| fs.iter().map(|f| self.render(f)).collect()),
        };
        self.bind(name, Value::Chain(chain))?;
        Ok(payload)
    }

    /// Executes one command line.
    pub fn run(&mut self, line: &str) -> Result<Payload, CliError> {
        let line = line.trim();
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match cmd {
            "def" => return self.define(rest),
            "chain" => {
                let (name, rhs) = rest.split_once('=').ok_or_else(|| {
                    CliError::Invalid("expected chain NAME = factors|ideals ...".into())
                })?;
                return self.define_chain(name.trim(), rhs.trim());
            }
            _ => {}
        }
        let mut args = tokenize(rest)?;
        let mut target = None;
        if args.len() >= 2 && args[args.len() - 2] == "as" {
            target = args.pop();
            args.pop();
        }
        let (payload, value) = self.dispatch(cmd, &args)?;
        if let Some(v) = value {
            if let Some(t) = &target {
                self.bind(t, v.clone())?;
            }
            self.bindings.insert("result".into(), v);
        } else if target.is_some() {
            return Err(CliError::Invalid(format!("{cmd} produces nothing to bind")));
        }
        Ok(payload)
    }

    fn dispatch(&self, cmd: &str, args: &[String]) -> Result<(Payload, Option<Value>), CliError> {
        let e = &self.engine;
        Ok(match cmd {
            "mul" => {
                arity(cmd, args, 2, None)?;
                let mut p = self.operator(&args[0])?;
                for a in &args[1..] {
                    p = op_mul(&p, &self.operator(a)?)?;
                }
                (
                    Payload::Operator {
                        text: self.render(&p),
                    },
                    Some(Value::Operator(p)),
                )
            }
            "reduce" => {
                arity(cmd, args, 2, None)?;
                let f = self.operator(&args[0])?;
                let ds = args[1..]
                    .iter()
                    .map(|a| self.operator(a))
                    .collect::<Result<Vec<_>, _>>()?;
                let red = right_reduce(&f, &ds, self.order())?;
                let payload = Payload::Reduction {
                    remainder: self.render(&red.remainder),
                    cofactors: red.cofactors.iter().map(|q| self.render(q)).collect(),
                };
                (payload, Some(Value::Operator(red.remainder)))
            }
            "gb" => {
                arity(cmd, args, 1, Some(1))?;
                let b = e.basis(&self.ideal(&args[0])?)?;
                (
                    self.basis_payload(&b),
                    Some(Value::Ideal(LeftIdeal::from(&b))),
                )
            }
            "member" => {
                arity(cmd, args, 2, Some(2))?;
                let f = self.operator(&args[0])?;
                let b = e.basis(&self.ideal(&args[1])?)?;
                (
                    Payload::Boolean {
                        value: member(&f, &b),
                    },
                    None,
                )
            }
            "sum" | "intersect" => {
                arity(cmd, args, 2, Some(2))?;
                let i = self.ideal(&args[0])?;
                let j = self.ideal(&args[1])?;
                let b = if cmd == "sum" {
                    e.ideal_sum(&i, &j)?
                } else {
                    e.ideal_intersect(&i, &j)?
                };
                (
                    self.basis_payload(&b),
                    Some(Value::Ideal(LeftIdeal::from(&b))),
                )
            }
            "principal" => {
                arity(cmd, args, 1, Some(1))?;
                let b = e.basis(&self.ideal(&args[0])?)?;
                let g = principal_generator(&b);
                let payload = Payload::Principal {
                    generator: g.as_ref().map(|g| self.render(g)),
                };
                (payload, g.map(Value::Operator))
            }
            "rightfactor" => {
                arity(cmd, args, 2, Some(2))?;
                let i = self.ideal(&args[0])?;
                let r = self.operator(&args[1])?;
                (
                    Payload::Boolean {
                        value: e.check_right_factor(&i, &r)?,
                    },
                    None,
                )
            }
            "gauge" => {
                arity(cmd, args, 1, Some(1))?;
                let r = analyze_ideal(&self.ideal(&args[0])?, e)?;
                let payload = Payload::Gauge {
                    staircase: staircase_rows(&r.staircase),
                    omega: Omega::from(&r.omega),
                    gauge: r.gauge.into(),
                };
                (payload, None)
            }
            "dimpoly" => {
                arity(cmd, args, 1, Some(1))?;
                let st = if args[0].starts_with('{') {
                    self.staircase_literal(&args[0])?
                } else {
                    analyze_basis(e.basis(&self.ideal(&args[0])?)?)?.staircase
                };
                let w = dimension_polynomial(&st);
                let closed_form = if st.m() == 2 {
                    Some(Omega::from(&dimension_polynomial_m2(&st)?))
                } else {
                    None
                };
                let payload = Payload::DimensionPolynomial {
                    staircase: staircase_rows(&st),
                    omega: Omega::from(&w),
                    closed_form,
                    counts: (0..=w.valid_from + 5)
                        .map(|s| hilbert_count(&st, s))
                        .collect(),
                    gauge: gauge_of(&w).into(),
                };
                (payload, None)
            }
            "analyze" => {
                arity(cmd, args, 1, Some(1))?;
                let r = analyze(&self.chain(&args[0])?)?;
                (Payload::Series(SeriesTable::from(&r)), None)
            }
            "refine" => {
                arity(cmd, args, 2, Some(2))?;
                let a = self.chain(&args[0])?;
                let b = self.chain(&args[1])?;
                let rf = refine(&a, &b, e)?;
                let ra = analyze(&rf.first_coarse)?;
                let rb = analyze(&rf.second_coarse)?;
                let payload = Payload::Refinement {
                    first: SeriesTable::from(&ra),
                    second: SeriesTable::from(&rb),
                    first_full_length: rf.first.len(),
                    second_full_length: rf.second.len(),
                    first_pairing: rf.first_pairing.iter().map(PairingRow::from).collect(),
                    second_pairing: rf.second_pairing.iter().map(PairingRow::from).collect(),
                    correspondences: rf
                        .correspondences
                        .iter()
                        .map(CorrespondenceRow::from)
                        .collect(),
                    comparison: ComparisonRow::from(&compare_quotient_gauges(&ra, &rb)),
                };
                (payload, None)
            }
            "compare" => {
                arity(cmd, args, 2, Some(2))?;
                let ra = analyze(&self.chain(&args[0])?)?;
                let rb = analyze(&self.chain(&args[1])?)?;
                let c = compare_quotient_gauges(&ra, &rb);
                (Payload::Comparison(ComparisonRow::from(&c)), None)
            }
            "verify-factor" => {
                arity(cmd, args, 2, None)?;
                let l = self.operator(&args[0])?;
                let fs = args[1..]
                    .iter()
                    .map(|a| self.operator(a))
                    .collect::<Result<Vec<_>, _>>()?;
                (
                    Payload::Boolean {
                        value: verify_factorization(&l, &fs)?,
                    },
                    None,
                )
            }
            "intertwine" => {
                arity(cmd, args, 3, Some(3))?;
                let a = self.operator(&args[0])?;
                let p = self.operator(&args[1])?;
                let b = self.operator(&args[2])?;
                let value = verify_intertwine(&a, &p, &b, self.order())?;
                (Payload::Boolean { value }, None)
            }
            other => return Err(CliError::Invalid(format!("unknown command '{other}'"))),
        })
    }

    /// Parses `text` as an operator with the current bindings.
    pub fn parse(&self, text: &str) -> Result<OreOperator, CliError> {
        if self.bindings.is_empty() {
            Ok(parse_operator(text, &self.ring)?)
        } else {
            self.parse_op(text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::GaugeRow;

    fn interp() -> Interpreter {
        Interpreter::new(
            "derivations: dx, dy\nvariables: x, y",
            None,
            &Options::default(),
        )
        .unwrap()
    }

    #[test]
    fn tokenizer_groups_brackets() {
        assert_eq!(
            tokenize("L1 <dx + 1, dx*dy>  (dx + x*dy) {(2,1), (3,0)}").unwrap(),
            vec!["L1", "<dx + 1, dx*dy>", "(dx + x*dy)", "{(2,1), (3,0)}"]
        );
        assert!(tokenize("(dx + 1").is_err());
        assert!(tokenize("dx + 1)").is_err());
        assert_eq!(split_commas("dx + (x, y), dy"), vec!["dx + (x, y)", "dy"]);
    }

    #[test]
    fn definitions_and_results() {
        let mut it = interp();
        it.run("def A = dx + 1").unwrap();
        it.run("def B = dx + x*dy").unwrap();
        let p = it.run("mul A B").unwrap();
        assert_eq!(
            p,
            Payload::Operator {
                text: "dx^2 + x*dx*dy + dx + (x + 1)*dy".into()
            }
        );
        assert!(matches!(it.binding("result"), Some(Value::Operator(_))));
        it.run("intersect A B as C").unwrap();
        assert!(matches!(it.binding("C"), Some(Value::Ideal(_))));
        assert_eq!(it.run("member result C").unwrap_err().exit_code(), 2);
        assert_eq!(
            it.run("member dy <(dx+1)*(dx+x*dy), dx+1>").unwrap(),
            Payload::Boolean { value: true }
        );
    }

    #[test]
    fn exit_codes() {
        let mut it = interp();
        assert_eq!(it.run("gauge dz").unwrap_err().exit_code(), 1);
        assert_eq!(it.run("frobnicate A").unwrap_err().exit_code(), 2);
        assert_eq!(it.run("gauge").unwrap_err().exit_code(), 2);
        it.run("chain E = ideals").unwrap();
        assert_eq!(it.run("analyze E").unwrap_err().exit_code(), 2);
        assert_eq!(it.run("chain F = factors").unwrap_err().exit_code(), 2);
        assert_eq!(it.run("reduce dx 0").unwrap_err().exit_code(), 2);
        assert_eq!(it.run("def x = dx").unwrap_err().exit_code(), 2);
        let mut tight = Interpreter::new(
            "derivations: dx, dy\nvariables: x, y",
            None,
            &Options {
                order: None,
                pair_budget: Some(0),
            },
        )
        .unwrap();
        assert_eq!(
            tight.run("gb <dx + 1, dx + x*dy>").unwrap_err().exit_code(),
            3
        );
    }

    #[test]
    fn staircase_literal() {
        let mut it = interp();
        let p = it.run("dimpoly {(2,1), (3,0)}").unwrap();
        let Payload::DimensionPolynomial { omega, gauge, .. } = p else {
            panic!("wrong payload")
        };
        assert_eq!(omega.text, "2*s + 2");
        assert_eq!(gauge, GaugeRow { tau: 1, a_tau: 2 });
        assert!(it.run("dimpoly {(2,1,0)}").is_err());
    }
}
