//! Machine-readable command results.

use std::fmt;

use deltagroup::{
    Comparison, Correspondence, Gauge, GaugeReport, NumericalPolynomial, QuotientGauge,
    SeriesReport, Staircase, StepPairing,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub result: Payload,
    pub timing_us: u64,
    pub engine_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeRow {
    pub tau: i64,
    pub a_tau: i64,
}

impl From<Gauge> for GaugeRow {
    fn from(g: Gauge) -> Self {
        GaugeRow {
            tau: g.tau,
            a_tau: g.a_tau,
        }
    }
}

impl fmt::Display for GaugeRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.tau, self.a_tau)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientRow {
    Exact { tau: i64, a_tau: i64 },
    TypeBelow { tau: i64 },
}

impl From<&QuotientGauge> for QuotientRow {
    fn from(q: &QuotientGauge) -> Self {
        match q {
            QuotientGauge::Exact(g) => QuotientRow::Exact {
                tau: g.tau,
                a_tau: g.a_tau,
            },
            QuotientGauge::TypeBelow(t) => QuotientRow::TypeBelow { tau: *t },
        }
    }
}

impl fmt::Display for QuotientRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientRow::Exact { tau, a_tau } => write!(f, "({tau}, {a_tau})"),
            QuotientRow::TypeBelow { tau } => write!(f, "type < {tau}"),
        }
    }
}

/// ω(s) in the binomial basis and in the monomial basis (ascending powers).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Omega {
    pub binomial: Vec<i64>,
    pub monomial: Vec<String>,
    pub text: String,
    pub valid_from: u64,
}

impl From<&NumericalPolynomial> for Omega {
    fn from(w: &NumericalPolynomial) -> Self {
        Omega {
            binomial: w.binomial_coefficients.clone(),
            monomial: w
                .monomial_coefficients()
                .iter()
                .map(ToString::to_string)
                .collect(),
            text: w.render(),
            valid_from: w.valid_from,
        }
    }
}

pub fn staircase_rows(e: &Staircase) -> Vec<Vec<u32>> {
    e.leading_exponents()
        .iter()
        .map(|i| i.exponents().to_vec())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRow {
    pub basis: Vec<String>,
    pub staircase: Vec<Vec<u32>>,
    pub omega: Omega,
    pub gauge: GaugeRow,
}

impl From<&GaugeReport> for StepRow {
    fn from(r: &GaugeReport) -> Self {
        StepRow {
            basis: r.basis.render(),
            staircase: staircase_rows(&r.staircase),
            omega: Omega::from(&r.omega),
            gauge: r.gauge.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTable {
    pub steps: Vec<StepRow>,
    pub tau: i64,
    pub quotients: Vec<QuotientRow>,
    pub constant_tau: bool,
    pub strictly_decreasing: bool,
    pub annotations: Vec<Option<String>>,
}

impl From<&SeriesReport> for SeriesTable {
    fn from(r: &SeriesReport) -> Self {
        SeriesTable {
            steps: r.steps.iter().map(StepRow::from).collect(),
            tau: r.tau,
            quotients: r.quotients.iter().map(QuotientRow::from).collect(),
            constant_tau: r.constant_tau,
            strictly_decreasing: r.strictly_decreasing,
            annotations: r.annotations.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingRow {
    pub step: usize,
    pub substeps: Vec<QuotientRow>,
    pub tau_substeps: Vec<usize>,
}

impl From<&StepPairing> for PairingRow {
    fn from(p: &StepPairing) -> Self {
        PairingRow {
            step: p.step,
            substeps: p.substeps.iter().map(QuotientRow::from).collect(),
            tau_substeps: p.tau_substeps.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceRow {
    pub i: usize,
    pub j: usize,
    pub first: QuotientRow,
    pub second: QuotientRow,
}

impl From<&Correspondence> for CorrespondenceRow {
    fn from(c: &Correspondence) -> Self {
        CorrespondenceRow {
            i: c.i,
            j: c.j,
            first: (&c.first).into(),
            second: (&c.second).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub verdict: String,
    pub first: Vec<GaugeRow>,
    pub second: Vec<GaugeRow>,
    pub text: String,
}

impl From<&Comparison> for ComparisonRow {
    fn from(c: &Comparison) -> Self {
        ComparisonRow {
            verdict: c.verdict.to_string(),
            first: c.first.iter().copied().map(GaugeRow::from).collect(),
            second: c.second.iter().copied().map(GaugeRow::from).collect(),
            text: c.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    Defined {
        name: String,
        object: String,
        text: Vec<String>,
    },
    Operator {
        text: String,
    },
    Reduction {
        remainder: String,
        cofactors: Vec<String>,
    },
    Basis {
        order: String,
        elements: Vec<String>,
        leading_indices: Vec<Vec<u32>>,
    },
    Boolean {
        value: bool,
    },
    Principal {
        generator: Option<String>,
    },
    Gauge {
        staircase: Vec<Vec<u32>>,
        omega: Omega,
        gauge: GaugeRow,
    },
    DimensionPolynomial {
        staircase: Vec<Vec<u32>>,
        omega: Omega,
        closed_form: Option<Omega>,
        counts: Vec<u64>,
        gauge: GaugeRow,
    },
    Chain {
        name: String,
        ideals: Vec<Vec<String>>,
        factors: Option<Vec<String>>,
    },
    Series(SeriesTable),
    Refinement {
        first: SeriesTable,
        second: SeriesTable,
        first_full_length: usize,
        second_full_length: usize,
        first_pairing: Vec<PairingRow>,
        second_pairing: Vec<PairingRow>,
        correspondences: Vec<CorrespondenceRow>,
        comparison: ComparisonRow,
    },
    Comparison(ComparisonRow),
    Error {
        code: i32,
        message: String,
    },
}

fn rows(v: &[Vec<u32>]) -> String {
    let items: Vec<String> = v
        .iter()
        .map(|r| {
            let parts: Vec<String> = r.iter().map(ToString::to_string).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    format!("{{{}}}", items.join(", "))
}

fn list<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn write_series(f: &mut fmt::Formatter<'_>, t: &SeriesTable) -> fmt::Result {
    for (k, s) in t.steps.iter().enumerate() {
        writeln!(f, "  I{k}: gauge {}  omega(s) = {}", s.gauge, s.omega.text)?;
        for b in &s.basis {
            writeln!(f, "      {b}")?;
        }
    }
    for (k, q) in t.quotients.iter().enumerate() {
        write!(f, "  G{k}/G{}: {q}", k + 1)?;
        if let Some(Some(a)) = t.annotations.get(k) {
            write!(f, "  [{a}]")?;
        }
        writeln!(f)?;
    }
    write!(
        f,
        "  tau = {}, constant type: {}, strictly decreasing: {}",
        t.tau, t.constant_tau, t.strictly_decreasing
    )
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Defined { name, object, text } => {
                write!(f, "{object} {name}")?;
                for t in text {
                    write!(f, "\n  {t}")?;
                }
                Ok(())
            }
            Payload::Operator { text } => write!(f, "{text}"),
            Payload::Reduction {
                remainder,
                cofactors,
            } => {
                write!(f, "remainder: {remainder}")?;
                for (k, q) in cofactors.iter().enumerate() {
                    write!(f, "\n  q{}: {q}", k + 1)?;
                }
                Ok(())
            }
            Payload::Basis {
                order,
                elements,
                leading_indices,
            } => {
                write!(
                    f,
                    "basis under {order}, leading indices {}",
                    rows(leading_indices)
                )?;
                for e in elements {
                    write!(f, "\n  {e}")?;
                }
                Ok(())
            }
            Payload::Boolean { value } => write!(f, "{value}"),
            Payload::Principal { generator } => match generator {
                Some(g) => write!(f, "principal: {g}"),
                None => write!(f, "not principal"),
            },
            Payload::Gauge {
                staircase,
                omega,
                gauge,
            } => write!(
                f,
                "gauge {gauge}\n  staircase {}\n  omega(s) = {} for s >= {}",
                rows(staircase),
                omega.text,
                omega.valid_from
            ),
            Payload::DimensionPolynomial {
                staircase,
                omega,
                closed_form,
                counts,
                gauge,
            } => {
                write!(
                    f,
                    "omega(s) = {} for s >= {}\n  binomial basis [{}]\n  staircase {}\n  gauge {gauge}\n  counts s = 0..: {}",
                    omega.text,
                    omega.valid_from,
                    list(&omega.binomial),
                    rows(staircase),
                    list(counts)
                )?;
                if let Some(c) = closed_form {
                    write!(f, "\n  closed form: {}", c.text)?;
                }
                Ok(())
            }
            Payload::Chain {
                name,
                ideals,
                factors,
            } => {
                write!(f, "chain {name} with {} ideals", ideals.len())?;
                if let Some(fs) = factors {
                    write!(f, "\n  factors: {}", fs.join(" | "))?;
                }
                for (k, b) in ideals.iter().enumerate() {
                    write!(f, "\n  I{k}: {}", b.join(", "))?;
                }
                Ok(())
            }
            Payload::Series(t) => {
                writeln!(f, "series with {} steps", t.quotients.len())?;
                write_series(f, t)
            }
            Payload::Refinement {
                first,
                second,
                first_pairing,
                second_pairing,
                comparison,
                ..
            } => {
                writeln!(f, "first refinement")?;
                write_series(f, first)?;
                writeln!(f, "\nsecond refinement")?;
                write_series(f, second)?;
                for (label, pairing) in [("first", first_pairing), ("second", second_pairing)] {
                    for p in pairing {
                        write!(
                            f,
                            "\n{label} step {}: tau sub-steps {:?}",
                            p.step, p.tau_substeps
                        )?;
                    }
                }
                write!(f, "\n{}", comparison.text)
            }
            Payload::Comparison(c) => write!(f, "{}", c.text),
            Payload::Error { code, message } => write!(f, "error ({code}): {message}"),
        }
    }
}
