//! Verification cases and their text and JSON reports.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::chern_poly::ChernPolynomial;
use crate::error::{ChowError, Result};
use crate::graded::{rat, Rational};
use crate::voisin::{
    determinant_degrees, dims_report, eigen_crosscheck, fixed_locus_class, psi_star_h,
    rank_strata_codims, voisin_degree, VoisinParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Paper,
    Derived,
    None,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "paper",
            Provenance::Derived => "derived",
            Provenance::None => "none",
        })
    }
}

/// Parallel lists of labels and exact values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub monomials: Vec<String>,
    pub coefficients: Vec<Rational>,
}

impl Table {
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Rational)>) -> Self {
        let (monomials, coefficients) = pairs.into_iter().map(|(m, c)| (m.into(), c)).unzip();
        Table { monomials, coefficients }
    }

    pub fn from_ints<S: Into<String>>(pairs: impl IntoIterator<Item = (S, i64)>) -> Self {
        Self::from_pairs(pairs.into_iter().map(|(m, c)| (m, rat(c))))
    }

    pub fn from_polynomial(p: &ChernPolynomial) -> Self {
        Table {
            monomials: p.monomial_strings(),
            coefficients: p.terms().map(|(_, c)| c.clone()).collect(),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "monomials": self.monomials,
            "coefficients": self.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    fn to_text(&self) -> String {
        self.monomials
            .iter()
            .zip(&self.coefficients)
            .map(|(m, c)| format!("{m}={c}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseKind {
    Degree,
    Eigen,
    FixedLocus,
    PsiH,
    Dims,
    Strata,
    DetDegrees,
}

impl CaseKind {
    fn prefix(self) -> &'static str {
        match self {
            CaseKind::Degree => "voisin-degree",
            CaseKind::Eigen => "eigen-crosscheck",
            CaseKind::FixedLocus => "fixed-locus",
            CaseKind::PsiH => "psi-h",
            CaseKind::Dims => "dims",
            CaseKind::Strata => "strata",
            CaseKind::DetDegrees => "det-degrees",
        }
    }
}

/// One verification case: a computation and, where known, its expected value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Case {
    pub kind: CaseKind,
    /// `r` for the Fano-variety cases, the form rank for strata.
    pub param: Option<u64>,
}

impl Case {
    pub fn new(kind: CaseKind, param: Option<u64>) -> Self {
        Case { kind, param }
    }

    pub fn name(&self) -> String {
        match (self.kind, self.param) {
            (CaseKind::Strata, Some(m)) => format!("strata-m{m}"),
            (kind, Some(r)) => format!("{}-r{r}", kind.prefix()),
            (kind, None) => kind.prefix().to_string(),
        }
    }

    fn r(&self) -> Option<u64> {
        match self.kind {
            CaseKind::Strata | CaseKind::DetDegrees => None,
            _ => self.param,
        }
    }

    fn param(&self) -> Result<u64> {
        self.param.ok_or_else(|| ChowError::Internal(format!("{} needs a parameter", self.name())))
    }

    /// Looks a case up by its report name.
    pub fn parse(name: &str) -> Option<Case> {
        if name == "det-degrees" {
            return Some(Case::new(CaseKind::DetDegrees, None));
        }
        if let Some(m) = name.strip_prefix("strata-m") {
            return m.parse().ok().map(|m| Case::new(CaseKind::Strata, Some(m)));
        }
        let (prefix, r) = name.rsplit_once("-r")?;
        let r = r.parse().ok()?;
        let kind = [
            CaseKind::Degree,
            CaseKind::Eigen,
            CaseKind::FixedLocus,
            CaseKind::PsiH,
            CaseKind::Dims,
        ]
        .into_iter()
        .find(|k| k.prefix() == prefix)?;
        Some(Case::new(kind, Some(r)))
    }

    /// Expected value and where it comes from.
    pub fn expected(&self) -> (Table, Provenance) {
        let r = self.param.unwrap_or(0);
        let four_pow = || Rational::from_integer(BigInt::from(4).pow((r + 1) as u32));
        match self.kind {
            CaseKind::Degree => {
                let prov = if r <= 2 { Provenance::Paper } else { Provenance::Derived };
                (Table::from_pairs([("series", four_pow()), ("segre", four_pow())]), prov)
            }
            CaseKind::Eigen => {
                (Table::from_pairs([("deg", four_pow()), ("lambda^2", four_pow())]), Provenance::Derived)
            }
            CaseKind::FixedLocus => match r {
                1 => (Table::from_ints([("c2", 21)]), Provenance::Paper),
                2 => (
                    Table::from_ints([("c1^3", -20), ("c1*c2", 110), ("c3", 49)]),
                    Provenance::Paper,
                ),
                _ => (Table::default(), Provenance::None),
            },
            CaseKind::PsiH => {
                let r = r as i64;
                let prov = if r <= 2 { Provenance::Paper } else { Provenance::Derived };
                let t = Table::from_ints([
                    ("c1(F)", -(r + 2)),
                    ("c1(Psi*E)", -(3 * r + 4)),
                    ("ratio", 3 * r + 4),
                ]);
                (t, prov)
            }
            CaseKind::Dims => match r {
                1 => (
                    Table::from_ints([
                        ("n", 5),
                        ("N", 4),
                        ("m", 2),
                        ("fix_codim", 2),
                        ("dim_I", 57),
                        ("delta_1", 7),
                        ("delta_2", 4),
                    ]),
                    Provenance::Paper,
                ),
                2 => (
                    Table::from_ints([
                        ("n", 9),
                        ("N", 11),
                        ("m", 3),
                        ("fix_codim", 3),
                        ("dim_I", 227),
                        ("delta_1", 19),
                        ("delta_2", 16),
                        ("delta_3", 10),
                    ]),
                    Provenance::Paper,
                ),
                _ => (Table::default(), Provenance::None),
            },
            CaseKind::Strata => match r {
                5 => (
                    Table::from_ints([("rho=4", 1), ("rho=3", 3), ("rho=2", 6), ("rho=1", 10)]),
                    Provenance::Paper,
                ),
                _ => (Table::default(), Provenance::None),
            },
            CaseKind::DetDegrees => {
                (Table::from_ints([("5x5", 7), ("4x4", 4)]), Provenance::Paper)
            }
        }
    }

    /// Runs the computation; the string is the text-mode rendering.
    pub fn compute(&self) -> Result<(Table, String)> {
        match self.kind {
            CaseKind::Degree => {
                let d = voisin_degree(self.param()?)?;
                let t = Table::from_pairs([
                    ("series", Rational::from_integer(d.series_route)),
                    ("segre", Rational::from_integer(d.segre_route)),
                ]);
                Ok((t, format!("deg = {}", d.degree)))
            }
            CaseKind::Eigen => {
                let r = self.param()?;
                let deg = voisin_degree(r)?.degree;
                let lambda = BigInt::from(-2).pow((r + 1) as u32);
                let ok = eigen_crosscheck(r)?;
                let text = format!("deg = {deg}, lambda = {lambda}, match = {ok}");
                let t = Table::from_pairs([
                    ("deg", Rational::from_integer(deg)),
                    ("lambda^2", Rational::from_integer(&lambda * &lambda)),
                ]);
                Ok((t, text))
            }
            CaseKind::FixedLocus => {
                let fl = fixed_locus_class(self.param()?)?;
                Ok((Table::from_polynomial(&fl.class), fl.class.to_string()))
            }
            CaseKind::PsiH => {
                let p = psi_star_h(self.param()?)?;
                let t = Table::from_pairs([
                    ("c1(F)", p.c1_f),
                    ("c1(Psi*E)", p.c1_psi_e),
                    ("ratio", rat(p.ratio)),
                ]);
                Ok((t, format!("Psi*h = {}h", p.ratio)))
            }
            CaseKind::Dims => {
                let d = dims_report(self.param()?)?;
                let mut pairs = vec![
                    ("n".to_string(), d.params.n),
                    ("N".to_string(), d.params.dim_x),
                    ("m".to_string(), d.relative_dim),
                    ("fix_codim".to_string(), d.fix_codim),
                    ("dim_I".to_string(), d.dim_incidence),
                ];
                for (k, delta) in d.deltas.iter().enumerate() {
                    pairs.push((format!("delta_{}", k + 1), *delta));
                }
                let t = Table::from_ints(pairs.into_iter().map(|(m, v)| (m, v as i64)));
                let text = t.to_text();
                Ok((t, text))
            }
            CaseKind::Strata => {
                let m = self.param()?;
                let codims = rank_strata_codims(m)?;
                let t = Table::from_ints(
                    codims.iter().enumerate().map(|(i, &c)| (format!("rho={}", m - 1 - i as u64), c as i64)),
                );
                let text = t.to_text();
                Ok((t, text))
            }
            CaseKind::DetDegrees => {
                let (big, small) = determinant_degrees()?;
                let t = Table::from_ints([("5x5", big), ("4x4", small)]);
                let text = format!("{} (forms V -> V*(1), V = O(-1)+O^4 and V = O^4)", t.to_text());
                Ok((t, text))
            }
        }
    }
}

/// Outcome of one case.
#[derive(Clone, Debug)]
pub struct CaseReport {
    pub case: Case,
    pub result: Table,
    pub expected: Table,
    pub provenance: Provenance,
    pub pass: bool,
    pub millis: Option<u64>,
    pub text: String,
    pub error: Option<String>,
}

impl CaseReport {
    pub fn name(&self) -> String {
        self.case.name()
    }

    /// Canonical JSON: object keys sorted, rationals as strings.
    pub fn to_json(&self) -> Value {
        let r = self.case.r();
        let mut expected = self.expected.to_json();
        expected["provenance"] = json!(self.provenance);
        json!({
            "case": self.name(),
            "params": {
                "r": r,
                "n": r.map(|r| VoisinParams::new(r).n),
            },
            "result": self.result.to_json(),
            "expected": expected,
            "pass": self.pass,
            "millis": self.millis.unwrap_or(0),
        })
    }

    pub fn to_text(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let body = match &self.error {
            Some(e) => format!("error: {e}"),
            None => self.text.clone(),
        };
        let mut line = format!("{status} {:<20} {body}", self.name());
        if self.provenance != Provenance::None {
            line.push_str(&format!("  [{}]", self.provenance));
        }
        if let Some(ms) = self.millis {
            line.push_str(&format!("  ({ms} ms)"));
        }
        line
    }
}

/// Runs a case. Cases without an expected value pass when the computation
/// succeeds.
pub fn run_case(case: Case, timings: bool) -> CaseReport {
    let start = Instant::now();
    let outcome = case.compute();
    let elapsed = start.elapsed().as_millis() as u64;
    let (expected, provenance) = case.expected();
    let (result, text, error) = match outcome {
        Ok((t, s)) => (t, s, None),
        Err(e) => (Table::default(), String::new(), Some(e.to_string())),
    };
    let pass = error.is_none() && (provenance == Provenance::None || result == expected);
    CaseReport {
        case,
        result,
        expected,
        provenance,
        pass,
        millis: timings.then_some(elapsed),
        text,
        error,
    }
}

/// Every case run by `verify --all`, sorted by name.
pub fn all_cases() -> Vec<Case> {
    let mut cases = Vec::new();
    for r in 0..=5 {
        cases.push(Case::new(CaseKind::Degree, Some(r)));
        cases.push(Case::new(CaseKind::Eigen, Some(r)));
    }
    for r in 1..=2 {
        cases.push(Case::new(CaseKind::FixedLocus, Some(r)));
        cases.push(Case::new(CaseKind::Dims, Some(r)));
    }
    for r in 1..=5 {
        cases.push(Case::new(CaseKind::PsiH, Some(r)));
    }
    cases.push(Case::new(CaseKind::Strata, Some(5)));
    cases.push(Case::new(CaseKind::DetDegrees, None));
    cases.sort_by_key(|c| c.name());
    cases
}

/// Runs cases in parallel; the reports keep the input order.
pub fn run_cases(cases: &[Case], timings: bool) -> Vec<CaseReport> {
    cases.par_iter().map(|&c| run_case(c, timings)).collect()
}

/// Pretty-printed JSON array of reports, newline-terminated.
pub fn render_json(reports: &[CaseReport]) -> String {
    let value = Value::Array(reports.iter().map(CaseReport::to_json).collect());
    let mut s = serde_json::to_string_pretty(&value).expect("JSON values always serialise");
    s.push('\n');
    s
}

pub fn render_text(reports: &[CaseReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&r.to_text());
        s.push('\n');
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    s.push_str(&format!("{passed}/{} cases passed\n", reports.len()));
    s
}
