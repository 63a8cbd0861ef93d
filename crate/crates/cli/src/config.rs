//! Problem configuration: JSON schema, presets and conversion into core
//! types in exact or floating mode.

use std::path::Path;

use dunkl_calculus::scalar::parse_rational;
use dunkl_calculus::{
    BigRational, Complex64, DunklParam, Functional, IntervalAtom, ParityGrid, PointAtom,
    Polynomial, RealScalar, Scalar,
};
use serde::Deserialize;

use crate::error::CliError;
use crate::expr::{parse_expression, Expression};

/// A real number given as a JSON number or as a `"p/q"` / decimal string.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    /// JSON numbers go through their shortest round-trip decimal.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Number::Float(v) if v.is_finite() => parse_rational(&v.to_string()),
            Number::Float(_) => None,
            Number::Text(s) => parse_rational(s),
        }
    }

    pub fn to_f64(&self) -> Result<f64, CliError> {
        match self {
            Number::Float(v) => Ok(*v),
            Number::Text(s) => match parse_rational(s) {
                Some(r) => Ok(r.to_f64()),
                None => s
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Input(format!("not a number: {s:?}"))),
            },
        }
    }
}

impl From<f64> for Number {
    fn from(v: f64) -> Self {
        Number::Float(v)
    }
}

/// A real number or a `[re, im]` pair.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Value {
    Real(Number),
    Complex([Number; 2]),
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Atom {
    Point {
        point: Number,
        #[serde(default = "unit_weight")]
        weight: Number,
    },
    Interval {
        interval: [Number; 2],
        #[serde(default = "unit_weight")]
        weight: Number,
    },
}

fn unit_weight() -> Number {
    Number::Float(1.0)
}

/// A preset name or an explicit atom list.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PhiSpec {
    Named(String),
    Atoms(Vec<Atom>),
}

impl PhiSpec {
    /// Presets: `dirac0`, `dirac1`, `sym1`, `int01`, and the parametrized
    /// forms `dirac:A`, `sym:C`, `mean:A:B`.
    pub fn atoms(&self) -> Result<Vec<Atom>, CliError> {
        let name = match self {
            PhiSpec::Atoms(atoms) => return Ok(atoms.clone()),
            PhiSpec::Named(name) => name.trim(),
        };
        let text = |s: &str| Number::Text(s.to_string());
        let half = || text("1/2");
        let parts: Vec<&str> = name.split(':').collect();
        let atoms = match parts.as_slice() {
            ["dirac0"] => vec![Atom::Point { point: text("0"), weight: text("1") }],
            ["dirac1"] => vec![Atom::Point { point: text("1"), weight: text("1") }],
            ["sym1"] => symmetric(text("1"), text("-1"), half()),
            ["int01"] => vec![Atom::Interval { interval: [text("0"), text("1")], weight: text("1") }],
            ["dirac", a] => vec![Atom::Point { point: text(a), weight: text("1") }],
            ["sym", c] => {
                let neg = match c.strip_prefix('-') {
                    Some(rest) => rest.to_string(),
                    None => format!("-{c}"),
                };
                symmetric(text(c), Number::Text(neg), half())
            }
            ["mean", a, b] => {
                let (lo, hi) = (text(a).to_rational(), text(b).to_rational());
                let weight = match (lo, hi) {
                    (Some(lo), Some(hi)) if lo != hi => {
                        Number::Text(dunkl_calculus::scalar::format_rational(
                            &(BigRational::from_integer(1.into()) / (hi - lo)),
                        ))
                    }
                    _ => return Err(CliError::Input(format!("bad interval in preset {name:?}"))),
                };
                vec![Atom::Interval { interval: [text(a), text(b)], weight }]
            }
            _ => {
                return Err(CliError::Input(format!(
                    "unknown functional {name:?}; use dirac0, dirac1, sym1, int01, dirac:A, sym:C or mean:A:B"
                )))
            }
        };
        Ok(atoms)
    }
}

fn symmetric(a: Number, b: Number, w: Number) -> Vec<Atom> {
    vec![
        Atom::Point { point: a, weight: w.clone() },
        Atom::Point { point: b, weight: w },
    ]
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "default_xmax")]
    pub xmax: f64,
    #[serde(default = "default_n")]
    pub n: usize,
}

fn default_xmax() -> f64 {
    dunkl_calculus::grid::DEFAULT_XMAX
}

fn default_n() -> usize {
    dunkl_calculus::grid::DEFAULT_N
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            xmax: default_xmax(),
            n: default_n(),
        }
    }
}

/// The solve configuration. `P` lists `a_0..a_m`, leading coefficient first.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub k: Number,
    #[serde(rename = "P", default)]
    pub p: Vec<Value>,
    pub phi: PhiSpec,
    #[serde(default)]
    pub alpha: Vec<Value>,
    pub f: String,
    #[serde(default)]
    pub grid: GridSpec,
    pub mode: Option<Mode>,
}

impl ProblemConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("invalid config {}: {e}", path.display())))
    }

    /// Checks the polynomial invariants: degree at least one, nonzero
    /// leading coefficient, one datum per order.
    pub fn validate_polynomial(&self) -> Result<(), CliError> {
        let m = self.p.len().saturating_sub(1);
        if m == 0 {
            return Err(CliError::Input("P needs at least two coefficients".into()));
        }
        if complex_value(&self.p[0])? == Complex64::new(0.0, 0.0) {
            return Err(CliError::Input("leading coefficient a_0 must be nonzero".into()));
        }
        if self.alpha.len() != m {
            return Err(CliError::Input(format!(
                "alpha has {} entries but P has degree {m}",
                self.alpha.len()
            )));
        }
        Ok(())
    }

    /// Exact mode is possible when every value is rational.
    pub fn exact_possible(&self) -> Result<bool, CliError> {
        let atoms = self.phi.atoms()?;
        Ok(self.k.to_rational().is_some()
            && self.p.iter().chain(&self.alpha).all(|v| rational_value(v).is_some())
            && atoms.iter().all(|a| atom_rationals(a).is_some()))
    }

    /// The requested mode, or exact when possible.
    pub fn resolve_mode(&self, requested: Option<Mode>) -> Result<Mode, CliError> {
        let possible = self.exact_possible()?;
        match requested.or(self.mode) {
            Some(Mode::Exact) if !possible => Err(CliError::Input(
                "exact mode needs rational k, P, alpha and functional atoms".into(),
            )),
            Some(mode) => Ok(mode),
            None if possible => Ok(Mode::Exact),
            None => Ok(Mode::Float),
        }
    }

    pub fn expression(&self) -> Result<Expression, CliError> {
        parse_expression(&self.f).map_err(CliError::Syntax)
    }

    pub fn rhs_grid(&self) -> Result<ParityGrid, CliError> {
        let expr = self.expression()?;
        sample_expression(&expr, self.grid.xmax, self.grid.n)
    }
}

pub fn sample_expression(expr: &Expression, xmax: f64, n: usize) -> Result<ParityGrid, CliError> {
    Ok(ParityGrid::sample(|x| Complex64::new(expr.eval(x), 0.0), xmax, n)?)
}

fn rational_value(v: &Value) -> Option<BigRational> {
    match v {
        Value::Real(n) => n.to_rational(),
        Value::Complex([re, im]) => {
            let im = im.to_rational()?;
            if im == BigRational::from_integer(0.into()) {
                re.to_rational()
            } else {
                None
            }
        }
    }
}

fn complex_value(v: &Value) -> Result<Complex64, CliError> {
    match v {
        Value::Real(n) => Ok(Complex64::new(n.to_f64()?, 0.0)),
        Value::Complex([re, im]) => Ok(Complex64::new(re.to_f64()?, im.to_f64()?)),
    }
}

fn atom_rationals(a: &Atom) -> Option<Vec<BigRational>> {
    match a {
        Atom::Point { point, weight } => Some(vec![point.to_rational()?, weight.to_rational()?]),
        Atom::Interval { interval: [lo, hi], weight } => Some(vec![
            lo.to_rational()?,
            hi.to_rational()?,
            weight.to_rational()?,
        ]),
    }
}

/// Conversion of configuration values into a core scalar field.
pub trait ConfigScalar: Scalar {
    fn from_number(n: &Number) -> Result<Self, CliError>;
    fn from_value(v: &Value) -> Result<Self, CliError>;
}

impl ConfigScalar for BigRational {
    fn from_number(n: &Number) -> Result<Self, CliError> {
        n.to_rational()
            .ok_or_else(|| CliError::Input(format!("{n:?} is not an exact rational")))
    }

    fn from_value(v: &Value) -> Result<Self, CliError> {
        rational_value(v).ok_or_else(|| CliError::Input(format!("{v:?} is not an exact rational")))
    }
}

impl ConfigScalar for f64 {
    fn from_number(n: &Number) -> Result<Self, CliError> {
        n.to_f64()
    }

    fn from_value(v: &Value) -> Result<Self, CliError> {
        let z = complex_value(v)?;
        if z.im != 0.0 {
            return Err(CliError::Input(format!("{v:?} must be real here")));
        }
        Ok(z.re)
    }
}

impl ConfigScalar for Complex64 {
    fn from_number(n: &Number) -> Result<Self, CliError> {
        Ok(Complex64::new(n.to_f64()?, 0.0))
    }

    fn from_value(v: &Value) -> Result<Self, CliError> {
        complex_value(v)
    }
}

pub fn param<R: ConfigScalar + RealScalar>(k: &Number) -> Result<DunklParam<R>, CliError> {
    Ok(DunklParam::new(R::from_number(k)?)?)
}

pub fn functional<T: ConfigScalar>(spec: &PhiSpec) -> Result<Functional<T>, CliError> {
    let mut points = Vec::new();
    let mut intervals = Vec::new();
    for atom in spec.atoms()? {
        match atom {
            Atom::Point { point, weight } => points.push(PointAtom {
                location: T::from_number(&point)?,
                weight: T::from_number(&weight)?,
            }),
            Atom::Interval { interval: [a, b], weight } => intervals.push(IntervalAtom {
                a: T::from_number(&a)?,
                b: T::from_number(&b)?,
                weight: T::from_number(&weight)?,
            }),
        }
    }
    let phi = Functional::new(points, intervals)?;
    phi.require_normalized()?;
    Ok(phi)
}

/// `P` from descending coefficients.
pub fn polynomial<T: ConfigScalar>(coeffs: &[Value]) -> Result<Polynomial<T>, CliError> {
    let values = coeffs.iter().map(T::from_value).collect::<Result<Vec<_>, _>>()?;
    Ok(Polynomial::from_descending(&values))
}

pub fn values<T: ConfigScalar>(vs: &[Value]) -> Result<Vec<T>, CliError> {
    vs.iter().map(T::from_value).collect()
}
