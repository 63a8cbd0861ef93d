//! `solution.csv`, `report.json` and the other emitted files.

use std::fmt::Write as _;
use std::path::Path;

use dunkl_calculus::{Complex64, ParityGrid, PartialFractionForm, SolutionReport};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV over all `2n+1` nodes, `-xmax` first.
pub fn grid_csv(grid: &ParityGrid, header: [&str; 3]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for (x, v) in grid.full_nodes() {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_float(x),
            format_float(v.re),
            format_float(v.im)
        );
    }
    out
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), contents)?;
    Ok(())
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FractionTerm {
    pub root: [f64; 2],
    pub order: usize,
    pub coefficient: [f64; 2],
}

/// Expansions of `1/P(S)` and `Q(S)/P(S)`.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Fractions {
    pub inverse: Vec<FractionTerm>,
    pub boundary: Vec<FractionTerm>,
}

fn terms(form: &PartialFractionForm) -> Vec<FractionTerm> {
    form.terms
        .iter()
        .map(|t| FractionTerm {
            root: pair(t.root),
            order: t.order,
            coefficient: pair(t.coefficient),
        })
        .collect()
}

/// The `report.json` schema. Complex numbers are `[re, im]`; norms are
/// `null` when not computed.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub roots: Vec<[f64; 2]>,
    pub multiplicities: Vec<usize>,
    pub indicatrix_at_roots: Vec<[f64; 2]>,
    pub partial_fractions: Fractions,
    pub residual_sup: Option<f64>,
    pub bc_residuals: Vec<f64>,
    pub oracle_diff_sup: Option<f64>,
    pub warnings: Vec<String>,
}

impl From<&SolutionReport> for Report {
    fn from(r: &SolutionReport) -> Self {
        Report {
            roots: r.roots.iter().copied().map(pair).collect(),
            multiplicities: r.multiplicities.clone(),
            indicatrix_at_roots: r.indicatrix_at_roots.iter().copied().map(pair).collect(),
            partial_fractions: Fractions {
                inverse: terms(&r.inverse_fractions),
                boundary: terms(&r.boundary_fractions),
            },
            residual_sup: Some(r.residual_sup),
            bc_residuals: r.bc_residuals.clone(),
            oracle_diff_sup: r.oracle_diff_sup,
            warnings: r.warnings.clone(),
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_17_significant_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        let v = std::f64::consts::PI;
        assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn csv_has_all_nodes() {
        let g = ParityGrid::sample(|x| Complex64::new(x, 0.0), 1.0, 16).unwrap();
        let csv = grid_csv(&g, ["x", "u_re", "u_im"]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,u_re,u_im");
        assert_eq!(lines.len(), 1 + 33);
        assert!(!csv.contains('\r'));
        assert!(lines[1].starts_with("-1.0"));
    }

    #[test]
    fn report_round_trips() {
        let report = Report {
            roots: vec![[1.0, -2.0]],
            multiplicities: vec![2],
            residual_sup: Some(1e-9),
            warnings: vec!["w".into()],
            ..Report::default()
        };
        let back: Report = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }
}
