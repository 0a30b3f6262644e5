//! Report emitters: JSON, CSV in the golden-table format, and a LaTeX table
//! in the style "the root vectors | the roots".

use std::fmt::Write as _;

use crate::analysis::{to_json, RootReport};
use crate::catalog::{roots_to_csv, GoldenRoot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Csv,
}

pub fn emit(report: &RootReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report) + "\n",
        Format::Csv => emit_csv(report),
        Format::Latex => emit_latex(report),
    }
}

pub fn emit_csv(report: &RootReport) -> String {
    let rows: Vec<GoldenRoot> =
        report.roots.iter().map(|r| GoldenRoot::new(r.k.clone(), r.parity == 1, r.isotropic)).collect();
    roots_to_csv(&rows)
}

fn root_tex(k: &[u32]) -> String {
    let terms: Vec<String> = k
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| if c == 1 { format!("\\alpha_{{{}}}", i + 1) } else { format!("{c}\\alpha_{{{}}}", i + 1) })
        .collect();
    terms.join(" + ")
}

/// One row per root vector, a rule between heights; odd vectors framed,
/// isotropic roots underlined.
pub fn emit_latex(report: &RootReport) -> String {
    let mut s = String::new();
    s.push_str("\\begin{tabular}{|l|l|}\n\\hline\nthe root vectors & the roots\\\\\n\\hline\n");
    let mut x = 0usize;
    let mut last_height = None;
    for r in &report.roots {
        if last_height.is_some_and(|h| h != r.height) {
            s.push_str("\\hline\n");
        }
        last_height = Some(r.height);
        let names: Vec<String> = (0..r.mult)
            .map(|_| {
                x += 1;
                if r.parity == 1 {
                    format!("\\boxed{{x_{{{x}}}}}")
                } else {
                    format!("x_{{{x}}}")
                }
            })
            .collect();
        let root =
            if r.isotropic { format!("\\underline{{${}$}}", root_tex(&r.k)) } else { format!("${}$", root_tex(&r.k)) };
        let _ = writeln!(s, "${}$ & {root}\\\\", names.join(",\\ "));
    }
    s.push_str("\\hline\n\\end{tabular}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{root_report, Sdim};
    use crate::builder::{build, BuildLimits};
    use crate::catalog::{builtin_catalog, instantiate_with_defaults, parse_roots_csv};

    fn report(name: &str) -> RootReport {
        let cc = instantiate_with_defaults(builtin_catalog().get(name).unwrap(), &Default::default()).unwrap();
        root_report(&build(&cc, BuildLimits::default()).unwrap())
    }

    fn data_rows(tex: &str) -> usize {
        tex.lines().filter(|l| l.ends_with("\\\\") && !l.starts_with("the root")).count()
    }

    #[test]
    fn latex_brj23() {
        let tex = emit_latex(&report("brj(2;3)#1"));
        assert_eq!(data_rows(&tex), 8);
        assert_eq!(tex.matches("\\boxed").count(), 4);
        assert_eq!(tex.matches("\\underline").count(), 2);
        assert!(tex.contains("\\underline{$\\alpha_{1} + 4\\alpha_{2}$}"));
    }

    #[test]
    fn latex_g23_and_empty() {
        assert_eq!(data_rows(&emit_latex(&report("g(2,3)#2"))), 11);
        let empty = RootReport {
            name: "empty".into(),
            p: 2,
            field: "GF(2)".into(),
            n: 0,
            rank: 0,
            dim_h: 0,
            sdim: Sdim { even: 0, odd: 0 },
            derived: None,
            roots: vec![],
        };
        let tex = emit_latex(&empty);
        assert_eq!(data_rows(&tex), 0);
        assert!(tex.contains("the root vectors & the roots"));
    }

    #[test]
    fn csv_matches_golden_table() {
        let spec = builtin_catalog().get("g(1,6)#1").unwrap();
        let mut golden = spec.expected.clone().unwrap().roots.unwrap();
        let mut ours = parse_roots_csv(&emit_csv(&report("g(1,6)#1"))).unwrap();
        golden.sort();
        ours.sort();
        assert_eq!(ours, golden);
    }
}
