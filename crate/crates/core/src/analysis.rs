//! Observables of a built algebra: root report, isotropy, superdimension,
//! and comparison with golden tables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::builder::{AlgebraModel, Weight};
use crate::catalog::{GoldenData, GoldenRoot};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("weight {0} is not a root")]
    NotARoot(Weight),
    #[error("root {weight} has multiplicity {mult}; isotropy needs a one-dimensional root space")]
    Multiplicity { weight: Weight, mult: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sdim {
    pub even: u32,
    pub odd: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEntry {
    pub k: Vec<u32>,
    pub parity: u8,
    pub isotropic: bool,
    pub height: u32,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

fn is_one(m: &usize) -> bool {
    *m == 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootReport {
    pub name: String,
    pub p: u32,
    pub field: String,
    pub n: usize,
    pub rank: usize,
    pub dim_h: usize,
    pub sdim: Sdim,
    /// Dimensions of the derived algebra, present when `A` is degenerate.
    pub derived: Option<Sdim>,
    pub roots: Vec<RootEntry>,
}

impl RootReport {
    pub fn n_positive(&self) -> usize {
        self.roots.len()
    }

    pub fn corank(&self) -> usize {
        self.n - self.rank
    }

    /// `E|O`, or `E/E'|O` when the matrix is degenerate.
    pub fn sdim_string(&self) -> String {
        match self.derived {
            Some(d) => format!("{}/{}|{}", self.sdim.even, d.even, self.sdim.odd),
            None => format!("{}|{}", self.sdim.even, self.sdim.odd),
        }
    }

    pub fn isotropic_roots(&self) -> Vec<&[u32]> {
        self.roots.iter().filter(|r| r.isotropic).map(|r| r.k.as_slice()).collect()
    }

    /// Same report with parities and isotropy erased.
    pub fn without_parities(&self) -> Vec<(Vec<u32>, usize)> {
        self.roots.iter().map(|r| (r.k.clone(), r.mult)).collect()
    }
}

/// `alpha(h_alpha) = 0` for an odd root with a one-dimensional root space.
pub fn isotropy(model: &AlgebraModel, alpha: &Weight) -> Result<bool, AnalysisError> {
    let mut sc = model.structure_constants();
    isotropy_with(model, &mut sc, alpha)
}

fn isotropy_with(
    model: &AlgebraModel,
    sc: &mut crate::builder::StructureConstants<'_>,
    alpha: &Weight,
) -> Result<bool, AnalysisError> {
    let s = model.space_index(alpha).ok_or_else(|| AnalysisError::NotARoot(alpha.clone()))?;
    let sp = &model.spaces()[s];
    if sp.multiplicity() != 1 {
        return Err(AnalysisError::Multiplicity { weight: alpha.clone(), mult: sp.multiplicity() });
    }
    if !sp.odd {
        return Ok(false);
    }
    let f = model.field();
    let c = model.coroot(sc, s);
    let value = (0..model.n()).fold(f.zero(), |acc, i| {
        let term = f.mul(f.wrap(c[i]), f.wrap(model.eval(alpha, i))).expect("same field");
        f.add(acc, term).expect("same field")
    });
    Ok(value.is_zero())
}

pub fn root_report(model: &AlgebraModel) -> RootReport {
    let cc = &model.cartan;
    let dims = model.dims;
    let mut sc = model.structure_constants();
    let mut roots: Vec<RootEntry> = model
        .spaces()
        .iter()
        .map(|sp| RootEntry {
            k: sp.weight.0.clone(),
            parity: sp.odd as u8,
            isotropic: isotropy_with(model, &mut sc, &sp.weight).unwrap_or(false),
            height: sp.height(),
            mult: sp.multiplicity(),
        })
        .collect();
    roots.sort_by(|a, b| (a.height, &a.k).cmp(&(b.height, &b.k)));
    let count = |odd: u8| roots.iter().filter(|r| r.parity == odd).map(|r| r.mult as u32).sum::<u32>();
    let sdim = Sdim { even: 2 * count(0) + dims.dim_h as u32, odd: 2 * count(1) };
    let derived = (dims.corank > 0).then(|| Sdim { even: sdim.even - 2 * dims.corank as u32, odd: sdim.odd });
    RootReport {
        name: cc.name.clone(),
        p: cc.field.p(),
        field: cc.field.name(),
        n: dims.n,
        rank: dims.rank,
        dim_h: dims.dim_h,
        sdim,
        derived,
        roots,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootMismatch {
    pub k: Vec<u32>,
    pub expected: (bool, bool),
    pub computed: (bool, bool),
}

type Pair = (u32, u32);

/// Differences between a report and golden data. Empty means agreement.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Diff {
    /// `(expected, computed)`, here and in the fields below.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sdim: Option<(Pair, Pair)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derived: Option<(Pair, Option<Pair>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_positive: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub missing: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mismatched: Vec<RootMismatch>,
}

impl Diff {
    pub fn is_empty(&self) -> bool {
        *self == Diff::default()
    }

    /// Only isotropy flags disagree.
    pub fn isotropy_only(&self) -> bool {
        !self.mismatched.is_empty()
            && self.sdim.is_none()
            && self.derived.is_none()
            && self.n_positive.is_none()
            && self.missing.is_empty()
            && self.extra.is_empty()
            && self.mismatched.iter().all(|m| m.expected.0 == m.computed.0)
    }

    pub fn summary(&self) -> String {
        if self.is_empty() {
            return "ok".into();
        }
        let mut parts = Vec::new();
        if let Some((e, c)) = self.sdim {
            parts.push(format!("sdim expected {}|{} got {}|{}", e.0, e.1, c.0, c.1));
        }
        if let Some((e, c)) = self.derived {
            let got = c.map_or("none".to_string(), |c| format!("{}|{}", c.0, c.1));
            parts.push(format!("derived expected {}|{} got {got}", e.0, e.1));
        }
        if let Some((e, c)) = self.n_positive {
            parts.push(format!("{c} positive roots, expected {e}"));
        }
        if !self.missing.is_empty() {
            parts.push(format!("{} missing", self.missing.len()));
        }
        if !self.extra.is_empty() {
            parts.push(format!("{} extra", self.extra.len()));
        }
        let parity = self.mismatched.iter().filter(|m| m.expected.0 != m.computed.0).count();
        let iso = self.mismatched.len() - parity;
        if parity > 0 {
            parts.push(format!("{parity} parity mismatches"));
        }
        if iso > 0 {
            parts.push(format!("{iso} isotropy mismatches"));
        }
        parts.join("; ")
    }
}

pub fn compare(report: &RootReport, golden: &GoldenData) -> Diff {
    let mut d = Diff::default();
    if let Some(e) = golden.sdim {
        let c = (report.sdim.even, report.sdim.odd);
        if e != c {
            d.sdim = Some((e, c));
        }
    }
    if let Some(e) = golden.derived {
        let c = report.derived.map(|s| (s.even, s.odd));
        if Some(e) != c {
            d.derived = Some((e, c));
        }
    }
    if let Some(e) = golden.n_positive {
        if e != report.n_positive() {
            d.n_positive = Some((e, report.n_positive()));
        }
    }
    if let Some(rows) = &golden.roots {
        let mut expected: Vec<&GoldenRoot> = rows.iter().collect();
        expected.sort_by(|a, b| a.weight.cmp(&b.weight));
        let mut computed: Vec<&RootEntry> = report.roots.iter().collect();
        computed.sort_by(|a, b| a.k.cmp(&b.k));
        let (mut i, mut j) = (0, 0);
        while i < expected.len() || j < computed.len() {
            match (expected.get(i), computed.get(j)) {
                (Some(e), Some(c)) if e.weight == c.k => {
                    let (ee, cc) = ((e.odd, e.isotropic), (c.parity == 1, c.isotropic));
                    if ee != cc {
                        d.mismatched.push(RootMismatch { k: c.k.clone(), expected: ee, computed: cc });
                    }
                    i += 1;
                    j += 1;
                }
                (Some(e), Some(c)) if e.weight < c.k => {
                    d.missing.push(e.weight.clone());
                    i += 1;
                }
                (Some(e), None) => {
                    d.missing.push(e.weight.clone());
                    i += 1;
                }
                (_, Some(c)) => {
                    d.extra.push(c.k.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
    }
    d
}

pub fn to_json(report: &RootReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}
