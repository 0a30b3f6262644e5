//! Cartan matrix specifications, the catalog file format, and the built-in registry.
//!
//! A catalog document is line oriented. The first non-comment line is the
//! header `cartan-catalog v1`; every entry starts with a `name=` line and runs
//! until the next one. `data/GRAMMAR.md` documents the exact grammar.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::field::{make_field, FieldCtx, FieldElem, FieldError, Matrix};

pub const CATALOG_HEADER: &str = "cartan-catalog v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("line {line}: field `{field}`: {message}")]
    Schema { line: usize, field: String, message: String },
    #[error("line {line}: duplicate entry name `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("unknown catalog entry `{name}`{}", suggestions_text(.suggestions))]
    Unknown { name: String, suggestions: Vec<String> },
    #[error("{spec}: parameter `{symbol}` is not bound")]
    Unbound { spec: String, symbol: String },
    #[error("{spec}: parameter `{symbol}` = {value} is excluded")]
    Excluded { spec: String, symbol: String, value: String },
    #[error("{spec}: parameter `{symbol}` is not an element of GF({order})")]
    NotInField { spec: String, symbol: String, order: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn suggestions_text(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(" (did you mean: {})", s.join(", "))
    }
}

/// Symbolic matrix entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Entry {
    Int(i64),
    Param(String),
    /// `0bar` / `1bar`; only legal on the diagonal.
    Barred(u8),
}

impl Entry {
    fn parse(tok: &str) -> Option<Entry> {
        match tok {
            "0bar" => Some(Entry::Barred(0)),
            "1bar" => Some(Entry::Barred(1)),
            "a" => Some(Entry::Param("a".into())),
            _ => tok.parse().ok().map(Entry::Int),
        }
    }

    fn render(&self) -> String {
        match self {
            Entry::Int(z) => z.to_string(),
            Entry::Param(s) => s.clone(),
            Entry::Barred(b) => format!("{b}bar"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Paper,
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GoldenRoot {
    pub weight: Vec<u32>,
    pub odd: bool,
    pub isotropic: bool,
}

impl GoldenRoot {
    pub fn new(weight: Vec<u32>, odd: bool, isotropic: bool) -> Self {
        GoldenRoot { weight, odd, isotropic }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GoldenData {
    pub sdim: Option<(u32, u32)>,
    pub derived: Option<(u32, u32)>,
    pub n_positive: Option<usize>,
    pub roots: Option<Vec<GoldenRoot>>,
    /// Path the roots were loaded from, kept for serialization.
    pub roots_path: Option<String>,
    /// Another entry whose positive-root weights must coincide with ours.
    pub alias: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanSpec {
    pub name: String,
    pub p: u32,
    pub field_degree: u32,
    pub entries: Vec<Vec<Entry>>,
    pub parities: Vec<bool>,
    pub source: Source,
    /// symbol -> excluded values (as written)
    pub exclusions: BTreeMap<String, Vec<String>>,
    /// symbol -> default binding (as written)
    pub defaults: BTreeMap<String, String>,
    pub expected: Option<GoldenData>,
}

impl CartanSpec {
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .entries
            .iter()
            .flatten()
            .filter_map(|e| match e {
                Entry::Param(s) => Some(s.clone()),
                _ => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn parity_string(&self) -> String {
        self.parities.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn matrix_string(&self) -> String {
        self.entries
            .iter()
            .map(|r| r.iter().map(Entry::render).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// A binding for a matrix parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Int(i64),
    Elem(FieldElem),
    /// Parsed against the target field (`w`, `a*w+b`, integers).
    Text(String),
}

/// A Cartan matrix with every entry resolved in a concrete field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteCartan {
    pub name: String,
    pub field: Arc<FieldCtx>,
    pub matrix: Matrix,
    pub parities: Vec<bool>,
    pub bindings: BTreeMap<String, FieldElem>,
}

impl ConcreteCartan {
    /// Builds directly from raw field values.
    pub fn new(name: impl Into<String>, field: Arc<FieldCtx>, matrix: Matrix, parities: Vec<bool>) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "Cartan matrix must be square");
        assert_eq!(matrix.rows(), parities.len(), "parity vector length");
        ConcreteCartan { name: name.into(), field, matrix, parities, bindings: BTreeMap::new() }
    }

    /// Integer matrix reduced into `field`.
    pub fn from_integers(name: impl Into<String>, field: Arc<FieldCtx>, rows: &[Vec<i64>], parities: &[bool]) -> Self {
        let raw: Vec<Vec<u8>> = rows.iter().map(|r| r.iter().map(|&z| field.lift_raw(z)).collect()).collect();
        Self::new(name, field, Matrix::from_rows(&raw), parities.to_vec())
    }

    pub fn n(&self) -> usize {
        self.parities.len()
    }

    #[inline]
    pub fn a(&self, i: usize, j: usize) -> u8 {
        self.matrix.get(i, j)
    }

    pub fn entry(&self, i: usize, j: usize) -> FieldElem {
        self.field.wrap(self.matrix.get(i, j))
    }

    pub fn parity_string(&self) -> String {
        self.parities.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn matrix_rows(&self) -> Vec<Vec<String>> {
        (0..self.n()).map(|i| (0..self.n()).map(|j| self.field.format_raw(self.a(i, j))).collect()).collect()
    }
}

/// Resolves every symbolic entry of `spec` in GF(p^k).
pub fn instantiate(spec: &CartanSpec, bindings: &BTreeMap<String, ParamValue>) -> Result<ConcreteCartan, CatalogError> {
    let field = make_field(spec.p, spec.field_degree)?;
    let mut resolved = BTreeMap::new();
    for sym in spec.symbols() {
        let value =
            bindings.get(&sym).ok_or_else(|| CatalogError::Unbound { spec: spec.name.clone(), symbol: sym.clone() })?;
        let elem = match value {
            ParamValue::Int(z) => field.lift_integer(*z),
            ParamValue::Text(t) => field.parse(t)?,
            ParamValue::Elem(e) => {
                if e.field() != field.id() {
                    return Err(CatalogError::NotInField {
                        spec: spec.name.clone(),
                        symbol: sym.clone(),
                        order: field.order(),
                    });
                }
                *e
            }
        };
        for ex in spec.exclusions.get(&sym).into_iter().flatten() {
            if field.parse(ex)? == elem {
                return Err(CatalogError::Excluded {
                    spec: spec.name.clone(),
                    symbol: sym.clone(),
                    value: field.format(elem),
                });
            }
        }
        resolved.insert(sym, elem);
    }
    let n = spec.n();
    let mut m = Matrix::zeros(n, n);
    for (i, row) in spec.entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let v = match e {
                Entry::Int(z) => field.lift_integer(*z),
                Entry::Barred(b) => field.lift_integer(*b as i64),
                Entry::Param(s) => resolved[s],
            };
            m.set(i, j, v.raw());
        }
    }
    Ok(ConcreteCartan {
        name: spec.name.clone(),
        field,
        matrix: m,
        parities: spec.parities.clone(),
        bindings: resolved,
    })
}

/// Instantiates with explicit bindings layered over the spec's defaults.
pub fn instantiate_with_defaults(
    spec: &CartanSpec,
    overrides: &BTreeMap<String, ParamValue>,
) -> Result<ConcreteCartan, CatalogError> {
    let mut b: BTreeMap<String, ParamValue> =
        spec.defaults.iter().map(|(k, v)| (k.clone(), ParamValue::Text(v.clone()))).collect();
    b.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
    instantiate(spec, &b)
}

/// Parses a catalog, resolving `expect.roots` paths against the embedded golden tables.
pub fn parse_catalog(text: &str) -> Result<Vec<CartanSpec>, CatalogError> {
    parse_catalog_with(text, &mut |path| {
        embedded_golden(path).map(str::to_string).ok_or_else(|| format!("no embedded table `{path}`"))
    })
}

/// Parses a catalog file, resolving `expect.roots` relative to its directory.
pub fn parse_catalog_file(path: &Path) -> Result<Vec<CartanSpec>, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Schema {
        line: 0,
        field: "file".into(),
        message: format!("{}: {e}", path.display()),
    })?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    parse_catalog_with(&text, &mut |rel| std::fs::read_to_string(base.join(rel)).map_err(|e| format!("{rel}: {e}")))
}

/// An entry's first line and its `(line, key, value)` fields.
type RawEntry = (usize, Vec<(usize, String, String)>);

type Resolver<'a> = dyn FnMut(&str) -> Result<String, String> + 'a;

pub fn parse_catalog_with(text: &str, resolve: &mut Resolver<'_>) -> Result<Vec<CartanSpec>, CatalogError> {
    let mut specs: Vec<CartanSpec> = Vec::new();
    let mut current: Option<RawEntry> = None;
    let mut saw_header = false;

    let mut finish = |cur: Option<RawEntry>, specs: &mut Vec<CartanSpec>| -> Result<(), CatalogError> {
        if let Some((line, fields)) = cur {
            let spec = build_spec(&fields, &mut *resolve)?;
            if specs.iter().any(|s| s.name == spec.name) {
                return Err(CatalogError::Duplicate { line, name: spec.name });
            }
            specs.push(spec);
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if !saw_header {
            if t != CATALOG_HEADER {
                return Err(schema(line, "header", format!("expected `{CATALOG_HEADER}`")));
            }
            saw_header = true;
            continue;
        }
        let (key, value) = t.split_once('=').ok_or_else(|| schema(line, t, "expected `key=value`".into()))?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if key == "name" {
            finish(current.take(), &mut specs)?;
            current = Some((line, vec![(line, key, value)]));
        } else {
            match current.as_mut() {
                Some((_, fields)) => fields.push((line, key, value)),
                None => return Err(schema(line, &key, "field outside of an entry".into())),
            }
        }
    }
    finish(current.take(), &mut specs)?;
    Ok(specs)
}

fn schema(line: usize, field: &str, message: String) -> CatalogError {
    CatalogError::Schema { line, field: field.to_string(), message }
}

fn parse_pair(line: usize, field: &str, v: &str) -> Result<(u32, u32), CatalogError> {
    let (a, b) = v.split_once('|').ok_or_else(|| schema(line, field, "expected `E|O`".into()))?;
    let a = a.trim().parse().map_err(|_| schema(line, field, format!("bad integer `{a}`")))?;
    let b = b.trim().parse().map_err(|_| schema(line, field, format!("bad integer `{b}`")))?;
    Ok((a, b))
}

fn build_spec(fields: &[(usize, String, String)], resolve: &mut Resolver<'_>) -> Result<CartanSpec, CatalogError> {
    let entry_line = fields[0].0;
    let mut name = None;
    let mut p = None;
    let mut deg = None;
    let mut parities: Option<(usize, Vec<bool>)> = None;
    let mut matrix: Option<(usize, Vec<Vec<Entry>>)> = None;
    let mut source = Source::Paper;
    let mut exclusions = BTreeMap::new();
    let mut defaults = BTreeMap::new();
    let mut golden = GoldenData::default();
    let mut has_golden = false;
    let mut roots_line = 0;

    for (line, key, value) in fields {
        let line = *line;
        let v = value.as_str();
        match key.as_str() {
            "name" => {
                if v.is_empty() {
                    return Err(schema(line, key, "empty name".into()));
                }
                name = Some(v.to_string());
            }
            "p" => p = Some(v.parse::<u32>().map_err(|_| schema(line, key, format!("bad integer `{v}`")))?),
            "fielddeg" => deg = Some(v.parse::<u32>().map_err(|_| schema(line, key, format!("bad integer `{v}`")))?),
            "parities" => {
                let bits = v
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(schema(line, key, format!("bad parity bit `{c}`"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                parities = Some((line, bits));
            }
            "matrix" => {
                let rows = v
                    .split(';')
                    .map(|r| {
                        r.split(',')
                            .map(|tok| {
                                let tok = tok.trim();
                                Entry::parse(tok).ok_or_else(|| schema(line, key, format!("bad token `{tok}`")))
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                matrix = Some((line, rows));
            }
            "source" => {
                source = match v {
                    "paper" => Source::Paper,
                    "external" => Source::External,
                    _ => return Err(schema(line, key, format!("unknown source `{v}`"))),
                }
            }
            "expect.sdim" => {
                golden.sdim = Some(parse_pair(line, key, v)?);
                has_golden = true;
            }
            "expect.derived" => {
                golden.derived = Some(parse_pair(line, key, v)?);
                has_golden = true;
            }
            "expect.positive" => {
                golden.n_positive = Some(v.parse().map_err(|_| schema(line, key, format!("bad integer `{v}`")))?);
                has_golden = true;
            }
            "expect.roots" => {
                let text = resolve(v).map_err(|m| schema(line, key, m))?;
                golden.roots =
                    Some(parse_roots_csv(&text).map_err(|(l, m)| schema(line, key, format!("{v}:{l}: {m}")))?);
                golden.roots_path = Some(v.to_string());
                has_golden = true;
                roots_line = line;
            }
            "expect.alias" => {
                golden.alias = Some(v.to_string());
                has_golden = true;
            }
            k => {
                if let Some(sym) = k.strip_prefix("exclude.") {
                    exclusions.insert(sym.to_string(), v.split(',').map(|s| s.trim().to_string()).collect());
                } else if let Some(sym) = k.strip_prefix("default.") {
                    defaults.insert(sym.to_string(), v.to_string());
                } else {
                    return Err(schema(line, k, "unknown field".into()));
                }
            }
        }
    }

    let name = name.ok_or_else(|| schema(entry_line, "name", "missing".into()))?;
    let p = p.ok_or_else(|| schema(entry_line, "p", "missing".into()))?;
    let deg = deg.unwrap_or(1);
    let (mline, entries) = matrix.ok_or_else(|| schema(entry_line, "matrix", "missing".into()))?;
    let (pline, parities) = parities.ok_or_else(|| schema(entry_line, "parities", "missing".into()))?;
    let n = entries.len();
    if entries.iter().any(|r| r.len() != n) {
        return Err(schema(mline, "matrix", format!("matrix is not square ({n} rows)")));
    }
    if parities.len() != n {
        return Err(schema(pline, "parities", format!("expected {n} bits, found {}", parities.len())));
    }
    for (i, row) in entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if i != j && matches!(e, Entry::Barred(_)) {
                return Err(schema(
                    mline,
                    "matrix",
                    format!("barred literal off the diagonal at ({},{})", i + 1, j + 1),
                ));
            }
        }
    }
    make_field(p, deg).map_err(|e| schema(entry_line, "p", e.to_string()))?;
    if let Some(roots) = &golden.roots {
        if let Some(bad) = roots.iter().find(|r| r.weight.len() != n) {
            return Err(schema(roots_line, "expect.roots", format!("root {:?} has wrong length", bad.weight)));
        }
        if let Some(np) = golden.n_positive {
            if np != roots.len() {
                return Err(schema(
                    roots_line,
                    "expect.roots",
                    format!("{} rows but expect.positive={np}", roots.len()),
                ));
            }
        }
    }
    Ok(CartanSpec {
        name,
        p,
        field_degree: deg,
        entries,
        parities,
        source,
        exclusions,
        defaults,
        expected: has_golden.then_some(golden),
    })
}

/// Golden root CSV: `k1,...,kn,parity,isotropic` per row, `#` comments.
pub fn parse_roots_csv(text: &str) -> Result<Vec<GoldenRoot>, (usize, String)> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let nums = t
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| (idx + 1, e.to_string()))?;
        if nums.len() < 3 {
            return Err((idx + 1, "too few columns".into()));
        }
        let (w, flags) = nums.split_at(nums.len() - 2);
        if flags.iter().any(|&f| f > 1) {
            return Err((idx + 1, "flags must be 0 or 1".into()));
        }
        out.push(GoldenRoot::new(w.to_vec(), flags[0] == 1, flags[1] == 1));
    }
    Ok(out)
}

pub fn roots_to_csv(roots: &[GoldenRoot]) -> String {
    let n = roots.first().map_or(0, |r| r.weight.len());
    let mut s = String::from("#");
    for i in 1..=n {
        let _ = write!(s, " k{i},");
    }
    s.push_str(" parity,isotropic\n");
    for r in roots {
        for k in &r.weight {
            let _ = write!(s, "{k},");
        }
        let _ = writeln!(s, "{},{}", r.odd as u8, r.isotropic as u8);
    }
    s
}

/// Inverse of [`parse_catalog`]; golden roots are referenced by their path.
pub fn serialize_catalog(specs: &[CartanSpec]) -> String {
    let mut s = format!("{CATALOG_HEADER}\n");
    for spec in specs {
        s.push('\n');
        let _ = writeln!(s, "name={}", spec.name);
        let _ = writeln!(s, "p={}", spec.p);
        let _ = writeln!(s, "fielddeg={}", spec.field_degree);
        let _ = writeln!(s, "parities={}", spec.parity_string());
        let _ = writeln!(s, "matrix={}", spec.matrix_string());
        for (sym, vals) in &spec.exclusions {
            let _ = writeln!(s, "exclude.{sym}={}", vals.join(","));
        }
        for (sym, v) in &spec.defaults {
            let _ = writeln!(s, "default.{sym}={v}");
        }
        if spec.source == Source::External {
            s.push_str("source=external\n");
        }
        if let Some(g) = &spec.expected {
            if let Some((e, o)) = g.sdim {
                let _ = writeln!(s, "expect.sdim={e}|{o}");
            }
            if let Some((e, o)) = g.derived {
                let _ = writeln!(s, "expect.derived={e}|{o}");
            }
            if let Some(np) = g.n_positive {
                let _ = writeln!(s, "expect.positive={np}");
            }
            if let Some(path) = &g.roots_path {
                let _ = writeln!(s, "expect.roots={path}");
            }
            if let Some(a) = &g.alias {
                let _ = writeln!(s, "expect.alias={a}");
            }
        }
    }
    s
}

macro_rules! golden_tables {
    ($($file:literal),* $(,)?) => {
        const GOLDEN: &[(&str, &str)] = &[
            $((concat!("golden/", $file), include_str!(concat!("../data/golden/", $file))),)*
        ];
    };
}

golden_tables!(
    "brj25.csv",
    "brj23.csv",
    "el55.csv",
    "el53.csv",
    "g16.csv",
    "g23.csv",
    "g26.csv",
    "g33.csv",
    "g36.csv",
    "g43.csv",
    "g83.csv",
    "g46.csv",
    "g66.csv",
    "g86.csv",
    "bgl3.csv",
    "bgl4.csv",
    "e61.csv",
    "e66.csv",
    "e71.csv",
    "e76.csv",
    "e77.csv",
    "e81.csv",
    "e88.csv",
    "br3.csv",
);

pub const BUILTIN_CATALOG: &str = include_str!("../data/paper.catalog");

pub fn embedded_golden(path: &str) -> Option<&'static str> {
    GOLDEN.iter().find(|(p, _)| *p == path).map(|(_, t)| *t)
}

/// A parsed catalog with name lookup.
#[derive(Debug, Clone)]
pub struct Catalog {
    specs: Vec<CartanSpec>,
}

impl Catalog {
    pub fn new(specs: Vec<CartanSpec>) -> Self {
        Catalog { specs }
    }

    pub fn specs(&self) -> &[CartanSpec] {
        &self.specs
    }

    pub fn get(&self, name: &str) -> Result<&CartanSpec, CatalogError> {
        self.specs
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| CatalogError::Unknown { name: name.to_string(), suggestions: self.near_matches(name) })
    }

    fn near_matches(&self, name: &str) -> Vec<String> {
        let key = name.to_lowercase();
        let mut scored: Vec<(usize, &str)> = self
            .specs
            .iter()
            .map(|s| {
                let cand = s.name.to_lowercase();
                let d = if cand.starts_with(&key) || cand.contains(&key) { 0 } else { edit_distance(&key, &cand) };
                (d, s.name.as_str())
            })
            .filter(|(d, _)| *d <= 3)
            .collect();
        scored.sort();
        scored.into_iter().take(5).map(|(_, s)| s.to_string()).collect()
    }
}

fn edit_distance(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = (prev[j] + (ca != cb) as usize).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

/// The registry compiled into the crate.
pub fn builtin_catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::new(parse_catalog(BUILTIN_CATALOG).expect("embedded catalog is valid")))
}

pub fn builtin(name: &str) -> Result<CartanSpec, CatalogError> {
    builtin_catalog().get(name).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(cc: &ConcreteCartan) -> Vec<Vec<u8>> {
        (0..cc.n()).map(|i| (0..cc.n()).map(|j| cc.a(i, j)).collect()).collect()
    }

    #[test]
    fn builtin_has_every_reference_table() {
        let cat = builtin_catalog();
        let tabled: Vec<_> = cat.specs().iter().filter(|s| s.source == Source::Paper).collect();
        assert!(tabled.len() >= 24);
        assert!(cat.get("g(1,6)#1").is_ok());
        let with_tables = tabled.iter().filter(|s| s.expected.as_ref().is_some_and(|g| g.roots.is_some())).count();
        assert_eq!(with_tables, 24);
    }

    #[test]
    fn brj23_entry() {
        let s = builtin("brj(2;3)#1").unwrap();
        assert_eq!(s.entries, vec![vec![Entry::Int(0), Entry::Int(-1)], vec![Entry::Int(-2), Entry::Int(1)]]);
        assert_eq!(s.parities, vec![true, true]);
        assert_eq!(s.expected.unwrap().sdim, Some((10, 8)));
    }

    #[test]
    fn br3_entry() {
        let s = builtin("br(3)").unwrap();
        assert_eq!(s.entries[2][2], Entry::Barred(0));
        assert_eq!(s.entries[0][0], Entry::Int(2));
        assert_eq!(s.entries[1][1], Entry::Int(2));
        assert_eq!(s.parity_string(), "000");
        assert_eq!(s.expected.unwrap().roots.unwrap().len(), 13);
        let cc = instantiate(&builtin("br(3)").unwrap(), &BTreeMap::new()).unwrap();
        assert_eq!(cc.a(2, 2), 0);
    }

    #[test]
    fn e88_entry() {
        let s = builtin("e(8,8)#cat").unwrap();
        assert_eq!(s.parity_string(), "11111111");
        assert_eq!(s.expected.as_ref().unwrap().roots.as_ref().unwrap().len(), 120);
        let cc = instantiate(&s, &BTreeMap::new()).unwrap();
        // bonds 12,23,34,45,56,58,67; -1 = 1 and 2 = 0 mod 2
        let bonds = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (4, 7), (5, 6)];
        for i in 0..8 {
            for j in 0..8 {
                let bonded = bonds.contains(&(i, j)) || bonds.contains(&(j, i));
                assert_eq!(cc.a(i, j), bonded as u8, "({i},{j})");
            }
        }
    }

    #[test]
    fn bgl3_instantiation() {
        let s = builtin("bgl(3;a)").unwrap();
        let f4 = make_field(2, 2).unwrap();
        let mut b = BTreeMap::new();
        b.insert("a".to_string(), ParamValue::Elem(f4.generator()));
        let cc = instantiate(&s, &b).unwrap();
        assert_eq!(cc.entry(0, 1), f4.generator());
        assert_eq!(cc.entry(1, 0), f4.generator());

        b.insert("a".to_string(), ParamValue::Int(0));
        assert!(matches!(instantiate(&s, &b), Err(CatalogError::Excluded { .. })));
        b.insert("a".to_string(), ParamValue::Int(1));
        assert!(matches!(instantiate(&s, &b), Err(CatalogError::Excluded { .. })));
        assert!(matches!(instantiate(&s, &BTreeMap::new()), Err(CatalogError::Unbound { .. })));

        let f9 = make_field(3, 2).unwrap();
        b.insert("a".to_string(), ParamValue::Elem(f9.generator()));
        assert!(matches!(instantiate(&s, &b), Err(CatalogError::NotInField { .. })));

        let cc = instantiate_with_defaults(&s, &BTreeMap::new()).unwrap();
        assert_eq!(ints(&cc)[0][1], f4.generator().raw());
    }

    #[test]
    fn empty_and_malformed_documents() {
        assert!(parse_catalog("").unwrap().is_empty());
        assert!(parse_catalog("cartan-catalog v1\n").unwrap().is_empty());
        let bad = "cartan-catalog v1\nname=x\np=3\nparities=00\nmatrix=1,2,3;4,5,6\n";
        match parse_catalog(bad) {
            Err(CatalogError::Schema { line, field, .. }) => {
                assert_eq!(line, 5);
                assert_eq!(field, "matrix");
            }
            other => panic!("{other:?}"),
        }
        let barred = "cartan-catalog v1\nname=x\np=3\nparities=00\nmatrix=2,0bar;0,2\n";
        assert!(matches!(parse_catalog(barred), Err(CatalogError::Schema { .. })));
        let dup = "cartan-catalog v1\nname=x\np=3\nparities=0\nmatrix=2\nname=x\np=3\nparities=0\nmatrix=2\n";
        assert!(matches!(parse_catalog(dup), Err(CatalogError::Duplicate { line: 6, .. })));
        assert!(parse_catalog("name=x\n").is_err());
        let nonprime = "cartan-catalog v1\nname=x\np=4\nparities=0\nmatrix=2\n";
        assert!(parse_catalog(nonprime).is_err());
    }

    #[test]
    fn unknown_name_suggests() {
        match builtin("g(1,6)") {
            Err(CatalogError::Unknown { suggestions, .. }) => assert!(suggestions.contains(&"g(1,6)#1".to_string())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn builtins_round_trip() {
        let specs = builtin_catalog().specs().to_vec();
        let text = serialize_catalog(&specs);
        assert_eq!(parse_catalog(&text).unwrap(), specs);
    }

    #[test]
    fn golden_tables_follow_parity_formula() {
        for s in builtin_catalog().specs() {
            let Some(roots) = s.expected.as_ref().and_then(|g| g.roots.as_ref()) else { continue };
            for r in roots {
                let par = r.weight.iter().zip(&s.parities).filter(|(_, &p)| p).map(|(k, _)| k).sum::<u32>() % 2;
                assert_eq!(r.odd, par == 1, "{} {:?}", s.name, r.weight);
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let roots = builtin("g(2,3)#2").unwrap().expected.unwrap().roots.unwrap();
        assert_eq!(parse_roots_csv(&roots_to_csv(&roots)).unwrap(), roots);
    }
}
