//! Odd reflections, canonical keys for Cartan matrices, and bounded orbit
//! enumeration.
//!
//! The reflected matrix is read off the built algebra: the new Chevalley
//! generators are brackets of the old ones and `A'_{jk} = alpha'_k(h'_j)`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::builder::{build, AlgebraModel, BasisRef, BuildError, BuildLimits, Element, Slot};
use crate::catalog::ConcreteCartan;
use crate::field::{FieldCtx, Matrix};
use crate::par::{self, Execution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReflectionError {
    /// `index` is 0-based; messages count from 1 like the CLI.
    #[error("simple root {} is not odd isotropic (parity {}, diagonal {diagonal})", .index + 1, if *.odd { "odd" } else { "even" })]
    NotIsotropic { index: usize, odd: bool, diagonal: String },
    #[error("pivot {} out of range for rank {n}", .index + 1)]
    OutOfRange { index: usize, n: usize },
    #[error("reflected generator {} vanishes", .index + 1)]
    Degenerate { index: usize },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// A base of simple roots together with its Cartan matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseState {
    pub cartan: ConcreteCartan,
    /// Simple roots in the coordinates of the starting base.
    pub simple_roots: Vec<Vec<i64>>,
    /// Pivots applied so far (0-based).
    pub chain: Vec<usize>,
}

impl BaseState {
    pub fn new(cartan: ConcreteCartan) -> Self {
        let n = cartan.n();
        let simple_roots = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
        BaseState { cartan, simple_roots, chain: Vec::new() }
    }

    /// Expresses a weight of this base in the starting base's coordinates.
    pub fn to_original(&self, k: &[i64]) -> Vec<i64> {
        let n = self.cartan.n();
        (0..n).map(|c| (0..n).map(|j| k[j] * self.simple_roots[j][c]).sum()).collect()
    }
}

/// Simple roots that admit an odd reflection.
pub fn reflectable(cc: &ConcreteCartan) -> Vec<usize> {
    (0..cc.n()).filter(|&i| cc.parities[i] && cc.a(i, i) == 0).collect()
}

fn gen(model: &AlgebraModel, i: usize, neg: bool) -> BasisRef {
    let s = model.generator_space(i);
    if neg {
        BasisRef::Neg(s, 0)
    } else {
        BasisRef::Pos(s, 0)
    }
}

/// Reflects `state` at the odd isotropic simple root `i`; `model` must be
/// built from `state.cartan`.
pub fn odd_reflect(state: &BaseState, model: &AlgebraModel, i: usize) -> Result<BaseState, ReflectionError> {
    let cc = &state.cartan;
    let n = cc.n();
    let f = &*cc.field;
    if i >= n {
        return Err(ReflectionError::OutOfRange { index: i, n });
    }
    if !reflectable(cc).contains(&i) {
        return Err(ReflectionError::NotIsotropic {
            index: i,
            odd: cc.parities[i],
            diagonal: f.format_raw(cc.a(i, i)),
        });
    }
    let linked = |j: usize| j != i && (cc.a(i, j) != 0 || cc.a(j, i) != 0);

    // new simple roots in current coordinates
    let new_local: Vec<Vec<i64>> = (0..n)
        .map(|j| {
            let mut v = vec![0i64; n];
            if j == i {
                v[i] = -1;
            } else {
                v[j] = 1;
                if linked(j) {
                    v[i] = 1;
                }
            }
            v
        })
        .collect();

    let mut sc = model.structure_constants();
    let mut h_new: Vec<Vec<u8>> = Vec::with_capacity(n);
    for j in 0..n {
        let (e, fv): (Element, Element) = if j == i {
            (sc.element(gen(model, i, true)), sc.element(gen(model, i, false)))
        } else if linked(j) {
            (
                sc.bracket(gen(model, j, false), gen(model, i, false)),
                sc.bracket(gen(model, j, true), gen(model, i, true)),
            )
        } else {
            (sc.element(gen(model, j, false)), sc.element(gen(model, j, true)))
        };
        if e.is_zero() || fv.is_zero() {
            return Err(ReflectionError::Degenerate { index: j });
        }
        let h = sc.bracket_elements(&e, &fv);
        let c = h.cartan_part(n);
        if c.iter().all(|&x| x == 0) || h.parts.keys().any(|s| *s != Slot::Cartan) {
            return Err(ReflectionError::Degenerate { index: j });
        }
        h_new.push(c);
    }

    // alpha(h_m) for a signed weight
    let eval = |w: &[i64], m: usize| -> u8 {
        w.iter().enumerate().fold(0u8, |acc, (l, &k)| f.add_raw(acc, f.mul_raw(f.lift_raw(k), cc.a(m, l))))
    };
    let mut rows = vec![vec![0u8; n]; n];
    for j in 0..n {
        for k in 0..n {
            rows[j][k] = (0..n).fold(0u8, |acc, m| f.add_raw(acc, f.mul_raw(h_new[j][m], eval(&new_local[k], m))));
        }
    }
    let parities: Vec<bool> = new_local
        .iter()
        .map(|w| w.iter().zip(&cc.parities).filter(|(_, &p)| p).map(|(k, _)| k.rem_euclid(2)).sum::<i64>() % 2 == 1)
        .collect();
    for (j, row) in rows.iter_mut().enumerate() {
        normalize_row(f, row, j, parities[j]);
    }
    let simple_roots = new_local.iter().map(|w| state.to_original(w)).collect();
    let mut chain = state.chain.clone();
    chain.push(i);
    let name =
        format!("{}/r{}", base_name(&cc.name), chain.iter().map(|c| (c + 1).to_string()).collect::<Vec<_>>().join(","));
    let mut cartan = ConcreteCartan::new(name, cc.field.clone(), Matrix::from_rows(&rows), parities);
    cartan.bindings = cc.bindings.clone();
    Ok(BaseState { cartan, simple_roots, chain })
}

fn base_name(name: &str) -> &str {
    name.split("/r").next().unwrap_or(name)
}

/// Rescales a row: a nonzero diagonal becomes 2 (even vertex, odd characteristic)
/// or 1; otherwise the first nonzero entry becomes 1.
fn normalize_row(f: &FieldCtx, row: &mut [u8], diag: usize, odd: bool) {
    let target = if !odd && f.p() != 2 { f.lift_raw(2) } else { 1 };
    let pivot = if row[diag] != 0 { Some((row[diag], target)) } else { row.iter().find(|&&x| x != 0).map(|&x| (x, 1)) };
    if let Some((x, t)) = pivot {
        let s = f.mul_raw(t, f.inv_raw(x));
        for v in row.iter_mut() {
            *v = f.mul_raw(*v, s);
        }
    }
}

/// Canonical representative under simultaneous relabeling and admissible row
/// rescaling: parities first, then matrix entries row-major by raw value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalKey {
    pub parities: Vec<bool>,
    pub entries: Vec<u8>,
}

impl CanonicalKey {
    pub fn render(&self, f: &FieldCtx) -> String {
        let n = self.parities.len();
        let par: String = self.parities.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let rows: Vec<String> = (0..n)
            .map(|r| self.entries[r * n..(r + 1) * n].iter().map(|&x| f.format_raw(x)).collect::<Vec<_>>().join(","))
            .collect();
        format!("{par}:{}", rows.join(";"))
    }

    pub fn to_cartan(&self, name: impl Into<String>, cc: &ConcreteCartan) -> ConcreteCartan {
        let n = self.parities.len();
        let rows: Vec<Vec<u8>> = (0..n).map(|r| self.entries[r * n..(r + 1) * n].to_vec()).collect();
        ConcreteCartan::new(name, cc.field.clone(), Matrix::from_rows(&rows), self.parities.clone())
    }
}

/// Vertex colors invariant under relabeling and row rescaling: parity, the
/// normalized diagonal, then refinement by the nonzero pattern.
fn vertex_colors(cc: &ConcreteCartan, rows: &[Vec<u8>]) -> Vec<usize> {
    let n = cc.n();
    let mut sig: Vec<Vec<usize>> = (0..n).map(|i| vec![cc.parities[i] as usize, rows[i][i] as usize]).collect();
    let mut colors = rank_signatures(&sig);
    loop {
        for i in 0..n {
            let mut out: Vec<usize> = (0..n).filter(|&j| j != i && cc.a(i, j) != 0).map(|j| colors[j]).collect();
            let mut inc: Vec<usize> = (0..n).filter(|&j| j != i && cc.a(j, i) != 0).map(|j| colors[j]).collect();
            out.sort_unstable();
            inc.sort_unstable();
            let mut s = vec![colors[i], usize::MAX];
            s.extend(out);
            s.push(usize::MAX);
            s.extend(inc);
            sig[i] = s;
        }
        let next = rank_signatures(&sig);
        let classes = |c: &[usize]| c.iter().collect::<std::collections::BTreeSet<_>>().len();
        if classes(&next) == classes(&colors) {
            return next;
        }
        colors = next;
    }
}

fn rank_signatures(sig: &[Vec<usize>]) -> Vec<usize> {
    let mut distinct: Vec<&Vec<usize>> = sig.iter().collect();
    distinct.sort();
    distinct.dedup();
    sig.iter().map(|s| distinct.binary_search(&s).unwrap()).collect()
}

pub fn canonical_form(cc: &ConcreteCartan) -> CanonicalKey {
    let n = cc.n();
    let f = &*cc.field;
    let mut rows: Vec<Vec<u8>> = (0..n).map(|i| cc.matrix.row(i).to_vec()).collect();
    for (i, row) in rows.iter_mut().enumerate() {
        normalize_row(f, row, i, cc.parities[i]);
    }
    let colors = vertex_colors(cc, &rows);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| colors[i]);
    // positions grouped by color; permutations only inside groups
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match groups.last_mut() {
            Some(g) if colors[g[0]] == colors[v] => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    let parities: Vec<bool> = order.iter().map(|&v| cc.parities[v]).collect();
    let mut best: Option<Vec<u8>> = None;
    let mut perm = Vec::with_capacity(n);
    search(f, &rows, &groups, 0, &mut vec![false; n], &mut perm, &mut best);
    CanonicalKey { parities, entries: best.unwrap_or_default() }
}

fn search(
    f: &FieldCtx,
    rows: &[Vec<u8>],
    groups: &[Vec<usize>],
    g: usize,
    used: &mut Vec<bool>,
    perm: &mut Vec<usize>,
    best: &mut Option<Vec<u8>>,
) {
    let n = rows.len();
    if perm.len() == n {
        let mut key = Vec::with_capacity(n * n);
        for &r in perm.iter() {
            let mut row: Vec<u8> = perm.iter().map(|&c| rows[r][c]).collect();
            // rows with zero diagonal: the first nonzero entry of the relabeled row becomes 1
            if row[key.len() / n] == 0 {
                if let Some(&x) = row.iter().find(|&&x| x != 0) {
                    let s = f.inv_raw(x);
                    row.iter_mut().for_each(|v| *v = f.mul_raw(*v, s));
                }
            }
            key.extend(row);
            if let Some(b) = best {
                if key[..] > b[..key.len()] {
                    return;
                }
            }
        }
        if best.as_ref().is_none_or(|b| key < *b) {
            *best = Some(key);
        }
        return;
    }
    let group = &groups[g];
    let placed_in_group = group.iter().filter(|&&v| used[v]).count();
    for &v in group {
        if used[v] {
            continue;
        }
        used[v] = true;
        perm.push(v);
        let next = if placed_in_group + 1 == group.len() { g + 1 } else { g };
        search(f, rows, groups, next, used, perm, best);
        perm.pop();
        used[v] = false;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitNode {
    pub key: String,
    pub matrix: Vec<Vec<String>>,
    pub parities: String,
    /// 1-based pivots from the seed.
    pub chain: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OrbitEdge {
    pub from: usize,
    pub to: usize,
    pub pivot: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub nodes: Vec<OrbitNode>,
    pub edges: Vec<OrbitEdge>,
    /// The class limit cut the search short.
    pub truncated: bool,
    #[serde(skip)]
    pub witnesses: Vec<BaseState>,
}

impl Orbit {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("orbit serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph orbit {\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", node.key.replace('"', "\\\""));
        }
        for e in &self.edges {
            let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.pivot);
        }
        s.push_str("}\n");
        s
    }
}

pub const DEFAULT_LIMIT: usize = 512;

/// Breadth-first search over odd reflections, deduplicated by canonical key.
pub fn enumerate_bases(
    cc: &ConcreteCartan,
    limit: usize,
    limits: BuildLimits,
    exec: Execution,
) -> Result<Orbit, ReflectionError> {
    let seed = BaseState::new(cc.clone());
    let mut index: HashMap<CanonicalKey, usize> = HashMap::new();
    let mut orbit = Orbit { nodes: Vec::new(), edges: Vec::new(), truncated: false, witnesses: Vec::new() };
    let key = canonical_form(cc);
    push_node(&mut orbit, &mut index, key, seed);
    let mut frontier: VecDeque<usize> = VecDeque::from([0]);
    while !frontier.is_empty() {
        let level: Vec<usize> = frontier.drain(..).collect();
        // rebuild and reflect every witness of this level independently
        let results = par::map(exec, &level, |&node| -> Result<Vec<(usize, BaseState)>, ReflectionError> {
            let state = &orbit.witnesses[node];
            let model = build(&state.cartan, limits)?;
            reflectable(&state.cartan).into_iter().map(|i| Ok((i, odd_reflect(state, &model, i)?))).collect()
        });
        let mut edges = BTreeMap::new();
        for (&node, res) in level.iter().zip(results) {
            for (pivot, next) in res? {
                let key = canonical_form(&next.cartan);
                let to = match index.get(&key) {
                    Some(&to) => to,
                    None if orbit.nodes.len() >= limit => {
                        orbit.truncated = true;
                        continue;
                    }
                    None => {
                        let to = push_node(&mut orbit, &mut index, key, next);
                        frontier.push_back(to);
                        to
                    }
                };
                edges.insert(OrbitEdge { from: node, to, pivot: pivot + 1 }, ());
            }
        }
        orbit.edges.extend(edges.into_keys());
    }
    Ok(orbit)
}

fn push_node(
    orbit: &mut Orbit,
    index: &mut HashMap<CanonicalKey, usize>,
    key: CanonicalKey,
    state: BaseState,
) -> usize {
    let id = orbit.nodes.len();
    let f = &state.cartan.field;
    orbit.nodes.push(OrbitNode {
        key: key.render(f),
        matrix: state.cartan.matrix_rows(),
        parities: state.cartan.parity_string(),
        chain: state.chain.iter().map(|c| c + 1).collect(),
    });
    index.insert(key, id);
    orbit.witnesses.push(state);
    id
}

/// Applies `chain` (0-based pivots) from the starting base.
pub fn replay(cc: &ConcreteCartan, chain: &[usize], limits: BuildLimits) -> Result<BaseState, ReflectionError> {
    let mut state = BaseState::new(cc.clone());
    for &i in chain {
        let model = build(&state.cartan, limits)?;
        state = odd_reflect(&state, &model, i)?;
    }
    Ok(state)
}

/// Positive roots of the reflected base, expressed in the starting base.
pub fn transported_roots(state: &BaseState, model: &AlgebraModel) -> Vec<Vec<i64>> {
    model
        .spaces()
        .iter()
        .map(|sp| state.to_original(&sp.weight.0.iter().map(|&k| k as i64).collect::<Vec<_>>()))
        .collect()
}
