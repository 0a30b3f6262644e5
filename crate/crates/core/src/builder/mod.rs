//! Height-by-height construction of the positive part of g(A).
//!
//! At each height every candidate `[e_i, v]` (and, in characteristic 2, every
//! square `v^[2]` of an odd vector at half the weight) is lowered by all
//! `f_j`. Lower heights are already radical-free, so a candidate is radical
//! exactly when all of its lowerings vanish; the surviving candidates are
//! chosen greedily and the rest are written in terms of them, which gives the
//! raising maps `ad(e_i)` needed one height up.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::ConcreteCartan;
use crate::field::linalg::{Echelon, Reduction};
use crate::field::{FieldCtx, Matrix};
use crate::par::{self, Execution};

mod structure;

pub use structure::{BasisRef, Element, Slot, StructureConstants};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Weight(pub Vec<u32>);

impl Weight {
    pub fn simple(n: usize, i: usize) -> Weight {
        let mut v = vec![0; n];
        v[i] = 1;
        Weight(v)
    }

    pub fn height(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn plus_simple(&self, i: usize) -> Weight {
        let mut v = self.0.clone();
        v[i] += 1;
        Weight(v)
    }

    pub fn minus_simple(&self, i: usize) -> Option<Weight> {
        let mut v = self.0.clone();
        v[i] = v[i].checked_sub(1)?;
        Some(Weight(v))
    }

    pub fn doubled(&self) -> Weight {
        Weight(self.0.iter().map(|k| 2 * k).collect())
    }

    pub fn parity(&self, parities: &[bool]) -> bool {
        self.0.iter().zip(parities).filter(|(_, &p)| p).map(|(k, _)| k).sum::<u32>() % 2 == 1
    }

    /// Simple generator index when the height is 1.
    pub fn as_simple(&self) -> Option<usize> {
        (self.height() == 1).then(|| self.0.iter().position(|&k| k == 1).unwrap())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| if k == 1 { format!("a{}", i + 1) } else { format!("{k}a{}", i + 1) })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// How a basis vector was produced. Source indices refer to the basis of the
/// space at `weight - alpha_gen` (brackets) or `weight / 2` (squares).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Provenance {
    Generator(usize),
    Bracket { gen: usize, src: usize },
    Square { src: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisVector {
    pub provenance: Provenance,
    pub odd: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSpace {
    pub weight: Weight,
    pub odd: bool,
    pub basis: Vec<BasisVector>,
    /// `lowering[j]`: matrix of `ad f_j` into the space at `weight - alpha_j`
    /// (rows: target basis, columns: this basis). `None` at height 1 and when
    /// the target is not a root.
    pub lowering: Vec<Option<Matrix>>,
    /// `raising[i]`: matrix of `ad e_i` from the space at `weight - alpha_i`
    /// into this one.
    pub raising: Vec<Option<Matrix>>,
}

impl RootSpace {
    pub fn height(&self) -> u32 {
        self.weight.height()
    }

    pub fn multiplicity(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BuildLimits {
    pub max_height: u32,
    pub max_mult: usize,
}

impl Default for BuildLimits {
    fn default() -> Self {
        BuildLimits { max_height: 64, max_mult: 16 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("root spaces persist beyond height {max_height} (infinite-dimensional or mis-entered matrix)")]
    HeightLimit { max_height: u32 },
    #[error("multiplicity {mult} at weight {weight} exceeds the limit {max_mult}")]
    MultiplicityLimit { weight: Weight, mult: usize, max_mult: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CartanDims {
    pub n: usize,
    pub rank: usize,
    pub dim_h: usize,
    pub corank: usize,
}

/// `dim h = 2n - rank A`.
pub fn cartan_dims(cc: &ConcreteCartan) -> CartanDims {
    let n = cc.n();
    let rank = cc.matrix.rank(&cc.field);
    CartanDims { n, rank, dim_h: 2 * n - rank, corank: n - rank }
}

#[derive(Debug, Clone)]
pub struct AlgebraModel {
    pub cartan: ConcreteCartan,
    pub dims: CartanDims,
    pub limits: BuildLimits,
    /// Whether construction stopped at `limits.max_height` without closing.
    pub truncated: bool,
    spaces: Vec<RootSpace>,
    index: HashMap<Weight, usize>,
    gen_space: Vec<usize>,
}

/// Result of `ad f_j` on a positive vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lowered {
    Zero,
    /// `[f_j, e_j] = c * h_j`.
    Cartan(u8),
    Vector {
        space: usize,
        coords: Vec<u8>,
    },
}

/// Candidate for a basis vector at a new weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Candidate {
    Bracket { gen: usize, src_space: usize, src: usize },
    Square { src_space: usize, src: usize },
}

/// Read-only view over the spaces built so far.
#[derive(Clone, Copy)]
pub(crate) struct View<'a> {
    pub cc: &'a ConcreteCartan,
    pub spaces: &'a [RootSpace],
    pub index: &'a HashMap<Weight, usize>,
    pub gen_space: &'a [usize],
}

impl<'a> View<'a> {
    pub fn field(&self) -> &'a FieldCtx {
        &self.cc.field
    }

    pub fn lookup(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// `beta(h_i) = sum_m k_m A_{i m}`.
    pub fn eval(&self, w: &Weight, i: usize) -> u8 {
        let f = self.field();
        w.0.iter().enumerate().fold(0, |acc, (m, &k)| {
            let km = f.lift_raw(k as i64);
            f.add_raw(acc, f.mul_raw(km, self.cc.a(i, m)))
        })
    }

    /// Lowering `f_j` of a candidate at `alpha` into the space `target`.
    pub fn lower_candidate(
        &self,
        cand: Candidate,
        j: usize,
        target: usize,
        sc: &mut Option<StructureConstants<'a>>,
    ) -> Vec<u8> {
        let f = self.field();
        let cc = self.cc;
        let t = &self.spaces[target];
        let mut out = vec![0u8; t.multiplicity()];
        match cand {
            Candidate::Bracket { gen: i, src_space, src } => {
                let beta = &self.spaces[src_space].weight;
                let pi = cc.parities[i];
                let pj = cc.parities[j];
                if j == i {
                    debug_assert_eq!(target, src_space);
                    // -(-1)^{p_i} beta(h_i) v
                    let c = f.mul_raw(f.neg_raw(f.sign_raw(pi)), self.eval(beta, i));
                    out[src] = f.add_raw(out[src], c);
                }
                match beta.as_simple() {
                    Some(k) => {
                        if j == k {
                            // (-1)^{p_i p_j} (-1)^{p_k} A_{k i} e_i
                            let s = f.mul_raw(f.sign_raw(pi && pj), f.sign_raw(cc.parities[k]));
                            out[0] = f.add_raw(out[0], f.mul_raw(s, cc.a(k, i)));
                        }
                    }
                    None => {
                        if beta.minus_simple(j).and_then(|w| self.lookup(&w)).is_none() {
                            return out;
                        }
                        let low = self.spaces[src_space].lowering[j].as_ref().expect("lowering into a root");
                        let w = low.column(src);
                        let raise = t.raising[i].as_ref().expect("raising from a root");
                        let r = raise.mul_vec(f, &w);
                        let s = f.sign_raw(pi && pj);
                        for (o, x) in out.iter_mut().zip(r) {
                            *o = f.add_raw(*o, f.mul_raw(s, x));
                        }
                    }
                }
            }
            Candidate::Square { src_space, src } => {
                let beta = &self.spaces[src_space].weight;
                match beta.as_simple() {
                    Some(k) => {
                        if j == k {
                            out[0] = f.add_raw(out[0], cc.a(k, k));
                        }
                    }
                    None => {
                        let Some(sspace) = beta.minus_simple(j).and_then(|w| self.lookup(&w)) else {
                            return out;
                        };
                        let low = self.spaces[src_space].lowering[j].as_ref().expect("lowering into a root");
                        let w = low.column(src);
                        // [[f_j, v], v] = [v, [f_j, v]] in characteristic 2
                        let sc = sc.get_or_insert_with(|| StructureConstants::from_view(*self));
                        if let Some((slot, m)) = sc.ad(BasisRef::Pos(src_space, src), Slot::Pos(sspace)) {
                            debug_assert_eq!(slot, Slot::Pos(target));
                            let r = m.mul_vec(f, &w);
                            for (o, x) in out.iter_mut().zip(r) {
                                *o = f.add_raw(*o, x);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

struct NewSpace {
    weight: Weight,
    odd: bool,
    basis: Vec<BasisVector>,
    lowering: Vec<Option<Matrix>>,
    raising: Vec<Option<Matrix>>,
}

pub fn build(cc: &ConcreteCartan, limits: BuildLimits) -> Result<AlgebraModel, BuildError> {
    build_with(cc, limits, Execution::default())
}

pub fn build_with(cc: &ConcreteCartan, limits: BuildLimits, exec: Execution) -> Result<AlgebraModel, BuildError> {
    construct(cc, limits, exec, false)
}

/// Builds every root space up to `max_height` and stops there without error.
pub fn build_truncated(cc: &ConcreteCartan, limits: BuildLimits, exec: Execution) -> Result<AlgebraModel, BuildError> {
    construct(cc, limits, exec, true)
}

fn construct(
    cc: &ConcreteCartan,
    limits: BuildLimits,
    exec: Execution,
    truncate: bool,
) -> Result<AlgebraModel, BuildError> {
    let n = cc.n();
    let char2 = cc.field.p() == 2;
    let dims = cartan_dims(cc);

    let mut spaces: Vec<RootSpace> = Vec::new();
    let mut index: HashMap<Weight, usize> = HashMap::new();
    let mut by_height: Vec<Vec<usize>> = vec![Vec::new()];

    let mut simple: Vec<Weight> = (0..n).map(|i| Weight::simple(n, i)).collect();
    simple.sort();
    let mut gen_space = vec![0; n];
    let mut first = Vec::new();
    for w in simple {
        let i = w.as_simple().unwrap();
        gen_space[i] = spaces.len();
        index.insert(w.clone(), spaces.len());
        first.push(spaces.len());
        spaces.push(RootSpace {
            weight: w,
            odd: cc.parities[i],
            basis: vec![BasisVector { provenance: Provenance::Generator(i), odd: cc.parities[i] }],
            lowering: vec![None; n],
            raising: vec![None; n],
        });
    }
    by_height.push(first);

    let mut truncated = false;
    let mut h: u32 = 2;
    loop {
        let top = by_height.len() as u32 - 1;
        let pending_square = char2 && spaces.iter().any(|s| s.odd && 2 * s.height() >= h);
        if by_height[top as usize].is_empty() && !pending_square {
            break;
        }

        let mut cands: BTreeMap<Weight, Vec<Candidate>> = BTreeMap::new();
        for &s in &by_height[(h - 1) as usize] {
            let sp = &spaces[s];
            for i in 0..n {
                let list = cands.entry(sp.weight.plus_simple(i)).or_default();
                for src in 0..sp.multiplicity() {
                    list.push(Candidate::Bracket { gen: i, src_space: s, src });
                }
            }
        }
        for list in cands.values_mut() {
            list.sort_by_key(|c| match *c {
                Candidate::Bracket { gen, src_space, src } => (gen, src_space, src),
                Candidate::Square { .. } => unreachable!(),
            });
        }
        if char2 && h.is_multiple_of(2) {
            for &s in by_height.get((h / 2) as usize).into_iter().flatten() {
                let sp = &spaces[s];
                if !sp.odd {
                    continue;
                }
                let list = cands.entry(sp.weight.doubled()).or_default();
                for src in 0..sp.multiplicity() {
                    list.push(Candidate::Square { src_space: s, src });
                }
            }
        }

        let work: Vec<(Weight, Vec<Candidate>)> = cands.into_iter().collect();
        let view = View { cc, spaces: &spaces, index: &index, gen_space: &gen_space };
        let results = par::map(exec, &work, |(w, list)| reduce_weight(view, w, list));

        if h > limits.max_height && results.iter().any(Option::is_some) {
            if truncate {
                truncated = true;
                break;
            }
            return Err(BuildError::HeightLimit { max_height: limits.max_height });
        }
        let mut level = Vec::new();
        for ns in results.into_iter().flatten() {
            if ns.basis.len() > limits.max_mult {
                return Err(BuildError::MultiplicityLimit {
                    weight: ns.weight,
                    mult: ns.basis.len(),
                    max_mult: limits.max_mult,
                });
            }
            index.insert(ns.weight.clone(), spaces.len());
            level.push(spaces.len());
            spaces.push(RootSpace {
                weight: ns.weight,
                odd: ns.odd,
                basis: ns.basis,
                lowering: ns.lowering,
                raising: ns.raising,
            });
        }
        by_height.push(level);
        h += 1;
    }
    while by_height.last().is_some_and(|l| l.is_empty()) {
        by_height.pop();
    }

    Ok(AlgebraModel { cartan: cc.clone(), dims, limits, truncated, spaces, index, gen_space })
}

fn reduce_weight(view: View<'_>, alpha: &Weight, cands: &[Candidate]) -> Option<NewSpace> {
    let f = view.field();
    let n = view.cc.n();
    let targets: Vec<(usize, usize)> =
        (0..n).filter_map(|j| alpha.minus_simple(j).and_then(|w| view.lookup(&w)).map(|t| (j, t))).collect();
    let width: usize = targets.iter().map(|&(_, t)| view.spaces[t].multiplicity()).sum();

    let mut sc = None;
    let mut ech = Echelon::new(width);
    let mut stacked: Vec<Vec<u8>> = Vec::new();
    let mut basis: Vec<BasisVector> = Vec::new();
    let mut coords: Vec<Vec<u8>> = Vec::with_capacity(cands.len());
    let odd = alpha.parity(&view.cc.parities);

    for &c in cands {
        let mut v = Vec::with_capacity(width);
        for &(j, t) in &targets {
            v.extend(view.lower_candidate(c, j, t, &mut sc));
        }
        match ech.insert(f, &v) {
            Reduction::Independent(k) => {
                let mut e = vec![0u8; k + 1];
                e[k] = 1;
                coords.push(e);
                stacked.push(v);
                let provenance = match c {
                    Candidate::Bracket { gen, src, .. } => Provenance::Bracket { gen, src },
                    Candidate::Square { src, .. } => Provenance::Square { src },
                };
                basis.push(BasisVector { provenance, odd });
            }
            Reduction::Dependent(combo) => coords.push(combo),
        }
    }
    if basis.is_empty() {
        return None;
    }
    let mult = basis.len();
    for c in &mut coords {
        c.resize(mult, 0);
    }

    let mut lowering = vec![None; n];
    let mut offset = 0;
    for &(j, t) in &targets {
        let d = view.spaces[t].multiplicity();
        let mut m = Matrix::zeros(d, mult);
        for (b, v) in stacked.iter().enumerate() {
            for r in 0..d {
                m.set(r, b, v[offset + r]);
            }
        }
        offset += d;
        lowering[j] = Some(m);
    }

    let mut raising: Vec<Option<Matrix>> = vec![None; n];
    for (i, slot) in raising.iter_mut().enumerate() {
        let Some(src_space) = alpha.minus_simple(i).and_then(|w| view.lookup(&w)) else { continue };
        let mut m = Matrix::zeros(mult, view.spaces[src_space].multiplicity());
        for (c, co) in cands.iter().zip(&coords) {
            if let Candidate::Bracket { gen, src, .. } = *c {
                if gen == i {
                    for (r, &x) in co.iter().enumerate() {
                        m.set(r, src, x);
                    }
                }
            }
        }
        *slot = Some(m);
    }

    Some(NewSpace { weight: alpha.clone(), odd, basis, lowering, raising })
}

impl AlgebraModel {
    pub(crate) fn view(&self) -> View<'_> {
        View { cc: &self.cartan, spaces: &self.spaces, index: &self.index, gen_space: &self.gen_space }
    }

    pub fn n(&self) -> usize {
        self.cartan.n()
    }

    pub fn field(&self) -> &FieldCtx {
        &self.cartan.field
    }

    /// Positive root spaces in construction order (by height, then weight).
    pub fn spaces(&self) -> &[RootSpace] {
        &self.spaces
    }

    pub fn space(&self, w: &Weight) -> Option<&RootSpace> {
        self.index.get(w).map(|&i| &self.spaces[i])
    }

    pub fn space_index(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn generator_space(&self, i: usize) -> usize {
        self.gen_space[i]
    }

    pub fn n_positive(&self) -> usize {
        self.spaces.iter().map(RootSpace::multiplicity).sum()
    }

    pub fn max_height(&self) -> u32 {
        self.spaces.last().map_or(0, RootSpace::height)
    }

    /// `beta(h_i)` as a raw field value.
    pub fn eval(&self, w: &Weight, i: usize) -> u8 {
        self.view().eval(w, i)
    }

    /// Cartan coordinates of `[x, omega(x)]` for the first basis vector of `space`.
    pub fn coroot(&self, sc: &mut StructureConstants<'_>, space: usize) -> Vec<u8> {
        sc.apply(BasisRef::Pos(space, 0), Slot::Neg(space), &[1]).cartan_part(self.n())
    }

    pub fn structure_constants(&self) -> StructureConstants<'_> {
        StructureConstants::from_view(self.view())
    }

    /// `ad f_j` applied to basis vector `idx` of `space`.
    pub fn lower(&self, j: usize, space: usize, idx: usize) -> Lowered {
        let sp = &self.spaces[space];
        if let Some(i) = sp.weight.as_simple() {
            if i != j {
                return Lowered::Zero;
            }
            // [f_i, e_i] = -(-1)^{p_i} h_i
            let f = self.field();
            return Lowered::Cartan(f.neg_raw(f.sign_raw(self.cartan.parities[i])));
        }
        match (&sp.lowering[j], sp.weight.minus_simple(j).and_then(|w| self.space_index(&w))) {
            (Some(m), Some(t)) => {
                let coords = m.column(idx);
                if coords.iter().all(|&x| x == 0) {
                    Lowered::Zero
                } else {
                    Lowered::Vector { space: t, coords }
                }
            }
            _ => Lowered::Zero,
        }
    }

    /// `ad f_j` applied to a candidate that may or may not be a basis vector.
    pub fn lower_candidate(&self, j: usize, at: &Weight, cand: Candidate) -> Lowered {
        let Some(target) = at.minus_simple(j).and_then(|w| self.space_index(&w)) else {
            return Lowered::Zero;
        };
        let mut sc = None;
        let coords = self.view().lower_candidate(cand, j, target, &mut sc);
        if coords.iter().all(|&x| x == 0) {
            Lowered::Zero
        } else {
            Lowered::Vector { space: target, coords }
        }
    }
}
