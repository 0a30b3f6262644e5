//! Structure constants of the full algebra from the positive-side data.
//!
//! The negative side is never stored. It is the image of the positive side
//! under the automorphism `e_i -> f_i`, `f_i -> (-1)^{p_i} e_i`, `h_i -> -h_i`,
//! so a negative basis vector has the same coordinates as its positive
//! mirror and
//!
//! * `ad f_i` on the negative side uses the positive raising matrices,
//! * `ad e_i` on the negative side uses `(-1)^{p_i}` times the lowering matrices.
//!
//! The adjoint action of any basis vector is unfolded through its provenance
//! (`[e_i, s]`, `v^[2]`) with the super Jacobi identity and memoized per
//! (vector, source slot).

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::{AlgebraModel, Provenance, View, Weight};
use crate::field::Matrix;

/// A graded piece of the algebra: a positive root space, the span of the
/// `h_i`, or the mirror of a positive root space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Neg(usize),
    Cartan,
    Pos(usize),
}

/// A single basis element: `Pos(space, idx)`, its mirror `Neg(space, idx)`,
/// or `H(k)` for `h_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisRef {
    Pos(usize, usize),
    Neg(usize, usize),
    H(usize),
}

/// Linear combination of basis elements grouped by slot.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Element {
    pub parts: BTreeMap<Slot, Vec<u8>>,
}

impl Element {
    pub fn is_zero(&self) -> bool {
        self.parts.values().all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn part(&self, slot: Slot) -> Option<&[u8]> {
        self.parts.get(&slot).map(Vec::as_slice)
    }

    /// Coefficients on `h_1..h_n`, zero when there is no Cartan part.
    pub fn cartan_part(&self, n: usize) -> Vec<u8> {
        self.parts.get(&Slot::Cartan).cloned().unwrap_or_else(|| vec![0; n])
    }
}

type AdMap = Option<Rc<(Slot, Matrix)>>;

pub struct StructureConstants<'a> {
    view: View<'a>,
    memo: HashMap<(BasisRef, Slot), AdMap>,
}

impl<'a> StructureConstants<'a> {
    pub(crate) fn from_view(view: View<'a>) -> Self {
        StructureConstants { view, memo: HashMap::new() }
    }

    pub fn new(model: &'a AlgebraModel) -> Self {
        Self::from_view(model.view())
    }

    fn n(&self) -> usize {
        self.view.cc.n()
    }

    pub fn slot_dim(&self, s: Slot) -> usize {
        match s {
            Slot::Cartan => self.n(),
            Slot::Pos(i) | Slot::Neg(i) => self.view.spaces[i].multiplicity(),
        }
    }

    fn slot_weight(&self, s: Slot) -> Vec<i64> {
        match s {
            Slot::Cartan => vec![0; self.n()],
            Slot::Pos(i) => self.view.spaces[i].weight.0.iter().map(|&k| k as i64).collect(),
            Slot::Neg(i) => self.view.spaces[i].weight.0.iter().map(|&k| -(k as i64)).collect(),
        }
    }

    fn slot_of(&self, w: &[i64]) -> Option<Slot> {
        if w.iter().all(|&k| k == 0) {
            Some(Slot::Cartan)
        } else if w.iter().all(|&k| k >= 0) {
            self.view.lookup(&Weight(w.iter().map(|&k| k as u32).collect())).map(Slot::Pos)
        } else if w.iter().all(|&k| k <= 0) {
            self.view.lookup(&Weight(w.iter().map(|&k| (-k) as u32).collect())).map(Slot::Neg)
        } else {
            None
        }
    }

    pub fn odd(&self, b: BasisRef) -> bool {
        match b {
            BasisRef::Pos(s, i) | BasisRef::Neg(s, i) => self.view.spaces[s].basis[i].odd,
            BasisRef::H(_) => false,
        }
    }

    fn ad_e(&self, i: usize, slot: Slot) -> AdMap {
        let f = self.view.field();
        let cc = self.view.cc;
        let n = self.n();
        match slot {
            Slot::Pos(s) => {
                let t = self.view.lookup(&self.view.spaces[s].weight.plus_simple(i))?;
                let m = self.view.spaces[t].raising[i].clone()?;
                Some(Rc::new((Slot::Pos(t), m)))
            }
            Slot::Cartan => {
                // [e_i, h_k] = -A_{k i} e_i
                let mut m = Matrix::zeros(1, n);
                for k in 0..n {
                    m.set(0, k, f.neg_raw(cc.a(k, i)));
                }
                Some(Rc::new((Slot::Pos(self.view.gen_space[i]), m)))
            }
            Slot::Neg(s) => {
                let sp = &self.view.spaces[s];
                match sp.weight.as_simple() {
                    Some(k) if k == i => {
                        let mut m = Matrix::zeros(n, 1);
                        m.set(i, 0, 1);
                        Some(Rc::new((Slot::Cartan, m)))
                    }
                    Some(_) => None,
                    None => {
                        let t = self.view.lookup(&sp.weight.minus_simple(i)?)?;
                        let mut m = sp.lowering[i].clone()?;
                        m.scale(f, f.sign_raw(cc.parities[i]));
                        Some(Rc::new((Slot::Neg(t), m)))
                    }
                }
            }
        }
    }

    fn ad_f(&self, i: usize, slot: Slot) -> AdMap {
        let f = self.view.field();
        let cc = self.view.cc;
        let n = self.n();
        match slot {
            Slot::Pos(s) => {
                let sp = &self.view.spaces[s];
                match sp.weight.as_simple() {
                    Some(k) if k == i => {
                        // [f_i, e_i] = -(-1)^{p_i} h_i
                        let mut m = Matrix::zeros(n, 1);
                        m.set(i, 0, f.neg_raw(f.sign_raw(cc.parities[i])));
                        Some(Rc::new((Slot::Cartan, m)))
                    }
                    Some(_) => None,
                    None => {
                        let t = self.view.lookup(&sp.weight.minus_simple(i)?)?;
                        let m = sp.lowering[i].clone()?;
                        Some(Rc::new((Slot::Pos(t), m)))
                    }
                }
            }
            Slot::Cartan => {
                // [f_i, h_k] = A_{k i} f_i
                let mut m = Matrix::zeros(1, n);
                for k in 0..n {
                    m.set(0, k, cc.a(k, i));
                }
                Some(Rc::new((Slot::Neg(self.view.gen_space[i]), m)))
            }
            Slot::Neg(s) => {
                let t = self.view.lookup(&self.view.spaces[s].weight.plus_simple(i))?;
                let m = self.view.spaces[t].raising[i].clone()?;
                Some(Rc::new((Slot::Neg(t), m)))
            }
        }
    }

    fn ad_h(&self, k: usize, slot: Slot) -> AdMap {
        let f = self.view.field();
        let (w, neg) = match slot {
            Slot::Cartan => return None,
            Slot::Pos(s) => (&self.view.spaces[s].weight, false),
            Slot::Neg(s) => (&self.view.spaces[s].weight, true),
        };
        let mut c = self.view.eval(w, k);
        if neg {
            c = f.neg_raw(c);
        }
        if c == 0 {
            return None;
        }
        let d = self.slot_dim(slot);
        let mut m = Matrix::identity(d);
        m.scale(f, c);
        Some(Rc::new((slot, m)))
    }

    fn combine(&self, a: AdMap, b: AdMap, b_coeff: u8) -> AdMap {
        let f = self.view.field();
        match (a, b) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => {
                let mut m = b.1.clone();
                m.scale(f, b_coeff);
                Some(Rc::new((b.0, m)))
            }
            (Some(a), Some(b)) => {
                debug_assert_eq!(a.0, b.0);
                let mut m = b.1.clone();
                m.scale(f, b_coeff);
                m.add_assign(f, &a.1);
                Some(Rc::new((a.0, m)))
            }
        }
    }

    /// `ad(b)` restricted to `slot`: target slot and matrix, or `None` when zero.
    pub fn ad(&mut self, b: BasisRef, slot: Slot) -> Option<(Slot, Matrix)> {
        self.ad_rc(b, slot).map(|rc| (rc.0, rc.1.clone()))
    }

    fn ad_rc(&mut self, b: BasisRef, slot: Slot) -> AdMap {
        if let Some(hit) = self.memo.get(&(b, slot)) {
            return hit.clone();
        }
        let out = self.ad_uncached(b, slot);
        self.memo.insert((b, slot), out.clone());
        out
    }

    fn ad_uncached(&mut self, b: BasisRef, slot: Slot) -> AdMap {
        let f = self.view.field();
        let cc = self.view.cc;
        let (space, idx, neg) = match b {
            BasisRef::H(k) => return self.ad_h(k, slot),
            BasisRef::Pos(s, i) => (s, i, false),
            BasisRef::Neg(s, i) => (s, i, true),
        };
        // weight check: the target must be a root, zero, or nothing
        let mut w = self.slot_weight(slot);
        let bw = &self.view.spaces[space].weight;
        for (x, &k) in w.iter_mut().zip(&bw.0) {
            *x += if neg { -(k as i64) } else { k as i64 };
        }
        self.slot_of(&w)?;

        let wrap = |s, i| if neg { BasisRef::Neg(s, i) } else { BasisRef::Pos(s, i) };
        match self.view.spaces[space].basis[idx].provenance {
            Provenance::Generator(i) => {
                if neg {
                    self.ad_f(i, slot)
                } else {
                    self.ad_e(i, slot)
                }
            }
            Provenance::Bracket { gen, src } => {
                let src_space = self.view.lookup(&bw.minus_simple(gen).unwrap()).unwrap();
                let s = wrap(src_space, src);
                let g = wrap(self.view.gen_space[gen], 0);
                // ad [g, s] = ad g ad s - (-1)^{p(g) p(s)} ad s ad g
                let first = self.compose_rc(g, s, slot);
                let second = self.compose_rc(s, g, slot);
                let sign = f.neg_raw(f.sign_raw(cc.parities[gen] && self.odd(s)));
                self.combine(first, second, sign)
            }
            Provenance::Square { src } => {
                let half = Weight(bw.0.iter().map(|k| k / 2).collect());
                let src_space = self.view.lookup(&half).unwrap();
                let s = wrap(src_space, src);
                // ad(v^[2]) = ad(v)^2
                self.compose_rc(s, s, slot)
            }
        }
    }

    fn compose_rc(&mut self, outer: BasisRef, inner: BasisRef, slot: Slot) -> AdMap {
        let first = self.ad_rc(inner, slot)?;
        let second = self.ad_rc(outer, first.0)?;
        let m = second.1.mul(self.view.field(), &first.1);
        if m.is_zero() {
            return None;
        }
        Some(Rc::new((second.0, m)))
    }

    /// `[x, y]` for basis elements.
    pub fn bracket(&mut self, x: BasisRef, y: BasisRef) -> Element {
        let (slot, coords) = self.embed(y);
        self.apply(x, slot, &coords)
    }

    fn embed(&self, y: BasisRef) -> (Slot, Vec<u8>) {
        match y {
            BasisRef::Pos(s, i) | BasisRef::Neg(s, i) => {
                let mut v = vec![0; self.view.spaces[s].multiplicity()];
                v[i] = 1;
                let slot = if matches!(y, BasisRef::Pos(..)) { Slot::Pos(s) } else { Slot::Neg(s) };
                (slot, v)
            }
            BasisRef::H(k) => {
                let mut v = vec![0; self.n()];
                v[k] = 1;
                (Slot::Cartan, v)
            }
        }
    }

    /// `ad(x)` applied to a vector in `slot`.
    pub fn apply(&mut self, x: BasisRef, slot: Slot, coords: &[u8]) -> Element {
        let mut out = Element::default();
        if let Some(m) = self.ad_rc(x, slot) {
            let v = m.1.mul_vec(self.view.field(), coords);
            if v.iter().any(|&c| c != 0) {
                out.parts.insert(m.0, v);
            }
        }
        out
    }

    /// Bilinear extension of [`Self::bracket`] to arbitrary elements.
    pub fn bracket_elements(&mut self, x: &Element, y: &Element) -> Element {
        let f = self.view.field();
        let mut out = Element::default();
        for (&xs, xv) in &x.parts {
            for (bi, &c) in xv.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let xb = match xs {
                    Slot::Pos(s) => BasisRef::Pos(s, bi),
                    Slot::Neg(s) => BasisRef::Neg(s, bi),
                    Slot::Cartan => BasisRef::H(bi),
                };
                for (&ys, yv) in &y.parts {
                    let r = self.apply(xb, ys, yv);
                    for (slot, v) in r.parts {
                        let acc = out.parts.entry(slot).or_insert_with(|| vec![0; v.len()]);
                        for (a, b) in acc.iter_mut().zip(v) {
                            *a = f.add_raw(*a, f.mul_raw(c, b));
                        }
                    }
                }
            }
        }
        out.parts.retain(|_, v| v.iter().any(|&x| x != 0));
        out
    }

    pub fn element(&self, b: BasisRef) -> Element {
        let (slot, v) = self.embed(b);
        let mut e = Element::default();
        e.parts.insert(slot, v);
        e
    }
}
