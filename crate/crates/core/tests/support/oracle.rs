//! Brute-force reference for root multiplicities of g(A) over a prime field.
//!
//! Works inside the free associative superalgebra on e_1..e_n: the positive
//! part of the free Lie superalgebra at weight `a` is spanned by
//! supercommutators `[e_i, x]`, and `f_j` acts on words as a superderivation
//! whose value on `e_i` is `-(-1)^{p_j} delta_ij h_j`; the `h_j` is pushed to
//! the right, where it annihilates. A vector survives in g(A) iff some chain
//! of lowerings reaches height one with a nonzero coefficient, so the root
//! multiplicity is the rank of the full composite lowering map.
//!
//! Shares no code with the library: plain `i64` residues and its own
//! elimination.

use std::collections::{BTreeMap, HashMap};

type Word = Vec<u8>;
type Poly = BTreeMap<Word, i64>;

pub struct Oracle {
    p: i64,
    a: Vec<Vec<i64>>,
    par: Vec<bool>,
    phi: HashMap<Word, BTreeMap<Vec<u8>, i64>>,
}

fn md(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

fn inv(x: i64, p: i64) -> i64 {
    // p is prime: x^(p-2)
    let (mut b, mut e, mut r) = (md(x, p), p - 2, 1);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rank(rows: &mut [Vec<i64>], p: i64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, pr);
        let iv = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * iv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x = md(*x - f * y, p);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

impl Oracle {
    pub fn new(p: i64, a: Vec<Vec<i64>>, par: Vec<bool>) -> Self {
        let a = a.into_iter().map(|r| r.into_iter().map(|x| md(x, p)).collect()).collect();
        Oracle { p, a, par, phi: HashMap::new() }
    }

    fn n(&self) -> usize {
        self.par.len()
    }

    fn word_parity(&self, w: &[u8]) -> bool {
        w.iter().filter(|&&i| self.par[i as usize]).count() % 2 == 1
    }

    /// `[e_i, x] = e_i x - (-1)^{p_i |x|} x e_i` for homogeneous `x`.
    fn bracket_gen(&self, i: u8, x: &Poly) -> Poly {
        let mut out = Poly::new();
        for (w, &c) in x {
            let sign = if self.par[i as usize] && self.word_parity(w) { -1 } else { 1 };
            let mut l = vec![i];
            l.extend_from_slice(w);
            *out.entry(l).or_insert(0) += c;
            let mut r = w.clone();
            r.push(i);
            *out.entry(r).or_insert(0) -= sign * c;
        }
        out.retain(|_, c| {
            *c = md(*c, self.p);
            *c != 0
        });
        out
    }

    /// `ad f_j` on a word, with `h_j` pushed to the right and dropped.
    fn lower(&self, j: u8, w: &[u8]) -> Poly {
        let p = self.p;
        let pj = self.par[j as usize];
        let mut out = Poly::new();
        let mut passed_odd = false;
        for k in 0..w.len() {
            if w[k] == j {
                let mut c = if pj && passed_odd { -1 } else { 1 };
                // [f_j, e_j] = -(-1)^{p_j} h_j
                c *= if pj { 1 } else { -1 };
                let tail: i64 = w[k + 1..].iter().map(|&l| self.a[j as usize][l as usize]).sum();
                let c = md(c * tail, p);
                if c != 0 {
                    let mut rest = w[..k].to_vec();
                    rest.extend_from_slice(&w[k + 1..]);
                    *out.entry(rest).or_insert(0) += c;
                }
            }
            passed_odd ^= self.par[w[k] as usize];
        }
        out.retain(|_, c| {
            *c = md(*c, p);
            *c != 0
        });
        out
    }

    /// Composite lowerings of a word, keyed by the chain of `j`s and the
    /// surviving generator.
    fn phi(&mut self, w: &Word) -> BTreeMap<Vec<u8>, i64> {
        if let Some(v) = self.phi.get(w) {
            return v.clone();
        }
        let mut out = BTreeMap::new();
        if w.len() == 1 {
            out.insert(vec![w[0]], 1);
        } else {
            for j in 0..self.n() as u8 {
                for (v, c) in self.lower(j, w) {
                    for (mut key, d) in self.phi(&v) {
                        key.insert(0, j);
                        let e = out.entry(key).or_insert(0);
                        *e = md(*e + c * d, self.p);
                    }
                }
            }
            out.retain(|_, c: &mut i64| *c != 0);
        }
        self.phi.insert(w.clone(), out.clone());
        out
    }

    /// Root multiplicities of every weight with height at most `max_height`.
    pub fn multiplicities(&mut self, max_height: u32) -> BTreeMap<Vec<u32>, usize> {
        let n = self.n();
        let mut free: BTreeMap<Vec<u32>, Vec<Poly>> = BTreeMap::new();
        for i in 0..n {
            let mut k = vec![0u32; n];
            k[i] = 1;
            free.insert(k, vec![Poly::from([(vec![i as u8], 1)])]);
        }
        let mut mults = BTreeMap::new();
        for h in 1..=max_height {
            if h > 1 {
                let prev: Vec<(Vec<u32>, Vec<Poly>)> = free
                    .iter()
                    .filter(|(k, _)| k.iter().sum::<u32>() == h - 1)
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                for (k, span) in prev {
                    for i in 0..n {
                        let mut k2 = k.clone();
                        k2[i] += 1;
                        let mut new: Vec<Poly> = span.iter().map(|x| self.bracket_gen(i as u8, x)).collect();
                        new.retain(|x| !x.is_empty());
                        free.entry(k2).or_default().extend(new);
                    }
                }
                // keep a basis of the free part at this height
                let keys: Vec<Vec<u32>> = free.keys().filter(|k| k.iter().sum::<u32>() == h).cloned().collect();
                for k in keys {
                    let span = free.remove(&k).unwrap();
                    let basis = self.independent(span);
                    free.insert(k, basis);
                }
            }
            for (k, span) in free
                .iter()
                .filter(|(k, _)| k.iter().sum::<u32>() == h)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect::<Vec<_>>()
            {
                let images: Vec<BTreeMap<Vec<u8>, i64>> = span
                    .iter()
                    .map(|u| {
                        let mut acc = BTreeMap::new();
                        for (w, &c) in u {
                            for (key, d) in self.phi(w) {
                                let e = acc.entry(key).or_insert(0);
                                *e = md(*e + c * d, self.p);
                            }
                        }
                        acc
                    })
                    .collect();
                let cols: Vec<Vec<u8>> = {
                    let mut c: Vec<Vec<u8>> = images.iter().flat_map(|m| m.keys().cloned()).collect();
                    c.sort();
                    c.dedup();
                    c
                };
                let mut rows: Vec<Vec<i64>> =
                    images.iter().map(|m| cols.iter().map(|c| *m.get(c).unwrap_or(&0)).collect()).collect();
                let r = if cols.is_empty() { 0 } else { rank(&mut rows, self.p) };
                if r > 0 {
                    mults.insert(k, r);
                }
            }
        }
        mults
    }

    fn independent(&self, span: Vec<Poly>) -> Vec<Poly> {
        let mut words: Vec<Word> = span.iter().flat_map(|x| x.keys().cloned()).collect();
        words.sort();
        words.dedup();
        let mut kept: Vec<Poly> = Vec::new();
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for x in span {
            let row: Vec<i64> = words.iter().map(|w| *x.get(w).unwrap_or(&0)).collect();
            let mut trial = rows.clone();
            trial.push(row.clone());
            if rank(&mut trial, self.p) > rows.len() {
                rows.push(row);
                kept.push(x);
            }
        }
        kept
    }
}
