//! `U_q(g)` for `A1` and `A2` in the triangular normal form `F-word · K_ω · E-word`.
//!
//! Relations (with `(·,·)` the symmetric form, `K_ω = Π K_i^{ω_i}`):
//! `K_ω E_β = q^{(ω,β)} E_β K_ω`, `K_ω F_β = q^{-(ω,β)} F_β K_ω`,
//! `E_i F_j - F_j E_i = δ_ij (K_i - K_i^{-1})/(q_i - q_i^{-1})`, and for `A2` the root vector
//! `E_3 = E_1 E_2 - q^{-1} E_2 E_1` with the convex order `α_1 < α_1+α_2 < α_2`.
//! The `F` side is the image of the `E` side under `E_i ↦ F_i`, `K ↦ K^{-1}`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::exact::{MultiPoly, QFrac, Rational, Ring, Var};
use crate::liealg::RootSystem;
use crate::Error;

/// Letter of a word in `U_q`; `F` and `E` carry a PBW position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    F(usize),
    K(Vec<i32>),
    E(usize),
}

/// `F^{f} K_k E^{e}` with exponent vectors indexed by PBW position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UqMono {
    pub f: Vec<u32>,
    pub k: Vec<i32>,
    pub e: Vec<u32>,
}

impl UqMono {
    pub fn one(n_pos: usize, rank: usize) -> UqMono {
        UqMono { f: vec![0; n_pos], k: vec![0; rank], e: vec![0; n_pos] }
    }

    pub fn word(&self) -> Vec<Letter> {
        let mut w = Vec::new();
        for (p, &a) in self.f.iter().enumerate() {
            w.extend(std::iter::repeat(Letter::F(p)).take(a as usize));
        }
        if self.k.iter().any(|&x| x != 0) {
            w.push(Letter::K(self.k.clone()));
        }
        for (p, &a) in self.e.iter().enumerate() {
            w.extend(std::iter::repeat(Letter::E(p)).take(a as usize));
        }
        w
    }

    pub fn length(&self) -> u32 {
        self.f.iter().sum::<u32>() + self.e.iter().sum::<u32>()
    }

    pub fn is_one(&self) -> bool {
        self.length() == 0 && self.k.iter().all(|&x| x == 0)
    }
}

/// Linear combination of normal-form monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UqElement {
    pub terms: BTreeMap<UqMono, QFrac>,
}

impl fmt::Debug for UqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("({c})·F{:?}K{:?}E{:?}", m.f, m.k, m.e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl UqElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn mono(m: UqMono, c: QFrac) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: UqMono, c: QFrac) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (m, c) in &o.terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&QFrac::from_int(-1)))
    }

    pub fn scale(&self, c: &QFrac) -> Self {
        let mut s = Self::zero();
        for (m, x) in &self.terms {
            s.add_term(m.clone(), x.mul(c));
        }
        s
    }

    /// Weight in simple-root coordinates, if homogeneous.
    pub fn weight(&self, alg: &UqAlgebra) -> Option<Vec<i64>> {
        let mut ws = self.terms.keys().map(|m| alg.mono_weight(m));
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }

    pub fn max_length(&self) -> u32 {
        self.terms.keys().map(|m| m.length()).max().unwrap_or(0)
    }
}

fn qpow(e: i64) -> QFrac {
    QFrac::q_pow(e as i32)
}

/// `U_q(g)` with memoized normal-ordering of words.
pub struct UqAlgebra {
    pub rs: RootSystem,
    /// Root index at each PBW position.
    pub pbw: Vec<usize>,
    pub pos_of_root: Vec<usize>,
    memo: RefCell<HashMap<Vec<Letter>, UqElement>>,
}

impl UqAlgebra {
    pub fn new(name: &str) -> Result<UqAlgebra, Error> {
        let rs = RootSystem::from_name(name)?;
        let pbw = match name {
            "A1" => vec![0],
            "A2" => vec![0, 2, 1],
            _ => return Err(Error::Unsupported(format!("quantum layer implemented for A1 and A2, not {name}"))),
        };
        let mut pos_of_root = vec![0; pbw.len()];
        for (p, &r) in pbw.iter().enumerate() {
            pos_of_root[r] = p;
        }
        Ok(UqAlgebra { rs, pbw, pos_of_root, memo: RefCell::new(HashMap::new()) })
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn n_pos(&self) -> usize {
        self.pbw.len()
    }

    pub fn root(&self, pos: usize) -> &[i64] {
        &self.rs.positive_roots[self.pbw[pos]]
    }

    fn is_simple_pos(&self, pos: usize) -> Option<usize> {
        let r = self.root(pos);
        (RootSystem::height(r) == 1).then(|| r.iter().position(|&c| c == 1).unwrap())
    }

    pub fn mono_weight(&self, m: &UqMono) -> Vec<i64> {
        let mut w = vec![0i64; self.rank()];
        for p in 0..self.n_pos() {
            for (wi, b) in w.iter_mut().zip(self.root(p)) {
                *wi += (m.e[p] as i64 - m.f[p] as i64) * b;
            }
        }
        w
    }

    fn pair(&self, omega: &[i32], pos: usize) -> i64 {
        let w: Vec<i64> = omega.iter().map(|&x| x as i64).collect();
        self.rs.form(&w, self.root(pos))
    }

    fn qi_minus_inv(&self, i: usize) -> MultiPoly {
        let d = self.rs.symmetrizers[i] as i32;
        MultiPoly::var_pow(Var::q(), d).sub(&MultiPoly::var_pow(Var::q(), -d))
    }

    pub fn one(&self) -> UqElement {
        UqElement::mono(UqMono::one(self.n_pos(), self.rank()), QFrac::from_int(1))
    }

    pub fn scalar(&self, c: QFrac) -> UqElement {
        UqElement::mono(UqMono::one(self.n_pos(), self.rank()), c)
    }

    pub fn e(&self, i: usize) -> UqElement {
        self.normal_form(&[Letter::E(self.pos_of_root[i])])
    }

    pub fn f(&self, i: usize) -> UqElement {
        self.normal_form(&[Letter::F(self.pos_of_root[i])])
    }

    /// `K_ω` for `ω` in simple-root coordinates.
    pub fn k(&self, omega: &[i32]) -> UqElement {
        self.normal_form(&[Letter::K(omega.to_vec())])
    }

    pub fn k_simple(&self, i: usize, power: i32) -> UqElement {
        let mut w = vec![0; self.rank()];
        w[i] = power;
        self.k(&w)
    }

    /// Root vector at a PBW position, as a letter.
    pub fn letter_e(&self, pos: usize) -> UqElement {
        self.normal_form(&[Letter::E(pos)])
    }

    pub fn letter_f(&self, pos: usize) -> UqElement {
        self.normal_form(&[Letter::F(pos)])
    }

    fn key(l: &Letter) -> (u8, usize) {
        match l {
            Letter::F(p) => (0, *p),
            Letter::K(_) => (1, 0),
            Letter::E(p) => (2, *p),
        }
    }

    /// Definition of a non-simple root vector in terms of simple ones.
    fn expand_letter(&self, l: &Letter) -> Vec<(QFrac, Vec<Letter>)> {
        // only A2 has a non-simple root: α1 + α2 at position 1
        let (a, b) = (self.pos_of_root[0], self.pos_of_root[1]);
        let mk = |x: usize| match l {
            Letter::E(_) => Letter::E(x),
            _ => Letter::F(x),
        };
        vec![(QFrac::from_int(1), vec![mk(a), mk(b)]), (qpow(-1).neg(), vec![mk(b), mk(a)])]
    }

    /// Rewrite of an out-of-order adjacent pair, or `None` if the pair is ordered.
    fn rewrite(&self, x: &Letter, y: &Letter) -> Option<Vec<(QFrac, Vec<Letter>)>> {
        use Letter::*;
        let one = QFrac::from_int(1);
        match (x, y) {
            (K(a), K(b)) => {
                let s: Vec<i32> = a.iter().zip(b).map(|(u, v)| u + v).collect();
                let w = if s.iter().all(|&c| c == 0) { vec![] } else { vec![K(s)] };
                Some(vec![(one, w)])
            }
            (K(w), F(p)) => Some(vec![(qpow(-self.pair(w, *p)), vec![F(*p), K(w.clone())])]),
            (E(p), K(w)) => Some(vec![(qpow(-self.pair(w, *p)), vec![K(w.clone()), E(*p)])]),
            (E(p), F(r)) => match (self.is_simple_pos(*p), self.is_simple_pos(*r)) {
                (Some(i), Some(j)) => {
                    let mut out = vec![(one, vec![F(*r), E(*p)])];
                    if i == j {
                        let den = self.qi_minus_inv(i);
                        let mut kp = vec![0; self.rank()];
                        kp[i] = 1;
                        let km: Vec<i32> = kp.iter().map(|c| -c).collect();
                        out.push((QFrac::new(MultiPoly::one(), &den), vec![K(kp)]));
                        out.push((QFrac::new(MultiPoly::from_int(-1), &den), vec![K(km)]));
                    }
                    Some(out)
                }
                (None, _) => Some(
                    self.expand_letter(x)
                        .into_iter()
                        .map(|(c, mut w)| {
                            w.push(y.clone());
                            (c, w)
                        })
                        .collect(),
                ),
                (_, None) => Some(
                    self.expand_letter(y)
                        .into_iter()
                        .map(|(c, w)| {
                            let mut v = vec![x.clone()];
                            v.extend(w);
                            (c, v)
                        })
                        .collect(),
                ),
            },
            (E(p), E(r)) | (F(p), F(r)) if p > r => {
                let mk = |z: usize| if matches!(x, E(_)) { E(z) } else { F(z) };
                // positions: 0 = α1, 1 = α1+α2, 2 = α2
                Some(match (*p, *r) {
                    (1, 0) => vec![(qpow(-1), vec![mk(0), mk(1)])],
                    (2, 0) => vec![(qpow(1), vec![mk(0), mk(2)]), (qpow(1).neg(), vec![mk(1)])],
                    (2, 1) => vec![(qpow(-1), vec![mk(1), mk(2)])],
                    _ => unreachable!("rank ≤ 2"),
                })
            }
            _ => {
                if Self::key(x) > Self::key(y) {
                    unreachable!("unhandled pair {x:?} {y:?}")
                }
                None
            }
        }
    }

    fn collect(&self, word: &[Letter]) -> UqMono {
        let mut m = UqMono::one(self.n_pos(), self.rank());
        for l in word {
            match l {
                Letter::F(p) => m.f[*p] += 1,
                Letter::E(p) => m.e[*p] += 1,
                Letter::K(w) => {
                    for (a, b) in m.k.iter_mut().zip(w) {
                        *a += b;
                    }
                }
            }
        }
        m
    }

    /// PBW normal form of a word.
    pub fn normal_form(&self, word: &[Letter]) -> UqElement {
        if let Some(v) = self.memo.borrow().get(word) {
            return v.clone();
        }
        // letters first cross into F·K·E order; same-type reordering comes afterwards, so a
        // root vector is never rebuilt to the left of an F it still has to pass
        let crossing = |i: usize| Self::key(&word[i]).0 > Self::key(&word[i + 1]).0;
        let n = word.len().saturating_sub(1);
        let first = (0..n).find(|&i| crossing(i)).or_else(|| (0..n).find(|&i| self.rewrite(&word[i], &word[i + 1]).is_some()));
        let hit = first.map(|i| (i, self.rewrite(&word[i], &word[i + 1]).expect("out-of-order pair")));
        let out = match hit {
            None => {
                let k_zero = |l: &Letter| matches!(l, Letter::K(w) if w.iter().all(|&c| c == 0));
                let w: Vec<Letter> = word.iter().filter(|l| !k_zero(l)).cloned().collect();
                if w.len() != word.len() {
                    self.normal_form(&w)
                } else {
                    UqElement::mono(self.collect(word), QFrac::from_int(1))
                }
            }
            Some((i, repl)) => {
                let mut acc = UqElement::zero();
                for (c, mid) in repl {
                    let mut w = word[..i].to_vec();
                    w.extend(mid);
                    w.extend_from_slice(&word[i + 2..]);
                    acc = acc.add(&self.normal_form(&w).scale(&c));
                }
                acc
            }
        };
        self.memo.borrow_mut().insert(word.to_vec(), out.clone());
        out
    }

    pub fn mul(&self, a: &UqElement, b: &UqElement) -> UqElement {
        let mut out = UqElement::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let mut w = ma.word();
                w.extend(mb.word());
                let c = ca.mul(cb);
                for (m, x) in &self.normal_form(&w).terms {
                    out.add_term(m.clone(), x.mul(&c));
                }
            }
        }
        out
    }

    /// Product of a sequence of elements.
    pub fn product(&self, xs: &[&UqElement]) -> UqElement {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Element for a word given by generator names `E1`, `F2`, `K1`, `Kinv1`.
    pub fn parse_word(&self, names: &[&str]) -> Result<UqElement, Error> {
        let mut out = self.one();
        for n in names {
            let idx = |s: &str| -> Result<usize, Error> {
                let i: usize = s.parse().map_err(|_| Error::InvalidInput(format!("bad generator {n}")))?;
                if i == 0 || i > self.rank() {
                    return Err(Error::InvalidInput(format!("generator index out of range in {n}")));
                }
                Ok(i - 1)
            };
            let g = if let Some(r) = n.strip_prefix("Kinv") {
                self.k_simple(idx(r)?, -1)
            } else if let Some(r) = n.strip_prefix('K') {
                self.k_simple(idx(r)?, 1)
            } else if let Some(r) = n.strip_prefix('E') {
                self.e(idx(r)?)
            } else if let Some(r) = n.strip_prefix('F') {
                self.f(idx(r)?)
            } else {
                return Err(Error::InvalidInput(format!("bad generator {n}")));
            };
            out = self.mul(&out, &g);
        }
        Ok(out)
    }

    /// Evaluate coefficients at `q = q0` (used for spot checks only).
    pub fn eval_q(&self, x: &UqElement, q0: &Rational) -> BTreeMap<UqMono, Rational> {
        let a = [(Var::q(), q0.clone())];
        x.terms
            .iter()
            .filter_map(|(m, c)| {
                let n = c.numer().eval_rational(&a).ok()?;
                let d = c.denom_poly().eval_rational(&a).ok()?;
                let v = n / d;
                (!num_traits::Zero::is_zero(&v)).then(|| (m.clone(), v))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_commutation() {
        let u = UqAlgebra::new("A1").unwrap();
        let (e, f) = (u.e(0), u.f(0));
        let ef = u.mul(&e, &f);
        let fe = u.mul(&f, &e);
        let den = MultiPoly::var(Var::q()).sub(&MultiPoly::var_pow(Var::q(), -1));
        let kk = u.k_simple(0, 1).sub(&u.k_simple(0, -1)).scale(&QFrac::new(MultiPoly::one(), &den));
        assert_eq!(ef.sub(&fe), kk);
        let kek = u.product(&[&u.k_simple(0, 1), &e, &u.k_simple(0, -1)]);
        assert_eq!(kek, e.scale(&QFrac::q_pow(2)));
    }

    #[test]
    fn a2_serre_relations_vanish() {
        let u = UqAlgebra::new("A2").unwrap();
        let two = QFrac::q_pow(1).add(&QFrac::q_pow(-1));
        for (a, b) in [(0, 1), (1, 0)] {
            let (ea, eb) = (u.e(a), u.e(b));
            let s = u
                .product(&[&ea, &ea, &eb])
                .sub(&u.product(&[&ea, &eb, &ea]).scale(&two))
                .add(&u.product(&[&eb, &ea, &ea]));
            assert!(s.is_zero(), "{s:?}");
            let (fa, fb) = (u.f(a), u.f(b));
            let s = u
                .product(&[&fa, &fa, &fb])
                .sub(&u.product(&[&fa, &fb, &fa]).scale(&two))
                .add(&u.product(&[&fb, &fa, &fa]));
            assert!(s.is_zero(), "{s:?}");
        }
    }

    #[test]
    fn associativity_on_mixed_words() {
        let u = UqAlgebra::new("A2").unwrap();
        let xs = [u.e(0), u.f(1), u.e(1), u.f(0), u.k_simple(1, -1)];
        for a in &xs {
            for b in &xs {
                for c in &xs {
                    assert_eq!(u.mul(&u.mul(a, b), c), u.mul(a, &u.mul(b, c)));
                }
            }
        }
    }
}
