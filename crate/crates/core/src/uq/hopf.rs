use std::collections::BTreeMap;

use serde_json::json;

use super::algebra::{Letter, UqAlgebra, UqElement, UqMono};
use crate::exact::{QFrac, Ring};

/// Element of `U ⊗ U`.
pub type Tensor2 = BTreeMap<(UqMono, UqMono), QFrac>;
/// Element of `U ⊗ U ⊗ U`.
pub type Tensor3 = BTreeMap<(UqMono, UqMono, UqMono), QFrac>;

fn add_to<K: Ord>(t: &mut BTreeMap<K, QFrac>, k: K, c: QFrac) {
    if c.is_zero() {
        return;
    }
    match t.remove(&k) {
        Some(old) => {
            let s = old.add(&c);
            if !s.is_zero() {
                t.insert(k, s);
            }
        }
        None => {
            t.insert(k, c);
        }
    }
}

/// Coproduct, counit and antipode under the convention
/// `Δ(E_i) = E_i⊗1 + K_i⊗E_i`, `Δ(F_i) = F_i⊗K_i^{-1} + 1⊗F_i`, `Δ(K) = K⊗K`,
/// `S(E_i) = -K_i^{-1}E_i`, `S(F_i) = -F_iK_i`, `S(K) = K^{-1}`, `ε(E) = ε(F) = 0`, `ε(K) = 1`.
pub struct HopfData<'a> {
    pub alg: &'a UqAlgebra,
}

impl<'a> HopfData<'a> {
    pub fn new(alg: &'a UqAlgebra) -> Self {
        HopfData { alg }
    }

    pub fn convention() -> serde_json::Value {
        json!({
            "coproduct": {"E_i": "E_i⊗1 + K_i⊗E_i", "F_i": "F_i⊗K_i^-1 + 1⊗F_i", "K_i": "K_i⊗K_i"},
            "antipode": {"E_i": "-K_i^-1 E_i", "F_i": "-F_i K_i", "K_i": "K_i^-1"},
            "counit": {"E_i": "0", "F_i": "0", "K_i": "1"},
        })
    }

    fn tensor_mul(&self, a: &Tensor2, b: &Tensor2) -> Tensor2 {
        let u = self.alg;
        let mut out = Tensor2::new();
        for ((a1, a2), ca) in a {
            for ((b1, b2), cb) in b {
                let mut w1 = a1.word();
                w1.extend(b1.word());
                let mut w2 = a2.word();
                w2.extend(b2.word());
                let (x1, x2) = (u.normal_form(&w1), u.normal_form(&w2));
                let c = ca.mul(cb);
                for (m1, c1) in &x1.terms {
                    let c1 = c1.mul(&c);
                    for (m2, c2) in &x2.terms {
                        add_to(&mut out, (m1.clone(), m2.clone()), c1.mul(c2));
                    }
                }
            }
        }
        out
    }

    fn pure(&self, a: &UqElement, b: &UqElement) -> Tensor2 {
        let mut out = Tensor2::new();
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                add_to(&mut out, (m1.clone(), m2.clone()), c1.mul(c2));
            }
        }
        out
    }

    fn letter_coproduct(&self, l: &Letter) -> Tensor2 {
        let u = self.alg;
        let one = u.one();
        match l {
            Letter::K(w) => {
                let k = u.k(w);
                self.pure(&k, &k)
            }
            Letter::E(p) | Letter::F(p) => {
                let r = u.root(*p);
                if crate::liealg::RootSystem::height(r) > 1 {
                    // Δ is multiplicative; expand the root vector through its definition
                    let (a, b) = (u.pos_of_root[0], u.pos_of_root[1]);
                    let mk = |z: usize| if matches!(l, Letter::E(_)) { Letter::E(z) } else { Letter::F(z) };
                    let (da, db) = (self.letter_coproduct(&mk(a)), self.letter_coproduct(&mk(b)));
                    let ab = self.tensor_mul(&da, &db);
                    let ba = self.tensor_mul(&db, &da);
                    let mut out = ab;
                    let c = QFrac::q_pow(-1).neg();
                    for (k, v) in ba {
                        add_to(&mut out, k, v.mul(&c));
                    }
                    return out;
                }
                let i = r.iter().position(|&c| c == 1).unwrap();
                if matches!(l, Letter::E(_)) {
                    let e = u.e(i);
                    let mut t = self.pure(&e, &one);
                    for (k, v) in self.pure(&u.k_simple(i, 1), &e) {
                        add_to(&mut t, k, v);
                    }
                    t
                } else {
                    let f = u.f(i);
                    let mut t = self.pure(&f, &u.k_simple(i, -1));
                    for (k, v) in self.pure(&one, &f) {
                        add_to(&mut t, k, v);
                    }
                    t
                }
            }
        }
    }

    /// `Δ(x)`, extended multiplicatively over each monomial's word.
    pub fn coproduct(&self, x: &UqElement) -> Tensor2 {
        let u = self.alg;
        let unit = UqMono::one(u.n_pos(), u.rank());
        let mut out = Tensor2::new();
        for (m, c) in &x.terms {
            let mut t: Tensor2 = BTreeMap::from([((unit.clone(), unit.clone()), QFrac::from_int(1))]);
            for l in m.word() {
                t = self.tensor_mul(&t, &self.letter_coproduct(&l));
            }
            for (k, v) in t {
                add_to(&mut out, k, v.mul(c));
            }
        }
        out
    }

    pub fn counit(&self, x: &UqElement) -> QFrac {
        let mut s = QFrac::zero();
        for (m, c) in &x.terms {
            if m.length() == 0 {
                s = s.add(c);
            }
        }
        s
    }

    fn letter_antipode(&self, l: &Letter) -> UqElement {
        let u = self.alg;
        match l {
            Letter::K(w) => u.k(&w.iter().map(|c| -c).collect::<Vec<_>>()),
            Letter::E(p) | Letter::F(p) => {
                let r = u.root(*p);
                if crate::liealg::RootSystem::height(r) > 1 {
                    let (a, b) = (u.pos_of_root[0], u.pos_of_root[1]);
                    let mk = |z: usize| if matches!(l, Letter::E(_)) { Letter::E(z) } else { Letter::F(z) };
                    let (sa, sb) = (self.letter_antipode(&mk(a)), self.letter_antipode(&mk(b)));
                    // S(xy) = S(y)S(x)
                    return u.mul(&sb, &sa).sub(&u.mul(&sa, &sb).scale(&QFrac::q_pow(-1)));
                }
                let i = r.iter().position(|&c| c == 1).unwrap();
                let m1 = QFrac::from_int(-1);
                if matches!(l, Letter::E(_)) {
                    u.mul(&u.k_simple(i, -1), &u.e(i)).scale(&m1)
                } else {
                    u.mul(&u.f(i), &u.k_simple(i, 1)).scale(&m1)
                }
            }
        }
    }

    /// Antipode, anti-multiplicative over each monomial's word.
    pub fn antipode(&self, x: &UqElement) -> UqElement {
        let u = self.alg;
        let mut out = UqElement::zero();
        for (m, c) in &x.terms {
            let mut acc = u.one();
            for l in m.word() {
                acc = u.mul(&self.letter_antipode(&l), &acc);
            }
            out = out.add(&acc.scale(c));
        }
        out
    }

    fn element(&self, m: &UqMono) -> UqElement {
        UqElement::mono(m.clone(), QFrac::from_int(1))
    }

    /// `(Δ⊗id)Δ(x) - (id⊗Δ)Δ(x)`.
    pub fn coassociativity_defect(&self, x: &UqElement) -> Tensor3 {
        let d = self.coproduct(x);
        let mut out = Tensor3::new();
        for ((m1, m2), c) in &d {
            for ((a, b), v) in self.coproduct(&self.element(m1)) {
                add_to(&mut out, (a, b, m2.clone()), v.mul(c));
            }
            for ((a, b), v) in self.coproduct(&self.element(m2)) {
                add_to(&mut out, (m1.clone(), a, b), v.mul(c).neg());
            }
        }
        out
    }

    /// `(ε⊗id)Δ(x) - x` and `(id⊗ε)Δ(x) - x`.
    pub fn counit_defects(&self, x: &UqElement) -> (UqElement, UqElement) {
        let d = self.coproduct(x);
        let (mut l, mut r) = (UqElement::zero(), UqElement::zero());
        for ((m1, m2), c) in &d {
            l = l.add(&self.element(m2).scale(&self.counit(&self.element(m1)).mul(c)));
            r = r.add(&self.element(m1).scale(&self.counit(&self.element(m2)).mul(c)));
        }
        (l.sub(x), r.sub(x))
    }

    /// `m(S⊗id)Δ(x) - ε(x)1` and `m(id⊗S)Δ(x) - ε(x)1`.
    pub fn antipode_defects(&self, x: &UqElement) -> (UqElement, UqElement) {
        let u = self.alg;
        let d = self.coproduct(x);
        let eps = u.scalar(self.counit(x));
        let (mut l, mut r) = (UqElement::zero(), UqElement::zero());
        for ((m1, m2), c) in &d {
            let (x1, x2) = (self.element(m1), self.element(m2));
            l = l.add(&u.mul(&self.antipode(&x1), &x2).scale(c));
            r = r.add(&u.mul(&x1, &self.antipode(&x2)).scale(c));
        }
        (l.sub(&eps), r.sub(&eps))
    }

    /// `Δ` respects the defining relations: `Δ(nf(w)) = Π Δ(letter)` for a raw word.
    pub fn multiplicativity_defect(&self, word: &[Letter]) -> Tensor2 {
        let u = self.alg;
        let unit = UqMono::one(u.n_pos(), u.rank());
        let mut t: Tensor2 = BTreeMap::from([((unit.clone(), unit), QFrac::from_int(1))]);
        for l in word {
            t = self.tensor_mul(&t, &self.letter_coproduct(l));
        }
        let mut out = self.coproduct(&u.normal_form(word));
        for (k, v) in t {
            add_to(&mut out, k, v.neg());
        }
        out
    }

    /// Every axiom on `x` holds exactly.
    pub fn axioms_hold(&self, x: &UqElement) -> bool {
        let (c1, c2) = self.counit_defects(x);
        let (s1, s2) = self.antipode_defects(x);
        self.coassociativity_defect(x).is_empty() && c1.is_zero() && c2.is_zero() && s1.is_zero() && s2.is_zero()
    }

    /// Generators `E_i`, `F_i`, `K_i^{±1}`.
    pub fn generators(&self) -> Vec<(String, UqElement)> {
        let u = self.alg;
        let mut g = Vec::new();
        for i in 0..u.rank() {
            g.push((format!("E{}", i + 1), u.e(i)));
            g.push((format!("F{}", i + 1), u.f(i)));
            g.push((format!("K{}", i + 1), u.k_simple(i, 1)));
            g.push((format!("Kinv{}", i + 1), u.k_simple(i, -1)));
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axioms_on_generators() {
        for name in ["A1", "A2"] {
            let u = UqAlgebra::new(name).unwrap();
            let h = HopfData::new(&u);
            for (n, g) in h.generators() {
                assert!(h.axioms_hold(&g), "{name} {n}");
            }
        }
    }

    #[test]
    fn coproduct_respects_relations() {
        let u = UqAlgebra::new("A1").unwrap();
        let h = HopfData::new(&u);
        let w = [Letter::E(0), Letter::F(0), Letter::K(vec![1]), Letter::E(0)];
        assert!(h.multiplicativity_defect(&w).is_empty());
        let u2 = UqAlgebra::new("A2").unwrap();
        let h2 = HopfData::new(&u2);
        let w = [Letter::E(2), Letter::F(0), Letter::E(0), Letter::F(2)];
        assert!(h2.multiplicativity_defect(&w).is_empty());
    }

    #[test]
    fn antipode_on_a_word() {
        let u = UqAlgebra::new("A1").unwrap();
        let h = HopfData::new(&u);
        let x = u.parse_word(&["E1", "F1", "E1"]).unwrap();
        assert!(h.axioms_hold(&x));
    }
}
