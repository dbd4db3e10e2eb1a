use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use super::algebra::{Letter, UqAlgebra, UqElement, UqMono};
use super::hopf::HopfData;
use crate::exact::{MultiPoly, QFrac, Ring, Var};
use crate::liealg::RootSystem;
use crate::verma::Operator;

pub type QOp = Operator<QFrac>;

/// `M_{q,λ} = U ⊗_{U_P} 1_{q,λ}` for the torus Levi, truncated at depth `D`, on the
/// basis of ordered `F`-monomials applied to `v_0`. `K_i v_0 = L_i^{d_i} v_0`, `L_i = q^{λ_i}`.
pub struct QVermaModule<'a> {
    pub alg: &'a UqAlgebra,
    pub depth_cap: usize,
    pub basis: Vec<Vec<u32>>,
    pub depths: Vec<usize>,
    index: HashMap<Vec<u32>, usize>,
    letters: RefCell<HashMap<Letter, QOp>>,
    monos: RefCell<HashMap<UqMono, QOp>>,
}

impl<'a> QVermaModule<'a> {
    pub fn new(alg: &'a UqAlgebra, depth_cap: usize) -> QVermaModule<'a> {
        let heights: Vec<usize> = (0..alg.n_pos()).map(|p| RootSystem::height(alg.root(p)) as usize).collect();
        let mut basis: Vec<Vec<u32>> = vec![vec![]];
        for p in 0..alg.n_pos() {
            let mut next = Vec::new();
            for b in &basis {
                let used: usize = b.iter().zip(&heights).map(|(a, h)| *a as usize * h).sum();
                let mut a = 0u32;
                while used + a as usize * heights[p] <= depth_cap {
                    let mut c = b.clone();
                    c.push(a);
                    next.push(c);
                    a += 1;
                }
            }
            basis = next;
        }
        let depth = |b: &Vec<u32>| -> usize { b.iter().zip(&heights).map(|(a, h)| *a as usize * h).sum() };
        basis.sort_by(|a, b| depth(a).cmp(&depth(b)).then(b.cmp(a)));
        let depths = basis.iter().map(depth).collect();
        let index = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        QVermaModule {
            alg,
            depth_cap,
            basis,
            depths,
            index,
            letters: RefCell::new(HashMap::new()),
            monos: RefCell::new(HashMap::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Eigenvalue of `K_ω` on `v_0`.
    fn k_on_vacuum(&self, omega: &[i32]) -> MultiPoly {
        let mut m = MultiPoly::one();
        for (i, &w) in omega.iter().enumerate() {
            let d = self.alg.rs.symmetrizers[i] as i32;
            m = m.mul(&MultiPoly::var_pow(Var::big_l(i), d * w));
        }
        m
    }

    fn letter_op(&self, l: &Letter) -> QOp {
        if let Some(op) = self.letters.borrow().get(l) {
            return op.clone();
        }
        let u = self.alg;
        let shift: i64 = match l {
            Letter::F(p) => RootSystem::height(u.root(*p)),
            Letter::E(p) => -RootSystem::height(u.root(*p)),
            Letter::K(_) => 0,
        };
        let dcap = self.depth_cap as i64;
        let mut cols = Vec::with_capacity(self.dim());
        for b in &self.basis {
            let mut w = vec![l.clone()];
            for (p, &a) in b.iter().enumerate() {
                w.extend(std::iter::repeat(Letter::F(p)).take(a as usize));
            }
            let mut col: BTreeMap<usize, QFrac> = BTreeMap::new();
            for (m, c) in &u.normal_form(&w).terms {
                if m.e.iter().any(|&x| x > 0) {
                    continue;
                }
                if let Some(&r) = self.index.get(&m.f) {
                    let v = c.mul(&QFrac::from_poly(self.k_on_vacuum(&m.k)));
                    let cur = col.remove(&r).map_or(v.clone(), |x| x.add(&v));
                    if !cur.is_zero() {
                        col.insert(r, cur);
                    }
                }
            }
            cols.push(col);
        }
        let trusted = if shift > 0 { dcap - shift } else { dcap };
        let op = Operator::from_columns(cols, trusted, shift);
        self.letters.borrow_mut().insert(l.clone(), op.clone());
        op
    }

    pub fn mono_op(&self, m: &UqMono) -> QOp {
        if let Some(op) = self.monos.borrow().get(m) {
            return op.clone();
        }
        let mut op = Operator::identity(self.dim(), self.depth_cap as i64);
        for l in m.word() {
            op = op.compose(&self.letter_op(&l));
        }
        self.monos.borrow_mut().insert(m.clone(), op.clone());
        op
    }

    /// `φ_{q,λ}(x)`.
    pub fn phi(&self, x: &UqElement) -> QOp {
        let mut out = Operator::zero(self.dim(), self.depth_cap as i64);
        for (m, c) in &x.terms {
            out = out.add(&self.mono_op(m).scale(c));
        }
        out
    }

    /// `ad(u)A = Σ φ(u_(1)) ∘ A ∘ φ(S(u_(2)))`.
    pub fn ad(&self, hopf: &HopfData, u: &UqElement, a: &QOp) -> QOp {
        let mut out = Operator::zero(self.dim(), a.trusted);
        for ((m1, m2), c) in hopf.coproduct(u) {
            let s = hopf.antipode(&UqElement::mono(m2, QFrac::from_int(1)));
            let term = self.mono_op(&m1).compose(a).compose(&self.phi(&s));
            out = out.add(&term.scale(&c));
        }
        out
    }

    /// Columns of depth `≤ trusted` agree exactly.
    pub fn agree(&self, a: &QOp, b: &QOp) -> bool {
        let t = a.trusted.min(b.trusted);
        a.sub(b).restrict_columns(|c| self.depths[c] as i64 <= t).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_module_matches_quantum_integers() {
        let u = UqAlgebra::new("A1").unwrap();
        let m = QVermaModule::new(&u, 4);
        let e = m.phi(&u.e(0));
        // E F^2 v0 = [2][λ-1] F v0
        let l = MultiPoly::var(Var::big_l(0));
        let q = |k: i32| MultiPoly::var_pow(Var::q(), k);
        let den = q(1).sub(&q(-1));
        let linv = MultiPoly::var_pow(Var::big_l(0), -1);
        let lam_minus_1 = QFrac::new(l.mul(&q(-1)).sub(&linv.mul(&q(1))), &den);
        let expect = QFrac::q_int(2, 1).mul(&lam_minus_1);
        assert_eq!(e.entry(1, 2), expect);
        assert!(e.entry(0, 0).is_zero());
    }

    #[test]
    fn ad_is_a_homomorphism_on_generators() {
        let u = UqAlgebra::new("A1").unwrap();
        let h = HopfData::new(&u);
        let m = QVermaModule::new(&u, 5);
        let a = m.phi(&u.f(0)).add(&m.phi(&u.k_simple(0, 1)));
        for (x, y) in [(u.e(0), u.f(0)), (u.f(0), u.e(0)), (u.k_simple(0, 1), u.e(0))] {
            let lhs = m.ad(&h, &u.mul(&x, &y), &a);
            let rhs = m.ad(&h, &x, &m.ad(&h, &y, &a));
            assert!(m.agree(&lhs, &rhs));
        }
        // ad(E)(Id) = ε(E) Id = 0
        let id = Operator::identity(m.dim(), 5);
        assert!(m.ad(&h, &u.e(0), &id).restrict_columns(|c| m.depths[c] <= 4).is_zero());
    }
}
